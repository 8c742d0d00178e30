"""Random great-sphere arrangements on S^d.

The normals of n great-(d-1)-spheres and a point p are drawn uniformly
from S^d.  q_k is the probability that exactly k of the spheres separate
p from the south pole s = (0, ..., 0, -1).  A sphere separates two points
at angle phi with probability phi/pi, and the angle of a uniform point
to s has density rho_d sin^(d-1)(phi), which gives

    q_k = rho_d C(n, k) int_0^pi sin^(d-1)(phi) (phi/pi)^k (1 - phi/pi)^(n-k) dphi.

The estimators below draw in independent chunks; chunk c uses the
numpy substream ``SeedSequence(seed, spawn_key=(c,))`` so results depend
on (seed, chunks) and not on the number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import BudgetError, PreconditionError, RangeError
from .quadrature import DEFAULT_BUDGET, DEFAULT_TOL, adaptive_simpson
from .sphere_core import EPS_ON, EPS_RANK, kernel_vectors, sample_unit_vectors

UINT64_MAX = 2**64 - 1
DEFAULT_OP_BUDGET = 10**10
_BATCH = 1 << 15


def rho(d: int) -> float:
    """Ratio of the (d-1)-sphere area to the d-sphere area."""
    if d < 1:
        raise PreconditionError("d must be at least 1")
    return math.exp(math.lgamma((d + 1) / 2) - math.lgamma(d / 2)) / math.sqrt(math.pi)


def rising_factorial(a: int, b: int) -> int:
    """a (a+1) ... (a+b-1); raises OverflowError past 2**64 - 1."""
    if a < 0 or b < 0:
        raise PreconditionError("rising_factorial needs non-negative integers")
    out = 1
    for i in range(b):
        out *= a + i
        if out > UINT64_MAX:
            raise OverflowError(f"rising factorial ({a})^({b}) exceeds 64 bits")
    return out


def log_rising_factorial(a: float, b: int) -> float:
    if b == 0:
        return 0.0
    if a <= 0:
        return -math.inf
    return math.lgamma(a + b) - math.lgamma(a)


def log_binomial(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def beta_moment(a: int, b: int) -> float:
    """int_0^1 t^a (1-t)^b dt = a! b! / (a+b+1)!, evaluated in log space."""
    if a < 0 or b < 0:
        raise PreconditionError("beta_moment needs non-negative integers")
    return math.exp(math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))


def beta_moment_exact(a: int, b: int) -> Fraction:
    return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 1))


def qk_integrand(n: int, k: int, d: int):
    """Vectorized integrand of q_k including rho and the binomial factor."""
    log_front = math.log(rho(d)) + log_binomial(n, k)

    def f(phi: np.ndarray) -> np.ndarray:
        t = phi / math.pi
        with np.errstate(divide="ignore", invalid="ignore"):
            log_val = np.full(phi.shape, log_front)
            if d > 1:
                log_val = log_val + (d - 1) * np.log(np.sin(phi))
            if k:
                log_val = log_val + k * np.log(t)
            if n - k:
                log_val = log_val + (n - k) * np.log1p(-t)
        out = np.exp(log_val)
        out[~np.isfinite(log_val)] = 0.0
        return out

    return f


def qk_exact(n: int, k: int, d: int, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> float:
    """q_k by adaptive quadrature to absolute tolerance `tol`."""
    if not 0 <= k <= n:
        raise PreconditionError(f"need 0 <= k <= n, got k={k}, n={n}")
    if d < 1:
        raise PreconditionError("d must be at least 1")
    val = adaptive_simpson(qk_integrand(n, k, d), 0.0, math.pi, tol=tol, budget=budget)
    return min(1.0, max(0.0, val))


def qk_bounds(n: int, k: int, d: int) -> tuple[float, float]:
    """Closed-form (lower, upper) bounds on q_k, valid for k <= n/2."""
    if not 0 <= k or 2 * k > n:
        raise RangeError(f"bounds hold for 0 <= k <= n/2, got k={k}, n={n}")
    r = rho(d)
    log_lower = (
        (d - 1) * math.log(2)
        + math.log(r * math.pi)
        + log_rising_factorial(k + 1, d - 1)
        + log_rising_factorial(n - k + 1, d - 1)
        - log_rising_factorial(n + 1, 2 * d - 1)
    )
    upper_a = r * math.pi / (n + 1)
    upper_b = math.exp(
        math.log(r) + d * math.log(math.pi) + log_rising_factorial(k + 1, d - 1) - log_rising_factorial(n + 1, d)
    )
    return math.exp(log_lower), min(upper_a, upper_b)


@dataclass(frozen=True)
class QkRow:
    k: int
    q_exact: float
    q_lower: Optional[float]
    q_upper: Optional[float]
    q_mc: Optional[float] = None
    stderr: Optional[float] = None


@dataclass(frozen=True)
class QkTable:
    d: int
    n: int
    rows: tuple[QkRow, ...]


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def chunk_sizes(samples: int, chunks: int) -> list[int]:
    base, extra = divmod(samples, chunks)
    return [base + (1 if c < extra else 0) for c in range(chunks)]


def _run_chunks(worker, sizes, seed, threads):
    jobs = [(seed, c, s) for c, s in enumerate(sizes)]
    if threads <= 1:
        return [worker(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda j: worker(*j), jobs))


def _south_signs(normals: np.ndarray) -> np.ndarray:
    # <u, s> = -u_d
    return -normals[..., -1]


def _qk_chunk(n: int, d: int, seed: int, chunk: int, size: int) -> np.ndarray:
    rng = chunk_rng(seed, chunk)
    hist = np.zeros(n + 1, dtype=np.int64)
    remaining = size
    while remaining:
        b = min(remaining, _BATCH)
        normals = sample_unit_vectors(d, b * n, rng).reshape(b, n, d + 1)
        p = sample_unit_vectors(d, b, rng)
        tp = np.einsum("bij,bj->bi", normals, p)
        ts = _south_signs(normals)
        ok = np.all((np.abs(tp) > EPS_ON) & (np.abs(ts) > EPS_ON), axis=1)
        k = np.count_nonzero((tp > 0) != (ts > 0), axis=1)[ok]
        hist += np.bincount(k, minlength=n + 1)
        remaining -= int(ok.sum())
    return hist


def mc_qk(n: int, d: int, samples: int, seed: int = 0, chunks: int = 16, threads: int = 1):
    """Empirical distribution of the separation count and its standard errors.

    Returns ``(q_hat, stderr)`` as arrays indexed by k = 0..n.
    """
    if samples < 1 or chunks < 1:
        raise PreconditionError("samples and chunks must be positive")
    if n < 0 or d < 1:
        raise PreconditionError("need n >= 0 and d >= 1")
    sizes = chunk_sizes(samples, chunks)
    worker = lambda s, c, size: _qk_chunk(n, d, s, c, size)  # noqa: E731
    hist = np.zeros(n + 1, dtype=np.int64)
    for h in _run_chunks(worker, sizes, seed, threads):
        hist += h
    q_hat = hist / samples
    return q_hat, np.sqrt(q_hat * (1 - q_hat) / samples)


def qk_table(
    n: int,
    d: int,
    kmax: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    samples: Optional[int] = None,
    seed: int = 0,
    chunks: int = 16,
    threads: int = 1,
) -> QkTable:
    kmax = n if kmax is None else min(kmax, n)
    mc = mc_qk(n, d, samples, seed, chunks, threads) if samples else None
    rows = []
    for k in range(kmax + 1):
        lo, up = qk_bounds(n, k, d) if 2 * k <= n else (None, None)
        rows.append(
            QkRow(
                k,
                qk_exact(n, k, d, tol),
                lo,
                up,
                None if mc is None else float(mc[0][k]),
                None if mc is None else float(mc[1][k]),
            )
        )
    return QkTable(d, n, tuple(rows))


@dataclass(frozen=True)
class LevelEstimate:
    d: int
    m: int
    k: int
    mc_mean: float
    mc_stderr: float
    analytic: float

    @property
    def ratio(self) -> float:
        """mc_mean / (k+1)^(d-1), the quantity that stays bounded in k."""
        return self.mc_mean / (self.k + 1) ** (self.d - 1)


@dataclass(frozen=True)
class LevelRun:
    rows: tuple[LevelEstimate, ...]
    overflow_mean: float  # mean number of vertices with level > kmax
    samples: int


def default_kmax(m: int, d: int) -> int:
    free = m - d
    return 2 * math.ceil(free / 2)


def analytic_level(m: int, d: int, k: int, tol: float = DEFAULT_TOL) -> float:
    """Expected number of vertices at level k: 2 C(m, d) q_k(m - d)."""
    n = m - d
    if k > n:
        return 0.0
    return 2 * math.comb(m, d) * qk_exact(n, k, d, tol)


def _level_chunk(m: int, d: int, subsets: np.ndarray, seed: int, chunk: int, size: int):
    rng = chunk_rng(seed, chunk)
    n_free = m - d
    t = subsets.shape[0]
    own = np.zeros((t, m), dtype=bool)
    own[np.arange(t)[:, None], subsets] = True
    total = np.zeros(n_free + 1, dtype=np.int64)
    total_sq = np.zeros(n_free + 1, dtype=np.int64)
    remaining = size
    batch = max(1, _BATCH // max(1, t))
    while remaining:
        b = min(remaining, batch)
        normals = sample_unit_vectors(d, b * m, rng).reshape(b, m, d + 1)
        w = kernel_vectors(normals[:, subsets, :])  # (b, t, d+1)
        norm = np.linalg.norm(w, axis=-1)
        good = np.all(norm > EPS_RANK, axis=1)
        w = w / np.where(norm > 0, norm, 1.0)[..., None]
        dots = np.einsum("btj,bij->bti", w, normals)
        ts = _south_signs(normals)
        good &= np.all((np.abs(dots) > EPS_ON) | own[None], axis=(1, 2))
        good &= np.all(np.abs(ts) > EPS_ON, axis=1)
        sep = ((dots > 0) != (ts[:, None, :] > 0)) & ~own[None]
        phi = sep.sum(axis=2)[good]  # (g, t) level of the vertex w
        phi_anti = n_free - phi  # its antipode flips every free side
        counts = np.zeros((phi.shape[0], n_free + 1), dtype=np.int64)
        rows = np.repeat(np.arange(phi.shape[0]), t)
        np.add.at(counts, (rows, phi.ravel()), 1)
        np.add.at(counts, (rows, phi_anti.ravel()), 1)
        total += counts.sum(axis=0)
        total_sq += (counts**2).sum(axis=0)
        remaining -= int(good.sum())
    return total, total_sq


def mc_level(
    m: int,
    d: int,
    samples: int,
    seed: int = 0,
    chunks: int = 16,
    threads: int = 1,
    kmax: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_OP_BUDGET,
) -> LevelRun:
    """Monte Carlo k-level sizes of random arrangements of m great spheres.

    The level of a vertex is the number of the other m - d spheres that
    separate it from the south pole.
    """
    if d < 2 or m <= d:
        raise PreconditionError(f"need d >= 2 and m > d, got m={m}, d={d}")
    if samples < 1 or chunks < 1:
        raise PreconditionError("samples and chunks must be positive")
    ops = math.comb(m, d) * m * samples
    if ops > budget:
        raise BudgetError(f"C({m},{d})*{m}*{samples} = {ops} exceeds the budget {budget}")
    kmax = default_kmax(m, d) if kmax is None else kmax
    subsets = np.array(list(combinations(range(m), d)), dtype=np.int64)
    worker = lambda s, c, size: _level_chunk(m, d, subsets, s, c, size)  # noqa: E731
    n_free = m - d
    total = np.zeros(n_free + 1, dtype=np.int64)
    total_sq = np.zeros(n_free + 1, dtype=np.int64)
    for t, t2 in _run_chunks(worker, chunk_sizes(samples, chunks), seed, threads):
        total += t
        total_sq += t2
    mean = total / samples
    var = np.maximum(total_sq / samples - mean**2, 0.0) * samples / max(samples - 1, 1)
    stderr = np.sqrt(var / samples)
    rows = []
    for k in range(kmax + 1):
        in_range = k <= n_free
        rows.append(
            LevelEstimate(
                d,
                m,
                k,
                float(mean[k]) if in_range else 0.0,
                float(stderr[k]) if in_range else 0.0,
                analytic_level(m, d, k, tol),
            )
        )
    overflow = float(total[kmax + 1 :].sum() / samples) if kmax < n_free else 0.0
    return LevelRun(tuple(rows), overflow, samples)


def level_envelope(m: int, d: int, k: int) -> tuple[float, float]:
    """Bounds on analytic_level(m, d, k) / (k+1)^(d-1) implied by qk_bounds."""
    lo, up = qk_bounds(m - d, k, d)
    scale = 2 * math.comb(m, d) / (k + 1) ** (d - 1)
    return lo * scale, up * scale
