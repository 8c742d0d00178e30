"""Adaptive Simpson quadrature, vectorized over the active subintervals."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ConvergenceError

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 10**6


def adaptive_simpson(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    initial_panels: int = 32,
) -> float:
    """Integrate a vectorized `f` over [a, b] to absolute tolerance `tol`.

    Each panel carries its share of the tolerance, halved on every split.
    A panel is accepted when the two-half Simpson estimate differs from the
    whole-panel estimate by at most 15 times its share; the accepted value
    includes the Richardson correction.  `budget` caps the number of panels
    ever created.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if b == a:
        return 0.0
    edges = np.linspace(a, b, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    f_lo, f_mid, f_hi = f(lo), f(mid), f(hi)
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    share = np.full(lo.shape, tol / initial_panels)
    created = initial_panels
    accepted = []

    while lo.size:
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_lm, f_rm = f(lm), f(rm)
        left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
        right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi)
        delta = left + right - whole
        done = np.abs(delta) <= 15.0 * share
        if np.any(done):
            accepted.append(left[done] + right[done] + delta[done] / 15.0)
        keep = ~done
        n_split = int(keep.sum())
        if n_split == 0:
            break
        created += 2 * n_split
        if created > budget:
            raise ConvergenceError(f"adaptive Simpson exceeded {budget} subintervals without reaching tol={tol}")
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        lm, rm = lm[keep], rm[keep]
        f_lo, f_lm, f_mid, f_rm, f_hi = f_lo[keep], f_lm[keep], f_mid[keep], f_rm[keep], f_hi[keep]
        left, right, share = left[keep], right[keep], share[keep] / 2.0
        lo = np.concatenate([lo, mid])
        hi = np.concatenate([mid, hi])
        new_mid = np.concatenate([lm, rm])
        f_lo, f_hi, f_new = np.concatenate([f_lo, f_mid]), np.concatenate([f_mid, f_hi]), np.concatenate([f_lm, f_rm])
        mid, f_mid = new_mid, f_new
        whole = np.concatenate([left, right])
        share = np.concatenate([share, share])

    if not accepted:
        return 0.0
    return math.fsum(np.concatenate(accepted).tolist())
