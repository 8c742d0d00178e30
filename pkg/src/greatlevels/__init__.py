"""Great-circle arrangements on the sphere: k-levels, zones and random models."""
from .arrangement import ArrangementGraph, build_graph, cells_touching
from .errors import (
    BudgetError,
    BuildError,
    ConvergenceError,
    DegeneracyError,
    DegenerateError,
    InputError,
    OnCircleError,
    OnEquatorError,
    ParseError,
    PreconditionError,
    RangeError,
)
from .fileio import load_arrangement, save_arrangement
from .sphere_core import GreatSphereArrangement, random_arrangement

__version__ = "0.1.0"

__all__ = [
    "ArrangementGraph",
    "BudgetError",
    "BuildError",
    "ConvergenceError",
    "DegeneracyError",
    "DegenerateError",
    "GreatSphereArrangement",
    "InputError",
    "OnCircleError",
    "OnEquatorError",
    "ParseError",
    "PreconditionError",
    "RangeError",
    "build_graph",
    "cells_touching",
    "load_arrangement",
    "random_arrangement",
    "save_arrangement",
]
