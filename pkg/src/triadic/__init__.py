"""Adaptive triadic network dynamics: simulation, isotypic analysis and
simplicial-closure certification."""

__version__ = "0.1.0"

from .errors import ConfigError, NonFiniteError, ShapeMismatchError, TriadicError
from .tolerances import DEFAULT_TOLERANCES, Tolerances
from .backend import BACKEND

__all__ = [
    "__version__",
    "BACKEND",
    "ConfigError",
    "DEFAULT_TOLERANCES",
    "NonFiniteError",
    "ShapeMismatchError",
    "Tolerances",
    "TriadicError",
]
