"""Exact computations for better-behaved GKZ systems, toric cohomology and TEP structures."""

from .errors import BbgkzError, BoundInsufficient, ConfigurationError, ResourceLimit
from .lattice import PointConfiguration

__version__ = "0.1.0"

__all__ = [
    "BbgkzError",
    "BoundInsufficient",
    "ConfigurationError",
    "PointConfiguration",
    "ResourceLimit",
]
