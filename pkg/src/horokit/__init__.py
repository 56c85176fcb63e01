"""Combinatorial horoballs, augmented spaces, cover nerves, and homology towers."""

__version__ = "0.1.0"

from .graphs import MetricGraph, Vertex
from .groups import GroupSpec
from .homology import AbelianGroup
from .spaces import AugmentedSpace, Truncation, build_augmented, build_horoball

__all__ = [
    "AbelianGroup",
    "AugmentedSpace",
    "GroupSpec",
    "MetricGraph",
    "Truncation",
    "Vertex",
    "build_augmented",
    "build_horoball",
    "__version__",
]
