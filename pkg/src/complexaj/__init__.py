"""Exact and numerical checks of the complex AJ-conjecture for 4_1 and 5_2."""

from . import contour, elimination, exactalg, invariants, qdilog, qweyl, wgz

__version__ = "0.1.0"

__all__ = ["contour", "elimination", "exactalg", "invariants", "qdilog", "qweyl", "wgz", "__version__"]
