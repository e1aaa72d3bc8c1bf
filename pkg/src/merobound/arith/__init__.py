"""Exact arithmetic over Q(i): scalars, sparse polynomials, series, roots."""

from .gaussian import ONE, ZERO, GaussianRational, I, QI, as_qi
from .poly import CANONICAL_VARS, SparsePoly, poly_arith
from .roots import RealRootIsolation, gaussian_linear_roots, isolate_real_roots
from .series import SeriesPoly, TruncSeries, series_solve

__all__ = [
    "GaussianRational",
    "QI",
    "as_qi",
    "ZERO",
    "ONE",
    "I",
    "SparsePoly",
    "CANONICAL_VARS",
    "poly_arith",
    "TruncSeries",
    "SeriesPoly",
    "series_solve",
    "RealRootIsolation",
    "isolate_real_roots",
    "gaussian_linear_roots",
]
