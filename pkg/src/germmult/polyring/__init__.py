"""Exact polynomial kernel: multivariate arithmetic over Q, Sturm counting,
certified complex roots and factorization of forms."""

from .factor import (
    factor_homog,
    factor_homog_bivariate,
    factor_univariate,
    is_squarefree_poly,
    normalize_factor,
    proportional,
    reassemble,
)
from .poly import HomogPoly, Poly, initial_form, ord_, restrict_line, specialize_first
from .roots import Root, complex_roots, count_in_disc
from .univariate import (
    UniPoly,
    cauchy_bound,
    is_squarefree,
    poly_gcd,
    real_root_intervals,
    squarefree_decomposition,
    squarefree_part,
    sturm_count,
    sturm_sequence,
)
from ..expr import poly_parse

__all__ = [
    "HomogPoly",
    "Poly",
    "Root",
    "UniPoly",
    "cauchy_bound",
    "complex_roots",
    "count_in_disc",
    "factor_homog",
    "factor_homog_bivariate",
    "factor_univariate",
    "initial_form",
    "is_squarefree",
    "is_squarefree_poly",
    "normalize_factor",
    "ord_",
    "poly_gcd",
    "poly_parse",
    "proportional",
    "reassemble",
    "real_root_intervals",
    "restrict_line",
    "specialize_first",
    "squarefree_decomposition",
    "squarefree_part",
    "sturm_count",
    "sturm_sequence",
]
