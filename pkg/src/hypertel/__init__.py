"""Exact creative telescoping for bivariate proper hypergeometric terms."""

from .bipoly import BiPoly, KBasis, UniPoly, norm
from .errors import HypertelError
from .term_model import (GammaFactor, ProperTerm, Role, binomial_term, central_binomial_ratio_term,
                         eval_term, family_h_omega, make_term, normalize, shape_params)
from .solver import CTRelation, height_of, solve_minimal, solve_nonminimal, verify_relation

__version__ = "0.1.0"

__all__ = [
    "BiPoly", "KBasis", "UniPoly", "norm", "HypertelError",
    "GammaFactor", "ProperTerm", "Role", "binomial_term", "central_binomial_ratio_term",
    "eval_term", "family_h_omega", "make_term", "normalize", "shape_params",
    "CTRelation", "height_of", "solve_minimal", "solve_nonminimal", "verify_relation",
]
