"""Exact derivations of Q(x1..xn) and normal forms of nilpotent Lie algebras of them."""

from .arith import MultiPoly, RatFunc, poly_gcd, potential
from .classifier import (ChainCoefficients, NormalFormReport, classify, embed_into_triangular,
                         express_via_chain, express_via_grid, is_in_triangular)
from .derivations import Automorphism, Derivation, apply, bracket, pushforward
from .lie import (LieBasis, Subspace, center, ideal_RI_cap_L, k_linear_reduce,
                  lower_central_series, rank_over_R, structure_constants)

__version__ = "0.1.0"
