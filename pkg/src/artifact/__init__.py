"""Exact evaluation of signed Selberg-type integrals and the Crofton-formula
checks built on them."""

from .ratfun import Poly, RatFun, factored_str, laurent, pole_order
from .selberg import ExponentVector, f_closed, f_oracle, f_recursive, selberg_I
from .matintegrals import D_closed, D_mc_oracle
from .special import GammaProduct, gamma_n_kappa, u_eval

__all__ = [
    "Poly",
    "RatFun",
    "factored_str",
    "laurent",
    "pole_order",
    "ExponentVector",
    "f_closed",
    "f_oracle",
    "f_recursive",
    "selberg_I",
    "D_closed",
    "D_mc_oracle",
    "GammaProduct",
    "gamma_n_kappa",
    "u_eval",
]
