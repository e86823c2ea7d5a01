"""Exact evaluation and verification of binomial determinants with
Kronecker-delta perturbations."""

from .arith import (
    MU,
    AffineMu,
    PoleError,
    PolyMu,
    RatFuncMu,
    format_rational,
    gbinom,
    gbinom_eps_first_order,
    parse_rational,
    pascal_step,
    pascal_sum,
    poch,
)

__version__ = "0.1.0"
