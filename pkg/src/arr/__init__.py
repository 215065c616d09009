"""Exact-arithmetic verification engine.

Subpackages cover exact scalars (rationals plus prime-log extensions),
truncated power series over exact rings, the Todd/genus coefficient
families, a square-zero model of the arithmetic intersection ring of
projective space, the analytic-torsion characteristic numbers, and a finite
exact wave-front set calculus, with a batch CLI on top.
"""

from .scalars import (
    DomainError,
    HarmonicData,
    LogNumber,
    Rational,
    UnsupportedInputError,
    bernoulli,
    harmonic_data,
    log_of_rational,
    lognumber_to_decimal,
    zeta_negative_odd,
)
from .series import RATIONAL_POLYS, RATIONALS, Series, TPoly, todd_series

__all__ = [
    "DomainError",
    "HarmonicData",
    "LogNumber",
    "RATIONALS",
    "RATIONAL_POLYS",
    "Rational",
    "Series",
    "TPoly",
    "UnsupportedInputError",
    "bernoulli",
    "harmonic_data",
    "log_of_rational",
    "lognumber_to_decimal",
    "todd_series",
    "zeta_negative_odd",
]
