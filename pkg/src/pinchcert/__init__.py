"""Exact-arithmetic certificates for the pinching-constant inequality chains."""

from .exact import DomainError, RadicalNumber, RationalInterval, rad_div, rad_enclose, rad_mul, rad_sign
from .polynomial import UniPoly

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "RadicalNumber",
    "RationalInterval",
    "UniPoly",
    "rad_div",
    "rad_enclose",
    "rad_mul",
    "rad_sign",
]
