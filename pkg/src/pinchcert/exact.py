"""Exact scalars: rationals, the radical field Q(sqrt6, sqrt11, sqrt17), rational intervals.

Rationals are plain :class:`fractions.Fraction` values. Decimal literals are
always parsed through :func:`rational`, never through ``float``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Dict, Union

# Square-free basis of Q(sqrt6, sqrt11, sqrt17), identified by radicand.
BASIS = (1, 6, 11, 17, 66, 102, 187, 1122)
GENERATORS = (6, 11, 17)
BASIS_NAMES = {d: ("1" if d == 1 else f"sqrt{d}") for d in BASIS}
_NAME_TO_RADICAND = {v: k for k, v in BASIS_NAMES.items()}

Scalar = Union[int, Fraction]


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


def rational(value) -> Fraction:
    """Parse an exact rational from an int, Fraction, or decimal/``p/q``/``2^-64`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "^" in text:
            base, _, exp = text.partition("^")
            return Fraction(base.strip()) ** int(exp)
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def precision_bits(width: Fraction) -> int:
    """Smallest ``b`` with ``2**-b <= width``."""
    width = rational(width)
    if width <= 0:
        raise DomainError("width must be positive")
    b = 0
    while Fraction(1, 1 << b) > width:
        b += 1
    return b


def _floor_dyadic(q: Fraction, bits: int) -> Fraction:
    return Fraction((q.numerator << bits) // q.denominator, 1 << bits)


def _ceil_dyadic(q: Fraction, bits: int) -> Fraction:
    return Fraction(-((-q.numerator << bits) // q.denominator), 1 << bits)


def _icbrt(n: int) -> int:
    """floor(cbrt(n)) for n >= 0."""
    if n < 0:
        raise DomainError("negative argument")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def sqrt_floor(q: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= sqrt(q)."""
    if q < 0:
        raise DomainError("sqrt of a negative number")
    scaled = (q.numerator << (2 * bits)) // q.denominator
    return Fraction(math.isqrt(scaled), 1 << bits)


def sqrt_ceil(q: Fraction, bits: int) -> Fraction:
    if q < 0:
        raise DomainError("sqrt of a negative number")
    num = q.numerator << (2 * bits)
    scaled = -((-num) // q.denominator)
    r = math.isqrt(scaled)
    if r * r < scaled:
        r += 1
    return Fraction(r, 1 << bits)


def cbrt_floor(q: Fraction, bits: int) -> Fraction:
    if q < 0:
        return -cbrt_ceil(-q, bits)
    scaled = (q.numerator << (3 * bits)) // q.denominator
    return Fraction(_icbrt(scaled), 1 << bits)


def cbrt_ceil(q: Fraction, bits: int) -> Fraction:
    if q < 0:
        return -cbrt_floor(-q, bits)
    num = q.numerator << (3 * bits)
    scaled = -((-num) // q.denominator)
    r = _icbrt(scaled)
    if r ** 3 < scaled:
        r += 1
    return Fraction(r, 1 << bits)


class RationalInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints.

    ``+``, ``-``, ``*`` and ``/`` are exact; only :meth:`sqrt`, :meth:`cbrt`
    and :meth:`outward` round, and they always round away from the set.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = rational(lo)
        hi = lo if hi is None else rational(hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, value) -> "RationalInterval":
        return cls(value, value)

    def __repr__(self):
        return f"RationalInterval({float(self.lo):.10g}, {float(self.hi):.10g})"

    def __eq__(self, other):
        if not isinstance(other, RationalInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        value = rational(value)
        return self.lo <= value <= self.hi

    def overlaps(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def sign(self):
        """+1 or -1 if the interval excludes zero, 0 for the point 0, None otherwise."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def outward(self, bits: int) -> "RationalInterval":
        return RationalInterval(_floor_dyadic(self.lo, bits), _ceil_dyadic(self.hi, bits))

    @staticmethod
    def _coerce(other) -> "RationalInterval":
        if isinstance(other, RationalInterval):
            return other
        return RationalInterval(rational(other))

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __add__(self, other):
        other = self._coerce(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RationalInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.lo >= 0 and other.lo >= 0:
            return RationalInterval(self.lo * other.lo, self.hi * other.hi)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.lo == other.hi:
            if other.lo == 0:
                raise ZeroDivisionError("interval division by zero")
            c = other.lo
            return RationalInterval(self.lo / c, self.hi / c) if c > 0 else RationalInterval(self.hi / c, self.lo / c)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only nonnegative integer powers")
        if k == 0:
            return RationalInterval(1)
        if k % 2 == 1 or self.lo >= 0:
            lo, hi = self.lo ** k, self.hi ** k
            return RationalInterval(min(lo, hi), max(lo, hi))
        if self.hi <= 0:
            return RationalInterval(self.hi ** k, self.lo ** k)
        return RationalInterval(0, max(self.lo ** k, self.hi ** k))

    def sqrt(self, bits: int = 64) -> "RationalInterval":
        return interval_sqrt(self, bits)

    def cbrt(self, bits: int = 64) -> "RationalInterval":
        return RationalInterval(cbrt_floor(self.lo, bits), cbrt_ceil(self.hi, bits))

    def to_json(self):
        return [format_rational(self.lo), format_rational(self.hi)]

    @classmethod
    def from_json(cls, data) -> "RationalInterval":
        lo, hi = data
        return cls(parse_rational(lo), parse_rational(hi))


def interval_sqrt(interval: RationalInterval, bits: int = 64) -> RationalInterval:
    """Enclosure of ``{sqrt(x) : x in interval, x >= 0}``; a negative ``lo`` is clamped to 0."""
    if interval.hi < 0:
        raise DomainError("sqrt of an interval with no nonnegative part")
    lo = max(interval.lo, Fraction(0))
    return RationalInterval(sqrt_floor(lo, bits), sqrt_ceil(interval.hi, bits))


def sqrt_enclosure(d: int, bits: int) -> RationalInterval:
    """Enclosure of sqrt(d) of width at most 2**-bits."""
    q = Fraction(d)
    lo = sqrt_floor(q, bits)
    hi = lo if lo * lo == q else lo + Fraction(1, 1 << bits)
    return RationalInterval(lo, hi)


def _basis_product(d1: int, d2: int):
    """sqrt(d1)*sqrt(d2) = coeff * sqrt(d)."""
    g = math.gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


class RadicalNumber:
    """Element of Q(sqrt6, sqrt11, sqrt17) stored as ``{radicand: Fraction}``.

    Zero coefficients are never stored, so ``not coeffs`` is the exact zero test
    (the eight basis radicals are linearly independent over Q).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[int, Scalar] | None = None):
        clean = {}
        for d, c in (coeffs or {}).items():
            if d not in BASIS:
                raise DomainError(f"sqrt{d} is not in the basis")
            c = rational(c)
            if c:
                clean[d] = c
        self.coeffs = clean

    @classmethod
    def sqrt(cls, d: int) -> "RadicalNumber":
        return cls({d: 1})

    @classmethod
    def coerce(cls, value) -> "RadicalNumber":
        if isinstance(value, RadicalNumber):
            return value
        return cls({1: rational(value)})

    def is_rational(self) -> bool:
        return set(self.coeffs) <= {1}

    def rational_part(self) -> Fraction:
        return self.coeffs.get(1, Fraction(0))

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalNumber.coerce(other)
        if not isinstance(other, RadicalNumber):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_part())
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "RadicalNumber(0)"
        terms = []
        for d in BASIS:
            if d in self.coeffs:
                c = self.coeffs[d]
                terms.append(str(c) if d == 1 else f"{c}*sqrt{d}")
        return "RadicalNumber(" + " + ".join(terms) + ")"

    def __neg__(self):
        return RadicalNumber({d: -c for d, c in self.coeffs.items()})

    def __add__(self, other):
        if not isinstance(other, (RadicalNumber, int, Fraction)):
            return NotImplemented
        other = RadicalNumber.coerce(other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, 0) + c
        return RadicalNumber(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (RadicalNumber, int, Fraction)):
            return NotImplemented
        return self + (-RadicalNumber.coerce(other))

    def __rsub__(self, other):
        return RadicalNumber.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RadicalNumber({d: c * other for d, c in self.coeffs.items()})
        if not isinstance(other, RadicalNumber):
            return NotImplemented
        return rad_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a RadicalNumber by zero")
            return RadicalNumber({d: c / other for d, c in self.coeffs.items()})
        if not isinstance(other, RadicalNumber):
            return NotImplemented
        return rad_div(self, other)

    def __rtruediv__(self, other):
        return rad_div(RadicalNumber.coerce(other), self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only nonnegative integer powers")
        result = RadicalNumber({1: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, generator: int) -> "RadicalNumber":
        """Apply the automorphism sqrt(generator) -> -sqrt(generator)."""
        return RadicalNumber({d: (-c if d % generator == 0 else c) for d, c in self.coeffs.items()})

    def sign(self) -> int:
        return rad_sign(self)

    def enclose(self, width) -> RationalInterval:
        return rad_enclose(self, width)

    def enclose_bits(self, bits: int) -> RationalInterval:
        """Enclosure using sqrt enclosures of width 2**-bits (result may be wider)."""
        lo = hi = Fraction(0)
        for d, c in self.coeffs.items():
            if d == 1:
                lo += c
                hi += c
                continue
            r = sqrt_enclosure(d, bits)
            if c > 0:
                lo += c * r.lo
                hi += c * r.hi
            else:
                lo += c * r.hi
                hi += c * r.lo
        return RationalInterval(lo, hi)

    def to_json(self):
        return {BASIS_NAMES[d]: format_rational(self.coeffs[d]) for d in BASIS if d in self.coeffs}

    @classmethod
    def from_json(cls, data) -> "RadicalNumber":
        try:
            return cls({_NAME_TO_RADICAND[k]: parse_rational(v) for k, v in data.items()})
        except KeyError as exc:
            raise DomainError(f"unknown basis element {exc}") from None

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self.coeffs.items()))


def rad_mul(a: RadicalNumber, b: RadicalNumber) -> RadicalNumber:
    out: Dict[int, Fraction] = {}
    for d1, c1 in a.coeffs.items():
        for d2, c2 in b.coeffs.items():
            g, d = _basis_product(d1, d2)
            out[d] = out.get(d, 0) + g * c1 * c2
    return RadicalNumber(out)


def rad_div(a: RadicalNumber, b: RadicalNumber) -> RadicalNumber:
    if not b:
        raise ZeroDivisionError("division by the zero RadicalNumber")
    # Multiply through by conjugates until the denominator is rational.
    num, den = a, b
    for g in GENERATORS:
        conj = den.conjugate(g)
        num = num * conj
        den = den * conj
    assert den.is_rational()
    return num / den.rational_part()


def rad_enclose(a: RadicalNumber, width) -> RationalInterval:
    """Enclosure of ``a`` with rational endpoints and width at most ``width``."""
    a = RadicalNumber.coerce(a)
    width = rational(width)
    if width <= 0:
        raise DomainError("width must be positive")
    if a.is_rational():
        return RationalInterval(a.rational_part())
    total = sum(abs(c) for d, c in a.coeffs.items() if d != 1)
    bits = max(1, precision_bits(width / total))
    while True:
        enc = a.enclose_bits(bits)
        if enc.width <= width:
            return enc
        bits += 4


def rad_sign(a: RadicalNumber) -> int:
    """Exact sign of ``a``: refine enclosures until zero is excluded."""
    a = RadicalNumber.coerce(a)
    if not a:
        return 0
    if a.is_rational():
        return 1 if a.rational_part() > 0 else -1
    bits = 32
    while True:
        s = a.enclose_bits(bits).sign()
        if s:
            return s
        bits *= 2


SQRT6 = RadicalNumber.sqrt(6)
SQRT11 = RadicalNumber.sqrt(11)
SQRT17 = RadicalNumber.sqrt(17)


def random_radical(rng: random.Random, density: float = 0.6, span: int = 20) -> RadicalNumber:
    """Random element for property tests; coefficients are small rationals."""
    coeffs = {}
    for d in BASIS:
        if rng.random() < density:
            coeffs[d] = Fraction(rng.randint(-span, span), rng.randint(1, span))
    return RadicalNumber(coeffs)


def as_interval(value, bits: int = 64) -> RationalInterval:
    """Enclose a rational, RadicalNumber or interval as a RationalInterval."""
    if isinstance(value, RationalInterval):
        return value
    if isinstance(value, RadicalNumber):
        return value.enclose_bits(bits)
    return RationalInterval(rational(value))
