"""Dense univariate polynomials over Q or Q(sqrt6, sqrt11, sqrt17).

Sturm chains, root counting and isolation only run over Q; radical
polynomials reach them through :func:`coeff_bound_poly`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .exact import (
    DomainError,
    RadicalNumber,
    RationalInterval,
    format_rational,
    parse_rational,
    rad_enclose,
    rational,
)


class PolynomialError(ValueError):
    """Raised for zero/constant polynomials where a proper one is required."""


def _is_radical(c) -> bool:
    return isinstance(c, RadicalNumber)


class UniPoly:
    """Polynomial with ``coeffs[i]`` the coefficient of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        coeffs = list(coeffs)
        if any(_is_radical(c) for c in coeffs):
            coeffs = [RadicalNumber.coerce(c) for c in coeffs]
        else:
            coeffs = [rational(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def from_decimals(cls, descending: Sequence[str]) -> "UniPoly":
        """Build from decimal strings listed from the leading coefficient down."""
        return cls([rational(c) for c in reversed(descending)])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_radical(self) -> bool:
        return bool(self.coeffs) and _is_radical(self.coeffs[0])

    def is_rational(self) -> bool:
        return not self.is_radical() or all(c.is_rational() for c in self.coeffs)

    def to_rational(self) -> "UniPoly":
        if not self.is_radical():
            return self
        if not self.is_rational():
            raise PolynomialError("polynomial has irrational coefficients")
        return UniPoly([c.rational_part() for c in self.coeffs])

    def __repr__(self):
        return f"UniPoly({self.coeffs!r})"

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs))

    @staticmethod
    def _coerce(other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly([other])

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [0] * (n - len(self.coeffs))
        b = other.coeffs + [0] * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x):
        return poly_eval(self, x)

    def scale(self, c) -> "UniPoly":
        return UniPoly([c * a for a in self.coeffs])

    def divmod(self, other: "UniPoly"):
        """Quotient and remainder over the coefficient field."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [0] * max(0, len(rem) - len(other.coeffs) + 1)
        lc = other.lc
        dq = other.degree
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            f = rem[-1] / lc
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - f * c
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return UniPoly(q), UniPoly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly([c / self.lc for c in self.coeffs])

    def to_json(self):
        if self.is_radical():
            return [c.to_json() for c in self.coeffs]
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "UniPoly":
        return cls([RadicalNumber.from_json(c) if isinstance(c, dict) else parse_rational(c) for c in data])


def poly_eval(P: UniPoly, x):
    """Horner evaluation; exact for rational or RadicalNumber arguments."""
    if isinstance(x, RationalInterval):
        return interval_eval(P, x)
    acc = Fraction(0)
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def interval_eval(P: UniPoly, X: RationalInterval, bits: int = 64) -> RationalInterval:
    acc = RationalInterval(0)
    for c in reversed(P.coeffs):
        c_enc = c.enclose_bits(bits) if isinstance(c, RadicalNumber) else c
        acc = acc * X + c_enc
    return acc


def derivative(P: UniPoly) -> UniPoly:
    return UniPoly([i * c for i, c in enumerate(P.coeffs)][1:])


def poly_gcd(P: UniPoly, Q: UniPoly) -> UniPoly:
    """Monic gcd over the coefficient field."""
    a, b = P, Q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(P: UniPoly) -> UniPoly:
    g = poly_gcd(P, derivative(P))
    if g.degree <= 0:
        return P
    return P // g


def _bareiss_det(M: List[list], exact_div) -> object:
    """Fraction-free determinant; ``exact_div`` performs the exact Bareiss division."""
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_div(M[i][j] * pivot - M[i][k] * M[k][j], prev)
            M[i][k] = 0
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(P: UniPoly, Q: UniPoly) -> List[list]:
    m, n = P.degree, Q.degree
    size = m + n
    p = list(reversed(P.coeffs))
    q = list(reversed(Q.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + p + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + q + [0] * (size - n - 1 - i))
    return rows


def _clear_denominators(P: UniPoly):
    """Integer polynomial c*P and the positive multiplier c."""
    c = 1
    for a in P.coeffs:
        c = c * a.denominator // math.gcd(c, a.denominator)
    return [int(a * c) for a in P.coeffs], c


def sylvester_resultant(P: UniPoly, Q: UniPoly):
    """Res(P, Q) as the determinant of the Sylvester matrix (Bareiss elimination)."""
    if P.is_zero() or Q.is_zero():
        raise PolynomialError("resultant of a zero polynomial")
    m, n = P.degree, Q.degree
    if m == 0 and n == 0:
        return Fraction(1)
    if m == 0:
        return P.lc ** n
    if n == 0:
        return Q.lc ** m
    if not P.is_radical() and not Q.is_radical():
        ip, cp = _clear_denominators(P)
        iq, cq = _clear_denominators(Q)
        det = _bareiss_det(sylvester_matrix(UniPoly(ip), UniPoly(iq)), lambda a, b: a // b)
        # Res(cp P, cq Q) = cp**n cq**m Res(P, Q)
        return Fraction(int(det)) / (Fraction(cp) ** n * Fraction(cq) ** m)
    M = sylvester_matrix(P, Q)
    M = [[RadicalNumber.coerce(v) for v in row] for row in M]
    return _bareiss_det(M, lambda a, b: a / b)


def discriminant(P: UniPoly):
    n = P.degree
    if n < 2:
        raise PolynomialError("discriminant needs degree >= 2")
    res = sylvester_resultant(P, derivative(P))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res / P.lc


def _primitive_positive(P: UniPoly) -> UniPoly:
    """Positive rescaling of a rational polynomial to coprime integer coefficients."""
    if P.is_zero():
        return P
    ints, _ = _clear_denominators(P)
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return UniPoly([Fraction(a // g) for a in ints])


@dataclass(frozen=True)
class SturmChain:
    polys: tuple
    squarefree_reduced: bool = False

    def __len__(self):
        return len(self.polys)

    def variations_at(self, x) -> int:
        return sign_variations([_sign(poly_eval(p, rational(x))) for p in self.polys])

    def variations_at_infinity(self, positive: bool = True) -> int:
        signs = []
        for p in self.polys:
            s = _sign(p.lc)
            if not positive and p.degree % 2:
                s = -s
            signs.append(s)
        return sign_variations(signs)


def _sign(v) -> int:
    if isinstance(v, RadicalNumber):
        return v.sign()
    return (v > 0) - (v < 0)


def sign_variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_chain(P: UniPoly) -> SturmChain:
    """Signed remainder sequence of P (or of its squarefree part), content-normalized."""
    if P.is_zero():
        raise PolynomialError("Sturm chain of the zero polynomial")
    P = P.to_rational()
    base = squarefree_part(P)
    reduced = base.degree != P.degree
    chain = [_primitive_positive(base)]
    if base.degree >= 1:
        chain.append(_primitive_positive(derivative(base)))
        while chain[-1].degree > 0:
            r = chain[-2] % chain[-1]
            if r.is_zero():
                break
            chain.append(_primitive_positive(-r))
    return SturmChain(tuple(chain), reduced)


@dataclass(frozen=True)
class RootRange:
    """Real range; ``None`` endpoints mean infinite."""

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    lo_closed: bool = False
    hi_closed: bool = False

    @classmethod
    def open(cls, a, b) -> "RootRange":
        return cls(rational(a), rational(b))

    @classmethod
    def closed(cls, a, b) -> "RootRange":
        return cls(rational(a), rational(b), True, True)

    @classmethod
    def ray(cls, a, closed: bool = True) -> "RootRange":
        return cls(rational(a), None, closed, False)

    @classmethod
    def whole_line(cls) -> "RootRange":
        return cls()

    def __str__(self):
        left = "[" if self.lo_closed and self.lo is not None else "("
        right = "]" if self.hi_closed and self.hi is not None else ")"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{lo}, {hi}{right}"


@dataclass(frozen=True)
class RootCount:
    count: int
    range: RootRange


def count_real_roots(P: UniPoly, rng: RootRange = RootRange()) -> RootCount:
    """Number of distinct real roots of P in ``rng`` via Sturm sign variations.

    V(a) - V(b) counts roots in (a, b] even when a or b is itself a root,
    so endpoint roots are handled by exact adjustment.
    """
    chain = sturm_chain(P)
    base = chain.polys[0]
    v_lo = chain.variations_at_infinity(False) if rng.lo is None else chain.variations_at(rng.lo)
    v_hi = chain.variations_at_infinity(True) if rng.hi is None else chain.variations_at(rng.hi)
    count = v_lo - v_hi
    if rng.hi is not None and not rng.hi_closed and poly_eval(base, rng.hi) == 0:
        count -= 1
    if rng.lo is not None and rng.lo_closed and poly_eval(base, rng.lo) == 0:
        count += 1
    return RootCount(count, rng)


def cauchy_root_bound(P: UniPoly) -> Fraction:
    P = P.to_rational()
    if P.degree < 1:
        raise PolynomialError("root bound of a constant polynomial")
    lc = P.lc
    return 1 + max(abs(c / lc) for c in P.coeffs[:-1])


def _open_count(chain: SturmChain, lo: Fraction, hi: Fraction) -> int:
    base = chain.polys[0]
    n = chain.variations_at(lo) - chain.variations_at(hi)
    if poly_eval(base, hi) == 0:
        n -= 1
    return n


def _split_point(base: UniPoly, lo: Fraction, hi: Fraction) -> Fraction:
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)):
        m = lo + (hi - lo) * num / den
        if poly_eval(base, m) != 0:
            return m
    k = 5
    while True:
        k += 1
        m = lo + (hi - lo) / k
        if poly_eval(base, m) != 0:
            return m


def isolate_real_roots(P: UniPoly) -> List[RationalInterval]:
    """Disjoint open intervals (returned as RationalIntervals), one distinct real root each."""
    if P.is_zero():
        raise PolynomialError("roots of the zero polynomial")
    P = P.to_rational()
    if P.degree < 1:
        return []
    chain = sturm_chain(P)
    base = chain.polys[0]
    B = cauchy_root_bound(base)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = _open_count(chain, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(RationalInterval(lo, hi))
            continue
        m = _split_point(base, lo, hi)
        stack.append((m, hi))
        stack.append((lo, m))
    out.sort(key=lambda I: I.lo)
    return out


def refine_root(P: UniPoly, interval: RationalInterval, width) -> RationalInterval:
    """Shrink an isolating interval (non-root endpoints) below ``width``."""
    base = squarefree_part(P.to_rational())
    width = rational(width)
    lo, hi = interval.lo, interval.hi
    s_lo = _sign(poly_eval(base, lo))
    while hi - lo > width:
        m = (lo + hi) / 2
        s = _sign(poly_eval(base, m))
        if s == 0:
            return RationalInterval(m)
        if s == s_lo:
            lo = m
        else:
            hi = m
    return RationalInterval(lo, hi)


def coeff_bound_poly(P: UniPoly, direction: str, width) -> UniPoly:
    """Rational polynomial bounding P from below/above on x >= 0, coefficientwise within ``width``."""
    if direction not in ("lower", "upper"):
        raise DomainError(f"unknown direction {direction!r}")
    width = rational(width)
    if width <= 0:
        raise DomainError("width must be positive")
    out = []
    for c in P.coeffs:
        enc = rad_enclose(c, width) if isinstance(c, RadicalNumber) else RationalInterval(c)
        out.append(enc.lo if direction == "lower" else enc.hi)
    return UniPoly(out)
