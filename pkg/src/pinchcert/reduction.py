"""Constants, polynomials and coefficient functionals of the two pinching proofs.

Everything the proofs print as a decimal is kept as an exact rational.
Irrational quantities built from sqrt6/sqrt11/sqrt17 stay exact as
:class:`RadicalNumber`; anything involving a root of a non-constant
expression (epsilon, C1, C3, C4, the square roots inside g1/g2) is an
interval enclosure.

Evaluators on the ray ``x >= 6`` are written in the variable ``u = 1/x`` and
return the expression divided by ``x**scale_degree``; this lets a single
routine cover both bounded pieces ``[x0, x1]`` and the tail ``[X0, inf)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional

from .exact import (
    SQRT6,
    SQRT11,
    SQRT17,
    DomainError,
    RadicalNumber,
    RationalInterval,
    precision_bits,
    rational,
    sqrt_enclosure,
)
from .polynomial import UniPoly

R = rational

# Decimal literals as printed in the minimal-hypersurface proof.
Q1_DESCENDING = ("-0.00868", "0.0575", "0.207", "-3.126", "2.331", "30.434", "-69.56", "40")
Q2_DESCENDING = ("0.7633", "-5.1552", "13.4534", "-17.435", "11.598", "-3.2064")
ETA = {4: R("2.16"), 5: R("2.23")}
# 38 - 0.34*23 = 30.18
LINE_CONST = R(38) - R("0.34") * 23

MAX_BITS = 4096


@dataclass(frozen=True)
class CoefficientPair:
    """Enclosures of the two integrand coefficients of the final integral inequality."""

    coeff_gradA: RationalInterval
    coeff_excess: RationalInterval

    def negative(self) -> bool:
        return self.coeff_gradA.hi < 0 and self.coeff_excess.hi < 0


def _refined(fn: Callable[[int], RationalInterval], width) -> RationalInterval:
    width = rational(width)
    bits = max(precision_bits(width) + 8, 40)
    while True:
        enc = fn(bits)
        if enc.width <= width:
            return enc
        if bits > MAX_BITS:
            raise DomainError(f"could not reach width {width} within {MAX_BITS} bits")
        bits *= 2


def _check_theta(theta: Fraction):
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")


def _check_theta1(theta1: Fraction):
    if not 0 < theta1 <= 1:
        raise DomainError(f"theta1 must lie in (0, 1], got {theta1}")


# ---------------------------------------------------------------- constants


def sigma() -> RadicalNumber:
    """(sqrt17 + 1)/2."""
    return (SQRT17 + 1) / 2


def eta(n: int) -> Fraction:
    if n not in ETA:
        raise DomainError(f"eta is only tabulated for n = 4, 5 (got {n})")
    return ETA[n]


def _c2_cubed() -> RadicalNumber:
    return (2 * SQRT6 + 3) ** 3 / (21 * SQRT6 + R("103/2"))


def C2_enclosure(width) -> RationalInterval:
    """C2 = (2 sqrt6 + 3) / cbrt(21 sqrt6 + 103/2)."""
    c3 = _c2_cubed()
    return _refined(lambda bits: c3.enclose_bits(bits + 4).cbrt(bits), width)


def _theta_factor(theta: Fraction, bits: int) -> RationalInterval:
    """(1 - theta/2)**(3/2) * (1 - theta)**(-1/2)."""
    half = RationalInterval(1 - theta / 2)
    return (half * half.sqrt(bits) / RationalInterval(1 - theta).sqrt(bits)).outward(bits)


def _lemma_radicand(p: Fraction) -> RadicalNumber:
    """C1(n)**3 as an exact element of Q(sqrt6)."""
    return (3 - SQRT6 - 4 * p) / (SQRT6 - 1 + 13 * p) * (6 - SQRT6 - 13 * p) ** 2


def lemma_p(n) -> Fraction:
    n = rational(n)
    if n <= 2:
        raise DomainError("p = 1/(13(n-2)) needs n > 2")
    return 1 / (13 * (n - 2))


def C1_of(n, width) -> RationalInterval:
    v = _lemma_radicand(lemma_p(n))
    return _refined(lambda bits: v.enclose_bits(bits + 4).cbrt(bits), width)


def C1_limit(width) -> RationalInterval:
    """C1 at p = 0, the n -> infinity limit."""
    v = _lemma_radicand(Fraction(0))
    return _refined(lambda bits: v.enclose_bits(bits + 4).cbrt(bits), width)


def C3_of(n, theta, width) -> RationalInterval:
    """(4/9) C1(n)**(3/2) (1 - theta/2)**(3/2) (1 - theta)**(-1/2)."""
    theta = rational(theta)
    _check_theta(theta)
    v = _lemma_radicand(lemma_p(n))

    def enc(bits):
        c1_32 = v.enclose_bits(bits + 4).sqrt(bits)
        return (R("4/9") * c1_32 * _theta_factor(theta, bits)).outward(bits)

    return _refined(enc, width)


def C4_of(theta, width) -> RationalInterval:
    """(4/9) C2**(3/2) (1 - theta/2)**(3/2) (1 - theta)**(-1/2)."""
    theta = rational(theta)
    _check_theta(theta)
    c3 = _c2_cubed()

    def enc(bits):
        c2_32 = c3.enclose_bits(bits + 4).sqrt(bits)
        return (R("4/9") * c2_32 * _theta_factor(theta, bits)).outward(bits)

    return _refined(enc, width)


# ---------------------------------------------------------------- parameters


@dataclass(frozen=True)
class MinimalParams:
    """Free parameters of the minimal-hypersurface proof; the pinching is S in [n, n + n/k]."""

    theta: Fraction
    theta1: Fraction
    k: Fraction
    n: Fraction = Fraction(6)

    def __post_init__(self):
        for name in ("theta", "theta1", "k", "n"):
            object.__setattr__(self, name, rational(getattr(self, name)))
        _check_theta(self.theta)
        _check_theta1(self.theta1)
        if self.k <= 0:
            raise DomainError("k must be positive")
        if self.n < 2:
            raise DomainError("n must be at least 2")

    def at(self, n) -> "MinimalParams":
        return MinimalParams(self.theta, self.theta1, self.k, rational(n))

    @property
    def delta(self) -> Fraction:
        return self.n / self.k

    @property
    def p(self) -> Fraction:
        return lemma_p(self.n)

    @property
    def S_range(self) -> RationalInterval:
        return RationalInterval(self.n, self.n + self.delta)

    def epsilon_radicand(self) -> RadicalNumber:
        """8[sigma n + n - 3 + 5 delta + 2(n + delta)(theta1 - 1)]."""
        n, d = self.n, self.delta
        return 8 * (sigma() * n + n - 3 + 5 * d + 2 * (n + d) * (self.theta1 - 1))

    def epsilon(self, width) -> RationalInterval:
        rad = self.epsilon_radicand()
        if rad.sign() <= 0:
            raise DomainError("epsilon radicand is not positive")
        return _refined(lambda bits: (self.delta / rad.enclose_bits(bits + 4)).sqrt(bits), width)

    def epsilon1(self, width) -> RationalInterval:
        return self.epsilon(width / 2) * self.theta1

    def C1(self, width) -> RationalInterval:
        return C1_of(self.n, width)

    def C3(self, width) -> RationalInterval:
        return C3_of(self.n, self.theta, width)


@dataclass(frozen=True)
class ShrinkerParams:
    """Free parameters of the self-shrinker proof; the pinching is |A|^2 in [1, 1 + delta]."""

    delta: Fraction
    theta: Fraction
    theta1: Fraction

    def __post_init__(self):
        for name in ("delta", "theta", "theta1"):
            object.__setattr__(self, name, rational(getattr(self, name)))
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        _check_theta(self.theta)
        _check_theta1(self.theta1)

    def epsilon_radicand(self) -> RadicalNumber:
        """4(sqrt17 + 3) + 16(1 + delta)(theta1 - 1) + 40 delta."""
        d = self.delta
        return 4 * (SQRT17 + 3) + 16 * (1 + d) * (self.theta1 - 1) + 40 * d

    def epsilon(self, width) -> RationalInterval:
        rad = self.epsilon_radicand()
        if rad.sign() <= 0:
            raise DomainError("epsilon radicand is not positive")
        return _refined(lambda bits: (self.delta / rad.enclose_bits(bits + 4)).sqrt(bits), width)

    def epsilon1(self, width) -> RationalInterval:
        return self.epsilon(width / 2) * self.theta1

    def C4(self, width) -> RationalInterval:
        return C4_of(self.theta, width)


REFERENCE_MINIMAL = MinimalParams(R("0.866"), R("0.83"), R(22))
REFERENCE_SHRINKER = ShrinkerParams(R("1/21"), R("0.836"), R("0.81"))


# ---------------------------------------------------------------- polynomials

X = UniPoly.x()


def build_Q1() -> UniPoly:
    return UniPoly.from_decimals(Q1_DESCENDING)


def build_Q2() -> UniPoly:
    return UniPoly.from_decimals(Q2_DESCENDING)


def shifted_line(slope, offset) -> UniPoly:
    """slope*(x - 2) + offset."""
    return UniPoly([offset - 2 * slope, slope])


def lemma_bracket_V() -> UniPoly:
    """(6 - sqrt6)(x - 2) - 1."""
    return shifted_line(6 - SQRT6, -1)


def lemma_bracket_N() -> UniPoly:
    """(3 - sqrt6)(x - 2) - 4/13."""
    return shifted_line(3 - SQRT6, R("-4/13"))


def lemma_bracket_B() -> UniPoly:
    """(sqrt6 - 1)(x - 2) + 1."""
    return shifted_line(SQRT6 - 1, 1)


def line_L() -> RadicalNumber:
    """11 sqrt17 + 38 - 0.34*23."""
    return 11 * SQRT17 + LINE_CONST


def line_Lx66() -> UniPoly:
    """(11 sqrt17 + 30.18) x - 66."""
    return UniPoly([-66, line_L()])


def case1_constant() -> Fraction:
    """0.567**3 * 16 / (0.134 * 81 * 44)."""
    return R("0.567") ** 3 * 16 / (R("0.134") * 81 * 44)


def case1_prefactor_bracket() -> UniPoly:
    """0.433x(x+4) - 2.3505x(x+4)/22 + 3x/44 - 0.567(x+4): (x+4) times the Case I prefactor."""
    xp4 = X + 4
    return R("0.433") * X * xp4 - R("2.3505") / 22 * X * xp4 + Fraction(3, 44) * X - R("0.567") * xp4


def case1_prefactor_numerator() -> UniPoly:
    """44(x+4) * (0.433x - 2.3505x/22 + 3x/(44(x+4)) - 0.567), a rational polynomial."""
    return 44 * case1_prefactor_bracket()


def build_Z() -> UniPoly:
    V = lemma_bracket_V()
    N = lemma_bracket_N()
    lin = UniPoly([-3, line_L() / 22])
    return case1_constant() * V * V * N * lin * (X + 4) ** 2 * X


def build_W() -> UniPoly:
    br = case1_prefactor_bracket()
    return br * br * lemma_bracket_B() * (X - 2) ** 2


PRINTED_U3_COEFF = (SQRT17 - 1) * SQRT11 / 88
# (sigma - 2) sqrt11 / 44: the U3 coefficient that follows from the generalized coefficient.
DERIVED_U3_COEFF = (SQRT17 - 3) * SQRT11 / 88
U3_RECIP_COEFF = 17 * SQRT11 / 166


def build_Rx(u3_coeff: Optional[RadicalNumber] = None) -> UniPoly:
    """Numerator R(x) of d/dx {U1 U2 [a/U3 + b U3]}, a = 17 sqrt11/166.

    With the default ``b`` this is the printed display; pass
    ``DERIVED_U3_COEFF`` for the derivative of :func:`g2_point`.
    """
    b = PRINTED_U3_COEFF if u3_coeff is None else RadicalNumber.coerce(u3_coeff)
    a = U3_RECIP_COEFF
    t = X - 2
    V, N, B = lemma_bracket_V(), lemma_bracket_N(), lemma_bracket_B()
    Lx = line_Lx66()
    first = ((35 - 9 * SQRT6) * V * t * Fraction(1, 26) + N * B) * (a * Lx * Lx * X + 22 * b * Lx * X * X)
    second = 66 * N * B * (11 * b * X - (a / 2) * Lx) * V * t
    return first - second


# ---------------------------------------------------------------- small n


def smalln_coefficient_exact(n: int, k, S) -> RadicalNumber:
    k, S = rational(k), rational(S)
    if n in (2, 3):
        return RadicalNumber.coerce((k + 9) / (4 * k) * n - Fraction(3, 2)) + (SQRT17 - 4) / 4 * S
    if n in (4, 5):
        return RadicalNumber.coerce((1 + 9 / k) / 4 * n - (5 - 2 * eta(n)) / 4 * S - Fraction(3, 2))
    raise DomainError(f"small-dimension coefficient is defined for n in 2..5 (got {n})")


def smalln_coefficient(n: int, k, S, width=Fraction(1, 1 << 64)) -> RationalInterval:
    """Coefficient of the |grad A|^2 integral for n <= 5 at pinching divisor k and S."""
    k, S = rational(k), rational(S)
    if k <= 0:
        raise DomainError("k must be positive")
    if not n <= S <= n + n / k:
        raise DomainError(f"S = {S} lies outside [n, n + n/k]")
    value = smalln_coefficient_exact(n, k, S)
    return RadicalNumber.coerce(value).enclose(width)


# ---------------------------------------------------------------- g1, g2


def _u_interval(u) -> RationalInterval:
    u = u if isinstance(u, RationalInterval) else RationalInterval(rational(u))
    if u.lo < 0 or u.hi >= Fraction(1, 2):
        raise DomainError("evaluators need 0 <= u = 1/x < 1/2")
    return u


def _lemma_factors(u: RationalInterval, bits: int):
    """U1 and U2 of the Case II display written in u = 1/x (1/(x - 2) = u/(1 - 2u))."""
    s6 = sqrt_enclosure(6, bits)
    inv_t = u / (1 - 2 * u)
    num = 3 - s6 - Fraction(4, 13) * inv_t
    if num.hi <= 0:
        raise DomainError("U1 radicand is negative (x too close to 2)")
    U1 = (num / (s6 - 1 + inv_t)).sqrt(bits)
    U2 = 6 - s6 - inv_t
    return U1, U2


def _g_constant(bits: int) -> RationalInterval:
    """sqrt(16 * 0.567**3 / (81 * 0.134))."""
    return RationalInterval(16 * R("0.567") ** 3 / (81 * R("0.134"))).sqrt(bits)


def g1_scaled(u, bits: int = 64) -> RationalInterval:
    """g1(x)/x for x = 1/u, following the printed g1."""
    u = _u_interval(u)
    s17 = sqrt_enclosure(17, bits)
    U1, U2 = _lemma_factors(u, bits)
    # (x/44)((sqrt17+3)/2 x - 3 + 5x/22 - 0.34*23x/22) / x**2
    inner = ((s17 + 3) / 2 - 3 * u + Fraction(5, 22) - R("0.34") * 23 / 22) / 44
    root = inner.sqrt(bits)
    tail = R("2.3505") / 22 - 3 * u / (44 * (1 + 4 * u)) + R("0.567") * u
    return (-R("0.433") + _g_constant(bits) * U1 * U2 * root + tail).outward(bits)


def g2_scaled(u, bits: int = 64) -> RationalInterval:
    """g2(x) = -0.7835 + C U1 U2 [17 sqrt11/(166 U3) + (sqrt17 - 3) sqrt11 U3 / 88]."""
    u = _u_interval(u)
    s11 = sqrt_enclosure(11, bits)
    s17 = sqrt_enclosure(17, bits)
    U1, U2 = _lemma_factors(u, bits)
    L = 11 * s17 + LINE_CONST
    den = L - 66 * u
    if den.lo <= 0:
        raise DomainError("U3 radicand is not positive")
    U3 = (22 / den).sqrt(bits)
    bracket = 17 * s11 / (166 * U3) + (s17 - 3) * s11 * U3 / 88
    return (-R("0.7835") + _g_constant(bits) * U1 * U2 * bracket).outward(bits)


def _check_x(x) -> Fraction:
    x = rational(x)
    if x <= 2:
        raise DomainError("g1/g2 are defined for x > 2")
    return x


def g1_point(x, width) -> RationalInterval:
    x = _check_x(x)
    return _refined(lambda bits: g1_scaled(1 / x, bits) * x, width)


def g2_point(x, width) -> RationalInterval:
    x = _check_x(x)
    return _refined(lambda bits: g2_scaled(1 / x, bits), width)


def g2_limit(width) -> RationalInterval:
    """lim g2(x) as x -> infinity: U1 -> sqrt((3-sqrt6)/(sqrt6-1)), U2 -> 6-sqrt6, U3 -> sqrt(22/L)."""
    return _refined(lambda bits: g2_scaled(Fraction(0), bits), width)


def U_limits(width) -> Dict[str, RationalInterval]:
    def u1(bits):
        s6 = sqrt_enclosure(6, bits + 4)
        return ((3 - s6) / (s6 - 1)).sqrt(bits)

    def u3(bits):
        L = line_L().enclose_bits(bits + 4)
        return (22 / L).sqrt(bits)

    return {
        "U1": _refined(u1, width),
        "U2": (6 - SQRT6).enclose(width),
        "U3": _refined(u3, width),
    }


# ---------------------------------------------------------------- generalized coefficients


def minimal_scaled_pair(u, theta, theta1, k, bits: int = 64):
    """(coefficient of int |grad A|^2)/x and the (S - n) coefficient at x = 1/u.

    Uses the general-parameter form; epsilon = sqrt(delta / (8 K)) with
    K = sigma x + x - 3 + 5 delta + 2 (x + delta)(theta1 - 1) and delta = x/k.
    """
    u = _u_interval(u)
    theta, theta1, k = rational(theta), rational(theta1), rational(k)
    s6 = sqrt_enclosure(6, bits)
    s17 = sqrt_enclosure(17, bits)
    sig = (s17 + 1) / 2
    inv_t = u / (1 - 2 * u)  # 13 p
    ratio = (3 - s6 - Fraction(4, 13) * inv_t) / (s6 - 1 + inv_t)
    if ratio.hi <= 0:
        raise DomainError("Lemma radicand is negative")
    C3 = (Fraction(4, 9) * ratio.sqrt(bits) * (6 - s6 - inv_t) * _theta_factor(theta, bits)).outward(bits)
    # K / x
    K = sig + 1 - 3 * u + 5 / k + 2 * (1 + 1 / k) * (theta1 - 1)
    if K.lo <= 0:
        raise DomainError("epsilon radicand is not positive")
    # C3 (eps K + delta/(8 eps)) / x = C3 sqrt(delta K / 2) / x
    grad = (
        u
        - theta / 2 * (1 + u)
        + C3 * (K / (2 * k)).sqrt(bits)
        + (3 - 3 * theta / 4 - 3 * u / (2 * (1 + 4 * u))) / k
    )
    eps = (1 / (8 * k * K)).sqrt(bits)
    inv_eps = (8 * k * K).sqrt(bits)
    excess = -(1 - theta / 4 + C3 * inv_eps * (1 - 1 / theta1) / 8 + eps * C3 * (2 - sig))
    return grad.outward(bits), excess.outward(bits)


def minimal_coeff_pair(params: MinimalParams, width=Fraction(1, 1 << 64)) -> CoefficientPair:
    """Both integrand coefficients at dimension ``params.n``."""
    n = params.n
    if n <= 2:
        raise DomainError("the coefficient pair needs n > 2")
    if params.epsilon_radicand().sign() <= 0:
        raise DomainError("epsilon radicand is not positive")
    u = 1 / n
    grad = _refined(lambda bits: minimal_scaled_pair(u, params.theta, params.theta1, params.k, bits)[0] * n, width)
    exc = _refined(lambda bits: minimal_scaled_pair(u, params.theta, params.theta1, params.k, bits)[1], width)
    return CoefficientPair(grad, exc)


def shrinker_gradA_coefficient(theta, theta1, delta, bits: int = 64) -> RationalInterval:
    """(C4/4) sqrt(8 K delta) - theta/2 + (3 - 3 theta/4) delta, K from the epsilon radicand."""
    theta, theta1, delta = rational(theta), rational(theta1), rational(delta)
    s17 = sqrt_enclosure(17, bits)
    rad = 4 * (s17 + 3) * delta + 16 * (1 + delta) * (theta1 - 1) * delta + 40 * delta * delta
    if delta and rad.lo <= 0:
        raise DomainError("epsilon radicand is not positive")
    C4 = (Fraction(4, 9) * _c2_cubed().enclose_bits(bits + 4).sqrt(bits) * _theta_factor(theta, bits)).outward(bits)
    root = rad.sqrt(bits) if delta else RationalInterval(0)
    return (C4 / 4 * root - theta / 2 + (3 - 3 * theta / 4) * delta).outward(bits)


def shrinker_excess_coefficient(theta, theta1, delta, bits: int = 64) -> RationalInterval:
    """(C4/8)(4(sqrt17 - 3) eps - 1/eps + 1/(theta1 eps)) - (1 - theta/4)."""
    theta, theta1, delta = rational(theta), rational(theta1), rational(delta)
    s17 = sqrt_enclosure(17, bits)
    rad = 4 * (s17 + 3) + 16 * (1 + delta) * (theta1 - 1) + 40 * delta
    if rad.lo <= 0:
        raise DomainError("epsilon radicand is not positive")
    eps = (delta / rad).sqrt(bits)
    inv_eps = (rad / delta).sqrt(bits)
    C4 = (Fraction(4, 9) * _c2_cubed().enclose_bits(bits + 4).sqrt(bits) * _theta_factor(theta, bits)).outward(bits)
    inner = 4 * (s17 - 3) * eps - inv_eps + inv_eps / theta1
    return (C4 / 8 * inner - (1 - theta / 4)).outward(bits)


def shrinker_coeff_pair(params: ShrinkerParams, width=Fraction(1, 1 << 64)) -> CoefficientPair:
    if params.epsilon_radicand().sign() <= 0:
        raise DomainError("epsilon radicand is not positive")
    args = (params.theta, params.theta1, params.delta)
    grad = _refined(lambda bits: shrinker_gradA_coefficient(*args, bits), width)
    exc = _refined(lambda bits: shrinker_excess_coefficient(*args, bits), width)
    return CoefficientPair(grad, exc)


# ---------------------------------------------------------------- ray expressions


@dataclass(frozen=True)
class RayExpression:
    """An expression on x >= a given as ``x**scale_degree * scaled(u)``, u = 1/x."""

    name: str
    scale_degree: int
    scaled: Callable[[RationalInterval, int], RationalInterval] = field(compare=False)
    params: Dict[str, str] = field(default_factory=dict, compare=False)

    def point(self, x, bits: int = 64) -> RationalInterval:
        x = rational(x)
        return self.scaled(RationalInterval(1 / x), bits) * x ** self.scale_degree


def _param_record(**kw) -> Dict[str, str]:
    return {k: f"{v.numerator}/{v.denominator}" for k, v in kw.items()}


def g1_expression() -> RayExpression:
    return RayExpression("g1", 1, g1_scaled)


def g2_expression() -> RayExpression:
    return RayExpression("g2", 0, g2_scaled)


def minimal_expressions(theta, theta1, k):
    theta, theta1, k = rational(theta), rational(theta1), rational(k)
    rec = _param_record(theta=theta, theta1=theta1, k=k)
    grad = RayExpression(
        "minimal-coeff-gradA", 1, lambda u, bits: minimal_scaled_pair(u, theta, theta1, k, bits)[0], rec
    )
    exc = RayExpression(
        "minimal-coeff-excess", 0, lambda u, bits: minimal_scaled_pair(u, theta, theta1, k, bits)[1], rec
    )
    return grad, exc


def constant_expression(value) -> RayExpression:
    value = rational(value)
    return RayExpression(f"constant {value}", 0, lambda u, bits: RationalInterval(value))
