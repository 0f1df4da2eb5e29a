import random
from fractions import Fraction as F

import pytest

from pinchcert import reduction as red
from pinchcert import screening
from pinchcert.exact import SQRT6, SQRT11, SQRT17, DomainError, RadicalNumber, RationalInterval, rad_sign
from pinchcert.polynomial import poly_eval

W64 = F(1, 2**64)
L = 11 * SQRT17 + F("30.18")


def test_q1_printed_values():
    Q1 = red.build_Q1()
    printed = {"-6": "501.124", "-5": "-166.787", "0": "40", "1.5": "-1.74319", "2": "0.44096", "3": "-11.8077"}
    for x, v in printed.items():
        assert abs(poly_eval(Q1, F(x)) - F(v)) <= F("5e-4")
    assert poly_eval(Q1, 0) == 40 and poly_eval(Q1, 2) == F("0.44096")
    assert Q1.coeffs[0] == 40 and Q1.degree == 7


def test_q2_printed_values():
    Q2 = red.build_Q2()
    assert poly_eval(Q2, 0) == F("-3.2064")
    assert poly_eval(Q2, 3) == F("5.8251")
    assert poly_eval(Q2, 2) == F("-0.1808")
    assert poly_eval(Q2, 1) == F("0.0181")


def _Z_printed(x):
    c = F("0.567") ** 3 * 16 / (F("0.134") * 81 * 44)
    t = x - 2
    return (c * ((6 - SQRT6) * t - 1) ** 2 * ((3 - SQRT6) * t - F(4, 13))
            * ((11 * SQRT17 + 38 - F("0.34") * 23) * x / 22 - 3) * (x + 4) ** 2 * x)


def _W_printed(x):
    br = F("0.433") * x * (x + 4) - F("2.3505") * x * (x + 4) / 22 + F(3, 44) * x - F("0.567") * (x + 4)
    return RadicalNumber.coerce(br * br) * ((SQRT6 - 1) * (x - 2) + 1) * (x - 2) ** 2


def _R_printed(x):
    t = x - 2
    Lx = L * x - 66
    first = (35 - 9 * SQRT6) * ((6 - SQRT6) * t - 1) * t / 26 + ((3 - SQRT6) * t - F(4, 13)) * ((SQRT6 - 1) * t + 1)
    second = 17 * SQRT11 / 166 * Lx * Lx * x + (SQRT17 - 1) * SQRT11 / 4 * Lx * x * x
    third = (66 * ((3 - SQRT6) * t - F(4, 13)) * ((SQRT6 - 1) * t + 1)
             * ((SQRT17 - 1) * SQRT11 * x / 8 - 17 * SQRT11 / 332 * Lx) * ((6 - SQRT6) * t - 1) * t)
    return first * second - third


def test_expansions_agree_with_factor_forms():
    Z, W, R = red.build_Z(), red.build_W(), red.build_Rx()
    rng = random.Random(3)
    for _ in range(20):
        x = F(rng.randint(-300, 300), rng.randint(1, 17))
        assert poly_eval(Z, x) == _Z_printed(x)
        assert poly_eval(W, x) == _W_printed(x)
        assert poly_eval(R, x) == _R_printed(x)


def test_expansion_degrees_and_special_values():
    Z, W, R = red.build_Z(), red.build_W(), red.build_Rx()
    assert (Z.degree, W.degree, R.degree) == (7, 7, 5)
    c = F("0.567") ** 3 * 16 / (F("0.134") * 81 * 44)
    assert Z.lc == c * (6 - SQRT6) ** 2 * (3 - SQRT6) * (11 * SQRT17 + 38 - F("0.34") * 23) / 22
    assert poly_eval(Z, 2) == c * F(-4, 13) * (L * 2 / 22 - 3) * 72
    assert poly_eval(W, 2) == 0
    assert poly_eval(W, 0) == 4 * F("2.268") ** 2 * (1 - 2 * (SQRT6 - 1))
    assert all(rad_sign(poly_eval(W, F(x))) > 0 for x in range(6, 40))
    Lx2 = L * 2 - 66
    a, b = 17 * SQRT11 / 166, (SQRT17 - 1) * SQRT11 / 88
    assert poly_eval(R, 2) == F(-4, 13) * (a * Lx2 * Lx2 * 2 + 22 * b * Lx2 * 4)
    assert any(17 * SQRT11 / 166 == c or c.coeffs.get(11) for c in R.coeffs)


def test_constants():
    s = red.sigma()
    assert s * s - s - 4 == 0
    assert red.eta(4) == F("2.16") and red.eta(5) == F("2.23")
    with pytest.raises(DomainError):
        red.eta(6)
    c2 = red.C2_enclosure(F(1, 10**6))
    assert c2.width <= F(1, 10**6) and abs(c2.mid - F("1.6855")) < F("1e-4")


def test_lemma_constants():
    c4 = red.C4_of(F("0.836"), F(1, 10**6))
    assert c4.hi <= F("1.066218") + F(1, 10**6)
    lim = red.C1_limit(F(1, 10**9))
    c1 = red.C1_of(10**6, F(1, 10**9))
    assert abs(c1.mid - lim.mid) < F(1, 1000)
    vals = [red.C1_of(n, F(1, 10**9)).mid for n in (3, 6, 20, 100)]
    assert vals == sorted(vals) and vals[-1] < lim.mid
    # C3 at large n against the printed specialization with p = 0
    u1 = ((3 - SQRT6) / (SQRT6 - 1)).enclose(F(1, 10**12)).sqrt(80)
    printed = (F(4, 9) * RationalInterval(F("0.567") ** 3).sqrt(80) / RationalInterval(F("0.134")).sqrt(80)
               * u1 * (6 - SQRT6).enclose(F(1, 10**12)))
    c3 = red.C3_of(10**6, F("0.866"), F(1, 10**9))
    assert abs(c3.mid - printed.mid) < F(1, 1000)
    with pytest.raises(DomainError):
        red.C1_of(2, W64)
    with pytest.raises(DomainError):
        red.C4_of(1, W64)


def test_smalln_coefficients():
    v = red.smalln_coefficient(3, 22, 3 + F(3, 22))
    assert v.hi < 0 and abs(v.mid - F("-0.3467")) < F("1e-4")
    v4 = red.smalln_coefficient(4, 22, 4)
    assert v4.lo == v4.hi == F(31, 22) - F("0.68") - F(3, 2) and v4.hi < 0
    big = red.smalln_coefficient(2, 10**9, 2)
    assert big.hi < 0
    with pytest.raises(DomainError):
        red.smalln_coefficient(6, 22, 6)
    with pytest.raises(DomainError):
        red.smalln_coefficient(3, 22, 4)


def test_g_points_and_limit():
    assert red.g1_point(6, F(1, 1000)).hi < 0
    assert red.g2_point(6, F(1, 1000)).hi < 0
    assert abs(red.g2_point(10**6, F(1, 10**6)).mid - F("-0.044")) < F(1, 100)
    lim = red.g2_limit(F(1, 10**4))
    assert F("-0.05") < lim.lo and lim.hi < F("-0.04")
    assert abs(red.g2_point(10**8, F(1, 10**9)).mid - lim.mid) < F(1, 1000)
    u = red.U_limits(F(1, 10**9))
    assert u["U2"].contains(F(0)) is False and rad_sign((6 - SQRT6) - u["U2"].lo) >= 0
    with pytest.raises(DomainError):
        red.g1_point(2, W64)


def test_specialization_matches_printed_functionals():
    for n in range(6, 51):
        pair = red.minimal_coeff_pair(red.REFERENCE_MINIMAL.at(n), F(1, 2**40))
        assert pair.coeff_gradA.overlaps(red.g1_point(n, F(1, 2**40))) or \
            abs(pair.coeff_gradA.mid - red.g1_point(n, F(1, 2**40)).mid) < F(1, 2**30)
        assert abs(pair.coeff_excess.mid - red.g2_point(n, F(1, 2**40)).mid) < F(1, 2**30)
        assert pair.negative()


def test_minimal_pair_theta1_one_drops_term():
    theta, k = F("0.866"), F(22)
    pair = red.minimal_coeff_pair(red.MinimalParams(theta, 1, k, 10), F(1, 2**40))
    g, e = screening.minimal_pair(0.1, 0.866, 1.0, 22.0)
    assert abs(float(pair.coeff_excess.mid) - e) < 1e-9
    assert abs(float(pair.coeff_gradA.mid) - 10 * g) < 1e-9


def test_radicand_positivity_is_checked():
    with pytest.raises(DomainError):
        red.MinimalParams(F("0.866"), F("0.83"), 0)
    with pytest.raises(DomainError):
        red.ShrinkerParams(0, F("0.836"), F("0.81"))
    with pytest.raises(DomainError):
        red.MinimalParams(1, F("0.83"), 22)


def test_shrinker_pair():
    pair = red.shrinker_coeff_pair(red.REFERENCE_SHRINKER, F(1, 2**40))
    assert F("-0.01") < pair.coeff_gradA.lo and pair.coeff_gradA.hi < 0
    assert abs(pair.coeff_gradA.mid - F("-0.0016")) < F("1e-4")
    assert pair.coeff_excess.hi < 0 and abs(pair.coeff_excess.mid - F("-0.019")) < F("1e-3")
    g0 = red.shrinker_gradA_coefficient(F("0.836"), F("0.81"), 0)
    assert g0.contains(F("-0.418")) and g0.width < F(1, 2**60)


def test_derivative_sign_matches_numerator():
    R = red.build_Rx(red.DERIVED_U3_COEFF)
    rng = random.Random(5)
    for _ in range(10):
        x = F(rng.randint(300, 10000), 100)
        h = F(1, 10**6)
        diff = red.g2_point(x + h, F(1, 2**80)) - red.g2_point(x - h, F(1, 2**80))
        s = diff.sign()
        assert s is not None and s == rad_sign(poly_eval(R, x))
