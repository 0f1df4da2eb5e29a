import random
from fractions import Fraction as F

import pytest

from pinchcert import certify as C
from pinchcert.exact import DomainError
from pinchcert.optimize import (SearchConfig, feasibility_minimal, feasibility_shrinker, maximize_shrinker_delta,
                                minimize_k)

SMALL_MIN = SearchConfig(theta_grid=(F("0.86"), F("0.866")), theta1_grid=(F("0.83"),), spot_checks=1)
SMALL_SHR = SearchConfig(theta_grid=(F("0.83"), F("0.836")), theta1_grid=(F("0.81"),), spot_checks=1)


@pytest.fixture(scope="module")
def small_min():
    return minimize_k(SMALL_MIN)


@pytest.fixture(scope="module")
def small_shr():
    return maximize_shrinker_delta(SMALL_SHR)


def test_feasibility_examples():
    assert feasibility_minimal("0.866", "0.83", 22).ok
    assert feasibility_minimal("0.866", "0.83", 10**6).ok
    assert feasibility_minimal("0.5", "0.5", 22).status == C.FALSIFIED
    assert feasibility_shrinker("0.836", "0.81", F(1, 21)).ok
    assert feasibility_shrinker("0.836", "0.81", "0.022").ok
    assert feasibility_shrinker("0.836", "0.81", "0.2").status == C.FALSIFIED


def test_small_minimal_grid(small_min):
    assert small_min.found and small_min.best_constant <= 22
    assert small_min.best_params["theta"] == F("0.86")
    cell = [p for p in small_min.frontier if p.theta == F("0.866")][0]
    assert cell.constant is not None and cell.constant <= 22
    lo, hi = cell.bracket
    assert hi < lo and lo - hi <= SMALL_MIN.k_bisection[2]
    assert C.check_certificate(small_min.certificates).ok
    assert not small_min.warnings


def test_small_shrinker_grid(small_shr):
    assert small_shr.found and small_shr.best_constant >= F(1, 21)
    assert small_shr.best_constant > F("0.022")
    assert C.check_certificate(small_shr.certificates).ok


def test_determinism(small_shr, tmp_path):
    again = maximize_shrinker_delta(SMALL_SHR)
    assert again.frontier_tsv() == small_shr.frontier_tsv()
    a = small_shr.export(tmp_path / "a")
    b = again.export(tmp_path / "b")
    assert [p.read_bytes() for p in a] == [p.read_bytes() for p in b]


def test_monotonicity_spot_checks():
    rng = random.Random(7)
    for _ in range(10):
        theta = F(rng.randint(80, 90), 100)
        theta1 = F(rng.randint(75, 90), 100)
        if feasibility_minimal(theta, theta1, 24).ok:
            assert feasibility_minimal(theta, theta1, 48).ok
        d = F(rng.randint(20, 50), 1000)
        if feasibility_shrinker(theta, theta1, d).ok:
            assert feasibility_shrinker(theta, theta1, d / 2).ok


def test_degenerate_theta_near_one():
    res = maximize_shrinker_delta(SearchConfig(theta_grid=(F("0.999"),), theta1_grid=(F("0.81"),)))
    assert not res.found or res.best_constant < F(1, 100)


def test_theta_099_is_worse(small_min):
    res = minimize_k(SearchConfig(theta_grid=(F("0.99"),), theta1_grid=(F("0.83"), F("0.9"))))
    assert not res.found or res.best_constant > small_min.best_constant


def test_config_text():
    cfg = SearchConfig.from_text("theta_grid = 0.85:0.87:0.01\ntheta1_grid = 0.83, 0.84\nk_tol = 1/100 # coarse\n"
                                 "precision = 2^-100\n")
    assert cfg.precision == F(1, 2**100)
    assert cfg.theta_grid == (F("0.85"), F("0.86"), F("0.87"))
    assert cfg.k_bisection == (F(15), F(40), F(1, 100))
    with pytest.raises(DomainError):
        SearchConfig.from_text("bogus = 1")
    with pytest.raises(DomainError):
        SearchConfig(theta_grid=())
    with pytest.raises(DomainError):
        SearchConfig(k_bisection=(40, 15, 1))
