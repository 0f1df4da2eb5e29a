"""Search over the free proof parameters for the best certified pinching constants.

For each grid cell (theta, theta1) the feasibility boundary is first located
with the floating-point screen, then confirmed with the certifier: the
reported constant is certified, and the next value one tolerance step beyond
it is certified *not* to work (falsified or inconclusive), so each cell's
answer is within the tolerance of the certified boundary.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import certify as C
from . import screening
from .config import Value, as_list, as_scalar, load_config, parse_config
from .exact import DomainError, format_rational, rational


def _grid(start, stop, step) -> List[Fraction]:
    start, stop, step = rational(start), rational(stop), rational(step)
    return [start + i * step for i in range(int((stop - start) / step) + 1)]


@dataclass(frozen=True)
class SearchConfig:
    theta_grid: Tuple[Fraction, ...] = tuple(_grid("0.80", "0.90", "0.01"))
    theta1_grid: Tuple[Fraction, ...] = tuple(_grid("0.75", "0.90", "0.01"))
    k_bisection: Tuple[Fraction, Fraction, Fraction] = (Fraction(15), Fraction(40), Fraction(1, 1000))
    delta_bisection: Tuple[Fraction, Fraction, Fraction] = (Fraction(1, 1000), Fraction(1, 5), Fraction(1, 10000))
    precision: Fraction = C.MAX_PRECISION
    X0: Fraction = C.DEFAULT_X0
    workers: int = 1
    spot_checks: int = 3
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "theta_grid", tuple(rational(t) for t in self.theta_grid))
        object.__setattr__(self, "theta1_grid", tuple(rational(t) for t in self.theta1_grid))
        if not self.theta_grid or not self.theta1_grid:
            raise DomainError("grids must be nonempty")
        if not all(0 < t < 1 for t in self.theta_grid) or not all(0 < t <= 1 for t in self.theta1_grid):
            raise DomainError("theta must lie in (0,1) and theta1 in (0,1]")
        for name in ("k_bisection", "delta_bisection"):
            lo, hi, tol = (rational(v) for v in getattr(self, name))
            if not (0 < lo < hi and tol > 0):
                raise DomainError(f"{name} needs 0 < lo < hi and tolerance > 0")
            object.__setattr__(self, name, (lo, hi, tol))

    @classmethod
    def from_mapping(cls, data: Dict[str, Value]) -> "SearchConfig":
        known = {"theta_grid", "theta1_grid", "k_lo", "k_hi", "k_tol", "delta_lo", "delta_hi", "delta_tol",
                 "precision", "X0", "workers", "spot_checks", "seed"}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
        base = cls()
        kw = {}
        if "theta_grid" in data:
            kw["theta_grid"] = tuple(as_list(data["theta_grid"]))
        if "theta1_grid" in data:
            kw["theta1_grid"] = tuple(as_list(data["theta1_grid"]))

        def scalar(key, default):
            return as_scalar(data[key], key) if key in data else default

        kw["k_bisection"] = tuple(scalar(f"k_{s}", d) for s, d in zip(("lo", "hi", "tol"), base.k_bisection))
        kw["delta_bisection"] = tuple(
            scalar(f"delta_{s}", d) for s, d in zip(("lo", "hi", "tol"), base.delta_bisection))
        kw["precision"] = scalar("precision", base.precision)
        kw["X0"] = scalar("X0", base.X0)
        for key in ("workers", "spot_checks", "seed"):
            v = scalar(key, Fraction(getattr(base, key)))
            if v.denominator != 1 or v < 0:
                raise DomainError(f"{key} must be a nonnegative integer")
            kw[key] = int(v)
        return cls(**kw)

    @classmethod
    def from_text(cls, text: str) -> "SearchConfig":
        return cls.from_mapping(parse_config(text))

    @classmethod
    def from_file(cls, path) -> "SearchConfig":
        return cls.from_mapping(load_config(path))


@dataclass
class FrontierPoint:
    theta: Fraction
    theta1: Fraction
    constant: Optional[Fraction]
    status: str
    bracket: Optional[Tuple[Fraction, Fraction]] = None


@dataclass
class SearchResult:
    objective: str  # "min-k" or "max-delta"
    best_params: Optional[Dict[str, Fraction]]
    best_constant: Optional[Fraction]
    certificates: Optional[C.CertificateBundle]
    frontier: List[FrontierPoint]
    warnings: List[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.best_constant is not None

    def frontier_tsv(self) -> str:
        name = "k" if self.objective == "min-k" else "delta"
        lines = [f"theta\ttheta1\t{name}\tstatus\tfailing_neighbor"]
        for p in self.frontier:
            const = "" if p.constant is None else format_rational(p.constant)
            fail = "" if p.bracket is None else format_rational(p.bracket[1])
            lines.append(f"{format_rational(p.theta)}\t{format_rational(p.theta1)}\t{const}\t{p.status}\t{fail}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        name = "k" if self.objective == "min-k" else "delta"
        if not self.found:
            return f"no grid point certified; {len(self.frontier)} cells explored"
        p = self.best_params
        return (f"best {name} = {format_rational(self.best_constant)} (~{float(self.best_constant):.6f}) at "
                f"theta = {format_rational(p['theta'])}, theta1 = {format_rational(p['theta1'])}")

    def export(self, directory) -> List[Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        out = [d / "frontier.tsv"]
        out[0].write_text(self.frontier_tsv())
        if self.certificates is not None:
            out.append(C.write_certificate(self.certificates, d / "best.cert"))
        return out


# ---------------------------------------------------------------- feasibility oracles


def feasibility_minimal(theta, theta1, k, precision=C.MAX_PRECISION, X0=C.DEFAULT_X0, proof_k=None) -> C.CertStatus:
    return C.verify_minimal_theorem(theta, theta1, k, precision, X0, proof_k=proof_k)


def feasibility_shrinker(theta, theta1, delta, precision=C.MAX_PRECISION, proof_delta=None) -> C.CertStatus:
    return C.verify_shrinker_theorem(delta, theta, theta1, precision, proof_delta=proof_delta)


# ---------------------------------------------------------------- screening brackets


def _float_bisect(pred, good: float, bad: float, tol: float) -> float:
    """Boundary between ``good`` (pred true) and ``bad`` (pred false), returned on the good side."""
    while abs(good - bad) > tol:
        mid = (good + bad) / 2
        if pred(mid):
            good = mid
        else:
            bad = mid
    return good


def _screen_min_k(theta: float, theta1: float, lo: float, hi: float, tol: float) -> Optional[float]:
    def ok(k):
        return screening.minimal_margin(theta, theta1, k) < 0

    steps = max(8, int((hi - lo) / 0.5))
    prev = lo
    if ok(lo):
        return lo
    for i in range(1, steps + 1):
        k = lo + (hi - lo) * i / steps
        if ok(k):
            return _float_bisect(ok, k, prev, tol / 4)
        prev = k
    return None


def _screen_max_delta(theta: float, theta1: float, lo: float, hi: float, tol: float) -> Optional[float]:
    def ok(d):
        return screening.shrinker_margin(theta, theta1, d) < 0

    steps = 200
    pts = [lo * (hi / lo) ** (i / steps) for i in range(steps + 1)]
    best = min(pts, key=lambda d: screening.shrinker_margin(theta, theta1, d))
    if not ok(best):
        return None
    if ok(hi):
        return hi
    return _float_bisect(ok, best, hi, tol / 4)


# ---------------------------------------------------------------- per-cell certified search


def _certified_min_k(theta, theta1, lo, hi, tol, precision, X0):
    screen = _screen_min_k(float(theta), float(theta1), float(lo), float(hi), float(tol))
    if screen is None:
        return None, "infeasible (screen)", None

    def feasible(k):
        return feasibility_minimal(theta, theta1, k, precision, X0, proof_k=k).ok

    m = max(0, math.ceil((Fraction(screen) - lo) / tol))
    step = 1
    while True:
        k = lo + m * tol
        if k > hi:
            return None, "not certified below hi", None
        if feasible(k):
            break
        m += step
        step *= 2
    good = m
    # Walk down while feasible, then bisect to one tolerance step.
    bad, step = None, 1
    while bad is None:
        cand = good - step
        if cand < 0:
            bad = -1
            break
        if feasible(lo + cand * tol):
            good, step = cand, step * 2
        else:
            bad = cand
    while good - bad > 1:
        mid = (good + bad) // 2
        if feasible(lo + mid * tol):
            good = mid
        else:
            bad = mid
    k_good = lo + good * tol
    k_bad = lo + bad * tol if bad >= 0 else None
    return k_good, "verified", (k_good, k_bad) if k_bad is not None else None


def _certified_max_delta(theta, theta1, lo, hi, tol, precision):
    screen = _screen_max_delta(float(theta), float(theta1), float(lo), float(hi), float(tol))
    if screen is None:
        return None, "infeasible (screen)", None

    def feasible(d):
        return feasibility_shrinker(theta, theta1, d, precision, proof_delta=d).ok

    top = int((hi - lo) / tol)
    m = min(top, max(0, math.floor((Fraction(screen) - lo) / tol)))
    step = 1
    while True:
        d = lo + m * tol
        if m < 0:
            return None, "not certified above lo", None
        if feasible(d):
            break
        m -= step
        step *= 2
    good, bad, step = m, None, 1
    while bad is None:
        cand = good + step
        if cand > top:
            bad = top + 1
            break
        if feasible(lo + cand * tol):
            good, step = cand, step * 2
        else:
            bad = cand
    while bad - good > 1:
        mid = (good + bad) // 2
        if feasible(lo + mid * tol):
            good = mid
        else:
            bad = mid
    d_good = lo + good * tol
    d_bad = lo + bad * tol if bad <= top else None
    return d_good, "verified", (d_good, d_bad) if d_bad is not None else None


def _cell_min(args):
    theta, theta1, cfg = args
    lo, hi, tol = cfg.k_bisection
    k, status, bracket = _certified_min_k(theta, theta1, lo, hi, tol, cfg.precision, cfg.X0)
    return FrontierPoint(theta, theta1, k, status, bracket)


def _cell_shrinker(args):
    theta, theta1, cfg = args
    lo, hi, tol = cfg.delta_bisection
    d, status, bracket = _certified_max_delta(theta, theta1, lo, hi, tol, cfg.precision)
    return FrontierPoint(theta, theta1, d, status, bracket)


def _run_cells(fn, cfg: SearchConfig) -> List[FrontierPoint]:
    cells = [(t, t1, cfg) for t in cfg.theta_grid for t1 in cfg.theta1_grid]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(fn, cells))  # map keeps grid order
    return [fn(c) for c in cells]


def _spot_cells(frontier: List[FrontierPoint], cfg: SearchConfig) -> List[FrontierPoint]:
    feasible = [p for p in frontier if p.constant is not None]
    rng = random.Random(cfg.seed)
    return rng.sample(feasible, min(cfg.spot_checks, len(feasible)))


def minimize_k(config: SearchConfig = SearchConfig()) -> SearchResult:
    frontier = _run_cells(_cell_min, config)
    feasible = [p for p in frontier if p.constant is not None]
    if not feasible:
        return SearchResult("min-k", None, None, None, frontier)
    best = min(feasible, key=lambda p: p.constant)  # min keeps the first in grid order on ties
    warnings = []
    for p in _spot_cells(frontier, config):
        if not feasibility_minimal(p.theta, p.theta1, 2 * p.constant, config.precision, config.X0).ok:
            warnings.append(f"monotonicity spot check failed at theta={p.theta}, theta1={p.theta1}, k={2 * p.constant}")
    status = feasibility_minimal(best.theta, best.theta1, best.constant, config.precision, config.X0,
                                 proof_k=best.constant)
    params = {"theta": best.theta, "theta1": best.theta1, "k": best.constant}
    if warnings:
        warnings.append("results are grid-only: bisection assumed monotone feasibility")
    return SearchResult("min-k", params, best.constant, status.bundle, frontier, warnings)


def maximize_shrinker_delta(config: SearchConfig = SearchConfig()) -> SearchResult:
    frontier = _run_cells(_cell_shrinker, config)
    feasible = [p for p in frontier if p.constant is not None]
    if not feasible:
        return SearchResult("max-delta", None, None, None, frontier)
    best = max(feasible, key=lambda p: (p.constant, -frontier.index(p)))
    warnings = []
    for p in _spot_cells(frontier, config):
        if not feasibility_shrinker(p.theta, p.theta1, p.constant / 2, config.precision).ok:
            warnings.append(f"monotonicity spot check failed at theta={p.theta}, theta1={p.theta1}, "
                            f"delta={p.constant / 2}")
    if warnings:
        warnings.append("results are grid-only: bisection assumed monotone feasibility")
    status = feasibility_shrinker(best.theta, best.theta1, best.constant, config.precision,
                                  proof_delta=best.constant)
    params = {"theta": best.theta, "theta1": best.theta1, "delta": best.constant}
    return SearchResult("max-delta", params, best.constant, status.bundle, frontier, warnings)
