"""Floating-point screening of proof parameters.

Only used to *choose* where to spend certification effort (search brackets,
proof-parameter candidates); every verdict is produced by :mod:`pinchcert.certify`.
"""

from __future__ import annotations

import math

_S6 = math.sqrt(6.0)
_S17 = math.sqrt(17.0)
_SIGMA = (_S17 + 1) / 2
_C2 = (2 * _S6 + 3) / (21 * _S6 + 51.5) ** (1 / 3)

# u = 1/x samples on x >= 6, dense near x = 6.
U_GRID = sorted({0.0} | {1 / (6 + 0.02 * i) for i in range(500)} | {1 / (16 + 2.0 * i) for i in range(500)}
                | {10.0 ** -j for j in range(3, 9)})


def minimal_pair(u: float, theta: float, theta1: float, k: float):
    it = u / (1 - 2 * u)
    ratio = (3 - _S6 - 4 / 13 * it) / (_S6 - 1 + it)
    if ratio <= 0:
        return math.inf, math.inf
    C3 = 4 / 9 * math.sqrt(ratio) * (6 - _S6 - it) * (1 - theta / 2) ** 1.5 / math.sqrt(1 - theta)
    K = _SIGMA + 1 - 3 * u + 5 / k + 2 * (1 + 1 / k) * (theta1 - 1)
    if K <= 0:
        return math.inf, math.inf
    grad = u - theta / 2 * (1 + u) + C3 * math.sqrt(K / (2 * k)) + (3 - 3 * theta / 4 - 3 * u / (2 * (1 + 4 * u))) / k
    eps = math.sqrt(1 / (8 * k * K))
    excess = -(1 - theta / 4 + C3 / eps * (1 - 1 / theta1) / 8 + eps * C3 * (2 - _SIGMA))
    return grad, excess


def minimal_margin(theta: float, theta1: float, k: float) -> float:
    """max over x >= 6 of both scaled coefficients; negative means numerically feasible."""
    return max(max(minimal_pair(u, theta, theta1, k)) for u in U_GRID)


def smalln_margin(k: float) -> float:
    vals = []
    for n in (2, 3):
        for S in (n, n + n / k):
            vals.append((k + 9) / (4 * k) * n + (_S17 - 4) / 4 * S - 1.5)
    for n, eta in ((4, 2.16), (5, 2.23)):
        for S in (n, n + n / k):
            vals.append((1 + 9 / k) / 4 * n - (5 - 2 * eta) / 4 * S - 1.5)
    return max(vals)


def shrinker_pair(theta: float, theta1: float, delta: float):
    rad = 4 * (_S17 + 3) + 16 * (1 + delta) * (theta1 - 1) + 40 * delta
    if rad <= 0 or delta <= 0:
        return math.inf, math.inf
    C4 = 4 / 9 * _C2 ** 1.5 * (1 - theta / 2) ** 1.5 / math.sqrt(1 - theta)
    grad = C4 / 4 * math.sqrt(rad * delta) - theta / 2 + (3 - 3 * theta / 4) * delta
    eps = math.sqrt(delta / rad)
    excess = C4 / 8 * (4 * (_S17 - 3) * eps - 1 / eps + 1 / (theta1 * eps)) - (1 - theta / 4)
    return grad, excess


def shrinker_margin(theta: float, theta1: float, delta: float) -> float:
    return max(shrinker_pair(theta, theta1, delta))


def best_proof_divisor(theta: float, theta1: float, k: float, k_min: float = 15.0, samples: int = 120):
    """Proof divisor k' in [k_min, k] with the most negative screening margin (None if none is negative)."""
    if k < k_min:
        return None
    cands = [k] if k == k_min else [k_min * (k / k_min) ** (i / (samples - 1)) for i in range(samples)]
    scored = [(minimal_margin(theta, theta1, c), -c) for c in cands]
    m, neg_c = min(scored)
    return -neg_c if m < 0 else None


def best_proof_delta(theta: float, theta1: float, delta: float, delta_max: float = 1.0, samples: int = 200):
    """Proof parameter delta' >= delta with the most negative screening margin (None if none is negative)."""
    if delta >= delta_max:
        cands = [delta]
    else:
        cands = [delta * (delta_max / delta) ** (i / (samples - 1)) for i in range(samples)]
    m, c = min((shrinker_margin(theta, theta1, c), c) for c in cands)
    return c if m < 0 else None
