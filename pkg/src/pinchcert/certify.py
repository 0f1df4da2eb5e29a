"""Sign certificates: production, serialization and independent replay.

Four evidence kinds are produced:

* ``sturm-ray`` / ``sturm-interval``: a rational polynomial, its Sturm chain,
  the recorded sign-variation counts and one sample point.
* ``radical-bound``: a radical-coefficient polynomial, a rational
  coefficientwise bound on ``x >= 0`` and an embedded Sturm certificate for it.
* ``subdivision-tail``: interval enclosures of an expression on a cover of
  ``[a, X0]`` plus one enclosure of ``expr / x**d`` over ``u = 1/x in [0, 1/X0]``.
* ``scalar``: an enclosure (and, when available, the exact radical value).

Bundles combine certificates under a named inference rule; the checker knows
each rule's required premises and replays every child.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from . import reduction as red
from . import screening
from .exact import (
    DomainError,
    RadicalNumber,
    RationalInterval,
    format_rational,
    parse_rational,
    precision_bits,
    rad_sign,
    rational,
)
from .polynomial import (
    UniPoly,
    coeff_bound_poly,
    derivative,
    isolate_real_roots,
    poly_eval,
    sign_variations,
    sturm_chain,
)

SCHEMA = "pinchcert/1"
DEFAULT_PRECISION = Fraction(1, 1 << 64)
MAX_PRECISION = Fraction(1, 1 << 512)
DEFAULT_X0 = Fraction(10**4)
SIGNS = {"positive": (1, True), "negative": (-1, True), "nonnegative": (1, False), "nonpositive": (-1, False)}
# The n >= 6 estimate needs S <= 16n/15, i.e. a proof divisor of at least 15.
MIN_PROOF_DIVISOR = Fraction(15)

VERIFIED, FALSIFIED, INCONCLUSIVE = "verified", "falsified", "inconclusive"


class MalformedCertificate(ValueError):
    """Structurally invalid certificate data."""


@dataclass
class CertStatus:
    status: str
    detail: str = ""
    precision_used: Fraction = DEFAULT_PRECISION
    witness: Optional[dict] = None
    bundle: Optional["CertificateBundle"] = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_json(self):
        out = {"status": self.status, "detail": self.detail, "precision_used": format_rational(self.precision_used)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    @classmethod
    def from_json(cls, data) -> "CertStatus":
        return cls(data["status"], data.get("detail", ""), parse_rational(data["precision_used"]), data.get("witness"))


def _fmt(q) -> str:
    return format_rational(rational(q))


def make_claim(expr: str, lo, hi=None, sign: str = "negative", params: Optional[dict] = None) -> dict:
    if sign not in SIGNS:
        raise DomainError(f"unknown sign {sign!r}")
    claim = {"expr": expr, "domain": {"lo": None if lo is None else _fmt(lo), "hi": None if hi is None else _fmt(hi)},
             "sign": sign}
    if params:
        claim["params"] = {k: _fmt(v) for k, v in sorted(params.items())}
    return claim


@dataclass
class SignCertificate:
    kind: str
    claim: dict
    evidence: dict
    status: CertStatus

    @property
    def ok(self) -> bool:
        return self.status.ok

    def to_json(self):
        return {"type": "certificate", "kind": self.kind, "claim": self.claim, "evidence": self.evidence,
                "status": self.status.to_json()}

    @classmethod
    def from_json(cls, data) -> "SignCertificate":
        try:
            return cls(data["kind"], data["claim"], data["evidence"], CertStatus.from_json(data["status"]))
        except (KeyError, TypeError) as exc:
            raise MalformedCertificate(f"bad certificate record: {exc}") from exc


@dataclass
class CertificateBundle:
    name: str
    rule: str
    conclusion: dict
    certificates: List[Union[SignCertificate, "CertificateBundle"]]
    status: CertStatus
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status.ok

    def find(self, expr: str):
        for c in self.certificates:
            if isinstance(c, SignCertificate) and c.claim["expr"] == expr:
                return c
            if isinstance(c, CertificateBundle) and c.name == expr:
                return c
        return None

    def to_json(self):
        return {"type": "bundle", "name": self.name, "rule": self.rule, "conclusion": self.conclusion,
                "notes": dict(self.notes), "status": self.status.to_json(),
                "certificates": [c.to_json() for c in self.certificates]}

    @classmethod
    def from_json(cls, data) -> "CertificateBundle":
        try:
            return cls(data["name"], data["rule"], data["conclusion"],
                       [item_from_json(c) for c in data["certificates"]], CertStatus.from_json(data["status"]),
                       dict(data.get("notes", {})))
        except (KeyError, TypeError) as exc:
            raise MalformedCertificate(f"bad bundle record: {exc}") from exc


def item_from_json(data):
    if not isinstance(data, dict):
        raise MalformedCertificate("certificate record must be an object")
    kind = data.get("type")
    if kind == "certificate":
        return SignCertificate.from_json(data)
    if kind == "bundle":
        return CertificateBundle.from_json(data)
    raise MalformedCertificate(f"unknown record type {kind!r}")


def dumps(item) -> str:
    return json.dumps({"schema": SCHEMA, **item.to_json()}, sort_keys=True, indent=1) + "\n"


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise MalformedCertificate(f"missing or unsupported schema tag (expected {SCHEMA})")
    return item_from_json(data)


def write_certificate(item, path) -> Path:
    path = Path(path)
    path.write_bytes(dumps(item).encode("utf-8"))
    return path


def read_certificate(path):
    return loads(Path(path).read_bytes().decode("utf-8"))


def _combine(statuses: Sequence[CertStatus], precision=None) -> CertStatus:
    prec = precision if precision is not None else min((s.precision_used for s in statuses), default=DEFAULT_PRECISION)
    for s in statuses:
        if s.status == FALSIFIED:
            return CertStatus(FALSIFIED, s.detail, prec, s.witness)
    for s in statuses:
        if s.status == INCONCLUSIVE:
            return CertStatus(INCONCLUSIVE, s.detail, prec)
    return CertStatus(VERIFIED, "all premises verified", prec)


def _violates(sign: int, want: int, strict: bool) -> bool:
    return sign != want and (strict or sign != 0)


def _sgn(v) -> int:
    if isinstance(v, RadicalNumber):
        return rad_sign(v)
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------- Sturm route


def _sturm_evidence(P: UniPoly, chain, a: Fraction, b: Optional[Fraction]):
    ev = {
        "poly": P.to_json(),
        "chain": [p.to_json() for p in chain.polys],
        "a": _fmt(a),
        "var_a": chain.variations_at(a),
        "sign_at_a": _sgn(poly_eval(P, a)),
    }
    if b is None:
        ev["var_end"] = chain.variations_at_infinity(True)
        sample = a + 1
    else:
        ev["b"] = _fmt(b)
        ev["var_end"] = chain.variations_at(b)
        ev["sign_at_b"] = _sgn(poly_eval(P, b))
        sample = (a + b) / 2
    ev["sample"] = {"x": _fmt(sample), "sign": _sgn(poly_eval(P, sample))}
    return ev


def _first_violation(P: UniPoly, a: Fraction, b: Optional[Fraction], want: int, strict: bool) -> Optional[Fraction]:
    """A point of [a, b] (or [a, inf)) where P violates the claimed sign, searched exactly."""
    candidates = [a] + ([b] if b is not None else [])
    for I in isolate_real_roots(P):
        for x in (I.lo, I.hi, I.mid):
            if x >= a and (b is None or x <= b):
                candidates.append(x)
    if b is None:
        candidates.append(a + 1)
    for x in candidates:
        if _violates(_sgn(poly_eval(P, x)), want, strict):
            return x
    return None


def certify_poly_sign(P: UniPoly, a, b=None, sign: str = "negative", expr: str = "poly",
                      params: Optional[dict] = None) -> SignCertificate:
    """Sign of a rational polynomial on ``[a, b]`` (``b=None``: the ray ``[a, inf)``)."""
    if P.is_zero():
        raise DomainError("sign certificate for the zero polynomial")
    P = P.to_rational()
    a = rational(a)
    b = None if b is None else rational(b)
    if b is not None and b <= a:
        raise DomainError("empty interval")
    want, strict = SIGNS[sign]
    kind = "sturm-ray" if b is None else "sturm-interval"
    claim = make_claim(expr, a, b, sign, params)
    chain = sturm_chain(P)
    if chain.squarefree_reduced:
        x = _first_violation(P, a, b, want, strict)
        if x is not None:
            return _falsified_poly(kind, claim, P, x)
        return SignCertificate(kind, claim, {"poly": P.to_json()},
                               CertStatus(INCONCLUSIVE, "polynomial is not squarefree"))
    ev = _sturm_evidence(P, chain, a, b)
    roots = ev["var_a"] - ev["var_end"]
    ok = roots == 0 and not _violates(ev["sign_at_a"], want, strict) and ev["sample"]["sign"] == want
    if b is not None:
        ok = ok and ev["sign_at_b"] == want
    if ok:
        return SignCertificate(kind, claim, ev, CertStatus(VERIFIED, f"no roots in ({a}, {'inf)' if b is None else str(b) + ']'}"))
    x = _first_violation(P, a, b, want, strict)
    if x is None:
        return SignCertificate(kind, claim, ev, CertStatus(INCONCLUSIVE, "sign change detected but no witness found"))
    return _falsified_poly(kind, claim, P, x)


def _falsified_poly(kind, claim, P, x) -> SignCertificate:
    s = _sgn(poly_eval(P, x))
    witness = {"x": _fmt(x), "sign": s}
    ev = {"poly": P.to_json(), "witness": witness}
    return SignCertificate(kind, claim, ev, CertStatus(FALSIFIED, f"value at x = {x} has sign {s}", witness=witness))


def certify_poly_sign_on_ray(P: UniPoly, a, sign: str = "negative", expr: str = "poly",
                             params: Optional[dict] = None) -> SignCertificate:
    return certify_poly_sign(P, a, None, sign, expr, params)


# ---------------------------------------------------------------- radical-bound route


def certify_radical_poly_sign_on_ray(P: UniPoly, a, sign: str = "nonnegative", precision=MAX_PRECISION,
                                     expr: str = "radical-poly", params: Optional[dict] = None,
                                     start=DEFAULT_PRECISION) -> SignCertificate:
    """Sign of a radical-coefficient polynomial on ``[a, inf)``, ``a >= 0``, via a rational bound polynomial."""
    a = rational(a)
    if a < 0:
        raise DomainError("coefficient bounds are only valid on x >= 0")
    if P.is_zero():
        raise DomainError("sign certificate for the zero polynomial")
    P = UniPoly([RadicalNumber.coerce(c) for c in P.coeffs])
    want, strict = SIGNS[sign]
    direction = "lower" if want > 0 else "upper"
    claim = make_claim(expr, a, None, sign, params)
    cap = rational(precision)
    width = max(rational(start), cap)
    tried = set()
    while True:
        D = coeff_bound_poly(P, direction, width)
        inner = certify_poly_sign_on_ray(D, a, sign, expr=f"{expr}:{direction}-bound")
        if inner.ok:
            ev = {"poly": P.to_json(), "direction": direction, "precision": _fmt(width),
                  "bound_poly": D.to_json(), "inner": inner.to_json()}
            return SignCertificate("radical-bound", claim, ev,
                                   CertStatus(VERIFIED, f"{direction} bound certified at width {width}", width))
        candidates = [a]
        if inner.status.witness is not None:
            candidates.append(parse_rational(inner.status.witness["x"]))
        for x in candidates:
            if x in tried:
                continue
            tried.add(x)
            s = rad_sign(poly_eval(P, x))
            if _violates(s, want, strict):
                witness = {"x": _fmt(x), "sign": s}
                ev = {"poly": P.to_json(), "witness": witness}
                return SignCertificate("radical-bound", claim, ev,
                                       CertStatus(FALSIFIED, f"exact value at x = {x} has sign {s}", width, witness))
        if width <= cap:
            ev = {"poly": P.to_json()}
            return SignCertificate("radical-bound", claim, ev,
                                   CertStatus(INCONCLUSIVE, f"bound polynomial not certified at width {width}", width))
        width = max(width * width, cap) if width < 1 else width / 2


# ---------------------------------------------------------------- subdivision-tail route


def _x_split(lo: Fraction, hi: Fraction) -> Fraction:
    return 2 * lo if hi > 4 * lo else (lo + hi) / 2


def _scaled_on(expr: red.RayExpression, lo: Fraction, hi: Optional[Fraction], bits: int) -> RationalInterval:
    u = RationalInterval(Fraction(0) if hi is None else 1 / hi, 1 / lo)
    return expr.scaled(u, bits)


def _point_sign(expr: red.RayExpression, x: Fraction, bits: int):
    try:
        return expr.scaled(RationalInterval(1 / x), bits).sign()
    except DomainError:
        return None


def _witness_search(expr, a: Fraction, X0: Fraction, want: int, strict: bool, bits: int, rounds: int = 4):
    """Point scan on a geometric grid, then zoom in around the point closest to violating the claim."""
    xs = [a] + [Fraction(float(a) * float(X0 / a) ** (j / 64)).limit_denominator(1 << 20) for j in range(1, 64)] + [X0]
    xs = sorted(set(x for x in xs if a <= x <= X0))
    scored = []
    for x in xs:
        try:
            enc = expr.scaled(RationalInterval(1 / x), bits)
        except DomainError:
            continue
        s = enc.sign()
        if s is not None and _violates(s, want, strict):
            return x, s
        scored.append((-want * enc.mid, x))
    if not scored:
        return None
    best_x = max(scored)[1]
    i = xs.index(best_x)
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    for _ in range(rounds):
        grid = [lo + (hi - lo) * j / 16 for j in range(17)]
        local = []
        for x in grid:
            enc = expr.scaled(RationalInterval(1 / x), bits)
            s = enc.sign()
            if s is not None and _violates(s, want, strict):
                return x, s
            local.append((-want * enc.mid, x))
        j = grid.index(max(local)[1])
        lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, 16)]
    return None


def certify_expr_sign_on_ray(expr: red.RayExpression, a, X0=DEFAULT_X0, sign: str = "negative",
                             precision=MAX_PRECISION, start_bits: int = 64, max_pieces: int = 20000,
                             params: Optional[dict] = None) -> SignCertificate:
    """Sign of ``x**d * scaled(1/x)`` on ``[a, inf)`` by subdivision of ``[a, X0]`` and a tail enclosure.

    The tail enclosure evaluates ``scaled`` over ``u in [0, 1/X0]``; since
    ``x**d > 0`` its sign is the sign of the expression on ``[X0, inf)``.
    """
    a, X0 = rational(a), rational(X0)
    if not X0 > a > 0:
        raise DomainError("need 0 < a < X0")
    want, strict = SIGNS[sign]
    cap_bits = max(precision_bits(rational(precision)), start_bits)
    claim = make_claim(expr.name, a, None, sign, params if params is not None else expr.params)
    pieces = []
    bits = start_bits
    stack = [(a, X0)]
    min_rel = Fraction(1, 1 << 40)
    used_bits = bits
    unresolved = None

    def fail(detail, x=None, s=None):
        witness = None if x is None else {"x": _fmt(x), "sign": s, "bits": used_bits}
        status = FALSIFIED if witness else INCONCLUSIVE
        ev = {"scale_degree": expr.scale_degree, "witness": witness} if witness else {"scale_degree": expr.scale_degree}
        return SignCertificate("subdivision-tail", claim, ev,
                               CertStatus(status, detail, Fraction(1, 1 << used_bits), witness))

    def resolves(enc: Optional[RationalInterval]) -> bool:
        if enc is None:
            return False
        return (enc.lo > 0 if want > 0 else enc.hi < 0) if strict else (enc.lo >= 0 if want > 0 else enc.hi <= 0)

    def evaluate(lo, hi, b):
        try:
            return _scaled_on(expr, lo, hi, b)
        except DomainError:
            return None

    witness = _witness_search(expr, a, X0, want, strict, bits)
    if witness is not None:
        x, s = witness
        return fail(f"enclosure at x = {x} has sign {s}", x, s)

    while stack:
        lo, hi = stack.pop()
        enc = evaluate(lo, hi, bits)
        b = bits
        while not resolves(enc) and (hi - lo) <= lo * min_rel and b < cap_bits:
            b *= 2
            enc = evaluate(lo, hi, b)
        used_bits = max(used_bits, b)
        if resolves(enc):
            pieces.append((lo, hi, enc))
            continue
        at_floor = (hi - lo) <= lo * min_rel
        if at_floor or (enc is not None and enc.sign() == -want):
            for x in (lo, hi):
                s = _point_sign(expr, x, b)
                if s is not None and _violates(s, want, strict):
                    return fail(f"enclosure at x = {x} has sign {s}", x, s)
        if at_floor:
            unresolved = unresolved or lo
            continue
        if len(pieces) + len(stack) > max_pieces:
            return fail(f"subdivision budget of {max_pieces} pieces exhausted near x = {lo}")
        m = _x_split(lo, hi)
        stack.append((m, hi))
        stack.append((lo, m))

    if unresolved:
        return fail(f"subdivision reached the width floor near x = {unresolved} at {used_bits} bits")
    tail = None
    b = bits
    while b <= cap_bits:
        tail = evaluate(X0, None, b)
        if resolves(tail):
            break
        b *= 2
    used_bits = max(used_bits, min(b, cap_bits))
    if not resolves(tail):
        x = X0
        for _ in range(64):
            x *= 16
            s = _point_sign(expr, x, cap_bits)
            if s is not None and _violates(s, want, strict):
                return fail(f"enclosure at x = {x} has sign {s}", x, s)
        return fail("tail enclosure does not carry the claimed sign")
    pieces.sort(key=lambda t: t[0])
    ev = {
        "scale_degree": expr.scale_degree,
        "X0": _fmt(X0),
        "pieces": [[[_fmt(lo), _fmt(hi)], enc.to_json()] for lo, hi, enc in pieces],
        "tail": {"u": ["0", _fmt(1 / X0)], "enclosure": tail.to_json()},
        "bits": used_bits,
    }
    return SignCertificate("subdivision-tail", claim, ev,
                           CertStatus(VERIFIED, f"{len(pieces)} pieces plus tail from X0 = {X0}",
                                      Fraction(1, 1 << used_bits)))


# ---------------------------------------------------------------- scalars


def certify_scalar(value, sign: str, expr: str, params: Optional[dict] = None,
                   precision=MAX_PRECISION, start_bits: int = 8) -> SignCertificate:
    """Sign of an exact radical value or of an enclosure function ``bits -> RationalInterval``.

    Precision starts coarse and doubles until the enclosure excludes zero.
    """
    want, strict = SIGNS[sign]
    claim = make_claim(expr, None, None, sign, params)
    cap_bits = max(precision_bits(rational(precision)), start_bits)
    exact = None
    if isinstance(value, (RadicalNumber, Fraction, int, str)):
        exact = RadicalNumber.coerce(rational(value) if isinstance(value, str) else value)
        fn = exact.enclose_bits
    else:
        fn = value
    bits = start_bits
    while True:
        enc = fn(bits)
        s = enc.sign()
        ev = {"enclosure": enc.to_json(), "bits": bits}
        if exact is not None:
            ev["exact"] = exact.to_json()
        prec = Fraction(1, 1 << bits)
        if s is not None:
            if not _violates(s, want, strict):
                return SignCertificate("scalar", claim, ev, CertStatus(VERIFIED, f"enclosure {enc}", prec))
            witness = {"enclosure": enc.to_json(), "sign": s}
            ev["witness"] = witness
            return SignCertificate("scalar", claim, ev, CertStatus(FALSIFIED, f"enclosure {enc} has sign {s}", prec,
                                                                   witness))
        if exact is not None and exact.is_rational() and exact.rational_part() == 0:
            ok = not strict
            witness = None if ok else {"enclosure": enc.to_json(), "sign": 0}
            if witness:
                ev["witness"] = witness
            return SignCertificate("scalar", claim, ev,
                                   CertStatus(VERIFIED if ok else FALSIFIED, "value is exactly zero", prec, witness))
        if bits >= cap_bits:
            return SignCertificate("scalar", claim, ev, CertStatus(INCONCLUSIVE, f"enclosure {enc} straddles 0", prec))
        bits *= 2


# ---------------------------------------------------------------- case bundles


def _bundle(name, rule, conclusion, certs, notes=None) -> CertificateBundle:
    status = _combine([c.status for c in certs])
    return CertificateBundle(name, rule, conclusion, list(certs), status, dict(notes or {}))


def verify_case1(q1: Optional[UniPoly] = None, precision=MAX_PRECISION) -> CertificateBundle:
    """g1 < 0 on [6, inf) from its factorization (Z - W) / ((M + P)(x+4)^2(x-2)^2 B).

    M >= 0 is a square root; P > 0 follows from the prefactor numerator and
    x + 4 > 0; Z - W <= Q1 < 0 gives the sign of the numerator.
    """
    Q1 = red.build_Q1() if q1 is None else q1
    X = red.X
    diff = Q1 - (red.build_Z() - red.build_W())
    certs = [
        certify_poly_sign_on_ray(red.case1_prefactor_numerator(), 6, "positive", "case1-prefactor-numerator"),
        certify_poly_sign_on_ray(X + 4, 6, "positive", "x+4"),
        certify_radical_poly_sign_on_ray(red.lemma_bracket_B(), 6, "positive", precision, "lemma-bracket-B"),
        certify_poly_sign_on_ray((X - 2) * (X + 4), 6, "positive", "(x-2)(x+4)"),
        certify_radical_poly_sign_on_ray(diff, 0, "nonnegative", precision, "Q1-(Z-W)"),
        certify_poly_sign_on_ray(Q1, 3, "negative", "Q1"),
    ]
    return _bundle("case1", "case1", make_claim("g1", 6, None, "negative"), certs)


def verify_case2(q2: Optional[UniPoly] = None, precision=MAX_PRECISION) -> CertificateBundle:
    """g2 < 0 on [6, inf): g2 is increasing there and its limit at infinity is negative.

    The derivative is a positive prefactor times a degree-5 numerator. The
    printed numerator and its minorant 10^4 Q2 are certified as stated; the
    numerator of the evaluated g2 (U3 coefficient (sqrt17-3)sqrt11/88) is
    certified positive directly and is the premise the monotonicity rule uses.
    """
    Q2 = red.build_Q2() if q2 is None else q2
    X = red.X
    lim = red.g2_limit
    certs = [
        certify_radical_poly_sign_on_ray(red.build_Rx() - 10000 * Q2, 0, "nonnegative", precision, "R-10000*Q2"),
        certify_poly_sign_on_ray(Q2, 3, "positive", "Q2"),
        certify_radical_poly_sign_on_ray(red.lemma_bracket_N(), 6, "positive", precision, "lemma-bracket-N"),
        certify_radical_poly_sign_on_ray(red.lemma_bracket_B(), 6, "positive", precision, "lemma-bracket-B"),
        certify_radical_poly_sign_on_ray(red.line_Lx66(), 6, "positive", precision, "line-Lx-66"),
        certify_poly_sign_on_ray(X - 2, 6, "positive", "x-2"),
        certify_poly_sign_on_ray(X, 6, "positive", "x"),
        certify_scalar(red._g_constant, "positive", "g-constant"),
        certify_radical_poly_sign_on_ray(red.build_Rx(red.DERIVED_U3_COEFF), 3, "positive", precision,
                                         "g2-derivative-numerator"),
        certify_scalar(lambda bits: red.g2_scaled(Fraction(0), bits), "negative", "g2-limit", start_bits=16),
    ]
    return _bundle("case2", "case2", make_claim("g2", 6, None, "negative"), certs)


# ---------------------------------------------------------------- theorems


def _smalln_certs(k: Fraction):
    certs, binding = [], {}
    for n in (2, 3, 4, 5):
        vals = []
        for label, S in (("lo", Fraction(n)), ("hi", n + n / k)):
            v = red.smalln_coefficient_exact(n, k, S)
            certs.append(certify_scalar(v, "negative", f"smalln-n{n}-S{label}", {"n": n, "k": k, "S": S}))
            vals.append((float(v), label))
        binding[f"n{n}"] = max(vals)[1]
    return certs, binding


def _params(theta, theta1, k):
    return {"theta": theta, "theta1": theta1, "k": k}


def verify_minimal_theorem(theta, theta1, k, precision=MAX_PRECISION, X0=DEFAULT_X0,
                           use_cases: Optional[bool] = None, proof_k=None) -> CertStatus:
    """Theorem-level check for pinching S in [n, n + n/k]; the bundle rides on ``status.bundle``.

    n = 2..5 are checked at both S-endpoints. For n >= 6 both coefficients
    must be negative for all real x >= 6 at a proof divisor k' with
    15 <= k' <= k (a pinching at k is also a pinching at k'). At the printed
    parameters with k >= 22 the hand-made Case I/II bundles are used.
    """
    theta, theta1, k = rational(theta), rational(theta1), rational(k)
    red.MinimalParams(theta, theta1, k)
    conclusion = make_claim("minimal-theorem", None, None, "negative", _params(theta, theta1, k))
    certs, binding = _smalln_certs(k)
    notes = {f"binding-{key}": val for key, val in binding.items()}
    small = _combine([c.status for c in certs])
    if small.status != VERIFIED:
        bundle = CertificateBundle("minimal-theorem", "minimal-theorem", conclusion, certs, small, notes)
        small.bundle = bundle
        return small
    ref = red.REFERENCE_MINIMAL
    if use_cases is None:
        use_cases = (theta, theta1) == (ref.theta, ref.theta1) and k >= ref.k and proof_k is None
    if use_cases:
        kp = ref.k
        children = [verify_case1(precision=precision), verify_case2(precision=precision)]
    else:
        if proof_k is not None:
            kp = rational(proof_k)
        elif k < MIN_PROOF_DIVISOR:
            kp = None
        elif screening.minimal_margin(float(theta), float(theta1), float(k)) < 0:
            kp = k
        else:
            found = screening.best_proof_divisor(float(theta), float(theta1), float(k), float(MIN_PROOF_DIVISOR))
            kp = k if found is None else _nice_between(found, MIN_PROOF_DIVISOR, k)
        if kp is None:
            status = CertStatus(INCONCLUSIVE, f"the n >= 6 estimate needs k >= {MIN_PROOF_DIVISOR}")
            bundle = CertificateBundle("minimal-theorem", "minimal-theorem", conclusion, certs, status, notes)
            status.bundle = bundle
            return status
        grad, exc = red.minimal_expressions(theta, theta1, kp)
        children = [certify_expr_sign_on_ray(grad, 6, X0, "negative", precision),
                    certify_expr_sign_on_ray(exc, 6, X0, "negative", precision)]
    notes["proof_k"] = _fmt(kp)
    notes["route"] = "cases" if use_cases else "subdivision"
    all_certs = certs + children
    status = _combine([c.status for c in all_certs])
    if status.ok:
        status.detail = f"n = 2..5 by endpoint checks; n >= 6 via {notes['route']} at proof divisor {kp}"
    bundle = CertificateBundle("minimal-theorem", "minimal-theorem", conclusion, all_certs, status, notes)
    status.bundle = bundle
    return status


def _nice_between(value: float, lo: Fraction, hi: Fraction) -> Fraction:
    """A short rational near ``value`` clamped to [lo, hi]."""
    q = Fraction(value).limit_denominator(1000)
    return min(max(q, lo), hi)


def _shrinker_certs(theta, theta1, delta, precision):
    p = {"theta": theta, "theta1": theta1, "delta": delta}
    args = (theta, theta1, delta)
    return [
        certify_scalar(lambda bits: red.shrinker_gradA_coefficient(*args, bits), "negative",
                       "shrinker-coeff-gradA", p, precision),
        certify_scalar(lambda bits: red.shrinker_excess_coefficient(*args, bits), "negative",
                       "shrinker-coeff-excess", p, precision),
        certify_scalar(lambda bits: red.C4_of(theta, Fraction(1, 1 << bits)), "positive", "C4", {"theta": theta},
                       precision),
    ]


def verify_shrinker_theorem(delta, theta, theta1, precision=MAX_PRECISION, proof_delta=None) -> CertStatus:
    """Theorem-level check for |A|^2 in [1, 1 + delta]; proof parameter delta' >= delta allowed."""
    delta, theta, theta1 = rational(delta), rational(theta), rational(theta1)
    red.ShrinkerParams(delta, theta, theta1)
    conclusion = make_claim("shrinker-theorem", None, None, "negative",
                            {"theta": theta, "theta1": theta1, "delta": delta})

    def attempt(dp):
        try:
            return _shrinker_certs(theta, theta1, dp, precision)
        except DomainError as exc:
            return [SignCertificate("scalar", make_claim("shrinker-coeff-gradA", None, None, "negative"), {},
                                    CertStatus(INCONCLUSIVE, str(exc)))]

    dp = delta if proof_delta is None else rational(proof_delta)
    if dp < delta:
        raise DomainError("the proof parameter must be at least delta")
    certs = attempt(dp)
    status = _combine([c.status for c in certs])
    if not status.ok and proof_delta is None:
        found = screening.best_proof_delta(float(theta), float(theta1), float(delta))
        if found is not None and found > float(delta):
            alt_dp = max(_nice_between(found, delta, Fraction(1)), delta)
            alt = attempt(alt_dp)
            alt_status = _combine([c.status for c in alt])
            if alt_status.ok:
                dp, certs, status = alt_dp, alt, alt_status
    if status.ok:
        status.detail = f"both coefficients negative at proof parameter delta' = {dp}"
    bundle = CertificateBundle("shrinker-theorem", "shrinker-theorem", conclusion, certs, status,
                               {"proof_delta": _fmt(dp)})
    status.bundle = bundle
    return status


# ---------------------------------------------------------------- replay


def _need(data: dict, *keys):
    for k in keys:
        if k not in data:
            raise MalformedCertificate(f"missing field {k!r}")
    return [data[k] for k in keys]


def _domain(claim) -> tuple:
    dom = _need(claim, "domain")[0]
    lo, hi = _need(dom, "lo", "hi")
    return (None if lo is None else parse_rational(lo)), (None if hi is None else parse_rational(hi))


def _positive_multiple(A: UniPoly, B: UniPoly) -> bool:
    if A.is_zero() or B.is_zero() or A.degree != B.degree:
        return False
    c = A.lc / B.lc
    return c > 0 and A == B.scale(c)


def _check_chain(P: UniPoly, chain: List[UniPoly]) -> Optional[str]:
    if not chain:
        return "empty chain"
    if not _positive_multiple(P, chain[0]):
        return "chain does not start with the polynomial"
    if chain[0].degree >= 1:
        if len(chain) < 2 or not _positive_multiple(derivative(chain[0]), chain[1]):
            return "second chain entry is not the derivative"
    for i in range(1, len(chain) - 1):
        r = chain[i - 1] % chain[i]
        if not _positive_multiple(-r, chain[i + 1]):
            return f"chain recurrence fails at entry {i + 1}"
    if chain[-1].degree != 0:
        return "chain does not end in a nonzero constant"
    return None


def _fail(detail, witness=None, prec=DEFAULT_PRECISION) -> CertStatus:
    return CertStatus(FALSIFIED, detail, prec, witness)


def _check_sturm(cert: SignCertificate) -> CertStatus:
    want, strict = SIGNS[cert.claim["sign"]]
    a, b = _domain(cert.claim)
    ev = cert.evidence
    P = UniPoly.from_json(_need(ev, "poly")[0]).to_rational()
    if "witness" in ev:
        x = parse_rational(ev["witness"]["x"])
        s = _sgn(poly_eval(P, x))
        if x >= a and (b is None or x <= b) and _violates(s, want, strict):
            return _fail(f"claim refuted at x = {x}", ev["witness"])
        return _fail("witness does not refute the claim")
    chain_raw, a_txt, var_a, var_end, sign_a, sample = _need(ev, "chain", "a", "var_a", "var_end", "sign_at_a", "sample")
    chain = [UniPoly.from_json(c).to_rational() for c in chain_raw]
    if parse_rational(a_txt) != a:
        return _fail("evidence endpoint differs from the claimed domain")
    why = _check_chain(P, chain)
    if why:
        return _fail(why)

    def var(x):
        return sign_variations([_sgn(poly_eval(p, x)) for p in chain])

    if var(a) != var_a:
        return _fail("recorded variations at a are wrong")
    if b is None:
        if cert.kind != "sturm-ray":
            return _fail("ray domain on an interval certificate")
        if sign_variations([_sgn(p.lc) for p in chain]) != var_end:
            return _fail("recorded variations at infinity are wrong")
        if _sgn(P.lc) != want:
            return _fail("sign at infinity contradicts the claim")
    else:
        if cert.kind != "sturm-interval" or parse_rational(_need(ev, "b")[0]) != b:
            return _fail("evidence endpoint differs from the claimed domain")
        if var(b) != var_end:
            return _fail("recorded variations at b are wrong")
        if _need(ev, "sign_at_b")[0] != _sgn(poly_eval(P, b)) or _sgn(poly_eval(P, b)) != want:
            return _fail("sign at b contradicts the claim")
    if var_a != var_end:
        return _fail(f"{var_a - var_end} roots inside the domain")
    if sign_a != _sgn(poly_eval(P, a)) or _violates(sign_a, want, strict):
        return _fail("sign at a contradicts the claim")
    xs = parse_rational(_need(sample, "x")[0])
    if not (xs > a and (b is None or xs < b)):
        return _fail("sample point outside the domain")
    if sample["sign"] != _sgn(poly_eval(P, xs)) or sample["sign"] != want:
        return _fail("sample sign is wrong")
    return CertStatus(VERIFIED, "Sturm replay passed")


def _check_radical(cert: SignCertificate) -> CertStatus:
    want, strict = SIGNS[cert.claim["sign"]]
    a, b = _domain(cert.claim)
    ev = cert.evidence
    if a is None or a < 0 or b is not None:
        return _fail("coefficient bounds need a ray inside [0, inf)")
    P = UniPoly.from_json(_need(ev, "poly")[0])
    if "witness" in ev:
        x = parse_rational(ev["witness"]["x"])
        s = rad_sign(poly_eval(P, x))
        if x >= a and _violates(s, want, strict):
            return _fail(f"claim refuted at x = {x}", ev["witness"])
        return _fail("witness does not refute the claim")
    direction, prec_txt, bound_raw, inner_raw = _need(ev, "direction", "precision", "bound_poly", "inner")
    if direction != ("lower" if want > 0 else "upper"):
        return _fail("bound direction does not match the claimed sign")
    prec = parse_rational(prec_txt)
    D = UniPoly.from_json(bound_raw)
    if D.degree > P.degree:
        return _fail("bound polynomial has too high degree")
    for i in range(max(P.degree, D.degree) + 1):
        p = RadicalNumber.coerce(P.coeffs[i]) if i <= P.degree else RadicalNumber()
        d = D.coeffs[i] if i <= D.degree else Fraction(0)
        gap = p - d if direction == "lower" else d - p
        if rad_sign(gap) < 0 or rad_sign(prec - gap) < 0:
            return _fail(f"coefficient {i} of the bound polynomial is not a valid bound")
    inner = item_from_json(inner_raw)
    if not isinstance(inner, SignCertificate) or inner.kind != "sturm-ray":
        return _fail("embedded certificate must be a Sturm ray certificate")
    if UniPoly.from_json(inner.evidence.get("poly", [])) != D.to_rational():
        return _fail("embedded certificate is about a different polynomial")
    ia, _ = _domain(inner.claim)
    if ia is None or ia > a:
        return _fail("embedded certificate does not cover the domain")
    iwant, istrict = SIGNS[inner.claim["sign"]]
    if iwant != want or (strict and not istrict):
        return _fail("embedded certificate asserts a weaker sign")
    st = _check_sturm(inner)
    if not st.ok:
        return _fail(f"embedded certificate: {st.detail}")
    return CertStatus(VERIFIED, "bound and embedded Sturm replay passed", prec)


def _enc_ok(enc: RationalInterval, want: int, strict: bool) -> bool:
    if strict:
        return enc.lo > 0 if want > 0 else enc.hi < 0
    return enc.lo >= 0 if want > 0 else enc.hi <= 0


def _check_subdivision(cert: SignCertificate) -> CertStatus:
    want, strict = SIGNS[cert.claim["sign"]]
    a, b = _domain(cert.claim)
    ev = cert.evidence
    if "witness" in ev and ev["witness"]:
        return _fail("certificate records a sign-violating enclosure", ev["witness"])
    X0_txt, pieces, tail, bits = _need(ev, "X0", "pieces", "tail", "bits")
    X0 = parse_rational(X0_txt)
    if a is None or b is not None or not X0 > a > 0:
        return _fail("domain must be a ray [a, inf) with 0 < a < X0")
    cursor = a
    for item in pieces:
        (lo_t, hi_t), enc_raw = item
        lo, hi = parse_rational(lo_t), parse_rational(hi_t)
        if lo != cursor or hi <= lo:
            return _fail(f"coverage gap or overlap at x = {cursor}")
        if not _enc_ok(RationalInterval.from_json(enc_raw), want, strict):
            return _fail(f"enclosure on [{lo}, {hi}] does not carry the claimed sign")
        cursor = hi
    if cursor != X0:
        return _fail(f"pieces stop at {cursor}, before X0 = {X0}")
    u_lo, u_hi = (parse_rational(t) for t in _need(tail, "u")[0])
    if u_lo != 0 or u_hi != 1 / X0:
        return _fail("tail does not cover [X0, inf)")
    if not _enc_ok(RationalInterval.from_json(_need(tail, "enclosure")[0]), want, strict):
        return _fail("tail enclosure does not carry the claimed sign")
    return CertStatus(VERIFIED, f"{len(pieces)} pieces and tail replayed", Fraction(1, 1 << int(bits)))


def _check_scalar(cert: SignCertificate) -> CertStatus:
    want, strict = SIGNS[cert.claim["sign"]]
    ev = cert.evidence
    enc = RationalInterval.from_json(_need(ev, "enclosure")[0])
    if "exact" in ev:
        v = RadicalNumber.from_json(ev["exact"])
        if rad_sign(v - enc.lo) < 0 or rad_sign(enc.hi - v) < 0:
            return _fail("enclosure does not contain the exact value")
        s = rad_sign(v)
        if _violates(s, want, strict):
            return _fail(f"exact value has sign {s}", {"sign": s})
        return CertStatus(VERIFIED, "exact sign replayed")
    if "witness" in ev:
        return _fail("certificate records a sign-violating enclosure", ev["witness"])
    if not _enc_ok(enc, want, strict):
        return _fail("enclosure does not carry the claimed sign")
    return CertStatus(VERIFIED, "enclosure sign replayed")


_CHECKERS = {
    "sturm-ray": _check_sturm,
    "sturm-interval": _check_sturm,
    "radical-bound": _check_radical,
    "subdivision-tail": _check_subdivision,
    "scalar": _check_scalar,
}

# Premises each rule needs: (expr, sign, latest admissible domain start).
_RULE_PREMISES = {
    "case1": [
        ("case1-prefactor-numerator", "positive", 6),
        ("x+4", "positive", 6),
        ("lemma-bracket-B", "positive", 6),
        ("(x-2)(x+4)", "positive", 6),
        ("Q1-(Z-W)", "nonnegative", 0),
        ("Q1", "negative", 3),
    ],
    "case2": [
        ("R-10000*Q2", "nonnegative", 0),
        ("Q2", "positive", 3),
        ("lemma-bracket-N", "positive", 6),
        ("lemma-bracket-B", "positive", 6),
        ("line-Lx-66", "positive", 6),
        ("x-2", "positive", 6),
        ("x", "positive", 6),
        ("g-constant", "positive", None),
        ("g2-derivative-numerator", "positive", 6),
        ("g2-limit", "negative", None),
    ],
}
_RULE_CONCLUSION = {"case1": ("g1", "negative", 6), "case2": ("g2", "negative", 6)}


def _premise_ok(item, sign, start) -> bool:
    if not isinstance(item, SignCertificate):
        return False
    iw, istrict = SIGNS[item.claim["sign"]]
    w, strict = SIGNS[sign]
    if iw != w or (strict and not istrict):
        return False
    lo, hi = _domain(item.claim)
    if start is None:
        return lo is None and hi is None
    return hi is None and lo is not None and lo <= start


def _check_rule(bundle: CertificateBundle) -> Optional[str]:
    rule = bundle.rule
    if rule in _RULE_PREMISES:
        expr, sign, start = _RULE_CONCLUSION[rule]
        c = bundle.conclusion
        if c.get("expr") != expr or c.get("sign") != sign or _domain(c) != (Fraction(start), None):
            return "conclusion does not follow from this rule"
        for name, psign, pstart in _RULE_PREMISES[rule]:
            if not _premise_ok(bundle.find(name), psign, pstart):
                return f"premise {name} missing or too weak"
        return None
    if rule == "minimal-theorem":
        return _check_minimal_rule(bundle)
    if rule == "shrinker-theorem":
        return _check_shrinker_rule(bundle)
    return f"unknown rule {rule!r}"


def _claim_params(claim) -> Dict[str, Fraction]:
    return {k: parse_rational(v) for k, v in claim.get("params", {}).items()}


def _check_minimal_rule(bundle: CertificateBundle) -> Optional[str]:
    p = _claim_params(bundle.conclusion)
    try:
        theta, theta1, k = p["theta"], p["theta1"], p["k"]
    except KeyError:
        return "conclusion lacks parameters"
    for n in (2, 3, 4, 5):
        for label, S in (("lo", Fraction(n)), ("hi", n + n / k)):
            item = bundle.find(f"smalln-n{n}-S{label}")
            if not _premise_ok(item, "negative", None) or _claim_params(item.claim) != {"n": n, "k": k, "S": S}:
                return f"small-dimension premise n = {n}, S = {S} missing"
            if "exact" not in item.evidence or RadicalNumber.from_json(item.evidence["exact"]) != \
                    red.smalln_coefficient_exact(n, k, S):
                return f"small-dimension value for n = {n} is not the coefficient"
    kp = parse_rational(bundle.notes.get("proof_k", "0"))
    if not MIN_PROOF_DIVISOR <= kp <= k:
        return "proof divisor must lie in [15, k]"
    route = bundle.notes.get("route")
    if route == "cases":
        ref = red.REFERENCE_MINIMAL
        if (theta, theta1, kp) != (ref.theta, ref.theta1, ref.k):
            return "case bundles only apply at the printed parameters"
        for name in ("case1", "case2"):
            sub = bundle.find(name)
            if not isinstance(sub, CertificateBundle) or sub.rule != name:
                return f"{name} bundle missing"
        return None
    if route == "subdivision":
        want = {"theta": theta, "theta1": theta1, "k": kp}
        for name in ("minimal-coeff-gradA", "minimal-coeff-excess"):
            item = bundle.find(name)
            if not _premise_ok(item, "negative", 6) or _claim_params(item.claim) != want:
                return f"premise {name} missing or at other parameters"
        return None
    return "unknown proof route"


def _check_shrinker_rule(bundle: CertificateBundle) -> Optional[str]:
    p = _claim_params(bundle.conclusion)
    try:
        theta, theta1, delta = p["theta"], p["theta1"], p["delta"]
    except KeyError:
        return "conclusion lacks parameters"
    dp = parse_rational(bundle.notes.get("proof_delta", "0"))
    if dp < delta:
        return "proof parameter must be at least delta"
    for name in ("shrinker-coeff-gradA", "shrinker-coeff-excess"):
        item = bundle.find(name)
        if not _premise_ok(item, "negative", None) or _claim_params(item.claim) != \
                {"theta": theta, "theta1": theta1, "delta": dp}:
            return f"premise {name} missing or at other parameters"
    item = bundle.find("C4")
    if not _premise_ok(item, "positive", None) or _claim_params(item.claim) != {"theta": theta}:
        return "C4 premise missing"
    return None


def check_certificate(item) -> CertStatus:
    """Replay a certificate or bundle (object, parsed JSON dict, or serialized text)."""
    if isinstance(item, str):
        item = loads(item)
    elif isinstance(item, dict):
        item = item_from_json(item)
    if isinstance(item, CertificateBundle):
        statuses = [check_certificate(c) for c in item.certificates]
        combined = _combine(statuses)
        if combined.status != VERIFIED:
            return combined
        why = _check_rule(item)
        if why:
            return _fail(f"{item.name}: {why}")
        return CertStatus(VERIFIED, f"{item.name}: {len(statuses)} premises and rule replayed", combined.precision_used)
    if not isinstance(item, SignCertificate):
        raise MalformedCertificate("not a certificate")
    if item.claim.get("sign") not in SIGNS:
        raise MalformedCertificate("claim has no valid sign")
    checker = _CHECKERS.get(item.kind)
    if checker is None:
        raise MalformedCertificate(f"unknown certificate kind {item.kind!r}")
    try:
        return checker(item)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, MalformedCertificate):
            raise
        raise MalformedCertificate(f"{item.kind}: {exc}") from exc
