import copy
import json
import random
from fractions import Fraction as F

import pytest

from pinchcert import certify as C
from pinchcert import reduction as red
from pinchcert.exact import SQRT6, DomainError, RationalInterval
from pinchcert.polynomial import UniPoly


@pytest.fixture(scope="module")
def case1():
    return C.verify_case1()


@pytest.fixture(scope="module")
def case2():
    return C.verify_case2()


@pytest.fixture(scope="module")
def generic_minimal():
    return C.verify_minimal_theorem("0.866", "0.83", 22, use_cases=False)


@pytest.fixture(scope="module")
def shrinker():
    return C.verify_shrinker_theorem(F(1, 21), "0.836", "0.81")


# ---- examples -------------------------------------------------------------

def test_poly_sign_examples():
    assert C.certify_poly_sign_on_ray(red.build_Q1(), 3, "negative").status.ok
    assert C.certify_poly_sign_on_ray(red.build_Q2(), 3, "positive").status.ok
    assert C.certify_poly_sign_on_ray(UniPoly([-1]), 0, "negative").status.ok
    bad = C.certify_poly_sign_on_ray(red.build_Q2(), 0, "positive")
    assert bad.status.status == C.FALSIFIED
    x = F(bad.status.witness["x"])
    assert 0 <= x < 3
    assert C.check_certificate(bad).status == C.FALSIFIED


def test_interval_sign_certificate():
    cert = C.certify_poly_sign(red.build_Q1(), 3, 100, "negative")
    assert cert.kind == "sturm-interval" and cert.status.ok
    assert C.check_certificate(cert).ok


def test_radical_examples():
    Q1, Z, W = red.build_Q1(), red.build_Z(), red.build_W()
    c = C.certify_radical_poly_sign_on_ray(Q1 - (Z - W), 0, "nonnegative")
    assert c.status.ok and c.status.precision_used >= C.MAX_PRECISION
    R, Q2 = red.build_Rx(), red.build_Q2()
    c2 = C.certify_radical_poly_sign_on_ray(R - Q2.scale(10000), 0, "nonnegative")
    assert c2.status.ok
    easy = C.certify_radical_poly_sign_on_ray(UniPoly([1, SQRT6]), 0, "nonnegative")
    assert easy.status.ok and easy.status.precision_used == F(1, 2**64)
    with pytest.raises(DomainError):
        C.certify_radical_poly_sign_on_ray(UniPoly([1, SQRT6]), -1, "nonnegative")
    for cert in (c, c2, easy):
        assert C.check_certificate(cert).ok


def test_radical_refutation_has_witness():
    cert = C.certify_radical_poly_sign_on_ray(UniPoly([-1, SQRT6]), 0, "nonnegative")
    assert cert.status.status == C.FALSIFIED and cert.status.witness is not None


def test_constant_expression_single_piece():
    cert = C.certify_expr_sign_on_ray(red.constant_expression(-1), 6, 100, "negative")
    assert cert.status.ok and len(cert.evidence["pieces"]) == 1
    assert C.check_certificate(cert).ok


def test_case1_bundle(case1):
    assert case1.status.ok
    assert case1.find("Q1").status.ok
    assert case1.find("case1-prefactor-numerator").status.ok
    assert C.check_certificate(case1).ok


def test_case1_tampered_q1():
    Q1 = red.build_Q1()
    tampered = UniPoly([-40] + Q1.coeffs[1:])
    b = C.verify_case1(q1=tampered)
    assert not b.status.ok
    assert b.find("Q1-(Z-W)").status.status == C.FALSIFIED or b.find("Q1").status.status == C.FALSIFIED


def test_case2_bundle(case2):
    assert case2.status.ok
    lim = RationalInterval.from_json(case2.find("g2-limit").evidence["enclosure"])
    assert F("-0.05") < lim.lo and lim.hi < F("-0.04")
    assert C.check_certificate(case2).ok


def test_case2_mutated_q2():
    b = C.verify_case2(q2=-red.build_Q2())
    assert b.find("Q2").status.status == C.FALSIFIED


def test_minimal_theorem_examples(generic_minimal):
    st = C.verify_minimal_theorem("0.866", "0.83", 22)
    assert st.ok and st.bundle.notes["route"] == "cases"
    assert {"binding-n2", "binding-n3", "binding-n4", "binding-n5"} <= set(st.bundle.notes)
    assert generic_minimal.ok and generic_minimal.bundle.notes["route"] == "subdivision"
    low = C.verify_minimal_theorem("0.866", "0.83", 1)
    assert low.status == C.FALSIFIED


def test_minimal_theorem_remark_value_at_printed_parameters():
    st = C.verify_minimal_theorem("0.866", "0.83", "21.6")
    assert st.status == C.FALSIFIED and st.witness is not None
    assert C.check_certificate(st.bundle).status == C.FALSIFIED


def test_shrinker_examples(shrinker):
    assert shrinker.ok
    assert C.verify_shrinker_theorem("0.022", "0.836", "0.81").ok
    assert C.verify_shrinker_theorem(F(1, 2), "0.836", "0.81").status == C.FALSIFIED


def test_completeness_at_small_margin(shrinker):
    g = shrinker.bundle.find("shrinker-coeff-gradA")
    enc = RationalInterval.from_json(g.evidence["enclosure"])
    assert F("-0.002") < enc.lo and enc.hi < 0
    assert g.evidence["bits"] > 8


# ---- invariants -----------------------------------------------------------

def _q1_scaled(u, bits):
    coeffs = red.build_Q1().to_rational().coeffs
    acc = RationalInterval(0)
    for c in coeffs:  # Q1(x)/x^7 = sum c_i u^(7-i)
        acc = acc * u + c
    return acc


def test_route_agreement_q1():
    sturm = C.certify_poly_sign_on_ray(red.build_Q1(), 3, "negative")
    expr = red.RayExpression("Q1", 7, _q1_scaled)
    sub = C.certify_expr_sign_on_ray(expr, 3, 100, "negative")
    assert sturm.status.ok and sub.status.ok
    assert C.check_certificate(sub).ok


def test_reference_parameter_equivalence(case1, case2):
    g1 = C.certify_expr_sign_on_ray(red.g1_expression(), 6, 1000, "negative")
    g2 = C.certify_expr_sign_on_ray(red.g2_expression(), 6, 1000, "negative")
    assert g1.status.ok == case1.status.ok == True
    assert g2.status.ok == case2.status.ok == True


def _leaves(node, path=()):
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _leaves(v, path + (i,))
    else:
        yield path, node


def _get(root, path):
    for p in path:
        root = root[p]
    return root


def _set(root, path, value):
    _get(root, path[:-1])[path[-1]] = value


def _bump(text):
    if isinstance(text, str) and "/" in text:
        return str(F(text) + 1)
    if isinstance(text, dict):  # radical coefficient as {basis: rational}
        out = dict(text)
        key = next(iter(out)) if out else "1"
        out[key] = str(F(out.get(key, "0")) + 1)
        return out
    return text


def _negate(text):
    # chains are only determined up to positive factors, so a bump can be harmless; a sign change is not
    v = F(text)
    return str(-v) if v else "1/1"


def _mutations(cert: dict, rng: random.Random):
    """Single-field changes that each invalidate the evidence."""
    ev, kind = cert["evidence"], cert["kind"]
    opts = []
    flip = {"positive": "negative", "negative": "positive", "nonnegative": "negative", "nonpositive": "positive"}
    opts.append(lambda d: d["claim"].__setitem__("sign", flip[d["claim"]["sign"]]))
    if kind.startswith("sturm"):
        def tweak_poly(d):
            p = d["evidence"]["poly"]
            i = rng.randrange(len(p))
            p[i] = _negate(p[i])

        def tweak_chain(d):
            ch = d["evidence"]["chain"]
            j = rng.randrange(len(ch))
            i = rng.randrange(len(ch[j]))
            ch[j][i] = _negate(ch[j][i])
        opts += [tweak_poly, tweak_chain,
                 lambda d: d["evidence"].__setitem__("sign_at_a", -d["evidence"]["sign_at_a"]),
                 lambda d: d["evidence"]["sample"].__setitem__("sign", -d["evidence"]["sample"]["sign"]),
                 lambda d: d["evidence"].__setitem__("var_a", d["evidence"]["var_a"] + 1)]
    elif kind == "radical-bound":
        def tweak_bound(d):
            p = d["evidence"]["bound_poly"]
            i = rng.randrange(len(p))
            p[i] = _bump(p[i])

        def tweak_inner(d):
            p = d["evidence"]["inner"]["evidence"]["poly"]
            i = rng.randrange(len(p))
            p[i] = _bump(p[i])
        opts += [tweak_bound, tweak_inner,
                 lambda d: d["evidence"].__setitem__(
                     "direction", "upper" if d["evidence"]["direction"] == "lower" else "lower")]
    elif kind == "subdivision-tail":
        def gap(d):
            pieces = d["evidence"]["pieces"]
            i = rng.randrange(len(pieces))
            lo, hi = (F(t) for t in pieces[i][0])
            pieces[i][0][1] = str(lo + (hi - lo) / 2)

        def drop(d):
            pieces = d["evidence"]["pieces"]
            del pieces[rng.randrange(len(pieces))]

        def neg_piece(d):
            pieces = d["evidence"]["pieces"]
            enc = pieces[rng.randrange(len(pieces))][1]
            enc[0], enc[1] = str(-F(enc[1])), str(-F(enc[0]))

        def neg_tail(d):
            enc = d["evidence"]["tail"]["enclosure"]
            enc[0], enc[1] = str(-F(enc[1])), str(-F(enc[0]))
        opts += [gap, drop, neg_piece, neg_tail]
    elif kind == "scalar":
        def neg_enc(d):
            enc = d["evidence"]["enclosure"]
            enc[0], enc[1] = str(-F(enc[1])), str(-F(enc[0]))
        opts.append(neg_enc)
    return opts


def _rejected(data) -> bool:
    try:
        return not C.check_certificate(data).ok
    except C.MalformedCertificate:
        return True


def _certs_of(bundle):
    for c in bundle.certificates:
        if isinstance(c, C.CertificateBundle):
            yield from _certs_of(c)
        else:
            yield c


def test_mutation_soundness(case1, case2, generic_minimal, shrinker):
    rng = random.Random(11)
    certs = list(_certs_of(case1)) + list(_certs_of(case2))
    certs += list(_certs_of(generic_minimal.bundle)) + list(_certs_of(shrinker.bundle))
    kinds = {c.kind for c in certs}
    assert {"sturm-ray", "radical-bound", "subdivision-tail", "scalar"} <= kinds
    total = 0
    for cert in certs:
        base = json.loads(C.dumps(cert))
        assert C.check_certificate(base).ok
        muts = _mutations(base, rng)
        for _ in range(20):
            d = copy.deepcopy(base)
            rng.choice(muts)(d)
            assert _rejected(d), (cert.claim["expr"], cert.kind)
            total += 1
    assert total == 20 * len(certs)


def test_bundle_mutations_rejected(case1):
    d = json.loads(C.dumps(case1))
    d["certificates"] = d["certificates"][:-1]
    assert _rejected(d)
    d = json.loads(C.dumps(case1))
    d["conclusion"]["domain"]["lo"] = "3/1"
    assert _rejected(d)


def test_minimal_rule_rejects_bad_proof_divisor(generic_minimal):
    d = json.loads(C.dumps(generic_minimal.bundle))
    d["notes"]["proof_k"] = "23/1"
    assert _rejected(d)


def test_shrinker_rule_rejects_small_proof_delta(shrinker):
    d = json.loads(C.dumps(shrinker.bundle))
    d["notes"]["proof_delta"] = "1/100"
    assert _rejected(d)


def test_file_round_trip(tmp_path, case2):
    path = C.write_certificate(case2, tmp_path / "c.cert")
    raw = path.read_bytes()
    again = C.read_certificate(path)
    path2 = C.write_certificate(again, tmp_path / "d.cert")
    assert path2.read_bytes() == raw
    assert C.check_certificate(again).ok


def test_malformed_inputs():
    with pytest.raises(C.MalformedCertificate):
        C.loads("{}")
    with pytest.raises(C.MalformedCertificate):
        C.loads('{"schema": "other/9", "type": "certificate"}')
    with pytest.raises(C.MalformedCertificate):
        C.check_certificate({"schema": C.SCHEMA, "type": "certificate", "kind": "sturm-ray",
                             "claim": {"expr": "p", "sign": "positive", "domain": {"lo": "0/1", "hi": None}},
                             "evidence": {}})
