"""Command-line front end.

Exit codes: 0 verified/success, 1 falsified, 2 inconclusive, 3 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import certify as C
from . import optimize as O
from . import reduction as red
from .config import as_scalar, load_config
from .exact import DomainError, RationalInterval, format_rational, rational
from .polynomial import (
    PolynomialError,
    RootRange,
    UniPoly,
    count_real_roots,
    derivative,
    discriminant,
    isolate_real_roots,
    sylvester_resultant,
)

EXIT = {C.VERIFIED: 0, C.FALSIFIED: 1, C.INCONCLUSIVE: 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rat(text: str) -> Fraction:
    try:
        return rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _show(q) -> str:
    if isinstance(q, RationalInterval):
        return f"[{float(q.lo):.12g}, {float(q.hi):.12g}]  (exact: [{format_rational(q.lo)}, {format_rational(q.hi)}])"
    if isinstance(q, Fraction):
        return f"{float(q):.12g}  (exact: {format_rational(q)})"
    return f"{float(q):.12g}  (exact: {q})"


def _params(args, names):
    """Merge --config values with explicit flags; flags win."""
    values = {}
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        unknown = set(cfg) - {"n", "k", "delta", "theta", "theta1", "precision"}
        if unknown:
            raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update({k: as_scalar(v, k) for k, v in cfg.items()})
    for name in names + ["precision"]:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    missing = [n for n in names if n not in values]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join('--' + m for m in missing)}")
    return values


def _report(item, out, indent=""):
    if isinstance(item, C.CertificateBundle):
        out.write(f"{indent}{item.name} [{item.rule}]: {item.status.status}\n")
        for key, val in sorted(item.notes.items()):
            out.write(f"{indent}  note {key} = {val}\n")
        for c in item.certificates:
            _report(c, out, indent + "  ")
        return
    claim = item.claim
    dom = claim["domain"]
    where = "" if dom["lo"] is None else f" on [{dom['lo']}, {'inf)' if dom['hi'] is None else dom['hi'] + ']'}"
    out.write(f"{indent}{claim['expr']} {claim['sign']}{where} ({item.kind}): {item.status.status}"
              f" - {item.status.detail}\n")


def _emit(bundle: C.CertificateBundle, directory, out):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    path = C.write_certificate(bundle, d / f"{bundle.name}.cert")
    out.write(f"certificate bundle written to {path}\n")


def _finish(status: C.CertStatus, out) -> int:
    out.write(f"result: {status.status} - {status.detail}\n")
    if status.status == C.INCONCLUSIVE:
        out.write(f"precision at exhaustion: {format_rational(status.precision_used)}\n")
    if status.witness:
        out.write(f"witness: {json.dumps(status.witness, sort_keys=True)}\n")
    return EXIT[status.status]


def cmd_verify_minimal(args, out) -> int:
    p = _params(args, ["theta", "theta1", "k"])
    status = C.verify_minimal_theorem(p["theta"], p["theta1"], p["k"], p.get("precision", C.MAX_PRECISION),
                                      args.x0)
    _report(status.bundle, out)
    if args.emit_certs:
        _emit(status.bundle, args.emit_certs, out)
    return _finish(status, out)


def cmd_verify_shrinker(args, out) -> int:
    p = _params(args, ["theta", "theta1", "delta"])
    status = C.verify_shrinker_theorem(p["delta"], p["theta"], p["theta1"], p.get("precision", C.MAX_PRECISION))
    _report(status.bundle, out)
    if args.emit_certs:
        _emit(status.bundle, args.emit_certs, out)
    return _finish(status, out)


def _cmd_optimize(args, out, fn) -> int:
    cfg = O.SearchConfig.from_file(args.config) if args.config else O.SearchConfig()
    result = fn(cfg)
    out.write(result.frontier_tsv())
    out.write(result.summary() + "\n")
    for w in result.warnings:
        out.write(f"warning: {w}\n")
    if args.out:
        for path in result.export(args.out):
            out.write(f"wrote {path}\n")
    return 0 if result.found else 1


def _load_poly(spec: str) -> UniPoly:
    builders = {"q1": red.build_Q1, "q2": red.build_Q2, "z": red.build_Z, "w": red.build_W, "r": red.build_Rx}
    if spec.lower() in builders:
        return builders[spec.lower()]()
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown polynomial {spec!r} (expected q1, q2, z, w, r or a file)")
    text = path.read_text().strip()
    if text.startswith("["):
        return UniPoly.from_json(json.loads(text))
    return UniPoly.from_decimals(text.replace(",", " ").split())


def _parse_range(text: Optional[str]) -> RootRange:
    if not text:
        return RootRange.whole_line()
    try:
        a, b = text.split(":")
    except ValueError as exc:
        raise UsageError("--range must look like a:b (use inf / -inf for rays)") from exc
    lo = None if a.strip() in ("-inf", "") else rational(a)
    hi = None if b.strip() in ("inf", "+inf", "") else rational(b)
    if lo is not None and hi is not None and hi <= lo:
        raise DomainError("empty range")
    return RootRange(lo, hi, lo is not None, hi is not None)


def cmd_poly(args, out) -> int:
    P = _load_poly(args.poly)
    if args.op in ("sturm-count", "isolate") and not P.is_rational():
        raise DomainError("Sturm counting needs rational coefficients")
    if args.op == "resultant":
        val = sylvester_resultant(P, derivative(P))
        out.write(f"Res(P, P') = {_show(val)}\n")
    elif args.op == "discriminant":
        val = discriminant(P)
        out.write(f"disc(P) = {_show(val)}\n")
    elif args.op == "sturm-count":
        rng = _parse_range(args.range)
        out.write(f"real roots in {rng}: {count_real_roots(P, rng).count}\n")
    else:
        for I in isolate_real_roots(P):
            out.write(f"({format_rational(I.lo)}, {format_rational(I.hi)})  ~ ({float(I.lo):.6g}, {float(I.hi):.6g})\n")
    return 0


def cmd_cert_check(args, out) -> int:
    try:
        item = C.read_certificate(args.file)
        status = C.check_certificate(item)
    except C.MalformedCertificate as exc:
        out.write(f"malformed certificate: {exc}\nresult: falsified\n")
        return EXIT[C.FALSIFIED]
    return _finish(status, out)


def cmd_eval(args, out) -> int:
    width = args.precision if args.precision is not None else C.DEFAULT_PRECISION
    if width <= 0:
        raise DomainError("--precision must be positive")
    e = args.expr
    if e in ("g1", "g2"):
        if args.at is None:
            raise UsageError(f"--at is required for {e}")
        val = (red.g1_point if e == "g1" else red.g2_point)(args.at, width)
        out.write(f"{e}({format_rational(args.at)}) in {_show(val)}\n")
    elif e == "g2-limit":
        out.write(f"lim g2 in {_show(red.g2_limit(width))}\n")
    elif e == "c1":
        n = args.at if args.at is not None else args.n
        val = red.C1_limit(width) if n is None else red.C1_of(n, width)
        out.write(f"C1 in {_show(val)}\n")
    elif e == "c2":
        out.write(f"C2 in {_show(red.C2_enclosure(width))}\n")
    elif e in ("c3", "c4", "coeff-minimal", "coeff-shrinker"):
        names = {"c3": ["theta"], "c4": ["theta"], "coeff-minimal": ["theta", "theta1", "k"],
                 "coeff-shrinker": ["theta", "theta1", "delta"]}[e]
        p = _params(args, names)
        if e == "c3":
            n = args.at if args.at is not None else p.get("n")
            if n is None:
                raise UsageError("c3 needs --at N (or --n)")
            out.write(f"C3 in {_show(red.C3_of(n, p['theta'], width))}\n")
        elif e == "c4":
            out.write(f"C4 in {_show(red.C4_of(p['theta'], width))}\n")
        elif e == "coeff-minimal":
            n = args.at if args.at is not None else p.get("n", Fraction(6))
            pair = red.minimal_coeff_pair(red.MinimalParams(p["theta"], p["theta1"], p["k"], n), width)
            out.write(f"gradA coefficient in {_show(pair.coeff_gradA)}\nexcess coefficient in {_show(pair.coeff_excess)}\n")
        else:
            pair = red.shrinker_coeff_pair(red.ShrinkerParams(p["delta"], p["theta"], p["theta1"]), width)
            out.write(f"gradA coefficient in {_show(pair.coeff_gradA)}\nexcess coefficient in {_show(pair.coeff_excess)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pinchcert", description="Certified checks of the pinching inequality chains.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def params(p, names):
        for name in names:
            p.add_argument(f"--{name}", type=_rat)
        p.add_argument("--config", help="key = value parameter file")
        p.add_argument("--precision", type=_rat, help="enclosure width cap (default 2^-512 for verification)")

    p = sub.add_parser("verify-minimal", help="minimal hypersurfaces in the sphere, pinching S in [n, n+n/k]")
    params(p, ["theta", "theta1", "k"])
    p.add_argument("--x0", type=_rat, default=C.DEFAULT_X0, help="subdivision cutoff X0 (default 10^4)")
    p.add_argument("--emit-certs", metavar="DIR")
    p.set_defaults(func=cmd_verify_minimal)

    p = sub.add_parser("verify-shrinker", help="self-shrinkers, pinching |A|^2 in [1, 1+delta]")
    params(p, ["theta", "theta1", "delta"])
    p.add_argument("--emit-certs", metavar="DIR")
    p.set_defaults(func=cmd_verify_shrinker)

    for verb, fn in (("optimize-minimal", O.minimize_k), ("optimize-shrinker", O.maximize_shrinker_delta)):
        p = sub.add_parser(verb, help="grid search with certified bisection")
        p.add_argument("--config", help="search config file (defaults used when omitted)")
        p.add_argument("--out", metavar="DIR", help="write frontier.tsv and best.cert here")
        p.set_defaults(func=lambda a, o, fn=fn: _cmd_optimize(a, o, fn))

    p = sub.add_parser("poly", help="exact polynomial diagnostics")
    p.add_argument("--op", required=True, choices=["resultant", "discriminant", "sturm-count", "isolate"])
    p.add_argument("--poly", required=True, help="q1, q2, z, w, r or a coefficient file")
    p.add_argument("--range", help="a:b (closed at finite ends; inf/-inf allowed) for sturm-count")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("cert-check", help="replay a certificate file")
    p.add_argument("file")
    p.set_defaults(func=cmd_cert_check)

    p = sub.add_parser("eval", help="interval enclosures of constants and coefficients")
    p.add_argument("--expr", required=True,
                   choices=["g1", "g2", "g2-limit", "c1", "c2", "c3", "c4", "coeff-minimal", "coeff-shrinker"])
    p.add_argument("--at", type=_rat, help="x for g1/g2, n for c1/c3/coeff-minimal")
    p.add_argument("--n", type=_rat)
    params(p, ["theta", "theta1", "k", "delta"])
    p.set_defaults(func=cmd_eval)
    return parser


def _glue_negative_values(argv: List[str]) -> List[str]:
    """Turn ``--flag -6:3`` into ``--flag=-6:3`` so negative values are not read as options."""
    out: List[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1 and tok[0] == "-" \
                and (tok[1].isdigit() or tok[1] == "." or tok.startswith("-inf")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return USAGE
    except (DomainError, PolynomialError, ValueError, ZeroDivisionError) as exc:
        err.write(f"domain error: {exc}\n")
        return USAGE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
