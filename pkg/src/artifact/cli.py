"""Command-line front end: JSON in, JSON or CSV out.

Exit status is 0 on success, 1 when a verification fails, 2 on bad input.
Every JSON argument may be given inline or as a path to a file.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import random
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import counterexamples as cx
from . import elementary_algebra as ea
from . import finite_oracle as fo
from . import integrator as ig
from . import liminal as lm
from . import maps as mp
from . import stone_rep as sr
from .credence import check_additivity, credence_from_json, credence_to_json
from .errors import INPUT_ERRORS, ArtifactError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Verification(Exception):
    """A check ran and failed; carries the JSON witness."""

    def __init__(self, witness: dict):
        super().__init__("verification failed")
        self.witness = witness


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "USAGE", "message": message}) + "\n")
        raise SystemExit(EXIT_INPUT)


# --- input --------------------------------------------------------------------


def load_json(text: str, what: str) -> Any:
    """Inline JSON when the argument looks like JSON, otherwise a file path."""
    src = text.strip()
    if not src.startswith(("{", "[", '"')):
        try:
            src = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise ArtifactError("BAD_JSON", f"{what}: cannot read {text!r} ({exc.strerror})") from exc
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise ArtifactError("BAD_JSON", f"{what}: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc


def parse_rational(text: str, what: str = "value") -> Fraction:
    try:
        return ea.to_rational(text)
    except ArtifactError as exc:
        raise ArtifactError("BAD_RATIONAL", f"{what}: {exc.message}") from exc


def _credence(args, required=True):
    if args.credence is None:
        if required:
            raise ArtifactError("BAD_CREDENCE", "--credence is required for this verb")
        return None
    return credence_from_json(load_json(args.credence, "--credence"))


def _set(args, amb, required=True):
    if args.set is None:
        if required:
            raise ArtifactError("BAD_JSON", "--set is required for this verb")
        return ea.whole(amb)
    return ea.set_from_json(load_json(args.set, "--set"), amb)


def _fn(args, amb, required=True):
    if args.fn is None:
        if required:
            raise ArtifactError("BAD_FUNCTION", "--fn is required for this verb")
        return None
    return ig.function_from_json(load_json(args.fn, "--fn"), amb)


# --- output -------------------------------------------------------------------


def render_decimal(x: Fraction, k: int) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        q = Decimal(x.numerator) / Decimal(x.denominator)
        return str(q.quantize(Decimal(1).scaleb(-k)))


def to_payload(obj: Any, decimals: Optional[int]) -> Any:
    """Fractions become "p/q" strings; with decimals, each also gets a "<key>_decimal" twin."""
    if isinstance(obj, Fraction):
        return ea.fmt_ext(obj)
    if isinstance(obj, float):
        return ea.fmt_ext(obj)
    if isinstance(obj, ea.ElementarySet):
        return ea.set_to_json(obj)
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            out[k] = to_payload(v, decimals)
            if decimals is not None and isinstance(v, Fraction):
                out[f"{k}_decimal"] = render_decimal(v, decimals)
        return out
    if isinstance(obj, (list, tuple)):
        return [to_payload(v, decimals) for v in obj]
    return obj


def emit(payload: Any, args, stream) -> None:
    text = json.dumps(to_payload(payload, getattr(args, "decimals", None)), indent=2)
    stream.write(text + "\n")
    if getattr(args, "emit", None):
        Path(args.emit).write_text(text + "\n", encoding="utf-8")


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([ea.fmt_ext(v) if isinstance(v, (Fraction, float)) else v for v in r])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# --- verbs --------------------------------------------------------------------

ALGEBRA_OPS = {
    "join": (2, ea.join),
    "meet": (2, ea.meet),
    "difference": (2, ea.difference),
    "neg": (1, ea.neg),
    "boundary": (1, ea.boundary),
    "extend": (1, ea.extend),
    "restrict": (1, ea.restrict),
    "regularize": (1, lambda E: E),
}


def cmd_algebra(args, out) -> int:
    arity, fn = ALGEBRA_OPS[args.op]
    if len(args.sets) != arity:
        raise ArtifactError("BAD_JSON", f"{args.op} takes {arity} set(s), got {len(args.sets)}")
    amb = ea.ambient_from_json(load_json(args.ambient, "--ambient")) if args.ambient else ea.REAL_LINE
    sets = [ea.set_from_json(load_json(s, "set"), amb) for s in args.sets]
    result = fn(*sets)
    if args.op == "boundary":
        emit({"boundary": list(result)}, args, out)
    else:
        emit(result, args, out)
    return EXIT_OK


def cmd_integrate(args, out) -> int:
    mu = _credence(args)
    amb = mu.ambient
    g, B = _fn(args, amb), _set(args, amb, required=False)
    eps = parse_rational(args.eps, "--eps")
    value = ig.integrate(g, mu, B, eps)
    result: Dict[str, Any] = {"value": value, "eps": eps, "mass": mu.eval(B)}
    try:
        exact = ig.integrate_exact(g, mu, B)
    except ArtifactError as exc:
        if exc.code != "UNSUPPORTED_RULE":
            raise
        exact = None
    if exact is not None:
        result["exact"] = exact
        ok = 0 <= exact - value <= eps * result["mass"]
        result["within_tolerance"] = ok
    if args.trace:
        rows = ig.integrate_trace(g, mu, B, eps)
        write_csv(args.trace, ["N", "value"], rows)
    emit(result, args, out)
    if exact is not None and not result["within_tolerance"]:
        raise Verification(result)
    return EXIT_OK


def cmd_expect(args, out) -> int:
    mu = _credence(args)
    amb = mu.ambient
    g, B = _fn(args, amb), _set(args, amb, required=False)
    result: Dict[str, Any] = {}
    if args.eps is not None:
        result["approx"] = ig.conditional_expectation(g, mu, B, parse_rational(args.eps, "--eps"))
    result["exact"] = ig.conditional_expectation_exact(g, mu, B)
    if args.partition:
        cells = [ea.set_from_json({"intervals": c} if isinstance(c, list) else c, amb)
                 for c in load_json(args.partition, "--partition")]
        P = ig.BPartition(B, tuple(cells))
        bayes = ig.bayes_expectation(g, mu, P)
        result["bayes"] = bayes
        result["bayes_holds"] = bayes == result["exact"]
    emit(result, args, out)
    if result.get("bayes_holds") is False:
        raise Verification(result)
    return EXIT_OK


def cmd_pushforward(args, out) -> int:
    mu = _credence(args)
    phi = mp.map_from_json(load_json(args.map, "--map"), mu.ambient)
    if not isinstance(phi, mp.MonotoneAffineMap):
        raise ArtifactError("BAD_MAP", "pushforward needs a strictly monotone map")
    nu = mp.pushforward(phi, mu)
    result: Dict[str, Any] = {"image": credence_to_json(nu)}
    if args.fn is not None:
        g = _fn(args, phi.codomain)
        B = _set(args, phi.codomain, required=False)
        eps = parse_rational(args.eps, "--eps") if args.eps is not None else None
        left, right = mp.change_of_variables_values(phi, mu, g, B, eps)
        ok = left == right if eps is None else abs(left - right) <= 2 * eps
        result.update(lhs=left, rhs=right, holds=ok)
        emit(result, args, out)
        if not ok:
            raise Verification(result)
        return EXIT_OK
    emit(result, args, out)
    return EXIT_OK


def cmd_liminal(args, out) -> int:
    mu = lm.compactify(_credence(args))
    dec = lm.decompose(mu)
    result: Dict[str, Any] = {"decomposition": dec.to_json()}
    ok = True
    if args.action == "verify" and args.set is None:
        raise ArtifactError("BAD_JSON", "liminal verify needs --set")
    if args.set is not None:
        R = _set(args, mu.ambient)
        left, right = lm.mass_identity_sides(mu, dec, R)
        result["mass_identity"] = {"lhs": left, "rhs": right, "holds": left == right}
        ok &= left == right
        if args.fn is not None:
            g = _fn(args, mu.ambient)
            left, right = lm.integral_identity_sides(mu, dec, g, R)
            result["integral_identity"] = {"lhs": left, "rhs": right, "holds": left == right}
            ok &= left == right
    emit(result, args, out)
    if not ok:
        raise Verification(result)
    return EXIT_OK


def _algebra_from_args(args, amb):
    if args.generators is not None:
        raw = load_json(args.generators, "--generators")
        gens = [ea.set_from_json({"intervals": g} if isinstance(g, list) else g, amb) for g in raw]
        return sr.generate(gens, amb)
    return sr.dyadic_algebra(amb, args.depth)


def cmd_stone(args, out) -> int:
    mu = _credence(args, required=False)
    if mu is not None:
        amb = mu.ambient
    elif args.ambient:
        amb = ea.ambient_from_json(load_json(args.ambient, "--ambient"))
    else:
        amb = ea.open_interval(0, 1)
    alg = _algebra_from_args(args, amb)
    space = sr.stone_space(alg)
    iso = space.verify_isomorphism() if len(alg.atoms) <= 6 else None
    result: Dict[str, Any] = {
        "atoms": [ea.set_to_json(A)["intervals"] for A in alg.atoms],
        "elements": len(alg),
        "isomorphism": iso,
    }
    ok = iso is not False
    if mu is not None:
        result["point_weights"] = list(sr.star_measure(mu, alg))
        if args.fn is not None:
            g = _fn(args, amb)
            eps = parse_rational(args.eps or "1/100", "--eps")
            chain = [sr.dyadic_algebra(amb, k) for k in range(0, args.depth + 1)]
            res = sr.refining_sequence(g, mu, chain, eps)
            result["refining"] = {
                "history": list(res.history),
                "target": res.target,
                "converged": res.converged,
            }
            ok &= res.converged
    emit(result, args, out)
    if not ok:
        raise Verification(result)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    rows = fo.run_oracle(args.max_points, checks)
    table = [{"n": r.n, "spaces": r.spaces, **{f"{c}_passed": r.passed[c] for c in checks}} for r in rows]
    failures = [f for r in rows for f in r.failures]
    result = {"rows": table, "failures": len(failures)}
    text = json.dumps(result, indent=2)
    out.write(text + "\n")
    if args.emit:
        Path(args.emit).write_text(json.dumps(failures, indent=2) + "\n", encoding="utf-8")
    if failures:
        raise Verification({"failures": failures[:10]})
    return EXIT_OK


def cmd_cantor(args, out) -> int:
    ratios: Any = args.ratios
    if ratios not in cx.PRESETS:
        ratios = load_json(ratios, "--ratios")
        if not isinstance(ratios, list):
            raise ArtifactError("BAD_RATIO", "--ratios takes a preset name or a JSON list")
    stage = cx.fat_cantor(args.depth, ratios)
    result = cx.cantor_report(stage)
    if args.trace:
        rows = [cx.cantor_report(cx.fat_cantor(n, stage.ratios[:n])) for n in range(1, args.depth + 1)]
        write_csv(args.trace, ["depth", "measure", "gap", "L_plus_R"],
                  [[r["depth"], r["measure"], r["gap"], r["L_plus_R"]] for r in rows])
    out.write(json.dumps(result, indent=2) + "\n")
    if args.emit:
        Path(args.emit).write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    if stage.depth and not stage.halves_measure < 1:
        raise Verification(result)
    return EXIT_OK


UNIFORM_CDF = {"ambient": {"kind": "closed", "a": "0", "b": "1"}, "breakpoints": ["0", "1"], "values": ["0", "1"]}


def cmd_nocredence(args, out) -> int:
    raw = load_json(args.cdf, "--cdf") if args.cdf else UNIFORM_CDF
    cdf = ig.function_from_json(raw, ea.closed_interval(0, 1))
    rs = cx.dyadic_sequence(args.points)
    stage = cx.dense_open_below_one(cdf, rs, args.depth)
    result = cx.dense_report(stage, cdf)
    if args.trace:
        rows = []
        for n in range(1, args.depth + 1):
            rows.append(cx.dense_report(cx.dense_open_below_one(cdf, rs, n), cdf))
        write_csv(args.trace, ["depth", "measure", "gap", "L_plus_R", "bound"],
                  [[r["depth"], r["measure"], r["gap"], r["L_plus_R"], r["bound"]] for r in rows])
    out.write(json.dumps(result, indent=2) + "\n")
    if args.emit:
        Path(args.emit).write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    if not (stage.measure < stage.bound or args.depth == 0):
        raise Verification(result)
    return EXIT_OK


# --- selftest -----------------------------------------------------------------


def selftest_checks(seed: int = 0, cases: int = 200) -> List[tuple]:
    """A quick pass over the main invariants; returns (name, failures, cases)."""
    from . import sampling as sm

    rng = random.Random(seed)
    results = []

    def run(name: str, body: Callable[[], bool]):
        bad = sum(0 if body() else 1 for _ in range(cases))
        results.append((name, bad, cases))

    unit = ea.open_interval(0, 1)
    ambients = [ea.REAL_LINE, unit, ea.closed_interval(0, 1)]

    def laws():
        amb = rng.choice(ambients)
        E, F = sm.elementary_set(rng, amb), sm.elementary_set(rng, amb)
        return (
            ea.neg(ea.neg(E)) == E
            and ea.neg(ea.join(E, F)) == ea.meet(ea.neg(E), ea.neg(F))
            and ea.join(E, ea.meet(E, F)) == E
            and ea.meet(E, ea.join(E, F)) == E
        )

    def additivity():
        amb = rng.choice(ambients)
        mu = sm.mixture_credence(rng, amb)
        T = sm.elementary_set(rng, amb)
        return check_additivity(mu, T, sm.partition(rng, T))

    def tolerance():
        amb = rng.choice([unit, ea.closed_interval(0, 1)])
        g, mu, B = sm.piecewise_affine(rng, amb), sm.mixture_credence(rng, amb), sm.elementary_set(rng, amb)
        eps = rng.choice([Fraction(1, 10), Fraction(1, 100)])
        d = ig.integrate_exact(g, mu, B) - ig.integrate(g, mu, B, eps)
        return 0 <= d <= eps * mu.eval(B)

    def liminal_identity():
        amb = ea.closed_interval(0, 1)
        mu = sm.liminal_mixture(rng, amb)
        dec = lm.decompose(mu)
        R = sm.elementary_set(rng, amb, max_den=32)
        return lm.verify_mass_identity(mu, dec, R)

    run("algebra_laws", laws)
    run("credence_additivity", additivity)
    run("integrator_tolerance", tolerance)
    run("liminal_mass_identity", liminal_identity)
    ok = all(r.passed["algebra"] == r.spaces for r in fo.run_oracle(3, ["algebra"]))
    results.append(("oracle_algebra_3pts", 0 if ok else 1, 1))
    return results


def cmd_selftest(args, out) -> int:
    results = selftest_checks(args.seed, args.cases)
    rows = [{"check": n, "failures": f, "cases": c} for n, f, c in results]
    out.write(json.dumps({"checks": rows}, indent=2) + "\n")
    if any(f for _, f, _ in results):
        raise Verification({"checks": rows})
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Credences, integrals and Boolean algebras of regular open sets.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, *flags):
        if "credence" in flags:
            sp.add_argument("--credence", help="credence JSON (inline or file)")
        if "fn" in flags:
            sp.add_argument("--fn", help="piecewise-affine function JSON")
        if "set" in flags:
            sp.add_argument("--set", help="elementary set JSON; defaults to the whole ambient")
        if "eps" in flags:
            sp.add_argument("--eps", help="tolerance as a rational, e.g. 1/100")
        sp.add_argument("--emit", help="also write the JSON result to this file")
        sp.add_argument("--decimals", type=int, help="add decimal renderings with this many digits")

    a = sub.add_parser("algebra", help="Boolean operations on elementary sets")
    a.add_argument("op", choices=sorted(ALGEBRA_OPS))
    a.add_argument("sets", nargs="+", help="set JSON (inline or file)")
    a.add_argument("--ambient", help="ambient JSON for sets that do not carry one")
    common(a)
    a.set_defaults(run=cmd_algebra)

    i = sub.add_parser("integrate", help="approximate and exact integrals")
    common(i, "credence", "fn", "set")
    i.add_argument("--eps", required=True, help="tolerance as a rational")
    i.add_argument("--trace", metavar="CSV", help="write the convergence trace as CSV")
    i.set_defaults(run=cmd_integrate)

    e = sub.add_parser("expect", help="conditional expectations and the Bayes formula")
    common(e, "credence", "fn", "set", "eps")
    e.add_argument("--partition", help="JSON list of cells partitioning the set")
    e.set_defaults(run=cmd_expect)

    pf = sub.add_parser("pushforward", help="image credences and change of variables")
    common(pf, "credence", "fn", "set", "eps")
    pf.add_argument("--map", required=True, help="map JSON")
    pf.set_defaults(run=cmd_pushforward)

    li = sub.add_parser("liminal", help="Borel part, side shares and the boundary identities")
    li.add_argument("action", nargs="?", choices=("decompose", "verify"), default="decompose",
                    help="verify requires --set (and checks the integral identity too with --fn)")
    common(li, "credence", "fn", "set")
    li.set_defaults(run=cmd_liminal)

    st = sub.add_parser("stone", help="finite subalgebras, Stone points and refining integrals")
    common(st, "credence", "fn", "eps")
    st.add_argument("--generators", help="JSON list of generator interval lists")
    st.add_argument("--depth", type=int, default=3, help="dyadic depth (algebra and refining chain)")
    st.add_argument("--ambient", help="ambient JSON when no credence is given")
    st.set_defaults(run=cmd_stone)

    o = sub.add_parser("oracle", help="exhaustive checks on all small finite spaces")
    o.add_argument("--max-points", type=int, default=fo.MAX_POINTS)
    o.add_argument("--checks", default=",".join(fo.CHECKS))
    o.add_argument("--emit", help="write failure witnesses to this file")
    o.set_defaults(run=cmd_oracle)

    c = sub.add_parser("cantor", help="fat Cantor stages")
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("--ratios", default="quarter", help="'quarter', 'third' or a JSON list of rationals")
    c.add_argument("--trace", metavar="CSV", help="per-stage rows as CSV")
    c.add_argument("--emit")
    c.set_defaults(run=cmd_cantor)

    n = sub.add_parser("nocredence", help="dense open sets of measure below one")
    n.add_argument("--cdf", help="strictly increasing cdf JSON on [0,1]; uniform by default")
    n.add_argument("--depth", type=int, required=True)
    n.add_argument("--points", type=int, default=4096, help="length of the dyadic r-sequence")
    n.add_argument("--trace", metavar="CSV", help="per-stage rows as CSV")
    n.add_argument("--emit")
    n.set_defaults(run=cmd_nocredence)

    s = sub.add_parser("selftest", help="run a quick invariant suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=200)
    s.set_defaults(run=cmd_selftest)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args, out)
    except Verification as exc:
        err.write(json.dumps({"error": "VERIFICATION_FAILED", "witness": to_payload(exc.witness, None)}) + "\n")
        return EXIT_FAIL
    except ArtifactError as exc:
        err.write(json.dumps({"error": exc.code, "message": exc.message}) + "\n")
        return EXIT_INPUT if exc.code in INPUT_ERRORS else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
