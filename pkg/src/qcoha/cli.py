"""Command-line entry point: ``qcoha {count,kac,coha,shuffle,strata,check}``.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 enumeration budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .quiver import Quiver, QuiverError, a2_quiver, jordan_quiver, loop_quiver
from .reps import KINDS, BudgetExceeded, count_variety

BUILTIN = {"jordan": jordan_quiver, "a2": a2_quiver}


class InputError(ValueError):
    pass


def load_quiver(spec: str) -> Quiver:
    """A JSON file path, or one of ``jordan``, ``a2``, ``loop:G``."""
    if spec in BUILTIN:
        return BUILTIN[spec]()
    if spec.startswith("loop:"):
        return loop_quiver(int(spec[5:]))
    path = Path(spec)
    if not path.exists():
        raise InputError(f"quiver file {spec!r} not found (built-ins: jordan, a2, loop:G)")
    try:
        return Quiver.from_json(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{spec}: invalid JSON: {exc}") from exc


def parse_dim(Q: Quiver, text: str) -> tuple[int, ...]:
    try:
        val = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"dimension {text!r} is neither an integer nor JSON") from exc
    return Q.dim(val)


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"bad prime list {text!r}") from exc


def frac_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def emit(payload, fmt: str, rows: Optional[list[dict]] = None, pretty: Optional[str] = None,
         out: Optional[str] = None) -> None:
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise InputError("this command has no CSV form; use --format json or pretty")
        buf = io.StringIO()
        fields = list(rows[0]) if rows else []
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = (pretty if pretty is not None else json.dumps(payload, sort_keys=True, ensure_ascii=False,
                                                              indent=2)) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------

def cmd_count(args) -> int:
    Q = load_quiver(args.quiver)
    v = parse_dim(Q, args.dim)
    rec = count_variety(Q, v, args.prime, args.kind, budget=args.budget, threads=args.threads, method=args.method)
    payload = {"raw": str(rec.raw), "stack": frac_json(rec.stack)}
    row = {"dim": json.dumps(list(v)), "prime": args.prime, "kind": args.kind, "raw": rec.raw,
           "stack": str(rec.stack)}
    emit(payload, args.format, [row], f"#{args.kind}({list(v)})(F_{args.prime}) = {rec.raw}; stack {rec.stack}",
         args.output)
    return 0


def _counter(args):
    import functools

    @functools.lru_cache(maxsize=None)
    def counter(Q, v, p, kind):
        return count_variety(Q, v, p, kind, budget=args.budget, threads=args.threads)
    return counter


def _table(args, Q, kind):
    from .kac import extract_full_kac, extract_nilpotent_kac

    vmax = parse_dim(Q, args.vmax)
    primes = parse_primes(args.primes)
    counter = _counter(args)
    if kind == "full":
        return extract_full_kac(Q, vmax, primes, counter)
    return extract_nilpotent_kac(Q, int(kind[-1]), vmax, primes, counter)


def cmd_kac(args) -> int:
    Q = load_quiver(args.quiver)
    table = _table(args, Q, args.kind)
    payload = table.to_json()
    rows = [{"dim": json.dumps(list(v)), "poly": str(p.as_expr())}
            for v, p in sorted(table.entries.items(), key=lambda kv: (sum(kv[0]), kv[0]))]
    pretty = "\n".join(f"A_{r['dim']}(t) = {r['poly']}" for r in rows)
    emit(payload, args.format, rows, pretty, args.output)
    return 0


def cmd_coha(args) -> int:
    from .coha import coha_series_from_kac, cross_check
    from .series import laurent_window

    Q = load_quiver(args.quiver)
    table = _table(args, Q, args.kind)
    order = sum(parse_dim(Q, args.vmax))
    res = coha_series_from_kac(table, args.tau, order, q_window=args.window)
    payload = {"kac": table.to_json(), "tau": args.tau, "series": res.series.to_json()}
    rows = []
    for e, c in res.series.terms():
        win = laurent_window(c, args.window if args.window is not None else 6)
        rows.append({"z": json.dumps(list(e)), "window": json.dumps({str(k): str(x) for k, x in sorted(win.items())})})
    if args.cross_check:
        checks = cross_check(table, args.tau, parse_primes(args.primes), counter=_counter(args))
        payload["cross_check"] = [{"dim": list(v), "prime": p, "kac": frac_json(a), "count": frac_json(b), "equal": ok}
                                  for v, p, a, b, ok in checks]
    pretty = "\n".join(f"z^{r['z']}: {r['window']}" for r in rows)
    emit(payload, args.format, rows, pretty, args.output)
    if args.cross_check and not all(r["equal"] for r in payload["cross_check"]):
        return 1
    return 0


def cmd_shuffle(args) -> int:
    import warnings

    from .shuffle import membership_in_generated, parse_sympoly, shuffle_product, wheel_check

    if args.action == "mult":
        f, g = parse_sympoly(args.f, args.fvars), parse_sympoly(args.g, args.gvars)
        prod = shuffle_product(f, g)
        payload = {"nvars": prod.nvars, "product": prod.to_text()}
        emit(payload, args.format, [payload], prod.to_text(), args.output)
    elif args.action == "wheel":
        f = parse_sympoly(args.f, args.nvars)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            ok = wheel_check(f)
        payload = {"nvars": f.nvars, "wheel": ok, "vacuous": bool(caught)}
        emit(payload, args.format, [payload], f"wheel conditions: {ok}" + (" (vacuous)" if caught else ""),
             args.output)
    else:
        f = parse_sympoly(args.f, args.nvars)
        res = membership_in_generated(f, args.cap)
        cert = {"*".join(w): str(c) for w, c in (res.certificate or {}).items()}
        payload = {"status": res.status, "certificate": cert, "words": res.monomials}
        pretty = res.status + "".join(f"\n  {w}: {c}" for w, c in sorted(cert.items()))
        emit(payload, args.format, [{"word": w, "coefficient": c} for w, c in sorted(cert.items())], pretty,
             args.output)
    return 0


def cmd_strata(args) -> int:
    from . import strata

    if args.action == "scan":
        scan = strata.strata_scan(parse_primes(args.g), args.v1max, args.lmax, args.wmax)
        payload = {"points": len(scan.rows), "violations": scan.violations, "excluded": len(scan.excluded)}
        if args.format == "csv":
            text = scan.to_csv()
            (Path(args.output).write_text(text) if args.output else sys.stdout.write(text))
        else:
            emit(payload, args.format, None, f"{len(scan.rows)} points, {len(scan.violations)} violations, "
                 f"{len(scan.excluded)} excluded", args.output)
        return 0
    if args.action == "lift":
        Q = load_quiver(args.quiver)
        vs = json.loads(args.dims)
        ws = json.loads(args.framings)
        trials = strata.diamond_trials(Q, args.prime, args.trials, vs, ws, seed=args.seed)
        ok = sum(t.ok for t in trials)
        payload = {"trials": len(trials), "passed": ok,
                   "failures": [{"v": list(t.v), "w": list(t.w), "detail": t.detail} for t in trials if not t.ok]}
        emit(payload, args.format, None, f"{ok}/{len(trials)} lifts satisfy the postconditions", args.output)
        return 0 if ok == len(trials) else 1
    try:
        params = json.loads(args.args)
    except json.JSONDecodeError as exc:
        raise InputError(f"--args is not JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise InputError("--args must be a JSON object")
    name = args.formula
    if name == "dim_M0_stratum":
        Q = load_quiver(args.quiver)
        tau = strata.RepType.build(Q, params.get("w", [0] * Q.n), params["parts"])
        value = strata.dim_M0_stratum(Q, tau)
    elif name == "hecke_dim":
        Q = load_quiver(args.quiver)
        value = strata.hecke_dim(Q, params["v1"], params["v2"], params["w"])
    elif name in ("lambda_flag_dim", "hecke_stratum_dim", "lambda_prime_dim", "parabolic_dim"):
        value = getattr(strata, name)(**params)
    else:
        raise InputError(f"unknown formula {name!r}")
    payload = {"formula": name, "args": params, "value": str(value)}
    emit(payload, args.format, [{"formula": name, "value": str(value)}], f"{name} = {value}", args.output)
    return 0


def cmd_check(args) -> int:
    from .checks import run_suite

    results = run_suite(args.suite)
    payload = [{"criterion": r.number, "name": r.name, "ok": r.ok, "seconds": f"{r.seconds:.3f}", "detail": r.detail}
               for r in results]
    emit({"suite": args.suite, "results": payload, "ok": all(r.ok for r in results)}, args.format,
         payload, "\n".join(r.line() for r in results), args.output)
    return 0 if all(r.ok for r in results) else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--output", help="write the report to this path instead of stdout")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes for enumeration (default: available CPUs)")
    common.add_argument("--budget", type=int, default=None,
                        help="largest enumeration allowed (default: $QCOHA_BUDGET or 10^9)")

    parser = argparse.ArgumentParser(prog="qcoha", description="Exact point counts, Kac polynomials, "
                                     "COHA dimension series and shuffle-algebra computations for quivers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="F_p-point count of a variety of representations")
    p.add_argument("--quiver", required=True)
    p.add_argument("--dim", required=True, help="integer or JSON list/object")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--kind", choices=KINDS, default="M")
    p.add_argument("--method", choices=("fast", "naive"), default="fast")
    p.set_defaults(func=cmd_count)

    for name, fn, kinds, default in (("kac", cmd_kac, ("full", "nilpotent0", "nilpotent1"), "full"),
                                     ("coha", cmd_coha, ("nilpotent0", "nilpotent1"), "nilpotent0")):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--quiver", required=True)
        p.add_argument("--vmax", required=True)
        p.add_argument("--primes", default="2,3,5")
        p.add_argument("--kind", choices=kinds, default=default)
        if name == "coha":
            p.add_argument("--tau", type=int, default=0)
            p.add_argument("--window", type=int, default=None, help="literal truncated product down to q^-K")
            p.add_argument("--cross-check", action="store_true", help="compare with point counts at --primes")
        p.set_defaults(func=fn)

    p = sub.add_parser("shuffle", help="Jordan shuffle algebra")
    ssub = p.add_subparsers(dest="action", required=True)
    s = ssub.add_parser("mult", parents=[common])
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--fvars", type=int, default=None, help="variables of f (default: largest x-index used)")
    s.add_argument("--gvars", type=int, default=None, help="variables of g (default: largest x-index used)")
    for action in ("wheel", "member"):
        s = ssub.add_parser(action, parents=[common])
        s.add_argument("f")
        s.add_argument("--nvars", type=int, default=None)
        if action == "member":
            s.add_argument("--cap", type=int, default=2, help="largest total weight of D_k words")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("strata", help="dimension formulas and scans")
    ssub = p.add_subparsers(dest="action", required=True)
    s = ssub.add_parser("scan", parents=[common])
    s.add_argument("--g", default="2,3", help="loop counts")
    s.add_argument("--v1max", type=int, default=4)
    s.add_argument("--lmax", type=int, default=3)
    s.add_argument("--wmax", type=int, default=3)
    s = ssub.add_parser("eval", parents=[common])
    s.add_argument("--formula", required=True)
    s.add_argument("--args", required=True, help="JSON object of keyword arguments")
    s.add_argument("--quiver", default="jordan")
    s = ssub.add_parser("lift", parents=[common])
    s.add_argument("--quiver", default="a2")
    s.add_argument("--prime", type=int, default=3)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dims", default="[[1,1],[2,1],[1,2],[2,2]]")
    s.add_argument("--framings", default="[[1,0],[0,1],[1,1]]")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("check", parents=[common], help="run the acceptance suite")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1 or (getattr(args, "budget", None) or 1) < 1:
        parser.error("--threads and --budget must be positive")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(json.dumps({"error": "budget exceeded", "required": str(exc.required), "budget": str(exc.budget),
                          "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 3
    except (InputError, QuiverError, ValueError, KeyError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"qcoha: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
