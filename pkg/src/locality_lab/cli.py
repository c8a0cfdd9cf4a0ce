"""Command-line entry point.

Exit codes: 0 success / valid / feasible, 1 checked and negative,
2 usage or format error, 3 resource guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import core, numerics, search, simulator
from .speedup import InvalidInputError, TraceRefused, iterate_speedup, speedup

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _violation_text(report: core.ValidityReport) -> str:
    lines = [f"invalid: {report.violation_count} violating tuple(s)"]
    for v in report.violations:
        lines.append("  " + " ".join(map(str, v)))
    if not report.violation_count_exact:
        lines.append(f"  ... list truncated at {len(report.violations)}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    f = core.load(args.input)
    report = core.verify(f, max_violations=args.max_violations, threads=args.threads)
    payload = {"n": f.n, "k": f.k, "c": f.c, **report.to_json()}
    _emit(args, payload, "valid" if report.is_valid else _violation_text(report))
    return EXIT_OK if report.is_valid else EXIT_NEGATIVE


def cmd_speedup(args) -> int:
    f = core.load(args.input)
    if f.k < 2:
        raise UsageError("speedup needs arity >= 2")
    g = speedup(f)
    core.dump(g, args.output)
    payload = {"n": g.n, "k": g.k, "c": numerics.decimal_string(g.c), "output": args.output}
    _emit(args, payload, f"wrote {g.k}-ary {g.c}-colour table to {args.output}")
    return EXIT_OK


def cmd_trace(args) -> int:
    f = core.load(args.input)
    try:
        trace = iterate_speedup(f, threads=args.threads)
    except InvalidInputError as exc:
        payload = {"refused": "invalid input", **exc.report.to_json()}
        _emit(args, payload, _violation_text(exc.report))
        return EXIT_NEGATIVE
    except TraceRefused as exc:
        payload = {
            "refused": "size guard",
            "step": exc.step,
            "arity": exc.arity,
            "colour_count": exc.symbolic_colour_count,
        }
        _emit(args, payload, str(exc))
        return EXIT_GUARD
    doc = trace.to_json()
    if args.output:
        _write_json(args.output, doc)
    lines = [f"({s.arity}, {numerics.decimal_string(s.colour_count)})" for s in trace.steps]
    base = trace.base
    text = (
        "steps: " + " -> ".join(lines) + "\n"
        f"base: {numerics.decimal_string(base.colour_count)} >= {base.n}: {base.holds}\n"
        f"k+1 = {trace.arity + 1}, log*(n) = {numerics.log_star(trace.n)}"
    )
    _emit(args, doc, text)
    return EXIT_OK if base.holds else EXIT_NEGATIVE


def cmd_search(args) -> int:
    start = time.perf_counter()
    try:
        result = search.min_colours(args.n, args.k, args.cmax)
    except search.SearchExhausted as exc:
        payload = {
            "n": exc.n, "k": exc.k, "c_max": exc.c_max, "min_colours": None,
            "derived_lower_bound": numerics.derived_lower_bound(exc.n, exc.k),
            "nodes_explored": exc.nodes_explored,
        }
        if args.timing:
            payload["wall_time_s"] = round(time.perf_counter() - start, 6)
        if args.json:
            _write_json(args.json, payload)
        _emit(args, payload, f"infeasible: no table with at most {exc.c_max} colours")
        return EXIT_NEGATIVE
    payload = result.to_json()
    if args.timing:
        payload["wall_time_s"] = round(time.perf_counter() - start, 6)
    if args.witness:
        core.dump(result.witness, args.witness)
    if args.json:
        _write_json(args.json, payload)
    text = (
        f"min_colours({result.n}, {result.k}) = {result.min_colours}"
        f" (lower bound {result.derived_lower_bound}, {result.nodes_explored} nodes)"
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    b = numerics.round_lower_bound(args.n)
    text = f"log*({b.n}) = {b.log_star_n}\nbound = {b.rational}\nrounds >= {b.rounds}"
    _emit(args, b.to_json(), text)
    return EXIT_OK


def cmd_tower(args) -> int:
    if args.i < 0:
        raise UsageError("--i must be >= 0")
    t = numerics.power_tower(args.i)
    _emit(args, t.to_json(), str(t))
    return EXIT_OK


def cmd_logstar(args) -> int:
    try:
        x = Fraction(args.x)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {args.x!r}") from None
    if x < 0:
        raise UsageError("--x must be >= 0")
    v = numerics.log_star(x)
    _emit(args, {"x": str(x), "log_star": v}, str(v))
    return EXIT_OK


def _load_cycle(spec: str, n: int | None, seed: int) -> simulator.CycleInstance:
    if spec == "random" or spec.startswith("random:"):
        if n is None:
            raise UsageError("--n is required with a random permutation")
        if spec != "random":
            try:
                seed = int(spec.split(":", 1)[1])
            except ValueError:
                raise UsageError(f"bad seed in {spec!r}") from None
        return simulator.CycleInstance.random(n, seed)
    cycle = simulator.CycleInstance.load(spec)
    if n is not None and n != cycle.n:
        raise UsageError(f"--n {n} does not match the {cycle.n} identifiers in {spec}")
    return cycle


def _load_algorithm(spec: str, radius: int | None, n: int) -> simulator.RadiusAlgorithm:
    if spec == "builtin:bucket":
        return simulator.bucket(radius or 0)
    if spec == "builtin:constant":
        return simulator.constant(radius or 0)
    if spec == "builtin:reduction":
        alg = simulator.reduction_algorithm(n)
        if radius is not None and radius != alg.radius:
            raise UsageError(f"builtin:reduction on {n} ids has radius {alg.radius}, not {radius}")
        return alg
    if spec.startswith("builtin:"):
        raise UsageError(f"unknown algorithm {spec!r}")
    f = core.load(spec)
    try:
        alg = simulator.RadiusAlgorithm.from_colouring_function(f, name=spec)
    except ValueError as exc:
        raise core.FormatError(str(exc)) from None
    if radius is not None and radius != alg.radius:
        raise UsageError(f"{spec} has arity {f.k}, i.e. radius {alg.radius}, not {radius}")
    if f.n != n:
        raise UsageError(f"{spec} is over 1..{f.n} but the cycle has {n} identifiers")
    return alg


def cmd_simulate(args) -> int:
    cycle = _load_cycle(args.perm, args.n, args.seed)
    if args.alg == "builtin:reduction" and args.T is None:
        run = simulator.reference_colour_reduction(cycle)
        payload = run.to_json()
    else:
        alg = _load_algorithm(args.alg, args.T, cycle.n)
        try:
            outcome = simulator.run_on_cycle(alg, cycle)
        except simulator.UndefinedWindow as exc:
            raise UsageError(str(exc)) from None
        payload = outcome.to_json()
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if payload["proper"] else EXIT_NEGATIVE


def cmd_extract(args) -> int:
    alg = _load_algorithm(args.alg, args.T, args.n)
    f = simulator.extract_colouring_function(alg, args.n)
    core.dump(f, args.output)
    report = core.verify(f, threads=args.threads)
    payload = {"n": f.n, "k": f.k, "c": f.c, "output": args.output, "valid": report.is_valid}
    _emit(args, payload, f"wrote {f.k}-ary table to {args.output} ({'valid' if report.is_valid else 'invalid'})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="locality-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a cf-v1 table")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-violations", type=int, default=core.DEFAULT_MAX_VIOLATIONS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("speedup", parents=[common], help="one subset-speedup step")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_speedup)

    p = sub.add_parser("trace", parents=[common], help="speed down to arity 1 and certify")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("search", parents=[common], help="minimum colours for (n, k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cmax", type=int)
    p.add_argument("--witness")
    p.add_argument("--json")
    p.add_argument("--timing", action="store_true", help="add wall time to the report")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bound", parents=[common], help="round lower bound for n ids")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("tower", parents=[common], help="tower of i twos")
    p.add_argument("--i", type=int, required=True)
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("logstar", parents=[common], help="iterated logarithm")
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_logstar)

    p = sub.add_parser("simulate", parents=[common], help="run an algorithm on a cycle")
    p.add_argument("--perm", required=True, help='permutation file, "random" or "random:<seed>"')
    p.add_argument("--n", type=int)
    p.add_argument("--alg", required=True)
    p.add_argument("--T", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", parents=[common], help="tabulate an algorithm on increasing windows")
    p.add_argument("--alg", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=int)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_extract)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except core.GuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
