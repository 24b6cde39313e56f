"""Command-line interface: ``approxstable <command> ...``.

Exit codes: 0 success, 1 a checked property does not hold (for example the
audit found a blocking pair), 2 usage, parse or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .asbm import RELOCATE_ON_FIRST_MATCH, RELOCATE_ON_SATURATION, solve_b
from .audit import InvalidMatching, audit
from .bench import loglog_slope, rows_to_csv, rows_to_table, run_scaling
from .events import format_event
from .formats import (ParseError, audit_to_json, instance_to_json, matching_to_json,
                      parse_instance, parse_matching, result_to_json, serialize_audit,
                      serialize_instance, serialize_matching)
from .generate import GenParams, random_instance
from .gs_modified import CapacityNotOne, solve
from .model import Side, ValidationError
from .oracle import DEFAULT_EDGE_BUDGET, SizeLimitExceeded, optimal_stable
from .schedule import ScheduleError, SchedulePolicy

__all__ = ["main"]


class UsageError(Exception):
    pass


def _script(text: str) -> list[int]:
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if not (tok[0] == "m" and tok[1:].isdigit()) or int(tok[1:]) < 1:
            raise UsageError(f"bad proposer {tok!r} in script (expected m<i>)")
        out.append(int(tok[1:]) - 1)
    return out


def _policy(text: str, seed: int) -> SchedulePolicy:
    if text in ("lifo", "fifo"):
        return SchedulePolicy(text)
    if text == "random":
        return SchedulePolicy.random(seed)
    if text.startswith("scripted:"):
        return SchedulePolicy.scripted(_script(text[len("scripted:"):]))
    raise UsageError(f"unknown policy {text!r}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _run_solver(args, policy: SchedulePolicy):
    inst = parse_instance(_read(args.input))
    if args.b_matching:
        res = solve_b(inst, policy, args.seed, trace=args.trace, relocate_on=args.relocate_on)
    else:
        res = solve(inst, policy, args.seed, trace=args.trace)
    if args.json:
        _write(args.output, _dump(result_to_json(res)))
        return 0
    text = ""
    if args.trace:
        swapped = res.proposer_side is Side.RIGHT
        text += "".join(format_event(ev, swapped) + "\n" for ev in res.trace)
    text += serialize_matching(res.matching)
    _write(args.output, text)
    return 0


def cmd_solve(args) -> int:
    return _run_solver(args, _policy(args.policy, args.seed))


def cmd_replay(args) -> int:
    return _run_solver(args, SchedulePolicy.scripted(_script(args.script)))


def cmd_audit(args) -> int:
    inst = parse_instance(_read(args.instance))
    matching = parse_matching(_read(args.matching))
    rep = audit(inst, matching)
    _write(args.output, _dump(audit_to_json(rep)) if args.json else serialize_audit(rep))
    return 0 if rep.ok else 1


def cmd_oracle(args) -> int:
    inst = parse_instance(_read(args.instance))
    res = optimal_stable(inst, args.edge_budget)
    if args.json:
        _write(args.output, _dump({"type": "oracle", "opt_size": res.opt_size,
                                   "stable_count": res.stable_count, "explored": res.explored,
                                   "witness": matching_to_json(res.witness)}))
    else:
        _write(args.output, f"opt_size {res.opt_size}\nstable_count {res.stable_count}\n"
                            f"explored {res.explored}\n" + serialize_matching(res.witness))
    return 0


def cmd_gen(args) -> int:
    params = GenParams(args.n_left, args.n_right, (args.list_min, args.list_max),
                       args.tie_density, args.cap_left, args.cap_right, args.seed)
    inst = random_instance(params)
    _write(args.output, _dump(instance_to_json(inst)) if args.json else serialize_instance(inst))
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(float(s)) for s in args.sizes.split(",") if s]
    except ValueError as exc:
        raise UsageError(f"bad --sizes: {args.sizes!r}") from exc
    params = GenParams(0, 0, (args.list_min, args.list_max), args.tie_density,
                       args.cap_left, args.cap_right, args.seed)
    rows = run_scaling(sizes, params, args.repetitions, engine=args.engine)
    _write(args.csv, rows_to_csv(rows))
    if args.csv not in (None, "-"):
        sys.stdout.write(rows_to_table(rows))
        if len(rows) >= 2:
            sys.stdout.write(f"log-log slope {loglog_slope(rows):.3f}\n")
    bad = [r for r in rows if engine_bound_broken(r, args.engine)]
    return 1 if bad else 0


def engine_bound_broken(row, engine: str) -> bool:
    return engine == "one_to_one" and row.total_proposals > 3 * row.edges


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="approxstable",
                                description="3/2-approximate maximum stable matchings with ties")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--input", required=True, help="instance file ('-' for stdin)")
        sp.add_argument("--output", help="write here instead of stdout")
        sp.add_argument("--seed", type=int, default=0,
                        help="tie-breaking seed, also seeds the random policy (default 0)")
        sp.add_argument("--b-matching", action="store_true", help="use the b-matching engine")
        sp.add_argument("--relocate-on", default=RELOCATE_ON_SATURATION,
                        choices=[RELOCATE_ON_SATURATION, RELOCATE_ON_FIRST_MATCH])
        sp.add_argument("--trace", action="store_true", help="print solver events")
        sp.add_argument("--json", action="store_true", help="JSON output")

    sp = sub.add_parser("solve", help="solve an instance")
    solver_flags(sp)
    sp.add_argument("--policy", default="lifo",
                    help="lifo (default), fifo, random, or scripted:m1,m2,...")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("replay", help="solve with a scripted proposer sequence")
    solver_flags(sp)
    sp.add_argument("--script", required=True, help="comma-separated proposers, e.g. m1,m2")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("audit", help="check a matching for blocking pairs and dangerous paths")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--matching", required=True)
    sp.add_argument("--output")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("oracle", help="exact maximum stable matching by enumeration")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    sp.add_argument("--output")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen", help="generate a random instance")
    sp.add_argument("--n-left", type=int, required=True)
    sp.add_argument("--n-right", type=int, required=True)
    sp.add_argument("--list-min", type=int, default=1)
    sp.add_argument("--list-max", type=int, default=4)
    sp.add_argument("--tie-density", type=float, default=0.3)
    sp.add_argument("--cap-left", type=int, default=1)
    sp.add_argument("--cap-right", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bench", help="scaling benchmark, CSV output")
    sp.add_argument("--sizes", default="10000,100000,1000000")
    sp.add_argument("--list-min", type=int, default=1)
    sp.add_argument("--list-max", type=int, default=10)
    sp.add_argument("--tie-density", type=float, default=0.3)
    sp.add_argument("--cap-left", type=int, default=1)
    sp.add_argument("--cap-right", type=int, default=1)
    sp.add_argument("--repetitions", type=int, default=3)
    sp.add_argument("--engine", choices=["one_to_one", "b"], default="one_to_one")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", help="CSV destination (default stdout)")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, ValidationError, InvalidMatching, CapacityNotOne,
            SizeLimitExceeded, ScheduleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
