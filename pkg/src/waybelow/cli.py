"""Command-line entry point: JSON in, JSON out.

Exit codes: 0 success, 2 usage, 3 negative verdict, 4 domain error.
Every argument that takes a document accepts a file path or inline JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import codec
from .colimit import ProductSequence, build_chain, check_open_at
from .counterexamples import not_closed_demo
from .geometry import GeometryError
from .interpolation import PreconditionFailed, interpolate
from .properties import RunConfig, run_properties
from .relation import UnsupportedSpace, oracle_way_below, way_below

OK, USAGE, NEGATIVE, DOMAIN = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _doc(arg: str):
    text = arg.strip()
    if text[:1] in "{[\"" or text[:1].isdigit() or text[:1] == "-":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            obj = None
        if obj is not None:
            return obj
    obj = codec.load_file(arg)
    if isinstance(obj, dict):
        obj.pop("schema", None)
    return obj


def _emit(doc: dict) -> None:
    sys.stdout.write(codec.dumps(doc) + "\n")


def _cmd_waybelow(args) -> int:
    space = codec.space_from_json(_doc(args.space))
    s = codec.union_from_json(_doc(args.s))
    t = codec.union_from_json(_doc(args.t))
    verdict = way_below(space, s, t)
    doc = {"kind": "way_below", **verdict.to_json()}
    if args.oracle_budget is not None:
        try:
            res = oracle_way_below(space, s, t, budget=args.oracle_budget)
            doc["oracle"] = {"holds": res.holds, "examined": res.examined}
        except UnsupportedSpace as exc:
            doc["oracle"] = {"holds": None, "unsupported": str(exc)}
    _emit(doc)
    return OK if verdict.holds else NEGATIVE


def _cmd_interpolate(args) -> int:
    xs = codec.space_from_json(_doc(args.x_space))
    ys = codec.space_from_json(_doc(args.y_space))
    s = codec.union_from_json(_doc(args.s))
    t = codec.union_from_json(_doc(args.t))
    w = codec.union_from_json(_doc(args.w))
    try:
        res = interpolate(xs, ys, s, t, w, max_refine=args.max_refine)
    except PreconditionFailed as exc:
        _emit({"kind": "interpolation", "error": str(exc), "verdict": exc.verdict.to_json()})
        return NEGATIVE
    _emit({"kind": "interpolation", "u_s": codec.union_to_json(res.u_s),
           "v_t": codec.union_to_json(res.v_t), "trace": res.trace.to_json()})
    return OK


def _split_point(obj, dx: int, dy: int):
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(p, list) for p in obj):
        x, y = codec.point_from_json(obj[0]), codec.point_from_json(obj[1])
    else:
        flat = codec.point_from_json(obj)
        x, y = flat[:dx], flat[dx:]
    if len(x) != dx or len(y) != dy:
        raise codec.CodecError(f"point {obj!r} does not fit dimensions {dx} + {dy}")
    return x, y


def _cmd_chain(args) -> int:
    sx = codec.sequence_from_json(_doc(args.seq_x))
    sy = codec.sequence_from_json(_doc(args.seq_y))
    w = codec.family_from_json(_doc(args.w))
    x, y = _split_point(_doc(args.point), sx.dim, sy.dim)
    witness = build_chain(sx, sy, w, x, y, args.depth)
    _emit({"kind": "chain", **witness.to_json()})
    return OK


def _cmd_check_open(args) -> int:
    seq_doc = _doc(args.seq)
    if isinstance(seq_doc, dict) and "left" in seq_doc:
        seq = ProductSequence(codec.sequence_from_json(seq_doc["left"]),
                              codec.sequence_from_json(seq_doc["right"]))
    else:
        seq = codec.sequence_from_json(seq_doc)
    fam = codec.family_from_json(_doc(args.family))
    stages = [{"p": p, "open": check_open_at(seq, fam, p)} for p in range(args.upto + 1)]
    ok = all(st["open"] for st in stages)
    _emit({"kind": "check_open", "stages": stages, "all_open": ok})
    return OK if ok else NEGATIVE


def _cmd_counterexample(args) -> int:
    demo = not_closed_demo(args.kmax)
    _emit({"kind": "hamcke", **demo.to_json()})
    return OK


def _cmd_properties(args) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("WAYBELOW_SEED")
        seed = int(env) if env else 0
    cfg = RunConfig(seed=seed, case_count=args.cases, depth=args.depth, oracle_budget=args.oracle_budget)
    report = run_properties(cfg, modules=tuple(args.module or ("waybelow", "interpolation", "colimit")))
    _emit(report)
    for entry in report["laws"]:
        status = "pass" if entry["passed"] else "FAIL"
        print(f"{status} {entry['module']}.{entry['law']} ({entry['cases']} cases)", file=sys.stderr)
    return OK if report["all_passed"] else NEGATIVE


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="waybelow", description="Way-below decisions, product interpolation and colimit chains.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("waybelow", help="decide s ≪ t in a space")
    p.add_argument("--space", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--oracle-budget", type=_nonneg, default=None,
                   help="also run the cover-enumeration oracle with this budget")
    p.set_defaults(func=_cmd_waybelow)

    p = sub.add_parser("interpolate", help="open rectangle between S × T and W")
    for flag in ("--x-space", "--y-space", "--s", "--t", "--w"):
        p.add_argument(flag, required=True)
    p.add_argument("--max-refine", type=_nonneg, default=4)
    p.set_defaults(func=_cmd_interpolate)

    p = sub.add_parser("chain", help="ascending rectangle chain around a point")
    for flag in ("--seq-x", "--seq-y", "--w", "--point"):
        p.add_argument(flag, required=True)
    p.add_argument("--depth", type=_nonneg, default=8)
    p.set_defaults(func=_cmd_chain)

    p = sub.add_parser("check-open", help="openness of a stage-wise family")
    p.add_argument("--seq", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--upto", type=_nonneg, default=8)
    p.set_defaults(func=_cmd_check_open)

    p = sub.add_parser("counterexample", help="witnesses for the wedge-of-circles example")
    p.add_argument("which", choices=["hamcke"])
    p.add_argument("--kmax", type=int, default=16)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("properties", help="run the seeded law battery")
    p.add_argument("--seed", type=int, default=None, help="defaults to $WAYBELOW_SEED, then 0")
    p.add_argument("--cases", type=_nonneg, default=200)
    p.add_argument("--depth", type=_nonneg, default=8)
    p.add_argument("--oracle-budget", type=_nonneg, default=50)
    p.add_argument("--module", action="append", choices=["waybelow", "interpolation", "colimit"])
    p.set_defaults(func=_cmd_properties)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return USAGE
    except SystemExit as exc:  # --help
        return OK if exc.code in (0, None) else USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (GeometryError, ValueError, TypeError, OSError, KeyError) as exc:
        print(f"waybelow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return DOMAIN


if __name__ == "__main__":
    sys.exit(main())
