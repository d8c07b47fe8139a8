"""Command line front end.

Subcommands: solve, check, sweep, gen, kp, reduce.  Input digraphs are read
from --input (default stdin) in the line format or, when the payload starts
with '{', the JSON format.  Exit codes: 0 success / bound holds, 2 check or
sweep found bound failures, 1 any error.  Identical invocations print
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .digraph import (
    Digraph,
    enumerate_digraphs,
    loads_json,
    mask_of,
    n_minus_closed,
    parse,
    serialize,
    vertices_of,
)
from .exceptions import (
    BudgetExceededError,
    OracleContractError,
    ParseError,
    PostconditionViolationError,
)
from .generators import make, parse_family
from .reductions import add_source_gadget, c3_blowup, weighted_blowup
from .solvers import (
    find_kernel,
    heavy_independent_set,
    is_kernel,
    is_quasi_kernel,
    kernel_perfect_number,
    max_large_quasi_kernel,
    max_sharp_quasi_kernel,
    min_quasi_kernel,
)
from .theorems import (
    large_qk_from_partition,
    quasi_kernel_covering,
    small_qk_from_partition,
    small_qk_with_sources,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 is reserved for bound failures
        raise _UsageError(message)


def _format_set(mask: int) -> str:
    return "{" + ", ".join(str(v) for v in vertices_of(mask)) + "}"


def _read_digraph(path: str) -> Digraph:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    if text.lstrip().startswith("{"):
        return loads_json(text)
    return parse(text)


def _parse_set(text: str) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        return mask_of(int(tok) for tok in text.split(","))
    except ValueError:
        raise ParseError(f"bad vertex list {text!r}: expected comma-separated integers") from None


ALGS = ("min", "large", "sharp", "kernel", "heavy",
        "partition-small", "partition-large", "partition-sources", "covering")


def _cmd_solve(args) -> int:
    d = _read_digraph(args.input)
    trace_json = None
    if args.alg == "min":
        res = min_quasi_kernel(d)
        witness, objective = res.witness, res.objective
    elif args.alg == "large":
        res = max_large_quasi_kernel(d)
        witness, objective = res.witness, res.objective
    elif args.alg == "sharp":
        res = max_sharp_quasi_kernel(d)
        witness, objective = res.witness, res.objective
    elif args.alg == "kernel":
        res = find_kernel(d)
        witness, objective = res.witness, res.objective
    elif args.alg == "heavy":
        witness = heavy_independent_set(d)
        objective = n_minus_closed(d, witness).bit_count()
    elif args.alg == "covering":
        witness = quasi_kernel_covering(d, _parse_set(args.set))
        objective = witness.bit_count()
    else:
        _, partition = kernel_perfect_number(d)
        if args.alg == "partition-small":
            trace = small_qk_from_partition(d, partition, check_parts=False)
            witness, objective = trace.result, trace.result.bit_count()
            trace_json = trace.to_json()
        elif args.alg == "partition-large":
            res = large_qk_from_partition(d, partition, check_parts=False)
            witness, objective = res.witness, res.objective
        else:
            res = small_qk_with_sources(d, partition, check_parts=False)
            witness, objective = res.witness, res.objective

    if witness is not None:
        ok = is_kernel(d, witness) if args.alg == "kernel" else (
            True if args.alg == "heavy" else is_quasi_kernel(d, witness))
        if not ok:
            raise PostconditionViolationError("witness failed the final re-check")
    if args.format == "json":
        payload = {
            "witness": None if witness is None else list(vertices_of(witness)),
            "size": 0 if witness is None else witness.bit_count(),
            "objective": objective,
            "verified": witness is not None,
        }
        if trace_json is not None and args.trace:
            payload["trace"] = trace_json
        print(json.dumps(payload, separators=(",", ":")))
    else:
        if witness is None:
            print("witness: none")
        else:
            print(f"witness: {_format_set(witness)}")
            print(f"size: {witness.bit_count()}")
            print(f"objective: {objective}")
            print("verified: true")
        if trace_json is not None and args.trace:
            print(f"trace: {json.dumps(trace_json, separators=(',', ':'))}")
    return 0


def _cmd_check(args) -> int:
    d = _read_digraph(args.input)
    spec = harness.ConjectureSpec(args.conjecture, harness.parse_alpha(args.alpha),
                                  sink_free_version=args.conjecture == "small" or args.sink_free)
    rec = harness.check(d, spec)
    if args.format == "json":
        print(json.dumps(rec.to_json(), separators=(",", ":")))
    else:
        print(f"result: {'PASS' if rec.passed else 'FAIL'}")
        print(f"objective: {rec.objective}")
        print(f"bound: {rec.bound.numerator}/{rec.bound.denominator}")
        print(f"witness: {_format_set(rec.witness) if rec.witness is not None else 'none'}")
    return 0 if rec.passed else 2


def _cmd_sweep(args) -> int:
    spec = harness.ConjectureSpec(args.conjecture, harness.parse_alpha(args.alpha),
                                  sink_free_version=args.conjecture == "small" or args.sink_free)
    sink_free = args.sink_free or spec.sink_free_version
    stream = enumerate_digraphs(args.n, sink_free=sink_free, canonical=args.canonical)
    corpus = f"labeled:n={args.n}" + (":sink_free" if sink_free else "") + (
        ":canonical" if args.canonical else "")
    keep = args.records or args.format == "csv"
    report = harness.sweep(stream, spec, corpus, shard_count=args.shards,
                           shard_index=args.shard, keep_records=keep)
    if args.format == "csv":
        sys.stdout.write(harness.report_to_csv(report))
    else:
        print(json.dumps(report.to_json(), separators=(",", ":")))
    return 0 if not report.failures else 2


def _cmd_gen(args) -> int:
    sys.stdout.write(serialize(make(parse_family(args.family))))
    return 0


def _cmd_kp(args) -> int:
    d = _read_digraph(args.input)
    k, partition = kernel_perfect_number(d)
    if args.format == "json":
        print(json.dumps({"kp": k, "partition": [list(vertices_of(p)) for p in partition.parts]},
                         separators=(",", ":")))
    else:
        print(f"kp: {k}")
        print("partition: " + " | ".join(_format_set(p) for p in partition.parts))
    return 0


def _cmd_reduce(args) -> int:
    d = _read_digraph(args.input)
    kind, _, param = args.kind.partition(":")
    if kind == "gadget":
        blown, bmap = add_source_gadget(d, _positive_int(param, "gadget"))
    elif kind == "wblowup":
        blown, bmap = weighted_blowup(d, (_positive_int(param, "wblowup"),) * d.n)
    elif kind == "c3blowup":
        if param:
            raise _UsageError("c3blowup takes no parameter")
        blown, bmap = c3_blowup(d)
    else:
        raise _UsageError(f"unknown reduction kind {args.kind!r}")
    if args.format == "json":
        print(json.dumps({"digraph": {"n": blown.n, "arcs": [list(a) for a in blown.arcs()]},
                          "map": bmap.to_json()}, separators=(",", ":")))
    else:
        for v, block in enumerate(bmap.blocks):
            print(f"# block {v}: {_format_set(block)}")
        sys.stdout.write(serialize(blown))
    return 0


def _positive_int(token: str, kind: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise _UsageError(f"{kind} needs an integer parameter, got {token!r}") from None
    if value < 1:
        raise _UsageError(f"{kind} parameter must be >= 1, got {value}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="qk", description="quasi-kernel solvers and conjecture sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one solver on one digraph")
    p.add_argument("--alg", choices=ALGS, required=True)
    p.add_argument("--input", default="-", help="digraph file, '-' for stdin")
    p.add_argument("--set", default="", help="vertex list for --alg covering, e.g. 0,2")
    p.add_argument("--trace", action="store_true", help="emit the partition-small audit trace")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check", help="check one bound on one digraph")
    p.add_argument("--conjecture", choices=harness.VARIANTS, required=True)
    p.add_argument("--alpha", required=True, help="exact ratio P/Q")
    p.add_argument("--sink-free", action="store_true")
    p.add_argument("--input", default="-")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("sweep", help="check a bound over all digraphs of a given order")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--conjecture", choices=harness.VARIANTS, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--sink-free", action="store_true")
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--shard", type=int, default=0)
    p.add_argument("--records", action="store_true", help="keep one record per digraph")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("gen", help="emit a named family digraph")
    p.add_argument("--family", required=True,
                   help="cycle:N path:N edgeless:N circulant:N c3pow:K "
                        "random:N:P/Q:SEED random_tournament:N:SEED union:A,B,...")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("kp", help="kernel-perfect partition number with certificate")
    p.add_argument("--input", default="-")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_kp)

    p = sub.add_parser("reduce", help="apply a gadget or blowup")
    p.add_argument("--kind", required=True, help="gadget:C | wblowup:C | c3blowup")
    p.add_argument("--input", default="-")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_reduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"qk: error: {e}", file=sys.stderr)
        return 1
    except (ParseError, ValueError, BudgetExceededError, OSError) as e:
        print(f"qk: error: {e}", file=sys.stderr)
        return 1
    except (PostconditionViolationError, OracleContractError) as e:
        print(f"qk: verification error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # argparse --help
        code = e.code
        return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
