"""Command-line front end.

Machine output is JSON (one document per line) on stdout; human summaries
go to stderr.  Exit status: 0 when every requested check passes, 1 on a
violation, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .cartan import RootSystemError, WeightVector, format_type, parse_type
from .crystal import CrystalError, generate, walks_to_highest
from .perfect import PerfectCrystalError, b11, bn1_typeA, enumerate_walks, finite_walk_graph
from .serialize import (
    SerializationError,
    doc_to_dot,
    dumps_doc,
    dumps_graph,
    graph_from_doc,
    perfect_to_doc,
)
from .tensor import TensorError, construct_walk_node
from .verify import CHECKERS, SweepConfig, sweep

DEPTH_ENV = "CRYSTAL_DEPTH_DEFAULT"
THEOREMS = {
    "lemma-eps": "lemma-eps",
    "cor-zero": "cor-zero",
    "cor-parent": "cor-parent",
    "cor-serre": "cor-serre",
    "type": "type",
    "global": "global",
    "axioms": "axioms",
}


class UsageError(Exception):
    pass


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"malformed {what}: {text!r}") from None


def _default_depth() -> int:
    raw = os.environ.get(DEPTH_ENV, "8")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{DEPTH_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError(f"{DEPTH_ENV} must be non-negative")
    return value


def _depth(text: Optional[str]) -> Optional[int]:
    if text is None:
        return _default_depth()
    if text == "full":
        return None
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"depth must be an integer or 'full', got {text!r}") from None
    if value < 0:
        raise UsageError("depth must be non-negative")
    return value


def _read_doc(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc})") from None


def _read_graph(path: str):
    return graph_from_doc(_read_doc(path))


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    t = parse_type(args.type)
    values = _int_list(args.weight, "weight")
    if len(values) != len(t.index_set):
        raise UsageError(f"{t} needs {len(t.index_set)} weight entries, got {len(values)}")
    if any(v < 0 for v in values):
        raise UsageError("weight must be dominant (non-negative entries)")
    depth = _depth(args.depth)
    if depth is None and t.affine:
        raise UsageError("affine crystals are infinite; give --depth")
    g = generate(t, WeightVector.from_list(t, values), depth)
    text = dumps_graph(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{format_type(t)} weight {values}: {len(g)} nodes, {g.edge_count()} edges", file=sys.stderr)
    return 0


def cmd_dot(args) -> int:
    sys.stdout.write(doc_to_dot(_read_doc(args.file)))
    return 0


def cmd_singular(args) -> int:
    g = _read_graph(args.file)
    n = 0
    for nid in g.interior_nodes():
        if not g.is_singular(nid):
            continue
        n += 1
        parent = g.singular_parent(nid) if nid != g.highest else None
        _emit({
            "id": nid,
            "depth": g.depth(nid),
            "eps": g.epsilon_vector(nid).as_list(g.t),
            "singular_parent": parent,
        })
    print(f"{n} singular interior nodes", file=sys.stderr)
    return 0


def cmd_walks(args) -> int:
    g = _read_graph(args.file)
    if args.to not in g:
        raise UsageError(f"node {args.to} is not in the graph")
    walks = walks_to_highest(g, args.to, limit=args.limit)
    for w in walks:
        _emit({"to": args.to, "walk": list(w)})
    print(f"{len(walks)} walks", file=sys.stderr)
    return 0


def cmd_perfect(args) -> int:
    t = parse_type(args.type)
    if t.affine:
        if args.reversed:
            if t.family.value != "Aaff":
                raise UsageError("--reversed is only defined for A_n^{(1)}, n >= 2")
            pc = bn1_typeA(t.rank)
        else:
            pc = b11(t)
    else:
        graphs = finite_walk_graph(t)
        pc = graphs[1] if args.reversed and len(graphs) > 1 else graphs[0]
        if args.reversed and len(graphs) == 1:
            raise UsageError("--reversed is only defined for type A")
    if args.walks:
        if args.from_color is None or args.len is None:
            raise UsageError("--walks needs --from-color and --len")
        if args.len < 1:
            raise UsageError("--len must be >= 1")
        walks = enumerate_walks(pc, args.from_color, args.len)
        for w in walks:
            _emit({"type": format_type(t), "walk": list(w)})
        print(f"{len(walks)} walks on {pc.name}", file=sys.stderr)
        return 0
    doc = perfect_to_doc(t, pc)
    sys.stdout.write(doc_to_dot(doc) if args.dot else dumps_doc(doc))
    return 0


def cmd_tensor_check(args) -> int:
    t = parse_type(args.type)
    if not t.affine:
        raise UsageError("tensor-check needs an affine type")
    walk = _int_list(args.walk, "walk")
    try:
        _, report = construct_walk_node(t, walk, reversed_arrows=args.reversed)
    except TensorError as exc:
        raise UsageError(str(exc)) from None
    _emit(report.to_json())
    status = "pass" if report.passed else "FAIL"
    print(f"{format_type(t)} walk {walk}: {status}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    g = _read_graph(args.file)
    report = CHECKERS[THEOREMS[args.theorem]](g)
    _emit(report.to_json())
    print(f"{report.theorem} {report.type} {report.weight}: {report.status} "
          f"({report.instances} instances, {len(report.violations)} violations)", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_sweep(args) -> int:
    try:
        cfg = SweepConfig.load(args.config)
    except FileNotFoundError:
        raise UsageError(f"no such file: {args.config}") from None
    failed = 0
    total = 0
    for r in sweep(cfg):
        total += 1
        _emit(r.to_json())
        if not r.passed:
            failed += 1
    print(f"{total} reports, {failed} failing", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crystalwalk", description="Singular walks in highest weight crystals.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="generate a truncated crystal graph as JSON")
    s.add_argument("--type", required=True, help="root system type, e.g. A3, C2~1, A4~2d")
    s.add_argument("--weight", required=True, help="comma list over I in ascending colour order")
    s.add_argument("--depth", help=f"depth limit or 'full' (default ${DEPTH_ENV} or 8)")
    s.add_argument("--out", help="output file (default stdout)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("dot", help="convert a JSON graph to DOT")
    s.add_argument("file")
    s.set_defaults(func=cmd_dot)

    s = sub.add_parser("singular", help="list singular nodes and their singular parents")
    s.add_argument("file")
    s.set_defaults(func=cmd_singular)

    s = sub.add_parser("walks", help="all walks from the highest node to a node")
    s.add_argument("file")
    s.add_argument("--to", required=True, help="target node id")
    s.add_argument("--limit", type=int, default=None, help="refuse if there are more walks")
    s.set_defaults(func=cmd_walks)

    s = sub.add_parser("perfect", help="dump a catalogued B^{1,1} or enumerate walks on it")
    s.add_argument("--type", required=True)
    s.add_argument("--reversed", action="store_true", help="B^{n,1} (type A only)")
    s.add_argument("--walks", action="store_true")
    s.add_argument("--from-color", type=int)
    s.add_argument("--len", type=int)
    s.add_argument("--dot", action="store_true", help="DOT instead of JSON")
    s.set_defaults(func=cmd_perfect)

    s = sub.add_parser("tensor-check", help="build v_lambda (x) boxes for a walk and check it")
    s.add_argument("--type", required=True)
    s.add_argument("--walk", required=True, help="comma list i1,i2,...")
    s.add_argument("--reversed", action="store_true", help="read the walk on B^{n,1}")
    s.set_defaults(func=cmd_tensor_check)

    s = sub.add_parser("verify", help="run one checker on a JSON graph")
    s.add_argument("file")
    s.add_argument("--theorem", required=True, choices=sorted(THEOREMS))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="run the verification grid")
    s.add_argument("--config", help="INI grid file (default: the packaged grid)")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RootSystemError, SerializationError, PerfectCrystalError, CrystalError) as exc:
        print(f"crystalwalk {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # malformed config values and similar
        print(f"crystalwalk {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
