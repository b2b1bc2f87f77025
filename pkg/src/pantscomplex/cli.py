"""Command-line interface.

Every command writes canonical JSON (sorted keys, compact separators) or DOT to
stdout.  Exit status: 0 success, 1 verification failure or unfillable loop,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import NamedTuple

from . import farey, homotopy, pantsgraph, relations
from .farey import SlopeModel
from .pantsgraph import PantsGraph, TypeMoveGraph
from .surface import curve_count, pants_count, validate_surface


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _surface(args):
    return validate_surface(args.g, args.n)


def _loop_payload(data):
    if isinstance(data, dict):
        data = data.get("loop")
    if not isinstance(data, list):
        raise UsageError("loop file must hold a JSON list of vertices or {\"loop\": [...]}")
    return data


def _default_cells(host: TypeMoveGraph) -> list:
    kinds = (relations.RelationKind.R3A, relations.RelationKind.R5A, relations.RelationKind.RC)
    return [c for kind in kinds for c in relations.find_instances(host, kind)]


# -- commands --------------------------------------------------------------


def cmd_counts(args, out):
    s = _surface(args)
    out.write(dumps({"curves": curve_count(s), "pants": pants_count(s)}))
    return 0


def cmd_enumerate(args, out):
    s = _surface(args)
    codes = pantsgraph.enumerate_types(s)
    out.write(dumps({"type": "type-list", "g": s.genus, "n": s.boundary_count,
                     "count": len(codes), "codes": [list(c) for c in codes]}))
    return 0


def cmd_movegraph(args, out):
    host = pantsgraph.build_move_graph(_surface(args))
    out.write(host.to_dot() if args.format == "dot" else dumps(host.to_json()))
    return 0


def cmd_moves(args, out):
    G = PantsGraph.from_json(_load_json(args.graph))
    moves = []
    for m in pantsgraph.legal_moves(G):
        entry = m.to_json()
        entry["complement"] = pantsgraph.complement_type(G, m.site).to_json()
        moves.append(entry)
    out.write(dumps({"type": "moves", "code": list(pantsgraph.canonical_code(G)), "moves": moves}))
    return 0


def cmd_farey(args, out):
    sub = farey.bounded_subcomplex(SlopeModel.parse(args.model), args.limit)
    out.write(sub.to_dot() if args.format == "dot" else dumps(sub.to_json()))
    return 0


def cmd_reduce(args, out):
    kind = SlopeModel.parse(args.model)
    host = farey.FareyModel(kind)
    loop = [host.decode_vertex(v) for v in _loop_payload(_load_json(args.loop))]
    cert = homotopy.reduce_farey_loop(kind, loop)
    out.write(dumps(cert.to_json(host)))
    return 0


def cmd_fill(args, out):
    host = pantsgraph.build_move_graph(_surface(args))
    loop = [host.decode_vertex(v) for v in _loop_payload(_load_json(args.loop))]
    result = homotopy.fill_finite_loop(host, loop, _default_cells(host), budget=args.budget)
    if result.filled:
        out.write(dumps(result.certificate.to_json(host)))
        return 0
    out.write(dumps({"type": "fill-failure", "status": result.status, "explored": result.explored,
                     "frontier": result.frontier}))
    return 1


def cmd_report(args, out):
    host = pantsgraph.build_move_graph(_surface(args))
    report = homotopy.simply_connected_report(host, _default_cells(host), budget=args.budget)
    out.write(dumps(report.to_json(host)))
    return 0 if report.failed == 0 else 1


def cmd_relations(args, out):
    host = pantsgraph.build_move_graph(_surface(args))
    kind = relations.RelationKind.parse(args.kind)
    found = relations.find_instances(host, kind)
    payload = {"type": "relation-instances", "host": host.descriptor(), "kind": kind.value,
               "count": len(found), "instances": [inst.to_json(host) for inst in found]}
    out.write(dumps(payload))
    return 0


def cmd_verify(args, out):
    data = _load_json(args.certificate)
    if not isinstance(data, dict):
        raise UsageError("certificate must be a JSON object")
    host = homotopy.host_from_descriptor(data.get("host", {}))
    cert = homotopy.Certificate.from_json(data, host)
    verdict = homotopy.verify_certificate(host, cert)
    out.write(dumps({"ok": verdict.ok, "step": verdict.step, "reason": verdict.reason}))
    return 0 if verdict.ok else 1


def cmd_corpus(args, out):
    kind = SlopeModel.parse(args.model)
    rng = random.Random(args.seed)
    loops = [[str(v) for v in homotopy.random_farey_loop(rng, args.max_length, args.max_den)]
             for _ in range(args.count)]
    out.write(dumps({"type": "loop-corpus", "model": kind.value, "seed": args.seed, "loops": loops}))
    return 0


class RelationSet(NamedTuple):
    kind: relations.RelationKind
    instances: list


def load_object(data):
    """Rebuild a toolkit object from its JSON form; returns ``(obj, host)``."""
    if not isinstance(data, dict):
        raise UsageError("object must be a JSON object")
    tag = data.get("type")
    if tag == "farey-subcomplex":
        return farey.FareySubcomplex.from_json(data), None
    if tag == "type-move-graph":
        return TypeMoveGraph.from_json(data), None
    if tag == "certificate":
        host = homotopy.host_from_descriptor(data["host"])
        return homotopy.Certificate.from_json(data, host), host
    if tag == "relation-instances":
        host = homotopy.host_from_descriptor(data["host"])
        instances = [relations.RelationInstance.from_json(d, host) for d in data["instances"]]
        return RelationSet(relations.RelationKind.parse(data["kind"]), instances), host
    if {"pants", "legs", "edges"} <= data.keys():
        return PantsGraph.from_json(data), None
    raise UsageError(f"unrecognized object type {tag!r}")


def to_json(obj, host) -> dict:
    if isinstance(obj, homotopy.Certificate):
        return obj.to_json(host)
    if isinstance(obj, RelationSet):
        return {"type": "relation-instances", "host": host.descriptor(), "kind": obj.kind.value,
                "count": len(obj.instances), "instances": [inst.to_json(host) for inst in obj.instances]}
    if isinstance(obj, PantsGraph):
        d = obj.to_json()
        d["type"] = "pants-graph"
        return d
    return obj.to_json()


def to_dot(obj, host) -> str:
    if isinstance(obj, (farey.FareySubcomplex, TypeMoveGraph)):
        return obj.to_dot()
    if isinstance(obj, PantsGraph):
        lines = ["graph pants {"]
        for p in range(obj.num_pants):
            lines.append(f'  p{p} [label="P{p}", shape=circle];')
        for label, p in enumerate(obj.legs, 1):
            lines.append(f'  b{label} [label="{label}", shape=plaintext];')
            lines.append(f"  p{p} -- b{label};")
        for i, (p, q) in enumerate(obj.edges):
            lines.append(f'  p{p} -- p{q} [label="c{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    enc = lambda v: json.dumps(host.encode_vertex(v), separators=(",", ":")).replace('"', "")  # noqa: E731
    if isinstance(obj, homotopy.Certificate):
        lines = ["digraph certificate {"]
        for a, b in zip(obj.initial, obj.initial[1:]):
            lines.append(f'  "{enc(a)}" -> "{enc(b)}";')
        for i, cell in enumerate(obj.cells()):
            lines.append(f"  // cell {i} {cell.kind.value}: " + " ".join(enc(v) for v in cell.boundary))
        lines.append("}")
        return "\n".join(lines) + "\n"
    colors = {"3A": "red", "5A": "blue", "3S": "darkgreen", "6AS": "orange", "C": "purple"}
    lines = ["graph relations {"]
    for i, inst in enumerate(obj.instances):
        b = inst.boundary
        lines.append(f"  // cell {i} {inst.kind.value}: " + " ".join(enc(v) for v in b))
        for j in range(len(b)):
            lines.append(f'  "{enc(b[j])}" -- "{enc(b[(j + 1) % len(b)])}" '
                         f'[color={colors[inst.kind.value]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args, out):
    obj, host = load_object(_load_json(args.object))
    out.write(to_dot(obj, host) if args.format == "dot" else dumps(to_json(obj, host)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pantscomplex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def surface_cmd(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("g", type=int)
        p.add_argument("n", type=int)
        p.set_defaults(func=func)
        return p

    surface_cmd("counts", cmd_counts, "curve and pants counts of a (g,n) decomposition")
    surface_cmd("enumerate", cmd_enumerate, "all topological types of decompositions")
    p = surface_cmd("movegraph", cmd_movegraph, "the type-level A-move graph")
    p.add_argument("--format", choices=("json", "dot"), default="json")

    p = sub.add_parser("moves", help="legal S- and A-moves of a pants graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_moves)

    p = sub.add_parser("farey", help="finite windows of the slope complex")
    fsub = p.add_subparsers(dest="farey_command", required=True)
    ball = fsub.add_parser("ball", help="slopes with max(|p|, q) <= limit")
    ball.add_argument("limit", type=int)
    ball.add_argument("--model", choices=("a", "s", "A", "S"), default="a")
    ball.add_argument("--format", choices=("json", "dot"), default="json")
    ball.set_defaults(func=cmd_farey)

    p = sub.add_parser("reduce", help="contract a slope-model loop")
    p.add_argument("loop")
    p.add_argument("--model", choices=("a", "s", "A", "S"), default="a")
    p.set_defaults(func=cmd_reduce)

    p = surface_cmd("fill", cmd_fill, "fill a type-level loop with relation cells")
    p.add_argument("loop")
    p.add_argument("--budget", type=int, default=200_000)

    p = surface_cmd("report", cmd_report, "fill every cycle-basis loop of the type-level graph")
    p.add_argument("--budget", type=int, default=200_000)

    p = surface_cmd("relations", cmd_relations, "relation cells of the type-level graph")
    p.add_argument("--kind", required=True, choices=("3A", "5A", "3S", "6AS", "C"))

    p = sub.add_parser("verify", help="replay a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="seeded random loops in the slope model")
    p.add_argument("--model", choices=("a", "s", "A", "S"), default="a")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-length", type=int, default=30)
    p.add_argument("--max-den", type=int, default=10**6)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("export", help="re-serialize an object as canonical JSON or DOT")
    p.add_argument("object")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2**64:
        err.write("error: --seed must be in [0, 2**64)\n")
        return 2
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
