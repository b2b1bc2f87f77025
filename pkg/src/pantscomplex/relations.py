"""The five relation-cell families (3A, 5A, 3S, 6AS, C) as cycle templates,
with validators and detectors for the slope and type-level hosts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import NamedTuple

from .farey import FareyModel, FareySubcomplex, Slope, SlopeModel
from .pantsgraph import (
    PantsGraph,
    PantsGraphError,
    TypeMoveGraph,
    a_move,
    canonical_code,
    from_code,
    relabel_legs,
    support,
)
from .surface import curve_count


class RelationKind(enum.Enum):
    R3A = "3A"
    R5A = "5A"
    R3S = "3S"
    R6AS = "6AS"
    RC = "C"

    @property
    def boundary_length(self) -> int:
        return {"3A": 3, "5A": 5, "3S": 3, "6AS": 6, "C": 4}[self.value]

    @property
    def move_multiset(self) -> dict:
        """Moves around the boundary; for C, two moves each traversed twice."""
        return {
            "3A": {"A": 3},
            "5A": {"A": 5},
            "3S": {"S": 3},
            "6AS": {"A": 4, "S": 2},
            "C": {"A": 4},
        }[self.value]

    @classmethod
    def parse(cls, tag: str) -> "RelationKind":
        tag = tag.upper().removeprefix("R")
        for kind in cls:
            if kind.value == tag:
                return kind
        raise ValueError(f"unknown relation kind {tag!r}; expected one of 3A, 5A, 3S, 6AS, C")


# The hexagon of four A-moves and two S-moves in a (1,2) subsurface.  Only the
# vertex sequence and the move multiset are known; which two steps are S-moves
# is left unassigned.
SIX_AS_TEMPLATE = {
    "kind": "6AS",
    "boundary": [
        ["alpha1", "alpha3"],
        ["alpha1", "epsilon3"],
        ["alpha2", "epsilon3"],
        ["alpha2", "epsilon2"],
        ["alpha2", "epsilon1"],
        ["alpha3", "epsilon1"],
    ],
    "move_multiset": {"A": 4, "S": 2},
    "step_kinds": [None] * 6,
}


@dataclass(frozen=True)
class RelationInstance:
    """A relation cell placed in a host: its boundary cycle and per-step sites.

    For C cells all four sites address the base graph ``from_code(boundary[0])``:
    the square is m1, m2, m1 undone, m2 undone, with m1 = sites[0], m2 = sites[1].
    """

    kind: RelationKind
    boundary: tuple
    sites: tuple = field(default=(), compare=False)

    def to_json(self, host) -> dict:
        return {
            "kind": self.kind.value,
            "boundary": [host.encode_vertex(v) for v in self.boundary],
            "sites": [dict(s) for s in self.sites],
        }

    @classmethod
    def from_json(cls, data: dict, host) -> "RelationInstance":
        kind = RelationKind.parse(data["kind"])
        boundary = tuple(host.decode_vertex(v) for v in data["boundary"])
        sites = tuple(dict(s) for s in data.get("sites", []))
        return cls(kind, boundary, sites)

    def cell_key(self) -> tuple:
        """Key identifying the cell up to rotation and reflection of its boundary."""
        return (self.kind.value, canonical_cycle(self.boundary))


class Validation(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def canonical_cycle(cycle) -> tuple:
    cycle = tuple(cycle)
    k = len(cycle)
    candidates = []
    for seq in (cycle, cycle[::-1]):
        for r in range(k):
            candidates.append(seq[r:] + seq[:r])
    return min(candidates)


# -- genus-zero curve systems ------------------------------------------------


@lru_cache(maxsize=None)
def tree_curves(code) -> frozenset:
    """Curves of a genus-0 type as leg splits (the side not containing leg 1)."""
    G = from_code(code)
    if G.genus != 0:
        raise PantsGraphError("curves are determined by the type only in genus 0")
    k = G.num_pants
    nbrs = [[] for _ in range(k)]
    for i, (p, q) in enumerate(G.edges):
        nbrs[p].append((q, i))
        nbrs[q].append((p, i))
    legs_at = [[] for _ in range(k)]
    for label, p in enumerate(G.legs, 1):
        legs_at[p].append(label)
    out = set()
    for i, (p, q) in enumerate(G.edges):
        # legs reachable from q without crossing edge i
        side, stack, seen = set(), [q], {q}
        while stack:
            x = stack.pop()
            side.update(legs_at[x])
            for y, j in nbrs[x]:
                if j != i and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if 1 in side:
            side = set(range(1, G.n + 1)) - side
        out.add(frozenset(side))
    return frozenset(out)


def _pair_graph_0_5(first, second) -> PantsGraph:
    a, b = set(first), set(second)
    if len(a) != 2 or len(b) != 2 or a & b or not (a | b) <= set(range(1, 6)):
        raise PantsGraphError(f"{sorted(a)}, {sorted(b)} are not two disjoint pairs of 1..5: not a vertex")
    (rest,) = set(range(1, 6)) - a - b
    legs = [0] * 5
    for label in a:
        legs[label - 1] = 0
    legs[rest - 1] = 1
    for label in b:
        legs[label - 1] = 2
    return PantsGraph(0, 5, 3, tuple(legs), ((0, 1), (1, 2)))


def pair_vertex(first, second):
    """Type-level vertex of the (0,5) decomposition cutting off two disjoint leg pairs."""
    return canonical_code(_pair_graph_0_5(first, second))


def _step_site(a, b) -> dict | None:
    G = from_code(a)
    for e, (p, q) in enumerate(G.edges):
        if p == q:
            continue
        for br in (0, 1):
            if canonical_code(a_move(G, e, br)) == b:
                return {"move": "A", "edge": e, "branch": br}
    return None


def _type_sites(boundary) -> tuple:
    k = len(boundary)
    return tuple(_step_site(boundary[i], boundary[(i + 1) % k]) for i in range(k))


def pentagon_instance_0_5(start_index: int) -> RelationInstance:
    """The five-A-move cycle with curves beta_i = {i, i+1 mod 5}, rotated by ``start_index``."""
    beta = {i: (i, i % 5 + 1) for i in range(1, 6)}
    pairs = [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]
    cycle = [pair_vertex(beta[i], beta[j]) for i, j in pairs]
    r = start_index % 5
    cycle = tuple(cycle[r:] + cycle[:r])
    return RelationInstance(RelationKind.R5A, cycle, _type_sites(cycle))


# -- validation ----------------------------------------------------------------


def _is_farey(host) -> bool:
    return isinstance(host, (FareyModel, FareySubcomplex))


def validate_instance(inst: RelationInstance, host) -> Validation:
    """Check that ``inst`` is a genuine relation cell of ``host``.

    Returns a falsy :class:`Validation` whose reason names the first failure.
    """
    kind, boundary = inst.kind, tuple(inst.boundary)
    if len(boundary) != kind.boundary_length:
        return Validation(False, f"{kind.value} needs {kind.boundary_length} boundary vertices, got {len(boundary)}")
    for v in boundary:
        try:
            present = host.has_vertex(v)
        except TypeError:
            present = False
        if not present:
            return Validation(False, f"{v!r} is not a vertex of the host")
    if len(set(boundary)) != len(boundary):
        return Validation(False, "boundary repeats a vertex")
    k = len(boundary)
    for i in range(k):
        a, b = boundary[i], boundary[(i + 1) % k]
        if not host.has_edge(a, b):
            return Validation(False, f"step {i}: {a!r} -> {b!r} is not an edge of the host")
    if _is_farey(host):
        return _validate_farey(inst, host)
    if isinstance(host, TypeMoveGraph):
        return _validate_types(inst, host)
    return Validation(False, f"unsupported host {type(host).__name__}")


def _validate_farey(inst, host) -> Validation:
    if inst.kind.value != host.kind.relation:
        return Validation(False, f"{inst.kind.value} cells do not occur in the {host.kind.value}-model (cells are {host.kind.relation})")
    for i, site in enumerate(inst.sites):
        if site.get("move", host.kind.move) != host.kind.move:
            return Validation(False, f"step {i}: move kind {site.get('move')} != {host.kind.move}")
    if isinstance(host, FareySubcomplex) and not host.has_triangle(*inst.boundary):
        return Validation(False, "triangle is not in the window")
    return Validation(True)


def _validate_types(inst, host: TypeMoveGraph) -> Validation:
    kind = inst.kind
    if kind is RelationKind.R3S:
        return Validation(False, "S-moves fix the topological type; no 3S cells at type level")
    if kind is RelationKind.R6AS:
        return Validation(False, "6AS is a structural template only; no type-level realization")
    if kind is RelationKind.RC:
        return _validate_square(inst, host)
    for i, site in enumerate(inst.sites):
        if site is None:
            return Validation(False, f"step {i}: missing site")
        a, b = inst.boundary[i], inst.boundary[(i + 1) % len(inst.boundary)]
        G = from_code(a)
        e, br = site.get("edge"), site.get("branch")
        if not (isinstance(e, int) and 0 <= e < len(G.edges)) or br not in (0, 1) or G.edges[e][0] == G.edges[e][1]:
            return Validation(False, f"step {i}: site {site} is not an A-move site")
        if canonical_code(a_move(G, e, br)) != b:
            return Validation(False, f"step {i}: site {site} does not realize the step")
    if host.surface.genus != 0:
        return Validation(False, "curve context unavailable at type level for genus > 0")
    curves = [tree_curves(v) for v in inst.boundary]
    c = curve_count(host.surface)
    common = frozenset.intersection(*curves)
    varying = [cv - common for cv in curves]
    if kind is RelationKind.R3A:
        if len(common) != c - 1:
            return Validation(False, "the three vertices do not share all but one curve")
        if len(set().union(*varying)) != 3:
            return Validation(False, "the changing curves are not three distinct curves")
        return Validation(True)
    # R5A
    if len(common) != c - 2:
        return Validation(False, "the five vertices do not share all but two curves")
    moving = set().union(*varying)
    if len(moving) != 5:
        return Validation(False, f"expected five distinct changing curves, found {len(moving)}")
    for i in range(5):
        nxt = varying[(i + 1) % 5]
        if len(varying[i] & nxt) != 1:
            return Validation(False, f"step {i} does not keep exactly one curve")
        if varying[i] & varying[(i + 2) % 5]:
            return Validation(False, f"vertices {i} and {(i + 2) % 5} share a curve")
    return Validation(True)


def _square(G: PantsGraph, e1: int, b1: int, e2: int, b2: int):
    g1 = a_move(G, e1, b1)
    g12 = a_move(g1, e2, b2)
    g2 = a_move(G, e2, b2)
    g21 = a_move(g2, e1, b1)
    return canonical_code(g1), canonical_code(g12), canonical_code(g2), canonical_code(g21)


def _disjoint_supports(G: PantsGraph, e1: int, e2: int) -> bool:
    return (
        e1 != e2
        and G.edges[e1][0] != G.edges[e1][1]
        and G.edges[e2][0] != G.edges[e2][1]
        and not (support(G, e1) & support(G, e2))
    )


def _validate_square(inst, host) -> Validation:
    if len(inst.sites) < 2 or any(s is None for s in inst.sites[:2]):
        return Validation(False, "C cell needs its two move sites")
    G = from_code(inst.boundary[0])
    try:
        e1, b1 = inst.sites[0]["edge"], inst.sites[0]["branch"]
        e2, b2 = inst.sites[1]["edge"], inst.sites[1]["branch"]
    except (KeyError, TypeError):
        return Validation(False, "C sites must carry edge and branch")
    if not all(isinstance(e, int) and 0 <= e < len(G.edges) for e in (e1, e2)) or {b1, b2} - {0, 1}:
        return Validation(False, "C sites out of range")
    if not _disjoint_supports(G, e1, e2):
        return Validation(False, "the two move supports are not disjoint")
    c1, c12, c2, c21 = _square(G, e1, b1, e2, b2)
    if c12 != c21:
        return Validation(False, "the two moves do not commute")
    if (c1, c12, c2) != tuple(inst.boundary[1:]) and (c2, c12, c1) != tuple(inst.boundary[1:]):
        return Validation(False, "boundary does not match the commutator square")
    return Validation(True)


# -- commutation -------------------------------------------------------------


def commute_check(host: TypeMoveGraph, v, m1: int, m2: int) -> bool:
    """Whether the A-moves at edges ``m1`` and ``m2`` of ``from_code(v)`` commute.

    Every pair of outcome branches is compared.  Raises ValueError when the two
    supports overlap, which is a precondition failure rather than a verdict.
    """
    if not host.has_vertex(v):
        raise ValueError(f"{v!r} is not a vertex of the host")
    G = from_code(v)
    if not _disjoint_supports(G, m1, m2):
        raise ValueError(f"moves at edges {m1} and {m2} do not have disjoint supports")
    for b1 in (0, 1):
        for b2 in (0, 1):
            _, c12, _, c21 = _square(G, m1, b1, m2, b2)
            if c12 != c21 or not host.has_vertex(c12):
                return False
    return True


def disjoint_move_pairs(v) -> list[tuple[int, int]]:
    G = from_code(v)
    return [(e1, e2) for e1, e2 in combinations(range(len(G.edges)), 2) if _disjoint_supports(G, e1, e2)]


def commutation_square(v, m1: int, b1: int, m2: int, b2: int) -> RelationInstance:
    G = from_code(v)
    c1, c12, c2, _ = _square(G, m1, b1, m2, b2)
    s1 = {"move": "A", "edge": m1, "branch": b1}
    s2 = {"move": "A", "edge": m2, "branch": b2}
    return RelationInstance(RelationKind.RC, (v, c1, c12, c2), (s1, s2, s1, s2))


# -- detection -----------------------------------------------------------------


def _cycles(host: TypeMoveGraph, length: int):
    """Simple cycles of the given length, each once, in canonical form."""
    found = set()
    for s in host.vertices:
        stack = [(s, (s,))]
        while stack:
            x, path = stack.pop()
            if len(path) == length:
                if host.has_edge(x, s):
                    found.add(canonical_cycle(path))
                continue
            for y in host.neighbors(x):
                if y > s and y not in path:
                    stack.append((y, path + (y,)))
    return sorted(found)


def find_instances(host, kind: RelationKind) -> list[RelationInstance]:
    """All cells of ``kind`` in a finite host, up to rotation and reflection."""
    if isinstance(host, FareyModel):
        raise ValueError("the full slope complex is infinite; pass a bounded window")
    if isinstance(host, FareySubcomplex):
        if kind.value != host.kind.relation:
            return []
        sites = ({"move": host.kind.move},) * 3
        return [RelationInstance(kind, t, sites) for t in host.sorted_triangles()]
    if not isinstance(host, TypeMoveGraph):
        raise ValueError(f"unsupported host {type(host).__name__}")
    if kind is RelationKind.RC:
        seen = {}
        for v in host.vertices:
            for e1, e2 in disjoint_move_pairs(v):
                for b1 in (0, 1):
                    for b2 in (0, 1):
                        inst = commutation_square(v, e1, b1, e2, b2)
                        if len(set(inst.boundary)) == 4:
                            seen.setdefault(inst.cell_key(), inst)
        return [seen[key] for key in sorted(seen)]
    if kind not in (RelationKind.R3A, RelationKind.R5A) or host.surface.genus != 0:
        return []
    out = []
    for cyc in _cycles(host, kind.boundary_length):
        inst = RelationInstance(kind, cyc, _type_sites(cyc))
        if validate_instance(inst, host):
            out.append(inst)
    return out


def symmetric_cycles(host: TypeMoveGraph, length: int = 6, order: int = 3) -> list[tuple]:
    """Cycles of ``host`` carried to themselves by a boundary relabeling of the
    given order that acts on the cycle as a rotation by ``length // order`` steps."""
    n = host.surface.boundary_count
    labels = list(range(1, n + 1))
    perms = []
    for image in permutations(labels):
        perm = dict(zip(labels, image))
        x = {i: i for i in labels}
        powers = []
        for _ in range(order):
            x = {i: perm[x[i]] for i in labels}
            powers.append(all(x[i] == i for i in labels))
        if powers[-1] and not any(powers[:-1]):
            perms.append(perm)
    shift = length // order
    out = []
    for cyc in _cycles(host, length):
        rotations = {cyc[shift:] + cyc[:shift], cyc[-shift:] + cyc[:-shift]}
        for perm in perms:
            image = tuple(canonical_code(relabel_legs(from_code(v), perm)) for v in cyc)
            if image in rotations:
                out.append(cyc)
                break
    return out


def instance_from_slopes(kind: RelationKind, slopes, model: SlopeModel) -> RelationInstance:
    boundary = tuple(s if isinstance(s, Slope) else Slope.parse(s) for s in slopes)
    return RelationInstance(kind, boundary, ({"move": model.move},) * len(boundary))


__all__ = [
    "RelationKind",
    "RelationInstance",
    "Validation",
    "SIX_AS_TEMPLATE",
    "validate_instance",
    "pentagon_instance_0_5",
    "pair_vertex",
    "find_instances",
    "symmetric_cycles",
    "commute_check",
    "commutation_square",
    "disjoint_move_pairs",
    "tree_curves",
    "canonical_cycle",
    "instance_from_slopes",
]
