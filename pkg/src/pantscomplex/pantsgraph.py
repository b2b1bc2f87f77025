"""Topological types of pants decompositions as trivalent dual graphs.

A decomposition of a (g, n) surface is recorded up to homeomorphism fixing the
boundary labels by its dual graph: one vertex per pair of pants, one internal
edge per cut circle, one labeled leg per boundary circle.  A-moves act on
these graphs by re-pairing the four half-edges around a non-loop edge; S-moves
act on self-loops and never change the type.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

from .surface import SurfaceType, curve_count, pants_count, validate_surface

SIZE_GUARD = 8

Code = tuple  # canonical code: a tuple of ints


class PantsGraphError(ValueError):
    pass


@dataclass(frozen=True)
class PantsGraph:
    """Dual graph of a pants decomposition.

    ``legs[i]`` is the pant carrying boundary label ``i + 1``; ``edges`` lists
    internal edges as vertex pairs (self-loops as ``(p, p)``).  The order of
    ``edges`` is significant: moves are addressed by edge index.
    """

    genus: int
    n: int
    num_pants: int
    legs: tuple
    edges: tuple

    def __post_init__(self):
        _check(self)

    @classmethod
    def _trusted(cls, genus, n, num_pants, legs, edges) -> "PantsGraph":
        # internal constructor for graphs produced by moves on valid graphs
        G = object.__new__(cls)
        object.__setattr__(G, "genus", genus)
        object.__setattr__(G, "n", n)
        object.__setattr__(G, "num_pants", num_pants)
        object.__setattr__(G, "legs", legs)
        object.__setattr__(G, "edges", edges)
        return G

    @property
    def surface(self) -> SurfaceType:
        return SurfaceType(self.genus, self.n)

    def half_edges_at(self, p: int) -> list:
        out = [("e", i, end) for i, e in enumerate(self.edges) for end in (0, 1) if e[end] == p]
        out += [("l", label) for label, q in enumerate(self.legs, 1) if q == p]
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "g": self.genus,
            "n": self.n,
            "pants": list(range(self.num_pants)),
            "legs": [[label, p] for label, p in enumerate(self.legs, 1)],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PantsGraph":
        try:
            g, n = int(data["g"]), int(data["n"])
            ids = list(data["pants"])
            index = {pid: i for i, pid in enumerate(ids)}
            if len(index) != len(ids):
                raise PantsGraphError("duplicate pant ids")
            legs = sorted((int(label), index[p]) for label, p in data["legs"])
            edges = tuple((index[p], index[q]) for p, q in data["edges"])
        except KeyError as exc:
            raise PantsGraphError(f"unknown or missing key {exc}") from None
        except (TypeError, ValueError) as exc:
            raise PantsGraphError(f"malformed pants graph: {exc}") from None
        if [label for label, _ in legs] != list(range(1, n + 1)):
            raise PantsGraphError(f"legs must be labeled 1..{n} exactly once")
        return cls(g, n, len(ids), tuple(p for _, p in legs), edges)


def _check(G: PantsGraph) -> None:
    try:
        s = validate_surface(G.genus, G.n)
    except ValueError as exc:
        raise PantsGraphError(str(exc)) from None
    k = G.num_pants
    if k != pants_count(s):
        raise PantsGraphError(f"vertex count {k} != 2g-2+n = {pants_count(s)}")
    if len(G.edges) != curve_count(s):
        raise PantsGraphError(f"internal edge count {len(G.edges)} != 3g-3+n = {curve_count(s)}")
    if len(G.legs) != G.n:
        raise PantsGraphError(f"{len(G.legs)} legs for n = {G.n}")
    valence = [0] * k
    for p in G.legs:
        if not 0 <= p < k:
            raise PantsGraphError(f"leg attached to unknown pant {p}")
        valence[p] += 1
    for p, q in G.edges:
        if not (0 <= p < k and 0 <= q < k):
            raise PantsGraphError(f"edge ({p},{q}) has an unknown endpoint")
        valence[p] += 1
        valence[q] += 1
    bad = [p for p in range(k) if valence[p] != 3]
    if bad:
        raise PantsGraphError(f"valence-3 violated at pant {bad[0]} (valence {valence[bad[0]]})")
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in G.edges:
        parent[find(p)] = find(q)
    if len({find(p) for p in range(k)}) != 1:
        raise PantsGraphError("graph is not connected")
    # connected, so first Betti number = E - V + 1; implied by the counts but kept explicit
    if len(G.edges) - k + 1 != G.genus:
        raise PantsGraphError(f"first Betti number {len(G.edges) - k + 1} != genus {G.genus}")


def _adjacency(G: PantsGraph):
    k = G.num_pants
    adj = [[0] * k for _ in range(k)]
    loops = [0] * k
    for p, q in G.edges:
        if p == q:
            loops[p] += 1
        else:
            adj[p][q] += 1
            adj[q][p] += 1
    return adj, loops


def _refined_colors(G: PantsGraph, adj, loops) -> list[int]:
    k = G.num_pants
    legs_at = [[] for _ in range(k)]
    for label, p in enumerate(G.legs, 1):
        legs_at[p].append(label)
    nbrs = [[(w, m) for w, m in enumerate(row) if m] for row in adj]
    sig = [(tuple(legs_at[v]), loops[v]) for v in range(k)]
    ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
    colors = [ranks[s] for s in sig]
    num = len(ranks)
    while num < k:
        sig = [(colors[v], tuple(sorted((colors[w], m) for w, m in nbrs[v]))) for v in range(k)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        colors = [ranks[s] for s in sig]
        if len(ranks) == num:
            break
        num = len(ranks)
    return colors


def _code_for_order(G: PantsGraph, order, adj, loops) -> Code:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    code = [G.genus, G.n]
    code += [pos[p] for p in G.legs]
    code += [loops[v] for v in order]
    for i, v in enumerate(order):
        row = adj[v]
        code += [row[w] for w in order[i + 1:]]
    return tuple(code)


def canonical_code(G: PantsGraph) -> Code:
    """Code identifying ``G`` up to isomorphism fixing leg labels.

    Vertices are split into classes by color refinement, then every ordering
    within classes is tried and the lexicographically least code kept.
    """
    adj, loops = _adjacency(G)
    colors = _refined_colors(G, adj, loops)
    if len(set(colors)) == len(colors):
        return _code_for_order(G, sorted(range(len(colors)), key=colors.__getitem__), adj, loops)
    classes = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    for parts in product(*(permutations(grp) for grp in groups)):
        order = [v for part in parts for v in part]
        code = _code_for_order(G, order, adj, loops)
        if best is None or code < best:
            best = code
    return best


def from_code(code: Code) -> PantsGraph:
    """Rebuild the canonical representative whose vertex order realizes ``code``."""
    g, n = code[0], code[1]
    k = 2 * g - 2 + n
    legs = tuple(code[2:2 + n])
    loops = code[2 + n:2 + n + k]
    upper = iter(code[2 + n + k:])
    edges = []
    for i in range(k):
        edges += [(i, i)] * loops[i]
        for j in range(i + 1, k):
            edges += [(i, j)] * next(upper)
    return PantsGraph._trusted(g, n, k, legs, tuple(edges))


def permute_pants(G: PantsGraph, perm) -> PantsGraph:
    """Rename pant ``p`` to ``perm[p]``; the result is isomorphic to ``G``."""
    legs = tuple(perm[p] for p in G.legs)
    edges = tuple((perm[p], perm[q]) for p, q in G.edges)
    return PantsGraph._trusted(G.genus, G.n, G.num_pants, legs, edges)


def relabel_legs(G: PantsGraph, perm: dict) -> PantsGraph:
    """Give leg ``label`` the new label ``perm[label]``."""
    legs = [0] * G.n
    for label, p in enumerate(G.legs, 1):
        legs[perm[label] - 1] = p
    return PantsGraph._trusted(G.genus, G.n, G.num_pants, tuple(legs), G.edges)


def complement_type(G: PantsGraph, e: int) -> SurfaceType:
    """Type of the complementary piece created by deleting circle ``e``."""
    if not isinstance(e, int) or not 0 <= e < len(G.edges):
        raise PantsGraphError(f"{e!r} is not an internal edge index")
    p, q = G.edges[e]
    return SurfaceType(1, 1) if p == q else SurfaceType(0, 4)


def a_move(G: PantsGraph, e: int, branch: int) -> PantsGraph:
    """Re-pair the four half-edges around the non-loop edge ``e``.

    With ``a, b`` the other half-edges at one end and ``c, d`` at the other,
    branch 0 gives ``{a, c} | {b, d}`` and branch 1 gives ``{a, d} | {b, c}``.
    Edge indices are preserved, so moves with disjoint supports stay addressable.
    """
    u, v = G.edges[e]
    if u == v:
        raise PantsGraphError(f"edge {e} is a self-loop; only S-moves apply there")
    return _a_move(G, _half_edge_table(G), e, branch)


def _half_edge_table(G: PantsGraph) -> list:
    """Sorted half-edges at each pant, as in :meth:`PantsGraph.half_edges_at`."""
    table = [[] for _ in range(G.num_pants)]
    for i, (p, q) in enumerate(G.edges):
        table[p].append(("e", i, 0))
        table[q].append(("e", i, 1))
    for label, p in enumerate(G.legs, 1):
        table[p].append(("l", label))
    for hs in table:
        hs.sort()
    return table


def _a_move(G: PantsGraph, table, e: int, branch: int) -> PantsGraph:
    u, v = G.edges[e]
    hu = [h for h in table[u] if h != ("e", e, 0)]
    hv = [h for h in table[v] if h != ("e", e, 1)]
    edges = [list(x) for x in G.edges]
    legs = list(G.legs)
    for h, target in ((hu[1], v), (hv[branch], u)):
        if h[0] == "e":
            edges[h[1]][h[2]] = target
        else:
            legs[h[1] - 1] = target
    return PantsGraph._trusted(G.genus, G.n, G.num_pants, tuple(legs), tuple(tuple(x) for x in edges))


def support(G: PantsGraph, e: int) -> frozenset:
    """Pants touched by a move at edge ``e``."""
    return frozenset(G.edges[e])


@dataclass(frozen=True)
class Move:
    kind: str  # "A" or "S"
    site: int  # internal edge index
    outcomes: tuple  # sorted canonical codes

    def to_json(self) -> dict:
        return {"kind": self.kind, "site": self.site, "outcomes": [list(c) for c in self.outcomes]}


def legal_moves(G: PantsGraph) -> list[Move]:
    own = None
    out = []
    for e, (p, q) in enumerate(G.edges):
        if p == q:
            own = own or canonical_code(G)
            out.append(Move("S", e, (own,)))
        else:
            codes = {canonical_code(a_move(G, e, b)) for b in (0, 1)}
            out.append(Move("A", e, tuple(sorted(codes))))
    return out


# -- enumeration -----------------------------------------------------------


def _base_graph(g: int, n: int) -> PantsGraph | None:
    if (g, n) == (0, 3):
        return PantsGraph(0, 3, 1, (0, 0, 0), ())
    if (g, n) == (1, 1):
        return PantsGraph(1, 1, 1, (0,), ((0, 0),))
    return None


def _insert_leg(G: PantsGraph, site) -> PantsGraph:
    """Add leg n+1 on a new pant subdividing an internal edge (int) or leg (("l", label))."""
    w = G.num_pants
    edges = list(G.edges)
    legs = list(G.legs)
    if isinstance(site, int):
        p, q = edges[site]
        edges[site] = (p, w)
        edges.append((w, q))
    else:
        label = site[1]
        edges.append((legs[label - 1], w))
        legs[label - 1] = w
    legs.append(w)
    return PantsGraph._trusted(G.genus, G.n + 1, w + 1, tuple(legs), tuple(edges))


def _glue_first_legs(G: PantsGraph) -> PantsGraph:
    """Join legs 1 and 2 into an internal edge and shift the remaining labels down."""
    edges = G.edges + ((G.legs[0], G.legs[1]),)
    return PantsGraph._trusted(G.genus + 1, G.n - 2, G.num_pants, G.legs[2:], edges)


def _guard(s: SurfaceType) -> None:
    if pants_count(s) > SIZE_GUARD:
        raise PantsGraphError(f"size guard exceeded: 2g-2+n = {pants_count(s)} > {SIZE_GUARD}")


@lru_cache(maxsize=None)
def _enumerate(g: int, n: int) -> tuple:
    base = _base_graph(g, n)
    if base is not None:
        return (canonical_code(base),)
    codes = set()
    if n >= 1:
        for code in _enumerate(g, n - 1):
            G = from_code(code)
            sites = list(range(len(G.edges))) + [("l", label) for label in range(1, G.n + 1)]
            for site in sites:
                codes.add(canonical_code(_insert_leg(G, site)))
    else:
        # every closed trivalent graph has a non-bridge edge; cutting it gives a (g-1, 2) graph
        for code in _enumerate(g - 1, 2):
            codes.add(canonical_code(_glue_first_legs(from_code(code))))
    return tuple(sorted(codes))


def enumerate_types(s: SurfaceType) -> tuple:
    """All isomorphism types of dual graphs for ``s``, as sorted canonical codes."""
    _guard(s)
    return _enumerate(s.genus, s.boundary_count)


# -- type-level move graph -------------------------------------------------


@dataclass(frozen=True)
class TypeMoveGraph:
    """A-move graph on topological types of decompositions of one surface.

    ``edges`` holds one ``(a, b, (site, branch))`` triple per adjacent pair,
    ``a < b``, with the least site realizing it from ``a``.  Moves that keep the
    type (every S-move, some A-moves) are counted in ``self_moves``.
    """

    surface: SurfaceType
    vertices: tuple
    edges: tuple
    self_moves: tuple

    def __post_init__(self):
        adj = {v: set() for v in self.vertices}
        for a, b, _ in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "_adj", {v: tuple(sorted(ns)) for v, ns in adj.items()})
        object.__setattr__(self, "_vset", frozenset(self.vertices))

    def neighbors(self, v) -> tuple:
        return self._adj[v]

    def has_vertex(self, v) -> bool:
        return v in self._vset

    def has_edge(self, a, b) -> bool:
        return a in self._vset and b in self._adj[a]

    def encode_vertex(self, v) -> list:
        return list(v)

    def decode_vertex(self, data) -> Code:
        if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
            raise PantsGraphError(f"type vertex must be a list of integers, got {data!r}")
        return tuple(data)

    def descriptor(self) -> dict:
        return self.surface.to_json()

    def components(self) -> int:
        seen = set()
        count = 0
        for v in self.vertices:
            if v in seen:
                continue
            count += 1
            stack = [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return count

    def is_connected(self) -> bool:
        return self.components() == 1

    def to_json(self) -> dict:
        return {
            "type": "type-move-graph",
            "g": self.surface.genus,
            "n": self.surface.boundary_count,
            "vertices": [list(v) for v in self.vertices],
            "edges": [[list(a), list(b), list(site)] for a, b, site in self.edges],
            "self_moves": [[list(v), kind, e] for v, kind, e in self.self_moves],
            "components": self.components(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TypeMoveGraph":
        s = validate_surface(int(data["g"]), int(data["n"]))
        vertices = tuple(tuple(v) for v in data["vertices"])
        edges = tuple((tuple(a), tuple(b), tuple(site)) for a, b, site in data["edges"])
        self_moves = tuple((tuple(v), kind, int(e)) for v, kind, e in data["self_moves"])
        vset = set(vertices)
        for a, b, _ in edges:
            if a not in vset or b not in vset:
                raise PantsGraphError("move graph edge has an endpoint outside the vertex set")
        return cls(s, vertices, edges, self_moves)

    def to_dot(self) -> str:
        name = {v: f"t{i}" for i, v in enumerate(self.vertices)}
        lines = [f"graph types_{self.surface.genus}_{self.surface.boundary_count} {{"]
        for v in self.vertices:
            label = ",".join(map(str, v))
            lines.append(f'  {name[v]} [label="{label}"];')
        for a, b, (e, br) in self.edges:
            lines.append(f'  {name[a]} -- {name[b]} [label="A@{e}/{br}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def _move_graph(g: int, n: int) -> TypeMoveGraph:
    s = SurfaceType(g, n)
    vertices = enumerate_types(s)
    best = {}
    self_moves = []
    for a in vertices:
        G = from_code(a)
        table = _half_edge_table(G)
        for e, (p, q) in enumerate(G.edges):
            if p == q:
                self_moves.append((a, "S", e))
                continue
            fixed = False
            for br in (0, 1):
                b = canonical_code(_a_move(G, table, e, br))
                if b == a:
                    fixed = True
                    continue
                key = (a, b) if a < b else (b, a)
                if key not in best and a < b:
                    best[key] = (e, br)
                elif key not in best:
                    best.setdefault(key, None)
            if fixed:
                self_moves.append((a, "A", e))
    # pairs first discovered from the larger endpoint get their site from the smaller one
    for key, site in list(best.items()):
        if site is None:
            a, b = key
            G = from_code(a)
            best[key] = next(
                (e, br)
                for e, (p, q) in enumerate(G.edges)
                if p != q
                for br in (0, 1)
                if canonical_code(a_move(G, e, br)) == b
            )
    edges = tuple(sorted((a, b, site) for (a, b), site in best.items()))
    return TypeMoveGraph(s, vertices, edges, tuple(self_moves))


def build_move_graph(s: SurfaceType) -> TypeMoveGraph:
    _guard(s)
    return _move_graph(s.genus, s.boundary_count)
