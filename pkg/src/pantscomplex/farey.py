"""Slope model of the pants decomposition complex of the (0,4) and (1,1) surfaces.

Vertices are slopes p/q (with 1/0 for infinity), two slopes span an edge when
``|p*s - q*r| == 1``, and every edge lies in exactly two triangles.  The same
cell structure serves both surfaces; only the move and relation labels differ.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import total_ordering
from itertools import combinations
from math import gcd


class SlopeError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Slope:
    """Reduced fraction ``num/den`` with ``den >= 0``; infinity is ``1/0``.

    Use :meth:`of` to build from an arbitrary integer pair.  Ordering is the
    string order of the serialized form, which is what all tie-breaking uses.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.den < 0 or gcd(self.num, self.den) != 1:
            raise SlopeError(f"{self.num}/{self.den} is not a normalized slope")
        if self.den == 0 and self.num != 1:
            raise SlopeError("infinity must be written 1/0")

    @classmethod
    def of(cls, p: int, q: int) -> "Slope":
        if p == 0 and q == 0:
            raise SlopeError("0/0 is not a slope")
        d = gcd(p, q)
        p, q = p // d, q // d
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        try:
            if "/" in text:
                p, q = text.split("/")
                return cls.of(int(p), int(q))
            return cls.of(int(text), 1)
        except ValueError as exc:
            raise SlopeError(f"cannot parse slope {text!r}: {exc}") from None

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def complexity(self) -> int:
        """``|p| + q``; 0/1 and 1/0 are the two minima (value 1)."""
        return abs(self.num) + self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Slope({self.num}/{self.den})"

    def __lt__(self, other: "Slope") -> bool:
        if not isinstance(other, Slope):
            return NotImplemented
        return str(self) < str(other)


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


class SlopeModel(enum.Enum):
    """Which surface the slope complex models: A for (0,4), S for (1,1)."""

    A = "A"
    S = "S"

    @property
    def move(self) -> str:
        return self.value

    @property
    def relation(self) -> str:
        return "3" + self.value

    @classmethod
    def parse(cls, text: str) -> "SlopeModel":
        try:
            return cls(text.upper())
        except ValueError:
            raise SlopeError(f"unknown slope model {text!r}; expected 'a' or 's'") from None


def det(a: Slope, b: Slope) -> int:
    return a.num * b.den - a.den * b.num


def is_adjacent(a: Slope, b: Slope) -> bool:
    return abs(det(a, b)) == 1


def triangle_completions(a: Slope, b: Slope) -> tuple[Slope, Slope]:
    """The two slopes completing the edge {a, b} to a triangle (mediant, anti-mediant)."""
    if not is_adjacent(a, b):
        raise SlopeError(f"{a} and {b} are not adjacent")
    c1 = Slope.of(a.num + b.num, a.den + b.den)
    c2 = Slope.of(a.num - b.num, a.den - b.den)
    return tuple(sorted((c1, c2)))


def fan_path(v: Slope, x: Slope, y: Slope) -> list[Slope]:
    """Walk the neighbors of ``v`` from ``x`` to ``y``.

    The neighbors of v are the slopes of the vectors ``x + k*v``; consecutive
    ones span a triangle with v.  The returned path steps through every
    neighbor between x and y on that line.
    """
    if not (is_adjacent(v, x) and is_adjacent(v, y)):
        raise SlopeError(f"fan endpoints {x}, {y} must both be adjacent to {v}")
    sx = det(v, x)
    yn, yd = (y.num, y.den) if det(v, y) == sx else (-y.num, -y.den)
    dn, dd = yn - x.num, yd - x.den
    # (dn, dd) is an integer multiple of v because det(v, .) vanishes on it.
    k = dn // v.num if v.num else dd // v.den
    assert (dn, dd) == (k * v.num, k * v.den)
    step = 1 if k >= 0 else -1
    return [Slope.of(x.num + i * v.num, x.den + i * v.den) for i in range(0, k + step, step)]


def parents(v: Slope) -> tuple[Slope, Slope] | None:
    """The two neighbors of ``v`` of strictly smaller complexity, or None for 0 and infinity.

    They are consecutive on v's fan line and every other neighbor is larger.
    """
    if v.complexity() == 1:
        return None
    p, q = abs(v.num), v.den
    # left parent r/s solves p*s - q*r = 1 with 0 < s <= q
    s = pow(p, -1, q) if q > 1 else 1
    r = (p * s - 1) // q
    a, b = Slope.of(r, s), Slope.of(p - r, q - s)
    if v.num < 0:
        a, b = Slope.of(-a.num, a.den), Slope.of(-b.num, b.den)
    return tuple(sorted((a, b)))


def neighbor(v: Slope, k: int) -> Slope:
    """The k-th neighbor of ``v`` along its fan line (k = 0 and k = -1 are the parents)."""
    if v.is_infinite:
        return Slope(k, 1)
    if v == ZERO:
        return Slope.of(1, k)
    a, _ = parents(v)
    return Slope.of(a.num + k * v.num, a.den + k * v.den)


class FareyModel:
    """The full (infinite) slope complex, usable as a host for loops and cells."""

    def __init__(self, kind: SlopeModel):
        self.kind = kind

    def has_vertex(self, v) -> bool:
        return isinstance(v, Slope)

    def has_edge(self, a: Slope, b: Slope) -> bool:
        return is_adjacent(a, b)

    def has_triangle(self, a: Slope, b: Slope, c: Slope) -> bool:
        return is_adjacent(a, b) and is_adjacent(b, c) and is_adjacent(a, c)

    def encode_vertex(self, v: Slope) -> str:
        return str(v)

    def decode_vertex(self, data) -> Slope:
        if not isinstance(data, str):
            raise SlopeError(f"slope must be serialized as 'p/q', got {data!r}")
        return Slope.parse(data)

    def descriptor(self) -> dict:
        return {"model": self.kind.value}

    def __eq__(self, other):
        return type(other) is FareyModel and other.kind == self.kind

    def __hash__(self):
        return hash(("farey", self.kind))

    def __repr__(self) -> str:
        return f"FareyModel({self.kind.value})"


@dataclass(frozen=True)
class FareySubcomplex:
    """Finite window of the slope complex, closed under faces."""

    kind: SlopeModel
    limit: int
    vertices: frozenset = field(repr=False)
    edges: frozenset = field(repr=False)
    triangles: frozenset = field(repr=False)

    def has_vertex(self, v) -> bool:
        return v in self.vertices

    def has_edge(self, a, b) -> bool:
        return frozenset((a, b)) in self.edges

    def has_triangle(self, a, b, c) -> bool:
        return frozenset((a, b, c)) in self.triangles

    encode_vertex = FareyModel.encode_vertex
    decode_vertex = FareyModel.decode_vertex

    def descriptor(self) -> dict:
        return {"model": self.kind.value, "limit": self.limit}

    def sorted_edges(self) -> list[tuple[Slope, Slope]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def sorted_triangles(self) -> list[tuple[Slope, Slope, Slope]]:
        return sorted(tuple(sorted(t)) for t in self.triangles)

    def to_json(self) -> dict:
        return {
            "type": "farey-subcomplex",
            "model": self.kind.value,
            "limit": self.limit,
            "vertices": [str(v) for v in sorted(self.vertices)],
            "edges": [[str(a), str(b)] for a, b in self.sorted_edges()],
            "triangles": [[str(v) for v in t] for t in self.sorted_triangles()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FareySubcomplex":
        kind = SlopeModel.parse(data["model"])
        vertices = frozenset(Slope.parse(v) for v in data["vertices"])
        edges = frozenset(frozenset(Slope.parse(v) for v in e) for e in data["edges"])
        triangles = frozenset(frozenset(Slope.parse(v) for v in t) for t in data["triangles"])
        sub = cls(kind, int(data["limit"]), vertices, edges, triangles)
        sub.check()
        return sub

    def check(self) -> None:
        """Raise SlopeError unless every edge is adjacent and the complex is closed under faces."""
        for e in self.edges:
            a, b = tuple(e)
            if not is_adjacent(a, b):
                raise SlopeError(f"edge {a}--{b} is not a Farey edge")
            if not e <= self.vertices:
                raise SlopeError(f"edge {a}--{b} has a vertex outside the window")
        for t in self.triangles:
            for a, b in combinations(t, 2):
                if frozenset((a, b)) not in self.edges:
                    raise SlopeError(f"triangle side {a}--{b} is not an edge")

    def to_dot(self) -> str:
        lines = [f"graph farey_{self.kind.value.lower()}_{self.limit} {{"]
        for v in sorted(self.vertices):
            lines.append(f'  "{v}";')
        for a, b in self.sorted_edges():
            lines.append(f'  "{a}" -- "{b}" [label="{self.kind.move}"];')
        for t in self.sorted_triangles():
            lines.append(f"  // {self.kind.relation} triangle: " + " ".join(str(v) for v in t))
        lines.append("}")
        return "\n".join(lines) + "\n"


def window_slopes(limit: int) -> list[Slope]:
    out = [INFINITY]
    for q in range(1, limit + 1):
        for p in range(-limit, limit + 1):
            if gcd(p, q) == 1:
                out.append(Slope(p, q))
    return sorted(out)


def bounded_subcomplex(kind: SlopeModel, limit: int) -> FareySubcomplex:
    """All slopes with ``max(|p|, q) <= limit`` with every edge and triangle among them."""
    if limit < 1:
        raise SlopeError("limit must be at least 1")
    verts = window_slopes(limit)
    vset = frozenset(verts)
    edges = set()
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if is_adjacent(a, b):
                edges.add(frozenset((a, b)))
    triangles = set()
    for e in edges:
        a, b = tuple(e)
        for c in triangle_completions(a, b):
            if c in vset:
                triangles.add(frozenset((a, b, c)))
    return FareySubcomplex(kind, limit, vset, frozenset(edges), frozenset(triangles))
