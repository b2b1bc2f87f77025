"""Edgepaths, contraction certificates, and the procedures that produce them.

A loop is a closed edgepath ``[v0, ..., vL]`` with ``v0 == vL``.  A certificate
is a list of elementary homotopies; replaying them from the initial loop must
end at a constant loop.  :func:`verify_certificate` does that replay with its
own step semantics, independent of the reducers that emit certificates.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Union

from .farey import (
    FareyModel,
    Slope,
    SlopeModel,
    bounded_subcomplex,
    fan_path,
    is_adjacent,
)
from .pantsgraph import TypeMoveGraph, build_move_graph
from .relations import RelationInstance, RelationKind, validate_instance
from .surface import validate_surface

log = logging.getLogger(__name__)


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Cancel:
    """Delete the backtrack ``P[pos-1] -> P[pos] -> P[pos+1] == P[pos-1]``."""

    pos: int


@dataclass(frozen=True)
class Insert:
    """Insert the backtrack ``P[pos] -> vertex -> P[pos]``."""

    pos: int
    vertex: Any


@dataclass(frozen=True)
class Swap:
    """Replace ``P[pos : pos+length+1]``, an arc of the cell boundary, by the complementary arc."""

    pos: int
    length: int
    cell: RelationInstance


@dataclass(frozen=True)
class Rotate:
    """Move the basepoint forward by ``shift`` positions (free homotopy)."""

    shift: int


Step = Union[Cancel, Insert, Swap, Rotate]


@dataclass(frozen=True)
class Certificate:
    host: dict
    initial: tuple
    steps: tuple
    final: tuple

    def cells(self) -> list[RelationInstance]:
        return [s.cell for s in self.steps if isinstance(s, Swap)]

    def to_json(self, host) -> dict:
        enc = host.encode_vertex
        return {
            "type": "certificate",
            "host": dict(self.host),
            "initial": [enc(v) for v in self.initial],
            "steps": [_step_to_json(s, host) for s in self.steps],
            "final": [enc(v) for v in self.final],
        }

    @classmethod
    def from_json(cls, data: dict, host=None) -> "Certificate":
        try:
            desc = dict(data["host"])
            host = host or host_from_descriptor(desc)
            dec = host.decode_vertex
            return cls(
                desc,
                tuple(dec(v) for v in data["initial"]),
                tuple(_step_from_json(s, host) for s in data["steps"]),
                tuple(dec(v) for v in data["final"]),
            )
        except KeyError as exc:
            raise CertificateError(f"certificate is missing key {exc}") from None


def _step_to_json(step: Step, host) -> dict:
    if isinstance(step, Cancel):
        return {"op": "cancel", "pos": step.pos}
    if isinstance(step, Insert):
        return {"op": "insert", "pos": step.pos, "vertex": host.encode_vertex(step.vertex)}
    if isinstance(step, Swap):
        return {"op": "swap", "pos": step.pos, "length": step.length, "cell": step.cell.to_json(host)}
    return {"op": "rotate", "shift": step.shift}


def _step_from_json(data: dict, host) -> Step:
    op = data.get("op")
    if op == "cancel":
        return Cancel(int(data["pos"]))
    if op == "insert":
        return Insert(int(data["pos"]), host.decode_vertex(data["vertex"]))
    if op == "swap":
        return Swap(int(data["pos"]), int(data["length"]), RelationInstance.from_json(data["cell"], host))
    if op == "rotate":
        return Rotate(int(data["shift"]))
    raise CertificateError(f"unknown step op {op!r}")


def host_from_descriptor(desc: dict):
    """Rebuild the host complex named by a certificate's ``host`` field."""
    if "model" in desc:
        kind = SlopeModel.parse(desc["model"])
        if "limit" in desc:
            return bounded_subcomplex(kind, int(desc["limit"]))
        return FareyModel(kind)
    if "g" in desc and "n" in desc:
        return build_move_graph(validate_surface(int(desc["g"]), int(desc["n"])))
    raise CertificateError(f"unrecognized host descriptor {desc!r}")


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def loop_problem(host, loop) -> str | None:
    """Why ``loop`` is not a closed edgepath of ``host``, or None if it is."""
    if len(loop) == 0:
        return "loop is empty"
    if loop[0] != loop[-1]:
        return "loop is not closed"
    for v in loop:
        if not host.has_vertex(v):
            return f"{v!r} is not a vertex"
    for i in range(len(loop) - 1):
        if not host.has_edge(loop[i], loop[i + 1]):
            return f"{loop[i]!r} -> {loop[i + 1]!r} is not an edge"
    return None


def apply_step(host, loop: list, step: Step, check_cell=None) -> list:
    """Apply one elementary homotopy; raise CertificateError when it does not apply."""
    L = len(loop) - 1
    if isinstance(step, Cancel):
        i = step.pos
        if not 1 <= i <= L - 1:
            raise CertificateError(f"cancel position {i} out of range for a loop of length {L}")
        if loop[i - 1] != loop[i + 1]:
            raise CertificateError(f"no backtrack at position {i}")
        return loop[:i] + loop[i + 2:]
    if isinstance(step, Insert):
        i = step.pos
        if not 0 <= i <= L:
            raise CertificateError(f"insert position {i} out of range")
        if not host.has_edge(loop[i], step.vertex):
            raise CertificateError(f"{loop[i]!r} -> {step.vertex!r} is not an edge")
        return loop[:i + 1] + [step.vertex, loop[i]] + loop[i + 1:]
    if isinstance(step, Rotate):
        s = step.shift
        if not 0 <= s < max(L, 1):
            raise CertificateError(f"rotation {s} out of range")
        return loop[s:L] + loop[:s] + [loop[s]]
    if isinstance(step, Swap):
        verdict = (check_cell or validate_instance)(step.cell, host)
        if not verdict:
            raise CertificateError(f"cited cell is not a relation cell: {verdict.reason}")
        i, m = step.pos, step.length
        boundary = list(step.cell.boundary)
        k = len(boundary)
        if not (1 <= m <= k and 0 <= i and i + m <= L):
            raise CertificateError(f"segment [{i}, {i + m}] out of range")
        seg = loop[i:i + m + 1]
        if seg[0] not in boundary:
            raise CertificateError("segment does not start on the cell boundary")
        j = boundary.index(seg[0])
        if seg[1] == boundary[(j + 1) % k]:
            d = 1
        elif seg[1] == boundary[(j - 1) % k]:
            d = -1
        else:
            raise CertificateError("segment does not follow the cell boundary")
        if any(seg[t] != boundary[(j + d * t) % k] for t in range(m + 1)):
            raise CertificateError("segment does not follow the cell boundary")
        repl = [boundary[(j - d * t) % k] for t in range(k - m + 1)]
        return loop[:i] + repl + loop[i + m + 1:]
    raise CertificateError(f"unknown step {step!r}")


def verify_certificate(host, cert: Certificate) -> Verdict:
    """Replay ``cert`` on ``host``; the verdict names the first failing step."""
    problem = loop_problem(host, cert.initial)
    if problem:
        return Verdict(False, None, f"initial loop invalid: {problem}")
    cache = {}

    def check_cell(cell, host):
        key = (cell.kind, cell.boundary, tuple(tuple(sorted(s.items())) if s else () for s in cell.sites))
        if key not in cache:
            cache[key] = validate_instance(cell, host)
        return cache[key]

    loop = list(cert.initial)
    for idx, step in enumerate(cert.steps):
        try:
            loop = apply_step(host, loop, step, check_cell)
        except CertificateError as exc:
            return Verdict(False, idx, str(exc))
        problem = loop_problem(host, loop)
        if problem:
            return Verdict(False, idx, f"step produced an invalid loop: {problem}")
    if tuple(loop) != tuple(cert.final):
        return Verdict(False, None, "replayed loop differs from the stated final loop")
    if len(loop) != 1:
        return Verdict(False, None, f"final loop has length {len(loop) - 1}, not constant")
    return Verdict(True)


def normalize_steps(steps) -> list:
    """Drop insert-backtrack steps that are immediately cancelled, and no-op rotations."""
    out = []
    for step in steps:
        if isinstance(step, Rotate) and step.shift == 0:
            continue
        if isinstance(step, Cancel) and out and isinstance(out[-1], Insert) and out[-1].pos + 1 == step.pos:
            out.pop()
            continue
        out.append(step)
    return out


# -- slope-model reduction ---------------------------------------------------


def _stem(loop: list) -> int:
    """Length of the palindromic stem ``v0 v1 .. vk .. vk .. v1 v0`` around the core loop."""
    k, L = 0, len(loop) - 1
    while k + 1 < L - k - 1 and loop[k + 1] == loop[L - k - 1]:
        k += 1
    return k


def _cancel_all(loop: list, steps: list) -> None:
    i = 1
    while i < len(loop) - 1:
        if loop[i - 1] == loop[i + 1]:
            del loop[i:i + 2]
            steps.append(Cancel(i))
            i = max(i - 1, 1)
        else:
            i += 1


def reduce_farey_loop(kind: SlopeModel, loop) -> Certificate:
    """Contract a closed edgepath of the slope complex to its basepoint.

    Each round first cancels backtracks, then strips the palindromic stem to
    get the core loop ``c0 .. c0``.  If an interior core vertex has maximal
    complexity, each of its passages ``x -> v -> y`` is pushed across the fan of
    triangles around v; otherwise c0 is the strict maximum and the first core
    edge is swapped across the triangle spanned by c0 and its two core
    neighbors, which lengthens the stem.  The measure (core maximum, its
    multiplicity in the core, loop length) strictly decreases every round.
    """
    host = FareyModel(kind)
    loop = [v if isinstance(v, Slope) else Slope.parse(v) for v in loop]
    problem = loop_problem(host, loop)
    if problem:
        raise CertificateError(f"cannot reduce: {problem}")
    initial = tuple(loop)
    steps: list = []
    cell_sites = ({"move": kind.move},) * 3
    rel = RelationKind.R3A if kind is SlopeModel.A else RelationKind.R3S

    def triangle(a, b, c):
        return RelationInstance(rel, tuple(sorted((a, b, c))), cell_sites)

    previous = None
    while True:
        _cancel_all(loop, steps)
        L = len(loop) - 1
        if L == 0:
            break
        k = _stem(loop)
        core = loop[k:L - k + 1]
        top = max(v.complexity() for v in core)
        interior = [v for v in core[1:-1] if v.complexity() == top]
        measure = (top, sum(1 for v in core if v.complexity() == top), L)
        if previous is not None and not measure < previous:
            raise AssertionError(f"reduction measure did not decrease: {previous} -> {measure}")
        previous = measure
        if interior:
            v = min(interior)
            # process passages right to left so earlier positions stay valid
            positions = [i for i in range(k + 1, L - k) if loop[i] == v]
            for i in reversed(positions):
                x, y = loop[i - 1], loop[i + 1]
                if x == y:
                    continue
                fan = fan_path(v, x, y)
                # walk x -> v -> y over to x -> z1 -> ... -> y one triangle at a time
                for t in range(len(fan) - 2):
                    z0, z1 = fan[t], fan[t + 1]
                    p = i - 1 + t
                    steps.append(Swap(p, 1, triangle(z0, z1, v)))
                    loop[p:p + 2] = [z0, z1, v]
                p = i - 1 + len(fan) - 2
                steps.append(Swap(p, 2, triangle(fan[-2], v, fan[-1])))
                loop[p:p + 3] = [fan[-2], fan[-1]]
        else:
            c0, y, x = loop[k], loop[k + 1], loop[L - k - 1]
            assert x != y and is_adjacent(x, y), "core base must have two distinct smaller neighbors"
            steps.append(Swap(k, 1, triangle(c0, x, y)))
            loop[k:k + 2] = [c0, x, y]
    return Certificate(host.descriptor(), initial, tuple(steps), tuple(loop))


# -- filling in finite hosts -------------------------------------------------


@dataclass
class FillResult:
    """Outcome of :func:`fill_finite_loop`.

    ``status`` is ``"filled"``, ``"budget-exhausted"`` (the state budget ran out)
    or ``"no-certificate"`` (every loop reachable within the length bound was
    explored without reaching a constant loop).
    """

    status: str
    certificate: Certificate | None
    explored: int
    frontier: int = 0

    @property
    def filled(self) -> bool:
        return self.status == "filled"


def _reduce_closed(loop: list, steps: list) -> None:
    """Cancel backtracks, rotating past the basepoint when needed, then rotate to the least word."""
    while True:
        _cancel_all(loop, steps)
        L = len(loop) - 1
        if L >= 2 and loop[L - 1] == loop[1]:
            loop[:] = loop[1:L] + loop[:1] + [loop[1]]
            steps.append(Rotate(1))
            continue
        break
    L = len(loop) - 1
    if L > 1:
        word = loop[:L]
        s = min(range(L), key=lambda r: word[r:] + word[:r])
        if s:
            loop[:] = word[s:] + word[:s] + [word[s]]
            steps.append(Rotate(s))


def fill_finite_loop(host, loop, cells, budget: int = 200_000, max_length: int | None = None) -> FillResult:
    """Breadth-first search for a contraction of ``loop`` using the given cells.

    States are cyclically reduced loops up to rotation.  Each transition swaps
    one arc of one cell, so the first certificate found uses as few cells as
    possible among loops no longer than ``max_length``.
    """
    cells = list(cells)
    for cell in cells:
        verdict = validate_instance(cell, host)
        if not verdict:
            raise CertificateError(f"cell {cell.boundary} is not valid: {verdict.reason}")
    loop = list(loop)
    problem = loop_problem(host, loop)
    if problem:
        raise CertificateError(f"cannot fill: {problem}")
    if max_length is None:
        max_length = len(loop) - 1 + max((len(c.boundary) for c in cells), default=0)
    # directed boundary edges -> (cell, start index, direction)
    arcs: dict = {}
    for cell in cells:
        b = cell.boundary
        k = len(b)
        for j in range(k):
            arcs.setdefault((b[j], b[(j + 1) % k]), []).append((cell, j, 1))
            arcs.setdefault((b[j], b[(j - 1) % k]), []).append((cell, j, -1))

    prefix: list = []
    start = list(loop)
    _reduce_closed(start, prefix)
    start_key = tuple(start)
    parent = {start_key: None}
    queue = deque([start_key])
    explored = 0
    goal = start_key if len(start) == 1 else None
    while queue and goal is None:
        if explored >= budget:
            return FillResult("budget-exhausted", None, explored, len(queue))
        state = queue.popleft()
        explored += 1
        L = len(state) - 1
        word = list(state[:L])
        for i in range(L):
            for cell, j, d in arcs.get((word[i], word[(i + 1) % L]), ()):
                b = cell.boundary
                k = len(b)
                m = 1
                while m <= min(k, L):
                    if m > 1 and word[(i + m) % L] != b[(j + d * m) % k]:
                        break
                    child_steps: list = []
                    cur = list(state)
                    if i:
                        cur = word[i:] + word[:i] + [word[i]]
                        child_steps.append(Rotate(i))
                    repl = [b[(j - d * t) % k] for t in range(k - m + 1)]
                    cur = repl + cur[m + 1:]
                    child_steps.append(Swap(0, m, cell))
                    _reduce_closed(cur, child_steps)
                    key = tuple(cur)
                    m += 1
                    if len(key) - 1 > max_length or key in parent:
                        continue
                    parent[key] = (state, child_steps)
                    if len(key) == 1:
                        goal = key
                        break
                    queue.append(key)
                if goal:
                    break
            if goal:
                break
    if goal is None:
        return FillResult("no-certificate", None, explored, 0)
    chain = []
    node = goal
    while parent[node] is not None:
        prev, st = parent[node]
        chain.append(st)
        node = prev
    steps = list(prefix)
    for st in reversed(chain):
        steps.extend(st)
    cert = Certificate(host.descriptor(), tuple(loop), tuple(normalize_steps(steps)), goal)
    verdict = verify_certificate(host, cert)
    if not verdict:
        raise AssertionError(f"fill produced an invalid certificate: {verdict}")
    return FillResult("filled", cert, explored, len(queue))


# -- simple connectivity report -------------------------------------------------


def cycle_basis_loops(host: TypeMoveGraph) -> list[list]:
    """One closed loop per chord of a breadth-first spanning tree, based at the least vertex."""
    if not host.vertices:
        return []
    root = min(host.vertices)
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in host.neighbors(x):
            if y not in parent:
                parent[y] = x
                order.append(y)
                queue.append(y)

    def to_root(v):
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    loops = []
    for a, b, _ in host.edges:
        if parent.get(b) == a or parent.get(a) == b:
            continue
        loops.append(to_root(a)[::-1] + to_root(b))
    return loops


@dataclass
class ConnectivityReport:
    basis_size: int
    filled: int
    failed: int
    certificates: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def to_json(self, host) -> dict:
        return {
            "type": "connectivity-report",
            "host": host.descriptor(),
            "basis_size": self.basis_size,
            "filled": self.filled,
            "failed": self.failed,
            "failures": [{"loop": [host.encode_vertex(v) for v in lp], "status": st} for lp, st in self.failures],
        }


def simply_connected_report(host: TypeMoveGraph, cells, budget: int = 200_000) -> ConnectivityReport:
    """Try to fill every loop of a cycle basis of ``host`` with ``cells``.

    A finite quotient of the pants complex need not be simply connected, so
    failures are reported, not raised.
    """
    loops = cycle_basis_loops(host)
    report = ConnectivityReport(len(loops), 0, 0)
    for lp in loops:
        result = fill_finite_loop(host, lp, cells, budget=budget)
        if result.filled:
            report.filled += 1
            report.certificates.append(result.certificate)
        else:
            report.failed += 1
            report.failures.append((lp, result.status))
    log.info("cycle basis of %s: %d loops, %d filled", host.descriptor(), len(loops), report.filled)
    return report


# -- random loop corpus ----------------------------------------------------------


def _random_slope(rng, max_den: int) -> Slope:
    if rng.random() < 0.05:
        return Slope(1, 0)
    q = max(1, int(max_den ** rng.random()))
    while True:
        p = rng.randint(-3 * q, 3 * q)
        try:
            s = Slope.of(p, q)
        except ValueError:
            continue
        if s.den == q:
            return s


def _random_neighbor(rng, v: Slope, max_den: int) -> Slope:
    from .farey import neighbor

    while True:
        k = rng.choice([-1, 0, 1, 2, -2]) if rng.random() < 0.5 else rng.randint(-50, 50)
        w = neighbor(v, k)
        if w.den <= max_den:
            return w


def _descent(v: Slope) -> list[Slope]:
    """Path from v to infinity, always stepping to the parent of smaller denominator."""
    from .farey import parents

    path = [v]
    while not path[-1].is_infinite:
        ps = parents(path[-1])
        path.append(Slope(1, 0) if ps is None else min(ps, key=lambda s: (s.den, s)))
    return path


def random_farey_loop(rng, max_length: int = 30, max_den: int = 10**6) -> list[Slope]:
    """A closed edgepath with ``1 <= length <= max_length`` and denominators bounded by ``max_den``.

    A random walk leaves a random basepoint, returns through infinity along
    denominator-halving descents, and then some edges are replaced by detours
    through the third vertex of a triangle.
    """
    from .farey import triangle_completions

    while True:
        base = _random_slope(rng, max_den)
        walk = [base]
        for _ in range(rng.randint(0, 6)):
            walk.append(_random_neighbor(rng, walk[-1], max_den))
        back = _descent(walk[-1]) + _descent(base)[::-1][1:]
        loop = walk + back[1:]
        # drop immediate repeats created where the walk meets the descent
        loop = [v for i, v in enumerate(loop) if i == 0 or v != loop[i - 1]]
        for _ in range(rng.randint(0, 6)):
            if not 1 <= len(loop) - 1 < max_length:
                break
            i = rng.randrange(len(loop) - 1)
            c = rng.choice(triangle_completions(loop[i], loop[i + 1]))
            if c.den <= max_den:
                loop.insert(i + 1, c)
        if 1 <= len(loop) - 1 <= max_length:
            return loop
