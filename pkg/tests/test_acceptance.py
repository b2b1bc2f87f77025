"""Acceptance criteria, each timed against its budget.

Every test prints one ``PASS``/``FAIL`` line.  Shared caches are cleared first
so each budget covers the full computation.
"""

import io
import json
import random
import time
from collections import Counter
from contextlib import contextmanager

import pytest

from pantscomplex import pantsgraph, relations
from pantscomplex.cli import run
from pantscomplex.farey import (
    FareyModel,
    Slope,
    SlopeModel,
    bounded_subcomplex,
    det,
    is_adjacent,
    triangle_completions,
)
from pantscomplex.homotopy import (
    fill_finite_loop,
    random_farey_loop,
    reduce_farey_loop,
    simply_connected_report,
    verify_certificate,
)
from pantscomplex.pantsgraph import build_move_graph, enumerate_types, from_code
from pantscomplex.relations import RelationKind, commute_check, disjoint_move_pairs, find_instances, symmetric_cycles
from pantscomplex.surface import SurfaceType, curve_count, pants_count


def surfaces_in_range(lo=1, hi=6):
    return [(g, n) for g in range(hi // 2 + 2) for n in range(hi + 3) if lo <= 2 * g - 2 + n <= hi]


def cold():
    pantsgraph._enumerate.cache_clear()
    pantsgraph._move_graph.cache_clear()
    relations.tree_curves.cache_clear()


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def _run(number, title, budget):
        cold()
        start = time.perf_counter()
        detail = {}
        ok = False
        try:
            yield detail
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < budget
            status = "PASS" if ok and within else "FAIL"
            extra = ", ".join(f"{k}={v}" for k, v in detail.items())
            with capsys.disabled():
                print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f}s / {budget}s){' ' + extra if extra else ''}")
        assert within, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"

    return _run


def test_criterion_1_counting(criterion):
    with criterion(1, "curve and pants counts over 1 <= 2g-2+n <= 6", 5.0) as d:
        graphs = 0
        for g, n in surfaces_in_range():
            s = SurfaceType(g, n)
            for code in enumerate_types(s):
                G = from_code(code)
                assert len(G.edges) == curve_count(s) == 3 * g - 3 + n
                assert G.num_pants == pants_count(s) == 2 * g - 2 + n
                graphs += 1
        d["types"] = len(surfaces_in_range())
        d["graphs"] = graphs


def test_criterion_2_farey_local_structure(criterion):
    with criterion(2, "two common neighbors for every edge of the limit-20 window", 2.0) as d:
        win = bounded_subcomplex(SlopeModel.A, 20)
        verts = sorted(win.vertices)
        nbrs = {v: set() for v in verts}
        for a in verts:
            for b in verts:
                if abs(det(a, b)) == 1:
                    nbrs[a].add(b)
        pairs = 0
        for a in verts:
            for b in nbrs[a]:
                if b <= a:
                    continue
                comp = triangle_completions(a, b)
                assert len(set(comp)) == 2
                assert all(is_adjacent(c, a) and is_adjacent(c, b) for c in comp)
                assert nbrs[a] & nbrs[b] <= set(comp)
                pairs += 1
        assert pairs == len(win.edges)
        d["vertices"], d["edges"] = len(verts), pairs


def test_criterion_3_two_triangle_homotopy(criterion):
    with criterion(3, "1 -> 0 -> -1 -> inf -> 1 contracts through two 3A cells", 1.0) as d:
        one, zero, minus, inf = (Slope.parse(t) for t in ("1", "0", "-1", "1/0"))
        assert not is_adjacent(one, minus)
        assert all(is_adjacent(x, y) for x in (one, minus) for y in (zero, inf))
        cert = reduce_farey_loop(SlopeModel.A, [one, zero, minus, inf, one])
        assert verify_certificate(FareyModel(SlopeModel.A), cert)
        cells = cert.cells()
        assert len(cells) == 2 and all(c.kind is RelationKind.R3A for c in cells)
        d["cells"] = len(cells)


def test_criterion_4_random_loops(criterion):
    with criterion(4, "1000 seeded loops per model reduce and verify", 30.0) as d:
        for kind in SlopeModel:
            host = FareyModel(kind)
            rng = random.Random(20240 + len(kind.value))
            for _ in range(1000):
                lp = random_farey_loop(rng, max_length=30, max_den=10**6)
                assert 1 <= len(lp) - 1 <= 30
                assert max(v.den for v in lp) <= 10**6
                cert = reduce_farey_loop(kind, lp)
                assert cert.final == (cert.final[0],)
                assert verify_certificate(host, cert)
            d[kind.value] = "1000/1000"


def test_criterion_5_five_holed_sphere(criterion):
    with criterion(5, "(0,5): 15 vertices, 30 edges, 12 pentagons, 16/16 loops filled", 10.0) as d:
        host = build_move_graph(SurfaceType(0, 5))
        assert (len(host.vertices), len(host.edges)) == (15, 30)
        assert host.is_connected()
        tris = find_instances(host, RelationKind.R3A)
        pents = find_instances(host, RelationKind.R5A)
        assert len(pents) == 12
        report = simply_connected_report(host, tris + pents)
        for c in report.certificates:
            assert verify_certificate(host, c)
        assert (report.basis_size, report.filled, report.failed) == (16, 16, 0)
        d["pentagons"], d["filled"] = len(pents), f"{report.filled}/{report.basis_size}"


def test_criterion_6_symmetric_hexagon(criterion):
    with criterion(6, "3-fold symmetric hexagon fills with 2 pentagons + 2 triangles", 10.0) as d:
        host = build_move_graph(SurfaceType(0, 5))
        cells = find_instances(host, RelationKind.R3A) + find_instances(host, RelationKind.R5A)
        hexagons = symmetric_cycles(host, length=6, order=3)
        assert hexagons
        for hexagon in hexagons:
            res = fill_finite_loop(host, list(hexagon) + [hexagon[0]], cells)
            assert res.filled
            assert verify_certificate(host, res.certificate)
            assert Counter(c.kind.value for c in res.certificate.cells()) == {"5A": 2, "3A": 2}
        d["hexagons"] = len(hexagons)


def test_criterion_7_commutation(criterion):
    with criterion(7, "disjoint-support A-moves commute on (0,6), (1,3) and (1,4)", 10.0) as d:
        for s in [(0, 6), (1, 3), (1, 4)]:
            host = build_move_graph(SurfaceType(*s))
            pairs = violations = 0
            for v in host.vertices:
                for m1, m2 in disjoint_move_pairs(v):
                    pairs += 1
                    violations += not commute_check(host, v, m1, m2)
            assert violations == 0
            d[f"{s}"] = f"{pairs} pairs"


def test_criterion_8_connectivity(criterion):
    with criterion(8, "move graph connected for every type with 1 <= 2g-2+n <= 6", 10.0) as d:
        for g, n in surfaces_in_range():
            assert build_move_graph(SurfaceType(g, n)).is_connected(), (g, n)
        d["types"] = len(surfaces_in_range())


# commands whose JSON output is an importable object
OBJECT_PRODUCERS = {"movegraph", "farey", "reduce", "fill", "relations", "export"}


def _call(argv, files):
    out, err = io.StringIO(), io.StringIO()
    code = run([files.get(a, str(a)) for a in argv], out, err)
    return code, out.getvalue()


def test_criterion_9_determinism(criterion, tmp_path):
    with criterion(9, "CLI output byte-identical on rerun; JSON export round-trips", 5.0) as d:
        def put(name, text):
            path = tmp_path / name
            path.write_text(text, encoding="utf-8")
            return str(path)

        fig6 = put("loop.json", json.dumps(["1", "0", "-1", "1/0", "1"]))
        _, g4 = _call(["movegraph", 0, 4], {})
        verts = json.loads(g4)["vertices"]
        files = {
            "@loop": fig6,
            "@graph": put("graph.json", json.dumps({"g": 1, "n": 2, "pants": [0, 1], "legs": [[1, 1], [2, 1]], "edges": [[0, 0], [0, 1]]})),
            "@fill": put("fill.json", json.dumps(verts + verts[:1])),
        }
        files["@cert"] = put("cert.json", _call(["reduce", "@loop"], files)[1])
        commands = [
            ["counts", 2, 0],
            ["enumerate", 1, 3],
            ["movegraph", 0, 5],
            ["movegraph", 0, 5, "--format", "dot"],
            ["moves", "@graph"],
            ["farey", "ball", 5, "--model", "a"],
            ["farey", "ball", 5, "--model", "s", "--format", "dot"],
            ["reduce", "@loop", "--model", "s"],
            ["fill", 0, 4, "@fill"],
            ["report", 0, 5],
            ["relations", 0, 5, "--kind", "5A"],
            ["relations", 0, 6, "--kind", "C"],
            ["verify", "@cert"],
            ["corpus", "--seed", 12345, "--count", 50],
            ["export", "@cert"],
            ["export", "@graph", "--format", "dot"],
        ]
        roundtrips = 0
        for argv in commands:
            first = _call(argv, files)
            assert first[0] == 0, argv
            assert _call(argv, files) == first, argv
            if "dot" in argv or argv[0] not in OBJECT_PRODUCERS:
                continue
            code, exported = _call(["export", put("obj.json", first[1])], {})
            assert code == 0, argv
            assert json.loads(exported) == json.loads(first[1]) | {"type": json.loads(exported)["type"]}, argv
            assert _call(["export", put("obj2.json", exported)], {})[1] == exported, argv
            roundtrips += 1
        d["commands"], d["roundtrips"] = len(commands), roundtrips
