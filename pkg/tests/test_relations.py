import pytest

from pantscomplex.farey import FareyModel, SlopeModel, bounded_subcomplex
from pantscomplex.pantsgraph import PantsGraphError, build_move_graph
from pantscomplex.relations import (
    SIX_AS_TEMPLATE,
    RelationInstance,
    RelationKind,
    canonical_cycle,
    commutation_square,
    commute_check,
    disjoint_move_pairs,
    find_instances,
    instance_from_slopes,
    pair_vertex,
    pentagon_instance_0_5,
    symmetric_cycles,
    tree_curves,
    validate_instance,
)
from pantscomplex.surface import SurfaceType

A = FareyModel(SlopeModel.A)
S = FareyModel(SlopeModel.S)


def test_kind_metadata():
    assert [k.boundary_length for k in RelationKind] == [3, 5, 3, 6, 4]
    assert RelationKind.R6AS.move_multiset == {"A": 4, "S": 2}
    assert RelationKind.parse("5a") is RelationKind.R5A
    with pytest.raises(ValueError):
        RelationKind.parse("7Q")
    assert SIX_AS_TEMPLATE["move_multiset"] == {"A": 4, "S": 2}


def test_canonical_cycle():
    assert canonical_cycle((3, 1, 2)) == canonical_cycle((2, 1, 3)) == (1, 2, 3)


class TestFarey:
    def test_triangle_in_each_model(self):
        tri = ["0", "1/0", "1"]
        assert validate_instance(instance_from_slopes(RelationKind.R3A, tri, SlopeModel.A), A)
        assert validate_instance(instance_from_slopes(RelationKind.R3S, tri, SlopeModel.S), S)
        bad = validate_instance(instance_from_slopes(RelationKind.R3S, tri, SlopeModel.S), A)
        assert not bad and "3A" in bad.reason

    def test_non_triangle(self):
        v = validate_instance(instance_from_slopes(RelationKind.R3A, ["0", "1", "2"], SlopeModel.A), A)
        assert not v and "not an edge" in v.reason

    def test_four_cycle_is_not_5a(self):
        v = validate_instance(instance_from_slopes(RelationKind.R5A, ["0", "1/0", "1", "1/2"], SlopeModel.A), A)
        assert not v and "5" in v.reason

    def test_window_triangles(self):
        win = bounded_subcomplex(SlopeModel.A, 1)
        cells = find_instances(win, RelationKind.R3A)
        assert len(cells) == len(win.triangles) == 2
        assert all(validate_instance(c, win) for c in cells)
        assert find_instances(win, RelationKind.R3S) == []
        with pytest.raises(ValueError):
            find_instances(A, RelationKind.R3A)


class TestTypes:
    def test_pentagon_valid_every_start(self):
        host = build_move_graph(SurfaceType(0, 5))
        for start in range(5):
            inst = pentagon_instance_0_5(start)
            assert validate_instance(inst, host), start

    def test_pair_vertex_rejects_overlap(self):
        with pytest.raises(PantsGraphError, match="not a vertex"):
            pair_vertex({1, 2}, {2, 3})

    def test_pentagon_curves(self):
        # oracle by hand: beta_i = {i, i+1}; curves on the side avoiding leg 1
        assert tree_curves(pair_vertex({1, 2}, {3, 4})) == {frozenset({3, 4, 5}), frozenset({3, 4})}

    def test_counts(self):
        assert len(find_instances(build_move_graph(SurfaceType(0, 4)), RelationKind.R3A)) == 1
        five = build_move_graph(SurfaceType(0, 5))
        assert len(find_instances(five, RelationKind.R5A)) == 12
        # one triangle per curve: fixing it leaves a four-holed sphere, and there are C(5,2) curves
        assert len(find_instances(five, RelationKind.R3A)) == 10

    def test_wrong_length_and_kind(self):
        host = build_move_graph(SurfaceType(0, 5))
        inst = pentagon_instance_0_5(0)
        short = RelationInstance(RelationKind.R5A, inst.boundary[:4], inst.sites[:4])
        assert not validate_instance(short, host)
        assert not validate_instance(RelationInstance(RelationKind.R3S, inst.boundary[:3]), host)
        assert not validate_instance(RelationInstance(RelationKind.R6AS, inst.boundary + inst.boundary[:1]), host)

    def test_bad_site(self):
        host = build_move_graph(SurfaceType(0, 5))
        inst = pentagon_instance_0_5(0)
        sites = list(inst.sites)
        sites[0] = dict(sites[0], branch=1 - sites[0]["branch"])
        v = validate_instance(RelationInstance(RelationKind.R5A, inst.boundary, tuple(sites)), host)
        assert not v and "step 0" in v.reason

    def test_json_roundtrip(self):
        host = build_move_graph(SurfaceType(0, 5))
        inst = pentagon_instance_0_5(2)
        again = RelationInstance.from_json(inst.to_json(host), host)
        assert again == inst and again.sites == inst.sites


class TestCommutation:
    def test_six_holed(self):
        host = build_move_graph(SurfaceType(0, 6))
        checked = 0
        for v in host.vertices:
            for m1, m2 in disjoint_move_pairs(v):
                assert commute_check(host, v, m1, m2)
                checked += 1
        assert checked > 0

    def test_overlapping_supports_raise(self):
        host = build_move_graph(SurfaceType(0, 5))
        v = host.vertices[0]
        with pytest.raises(ValueError, match="disjoint"):
            commute_check(host, v, 0, 1)

    def test_not_a_vertex(self):
        host = build_move_graph(SurfaceType(0, 6))
        with pytest.raises(ValueError):
            commute_check(host, (0,), 0, 1)

    def test_square_valid(self):
        host = build_move_graph(SurfaceType(0, 6))
        v = next(v for v in host.vertices if disjoint_move_pairs(v))
        m1, m2 = disjoint_move_pairs(v)[0]
        sq = commutation_square(v, m1, 0, m2, 1)
        assert validate_instance(sq, host)
        bad = RelationInstance(RelationKind.RC, (sq.boundary[0], sq.boundary[2], sq.boundary[1], sq.boundary[3]), sq.sites)
        assert not validate_instance(bad, host)

    def test_found_squares_valid(self):
        # no pair of disjoint supports exists on (1,3); (1,4) is the first genus-one case
        host = build_move_graph(SurfaceType(1, 4))
        squares = find_instances(host, RelationKind.RC)
        assert squares and all(validate_instance(s, host) for s in squares)


def test_symmetric_hexagons():
    host = build_move_graph(SurfaceType(0, 6))
    cycles = symmetric_cycles(host)
    assert cycles
    assert all(len(c) == 6 for c in cycles)
