import pytest
from hypothesis import given, settings, strategies as st

from contactlab.generators import gen_bad_quad_fixture, gen_plane_contact, gen_point_clique
from contactlab.model import ContactFamily, ContactPoint, Kind, disjoint_union
from contactlab.region_graph import (DISK, build_contact_graph, components, dump_graph,
                                     euler_defects, family_is_plane, load_graph, loose_neighbors,
                                     structure_report, trace_faces, trace_rotation_faces)


def triangle_of_regions():
    """Three regions touching pairwise at three distinct points: G is a 6-cycle."""
    contacts = (ContactPoint("ab", frozenset((0, 1))), ContactPoint("bc", frozenset((1, 2))),
                ContactPoint("ca", frozenset((0, 2))))
    return ContactFamily(Kind.REGIONS, ("a", "b", "c"), (None,) * 3, contacts, 2,
                         ((0, 2), (0, 1), (1, 2)))


def test_point_clique_graph_counts():
    for k in (3, 5, 12):
        g = build_contact_graph(gen_point_clique(k))
        assert len(g) == 2 * k + 2
        assert len(g.edges) == 3 * k
        faces = trace_faces(g)
        assert len(faces.walks) == k
        assert faces.degrees == [6] * k
        assert euler_defects(g.rotation, faces) == []


def test_single_region():
    f = ContactFamily(Kind.REGIONS, ("a",), (None,), (), 2, ((),))
    g = build_contact_graph(f)
    assert len(g) == 1 and g.kinds == (DISK,)
    faces = trace_faces(g)
    assert faces.degrees == [0]
    assert euler_defects(g.rotation, faces) == []
    assert loose_neighbors(g, 0) == set()


def test_two_regions_path():
    f = ContactFamily(Kind.REGIONS, ("a", "b"), (None,) * 2, (ContactPoint("x", frozenset((0, 1))),),
                      2, ((0,), (0,)))
    g = build_contact_graph(f)
    assert g.kinds == (DISK, DISK, "contact")
    assert sorted(g.edges) == [(0, 2), (1, 2)]
    assert trace_faces(g).degrees == [4]
    assert loose_neighbors(g, 0) == {1} and loose_neighbors(g, 1) == {0}


def test_single_edge_and_six_cycle_rotations():
    assert trace_rotation_faces([(1,), (0,)]).degrees == [2]
    cyc = [((i - 1) % 6, (i + 1) % 6) for i in range(6)]
    assert sorted(trace_rotation_faces(cyc).degrees) == [6, 6]
    g = build_contact_graph(triangle_of_regions())
    assert sorted(trace_faces(g).degrees) == [6, 6]


def test_missing_rotation_data():
    f = ContactFamily(Kind.REGIONS, ("a", "b", "c"), (None,) * 3,
                      (ContactPoint("x", frozenset((0, 1, 2))),), 3, ((0,), (0,), (0,)))
    with pytest.raises(ValueError, match="rotation"):
        build_contact_graph(f)
    with pytest.raises(ValueError):
        build_contact_graph(ContactFamily(Kind.CURVES, ("a",), (None,), (), 2))


def test_loose_neighbors_point_clique():
    k = 9
    g = build_contact_graph(gen_point_clique(k))
    for v in range(k + 1):
        assert len(loose_neighbors(g, v)) == k
    with pytest.raises(ValueError):
        loose_neighbors(g, k + 1)


def test_bad_orientation_breaks_euler():
    f = gen_point_clique(5)
    bnd = list(f.boundary_order)
    bnd[-1] = tuple(reversed(bnd[-1]))
    flipped = ContactFamily(f.kind, f.names, f.parent, f.contacts, f.declared_k, tuple(bnd))
    assert family_is_plane(f)
    assert not family_is_plane(flipped)


def test_structure_report_point_clique():
    g = build_contact_graph(gen_point_clique(490))
    rep = structure_report(g, 490)
    assert rep.checks["faces_degree_at_least_6"].holds
    assert rep.checks["connected"].holds
    pair = rep.checks["no_two_adjacent_2_vertices"]
    assert not pair.holds
    r, p = pair.witness
    assert g.labels[r] == "r0" and g.labels[p] == "p0"
    assert not rep.checks["loose_neighbors_exceed_k"].holds


def test_structure_report_fixture_all_hold():
    g = build_contact_graph(gen_bad_quad_fixture(490))
    assert structure_report(g, 490).all_hold


def test_four_face_is_flagged():
    # two regions sharing two points: G contains a 4-cycle face
    contacts = (ContactPoint("x", frozenset((0, 1))), ContactPoint("y", frozenset((0, 1))))
    f = ContactFamily(Kind.REGIONS, ("a", "b"), (None,) * 2, contacts, 2, ((0, 1), (1, 0)))
    rep = structure_report(build_contact_graph(f), 2)
    assert not rep.checks["faces_degree_at_least_6"].holds
    assert rep.checks["faces_degree_at_least_6"].witness[0] == "face"


def test_components_of_union():
    f = disjoint_union(gen_point_clique(3), triangle_of_regions())
    g = build_contact_graph(f)
    comps = components(g.rotation)
    assert len(comps) == 2
    assert not structure_report(g, 3).checks["connected"].holds


def test_dump_load_round_trip():
    g = build_contact_graph(gen_plane_contact(12, 4))
    text = dump_graph(g)
    assert load_graph(text) == g
    with pytest.raises(ValueError):
        load_graph("0 X a : 1\n")


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 40), st.integers(0, 10**6))
def test_plane_contact_faces(n, seed):
    f = gen_plane_contact(n, seed)
    g = build_contact_graph(f)
    faces = trace_faces(g)
    assert sum(faces.degrees) == 2 * len(g.edges)
    assert euler_defects(g.rotation, faces) == []
    # simple families have no face below 6
    assert min(faces.degrees) >= 6
    for v in range(f.n):
        lv = loose_neighbors(g, v)
        assert v not in lv
        assert all(v in loose_neighbors(g, u) for u in lv)
