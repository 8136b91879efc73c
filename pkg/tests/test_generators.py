from math import comb

import pytest

import oracles
from contactlab.coloring import exact_chromatic
from contactlab.discharging import BadQuad, find_reducible
from contactlab.generators import (gen_bad_quad_fixture, gen_fpb_extremal, gen_plane_contact,
                                   gen_point_clique, gen_random_curves)
from contactlab.model import (distance, dump_family, family_stats, intersection_graph,
                              validate_family)
from contactlab.region_graph import build_contact_graph, family_is_plane, loose_neighbors


def test_point_clique_small():
    f = gen_point_clique(3)
    assert validate_family(f, check_simple=True).ok
    assert exact_chromatic(intersection_graph(f)) == 4
    assert len(oracles.pairs(f)) == comb(4, 2)
    with pytest.raises(ValueError):
        gen_point_clique(1)


def test_point_clique_490():
    f = gen_point_clique(490)
    assert f.n == 491
    assert max(len(p.members) for p in f.contacts) == 490
    assert validate_family(f, check_simple=True).ok
    assert family_is_plane(f)
    g = build_contact_graph(f)
    assert all(len(loose_neighbors(g, v)) == 490 for v in range(f.n))


def test_fpb_extremal_shape():
    f = gen_fpb_extremal(4, 3)
    assert f.names == ("c", "A1", "B1", "o1", "o2")
    assert validate_family(f).ok
    f = gen_fpb_extremal(100, 10)
    assert f.n == 101
    assert all(len(p.members) == 10 for p in f.contacts)
    assert distance(f, "A8", "o5") == 8
    with pytest.raises(ValueError):
        gen_fpb_extremal(10, 7)
    with pytest.raises(ValueError):
        gen_fpb_extremal(10, 2)


def test_random_curves_valid_and_deterministic():
    f = gen_random_curves(50, 8, 1)
    assert validate_family(f).ok
    assert dump_family(f) == dump_family(gen_random_curves(50, 8, 1))
    assert dump_family(f) != dump_family(gen_random_curves(50, 8, 2))


def test_random_curves_without_nesting():
    f = gen_random_curves(40, 6, 7, nest_prob=0.0)
    assert all(p is None for p in f.parent)
    assert family_stats(f).max_distance == 0


def test_random_curves_respect_k():
    for seed in range(20):
        f = gen_random_curves(80, 4, seed, nest_prob=0.9)
        assert validate_family(f).ok
        assert max(len(p.members) for p in f.contacts) <= 4


def test_bad_quad_fixture():
    f = gen_bad_quad_fixture(490)
    assert validate_family(f, check_simple=True).ok
    assert family_is_plane(f)
    g = build_contact_graph(f)
    assert all(len(loose_neighbors(g, v)) == 491 for v in range(f.n))
    assert isinstance(find_reducible(f, 490), BadQuad)
    with pytest.raises(ValueError):
        gen_bad_quad_fixture(100)


def test_plane_contact():
    f = gen_plane_contact(25, 1)
    assert validate_family(f, check_simple=True).ok
    assert family_is_plane(f)
    # a triangulation on n vertices has 3n - 6 edges
    assert len(f.contacts) == 3 * 25 - 6
