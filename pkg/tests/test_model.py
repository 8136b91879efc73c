import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from contactlab.generators import gen_fpb_extremal, gen_point_clique, gen_random_curves
from contactlab.model import (AVG_DISTANCE_RATIO, ContactFamily, ContactPoint, FamilyFormatError,
                              InvalidFamilyError, Kind, average_distance, count_c_crossing_pairs,
                              disjoint_union, distance, dump_family, family_from_dict,
                              family_stats, family_to_dict, intersecting_pairs, intersection_graph,
                              load_family, replicate, restrict, validate_family, witness_points)


def curves(names, parent, contacts, k=5):
    idx = {x: i for i, x in enumerate(names)}
    par = tuple(idx[parent[x]] if x in parent else None for x in names)
    pts = tuple(ContactPoint(f"p{j}", frozenset(idx[m] for m in mem)) for j, mem in enumerate(contacts))
    return ContactFamily(Kind.CURVES, tuple(names), par, pts, k)


def two_regions(shared_points=1):
    contacts = [ContactPoint(f"x{j}", frozenset((0, 1)), (0, 1)) for j in range(shared_points)]
    bnd = (tuple(range(shared_points)), tuple(range(shared_points)))
    return ContactFamily(Kind.REGIONS, ("a", "b"), (None, None), tuple(contacts), 490, bnd)


# ---------------------------------------------------------------- format


def test_json_round_trip(tmp_path):
    f = gen_point_clique(4)
    path = tmp_path / "f.json"
    dump_family(f, path)
    g = load_family(path)
    assert g == f
    assert dump_family(g) == path.read_text()


def test_round_trip_curves_with_parent():
    f = gen_fpb_extremal(12, 4)
    assert family_from_dict(json.loads(dump_family(f))) == f


def test_unknown_top_level_key_rejected():
    d = family_to_dict(gen_point_clique(3))
    d["colour"] = 1
    with pytest.raises(FamilyFormatError, match="unknown keys"):
        family_from_dict(d)


def test_unknown_contact_key_and_curve_rejected():
    d = family_to_dict(gen_point_clique(3))
    d["contacts"][0]["weight"] = 2
    with pytest.raises(FamilyFormatError):
        family_from_dict(d)
    d = family_to_dict(gen_point_clique(3))
    d["contacts"][0]["members"].append("ghost")
    with pytest.raises(FamilyFormatError, match="ghost"):
        family_from_dict(d)


def test_bad_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{nope")
    with pytest.raises(FamilyFormatError):
        load_family(p)


# ---------------------------------------------------------------- validation


def test_valid_generated_instances():
    for f in (gen_point_clique(6), gen_fpb_extremal(100, 10), gen_random_curves(50, 8, 1)):
        assert validate_family(f).ok


def test_extremal_is_not_simple():
    rep = validate_family(gen_fpb_extremal(100, 10))
    assert rep.ok and not rep.simple
    assert "simplicity" in validate_family(gen_fpb_extremal(100, 10), check_simple=True).codes()


def test_single_member_point():
    f = curves(["a", "b"], {}, [["a"]])
    rep = validate_family(f)
    assert rep.codes() == {"multiplicity_low"}
    assert "point multiplicity < 2" in rep.violations[0].message


def test_multiplicity_above_k():
    f = curves(["a", "b", "c"], {}, [["a", "b", "c"]], k=2)
    assert validate_family(f).codes() == {"multiplicity_high"}


def test_two_shared_points_flag_simplicity():
    f = two_regions(2)
    assert validate_family(f).ok
    rep = validate_family(f, check_simple=True)
    assert rep.codes() == {"simplicity"}
    assert "simplicity violated" in rep.violations[0].message


def test_forest_cycle():
    f = ContactFamily(Kind.CURVES, ("a", "b"), (1, 0), (), 3)
    assert "forest_cycle" in validate_family(f).codes()
    with pytest.raises(InvalidFamilyError):
        f.ancestors


def test_regions_cannot_nest():
    f = ContactFamily(Kind.REGIONS, ("a", "b"), (None, 0), (ContactPoint("x", frozenset((0, 1))),), 3,
                      ((0,), (0,)))
    assert "regions_nested" in validate_family(f).codes()


def test_separation_closure():
    # a contains b; c is outside.  A point on b and c must also lie on a.
    bad = curves(["a", "b", "c"], {"b": "a"}, [["b", "c"]])
    assert validate_family(bad).codes() == {"separation_closure"}
    good = curves(["a", "b", "c"], {"b": "a"}, [["a", "b", "c"]])
    assert validate_family(good).ok


def test_region_rotation_data_checked():
    f = ContactFamily(Kind.REGIONS, ("a", "b", "c"), (None,) * 3,
                      (ContactPoint("x", frozenset((0, 1, 2))),), 3, ((0,), (0,), (0,)))
    assert "missing_rotation" in validate_family(f).codes()
    g = ContactFamily(Kind.REGIONS, ("a", "b"), (None,) * 2, (ContactPoint("x", frozenset((0, 1))),), 3)
    assert "missing_boundary_order" in validate_family(g).codes()
    h = ContactFamily(Kind.REGIONS, ("a", "b"), (None,) * 2, (ContactPoint("x", frozenset((0, 1))),), 3,
                      ((0, 0), (0,)))
    assert "boundary_order" in validate_family(h).codes()


# ---------------------------------------------------------------- graph and distances


def test_empty_family():
    f = ContactFamily(Kind.CURVES, (), (), (), 2)
    assert intersection_graph(f) == {}
    st_ = family_stats(f)
    assert st_.n == 0 and st_.alpha is None and st_.k_effective is None
    with pytest.raises(ValueError, match="undefined"):
        average_distance(f)


def test_point_clique_graph_complete():
    g = intersection_graph(gen_point_clique(3))
    assert all(len(nbrs) == 3 for nbrs in g.values()) and len(g) == 4


def test_extremal_edge_count_matches_scan():
    for n, k in ((100, 10), (20, 4), (4, 3), (37, 7)):
        f = gen_fpb_extremal(n, k)
        o = n - 2 * k + 4
        formula = 2 * (k - 2) * o + o + 2 * (k - 2) + (k - 2) * (k - 3)
        assert len(intersecting_pairs(f)) == len(oracles.pairs(f)) == formula


def test_intersection_graph_rejects_invalid():
    with pytest.raises(InvalidFamilyError):
        intersection_graph(curves(["a", "b"], {}, [["a"]]))


def test_distance_examples():
    f = gen_fpb_extremal(100, 10)
    assert distance(f, "A8", "o1") == 8 == f.declared_k - 2
    assert distance(f, "A8", "B8") == 14
    assert distance(f, "A1", "A2") == 0  # parent and child
    r = gen_point_clique(5)
    assert all(distance(r, a, b) == 0 for a, b in intersecting_pairs(r))
    with pytest.raises(KeyError):
        distance(f, "A1", "nope")


def test_distance_matches_oracle_on_random_families():
    for seed in range(15):
        f = gen_random_curves(25, 9, seed, nest_prob=0.6)
        inside = oracles.inside_table(f)
        for a, b in oracles.pairs_fast(f):
            assert distance(f, a, b) == oracles.distance(f, a, b, inside)


def test_average_distance_extremal_oracle():
    f = gen_fpb_extremal(100, 10)
    inside = oracles.inside_table(f)
    prs = oracles.pairs(f)
    expected = Fraction(sum(oracles.distance(f, a, b, inside) for a, b in prs), len(prs))
    assert average_distance(f) == expected
    st_ = family_stats(f)
    assert st_.k_effective == 10 and st_.alpha == expected / 10 and st_.m == len(prs)


def test_point_clique_stats():
    st_ = family_stats(gen_point_clique(7))
    assert (st_.n, st_.m, st_.k_effective, st_.alpha) == (8, comb(8, 2), 7, 0)


def test_c_crossing_extremal():
    for n, k in ((100, 10), (20, 4), (4, 3)):
        f = gen_fpb_extremal(n, k)
        got = count_c_crossing_pairs(f, "c")
        assert got == 2 * (k - 2) * (n - 2 * k + 4) == oracles.c_crossing(f, f.curve("c"))


def test_c_crossing_no_nesting_is_zero():
    f = gen_random_curves(20, 6, 3, nest_prob=0.0)
    assert all(count_c_crossing_pairs(f, c) == 0 for c in range(f.n))


def test_witness_is_lowest_point():
    f = gen_random_curves(30, 6, 2)
    for (a, b), j in witness_points(f).items():
        assert {a, b} <= f.contacts[j].members
        assert not any({a, b} <= f.contacts[i].members for i in range(j))


# ---------------------------------------------------------------- transforms


def test_replicate_identity():
    f = gen_random_curves(10, 5, 0)
    assert replicate(f, 1) == f
    with pytest.raises(ValueError):
        replicate(f, 0)


def test_replicate_single_pair():
    f = curves(["a", "b"], {}, [["a", "b"]])
    r = replicate(f, 2)
    assert r.n == 4 and len(oracles.pairs(r)) == 6
    assert r.declared_k == 10


def test_replicate_extremal():
    f = gen_fpb_extremal(20, 4)
    n, m = f.n, len(oracles.pairs(f))
    r = replicate(f, 3)
    assert validate_family(r).ok
    assert len(oracles.pairs(r)) == 3 * n + 9 * m
    assert r.declared_k == 12


def test_replicate_isolated_curve_copies_touch():
    f = curves(["a", "b", "z"], {}, [["a", "b"]])
    r = replicate(f, 3)
    assert len(oracles.pairs(r)) == comb(3, 2) * 3 + 9 * 1


def test_restrict_and_union():
    f = gen_point_clique(5)
    sub, old = restrict(f, [0, 1, 5])
    assert old == [0, 1, 5] and sub.n == 3
    assert validate_family(sub).ok
    assert len(intersecting_pairs(sub)) == 3
    u = disjoint_union(f, gen_point_clique(3))
    assert u.n == 6 + 4 and validate_family(u).ok
    assert len(intersecting_pairs(u)) == comb(6, 2) + comb(4, 2)


def test_average_distance_below_proven_line_on_random():
    for seed in range(30):
        f = gen_random_curves(60, 10, seed, nest_prob=0.7)
        st_ = family_stats(f)
        assert st_.alpha <= Fraction(AVG_DISTANCE_RATIO)


# ---------------------------------------------------------------- properties

families = st.builds(gen_random_curves, n=st.integers(2, 30), k=st.integers(2, 10),
                     seed=st.integers(0, 10**6), nest_prob=st.floats(0, 1))


@settings(max_examples=60, deadline=None)
@given(families)
def test_distance_symmetric_and_bounded(f):
    k_eff = max((len(p.members) for p in f.contacts), default=0)
    for a, b in intersecting_pairs(f):
        assert distance(f, a, b) == distance(f, b, a) <= k_eff - 2


@settings(max_examples=40, deadline=None)
@given(families, st.integers(1, 6))
def test_replicate_revalidates_and_edge_identity(f, ell):
    r = replicate(f, ell)
    assert validate_family(r).ok
    m = len(intersecting_pairs(f))
    extra = sum(1 for c in range(f.n) if not f.contacts_of[c])
    assert len(intersecting_pairs(r)) == comb(ell, 2) * f.n + ell * ell * m
    assert len(r.contacts) == len(f.contacts) + (extra if ell > 1 else 0)


@settings(max_examples=40, deadline=None)
@given(families)
def test_alpha_in_unit_interval(f):
    st_ = family_stats(f)
    if st_.alpha is not None:
        assert 0 <= st_.alpha <= 1
        assert st_.max_distance <= st_.k_effective - 2
