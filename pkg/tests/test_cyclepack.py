import random
from fractions import Fraction

import pytest

import oracles
from contactlab.cyclepack import (CycleLimitExceeded, InconsistentPacking, PlanarDigraph, certify,
                                  digraph_from_dict, digraph_to_dict, enumerate_cycles,
                                  max_disjoint_cycles, nu_exact, nu_star, orientations,
                                  ratio_report, sweep_small_planar, triangulation)


def bidirected(n, edges):
    return PlanarDigraph.build(n, [a for u, v in edges for a in ((u, v), (v, u))])


GADGET = bidirected(3, [(0, 1), (1, 2), (0, 2)])
TWO_TRIANGLES = PlanarDigraph.build(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
BOWTIE = PlanarDigraph.build(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])


def test_enumeration_examples():
    assert enumerate_cycles(PlanarDigraph.build(2, [(0, 1), (1, 0)])) == [(0, 1)]
    assert enumerate_cycles(PlanarDigraph.build(3, [(0, 1), (1, 2), (2, 0)])) == [(0, 1, 2)]
    assert enumerate_cycles(GADGET) == [(0, 1), (0, 2), (1, 2), (0, 1, 2), (0, 2, 1)]
    with pytest.raises(CycleLimitExceeded):
        enumerate_cycles(GADGET, limit=4)


def test_enumeration_matches_brute_force():
    rng = random.Random(1)
    for n in (3, 4, 5):
        for g in list(orientations(n))[::97]:
            assert set(enumerate_cycles(g)) == oracles.simple_cycles_bruteforce(g.n, g.arcs)
    for _ in range(20):
        arcs = {(u, v) for u in range(6) for v in range(6) if u != v and rng.random() < 0.3}
        g = PlanarDigraph.build(6, arcs)
        assert set(enumerate_cycles(g)) == oracles.simple_cycles_bruteforce(6, arcs)


def test_nu_examples():
    assert nu_exact(TWO_TRIANGLES)[0] == 2
    assert nu_exact(GADGET)[0] == 1
    assert nu_exact(PlanarDigraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))[0] == 0


def test_nu_matches_brute_force():
    rng = random.Random(2)
    for _ in range(30):
        arcs = {(u, v) for u in range(7) for v in range(7) if u != v and rng.random() < 0.25}
        g = PlanarDigraph.build(7, arcs)
        cycles = enumerate_cycles(g)
        witness = max_disjoint_cycles(cycles)
        assert len(witness) == oracles.max_disjoint_bruteforce(cycles)
        used = [v for c in witness for v in c]
        assert len(used) == len(set(used))


def test_nu_star_examples():
    tri = PlanarDigraph.build(3, [(0, 1), (1, 2), (2, 0)])
    assert nu_star(tri).value == 1
    gadget = nu_star(GADGET)
    assert gadget.value == Fraction(3, 2)
    assert gadget.weights == {(0, 1): Fraction(1, 2), (0, 2): Fraction(1, 2), (1, 2): Fraction(1, 2)}
    assert gadget.dual == [Fraction(1, 2)] * 3
    assert nu_star(BOWTIE).value == 1
    assert nu_star(PlanarDigraph.build(3, [])).value == 0


def test_certificate_and_common_form():
    cycles = enumerate_cycles(GADGET)
    pk = nu_star(GADGET, cycles=cycles)
    assert certify(GADGET, cycles, pk) == []
    total, per_vertex, mult = pk.common_form()
    assert (total, per_vertex) == (3, 2)
    assert sorted(mult.values()) == [1, 1, 1]
    broken = type(pk)(pk.value, pk.weights, [Fraction(1, 4)] * 3)
    assert certify(GADGET, cycles, broken)


def test_ratio_report():
    res = ratio_report(GADGET)
    assert (res.nu, res.nu_star, res.ratio) == (1, Fraction(3, 2), Fraction(3, 2))
    assert not res.violation
    d = res.to_dict(GADGET)
    assert d["within_bound"] and d["within_conjectured_bound"] and d["certificate_ok"]
    res = ratio_report(TWO_TRIANGLES)
    assert (res.nu, res.nu_star, res.ratio) == (2, 2, 1)
    empty = ratio_report(PlanarDigraph.build(3, [(0, 1)]))
    assert empty.ratio is None and empty.nu_star == 0


def test_strict_report_raises_on_inconsistency(monkeypatch):
    import contactlab.cyclepack as cp
    monkeypatch.setattr(cp, "max_disjoint_cycles", lambda cycles: [])
    with pytest.raises(InconsistentPacking):
        cp.ratio_report(GADGET)


def test_digraph_io_and_validation():
    data = {"vertices": ["a", "b", "c"], "arcs": [["a", "b"], ["b", "a"], ["b", "c"]],
            "rotation": {"a": ["b"], "b": ["c", "a"], "c": ["b"]}}
    g = digraph_from_dict(data)
    assert g.problems() == []
    assert digraph_to_dict(g) == data
    with pytest.raises(ValueError):
        digraph_from_dict({**data, "extra": 1})
    with pytest.raises(ValueError):
        digraph_from_dict({"vertices": ["a"], "arcs": [["a", "z"]]})
    with pytest.raises(ValueError):
        digraph_from_dict({"vertices": ["a", "b"], "arcs": [["a", "b"], ["a", "b"]]})
    loop = PlanarDigraph.build(2, [(0, 0)])
    assert any("loop" in p for p in loop.problems())
    k6 = PlanarDigraph.build(6, [(u, v) for u in range(6) for v in range(u + 1, 6)])
    assert "too many edges for a planar graph" in k6.problems()
    wrong = digraph_from_dict({**data, "rotation": {"a": ["b"], "b": ["a"], "c": ["b"]}})
    assert "rotation does not match the arcs" in wrong.problems()


def test_planar_rotation_checked_by_euler():
    # K4 drawn with a consistent embedding, then with one vertex's rotation reversed
    good = {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]}
    arcs = [[str(u), str(v)] for u in range(4) for v in range(u + 1, 4)]
    base = {"vertices": ["0", "1", "2", "3"], "arcs": arcs}
    g = digraph_from_dict({**base, "rotation": {str(v): [str(x) for x in r] for v, r in good.items()}})
    assert g.problems() == []
    bad = dict(good)
    bad[0] = [1, 3, 2]
    h = digraph_from_dict({**base, "rotation": {str(v): [str(x) for x in r] for v, r in bad.items()}})
    assert "rotation is not a plane embedding" in h.problems()


def test_orientation_corpus():
    assert len(triangulation(5)) == 9
    with pytest.raises(ValueError):
        triangulation(6)
    # triangle: 4 states per edge, 6 rotations and reflections
    graphs = list(orientations(3))
    assert len(graphs) == len({g.arcs for g in graphs})
    assert all(g.problems() == [] for g in graphs)


def test_sweep_four_vertices():
    s = sweep_small_planar(4, workers=1)
    assert s.violations == 0
    assert s.max_ratio <= Fraction(1595, 100)
    assert s.max_ratio == Fraction(5, 3)
