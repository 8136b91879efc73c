"""Integral and fractional packings of vertex-disjoint directed cycles.

``nu`` is the largest number of pairwise vertex-disjoint directed cycles;
``nu*`` is the optimum of its LP relaxation over all simple directed
cycles (weights per cycle, at most 1 in total through each vertex).  Both
are computed exactly; the LP is certified by a rational dual solution.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .region_graph import euler_defects
from .simplex import solve_lp

Cycle = tuple[int, ...]

GAP_BOUND = 15.95
CONJECTURED_GAP = 10.22
DEFAULT_LIMIT = 10_000


class CycleLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PlanarDigraph:
    vertices: tuple[str, ...]
    arcs: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def build(cls, n: int, arcs: Iterable[tuple[int, int]], names: Sequence[str] | None = None,
              rotation: Sequence[Sequence[int]] | None = None) -> "PlanarDigraph":
        names = tuple(str(i) for i in range(n)) if names is None else tuple(names)
        rot = None if rotation is None else tuple(tuple(r) for r in rotation)
        return cls(names, tuple(sorted(set(arcs))), rot)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def underlying_edges(self) -> set[tuple[int, int]]:
        return {(min(u, v), max(u, v)) for u, v in self.arcs}

    def problems(self) -> list[str]:
        out = []
        if len(set(self.arcs)) != len(self.arcs):
            out.append("parallel arcs")
        for u, v in self.arcs:
            if u == v:
                out.append(f"loop at {self.vertices[u]}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                out.append(f"arc ({u}, {v}) out of range")
        edges = self.underlying_edges()
        if self.n >= 3 and len(edges) > 3 * self.n - 6:
            out.append("too many edges for a planar graph")
        if self.rotation is not None:
            nbrs = {v: set() for v in range(self.n)}
            for u, v in edges:
                nbrs[u].add(v)
                nbrs[v].add(u)
            if len(self.rotation) != self.n or any(
                    len(self.rotation[v]) != len(nbrs[v]) or set(self.rotation[v]) != nbrs[v]
                    for v in range(self.n)):
                out.append("rotation does not match the arcs")
            elif euler_defects(self.rotation):
                out.append("rotation is not a plane embedding")
        return out


def digraph_from_dict(data: Mapping) -> PlanarDigraph:
    unknown = set(data) - {"vertices", "arcs", "rotation"}
    if unknown:
        raise ValueError(f"unknown keys: {sorted(unknown)}")
    names = [str(x) for x in data["vertices"]]
    index = {x: i for i, x in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate vertex ids")
    try:
        arcs = [(index[str(u)], index[str(v)]) for u, v in data["arcs"]]
        rotation = None
        if data.get("rotation") is not None:
            raw = data["rotation"]
            rotation = [tuple(index[str(u)] for u in raw.get(x, [])) for x in names]
    except KeyError as exc:
        raise ValueError(f"unknown vertex {exc.args[0]!r}") from None
    if len(set(arcs)) != len(arcs):
        raise ValueError("parallel arcs")
    return PlanarDigraph(tuple(names), tuple(arcs), None if rotation is None else tuple(rotation))


def digraph_to_dict(g: PlanarDigraph) -> dict:
    out: dict = {"vertices": list(g.vertices),
                 "arcs": [[g.vertices[u], g.vertices[v]] for u, v in g.arcs]}
    if g.rotation is not None:
        out["rotation"] = {g.vertices[v]: [g.vertices[u] for u in r] for v, r in enumerate(g.rotation)}
    return out


def load_digraph(path: str | Path) -> PlanarDigraph:
    return digraph_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# --------------------------------------------------------------------------
# cycles


def _canonical(cycle: Sequence[int]) -> Cycle:
    i = min(range(len(cycle)), key=cycle.__getitem__)
    return tuple(cycle[i:]) + tuple(cycle[:i])


def enumerate_cycles(g: PlanarDigraph, limit: int = DEFAULT_LIMIT) -> list[Cycle]:
    """All simple directed cycles, each starting at its smallest vertex, sorted by (length, vertices)."""
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    dg.add_edges_from(g.arcs)
    out = []
    for cyc in nx.simple_cycles(dg):
        out.append(_canonical(cyc))
        if len(out) > limit:
            raise CycleLimitExceeded(f"more than {limit} directed cycles")
    out.sort(key=lambda c: (len(c), c))
    return out


# --------------------------------------------------------------------------
# integral packing


def max_disjoint_cycles(cycles: Sequence[Cycle]) -> list[Cycle]:
    """Largest family of pairwise vertex-disjoint cycles, by branch and bound.

    Branches on the smallest vertex still covered by an available cycle:
    either one of its cycles is taken, or the vertex is left unused.  A
    branch is cut when even a fractional packing of its remaining vertices
    by shortest cycles cannot beat the incumbent.
    """
    sets = [frozenset(c) for c in cycles]
    # greedy start: shortest cycles first
    best: list[int] = []
    used: set[int] = set()
    for i in sorted(range(len(sets)), key=lambda i: (len(sets[i]), cycles[i])):
        if not sets[i] & used:
            best.append(i)
            used |= sets[i]

    def search(avail: list[int], chosen: list[int]) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if not avail:
            return
        verts = set().union(*(sets[i] for i in avail))
        shortest = min(len(sets[i]) for i in avail)
        if len(chosen) + len(verts) // shortest <= len(best):
            return
        v = min(verts)
        with_v = [i for i in avail if v in sets[i]]
        for i in with_v:
            rest = [j for j in avail if not sets[j] & sets[i]]
            chosen.append(i)
            search(rest, chosen)
            chosen.pop()
        search([j for j in avail if v not in sets[j]], chosen)

    search(list(range(len(sets))), [])
    return sorted((cycles[i] for i in best), key=lambda c: (len(c), c))


def nu_exact(g: PlanarDigraph, limit: int = DEFAULT_LIMIT) -> tuple[int, list[Cycle]]:
    witness = max_disjoint_cycles(enumerate_cycles(g, limit))
    return len(witness), witness


# --------------------------------------------------------------------------
# fractional packing


@dataclass
class FractionalPacking:
    value: Fraction
    weights: dict[Cycle, Fraction]
    dual: list[Fraction]

    def common_form(self) -> tuple[int, int, dict[Cycle, int]]:
        """(N, K, multiplicities): N cycles counted with multiplicity, each vertex on at most K."""
        denom = 1
        for w in self.weights.values():
            denom = math.lcm(denom, w.denominator)
        mult = {c: int(w * denom) for c, w in self.weights.items() if w}
        return sum(mult.values()), denom, mult


def nu_star(g: PlanarDigraph, limit: int = DEFAULT_LIMIT,
            cycles: Sequence[Cycle] | None = None) -> FractionalPacking:
    cycles = enumerate_cycles(g, limit) if cycles is None else cycles
    if not cycles:
        return FractionalPacking(Fraction(0), {}, [Fraction(0)] * g.n)
    A = [[1 if v in c else 0 for c in cycles] for v in range(g.n)]
    sol = solve_lp([1] * len(cycles), A, [1] * g.n)
    weights = {c: x for c, x in zip(cycles, sol.x) if x}
    return FractionalPacking(sol.value, weights, sol.y)


def certify(g: PlanarDigraph, cycles: Sequence[Cycle], packing: FractionalPacking) -> list[str]:
    """Check primal feasibility, dual feasibility, and equal objectives, exactly."""
    problems = []
    load = [Fraction(0)] * g.n
    for c, w in packing.weights.items():
        if not 0 <= w <= 1:
            problems.append(f"weight {w} of {c} outside [0, 1]")
        for v in c:
            load[v] += w
    problems += [f"vertex {g.vertices[v]} carries {x}" for v, x in enumerate(load) if x > 1]
    if sum(packing.weights.values(), Fraction(0)) != packing.value:
        problems.append("weights do not sum to the value")
    y = packing.dual
    if any(x < 0 for x in y):
        problems.append("negative dual")
    for c in cycles:
        if sum((y[v] for v in c), Fraction(0)) < 1:
            problems.append(f"dual violated on cycle {c}")
    if sum(y, Fraction(0)) != packing.value:
        problems.append("dual objective differs from primal")
    return problems


@dataclass
class PackingResult:
    nu: int
    nu_star: Fraction
    cycles: list[Cycle]
    witness: list[Cycle]
    packing: FractionalPacking
    certificate_problems: list[str] = field(default_factory=list)

    @property
    def lp_weights(self) -> dict[Cycle, Fraction]:
        return self.packing.weights

    @property
    def ratio(self) -> Fraction | None:
        if self.nu == 0:
            return None
        return self.nu_star / self.nu

    @property
    def violation(self) -> bool:
        r = self.ratio
        return bool(self.certificate_problems) or self.nu > self.nu_star or (
            r is not None and r > GAP_BOUND)

    def to_dict(self, g: PlanarDigraph) -> dict:
        def names(c):
            return [g.vertices[v] for v in c]
        total, denom, mult = self.packing.common_form()
        r = self.ratio
        return {
            "nu": self.nu,
            "nu_star": str(self.nu_star),
            "ratio": None if r is None else str(r),
            "ratio_float": None if r is None else float(r),
            "bound": GAP_BOUND,
            "conjectured_bound": CONJECTURED_GAP,
            "within_bound": None if r is None else r <= GAP_BOUND,
            "within_conjectured_bound": None if r is None else r <= CONJECTURED_GAP,
            "cycle_count": len(self.cycles),
            "disjoint_cycles": [names(c) for c in self.witness],
            "weights": [{"cycle": names(c), "weight": str(w)} for c, w in sorted(self.packing.weights.items())],
            "dual": {g.vertices[v]: str(y) for v, y in enumerate(self.packing.dual)},
            "common_form": {"cycles": total, "per_vertex": denom,
                            "multiset": [{"cycle": names(c), "times": t} for c, t in sorted(mult.items())]},
            "certificate_ok": not self.certificate_problems,
            "violation": self.violation,
        }


class InconsistentPacking(RuntimeError):
    pass


def ratio_report(g: PlanarDigraph, limit: int = DEFAULT_LIMIT, strict: bool = True) -> PackingResult:
    cycles = enumerate_cycles(g, limit)
    witness = max_disjoint_cycles(cycles)
    frac = nu_star(g, cycles=cycles)
    res = PackingResult(len(witness), frac.value, cycles, witness, frac, certify(g, cycles, frac))
    if len(witness) == 0 and frac.value > 0:
        res.certificate_problems.append("no cycles packed but positive fractional value")
    if strict and res.violation:
        raise InconsistentPacking(f"packing inconsistency: {res.certificate_problems or res.ratio}")
    return res


# --------------------------------------------------------------------------
# small planar corpus


def triangulation(n: int) -> list[tuple[int, int]]:
    """Edges of a maximal planar graph on n <= 5 vertices (triangle, K4, K5 minus an edge)."""
    if n == 3:
        return [(0, 1), (0, 2), (1, 2)]
    if n == 4:
        return list(combinations(range(4), 2))
    if n == 5:
        return [e for e in combinations(range(5), 2) if e != (3, 4)]
    raise ValueError("triangulation corpus covers 3 <= n <= 5")


def _automorphisms(n: int, edges: list[tuple[int, int]]) -> list[tuple[int, ...]]:
    es = set(edges)
    out = []
    for perm in permutations(range(n)):
        if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in es for u, v in edges):
            out.append(perm)
    return out


def orientations(n: int) -> Iterable[PlanarDigraph]:
    """Every digraph whose underlying graph is a subgraph of the n-vertex triangulation.

    Each edge is absent, oriented either way, or a pair of opposite arcs.
    Only one digraph per orbit of the triangulation's automorphism group is
    produced.
    """
    edges = triangulation(n)
    autos = _automorphisms(n, edges)
    seen = set()
    for states in product(range(4), repeat=len(edges)):
        arcs = []
        for (u, v), s in zip(edges, states):
            if s & 1:
                arcs.append((u, v))
            if s & 2:
                arcs.append((v, u))
        key = min(tuple(sorted((p[u], p[v]) for u, v in arcs)) for p in autos)
        if key in seen:
            continue
        seen.add(key)
        yield PlanarDigraph.build(n, key)


@dataclass
class SweepResult:
    instances: int
    with_cycles: int
    max_ratio: Fraction
    argmax: PlanarDigraph | None
    violations: int


def _ratio_entry(g: PlanarDigraph) -> tuple[int, Fraction, bool]:
    res = ratio_report(g, strict=False)
    return res.nu, res.nu_star, res.violation


def sweep_small_planar(max_vertices: int = 5, workers: int | None = None) -> SweepResult:
    """Ratio nu*/nu over every orientation class; the first maximiser in corpus order is kept."""
    graphs = [g for n in range(3, max_vertices + 1) for g in orientations(n)]
    if workers == 1:
        entries = map(_ratio_entry, graphs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        entries = pool.map(_ratio_entry, graphs, chunksize=256)
    cyc = bad = 0
    best, arg = Fraction(0), None
    try:
        for g, (nu, star, violation) in zip(graphs, entries):
            if nu == 0:
                continue
            cyc += 1
            bad += violation
            if star / nu > best:
                best, arg = star / nu, g
    finally:
        if workers != 1:
            pool.shutdown()
    return SweepResult(len(graphs), cyc, best, arg, bad)
