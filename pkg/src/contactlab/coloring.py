"""Greedy and exact colouring, the (k+1)-colouring of simple region families,
and the list-colouring extension used by the four-region reduction."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

import networkx as nx

from .discharging import CONSTANTS, BadQuad, GuaranteeViolated, LowDegreeDisk, find_reducible
from .model import ContactFamily, Graph, Kind, restrict, validate_family


@dataclass
class Coloring:
    assignment: dict[int, int]
    palette_size: int

    @classmethod
    def of(cls, assignment: dict[int, int]) -> "Coloring":
        return cls(assignment, len(set(assignment.values())))


def conflicts(graph: Graph, coloring: Coloring) -> list[tuple[int, int]]:
    """Adjacent pairs sharing a colour (and uncoloured vertices paired with themselves)."""
    out = []
    col = coloring.assignment
    for v in graph:
        if v not in col:
            out.append((v, v))
    for u, nbrs in graph.items():
        for v in nbrs:
            if u < v and col.get(u) is not None and col.get(u) == col.get(v):
                out.append((u, v))
    return out


def family_conflicts(f: ContactFamily, coloring: Coloring) -> list[tuple[int, int]]:
    """Pair scan over every contact point; independent of any graph structure."""
    col = coloring.assignment
    bad = {(c, c) for c in range(f.n) if c not in col}
    for p in f.contacts:
        for a, b in combinations(sorted(p.members), 2):
            if col.get(a) == col.get(b):
                bad.add((a, b))
    return sorted(bad)


def smallest_last_order(graph: Graph) -> list[int]:
    """Repeatedly remove a minimum-degree vertex; return the reverse removal order.

    Ties go to the smallest vertex id.  Colouring greedily in this order
    uses at most degeneracy + 1 colours.
    """
    deg = {v: len(nbrs) for v, nbrs in graph.items()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed = set()
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        for u in graph[v]:
            if u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    order.reverse()
    return order


def degeneracy(graph: Graph) -> int:
    deg = {v: len(nbrs) for v, nbrs in graph.items()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed = set()
    best = 0
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        best = max(best, d)
        removed.add(v)
        for u in graph[v]:
            if u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return best


def greedy_coloring(graph: Graph, order: Sequence[int] | None = None) -> Coloring:
    order = smallest_last_order(graph) if order is None else order
    col: dict[int, int] = {}
    for v in order:
        used = {col[u] for u in graph[v] if u in col}
        c = 0
        while c in used:
            c += 1
        col[v] = c
    return Coloring.of(col)


def clique_number(graph: Graph) -> int:
    if not graph:
        return 0
    g = nx.Graph()
    g.add_nodes_from(graph)
    g.add_edges_from((u, v) for u, nbrs in graph.items() for v in nbrs)
    return max(len(c) for c in nx.find_cliques(g))


MAX_EXACT = 30


def exact_chromatic(graph: Graph) -> int:
    """Chromatic number by DSatur-style backtracking, clique lower bound first."""
    if len(graph) > MAX_EXACT:
        raise ValueError(f"exact_chromatic is limited to {MAX_EXACT} vertices")
    if not graph:
        return 0
    lower = clique_number(graph)
    upper = greedy_coloring(graph).palette_size
    verts = list(graph)
    for c in range(lower, upper):
        if _colorable(graph, verts, c):
            return c
    return upper


def _colorable(graph: Graph, verts: list[int], c: int) -> bool:
    col: dict[int, int] = {}

    def pick():
        best, key = None, None
        for v in verts:
            if v in col:
                continue
            sat = len({col[u] for u in graph[v] if u in col})
            cand = (sat, len(graph[v]))
            if key is None or cand > key:
                best, key = v, cand
        return best

    def go(used: int) -> bool:
        v = pick()
        if v is None:
            return True
        forbidden = {col[u] for u in graph[v] if u in col}
        # a fresh colour is tried only once: colour classes are interchangeable
        for x in range(min(used + 1, c)):
            if x in forbidden:
                continue
            col[v] = x
            if go(max(used, x + 1)):
                return True
            del col[v]
        return False

    return go(0)


# --------------------------------------------------------------------------
# list extension for K4 minus an edge

QUAD_LIST_SIZES = (2, 3, 3, 2)


def extend_k4_minus_edge(lists: Sequence[Iterable[int]]) -> tuple[int, int, int, int]:
    """Choose colours for (u, w, u2', w2') from their lists.

    All pairs must differ except u and w2'.  Lists need at least 2, 3, 3, 2
    entries; each is cut to exactly that size and the at most 36
    combinations are searched in order.
    """
    if len(lists) != 4:
        raise ValueError("need four lists")
    cut = []
    for lst, need in zip(lists, QUAD_LIST_SIZES):
        opts = sorted(set(lst))
        if len(opts) < need:
            raise ValueError(f"list {opts} is shorter than the required {need}")
        cut.append(opts[:need])
    for cu, cw, cs, cw2 in product(*cut):
        if len({cu, cw, cs}) == 3 and len({cw, cs, cw2}) == 3:
            return cu, cw, cs, cw2
    raise GuaranteeViolated(f"no extension for lists {cut}")


# --------------------------------------------------------------------------
# colouring simple region families


def _neighbors(f: ContactFamily, c: int) -> set[int]:
    out = set()
    for j in f.contacts_of[c]:
        out |= f.contacts[j].members
    out.discard(c)
    return out


def color_regions(f: ContactFamily, k: int | None = None) -> Coloring:
    """Colour a simple k-touching region family.

    For k >= 490 regions with at most k neighbours are peeled off one by one;
    when none is left the four-region configuration is removed instead.
    Colouring back in reverse order never needs more than k+1 colours.
    Below the threshold this falls back to smallest-last greedy.
    """
    if f.kind is not Kind.REGIONS:
        raise ValueError("color_regions needs a region family")
    rep = validate_family(f, check_simple=True)
    if not rep.ok:
        raise ValueError("invalid family: " + rep.violations[0].message)
    k = f.declared_k if k is None else k
    if rep.k_effective > k:
        raise ValueError(f"family is not {k}-touching")
    nbrs = {c: _neighbors(f, c) for c in range(f.n)}
    if k < CONSTANTS.k_threshold:
        return greedy_coloring(nbrs)

    alive = set(range(f.n))
    deg = {c: len(nbrs[c]) for c in alive}
    low = [c for c in range(f.n) if deg[c] <= k]
    heapq.heapify(low)
    steps: list[LowDegreeDisk | BadQuad] = []

    def remove(c):
        alive.discard(c)
        for x in nbrs[c]:
            if x in alive:
                deg[x] -= 1
                if deg[x] == k:
                    heapq.heappush(low, x)

    while alive:
        while low and low[0] not in alive:
            heapq.heappop(low)
        if low:
            c = heapq.heappop(low)
            steps.append(LowDegreeDisk(c, deg[c]))
            remove(c)
            continue
        sub, old = restrict(f, alive)
        red = find_reducible(sub, k, check=False)
        if not isinstance(red, BadQuad):
            raise GuaranteeViolated("peeling stalled although a low-degree region exists")
        quad = BadQuad(*(old[x] for x in red.disks), anchor=-1)
        steps.append(quad)
        for c in quad.disks:
            remove(c)

    palette = range(k + 1)
    col: dict[int, int] = {}
    for step in reversed(steps):
        if isinstance(step, LowDegreeDisk):
            used = {col[x] for x in nbrs[step.disk] if x in col}
            free = next((x for x in palette if x not in used), None)
            if free is None:
                raise GuaranteeViolated(f"no free colour for region {f.names[step.disk]!r}")
            col[step.disk] = free
        else:
            lists = []
            for c in step.disks:
                used = {col[x] for x in nbrs[c] if x in col}
                lists.append([x for x in palette if x not in used])
            for c, lst, need in zip(step.disks, lists, QUAD_LIST_SIZES):
                if len(lst) < need:
                    raise GuaranteeViolated(
                        f"region {f.names[c]!r} has {len(lst)} free colours, expected {need}")
            for c, x in zip(step.disks, extend_k4_minus_edge(lists)):
                col[c] = x
    return Coloring.of(col)


def color_family(f: ContactFamily, mode: str = "kplus1") -> Coloring:
    """Colour any family: ``kplus1`` uses color_regions when it applies, else greedy."""
    if mode not in ("kplus1", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "kplus1" and f.kind is Kind.REGIONS and validate_family(f, check_simple=True).ok:
        return color_regions(f)
    return greedy_coloring({c: _neighbors(f, c) for c in range(f.n)})
