"""The plane bipartite contact graph of a region family.

Vertices ``0..n-1`` are disk vertices (one per region) and ``n..n+p-1`` are
contact vertices (one per contact point).  The embedding is a rotation
system: ``rotation[v]`` lists the neighbours of ``v`` in counterclockwise
order.  Faces are traced by arriving at ``v`` along ``uv`` and leaving
along the neighbour that follows ``u`` in the rotation at ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .model import ContactFamily, Kind, validate_family

DISK = "disk"
CONTACT = "contact"

BIG_DEGREE = 72


@dataclass(frozen=True)
class PlaneBipartiteGraph:
    kinds: tuple[str, ...]
    labels: tuple[str, ...]
    rotation: tuple[tuple[int, ...], ...]
    n_disks: int = 0

    def __len__(self) -> int:
        return len(self.kinds)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def is_disk(self, v: int) -> bool:
        return self.kinds[v] == DISK

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, rot in enumerate(self.rotation) for v in rot if u < v]

    def check(self) -> list[str]:
        """Structural problems: non-bipartite edges, parallel edges, asymmetric rotations."""
        problems = []
        for u, rot in enumerate(self.rotation):
            if len(set(rot)) != len(rot):
                problems.append(f"parallel edges at {self.labels[u]}")
            for v in rot:
                if self.kinds[u] == self.kinds[v]:
                    problems.append(f"edge {self.labels[u]}-{self.labels[v]} joins two {self.kinds[u]} vertices")
                if u not in self.rotation[v]:
                    problems.append(f"edge {self.labels[u]}-{self.labels[v]} missing at one end")
        return problems


@dataclass
class FaceSet:
    """Faces as closed walks; ``walks[i]`` lists the tail of each dart in order.

    An isolated vertex forms its own face of degree 0 with an empty walk;
    ``owner`` records a vertex of the component each face belongs to.
    """

    walks: list[tuple[int, ...]]
    owner: list[int]
    dart_face: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def degrees(self) -> list[int]:
        return [len(w) for w in self.walks]

    def __len__(self) -> int:
        return len(self.walks)

    def faces_at(self, v: int, rotation: Sequence[Sequence[int]]) -> list[int]:
        """Face of every corner at ``v``, one entry per outgoing dart."""
        return [self.dart_face[(v, u)] for u in rotation[v]]


def build_contact_graph(f: ContactFamily) -> PlaneBipartiteGraph:
    if f.kind is not Kind.REGIONS:
        raise ValueError("contact graph is defined for region families")
    if f.boundary_order is None:
        raise ValueError("missing rotation data: boundary_order")
    n = f.n
    kinds = [DISK] * n + [CONTACT] * len(f.contacts)
    labels = list(f.names) + [p.id for p in f.contacts]
    rotation: list[tuple[int, ...]] = []
    for c in range(n):
        rotation.append(tuple(n + j for j in f.boundary_order[c]))
    for j, p in enumerate(f.contacts):
        rot = p.rotation()
        if rot is None:
            raise ValueError(f"missing rotation data at contact {p.id!r}")
        rotation.append(tuple(rot))
    g = PlaneBipartiteGraph(tuple(kinds), tuple(labels), tuple(rotation), n)
    problems = g.check()
    if problems:
        raise ValueError("; ".join(problems[:5]))
    return g


def trace_rotation_faces(rotation: Sequence[Sequence[int]]) -> FaceSet:
    """Face tracing for any rotation system over a simple graph."""
    pos = [{u: i for i, u in enumerate(rot)} for rot in rotation]
    walks: list[tuple[int, ...]] = []
    owner: list[int] = []
    dart_face: dict[tuple[int, int], int] = {}
    for u in range(len(rotation)):
        if not rotation[u]:
            walks.append(())
            owner.append(u)
            continue
        for v in rotation[u]:
            if (u, v) in dart_face:
                continue
            fid = len(walks)
            walk = []
            a, b = u, v
            while (a, b) not in dart_face:
                dart_face[(a, b)] = fid
                walk.append(a)
                rot_b = rotation[b]
                a, b = b, rot_b[(pos[b][a] + 1) % len(rot_b)]
            walks.append(tuple(walk))
            owner.append(u)
    return FaceSet(walks, owner, dart_face)


def trace_faces(g: PlaneBipartiteGraph) -> FaceSet:
    return trace_rotation_faces(g.rotation)


def components(rotation: Sequence[Sequence[int]]) -> list[list[int]]:
    seen = [False] * len(rotation)
    out = []
    for s in range(len(rotation)):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in rotation[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        out.append(sorted(comp))
    return out


def euler_defects(rotation: Sequence[Sequence[int]], faces: FaceSet | None = None) -> list[tuple[int, int]]:
    """Components whose V - E + F differs from 2, as (first vertex, value)."""
    faces = trace_rotation_faces(rotation) if faces is None else faces
    comp_of = {}
    comps = components(rotation)
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    nf = [0] * len(comps)
    for o in faces.owner:
        nf[comp_of[o]] += 1
    bad = []
    for i, comp in enumerate(comps):
        ne = sum(len(rotation[v]) for v in comp) // 2
        chi = len(comp) - ne + nf[i]
        if chi != 2:
            bad.append((comp[0], chi))
    return bad


def subgraph(g: PlaneBipartiteGraph, keep: Sequence[int]) -> tuple[PlaneBipartiteGraph, list[int]]:
    """Induced subgraph on ``keep`` (a union of components); returns new->old map."""
    old = sorted(keep)
    new_of = {v: i for i, v in enumerate(old)}
    rotation = tuple(tuple(new_of[u] for u in g.rotation[v] if u in new_of) for v in old)
    sub = PlaneBipartiteGraph(tuple(g.kinds[v] for v in old), tuple(g.labels[v] for v in old),
                              rotation, sum(1 for v in old if g.kinds[v] == DISK))
    return sub, old


def loose_neighbors(g: PlaneBipartiteGraph, v: int) -> set[int]:
    if not 0 <= v < len(g) or not g.is_disk(v):
        raise ValueError(f"{v} is not a disk vertex")
    out = set()
    for p in g.rotation[v]:
        out.update(g.rotation[p])
    out.discard(v)
    return out


# --------------------------------------------------------------------------
# structural diagnostics


@dataclass
class CheckResult:
    holds: bool
    witness: object = None
    detail: str = ""


@dataclass
class StructureReport:
    checks: dict[str, CheckResult]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks.values())

    def violated(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.holds]

    def to_dict(self, g: PlaneBipartiteGraph | None = None) -> dict:
        def show(w):
            if g is None or w is None:
                return w
            if isinstance(w, int):
                return g.labels[w]
            if isinstance(w, tuple) and all(isinstance(x, int) for x in w):
                return [g.labels[x] for x in w]
            return w
        return {
            name: {"holds": c.holds, "witness": show(c.witness), "detail": c.detail}
            for name, c in self.checks.items()
        }


def structure_report(g: PlaneBipartiteGraph, k: int, faces: FaceSet | None = None,
                     big: int = BIG_DEGREE) -> StructureReport:
    """Evaluate the structural properties a minimal counterexample would have.

    Each failing check carries a witness; on ordinary instances failures are
    expected and each one points at a reduction.
    """
    faces = trace_faces(g) if faces is None else faces
    checks: dict[str, CheckResult] = {}
    deg = [g.degree(v) for v in range(len(g))]

    comps = components(g.rotation)
    checks["connected"] = CheckResult(
        len(comps) <= 1, comps[1][0] if len(comps) > 1 else None,
        f"{len(comps)} components")

    small_face = next((i for i, d in enumerate(faces.degrees) if d < 6), None)
    checks["faces_degree_at_least_6"] = CheckResult(
        small_face is None, None if small_face is None else ("face", small_face),
        "" if small_face is None else f"face {small_face} has degree {faces.degrees[small_face]}")

    few_loose = None
    for v in range(len(g)):
        if g.is_disk(v):
            cnt = len(loose_neighbors(g, v))
            if cnt <= k:
                few_loose = (v, cnt)
                break
    checks["loose_neighbors_exceed_k"] = CheckResult(
        few_loose is None, None if few_loose is None else few_loose[0],
        "" if few_loose is None else f"{few_loose[1]} loose neighbours")

    bad_deg = next((v for v in range(len(g))
                    if deg[v] < 2 or (not g.is_disk(v) and deg[v] > k)), None)
    checks["min_degree_2_contact_degree_at_most_k"] = CheckResult(
        bad_deg is None, bad_deg, "" if bad_deg is None else f"degree {deg[bad_deg]}")

    pair = next(((u, v) for u in range(len(g)) if g.is_disk(u) and deg[u] == 2
                 for v in g.rotation[u] if deg[v] == 2), None)
    checks["no_two_adjacent_2_vertices"] = CheckResult(pair is None, pair)

    lonely = next((v for v in range(len(g)) if g.is_disk(v) and deg[v] <= 7
                   and not any(deg[u] >= big for u in g.rotation[v])), None)
    checks["small_disk_has_big_neighbor"] = CheckResult(lonely is None, lonely)
    return StructureReport(checks)


# --------------------------------------------------------------------------
# text dump


def dump_graph(g: PlaneBipartiteGraph) -> str:
    """One line per vertex: ``<index> <D|C> <label> : <rotation indices>``."""
    lines = []
    for v in range(len(g)):
        tag = "D" if g.is_disk(v) else "C"
        rot = " ".join(str(u) for u in g.rotation[v])
        lines.append(f"{v} {tag} {g.labels[v]} : {rot}".rstrip())
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> PlaneBipartiteGraph:
    kinds, labels, rotation = [], [], []
    for lineno, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if len(parts) != 3 or int(parts[0]) != len(kinds) or parts[1] not in "DC":
            raise ValueError(f"bad graph line {lineno + 1}: {line!r}")
        kinds.append(DISK if parts[1] == "D" else CONTACT)
        labels.append(parts[2])
        rotation.append(tuple(int(x) for x in tail.split()))
    return PlaneBipartiteGraph(tuple(kinds), tuple(labels), tuple(rotation),
                               sum(1 for x in kinds if x == DISK))


def family_is_plane(f: ContactFamily) -> bool:
    """True when the rotation data of a region family is a plane embedding."""
    if not validate_family(f).ok:
        return False
    return not euler_defects(build_contact_graph(f).rotation)
