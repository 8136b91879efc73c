"""Charges, the seven redistribution rules, and reducible configurations.

Every vertex starts with ``2*deg - 6`` and every face with ``deg - 6``; on a
connected plane graph the total is -12.  The rules read only the original
graph (degrees, face degrees, badness), so they are applied in one pass and
their order does not matter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import ContactFamily, Kind, validate_family
from .region_graph import (
    BIG_DEGREE,
    StructureReport,
    FaceSet,
    PlaneBipartiteGraph,
    build_contact_graph,
    components,
    structure_report,
    trace_faces,
)

Site = tuple[str, int]  # ("v", vertex) or ("f", face)


@dataclass(frozen=True)
class DischargeConstants:
    epsilon: Fraction = Fraction(1, 4)
    b: int = BIG_DEGREE
    k_threshold: int = 490

    def __post_init__(self):
        if self.b != 18 / self.epsilon or self.k_threshold != 7 * self.b - 14:
            raise ValueError("inconsistent discharging constants")


CONSTANTS = DischargeConstants()
EPS = CONSTANTS.epsilon


class GuaranteeViolated(RuntimeError):
    """A configuration the proof says must exist was not found."""


@dataclass(frozen=True)
class Transfer:
    rule: str
    source: Site
    sink: Site
    amount: Fraction


@dataclass
class ChargeState:
    vertex_charge: dict[int, Fraction]
    face_charge: dict[int, Fraction]
    transfer_log: list[Transfer] = field(default_factory=list)

    def total(self) -> Fraction:
        return sum(self.vertex_charge.values(), Fraction(0)) + sum(self.face_charge.values(), Fraction(0))

    def charge(self, site: Site) -> Fraction:
        kind, i = site
        return self.vertex_charge[i] if kind == "v" else self.face_charge[i]

    def negative_sites(self) -> list[Site]:
        out: list[Site] = [("v", v) for v, c in sorted(self.vertex_charge.items()) if c < 0]
        out += [("f", f) for f, c in sorted(self.face_charge.items()) if c < 0]
        return out


def _require_connected(g: PlaneBipartiteGraph) -> None:
    if len(components(g.rotation)) > 1:
        raise ValueError("charge totals need a connected graph")


def initial_charges(g: PlaneBipartiteGraph, faces: FaceSet) -> ChargeState:
    _require_connected(g)
    vc = {v: Fraction(2 * g.degree(v) - 6) for v in range(len(g))}
    fc = {i: Fraction(d - 6) for i, d in enumerate(faces.degrees)}
    return ChargeState(vc, fc)


def classify_bad_vertices(g: PlaneBipartiteGraph, faces: FaceSet) -> set[int]:
    """Disk 3-vertices with two contact 2-neighbours whose neighbours all have
    degree 3, and whose three incident faces are hexagons."""
    deg = [g.degree(v) for v in range(len(g))]
    fdeg = faces.degrees
    bad = set()
    for v in range(len(g)):
        if not g.is_disk(v) or deg[v] != 3:
            continue
        if any(fdeg[f] != 6 for f in faces.faces_at(v, g.rotation)):
            continue
        legs = [u for u in g.rotation[v]
                if not g.is_disk(u) and deg[u] == 2 and all(deg[x] == 3 for x in g.rotation[u])]
        if len(legs) >= 2:
            bad.add(v)
    return bad


def apply_rules(g: PlaneBipartiteGraph, faces: FaceSet, charges: ChargeState,
                consts: DischargeConstants = CONSTANTS) -> ChargeState:
    eps, big = consts.epsilon, consts.b
    deg = [g.degree(v) for v in range(len(g))]
    rot = g.rotation
    bad = classify_bad_vertices(g, faces)
    log: list[Transfer] = []

    def give(rule, src: Site, dst: Site, amount):
        log.append(Transfer(rule, src, dst, Fraction(amount)))

    def nbig(u):
        return sum(1 for x in rot[u] if deg[x] >= big)

    for v in range(len(g)):
        if g.is_disk(v):
            continue
        d = deg[v]
        if d >= big:
            for i in range(d):
                u1, u2, u3 = rot[v][i - 1], rot[v][i], rot[v][(i + 1) % d]
                if nbig(u2) == 1:
                    give("R1", ("v", v), ("v", u2), 2 - eps)
                else:
                    give("R1", ("v", v), ("v", u2), 1)
                    give("R1", ("v", v), ("v", u1), (1 - eps) / 2)
                    give("R1", ("v", v), ("v", u3), (1 - eps) / 2)
            for u in rot[v]:
                if u in bad:
                    give("R2", ("v", v), ("v", u), eps)
        elif d >= 4:
            for u in rot[v]:
                give("R3", ("v", v), ("v", u), Fraction(1, 2))
        elif d == 3 and any(deg[u] >= 3 for u in rot[v]):
            for u in rot[v]:
                if deg[u] == 2:
                    give("R4", ("v", v), ("v", u), eps)

    for v in range(len(g)):
        if not g.is_disk(v):
            continue
        if deg[v] >= 4:
            for u in rot[v]:
                if deg[u] <= 3:
                    give("R5", ("v", v), ("v", u), 1 + eps)
        elif deg[v] == 3:
            for u in rot[v]:
                if deg[u] > 3:
                    continue
                if deg[u] == 3:
                    give("R6", ("v", v), ("v", u), 1 - eps)
                elif deg[u] == 2 and deg[next(x for x in rot[u] if x != v)] >= 4:
                    give("R6", ("v", v), ("v", u), 1 - eps)
                else:
                    give("R6", ("v", v), ("v", u), 1)

    for fid, walk in enumerate(faces.walks):
        if len(walk) >= 8:
            for u in sorted({x for x in walk if g.is_disk(x)}):
                give("R7", ("f", fid), ("v", u), Fraction(1, 2))

    vc = dict(charges.vertex_charge)
    fc = dict(charges.face_charge)
    for t in log:
        for site, sign in ((t.source, -1), (t.sink, 1)):
            table = vc if site[0] == "v" else fc
            table[site[1]] += sign * t.amount
    log.sort(key=lambda t: (t.rule, t.source, t.sink))
    return ChargeState(vc, fc, charges.transfer_log + log)


def bad_triples(g: PlaneBipartiteGraph, faces: FaceSet, bad: set[int] | None = None,
                big: int = BIG_DEGREE) -> list[tuple[int, tuple[int, int, int]]]:
    """Big contact vertices with three consecutive bad neighbours."""
    bad = classify_bad_vertices(g, faces) if bad is None else bad
    out = []
    for v in range(len(g)):
        if g.is_disk(v) or g.degree(v) < big:
            continue
        r = g.rotation[v]
        d = len(r)
        for i in range(d):
            trio = (r[i], r[(i + 1) % d], r[(i + 2) % d])
            if all(x in bad for x in trio):
                out.append((v, trio))
    return out


@dataclass
class DischargeReport:
    initial_total: Fraction
    final_total: Fraction
    negative_sites: list[Site]
    structure: StructureReport
    bad_triples: list[tuple[int, tuple[int, int, int]]]
    state: ChargeState
    initial: ChargeState

    @property
    def consistent(self) -> bool:
        """Totals are -12, and negative charge only appears when a reduction exists."""
        if self.initial_total != -12 or self.final_total != -12:
            return False
        if not self.negative_sites:
            return True
        return not self.structure.all_hold or bool(self.bad_triples)

    def to_dict(self, g: PlaneBipartiteGraph | None = None) -> dict:
        def lab(site):
            kind, i = site
            if kind == "v" and g is not None:
                return g.labels[i]
            return f"{kind}{i}"
        return {
            "initial_total": str(self.initial_total),
            "final_total": str(self.final_total),
            "negative_sites": [lab(s) for s in self.negative_sites],
            "structure": self.structure.to_dict(g),
            "bad_triples": len(self.bad_triples),
            "consistent": self.consistent,
        }


def verify_discharging(g: PlaneBipartiteGraph, k: int | None = None,
                       faces: FaceSet | None = None) -> DischargeReport:
    _require_connected(g)
    faces = trace_faces(g) if faces is None else faces
    if k is None:
        k = max((g.degree(v) for v in range(len(g)) if not g.is_disk(v)), default=2)
    init = initial_charges(g, faces)
    final = apply_rules(g, faces, init)
    return DischargeReport(
        initial_total=init.total(),
        final_total=final.total(),
        negative_sites=final.negative_sites(),
        structure=structure_report(g, k, faces),
        bad_triples=bad_triples(g, faces),
        state=final,
        initial=init,
    )


# --------------------------------------------------------------------------
# reducible configurations


@dataclass(frozen=True)
class LowDegreeDisk:
    disk: int
    loose_count: int


@dataclass(frozen=True)
class BadQuad:
    """Four regions whose removal leaves a colouring that always extends.

    ``u`` and ``w`` are consecutive bad neighbours of the big contact point
    ``anchor``; ``u2p`` is the region both of them touch through 2-points
    and ``w2p`` the other such region of ``w``.  In the intersection graph
    the four form K4 minus the edge ``u``-``w2p``.
    """

    u: int
    w: int
    u2p: int
    w2p: int
    anchor: int

    @property
    def disks(self) -> tuple[int, int, int, int]:
        return (self.u, self.w, self.u2p, self.w2p)


Reducible = LowDegreeDisk | BadQuad


def _loose_upper(f: ContactFamily, c: int) -> int:
    return sum(len(f.contacts[j].members) - 1 for j in f.contacts_of[c])


def _loose_exact(f: ContactFamily, c: int) -> int:
    out = set()
    for j in f.contacts_of[c]:
        out |= f.contacts[j].members
    return len(out) - 1 if out else 0


def _derive_quad(g: PlaneBipartiteGraph, u: int, w: int, v: int) -> BadQuad | None:
    deg = g.degree

    def far_ends(x):
        ends = []
        for p in g.rotation[x]:
            if p != v and deg(p) == 2:
                ends.append(next(y for y in g.rotation[p] if y != x))
        return ends

    fu, fw = far_ends(u), far_ends(w)
    shared = set(fu) & set(fw)
    if len(shared) != 1 or len(fw) != 2:
        return None
    s = shared.pop()
    w2 = next(x for x in fw if x != s)
    quad = (u, w, s, w2)
    if len(set(quad)) != 4:
        return None

    def meets(a, b):
        return any(b in g.rotation[p] for p in g.rotation[a])

    if not all(meets(a, b) for a, b in ((u, w), (u, s), (w, s), (w, w2), (s, w2))):
        return None
    if meets(u, w2):
        return None
    return BadQuad(u, w, s, w2, v - g.n_disks)


def find_bad_quad(g: PlaneBipartiteGraph, faces: FaceSet | None = None) -> BadQuad | None:
    faces = trace_faces(g) if faces is None else faces
    for v, (x0, x1, x2) in bad_triples(g, faces):
        for u, w in ((x0, x1), (x1, x0), (x1, x2), (x2, x1)):
            quad = _derive_quad(g, u, w, v)
            if quad is not None:
                return quad
    return None


def find_reducible(f: ContactFamily, k: int, check: bool = True) -> Reducible:
    """Locate a region with at most k neighbours, or else the four-region configuration.

    Preconditions: a simple k-touching region family with k >= 490.  If
    neither configuration exists the proof is contradicted and
    GuaranteeViolated is raised.
    """
    if f.kind is not Kind.REGIONS:
        raise ValueError("find_reducible needs a region family")
    if k < CONSTANTS.k_threshold:
        raise ValueError(f"find_reducible needs k >= {CONSTANTS.k_threshold}")
    if check:
        rep = validate_family(f, check_simple=True)
        if not rep.ok:
            raise ValueError("invalid family: " + rep.violations[0].message)
        if rep.k_effective > k:
            raise ValueError(f"family is not {k}-touching")
    for c in range(f.n):
        if _loose_upper(f, c) <= k:
            return LowDegreeDisk(c, _loose_exact(f, c))
    quad = find_bad_quad(build_contact_graph(f))
    if quad is None:
        raise GuaranteeViolated("no region with at most k neighbours and no reducible quadruple")
    return quad
