"""Combinatorial model of touching families of Jordan regions and curves.

A family is stored as a laminar containment forest over the curves plus a
list of contact points, each naming the curves passing through it.  No
coordinates are kept; every quantity of interest (intersections, distances,
crossing pairs) is a function of this data.
"""

from __future__ import annotations

import enum
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

Graph = dict[int, set[int]]

# 1 / (1 + 1/(16e)), rounded to six decimals
AVG_DISTANCE_RATIO = 0.977524


class Kind(str, enum.Enum):
    REGIONS = "regions"
    CURVES = "curves"


class FamilyFormatError(ValueError):
    """Raised when an instance file or dict does not follow the schema."""


class InvalidFamilyError(ValueError):
    """Raised when an operation requires a valid family and gets a bad one."""


@dataclass(frozen=True)
class ContactPoint:
    id: str
    members: frozenset[int]
    order: tuple[int, ...] | None = None

    def rotation(self) -> tuple[int, ...] | None:
        """Cyclic order of the members around the point, if known.

        Two-member points have a single possible rotation, so it is filled in
        when absent.
        """
        if self.order is not None:
            return self.order
        if len(self.members) <= 2:
            return tuple(sorted(self.members))
        return None


@dataclass(frozen=True)
class ContactFamily:
    kind: Kind
    names: tuple[str, ...]
    parent: tuple[int | None, ...]
    contacts: tuple[ContactPoint, ...]
    declared_k: int
    boundary_order: tuple[tuple[int, ...], ...] | None = None

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def contacts_of(self) -> tuple[tuple[int, ...], ...]:
        """Indices of the contact points lying on each curve."""
        acc: list[list[int]] = [[] for _ in range(self.n)]
        for j, p in enumerate(self.contacts):
            for c in p.members:
                acc[c].append(j)
        return tuple(tuple(x) for x in acc)

    @cached_property
    def ancestors(self) -> tuple[frozenset[int], ...]:
        """Proper ancestors of each curve in the containment forest.

        Raises InvalidFamilyError on a cyclic parent map.
        """
        out: list[frozenset[int] | None] = [None] * self.n
        for start in range(self.n):
            chain = []
            seen = set()
            c = start
            while c is not None and out[c] is None:
                if c in seen:
                    raise InvalidFamilyError(f"containment cycle through {self.names[c]!r}")
                seen.add(c)
                chain.append(c)
                c = self.parent[c]
            above = frozenset() if c is None else out[c] | {c}
            for x in reversed(chain):
                out[x] = above
                above = above | {x}
        return tuple(out)  # type: ignore[arg-type]

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in range(self.n)]
        for c, p in enumerate(self.parent):
            if p is not None:
                acc[p].append(c)
        return tuple(tuple(x) for x in acc)

    def curve(self, name_or_index: str | int) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.n:
                raise KeyError(f"unknown curve index {name_or_index}")
            return name_or_index
        try:
            return self.index[name_or_index]
        except KeyError:
            raise KeyError(f"unknown curve {name_or_index!r}") from None


# --------------------------------------------------------------------------
# serialization

_TOP_KEYS = {"kind", "k", "curves", "parent", "contacts", "boundary_order"}
_CONTACT_KEYS = {"id", "members", "order"}


def family_from_dict(data: Mapping) -> ContactFamily:
    if not isinstance(data, Mapping):
        raise FamilyFormatError("instance must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise FamilyFormatError(f"unknown keys: {sorted(unknown)}")
    for key in ("kind", "k", "curves", "contacts"):
        if key not in data:
            raise FamilyFormatError(f"missing key {key!r}")
    try:
        kind = Kind(data["kind"])
    except ValueError:
        raise FamilyFormatError(f"bad kind {data['kind']!r}") from None
    k = data["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise FamilyFormatError("k must be a positive integer")
    names = data["curves"]
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise FamilyFormatError("curves must be an array of strings")
    if len(set(names)) != len(names):
        raise FamilyFormatError("duplicate curve ids")
    index = {name: i for i, name in enumerate(names)}

    def lookup(name, where):
        if name not in index:
            raise FamilyFormatError(f"unknown curve {name!r} in {where}")
        return index[name]

    parent: list[int | None] = [None] * len(names)
    raw_parent = data.get("parent", {})
    if not isinstance(raw_parent, Mapping):
        raise FamilyFormatError("parent must be an object")
    for child, par in raw_parent.items():
        parent[lookup(child, "parent")] = lookup(par, "parent")

    contacts = []
    seen_ids = set()
    if not isinstance(data["contacts"], list):
        raise FamilyFormatError("contacts must be an array")
    for raw in data["contacts"]:
        if not isinstance(raw, Mapping):
            raise FamilyFormatError("contact must be an object")
        extra = set(raw) - _CONTACT_KEYS
        if extra:
            raise FamilyFormatError(f"unknown contact keys: {sorted(extra)}")
        if "id" not in raw or "members" not in raw:
            raise FamilyFormatError("contact needs id and members")
        cid = raw["id"]
        if not isinstance(cid, str) or cid in seen_ids:
            raise FamilyFormatError(f"bad or duplicate contact id {cid!r}")
        seen_ids.add(cid)
        if not isinstance(raw["members"], list):
            raise FamilyFormatError(f"members of {cid!r} must be an array")
        members = [lookup(m, cid) for m in raw["members"]]
        if len(set(members)) != len(members):
            raise FamilyFormatError(f"repeated member in contact {cid!r}")
        order = None
        if raw.get("order") is not None:
            order = tuple(lookup(m, cid) for m in raw["order"])
        contacts.append(ContactPoint(cid, frozenset(members), order))

    boundary = None
    if "boundary_order" in data:
        raw_b = data["boundary_order"]
        if not isinstance(raw_b, Mapping):
            raise FamilyFormatError("boundary_order must be an object")
        cindex = {p.id: j for j, p in enumerate(contacts)}
        acc: list[tuple[int, ...]] = [()] * len(names)
        for name, seq in raw_b.items():
            c = lookup(name, "boundary_order")
            try:
                acc[c] = tuple(cindex[x] for x in seq)
            except KeyError as exc:
                raise FamilyFormatError(f"unknown contact {exc.args[0]!r} in boundary_order") from None
        boundary = tuple(acc)

    return ContactFamily(kind, tuple(names), tuple(parent), tuple(contacts), k, boundary)


def family_to_dict(f: ContactFamily) -> dict:
    names = f.names
    out: dict = {
        "kind": f.kind.value,
        "k": f.declared_k,
        "curves": list(names),
        "parent": {names[c]: names[p] for c, p in enumerate(f.parent) if p is not None},
        "contacts": [],
    }
    for p in f.contacts:
        entry: dict = {"id": p.id, "members": [names[c] for c in sorted(p.members)]}
        if p.order is not None:
            entry["order"] = [names[c] for c in p.order]
        out["contacts"].append(entry)
    if f.boundary_order is not None:
        out["boundary_order"] = {
            names[c]: [f.contacts[j].id for j in seq] for c, seq in enumerate(f.boundary_order)
        }
    return out


def load_family(path: str | Path) -> ContactFamily:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FamilyFormatError(f"not valid JSON: {exc}") from None
    return family_from_dict(data)


def dump_family(f: ContactFamily, path: str | Path | None = None) -> str:
    text = json.dumps(family_to_dict(f), indent=1, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# --------------------------------------------------------------------------
# validation


@dataclass
class Violation:
    code: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    simple: bool = True
    k_effective: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def to_dict(self) -> dict:
        return {
            "valid": self.ok,
            "simple": self.simple,
            "k_effective": self.k_effective,
            "violations": [{"code": v.code, "message": v.message} for v in self.violations],
        }


def _has_cycle(parent: Sequence[int | None]) -> int | None:
    state = [0] * len(parent)  # 0 new, 1 on stack, 2 done
    for start in range(len(parent)):
        path = []
        c: int | None = start
        while c is not None and state[c] == 0:
            state[c] = 1
            path.append(c)
            c = parent[c]
        if c is not None and state[c] == 1:
            return c
        for x in path:
            state[x] = 2
    return None


def validate_family(f: ContactFamily, check_simple: bool = False) -> ValidationReport:
    """Check every structural invariant of a family.

    Never raises on bad data; each problem becomes an entry in the report.
    Pairs of curves sharing two or more contact points are always recorded
    in ``report.simple``; they count as violations only with ``check_simple``.
    """
    rep = ValidationReport()
    names = f.names
    rep.k_effective = max((len(p.members) for p in f.contacts), default=0)

    for p in f.contacts:
        if len(p.members) < 2:
            rep.add("multiplicity_low", f"point multiplicity < 2 at contact {p.id!r}")
        if len(p.members) > f.declared_k:
            rep.add("multiplicity_high",
                    f"contact {p.id!r} lies on {len(p.members)} > k={f.declared_k} curves")
        if p.order is not None and (len(p.order) != len(p.members) or set(p.order) != p.members):
            rep.add("bad_order", f"order of contact {p.id!r} is not a permutation of its members")

    cyc = _has_cycle(f.parent)
    if cyc is not None:
        rep.add("forest_cycle", f"containment cycle through {names[cyc]!r}")
    if f.kind is Kind.REGIONS and any(p is not None for p in f.parent):
        rep.add("regions_nested", "regions family has nested elements")

    if cyc is None:
        anc = f.ancestors
        for p in f.contacts:
            missing = set()
            for a, b in combinations(sorted(p.members), 2):
                missing |= (anc[a] ^ anc[b]) - p.members - {a, b}
            if missing:
                shown = ", ".join(sorted(names[c] for c in missing))
                rep.add("separation_closure",
                        f"contact {p.id!r} misses separating curves: {shown}")

    if f.kind is Kind.REGIONS:
        for p in f.contacts:
            if p.rotation() is None:
                rep.add("missing_rotation", f"contact {p.id!r} has no cyclic order")
        if f.boundary_order is None:
            rep.add("missing_boundary_order", "regions family needs boundary_order")
        else:
            for c in range(f.n):
                seq = f.boundary_order[c]
                expected = set(f.contacts_of[c])
                if len(seq) != len(set(seq)) or set(seq) != expected:
                    rep.add("boundary_order",
                            f"boundary order of {names[c]!r} does not list its contacts exactly once")

    shared: dict[tuple[int, int], int] = defaultdict(int)
    for p in f.contacts:
        for pair in combinations(sorted(p.members), 2):
            shared[pair] += 1
    repeated = sorted(pair for pair, cnt in shared.items() if cnt >= 2)
    rep.simple = not repeated
    if check_simple and repeated:
        a, b = repeated[0]
        rep.add("simplicity", f"simplicity violated: {names[a]!r} and {names[b]!r} "
                f"share several points ({len(repeated)} such pairs)")
    return rep


def require_valid(f: ContactFamily, check_simple: bool = False) -> None:
    rep = validate_family(f, check_simple)
    if not rep.ok:
        raise InvalidFamilyError("; ".join(v.message for v in rep.violations[:5]))


# --------------------------------------------------------------------------
# intersection structure


def intersecting_pairs(f: ContactFamily) -> list[tuple[int, int]]:
    """Sorted list of intersecting pairs (a, b) with a < b, each once."""
    pairs = set()
    for p in f.contacts:
        pairs.update(combinations(sorted(p.members), 2))
    return sorted(pairs)


def intersection_graph(f: ContactFamily, check: bool = True) -> Graph:
    if check:
        require_valid(f)
    g: Graph = {c: set() for c in range(f.n)}
    for p in f.contacts:
        for a, b in combinations(p.members, 2):
            g[a].add(b)
            g[b].add(a)
    return g


def witness_points(f: ContactFamily) -> dict[tuple[int, int], int]:
    """Lowest-index contact point shared by each intersecting pair."""
    out: dict[tuple[int, int], int] = {}
    for j, p in enumerate(f.contacts):
        for pair in combinations(sorted(p.members), 2):
            out.setdefault(pair, j)
    return out


def distance(f: ContactFamily, a: str | int, b: str | int) -> int:
    """Number of curves other than a, b whose region contains exactly one of them."""
    a, b = f.curve(a), f.curve(b)
    if a == b:
        raise ValueError("distance needs two distinct curves")
    anc = f.ancestors
    return len((anc[a] ^ anc[b]) - {a, b})


def separating_set(f: ContactFamily, a: int, b: int) -> frozenset[int]:
    anc = f.ancestors
    return frozenset((anc[a] ^ anc[b]) - {a, b})


def distance_sum(f: ContactFamily) -> tuple[int, int]:
    """(sum of distances over intersecting pairs, number of such pairs)."""
    pairs = intersecting_pairs(f)
    anc = f.ancestors
    total = sum(len((anc[a] ^ anc[b]) - {a, b}) for a, b in pairs)
    return total, len(pairs)


def average_distance(f: ContactFamily) -> Fraction:
    total, m = distance_sum(f)
    if m == 0:
        raise ValueError("average distance undefined: no intersecting pairs")
    return Fraction(total, m)


def count_c_crossing_pairs(f: ContactFamily, c: str | int, within_neighbors: bool = False) -> int:
    """Intersecting pairs with exactly one member strictly inside ``c``.

    With ``within_neighbors`` only pairs whose members both meet ``c`` are
    counted, which is the subfamily the crossing-pair bound speaks about.
    """
    c = f.curve(c)
    anc = f.ancestors
    if within_neighbors:
        nbrs = set()
        for j in f.contacts_of[c]:
            nbrs |= f.contacts[j].members
        nbrs.discard(c)
    count = 0
    for a, b in intersecting_pairs(f):
        if c in (a, b):
            continue
        if (c in anc[a]) != (c in anc[b]):
            if within_neighbors and not (a in nbrs and b in nbrs):
                continue
            count += 1
    return count


def crossing_bound(k: int, n: int) -> float:
    """Upper bound 2ekn on the number of c-crossing pairs."""
    return 2 * math.e * k * n


# --------------------------------------------------------------------------
# transforms


def replicate(f: ContactFamily, ell: int) -> ContactFamily:
    """Replace every curve by ``ell`` concentric copies.

    Copy ``i`` of curve ``c`` gets index ``c * ell + i`` and name
    ``"<name>#<i>"``; copy 0 is outermost.  A point on ``c`` lies on all its
    copies.  Curves on no contact point get one extra point through all
    their copies so that concentric copies always touch.
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if f.kind is not Kind.CURVES:
        raise ValueError("replicate is defined for curve families")
    if ell == 1:
        return f
    names = tuple(f"{name}#{i}" for name in f.names for i in range(ell))
    parent: list[int | None] = []
    for c in range(f.n):
        p = f.parent[c]
        parent.append(None if p is None else p * ell + ell - 1)
        parent.extend(c * ell + i - 1 for i in range(1, ell))

    def lift(members: Iterable[int]) -> frozenset[int]:
        return frozenset(c * ell + i for c in members for i in range(ell))

    contacts = [ContactPoint(p.id, lift(p.members)) for p in f.contacts]
    taken = {p.id for p in f.contacts}
    for c in range(f.n):
        if not f.contacts_of[c]:
            cid = f"copies:{f.names[c]}"
            while cid in taken:
                cid += "'"
            taken.add(cid)
            contacts.append(ContactPoint(cid, lift([c])))
    return ContactFamily(Kind.CURVES, names, tuple(parent), tuple(contacts), f.declared_k * ell)


def restrict(f: ContactFamily, keep: Iterable[int]) -> tuple[ContactFamily, list[int]]:
    """Subfamily on the curves in ``keep``; returns it with the new->old index map.

    Points left with fewer than two curves stop being contact points.  Cyclic
    orders are restricted, not re-derived, so a plane embedding stays plane.
    """
    old = sorted(set(keep))
    new_of = {c: i for i, c in enumerate(old)}
    contacts = []
    cnew: dict[int, int] = {}
    for j, p in enumerate(f.contacts):
        members = frozenset(new_of[c] for c in p.members if c in new_of)
        if len(members) < 2:
            continue
        order = None
        if p.order is not None:
            order = tuple(new_of[c] for c in p.order if c in new_of)
        cnew[j] = len(contacts)
        contacts.append(ContactPoint(p.id, members, order))
    parent = []
    for c in old:
        p = f.parent[c]
        while p is not None and p not in new_of:
            p = f.parent[p]
        parent.append(None if p is None else new_of[p])
    boundary = None
    if f.boundary_order is not None:
        boundary = tuple(tuple(cnew[j] for j in f.boundary_order[c] if j in cnew) for c in old)
    sub = ContactFamily(f.kind, tuple(f.names[c] for c in old), tuple(parent),
                        tuple(contacts), f.declared_k, boundary)
    return sub, old


def disjoint_union(*families: ContactFamily) -> ContactFamily:
    """Side-by-side union; names and contact ids get a ``g<i>:`` prefix."""
    if not families:
        raise ValueError("need at least one family")
    kinds = {f.kind for f in families}
    if len(kinds) != 1:
        raise ValueError("cannot mix regions and curves")
    names: list[str] = []
    parent: list[int | None] = []
    contacts: list[ContactPoint] = []
    boundary: list[tuple[int, ...]] | None = [] if all(f.boundary_order is not None for f in families) else None
    for i, f in enumerate(families):
        off, coff = len(names), len(contacts)
        names.extend(f"g{i}:{x}" for x in f.names)
        parent.extend(None if p is None else p + off for p in f.parent)
        for p in f.contacts:
            order = None if p.order is None else tuple(c + off for c in p.order)
            contacts.append(ContactPoint(f"g{i}:{p.id}", frozenset(c + off for c in p.members), order))
        if boundary is not None:
            boundary.extend(tuple(j + coff for j in seq) for seq in f.boundary_order)
    return ContactFamily(kinds.pop(), tuple(names), tuple(parent), tuple(contacts),
                         max(f.declared_k for f in families),
                         None if boundary is None else tuple(boundary))


# --------------------------------------------------------------------------
# statistics


@dataclass
class FamilyStats:
    kind: str
    n: int
    m: int | None
    k_effective: int | None
    simple: bool
    alpha: Fraction | None
    avg_distance: Fraction | None
    max_distance: int | None

    def to_dict(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else x
        return {key: enc(val) for key, val in self.__dict__.items()}


def family_stats(f: ContactFamily) -> FamilyStats:
    require_valid(f)
    simple = validate_family(f).simple
    pairs = intersecting_pairs(f)
    if not pairs:
        return FamilyStats(f.kind.value, f.n, None if f.n == 0 else 0, None, simple, None, None, None)
    anc = f.ancestors
    dists = [len((anc[a] ^ anc[b]) - {a, b}) for a, b in pairs]
    m = len(pairs)
    k_eff = max(len(p.members) for p in f.contacts)
    total = sum(dists)
    return FamilyStats(
        kind=f.kind.value,
        n=f.n,
        m=m,
        k_effective=k_eff,
        simple=simple,
        alpha=Fraction(total, k_eff * m),
        avg_distance=Fraction(total, m),
        max_distance=max(dists),
    )
