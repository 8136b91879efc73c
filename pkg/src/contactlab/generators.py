"""Instance generators: the extremal constructions and random corpora."""

from __future__ import annotations

import random

from .model import ContactFamily, ContactPoint, Kind


def gen_point_clique(k: int) -> ContactFamily:
    """k regions meeting at one point plus a wrapper touching each at a private point.

    The intersection graph is complete on k+1 vertices, so chi = omega = k+1
    while the family is simple and k-touching.
    """
    if k < 2:
        raise ValueError("gen_point_clique needs k >= 2")
    names = tuple(f"r{i}" for i in range(k)) + ("w",)
    wrap = k
    contacts = [ContactPoint("center", frozenset(range(k)), tuple(range(k)))]
    for i in range(k):
        contacts.append(ContactPoint(f"p{i}", frozenset((i, wrap)), (i, wrap)))
    boundary = [(0, i + 1) for i in range(k)]
    # reversed so the gaps between consecutive slices close into hexagons
    boundary.append(tuple(range(k, 0, -1)))
    return ContactFamily(Kind.REGIONS, names, (None,) * (k + 1), tuple(contacts), k, tuple(boundary))


def gen_fpb_extremal(n: int, k: int) -> ContactFamily:
    """Near-extremal family for the crossing-pair bound.

    Curve ``c`` holds two chains ``A1 > A2 > ...`` and ``B1 > ...`` of k-2
    nested curves; ``n - 2k + 4`` curves ``o*`` sit outside.  Every outside
    curve touches each chain at one point shared with ``c`` and the whole
    chain.  The family excluding ``c`` has n curves.
    """
    if k < 3:
        raise ValueError("gen_fpb_extremal needs k >= 3")
    if n < 2 * k - 2:
        raise ValueError("gen_fpb_extremal needs n >= 2k - 2")
    depth = k - 2
    outside = n - 2 * depth
    names = ["c"]
    parent: list[int | None] = [None]
    nests = []
    for label in "AB":
        chain = []
        for j in range(depth):
            chain.append(len(names))
            parent.append(chain[-1] - 1 if j else 0)
            names.append(f"{label}{j + 1}")
        nests.append(chain)
    outs = []
    for i in range(outside):
        outs.append(len(names))
        names.append(f"o{i + 1}")
        parent.append(None)
    contacts = []
    for o in outs:
        for label, chain in zip("AB", nests):
            contacts.append(ContactPoint(f"{names[o]}-{label}", frozenset([o, 0, *chain])))
    return ContactFamily(Kind.CURVES, tuple(names), tuple(parent), tuple(contacts), k)


def _closure(members: set[int], anc: list[set[int]]) -> set[int]:
    out = set(members)
    while True:
        extra = set()
        lst = sorted(out)
        for i, a in enumerate(lst):
            for b in lst[i + 1:]:
                extra |= (anc[a] ^ anc[b]) - {a, b}
        if extra <= out:
            return out
        out |= extra


def gen_random_curves(n: int, k: int, seed: int, nest_prob: float = 0.3,
                      points: int | None = None, max_tries: int | None = None) -> ContactFamily:
    """Random laminar family of curves with separation-closed contact points.

    Curve i nests under a uniformly random earlier curve with probability
    ``nest_prob``.  Each point starts from a random pair (sometimes with one
    or two extra curves), is closed under separation, and is kept only if it
    lies on at most k curves.  Deterministic in ``seed``.
    """
    if n < 2 or k < 2:
        raise ValueError("gen_random_curves needs n >= 2 and k >= 2")
    rng = random.Random(seed)
    parent: list[int | None] = [None]
    for i in range(1, n):
        parent.append(rng.randrange(i) if rng.random() < nest_prob else None)
    anc: list[set[int]] = []
    for i in range(n):
        p = parent[i]
        anc.append(set() if p is None else anc[p] | {p})
    target = 2 * n if points is None else points
    tries = 20 * target if max_tries is None else max_tries
    contacts = []
    while len(contacts) < target and tries > 0:
        tries -= 1
        seedset = set(rng.sample(range(n), 2))
        if rng.random() < 0.4:
            seedset.update(rng.sample(range(n), rng.randint(1, min(2, n))))
        members = _closure(seedset, anc)
        if len(members) > k:
            continue
        contacts.append(ContactPoint(f"x{len(contacts)}", frozenset(members)))
    names = tuple(f"c{i}" for i in range(n))
    return ContactFamily(Kind.CURVES, names, tuple(parent), tuple(contacts), k)


def gen_bad_quad_fixture(k: int, ring: int | None = None) -> ContactFamily:
    """Two flowers glued into a ring of hexagons around two big points.

    Regions ``t0..t{r-1}`` all touch point ``v`` and regions ``s0..s{r-1}``
    all touch point ``y``; ``t_i`` touches ``s_{i-1}`` at ``a_i`` and
    ``s_i`` at ``b_i``.  Every face has degree 6 and every ``t_i`` is bad
    for ``v``.  With ``ring == k`` every region meets exactly k+1 others, so
    no region can be removed by the low-degree reduction and the only
    reducible configuration is the four-region one.
    """
    if k < 490:
        raise ValueError("gen_bad_quad_fixture needs k >= 490")
    r = k if ring is None else ring
    if not 3 <= r <= k:
        raise ValueError("ring size must be between 3 and k")
    names = tuple(f"t{i}" for i in range(r)) + tuple(f"s{i}" for i in range(r))
    t = list(range(r))
    s = [r + i for i in range(r)]
    contacts = [
        ContactPoint("v", frozenset(t), tuple(reversed(t))),
        ContactPoint("y", frozenset(s), tuple(s)),
    ]
    a_idx, b_idx = [], []
    for i in range(r):
        a_idx.append(len(contacts))
        contacts.append(ContactPoint(f"a{i}", frozenset((t[i], s[i - 1])), (t[i], s[i - 1])))
        b_idx.append(len(contacts))
        contacts.append(ContactPoint(f"b{i}", frozenset((t[i], s[i])), (t[i], s[i])))
    boundary: list[tuple[int, ...]] = []
    for i in range(r):
        boundary.append((0, b_idx[i], a_idx[i]))
    for i in range(r):
        boundary.append((1, b_idx[i], a_idx[(i + 1) % r]))
    return ContactFamily(Kind.REGIONS, names, (None,) * (2 * r), tuple(contacts), k, tuple(boundary))


def gen_plane_contact(n: int, seed: int, k: int = 2) -> ContactFamily:
    """Contact family of a random stacked triangulation on n vertices.

    Each vertex becomes a region and each edge a two-region contact point,
    so the family is simple and 2-touching; ``k`` only sets the declared
    bound.  The rotation at every region follows the triangulation.
    """
    if n < 3:
        raise ValueError("gen_plane_contact needs n >= 3")
    rng = random.Random(seed)
    succ: list[dict[int, int]] = [{1: 2, 2: 1}, {2: 0, 0: 2}, {0: 1, 1: 0}]
    faces = [(0, 1, 2), (0, 2, 1)]
    for x in range(3, n):
        fi = rng.randrange(len(faces))
        a, b, c = faces[fi]
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            # face (u, v, w) is counterclockwise, so at u the edge uw follows uv
            succ[u][v] = x
            succ[u][x] = w
        succ.append({a: b, b: c, c: a})
        faces[fi] = (a, b, x)
        faces.append((b, c, x))
        faces.append((c, a, x))
    names = tuple(f"d{i}" for i in range(n))
    contacts = []
    edge_idx: dict[tuple[int, int], int] = {}
    for u in range(n):
        for v in sorted(succ[u]):
            if u < v:
                edge_idx[(u, v)] = len(contacts)
                contacts.append(ContactPoint(f"e{u}_{v}", frozenset((u, v)), (u, v)))
    boundary = []
    for u in range(n):
        start = min(succ[u])
        seq, v = [], start
        while True:
            seq.append(edge_idx[(min(u, v), max(u, v))])
            v = succ[u][v]
            if v == start:
                break
        boundary.append(tuple(seq))
    return ContactFamily(Kind.REGIONS, names, (None,) * n, tuple(contacts), k, tuple(boundary))
