"""Monte-Carlo check of the random sparsification argument.

Each curve is kept independently with probability p = delta / k.  An
intersecting pair (a, b) is good when, at its witness point (the
lowest-index contact point on both), the kept curves are a, b and at most
one more curve, and that extra curve does not separate a from b.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .bounds import p_good, sparsify_lower_bound
from .model import ContactFamily, Kind, require_valid, witness_points

BLOCK = 1024
MAX_CELLS = 1 << 24


@dataclass
class SparsifyOutcome:
    p: float
    delta: float
    trials: int
    seed: int
    n: int
    m: int
    k: int
    alpha: float
    mean_good_edges: float
    std_err: float
    expected_good_edges: float
    lower_bound: float
    upper_bound: float

    @property
    def vacuous(self) -> bool:
        return self.lower_bound > self.upper_bound

    def to_dict(self) -> dict:
        out = asdict(self)
        out["vacuous"] = self.vacuous
        return out


@dataclass
class _PointTables:
    members: np.ndarray  # curve ids at the point, sorted
    witnessed: np.ndarray  # [x, y] -> pair (members[x], members[y]) uses this point as witness
    inside: np.ndarray  # [z, x] -> members[z] strictly contains members[x]


def _tables(f: ContactFamily):
    wit = witness_points(f)
    by_point: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for pair, j in wit.items():
        by_point[j].append(pair)
    anc = f.ancestors
    tables = []
    for j in sorted(by_point):
        members = sorted(f.contacts[j].members)
        loc = {c: i for i, c in enumerate(members)}
        size = len(members)
        witnessed = np.zeros((size, size), dtype=np.int64)
        for a, b in by_point[j]:
            witnessed[loc[a], loc[b]] = witnessed[loc[b], loc[a]] = 1
        inside = np.zeros((size, size), dtype=bool)
        for x, c in enumerate(members):
            for z, e in enumerate(members):
                inside[z, x] = e in anc[c]
        tables.append(_PointTables(np.array(members), witnessed, inside))
    return wit, tables


def _good_counts(sel: np.ndarray, tables: list[_PointTables]) -> np.ndarray:
    total = np.zeros(sel.shape[0], dtype=np.int64)
    for t in tables:
        sub = sel[:, t.members]
        cnt = sub.sum(axis=1)
        rows = np.flatnonzero(cnt == 2)
        if rows.size:
            cols = np.nonzero(sub[rows])[1].reshape(-1, 2)
            total[rows] += t.witnessed[cols[:, 0], cols[:, 1]]
        rows = np.flatnonzero(cnt == 3)
        if rows.size:
            i0, i1, i2 = np.nonzero(sub[rows])[1].reshape(-1, 3).T
            ins, w = t.inside, t.witnessed
            total[rows] += (w[i0, i1] * ~(ins[i2, i0] ^ ins[i2, i1])
                            + w[i0, i2] * ~(ins[i1, i0] ^ ins[i1, i2])
                            + w[i1, i2] * ~(ins[i0, i1] ^ ins[i0, i2]))
    return total


def _sample(seed: int, block: int, rows: int, n: int, p: float) -> np.ndarray:
    rng = np.random.default_rng([seed, block])
    return rng.random((rows, n)) < p


def expected_good_edges(f: ContactFamily, p) -> Fraction | float:
    """Exact expectation: sum over intersecting pairs of p_good at the witness point."""
    wit = witness_points(f)
    anc = f.ancestors
    total = Fraction(0) if isinstance(p, Fraction) else 0.0
    for (a, b), j in wit.items():
        d = len((anc[a] ^ anc[b]) - {a, b})
        total += p_good(len(f.contacts[j].members), d, p)
    return total


def sparsify_experiment(f: ContactFamily, delta: float, trials: int, seed: int,
                        alpha: float | None = None) -> SparsifyOutcome:
    """Sample ``trials`` subfamilies and report good-edge statistics and both bounds.

    Trials are drawn in fixed blocks of 1024, block ``i`` from the stream
    seeded by ``(seed, i)``, so results do not depend on chunking.
    """
    if f.kind is not Kind.CURVES:
        raise ValueError("sparsify_experiment needs a curve family")
    require_valid(f)
    wit, tables = _tables(f)
    m = len(wit)
    if m == 0:
        raise ValueError("family has no intersecting pairs")
    k = f.declared_k
    p = delta / k
    if not 0 <= p < 1:
        raise ValueError(f"sampling probability {p} outside [0, 1)")
    if alpha is None:
        # measured against the declared k, the same k that sets p
        anc = f.ancestors
        alpha = sum(len((anc[a] ^ anc[b]) - {a, b}) for a, b in wit) / (k * m)

    counts = np.zeros(trials, dtype=np.int64)
    per_chunk = max(1, MAX_CELLS // max(1, f.n * BLOCK)) * BLOCK
    for start in range(0, trials, per_chunk):
        stop = min(trials, start + per_chunk)
        parts = [
            _sample(seed, b, min(BLOCK, stop - b * BLOCK), f.n, p)
            for b in range(start // BLOCK, (stop + BLOCK - 1) // BLOCK)
        ]
        counts[start:stop] = _good_counts(np.concatenate(parts), tables)

    mean = float(counts.mean()) if trials else 0.0
    se = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return SparsifyOutcome(
        p=p, delta=delta, trials=trials, seed=seed, n=f.n, m=m, k=k, alpha=float(alpha),
        mean_good_edges=mean, std_err=se,
        expected_good_edges=float(expected_good_edges(f, p)),
        lower_bound=sparsify_lower_bound(p, delta, m, float(alpha), k),
        upper_bound=3 * p * f.n,
    )
