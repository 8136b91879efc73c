"""Closed-form bounds: the good-edge probability, delta(alpha), beta(alpha),
and the table of colouring bounds that apply to a family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import FamilyStats

SIX_E = 6 * math.e
ALL_CURVES_BETA = 15.95
CONJECTURED_BETA = 10.22
BETA_TABLE = ((Fraction(1, 4), 8.43), (Fraction(1, 2), 10.22), (Fraction(3, 4), 12.76))


def p_good(ell: int, d: int, p):
    """Probability that a pair at a point on ``ell`` curves survives sampling as a good edge.

    ``d`` of the other curves at the point separate the pair.  Exact when
    ``p`` is a Fraction.
    """
    if ell < 2 or not 0 <= d <= ell - 2:
        raise ValueError("need ell >= 2 and 0 <= d <= ell - 2")
    if not 0 <= p < 1:
        raise ValueError("need 0 <= p < 1")
    q = 1 - p
    value = p * p * q ** (ell - 2)
    free = ell - d - 2
    if free:
        value += p ** 3 * q ** (ell - 3) * free
    return value


@dataclass(frozen=True)
class BoundParams:
    alpha: float
    delta: float
    beta: float


def delta_of_alpha(alpha: float) -> float:
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if alpha == 1:
        return 1.0
    return (1 - 2 * alpha + math.sqrt(4 * alpha * alpha - 8 * alpha + 5)) / (2 - 2 * alpha)


def beta_for(alpha: float, delta: float) -> float:
    """Colouring ratio 6 e^delta / (delta + delta^2 (1 - alpha)) for a given delta."""
    return 6 * math.exp(delta) / (delta + delta * delta * (1 - alpha))


def beta_of_alpha(alpha: float) -> float:
    return beta_for(alpha, delta_of_alpha(alpha))


def bound_params(alpha: float) -> BoundParams:
    d = delta_of_alpha(alpha)
    return BoundParams(alpha, d, beta_for(alpha, d))


def sparsify_lower_bound(p: float, delta: float, m: int, alpha: float, k: int) -> float:
    return p * p * math.exp(-delta) * m * (1 + delta * (1 - alpha - 2 / k))


@dataclass
class BoundRow:
    name: str
    value: float
    applicable: bool
    note: str


def bound_table(stats: FamilyStats) -> list[BoundRow]:
    """Named upper bounds on the chromatic number, with applicability flags."""
    k = stats.k_effective
    if k is None:
        return []
    regions = stats.kind == "regions"
    simple_regions = regions and stats.simple
    rows = [BoundRow("any_family_6ek_plus_1", SIX_E * k + 1, True, "any k-touching family")]
    if stats.alpha is not None:
        alpha = float(stats.alpha)
        rows.append(BoundRow("average_distance_beta_k", beta_of_alpha(alpha) * k, True,
                             f"beta({alpha:.6f}) = {beta_of_alpha(alpha):.4f}"))
        for cap, beta in BETA_TABLE:
            if stats.alpha <= cap:
                rows.append(BoundRow("table_beta_k", beta * k, True, f"alpha <= {cap}"))
                break
    rows.append(BoundRow("all_curves_15_95k", ALL_CURVES_BETA * k, True, "any k-touching curve family"))
    rows.append(BoundRow("conjectured_10_22k", CONJECTURED_BETA * k, False,
                         "holds if average distance is at most k/2 in every family"))
    rows.append(BoundRow("simple_regions_k_plus_327", k + 327, simple_regions, "simple region families"))
    rows.append(BoundRow("simple_regions_k_plus_1", k + 1, simple_regions and k >= 490,
                         "simple region families with k >= 490"))
    rows.append(BoundRow("one_sided_strings_4k_over_3_plus_6", math.ceil(4 * k / 3) + 6, False,
                         "string contact systems; reported for context only"))
    rows.append(BoundRow("one_sided_strings_k_plus_127", k + 127, False,
                         "string contact systems; reported for context only"))
    return rows


def bound_table_csv(rows: list[BoundRow]) -> str:
    lines = ["name,value,applicable,note"]
    for r in rows:
        lines.append(f"{r.name},{r.value:.6f},{str(r.applicable).lower()},\"{r.note}\"")
    return "\n".join(lines) + "\n"
