"""Command-line entry point.

Every subcommand writes a deterministic report (JSON with sorted keys, or
CSV) to ``-o`` or stdout.  Exit status: 0 success, 1 a checked property
failed, 2 the input could not be used.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cyclepack
from .bounds import bound_table, bound_table_csv, delta_of_alpha
from .coloring import clique_number, color_family, family_conflicts
from .discharging import CONSTANTS, GuaranteeViolated, verify_discharging
from .generators import (gen_bad_quad_fixture, gen_fpb_extremal, gen_plane_contact,
                         gen_point_clique, gen_random_curves)
from .model import (AVG_DISTANCE_RATIO, ContactFamily, FamilyFormatError, Kind,
                    count_c_crossing_pairs, crossing_bound, dump_family, family_stats,
                    intersection_graph, load_family, validate_family)
from .region_graph import build_contact_graph, components, subgraph, trace_faces
from .sparsify import sparsify_experiment

OK, VIOLATION, INPUT_ERROR = 0, 1, 2
GENERATORS = ("point-clique", "fpb-extremal", "random", "bad-quad", "plane-contact")


class InputError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("CONTACTLAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"CONTACTLAB_SEED must be an integer, got {raw!r}") from None


def derived_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def to_json(obj) -> str:
    def enc(x):
        if isinstance(x, Fraction):
            return str(x)
        if isinstance(x, (set, frozenset)):
            return sorted(x)
        raise TypeError(f"cannot encode {type(x).__name__}")
    return json.dumps(obj, sort_keys=True, indent=1, default=enc) + "\n"


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def read_family(path: str) -> ContactFamily:
    try:
        return load_family(path)
    except FamilyFormatError as exc:
        raise InputError(str(exc)) from None
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def read_valid_family(path: str, check_simple: bool = False) -> ContactFamily:
    f = read_family(path)
    rep = validate_family(f, check_simple=check_simple)
    if not rep.ok:
        raise InputError(f"{path}: {rep.violations[0].message}")
    return f


# --------------------------------------------------------------------------
# generate


def make_family(kind: str, k: int | None, n: int | None, seed: int, nest_prob: float) -> ContactFamily:
    def need(x, flag):
        if x is None:
            raise InputError(f"--type {kind} needs {flag}")
        return x
    try:
        if kind == "point-clique":
            return gen_point_clique(need(k, "--k"))
        if kind == "fpb-extremal":
            return gen_fpb_extremal(need(n, "--n"), need(k, "--k"))
        if kind == "random":
            return gen_random_curves(need(n, "--n"), need(k, "--k"), seed, nest_prob)
        if kind == "bad-quad":
            return gen_bad_quad_fixture(need(k, "--k"))
        if kind == "plane-contact":
            return gen_plane_contact(need(n, "--n"), seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    raise InputError(f"unknown generator {kind!r}")


def cmd_generate(args) -> int:
    f = make_family(args.type, args.k, args.n, args.seed, args.nest_prob)
    emit(dump_family(f), args.output)
    return OK


# --------------------------------------------------------------------------
# validate / stats / bounds


def cmd_validate(args) -> int:
    f = read_family(args.input)
    rep = validate_family(f, check_simple=args.simple)
    emit(to_json(rep.to_dict()), args.output)
    return OK if rep.ok else VIOLATION


def crossing_summary(f: ContactFamily) -> list[dict]:
    """c-crossing counts against 2ekn for every curve that contains another."""
    if f.kind is not Kind.CURVES:
        return []
    k = max((len(p.members) for p in f.contacts), default=0)
    containers = sorted({p for p in f.parent if p is not None})
    rows = []
    for c in containers:
        # the bound speaks about the curves meeting c, so both sides are restricted to them
        met = set().union(*(f.contacts[j].members for j in f.contacts_of[c])) - {c}
        if not met:
            continue
        count = count_c_crossing_pairs(f, c, within_neighbors=True)
        bound = crossing_bound(k, len(met))
        rows.append({"curve": f.names[c], "neighbors": len(met), "count": count,
                     "per_neighbor": str(Fraction(count, len(met))),
                     "bound": bound, "margin": bound - count, "within_bound": count <= bound})
    return rows


def stats_report(f: ContactFamily) -> dict:
    st = family_stats(f)
    out = st.to_dict()
    out["alpha_float"] = None if st.alpha is None else float(st.alpha)
    out["crossing"] = crossing_summary(f)
    return out


def cmd_stats(args) -> int:
    f = read_valid_family(args.input)
    rep = stats_report(f)
    emit(to_json(rep), args.output)
    return OK if all(r["within_bound"] for r in rep["crossing"]) else VIOLATION


def cmd_bounds(args) -> int:
    f = read_valid_family(args.input)
    emit(bound_table_csv(bound_table(family_stats(f))), args.output)
    return OK


# --------------------------------------------------------------------------
# color


def color_report(f: ContactFamily, mode: str) -> tuple[dict, bool]:
    col = color_family(f, mode)
    bad = family_conflicts(f, col)
    k = f.declared_k
    guaranteed = (mode == "kplus1" and f.kind is Kind.REGIONS and k >= CONSTANTS.k_threshold
                  and validate_family(f, check_simple=True).ok)
    rep = {
        "mode": mode,
        "coloring": {f.names[c]: x for c, x in sorted(col.assignment.items())},
        "palette_size": col.palette_size,
        "certificate": {"pairs_checked": "every pair of curves sharing a contact point",
                        "conflicts": [[f.names[a], f.names[b]] for a, b in bad],
                        "proper": not bad},
        "k": k,
        "k_plus_1_guaranteed": guaranteed,
    }
    ok = not bad and (not guaranteed or col.palette_size <= k + 1)
    return rep, ok


def cmd_color(args) -> int:
    f = read_valid_family(args.input)
    try:
        rep, ok = color_report(f, args.mode)
    except GuaranteeViolated as exc:
        emit(to_json({"error": str(exc)}), args.output)
        return VIOLATION
    emit(to_json(rep), args.output)
    return OK if ok else VIOLATION


# --------------------------------------------------------------------------
# discharge


def discharge_run(f: ContactFamily) -> tuple[list[dict], list[list]]:
    """Discharging on each connected component; returns summaries and CSV rows."""
    g = build_contact_graph(f)
    k = f.declared_k
    summaries, rows = [], []
    for ci, comp in enumerate(components(g.rotation)):
        sub, old = subgraph(g, comp)
        faces = trace_faces(sub)
        rep = verify_discharging(sub, k, faces)
        given: dict = defaultdict(Fraction)
        got: dict = defaultdict(Fraction)
        for t in rep.state.transfer_log:
            given[t.source] += t.amount
            got[t.sink] += t.amount
        for v in range(len(sub)):
            site = ("v", v)
            rows.append([ci, sub.labels[v], sub.kinds[v], sub.degree(v), rep.initial.charge(site),
                         got[site], given[site], rep.state.charge(site)])
        for j in range(len(faces.walks)):
            site = ("f", j)
            rows.append([ci, f"f{j}", "face", faces.degrees[j], rep.initial.charge(site),
                         got[site], given[site], rep.state.charge(site)])
        summary = rep.to_dict(sub)
        summary["component"] = ci
        summary["vertices"] = len(sub)
        summary["first_disk"] = next((sub.labels[v] for v in range(len(sub)) if sub.is_disk(v)), None)
        summaries.append(summary)
    return summaries, rows


def discharge_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["component", "site", "kind", "degree", "initial", "received", "given", "final"])
    for r in rows:
        w.writerow([str(x) for x in r])
    return buf.getvalue()


def cmd_discharge(args) -> int:
    f = read_valid_family(args.input)
    if f.kind is not Kind.REGIONS:
        raise InputError("discharge needs a region family")
    try:
        summaries, rows = discharge_run(f)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    emit(discharge_csv(rows), args.csv)
    emit(to_json({"components": summaries, "k": f.declared_k,
                  "consistent": all(s["consistent"] for s in summaries)}), args.output)
    return OK if all(s["consistent"] for s in summaries) else VIOLATION


# --------------------------------------------------------------------------
# sparsify


def cmd_sparsify(args) -> int:
    f = read_valid_family(args.input)
    if f.kind is not Kind.CURVES:
        raise InputError("sparsify needs a curve family")
    try:
        delta = args.delta
        if delta is None:
            st = family_stats(f)
            if st.m in (None, 0):
                raise InputError("family has no intersecting pairs")
            total = float(st.avg_distance) / f.declared_k
            delta = delta_of_alpha(min(1.0, total))
        out = sparsify_experiment(f, delta, args.trials, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep = out.to_dict()
    lo, hi = out.lower_bound - 3 * out.std_err, out.upper_bound + 3 * out.std_err
    rep["within_bounds"] = lo <= out.mean_good_edges <= hi
    emit(to_json(rep), args.output)
    return OK if rep["within_bounds"] or out.vacuous else VIOLATION


# --------------------------------------------------------------------------
# cyclepack


def packing_csv(g: cyclepack.PlanarDigraph, res: cyclepack.PackingResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["cycle", "length", "lp_weight", "in_disjoint_packing"])
    chosen = set(res.witness)
    for c in res.cycles:
        w.writerow([" ".join(g.vertices[v] for v in c), len(c),
                    str(res.lp_weights.get(c, Fraction(0))), str(c in chosen).lower()])
    r = res.ratio
    w.writerow([])
    w.writerow(["nu", "nu_star", "ratio", "violation"])
    w.writerow([res.nu, str(res.nu_star), "" if r is None else str(r), str(res.violation).lower()])
    return buf.getvalue()


def cmd_cyclepack(args) -> int:
    if args.sweep is not None:
        s = cyclepack.sweep_small_planar(args.sweep, workers=args.workers)
        r = {"max_vertices": args.sweep, "instances": s.instances, "with_cycles": s.with_cycles,
             "max_ratio": str(s.max_ratio), "max_ratio_float": float(s.max_ratio),
             "argmax": None if s.argmax is None else cyclepack.digraph_to_dict(s.argmax),
             "bound": cyclepack.GAP_BOUND, "violations": s.violations}
        emit(to_json(r), args.output)
        return OK if not s.violations and s.max_ratio <= cyclepack.GAP_BOUND else VIOLATION
    if args.input is None:
        raise InputError("cyclepack needs an input file or --sweep")
    try:
        g = cyclepack.load_digraph(args.input)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.input}: {exc}") from None
    problems = g.problems()
    if problems:
        raise InputError(f"{args.input}: {problems[0]}")
    try:
        res = cyclepack.ratio_report(g, args.limit, strict=False)
    except cyclepack.CycleLimitExceeded as exc:
        raise InputError(str(exc)) from None
    if args.report == "csv":
        emit(packing_csv(g, res), args.output)
    else:
        emit(to_json(res.to_dict(g)), args.output)
    return VIOLATION if res.violation else OK


# --------------------------------------------------------------------------
# scan-conjecture


def _scan_item(job: tuple) -> dict:
    index, kind, k, n, seed, nest_prob = job
    f = make_family(kind, k, n, seed, nest_prob)
    st = family_stats(f)
    return {"index": index, "n": f.n, "k": st.k_effective, "seed": seed,
            "alpha": st.alpha, "family": f}


def cmd_scan_conjecture(args) -> int:
    if args.count < 0:
        raise InputError("--count must be nonnegative")
    threshold = Fraction(args.above).limit_denominator(10**6)
    ns = args.n or [None]
    jobs = [(i, args.type, args.k, ns[i % len(ns)], derived_seed(args.seed, i), args.nest_prob)
            for i in range(args.count)]
    if args.workers == 1:
        items = list(map(_scan_item, jobs))
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            items = list(pool.map(_scan_item, jobs, chunksize=16))
    alphas = [it["alpha"] for it in items if it["alpha"] is not None]
    witnesses, violations = [], []
    wdir = Path(args.witness_dir) if args.witness_dir else None
    for it in items:
        a = it["alpha"]
        if a is None:
            continue
        entry = {"index": it["index"], "n": it["n"], "k": it["k"], "seed": it["seed"],
                 "alpha": str(a), "alpha_float": float(a)}
        if a > threshold:
            if wdir is not None:
                wdir.mkdir(parents=True, exist_ok=True)
                path = wdir / f"witness_{it['index']:05d}.json"
                dump_family(it["family"], path)
                entry["file"] = path.name
            witnesses.append(entry)
        if float(a) > AVG_DISTANCE_RATIO:
            violations.append(entry)
    rep = {
        "type": args.type, "count": args.count, "k": args.k, "n": args.n, "seed": args.seed,
        "families_with_pairs": len(alphas),
        "max_alpha": None if not alphas else float(max(alphas)),
        "mean_alpha": None if not alphas else float(sum(alphas, Fraction(0)) / len(alphas)),
        "half_line": 0.5,
        "witness_threshold": float(threshold),
        "proven_line": AVG_DISTANCE_RATIO,
        "above_threshold": witnesses,
        "above_proven_line": violations,
    }
    emit(to_json(rep), args.output)
    return VIOLATION if violations else OK


# --------------------------------------------------------------------------
# pipeline


def cmd_pipeline(args) -> int:
    report: dict = {"input": Path(args.input).name, "errors": []}
    try:
        f = read_family(args.input)
    except InputError as exc:
        report["errors"].append({"stage": "parse", "message": str(exc)})
        emit(to_json(report), args.output)
        return INPUT_ERROR
    status = OK
    rep = validate_family(f, check_simple=f.kind is Kind.REGIONS)
    report["validation"] = rep.to_dict()
    if not rep.ok and "simplicity" not in rep.codes():
        report["errors"].append({"stage": "validate", "message": rep.violations[0].message})
        emit(to_json(report), args.output)
        return VIOLATION
    stages = [("stats", lambda: stats_report(f)),
              ("bounds", lambda: [r.__dict__ for r in bound_table(family_stats(f))]),
              ("coloring", lambda: _pipeline_color(f))]
    if f.kind is Kind.REGIONS:
        stages.append(("discharging", lambda: _pipeline_discharge(f)))
    for name, run in stages:
        try:
            value, ok = run() if name in ("coloring", "discharging") else (run(), True)
        except (ValueError, GuaranteeViolated) as exc:
            report["errors"].append({"stage": name, "message": str(exc)})
            status = VIOLATION
            break
        report[name] = value
        if name == "stats" and not all(r["within_bound"] for r in value["crossing"]):
            ok = False
        if not ok:
            status = VIOLATION
    emit(to_json(report), args.output)
    return status


def _pipeline_color(f: ContactFamily) -> tuple[dict, bool]:
    rep, ok = color_report(f, "kplus1")
    graph = intersection_graph(f)
    summary = {key: rep[key] for key in ("palette_size", "k", "k_plus_1_guaranteed")}
    summary["proper"] = rep["certificate"]["proper"]
    summary["clique_number"] = clique_number(graph)
    summary["optimal"] = summary["clique_number"] == rep["palette_size"]
    return summary, ok


def _pipeline_discharge(f: ContactFamily) -> tuple[dict, bool]:
    summaries, _ = discharge_run(f)
    ok = all(s["consistent"] for s in summaries)
    return {"components": summaries, "consistent": ok}, ok


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contactlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, helptext, inp=True):
        p = sub.add_parser(name, help=helptext)
        if inp:
            p.add_argument("input", help="instance file (JSON)")
        p.add_argument("-o", "--output", help="report path (default stdout)")
        p.set_defaults(func=func)
        return p

    seed_help = "random seed (default $CONTACTLAB_SEED or 0)"

    p = add("generate", cmd_generate, "write a generated instance", inp=False)
    p.add_argument("--type", required=True, choices=GENERATORS)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, help=seed_help)
    p.add_argument("--nest-prob", type=float, default=0.3)

    p = add("validate", cmd_validate, "check the family invariants")
    p.add_argument("--simple", action="store_true", help="also require any two members to meet at most once")

    add("stats", cmd_stats, "size, touching number, average distance, crossing counts")
    add("bounds", cmd_bounds, "CSV table of chromatic-number bounds")

    p = add("color", cmd_color, "colour a family and certify properness")
    p.add_argument("--mode", choices=("kplus1", "greedy"), default="kplus1")

    p = add("discharge", cmd_discharge, "run the discharging rules on a region family")
    p.add_argument("--csv", help="per-site charge table (default: not written)", default=os.devnull)

    p = add("sparsify", cmd_sparsify, "Monte-Carlo check of the sampling bounds")
    p.add_argument("--delta", type=float, help="default: delta at the family's alpha")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, help=seed_help)

    p = sub.add_parser("cyclepack", help="integral and fractional directed cycle packing")
    p.add_argument("input", nargs="?", help="digraph file (JSON)")
    p.add_argument("-o", "--output")
    p.add_argument("--limit", type=int, default=cyclepack.DEFAULT_LIMIT, help="maximum number of cycles")
    p.add_argument("--report", choices=("csv", "json"), default="json")
    p.add_argument("--sweep", type=int, metavar="V", help="sweep every small planar digraph on 3..V vertices")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_cyclepack)

    p = add("scan-conjecture", cmd_scan_conjecture, "average-distance scan over generated families", inp=False)
    p.add_argument("--type", choices=("fpb-extremal", "random"), default="random")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, nargs="+", help="sizes, cycled through the batch")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, help=seed_help)
    p.add_argument("--nest-prob", type=float, default=0.3)
    p.add_argument("--above", type=float, default=0.5, help="save families with alpha above this (default 1/2)")
    p.add_argument("--witness-dir", help="where families above the threshold are saved")
    p.add_argument("--workers", type=int, default=1)

    add("pipeline", cmd_pipeline, "validate, stats, bounds, colour and discharge in one report")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        return args.func(args)
    except InputError as exc:
        print(f"contactlab: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
