"""Command-line interface.

Subcommands: hclust, cut, kmeans, stability, sim, inspect.  Results are
written as JSON/CSV files (plus optional static SVG) under --out; a
run_report.json captures the invocation, a dataset summary, warnings and
timing.  Exit codes: 0 success, 2 input or configuration error, 3
numerical failure (including strict-mode rare-category errors).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, svg
from .data_model import VariableSet, load_csv
from .errors import DataError, VarclustError
from .hierarchy import (
    aggregation_levels,
    cut,
    hclustvar,
    to_merge_records,
    to_newick,
)
from .partition import ClusterPartition, build_partition
from .partitioning import GivenPartition, KmeansConfig, RandomInit, kmeansvar
from .similarity import mixed_var_sim
from .stability import bootstrap_stability


def _add_data_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("csv", help="input CSV file (header row required)")
    p.add_argument(
        "--quali",
        default=None,
        help="comma-separated qualitative column names (default: infer)",
    )
    p.add_argument("--na-token", default="NA", help="missing-value token (default: NA)")
    p.add_argument(
        "--schema",
        default=None,
        help="JSON sidecar {column: 'quanti'|'quali'} overriding inference",
    )
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--seed", type=int, default=0, help="random seed where applicable")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varclust",
        description="Cluster variables of mixed type around synthetic components.",
    )
    parser.add_argument("--version", action="version", version=f"varclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hclust", help="hierarchical clustering of the variables")
    _add_data_options(p)
    p.add_argument("--json", action="store_true", help="write hierarchy.json (default on)")
    p.add_argument("--newick", action="store_true", help="also write tree.nwk")
    p.add_argument("--levels-csv", action="store_true", help="also write levels.csv (K,height)")
    p.add_argument("--svg", action="store_true", help="also write dendrogram.svg")

    p = sub.add_parser("cut", help="cut the hierarchy into K clusters")
    _add_data_options(p)
    p.add_argument("k", type=int, help="number of clusters")
    p.add_argument(
        "--matsim",
        action="store_true",
        help="include within-cluster similarity matrices (quadratic cost)",
    )

    p = sub.add_parser("kmeans", help="k-means-type partition into K clusters")
    _add_data_options(p)
    p.add_argument("k", type=int, help="number of clusters")
    p.add_argument("--nstart", type=int, default=1, help="random starts (default 1)")
    p.add_argument("--max-iter", type=int, default=150, help="iteration cap (default 150)")
    p.add_argument(
        "--init-from",
        default=None,
        help="partition.json supplying the initial partition (ignores --nstart/--seed)",
    )
    p.add_argument("--matsim", action="store_true", help="include similarity matrices")

    p = sub.add_parser("stability", help="bootstrap stability of the nested partitions")
    _add_data_options(p)
    p.add_argument("--B", type=int, default=40, help="bootstrap replicates (default 40)")
    p.add_argument(
        "--strict-rare",
        action="store_true",
        help="fail hard when a rare category vanishes from a resample",
    )
    p.add_argument("--svg", action="store_true", help="also write stability_curve.svg")

    p = sub.add_parser("sim", help="similarity between two variables")
    _add_data_options(p)
    p.add_argument("i", help="first variable name")
    p.add_argument("j", help="second variable name")

    p = sub.add_parser("inspect", help="summarize a dataset")
    _add_data_options(p)

    return parser


def _load(args) -> VariableSet:
    quali = "infer" if args.quali is None else [
        c for c in args.quali.split(",") if c != ""
    ]
    return load_csv(args.csv, quali_columns=quali, na_token=args.na_token,
                    schema_path=args.schema)


def _dataset_summary(vs: VariableSet) -> dict:
    imputed = {
        v.name: int(v.missing.sum()) for v in vs.variables if bool(v.missing.any())
    }
    return {
        "n_obs": vs.n_obs,
        "p": vs.p,
        "p_quantitative": vs.p_quantitative,
        "p_qualitative": vs.p_qualitative,
        "imputed_cells": int(sum(imputed.values())),
        "imputed_by_variable": imputed,
    }


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _write_report(out: Path, args, vs, warnings, outputs, started) -> None:
    report = {
        "command": list(args.argv_echo),
        "dataset": _dataset_summary(vs),
        "warnings": warnings,
        "outputs": [str(o.name) for o in outputs],
        "timing_seconds": round(time.perf_counter() - started, 6),
    }
    _write_json(out / "run_report.json", report)


def _partition_payload(part: ClusterPartition) -> dict:
    var = {}
    for k, syn in enumerate(part.synthetic, start=1):
        var[f"cluster{k}"] = {
            name: loading
            for name, loading in zip(syn.member_names, syn.squared_loadings)
        }
    payload = {
        "k": part.k,
        "cluster": {name: part.assignments[i] for i, name in enumerate(part.variable_names)},
        "var": var,
        "wss": part.wss,
        "E": part.gain,
        "size": list(part.sizes),
        "scores": {
            "labels": list(part.obs_labels) if part.obs_labels else None,
            "columns": [f"cluster{k}" for k in range(1, part.k + 1)],
            "values": [[float(v) for v in row] for row in part.scores],
        },
        "sim": None,
        "meta": part.meta,
    }
    if part.sim is not None:
        payload["sim"] = {
            f"cluster{k}": {
                "names": list(sm.names),
                "values": [[float(v) for v in row] for row in sm.values],
            }
            for k, sm in enumerate(part.sim, start=1)
        }
    return payload


def _write_scores_csv(path: Path, part: ClusterPartition) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        cols = [f"cluster{k}" for k in range(1, part.k + 1)]
        head = ([""] if part.obs_labels else []) + cols
        fh.write(",".join(head) + "\n")
        for i, row in enumerate(part.scores):
            cells = [part.obs_labels[i]] if part.obs_labels else []
            cells += [repr(float(v)) for v in row]
            fh.write(",".join(cells) + "\n")


def _emit_partition(out: Path, part: ClusterPartition) -> list[Path]:
    pj = out / "partition.json"
    _write_json(pj, _partition_payload(part))
    sc = out / "scores.csv"
    _write_scores_csv(sc, part)
    return [pj, sc]


def _cmd_hclust(args) -> int:
    started = time.perf_counter()
    vs = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    h = hclustvar(vs)
    outputs = []
    hj = out / "hierarchy.json"
    _write_json(
        hj,
        {
            "leaves": list(h.leaves),
            "merges": to_merge_records(h),
            "inversions": list(h.inversions),
        },
    )
    outputs.append(hj)
    if args.newick:
        nwk = out / "tree.nwk"
        nwk.write_text(to_newick(h) + "\n", encoding="utf-8")
        outputs.append(nwk)
    if args.levels_csv:
        lv = out / "levels.csv"
        with open(lv, "w", encoding="utf-8") as fh:
            fh.write("K,height\n")
            for k, height in aggregation_levels(h):
                fh.write(f"{k},{repr(float(height))}\n")
        outputs.append(lv)
    if args.svg:
        dv = out / "dendrogram.svg"
        dv.write_text(svg.render_dendrogram(h), encoding="utf-8")
        outputs.append(dv)
    warnings = (
        [f"dendrogram has {len(h.inversions)} inversion(s) at merges {list(h.inversions)}"]
        if h.inversions
        else []
    )
    _write_report(out, args, vs, warnings, outputs, started)
    return 0


def _cmd_cut(args) -> int:
    started = time.perf_counter()
    vs = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    h = hclustvar(vs)
    part = cut(h, vs, args.k, with_sim=args.matsim)
    outputs = _emit_partition(out, part)
    _write_report(out, args, vs, [], outputs, started)
    return 0


def _read_init_partition(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    cluster_map = payload.get("cluster")
    if not isinstance(cluster_map, dict) or not cluster_map:
        raise DataError(f"{path}: no usable 'cluster' mapping")
    groups: dict[int, list[str]] = {}
    for name, k in cluster_map.items():
        groups.setdefault(int(k), []).append(name)
    return [groups[k] for k in sorted(groups)]


def _cmd_kmeans(args) -> int:
    started = time.perf_counter()
    vs = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.init_from is not None:
        init = GivenPartition(tuple(tuple(c) for c in _read_init_partition(args.init_from)))
    else:
        init = RandomInit(n_starts=args.nstart, seed=args.seed)
    config = KmeansConfig(args.k, init, max_iter=args.max_iter)
    part = kmeansvar(vs, config)
    if args.matsim:
        part = build_partition(vs, part.clusters, with_sim=True, meta=part.meta)
    outputs = _emit_partition(out, part)
    warnings = [] if part.meta.get("converged") else [
        f"not converged within {args.max_iter} iterations"
    ]
    _write_report(out, args, vs, warnings, outputs, started)
    return 0


def _cmd_stability(args) -> int:
    started = time.perf_counter()
    vs = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    res = bootstrap_stability(
        vs, b=args.B, seed=args.seed, strict_rare=args.strict_rare
    )
    outputs = []
    cv = out / "stability_curve.csv"
    with open(cv, "w", encoding="utf-8") as fh:
        fh.write("K,mean_ARI\n")
        for k, m in zip(res.k_values, res.mean_adjusted_rand):
            fh.write(f"{k},{repr(float(m))}\n")
    outputs.append(cv)
    mc = out / "stability_matCR.csv"
    with open(mc, "w", encoding="utf-8") as fh:
        fh.write(",".join(f"K{k}" for k in res.k_values) + "\n")
        for row in res.mat_cr:
            fh.write(",".join("NA" if np.isnan(v) else repr(float(v)) for v in row) + "\n")
    outputs.append(mc)
    rj = out / "stability_report.json"
    _write_json(
        rj,
        {
            "B": res.b,
            "seed": res.seed,
            "k_values": list(res.k_values),
            "mean_adjusted_rand": list(res.mean_adjusted_rand),
            "failed_replicates": [
                {"replicate": rep, "reason": reason}
                for rep, reason in res.failed_replicates
            ],
        },
    )
    outputs.append(rj)
    if args.svg:
        sv = out / "stability_curve.svg"
        sv.write_text(
            svg.render_curve(res.curve, "number of clusters", "mean adjusted Rand"),
            encoding="utf-8",
        )
        outputs.append(sv)
    warnings = [
        f"{len(res.failed_replicates)} replicate(s) failed on rare categories"
    ] if res.failed_replicates else []
    _write_report(out, args, vs, warnings, outputs, started)
    return 0


def _cmd_sim(args) -> int:
    vs = _load(args)
    value = mixed_var_sim(vs, args.i, args.j)
    print(f"{value:.7f}")
    return 0


def _cmd_inspect(args) -> int:
    vs = _load(args)
    variables = []
    for v in vs.variables:
        entry = {
            "name": v.name,
            "kind": "qualitative" if v.is_qualitative else "quantitative",
            "missing": int(v.missing.sum()),
        }
        if v.is_qualitative:
            entry["levels"] = list(v.levels)
        variables.append(entry)
    summary = _dataset_summary(vs)
    summary["variables"] = variables
    summary["obs_labels_present"] = vs.obs_labels is not None
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


_DISPATCH = {
    "hclust": _cmd_hclust,
    "cut": _cmd_cut,
    "kmeans": _cmd_kmeans,
    "stability": _cmd_stability,
    "sim": _cmd_sim,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args.argv_echo = list(argv) if argv is not None else list(sys.argv[1:])
    try:
        return _DISPATCH[args.command](args)
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except VarclustError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
