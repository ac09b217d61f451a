"""Benchmark harness: networks x models x seeds with per-network presets.

The presets mirror the reproduction protocol: hyperparameters fixed at the
values selected from (0,1) for each network, dispersed initialization, and
the finite mixture run at the gold group count. Results land in a fresh
run directory (never overwriting earlier runs) as TSV rows plus a JSON blob,
with a per-(network, model) summary of median NMI and modal group count.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from statistics import median

import numpy as np

from . import synth
from .datasets import load_bundled
from .graph import Graph, Partition
from .metrics import nmi
from .records import run_model

SMALL_BNPM = {"alpha": 0.1, "beta": 0.3, "init": "dispersed"}
SAMPLED_BNPM = {"init": "dispersed"}  # hyperparameters slice-sampled from (0,1)
SYN10000_BNPM = {
    "alpha": 0.3,
    "beta": 0.05,
    "init": "dispersed",
    "burn_in": 300,
    "samples": 50,
    "thinning": 2,
}

DEFAULT_SEED_BASE = 1  # bench seeds are seed_base .. seed_base + n_seeds - 1
DEFAULT_N_SEEDS = 10


@dataclass
class BenchNetwork:
    name: str
    load: callable  # () -> (Graph, Partition)
    bnpm_options: dict
    nmm_k: int
    score_nodes: slice | None = None  # restrict NMI (syn108 keystones)
    nmm_options: dict | None = None


def _load_syn100():
    g, gold = synth.gen_syn100(seed=0)
    return g, gold


def _load_syn108():
    g, gold = synth.gen_syn108(seed=0)
    return g, gold


NETWORKS = {
    "karate": BenchNetwork("karate", lambda: load_bundled("karate"), SMALL_BNPM, 2),
    "dolphin": BenchNetwork("dolphin", lambda: load_bundled("dolphin"), SMALL_BNPM, 2),
    "syn100": BenchNetwork("syn100", _load_syn100, SMALL_BNPM, 5),
    "syn108": BenchNetwork(
        "syn108",
        _load_syn108,
        SAMPLED_BNPM,  # fixed-hyper presets collapse to one group here
        4,
        score_nodes=slice(0, 100),
        nmm_options={"restarts": 20},
    ),
}

SUITES = {
    "small": ["karate", "dolphin"],
    "synthetic": ["syn100", "syn108"],
    "all": ["karate", "dolphin", "syn100", "syn108"],
}


@dataclass
class BenchRow:
    network: str
    model: str
    seed: int
    status: str  # ok | skipped: ... | error: ...
    k: int | None
    nmi: float | None
    seconds: float | None


def restricted_nmi(gold: Partition, pred: Partition, nodes: slice | None) -> float:
    if nodes is None:
        return nmi(gold, pred).value
    g = Partition.from_labels(gold.assignments[nodes].tolist())
    p = Partition.from_labels(pred.assignments[nodes].tolist())
    return nmi(g, p).value


def run_cell(net: BenchNetwork, graph: Graph, gold: Partition, model: str, seed: int) -> BenchRow:
    options = dict(net.bnpm_options) if model == "bnpm" else {
        "k": net.nmm_k,
        **(net.nmm_options or {}),
    }
    t0 = time.perf_counter()
    try:
        partition, k, _ = run_model(model, graph, options, seed)
    except Exception as err:  # recorded, not fatal to the table
        return BenchRow(net.name, model, seed, "error: %s" % err, None, None, None)
    elapsed = time.perf_counter() - t0
    score = restricted_nmi(gold, partition, net.score_nodes)
    return BenchRow(net.name, model, seed, "ok", k, score, elapsed)


def _unique_run_dir(out_dir: str) -> Path:
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    for i in range(10000):
        cand = base / ("run-%s-%d%s" % (stamp, os.getpid(), "" if not i else "-%d" % i))
        try:
            cand.mkdir()
            return cand
        except FileExistsError:
            continue
    raise RuntimeError("could not allocate a run directory")


def run_bench(
    suite: str,
    out_dir: str,
    seed_base: int = DEFAULT_SEED_BASE,
    n_seeds: int = DEFAULT_N_SEEDS,
    models: tuple = ("bnpm", "nmm"),
    networks: list | None = None,
) -> tuple[Path, list[BenchRow], list[dict]]:
    names = networks or SUITES[suite]
    seeds = list(range(seed_base, seed_base + n_seeds))
    rows: list[BenchRow] = []
    for name in names:
        net = NETWORKS[name]
        try:
            graph, gold = net.load()
        except Exception as err:
            for model in models:
                for seed in seeds:
                    rows.append(
                        BenchRow(name, model, seed, "skipped: %s" % err, None, None, None)
                    )
            continue
        for model in models:
            for seed in seeds:
                rows.append(run_cell(net, graph, gold, model, seed))

    summary = []
    for name in names:
        for model in models:
            ok = [r for r in rows if r.network == name and r.model == model and r.status == "ok"]
            entry = {"network": name, "model": model, "runs": len(ok)}
            if ok:
                entry["median_nmi"] = float(median(r.nmi for r in ok))
                ks = [r.k for r in ok]
                entry["modal_k"] = int(max(set(ks), key=ks.count))
            else:
                entry["median_nmi"] = None
                entry["modal_k"] = None
            summary.append(entry)

    run_dir = _unique_run_dir(out_dir)
    with open(run_dir / "results.tsv", "w") as fh:
        fh.write("network\tmodel\tseed\tstatus\tk\tnmi\tseconds\n")
        for r in rows:
            fh.write(
                "%s\t%s\t%d\t%s\t%s\t%s\t%s\n"
                % (
                    r.network,
                    r.model,
                    r.seed,
                    r.status,
                    "" if r.k is None else r.k,
                    "" if r.nmi is None else "%.6f" % r.nmi,
                    "" if r.seconds is None else "%.3f" % r.seconds,
                )
            )
    with open(run_dir / "summary.tsv", "w") as fh:
        fh.write("network\tmodel\truns\tmedian_nmi\tmodal_k\n")
        for s in summary:
            fh.write(
                "%s\t%s\t%d\t%s\t%s\n"
                % (
                    s["network"],
                    s["model"],
                    s["runs"],
                    "" if s["median_nmi"] is None else "%.6f" % s["median_nmi"],
                    "" if s["modal_k"] is None else s["modal_k"],
                )
            )
    with open(run_dir / "results.json", "w") as fh:
        json.dump(
            {
                "suite": suite,
                "seeds": seeds,
                "presets": {"small_bnpm": SMALL_BNPM, "syn10000_bnpm": SYN10000_BNPM},
                "rows": [asdict(r) for r in rows],
                "summary": summary,
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    return run_dir, rows, summary
