"""Reproducible run records: fingerprinted inputs, config snapshots, replay.

A RunRecord captures everything needed to reproduce a fit bit-for-bit:
model, options, seed, kernel backend, and a content hash of the input edge
list. ``replay`` refuses to run against an input whose hash differs and
otherwise refits and compares partitions exactly.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata

import numpy as np

from . import bnpm, nmm
from .errors import DataError
from .graph import Graph, Partition, load_edge_list
from .metrics import nmi

RECORD_VERSION = 1


def tool_version() -> str:
    try:
        return metadata.version("netmix")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


def file_sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def graph_fingerprint(path: str, graph: Graph) -> dict:
    return {
        "sha256": file_sha256(path),
        "n_nodes": graph.n_nodes,
        "n_edges": graph.n_edges,
        "directed": graph.directed,
    }


DEFAULT_NMM_OPTIONS = {"k": None, "restarts": 10, "max_iters": 500, "tol": 1e-8}
DEFAULT_BNPM_OPTIONS = {
    "burn_in": 2000,
    "samples": 200,
    "thinning": 10,
    "alpha": None,  # both set -> fixed hyperparameters, else slice-sampled
    "beta": None,
    "sweep_order": "sequential",
    "init": "crp",
}


def run_model(model: str, graph: Graph, options: dict, seed: int):
    """Fit either model from a plain-options dict; shared by fit and replay.

    Returns (partition, n_groups, info) where info carries score/diagnostic
    fields for the record.
    """
    if model == "nmm":
        opts = {**DEFAULT_NMM_OPTIONS, **options}
        if not opts["k"]:
            raise ValueError("nmm requires a group count k")
        state, partition, diag = nmm.fit_nmm(
            graph,
            int(opts["k"]),
            max_iters=int(opts["max_iters"]),
            tol=float(opts["tol"]),
            n_restarts=int(opts["restarts"]),
            seed=seed,
        )
        info = {
            "expected_ll": state.expected_ll,
            "best_restart": diag.best_restart,
            "iterations": diag.iterations[diag.best_restart],
            "degenerate_restarts": len(diag.degenerate_events),
        }
        return partition, partition.n_groups, info
    if model == "bnpm":
        opts = {**DEFAULT_BNPM_OPTIONS, **options}
        if (opts["alpha"] is None) != (opts["beta"] is None):
            raise ValueError("fix both alpha and beta or neither")
        fixed = None
        if opts["alpha"] is not None:
            fixed = (float(opts["alpha"]), float(opts["beta"]))
        config = bnpm.SamplerConfig(
            burn_in=int(opts["burn_in"]),
            n_samples=int(opts["samples"]),
            thinning=int(opts["thinning"]),
            seed=seed,
            fixed_hypers=fixed,
            sweep_order=opts["sweep_order"],
            init_mode=opts["init"],
        )
        trace, partition, k, diag = bnpm.fit_bnpm(graph, config)
        info = {
            "map_score": trace.map_sample.score,
            "map_alpha": trace.map_sample.alpha,
            "map_beta": trace.map_sample.beta,
            "n_sweeps": diag.n_sweeps,
            "stationary": diag.stationary,
            "score_q3_mean": diag.q3_mean,
            "score_q4_mean": diag.q4_mean,
            "backend": diag.backend,
        }
        return partition, k, info
    raise ValueError("unknown model %r" % model)


@dataclass
class RunRecord:
    model: str
    options: dict
    seed: int
    graph: dict  # fingerprint
    partition: list
    n_groups: int
    score: dict
    wall_time_s: float
    backend: str
    nmi_vs_gold: float | None = None
    tool_version: str = field(default_factory=tool_version)
    record_version: int = RECORD_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        raw = json.loads(text)
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in raw.items() if k in known})


def record_fit(
    model: str,
    edges_path: str,
    graph: Graph,
    options: dict,
    seed: int,
    gold: Partition | None = None,
) -> tuple[Partition, RunRecord]:
    from ._backend import backend_name

    t0 = time.perf_counter()
    partition, k, info = run_model(model, graph, options, seed)
    elapsed = time.perf_counter() - t0
    record = RunRecord(
        model=model,
        options=options,
        seed=seed,
        graph=graph_fingerprint(edges_path, graph),
        partition=[int(v) for v in partition.assignments],
        n_groups=k,
        score=info,
        wall_time_s=elapsed,
        backend=info.get("backend", backend_name()),
        nmi_vs_gold=(nmi(gold, partition).value if gold is not None else None),
    )
    return partition, record


def replay(record: RunRecord, edges_path: str) -> str:
    """Refit from a record against the same input; 'identical' or 'divergent'.

    Raises DataError when the edge file's hash does not match the record
    (the record does not describe this input).
    """
    actual = file_sha256(edges_path)
    if actual != record.graph["sha256"]:
        raise DataError(
            "input hash mismatch: record has %s…, file is %s…"
            % (record.graph["sha256"][:12], actual[:12])
        )
    with open(edges_path) as fh:
        graph = load_edge_list(fh, directed=bool(record.graph["directed"]))
    partition, k, _ = run_model(record.model, graph, record.options, record.seed)
    same = k == record.n_groups and np.array_equal(
        partition.assignments, np.asarray(record.partition)
    )
    return "identical" if same else "divergent"
