"""Command line surface: generate, fit, eval, bench, replay.

Exit codes: 0 success, 1 usage error, 2 data error, 3 model failure.
Machine-readable output goes to stdout and files; human diagnostics to
stderr.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import bench as bench_mod
from . import synth
from .errors import DataError, ModelError
from .graph import (
    Graph,
    Partition,
    load_edge_list,
    load_partition,
    write_edge_list,
    write_partition,
)
from .metrics import group_count, nmi
from .records import RunRecord, record_fit, replay as replay_record
from .records import tool_version


@click.group()
@click.version_option(version=tool_version(), prog_name="netmix")
def cli():
    """Explore group structure in networks with mixture models."""


def _load_graph(edges_file: str, directed: bool) -> Graph:
    with open(edges_file) as fh:
        return load_edge_list(fh, directed=directed)


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


@cli.command()
@click.argument(
    "name", type=click.Choice(["syn100", "syn108", "syn10000", "planted"])
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--reduced", is_flag=True, help="syn10000 only: quarter-scale preset (2,500 nodes)."
)
@click.option(
    "--spec-file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="planted only: JSON with group_sizes, edge_counts, directed.",
)
@click.option("--out-prefix", "-o", required=True, help="writes PREFIX.edges and PREFIX.gold")
def generate(name, seed, reduced, spec_file, out_prefix):
    """Write a synthetic benchmark network and its gold partition."""
    if reduced and name != "syn10000":
        raise click.UsageError("--reduced only applies to syn10000")
    if name == "planted":
        if spec_file is None:
            raise click.UsageError("planted requires --spec-file")
        with open(spec_file) as fh:
            raw = json.load(fh)
        spec = synth.BlockSpec(
            group_sizes=tuple(int(s) for s in raw["group_sizes"]),
            edge_counts=np.asarray(raw["edge_counts"], dtype=np.int64),
            directed=bool(raw.get("directed", False)),
            seed=seed,
        )
        graph, gold = synth.gen_planted(spec)
    elif name == "syn100":
        graph, gold = synth.gen_syn100(seed)
    elif name == "syn108":
        graph, gold = synth.gen_syn108(seed)
    else:
        graph, gold = synth.gen_syn10000(seed, reduced=reduced)
    with open(out_prefix + ".edges", "w") as fh:
        write_edge_list(graph, fh)
    with open(out_prefix + ".gold", "w") as fh:
        write_partition(gold, graph, fh)
    click.echo(
        "wrote %s.edges and %s.gold (N=%d M=%d K=%d)"
        % (out_prefix, out_prefix, graph.n_nodes, graph.n_edges, gold.n_groups),
        err=True,
    )
    _echo_json(
        {
            "edges": out_prefix + ".edges",
            "gold": out_prefix + ".gold",
            "n_nodes": graph.n_nodes,
            "n_edges": graph.n_edges,
            "k_gold": gold.n_groups,
        }
    )


@cli.command()
@click.argument("model", type=click.Choice(["nmm", "bnpm"]))
@click.argument("edges_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--directed/--undirected", default=False, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--k", type=int, default=None, help="group count (nmm only; bnpm infers it)")
@click.option("--restarts", type=int, default=10, show_default=True, help="nmm restarts")
@click.option("--max-iters", type=int, default=500, show_default=True, help="nmm EM cap")
@click.option("--tol", type=float, default=1e-8, show_default=True, help="nmm convergence")
@click.option("--burn-in", type=int, default=2000, show_default=True, help="bnpm sweeps")
@click.option("--samples", type=int, default=200, show_default=True, help="bnpm samples")
@click.option("--thinning", type=int, default=10, show_default=True)
@click.option("--alpha", type=float, default=None, help="fix the partition concentration")
@click.option("--beta", type=float, default=None, help="fix the target smoothing")
@click.option(
    "--sweep-order",
    type=click.Choice(["sequential", "random"]),
    default="sequential",
    show_default=True,
)
@click.option(
    "--init",
    type=click.Choice(["crp", "dispersed"]),
    default="crp",
    show_default=True,
    help="bnpm initial assignment",
)
@click.option("--gold", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", "-o", default=None, help="output prefix [default: EDGES_FILE stem + .MODEL]")
def fit(
    model,
    edges_file,
    directed,
    seed,
    k,
    restarts,
    max_iters,
    tol,
    burn_in,
    samples,
    thinning,
    alpha,
    beta,
    sweep_order,
    init,
    gold,
    out,
):
    """Fit a model; writes OUT.part and OUT.run.json."""
    if model == "nmm" and not k:
        raise click.UsageError("nmm requires --k (the finite mixture cannot infer it)")
    if model == "bnpm" and k:
        raise click.UsageError(
            "bnpm infers the group count from the data; drop --k"
        )
    if (alpha is None) != (beta is None):
        raise click.UsageError("--alpha and --beta must be given together")
    graph = _load_graph(edges_file, directed)
    gold_part = None
    if gold:
        with open(gold) as fh:
            gold_part = load_partition(fh, graph)
    if model == "nmm":
        options = {"k": k, "restarts": restarts, "max_iters": max_iters, "tol": tol}
    else:
        options = {
            "burn_in": burn_in,
            "samples": samples,
            "thinning": thinning,
            "alpha": alpha,
            "beta": beta,
            "sweep_order": sweep_order,
            "init": init,
        }
    partition, record = record_fit(model, edges_file, graph, options, seed, gold_part)
    if out is None:
        stem = edges_file[:-6] if edges_file.endswith(".edges") else edges_file
        out = "%s.%s" % (stem, model)
    with open(out + ".part", "w") as fh:
        write_partition(partition, graph, fh)
    with open(out + ".run.json", "w") as fh:
        fh.write(record.to_json())
    click.echo(
        "%s on %s: K=%d%s (%.2fs, backend=%s)"
        % (
            model,
            edges_file,
            record.n_groups,
            "" if record.nmi_vs_gold is None else ", NMI=%.4f" % record.nmi_vs_gold,
            record.wall_time_s,
            record.backend,
        ),
        err=True,
    )
    _echo_json(
        {
            "partition": out + ".part",
            "record": out + ".run.json",
            "k": record.n_groups,
            "nmi_vs_gold": record.nmi_vs_gold,
        }
    )


@cli.command("eval")
@click.argument("gold_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("pred_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("edges_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--directed/--undirected", default=False, show_default=True)
def eval_cmd(gold_file, pred_file, edges_file, directed):
    """Score a predicted partition against a gold one."""
    graph = _load_graph(edges_file, directed)
    with open(gold_file) as fh:
        gold = load_partition(fh, graph)
    with open(pred_file) as fh:
        pred = load_partition(fh, graph)
    score = nmi(gold, pred)
    _echo_json(
        {
            "nmi": score.value,
            "mi": score.mi,
            "h_gold": score.h_gold,
            "h_pred": score.h_pred,
            "k_gold": group_count(gold),
            "k_pred": group_count(pred),
        }
    )


@cli.command()
@click.option(
    "--suite",
    type=click.Choice(sorted(bench_mod.SUITES)),
    default="small",
    show_default=True,
)
@click.option("--seed-base", type=int, default=bench_mod.DEFAULT_SEED_BASE, show_default=True)
@click.option("--n-seeds", type=int, default=bench_mod.DEFAULT_N_SEEDS, show_default=True)
@click.option("--out", "-o", "out_dir", default="bench-out", show_default=True)
def bench(suite, seed_base, n_seeds, out_dir):
    """Run the benchmark suite; writes TSV + JSON into a fresh run directory."""
    run_dir, rows, summary = bench_mod.run_bench(
        suite, out_dir, seed_base=seed_base, n_seeds=n_seeds
    )
    for s in summary:
        click.echo(
            "%s/%s: runs=%d median_nmi=%s modal_k=%s"
            % (
                s["network"],
                s["model"],
                s["runs"],
                "n/a" if s["median_nmi"] is None else "%.4f" % s["median_nmi"],
                "n/a" if s["modal_k"] is None else s["modal_k"],
            ),
            err=True,
        )
    _echo_json({"run_dir": str(run_dir)})


@cli.command()
@click.argument("record_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("edges_file", type=click.Path(exists=True, dir_okay=False))
def replay(record_file, edges_file):
    """Refit from a run record and verify the partition is identical."""
    with open(record_file) as fh:
        record = RunRecord.from_json(fh.read())
    verdict = replay_record(record, edges_file)
    _echo_json({"verdict": verdict})
    if verdict != "identical":
        click.echo("replay diverged from the recorded partition", err=True)
        return 3
    return 0


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="netmix", standalone_mode=False)
        return int(rv) if isinstance(rv, int) else 0
    except click.UsageError as err:
        click.echo("usage error: %s" % err.format_message(), err=True)
        return 1
    except click.ClickException as err:
        err.show()
        return 1
    except click.Abort:
        return 1
    except DataError as err:
        click.echo("data error: %s" % err, err=True)
        return 2
    except ModelError as err:
        click.echo("model failure: %s" % err, err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
