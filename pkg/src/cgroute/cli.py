"""Command-line interface.

Exit codes: 0 on success, 2 on input/format errors, 3 on internal solver
failures.
"""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path as FsPath

import click

from .errors import InputError, SolverError
from .exact import ExactLimits
from .harness import (
    MODES,
    emit_reports,
    run_timeseries,
    solve_epoch,
)
from .model import augment_clique
from .scenario import (
    SyntheticParams,
    TelcoProfile,
    Trace,
    generate_demands,
    generate_telco_trace,
    generate_topology,
    load_demands,
    load_graph,
    load_params,
    load_trace,
    save_demands,
    save_graph,
    save_node_limits,
    save_params,
    save_trace,
    telco_demands,
)
from .solver import SolverConfig, column_generation

_mode_option = click.option(
    "--mode",
    type=click.Choice(["overlay", "direct", "both"]),
    default="overlay",
    show_default=True,
    help="Candidate policy: full overlay routing, direct edges only, or both.",
)
_seed_option = click.option("--seed", type=int, default=0, show_default=True)
_format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
)
_out_option = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=FsPath), default=None,
    help="Report destination (stdout when omitted).",
)
_timing_option = click.option(
    "--timing/--no-timing",
    default=True,
    show_default=True,
    help="Include wall-clock fields in reports (disable for byte-stable output).",
)


def _expand_modes(mode: str) -> list[str]:
    return list(MODES) if mode == "both" else [mode]


def _write(reports, fmt, out, include_timing):
    if out is None:
        from .harness import reports_to_csv, reports_to_json

        text = (
            reports_to_csv(reports, include_timing)
            if fmt == "csv"
            else reports_to_json(reports, include_timing)
        )
        click.echo(text, nl=False)
    else:
        emit_reports(reports, fmt, out, include_timing)
        click.echo(f"wrote {out}", err=True)


@click.group()
def cli():
    """Minimum-delay QoS overlay routing: solve, replay, sweep, generate."""


@cli.command("solve")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@click.option("--node-limits", "limits_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@click.option("--demands", "demands_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@_mode_option
@_seed_option
@click.option("--oracle", is_flag=True, help="Also run the exact benchmark and report the gap.")
@_out_option
@_format_option
@click.option(
    "--dump-lp",
    "dump_lp_path",
    type=click.Path(dir_okay=False, path_type=FsPath),
    default=None,
    help="Write the final restricted master in LP text format.",
)
@_timing_option
def solve_cmd(graph_path, limits_path, demands_path, mode, seed, oracle, out, fmt, dump_lp_path, timing):
    """Solve one static scenario."""
    graph = load_graph(graph_path, limits_path)
    demands = load_demands(demands_path)
    config = SolverConfig(seed=seed)
    reports = [
        solve_epoch(graph, demands, m, config, oracle=oracle, with_throughput=True)
        for m in _expand_modes(mode)
    ]
    if dump_lp_path is not None:
        if not demands:
            raise InputError("--dump-lp needs a nonempty demand set")
        augmented = augment_clique(graph, demands)
        cg = column_generation(augmented, demands, config)
        dump_lp_path.write_text(cg.master.dump_lp())
        click.echo(f"wrote {dump_lp_path}", err=True)
    _write(reports, fmt, out, timing)


@cli.command("replay")
@click.option("--trace", "trace_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@click.option("--node-limits", "limits_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@click.option("--demands", "demands_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@_mode_option
@_seed_option
@click.option("--oracle", is_flag=True, help="Run the exact benchmark on every epoch (small instances only).")
@_out_option
@_format_option
@_timing_option
def replay_cmd(trace_path, limits_path, demands_path, mode, seed, oracle, out, fmt, timing):
    """Replay a metric trace epoch by epoch, re-allocating all demands."""
    trace = load_trace(trace_path, limits_path)
    demands = load_demands(demands_path)
    reports = run_timeseries(
        trace, demands, _expand_modes(mode), SolverConfig(seed=seed), oracle=oracle
    )
    _write(reports, fmt, out, timing)


@cli.command("sweep")
@click.option("--params", "params_path", type=click.Path(exists=True, path_type=FsPath), default=None)
@click.option(
    "--demand-counts",
    default="90,110,130,150,170,190,210",
    show_default=True,
    help="Comma-separated demand counts to sweep.",
)
@_mode_option
@_seed_option
@_out_option
@_format_option
@_timing_option
def sweep_cmd(params_path, demand_counts, mode, seed, out, fmt, timing):
    """Acceptance/runtime as a function of offered load on one synthetic net."""
    params = load_params(params_path) if params_path else SyntheticParams()
    params = replace(params, seed=seed)
    try:
        counts = [int(x) for x in demand_counts.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --demand-counts {demand_counts!r}") from None
    if not counts:
        raise InputError("--demand-counts is empty")
    graph = generate_topology(params)
    reports = []
    for k in counts:
        demands = generate_demands(replace(params, n_demands=k), graph)
        for m in _expand_modes(mode):
            reports.append(solve_epoch(graph, demands, m, SolverConfig(seed=seed)))
    _write(reports, fmt, out, timing)


@cli.command("generate")
@click.option(
    "--profile",
    type=click.Choice(["synthetic", "telco"]),
    default="synthetic",
    show_default=True,
)
@click.option("--params", "params_path", type=click.Path(exists=True, path_type=FsPath), default=None)
@click.option("--epochs", type=int, default=20, show_default=True, help="Trace length (telco profile).")
@_seed_option
@click.option(
    "--out-dir",
    required=True,
    type=click.Path(file_okay=False, path_type=FsPath),
)
def generate_cmd(profile, params_path, epochs, seed, out_dir):
    """Write a re-loadable scenario: graph or trace, node limits, demands."""
    out_dir.mkdir(parents=True, exist_ok=True)
    if profile == "telco":
        tp = TelcoProfile()
        trace = generate_telco_trace(epochs, seed, tp)
        demands = telco_demands(seed, tp)
        save_trace(trace, out_dir / "trace.csv")
        save_node_limits(trace.node_limits, out_dir / "node_limits.csv")
        save_demands(demands, out_dir / "demands.csv")
        first = Trace(trace.n_nodes, trace.epochs[:1], trace.node_limits)
        save_graph(first.graph_for(first.epochs[0]), out_dir / "graph.csv")
    else:
        params = load_params(params_path) if params_path else SyntheticParams()
        params = replace(params, seed=seed)
        graph = generate_topology(params)
        demands = generate_demands(params, graph)
        save_graph(graph, out_dir / "graph.csv")
        save_node_limits(graph.node_limits, out_dir / "node_limits.csv")
        save_demands(demands, out_dir / "demands.csv")
        save_params(params, out_dir / "params.cfg")
    click.echo(f"wrote scenario to {out_dir}", err=True)


@cli.command("exact-gap")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@click.option("--node-limits", "limits_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@click.option("--demands", "demands_path", required=True, type=click.Path(exists=True, path_type=FsPath))
@_mode_option
@_seed_option
@click.option("--time-limit", type=float, default=300.0, show_default=True)
@click.option("--max-nodes", type=int, default=1_000_000, show_default=True)
@_out_option
@_format_option
@_timing_option
def exact_gap_cmd(graph_path, limits_path, demands_path, mode, seed, time_limit, max_nodes, out, fmt, timing):
    """Heuristic-vs-exact gap on one scenario (desk-scale instances)."""
    graph = load_graph(graph_path, limits_path)
    demands = load_demands(demands_path)
    limits = ExactLimits(max_nodes=max_nodes, time_limit_s=time_limit)
    reports = [
        solve_epoch(graph, demands, m, SolverConfig(seed=seed), oracle=True, oracle_limits=limits)
        for m in _expand_modes(mode)
    ]
    for r in reports:
        click.echo(
            f"mode={r.mode} objective={r.objective!r} gap_pct={r.gap_pct!r}",
            err=True,
        )
    _write(reports, fmt, out, timing)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.Abort:
        return 1
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        return 2
    except SolverError as exc:
        click.echo(f"solver error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
