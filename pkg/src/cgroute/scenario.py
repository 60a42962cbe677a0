"""Scenario inputs: trace replay files and synthetic network generation.

File formats (all comma-separated, floats written with full round-trip
precision so save/load is bit-exact):

* graph file, one directed edge per line:
  ``src,dst,delay_ms,jitter_ms,capacity_mbps,success_prob``
* node limits file, one node per line: ``node,processing_mbps``
* demands file, one demand per line:
  ``id,src,dst,rate_mbps,max_jitter_ms,min_success_prob``
* trace file, with header, epochs grouped by timestamp:
  ``epoch_ts,src,dst,delay_ms,jitter_ms,capacity_mbps,success_prob``
* synthetic-parameters file: ``key = value`` lines mirroring
  :class:`SyntheticParams` field names, ranges as ``lo,hi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path as FsPath
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import FormatError, InputError
from .model import Demand, Edge, LinkMetrics, OverlayGraph


@dataclass(frozen=True)
class TraceEpoch:
    """One monitoring snapshot: fresh metrics for every overlay link."""

    timestamp: float
    edges: Mapping[Edge, LinkMetrics]


@dataclass(frozen=True)
class Trace:
    """An ordered sequence of epochs over a fixed edge set and node limits."""

    n_nodes: int
    epochs: tuple[TraceEpoch, ...]
    node_limits: tuple[float, ...]

    def graph_for(self, epoch: TraceEpoch) -> OverlayGraph:
        return OverlayGraph.from_edges(self.n_nodes, epoch.edges, self.node_limits)


@dataclass(frozen=True)
class SyntheticParams:
    """Knobs for the random-network generator.

    Defaults follow the synthetic CDN evaluation setup: a 50-node
    preferential-attachment overlay with 450 directed links, uniform link
    metrics, exponential demand rates, and uniform per-demand QoS bounds
    expressed as maximum end-to-end loss.
    """

    n_nodes: int = 50
    n_edges: int = 450  # directed
    capacity_range_mbps: tuple[float, float] = (300.0, 500.0)
    delay_range_ms: tuple[float, float] = (1.0, 500.0)
    jitter_range_ms: tuple[float, float] = (0.0, 50.0)
    loss_range: tuple[float, float] = (0.0, 0.2)
    node_capacity_mbps: float = 400.0
    n_demands: int = 90
    rate_mean_mbps: float = 50.0
    rate_fixed_mbps: Optional[float] = None
    jitter_bound_range_ms: tuple[float, float] = (25.0, 200.0)
    loss_bound_range: tuple[float, float] = (0.1, 0.8)
    seed: int = 0

    def __post_init__(self):
        for name in (
            "capacity_range_mbps",
            "delay_range_ms",
            "jitter_range_ms",
            "loss_range",
            "jitter_bound_range_ms",
            "loss_bound_range",
        ):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise InputError(f"{name} must be a nonempty finite range")
        if self.loss_range[1] >= 1.0 or self.loss_range[0] < 0.0:
            raise InputError("link loss range must stay within [0, 1)")
        if self.loss_bound_range[1] >= 1.0 or self.loss_bound_range[0] < 0.0:
            raise InputError("demand loss bound range must stay within [0, 1)")
        if self.n_nodes < 2 or self.n_demands < 0 or self.n_edges < 0:
            raise InputError("counts must be positive")
        if self.rate_mean_mbps <= 0.0:
            raise InputError("mean rate must be positive")


# -- parsing helpers ----------------------------------------------------------


def _parse_fields(line: str, n: int, lineno: int) -> list[str]:
    parts = [p.strip() for p in line.split(",")]
    if len(parts) != n:
        raise FormatError(f"expected {n} comma-separated fields, got {len(parts)}", lineno)
    return parts


def _parse_float(text: str, what: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"bad {what} value {text!r}", lineno) from None


def _parse_int(text: str, what: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"bad {what} value {text!r}", lineno) from None


def _data_lines(path: FsPath) -> list[tuple[int, str]]:
    try:
        raw = FsPath(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    out = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((lineno, stripped))
    return out


def _metrics_from(parts: list[str], lineno: int) -> LinkMetrics:
    vals = [
        _parse_float(parts[0], "delay", lineno),
        _parse_float(parts[1], "jitter", lineno),
        _parse_float(parts[2], "capacity", lineno),
        _parse_float(parts[3], "success_prob", lineno),
    ]
    try:
        return LinkMetrics(*vals)
    except InputError as exc:
        raise FormatError(str(exc), lineno) from None


# -- node limits ---------------------------------------------------------------


def load_node_limits(path: FsPath) -> tuple[float, ...]:
    limits: dict[int, float] = {}
    for lineno, line in _data_lines(path):
        parts = _parse_fields(line, 2, lineno)
        node = _parse_int(parts[0], "node id", lineno)
        if node in limits:
            raise FormatError(f"duplicate node {node}", lineno)
        limits[node] = _parse_float(parts[1], "processing limit", lineno)
    if not limits:
        raise FormatError(f"{path}: no node limits found")
    if sorted(limits) != list(range(len(limits))):
        raise FormatError(f"{path}: node ids must be dense 0..{len(limits) - 1}")
    return tuple(limits[i] for i in range(len(limits)))


def save_node_limits(limits: Sequence[float], path: FsPath):
    text = "".join(f"{i},{float(x)!r}\n" for i, x in enumerate(limits))
    FsPath(path).write_text(text)


# -- static graph ---------------------------------------------------------------


def load_graph(graph_path: FsPath, limits_path: FsPath) -> OverlayGraph:
    limits = load_node_limits(limits_path)
    edges: dict[Edge, LinkMetrics] = {}
    for lineno, line in _data_lines(graph_path):
        parts = _parse_fields(line, 6, lineno)
        i = _parse_int(parts[0], "src", lineno)
        j = _parse_int(parts[1], "dst", lineno)
        if (i, j) in edges:
            raise FormatError(f"duplicate edge ({i},{j})", lineno)
        edges[(i, j)] = _metrics_from(parts[2:], lineno)
    try:
        return OverlayGraph.from_edges(len(limits), edges, limits)
    except InputError as exc:
        raise FormatError(f"{graph_path}: {exc}") from None


def save_graph(graph: OverlayGraph, path: FsPath):
    lines = []
    for (i, j) in graph.real_edges():
        m = graph.edges[(i, j)]
        lines.append(
            f"{i},{j},{m.delay_ms!r},{m.jitter_ms!r},{m.capacity_mbps!r},{m.success_prob!r}\n"
        )
    FsPath(path).write_text("".join(lines))


# -- demands --------------------------------------------------------------------


def load_demands(path: FsPath) -> list[Demand]:
    demands: list[Demand] = []
    seen: set[int] = set()
    for lineno, line in _data_lines(path):
        parts = _parse_fields(line, 6, lineno)
        did = _parse_int(parts[0], "demand id", lineno)
        if did in seen:
            raise FormatError(f"duplicate demand id {did}", lineno)
        seen.add(did)
        try:
            demands.append(
                Demand(
                    id=did,
                    source=_parse_int(parts[1], "src", lineno),
                    destination=_parse_int(parts[2], "dst", lineno),
                    rate_mbps=_parse_float(parts[3], "rate", lineno),
                    max_jitter_ms=_parse_float(parts[4], "jitter bound", lineno),
                    min_success_prob=_parse_float(parts[5], "success bound", lineno),
                )
            )
        except InputError as exc:
            raise FormatError(str(exc), lineno) from None
    return demands


def save_demands(demands: Sequence[Demand], path: FsPath):
    lines = [
        f"{d.id},{d.source},{d.destination},{d.rate_mbps!r},"
        f"{d.max_jitter_ms!r},{d.min_success_prob!r}\n"
        for d in demands
    ]
    FsPath(path).write_text("".join(lines))


# -- traces ---------------------------------------------------------------------

TRACE_HEADER = "epoch_ts,src,dst,delay_ms,jitter_ms,capacity_mbps,success_prob"


def load_trace(trace_path: FsPath, limits_path: FsPath) -> Trace:
    """Strictly parse a metric time series; epochs must share one edge set."""
    limits = load_node_limits(limits_path)
    lines = _data_lines(trace_path)
    if not lines or lines[0][1] != TRACE_HEADER:
        raise FormatError(f"{trace_path}: first line must be '{TRACE_HEADER}'")
    epochs: list[TraceEpoch] = []
    current_ts: Optional[float] = None
    current: dict[Edge, LinkMetrics] = {}
    reference: Optional[frozenset[Edge]] = None

    def flush(lineno: int):
        nonlocal current_ts, current, reference
        if current_ts is None:
            return
        edge_set = frozenset(current)
        if reference is None:
            reference = edge_set
        elif edge_set != reference:
            raise FormatError(
                f"epoch {current_ts!r} covers a different edge set than the first epoch",
                lineno,
            )
        epochs.append(TraceEpoch(current_ts, MappingProxyType(dict(sorted(current.items())))))
        current = {}

    for lineno, line in lines[1:]:
        parts = _parse_fields(line, 7, lineno)
        ts = _parse_float(parts[0], "epoch timestamp", lineno)
        if current_ts is None or ts != current_ts:
            if current_ts is not None and ts < current_ts:
                raise FormatError("epoch timestamps must be nondecreasing", lineno)
            flush(lineno)
            current_ts = ts
        i = _parse_int(parts[1], "src", lineno)
        j = _parse_int(parts[2], "dst", lineno)
        if not (0 <= i < len(limits) and 0 <= j < len(limits)):
            raise FormatError(f"edge ({i},{j}) references unknown node", lineno)
        if i == j:
            raise FormatError(f"self-loop ({i},{j}) not allowed", lineno)
        if (i, j) in current:
            raise FormatError(f"duplicate edge ({i},{j}) within epoch", lineno)
        current[(i, j)] = _metrics_from(parts[3:], lineno)
    flush(lines[-1][0] if lines else 0)
    if not epochs:
        raise FormatError(f"{trace_path}: trace contains no epochs")
    return Trace(n_nodes=len(limits), epochs=tuple(epochs), node_limits=limits)


def save_trace(trace: Trace, path: FsPath):
    out = [TRACE_HEADER + "\n"]
    for epoch in trace.epochs:
        for (i, j), m in epoch.edges.items():
            out.append(
                f"{epoch.timestamp!r},{i},{j},{m.delay_ms!r},{m.jitter_ms!r},"
                f"{m.capacity_mbps!r},{m.success_prob!r}\n"
            )
    FsPath(path).write_text("".join(out))


# -- synthetic parameter files ----------------------------------------------------


def save_params(params: SyntheticParams, path: FsPath):
    lines = []
    for f in fields(params):
        v = getattr(params, f.name)
        if v is None:
            lines.append(f"{f.name} = none\n")
        elif isinstance(v, tuple):
            lines.append(f"{f.name} = {v[0]!r},{v[1]!r}\n")
        else:
            lines.append(f"{f.name} = {v!r}\n")
    FsPath(path).write_text("".join(lines))


def load_params(path: FsPath) -> SyntheticParams:
    known = {f.name: f for f in fields(SyntheticParams)}
    kwargs = {}
    for lineno, line in _data_lines(path):
        if "=" not in line:
            raise FormatError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in known:
            raise FormatError(f"unknown parameter {key!r}", lineno)
        if value.lower() == "none":
            kwargs[key] = None
        elif "," in value:
            lo, _, hi = value.partition(",")
            kwargs[key] = (
                _parse_float(lo.strip(), key, lineno),
                _parse_float(hi.strip(), key, lineno),
            )
        elif key in ("n_nodes", "n_edges", "n_demands", "seed"):
            kwargs[key] = _parse_int(value, key, lineno)
        else:
            kwargs[key] = _parse_float(value, key, lineno)
    try:
        return SyntheticParams(**kwargs)
    except TypeError as exc:
        raise FormatError(f"{path}: {exc}") from None


# -- synthetic topology ------------------------------------------------------------


def _attachment_degree(n: int, target_undirected: int) -> int:
    """Attachment degree whose grown-graph edge count lands closest to target."""
    best_m, best_err = 1, None
    for m in range(1, n):
        achieved = n * (n - 1) // 2 if m == n - 1 else m * (n - m)
        err = abs(achieved - target_undirected)
        if best_err is None or err < best_err:
            best_m, best_err = m, err
    return best_m


def _preferential_targets(
    repeated: list[int], m: int, rng: np.random.Generator
) -> list[int]:
    targets: set[int] = set()
    while len(targets) < m:
        targets.add(repeated[int(rng.integers(len(repeated)))])
    return sorted(targets)


def generate_topology(params: SyntheticParams) -> OverlayGraph:
    """Preferential-attachment overlay with independently sampled directions.

    Grows a star seed by attaching each new node to ``m`` degree-weighted
    existing nodes, ``m`` chosen to approximate the requested directed edge
    count (saturating to the complete graph). Every undirected attachment
    becomes two directed edges whose metrics are sampled independently.
    Connected by construction and deterministic per seed.
    """
    n = params.n_nodes
    target_und, rem = divmod(params.n_edges, 2)
    if rem or target_und < n - 1 or target_und > n * (n - 1) // 2:
        raise InputError(
            f"cannot realize {params.n_edges} directed edges on {n} nodes: "
            f"need an even count in [{2 * (n - 1)}, {n * (n - 1)}]"
        )
    rng = np.random.default_rng([params.seed, 0])
    m = _attachment_degree(n, target_und)
    undirected: list[tuple[int, int]] = []
    if m == n - 1:
        undirected = [(u, v) for u in range(n) for v in range(u + 1, n)]
    else:
        undirected = [(0, leaf) for leaf in range(1, m + 1)]
        repeated = [0] * m + list(range(1, m + 1))
        for new in range(m + 1, n):
            for tgt in _preferential_targets(repeated, m, rng):
                undirected.append((tgt, new))
                repeated.append(tgt)
            repeated.extend([new] * m)

    def sample(lo_hi: tuple[float, float]) -> float:
        return float(rng.uniform(lo_hi[0], lo_hi[1]))

    edges: dict[Edge, LinkMetrics] = {}
    for u, v in undirected:
        for e in ((u, v), (v, u)):
            edges[e] = LinkMetrics(
                delay_ms=sample(params.delay_range_ms),
                jitter_ms=sample(params.jitter_range_ms),
                capacity_mbps=sample(params.capacity_range_mbps),
                success_prob=1.0 - sample(params.loss_range),
            )
    limits = [params.node_capacity_mbps] * n
    return OverlayGraph.from_edges(n, edges, limits)


def generate_demands(params: SyntheticParams, graph: OverlayGraph) -> list[Demand]:
    """Random demands: uniform distinct endpoints, exponential rates.

    QoS bounds are drawn uniformly; the loss bound is stored as a minimum
    success probability (one minus the sampled maximum loss). A fixed rate
    overrides the exponential draw when configured.
    """
    if graph.n_nodes < 2:
        raise InputError("demand generation needs at least two nodes")
    rng = np.random.default_rng([params.seed, 1])
    out: list[Demand] = []
    for did in range(params.n_demands):
        s = int(rng.integers(graph.n_nodes))
        t = int(rng.integers(graph.n_nodes - 1))
        if t >= s:
            t += 1
        if params.rate_fixed_mbps is not None:
            rate = params.rate_fixed_mbps
        else:
            rate = max(float(rng.exponential(params.rate_mean_mbps)), 1e-9)
        out.append(
            Demand(
                id=did,
                source=s,
                destination=t,
                rate_mbps=rate,
                max_jitter_ms=float(
                    rng.uniform(*params.jitter_bound_range_ms)
                ),
                min_success_prob=1.0 - float(rng.uniform(*params.loss_bound_range)),
            )
        )
    return out


# -- telco-style trace synthesis -----------------------------------------------------


@dataclass(frozen=True)
class TelcoProfile:
    """Shape parameters for synthesizing telco-CDN-like traces.

    Marginals target the operator-trace summaries: delays essentially
    within 5-80 ms with a few slower links, 90% of jitter samples under
    330 ms, and link loss mostly under 0.3% with a small heavy-loss share
    around 3%. Occasional per-epoch loss spikes model transient
    perturbations.

    ``node_capacity_mbps`` deliberately departs from the published 150
    Mbps: with 50 Mbps demands charging every visited node, 150 Mbps caps
    acceptance near 20% in every mode, which would flatten the
    overlay-vs-direct comparison this profile exists to exercise.
    """

    n_nodes: int = 11
    n_links: int = 82
    n_demands: int = 82
    link_capacity_mbps: float = 50000.0
    node_capacity_mbps: float = 1500.0
    rate_mbps: float = 50.0
    max_jitter_ms: float = 2000.0
    min_success_prob: float = 0.99
    slow_delay_share: float = 0.03
    high_jitter_share: float = 0.10
    heavy_loss_share: float = 0.06
    spike_prob: float = 0.05
    period_s: float = 300.0


def generate_telco_trace(
    n_epochs: int, seed: int, profile: TelcoProfile = TelcoProfile()
) -> Trace:
    """Synthetic operator-like trace: fixed link set, per-epoch metric draws.

    Each link gets a persistent regime (base delay, jitter class, loss
    class) and every epoch resamples metrics within that regime, so
    time-aggregated statistics match the profile while individual epochs
    fluctuate. Deterministic per seed.
    """
    if n_epochs < 1:
        raise InputError("need at least one epoch")
    n = profile.n_nodes
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    if profile.n_links > len(pairs):
        raise InputError(f"at most {len(pairs)} links fit on {n} nodes")
    rng = np.random.default_rng([seed, 2])
    chosen = [pairs[k] for k in rng.permutation(len(pairs))[: profile.n_links]]
    chosen.sort()

    base_delay = {}
    high_jitter = {}
    heavy_loss = {}
    for e in chosen:
        slow = rng.random() < profile.slow_delay_share
        base_delay[e] = float(rng.uniform(80.0, 200.0) if slow else rng.uniform(5.0, 80.0))
        high_jitter[e] = rng.random() < profile.high_jitter_share
        heavy_loss[e] = rng.random() < profile.heavy_loss_share

    epochs = []
    for k in range(n_epochs):
        edges: dict[Edge, LinkMetrics] = {}
        for e in chosen:
            delay = float(np.clip(base_delay[e] + rng.uniform(-3.0, 3.0), 5.0, 250.0))
            if high_jitter[e]:
                jitter = float(rng.uniform(330.0, 5000.0))
            else:
                jitter = float(rng.uniform(1.0, 120.0))
            if heavy_loss[e]:
                loss = float(rng.uniform(0.02, 0.04))
            elif rng.random() < profile.spike_prob:
                loss = float(rng.uniform(0.01, 0.05))
            else:
                loss = float(rng.uniform(0.0001, 0.0025))
            edges[e] = LinkMetrics(
                delay_ms=delay,
                jitter_ms=jitter,
                capacity_mbps=profile.link_capacity_mbps,
                success_prob=1.0 - loss,
            )
        epochs.append(TraceEpoch(k * profile.period_s, MappingProxyType(edges)))
    return Trace(
        n_nodes=n,
        epochs=tuple(epochs),
        node_limits=(profile.node_capacity_mbps,) * n,
    )


def telco_demands(seed: int, profile: TelcoProfile = TelcoProfile()) -> list[Demand]:
    """Fixed-rate demand set matching the telco evaluation profile."""
    params = SyntheticParams(
        n_nodes=profile.n_nodes,
        n_edges=profile.n_links if profile.n_links % 2 == 0 else profile.n_links + 1,
        n_demands=profile.n_demands,
        rate_fixed_mbps=profile.rate_mbps,
        jitter_bound_range_ms=(profile.max_jitter_ms, profile.max_jitter_ms),
        loss_bound_range=(
            1.0 - profile.min_success_prob,
            1.0 - profile.min_success_prob,
        ),
        seed=seed,
    )
    shim = OverlayGraph.from_edges(profile.n_nodes, {}, (0.0,) * profile.n_nodes)
    return generate_demands(params, shim)
