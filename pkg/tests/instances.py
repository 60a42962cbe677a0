"""Seeded random instances shared by the property and acceptance suites."""

from __future__ import annotations

import numpy as np

from cgroute.model import Demand, LinkMetrics, OverlayGraph
from cgroute.scenario import SyntheticParams, generate_demands, generate_topology


def gap_suite_instance(seed: int) -> tuple[OverlayGraph, list[Demand]]:
    """Scaled-down synthetic instance: 8-12 nodes, 15-30 demands.

    Distributions follow the synthetic evaluation profile with the node
    count and edge density reduced to keep the exact benchmark fast while
    still producing both QoS rejections and capacity contention.
    """
    rng = np.random.default_rng([seed, 9])
    n = int(rng.integers(8, 13))
    k = int(rng.integers(15, 31))
    params = SyntheticParams(
        n_nodes=n,
        n_edges=4 * (n - 2),
        n_demands=k,
        capacity_range_mbps=(300.0, 500.0),
        delay_range_ms=(1.0, 500.0),
        jitter_range_ms=(0.0, 50.0),
        loss_range=(0.0, 0.2),
        node_capacity_mbps=400.0,
        rate_mean_mbps=50.0,
        jitter_bound_range_ms=(25.0, 200.0),
        loss_bound_range=(0.1, 0.8),
        seed=seed,
    )
    graph = generate_topology(params)
    return graph, generate_demands(params, graph)


def tiny_instance(seed: int) -> tuple[OverlayGraph, list[Demand]]:
    """At most 6 nodes and 8 demands: exhaustive enumeration stays cheap."""
    rng = np.random.default_rng([seed, 11])
    n = int(rng.integers(4, 7))
    k = int(rng.integers(3, 9))
    params = SyntheticParams(
        n_nodes=n,
        n_edges=4 * (n - 2),
        n_demands=k,
        capacity_range_mbps=(60.0, 160.0),
        delay_range_ms=(1.0, 500.0),
        jitter_range_ms=(0.0, 50.0),
        loss_range=(0.0, 0.2),
        node_capacity_mbps=120.0,
        rate_mean_mbps=40.0,
        jitter_bound_range_ms=(25.0, 200.0),
        loss_bound_range=(0.1, 0.8),
        seed=seed,
    )
    graph = generate_topology(params)
    return graph, generate_demands(params, graph)


def feasibility_instance(seed: int) -> tuple[OverlayGraph, list[Demand]]:
    """Small but congested: exercises the rounding capacity guard hard."""
    rng = np.random.default_rng([seed, 13])
    n = int(rng.integers(6, 11))
    k = int(rng.integers(8, 25))
    params = SyntheticParams(
        n_nodes=n,
        n_edges=4 * (n - 2),
        n_demands=k,
        capacity_range_mbps=(80.0, 250.0),
        delay_range_ms=(1.0, 500.0),
        jitter_range_ms=(0.0, 50.0),
        loss_range=(0.0, 0.2),
        node_capacity_mbps=200.0,
        rate_mean_mbps=50.0,
        jitter_bound_range_ms=(25.0, 200.0),
        loss_bound_range=(0.1, 0.8),
        seed=seed,
    )
    graph = generate_topology(params)
    return graph, generate_demands(params, graph)


def hand_graph() -> OverlayGraph:
    """Four nodes, dense real edges, roomy metrics; for example-level tests."""
    edges = {}
    delays = {
        (0, 1): 12.0, (1, 0): 14.0,
        (0, 2): 30.0, (2, 0): 28.0,
        (0, 3): 50.0, (3, 0): 55.0,
        (1, 2): 30.0, (2, 1): 25.0,
        (1, 3): 22.0, (3, 1): 21.0,
        (2, 3): 18.0, (3, 2): 16.0,
    }
    for e, d in delays.items():
        edges[e] = LinkMetrics(
            delay_ms=d, jitter_ms=5.0, capacity_mbps=1000.0, success_prob=0.999
        )
    return OverlayGraph.from_edges(4, edges, [500.0] * 4)
