"""Candidate-path enumeration and the column-generation pricing step.

With at most one relay per route, the feasible path set of a demand is
small enough to enumerate outright: the direct edge plus one dogleg per
relay node. Pricing therefore scans the full candidate list and returns an
exact minimizer of the dual-adjusted length, with no approximation gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .errors import ContractError
from .model import Demand, Edge, NodeId, OverlayGraph, Path, make_path, qos_feasible
from .rmp import DualPoint

#: Absolute reduced-cost tolerance: a column must beat its convexity price
#: by more than this to be worth adding.
EPS_REDUCED_COST = 1e-7


@dataclass(frozen=True)
class PricingWeights:
    """Dual-adjusted weights seen by one demand's pricing scan.

    Edge weight is delay plus the demand's rate times the edge capacity
    price; node weight is rate times the node capacity price.
    """

    edge_weight: Mapping[Edge, float]
    node_weight: tuple[float, ...]

    @classmethod
    def for_demand(
        cls, graph: OverlayGraph, demand: Demand, duals: DualPoint
    ) -> "PricingWeights":
        r = demand.rate_mbps
        w = {
            e: graph.edges[e].delay_ms + r * duals.edge_duals[e]
            for e in duals.edge_duals
        }
        return cls(
            edge_weight=MappingProxyType(w),
            node_weight=tuple(r * nu for nu in duals.node_duals),
        )


def enumerate_candidates(graph: OverlayGraph, demand: Demand) -> list[Path]:
    """All QoS-feasible routes for the demand, direct edge first.

    Relay routes are ordered by relay node id. Only real edges are
    considered; an empty list means the demand can never be routed.
    """
    s, t = demand.source, demand.destination
    out: list[Path] = []
    if graph.is_real((s, t)):
        p = make_path(graph, demand)
        if qos_feasible(p, demand):
            out.append(p)
    for relay in range(graph.n_nodes):
        if relay == s or relay == t:
            continue
        if graph.is_real((s, relay)) and graph.is_real((relay, t)):
            p = make_path(graph, demand, relay)
            if qos_feasible(p, demand):
                out.append(p)
    return out


def priced_length(path: Path, demand: Demand, duals: DualPoint) -> float:
    """Dual-adjusted length: delay plus the capacity rent the path would pay."""
    rent = sum(duals.edge_duals[e] for e in path.edges)
    rent += sum(duals.node_duals[i] for i in path.nodes)
    return path.total_delay_ms + demand.rate_mbps * rent


def price_demand(
    demand: Demand,
    candidates: Sequence[Path],
    duals: DualPoint,
    eps_rc: float = EPS_REDUCED_COST,
) -> Optional[tuple[Path, float]]:
    """Exact pricing: the cheapest candidate, if it improves the master.

    Returns ``(path, reduced_cost)`` when the minimizer's priced length
    undercuts the demand's convexity price by more than ``eps_rc``, else
    ``None`` (the duals are feasible for this demand). Ties keep the first
    candidate in list order, so results are deterministic.
    """
    bad_edge = min(duals.edge_duals.values(), default=0.0)
    bad_node = min(duals.node_duals, default=0.0)
    if bad_edge < 0.0 or bad_node < 0.0:
        raise ContractError("capacity duals must be nonnegative")
    best: Optional[Path] = None
    best_len = 0.0
    for p in candidates:
        length = priced_length(p, demand, duals)
        if best is None or length < best_len:
            best, best_len = p, length
    if best is None:
        return None
    sigma = duals.convexity_duals[demand.id]
    if best_len < sigma - eps_rc:
        return best, best_len - sigma
    return None
