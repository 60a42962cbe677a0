"""Restricted master problem: the LP over the columns generated so far.

Each column couples one candidate path to its demand. The LP minimizes the
total delay of the selected path mix subject to edge capacities, node
processing limits and one convexity row per demand, with the integrality of
the path choice relaxed. Solving returns both the primal mix and the dual
prices that drive pricing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .errors import ContractError, InputError, SolverError
from .model import (
    Demand,
    Edge,
    NodeId,
    OverlayGraph,
    Path,
    dummy_penalty,
    make_dummy_path,
    qos_feasible,
)

# HiGHS is already tight by default; pin the tolerances so dual certificates
# stay well inside the 1e-7 reduced-cost threshold used by pricing.
_LP_OPTIONS = {
    "presolve": True,
    "primal_feasibility_tolerance": 1e-9,
    "dual_feasibility_tolerance": 1e-9,
}

_STATUS = {
    0: "optimal",
    1: "iteration_limit",
    2: "infeasible",
    3: "unbounded",
    4: "numerical",
}


@dataclass(frozen=True)
class Column:
    """One LP variable: a (demand, path) pair with its constraint footprint."""

    demand_id: int
    path: Path
    cost: float
    edge_coeff: Mapping[Edge, float]
    node_coeff: Mapping[NodeId, float]

    @classmethod
    def from_path(cls, path: Path, demand: Demand) -> "Column":
        if path.demand_id != demand.id:
            raise ContractError("path/demand mismatch")
        if path.is_dummy:
            # Rejection placeholders consume nothing, so they can never make
            # the master infeasible.
            return cls(demand.id, path, path.total_delay_ms, {}, {})
        r = demand.rate_mbps
        return cls(
            demand_id=demand.id,
            path=path,
            cost=path.total_delay_ms,
            edge_coeff=MappingProxyType({e: r for e in path.edges}),
            node_coeff=MappingProxyType({i: r for i in path.nodes}),
        )

    @property
    def is_dummy(self) -> bool:
        return self.path.is_dummy


@dataclass(frozen=True)
class DualPoint:
    """Dual prices from one master solve.

    ``edge_duals`` and ``node_duals`` price capacity (nonnegative);
    ``convexity_duals`` carry one free multiplier per demand.
    """

    edge_duals: Mapping[Edge, float]
    node_duals: tuple[float, ...]
    convexity_duals: Mapping[int, float]

    @classmethod
    def zero(cls, graph: OverlayGraph, demands: Sequence[Demand]) -> "DualPoint":
        return cls(
            edge_duals=MappingProxyType({e: 0.0 for e in graph.real_edges()}),
            node_duals=(0.0,) * graph.n_nodes,
            convexity_duals=MappingProxyType({d.id: 0.0 for d in demands}),
        )


@dataclass(frozen=True)
class RmpSolution:
    """Primal/dual optimum of the master over its current column pool."""

    values: tuple[float, ...]
    objective: float
    duals: DualPoint
    status: str


def dual_objective(duals: DualPoint, graph: OverlayGraph) -> float:
    """Value of the dual point: sum of convexity prices minus paid capacity."""
    paid = sum(
        duals.edge_duals[e] * graph.edges[e].capacity_mbps for e in duals.edge_duals
    )
    paid += sum(nu * cap for nu, cap in zip(duals.node_duals, graph.node_limits))
    return sum(duals.convexity_duals.values()) - paid


class RestrictedMaster:
    """Mutable column pool plus LP assembly and solve.

    Construction seeds one dummy column per demand, so the LP is feasible
    and bounded from the first solve onward. Only this class may create
    dummy columns.
    """

    def __init__(
        self,
        graph: OverlayGraph,
        demands: Sequence[Demand],
        penalty: float | None = None,
    ):
        if not demands:
            raise InputError("master needs at least one demand")
        ids = [d.id for d in demands]
        if len(set(ids)) != len(ids):
            raise InputError("demand ids must be unique")
        self.graph = graph
        self.demands = tuple(sorted(demands, key=lambda d: d.id))
        self.dummy_penalty = dummy_penalty(graph) if penalty is None else float(penalty)
        self._demand_by_id = {d.id: d for d in self.demands}

        self._edge_rows = {e: r for r, e in enumerate(graph.real_edges())}
        self._node_offset = len(self._edge_rows)
        self._eq_row = {d.id: r for r, d in enumerate(self.demands)}

        self._columns: list[Column] = []
        self._by_demand: dict[int, list[int]] = {d.id: [] for d in self.demands}
        self._dedup: dict[tuple, int] = {}
        for d in self.demands:
            self._append(Column.from_path(make_dummy_path(d, self.dummy_penalty), d))

    # -- pool ---------------------------------------------------------------

    @property
    def columns(self) -> Sequence[Column]:
        return tuple(self._columns)

    @property
    def pool_size(self) -> int:
        return len(self._columns)

    def columns_of(self, demand_id: int) -> list[int]:
        return list(self._by_demand[demand_id])

    def dummy_column_of(self, demand_id: int) -> int:
        return self._by_demand[demand_id][0]

    def _key(self, column: Column) -> tuple:
        return (column.demand_id, column.path.edges, column.is_dummy)

    def _append(self, column: Column) -> int:
        cid = len(self._columns)
        self._columns.append(column)
        self._by_demand[column.demand_id].append(cid)
        self._dedup[self._key(column)] = cid
        return cid

    def add_column(self, column: Column) -> int:
        """Add a priced-out column; re-adding an existing one is a no-op."""
        if column.demand_id not in self._demand_by_id:
            raise ContractError(f"unknown demand id {column.demand_id}")
        if column.is_dummy:
            raise ContractError("dummy columns are created internally only")
        demand = self._demand_by_id[column.demand_id]
        if not qos_feasible(column.path, demand):
            raise ContractError("column path violates the demand's QoS bounds")
        existing = self._dedup.get(self._key(column))
        if existing is not None:
            return existing
        return self._append(column)

    # -- LP -----------------------------------------------------------------

    def _assemble(self):
        n = len(self._columns)
        cost = np.array([c.cost for c in self._columns])
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        for j, col in enumerate(self._columns):
            for e, a in col.edge_coeff.items():
                rows.append(self._edge_rows[e])
                cols.append(j)
                vals.append(a)
            for i, a in col.node_coeff.items():
                rows.append(self._node_offset + i)
                cols.append(j)
                vals.append(a)
        n_ub = self._node_offset + self.graph.n_nodes
        a_ub = sparse.csc_matrix((vals, (rows, cols)), shape=(n_ub, n))
        b_ub = np.empty(n_ub)
        for e, r in self._edge_rows.items():
            b_ub[r] = self.graph.edges[e].capacity_mbps
        b_ub[self._node_offset :] = self.graph.node_limits

        eq_rows = [self._eq_row[c.demand_id] for c in self._columns]
        a_eq = sparse.csc_matrix(
            (np.ones(n), (eq_rows, range(n))), shape=(len(self.demands), n)
        )
        b_eq = np.ones(len(self.demands))
        return cost, a_ub, b_ub, a_eq, b_eq

    def solve(
        self,
        forced: Iterable[int] = (),
        forbidden: Iterable[int] = (),
        allow_infeasible: bool = False,
    ) -> RmpSolution:
        """Solve the LP over the current pool and return primal and duals.

        ``forced``/``forbidden`` pin columns to 1/0 via variable bounds;
        that is the branching hook for the exact search. Fixing can make
        the LP infeasible, which is only an error when not expected.
        """
        cost, a_ub, b_ub, a_eq, b_eq = self._assemble()
        bounds = [(0.0, None)] * len(self._columns)
        for j in forced:
            bounds[j] = (1.0, 1.0)
        for j in forbidden:
            bounds[j] = (0.0, 0.0)
        res = linprog(
            cost,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
            options=_LP_OPTIONS,
        )
        status = _STATUS.get(res.status, f"status_{res.status}")
        if res.status == 2 and allow_infeasible:
            return RmpSolution(
                values=(),
                objective=math.inf,
                duals=DualPoint.zero(self.graph, self.demands),
                status=status,
            )
        if res.status != 0:
            raise SolverError(
                f"LP backend returned '{status}' on a master that is feasible "
                f"and bounded by construction: {res.message}"
            )
        lam = {e: max(0.0, -res.ineqlin.marginals[r]) for e, r in self._edge_rows.items()}
        nu = tuple(
            max(0.0, -res.ineqlin.marginals[self._node_offset + i])
            for i in range(self.graph.n_nodes)
        )
        sigma = {d.id: float(res.eqlin.marginals[self._eq_row[d.id]]) for d in self.demands}
        return RmpSolution(
            values=tuple(float(v) for v in res.x),
            objective=float(res.fun),
            duals=DualPoint(MappingProxyType(lam), nu, MappingProxyType(sigma)),
            status=status,
        )

    # -- diagnostics ----------------------------------------------------------

    def dump_lp(self) -> str:
        """Render the current LP in CPLEX LP text format for external checks."""
        lines = ["\\ restricted master debug dump", "Minimize"]
        terms = " + ".join(f"{c.cost!r} y{j}" for j, c in enumerate(self._columns))
        lines.append(f" obj: {terms}")
        lines.append("Subject To")
        for e, r in self._edge_rows.items():
            lhs = [
                f"{col.edge_coeff[e]!r} y{j}"
                for j, col in enumerate(self._columns)
                if e in col.edge_coeff
            ]
            if lhs:
                cap = self.graph.edges[e].capacity_mbps
                lines.append(f" cap_e_{e[0]}_{e[1]}: {' + '.join(lhs)} <= {cap!r}")
        for i in range(self.graph.n_nodes):
            lhs = [
                f"{col.node_coeff[i]!r} y{j}"
                for j, col in enumerate(self._columns)
                if i in col.node_coeff
            ]
            if lhs:
                lines.append(
                    f" cap_n_{i}: {' + '.join(lhs)} <= {self.graph.node_limits[i]!r}"
                )
        for d in self.demands:
            lhs = " + ".join(f"y{j}" for j in self._by_demand[d.id])
            lines.append(f" cvx_{d.id}: {lhs} = 1")
        lines.append("Bounds")
        for j in range(len(self._columns)):
            lines.append(f" 0 <= y{j}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def build_initial(
    graph: OverlayGraph, demands: Sequence[Demand], penalty: float | None = None
) -> RestrictedMaster:
    """Master seeded with one dummy column per demand (always feasible)."""
    return RestrictedMaster(graph, demands, penalty)
