"""Problem instances, budgets, statistics and solve results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import BudgetExceeded, NotSymmetric, RankDeficientRows
from .linalg import IntMatrix, IntVec, dot, rank


@dataclass(frozen=True)
class IqpInstance:
    """``min x^T Q x + c^T x`` over ``A x <= b`` (and optional ``C0 x = d0``),
    with every variable integer.

    Q must be symmetric (rejected, never symmetrized); C0, when present, must
    have full row rank.
    """

    q: IntMatrix
    c: IntVec
    a: IntMatrix
    b: IntVec
    c0: IntMatrix | None = None
    d0: IntVec | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(v) for v in self.c))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if self.d0 is not None:
            object.__setattr__(self, "d0", tuple(int(v) for v in self.d0))
        n = self.q.ncols
        if n == 0:
            raise ValueError("instance dimension must be at least 1")
        if self.q.nrows != n or not self.q.is_symmetric():
            raise NotSymmetric("objective matrix must be square and symmetric")
        if len(self.c) != n:
            raise ValueError("linear term has wrong length")
        if self.a.ncols != n:
            raise ValueError("constraint matrix width does not match dimension")
        if self.a.nrows != len(self.b):
            raise ValueError("right-hand side length does not match constraint rows")
        if (self.c0 is None) != (self.d0 is None):
            raise ValueError("equality matrix and right-hand side must come together")
        if self.c0 is not None:
            if self.c0.ncols != n:
                raise ValueError("equality matrix width does not match dimension")
            if self.c0.nrows != len(self.d0):
                raise ValueError("equality right-hand side has wrong length")
            if rank(self.c0) != self.c0.nrows:
                raise RankDeficientRows("initial equality system must have full row rank")

    @property
    def n(self) -> int:
        return self.q.ncols

    def objective(self, x: Sequence[int]) -> int:
        qx = self.q.matvec(x)
        return dot(x, qx) + dot(self.c, x)

    def is_feasible(self, x: Sequence[int]) -> bool:
        if len(x) != self.n:
            return False
        if any(dot(row, x) > rhs for row, rhs in zip(self.a.data, self.b)):
            return False
        if self.c0 is not None:
            if any(dot(row, x) != rhs for row, rhs in zip(self.c0.data, self.d0)):
                return False
        return True


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED_REGION = "unbounded-region"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class Budget:
    """Monotone work budget shared by a solver run and its ILP leaves.

    Exceeding a limit raises :class:`BudgetExceeded`; the search never
    silently truncates.
    """

    max_nodes: int = 10**6
    max_children: int = 10**5
    used_nodes: int = 0

    def charge(self, amount: int = 1) -> None:
        self.used_nodes += amount
        if self.used_nodes > self.max_nodes:
            raise BudgetExceeded(f"node budget of {self.max_nodes} exhausted")

    def check_children(self, count: int) -> None:
        if count > self.max_children:
            raise BudgetExceeded(
                f"node would create {count} children, budget is {self.max_children}"
            )


@dataclass
class PathStats:
    """Branching history along the path that first reached a node."""

    constraint_steps: int = 0
    gradient_steps: int = 0
    batch_performed: bool = False
    max_delta_seen: int | None = None
    children_generated: int = 0

    def stepped(self, kind: str) -> "PathStats":
        return PathStats(
            constraint_steps=self.constraint_steps + (kind == "constraint"),
            gradient_steps=self.gradient_steps + (kind == "gradient"),
            batch_performed=self.batch_performed or kind == "batch",
            max_delta_seen=self.max_delta_seen,
        )


@dataclass
class SolveStats:
    """Aggregated counters for one solver run."""

    nodes: int = 0
    leaves: int = 0
    ilp_nodes: int = 0
    constraint_children: int = 0
    gradient_children: int = 0
    batch_children: int = 0
    batches_performed: int = 0
    pruned_children: int = 0
    memo_hits: int = 0
    max_depth: int = 0
    max_gradient_steps: int = 0
    max_delta_seen: int | None = None
    delta_exact: bool | None = None
    nodes_per_depth: dict[int, int] = field(default_factory=dict)
    children_per_depth: dict[int, int] = field(default_factory=dict)

    def record_node(self, depth: int) -> None:
        self.nodes += 1
        self.max_depth = max(self.max_depth, depth)
        self.nodes_per_depth[depth] = self.nodes_per_depth.get(depth, 0) + 1

    def record_children(self, depth: int, count: int) -> None:
        self.children_per_depth[depth] = self.children_per_depth.get(depth, 0) + count

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "ilp_nodes": self.ilp_nodes,
            "constraint_children": self.constraint_children,
            "gradient_children": self.gradient_children,
            "batch_children": self.batch_children,
            "batches_performed": self.batches_performed,
            "pruned_children": self.pruned_children,
            "memo_hits": self.memo_hits,
            "max_depth": self.max_depth,
            "max_gradient_steps": self.max_gradient_steps,
            "max_delta_seen": self.max_delta_seen,
            "delta_exact": self.delta_exact,
            "nodes_per_depth": dict(sorted(self.nodes_per_depth.items())),
            "children_per_depth": dict(sorted(self.children_per_depth.items())),
        }


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solver or oracle run.

    ``value``/``witness`` are present exactly when the status is optimal; the
    witness is then feasible and attains the value.
    """

    status: SolveStatus
    value: int | None = None
    witness: IntVec | None = None
    stats: SolveStats = field(default_factory=SolveStats)
