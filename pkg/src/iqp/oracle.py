"""Brute-force ground truth for desk-scale instances.

Everything here enumerates integer points directly and stays deliberately
independent of the branching solvers: feasibility is re-checked against the
raw constraint data, objective values are evaluated from the original
quadratic, and hull vertices are certified one by one with a
convex-combination LP.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .boxprop import BoxBounds, EmptyRegion, Unbounded, bounding_box
from .errors import BudgetExceeded, UnboundedRegion
from .hull import Polytope
from .ilp import LpProblem, LpStatus, lp_solve
from .linalg import IntMatrix, IntVec, dot
from .model import IqpInstance, SolveResult, SolveStats, SolveStatus

DEFAULT_POINT_BUDGET = 10**7


def enumerate_feasible(
    p: Polytope,
    eq: tuple[IntMatrix, Sequence[int]] | None = None,
    *,
    max_points: int = DEFAULT_POINT_BUDGET,
) -> Iterator[IntVec]:
    """Yield every integer point of the polytope (and equalities) in
    lexicographic order.

    The sweep runs over the exact LP bounding box; raises
    :class:`BudgetExceeded` when the box holds more than ``max_points``
    lattice points and :class:`UnboundedRegion` when there is no box.
    """
    box = bounding_box(p.a, p.b, eq=eq)
    if box is EmptyRegion:
        return
    if box is Unbounded:
        raise UnboundedRegion("cannot enumerate an unbounded region")
    if box.volume() > max_points:
        raise BudgetExceeded(
            f"bounding box holds {box.volume()} points, budget is {max_points}"
        )
    rows = list(zip(p.a.data, p.b, (False,) * p.a.nrows))
    if eq is not None:
        eq_m, eq_d = eq
        rows += list(zip(eq_m.data, tuple(eq_d), (True,) * eq_m.nrows))
    n = p.nvars
    point = [0] * n

    def sweep(i: int) -> Iterator[IntVec]:
        if i == n:
            yield tuple(point)
            return
        for v in range(box.lower[i], box.upper[i] + 1):
            point[i] = v
            ok = True
            for row, rhs, is_eq in rows:
                # check rows fully determined by the assigned prefix
                if any(row[j] for j in range(i + 1, n)):
                    continue
                val = sum(row[j] * point[j] for j in range(i + 1))
                if (val != rhs) if is_eq else (val > rhs):
                    ok = False
                    break
            if ok:
                yield from sweep(i + 1)

    yield from sweep(0)


def oracle_min(
    instance: IqpInstance, *, max_points: int = DEFAULT_POINT_BUDGET
) -> SolveResult:
    """Exact minimum by full enumeration; the reference for the solvers.

    The witness is the lexicographically smallest optimum, which the sweep
    order provides for free.
    """
    stats = SolveStats()
    box = bounding_box(instance.a, instance.b)
    if box is Unbounded:
        return SolveResult(SolveStatus.UNBOUNDED_REGION, stats=stats)
    poly = Polytope(instance.a, instance.b)
    eq = (instance.c0, instance.d0) if instance.c0 is not None else None
    best_v: int | None = None
    best_x: IntVec | None = None
    try:
        for x in enumerate_feasible(poly, eq, max_points=max_points):
            stats.nodes += 1
            v = instance.objective(x)
            if best_v is None or v < best_v:
                best_v, best_x = v, x
    except BudgetExceeded:
        return SolveResult(SolveStatus.BUDGET_EXCEEDED, stats=stats)
    if best_v is None:
        return SolveResult(SolveStatus.INFEASIBLE, stats=stats)
    return SolveResult(SolveStatus.OPTIMAL, best_v, best_x, stats)


def brute_integer_hull_vertices(
    p: Polytope, *, max_points: int = DEFAULT_POINT_BUDGET
) -> tuple[IntVec, ...]:
    """Exact vertex set of the integer hull, certified point by point.

    A feasible integer point is a vertex iff it cannot be written as a
    convex combination of the other feasible integer points, an LP
    feasibility question solved exactly.
    """
    pts = list(enumerate_feasible(p, max_points=max_points))
    if not pts:
        return ()
    n = p.nvars
    vertices: list[IntVec] = []
    for idx, v in enumerate(pts):
        others = [q for k, q in enumerate(pts) if k != idx]
        if not others:
            vertices.append(v)
            continue
        # lambda >= 0, sum lambda = 1, sum lambda * q = v
        eq_rows = [tuple(q[i] for q in others) for i in range(n)]
        eq_rhs = list(v)
        eq_rows.append(tuple(1 for _ in others))
        eq_rhs.append(1)
        problem = LpProblem(
            objective=tuple(0 for _ in others),
            a_ineq=IntMatrix.empty(len(others)),
            b_ineq=(),
            a_eq=IntMatrix(eq_rows, ncols=len(others)),
            b_eq=tuple(eq_rhs),
            nonneg=True,
        )
        if lp_solve(problem).status is LpStatus.INFEASIBLE:
            vertices.append(v)
    return tuple(vertices)


__all__ = [
    "BoxBounds",
    "DEFAULT_POINT_BUDGET",
    "brute_integer_hull_vertices",
    "enumerate_feasible",
    "oracle_min",
]
