"""Integer-hull candidate enumeration and concave minimization.

The pipeline follows a classical two-step construction.  Every vertex of the
integer hull lies within ell-infinity distance ``n * Delta`` of some vertex
of the polytope (proximity), so around each polytope vertex a boxed corner
relaxation is built and rows that are slack beyond ``n^2 * L * Delta`` at the
vertex are dropped as redundant.  Inside a corner relaxation, points are
classified by the dyadic slab their slack falls into for every row; a cell
(one slab index per row) that contains a hull vertex contains no other
integer point, so collecting one integer point per nonempty cell yields a
superset of the hull's vertex set.  The slab parameter ``M`` depends only on
the constraint matrix, never on the right-hand side.

Slab index 0 denotes exact tightness (slack zero).  The dyadic family covers
slacks in ``[1, 2^M)`` only, yet with integer data a hull vertex can sit at
slack zero on some row, so the tight slab is required for the superset
guarantee; both endpoints of each dyadic interval are kept (overlaps are
deduplicated).

A concave quadratic attains its minimum over the integer points at a hull
vertex, so minimizing it reduces to evaluating the candidate set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .boxprop import BoxBounds, EmptyRegion, Unbounded, bounding_box, propagate_intervals
from .errors import BudgetExceeded, NotConcave, NotSymmetric, UnboundedRegion
from .ilp import LpProblem, LpStatus, ilp_solve, lp_solve
from .linalg import (
    IntMatrix,
    IntVec,
    det,
    dot,
    inertia_of_restricted_form,
    max_subdeterminant,
)
from .model import IqpInstance, SolveResult, SolveStats, SolveStatus

import itertools


@dataclass(frozen=True)
class Polytope:
    """``{x : Ax <= b}`` with integer data; may be empty, must be bounded
    for the enumeration operations (checked there, not at construction)."""

    a: IntMatrix
    b: IntVec

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if self.a.nrows != len(self.b):
            raise ValueError("right-hand side length does not match row count")

    @property
    def nvars(self) -> int:
        return self.a.ncols

    @property
    def nrows(self) -> int:
        return self.a.nrows

    def contains(self, x: Sequence) -> bool:
        return all(
            sum(r * v for r, v in zip(row, x)) <= rhs
            for row, rhs in zip(self.a.data, self.b)
        )

    def is_bounded(self) -> bool:
        return bounding_box(self.a, self.b) is not Unbounded


@dataclass(frozen=True)
class Cell:
    """One dyadic slab index per row of a corner relaxation.

    ``j_i = 0`` means the row is exactly tight; ``j_i >= 1`` confines the
    slack to ``[2^(j_i - 1), 2^j_i]``.
    """

    j: tuple[int, ...]
    corner: int


@dataclass(frozen=True)
class CellRecord:
    """A visited nonempty cell: its indices, slab system, and found point."""

    cell: Cell
    point: IntVec
    rows: tuple[tuple[IntVec, int, int], ...]  # (row, low, high) per slab

    def contains(self, x: Sequence[int]) -> bool:
        return all(lo <= dot(row, x) <= hi for row, lo, hi in self.rows)


@dataclass(frozen=True)
class HullCandidateSet:
    """Superset of the integer hull's vertices with per-point provenance."""

    points: tuple[IntVec, ...]
    provenance: dict[IntVec, Cell] = field(default_factory=dict, compare=False)
    cells: tuple[CellRecord, ...] = ()

    def __len__(self) -> int:
        return len(self.points)


def polytope_vertices(p: Polytope) -> tuple[tuple[Fraction, ...], ...]:
    """All vertices of a bounded polytope, exactly.

    Every n-subset of rows with a nonsingular square block is solved and the
    solution kept when feasible; duplicates are removed and the result is
    sorted lexicographically.  Requires ``m >= n``.
    """
    n = p.nvars
    m = p.nrows
    if m < n:
        raise ValueError("a bounded polytope needs at least n rows")
    found: set[tuple[Fraction, ...]] = set()
    for rows in itertools.combinations(range(m), n):
        sub = p.a.submatrix(rows, range(n))
        if det(sub) == 0:
            continue
        rhs = tuple(p.b[i] for i in rows)
        x = _solve_square(sub, rhs)
        if p.contains(x):
            found.add(x)
    return tuple(sorted(found))


def _solve_square(m: IntMatrix, rhs: IntVec) -> tuple[Fraction, ...]:
    n = m.nrows
    aug = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(m.data, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        aug[col] = prow = [v * inv for v in prow]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], prow)]
    return tuple(aug[i][n] for i in range(n))


def b_independent_M(a: IntMatrix, *, max_evals: int = 10**6) -> int:
    """Smallest M with ``2 n^2 L Delta < 2^M``.

    ``Delta`` is the exact maximum absolute n x n minor of A and ``L`` its
    largest absolute entry; the value depends only on the matrix, not on any
    right-hand side.
    """
    n = a.ncols
    delta = max_subdeterminant(a, "exact", max_evals=max_evals, size=n)
    bound = 2 * n * n * a.max_abs() * delta
    m = 1
    while (1 << m) <= bound:
        m += 1
    return m


def _corner_rows(
    p: Polytope,
    vertex: tuple[Fraction, ...],
    n_delta: int,
    slack_threshold: int,
) -> tuple[tuple[IntVec, int], ...]:
    """Rows of the corner relaxation: kept originals plus integer box rows."""
    n = p.nvars
    rows: list[tuple[IntVec, int]] = []
    for row, rhs in zip(p.a.data, p.b):
        slack = rhs - sum(r * v for r, v in zip(row, vertex))
        if slack <= slack_threshold:
            rows.append((row, rhs))
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        hi = vertex[i] + n_delta
        lo = vertex[i] - n_delta
        rows.append((unit, hi.numerator // hi.denominator))  # floor
        rows.append((tuple(-u for u in unit), (-lo).numerator // (-lo).denominator))
    return tuple(rows)


def integer_hull_vertex_superset(
    p: Polytope,
    *,
    max_cells: int = 10**6,
    max_subdet_evals: int = 10**6,
    collect_cells: bool = False,
) -> HullCandidateSet:
    """A feasible integer superset of the integer hull's vertex set.

    Cells are walked row-by-row in depth-first order with exact interval
    propagation against each partial slab system; surviving full cells are
    checked by LP before a single ILP feasibility call extracts their integer
    point.  Raises :class:`UnboundedRegion` for unbounded input and
    :class:`BudgetExceeded` when more than ``max_cells`` cells are visited.
    """
    n = p.nvars
    global_box = bounding_box(p.a, p.b)
    if global_box is Unbounded:
        raise UnboundedRegion("integer hull enumeration needs a bounded polytope")
    if global_box is EmptyRegion:
        return HullCandidateSet(points=())

    delta = max_subdeterminant(p.a, "exact", max_evals=max_subdet_evals, size=n)
    l_a = p.a.max_abs()
    m_param = b_independent_M(p.a, max_evals=max_subdet_evals)
    n_delta = n * delta
    slack_threshold = n * n * l_a * delta

    points: dict[IntVec, Cell] = {}
    cells: list[CellRecord] = []
    visited = 0

    for corner_id, vertex in enumerate(polytope_vertices(p)):
        rows = _corner_rows(p, vertex, n_delta, slack_threshold)
        corner_box = propagate_intervals(
            tuple((row, None, rhs) for row, rhs in rows), global_box
        )
        if corner_box is None:
            continue
        if corner_box.volume() <= _CORNER_SWEEP_VOLUME:
            visited = _sweep_corner(
                rows,
                corner_box,
                m_param,
                corner_id,
                points,
                cells,
                collect_cells,
                visited,
                max_cells,
            )
            continue

        slab_stack: list[tuple[IntVec, int, int]] = []  # (row, low, high) so far

        def walk(idx: int, cur_box: BoxBounds) -> None:
            nonlocal visited
            visited += 1
            if visited > max_cells:
                raise BudgetExceeded(
                    f"cell enumeration exceeded its budget of {max_cells}"
                )
            if idx == len(rows):
                _finish_cell(
                    p,
                    slab_stack,
                    cur_box,
                    Cell(tuple(entry[3] for entry in slab_stack), corner_id),
                    points,
                    cells,
                    collect_cells,
                )
                return
            row, rhs = rows[idx]
            vlo, vhi = _value_interval(row, cur_box)
            smin = rhs - vhi  # smallest achievable slack
            smax = rhs - vlo
            for j in range(0, m_param + 1):
                if j == 0:
                    slo = shi = 0
                else:
                    slo, shi = 1 << (j - 1), 1 << j
                if shi < smin or slo > smax:
                    continue
                lo_val, hi_val = rhs - shi, rhs - slo
                nxt = propagate_intervals(((row, lo_val, hi_val),), cur_box)
                if nxt is None:
                    continue
                slab_stack.append((row, lo_val, hi_val, j))
                walk(idx + 1, nxt)
                slab_stack.pop()

        walk(0, corner_box)

    ordered = tuple(sorted(points))
    return HullCandidateSet(
        points=ordered,
        provenance=points,
        cells=tuple(cells) if collect_cells else (),
    )


_CORNER_SWEEP_VOLUME = 65536


def _slabs_of_slack(s: int, m_param: int) -> tuple[int, ...]:
    """Dyadic slab indices containing an integer slack (empty if too large)."""
    if s == 0:
        return (0,)
    bl = s.bit_length()
    out = []
    if 1 <= bl - 1 <= m_param and s == 1 << (bl - 1):
        out.append(bl - 1)
    if bl <= m_param:
        out.append(bl)
    return tuple(out)


def _sweep_corner(
    rows,
    corner_box: BoxBounds,
    m_param: int,
    corner_id: int,
    points: dict,
    cells: list,
    collect_cells: bool,
    visited: int,
    max_cells: int,
) -> int:
    """Direct point sweep of a small corner relaxation.

    Each lattice point of the corner box is assigned to the cell(s) its slack
    vector falls into; the first point a cell sees in lexicographic order is
    exactly the point the per-cell ILP would report, so the output matches
    the depth-first cell walk.
    """
    seen_cells: set[tuple[int, ...]] = set()
    for pt in itertools.product(
        *(range(lo, hi + 1) for lo, hi in zip(corner_box.lower, corner_box.upper))
    ):
        slab_options: list[tuple[int, ...]] = []
        ok = True
        for row, rhs in rows:
            slack = rhs - dot(row, pt)
            if slack < 0:
                ok = False
                break
            slabs = _slabs_of_slack(slack, m_param)
            if not slabs:
                ok = False  # slack beyond every slab: in no cell
                break
            slab_options.append(slabs)
        if not ok:
            continue
        for sig in itertools.product(*slab_options):
            if sig in seen_cells:
                continue
            seen_cells.add(sig)
            visited += 1
            if visited > max_cells:
                raise BudgetExceeded(
                    f"cell enumeration exceeded its budget of {max_cells}"
                )
            cell = Cell(sig, corner_id)
            if pt not in points:
                points[pt] = cell
            if collect_cells:
                cells.append(
                    CellRecord(
                        cell=cell,
                        point=pt,
                        rows=tuple(
                            (row, rhs, rhs)
                            if j == 0
                            else (row, rhs - (1 << j), rhs - (1 << (j - 1)))
                            for (row, rhs), j in zip(rows, sig)
                        ),
                    )
                )
    return visited


def _value_interval(row: IntVec, box: BoxBounds) -> tuple[int, int]:
    lo = hi = 0
    for coef, lo_b, hi_b in zip(row, box.lower, box.upper):
        if coef > 0:
            lo += coef * lo_b
            hi += coef * hi_b
        elif coef < 0:
            lo += coef * hi_b
            hi += coef * lo_b
    return lo, hi


_SMALL_CELL_VOLUME = 256


def _finish_cell(
    p: Polytope,
    slab_stack,
    cur_box: BoxBounds,
    cell: Cell,
    points: dict,
    cells: list,
    collect_cells: bool,
) -> None:
    """Extract the lexicographically first integer point of a full cell.

    Cells whose propagated box is tiny are swept directly (same point the
    ILP would return); larger cells go through the LP-infeasibility filter
    and one exact ILP feasibility solve.
    """
    n = p.nvars
    pt: IntVec | None = None
    if cur_box.volume() <= _SMALL_CELL_VOLUME:
        for cand in itertools.product(
            *(range(lo, hi + 1) for lo, hi in zip(cur_box.lower, cur_box.upper))
        ):
            if all(
                lo_val <= dot(row, cand) <= hi_val
                for row, lo_val, hi_val, _j in slab_stack
            ):
                pt = cand
                break
        if pt is None:
            return
    else:
        ineq_rows: list[IntVec] = []
        ineq_rhs: list[int] = []
        eq_rows: list[IntVec] = []
        eq_rhs: list[int] = []
        for row, lo_val, hi_val, _j in slab_stack:
            if lo_val == hi_val:
                eq_rows.append(row)
                eq_rhs.append(lo_val)
            else:
                ineq_rows.append(row)
                ineq_rhs.append(hi_val)
                ineq_rows.append(tuple(-v for v in row))
                ineq_rhs.append(-lo_val)
        box_rows, box_rhs = cur_box.as_rows()
        ineq_rows.extend(box_rows)
        ineq_rhs.extend(box_rhs)
        problem = LpProblem(
            objective=tuple(0 for _ in range(n)),
            a_ineq=IntMatrix._trusted(tuple(ineq_rows), n),
            b_ineq=tuple(ineq_rhs),
            a_eq=IntMatrix._trusted(tuple(eq_rows), n) if eq_rows else None,
            b_eq=tuple(eq_rhs) if eq_rhs else None,
        )
        if lp_solve(problem).status is not LpStatus.OPTIMAL:
            return
        out = ilp_solve(problem, lexicographic=True)
        if out.status is not LpStatus.OPTIMAL:
            return
        pt = out.point
    if pt not in points:
        points[pt] = cell
    if collect_cells:
        cells.append(
            CellRecord(
                cell=cell,
                point=pt,
                rows=tuple((row, lo, hi) for row, lo, hi, _j in slab_stack),
            )
        )


def concave_minimize(
    p: Polytope,
    q: IntMatrix,
    c: Sequence[int],
    *,
    max_cells: int = 10**6,
) -> SolveResult:
    """Exact minimum of a concave quadratic over the polytope's integer points.

    The quadratic must have no positive eigenvalue (verified by exact
    congruence; :class:`NotConcave` otherwise).  The minimum of a concave
    function is attained at a vertex of the integer hull, so the candidate
    superset is evaluated directly.
    """
    c = tuple(int(v) for v in c)
    n = p.nvars
    if q.nrows != n or not q.is_symmetric():
        raise NotSymmetric("objective matrix must be symmetric and match the polytope")
    inertia = inertia_of_restricted_form(q, IntMatrix.identity(n))
    if inertia.positive > 0:
        raise NotConcave(
            f"objective has {inertia.positive} positive eigenvalue(s)"
        )
    box = bounding_box(p.a, p.b)
    if box is Unbounded:
        return SolveResult(SolveStatus.UNBOUNDED_REGION)
    stats = SolveStats()
    if box is EmptyRegion:
        return SolveResult(SolveStatus.INFEASIBLE, stats=stats)

    candidates = integer_hull_vertex_superset(p, max_cells=max_cells)
    stats.nodes = len(candidates.points)
    if not candidates.points:
        feas = ilp_solve(
            LpProblem(tuple(0 for _ in range(n)), p.a, p.b), lexicographic=False
        )
        if feas.status is LpStatus.INFEASIBLE:
            return SolveResult(SolveStatus.INFEASIBLE, stats=stats)
        raise AssertionError("candidate set empty although integer points exist")

    best_v: int | None = None
    best_x: IntVec | None = None
    for x in candidates.points:
        qx = q.matvec(x)
        v = dot(x, qx) + dot(c, x)
        if best_v is None or v < best_v or (v == best_v and x < best_x):
            best_v, best_x = v, x
    return SolveResult(SolveStatus.OPTIMAL, best_v, best_x, stats)
