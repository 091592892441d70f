"""Exact rational LP and integer LP solvers.

The LP solver is a primal simplex on an integer tableau: every tableau entry
is stored as an integer sharing one common denominator (the determinant of
the current basis), so pivots are fraction-free integer cross-multiplications
with exact divisions and rationals only appear when a solution is extracted.
Artificial variables carry a symbolic big-M cost, handled as a second
objective row compared lexicographically, which folds the two simplex phases
into one loop.  Pivoting is smallest-index (Bland) in both objective tiers,
so the solver cannot cycle and is fully deterministic.

The ILP solver is branch-and-bound on the lowest-index fractional coordinate
with exact best-value pruning, followed by a lexicographic refinement stage
that pins coordinates one at a time so the reported witness is the
lexicographically smallest optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded
from .linalg import IntMatrix, IntVec, RatVec, dot


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """Minimize ``objective . x`` over ``A_ineq x <= b_ineq``, ``A_eq x = b_eq``.

    Variables are free unless ``nonneg`` is set (then ``x >= 0`` is implicit,
    which halves the tableau for problems that are naturally nonnegative).
    """

    objective: IntVec
    a_ineq: IntMatrix
    b_ineq: IntVec
    a_eq: IntMatrix | None = None
    b_eq: IntVec | None = None
    nonneg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(int(v) for v in self.objective))
        object.__setattr__(self, "b_ineq", tuple(int(v) for v in self.b_ineq))
        if self.b_eq is not None:
            object.__setattr__(self, "b_eq", tuple(int(v) for v in self.b_eq))
        n = len(self.objective)
        if self.a_ineq.ncols != n:
            raise ValueError("inequality matrix width does not match objective")
        if self.a_ineq.nrows != len(self.b_ineq):
            raise ValueError("inequality right-hand side has wrong length")
        if (self.a_eq is None) != (self.b_eq is None):
            raise ValueError("equality matrix and right-hand side must come together")
        if self.a_eq is not None:
            if self.a_eq.ncols != n:
                raise ValueError("equality matrix width does not match objective")
            if self.a_eq.nrows != len(self.b_eq):
                raise ValueError("equality right-hand side has wrong length")

    @property
    def nvars(self) -> int:
        return len(self.objective)

    def with_extra_ineq(self, rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> "LpProblem":
        a = self.a_ineq.data + tuple(tuple(int(v) for v in r) for r in rows)
        new = object.__new__(LpProblem)
        object.__setattr__(new, "objective", self.objective)
        object.__setattr__(new, "a_ineq", IntMatrix._trusted(a, self.nvars))
        object.__setattr__(new, "b_ineq", self.b_ineq + tuple(int(v) for v in rhs))
        object.__setattr__(new, "a_eq", self.a_eq)
        object.__setattr__(new, "b_eq", self.b_eq)
        object.__setattr__(new, "nonneg", self.nonneg)
        return new

    def with_objective(self, objective: Sequence[int]) -> "LpProblem":
        new = object.__new__(LpProblem)
        object.__setattr__(new, "objective", tuple(int(v) for v in objective))
        object.__setattr__(new, "a_ineq", self.a_ineq)
        object.__setattr__(new, "b_ineq", self.b_ineq)
        object.__setattr__(new, "a_eq", self.a_eq)
        object.__setattr__(new, "b_eq", self.b_eq)
        object.__setattr__(new, "nonneg", self.nonneg)
        return new


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Fraction | None
    point: RatVec | None


@dataclass(frozen=True)
class IlpOutcome:
    status: LpStatus
    value: int | None
    point: IntVec | None


_MAX_PIVOTS_SLACK = 2000


def lp_solve(problem: LpProblem) -> LpOutcome:
    """Exact rational optimum of the linear program (see module docstring)."""
    n = problem.nvars
    if n == 0:
        feasible = all(v >= 0 for v in problem.b_ineq) and (
            problem.b_eq is None or all(v == 0 for v in problem.b_eq)
        )
        if feasible:
            return LpOutcome(LpStatus.OPTIMAL, Fraction(0), ())
        return LpOutcome(LpStatus.INFEASIBLE, None, None)

    split = not problem.nonneg
    nstruct = 2 * n if split else n
    raw_rows: list[tuple[IntVec, int]] = [
        (problem.a_ineq.row(i), problem.b_ineq[i]) for i in range(problem.a_ineq.nrows)
    ]
    n_ineq = len(raw_rows)
    if problem.a_eq is not None:
        raw_rows += [
            (problem.a_eq.row(i), problem.b_eq[i]) for i in range(problem.a_eq.nrows)
        ]
    m = len(raw_rows)

    slack_base = nstruct
    art_base = slack_base + n_ineq
    # Which rows need an artificial: equalities always, inequalities whose
    # right-hand side had to be negated (their slack enters with -1).
    needs_art = [
        (i >= n_ineq) or (raw_rows[i][1] < 0) for i in range(m)
    ]
    nart = sum(needs_art)
    width = art_base + nart + 1  # +1 for the right-hand side column

    tableau: list[list[int]] = []
    basis: list[int] = []
    art_col = art_base
    for i, (a, rhs) in enumerate(raw_rows):
        sign = -1 if rhs < 0 else 1
        row = [0] * width
        for j in range(n):
            v = sign * a[j]
            if v:
                row[j] = v
                if split:
                    row[n + j] = -v
        if i < n_ineq:
            row[slack_base + i] = sign
        row[-1] = sign * rhs
        if needs_art[i]:
            row[art_col] = 1
            basis.append(art_col)
            art_col += 1
        else:
            basis.append(slack_base + i)
        tableau.append(row)

    denom = 1
    # Objective rows: P carries the big-M (artificial) part, R the real part.
    # Both are stored as denom * (reduced cost); column selection compares the
    # pair (P, R) lexicographically against zero.
    p_row = [0] * width
    for j in range(art_base, art_base + nart):
        p_row[j] = denom
    for i in range(m):
        if needs_art[i]:
            trow = tableau[i]
            for j in range(width):
                p_row[j] -= trow[j]
    r_row = [0] * width
    for j in range(n):
        cj = problem.objective[j]
        if cj:
            r_row[j] = cj
            if split:
                r_row[n + j] = -cj
    enterable = art_base  # artificial columns never re-enter

    max_pivots = _MAX_PIVOTS_SLACK + 50 * (m + width)
    pivots = 0
    while True:
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex exceeded its pivot safety cap")
        col = None
        for j in range(enterable):
            if p_row[j] < 0:
                col = j
                break
        if col is None:
            for j in range(enterable):
                if p_row[j] == 0 and r_row[j] < 0:
                    col = j
                    break
        if col is None:
            break  # optimal for the big-M program

        pivot_row = None
        best_num = best_den = 0
        for i in range(m):
            a = tableau[i][col]
            if a > 0:
                rhs = tableau[i][-1]
                if pivot_row is None:
                    pivot_row, best_num, best_den = i, rhs, a
                else:
                    lhs = rhs * best_den
                    rhs2 = best_num * a
                    if lhs < rhs2 or (lhs == rhs2 and basis[i] < basis[pivot_row]):
                        pivot_row, best_num, best_den = i, rhs, a
        if pivot_row is None:
            art_sum = sum(tableau[i][-1] for i in range(m) if basis[i] >= art_base)
            if p_row[col] < 0 or art_sum > 0:
                # A ray cannot decrease the artificial sum below zero, so a
                # missing ratio bound with the big-M part still positive means
                # the original system is infeasible.
                if art_sum > 0:
                    return LpOutcome(LpStatus.INFEASIBLE, None, None)
                raise AssertionError("big-M objective claimed unbounded")
            return LpOutcome(LpStatus.UNBOUNDED, None, None)

        piv = tableau[pivot_row][col]
        trow = tableau[pivot_row]
        same_scale = piv == denom
        for i in range(m):
            if i == pivot_row:
                continue
            row = tableau[i]
            f = row[col]
            if f:
                tableau[i] = [
                    (piv * a - f * b) // denom if (a or b) else 0
                    for a, b in zip(row, trow)
                ]
            elif not same_scale:
                tableau[i] = [(piv * v) // denom if v else 0 for v in row]
        f = p_row[col]
        if f:
            p_row = [
                (piv * a - f * b) // denom if (a or b) else 0
                for a, b in zip(p_row, trow)
            ]
        elif not same_scale:
            p_row = [(piv * v) // denom if v else 0 for v in p_row]
        f = r_row[col]
        if f:
            r_row = [
                (piv * a - f * b) // denom if (a or b) else 0
                for a, b in zip(r_row, trow)
            ]
        elif not same_scale:
            r_row = [(piv * v) // denom if v else 0 for v in r_row]
        basis[pivot_row] = col
        denom = piv

    for i in range(m):
        if basis[i] >= art_base and tableau[i][-1] != 0:
            return LpOutcome(LpStatus.INFEASIBLE, None, None)

    nums = [0] * nstruct
    for i in range(m):
        if basis[i] < nstruct:
            nums[basis[i]] = tableau[i][-1]
    if split:
        xnum = [nums[j] - nums[n + j] for j in range(n)]
    else:
        xnum = nums[:n]
    _verify_point(problem, xnum, denom)
    point = tuple(Fraction(v, denom) for v in xnum)
    value = Fraction(dot(problem.objective, xnum), denom)
    return LpOutcome(LpStatus.OPTIMAL, value, point)


def _verify_point(problem: LpProblem, xnum: Sequence[int], denom: int) -> None:
    """Exact integer sanity check of the solution; guards the tableau math."""
    for row, rhs in zip(problem.a_ineq.data, problem.b_ineq):
        if dot(row, xnum) > rhs * denom:
            raise AssertionError("simplex produced an infeasible point")
    if problem.a_eq is not None:
        for row, rhs in zip(problem.a_eq.data, problem.b_eq):
            if dot(row, xnum) != rhs * denom:
                raise AssertionError("simplex violated an equality")
    if problem.nonneg and any(v < 0 for v in xnum):
        raise AssertionError("simplex violated nonnegativity")


class _NodeCounter:
    """Fallback budget when the caller does not supply one."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(
                f"integer program exceeded its node budget of {self.limit}"
            )


def _first_fractional(point: RatVec) -> int | None:
    for i, v in enumerate(point):
        if v.denominator != 1:
            return i
    return None


def _bb_minimum(
    problem: LpProblem, counter, prune: bool
) -> tuple[LpStatus, Fraction | None, IntVec | None]:
    """Depth-first branch and bound; returns the exact integer minimum."""
    best_val: Fraction | None = None
    best_pt: IntVec | None = None
    stack: list[tuple[tuple[tuple[IntVec, int], ...], ...]] = [()]
    while stack:
        extra = stack.pop()
        counter.charge(1)
        sub = problem.with_extra_ineq([r for r, _ in extra], [v for _, v in extra]) if extra else problem
        out = lp_solve(sub)
        if out.status is LpStatus.INFEASIBLE:
            continue
        if out.status is LpStatus.UNBOUNDED:
            return (LpStatus.UNBOUNDED, None, None)
        if prune and best_val is not None and out.value >= best_val:
            continue
        frac = _first_fractional(out.point)
        if frac is None:
            if best_val is None or out.value < best_val:
                best_val = out.value
                best_pt = tuple(int(v) for v in out.point)
            continue
        v = out.point[frac]
        floor_v = v.numerator // v.denominator
        unit = tuple(1 if j == frac else 0 for j in range(problem.nvars))
        neg_unit = tuple(-u for u in unit)
        # floor branch is pushed last so it is explored first
        stack.append(extra + ((neg_unit, -(floor_v + 1)),))
        stack.append(extra + ((unit, floor_v),))
    if best_val is None:
        return (LpStatus.INFEASIBLE, None, None)
    return (LpStatus.OPTIMAL, best_val, best_pt)


def ilp_solve(
    problem: LpProblem,
    *,
    lexicographic: bool = True,
    prune: bool = True,
    max_nodes: int = 10**6,
    counter=None,
    lex_threshold: int | None = None,
) -> IlpOutcome:
    """Exact integer minimum of the linear program.

    The relaxation must be bounded in the objective direction (callers keep
    feasible regions bounded).  With ``lexicographic`` the returned point is
    the lexicographically smallest integer optimum, obtained by fixing the
    optimal value and then minimizing the coordinates one at a time.  With
    ``prune`` disabled the branch-and-bound explores every node; results do
    not change (used to test pruning soundness).

    ``lex_threshold`` skips the refinement stage when the optimum is strictly
    worse: the outcome then carries ``point=None``.  Callers use it when a
    better incumbent already exists, so the suppressed witness could never be
    consulted.

    Raises :class:`BudgetExceeded` when more than ``max_nodes`` relaxations
    are solved (``counter`` may share that budget across calls).
    """
    counter = counter if counter is not None else _NodeCounter(max_nodes)
    status, value, point = _bb_minimum(problem, counter, prune)
    if status is not LpStatus.OPTIMAL:
        return IlpOutcome(status, None, None)
    if value.denominator != 1:
        raise AssertionError("integer optimum has a fractional objective value")
    if lexicographic and lex_threshold is not None and value > lex_threshold:
        return IlpOutcome(LpStatus.OPTIMAL, int(value), None)
    if not lexicographic:
        return IlpOutcome(LpStatus.OPTIMAL, int(value), point)

    n = problem.nvars
    fixed = problem.with_extra_ineq(
        [problem.objective, tuple(-v for v in problem.objective)],
        [int(value), -int(value)],
    )
    coords: list[int] = []
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        st, vi, _ = _bb_minimum(fixed.with_objective(unit), counter, True)
        if st is not LpStatus.OPTIMAL or vi.denominator != 1:
            raise AssertionError("lexicographic refinement lost feasibility")
        vi = int(vi)
        coords.append(vi)
        fixed = fixed.with_extra_ineq(
            [unit, tuple(-u for u in unit)], [vi, -vi]
        )
    return IlpOutcome(LpStatus.OPTIMAL, int(value), tuple(coords))
