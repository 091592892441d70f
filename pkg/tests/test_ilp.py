import itertools
import random
from fractions import Fraction

import pytest

from iqp.errors import BudgetExceeded
from iqp.ilp import IlpOutcome, LpProblem, LpStatus, ilp_solve, lp_solve
from iqp.linalg import IntMatrix


def _box_problem(objective, width, extra_rows=(), extra_rhs=()):
    n = len(objective)
    rows, rhs = [], []
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        rows.append(unit)
        rhs.append(width)
        rows.append(tuple(-u for u in unit))
        rhs.append(width)
    rows += [tuple(r) for r in extra_rows]
    rhs += list(extra_rhs)
    return LpProblem(tuple(objective), IntMatrix(rows, ncols=n), tuple(rhs))


def test_lp_bounded_interval():
    p = LpProblem((1,), IntMatrix([[1], [-1]]), (3, -1))
    out = lp_solve(p)
    assert out.status is LpStatus.OPTIMAL and out.value == 1 and out.point == (1,)


def test_lp_infeasible():
    p = LpProblem((1,), IntMatrix([[1], [-1]]), (0, -1))
    assert lp_solve(p).status is LpStatus.INFEASIBLE


def test_lp_unbounded():
    p = LpProblem((-1,), IntMatrix([[-1]]), (0,))
    assert lp_solve(p).status is LpStatus.UNBOUNDED


def test_lp_equality_rows_native():
    p = LpProblem(
        (1, 1),
        IntMatrix([[1, 0], [0, 1], [-1, 0], [0, -1]]),
        (5, 5, 0, 0),
        IntMatrix([[1, 1]]),
        (2,),
    )
    out = lp_solve(p)
    assert out.value == 2


def test_lp_fractional_vertex():
    # min -x-y subject to 2x+y<=3, x+2y<=3, x,y>=0: optimum at (1,1)
    p = LpProblem((-1, -1), IntMatrix([[2, 1], [1, 2], [-1, 0], [0, -1]]), (3, 3, 0, 0))
    out = lp_solve(p)
    assert out.value == -2 and out.point == (1, 1)


def test_lp_fractional_exactness():
    # min x subject to 3x >= 1 gives exactly 1/3
    p = LpProblem((1,), IntMatrix([[-3], [1]]), (-1, 5))
    out = lp_solve(p)
    assert out.value == Fraction(1, 3)


def test_lp_free_variables_negative_side():
    p = LpProblem((1,), IntMatrix([[1], [-1]]), (-2, 5))
    out = lp_solve(p)
    assert out.value == -5 and out.point == (-5,)


def test_lp_nonneg_mode():
    p = LpProblem((-1,), IntMatrix([[1]]), (4,), nonneg=True)
    out = lp_solve(p)
    assert out.value == -4


def test_lp_zero_variables():
    p = LpProblem((), IntMatrix.empty(0), ())
    assert lp_solve(p).status is LpStatus.OPTIMAL


def test_ilp_lexicographic_tie_break():
    # min x1+x2 over 2x1+2x2 >= 3, 0 <= x <= 2: value 2, lex-min optimum (0,2)
    p = _box_problem((1, 1), 2, [(-2, -2), (-1, 0), (0, -1)], (-3, 0, 0))
    out = ilp_solve(p)
    assert out == IlpOutcome(LpStatus.OPTIMAL, 2, (0, 2))


def test_ilp_integral_relaxation_short_circuits():
    p = LpProblem((1,), IntMatrix([[1], [-1]]), (3, -1))
    out = ilp_solve(p)
    assert out.value == 1 and out.point == (1,)


def test_ilp_lattice_free_interval():
    # 1/3 <= x <= 2/3 scaled to integers
    p = LpProblem((1,), IntMatrix([[3], [-3]]), (2, -1))
    assert ilp_solve(p).status is LpStatus.INFEASIBLE


def test_ilp_unbounded_relaxation_reported():
    p = LpProblem((-1,), IntMatrix([[-1]]), (0,))
    assert ilp_solve(p).status is LpStatus.UNBOUNDED


def test_ilp_budget():
    p = _box_problem((1, 1, 1), 5)
    with pytest.raises(BudgetExceeded):
        ilp_solve(p, max_nodes=0)


def test_ilp_matches_enumeration_and_pruning_is_sound():
    rng = random.Random(11)
    for trial in range(250):
        n = rng.randint(1, 4)
        w = rng.randint(1, 3)
        extra_rows, extra_rhs = [], []
        for _ in range(rng.randint(0, 2)):
            extra_rows.append(tuple(rng.randint(-2, 2) for _ in range(n)))
            extra_rhs.append(rng.randint(-2, 4))
        obj = tuple(rng.randint(-3, 3) for _ in range(n))
        p = _box_problem(obj, w, extra_rows, extra_rhs)
        out = ilp_solve(p)
        best, best_pt = None, None
        for pt in itertools.product(range(-w, w + 1), repeat=n):
            if all(
                sum(a * b for a, b in zip(row, pt)) <= rhs
                for row, rhs in zip(p.a_ineq.data, p.b_ineq)
            ):
                v = sum(a * b for a, b in zip(obj, pt))
                if best is None or v < best or (v == best and pt < best_pt):
                    best, best_pt = v, pt
        if best is None:
            assert out.status is LpStatus.INFEASIBLE, trial
        else:
            assert (out.status, out.value, out.point) == (
                LpStatus.OPTIMAL,
                best,
                best_pt,
            ), trial
        assert ilp_solve(p, prune=False) == out, trial
