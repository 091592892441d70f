import random
from fractions import Fraction

import pytest

from iqp.errors import NotConcave, UnboundedRegion
from iqp.generate import generate_polytope
from iqp.hull import (
    Polytope,
    b_independent_M,
    concave_minimize,
    integer_hull_vertex_superset,
    polytope_vertices,
)
from iqp.linalg import IntMatrix, dot
from iqp.model import IqpInstance, SolveStatus
from iqp.oracle import brute_integer_hull_vertices, oracle_min


def square(width):
    return Polytope(
        IntMatrix([[1, 0], [0, 1], [-1, 0], [0, -1]]), (width, width, 0, 0)
    )


def test_polytope_vertices_square():
    verts = polytope_vertices(square(1))
    assert verts == (
        (Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(1)),
    )


def test_polytope_vertices_triangle():
    tri = Polytope(IntMatrix([[-1, 0], [0, -1], [1, 1]]), (0, 0, 1))
    assert len(polytope_vertices(tri)) == 3


def test_polytope_vertices_infeasible():
    p = Polytope(IntMatrix([[1], [-1]]), (0, -1))
    assert polytope_vertices(p) == ()


def test_b_independent_M_formula():
    assert b_independent_M(IntMatrix([[1, 1], [-1, 1]])) == 5
    assert b_independent_M(IntMatrix([[1], [1]])) == 2
    assert b_independent_M(IntMatrix([[1, 0], [0, 1], [-1, 0], [0, -1]])) == 4


def test_superset_contains_square_corners():
    cand = integer_hull_vertex_superset(square(3))
    assert {(0, 0), (0, 3), (3, 0), (3, 3)} <= set(cand.points)
    assert all(square(3).contains(x) for x in cand.points)
    assert len(set(cand.points)) == len(cand.points)


def test_superset_contains_triangle_hull():
    tri = Polytope(IntMatrix([[2, 2], [-1, 0], [0, -1]]), (3, 0, 0))
    cand = integer_hull_vertex_superset(tri)
    assert {(0, 0), (1, 0), (0, 1)} <= set(cand.points)


def test_superset_empty_region():
    p = Polytope(IntMatrix([[1], [-1]]), (0, -1))
    assert integer_hull_vertex_superset(p).points == ()


def test_superset_unbounded_raises():
    p = Polytope(IntMatrix([[1, 0]]), (0,))
    with pytest.raises(UnboundedRegion):
        integer_hull_vertex_superset(p)


def test_concave_minimize_norm_square():
    res = concave_minimize(square(3), IntMatrix([[-1, 0], [0, -1]]), (0, 0))
    assert res.value == -18 and res.witness == (3, 3)


def test_concave_minimize_zero_form():
    res = concave_minimize(square(3), IntMatrix([[0, 0], [0, 0]]), (0, 0))
    assert res.value == 0 and res.witness == (0, 0)


def test_concave_minimize_interval():
    seg = Polytope(IntMatrix([[2], [-1]]), (3, 1))
    res = concave_minimize(seg, IntMatrix([[-1]]), (0,))
    assert res.value == -1 and res.witness == (-1,)


def test_concave_minimize_rejects_positive_eigenvalue():
    with pytest.raises(NotConcave):
        concave_minimize(square(3), IntMatrix([[1, 0], [0, -1]]), (0, 0))


def test_concave_minimize_infeasible():
    p = Polytope(IntMatrix([[1], [-1]]), (0, -1))
    assert concave_minimize(p, IntMatrix([[-1]]), (0,)).status is SolveStatus.INFEASIBLE


def _count_bound(p, m_param, n):
    return 2 * (p.nrows**n) * (6 * n * n * m_param) ** (n - 1)


def test_superset_random_soundness_and_cell_uniqueness():
    rng = random.Random(5)
    done = 0
    seed = 0
    while done < 15:
        seed += 1
        n = rng.choice([2, 2, 3])
        m = rng.randint(n + 1, 6)
        p = generate_polytope(seed * 2 + 1, n, m)  # odd seeds: origin feasible
        brute = brute_integer_hull_vertices(p, max_points=300000)
        cand = integer_hull_vertex_superset(p, collect_cells=True)
        assert set(brute) <= set(cand.points), (seed, p.a.data, p.b)
        m_param = b_independent_M(p.a)
        assert len(brute) <= _count_bound(p, m_param, n), seed
        done += 1


def test_b_shift_stability():
    # shifting b by A e_j translates the hull and keeps the vertex count
    rng = random.Random(9)
    done = 0
    seed = 100
    while done < 6:
        seed += 1
        n = 2
        p = generate_polytope(seed * 2 + 1, n, rng.randint(3, 5))
        base = brute_integer_hull_vertices(p, max_points=300000)
        j = rng.randrange(n)
        shift = p.a.column(j)
        shifted = Polytope(p.a, tuple(b + s for b, s in zip(p.b, shift)))
        moved = brute_integer_hull_vertices(shifted, max_points=300000)
        assert len(base) == len(moved), seed
        unit = tuple(1 if i == j else 0 for i in range(n))
        assert set(moved) == {
            tuple(v + u for v, u in zip(vert, unit)) for vert in base
        }, seed
        done += 1


def test_cell_walk_matches_corner_sweep(monkeypatch):
    # the depth-first cell walk and the small-box point sweep must agree
    import iqp.hull as hull_mod

    rng = random.Random(23)
    done = 0
    seed = 400
    while done < 8:
        seed += 1
        n = rng.choice([2, 3])
        p = generate_polytope(seed * 2 + 1, n, rng.randint(n + 1, 6))
        monkeypatch.setattr(hull_mod, "_CORNER_SWEEP_VOLUME", 65536)
        swept = integer_hull_vertex_superset(p)
        monkeypatch.setattr(hull_mod, "_CORNER_SWEEP_VOLUME", -1)
        walked = integer_hull_vertex_superset(p)
        assert swept.points == walked.points, (seed, swept.points, walked.points)
        done += 1


def test_concave_agrees_with_oracle_randomized():
    rng = random.Random(17)
    done = 0
    seed = 1000
    while done < 10:
        seed += 1
        n = rng.choice([2, 3])
        p = generate_polytope(seed * 2 + 1, n, rng.randint(n + 1, 6))
        g = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        q = IntMatrix(
            [
                [-sum(g[k][i] * g[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
        )
        c = tuple(rng.randint(-3, 3) for _ in range(n))
        inst = IqpInstance(q, c, p.a, p.b)
        want = oracle_min(inst)
        got = concave_minimize(p, q, c)
        assert want.status == got.status, seed
        if want.status is SolveStatus.OPTIMAL:
            assert (want.value, want.witness) == (got.value, got.witness), seed
        done += 1
