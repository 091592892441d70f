"""Acceptance suite: every criterion checked exactly, no tolerances.

Criterion 1 drives a shared 200-instance corpus (three engines per instance
with exploration traces); criteria 3-6 audit those traces, criterion 11
reruns the corpus without the parity filter, and criterion 12 reruns it
verbatim and compares formatted reports byte for byte.  Each test prints one
PASS line with its headline numbers (visible with ``pytest -s`` or ``-rP``).
"""

import json
import random
import time

import pytest

from iqp.dks import (
    Graph,
    brute_force_densest,
    decode_subgraph,
    densest_k_subgraph_to_iqp,
    induced_edge_count,
    minimum_vertex_cover,
    neighbourhood_types,
    subgraph_value,
)
from iqp.generate import generate_instance, generate_polytope
from iqp.hull import b_independent_M, concave_minimize, integer_hull_vertex_superset
from iqp.linalg import (
    IntMatrix,
    IntRowSpan,
    adjugate_kernel_basis,
    dot,
    inertia_of_restricted_form,
    max_subdeterminant,
    rank,
)
from iqp.model import IqpInstance, SolveStatus
from iqp.oracle import brute_integer_hull_vertices, enumerate_feasible, oracle_min
from iqp.hull import Polytope
from iqp.solver import Trace, solve_batch, solve_sequential
from iqp.verify import (
    check_delta_confinement,
    check_gradient_cap,
    check_inertia_decrement,
    check_post_batch,
)

N_INSTANCES = 200
N_ADJUGATE = 500
N_POLYTOPES = 100
N_CONCAVE = 20
N_GRAPHS = 50


def acceptance_instance(seed: int) -> IqpInstance:
    n = [2, 3, 4][(seed - 1) % 3]
    m_extra = (seed - 1) % 4  # up to 3 random rows
    return generate_instance(seed, n=n, l=3, m_extra=m_extra, box=3)


def format_report(name: str, result) -> str:
    payload = {
        "engine": name,
        "status": result.status.value,
        "value": result.value,
        "witness": list(result.witness) if result.witness is not None else None,
        "stats": result.stats.as_dict(),
    }
    return json.dumps(payload, sort_keys=True)


@pytest.fixture(scope="module")
def corpus():
    """Criterion 1 runs, shared with criteria 3, 4, 5, 6, 11 and 12."""
    records = []
    solver_seconds = 0.0
    check_seconds = 0.0
    for seed in range(1, N_INSTANCES + 1):
        inst = acceptance_instance(seed)
        trace_b = Trace()
        trace_s = Trace()
        t0 = time.perf_counter()
        rb = solve_batch(inst, trace=trace_b)
        rs = solve_sequential(inst, trace=trace_s)
        ro = oracle_min(inst)
        solver_seconds += time.perf_counter() - t0

        t0 = time.perf_counter()
        inertia_bad = check_inertia_decrement(trace_s, inst.q)
        cap_bad = check_gradient_cap(trace_s, inst.q)
        batch_bad = check_post_batch(trace_b, inst.q)
        if inst.n <= 3:
            delta_bad, delta_skipped = check_delta_confinement(trace_b, inst)
        else:
            delta_bad, delta_skipped = [], ["n > 3"]
        check_seconds += time.perf_counter() - t0

        records.append(
            {
                "seed": seed,
                "instance": inst,
                "batch": rb,
                "sequential": rs,
                "oracle": ro,
                "reports": (
                    format_report("batch", rb),
                    format_report("sequential", rs),
                    format_report("oracle", ro),
                ),
                "inertia_bad": inertia_bad,
                "cap_bad": cap_bad,
                "batch_bad": batch_bad,
                "delta_bad": delta_bad,
                "delta_skipped": delta_skipped,
            }
        )
    return {
        "records": records,
        "solver_seconds": solver_seconds,
        "check_seconds": check_seconds,
    }


def test_criterion_01_oracle_equivalence(corpus):
    failures = []
    for rec in corpus["records"]:
        inst = rec["instance"]
        rb, rs, ro = rec["batch"], rec["sequential"], rec["oracle"]
        if not (rb.status == rs.status == ro.status == SolveStatus.OPTIMAL):
            failures.append((rec["seed"], "status", rb.status, rs.status, ro.status))
            continue
        if not (rb.value == rs.value == ro.value):
            failures.append((rec["seed"], "value", rb.value, rs.value, ro.value))
        for name, res in (("batch", rb), ("sequential", rs), ("oracle", ro)):
            if not inst.is_feasible(res.witness):
                failures.append((rec["seed"], f"{name}-witness-infeasible"))
            elif inst.objective(res.witness) != res.value:
                failures.append((rec["seed"], f"{name}-witness-value"))
    assert not failures, failures[:5]
    print(
        f"\nPASS criterion 1: {N_INSTANCES} instances, batch = sequential = oracle "
        f"(solver time {corpus['solver_seconds']:.1f}s, target 300s)"
    )


def test_criterion_02_adjugate_basis():
    rng = random.Random(2024)
    checked = 0
    while checked < N_ADJUGATE:
        n = rng.randint(2, 5)
        k = rng.randint(1, n - 1)
        c = IntMatrix(
            [[rng.randint(-3, 3) for _ in range(n)] for _ in range(k)], ncols=n
        )
        if rank(c) < k:
            continue
        basis = adjugate_kernel_basis(c)
        assert len(basis.vectors) == n - k, (c.data,)
        assert all(
            dot(row, y) == 0 for row in c.data for y in basis.vectors
        ), (c.data,)
        span = IntRowSpan(n)
        assert all(span.add(y) for y in basis.vectors), (c.data,)
        assert basis.norm_bound <= max_subdeterminant(c, "exact"), (c.data,)
        checked += 1
    print(f"\nPASS criterion 2: {N_ADJUGATE} adjugate bases, zero failures")


def test_criterion_03_inertia_decrement(corpus):
    bad = [
        (rec["seed"], v) for rec in corpus["records"] for v in rec["inertia_bad"]
    ]
    assert not bad, bad[:5]
    print("\nPASS criterion 3: every sequential gradient child drops nu+ by exactly 1")


def test_criterion_04_gradient_step_cap(corpus):
    bad = [(rec["seed"], v) for rec in corpus["records"] for v in rec["cap_bad"]]
    assert not bad, bad[:5]
    print("\nPASS criterion 4: gradient steps per path never exceed nu+(Q)")


def test_criterion_05_post_batch_vanishing(corpus):
    bad = [(rec["seed"], v) for rec in corpus["records"] for v in rec["batch_bad"]]
    assert not bad, bad[:5]
    print(
        "\nPASS criterion 5: batch children are flat leaves; no path batches twice"
    )


def test_criterion_06_delta_confinement(corpus):
    bad = [(rec["seed"], v) for rec in corpus["records"] for v in rec["delta_bad"]]
    assert not bad, bad[:5]
    covered = sum(1 for rec in corpus["records"] if rec["instance"].n <= 3)
    print(
        f"\nPASS criterion 6: Delta(C) <= Delta(A) in the constraint phase "
        f"({covered} instances with n <= 3)"
    )


def test_criterion_07_fixed_worked_instances():
    box = IntMatrix([[1, 0], [0, 1], [-1, 0], [0, -1]])
    coupled = IqpInstance(IntMatrix([[1, 2], [2, 1]]), (0, 0), box, (2, 2, 2, 2))
    for solve in (solve_batch, solve_sequential, oracle_min):
        res = solve(coupled)
        assert res.value == -8, solve.__name__
    inertia = inertia_of_restricted_form(
        IntMatrix([[1, 2], [2, 1]]), IntMatrix.identity(2)
    )
    assert (inertia.positive, inertia.negative, inertia.zero) == (1, 1, 0)
    separable = IqpInstance(IntMatrix([[1, 0], [0, -1]]), (0, 0), box, (2, 2, 2, 2))
    for solve in (solve_batch, solve_sequential, oracle_min):
        assert solve(separable).value == -4, solve.__name__
    print("\nPASS criterion 7: fixed instances give -8 / inertia (1,1,0) / -4")


def _acceptance_polytope(seed: int) -> Polytope:
    n = 2 if seed % 2 == 0 else 3
    m = n + 1 + (seed % 3)
    return generate_polytope(seed, n=n, m=m, l=3)


@pytest.fixture(scope="module")
def polytope_corpus():
    out = []
    for seed in range(1, N_POLYTOPES + 1):
        out.append((seed, _acceptance_polytope(seed)))
    return out


def test_criterion_08_ckhm_suite(polytope_corpus):
    t0 = time.perf_counter()
    soundness_bad = []
    uniqueness_bad = []
    bound_bad = []
    hull_sizes = 0
    for seed, poly in polytope_corpus:
        n = poly.nvars
        brute = brute_integer_hull_vertices(poly, max_points=10**6)
        cand = integer_hull_vertex_superset(poly, collect_cells=True)
        if not set(brute) <= set(cand.points):
            soundness_bad.append((seed, set(brute) - set(cand.points)))
            continue
        hull_sizes += len(brute)
        m_param = b_independent_M(poly.a)
        bound = 2 * (poly.nrows**n) * (6 * n * n * m_param) ** (n - 1)
        if len(brute) > bound:
            bound_bad.append((seed, len(brute), bound))
        for record in cand.cells:
            if not any(record.contains(v) for v in brute):
                continue
            rows, rhs = [], []
            for row, lo, hi in record.rows:
                rows.append(row)
                rhs.append(hi)
                rows.append(tuple(-v for v in row))
                rhs.append(-lo)
            cell_poly = Polytope(IntMatrix(rows, ncols=n), tuple(rhs))
            count = sum(1 for _ in enumerate_feasible(cell_poly, max_points=10**6))
            if count != 1:
                uniqueness_bad.append((seed, record.cell, count))
    assert not soundness_bad, soundness_bad[:3]
    assert not uniqueness_bad, uniqueness_bad[:3]
    assert not bound_bad, bound_bad[:3]
    print(
        f"\nPASS criterion 8: {N_POLYTOPES} polytopes, {hull_sizes} hull vertices "
        f"covered, unique cell points, count bound holds "
        f"({time.perf_counter() - t0:.1f}s, target 600s)"
    )


def test_criterion_09_concave_minimization(polytope_corpus):
    rng = random.Random(999)
    done = 0
    for seed, poly in polytope_corpus:
        if done >= N_CONCAVE:
            break
        n = poly.nvars
        g = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        q = IntMatrix(
            [
                [-sum(g[k][i] * g[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
        )
        c = tuple(rng.randint(-3, 3) for _ in range(n))
        assert (
            inertia_of_restricted_form(q, IntMatrix.identity(n)).positive == 0
        ), seed
        inst = IqpInstance(q, c, poly.a, poly.b)
        want = oracle_min(inst)
        got = concave_minimize(poly, q, c)
        assert want.status == got.status, seed
        if want.status is SolveStatus.OPTIMAL:
            assert (want.value, want.witness) == (got.value, got.witness), seed
        done += 1
    assert done == N_CONCAVE
    print(f"\nPASS criterion 9: {N_CONCAVE} concave quadratics match the oracle exactly")


def test_criterion_10_densest_k_subgraph():
    t0 = time.perf_counter()
    rng = random.Random(4242)
    solves = 0
    for _ in range(N_GRAPHS):
        nv = rng.randint(4, 7)
        edges = [
            (u, v)
            for u in range(nv)
            for v in range(u + 1, nv)
            if rng.random() < 0.45
        ]
        g = Graph.from_edges(nv, edges)
        cover = minimum_vertex_cover(g)
        part = neighbourhood_types(g, cover)
        for kappa in range(nv + 1):
            inst = densest_k_subgraph_to_iqp(g, cover, kappa)
            res = solve_batch(inst)
            assert res.status is SolveStatus.OPTIMAL, (nv, edges, kappa)
            got = subgraph_value(res.value)
            want = brute_force_densest(g, kappa)
            assert got == want, (nv, sorted(edges), cover, kappa, got, want)
            chosen = decode_subgraph(res.witness, part)
            assert len(chosen) == kappa, (nv, edges, kappa)
            assert induced_edge_count(g, chosen) == want, (nv, edges, kappa)
            solves += 1
    print(
        f"\nPASS criterion 10: {N_GRAPHS} graphs / {solves} reductions match the "
        f"subset oracle ({time.perf_counter() - t0:.1f}s)"
    )


def test_criterion_11_parity_soundness(corpus):
    t0 = time.perf_counter()
    bad = []
    for rec in corpus["records"]:
        inst = rec["instance"]
        rb = solve_batch(inst, parity_filter=False)
        rs = solve_sequential(inst, parity_filter=False)
        if rb.value != rec["batch"].value or rs.value != rec["sequential"].value:
            bad.append((rec["seed"], rb.value, rs.value, rec["batch"].value))
    assert not bad, bad[:5]
    print(
        f"\nPASS criterion 11: disabling the parity filter changes no value "
        f"({time.perf_counter() - t0:.1f}s)"
    )


def test_criterion_12_determinism(corpus):
    t0 = time.perf_counter()
    bad = []
    for rec in corpus["records"]:
        inst = acceptance_instance(rec["seed"])
        again = (
            format_report("batch", solve_batch(inst)),
            format_report("sequential", solve_sequential(inst)),
            format_report("oracle", oracle_min(inst)),
        )
        if again != rec["reports"]:
            bad.append(rec["seed"])
    assert not bad, bad[:5]
    print(
        f"\nPASS criterion 12: rerun reports are byte-identical "
        f"({time.perf_counter() - t0:.1f}s)"
    )
