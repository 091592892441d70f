"""Cross-checks between the solvers, the oracle, and the structural invariants.

The solvers record their exploration DAG in a :class:`~iqp.solver.Trace`;
the checks here audit that DAG directly: every gradient step must consume
exactly one positive eigenvalue of the restricted form, no root-to-leaf path
may take more gradient steps than the form has positive eigenvalues, batch
children must be flat leaves (the form vanishes on their kernel and they
never branch again), and while the equality system consists of original
constraint rows its exact maximum subdeterminant cannot exceed the
constraint matrix's.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .linalg import (
    IntMatrix,
    adjugate_kernel_basis,
    inertia_of_restricted_form,
    max_subdeterminant,
    restricted_form,
)
from .model import Budget, IqpInstance, SolveStatus
from .oracle import oracle_min
from .solver import Trace, solve_batch, solve_sequential


@dataclass
class VerifyReport:
    """Outcome of one instance audit; ``ok`` iff every list is empty."""

    status: str = "ok"
    value_batch: int | None = None
    value_sequential: int | None = None
    value_oracle: int | None = None
    mismatches: list[str] = field(default_factory=list)
    inertia_violations: list[str] = field(default_factory=list)
    cap_violations: list[str] = field(default_factory=list)
    batch_violations: list[str] = field(default_factory=list)
    delta_violations: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.mismatches
            or self.inertia_violations
            or self.cap_violations
            or self.batch_violations
            or self.delta_violations
        )


def _kernel_positive_eigen(q: IntMatrix, rows: tuple, cache: dict) -> int:
    key = rows
    if key in cache:
        return cache[key]
    c = IntMatrix(rows, ncols=q.ncols) if rows else IntMatrix.empty(q.ncols)
    basis = adjugate_kernel_basis(c)
    cols = IntMatrix.from_columns(basis.vectors, nrows=q.ncols)
    value = inertia_of_restricted_form(q, cols).positive
    cache[key] = value
    return value


def check_inertia_decrement(trace: Trace, q: IntMatrix) -> list[str]:
    """Every gradient edge must reduce the kernel's positive index by one."""
    cache: dict = {}
    bad: list[str] = []
    for parent, child, kind in trace.edges:
        if kind != "gradient":
            continue
        prow = trace.nodes[parent].rows
        crow = trace.nodes[child].rows
        p_pos = _kernel_positive_eigen(q, prow, cache)
        c_pos = _kernel_positive_eigen(q, crow, cache)
        if c_pos != p_pos - 1:
            bad.append(
                f"gradient edge {parent}->{child}: nu+ went {p_pos} -> {c_pos}"
            )
    return bad


def _max_edges_downward(trace: Trace, kind: str) -> int:
    """Maximum number of ``kind`` edges on any root-to-leaf path."""
    out = trace.outgoing()
    memo: dict[int, int] = {}

    def depth(node: int) -> int:
        if node in memo:
            return memo[node]
        best = 0
        for child, ekind in out.get(node, ()):
            best = max(best, depth(child) + (1 if ekind == kind else 0))
        memo[node] = best
        return best

    if trace.root is None:
        return 0
    return depth(trace.root)


def check_gradient_cap(trace: Trace, q: IntMatrix) -> list[str]:
    """No path may take more gradient steps than Q has positive eigenvalues."""
    nu_plus = inertia_of_restricted_form(q, IntMatrix.identity(q.ncols)).positive
    worst = _max_edges_downward(trace, "gradient")
    if worst > nu_plus:
        return [f"a path takes {worst} gradient steps but nu+(Q) = {nu_plus}"]
    return []


def check_post_batch(trace: Trace, q: IntMatrix) -> list[str]:
    """Batch children are flat (form vanishes on their kernel) leaves."""
    bad: list[str] = []
    out = trace.outgoing()
    for parent, child, kind in trace.edges:
        if kind != "batch":
            continue
        node = trace.nodes[child]
        c = IntMatrix(node.rows, ncols=q.ncols)
        basis = adjugate_kernel_basis(c)
        if basis.vectors:
            cols = IntMatrix.from_columns(basis.vectors, nrows=q.ncols)
            form = restricted_form(q, cols)
            if any(v for row in form.data for v in row):
                bad.append(f"batch child {child}: form does not vanish on kernel")
        if out.get(child):
            bad.append(f"batch child {child} branched again")
    if _max_edges_downward(trace, "batch") > 1:
        bad.append("a path performs more than one batch")
    return bad


def check_delta_confinement(
    trace: Trace,
    instance: IqpInstance,
    *,
    max_evals: int = 200000,
) -> tuple[list[str], list[str]]:
    """While C holds only rows of A, exact max subdeterminants are confined.

    Returns (violations, skipped) where entries are skipped when the exact
    scan would exceed its evaluation budget.
    """
    bad: list[str] = []
    skipped: list[str] = []
    a_rows = set(instance.a.data)
    try:
        delta_a = max_subdeterminant(instance.a, "exact", max_evals=max_evals)
    except BudgetExceeded:
        return [], ["constraint matrix too large for the exact subdeterminant scan"]
    seen: set = set()
    for node in trace.nodes:
        if not node.rows or node.rows in seen:
            continue
        seen.add(node.rows)
        if any(row not in a_rows for row in node.rows):
            continue
        c = IntMatrix(node.rows, ncols=instance.n)
        try:
            delta_c = max_subdeterminant(c, "exact", max_evals=max_evals)
        except BudgetExceeded:
            skipped.append(f"node {node.id} too large for the exact scan")
            continue
        if delta_c > delta_a:
            bad.append(
                f"node {node.id}: Delta(C) = {delta_c} exceeds Delta(A) = {delta_a}"
            )
    return bad, skipped


def verify_instance(
    instance: IqpInstance,
    *,
    budget_nodes: int = 10**6,
    oracle_points: int = 10**7,
    check_deltas: bool = True,
) -> VerifyReport:
    """Run batch, sequential and oracle on one instance and audit everything.

    Oracle-infeasible and unbounded instances still check status agreement;
    budget blowups are reported in ``skipped`` rather than failing.
    """
    report = VerifyReport()
    trace_b = Trace()
    trace_s = Trace()
    rb = solve_batch(instance, Budget(max_nodes=budget_nodes), trace=trace_b)
    rs = solve_sequential(instance, Budget(max_nodes=budget_nodes), trace=trace_s)
    ro = oracle_min(instance, max_points=oracle_points)
    report.value_batch = rb.value
    report.value_sequential = rs.value
    report.value_oracle = ro.value

    if ro.status is SolveStatus.BUDGET_EXCEEDED:
        report.skipped.append("oracle budget exceeded; value cross-check skipped")
    elif rb.status is SolveStatus.BUDGET_EXCEEDED or rs.status is SolveStatus.BUDGET_EXCEEDED:
        report.skipped.append("solver budget exceeded; value cross-check skipped")
    else:
        if not (rb.status == rs.status == ro.status):
            report.mismatches.append(
                f"status disagreement: batch={rb.status.value} "
                f"sequential={rs.status.value} oracle={ro.status.value}"
            )
        elif rb.status is SolveStatus.OPTIMAL:
            if not (rb.value == rs.value == ro.value):
                report.mismatches.append(
                    f"value disagreement: batch={rb.value} "
                    f"sequential={rs.value} oracle={ro.value}"
                )
            if not (rb.witness == rs.witness == ro.witness):
                report.mismatches.append(
                    f"witness disagreement: batch={rb.witness} "
                    f"sequential={rs.witness} oracle={ro.witness}"
                )
            for name, res in (("batch", rb), ("sequential", rs)):
                if not instance.is_feasible(res.witness):
                    report.mismatches.append(f"{name} witness infeasible")
                elif instance.objective(res.witness) != res.value:
                    report.mismatches.append(f"{name} witness value mismatch")

    report.inertia_violations = check_inertia_decrement(trace_s, instance.q)
    report.cap_violations = check_gradient_cap(trace_s, instance.q)
    report.batch_violations = check_post_batch(trace_b, instance.q)
    if check_deltas:
        bad, skipped = check_delta_confinement(trace_b, instance)
        report.delta_violations = bad
        report.skipped.extend(skipped)
    report.status = "ok" if report.ok else "mismatch"
    return report
