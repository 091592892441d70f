"""Branching solvers for indefinite integer quadratic programs.

Both solvers explore a tree of subproblems, each an equality system
``C x = d`` of full row rank layered on top of the instance's inequalities.
At every node an integer kernel basis of ``C`` is built and its directions
are classified by curvature sign.  Tightened inequality rows ("constraint"
branches) are always explored; the sequential solver adds one gradient
equality at a time, while the batch solver adds every independent gradient
row at once as soon as no negative-curvature direction remains, after which
the quadratic form vanishes on the kernel and each child is a plain ILP.

Subproblems met through different branching orders are identical whenever
their equality systems span the same affine subspace, so results are
memoized on a canonical integer echelon form of ``[C | d]``.  This turns the
tree into a DAG without changing any value or witness: the merge (minimum
with lexicographic tie-break) is associative and commutative.

Sound pruning only: rationally inconsistent systems, and systems whose
integer bounding box (exact LP box plus interval propagation against the
equalities) is empty.  No objective-bound pruning is performed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .boxprop import BoxBounds, EmptyRegion, Unbounded, bounding_box, propagate_intervals
from .errors import BudgetExceeded, UnboundedRegion
from .ilp import IlpOutcome, IntMatrix, LpProblem, LpStatus, ilp_solve
from .linalg import (
    IntRowSpan,
    IntVec,
    KernelBasis,
    adjugate_kernel_basis,
    dot,
    max_subdeterminant,
)
from .model import Budget, IqpInstance, PathStats, SolveResult, SolveStats, SolveStatus


@dataclass(frozen=True)
class CurvatureClasses:
    """Partition of kernel basis indices by curvature.

    ``flat`` holds directions whose gradient row already lies in the row
    space of C (the form cannot change along them); the rest split by the
    sign of y^T Q y into ``negative`` and ``nonnegative``.
    """

    negative: tuple[int, ...]
    nonnegative: tuple[int, ...]
    flat: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.negative) + len(self.nonnegative) + len(self.flat)


class Node:
    """A live subproblem: equality system with cached basis and classes."""

    __slots__ = (
        "c",
        "d",
        "basis",
        "classes",
        "depth",
        "path_stats",
        "_span",
        "_aug",
        "_grads",
        "_curvs",
    )

    def __init__(
        self,
        c: IntMatrix,
        d: IntVec,
        basis: KernelBasis,
        classes: CurvatureClasses,
        depth: int,
        path_stats: PathStats,
        span: IntRowSpan,
        aug: IntRowSpan,
        grads: tuple[IntVec, ...],
        curvs: IntVec,
    ):
        self.c = c
        self.d = d
        self.basis = basis
        self.classes = classes
        self.depth = depth
        self.path_stats = path_stats
        self._span = span
        self._aug = aug
        self._grads = grads
        self._curvs = curvs

    @classmethod
    def from_system(
        cls,
        q: IntMatrix,
        c: IntMatrix,
        d: Sequence[int],
        *,
        depth: int = 0,
        path_stats: PathStats | None = None,
        span: IntRowSpan | None = None,
        aug: IntRowSpan | None = None,
    ) -> "Node":
        d = tuple(int(v) for v in d)
        if len(d) != c.nrows:
            raise ValueError("right-hand side length does not match equality rows")
        n = c.ncols
        if span is None:
            span = IntRowSpan(n)
            for row in c.data:
                span.add(row)
        if aug is None:
            aug = IntRowSpan(n + 1)
            for row, rhs in zip(c.data, d):
                aug.add(row + (rhs,))
        basis = adjugate_kernel_basis(c)
        grads, curvs, classes = _classify(q, basis, span)
        return cls(
            c=c,
            d=d,
            basis=basis,
            classes=classes,
            depth=depth,
            path_stats=path_stats if path_stats is not None else PathStats(),
            span=span,
            aug=aug,
            grads=grads,
            curvs=curvs,
        )

    @property
    def rank(self) -> int:
        return self.c.nrows

    @property
    def kernel_dim(self) -> int:
        return self.c.ncols - self.c.nrows

    def is_flat(self) -> bool:
        return len(self.classes.flat) == self.kernel_dim

    def is_consistent(self) -> bool:
        return all(pc < self.c.ncols for pc in self._aug.pivot_columns())

    def particular_solution(self) -> tuple[Fraction, ...] | None:
        """A rational point of ``C x = d`` (free coordinates zero), or None."""
        n = self.c.ncols
        x = [Fraction(0)] * n
        for pc, row in zip(self._aug.pivot_columns(), self._aug.canonical_rows()):
            if pc == n:
                return None
            x[pc] = Fraction(row[n], row[pc])
        return tuple(x)


def _classify(
    q: IntMatrix, basis: KernelBasis, span: IntRowSpan
) -> tuple[tuple[IntVec, ...], IntVec, CurvatureClasses]:
    grads = tuple(q.vecmat(y) for y in basis.vectors)
    curvs = tuple(dot(g, y) for g, y in zip(grads, basis.vectors))
    neg: list[int] = []
    nonneg: list[int] = []
    flat: list[int] = []
    for i, (g, kappa) in enumerate(zip(grads, curvs)):
        if span.contains(g):
            flat.append(i)
        elif kappa < 0:
            neg.append(i)
        else:
            nonneg.append(i)
    return grads, curvs, CurvatureClasses(tuple(neg), tuple(nonneg), tuple(flat))


def classify_curvature(node: Node, q: IntMatrix) -> CurvatureClasses:
    """Exact curvature partition of the node's kernel basis directions."""
    _, _, classes = _classify(q, node.basis, node._span)
    return classes


def check_bounded(instance: IqpInstance) -> bool:
    """True iff ``{x : Ax <= b}`` is bounded (2n exact LPs; empty counts as bounded)."""
    return bounding_box(instance.a, instance.b) is not Unbounded


def _canon_row(row: IntVec, rhs: int) -> tuple[IntVec, int]:
    """Canonical form of an appended equality: gcd-reduced, sign-normalized."""
    from math import gcd

    g = 0
    for v in row:
        g = gcd(g, v)
    g = gcd(g, rhs)
    if g > 1:
        row = tuple(v // g for v in row)
        rhs //= g
    lead = next((v for v in row if v), 0)
    if lead < 0:
        row = tuple(-v for v in row)
        rhs = -rhs
    return (row, rhs)


def _row_interval(row: IntVec, box: BoxBounds) -> tuple[int, int]:
    """Exact range of ``row . x`` over the integer box."""
    lo = hi = 0
    for coef, lo_b, hi_b in zip(row, box.lower, box.upper):
        if coef > 0:
            lo += coef * lo_b
            hi += coef * hi_b
        elif coef < 0:
            lo += coef * hi_b
            hi += coef * lo_b
    return lo, hi


def _gradient_value_range(
    node: Node, row2: IntVec, cy: int, kappa: int, box: BoxBounds
) -> tuple[int, int, IntVec, int, int]:
    """Achievable range of ``z = row2 . x + cy`` over the node's subspace in ``box``.

    The gradient row is reduced against the equality echelon first; the
    reduced form has small coefficients, so its interval over the box is far
    tighter than the raw row's.  Returns ``(z_lo, z_hi, reduced_row, scale,
    offset)`` where ``row2 . x = (reduced_row . x - offset) / scale`` on the
    subspace.
    """
    n = len(row2)
    vred, alpha = node._aug.reduce_with_scale(row2 + (0,))
    rowp = tuple(vred[:n])
    sp = vred[n]
    ilo, ihi = _row_interval(rowp, box)
    lo2 = -((-(ilo - sp)) // alpha)  # ceil
    hi2 = (ihi - sp) // alpha  # floor
    return (max(-kappa, lo2 + cy), min(kappa, hi2 + cy), rowp, alpha, sp)


def _deep_box(node: Node, box: BoxBounds) -> BoxBounds | None:
    """Box that must contain every deep optimum of the node, or None.

    A deep point keeps ``x +- y`` feasible for every kernel basis vector, so
    it stays at least ``max_i |y_i[j]|`` away from both walls in every
    coordinate.  An empty result proves no deep optimum exists, which makes
    gradient and batch branching unnecessary at the node.
    """
    vectors = node.basis.vectors
    lo = []
    hi = []
    for j, (lo_j, hi_j) in enumerate(zip(box.lower, box.upper)):
        w = max(abs(y[j]) for y in vectors)
        lo_j += w
        hi_j -= w
        if lo_j > hi_j:
            return None
        lo.append(lo_j)
        hi.append(hi_j)
    return BoxBounds(tuple(lo), tuple(hi))


def constraint_children(
    node: Node,
    instance: IqpInstance,
    *,
    max_children: int = 10**5,
    box: BoxBounds | None = None,
) -> list[tuple[IntMatrix, IntVec]]:
    """Tightened-inequality children.

    Every row of A outside the row space of C is pinned to each integer
    right-hand side in ``{b_j - W_j, ..., b_j}``, where ``W_j`` is the exact
    maximum of ``|a_j . y|`` over the node's kernel basis.  Equivalent
    siblings (same equality after gcd/sign normalization) are merged and
    rationally inconsistent systems dropped.

    ``box`` is an optional sound restriction: every feasible point of the
    node lies inside it, so right-hand sides outside the row's value range
    over the box cannot occur and are skipped.
    """
    out: list[tuple[IntMatrix, IntVec]] = []
    seen: set[tuple[IntVec, int]] = set()
    consistent = node.is_consistent()
    for arow, brhs in zip(instance.a.data, instance.b):
        if node._span.contains(arow):
            continue
        w = max(abs(dot(arow, y)) for y in node.basis.vectors)
        lo, hi = brhs - w, brhs
        if box is not None:
            blo, bhi = _row_interval(arow, box)
            lo = max(lo, blo)
            hi = min(hi, bhi)
        for bp in range(lo, hi + 1):
            key = _canon_row(arow, bp)
            if key in seen:
                continue
            seen.add(key)
            # Appending a row outside rowspace(C) to a consistent system can
            # never make it rationally infeasible (the rank of [C | d] grows
            # with the rank of C), so the pruning contract is vacuous here.
            if not consistent:
                continue
            out.append((node.c.with_row(arow), node.d + (bp,)))
            if len(out) > max_children:
                raise BudgetExceeded(
                    f"constraint branching produced more than {max_children} children"
                )
    return out


def gradient_children(
    node: Node,
    i: int,
    q: IntMatrix,
    c: Sequence[int],
    *,
    parity_filter: bool = True,
    max_children: int = 10**5,
    box: BoxBounds | None = None,
    prop_rows: tuple = (),
) -> list[tuple[IntMatrix, IntVec]]:
    """Children pinning the gradient equality ``2 y_i^T Q x + c^T y_i = z``.

    Deep optima force ``|z| <= y_i^T Q y_i``; since ``2 y^T Q x`` is even for
    integer x, values with ``z != c^T y_i (mod 2)`` are integrally impossible
    and are skipped unless the parity filter is disabled.  ``box``, when
    given, additionally restricts ``z`` to the achievable range of the
    gradient row over the box (sound, feasible points lie inside it), and
    ``prop_rows`` joins a per-value propagation check.
    """
    if i not in node.classes.nonnegative:
        raise ValueError("gradient branching requires an index from the nonnegative class")
    y = node.basis.vectors[i]
    g = node._grads[i]
    kappa = node._curvs[i]
    row = tuple(2 * v for v in g)
    cy = dot(tuple(c), y)
    if box is not None:
        dbox = _deep_box(node, box)
        if dbox is None:
            return []  # no deep optimum can exist; constraint branches cover
        lo, hi, rowp, alpha, sp = _gradient_value_range(node, row, cy, kappa, dbox)
    else:
        lo, hi = -kappa, kappa
        rowp = None
    zs = []
    for z in range(lo, hi + 1):
        if parity_filter and (z - cy) % 2 != 0:
            continue
        if rowp is not None and prop_rows:
            # equivalent reduced equality: rowp . x = alpha*(z - cy) + sp
            rr = alpha * (z - cy) + sp
            if propagate_intervals(((rowp, rr, rr),) + prop_rows, dbox) is None:
                continue
        zs.append(z)
    if len(zs) > max_children:
        raise BudgetExceeded(
            f"gradient branching produced more than {max_children} children"
        )
    return [(node.c.with_row(row), node.d + (z - cy,)) for z in zs]


def batch_children(
    node: Node,
    q: IntMatrix,
    c: Sequence[int],
    *,
    parity_filter: bool = True,
    max_children: int = 10**5,
    box: BoxBounds | None = None,
    prop_rows: tuple = (),
) -> list[tuple[IntMatrix, IntVec]]:
    """All-at-once gradient children.

    Requires no negative-curvature direction and at least one nonnegative
    one.  A maximal subset G' of gradient rows is chosen by greedy rank
    extension (ascending basis index) and the Cartesian product of the
    per-direction ranges is emitted; each child appends every selected row
    simultaneously, and afterwards the form vanishes on the new kernel.
    ``box`` restricts each range as in :func:`gradient_children`, and
    ``prop_rows`` (interval rows, typically the instance inequalities) joins
    the per-prefix propagation so hopeless tuples are never expanded.
    """
    if node.classes.negative or not node.classes.nonnegative:
        raise ValueError("batch branching requires N empty and G nonempty")
    c = tuple(c)
    probe = node._span.copy()
    gprime = [i for i in node.classes.nonnegative if probe.add(node._grads[i])]
    rows = tuple(tuple(2 * v for v in node._grads[i]) for i in gprime)
    kappas = [node._curvs[i] for i in gprime]
    cys = [dot(c, node.basis.vectors[i]) for i in gprime]
    n = node.c.ncols
    stacked = IntMatrix._trusted(node.c.data + rows, n)
    out: list[tuple[IntMatrix, IntVec]] = []

    if box is None:
        zlists: list[list[int]] = []
        total = 1
        for kappa, cy in zip(kappas, cys):
            zs = [
                z - cy
                for z in range(-kappa, kappa + 1)
                if not parity_filter or (z - cy) % 2 == 0
            ]
            zlists.append(zs)
            total *= len(zs)
        if total > max_children:
            raise BudgetExceeded(
                f"batch would create {total} children, budget is {max_children}"
            )
        for tup in itertools.product(*zlists):
            out.append((stacked, node.d + tup))
        return out

    # With a box available the Cartesian product is walked depth-first: each
    # direction's range comes from its echelon-reduced row (tight), and every
    # chosen value is propagated before descending.  The batch only has to
    # catch deep optima, which all live in the deep box, so pruned prefixes
    # and a shrunken starting box are safe.
    box = _deep_box(node, box)
    if box is None:
        return []
    reduced = [
        node._aug.reduce_with_scale(row2 + (0,)) for row2 in rows
    ]
    acc: list[int] = []

    def walk(idx: int, cur_box: BoxBounds) -> None:
        if idx == len(gprime):
            out.append((stacked, node.d + tuple(acc)))
            if len(out) > max_children:
                raise BudgetExceeded(
                    f"batch created more than {max_children} children"
                )
            return
        kappa = kappas[idx]
        cy = cys[idx]
        vred, alpha = reduced[idx]
        rowp = tuple(vred[:-1])
        sp = vred[-1]
        ilo, ihi = _row_interval(rowp, cur_box)
        lo = max(-kappa, -((-(ilo - sp)) // alpha) + cy)
        hi = min(kappa, (ihi - sp) // alpha + cy)
        for z in range(lo, hi + 1):
            if parity_filter and (z - cy) % 2 != 0:
                continue
            rr = alpha * (z - cy) + sp
            nxt = propagate_intervals(((rowp, rr, rr),) + prop_rows, cur_box)
            if nxt is None:
                continue
            acc.append(z - cy)
            walk(idx + 1, nxt)
            acc.pop()

    walk(0, box)
    return out


@dataclass(frozen=True)
class LeafResult:
    """Outcome fragment of a flat leaf."""

    feasible: bool
    value: int | None = None
    witness: IntVec | None = None


def flat_leaf(
    node: Node,
    instance: IqpInstance,
    *,
    budget: Budget | None = None,
    extra_box: BoxBounds | None = None,
    value_threshold: int | None = None,
) -> LeafResult:
    """Solve a node whose kernel directions are all flat.

    On the affine subspace the objective equals ``g^T x - x0^T Q x0`` for any
    rational particular solution ``x0`` and ``g = 2 Q x0 + c``; the leaf
    therefore minimizes the integer-cleared ``g`` as an ILP and reports the
    original quadratic value (the linear identity is verified exactly).
    ``value_threshold`` suppresses the witness when the leaf value is
    strictly worse (an incumbent optimization; values are still exact).
    """
    n = instance.n
    x0 = node.particular_solution()
    if x0 is None:
        return LeafResult(feasible=False)
    if node.rank == n:
        if any(v.denominator != 1 for v in x0):
            return LeafResult(feasible=False)
        pt = tuple(int(v) for v in x0)
        if not instance.is_feasible(pt):
            return LeafResult(feasible=False)
        return LeafResult(True, instance.objective(pt), pt)

    qx0 = tuple(
        sum((Fraction(qv) * xv for qv, xv in zip(row, x0)), start=Fraction(0))
        for row in instance.q.data
    )
    g = tuple(2 * gv + cv for gv, cv in zip(qx0, instance.c))
    denom = lcm(*(v.denominator for v in g)) if g else 1
    gint = tuple(int(v * denom) for v in g)

    a_rows = instance.a.data
    b_rhs = instance.b
    if extra_box is not None:
        rows, rhs = extra_box.as_rows()
        a_rows = a_rows + rows
        b_rhs = b_rhs + rhs
    x0qx0 = sum((qv * xv for qv, xv in zip(qx0, x0)), start=Fraction(0))
    lex_threshold = None
    if value_threshold is not None:
        scaled = denom * (value_threshold + x0qx0)
        lex_threshold = scaled.numerator // scaled.denominator  # floor, exact
    problem = LpProblem(
        objective=gint,
        a_ineq=IntMatrix(a_rows, ncols=n),
        b_ineq=b_rhs,
        a_eq=node.c if node.c.nrows else None,
        b_eq=node.d if node.c.nrows else None,
    )
    out: IlpOutcome = ilp_solve(
        problem,
        lexicographic=True,
        counter=budget,
        lex_threshold=lex_threshold,
    )
    if out.status is LpStatus.INFEASIBLE:
        return LeafResult(feasible=False)
    if out.status is LpStatus.UNBOUNDED:
        raise UnboundedRegion("flat leaf relaxation is unbounded")
    if out.point is None:
        # witness suppressed: recover the exact quadratic value from the
        # linear reduction (always an integer on the integer points)
        value = Fraction(out.value, denom) - x0qx0
        if value.denominator != 1:
            raise AssertionError("suppressed flat leaf value is not integral")
        return LeafResult(True, int(value), None)
    value = instance.objective(out.point)
    linear = sum((Fraction(gv) * pv for gv, pv in zip(g, out.point)), start=Fraction(0))
    if linear - x0qx0 != value:
        raise AssertionError("flat leaf linear reduction disagrees with the quadratic")
    return LeafResult(True, value, out.point)


@dataclass
class TraceNode:
    id: int
    rows: tuple[IntVec, ...]
    rhs: IntVec
    depth: int
    kind: str  # "branch" | "leaf" | "pruned-inconsistent" | "pruned-box"


@dataclass
class Trace:
    """Exploration DAG recorded during a solve (for invariant audits)."""

    nodes: list[TraceNode] = field(default_factory=list)
    edges: list[tuple[int, int, str]] = field(default_factory=list)
    root: int | None = None

    def add_node(self, rows, rhs, depth, kind) -> int:
        nid = len(self.nodes)
        self.nodes.append(TraceNode(nid, tuple(rows), tuple(rhs), depth, kind))
        return nid

    def add_edge(self, parent: int, child: int, kind: str) -> None:
        self.edges.append((parent, child, kind))

    def outgoing(self) -> dict[int, list[tuple[int, str]]]:
        out: dict[int, list[tuple[int, str]]] = {}
        for p, ch, kind in self.edges:
            out.setdefault(p, []).append((ch, kind))
        return out


_DELTA_EXACT_EVALS = 20000


def _merge(
    best: tuple[int | None, IntVec | None], value: int | None, witness: IntVec | None
) -> tuple[int | None, IntVec | None]:
    """Minimum with lexicographic witness tie-break.

    A missing witness means it was suppressed because a strictly better
    incumbent already existed, so it can never win a tie at the optimum; it
    is treated as lexicographically infinite.
    """
    if value is None:
        return best
    bv, bw = best
    if bv is None or value < bv:
        return (value, witness)
    if value == bv and witness is not None and (bw is None or witness < bw):
        return (value, witness)
    return best


def _solve(
    instance: IqpInstance,
    *,
    batch_mode: bool,
    budget: Budget | None,
    parity_filter: bool,
    trace: Trace | None,
    collect_delta: bool,
) -> SolveResult:
    budget = budget if budget is not None else Budget()
    stats = SolveStats()
    n = instance.n
    q = instance.q

    box = bounding_box(instance.a, instance.b)
    if box is Unbounded:
        return SolveResult(SolveStatus.UNBOUNDED_REGION, stats=stats)
    if box is EmptyRegion:
        return SolveResult(SolveStatus.INFEASIBLE, stats=stats)

    memo: dict[tuple, tuple[int | None, int | None, IntVec | None]] = {}
    ineq_rows = tuple(
        (row, None, rhs) for row, rhs in zip(instance.a.data, instance.b)
    )
    incumbent: list[int | None] = [None]  # best witnessed value so far

    def t_node(rows, rhs, depth, kind) -> int | None:
        if trace is None:
            return None
        return trace.add_node(rows, rhs, depth, kind)

    def t_edge(parent, child, kind) -> None:
        if trace is not None and parent is not None and child is not None:
            trace.add_edge(parent, child, kind)

    def record_delta(node: Node) -> None:
        if not collect_delta or node.c.nrows == 0:
            return
        try:
            delta = max_subdeterminant(node.c, "exact", max_evals=_DELTA_EXACT_EVALS)
            exact = True
        except BudgetExceeded:
            delta = max_subdeterminant(node.c, "hadamard")
            exact = False
        node.path_stats.max_delta_seen = delta
        if stats.max_delta_seen is None or delta > stats.max_delta_seen:
            stats.max_delta_seen = delta
        stats.delta_exact = exact if stats.delta_exact is None else (stats.delta_exact and exact)

    def explore(
        crows: tuple[IntVec, ...],
        drhs: IntVec,
        parent_span: IntRowSpan,
        new_rows: tuple[IntVec, ...],
        aug: IntRowSpan,
        depth: int,
        gsteps: int,
        path: PathStats,
        as_leaf: bool,
    ) -> tuple[int | None, int | None, IntVec | None]:
        key = aug.canonical_rows()
        cached = memo.get(key)
        if cached is not None:
            stats.memo_hits += 1
            return cached

        eq_rows = tuple((row[:n], row[n], row[n]) for row in key)
        pbox = propagate_intervals(eq_rows + ineq_rows, box)
        if pbox is None:
            tid = t_node(crows, drhs, depth, "pruned-box")
            result = (tid, None, None)
            memo[key] = result
            return result

        budget.charge()
        stats.record_node(depth)
        stats.max_gradient_steps = max(stats.max_gradient_steps, gsteps)
        span = parent_span.copy()
        for row in new_rows:
            span.add(row)
        node = Node.from_system(
            q,
            IntMatrix._trusted(crows, n),
            drhs,
            depth=depth,
            path_stats=path,
            span=span,
            aug=aug,
        )
        record_delta(node)

        if node.is_flat():
            before = budget.used_nodes
            leaf = flat_leaf(
                node,
                instance,
                budget=budget,
                extra_box=pbox,
                value_threshold=incumbent[0],
            )
            stats.ilp_nodes += budget.used_nodes - before
            stats.leaves += 1
            if leaf.feasible and leaf.witness is not None:
                if incumbent[0] is None or leaf.value < incumbent[0]:
                    incumbent[0] = leaf.value
            tid = t_node(crows, drhs, depth, "leaf")
            result = (
                (tid, leaf.value, leaf.witness) if leaf.feasible else (tid, None, None)
            )
            memo[key] = result
            return result
        if as_leaf:
            raise AssertionError("batch child has residual curvature; vanishing failed")

        kids: list[tuple[IntMatrix, IntVec, str]] = []
        for cm, dv in constraint_children(
            node, instance, max_children=budget.max_children, box=pbox
        ):
            kids.append((cm, dv, "constraint"))
        n_constraint = len(kids)
        n_gradient = n_batch = 0
        if batch_mode:
            if not node.classes.negative and node.classes.nonnegative:
                batch_kids = batch_children(
                    node, q, instance.c,
                    parity_filter=parity_filter,
                    max_children=budget.max_children,
                    box=pbox,
                    prop_rows=ineq_rows,
                )
                n_batch = len(batch_kids)
                kids.extend((cm, dv, "batch") for cm, dv in batch_kids)
                if batch_kids:
                    stats.batches_performed += 1
        else:
            for i in node.classes.nonnegative:
                gkids = gradient_children(
                    node, i, q, instance.c,
                    parity_filter=parity_filter,
                    max_children=budget.max_children,
                    box=pbox,
                    prop_rows=ineq_rows,
                )
                n_gradient += len(gkids)
                kids.extend((cm, dv, "gradient") for cm, dv in gkids)

        budget.check_children(len(kids))
        stats.constraint_children += n_constraint
        stats.gradient_children += n_gradient
        stats.batch_children += n_batch
        stats.record_children(depth, len(kids))
        node.path_stats.children_generated = len(kids)

        tid = t_node(crows, drhs, depth, "branch")
        best: tuple[int | None, IntVec | None] = (None, None)
        parent_k = node.c.nrows
        for cm, dv, kind in kids:
            child_rows = cm.data[parent_k:]
            child_rhs = dv[parent_k:]
            child_aug = aug.copy()
            for row, rhs in zip(child_rows, child_rhs):
                child_aug.add(row + (rhs,))
            if any(pc == n for pc in child_aug.pivot_columns()):
                ckey = child_aug.canonical_rows()
                if ckey in memo:
                    ctid = memo[ckey][0]
                else:
                    ctid = t_node(cm.data, dv, depth + 1, "pruned-inconsistent")
                    memo[ckey] = (ctid, None, None)
                stats.pruned_children += 1
                t_edge(tid, ctid, kind)
                continue
            ctid, val, wit = explore(
                cm.data,
                dv,
                span,
                child_rows,
                child_aug,
                depth + 1,
                gsteps + (1 if kind == "gradient" else 0),
                path.stepped(kind),
                as_leaf=(kind == "batch"),
            )
            t_edge(tid, ctid, kind)
            best = _merge(best, val, wit)
        result = (tid, best[0], best[1])
        memo[key] = result
        return result

    root_rows = instance.c0.data if instance.c0 is not None else ()
    root_rhs = instance.d0 if instance.d0 is not None else ()
    aug0 = IntRowSpan(n + 1)
    for row, rhs in zip(root_rows, root_rhs):
        aug0.add(row + (rhs,))

    try:
        tid, value, witness = explore(
            root_rows, root_rhs, IntRowSpan(n), root_rows, aug0, 0, 0, PathStats(), False
        )
    except BudgetExceeded:
        return SolveResult(SolveStatus.BUDGET_EXCEEDED, stats=stats)
    if trace is not None:
        trace.root = tid
    if value is None:
        return SolveResult(SolveStatus.INFEASIBLE, stats=stats)
    if witness is None:
        raise AssertionError("optimal value lost its witness to suppression")
    return SolveResult(SolveStatus.OPTIMAL, value, witness, stats)


def solve_sequential(
    instance: IqpInstance,
    budget: Budget | None = None,
    *,
    parity_filter: bool = True,
    trace: Trace | None = None,
    collect_delta: bool = False,
) -> SolveResult:
    """One-gradient-at-a-time branching solver.

    Explores constraint branches for every eligible row and a gradient branch
    for every nonnegative-curvature direction; flat nodes become ILP leaves.
    Requires a bounded inequality region (checked; unbounded regions are
    reported, not searched).  Ties in the witness break lexicographically.
    """
    return _solve(
        instance,
        batch_mode=False,
        budget=budget,
        parity_filter=parity_filter,
        trace=trace,
        collect_delta=collect_delta,
    )


def solve_batch(
    instance: IqpInstance,
    budget: Budget | None = None,
    *,
    parity_filter: bool = True,
    trace: Trace | None = None,
    collect_delta: bool = False,
) -> SolveResult:
    """Curvature-batch branching solver (same contract as solve_sequential).

    Gradient equalities are imposed all at once when no negative-curvature
    direction exists; each batch child is flat and is solved as a leaf, so a
    root-to-leaf path batches at most once.
    """
    return _solve(
        instance,
        batch_mode=True,
        budget=budget,
        parity_filter=parity_filter,
        trace=trace,
        collect_delta=collect_delta,
    )
