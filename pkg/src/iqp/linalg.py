"""Exact integer and rational linear algebra.

Everything here runs on Python's arbitrary-precision ``int`` and
``fractions.Fraction``; nothing is ever rounded.  The module supplies the
toolkit the branching solvers are built on: fraction-free determinants,
maximum subdeterminants, incremental row-space membership, integer kernel
bases obtained from cofactor expansions, inertia by symmetric congruence,
and particular solutions of rational systems.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, NotSymmetric, RankDeficientRows

IntVec = tuple[int, ...]
RatVec = tuple[Fraction, ...]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise ValueError("dimension mismatch in dot product")
    return sum(a * b for a, b in zip(u, v))


def _check_int(value: object) -> int:
    if not isinstance(value, int):
        raise TypeError(f"matrix entries must be int, got {type(value).__name__}")
    return int(value)


class IntMatrix:
    """Immutable rectangular matrix with exact integer entries.

    Row-major.  A matrix with zero rows still knows its column count so that
    empty equality systems keep a well-defined ambient dimension.
    """

    __slots__ = ("_data", "_ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(_check_int(v) for v in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("matrix rows have unequal lengths")
            if ncols is not None and ncols != width:
                raise ValueError("ncols inconsistent with row data")
            self._ncols = width
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit column count")
            self._ncols = int(ncols)
        self._data = data

    @classmethod
    def _trusted(cls, data: tuple[IntVec, ...], ncols: int) -> "IntMatrix":
        # Internal fast path: callers guarantee rectangular int tuples.
        m = cls.__new__(cls)
        m._data = data
        m._ncols = ncols
        return m

    @classmethod
    def empty(cls, ncols: int) -> "IntMatrix":
        return cls((), ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        cols = [tuple(int(v) for v in c) for c in columns]
        if cols:
            height = len(cols[0])
            if any(len(c) != height for c in cols):
                raise ValueError("columns have unequal lengths")
        else:
            if nrows is None:
                raise ValueError("empty column list needs an explicit row count")
            height = int(nrows)
        return cls(tuple(tuple(c[i] for c in cols) for i in range(height)), ncols=len(cols))

    @property
    def data(self) -> tuple[IntVec, ...]:
        return self._data

    @property
    def nrows(self) -> int:
        return len(self._data)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._data), self._ncols)

    def row(self, i: int) -> IntVec:
        return self._data[i]

    def column(self, j: int) -> IntVec:
        return tuple(row[j] for row in self._data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            tuple(tuple(row[j] for row in self._data) for j in range(self._ncols)),
            ncols=len(self._data),
        )

    def matvec(self, x: Sequence[int]) -> IntVec:
        if len(x) != self._ncols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self._data)

    def vecmat(self, y: Sequence[int]) -> IntVec:
        if len(y) != len(self._data):
            raise ValueError("vector length does not match row count")
        return tuple(
            sum(y[i] * self._data[i][j] for i in range(len(self._data)))
            for j in range(self._ncols)
        )

    def with_row(self, row: Sequence[int]) -> "IntMatrix":
        new = tuple(int(v) for v in row)
        if len(new) != self._ncols:
            raise ValueError("appended row has wrong length")
        return IntMatrix._trusted(self._data + (new,), self._ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            tuple(tuple(self._data[i][j] for j in cols) for i in rows),
            ncols=len(cols),
        )

    def is_symmetric(self) -> bool:
        if len(self._data) != self._ncols:
            return False
        d = self._data
        return all(d[i][j] == d[j][i] for i in range(len(d)) for j in range(i))

    def max_abs(self) -> int:
        """Largest absolute entry (0 for an empty matrix)."""
        return max((abs(v) for row in self._data for v in row), default=0)

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self._ncols == other._ncols
            and self._data == other._data
        )

    def __hash__(self) -> int:
        return hash((self._ncols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({list(map(list, self._data))!r}, ncols={self._ncols})"


def _det_inplace(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant; destroys its argument."""
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            ri = rows[i]
            rk = rows[k]
            factor = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - factor * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def det(m: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (empty matrix: 1)."""
    if m.nrows != m.ncols:
        raise ValueError("determinant requires a square matrix")
    return _det_inplace([list(row) for row in m.data])


def _vec_gcd(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
        if g == 1:
            return 1
    return g


class IntRowSpan:
    """Incrementally maintained row space of integer vectors.

    Rows are kept as a fully reduced integer echelon: sorted by pivot column,
    pivot entries positive, every row gcd-normalized and reduced against all
    the others.  This makes the stored rows a canonical representation of the
    span, so two spans are equal iff their ``canonical_rows`` are equal.

    Stored rows are immutable tuples, so :meth:`copy` is a shallow O(rank)
    operation; the solvers copy spans on every child node.
    """

    __slots__ = ("_ncols", "_rows")

    def __init__(self, ncols: int):
        self._ncols = ncols
        self._rows: list[tuple[int, IntVec]] = []  # (pivot column, row)

    def copy(self) -> "IntRowSpan":
        new = IntRowSpan(self._ncols)
        new._rows = self._rows[:]
        return new

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    def pivot_columns(self) -> tuple[int, ...]:
        return tuple(pc for pc, _ in self._rows)

    def canonical_rows(self) -> tuple[IntVec, ...]:
        return tuple(row for _, row in self._rows)

    def _reduced(self, vec: Sequence[int]) -> list[int]:
        v = list(vec)
        if len(v) != self._ncols:
            raise ValueError("vector length does not match span dimension")
        w = self._ncols
        for pc, prow in self._rows:
            c = v[pc]
            if c:
                p = prow[pc]
                if p == 1:
                    for j in range(w):
                        if prow[j]:
                            v[j] -= c * prow[j]
                else:
                    for j in range(w):
                        v[j] = p * v[j] - c * prow[j]
                    g = _vec_gcd(v)
                    if g > 1:
                        for j in range(w):
                            v[j] //= g
        return v

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self._reduced(vec))

    def reduce_with_scale(self, vec: Sequence[int]) -> tuple[list[int], int]:
        """Reduce ``vec`` against the span without gcd normalization.

        Returns ``(v, alpha)`` with ``v = alpha * vec - (combination of span
        rows)`` and ``alpha > 0`` (the product of the pivots used), so exact
        affine consequences of the reduction can be recovered.
        """
        v = list(vec)
        if len(v) != self._ncols:
            raise ValueError("vector length does not match span dimension")
        w = self._ncols
        alpha = 1
        for pc, prow in self._rows:
            c = v[pc]
            if c:
                p = prow[pc]
                for j in range(w):
                    v[j] = p * v[j] - c * prow[j]
                alpha *= p
        return v, alpha

    def add(self, vec: Sequence[int]) -> bool:
        """Insert ``vec``; returns True iff it enlarged the span."""
        v = self._reduced(vec)
        pivot = next((j for j, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        g = _vec_gcd(v)
        if g > 1:
            v = [x // g for x in v]
        if v[pivot] < 0:
            v = [-x for x in v]
        p = v[pivot]
        vt = tuple(v)
        # Back-eliminate the new pivot column from the existing rows. Every
        # stored row already has a zero in every other pivot column, and v is
        # reduced against all of them, so pivots stay put.
        new_rows: list[tuple[int, IntVec]] = []
        for pc, row in self._rows:
            c = row[pivot]
            if c:
                merged = [p * a - c * b for a, b in zip(row, vt)]
                g = _vec_gcd(merged)
                if g > 1:
                    merged = [x // g for x in merged]
                new_rows.append((pc, tuple(merged)))
            else:
                new_rows.append((pc, row))
        new_rows.append((pivot, vt))
        new_rows.sort(key=lambda item: item[0])
        self._rows = new_rows
        return True


def rank(m: IntMatrix) -> int:
    span = IntRowSpan(m.ncols)
    for row in m.data:
        span.add(row)
    return span.rank


def solve_rational_system(c: IntMatrix, d: Sequence[int]) -> RatVec | None:
    """A particular rational solution of ``C x = d``, or None if inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    if len(d) != c.nrows:
        raise ValueError("right-hand side length does not match row count")
    n = c.ncols
    aug = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(c.data, d)]
    pivots: list[tuple[int, int]] = []  # (row index, column)
    row_idx = 0
    for col in range(n):
        pivot_row = next(
            (i for i in range(row_idx, len(aug)) if aug[i][col] != 0), None
        )
        if pivot_row is None:
            continue
        aug[row_idx], aug[pivot_row] = aug[pivot_row], aug[row_idx]
        pr = aug[row_idx]
        inv = 1 / pr[col]
        aug[row_idx] = pr = [v * inv for v in pr]
        for i in range(len(aug)):
            if i != row_idx and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        pivots.append((row_idx, col))
        row_idx += 1
        if row_idx == len(aug):
            break
    for i in range(row_idx, len(aug)):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in pivots:
        x[col] = aug[r][n]
    return tuple(x)


def rank_and_rowspace_member(
    c: IntMatrix, v: Sequence[int]
) -> tuple[bool, RatVec | None]:
    """Decide whether ``v`` lies in the row space of ``C``.

    Returns ``(True, lam)`` with ``lam^T C = v`` when it does, else
    ``(False, None)``.  An empty ``C`` spans only the zero vector.
    """
    lam = solve_rational_system(c.transpose(), v)
    return (lam is not None, lam)


def _ceil_sqrt(x: int) -> int:
    if x <= 0:
        return 0
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def max_subdeterminant(
    m: IntMatrix,
    mode: str = "exact",
    *,
    max_evals: int = 10**6,
    size: int | None = None,
) -> int:
    """Maximum absolute value of a (square) subdeterminant of ``m``.

    ``mode="exact"`` enumerates every square submatrix (every size, or only
    ``size`` x ``size`` when given) and raises :class:`BudgetExceeded` when
    the number of determinant evaluations would exceed ``max_evals`` rather
    than silently degrading.  ``mode="hadamard"`` returns an integer upper
    bound: for each size, the product of the largest row Euclidean norms,
    rounded up.
    """
    nr, nc = m.shape
    if size is not None:
        if size <= 0:
            raise ValueError("size must be positive")
        if size > min(nr, nc):
            return 0
        sizes: Iterable[int] = (size,)
    else:
        sizes = range(1, min(nr, nc) + 1)

    if mode == "hadamard":
        sq_norms = sorted((sum(v * v for v in row) for row in m.data), reverse=True)
        best = 0
        prod = 1
        for s in range(1, min(nr, nc) + 1):
            prod *= sq_norms[s - 1]
            if size is None or s == size:
                best = max(best, _ceil_sqrt(prod))
        return best
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    total = sum(math.comb(nr, s) * math.comb(nc, s) for s in sizes)
    if total > max_evals:
        raise BudgetExceeded(
            f"exact subdeterminant scan needs {total} evaluations, budget is {max_evals}"
        )
    best = 0
    data = m.data
    for s in sizes:
        for rows in itertools.combinations(range(nr), s):
            picked = [data[i] for i in rows]
            for cols in itertools.combinations(range(nc), s):
                sub = [[row[j] for j in cols] for row in picked]
                d = abs(_det_inplace(sub))
                if d > best:
                    best = d
    return best


@dataclass(frozen=True)
class KernelBasis:
    """Integer basis of ker(C) built from cofactor expansions.

    The block indexed by ``pivot_columns`` holds the negated replaced-column
    determinants; the complementary block is ``delta`` times an identity, so
    the vectors are linearly independent and every entry is a k x k minor of
    C (bounded by the exact maximum subdeterminant).
    """

    vectors: tuple[IntVec, ...]
    pivot_columns: tuple[int, ...]
    delta: int
    norm_bound: int

    def __len__(self) -> int:
        return len(self.vectors)


def adjugate_kernel_basis(c: IntMatrix) -> KernelBasis:
    """Kernel basis for a full-row-rank integer matrix.

    For ``k = 0`` this is the standard basis.  Pivot columns are chosen as
    the lexicographically first subset supporting a nonsingular square block
    (greedy column scan), which makes the construction deterministic.

    Raises :class:`RankDeficientRows` when the rows are dependent.
    """
    k, n = c.shape
    if k == 0:
        vecs = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return KernelBasis(vectors=vecs, pivot_columns=(), delta=1, norm_bound=1)
    if k > n:
        raise RankDeficientRows(f"{k} rows cannot be independent in dimension {n}")

    span = IntRowSpan(k)
    pivot_cols: list[int] = []
    for j in range(n):
        if span.add(c.column(j)):
            pivot_cols.append(j)
            if len(pivot_cols) == k:
                break
    if len(pivot_cols) < k:
        raise RankDeficientRows("equality rows are linearly dependent")

    data = c.data
    c_s = [[data[i][j] for j in pivot_cols] for i in range(k)]
    delta = _det_inplace([row[:] for row in c_s])
    if delta == 0:  # cannot happen after the greedy scan
        raise RankDeficientRows("pivot block is singular")

    pivot_set = set(pivot_cols)
    free_cols = [j for j in range(n) if j not in pivot_set]
    vectors: list[IntVec] = []
    for t in free_cols:
        c_t = [data[i][t] for i in range(k)]
        y = [0] * n
        # Cramer: the pivot-block entry for column j is minus the determinant
        # of C_S with that column replaced by C_t - itself a k x k minor of C.
        for jj, col in enumerate(pivot_cols):
            replaced = [
                [c_t[i] if p == jj else c_s[i][p] for p in range(k)] for i in range(k)
            ]
            y[col] = -_det_inplace(replaced)
        y[t] = delta
        vectors.append(tuple(y))

    for y in vectors:
        if any(dot(row, y) != 0 for row in data):
            raise AssertionError("kernel basis vector does not annihilate C")
    norm_bound = max((max(abs(v) for v in y) for y in vectors), default=0)
    return KernelBasis(
        vectors=tuple(vectors),
        pivot_columns=tuple(pivot_cols),
        delta=delta,
        norm_bound=norm_bound,
    )


@dataclass(frozen=True)
class Inertia:
    """Counts of positive, negative and zero eigenvalues of a symmetric form."""

    positive: int
    negative: int
    zero: int

    @property
    def dimension(self) -> int:
        return self.positive + self.negative + self.zero


def restricted_form(q: IntMatrix, basis: IntMatrix) -> IntMatrix:
    """``B^T Q B`` for a basis given as matrix columns."""
    if q.nrows != q.ncols:
        raise ValueError("Q must be square")
    if basis.nrows != q.ncols:
        raise ValueError("basis column length does not match Q")
    r = basis.ncols
    cols = [basis.column(j) for j in range(r)]
    qcols = [q.matvec(col) for col in cols]
    return IntMatrix(
        tuple(tuple(dot(cols[i], qcols[j]) for j in range(r)) for i in range(r)),
        ncols=r,
    )


def inertia_of_restricted_form(q: IntMatrix, basis: IntMatrix) -> Inertia:
    """Inertia of ``Q`` restricted to the span of the columns of ``basis``.

    Computed by exact rational symmetric congruence elimination: nonzero
    diagonal pivots are used directly; a fully zero diagonal with a nonzero
    off-diagonal entry is handled by adding row/column j into row/column i,
    which creates the diagonal entry ``2 a_ij`` and preserves the congruence
    class.  By Sylvester's law the answer is basis-independent.

    Raises :class:`NotSymmetric` if ``Q`` is not symmetric.
    """
    if not q.is_symmetric():
        raise NotSymmetric("inertia requires a symmetric matrix")
    mm = restricted_form(q, basis)
    r = mm.nrows
    m = [[Fraction(v) for v in row] for row in mm.data]
    pos = neg = zero = 0
    for i in range(r):
        if m[i][i] == 0:
            swap = next((j for j in range(i + 1, r) if m[j][j] != 0), None)
            if swap is not None:
                for row in m:
                    row[i], row[swap] = row[swap], row[i]
                m[i], m[swap] = m[swap], m[i]
            else:
                other = next((j for j in range(i + 1, r) if m[i][j] != 0), None)
                if other is None:
                    zero += 1
                    continue
                for row in m:
                    row[i] += row[other]
                m[i] = [a + b for a, b in zip(m[i], m[other])]
        p = m[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for j in range(i + 1, r):
            if m[j][i]:
                f = m[j][i] / p
                m[j] = [a - f * b for a, b in zip(m[j], m[i])]
                for row in m:
                    row[j] -= f * row[i]
    return Inertia(positive=pos, negative=neg, zero=zero)
