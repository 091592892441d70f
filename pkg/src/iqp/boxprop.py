"""Exact coordinate boxes and integer interval propagation.

The solvers use two cheap, sound pruning devices built on integer interval
arithmetic: a bounding box obtained from per-coordinate exact LPs over the
inequality system, and fixpoint tightening of that box against interval rows
(equalities or two-sided inequalities).  Both only ever discard regions that
provably contain no integer point of the subproblem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ilp import LpProblem, LpStatus, lp_solve
from .linalg import IntMatrix, IntVec


@dataclass(frozen=True)
class BoxBounds:
    """Componentwise integer bounds ``lower <= x <= upper``."""

    lower: IntVec
    upper: IntVec

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("bound vectors have different lengths")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def volume(self) -> int:
        v = 1
        for lo, hi in zip(self.lower, self.upper):
            v *= hi - lo + 1
        return v

    def contains(self, x: Sequence[int]) -> bool:
        return all(lo <= v <= hi for lo, v, hi in zip(self.lower, x, self.upper))

    def as_rows(self) -> tuple[tuple[IntVec, ...], IntVec]:
        """The box as inequality rows ``Ax <= b`` (upper then lower per coordinate)."""
        n = self.dimension
        rows: list[IntVec] = []
        rhs: list[int] = []
        for i in range(n):
            unit = tuple(1 if j == i else 0 for j in range(n))
            rows.append(unit)
            rhs.append(self.upper[i])
            rows.append(tuple(-u for u in unit))
            rhs.append(-self.lower[i])
        return tuple(rows), tuple(rhs)


class Unbounded:
    """Marker result: some coordinate has no finite LP bound."""


class EmptyRegion:
    """Marker result: the rational relaxation is empty."""


def bounding_box(
    a: IntMatrix,
    b: Sequence[int],
    eq: tuple[IntMatrix, Sequence[int]] | None = None,
) -> BoxBounds | type[Unbounded] | type[EmptyRegion]:
    """Exact integer bounding box of ``{x : Ax <= b (, Cx = d)}``.

    Each bound comes from one exact LP; results are floored/ceiled, which
    keeps every integer point of the region.
    """
    n = a.ncols
    a_eq, b_eq = (eq if eq is not None else (None, None))
    lower: list[int] = []
    upper: list[int] = []
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        lo = lp_solve(LpProblem(unit, a, tuple(b), a_eq, b_eq))
        if lo.status is LpStatus.INFEASIBLE:
            return EmptyRegion
        if lo.status is LpStatus.UNBOUNDED:
            return Unbounded
        hi = lp_solve(LpProblem(tuple(-u for u in unit), a, tuple(b), a_eq, b_eq))
        if hi.status is LpStatus.UNBOUNDED:
            return Unbounded
        lo_i = -((-lo.value.numerator) // lo.value.denominator)  # ceil
        maxv: Fraction = -hi.value  # hi solved min of -x_i
        hi_i = maxv.numerator // maxv.denominator  # floor
        if lo_i > hi_i:
            return EmptyRegion
        lower.append(lo_i)
        upper.append(hi_i)
    return BoxBounds(tuple(lower), tuple(upper))


# (coefficients, low, high) for low <= a.x <= high; None means unbounded side
IntervalRow = tuple[IntVec, int | None, int | None]


def propagate_intervals(
    rows: Sequence[IntervalRow],
    box: BoxBounds,
    *,
    max_rounds: int = 64,
) -> BoxBounds | None:
    """Tighten an integer box against interval rows; None when provably empty.

    Standard bounds tightening: for each row and coordinate, the row's value
    range over the current box induces integer bounds on that coordinate
    (exact ceiling/floor divisions).  Iterates to a fixpoint or the round cap.
    """
    lo = list(box.lower)
    hi = list(box.upper)
    n = len(lo)
    for _ in range(max_rounds):
        changed = False
        for coeffs, rlo, rhi in rows:
            terms_min = [0] * n
            terms_max = [0] * n
            smin = smax = 0
            support = []
            for j in range(n):
                c = coeffs[j]
                if c > 0:
                    tmin, tmax = c * lo[j], c * hi[j]
                elif c < 0:
                    tmin, tmax = c * hi[j], c * lo[j]
                else:
                    continue
                support.append(j)
                terms_min[j] = tmin
                terms_max[j] = tmax
                smin += tmin
                smax += tmax
            if (rhi is not None and smin > rhi) or (rlo is not None and smax < rlo):
                return None
            for j in support:
                c = coeffs[j]
                rest_min = smin - terms_min[j]
                rest_max = smax - terms_max[j]
                # rlo - rest_max <= c * x_j <= rhi - rest_min
                num_lo = rlo - rest_max if rlo is not None else None
                num_hi = rhi - rest_min if rhi is not None else None
                if c < 0:
                    num_lo, num_hi = num_hi, num_lo
                    c = -c
                    if num_lo is not None:
                        num_lo = -num_lo
                    if num_hi is not None:
                        num_hi = -num_hi
                    # after negation: num_lo <= (-c)x <= num_hi became
                    # -num_hi <= c x <= -num_lo with c > 0
                if num_lo is not None:
                    new_lo = -((-num_lo) // c)
                    if new_lo > lo[j]:
                        lo[j] = new_lo
                        changed = True
                if num_hi is not None:
                    new_hi = num_hi // c
                    if new_hi < hi[j]:
                        hi[j] = new_hi
                        changed = True
                if lo[j] > hi[j]:
                    return None
        if not changed:
            break
    return BoxBounds(tuple(lo), tuple(hi))
