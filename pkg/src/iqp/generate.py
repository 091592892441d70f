"""Reproducible random instances and polytopes for tests and benchmarks."""

from __future__ import annotations

import random

from .hull import Polytope
from .linalg import IntMatrix
from .model import IqpInstance


def generate_instance(
    seed: int,
    n: int,
    l: int = 3,
    m_extra: int = 0,
    box: int = 3,
) -> IqpInstance:
    """Seeded random instance with a guaranteed bounded, nonempty region.

    Q is symmetric with entries uniform in [-l, l] (c likewise); A starts
    with the 2n box rows ``|x_i| <= box`` and adds ``m_extra`` random rows
    whose right-hand sides are centered on a random integer interior point
    with positive slack, so the region always contains that point.  Identical
    seeds give identical instances.
    """
    rng = random.Random(seed)
    qm = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = rng.randint(-l, l)
            qm[i][j] = v
            qm[j][i] = v
    c = tuple(rng.randint(-l, l) for _ in range(n))
    rows: list[tuple[int, ...]] = []
    rhs: list[int] = []
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        rows.append(unit)
        rhs.append(box)
        rows.append(tuple(-u for u in unit))
        rhs.append(box)
    x0 = [rng.randint(-box, box) for _ in range(n)]
    for _ in range(m_extra):
        row = tuple(rng.randint(-l, l) for _ in range(n))
        slack = rng.randint(1, max(1, l))
        rows.append(row)
        rhs.append(sum(a * b for a, b in zip(row, x0)) + slack)
    return IqpInstance(
        q=IntMatrix(qm),
        c=c,
        a=IntMatrix(rows, ncols=n),
        b=tuple(rhs),
    )


def generate_polytope(seed: int, n: int, m: int, l: int = 3) -> Polytope:
    """Seeded bounded polytope with ``m`` rows and entries in [-l, l].

    Rejection-samples row sets until the region is bounded; odd seeds center
    the right-hand sides on the origin (guaranteed nonempty), even seeds
    draw them uniformly (possibly empty polytopes are part of the
    distribution).
    """
    rng = random.Random(seed)
    while True:
        rows = [
            tuple(rng.randint(-l, l) for _ in range(n)) for _ in range(m)
        ]
        if seed % 2 == 1:
            rhs = tuple(rng.randint(0, l) for _ in range(m))
        else:
            rhs = tuple(rng.randint(-l, l) for _ in range(m))
        p = Polytope(IntMatrix(rows, ncols=n), rhs)
        if p.is_bounded():
            return p
