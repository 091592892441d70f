"""Densest k-subgraph via a quadratic program over cover variables and types.

Fix a vertex cover C of the graph.  Vertices outside C form an independent
set and are interchangeable whenever they see the same subset of C, so they
collapse into neighbourhood types counted by one integer variable each.
Choosing z_v in {0,1} per cover vertex and n_t in [0, m_t] per type, the
number of edges induced by the selection is

    z^T A_C z / 2 + z^T B n,

with A_C the cover-induced adjacency matrix and B the cover-to-type
incidence; there are no edges inside the independent set, hence the zero
block.  Minimizing the negated count under a cardinality constraint is an
integer QP.  To keep the objective matrix integral the instance carries the
doubled matrix, so reported edge counts are half the negated optimal value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import KappaOutOfRange, NotAVertexCover
from .linalg import IntMatrix, IntVec
from .model import IqpInstance


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: vertex count plus a deduplicated edge set."""

    n: int
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for {n} vertices")
            norm.add((min(u, v), max(u, v)))
        return cls(n=n, edges=frozenset(norm))

    def neighbours(self, v: int) -> frozenset[int]:
        return frozenset(
            (b if a == v else a) for a, b in self.edges if v in (a, b)
        )

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))


@dataclass(frozen=True)
class TypeClass:
    """Independent-set vertices sharing one cover neighbourhood."""

    signature: tuple[int, ...]
    members: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class TypePartition:
    cover: tuple[int, ...]
    types: tuple[TypeClass, ...]

    @property
    def nvars(self) -> int:
        return len(self.cover) + len(self.types)


def _check_cover(g: Graph, cover: Sequence[int]) -> tuple[int, ...]:
    cov = tuple(sorted(set(int(v) for v in cover)))
    if any(not (0 <= v < g.n) for v in cov):
        raise NotAVertexCover("cover contains out-of-range vertices")
    cov_set = set(cov)
    for u, v in g.edges:
        if u not in cov_set and v not in cov_set:
            raise NotAVertexCover(f"edge ({u},{v}) has no endpoint in the cover")
    return cov


def neighbourhood_types(g: Graph, cover: Sequence[int]) -> TypePartition:
    """Group the vertices outside the cover by their cover neighbourhood.

    Raises :class:`NotAVertexCover` when some edge avoids the cover.
    """
    cov = _check_cover(g, cover)
    cov_set = set(cov)
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in range(g.n):
        if v in cov_set:
            continue
        sig = tuple(sorted(g.neighbours(v) & cov_set))
        groups.setdefault(sig, []).append(v)
    types = tuple(
        TypeClass(signature=sig, members=tuple(sorted(members)))
        for sig, members in sorted(groups.items())
    )
    return TypePartition(cover=cov, types=types)


def densest_k_subgraph_to_iqp(
    g: Graph, cover: Sequence[int], kappa: int
) -> IqpInstance:
    """Instance whose optimum is minus twice the best induced edge count.

    Variables are (z_v for cover vertices in ascending order, n_t per type in
    signature order); the cardinality constraint is encoded as two opposite
    inequalities and all variables carry box rows, so the region is bounded.
    """
    if not (0 <= kappa <= g.n):
        raise KappaOutOfRange(f"kappa must be within [0, {g.n}], got {kappa}")
    part = neighbourhood_types(g, cover)
    cov = part.cover
    nz = len(cov)
    nt = len(part.types)
    dim = nz + nt
    idx = {v: i for i, v in enumerate(cov)}

    qm = [[0] * dim for _ in range(dim)]
    for u, v in g.edges:
        if u in idx and v in idx:
            qm[idx[u]][idx[v]] -= 1
            qm[idx[v]][idx[u]] -= 1
    for t, tc in enumerate(part.types):
        for v in tc.signature:
            qm[idx[v]][nz + t] -= 1
            qm[nz + t][idx[v]] -= 1

    rows: list[IntVec] = []
    rhs: list[int] = []
    for i in range(dim):
        unit = tuple(1 if j == i else 0 for j in range(dim))
        upper = 1 if i < nz else part.types[i - nz].count
        rows.append(unit)
        rhs.append(upper)
        rows.append(tuple(-u for u in unit))
        rhs.append(0)
    ones = tuple(1 for _ in range(dim))
    rows.append(ones)
    rhs.append(kappa)
    rows.append(tuple(-1 for _ in range(dim)))
    rhs.append(-kappa)

    return IqpInstance(
        q=IntMatrix(qm),
        c=tuple(0 for _ in range(dim)),
        a=IntMatrix(rows, ncols=dim),
        b=tuple(rhs),
    )


def subgraph_value(optimal_value: int) -> int:
    """Induced edge count from the doubled-objective optimum."""
    if optimal_value % 2 != 0:
        raise ValueError("doubled objective must be even")
    return -optimal_value // 2


def decode_subgraph(witness: Sequence[int], partition: TypePartition) -> tuple[int, ...]:
    """Concrete vertex selection realizing a solver witness.

    Cover vertices with z_v = 1 are taken as-is; each type contributes its
    lexicographically first n_t members.  The induced edge count of the
    result equals the objective because same-type vertices are
    interchangeable and the independent set has no internal edges.
    """
    nz = len(partition.cover)
    picked: list[int] = [v for v, z in zip(partition.cover, witness[:nz]) if z == 1]
    for tc, take in zip(partition.types, witness[nz:]):
        picked.extend(tc.members[:take])
    return tuple(sorted(picked))


def induced_edge_count(g: Graph, vertices: Sequence[int]) -> int:
    vs = set(vertices)
    return sum(1 for u, v in g.edges if u in vs and v in vs)


def minimum_vertex_cover(g: Graph) -> tuple[int, ...]:
    """Smallest vertex cover by exhaustive search (testing convenience, n <= 20)."""
    if g.n > 20:
        raise ValueError("brute-force cover search is limited to 20 vertices")
    for size in range(g.n + 1):
        for cand in itertools.combinations(range(g.n), size):
            cs = set(cand)
            if all(u in cs or v in cs for u, v in g.edges):
                return tuple(cand)
    raise AssertionError("unreachable: the full vertex set is always a cover")


def brute_force_densest(g: Graph, kappa: int) -> int:
    """Exhaustive maximum induced edge count over all kappa-subsets."""
    if not (0 <= kappa <= g.n):
        raise KappaOutOfRange(f"kappa must be within [0, {g.n}], got {kappa}")
    return max(
        induced_edge_count(g, sub)
        for sub in itertools.combinations(range(g.n), kappa)
    )
