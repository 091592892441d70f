"""Exact solvers for integer quadratic programs with indefinite objectives.

The package minimizes ``x^T Q x + c^T x`` over the integer points of a
bounded polyhedron using exact integer/rational arithmetic throughout: a
sequential branching solver, a curvature-batch solver that imposes all
gradient equalities at once, a cell-decomposition route for concave
objectives, a brute-force oracle for desk-scale validation, and a
densest-k-subgraph reduction.
"""

from .boxprop import BoxBounds, bounding_box, propagate_intervals
from .dks import (
    Graph,
    TypeClass,
    TypePartition,
    brute_force_densest,
    decode_subgraph,
    densest_k_subgraph_to_iqp,
    induced_edge_count,
    minimum_vertex_cover,
    neighbourhood_types,
    subgraph_value,
)
from .errors import (
    BudgetExceeded,
    IqpError,
    KappaOutOfRange,
    NotAVertexCover,
    NotConcave,
    NotSymmetric,
    ParseError,
    RankDeficientRows,
    UnboundedRegion,
)
from .generate import generate_instance, generate_polytope
from .hull import (
    CellRecord,
    Cell,
    HullCandidateSet,
    Polytope,
    b_independent_M,
    concave_minimize,
    integer_hull_vertex_superset,
    polytope_vertices,
)
from .ilp import IlpOutcome, LpOutcome, LpProblem, LpStatus, ilp_solve, lp_solve
from .io import (
    emit_graph,
    emit_instance,
    emit_polytope,
    parse_document,
    parse_graph,
    parse_instance,
)
from .linalg import (
    Inertia,
    IntMatrix,
    IntRowSpan,
    KernelBasis,
    adjugate_kernel_basis,
    det,
    inertia_of_restricted_form,
    max_subdeterminant,
    rank,
    rank_and_rowspace_member,
    restricted_form,
    solve_rational_system,
)
from .model import Budget, IqpInstance, PathStats, SolveResult, SolveStats, SolveStatus
from .oracle import brute_integer_hull_vertices, enumerate_feasible, oracle_min
from .solver import (
    CurvatureClasses,
    LeafResult,
    Node,
    Trace,
    batch_children,
    check_bounded,
    classify_curvature,
    constraint_children,
    flat_leaf,
    gradient_children,
    solve_batch,
    solve_sequential,
)
from .verify import VerifyReport, verify_instance

__version__ = "0.1.0"
