"""Command-line interface.

Subcommands: solve, verify, gen, hull, reduce, bench.  Reports are flat
``key: value`` lines with stable key names so harnesses can parse them.

Exit codes: 0 success (optimal or infeasible); 1 verification mismatch;
2 parse error; 3 objective not concave; 4 bad cover or kappa; 5 unbounded
region; 6 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .dks import (
    decode_subgraph,
    densest_k_subgraph_to_iqp,
    induced_edge_count,
    neighbourhood_types,
    subgraph_value,
)
from .errors import (
    BudgetExceeded,
    IqpError,
    KappaOutOfRange,
    NotAVertexCover,
    NotConcave,
    ParseError,
    UnboundedRegion,
)
from .generate import generate_instance
from .hull import (
    Polytope,
    b_independent_M,
    concave_minimize,
    integer_hull_vertex_superset,
    polytope_vertices,
)
from .io import emit_instance, parse_document, parse_graph, parse_instance
from .model import Budget, IqpInstance, SolveResult, SolveStatus
from .oracle import brute_integer_hull_vertices, oracle_min
from .solver import solve_batch, solve_sequential
from .verify import verify_instance

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_NOT_CONCAVE = 3
EXIT_BAD_COVER = 4
EXIT_UNBOUNDED = 5
EXIT_BUDGET = 6


def _emit(key: str, value) -> None:
    if isinstance(value, (dict, list, tuple)):
        value = json.dumps(value if not isinstance(value, tuple) else list(value))
    print(f"{key}: {value}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _budget(args) -> Budget:
    return Budget(max_nodes=args.max_nodes, max_children=args.max_children)


def _print_result(result: SolveResult, elapsed: float) -> int:
    _emit("status", result.status.value)
    if result.status is SolveStatus.OPTIMAL:
        _emit("value", result.value)
        _emit("witness", list(result.witness))
    stats = result.stats.as_dict()
    for key in (
        "nodes",
        "leaves",
        "ilp_nodes",
        "constraint_children",
        "gradient_children",
        "batch_children",
        "batches_performed",
        "memo_hits",
        "max_depth",
        "max_delta_seen",
        "delta_exact",
    ):
        _emit(key, stats[key])
    _emit("nodes_per_depth", stats["nodes_per_depth"])
    _emit("children_per_depth", stats["children_per_depth"])
    _emit("wall_time_s", f"{elapsed:.3f}")
    if result.status is SolveStatus.UNBOUNDED_REGION:
        return EXIT_UNBOUNDED
    if result.status is SolveStatus.BUDGET_EXCEEDED:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = parse_instance(_read(args.path))
    t0 = time.perf_counter()
    if args.algorithm == "oracle":
        result = oracle_min(instance)
    elif args.algorithm == "sequential":
        result = solve_sequential(
            instance, _budget(args), collect_delta=args.track_delta
        )
    else:
        result = solve_batch(instance, _budget(args), collect_delta=args.track_delta)
    return _print_result(result, time.perf_counter() - t0)


def cmd_verify(args) -> int:
    reports = []
    if args.path is not None:
        instance = parse_instance(_read(args.path))
        reports.append((args.path, verify_instance(instance)))
    for t in range(args.trials):
        seed = args.seed + t
        inst = generate_instance(seed, n=2 + t % 3, l=args.l, m_extra=t % 4, box=args.box)
        reports.append((f"seed-{seed}", verify_instance(inst)))
    if not reports:
        print("nothing to verify: give a path and/or --trials", file=sys.stderr)
        return EXIT_PARSE
    all_ok = True
    for name, rep in reports:
        _emit("instance", name)
        _emit("result", rep.status)
        _emit("value_batch", rep.value_batch)
        _emit("value_sequential", rep.value_sequential)
        _emit("value_oracle", rep.value_oracle)
        for field in (
            "mismatches",
            "inertia_violations",
            "cap_violations",
            "batch_violations",
            "delta_violations",
            "skipped",
        ):
            items = getattr(rep, field)
            if items:
                _emit(field, items)
        all_ok = all_ok and rep.ok
    _emit("verified", len(reports))
    _emit("all_ok", all_ok)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_gen(args) -> int:
    instance = generate_instance(
        args.seed, n=args.n, l=args.l, m_extra=args.m, box=args.box
    )
    sys.stdout.write(emit_instance(instance))
    return EXIT_OK


def cmd_hull(args) -> int:
    parsed = parse_document(_read(args.path))
    if args.mode == "concave":
        if not isinstance(parsed, IqpInstance):
            raise ParseError("concave mode needs a full instance with Q and c")
        poly = Polytope(parsed.a, parsed.b)
        result = concave_minimize(poly, parsed.q, parsed.c)
        _emit("status", result.status.value)
        if result.status is SolveStatus.OPTIMAL:
            _emit("value", result.value)
            _emit("witness", list(result.witness))
        if result.status is SolveStatus.UNBOUNDED_REGION:
            return EXIT_UNBOUNDED
        return EXIT_OK
    poly = parsed if isinstance(parsed, Polytope) else Polytope(parsed.a, parsed.b)
    if args.mode == "brute":
        verts = brute_integer_hull_vertices(poly)
        _emit("mode", "brute")
        _emit("hull_vertices", len(verts))
        for v in verts:
            _emit("vertex", list(v))
        return EXIT_OK
    cand = integer_hull_vertex_superset(poly)
    n = poly.nvars
    m_param = b_independent_M(poly.a)
    bound = 2 * (poly.nrows**n) * (6 * n * n * m_param) ** (n - 1)
    _emit("mode", "superset")
    _emit("M", m_param)
    _emit("vertex_count_bound", bound)
    _emit("polytope_vertices", len(polytope_vertices(poly)))
    _emit("candidates", len(cand.points))
    for v in cand.points:
        _emit("candidate", list(v))
    return EXIT_OK


def cmd_reduce(args) -> int:
    graph = parse_graph(_read(args.path))
    cover = tuple(int(v) for v in args.cover.split(",")) if args.cover else ()
    instance = densest_k_subgraph_to_iqp(graph, cover, args.kappa)
    partition = neighbourhood_types(graph, cover)
    if args.out:
        Path(args.out).write_text(emit_instance(instance))
        _emit("instance_file", args.out)
    result = solve_batch(instance, _budget(args))
    _emit("status", result.status.value)
    if result.status is not SolveStatus.OPTIMAL:
        return EXIT_BUDGET if result.status is SolveStatus.BUDGET_EXCEEDED else EXIT_OK
    edges = subgraph_value(result.value)
    subset = decode_subgraph(result.witness, partition)
    _emit("kappa", args.kappa)
    _emit("edges", edges)
    _emit("subgraph", list(subset))
    _emit("check_edges", induced_edge_count(graph, subset))
    return EXIT_OK


def cmd_bench(args) -> int:
    total = {"batch": 0.0, "sequential": 0.0}
    nodes = {"batch": 0, "sequential": 0}
    for t in range(args.trials):
        inst = generate_instance(
            args.seed + t, n=args.n, l=args.l, m_extra=args.m, box=args.box
        )
        for name, fn in (("batch", solve_batch), ("sequential", solve_sequential)):
            t0 = time.perf_counter()
            res = fn(inst, _budget(args))
            total[name] += time.perf_counter() - t0
            nodes[name] += res.stats.nodes
    _emit("trials", args.trials)
    for name in ("batch", "sequential"):
        _emit(f"{name}_time_s", f"{total[name]:.3f}")
        _emit(f"{name}_nodes", nodes[name])
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iqp",
        description="Exact solvers for integer quadratic programs.",
        epilog=(
            "exit codes: 0 ok, 1 verify mismatch, 2 parse error, 3 not concave, "
            "4 bad cover/kappa, 5 unbounded region, 6 budget exceeded"
        ),
    )
    parser.add_argument("--version", action="version", version=f"iqp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_budget(p):
        p.add_argument("--max-nodes", type=int, default=10**6)
        p.add_argument("--max-children", type=int, default=10**5)
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            help="accepted for interface compatibility; exploration is "
            "deterministic and single-threaded, so this flag never changes output",
        )

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("path")
    p.add_argument(
        "--algorithm", choices=("batch", "sequential", "oracle"), default="batch"
    )
    p.add_argument("--track-delta", action="store_true")
    add_budget(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="cross-check solvers, oracle and invariants")
    p.add_argument("path", nargs="?", default=None)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--l", "--L", dest="l", type=int, default=3)
    p.add_argument("--box", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="emit a reproducible random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", "--L", dest="l", type=int, default=3)
    p.add_argument("--m", type=int, default=0, help="extra random rows")
    p.add_argument("--box", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("hull", help="integer hull candidates / brute hull / concave min")
    p.add_argument("path")
    p.add_argument("--mode", choices=("superset", "brute", "concave"), default="superset")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("reduce", help="densest-k-subgraph reduction and solve")
    p.add_argument("path", help="graph file ('p <n> <m>' header, 'u v' lines)")
    p.add_argument("--cover", required=True, help="comma-separated cover vertices")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--out", default=None, help="write the reduction instance here")
    add_budget(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="time both solvers on generated instances")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--l", "--L", dest="l", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--box", type=int, default=3)
    add_budget(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotConcave as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONCAVE
    except (NotAVertexCover, KappaOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_COVER
    except UnboundedRegion as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except IqpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
