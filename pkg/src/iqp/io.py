"""Instance, polytope and graph file formats.

Instances are JSON documents with fields ``n``, ``Q``, ``c``, ``A``, ``b``
and optional ``C``, ``d``; every integer is serialized as a decimal string
so arbitrary precision survives any structured-text parser.  A document
without ``Q`` is a plain polytope (``n``, ``A``, ``b``).  Graphs use a text
format with a ``p <n> <m>`` header followed by one ``u v`` edge per line,
0-indexed.
"""

from __future__ import annotations

import json
from typing import Sequence

from .dks import Graph
from .errors import ParseError
from .hull import Polytope
from .linalg import IntMatrix
from .model import IqpInstance


def _parse_int(value, what: str) -> int:
    if isinstance(value, bool):
        raise ParseError(f"{what}: booleans are not integers")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError as exc:
            raise ParseError(f"{what}: {value!r} is not a decimal integer") from exc
    raise ParseError(f"{what}: expected a decimal string, got {type(value).__name__}")


def _parse_vector(value, length: int, what: str) -> tuple[int, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise ParseError(f"{what}: expected a list of length {length}")
    return tuple(_parse_int(v, what) for v in value)


def _parse_matrix(value, ncols: int, what: str) -> IntMatrix:
    if not isinstance(value, list):
        raise ParseError(f"{what}: expected a list of rows")
    rows = tuple(_parse_vector(row, ncols, what) for row in value)
    return IntMatrix(rows, ncols=ncols)


def parse_document(text: str) -> IqpInstance | Polytope:
    """Parse an instance or polytope document.

    Symmetry of Q is enforced (rejected, never repaired); any structural
    problem raises :class:`ParseError`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")
    if "n" not in doc:
        raise ParseError("missing field 'n'")
    n = _parse_int(doc["n"], "n")
    if n < 1:
        raise ParseError("dimension must be at least 1")
    if "A" not in doc or "b" not in doc:
        raise ParseError("missing constraint fields 'A'/'b'")
    a = _parse_matrix(doc["A"], n, "A")
    b = _parse_vector(doc["b"], a.nrows, "b")

    if "Q" not in doc:
        for key in ("c", "C", "d"):
            if key in doc:
                raise ParseError(f"polytope document cannot carry field {key!r}")
        return Polytope(a, b)

    q = _parse_matrix(doc["Q"], n, "Q")
    if q.nrows != n:
        raise ParseError("Q must be an n x n matrix")
    if not q.is_symmetric():
        raise ParseError("Q must be symmetric; refusing to symmetrize")
    if "c" not in doc:
        raise ParseError("missing field 'c'")
    c = _parse_vector(doc["c"], n, "c")
    c0 = d0 = None
    if ("C" in doc) != ("d" in doc):
        raise ParseError("fields 'C' and 'd' must come together")
    if "C" in doc:
        c0 = _parse_matrix(doc["C"], n, "C")
        d0 = _parse_vector(doc["d"], c0.nrows, "d")
    try:
        return IqpInstance(q=q, c=c, a=a, b=b, c0=c0, d0=d0)
    except Exception as exc:
        raise ParseError(str(exc)) from exc


def parse_instance(text: str) -> IqpInstance:
    parsed = parse_document(text)
    if not isinstance(parsed, IqpInstance):
        raise ParseError("document has no objective; expected a full instance")
    return parsed


def _matrix_json(m: IntMatrix) -> list[list[str]]:
    return [[str(v) for v in row] for row in m.data]


def _vector_json(v: Sequence[int]) -> list[str]:
    return [str(x) for x in v]


def emit_instance(instance: IqpInstance) -> str:
    doc = {
        "n": instance.n,
        "Q": _matrix_json(instance.q),
        "c": _vector_json(instance.c),
        "A": _matrix_json(instance.a),
        "b": _vector_json(instance.b),
    }
    if instance.c0 is not None:
        doc["C"] = _matrix_json(instance.c0)
        doc["d"] = _vector_json(instance.d0)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit_polytope(p: Polytope) -> str:
    doc = {"n": p.nvars, "A": _matrix_json(p.a), "b": _vector_json(p.b)}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list graph format (``p <n> <m>`` header, ``u v`` lines)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("p"):
        raise ParseError("graph file must start with a 'p <n> <m>' header")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError("malformed graph header")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError as exc:
        raise ParseError("graph header fields must be integers") from exc
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"malformed edge line: {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParseError(f"malformed edge line: {ln!r}") from exc
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges, found {len(edges)}")
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def emit_graph(g: Graph) -> str:
    lines = [f"p {g.n} {len(g.edges)}"]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"
