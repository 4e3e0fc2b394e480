"""Weighted directed graphs, shift operators, generators and edge-list files.

Graphs are simple (no self-loops, no parallel edges) with a fixed node
ordering 0..n-1. An undirected edge is stored once and contributes to both
orientations of the adjacency matrix. All values are immutable after
construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

__all__ = [
    "Edge",
    "Digraph",
    "ShiftKind",
    "ADJACENCY",
    "LAPLACIAN",
    "OUT_DEGREE",
    "IN_DEGREE",
    "PAPER_SIGN",
    "CONVENTIONAL_SIGN",
    "adjacency_matrix",
    "shift_operator",
    "undirected_cycle",
    "directed_cycle",
    "orient_random_edges",
    "load_edge_list",
    "save_edge_list",
]

ADJACENCY = "adjacency"
LAPLACIAN = "laplacian"
OUT_DEGREE = "out"
IN_DEGREE = "in"
PAPER_SIGN = "paper"
CONVENTIONAL_SIGN = "conventional"


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: float = 1.0
    directed: bool = True


@dataclass(frozen=True)
class Digraph:
    """A weighted graph with ``n`` ordered nodes and a tuple of edges."""

    n: int
    edges: tuple[Edge, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"node count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "edges", tuple(self.edges))
        seen: set[tuple[int, int]] = set()
        for e in self.edges:
            if not (0 <= e.src < self.n and 0 <= e.dst < self.n):
                raise ValidationError(f"edge {e.src}->{e.dst} out of range for n={self.n}")
            if e.src == e.dst:
                raise ValidationError(f"self-loop at node {e.src} is not allowed")
            if not math.isfinite(e.weight):
                raise ValidationError(f"edge {e.src}->{e.dst} has non-finite weight")
            pairs = [(e.src, e.dst)] if e.directed else [(e.src, e.dst), (e.dst, e.src)]
            for pair in pairs:
                if pair in seen:
                    raise ValidationError(f"duplicate edge {pair[0]}->{pair[1]}")
                seen.add(pair)

    def undirected_edge_indices(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if not e.directed]


@dataclass(frozen=True)
class ShiftKind:
    """Selects the shift operator: adjacency, or a Laplacian convention.

    For the Laplacian, ``degree`` picks the (weighted) out- or in-degree
    diagonal D and ``sign`` picks A - D (``paper``) or D - A
    (``conventional``).
    """

    kind: str = ADJACENCY
    degree: str = OUT_DEGREE
    sign: str = PAPER_SIGN

    def __post_init__(self):
        if self.kind not in (ADJACENCY, LAPLACIAN):
            raise ValidationError(f"unknown shift kind {self.kind!r}")
        if self.degree not in (OUT_DEGREE, IN_DEGREE):
            raise ValidationError(f"unknown degree convention {self.degree!r}")
        if self.sign not in (PAPER_SIGN, CONVENTIONAL_SIGN):
            raise ValidationError(f"unknown sign convention {self.sign!r}")

    @classmethod
    def adjacency(cls) -> "ShiftKind":
        return cls(kind=ADJACENCY)

    @classmethod
    def laplacian(cls, degree: str = OUT_DEGREE, sign: str = PAPER_SIGN) -> "ShiftKind":
        return cls(kind=LAPLACIAN, degree=degree, sign=sign)


def adjacency_matrix(g: Digraph) -> np.ndarray:
    """Dense adjacency matrix; entry (i, j) is the weight of edge i->j."""
    a = np.zeros((g.n, g.n))
    for e in g.edges:
        a[e.src, e.dst] = e.weight
        if not e.directed:
            a[e.dst, e.src] = e.weight
    return a


def shift_operator(g: Digraph, kind: ShiftKind = ShiftKind()) -> np.ndarray:
    """Build the selected shift operator of ``g`` as a dense matrix."""
    a = adjacency_matrix(g)
    if kind.kind == ADJACENCY:
        return a
    axis = 1 if kind.degree == OUT_DEGREE else 0
    d = np.diag(a.sum(axis=axis))
    return a - d if kind.sign == PAPER_SIGN else d - a


def undirected_cycle(n: int) -> Digraph:
    """Cycle 0-1-...-(n-1)-0 with undirected unit edges; requires n >= 3."""
    if n < 3:
        raise ValidationError(f"a cycle needs at least 3 nodes, got {n}")
    edges = tuple(Edge(i, (i + 1) % n, 1.0, directed=False) for i in range(n))
    return Digraph(n=n, edges=edges)


def directed_cycle(n: int) -> Digraph:
    """Cycle with unit edges i -> i+1 (mod n); requires n >= 3."""
    if n < 3:
        raise ValidationError(f"a cycle needs at least 3 nodes, got {n}")
    edges = tuple(Edge(i, (i + 1) % n, 1.0, directed=True) for i in range(n))
    return Digraph(n=n, edges=edges)


def orient_random_edges(g: Digraph, count: int, seed: int) -> Digraph:
    """Turn ``count`` randomly chosen undirected edges into directed ones.

    Edges are drawn uniformly without replacement (PCG64 stream seeded with
    ``seed``, so the result is reproducible across platforms) and oriented
    from the lower to the higher node index. Weights are unchanged.
    """
    if count < 0:
        raise ValidationError(f"count must be nonnegative, got {count}")
    candidates = g.undirected_edge_indices()
    if count > len(candidates):
        raise ValidationError(
            f"cannot orient {count} edges, graph has only {len(candidates)} undirected"
        )
    rng = np.random.default_rng(seed)
    chosen = set(rng.choice(len(candidates), size=count, replace=False).tolist()) if count else set()
    picked = {candidates[i] for i in chosen}
    edges = []
    for i, e in enumerate(g.edges):
        if i in picked:
            lo, hi = min(e.src, e.dst), max(e.src, e.dst)
            edges.append(Edge(lo, hi, e.weight, directed=True))
        else:
            edges.append(e)
    return Digraph(n=g.n, edges=tuple(edges))


_HEADER = "src,dst,weight,dir"


def save_edge_list(g: Digraph, path) -> None:
    """Write the edge-list CSV (with a leading ``# n=`` line).

    Weights are printed with 17 significant digits so that a load/save
    round trip is bit-identical.
    """
    lines = [f"# n={g.n}", _HEADER]
    for e in g.edges:
        d = "d" if e.directed else "u"
        lines.append(f"{e.src},{e.dst},{e.weight:.17g},{d}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_edge_list(path) -> Digraph:
    """Read an edge-list CSV produced by :func:`save_edge_list`.

    A missing ``# n=`` line is tolerated; the node count is then inferred
    from the largest index. Malformed rows raise :class:`ParseError` with
    the offending line number; semantic problems (self-loops, duplicates,
    out-of-range indices) raise :class:`ValidationError`.
    """
    n: int | None = None
    edges: list[Edge] = []
    header_seen = False
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("n="):
                    try:
                        n = int(body[2:])
                    except ValueError as exc:
                        raise ParseError(f"line {lineno}: bad node count {body!r}") from exc
                continue
            if not header_seen:
                if line != _HEADER:
                    raise ParseError(f"line {lineno}: expected header {_HEADER!r}, got {line!r}")
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 4 fields, got {len(parts)}")
            try:
                src, dst = int(parts[0]), int(parts[1])
                weight = float(parts[2])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            if parts[3] not in ("d", "u"):
                raise ParseError(f"line {lineno}: dir must be 'd' or 'u', got {parts[3]!r}")
            edges.append(Edge(src, dst, weight, directed=parts[3] == "d"))
    if not header_seen:
        raise ParseError("file has no header row")
    if n is None:
        if not edges:
            raise ParseError("cannot infer node count from an empty edge list")
        n = 1 + max(max(e.src, e.dst) for e in edges)
    return Digraph(n=n, edges=tuple(edges))
