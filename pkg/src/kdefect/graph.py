"""Graph representation, loaders, degeneracy ordering and subgraph extraction.

Vertices are dense 0-based integers.  Adjacency is kept twice: as sorted
neighbour tuples and as Python ``int`` bitsets, the latter giving O(1)-ish
adjacency tests and popcounts inside the solver's inner loops.
"""

from __future__ import annotations

import heapq
import logging
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

logger = logging.getLogger(__name__)

MAX_VERTEX_ID = 2**31 - 1


class GraphFormat(str, Enum):
    EDGE_LIST = "edge_list"
    DIMACS = "dimacs_clq"


class GraphParseError(ValueError):
    """Malformed graph file; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class GraphCapacityError(ValueError):
    pass


def iter_bits(mask: int):
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    ``labels`` maps dense ids back to the identifiers found in the input
    file (identity when the graph was built in memory).
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    adjacency_bits: tuple[int, ...]
    labels: tuple = ()
    duplicates_dropped: int = 0
    self_loops_dropped: int = 0
    name: str = field(default="", compare=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        *,
        labels: Sequence | None = None,
        name: str = "",
    ) -> Graph:
        bits = [0] * n
        dup = loops = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                loops += 1
                continue
            if bits[u] >> v & 1:
                dup += 1
                continue
            bits[u] |= 1 << v
            bits[v] |= 1 << u
        if dup or loops:
            logger.warning("dropped %d duplicate edges and %d self-loops", dup, loops)
        adjacency = tuple(tuple(iter_bits(b)) for b in bits)
        return cls(
            n=n,
            adjacency=adjacency,
            adjacency_bits=tuple(bits),
            labels=tuple(labels) if labels is not None else tuple(range(n)),
            duplicates_dropped=dup,
            self_loops_dropped=loops,
            name=name,
        )

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @cached_property
    def nonadjacency_bits(self) -> tuple[int, ...]:
        full = (1 << self.n) - 1
        return tuple(full ^ b ^ (1 << v) for v, b in enumerate(self.adjacency_bits))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency_bits[u] >> v & 1)

    def edges(self):
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def count_nonedges(self, vertices: Iterable[int]) -> int:
        """Number of missing edges inside ``vertices``."""
        mask = 0
        for v in vertices:
            mask |= 1 << v
        nonadj = self.nonadjacency_bits
        return sum((nonadj[v] & mask).bit_count() for v in iter_bits(mask)) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class DegeneracyOrder:
    order: tuple[int, ...]
    rank: tuple[int, ...]
    degeneracy: int


@dataclass(frozen=True)
class Subgraph:
    """An induced subgraph with its local -> parent vertex map."""

    graph: Graph
    vertices: tuple[int, ...]

    @cached_property
    def local_of(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.vertices)}

    def to_parent(self, local_ids: Iterable[int]) -> list[int]:
        return [self.vertices[i] for i in local_ids]


def degeneracy_order(g: Graph) -> DegeneracyOrder:
    """Peeling order: repeatedly remove a minimum-degree vertex (smallest id on ties)."""
    deg = [len(a) for a in g.adjacency]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order: list[int] = []
    degeneracy = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        degeneracy = max(degeneracy, d)
        for u in g.adjacency[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    rank = [0] * g.n
    for i, v in enumerate(order):
        rank[v] = i
    return DegeneracyOrder(tuple(order), tuple(rank), degeneracy)


def induced_subgraph(g: Graph, vs: Iterable[int]) -> Subgraph:
    """Subgraph induced by ``vs``; local ids follow the iteration order of ``vs``."""
    vertices = tuple(dict.fromkeys(vs))
    for v in vertices:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    local = {p: i for i, p in enumerate(vertices)}
    parent_mask = 0
    for v in vertices:
        parent_mask |= 1 << v
    edges = []
    for i, p in enumerate(vertices):
        for q in iter_bits(g.adjacency_bits[p] & parent_mask):
            j = local[q]
            if i < j:
                edges.append((i, j))
    labels = [g.labels[p] for p in vertices] if g.labels else None
    sub = Graph.from_edges(len(vertices), edges, labels=labels)
    return Subgraph(sub, vertices)


def two_hop_suffix_subgraph(g: Graph, ordering: DegeneracyOrder, v: int) -> Subgraph:
    """Subgraph on vertices within distance 2 of ``v`` ranked no earlier than ``v``.

    Local ids are assigned by increasing degeneracy rank, so ``v`` is local 0.
    """
    adj = g.adjacency_bits
    reach = adj[v] | (1 << v)
    for u in iter_bits(adj[v]):
        reach |= adj[u]
    r = ordering.rank[v]
    members = sorted(
        (u for u in iter_bits(reach) if ordering.rank[u] >= r),
        key=ordering.rank.__getitem__,
    )
    return induced_subgraph(g, members)


# ---------------------------------------------------------------- loaders


def _parse_id(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphParseError(f"expected an integer vertex id, got {token!r}", lineno) from None
    if value < 0:
        raise GraphParseError(f"negative vertex id {value}", lineno)
    if value > MAX_VERTEX_ID:
        raise GraphCapacityError(f"line {lineno}: vertex id {value} exceeds {MAX_VERTEX_ID}")
    return value


def parse_edge_list(text: str, name: str = "") -> Graph:
    raw: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line[0] in "#%":
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        raw.append((_parse_id(parts[0], lineno), _parse_id(parts[1], lineno)))
    labels = sorted({x for e in raw for x in e})
    local = {lab: i for i, lab in enumerate(labels)}
    return Graph.from_edges(
        len(labels), ((local[u], local[v]) for u, v in raw), labels=labels, name=name
    )


def parse_dimacs(text: str, name: str = "") -> Graph:
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or n is not None:
                raise GraphParseError(f"bad problem line {line!r}", lineno)
            n = _parse_id(parts[2], lineno)
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError("edge before 'p' header", lineno)
            if len(parts) != 3:
                raise GraphParseError(f"bad edge line {line!r}", lineno)
            u, v = _parse_id(parts[1], lineno), _parse_id(parts[2], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphCapacityError(f"line {lineno}: vertex id outside 1..{n}")
            edges.append((u - 1, v - 1))
        else:
            raise GraphParseError(f"unknown line type {parts[0]!r}", lineno)
    if n is None:
        raise GraphParseError("missing 'p edge n m' header")
    return Graph.from_edges(n, edges, labels=range(1, n + 1), name=name)


def load_graph(path: str | os.PathLike, format: GraphFormat | str = GraphFormat.EDGE_LIST) -> Graph:
    fmt = GraphFormat("dimacs_clq" if format == "dimacs" else format)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.basename(os.fspath(path))
    if fmt is GraphFormat.DIMACS:
        return parse_dimacs(text, name)
    return parse_edge_list(text, name)


def write_edge_list(g: Graph, path: str | os.PathLike) -> None:
    """Write edges using the original labels, so reloading preserves ids."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{g.labels[u]} {g.labels[v]}\n")
