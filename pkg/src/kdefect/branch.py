"""Branch (g, S, C) state with incrementally maintained non-degree counters."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .graph import Graph, iter_bits


class ContractError(RuntimeError):
    """An operation's precondition does not hold."""


class Branch:
    """A search node: partial set ``S`` and candidate set ``C`` inside ``graph``.

    ``dbar_S[v]`` and ``dbar_C[v]`` are only meaningful for ``v`` in ``C``.
    ``S`` and ``C`` keep insertion order, which the second colouring uses as
    its default vertex order.
    """

    __slots__ = ("graph", "k", "S", "C", "s_mask", "c_mask", "nonedges_S", "dbar_S", "dbar_C")

    def __init__(self, graph, k, S, C, s_mask, c_mask, nonedges_S, dbar_S, dbar_C):
        self.graph: Graph = graph
        self.k: int = k
        self.S: list[int] = S
        self.C: list[int] = C
        self.s_mask: int = s_mask
        self.c_mask: int = c_mask
        self.nonedges_S: int = nonedges_S
        self.dbar_S: list[int] = dbar_S
        self.dbar_C: list[int] = dbar_C

    def copy(self) -> Branch:
        return Branch(
            self.graph, self.k, self.S[:], self.C[:], self.s_mask, self.c_mask,
            self.nonedges_S, self.dbar_S[:], self.dbar_C[:],
        )

    @property
    def budget(self) -> int:
        """Non-edges still available to vertices added from ``C``."""
        return self.k - self.nonedges_S

    def __repr__(self) -> str:
        return f"Branch(S={self.S}, C={self.C}, nonedges_S={self.nonedges_S}, k={self.k})"

    def check_invariants(self) -> None:
        """Recount every counter from scratch; raises AssertionError on drift."""
        nonadj = self.graph.nonadjacency_bits
        assert self.s_mask & self.c_mask == 0
        assert self.s_mask == _mask(self.S) and self.c_mask == _mask(self.C)
        assert self.nonedges_S == self.graph.count_nonedges(self.S)
        assert self.nonedges_S <= self.k
        for v in self.C:
            assert self.dbar_S[v] == (nonadj[v] & self.s_mask).bit_count(), v
            assert self.dbar_C[v] == (nonadj[v] & self.c_mask).bit_count(), v


@dataclass
class Incumbent:
    """Best solution found so far, in parent-graph ids."""

    best_vertices: list[int] = field(default_factory=list)

    @property
    def best_size(self) -> int:
        return len(self.best_vertices)

    def offer(self, vertices: Iterable[int]) -> bool:
        vertices = list(vertices)
        if len(vertices) > len(self.best_vertices):
            self.best_vertices = sorted(vertices)
            return True
        return False


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def make_root(g: Graph, S0: Iterable[int], k: int, C0: Iterable[int] | None = None) -> Branch:
    """Root branch with counters computed by direct counting.

    ``C0`` defaults to every vertex of ``g`` outside ``S0``.
    """
    S = list(dict.fromkeys(S0))
    s_mask = _mask(S)
    if C0 is None:
        C = [v for v in range(g.n) if not s_mask >> v & 1]
    else:
        C = [v for v in dict.fromkeys(C0) if not s_mask >> v & 1]
    c_mask = _mask(C)
    nonedges_S = g.count_nonedges(S)
    if nonedges_S > k:
        raise ContractError(f"S0 has {nonedges_S} non-edges > k={k}")
    nonadj = g.nonadjacency_bits
    dbar_S = [0] * g.n
    dbar_C = [0] * g.n
    for v in C:
        dbar_S[v] = (nonadj[v] & s_mask).bit_count()
        dbar_C[v] = (nonadj[v] & c_mask).bit_count()
    return Branch(g, k, S, C, s_mask, c_mask, nonedges_S, dbar_S, dbar_C)


def can_include(b: Branch, v: int) -> bool:
    return b.nonedges_S + b.dbar_S[v] <= b.k


def include_pivot(b: Branch, v: int) -> Branch:
    """Child branch with ``v`` moved from C to S."""
    if not b.c_mask >> v & 1:
        raise ContractError(f"{v} is not a candidate")
    if not can_include(b, v):
        raise ContractError(f"including {v} exceeds k={b.k}")
    child = b.copy()
    child.S.append(v)
    child.C.remove(v)
    child.s_mask |= 1 << v
    child.c_mask ^= 1 << v
    child.nonedges_S += b.dbar_S[v]
    dbar_S, dbar_C = child.dbar_S, child.dbar_C
    for u in iter_bits(b.graph.nonadjacency_bits[v] & child.c_mask):
        dbar_S[u] += 1
        dbar_C[u] -= 1
    return child


def _drop(b: Branch, v: int) -> None:
    # in-place removal of v from C; callers own ``b``
    b.C.remove(v)
    b.c_mask ^= 1 << v
    dbar_C = b.dbar_C
    for u in iter_bits(b.graph.nonadjacency_bits[v] & b.c_mask):
        dbar_C[u] -= 1


def exclude_pivot(b: Branch, v: int) -> Branch:
    """Child branch with ``v`` discarded from C."""
    if not b.c_mask >> v & 1:
        raise ContractError(f"{v} is not a candidate")
    child = b.copy()
    _drop(child, v)
    return child


def reduce(b: Branch, incumbent_size: int = 0, *, degree_rule: bool = False) -> tuple[Branch, int]:
    """Remove candidates that can no longer join S; returns (branch, removed count).

    The feasibility rule drops ``v`` when ``|E(S)| + dbar_S(v) > k``.  Since
    moving vertices out of C never raises ``dbar_S``, one pass reaches the
    fixpoint.  The optional degree rule additionally drops ``v`` when even a
    k-defective clique using every remaining neighbour of ``v`` cannot beat
    ``incumbent_size``.
    """
    limit = b.k - b.nonedges_S
    dbar_S = b.dbar_S
    doomed = [v for v in b.C if dbar_S[v] > limit]
    if degree_rule:
        while True:
            total = len(b.S) + len(b.C) - len(doomed)
            gone = set(doomed)
            extra = [
                v for v in b.C
                if v not in gone
                and total - dbar_S[v] - _dbar_C_after(b, v, gone) + b.k <= incumbent_size
            ]
            if not extra:
                break
            doomed.extend(extra)
    if not doomed:
        return b, 0
    out = b.copy()
    for v in doomed:
        _drop(out, v)
    return out, len(doomed)


def _dbar_C_after(b: Branch, v: int, gone: set[int]) -> int:
    if not gone:
        return b.dbar_C[v]
    return (b.graph.nonadjacency_bits[v] & b.c_mask & ~_mask(gone)).bit_count()


def total_nonedges(b: Branch) -> int:
    """|E-bar(S u C)| from the counters."""
    return b.nonedges_S + sum(b.dbar_S[v] for v in b.C) + sum(b.dbar_C[v] for v in b.C) // 2


def is_trivially_solved(b: Branch) -> bool:
    return total_nonedges(b) <= b.k
