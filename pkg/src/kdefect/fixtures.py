"""Small hand-checkable instances and random instance generators."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .branch import Branch, make_root
from .graph import Graph


@dataclass(frozen=True)
class Fixture:
    name: str
    edges: tuple[tuple[int, int], ...]
    n: int
    k: int
    expected_size: int
    provenance: str
    expected_set: tuple[int, ...] | None = None
    S: tuple[int, ...] = field(default=())

    @property
    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges, name=self.name)

    def root(self) -> Branch:
        return make_root(self.graph, self.S, self.k)


def fixture_appendix_b() -> Fixture:
    """Six-vertex IRSolver trace instance, S = {v0}, k = 1."""
    return Fixture(
        name="appendix_b",
        edges=((0, 1), (0, 3), (0, 5), (1, 4), (1, 2), (2, 5), (2, 4), (3, 5), (2, 3)),
        n=6,
        k=1,
        expected_size=4,
        provenance="irsolver execution trace, k=1",
        expected_set=(0, 2, 3, 5),
        S=(0,),
    )


def fixture_figure_1() -> Fixture:
    """s0 joined to c1..c4, plus edges c1-c4 and c2-c3; S = {s0}, k = 2.

    Local ids: s0 = 0, c1..c4 = 1..4.
    """
    return Fixture(
        name="figure_1",
        edges=((0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 3)),
        n=5,
        k=2,
        expected_size=4,
        provenance="double-colouring example, k=2",
        S=(0,),
    )


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) from a seeded numpy generator."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()), name=f"gnp_{n}_{p}_{seed}")


def generate_missing_two_deg(seed: int, n: int, k: int) -> Branch:
    """Random branch whose candidate complement is a union of paths, cycles and isolated vertices.

    Between S and C non-edges are random; S itself gets at most k non-edges.
    """
    if n > 24:
        raise ValueError("n must be <= 24")
    rng = random.Random(seed)
    n_s = rng.randint(0, min(4, n - 1)) if n > 1 else 0
    S = list(range(n_s))
    C = list(range(n_s, n))
    missing: set[tuple[int, int]] = set()

    # complement on C: chop a shuffled C into paths and cycles
    pool = C[:]
    rng.shuffle(pool)
    while pool:
        size = rng.randint(1, min(len(pool), 6))
        piece, pool = pool[:size], pool[size:]
        for a, b in zip(piece, piece[1:]):
            missing.add((min(a, b), max(a, b)))
        if size >= 3 and rng.random() < 0.5:
            a, b = piece[0], piece[-1]
            missing.add((min(a, b), max(a, b)))

    # non-edges inside S up to k, and random S-C non-edges
    s_pairs = [(a, b) for a in S for b in S if a < b]
    rng.shuffle(s_pairs)
    missing.update(s_pairs[: rng.randint(0, min(k, len(s_pairs)))])
    p_sc = rng.choice([0.0, 0.1, 0.25, 0.5])
    for a in S:
        for c in C:
            if rng.random() < p_sc:
                missing.add((a, c))

    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in missing]
    g = Graph.from_edges(n, edges, name=f"m2d_{seed}")
    return make_root(g, S, k)
