import itertools
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from kdefect.branch import make_root
from kdefect.graph import Graph

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def complete_graph(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def empty_graph(n):
    return Graph.from_edges(n, [])


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


@st.composite
def graphs(draw, min_n=0, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def branches(draw, max_n=12, max_k=4):
    """A random feasible root branch: S drawn greedily so it stays within k."""
    g = draw(graphs(min_n=1, max_n=max_n))
    k = draw(st.integers(0, max_k))
    want = draw(st.lists(st.integers(0, g.n - 1), unique=True, max_size=min(4, g.n)))
    S = []
    for v in want:
        if g.count_nonedges(S + [v]) <= k:
            S.append(v)
    return make_root(g, S, k)


def random_branch(rng: random.Random, n: int, p: float, k: int):
    g = random_graph(rng, n, p)
    S = []
    for v in rng.sample(range(n), rng.randint(0, min(3, n))):
        if g.count_nonedges(S + [v]) <= k:
            S.append(v)
    return make_root(g, S, k)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
