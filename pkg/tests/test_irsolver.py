import itertools
import time

import pytest
from hypothesis import given, strategies as st

from conftest import complete_graph, empty_graph
from kdefect.branch import ContractError, make_root
from kdefect.fixtures import fixture_appendix_b, generate_missing_two_deg
from kdefect.graph import Graph
from kdefect.irsolver import BucketQueue, bucket_select_min, ir_solve, is_missing_two_deg
from kdefect.oracle import branch_optimum


def test_detection_examples():
    assert is_missing_two_deg(fixture_appendix_b().root())
    assert is_missing_two_deg(make_root(complete_graph(4), [], 0))
    assert not is_missing_two_deg(make_root(empty_graph(5), [], 1))


def test_appendix_b_trace():
    trace = []
    got = ir_solve(fixture_appendix_b().root(), trace=trace)
    assert got == [0, 3, 5, 2]
    assert trace == sorted(trace)


def test_condition_one_returns_everything():
    b = make_root(complete_graph(5), [0], 0)
    assert sorted(ir_solve(b)) == [0, 1, 2, 3, 4]


def test_rejects_non_instances():
    with pytest.raises(ContractError):
        ir_solve(make_root(empty_graph(5), [], 1))


def test_does_not_mutate_branch():
    b = fixture_appendix_b().root()
    snapshot = (b.S[:], b.C[:], b.dbar_S[:], b.dbar_C[:])
    ir_solve(b)
    assert (b.S, b.C, b.dbar_S, b.dbar_C) == snapshot


def test_bucket_queue_examples():
    q = BucketQueue(6)
    q.push(1, 2)
    q.push(2, 0)
    assert bucket_select_min(q) == 2

    root = fixture_appendix_b().root()
    q = BucketQueue(18)
    for v in root.C:
        q.push(v, 3 * root.dbar_S[v] + root.dbar_C[v])
    assert q.key == {1: 2, 2: 3, 3: 2, 4: 5, 5: 2}
    assert set(q.min_bucket()) == {1, 3, 5}

    q = BucketQueue(3)
    for v in (7, 4, 9):
        q.push(v, 1)
    assert bucket_select_min(q) == 4


def test_bucket_queue_empty():
    with pytest.raises(ContractError):
        BucketQueue(3).min_bucket()


def _check_result(b, got):
    assert got[: len(b.S)] == b.S
    assert set(b.S) <= set(got) <= set(b.S) | set(b.C)
    g = b.graph
    assert g.count_nonedges(got) <= b.k
    for v in set(b.C) - set(got):
        assert g.count_nonedges(got + [v]) > b.k


@given(st.integers(0, 10**6), st.integers(1, 14), st.integers(0, 4))
def test_generated_instances_are_optimal(seed, n, k):
    b = generate_missing_two_deg(seed, n, k)
    assert is_missing_two_deg(b)
    trace = []
    got = ir_solve(b, trace=trace)
    _check_result(b, got)
    assert trace == sorted(trace)
    assert len(got) == len(branch_optimum(b))


def test_generator_examples():
    # one 5-cycle as complement, S empty
    cycle = [(i, (i + 1) % 5) for i in range(5)]
    edges = [e for e in itertools.combinations(range(5), 2)
             if e not in {tuple(sorted(c)) for c in cycle}]
    b = make_root(Graph.from_edges(5, edges), [], 1)
    assert is_missing_two_deg(b) and all(b.dbar_C[v] == 2 for v in b.C)
    assert len(ir_solve(b)) == len(branch_optimum(b)) == 3

    b = make_root(complete_graph(6), [], 2)
    assert is_missing_two_deg(b) and len(ir_solve(b)) == 6


def _cycles_branch(n):
    # complement is a union of 5-cycles on C; S empty
    missing = {(min(a, b), max(a, b)) for base in range(0, n - n % 5, 5)
               for a, b in ((base + i, base + (i + 1) % 5) for i in range(5))}
    edges = [e for e in itertools.combinations(range(n), 2) if e not in missing]
    return make_root(Graph.from_edges(n, edges), [], 3)


def test_runtime_grows_at_most_quadratically():
    # initialisation dominates; doubling |C| should cost about 4x, far below 8x
    sizes = (200, 400)
    times = []
    for n in sizes:
        b = _cycles_branch(n)
        start = time.perf_counter()
        for _ in range(3):
            got = ir_solve(b)
        times.append((time.perf_counter() - start) / 3)
        # two free vertices per 5-cycle, then one per unit of budget
        assert len(got) == 2 * (n // 5) + 3
    assert times[1] / times[0] < 8
