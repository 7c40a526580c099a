"""Exact polynomial solver for branches whose candidate complement has max degree 2."""

from __future__ import annotations

from .branch import Branch, ContractError, is_trivially_solved
from .graph import iter_bits


def is_missing_two_deg(b: Branch) -> bool:
    """True if the branch is already feasible or every candidate misses <= 2 candidates."""
    dbar_C = b.dbar_C
    if all(dbar_C[v] <= 2 for v in b.C):
        return True
    return is_trivially_solved(b)


class BucketQueue:
    """Linear heap over small integer keys.

    Each bucket is a dict used as an insertion-ordered set, which gives O(1)
    removal like the usual doubly-linked list.  ``min_ptr`` only moves
    forward because keys never decrease during one solver run; ``trace``
    records its successive values when enabled.
    """

    def __init__(self, max_key: int, *, trace: bool = False):
        self.buckets: list[dict[int, None]] = [{} for _ in range(max_key + 1)]
        self.key: dict[int, int] = {}
        self.min_ptr = 0
        self.trace: list[int] | None = [] if trace else None

    def __len__(self) -> int:
        return len(self.key)

    def push(self, v: int, key: int) -> None:
        self.key[v] = key
        self.buckets[key][v] = None
        if key < self.min_ptr:
            self.min_ptr = key

    def remove(self, v: int) -> None:
        del self.buckets[self.key.pop(v)][v]

    def update(self, v: int, key: int) -> None:
        self.remove(v)
        self.push(v, key)

    def min_bucket(self) -> dict[int, None]:
        if not self.key:
            raise ContractError("bucket queue is empty")
        while not self.buckets[self.min_ptr]:
            self.min_ptr += 1
        if self.trace is not None:
            self.trace.append(self.min_ptr)
        return self.buckets[self.min_ptr]


def bucket_select_min(q: BucketQueue) -> int:
    """Smallest-id vertex of the lowest non-empty bucket."""
    return min(q.min_bucket())


def ir_solve(b: Branch, *, trace: list | None = None) -> list[int]:
    """Largest k-defective clique ``h`` with S <= h <= S u C, as local ids.

    Greedy: among candidates with the fewest non-neighbours in the growing
    solution, take one with fewest remaining candidate non-neighbours; when
    all such have two, prefer the one with fewest non-neighbours inside that
    tie group.  Ties go to the smallest id.  ``b`` is not modified.

    Passing a list as ``trace`` collects the bucket queue's min-pointer history.
    """
    if not is_missing_two_deg(b):
        raise ContractError("branch is not a MissingTwoDeg instance")
    if is_trivially_solved(b):
        return b.S + b.C

    nonadj = b.graph.nonadjacency_bits
    c_mask = b.c_mask
    # non-neighbours inside C, at most two per vertex
    cnon = {v: list(iter_bits(nonadj[v] & c_mask)) for v in b.C}
    dS = {v: b.dbar_S[v] for v in b.C}
    dC = {v: b.dbar_C[v] for v in b.C}

    q = BucketQueue(3 * (len(b.S) + len(b.C)), trace=trace is not None)
    for v in b.C:
        q.push(v, 3 * dS[v] + dC[v])

    solution = list(b.S)
    nonedges = b.nonedges_S
    k = b.k
    while len(q):
        bucket = q.min_bucket()
        if q.min_ptr % 3 < 2:
            chosen = min(bucket)
        else:
            # every tied vertex has two candidate non-neighbours; count those in the tie group
            chosen = min(bucket, key=lambda v: (sum(1 for u in cnon[v] if u in bucket), v))
        if nonedges + dS[chosen] > k:
            break
        nonedges += dS[chosen]
        solution.append(chosen)
        q.remove(chosen)
        for u in cnon[chosen]:
            if u in q.key:
                dS[u] += 1
                dC[u] -= 1
                q.update(u, 3 * dS[u] + dC[u])
    if trace is not None:
        trace.extend(q.trace)
    return solution
