"""Independent brute-force references and the branching-factor constants."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import mpmath
import numpy as np

from .bounds import ColorAssignment
from .branch import Branch, ContractError
from .graph import Graph, induced_subgraph

MAX_ORACLE_N = 24
MAX_FLOW_ORACLE_C = 18
_CHUNK = 1 << 20


class OracleSizeError(ValueError):
    pass


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _lex_key(mask: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(n) if mask >> v & 1)


def brute_force_max_kdc(g: Graph, k: int, required: Iterable[int] = ()) -> list[int]:
    """Maximum k-defective clique containing ``required``, by full subset enumeration.

    Every one of the 2^(n - |required|) supersets is scored with vectorised
    popcounts.  Among maximum sets the lexicographically smallest sorted
    vertex list is returned.
    """
    n = g.n
    if n > MAX_ORACLE_N:
        raise OracleSizeError(f"oracle refuses n={n} > {MAX_ORACLE_N}")
    req = sorted(set(required))
    req_mask = sum(1 << v for v in req)
    if g.count_nonedges(req) > k:
        raise ContractError("required set is not a k-defective clique")
    free = [v for v in range(n) if not req_mask >> v & 1]
    nonadj = np.array(g.nonadjacency_bits, dtype=np.uint64)
    f = len(free)
    best_size, best_masks = -1, []
    for lo in range(0, 1 << f, _CHUNK):
        idx = np.arange(lo, min(1 << f, lo + _CHUNK), dtype=np.uint64)
        masks = np.full(idx.shape, req_mask, dtype=np.uint64)
        for bit, v in enumerate(free):
            masks |= ((idx >> np.uint64(bit)) & np.uint64(1)) << np.uint64(v)
        twice = np.zeros(idx.shape, dtype=np.int64)
        for v in range(n):
            inside = ((masks >> np.uint64(v)) & np.uint64(1)).astype(bool)
            twice += np.where(inside, _popcount(masks & nonadj[v]), 0)
        ok = twice <= 2 * k
        sizes = np.where(ok, _popcount(masks), -1)
        top = int(sizes.max())
        if top > best_size:
            best_size, best_masks = top, []
        if top == best_size:
            best_masks.extend(int(m) for m in masks[sizes == top])
    winner = min(best_masks, key=lambda m: _lex_key(m, n))
    return list(_lex_key(winner, n))


def branch_optimum(b: Branch) -> list[int]:
    """Largest k-defective clique containing S inside S u C (local ids of ``b.graph``)."""
    sub = induced_subgraph(b.graph, b.S + b.C)
    local = brute_force_max_kdc(sub.graph, b.k, range(len(b.S)))
    return sorted(sub.vertices[i] for i in local)


def brute_force_flow_oracle(b: Branch, ca: ColorAssignment, budget: int) -> int:
    """Largest D within C whose colour-charged cost fits ``budget``."""
    C = list(b.C)
    c = len(C)
    if c > MAX_FLOW_ORACLE_C:
        raise OracleSizeError(f"flow oracle refuses |C|={c} > {MAX_FLOW_ORACLE_C}")
    if c == 0:
        return 0
    idx = np.arange(1 << c, dtype=np.int64)
    member = ((idx[:, None] >> np.arange(c)) & 1).astype(bool)
    cost = member.astype(np.int64) @ np.array([b.dbar_S[v] for v in C], dtype=np.int64)
    for i in range(c):
        for j in range(i + 1, c):
            if ca.indicator(C[i], C[j]):
                cost += member[:, i] & member[:, j]
    sizes = member.sum(axis=1)
    return int(sizes[cost <= budget].max())


# ---------------------------------------------------------------- roots


@dataclass(frozen=True)
class RootResult:
    """Roots as mpmath reals; the gap between them shrinks like 2^-(k+3)."""

    k: int
    lambda_k: mpmath.mpf
    gamma_k: mpmath.mpf
    residuals: tuple[mpmath.mpf, mpmath.mpf]


def lambda_poly(x, k: int):
    return x ** (k + 4) - 2 * x ** (k + 3) + x**3 - x + 1


def gamma_poly(x, k: int):
    return x ** (k + 3) - 2 * x ** (k + 2) + x**2 - x + 1


def _bisect_decreasing(f, lo, hi):
    # f strictly decreasing on (lo, hi), positive near lo, negative at hi
    while True:
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            return mid
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid


def characteristic_roots(k: int) -> RootResult:
    """Largest real roots of the two branching recurrences for budget ``k``.

    For x > 1 the polynomial roots are the unique solutions of
    ``sum_{i=1..k} x^-i + x^-(k+tail) = 1`` (tail 3 and 2 respectively),
    whose left-hand side decreases strictly.  Bisection runs at 2k + 64 bits
    so the two roots stay distinguishable for every k.
    """
    if not 1 <= k <= 64:
        raise ValueError("k must be in [1, 64]")
    ctx = mpmath.mp.clone()
    ctx.prec = 2 * k + 64

    def reform(tail):
        return lambda x: ctx.fsum(x ** -i for i in range(1, k + 1)) + x ** -(k + tail) - 1

    one, two = ctx.mpf(1), ctx.mpf(2)
    lam = _bisect_decreasing(reform(3), one, two)
    gam = _bisect_decreasing(reform(2), one, two)
    return RootResult(k, lam, gam, (lambda_poly(lam, k), gamma_poly(gam, k)))
