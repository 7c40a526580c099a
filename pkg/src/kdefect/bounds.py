"""Colouring-based upper bounds for a branch.

``ub_single`` colours the candidates once and charges one non-edge for every
pair sharing a colour class.  ``ub_double`` colours them a second time with
unique colour pairs and finds, by a budget-constrained min-cost max-flow,
the largest candidate subset whose charged non-edges fit the budget.
"""

from __future__ import annotations

import heapq
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

from .branch import Branch, ContractError
from .graph import iter_bits


class SecondOrder(str, Enum):
    """Vertex order used by the second colouring."""

    MEMORY = "memory"
    RANDOM = "random"
    S_ORD = "s_ord"
    S_REV = "s_rev"
    PEEL_ORD = "peel_ord"
    PEEL_REV = "peel_rev"


@dataclass
class ColorAssignment:
    """Two colourings indexed by local vertex id (-1 outside C)."""

    col1: list[int]
    col2: list[int]

    @property
    def classes1(self) -> dict[int, list[int]]:
        return _classes(self.col1)

    @property
    def classes2(self) -> dict[int, list[int]]:
        return _classes(self.col2)

    def indicator(self, u: int, v: int) -> int:
        """1 when distinct ``u``, ``v`` share a colour in either colouring."""
        return int(u != v and (self.col1[u] == self.col1[v] or self.col2[u] == self.col2[v]))

    def charged_cost(self, D: Sequence[int], dbar_S: Sequence[int]) -> int:
        """Half the indicator sum over ``D`` plus the non-edges from ``D`` to S."""
        D = list(D)
        pairs = sum(self.indicator(D[i], D[j]) for i in range(len(D)) for j in range(i + 1, len(D)))
        return pairs + sum(dbar_S[v] for v in D)


def _classes(col: Sequence[int]) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for v, c in enumerate(col):
        if c >= 0:
            out.setdefault(c, []).append(v)
    return out


def color_first(b: Branch, rank: Sequence[int] | None = None) -> list[int]:
    """Greedy proper colouring of G[C] visiting candidates by degeneracy rank."""
    adj = b.graph.adjacency_bits
    order = sorted(b.C, key=rank.__getitem__) if rank is not None else sorted(b.C)
    class_bits: list[int] = []
    col = [-1] * b.graph.n
    for v in order:
        a = adj[v]
        for c, bits in enumerate(class_bits):
            if not bits & a:
                class_bits[c] = bits | (1 << v)
                break
        else:
            c = len(class_bits)
            class_bits.append(1 << v)
        col[v] = c
    return col


def second_order(
    b: Branch,
    order: SecondOrder | str = SecondOrder.MEMORY,
    rank: Sequence[int] | None = None,
    rng: random.Random | None = None,
) -> list[int]:
    order = SecondOrder(order)
    C = list(b.C)
    if order is SecondOrder.MEMORY:
        return C
    if order is SecondOrder.RANDOM:
        (rng or random.Random(0)).shuffle(C)
        return C
    if order in (SecondOrder.S_ORD, SecondOrder.S_REV):
        C.sort(key=lambda v: (b.dbar_S[v], v), reverse=order is SecondOrder.S_REV)
        return C
    key = rank.__getitem__ if rank is not None else None
    C.sort(key=key, reverse=order is SecondOrder.PEEL_REV)
    return C


def color_second(b: Branch, col1: Sequence[int], order: Sequence[int]) -> list[int]:
    """Proper colouring of G[C] whose colour pairs with ``col1`` are all distinct.

    Each vertex gets the smallest colour used neither by a neighbour nor by
    an earlier vertex of the same first colour.
    """
    adj = b.graph.adjacency_bits
    used_with = [0] * b.graph.n  # first colour -> bitmask of second colours paired with it
    class_bits: list[int] = []
    col = [-1] * b.graph.n
    for v in order:
        a = adj[v]
        taken = used_with[col1[v]]
        c = 0
        ncol = len(class_bits)
        while c < ncol and (class_bits[c] & a or taken >> c & 1):
            c += 1
        if c == ncol:
            class_bits.append(0)
        class_bits[c] |= 1 << v
        used_with[col1[v]] = taken | (1 << c)
        col[v] = c
    return col


def double_coloring(
    b: Branch,
    rank: Sequence[int] | None = None,
    order: SecondOrder | str = SecondOrder.MEMORY,
    rng: random.Random | None = None,
) -> ColorAssignment:
    col1 = color_first(b, rank)
    col2 = color_second(b, col1, second_order(b, order, rank, rng))
    return ColorAssignment(col1, col2)


def ub_single(b: Branch, col1: Sequence[int] | None = None, rank: Sequence[int] | None = None) -> int:
    """|S| plus the most candidates whose same-class pairs and S non-edges fit the budget.

    Within a class the j-th cheapest pick (by dbar_S) costs dbar_S + j - 1,
    which is non-decreasing, so taking the globally cheapest marginals is exact.
    """
    if col1 is None:
        col1 = color_first(b, rank)
    budget = b.k - b.nonedges_S
    dbar_S = b.dbar_S
    marginals: list[int] = []
    classes: dict[int, list[int]] = {}
    for v in b.C:
        classes.setdefault(col1[v], []).append(dbar_S[v])
    for costs in classes.values():
        costs.sort()
        marginals.extend(c + j for j, c in enumerate(costs) if c + j <= budget)
    marginals.sort()
    taken = 0
    for c in marginals:
        if c > budget:
            break
        budget -= c
        taken += 1
    return len(b.S) + taken


# ---------------------------------------------------------------- flow


@dataclass
class FlowNetwork:
    """Residual network in arc-array form; arc ``i ^ 1`` is the reverse of arc ``i``."""

    num_nodes: int
    source: int = 0
    sink: int = 1
    head: list[int] = field(default_factory=list)
    cap: list[int] = field(default_factory=list)
    cost: list[int] = field(default_factory=list)
    out: list[list[int]] = field(default_factory=list)
    internal_arc_to_vertex: dict[int, int] = field(default_factory=dict)
    color1_node: dict[int, int] = field(default_factory=dict)
    color2_node: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.out:
            self.out = [[] for _ in range(self.num_nodes)]

    def add_arc(self, u: int, v: int, cap: int, cost: int) -> int:
        i = len(self.head)
        self.head.extend((v, u))
        self.cap.extend((cap, 0))
        self.cost.extend((cost, -cost))
        self.out[u].append(i)
        self.out[v].append(i + 1)
        return i

    def tail(self, arc: int) -> int:
        return self.head[arc ^ 1]

    @property
    def forward_arcs(self) -> range:
        return range(0, len(self.head), 2)

    def flow_on(self, arc: int) -> int:
        # unit forward capacities: flow equals the reverse arc's residual
        return self.cap[arc ^ 1]


def build_flow_network(b: Branch, ca: ColorAssignment) -> FlowNetwork:
    k = b.k
    colors1 = sorted({ca.col1[v] for v in b.C})
    colors2 = sorted({ca.col2[v] for v in b.C})
    net = FlowNetwork(num_nodes=2 + len(colors1) + len(colors2))
    net.color1_node = {c: 2 + i for i, c in enumerate(colors1)}
    net.color2_node = {c: 2 + len(colors1) + i for i, c in enumerate(colors2)}
    add = net.add_arc
    s, t = net.source, net.sink
    for node in net.color1_node.values():
        for cost in range(k + 1):
            add(s, node, 1, cost)
    node1, node2 = net.color1_node, net.color2_node
    for v in b.C:
        arc = add(node1[ca.col1[v]], node2[ca.col2[v]], 1, b.dbar_S[v])
        net.internal_arc_to_vertex[arc] = v
    for node in node2.values():
        for cost in range(k + 1):
            add(node, t, 1, cost)
    return net


@dataclass
class FlowResult:
    flow: int
    cost: int
    selected: list[int]  # internal arcs carrying flow
    path_costs: list[int]


def constrained_max_flow(net: FlowNetwork, budget: int, limit: int | None = None) -> FlowResult:
    """Maximum flow whose total cost stays within ``budget``.

    Successive shortest paths with node potentials; every path carries one
    unit and path costs never decrease, so stopping at the first path that
    would overshoot the budget yields the maximum.  ``limit`` caps the flow
    value for callers that only need to know whether it reaches that much.
    """
    if budget < 0:
        raise ContractError("negative budget")
    if net.cost and min(net.cost[0::2]) < 0:
        raise ContractError("negative forward arc cost")
    n = net.num_nodes
    s, t = net.source, net.sink
    head, cap, cost, out = net.head, net.cap, net.cost, net.out
    potential = [0] * n
    inf = float("inf")
    flow = total = 0
    path_costs: list[int] = []
    while limit is None or flow < limit:
        dist = [inf] * n
        via = [-1] * n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            pu = potential[u]
            for a in out[u]:
                if cap[a]:
                    v = head[a]
                    nd = d + cost[a] + pu - potential[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        via[v] = a
                        heapq.heappush(heap, (nd, v))
        if dist[t] == inf:
            break
        path_cost = dist[t] + potential[t] - potential[s]
        if total + path_cost > budget:
            break
        for v in range(n):
            if dist[v] < inf:
                potential[v] += dist[v]
        v = t
        while v != s:
            a = via[v]
            cap[a] -= 1
            cap[a ^ 1] += 1
            v = head[a ^ 1]
        flow += 1
        total += path_cost
        path_costs.append(path_cost)
    selected = [a for a in net.internal_arc_to_vertex if net.flow_on(a)]
    return FlowResult(flow, total, selected, path_costs)


def colour_pair_flow(
    col1: Sequence[int], col2: Sequence[int], weights: Sequence[int], k: int, budget: int, limit: int | None = None
) -> FlowResult:
    """Same result as ``constrained_max_flow`` on the explicit colour network.

    The k + 1 parallel source and sink arcs of a colour node are replaced by
    a counter: their cheapest unused copy costs exactly the number already
    used.  Arcs back into the source or out of the sink never lie on a
    shortest source-sink path and are left out.  Colours must be 0..m-1.
    ``selected`` holds indices into the three input sequences.
    """
    if budget < 0:
        raise ContractError("negative budget")
    n1 = max(col1, default=-1) + 1
    n2 = max(col2, default=-1) + 1
    # nodes: 0 source, 1..n1 first colours, n1+1..n1+n2 second colours, last sink
    t = n1 + n2 + 1
    nn = t + 1
    fwd: list[list[int]] = [[] for _ in range(nn)]  # arcs leaving a first-colour node
    bwd: list[list[int]] = [[] for _ in range(nn)]  # arcs entering a second-colour node
    tail = [1 + c for c in col1]
    head = [n1 + 1 + c for c in col2]
    for i in range(len(weights)):
        fwd[tail[i]].append(i)
        bwd[head[i]].append(i)
    used = [False] * len(weights)
    units = [0] * nn  # units through the source arc (first colours) or sink arc (second colours)
    cap_units = k + 1
    potential = [0] * nn
    inf = float("inf")
    flow = total = 0
    path_costs: list[int] = []
    # warm start: a flow of cost zero is min-cost for its value, and zero
    # potentials keep every residual reduced cost non-negative
    for i, w in enumerate(weights):
        if limit is not None and flow >= limit:
            break
        if w == 0 and not units[tail[i]] and not units[head[i]]:
            used[i] = True
            units[tail[i]] = units[head[i]] = 1
            flow += 1
            path_costs.append(0)
    heappush, heappop = heapq.heappush, heapq.heappop
    while limit is None or flow < limit:
        dist = [inf] * nn
        via = [0] * nn  # 1 + arc index, negated for a reverse arc, 0 for the source arc
        dist[0] = 0
        heap = []
        for c1 in range(1, n1 + 1):
            if units[c1] < cap_units:
                d = units[c1] - potential[c1]
                dist[c1] = d
                heap.append((d, c1))
        heapq.heapify(heap)
        while heap:
            d, u = heappop(heap)
            if d > dist[u]:
                continue
            pu = potential[u]
            if u <= n1:
                for i in fwd[u]:
                    if not used[i]:
                        v = head[i]
                        nd = d + weights[i] + pu - potential[v]
                        if nd < dist[v]:
                            dist[v] = nd
                            via[v] = i + 1
                            heappush(heap, (nd, v))
            elif u < t:
                for i in bwd[u]:
                    if used[i]:
                        v = tail[i]
                        nd = d - weights[i] + pu - potential[v]
                        if nd < dist[v]:
                            dist[v] = nd
                            via[v] = -(i + 1)
                            heappush(heap, (nd, v))
                if units[u] < cap_units:
                    nd = d + units[u] + pu - potential[t]
                    if nd < dist[t]:
                        dist[t] = nd
                        via[t] = u
                        heappush(heap, (nd, t))
        if dist[t] == inf:
            break
        path_cost = dist[t] + potential[t]
        if total + path_cost > budget:
            break
        for v in range(nn):
            if dist[v] < inf:
                potential[v] += dist[v]
        v = via[t]
        units[v] += 1
        while True:
            a = via[v]
            if v > n1:
                used[a - 1] = True
                v = tail[a - 1]
            elif a:
                used[-a - 1] = False
                v = head[-a - 1]
            else:
                units[v] += 1
                break
        flow += 1
        total += path_cost
        path_costs.append(path_cost)
    selected = [i for i, u in enumerate(used) if u]
    return FlowResult(flow, total, selected, path_costs)


def ub_double(
    b: Branch,
    rank: Sequence[int] | None = None,
    order: SecondOrder | str = SecondOrder.MEMORY,
    *,
    rng: random.Random | None = None,
    limit: int | None = None,
    col1: Sequence[int] | None = None,
) -> int:
    """|S| plus the constrained max-flow value of the double-colouring network.

    With ``limit`` the flow stops once it reaches that many units, so the
    result is exact only when it is below ``|S| + limit``.  A first
    colouring already computed for ``ub_single`` can be passed as ``col1``.
    """
    if not b.C:
        return len(b.S)
    if col1 is None:
        col1 = color_first(b, rank)
    col2 = color_second(b, col1, second_order(b, order, rank, rng))
    C = b.C
    dbar_S = b.dbar_S
    result = colour_pair_flow(
        [col1[v] for v in C], [col2[v] for v in C], [dbar_S[v] for v in C], b.k, b.k - b.nonedges_S, limit
    )
    return len(b.S) + result.flow


def selected_vertices(net: FlowNetwork, result: FlowResult) -> list[int]:
    return sorted(net.internal_arc_to_vertex[a] for a in result.selected)


def check_coloring(b: Branch, ca: ColorAssignment) -> None:
    """Assert both colourings are proper on G[C] and colour pairs are unique."""
    adj = b.graph.adjacency_bits
    for v in b.C:
        for u in iter_bits(adj[v] & b.c_mask):
            assert ca.col1[u] != ca.col1[v] and ca.col2[u] != ca.col2[v], (u, v)
    pairs = [(ca.col1[v], ca.col2[v]) for v in b.C]
    assert len(set(pairs)) == len(pairs)
