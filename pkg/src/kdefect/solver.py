"""Two-stage branch-and-bound driver with early termination into the IR solver."""

from __future__ import annotations

import random
import sys
import time
from dataclasses import asdict, dataclass, field
from enum import Enum

from . import branch as br
from .bounds import SecondOrder, color_first, ub_double, ub_single
from .branch import Branch, Incumbent
from .graph import DegeneracyOrder, Graph, degeneracy_order, two_hop_suffix_subgraph
from .irsolver import ir_solve, is_missing_two_deg


class BoundKind(str, Enum):
    DOUBLE = "double"
    SINGLE = "single"


class Branching(str, Enum):
    BS_THREE = "bs_three"
    BASELINE = "baseline"


class Stage(str, Enum):
    STAGE1_SUFFICIENT = "stage1_sufficient"
    STAGE2_NEEDED = "stage2_needed"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Solver options.

    The four ablation variants are available through :meth:`variant`.
    ``degree_reduction`` and ``heuristic_seed`` are off by default;
    ``debug`` enables invariant checks and a node trace.
    """

    k: int = 1
    bound: BoundKind = BoundKind.DOUBLE
    branching: Branching = Branching.BS_THREE
    early_termination: bool = True
    second_coloring_order: SecondOrder = SecondOrder.MEMORY
    time_limit: float | None = None
    seed: int = 0
    degree_reduction: bool = False
    heuristic_seed: bool = False
    force_stage2: bool = False
    debug: bool = False

    def __post_init__(self):
        object.__setattr__(self, "bound", BoundKind(self.bound))
        object.__setattr__(self, "branching", Branching(self.branching))
        object.__setattr__(self, "second_coloring_order", SecondOrder(self.second_coloring_order))
        if self.k < 0:
            raise ConfigError("k must be non-negative")
        if not self.early_termination and self.branching is Branching.BS_THREE:
            raise ConfigError("bs_three branching requires early termination")

    VARIANTS = {
        "bbres": dict(bound="double", branching="bs_three", early_termination=True),
        "no-flowub": dict(bound="single", branching="bs_three", early_termination=True),
        "no-branch": dict(bound="double", branching="baseline", early_termination=False),
        "color": dict(bound="single", branching="baseline", early_termination=False),
    }

    @classmethod
    def variant(cls, name: str, **overrides) -> SolverConfig:
        try:
            base = dict(cls.VARIANTS[name])
        except KeyError:
            raise ConfigError(f"unknown variant {name!r}; choose from {sorted(cls.VARIANTS)}") from None
        base.update(overrides)
        return cls(**base)

    def fingerprint(self) -> str:
        return (
            f"{self.bound.value}/{self.branching.value}/"
            f"{'et' if self.early_termination else 'noet'}/"
            f"{self.second_coloring_order.value}/seed={self.seed}"
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        for key, val in d.items():
            if isinstance(val, Enum):
                d[key] = val.value
        return d


@dataclass
class SolveReport:
    best: Incumbent
    k: int
    config: SolverConfig
    branches_explored: int = 0
    ir_calls: int = 0
    bound_prunes: int = 0
    reductions_applied: int = 0
    stage: Stage = Stage.STAGE1_SUFFICIENT
    wall_time: float = 0.0
    timed_out: bool = False
    trace: list[tuple[int, int, str]] | None = field(default=None, repr=False)

    @property
    def best_size(self) -> int:
        return self.best.best_size


class _Timeout(Exception):
    pass


CHECK_EVERY = 1024


def select_pivot_bs_three(b: Branch) -> int | None:
    """Candidate with >= 3 candidate non-neighbours, preferring one that misses S."""
    dbar_S, dbar_C = b.dbar_S, b.dbar_C
    fallback = None
    for v in sorted(b.C):
        if dbar_C[v] >= 3:
            if dbar_S[v] >= 1:
                return v
            if fallback is None:
                fallback = v
    return fallback


def select_pivot_baseline(b: Branch) -> int | None:
    """Candidate missing some vertex of S, else the smallest candidate."""
    if not b.C:
        return None
    dbar_S = b.dbar_S
    hits = [v for v in b.C if dbar_S[v] >= 1]
    return min(hits) if hits else min(b.C)


class _Search:
    """Mutable state of one solve() call."""

    def __init__(self, cfg: SolverConfig, report: SolveReport, deadline: float | None):
        self.cfg = cfg
        self.report = report
        self.inc = report.best
        self.deadline = deadline
        self.rng = random.Random(cfg.seed)
        self.next_id = 0
        self.pick = select_pivot_bs_three if cfg.branching is Branching.BS_THREE else select_pivot_baseline

    def upper_bound(self, b: Branch, rank) -> int:
        best = self.inc.best_size
        if len(b.S) + len(b.C) <= best:
            return len(b.S) + len(b.C)
        col1 = color_first(b, rank)
        single = ub_single(b, col1)
        if self.cfg.bound is BoundKind.SINGLE or single <= best:
            return single
        # only whether the bound exceeds the incumbent matters here
        return ub_double(
            b, rank, self.cfg.second_coloring_order, rng=self.rng, limit=best - len(b.S) + 1, col1=col1
        )

    def rec(self, b: Branch, rank, to_parent, parent_id: int = -1) -> None:
        report = self.report
        report.branches_explored += 1
        node_id = self.next_id
        self.next_id += 1
        if self.deadline is not None and report.branches_explored % CHECK_EVERY == 0:
            if time.perf_counter() > self.deadline:
                raise _Timeout
        trace = report.trace
        if self.cfg.debug:
            b.check_invariants()

        if self.upper_bound(b, rank) <= self.inc.best_size:
            report.bound_prunes += 1
            if trace is not None:
                trace.append((node_id, parent_id, "prune"))
            return
        b, removed = br.reduce(b, self.inc.best_size, degree_rule=self.cfg.degree_reduction)
        report.reductions_applied += removed

        if self.cfg.early_termination and is_missing_two_deg(b):
            report.ir_calls += 1
            if trace is not None:
                trace.append((node_id, parent_id, "ir"))
            self.inc.offer(to_parent(ir_solve(b)))
            return
        if br.is_trivially_solved(b):
            if trace is not None:
                trace.append((node_id, parent_id, "leaf"))
            self.inc.offer(to_parent(b.S + b.C))
            return

        if trace is not None:
            trace.append((node_id, parent_id, "branch"))
        v = self.pick(b)
        if br.can_include(b, v):
            self.rec(br.include_pivot(b, v), rank, to_parent, node_id)
        self.rec(br.exclude_pivot(b, v), rank, to_parent, node_id)


def bbres_rec(b: Branch, inc: Incumbent, cfg: SolverConfig, report: SolveReport | None = None,
              rank=None, to_parent=list) -> SolveReport:
    """Exhaustively search one branch, updating ``inc`` in place.

    ``to_parent`` maps local ids of ``b.graph`` to the ids stored in ``inc``.
    """
    if report is None:
        report = SolveReport(best=inc, k=cfg.k, config=cfg, trace=[] if cfg.debug else None)
    report.best = inc
    deadline = time.perf_counter() + cfg.time_limit if cfg.time_limit is not None else None
    try:
        _Search(cfg, report, deadline).rec(b, rank, to_parent)
    except _Timeout:
        report.timed_out = True
    return report


def heuristic_seed(g: Graph, ordering: DegeneracyOrder, k: int) -> Incumbent:
    """Greedy k-defective clique built in reverse degeneracy order."""
    chosen: list[int] = []
    mask = 0
    nonedges = 0
    nonadj = g.nonadjacency_bits
    for v in reversed(ordering.order):
        extra = (nonadj[v] & mask).bit_count()
        if nonedges + extra <= k:
            chosen.append(v)
            mask |= 1 << v
            nonedges += extra
    return Incumbent(sorted(chosen))


def solve(g: Graph, cfg: SolverConfig | None = None, **kwargs) -> SolveReport:
    """Maximum k-defective clique of ``g``.

    Stage I solves, for each vertex in degeneracy order, the subproblem on
    its later-ranked two-hop neighbourhood.  Stage II searches the whole
    graph only when Stage I found fewer than k + 1 vertices.
    """
    if cfg is None:
        cfg = SolverConfig(**kwargs)
    elif kwargs:
        raise TypeError("pass either cfg or keyword options, not both")
    report = SolveReport(best=Incumbent(), k=cfg.k, config=cfg, trace=[] if cfg.debug else None)
    start = time.perf_counter()
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    ordering = degeneracy_order(g)
    if cfg.heuristic_seed:
        report.best = heuristic_seed(g, ordering, cfg.k)
    search = _Search(cfg, report, deadline)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * g.n + 1000))
    try:
        for v in ordering.order:
            sub = two_hop_suffix_subgraph(g, ordering, v)
            # local ids are already in degeneracy order, so the rank is the id
            root = br.make_root(sub.graph, [0], cfg.k)
            verts = sub.vertices
            search.rec(root, None, lambda ids, verts=verts: [verts[i] for i in ids])
        if report.best_size < cfg.k + 1 or cfg.force_stage2:
            if report.best_size < cfg.k + 1:
                report.stage = Stage.STAGE2_NEEDED
            root = br.make_root(g, [], cfg.k, C0=ordering.order)
            search.rec(root, ordering.rank, list)
    except _Timeout:
        report.timed_out = True
    finally:
        sys.setrecursionlimit(old_limit)
        report.wall_time = time.perf_counter() - start
    return report
