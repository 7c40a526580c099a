"""Machine-readable run records and their JSON schema."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

from .graph import Graph
from .solver import SolveReport


@dataclass
class RunRecord:
    graph_name: str
    n: int | None
    m: int | None
    k: int
    config: str
    best_size: int | None
    wall_time_ms: float
    branches_explored: int
    ir_calls: int
    bound_prunes: int
    timed_out: bool
    solver_version: str
    variant: str | None = None
    stage: str | None = None
    error: str | None = None
    solution: list[int] | None = field(default=None)

    @classmethod
    def from_report(cls, g: Graph, report: SolveReport, *, variant: str | None = None,
                    emit_solution: bool = False) -> RunRecord:
        from . import __version__

        return cls(
            graph_name=g.name,
            n=g.n,
            m=g.m,
            k=report.k,
            config=report.config.fingerprint(),
            best_size=report.best_size,
            wall_time_ms=round(report.wall_time * 1000, 3),
            branches_explored=report.branches_explored,
            ir_calls=report.ir_calls,
            bound_prunes=report.bound_prunes,
            timed_out=report.timed_out,
            solver_version=__version__,
            variant=variant,
            stage=report.stage.value,
            solution=[g.labels[v] for v in report.best.best_vertices] if emit_solution else None,
        )

    @classmethod
    def error_row(cls, graph_name: str, k: int, config: str, message: str, variant: str | None = None) -> RunRecord:
        from . import __version__

        return cls(graph_name, None, None, k, config, None, 0.0, 0, 0, 0, False, __version__,
                   variant=variant, error=message)

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["solution"] is None:
            del d["solution"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> RunRecord:
        return cls(**json.loads(line))


@lru_cache(maxsize=1)
def run_record_schema() -> dict:
    text = resources.files("kdefect").joinpath("schemas/run_record.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
