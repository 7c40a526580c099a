"""Command-line entry point: solve, bench, oracle, roots and export-csv."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

import mpmath

from .graph import Graph, GraphCapacityError, GraphParseError, load_graph
from .oracle import OracleSizeError, brute_force_max_kdc, characteristic_roots
from .records import RunRecord
from .solver import ConfigError, SolverConfig, solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TIMEOUT = 2
EXIT_OVERSIZE = 3

log = logging.getLogger("kdefect")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with the timeout code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="graph file")
    p.add_argument("--format", choices=("edge_list", "dimacs"), default="edge_list")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kdefect", description="Exact maximum k-defective clique solver.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one graph and print a JSON run record")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", choices=("double", "single"), default="double")
    p.add_argument("--branch", choices=("bs-three", "baseline"), default=None,
                   help="default bs-three, or baseline with --no-early-term")
    p.add_argument("--no-early-term", action="store_true")
    p.add_argument("--second-order", default="memory",
                   choices=("memory", "random", "s_ord", "s_rev", "peel_ord", "peel_rev"))
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-solution", action="store_true")

    p = sub.add_parser("bench", help="run a (graph, k, variant) grid into a JSONL file")
    p.add_argument("--manifest", required=True, help="one graph path per line, '#' comments")
    p.add_argument("--format", choices=("edge_list", "dimacs"), default="edge_list")
    p.add_argument("--k-list", default="1,3", help="comma separated")
    p.add_argument("--variants", default=",".join(SolverConfig.VARIANTS), help="comma separated")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (capped by KDEFECT_THREADS)")

    p = sub.add_parser("oracle", help="brute-force optimum for graphs with at most 24 vertices")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("roots", help="branching-factor constants lambda_k and gamma_k")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--k-range", metavar="A..B")

    p = sub.add_parser("export-csv", help="convert a bench JSONL file to CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    return parser


def _load(args) -> Graph:
    return load_graph(args.input, args.format)


def _solve_config(args) -> SolverConfig:
    early = not args.no_early_term
    branch = args.branch or ("bs-three" if early else "baseline")
    return SolverConfig(
        k=args.k,
        bound=args.bound,
        branching=branch.replace("-", "_"),
        early_termination=early,
        second_coloring_order=args.second_order,
        time_limit=args.time_limit,
        seed=args.seed,
    )


def cmd_solve(args, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = _solve_config(args)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    g = _load(args)
    report = solve(g, cfg)
    record = RunRecord.from_report(g, report, emit_solution=args.emit_solution)
    print(record.to_json(), file=out)
    return EXIT_TIMEOUT if report.timed_out else EXIT_OK


def read_manifest(path: str | os.PathLike) -> list[Path]:
    """Graph paths listed one per line; relative paths resolve against the manifest's folder."""
    base = Path(path).parent
    paths = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            p = Path(line)
            paths.append(p if p.is_absolute() else base / p)
    return paths


def _csv_list(text: str, cast=str) -> list:
    try:
        return [cast(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None


def _run_cell(g: Graph, k: int, variant: str, time_limit: float | None, seed: int) -> str:
    cfg = SolverConfig.variant(variant, k=k, time_limit=time_limit, seed=seed)
    return RunRecord.from_report(g, solve(g, cfg), variant=variant).to_json()


def _jobs(requested: int | None) -> int:
    cap = os.environ.get("KDEFECT_THREADS")
    jobs = requested or 1
    if cap:
        try:
            jobs = min(jobs, int(cap))
        except ValueError:
            raise UsageError(f"KDEFECT_THREADS must be an integer, got {cap!r}") from None
    return max(1, jobs)


def cmd_bench(args) -> int:
    ks = _csv_list(args.k_list, int)
    variants = _csv_list(args.variants)
    for v in variants:
        if v not in SolverConfig.VARIANTS:
            raise UsageError(f"unknown variant {v!r}; choose from {sorted(SolverConfig.VARIANTS)}")
    if any(k < 0 for k in ks):
        raise UsageError("k must be non-negative")
    jobs = _jobs(args.jobs)

    with open(args.out, "w", encoding="utf-8") as sink:
        def emit(line: str) -> None:
            sink.write(line + "\n")
            sink.flush()

        cells = []
        for path in read_manifest(args.manifest):
            try:
                g = load_graph(path, args.format)
            except (OSError, GraphParseError, GraphCapacityError) as exc:
                for k in ks:
                    for v in variants:
                        fp = SolverConfig.variant(v, k=k, seed=args.seed).fingerprint()
                        emit(RunRecord.error_row(path.name, k, fp, str(exc), variant=v).to_json())
                continue
            cells.extend((g, k, v, args.time_limit, args.seed) for k in ks for v in variants)

        if jobs == 1:
            for cell in cells:
                emit(_run_cell(*cell))
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for fut in as_completed([pool.submit(_run_cell, *cell) for cell in cells]):
                    emit(fut.result())
    return EXIT_OK


def cmd_oracle(args, out=None) -> int:
    out = out or sys.stdout
    g = _load(args)
    if args.k < 0:
        raise UsageError("k must be non-negative")
    try:
        best = brute_force_max_kdc(g, args.k)
    except OracleSizeError as exc:
        print(f"kdefect oracle: {exc}", file=sys.stderr)
        return EXIT_OVERSIZE
    payload = {"graph_name": g.name, "n": g.n, "k": args.k, "best_size": len(best),
               "solution": [g.labels[v] for v in best]}
    print(json.dumps(payload, sort_keys=True), file=out)
    return EXIT_OK


def _k_values(args) -> list[int]:
    if args.k is not None:
        ks = [args.k]
    else:
        lo, sep, hi = args.k_range.partition("..")
        try:
            ks = list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise UsageError(f"--k-range expects A..B, got {args.k_range!r}") from None
        if not sep or not ks:
            raise UsageError(f"--k-range expects A..B with A <= B, got {args.k_range!r}")
    if min(ks) < 1 or max(ks) > 64:
        raise UsageError("k must be in 1..64")
    return ks


def cmd_roots(args, out=None) -> int:
    out = out or sys.stdout
    rows = []
    for k in _k_values(args):
        r = characteristic_roots(k)
        rows.append({
            "k": k,
            "lambda": float(r.lambda_k),
            "gamma": float(r.gamma_k),
            "lambda_digits": mpmath.nstr(r.lambda_k, 30),
            "gamma_digits": mpmath.nstr(r.gamma_k, 30),
        })
    print(json.dumps(rows if len(rows) > 1 else rows[0], sort_keys=True), file=out)
    return EXIT_OK


def cmd_export_csv(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        rows = [json.loads(line) for line in fh if line.strip()]
    fields = sorted({key for row in rows for key in row})
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            if isinstance(row.get("solution"), list):
                row["solution"] = " ".join(map(str, row["solution"]))
            writer.writerow(row)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "bench": cmd_bench,
    "oracle": cmd_oracle,
    "roots": cmd_roots,
    "export-csv": cmd_export_csv,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kdefect {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, GraphParseError, GraphCapacityError) as exc:
        print(f"kdefect {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
