"""Scaling benchmark: exact work counters plus wall time around the solve call."""
from __future__ import annotations

import csv
import gc
import io
import time
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .asbm import solve_b
from .generate import GenParams, random_instance
from .gs_modified import gale_shapley_baseline, solve
from .oracle import SizeLimitExceeded, optimal_stable

__all__ = ["BenchRow", "run_scaling", "loglog_slope", "rows_to_csv", "rows_to_table",
           "compare_sizes"]


@dataclass
class BenchRow:
    edges: float
    agents: float
    total_proposals: float
    l_scans: float
    lprime_scans: float
    queue_ops_logweighted: float
    wall_time: float
    matching_size: float
    c: int


def _agents_for(edges: int, params: GenParams) -> int:
    lo, hi = params.list_length
    return max(1, round(edges / ((lo + hi) / 2)))


def run_scaling(sizes: list[int], params: GenParams, repetitions: int = 1, *,
                engine: str = "one_to_one") -> list[BenchRow]:
    """One averaged row per target edge count.

    For each size the agent count on both sides is chosen so the expected
    number of edges matches the target; repetition ``r`` of size index ``i``
    uses seed ``params.seed + 1000 * i + r``.  Only the solve call is timed,
    with the garbage collector paused.
    """
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    if engine not in ("one_to_one", "b"):
        raise ValueError(f"unknown engine {engine!r}")
    rows = []
    for i, size in enumerate(sizes):
        acc = []
        for r in range(repetitions):
            n = _agents_for(size, params) if size else 0
            p = replace(params, n_left=n, n_right=n, seed=params.seed + 1000 * i + r)
            inst = random_instance(p)
            _ = inst.fast   # build the solver views outside the timed region
            gc_was = gc.isenabled()
            gc.disable()
            try:
                t0 = time.perf_counter()
                res = solve(inst) if engine == "one_to_one" else solve_b(inst)
                dt = time.perf_counter() - t0
            finally:
                if gc_was:
                    gc.enable()
            c = res.counters
            cap_c = min(int(inst.capacities_left.max(initial=1)),
                        int(inst.capacities_right.max(initial=1)))
            acc.append((inst.num_edges, inst.n_left + inst.n_right, c.total_proposals,
                        int(c.l_scans.sum()), int(c.lprime_scans.sum()),
                        c.queue_ops_logweighted, dt, len(res.matching), cap_c))
        a = np.asarray(acc, dtype=float).mean(axis=0)
        rows.append(BenchRow(*a[:8].tolist(), c=int(max(x[8] for x in acc))))
    return rows


def loglog_slope(rows: list[BenchRow]) -> float:
    """Least-squares slope of log(wall time) against log(edges)."""
    x = np.log([r.edges for r in rows])
    y = np.log([r.wall_time for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(BenchRow)]
    w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    return buf.getvalue()


def rows_to_table(rows: list[BenchRow]) -> str:
    head = f"{'edges':>10} {'props/edge':>10} {'L':>10} {'Lprime':>8} {'time[s]':>9} {'size':>9}"
    lines = [head]
    for r in rows:
        ratio = r.total_proposals / r.edges if r.edges else 0.0
        lines.append(f"{r.edges:>10.0f} {ratio:>10.3f} {r.l_scans:>10.0f} "
                     f"{r.lprime_scans:>8.0f} {r.wall_time:>9.4f} {r.matching_size:>9.1f}")
    return "\n".join(lines) + "\n"


def compare_sizes(instances, edge_budget: int = 20, tiebreak_seed: int = 0) -> list[dict]:
    """Matching sizes of the engine, the tie-breaking baseline and (if small) the optimum."""
    out = []
    for inst in instances:
        row = {"edges": inst.num_edges,
               "gs_modified": len(solve(inst).matching),
               "baseline": len(gale_shapley_baseline(inst, tiebreak_seed))}
        try:
            row["optimum"] = optimal_stable(inst, edge_budget).opt_size
        except SizeLimitExceeded:
            row["optimum"] = None
        out.append(row)
    return out
