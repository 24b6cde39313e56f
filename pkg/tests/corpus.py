"""Seeded corpora shared by the property and acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from approxstable import GenParams, Instance, SchedulePolicy, random_instance, solve, solve_b

TIE_DENSITIES = (0.0, 0.3, 0.7, 1.0)
POLICY_KINDS = ("lifo", "fifo", "random", "scripted")


@dataclass(frozen=True)
class Case:
    index: int
    instance: Instance
    policy_kind: str
    seed: int
    tiebreak_seed: int


def policy_for(case: Case, engine) -> SchedulePolicy:
    """The case's schedule.  A scripted schedule replays the proposer order of a
    random run with a different seed, so every scripted turn is legal."""
    if case.policy_kind == "scripted":
        donor = engine(case.instance, SchedulePolicy.random(case.seed + 1),
                       case.tiebreak_seed, trace=True)
        return SchedulePolicy.scripted(donor.proposers())
    if case.policy_kind == "random":
        return SchedulePolicy.random(case.seed)
    return SchedulePolicy(case.policy_kind)


@lru_cache(maxsize=None)
def one_to_one_corpus(count: int = 10_000, base_seed: int = 20_000) -> tuple[Case, ...]:
    """Instances with at most 6 + 6 agents, every tie density and schedule kind."""
    rng = np.random.Generator(np.random.PCG64(base_seed))
    cases = []
    for i in range(count):
        n_left, n_right = (int(x) for x in rng.integers(1, 7, size=2))
        seed = base_seed + i
        params = GenParams(n_left, n_right, (1, n_right), TIE_DENSITIES[i % 4], seed=seed)
        cases.append(Case(i, random_instance(params), POLICY_KINDS[(i // 4) % 4], seed, i % 7))
    return tuple(cases)


@lru_cache(maxsize=None)
def b_corpus(count: int = 2_000, base_seed: int = 50_000, max_edges: int = 16) -> tuple[Case, ...]:
    """Instances with at most ``max_edges`` edges and capacities up to 3."""
    rng = np.random.Generator(np.random.PCG64(base_seed))
    cases = []
    seed = base_seed
    while len(cases) < count:
        i = len(cases)
        n_left, n_right = (int(x) for x in rng.integers(1, 6, size=2))
        params = GenParams(n_left, n_right, (1, min(4, n_right)), TIE_DENSITIES[i % 4],
                           capacity_max_left=3, capacity_max_right=3, seed=seed)
        seed += 1
        inst = random_instance(params)
        if inst.num_edges > max_edges:
            continue
        cases.append(Case(i, inst, POLICY_KINDS[(i // 4) % 4], seed, i % 5))
    return tuple(cases)


def run_one_to_one(case: Case, trace: bool = False):
    return solve(case.instance, policy_for(case, solve), case.tiebreak_seed, trace=trace)


def run_b(case: Case, trace: bool = False, **kw):
    def engine(inst, pol, seed, trace=False):
        return solve_b(inst, pol, seed, trace=trace, **kw)
    return engine(case.instance, policy_for(case, engine), case.tiebreak_seed, trace=trace)
