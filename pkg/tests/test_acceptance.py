"""End-to-end acceptance checks, one test per criterion.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion
in the terminal summary, or ``python3 tests/test_acceptance.py`` to run them
without pytest.
"""
from __future__ import annotations

import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from corpus import b_corpus, one_to_one_corpus, run_b, run_one_to_one  # noqa: E402

from approxstable import (GenParams, SchedulePolicy, audit, is_valid_matching,  # noqa: E402
                          optimal_stable, paper_example, parse_instance, random_instance,
                          ratio_check, serialize_instance, solve, solve_b)
from approxstable.bench import loglog_slope, run_scaling  # noqa: E402
from approxstable.formats import instance_from_json, instance_to_json  # noqa: E402
from approxstable.trace import check_b_invariants, check_one_to_one_invariants  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, tuple[str, str]] = {}

# scripted schedule of the worked example and the events it must produce
EXAMPLE_SCRIPT = [0, 1, 2, 0, 1, 3, 3, 1]
EXAMPLE_EVENTS = [
    ("propose", 0, 0), ("accept", 0, 0),
    ("propose", 1, 0), ("swap", 1, 0),
    ("propose", 2, 1), ("replace", 2, 1),
    ("propose", 0, 0), ("replace", 0, 0),
    ("propose", 1, 2), ("accept", 1, 2),
    ("propose", 3, 2), ("defer", 3, 2),
    ("propose", 3, 2), ("replace", 3, 2),
    ("propose", 1, 3), ("accept", 1, 3),
]
EXAMPLE_MATCHING = {(0, 0), (1, 3), (2, 1), (3, 2)}


def criterion(number: int, title: str):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs) or ""
            except BaseException as exc:
                RESULTS[number] = ("FAIL", f"{title}: {exc}".splitlines()[0])
                raise
            RESULTS[number] = ("PASS", f"{title}{': ' + detail if detail else ''}")
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@criterion(1, "worked example trace")
def test_c1_worked_example_trace():
    inst = paper_example()
    res = solve(inst, SchedulePolicy.scripted(EXAMPLE_SCRIPT), 0, trace=True)
    got = [(ev.kind, ev.man, ev.woman) for ev in res.trace]
    assert got == EXAMPLE_EVENTS
    ev = res.trace
    assert ev[0].special and ev[3].displaced == 0 and ev[3].satellite == 1
    assert ev[5].displaced == 0 and ev[5].detail == "prefers"
    assert ev[6].detail == "retained" and ev[7].displaced == 1
    assert ev[11].source == "L" and ev[12].source == "L'" and ev[13].detail == "uneasy"
    assert set(res.matching.edges) == EXAMPLE_MATCHING
    best = min(_timed(lambda: solve(inst, SchedulePolicy.scripted(EXAMPLE_SCRIPT), 0,
                                    trace=True)) for _ in range(50))
    assert best < 1e-3, f"{best * 1e3:.3f} ms"
    return f"{best * 1e6:.0f} us per solve"


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


@criterion(2, "one-to-one property suite (10,000 instances)")
def test_c2_one_to_one_corpus():
    t0 = time.perf_counter()
    cases = one_to_one_corpus()
    assert len(cases) == 10_000
    assert {c.policy_kind for c in cases} == {"lifo", "fifo", "random", "scripted"}
    failures = []
    for case in cases:
        inst = case.instance
        m = run_one_to_one(case).matching
        rep = audit(inst, m)
        orc = optimal_stable(inst, limit=36)
        if not (is_valid_matching(inst, m) and rep.stable and not rep.dangerous_paths
                and ratio_check(inst, m, orc)):
            failures.append(case.index)
    assert not failures, f"failing cases {failures[:10]}"
    return f"0 violations in {time.perf_counter() - t0:.1f} s"


@criterion(3, "tightness witness")
def test_c3_tightness_witness():
    inst = parse_instance((FIXTURES / "tight.smti").read_text())
    m = solve(inst).matching
    orc = optimal_stable(inst)
    assert audit(inst, m).ok
    assert 2 * orc.opt_size == 3 * len(m), (orc.opt_size, len(m))
    return f"|M| = {len(m)}, opt = {orc.opt_size}"


@criterion(4, "b-matching property suite (2,000 instances)")
def test_c4_b_corpus():
    t0 = time.perf_counter()
    cases = b_corpus()
    assert len(cases) == 2_000
    assert max(c.instance.num_edges for c in cases) <= 16
    failures = []
    for case in cases:
        inst = case.instance
        m = run_b(case).matching
        rep = audit(inst, m)
        orc = optimal_stable(inst, limit=16)
        if not (is_valid_matching(inst, m) and rep.stable and not rep.dangerous_paths
                and ratio_check(inst, m, orc)):
            failures.append(case.index)
    assert not failures, f"failing cases {failures[:10]}"
    return f"0 violations in {time.perf_counter() - t0:.1f} s"


@criterion(5, "b = 1 consistency (1,000 instances)")
def test_c5_unit_capacity_consistency():
    failures = []
    for case in one_to_one_corpus()[:1000]:
        inst = case.instance
        one = audit(inst, run_one_to_one(case).matching)
        many = audit(inst, run_b(case).matching)
        if not (one.ok and many.ok and one.valid == many.valid):
            failures.append(case.index)
    assert not failures, f"failing cases {failures[:10]}"


@criterion(6, "counter bounds")
def test_c6_counter_bounds():
    failures = []
    for case in one_to_one_corpus():
        if case.instance.num_edges and run_one_to_one(case).counters.bound_violations():
            failures.append(("1:1", case.index))
    for case in b_corpus():
        if run_b(case).counters.bound_violations():
            failures.append(("b", case.index))
    assert not failures, f"failing cases {failures[:10]}"


@criterion(7, "linear scaling")
def test_c7_linear_scaling():
    rows = run_scaling([10_000, 100_000, 1_000_000], GenParams(0, 0, (1, 10), 0.3, seed=7), 3)
    for r in rows:
        assert r.total_proposals <= 3 * r.edges, r
    slope = loglog_slope(rows)
    assert 0.8 <= slope <= 1.3, f"slope {slope:.3f}"
    ratios = ", ".join(f"{r.total_proposals / r.edges:.3f}" for r in rows)
    return f"slope {slope:.3f}, proposals per edge {ratios}"


@criterion(8, "trace-level invariant checks")
def test_c8_trace_invariants():
    failures = []
    for case in one_to_one_corpus():
        v = check_one_to_one_invariants(case.instance, run_one_to_one(case, trace=True))
        if v:
            failures.append(("1:1", case.index, v[0]))
    for case in b_corpus():
        v = check_b_invariants(case.instance, run_b(case, trace=True))
        if v:
            failures.append(("b", case.index, v[0]))
    assert not failures, f"failing cases {failures[:5]}"


@criterion(9, "format round-trips (1,000 instances)")
def test_c9_format_round_trips():
    for i in range(1000):
        params = GenParams(1 + i % 9, 1 + (i // 9) % 9, (0, 6), (0.0, 0.3, 0.7, 1.0)[i % 4],
                           capacity_max_left=1 + i % 4, capacity_max_right=1 + (i // 4) % 4,
                           seed=90_000 + i)
        inst = random_instance(params)
        text = serialize_instance(inst)
        back = parse_instance(text)
        assert back == inst
        assert serialize_instance(back) == text
        via_json = instance_from_json(json.dumps(instance_to_json(inst)))
        assert via_json == back




if __name__ == "__main__":
    tests = [test_c1_worked_example_trace, test_c2_one_to_one_corpus, test_c3_tightness_witness,
             test_c4_b_corpus, test_c5_unit_capacity_consistency, test_c6_counter_bounds,
             test_c7_linear_scaling, test_c8_trace_invariants, test_c9_format_round_trips]
    for t in tests:
        try:
            t()
        except BaseException:
            pass
    for n in sorted(RESULTS):
        status, text = RESULTS[n]
        print(f"criterion {n} {status} {text}")
    sys.exit(0 if all(s == "PASS" for s, _ in RESULTS.values()) else 1)
