import copy
from dataclasses import replace

import pytest

from approxstable import GenParams, SchedulePolicy, Side, paper_example, random_instance, solve, solve_b
from approxstable.trace import check_b_invariants, check_one_to_one_invariants, replay_matching

SCRIPT = [0, 1, 2, 0, 1, 3, 3, 1]


@pytest.fixture
def example_run():
    return solve(paper_example(), SchedulePolicy.scripted(SCRIPT), trace=True)


def mutated(result, index, **changes):
    out = copy.copy(result)
    out.trace = list(result.trace)
    out.trace[index] = replace(out.trace[index], **changes)
    return out


def test_clean_trace_passes(example_run):
    inst = paper_example()
    assert check_one_to_one_invariants(inst, example_run) == []
    assert check_b_invariants(inst, example_run) == []
    assert replay_matching(inst, example_run) == set(example_run.matching.edges)


@pytest.mark.parametrize("index, changes, needle", [
    (0, dict(special=False), "special flag"),
    (3, dict(kind="accept", displaced=-1, satellite=-1), "saturated disposer"),
    (3, dict(satellite=2), "not a satellite"),
    (5, dict(detail="uneasy"), "uneasy"),
    (11, dict(kind="reject"), "rejected instead of deferring"),
    (13, dict(detail="prefers"), "not strictly better"),
    (15, dict(woman=3, kind="reject"), "unsaturated disposer rejected"),
])
def test_mutations_are_detected(example_run, index, changes, needle):
    bad = mutated(example_run, index, **changes)
    found = check_one_to_one_invariants(paper_example(), bad)
    assert any(needle in v for v in found), found


def test_dropped_event_changes_replayed_matching(example_run):
    bad = copy.copy(example_run)
    bad.trace = example_run.trace[:-1]
    assert "replayed matching differs from the reported matching" in \
        check_one_to_one_invariants(paper_example(), bad)


def test_truncated_or_missing_trace_is_refused(example_run):
    with pytest.raises(ValueError):
        check_one_to_one_invariants(paper_example(), solve(paper_example()))
    cut = solve(paper_example(), SchedulePolicy.scripted(SCRIPT), trace=True, trace_limit=2)
    with pytest.raises(ValueError):
        check_one_to_one_invariants(paper_example(), cut)


def test_swapped_orientation_replays():
    inst = random_instance(GenParams(6, 4, (1, 4), 0.5, 1, 3, seed=8))
    res = solve_b(inst, trace=True)
    assert res.proposer_side is Side.RIGHT
    assert check_b_invariants(inst, res) == []
    assert replay_matching(inst, res) == set(res.matching.edges)
