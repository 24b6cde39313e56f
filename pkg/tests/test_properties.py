"""Randomised properties over generated instances and schedules."""
import json

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from approxstable import (GenParams, SchedulePolicy, audit, is_valid_matching, optimal_stable,
                          parse_instance, random_instance, ratio_check, serialize_instance, solve,
                          solve_b)
from approxstable.formats import instance_from_json, instance_to_json
from approxstable.trace import check_b_invariants, check_one_to_one_invariants

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def params(draw, caps=1, max_agents=6):
    n_left = draw(st.integers(1, max_agents))
    n_right = draw(st.integers(1, max_agents))
    lo = draw(st.integers(0, n_right))
    hi = draw(st.integers(lo, n_right))
    return GenParams(n_left, n_right, (lo, hi), draw(st.sampled_from([0.0, 0.3, 0.7, 1.0])),
                     draw(st.integers(1, caps)), draw(st.integers(1, caps)),
                     draw(st.integers(0, 2**32)))


policies = st.one_of(st.just(SchedulePolicy.lifo()), st.just(SchedulePolicy.fifo()),
                     st.integers(0, 1000).map(SchedulePolicy.random))


@SETTINGS
@given(params(), policies, st.integers(0, 50))
def test_one_to_one_guarantees(p, policy, tb):
    inst = random_instance(p)
    res = solve(inst, policy, tb, trace=True)
    rep = audit(inst, res.matching)
    assert rep.ok and not res.counters.bound_violations()
    assert check_one_to_one_invariants(inst, res) == []
    if inst.num_edges <= 20:
        assert ratio_check(inst, res.matching, optimal_stable(inst))


@SETTINGS
@given(params(caps=3, max_agents=5), policies, st.integers(0, 50), st.booleans())
def test_b_matching_guarantees(p, policy, tb, orient):
    inst = random_instance(p)
    res = solve_b(inst, policy, tb, orient=orient, trace=True)
    assert is_valid_matching(inst, res.matching)
    assert audit(inst, res.matching).ok and not res.counters.bound_violations()
    assert check_b_invariants(inst, res) == []
    if inst.num_edges <= 16:
        assert ratio_check(inst, res.matching, optimal_stable(inst))


@SETTINGS
@given(params(caps=4, max_agents=8))
def test_text_and_json_round_trip(p):
    inst = random_instance(p)
    text = serialize_instance(inst)
    assert parse_instance(text) == inst
    assert instance_from_json(json.loads(json.dumps(instance_to_json(inst)))) == inst
