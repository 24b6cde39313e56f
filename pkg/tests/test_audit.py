import pytest

from approxstable import (GenParams, Instance, InvalidMatching, Matching, SchedulePolicy,
                          approx_certificate, audit, find_blocking_pairs, find_dangerous_paths,
                          gale_shapley_baseline, paper_example, random_instance, solve, solve_b)
from approxstable.audit import naive_blocking_pairs, naive_dangerous_paths


def hand_instance(w1_tie: bool = False) -> Instance:
    # m1: (w1 w2), m2: w1; w1 ranks m1 first (or ties him with m2)
    w1 = [[0, 1]] if w1_tie else [[0], [1]]
    return Instance([[[0, 1]], [[0]]], [w1, [[0]]])


def test_solver_output_has_no_blocking_pairs():
    inst = paper_example()
    m = solve(inst, SchedulePolicy.scripted([0, 1, 2, 0, 1, 3, 3, 1])).matching
    assert find_blocking_pairs(inst, m) == []
    assert find_dangerous_paths(inst, m) == []
    assert bool(approx_certificate(inst, m))


def test_empty_matching_blocks_everywhere():
    inst = paper_example()
    assert sorted(find_blocking_pairs(inst, Matching.of([]))) == sorted(inst.edges())
    cert = approx_certificate(inst, Matching.of([]))
    assert (cert.stable, cert.dangerous_free) == (False, False)


def test_masculine_dangerous_path():
    inst = hand_instance()
    m = Matching.of([(0, 0)])
    assert find_blocking_pairs(inst, m) == []
    paths = find_dangerous_paths(inst, m)
    assert [p.path for p in paths] == [(1, 0, 0, 1)]
    assert paths[0].kinds == {"masculine"}
    assert not approx_certificate(inst, m).dangerous_free


def test_path_with_both_kinds():
    paths = find_dangerous_paths(hand_instance(True), Matching.of([(0, 0)]))
    assert paths[0].kinds == {"masculine", "feminine"}


def test_invalid_matching_raises():
    with pytest.raises(InvalidMatching):
        find_blocking_pairs(paper_example(), Matching.of([(3, 0)]))
    assert not audit(paper_example(), Matching.of([(0, 0), (0, 1)])).valid


def test_capacitated_blocking_pair():
    # u has room for two; w prefers u over her only partner
    inst = Instance([[[0]], [[0]]], [[[0], [1]]], [2, 1], [1])
    assert find_blocking_pairs(inst, Matching.of([(1, 0)])) == [(0, 0)]
    assert find_blocking_pairs(inst, Matching.of([(0, 0)])) == []


def test_baseline_leaves_dangerous_paths_somewhere():
    found = 0
    for seed in range(300):
        inst = random_instance(GenParams(6, 6, (1, 6), 1.0, seed=seed))
        found += bool(find_dangerous_paths(inst, gale_shapley_baseline(inst)))
    assert found > 0


@pytest.mark.parametrize("caps", [1, 3])
def test_fast_checkers_agree_with_naive(caps):
    for seed in range(150):
        inst = random_instance(GenParams(5, 5, (1, 5), (0.0, 0.4, 1.0)[seed % 3],
                                         capacity_max_left=caps, capacity_max_right=caps,
                                         seed=seed))
        candidates = [solve_b(inst).matching, Matching.of([])]
        if caps == 1:
            candidates.append(gale_shapley_baseline(inst, seed))
        for m in candidates:
            assert sorted(find_blocking_pairs(inst, m)) == naive_blocking_pairs(inst, m)
            if not find_blocking_pairs(inst, m):
                fast = [p.path for p in find_dangerous_paths(inst, m)]
                assert fast == naive_dangerous_paths(inst, m)
