import numpy as np
import pytest

from approxstable import GenParams, paper_example, random_instance, serialize_instance, validate


def test_no_ties_at_density_zero():
    inst = random_instance(GenParams(20, 20, (1, 10), 0.0, seed=1))
    assert all(len(t) == 1 for lists in (inst.prefs_left, inst.prefs_right)
               for ties in lists for t in ties)


def test_single_tie_at_density_one():
    inst = random_instance(GenParams(10, 10, (4, 4), 1.0, seed=2))
    assert all(len(ties) == 1 and len(ties[0]) == 4 for ties in inst.prefs_left)


def test_seed_determinism():
    p = GenParams(15, 12, (1, 6), 0.3, 2, 3, seed=5)
    assert serialize_instance(random_instance(p)) == serialize_instance(random_instance(p))
    q = GenParams(15, 12, (1, 6), 0.3, 2, 3, seed=6)
    assert serialize_instance(random_instance(p)) != serialize_instance(random_instance(q))


def test_generated_instances_validate():
    for seed in range(50):
        validate(random_instance(GenParams(7, 9, (0, 9), 0.5, 3, 2, seed=seed)))


def test_list_lengths_and_capacities_in_range():
    inst = random_instance(GenParams(40, 8, (2, 5), 0.3, 4, 2, seed=9))
    lengths = [sum(map(len, ties)) for ties in inst.prefs_left]
    assert min(lengths) >= 2 and max(lengths) <= 5
    assert inst.capacities_left.min() >= 1 and inst.capacities_left.max() <= 4
    assert inst.capacities_right.max() <= 2


def test_empirical_tie_fraction():
    # each adjacent pair on a list is merged into one tie with the given chance
    inst = random_instance(GenParams(2000, 2000, (5, 5), 0.3, seed=4))
    merged = sum(5 - len(ties) for ties in inst.prefs_left)
    assert merged / (4 * 2000) == pytest.approx(0.3, abs=0.02)


@pytest.mark.parametrize("kw", [dict(n_left=-1, n_right=1), dict(n_left=1, n_right=1, tie_density=2),
                                dict(n_left=1, n_right=1, list_length=(3, 2)),
                                dict(n_left=1, n_right=1, capacity_max_left=0)])
def test_bad_params(kw):
    with pytest.raises(ValueError):
        GenParams(**kw)


def test_example_lists():
    inst = paper_example()
    assert inst.prefs_left[0] == ((0, 1), (2,))
    assert inst.prefs_right[2] == ((0,), (1, 3), (2,))
    assert np.all(inst.capacities_left == 1)
