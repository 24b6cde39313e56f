"""
Many-to-many with capacities
============================

Residents apply to hospitals with several seats; residents may also take a
few positions each.  The b-matching engine keeps the same guarantees.
"""
from approxstable import GenParams, audit, optimal_stable, random_instance, solve_b
from approxstable.formats import serialize_matching

inst = random_instance(GenParams(5, 3, (1, 3), 0.5, capacity_max_left=2, capacity_max_right=3,
                                 seed=12))
print("left capacities ", inst.capacities_left.tolist())
print("right capacities", inst.capacities_right.tolist())

res = solve_b(inst, trace=True)
print("proposing side:", res.proposer_side.name.lower())
print(serialize_matching(res.matching))

rep = audit(inst, res.matching)
orc = optimal_stable(inst)
print(f"stable: {rep.stable}, dangerous paths: {len(rep.dangerous_paths)}")
print(f"size {len(res.matching)} vs optimum {orc.opt_size}")
print(f"queue operations {res.counters.queue_ops}, log-weighted {res.counters.queue_ops_logweighted:.1f}")
