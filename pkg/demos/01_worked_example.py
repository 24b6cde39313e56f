"""
A four-by-four walkthrough
==========================

Four men and four women, two ties.  Run the engine under a fixed schedule
and print every decision it makes, then check the result.
"""
from approxstable import SchedulePolicy, audit, format_event, optimal_stable, paper_example, solve
from approxstable.formats import serialize_instance

inst = paper_example()
print(serialize_instance(inst))

# one turn per listed man, in this order
schedule = SchedulePolicy.scripted([0, 1, 2, 0, 1, 3, 3, 1])
res = solve(inst, schedule, trace=True)
for ev in res.trace:
    print(format_event(ev))

# m2 takes w1 from m1 by moving m1 onto his equally liked free option w2;
# later m4 waits in a deferred list and wins w3 on his second try
print("matching:", [f"m{u + 1}-w{w + 1}" for u, w in res.matching.sorted_edges()])

rep = audit(inst, res.matching)
print("blocking pairs:", rep.blocking_pairs, "dangerous paths:", rep.dangerous_paths)
print("largest stable matching has", optimal_stable(inst).opt_size, "pairs")
