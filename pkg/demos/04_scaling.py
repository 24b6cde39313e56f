"""
Linear work
===========

Count proposals and time the solver as the number of edges grows tenfold
at each step.  Proposals per edge stay flat; wall time grows about
linearly.
"""
import sys

from approxstable import GenParams
from approxstable.bench import loglog_slope, rows_to_table, run_scaling

sizes = [10_000, 100_000] + ([1_000_000] if "--full" in sys.argv else [])
rows = run_scaling(sizes, GenParams(0, 0, (1, 10), 0.3, seed=1), repetitions=2)
print(rows_to_table(rows))
print(f"log-log slope of wall time: {loglog_slope(rows):.2f}")
