# %% [markdown]
# # Acceptance ratio versus utilization
#
# Random task sets (UUniFast utilizations, log-uniform periods) analysed by
# every polynomial test and by the exact time-demand test. The exact test is
# an upper envelope for all the others.

# %%
import csv
import io

from k2usched.cli import CSV_HEADER, run_sweep

u_values = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
rows, unsound = run_sweep("uni_preemptive", {}, n=5, u_values=u_values, trials=200, seed=1)
print("task sets accepted by a bound but not by the exact test:", unsound)

# %%
table = {}
for u, test, accepted, trials in rows:
    table.setdefault(test, {})[u] = accepted / trials
print("test".ljust(18) + "".join(f"{u:>7.2f}" for u in u_values))
for test, by_u in sorted(table.items()):
    print(test.ljust(18) + "".join(f"{by_u[u]:7.2f}" for u in u_values))

# %% Same data as the CLI would write it
buf = io.StringIO()
w = csv.writer(buf)
w.writerow(CSV_HEADER)
w.writerows(rows[:6])
print(buf.getvalue())

# %% Global scheduling on two processors
rows, _ = run_sweep("mp_global", {"M": 2}, n=6, u_values=[0.4, 0.6, 0.8, 1.0], trials=200, seed=1)
for u, test, accepted, trials in rows:
    if test in ("hyperbolic", "kpoint", "tda"):
        print(u, test, accepted / trials)
