# %% [markdown]
# # TDMA service: exact supply and its two linear approximations
#
# A partition owning a slot of C_slot in every cycle of T_cycle gets the
# exact staircase supply. The segmented curve follows it with a saw-tooth,
# the bounded-delay curve replaces it by a single line with rate
# gamma = C_slot / T_cycle and delay T_cycle - C_slot.

# %%
import numpy as np

from k2usched import BoundedDelay, ExactTDMA, Segmented, service_value

T_cycle, C_slot = 5.0, 2.0
curves = {
    "exact": ExactTDMA(T_cycle, C_slot),
    "segmented": Segmented(T_cycle, C_slot),
    "bounded-delay": BoundedDelay.from_tdma(T_cycle, C_slot),
}
ts = np.arange(1, 21, dtype=float)
print("t     " + "  ".join(f"{name:>13}" for name in curves))
for t in ts:
    print(f"{t:4.0f}  " + "  ".join(f"{service_value(c, t):13.2f}" for c in curves.values()))

# %% [markdown]
# Which approximation wins depends on the cycle. With a short cycle relative
# to the periods, the bounded-delay line loses little; with a long cycle the
# segmented curve keeps the staircase shape and does better.

# %%
from k2usched import Task
from k2usched.presets import tdma_rm_closed_forms, tdma_utilization_bound

short = [Task("t0", 9.721, 77), Task("t1", 47.93, 163)]
long_ = [Task("t0", 0.347, 5), Task("t1", 12.647, 85), Task("t2", 14.804, 89)]
for name, tasks, tc, cs in (("short cycle", short, 39, 24), ("long cycle", long_, 77, 48)):
    seg, bd = tdma_rm_closed_forms(tasks, len(tasks) - 1, tc, cs)
    print(f"{name:12s} segmented={seg.schedulable} bounded-delay={bd.schedulable}")

# %% Limit of the small-cycle utilization bound
for gamma in (0.2, 0.4, 0.8, 1.0):
    print(gamma, tdma_utilization_bound(10 ** 6, gamma), np.log(2 / (2 - gamma)))
