# %% [markdown]
# # Utilization bounds from the k-point test
#
# Deriving test points for rate-monotonic tasks with implicit deadlines and
# feeding them to the capacity form recovers the classic k(2^(1/k) - 1)
# bound. The hyperbolic form accepts strictly more task sets.

# %%
import math

import numpy as np

from k2usched import (AnalysisProblem, Task, capacity_rhs, derive_constant_inflation,
                      evaluate_kpoint, hyperbolic_test)

# %%
for k in (1, 2, 3, 5, 10, 100, 10 ** 6):
    print(f"k={k:>8}  bound={capacity_rhs(k, 1.0, 1.0):.6f}")
print(f"ln 2      = {math.log(2):.6f}")

# %% [markdown]
# A two-task set that the utilization bound rejects and the hyperbolic
# bound accepts: U = 0.5 + 0.33 > 0.8284, but (1.5)(1.33) = 1.995 <= 2.

# %%
tk = Task("k", C=0.99, T=3.0)
hp = (Task("a", C=1.0, T=2.0),)
params = derive_constant_inflation(AnalysisProblem(tk, hp))
print(params.entries, params.C_k_eff, params.t_k)
print("total U      :", tk.U + sum(t.U for t in hp))
print("hyperbolic   :", hyperbolic_test(params, 1.0, 1.0))
print("k-point      :", evaluate_kpoint(params))

# %% Acceptance of random sets at one utilization level
from k2usched.analysis import analyze_taskset
from k2usched.taskgen import GenSpec, generate
from k2usched.task_model import assign_priorities

rng = np.random.default_rng(3)
hits = {}
for _ in range(300):
    tasks = assign_priorities(generate(GenSpec(n=5, total_U=0.8), rng))
    reports = analyze_taskset(tasks, "uni_preemptive")
    for name in ("capacity", "hyperbolic", "kpoint", "tda"):
        hits[name] = hits.get(name, 0) + all(r.verdicts[name].schedulable for r in reports)
print(hits)
