# %% [markdown]
# # Release jitter and self-suspension
#
# Jitter shifts the last release before the deadline earlier, which moves
# test points and raises the coefficients. A self-suspending task is handled
# by charging its suspension to its own execution time and treating every
# higher-priority task as jittered by T_i - C_i.

# %%
from k2usched import (AnalysisProblem, Task, derive_independent_jitter, derive_uniform_jitter,
                      derive_uniform_jitter_refined, evaluate_kpoint)
from k2usched.oracle import from_problem, tda_accepts

tk = Task("k", C=1.0, T=10.0)
hp = (Task("a", C=1.0, T=4.0), Task("b", C=0.5, T=8.0))
for delta in (0.25, 0.5, 0.99, 1.5):
    prob = AnalysisProblem(tk, hp, delta=delta)
    for derive in (derive_uniform_jitter, derive_uniform_jitter_refined):
        p = derive(prob)
        print(f"delta={delta:<5} {derive.__name__:30s} C_eff={p.C_k_eff:.3f} "
              f"points={[round(e.t, 3) for e in p.entries]} "
              f"kpoint={evaluate_kpoint(p).schedulable}")
    print("  exact test:", tda_accepts(from_problem(prob)).schedulable)

# %% Self-suspending task through the preset
from k2usched.presets import build_problem

tasks = [Task("a", C=1.0, T=4.0), Task("k", C=1.0, T=10.0, S=0.5)]
prob = build_problem("self_suspending_uni", tasks, 1)
print(prob.base_C, [t.J for t in prob.hp])
params = derive_independent_jitter(prob)
print(params)
print(evaluate_kpoint(params), tda_accepts(from_problem(prob)))
