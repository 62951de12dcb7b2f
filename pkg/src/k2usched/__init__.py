"""Polynomial-time fixed-priority schedulability tests with automatically
derived k-point parameters, checked against exact time-demand analysis."""

from .analysis import analyze_problem, analyze_taskset, taskset_verdicts
from .bounds import (KPointEntry, KPointParams, SplitRecord, TestVerdict,
                     capacity_rhs, capacity_test, evaluate_kpoint, general_test,
                     hyperbolic_test, log_utilization_test)
from .derivation import (corollary1_tests, derive, derive_constant_inflation,
                         derive_independent_jitter, derive_uniform_jitter,
                         derive_uniform_jitter_refined)
from .oracle import GeneralizedTest, candidate_points, tda_accepts, wcrt_fixed_point
from .presets import build_problem, tdma_rm_closed_forms
from .service_curves import (BoundedDelay, ExactTDMA, Identity, Segmented,
                             reduce_bounded_delay, reduce_segmented, service_value)
from .task_model import (AnalysisProblem, ModelError, Task, assign_priorities,
                         classify, load_taskset)

__version__ = "0.1.0"
