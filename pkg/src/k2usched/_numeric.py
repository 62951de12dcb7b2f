"""Tolerance-aware integer rounding.

Time quantities are doubles drawn from a fine rational grid, so ratios such
as ``(D + J) / T`` that are mathematically integral can land one ulp on
either side of the integer. The helpers here snap such values before
rounding.
"""

import math

import numpy as np

EPS = 1e-9


def _slack(x):
    return EPS * max(1.0, abs(x))


def ceil_snap(x: float) -> int:
    return math.ceil(x - _slack(x))


def floor_snap(x: float) -> int:
    return math.floor(x + _slack(x))


def is_integral(x: float) -> bool:
    return abs(x - round(x)) <= _slack(x)


def ceil_snap_array(x: np.ndarray) -> np.ndarray:
    return np.ceil(x - EPS * np.maximum(1.0, np.abs(x)))
