from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import linregress

from feedback_loop.core.types.metrics import MetricsRecord
from feedback_loop.core.types.policy import FloatArray
from feedback_loop.tools.logging import setup_logger

logger = setup_logger()

MIN_FIT_POINTS: int = 10
"""Fewest points a power-law fit accepts
"""


def linear_fit_r2(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
    """Ordinary least squares of `y` on `x`.

    Returns:
        Tuple of (slope, intercept, coefficient of determination).
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"`x` and `y` must be 1-D of equal length, got {x.shape} and {y.shape}.")
    if len(x) < 2 or np.ptp(x) == 0:
        raise ValueError("`x` needs at least two distinct values.")
    fit = linregress(x, y)
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)


def fit_power_law_exponent(steps: Sequence[float], values: Sequence[float]) -> float:
    """Exponent `b` of `value ~ t ** b`, i.e. the least-squares slope of log(value) on log(t)."""
    steps, values = np.asarray(steps, dtype=float), np.asarray(values, dtype=float)
    if len(steps) < MIN_FIT_POINTS:
        raise ValueError(f"A power-law fit needs at least {MIN_FIT_POINTS} points, got {len(steps)}.")
    if np.any(steps <= 0) or np.any(values <= 0):
        raise ValueError("`steps` and `values` must be strictly positive for a power-law fit.")
    slope, _, _ = linear_fit_r2(np.log(steps), np.log(values))
    return slope


def log_spaced_steps(start: int, stop: int, num_points: int = 50) -> np.ndarray:
    """Unique integer steps in [start, stop], geometrically spaced."""
    if not 1 <= start <= stop:
        raise ValueError(f"Need 1 <= `start` <= `stop`, got {start} and {stop}.")
    return np.unique(np.geomspace(start, stop, num_points).round().astype(np.int64))


def regret_slope(cumulative: FloatArray, start: int = 1_000, num_points: int = 50) -> float:
    """Power-law exponent of a cumulative regret curve, fitted on log-spaced steps from `start`
    (shrunk to a tenth of the horizon on short runs) to the horizon. Step `t` reads entry `t - 1`.
    NaN when fewer than ten positive points remain.
    """
    horizon = len(cumulative)
    if horizon == 0:
        return float("nan")
    start = start if start < horizon else max(1, horizon // 10)
    t = log_spaced_steps(start, horizon, num_points)
    values = np.asarray(cumulative, dtype=float)[t - 1]
    positive = values > 0
    if positive.sum() < MIN_FIT_POINTS:
        logger.warning("Regret slope is undefined: fewer than ten positive points on the regret curve.")
        return float("nan")
    return fit_power_law_exponent(t[positive], values[positive])


def suboptimality_series(records: Sequence[MetricsRecord], window: int) -> Tuple[np.ndarray, np.ndarray]:
    """Window means of the per-step gap between the best achievable and the policy's expected
    satisfaction. A trailing partial window is dropped.

    Returns:
        Tuple of (steps, gaps) where each step is the number of steps seen at the window's end.
    """
    if window <= 0:
        raise ValueError(f"`window` must be > 0, got {window}.")
    num_windows = len(records) // window
    gaps = np.array([r.regret_inst for r in records[: num_windows * window]], dtype=float)
    steps = np.arange(1, num_windows + 1) * window
    return steps, gaps.reshape(num_windows, window).mean(axis=1)


def recovery_time(
    series: Sequence[float],
    change_point: int,
    window: int,
    fraction: float = 0.9,
    floor: Optional[float] = 0.0,
) -> Optional[int]:
    """Steps after `change_point` until the trailing `window` mean of `series` regains `fraction`
    of the distance from `floor` to its plateau over the `window` steps before the change. Only
    windows lying entirely after the change count. None when it never recovers.

    With `floor=0` the threshold is `fraction * plateau`. With `floor=None` the floor is the mean of
    the first full window after the change, the shock level, so that series living in a narrow band
    (satisfaction near 0.5) still resolve the recovery.
    """
    if window <= 0:
        raise ValueError(f"`window` must be > 0, got {window}.")
    if not window <= change_point <= len(series):
        raise ValueError(f"`change_point` must be in [{window}, {len(series)}], got {change_point}.")
    if not 0 < fraction <= 1:
        raise ValueError(f"`fraction` must be in (0, 1], got {fraction}.")

    values = pd.Series(np.asarray(series, dtype=float))
    if len(values) - change_point < window:
        return None
    plateau = values.iloc[change_point - window : change_point].mean()
    after = values.iloc[change_point:].rolling(window).mean()
    if floor is None:
        floor = float(after.iloc[window - 1])
    recovered = after[after >= floor + fraction * (plateau - floor)]
    if recovered.empty:
        return None
    return int(recovered.index[0]) + 1 - change_point
