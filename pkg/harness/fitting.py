# harness/fitting.py

import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, NamedTuple, Sequence

import numpy as np
from scipy import stats

from logger.logger_manager import LoggerManager

log = LoggerManager.get_logger()


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    slope_stderr: float
    intercept: float
    prefactor: float
    n_points: int

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def loglog_fit(x: Sequence[float], y: Sequence[float], min_points: int = 2) -> LogLogFit:
    """
    Power law y = prefactor * x^slope by least squares in log-log space. Non-positive and
    non-finite points are dropped.

    Raises:
        ValueError: If fewer than ``min_points`` usable points remain or x does not vary.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"x and y must have the same shape, got {x.shape} and {y.shape}.")
    valid = np.isfinite(x) & np.isfinite(y) & (x > 0) & (y > 0)
    n_points = int(np.count_nonzero(valid))
    if n_points < max(min_points, 2):
        raise ValueError(f"Log-log fit needs at least {max(min_points, 2)} positive points, got {n_points}.")
    log_x, log_y = np.log(x[valid]), np.log(y[valid])
    if np.ptp(log_x) == 0:
        raise ValueError("Log-log fit is degenerate: all x values are equal.")

    fit = stats.linregress(log_x, log_y)
    stderr = float(fit.stderr) if n_points > 2 else float('nan')
    return LogLogFit(slope=float(fit.slope), slope_stderr=stderr, intercept=float(fit.intercept),
                     prefactor=float(np.exp(fit.intercept)), n_points=n_points)


def quadratic_prefactor(n_atoms: Sequence[float], photons: Sequence[float]) -> float:
    """Least-squares c in photons = c N^2."""
    n = np.asarray(n_atoms, dtype=float)
    y = np.asarray(photons, dtype=float)
    valid = np.isfinite(n) & np.isfinite(y)
    if not np.any(valid):
        raise ValueError("No finite points for the quadratic prefactor.")
    n, y = n[valid], y[valid]
    return float(np.sum(y * n ** 2) / np.sum(n ** 4))


class Crossing(NamedTuple):
    x: float
    n_crossings: int
    monotone: bool


def locate_crossing(x: Sequence[float], y: Sequence[float], level: float) -> Crossing:
    """
    First crossing of ``y`` through ``level`` along increasing ``x``, linearly interpolated. Runs
    of points exactly at the level count as one crossing placed at their first point; touching
    or ending on the level without changing side is not a crossing. ``monotone`` is False when
    the curve crosses more than once; x is NaN when it never does.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be one-dimensional arrays of equal length.")
    order = np.argsort(x, kind='stable')
    x, y = x[order], y[order]
    valid = np.isfinite(y)
    x, y = x[valid], y[valid]

    side = np.sign(y - level)
    crossings = []
    previous = None     # last point off the level
    for i in range(len(x)):
        if side[i] == 0:
            continue
        if previous is not None and side[previous] != side[i]:
            if i == previous + 1:
                fraction = (level - y[previous]) / (y[i] - y[previous])
                crossings.append(float(x[previous] + fraction * (x[i] - x[previous])))
            else:
                crossings.append(float(x[previous + 1]))
        previous = i

    if not crossings:
        return Crossing(math.nan, 0, True)
    result = Crossing(crossings[0], len(crossings), len(crossings) == 1)
    if not result.monotone:
        log.warning(f"Curve crosses level {level:g} {len(crossings)} times; reporting the first crossing "
                    f"at x = {result.x:.4g}")
    return result
