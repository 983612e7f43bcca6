"""Energy inequality along a trajectory."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MONOTONE_TOL = 1e-6


@dataclass
class MonotonicityReport:
    holds: bool
    mu_fit: float
    mu_cap: float
    max_step_increase: float
    non_increasing: bool
    tol: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def cumulative_dissipation(times, dissipation) -> np.ndarray:
    """Trapezoidal running integral of D, zero at the first record."""
    t = np.asarray(times, dtype=float)
    d = np.asarray(dissipation, dtype=float)
    inc = 0.5 * (d[1:] + d[:-1]) * np.diff(t)
    return np.concatenate([[0.0], np.cumsum(inc)])


def inequality_holds(energy, integral, mu: float, tol: float = MONOTONE_TOL) -> bool:
    e = np.asarray(energy, dtype=float)
    return bool(np.all(e + mu * integral <= e[0] * (1 + tol)))


def check_energy_monotonicity(traj, tol: float = MONOTONE_TOL, mu_cap: float | None = None,
                              rel: float = 1e-3) -> MonotonicityReport:
    """Largest ``mu`` in ``[0, a]`` with ``E(t) + mu int_0^t D <= E(0)(1 + tol)``.

    Bisection stops at relative width ``rel``.  ``holds`` means the
    inequality chain holds for that ``mu``; a chain that fails even at
    ``mu = 0`` reports ``holds = False`` and ``mu_fit = 0``.
    """
    if len(traj.records) < 3:
        raise ValueError("energy check needs at least three records")
    if mu_cap is None:
        mu_cap = traj.config.params.a
    t = traj.times
    e = np.array(traj.series("energy"))
    integral = cumulative_dissipation(t, traj.series("dissipation"))
    steps = np.diff(e)
    max_inc = float(steps.max()) if steps.size else 0.0
    non_increasing = bool(max_inc <= tol * e[0])

    if not inequality_holds(e, integral, 0.0, tol):
        return MonotonicityReport(False, 0.0, mu_cap, max_inc, non_increasing, tol)
    if inequality_holds(e, integral, mu_cap, tol):
        return MonotonicityReport(True, mu_cap, mu_cap, max_inc, non_increasing, tol)
    lo, hi = 0.0, mu_cap
    while hi - lo > rel * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        if inequality_holds(e, integral, mid, tol):
            lo = mid
        else:
            hi = mid
    return MonotonicityReport(True, lo, mu_cap, max_inc, non_increasing, tol)
