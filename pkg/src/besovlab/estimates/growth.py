"""Riccati local-existence envelope and the Gronwall stability surrogate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..lp.partition import DyadicPartition, besov_from_blocks, block_l2_norms
from .energy import cumulative_dissipation

UNIQUENESS_TOL = 1e-10


def local_time_bound(lambda0: float, c_tilde: float) -> float:
    """Guaranteed existence time ``T0 = 1 / (2 C lambda0)``."""
    if not lambda0 > 0 or not c_tilde > 0:
        raise ValueError("lambda0 and c_tilde must be positive")
    return 1.0 / (2.0 * c_tilde * lambda0)


def riccati_envelope(t, lambda0: float, c_tilde: float):
    """``lambda0 / (1 - C t lambda0)``, the solution of ``y' = C y^2``, ``y(0) = lambda0``."""
    if not lambda0 > 0 or not c_tilde > 0:
        raise ValueError("lambda0 and c_tilde must be positive")
    t_arr = np.asarray(t, dtype=float)
    blow = 1.0 / (c_tilde * lambda0)
    if np.any(t_arr >= blow):
        raise ValueError(f"t reaches the Riccati blow-up time {blow:.6g}")
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    out = lambda0 / (1.0 - c_tilde * t_arr * lambda0)
    return float(out) if out.ndim == 0 else out


def fit_riccati_constant(times, norms, floor: float = 1e-12) -> float:
    """Smallest ``C`` with ``N(t) - N(0) <= C int_0^t N^2`` at every sample.

    This is the integrated form of ``N' <= C N^2``; ``floor`` keeps the
    constant positive for non-growing series.
    """
    n = np.asarray(norms, dtype=float)
    integral = cumulative_dissipation(times, n**2)[1:]
    growth = n[1:] - n[0]
    ok = integral > 0
    if not ok.any():
        return floor
    return max(floor, float(np.max(growth[ok] / integral[ok])))


@dataclass
class RiccatiReport:
    lambda0: float
    c_tilde: float
    t0: float
    envelope_at_t0: float
    holds: bool
    max_ratio: float
    checked_until: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def riccati_check(traj, c_tilde: float | None = None, lambda0: float | None = None
                  ) -> RiccatiReport:
    """Compare ``|U|_{B^sigma_{2,1}}`` with the envelope on ``[0, min(T0, t_end)]``.

    ``lambda0`` defaults to ``|U0|_{B^sigma_{2,1}} + 1`` and ``c_tilde`` to the
    fitted quadratic-growth constant of the run itself.
    """
    t = np.asarray(traj.times)
    n = np.asarray(traj.series("norm_sigma21"), dtype=float)
    if lambda0 is None:
        lambda0 = float(n[0]) + 1.0
    if c_tilde is None:
        c_tilde = fit_riccati_constant(t, n)
    t0 = local_time_bound(lambda0, c_tilde)
    keep = t <= t0
    env = riccati_envelope(t[keep], lambda0, c_tilde)
    ratio = n[keep] / env
    return RiccatiReport(lambda0, c_tilde, t0, riccati_envelope(t0, lambda0, c_tilde),
                         bool(np.all(ratio <= 1.0)), float(ratio.max()),
                         float(t[keep][-1]))


@dataclass
class StabilityReport:
    delta: list[float]
    integral: list[float]
    c_fit: float
    finite: bool
    identical: bool
    max_delta: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _check_compatible(traj1, traj2) -> None:
    c1, c2 = traj1.config, traj2.config
    if c1.grid != c2.grid:
        raise ValueError("trajectories live on different grids")
    if c1.params != c2.params:
        raise ValueError("trajectories use different physical parameters")
    if traj1.dt != traj2.dt or c1.record_every != c2.record_every:
        raise ValueError("trajectories use different steps or record cadence")
    if traj1.states is None or traj2.states is None:
        raise ValueError("stability check needs trajectories run with keep_states=True")
    if len(traj1.states) != len(traj2.states):
        raise ValueError("trajectories have different record counts")


def stability_divergence(traj1, traj2, part: DyadicPartition, sigma: float | None = None
                         ) -> StabilityReport:
    """Fit ``delta(t) <= delta(0) exp(C int (|U1|_{sigma,1} + |U2|_{sigma,1}))``.

    ``delta`` is ``|U1 - U2|_{B^{sigma-1}_{2,1}}``.  With ``delta(0) = 0`` the
    fit is skipped and ``identical`` reports whether ``delta <= 1e-10``
    throughout.
    """
    _check_compatible(traj1, traj2)
    if sigma is None:
        sigma = traj1.config.sigma_value

    def norm(s, smooth):
        bm, bu = block_l2_norms(part, s.m), block_l2_norms(part, s.u)
        return besov_from_blocks(np.sqrt(bm**2 + bu**2), smooth, 1)

    delta = np.array([norm(a - b, sigma - 1) for a, b in zip(traj1.states, traj2.states)])
    growth = np.array([norm(a, sigma) + norm(b, sigma)
                       for a, b in zip(traj1.states, traj2.states)])
    integral = cumulative_dissipation(traj1.times, growth)
    identical = bool(np.all(delta <= UNIQUENESS_TOL))
    c_fit = 0.0
    if delta[0] > 0:
        ok = integral[1:] > 0
        with np.errstate(divide="ignore"):
            logs = np.log(delta[1:][ok] / delta[0]) / integral[1:][ok]
        c_fit = float(logs.max()) if logs.size else 0.0
    return StabilityReport([float(x) for x in delta], [float(x) for x in integral], c_fit,
                           bool(math.isfinite(c_fit)), identical, float(delta.max()))
