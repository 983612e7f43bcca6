"""Decay-rate fits, vorticity and gradient decay checks, and the low-frequency GNS ratio."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lp.grid import Field, lp_norm, spectral_gradient
from ..lp.partition import DyadicPartition, build_partition, dyadic_block

VORTICITY_TOL = 1e-2
IRROTATIONAL_TOL = 1e-10


def fit_decay_rate(times, values, window: tuple[float, float] | None = None
                   ) -> tuple[float, float]:
    """Least-squares slope of ``log value`` against ``t``; returns ``(-slope, r^2)``.

    A series with no variation reports ``r^2 = 1``.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if window is not None:
        keep = (t >= window[0]) & (t <= window[1])
        t, v = t[keep], v[keep]
    if t.size < 5:
        raise ValueError(f"decay fit needs at least 5 points in the window, got {t.size}")
    if not np.all(v > 0):
        raise ValueError("decay fit needs strictly positive values")
    y = np.log(v)
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(-slope), r2


@dataclass
class VorticityDecayReport:
    holds: bool
    max_ratio: float
    tol: float
    rate: float | None
    r_squared: float | None
    omega0: float
    irrotational: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def vorticity_decay_check(traj, params=None, part: DyadicPartition | None = None,
                          tol: float = VORTICITY_TOL) -> VorticityDecayReport:
    """Check ``|w(t)| <= |w(0)| e^{-a t} (1 + tol)`` at every record.

    An initially curl-free run instead requires ``|w(t)| <= 1e-10``.  The
    fitted rate is reported when the series has at least five positive points.
    """
    cfg = traj.config
    if cfg.grid.dim != 3:
        raise ValueError(f"vorticity decay check needs dim 3, got {cfg.grid.dim}")
    a = (params or cfg.params).a
    t = np.asarray(traj.times)
    w = np.asarray(traj.series("vorticity_norm"), dtype=float)
    w0 = float(w[0])
    if w0 <= IRROTATIONAL_TOL:
        return VorticityDecayReport(bool(np.all(w <= IRROTATIONAL_TOL)), 0.0, tol,
                                    None, None, w0, True)
    ratio = w / (w0 * np.exp(-a * t))
    max_ratio = float(ratio.max())
    rate = r2 = None
    if t.size >= 5 and np.all(w > 0):
        rate, r2 = fit_decay_rate(t, w)
    return VorticityDecayReport(bool(max_ratio <= 1 + tol), max_ratio, tol, rate, r2, w0, False)


@dataclass
class GradDecayReport:
    holds: bool
    applicable: bool
    grad_m: list[float]
    u: list[float]
    final_over_initial: float | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def grad_m_decay_check(traj, sigma: float | None = None,
                       eps_prime: float | None = None) -> GradDecayReport:
    """Report ``|grad m|`` and ``|u|`` series; assert halving when ``t_end >= 10/a``.

    The halving claim rests on the spectral gap of the torus.  Norm indices
    are those the trajectory was recorded with; passing different ones is an
    error since the records cannot be re-measured.
    """
    cfg = traj.config
    if sigma is not None and sigma != cfg.sigma_value:
        raise ValueError("sigma differs from the one the trajectory was recorded with")
    if eps_prime is not None and eps_prime != cfg.eps_prime:
        raise ValueError("eps_prime differs from the one the trajectory was recorded with")
    g = [float(x) for x in traj.series("grad_m_norm")]
    u = [float(x) for x in traj.series("u_norm")]
    applicable = traj.times[-1] >= 10.0 / cfg.params.a * (1 - 1e-12)
    ratio = None if g[0] == 0 else g[-1] / g[0]
    holds = True
    if applicable and g[0] > 0:
        holds = g[-1] <= 0.5 * g[0]
    return GradDecayReport(bool(holds), bool(applicable), g, u, ratio)


def gns_check(f: Field, part: DyadicPartition | None = None, mean_tol: float = 1e-12) -> float:
    """``|D_{-1} f|_{L^6} / |grad D_{-1} f|_{L^2}`` for a mean-zero field in 3-D."""
    grid = f.grid
    if grid.dim != 3:
        raise ValueError(f"GNS ratio needs dim 3, got {grid.dim}")
    scale = max(f.sup(), 1e-300)
    if abs(f.mean()) > mean_tol * scale:
        raise ValueError(f"field has nonzero mean {f.mean():.3e}")
    part = part or build_partition(grid)
    low = dyadic_block(part, f, -1)
    denom = lp_norm(spectral_gradient(low), 2)
    if not denom > 0:
        raise ValueError("zero denominator: low-frequency gradient vanishes")
    return lp_norm(low, 6) / denom


def gns_scan(fields, part: DyadicPartition | None = None) -> float:
    """Largest GNS ratio over an ensemble of fields."""
    return max(gns_check(f, part) for f in fields)

