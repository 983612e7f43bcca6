"""Pseudo-spectral right-hand sides, CFL control and RK4 stepping."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..lp.grid import Field, VectorField, advect, curl, divergence, multiply, spectral_gradient
from .model import ISENTROPIC, ISOTHERMAL, PhysicalParams, State, check_positivity


@dataclass(frozen=True)
class Terms:
    """Switches for the individual nonlinear terms."""

    advect_m: bool = True      # u . grad m
    compress_m: bool = True    # (gamma-1)/2 m div u
    advect_u: bool = True      # (u . grad) u
    pressure_u: bool = True    # (gamma-1)/2 m grad m

    @classmethod
    def linear(cls) -> Terms:
        return cls(False, False, False, False)

    @property
    def any(self) -> bool:
        return self.advect_m or self.compress_m or self.advect_u or self.pressure_u


FULL = Terms()
LINEAR = Terms.linear()


def _tangent(s: State, speed: float, kappa: float, a: float, terms: Terms,
             dealiased: bool) -> State:
    m, u = s.m, s.u
    div_u = divergence(u)
    grad_m = spectral_gradient(m)

    dm = div_u * (-speed)
    du = [g * (-speed) - c * a for g, c in zip(grad_m, u)]
    if terms.advect_m:
        dm = dm - advect(u, m, dealiased)
    if kappa and terms.compress_m:
        dm = dm - multiply(m, div_u, dealiased) * kappa
    if terms.advect_u:
        du = [d - advect(u, c, dealiased) for d, c in zip(du, u)]
    if kappa and terms.pressure_u:
        du = [d - multiply(m, g, dealiased) * kappa for d, g in zip(du, grad_m)]
    return State(dm, VectorField(du), s.branch)


def rhs(s: State, params: PhysicalParams, terms: Terms = FULL, dealiased: bool = True) -> State:
    """Time derivative of the isentropic symmetric system."""
    if s.branch != ISENTROPIC:
        raise ValueError("rhs expects an isentropic state; use rhs_isothermal")
    return _tangent(s, params.psi_bar, params.kappa, params.a, terms, dealiased)


def rhs_isothermal(s: State, params: PhysicalParams, terms: Terms = FULL,
                   dealiased: bool = True) -> State:
    """Time derivative of the log-density system (no (gamma-1)/2 terms)."""
    if s.branch != ISOTHERMAL:
        raise ValueError("rhs_isothermal expects an isothermal state")
    return _tangent(s, math.sqrt(params.A), 0.0, params.a, terms, dealiased)


def tangent(s: State, params: PhysicalParams, terms: Terms = FULL, dealiased: bool = True) -> State:
    if s.branch == ISOTHERMAL:
        return rhs_isothermal(s, params, terms, dealiased)
    return rhs(s, params, terms, dealiased)


def cfl_dt(s: State, params: PhysicalParams, grid, cfl: float) -> float:
    """Largest stable step: acoustic CFL limit, capped by ``cfl / a``."""
    if not 0 < cfl <= 1:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    kappa = 0.0 if s.branch == ISOTHERMAL else params.kappa
    speed = params.wave_speed + s.u.sup() + kappa * s.m.sup()
    return min(cfl * grid.spacing / speed, cfl / params.a)


def step_rk4(s: State, params: PhysicalParams, dt: float, terms: Terms = FULL,
             dealiased: bool = True, check: bool = True) -> State:
    """One classical fourth-order Runge-Kutta step."""
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    if dt == 0:
        return s
    k1 = tangent(s, params, terms, dealiased)
    k2 = tangent(s + k1 * (dt / 2), params, terms, dealiased)
    k3 = tangent(s + k2 * (dt / 2), params, terms, dealiased)
    k4 = tangent(s + k3 * dt, params, terms, dealiased)
    out = s + (k1 + k2 * 2 + k3 * 2 + k4) * (dt / 6)
    if check:
        check_positivity(out, params)
    return out


def vorticity(u: VectorField) -> Field | VectorField:
    if u.grid.dim == 1:
        raise ValueError("vorticity is undefined in one dimension")
    return curl(u)
