"""Per-block energy identity for the localized system.

For each block ``q`` the localized equations give

    1/2 d/dt (|D_q m|^2 + |D_q u|^2) + a |D_q u|^2
        = 1/2 int div u (|D_q m|^2 + |D_q u|^2)
        + int ([u, D_q].grad m  D_q m + [u, D_q].grad u . D_q u)
        - (gamma-1)/2 [ - int D_q m (grad m . D_q u)
                        + int [D_q, m] grad m . D_q u
                        + int [D_q, m] div u  D_q m ]

(``D_q`` the dyadic block, norms in L^2).  The left side is taken from a
centered time difference of three consecutive states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..euler.dynamics import FULL, Terms
from ..euler.model import PhysicalParams, State
from ..lp.grid import Field, VectorField, advect, divergence, multiply, spectral_gradient
from ..lp.partition import DyadicPartition, dyadic_block


def _integral(f: np.ndarray, grid) -> float:
    return float(np.sum(f) * grid.cell_volume)


def _sq(f: Field | VectorField) -> np.ndarray:
    if isinstance(f, VectorField):
        return sum(c.values**2 for c in f)
    return f.values**2


def block_energy(part: DyadicPartition, s: State, q: int) -> float:
    """``1/2 (||D_q m||^2 + ||D_q u||^2)``."""
    grid = part.grid
    return 0.5 * (_integral(_sq(dyadic_block(part, s.m, q)), grid)
                  + _integral(_sq(dyadic_block(part, s.u, q)), grid))


def _u_commutator(part, u: VectorField, g: Field, q: int, dealiased: bool) -> Field:
    """``[u, D_q] . grad g = u . D_q grad g - D_q (u . grad g)``."""
    return (advect(u, dyadic_block(part, g, q), dealiased)
            - dyadic_block(part, advect(u, g, dealiased), q))


def _m_commutator_left(part, m: Field, g: Field, q: int, dealiased: bool) -> Field:
    """``[D_q, m] g = D_q (m g) - m D_q g``."""
    return (dyadic_block(part, multiply(m, g, dealiased), q)
            - multiply(m, dyadic_block(part, g, q), dealiased))


def block_budget_rhs(part: DyadicPartition, s: State, params: PhysicalParams, q: int,
                     terms: Terms = FULL, dealiased: bool = True) -> float:
    """Right side of the block identity, restricted to the active nonlinear terms.

    With both quadratic pressure terms active the regrouped commutator form is
    used; with only one, that term enters directly as ``-kappa int D_q(..) D_q(..)``.
    """
    grid = part.grid
    m, u = s.m, s.u
    dm, du = dyadic_block(part, m, q), dyadic_block(part, u, q)
    div_u = divergence(u)
    grad_m = spectral_gradient(m)

    total = 0.0
    if terms.advect_m:
        total += 0.5 * _integral(div_u.values * _sq(dm), grid)
        total += _integral(_u_commutator(part, u, m, q, dealiased).values * dm.values, grid)
    if terms.advect_u:
        total += 0.5 * _integral(div_u.values * _sq(du), grid)
        total += sum(_integral(_u_commutator(part, u, ui, q, dealiased).values * dui.values, grid)
                     for ui, dui in zip(u, du))
    if params.isothermal:
        return total
    kappa = params.kappa
    if terms.compress_m and terms.pressure_u:
        cross = -_integral(dm.values * sum(g.values * c.values for g, c in zip(grad_m, du)), grid)
        cross += sum(_integral(_m_commutator_left(part, m, g, q, dealiased).values * c.values, grid)
                     for g, c in zip(grad_m, du))
        cross += _integral(_m_commutator_left(part, m, div_u, q, dealiased).values * dm.values,
                           grid)
        return total - kappa * cross
    if terms.compress_m:
        block = dyadic_block(part, multiply(m, div_u, dealiased), q)
        total -= kappa * _integral(block.values * dm.values, grid)
    if terms.pressure_u:
        total -= kappa * sum(
            _integral(dyadic_block(part, multiply(m, g, dealiased), q).values * c.values, grid)
            for g, c in zip(grad_m, du))
    return total


@dataclass
class BudgetResult:
    q: int
    lhs: float
    rhs: float
    residual: float
    scale: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def block_energy_budget(prev: State, mid: State, nxt: State, dt: float,
                        params: PhysicalParams, part: DyadicPartition, q: int,
                        floor: float = 1e-300, terms: Terms = FULL,
                        dealiased: bool = True) -> BudgetResult:
    """Closure of the block identity at the middle state.

    The residual is normalized by the largest magnitude among the identity's
    own terms (the time derivative, the damping term, both sides), so that a
    small right side cancelling two large left-side terms is not divided by
    itself.
    """
    rate = (block_energy(part, nxt, q) - block_energy(part, prev, q)) / (2 * dt)
    du = dyadic_block(part, mid.u, q)
    damping = params.a * _integral(_sq(du), part.grid)
    lhs = rate + damping
    rhs = block_budget_rhs(part, mid, params, q, terms, dealiased)
    scale = max(abs(lhs), abs(rhs), abs(rate), abs(damping), floor)
    return BudgetResult(q, lhs, rhs, abs(lhs - rhs) / scale, scale)


FLOOR_REL = 1e-8


def budget_scan(states: list[State], dt: float, params: PhysicalParams,
                part: DyadicPartition, floor_rel: float = FLOOR_REL,
                terms: Terms = FULL) -> list[BudgetResult]:
    """Budget at the middle of three consecutive states for every block.

    Blocks carrying roundoff-level energy are judged against ``floor_rel``
    times the largest per-block scale rather than their own.
    """
    prev, mid, nxt = states
    raw = [block_energy_budget(prev, mid, nxt, dt, params, part, q, terms=terms)
           for q in part.indices]
    floor = floor_rel * max(r.scale for r in raw)
    out = []
    for r in raw:
        scale = max(r.scale, floor)
        out.append(BudgetResult(r.q, r.lhs, r.rhs, abs(r.lhs - r.rhs) / scale, scale))
    return out
