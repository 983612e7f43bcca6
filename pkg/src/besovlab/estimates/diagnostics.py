"""Energy, dissipation and the per-record diagnostic bundle.

``U = (m, u)`` and ``U_t`` is recovered algebraically from ``U`` through the
evolution equations.  Vector quantities are measured by the root-sum-square
over components, so ``||(m, u)||^2 = ||m||^2 + ||u||^2`` in every ``B_{2,2}``
norm used here.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..euler.dynamics import FULL, Terms, tangent, vorticity
from ..euler.model import PhysicalParams, State, density
from ..lp.grid import spectral_gradient
from ..lp.partition import DyadicPartition, besov_from_blocks, block_l2_norms, block_lp_norms

EPS = 0.1
EPS_PRIME = 0.05


def critical_sigma(dim: int) -> float:
    return 1.0 + dim / 2.0


def time_derivative_state(s: State, params: PhysicalParams, terms: Terms = FULL,
                          dealiased: bool = True) -> State:
    """``U_t`` from ``U`` via the evolution equations (no time differencing)."""
    return tangent(s, params, terms, dealiased)


def _state_blocks(part: DyadicPartition, s: State, quadrature: bool = False) -> np.ndarray:
    if quadrature:
        bm = block_lp_norms(part, s.m, 2, quadrature=True)
        bu = block_lp_norms(part, s.u, 2, quadrature=True)
    else:
        bm, bu = block_l2_norms(part, s.m), block_l2_norms(part, s.u)
    return np.sqrt(bm**2 + bu**2)


def state_besov(part: DyadicPartition, s: State, smoothness: float, r: float = 2.0,
                quadrature: bool = False) -> float:
    """``||(m, u)||_{B^s_{2,r}}``."""
    return besov_from_blocks(_state_blocks(part, s, quadrature), smoothness, r)


def energy_functional(s: State, params: PhysicalParams, sigma: float, eps: float,
                      part: DyadicPartition, terms: Terms = FULL, ut: State | None = None,
                      quadrature: bool = False) -> float:
    """``||U||^2_{B^{sigma+eps}_{2,2}} + ||U_t||^2_{B^{sigma-1+eps}_{2,2}}``."""
    if ut is None:
        ut = time_derivative_state(s, params, terms)
    return (state_besov(part, s, sigma + eps, quadrature=quadrature) ** 2
            + state_besov(part, ut, sigma - 1 + eps, quadrature=quadrature) ** 2)


def energy_from_block_sums(s: State, params: PhysicalParams, sigma: float, eps: float,
                           part: DyadicPartition, terms: Terms = FULL) -> float:
    """Same functional reassembled mode by mode from spectral weights.

    Each Fourier coefficient carries weight ``sum_q 2^{2qs} table_q(k)^2``;
    summing weighted coefficients avoids the per-block norm routine.
    """
    ut = time_derivative_state(s, params, terms)
    grid = part.grid

    def weighted(state: State, smooth: float) -> float:
        w = sum(2.0 ** (2 * q * smooth) * part.table(q) ** 2 for q in part.indices)
        comps = (state.m, *state.u)
        total = sum(np.sum(grid.parseval_weights * w * np.abs(c.spectrum) ** 2) for c in comps)
        return float(total * grid.volume / grid.n ** (2 * grid.dim))

    return weighted(s, sigma + eps) + weighted(ut, sigma - 1 + eps)


def dissipation_functional(s: State, params: PhysicalParams, sigma: float, eps: float,
                           part: DyadicPartition, terms: Terms = FULL,
                           ut: State | None = None) -> float:
    """``||u||^2_{B^{sigma+eps}} + ||grad m||^2_{B^{sigma-1+eps}} + ||U_t||^2_{B^{sigma-1+eps}}``."""
    if ut is None:
        ut = time_derivative_state(s, params, terms)
    u_part = besov_from_blocks(block_l2_norms(part, s.u), sigma + eps, 2) ** 2
    gm = besov_from_blocks(block_l2_norms(part, spectral_gradient(s.m)), sigma - 1 + eps, 2) ** 2
    return u_part + gm + state_besov(part, ut, sigma - 1 + eps) ** 2


@dataclass
class DiagnosticsRecord:
    t: float
    besov_U: float
    besov_Ut: float
    energy: float
    dissipation: float
    vorticity_norm: float | None
    grad_m_norm: float
    u_norm: float
    norm_sigma21: float
    min_density: float
    sup_m: float
    sup_u: float
    block_energies: list[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def record_diagnostics(s: State, t: float, params: PhysicalParams, part: DyadicPartition,
                       sigma: float | None = None, eps: float = EPS, eps_prime: float = EPS_PRIME,
                       terms: Terms = FULL, dealiased: bool = True) -> DiagnosticsRecord:
    dim = s.grid.dim
    if sigma is None:
        sigma = critical_sigma(dim)
    ut = time_derivative_state(s, params, terms, dealiased)
    bm, bu = block_l2_norms(part, s.m), block_l2_norms(part, s.u)
    bU = np.sqrt(bm**2 + bu**2)
    besov_U = besov_from_blocks(bU, sigma + eps, 2)
    besov_Ut = state_besov(part, ut, sigma - 1 + eps)
    grad_m_blocks = block_l2_norms(part, spectral_gradient(s.m))
    dissipation = (besov_from_blocks(bu, sigma + eps, 2) ** 2
                   + besov_from_blocks(grad_m_blocks, sigma - 1 + eps, 2) ** 2
                   + besov_Ut**2)
    vort = None
    if dim > 1:
        vort = besov_from_blocks(block_l2_norms(part, vorticity(s.u)), sigma - 1, 1)
    try:
        min_density = float(np.min(density(s, params).values))
    except ArithmeticError:
        min_density = math.nan
    return DiagnosticsRecord(
        t=float(t),
        besov_U=besov_U,
        besov_Ut=besov_Ut,
        energy=besov_U**2 + besov_Ut**2,
        dissipation=dissipation,
        vorticity_norm=vort,
        grad_m_norm=besov_from_blocks(grad_m_blocks, sigma - 1 + eps_prime, 2),
        u_norm=besov_from_blocks(bu, sigma + eps_prime, 2),
        norm_sigma21=besov_from_blocks(bU, sigma, 1),
        min_density=min_density,
        sup_m=s.m.sup(),
        sup_u=s.u.sup(),
        block_energies=[float(x) for x in bU**2],
    )
