"""Initial-condition generators."""

from __future__ import annotations

import numpy as np

from ..lp.grid import Field, Grid, VectorField, partial
from .model import PhysicalParams, State

KINDS = ("random", "vortex", "irrotational", "equilibrium")


def _band_mask(grid: Grid, band) -> np.ndarray:
    k_lo, k_hi = map(float, band)
    if k_lo < 0 or k_hi < k_lo:
        raise ValueError(f"invalid band {band}")
    limit = 2.0 / 3.0 * grid.k_max
    if k_hi > limit:
        raise ValueError(f"band upper edge {k_hi} exceeds dealiasing limit {limit:.4g}")
    mask = (grid.kmag >= k_lo) & (grid.kmag <= k_hi) & grid.dealias_mask
    if not mask.any():
        raise ValueError(f"band {band} contains no lattice wavenumbers")
    return mask


def _random_field(grid: Grid, mask: np.ndarray, rng: np.random.Generator) -> Field:
    shape = grid.spectral_shape
    spec = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * mask
    # round trip through samples enforces Hermitian symmetry on the k_last = 0 plane
    values = np.fft.irfftn(spec, s=grid.shape, axes=tuple(range(grid.dim)))
    return Field(grid, values=values)


def _scaled(f: Field, amplitude: float) -> Field:
    peak = f.sup()
    return f * (amplitude / peak) if peak > 0 else f


def _scaled_vec(u: VectorField, amplitude: float) -> VectorField:
    peak = u.sup()
    return u * (amplitude / peak) if peak > 0 else u


def leray_project(u: VectorField) -> VectorField:
    """Remove the gradient part of ``u`` (divergence-free projection)."""
    grid = u.grid
    k = grid.wavenumbers
    k2 = grid.kmag**2
    k2 = np.where(k2 == 0, 1.0, k2)
    kdotu = sum(kj * c.spectrum for kj, c in zip(k, u))
    return VectorField([Field(grid, spectrum=c.spectrum - kj * kdotu / k2) for kj, c in zip(k, u)])


def random_band_limited_ic(grid: Grid, amplitude: float, band, seed: int,
                           params: PhysicalParams, kind: str = "random") -> State:
    """Random smooth perturbation of the rest state.

    ``kind`` selects the structure: ``random`` (independent ``m`` and ``u``),
    ``vortex`` (divergence-free ``u``, ``m = 0``), ``irrotational``
    (``u`` a gradient, random ``m``) or ``equilibrium``.  Sup norms of the
    nonzero parts are rescaled to ``amplitude`` exactly.
    """
    if amplitude < 0:
        raise ValueError(f"amplitude must be non-negative, got {amplitude}")
    if kind not in KINDS:
        raise ValueError(f"unknown initial-condition kind {kind!r}; expected one of {KINDS}")
    branch = params.branch
    if amplitude == 0 or kind == "equilibrium":
        return State.equilibrium(grid, branch)
    mask = _band_mask(grid, band)
    rng = np.random.default_rng(seed)
    m = _random_field(grid, mask, rng)
    if kind == "irrotational":
        pot = _random_field(grid, mask, rng)
        u = VectorField([partial(pot, j) for j in range(grid.dim)])
    else:
        u = VectorField([_random_field(grid, mask, rng) for _ in range(grid.dim)])
    if kind == "vortex":
        if grid.dim == 1:
            raise ValueError("a divergence-free velocity needs dim >= 2")
        u = leray_project(u)
        m = Field.zeros(grid)
    return State(_scaled(m, amplitude), _scaled_vec(u, amplitude), branch)


def single_mode_ic(grid: Grid, mode, amplitude: float, params: PhysicalParams,
                   component: str = "m") -> State:
    """One cosine mode ``amplitude * cos(k.x)`` placed in ``m``, ``u_par`` or ``u_perp``.

    ``mode`` is the integer mode vector; ``k = 2 pi mode / L``.
    """
    mode = np.asarray(mode, dtype=float).reshape(grid.dim)
    k = grid.k0 * mode
    kmag = float(np.linalg.norm(k))
    if kmag == 0:
        raise ValueError("single mode needs a nonzero wavevector")
    phase = sum(kj * xj for kj, xj in zip(k, grid.points))
    wave = np.cos(phase)
    zero = Field.zeros(grid)
    if component == "m":
        return State(Field(grid, values=amplitude * wave), VectorField.zeros(grid), params.branch)
    if component == "parallel":
        direction = k / kmag
    elif component == "perp":
        if grid.dim == 1:
            raise ValueError("no transverse direction in one dimension")
        trial = np.eye(grid.dim)[int(np.argmin(np.abs(k)))]
        direction = trial - np.dot(trial, k) * k / kmag**2
        direction /= np.linalg.norm(direction)
    else:
        raise ValueError(f"unknown mode component {component!r}")
    u = VectorField([Field(grid, values=amplitude * dj * wave) for dj in direction])
    return State(zero, u, params.branch)
