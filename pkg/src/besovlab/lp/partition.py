"""Dyadic partition of unity and the Littlewood-Paley block operators.

The low-frequency cutoff ``chi`` equals 1 on ``|xi| <= 3/4``, vanishes for
``|xi| >= 4/3`` and ramps in between with the C-infinity step
``theta(t) = g(t) / (g(t) + g(1 - t))``, ``g(t) = exp(-1/t)``.  Shells are
``phi(xi) = chi(xi/2) - chi(xi)``, so that
``chi + sum_{q=0}^{Q} phi(2^-q xi) = chi(2^-(Q+1) xi)`` telescopes to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import AnyField, Field, Grid, VectorField, l2_from_spectrum, lp_norm, multiply

CHI_INNER = 3.0 / 4.0
CHI_OUTER = 4.0 / 3.0
SHELL_INNER = 3.0 / 4.0
SHELL_OUTER = 8.0 / 3.0


def smooth_step(t):
    """C-infinity step from 0 (t <= 0) to 1 (t >= 1)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        s = 1.0 - t
        b = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
    return a / (a + b)


def chi(r):
    """Radial profile of the low-frequency cutoff, evaluated at ``r = |xi|``."""
    t = (np.asarray(r, dtype=float) - CHI_INNER) / (CHI_OUTER - CHI_INNER)
    return 1.0 - smooth_step(t)


def phi(r):
    """Radial profile of the dyadic shell, supported in [3/4, 8/3]."""
    r = np.asarray(r, dtype=float)
    return chi(r / 2.0) - chi(r)


@dataclass(frozen=True)
class BesovSpec:
    s: float
    p: float = 2.0
    r: float = 2.0

    def __post_init__(self) -> None:
        if not self.p >= 1 or not self.r >= 1:
            raise ValueError(f"Besov exponents need p, r >= 1 (got p={self.p}, r={self.r})")


@dataclass(eq=False)
class DyadicPartition:
    """Tabulated ``chi`` and ``phi(2^-q .)`` on a grid's wavenumber lattice."""

    grid: Grid
    q_max: int
    chi_table: np.ndarray = field(repr=False)
    phi_tables: list[np.ndarray] = field(repr=False)
    tol: float
    residual: float

    @property
    def indices(self) -> range:
        return range(-1, self.q_max + 1)

    def table(self, q: int) -> np.ndarray:
        if q == -1:
            return self.chi_table
        if 0 <= q <= self.q_max:
            return self.phi_tables[q]
        raise IndexError(f"block index {q} outside [-1, {self.q_max}]")

    def table_or_zero(self, q: int):
        """Multiplier of block ``q``; indices outside the range act as zero."""
        if q < -1 or q > self.q_max:
            return 0.0
        return self.table(q)

    def cutoff_table(self, q: int) -> np.ndarray:
        """Multiplier of ``S_q`` (sum of blocks ``p <= q - 1``)."""
        if q <= -1:
            return np.zeros_like(self.chi_table)
        if q - 1 >= self.q_max:
            return np.ones_like(self.chi_table)
        return chi(self.grid.kmag / 2.0**q)


def partition_q_max(grid: Grid) -> int:
    """Smallest q with ``2^q * 3/4 > k_max``."""
    q = 0
    while 2.0**q * SHELL_INNER <= grid.k_max:
        q += 1
    return q


def build_partition(grid: Grid, tol: float = 1e-12) -> DyadicPartition:
    if not tol > 0:
        raise ValueError(f"partition tolerance must be positive, got {tol}")
    q_max = partition_q_max(grid)
    kmag = grid.kmag
    chi_table = chi(kmag)
    phi_tables = [phi(kmag / 2.0**q) for q in range(q_max + 1)]
    total = chi_table + sum(phi_tables)
    inside = kmag <= grid.k_max
    residual = float(np.max(np.abs(total[inside] - 1.0)))
    if residual > tol:
        raise ValueError(f"partition residual {residual:.3e} exceeds tol {tol:.3e}")
    return DyadicPartition(grid, q_max, chi_table, phi_tables, tol, residual)


def partition_report(part: DyadicPartition) -> dict:
    """Residuals of the partition invariants over the whole lattice."""
    tables = [part.chi_table, *part.phi_tables]
    kmag = part.grid.kmag
    inside = kmag <= part.grid.k_max
    total = sum(tables)
    chi_core = part.chi_table[kmag <= CHI_INNER]
    chi_tail = part.chi_table[kmag >= CHI_OUTER]
    shell_out = 0.0
    for q, t in enumerate(part.phi_tables):
        scaled = kmag / 2.0**q
        outside = (scaled < SHELL_INNER) | (scaled > SHELL_OUTER)
        if outside.any():
            shell_out = max(shell_out, float(np.max(np.abs(t[outside]))))
    lo = min(float(t.min()) for t in tables)
    hi = max(float(t.max()) for t in tables)
    return {
        "q_max": part.q_max,
        "partition_residual": float(np.max(np.abs(total[inside] - 1.0))),
        "chi_core_residual": float(np.max(np.abs(chi_core - 1.0))) if chi_core.size else 0.0,
        "chi_tail_max": float(np.max(np.abs(chi_tail))) if chi_tail.size else 0.0,
        "shell_leak_max": shell_out,
        "table_min": lo,
        "table_max": hi,
    }


# -- block operators ---------------------------------------------------------

def _apply(f: AnyField, multiplier) -> AnyField:
    if isinstance(f, VectorField):
        return f.map(lambda c: c.filtered(multiplier))
    return f.filtered(multiplier)


def _check_grid(part: DyadicPartition, f: AnyField) -> None:
    if f.grid != part.grid:
        raise ValueError("field and partition live on different grids")


def dyadic_block(part: DyadicPartition, f: AnyField, q: int) -> AnyField:
    """``Delta_q f``; ``q = -1`` is the low-frequency ball."""
    _check_grid(part, f)
    return _apply(f, part.table(q))


def modified_block(part: DyadicPartition, f: AnyField, q: int) -> AnyField:
    """``Delta_{q-1} + Delta_q + Delta_{q+1}`` with out-of-range blocks dropped."""
    _check_grid(part, f)
    mult = part.table_or_zero(q - 1) + part.table_or_zero(q) + part.table_or_zero(q + 1)
    return _apply(f, mult)


def low_cutoff(part: DyadicPartition, f: AnyField, q: int) -> AnyField:
    """``S_q f``, the sum of blocks ``p <= q - 1``."""
    if q < 0:
        raise ValueError(f"low cutoff index must be >= 0, got {q}")
    _check_grid(part, f)
    if q == 0:
        return _apply(f, part.chi_table)
    return _apply(f, part.cutoff_table(q))


def blocks(part: DyadicPartition, f: AnyField) -> list[AnyField]:
    return [dyadic_block(part, f, q) for q in part.indices]


def block_l2_norms(part: DyadicPartition, f: AnyField) -> np.ndarray:
    """``||Delta_q f||_{L^2}`` for q = -1..q_max via Parseval."""
    _check_grid(part, f)
    comps = f.components if isinstance(f, VectorField) else (f,)
    grid = part.grid
    out = np.empty(part.q_max + 2)
    for i, q in enumerate(part.indices):
        t = part.table(q)
        out[i] = math.sqrt(sum(l2_from_spectrum(t * c.spectrum, grid) ** 2 for c in comps))
    return out


def block_lp_norms(part: DyadicPartition, f: AnyField, p: float,
                   quadrature: bool = False) -> np.ndarray:
    """``||Delta_q f||_{L^p}``; p = 2 goes through Parseval unless ``quadrature``."""
    if p == 2 and not quadrature:
        return block_l2_norms(part, f)
    return np.array([lp_norm(dyadic_block(part, f, q), p) for q in part.indices])


def besov_from_blocks(norms: np.ndarray, s: float, r: float) -> float:
    weights = 2.0 ** (s * np.arange(-1, len(norms) - 1))
    terms = weights * norms
    if math.isinf(r):
        return float(terms.max())
    return float(np.sum(terms**r) ** (1.0 / r))


def besov_norm(part: DyadicPartition, f: AnyField, spec: BesovSpec) -> float:
    """Dyadic Besov norm truncated at ``q_max``; ``r = inf`` gives the sup form."""
    return besov_from_blocks(block_lp_norms(part, f, spec.p), spec.s, spec.r)


# -- Bony decomposition ------------------------------------------------------

def paraproduct(part: DyadicPartition, f: Field, g: Field, dealiased: bool = True) -> Field:
    """``T_f g = sum_q S_{q-1} f * Delta_q g``."""
    _check_grid(part, f)
    _check_grid(part, g)
    out = Field.zeros(part.grid)
    for q in range(1, part.q_max + 1):
        # S_{-1} f = 0, so q = 0 contributes nothing
        out = out + multiply(low_cutoff(part, f, q - 1), dyadic_block(part, g, q), dealiased)
    return out


def remainder(part: DyadicPartition, f: Field, g: Field, dealiased: bool = True) -> Field:
    """``R(f, g) = sum_q Delta_q f * (Delta_{q-1} + Delta_q + Delta_{q+1}) g``."""
    _check_grid(part, f)
    _check_grid(part, g)
    out = Field.zeros(part.grid)
    for q in part.indices:
        out = out + multiply(dyadic_block(part, f, q), modified_block(part, g, q), dealiased)
    return out


def commutator_block(part: DyadicPartition, f: Field, g: Field, q: int,
                     dealiased: bool = True) -> Field:
    """``[f, Delta_q] g = f * Delta_q g - Delta_q (f * g)``."""
    return (multiply(f, dyadic_block(part, g, q), dealiased)
            - dyadic_block(part, multiply(f, g, dealiased), q))
