"""Gas law, sound speed and the two changes of variables.

Isentropic gas (gamma > 1) uses the sound-speed variable
``m = 2/(gamma-1) * (psi(n) - psi_bar)`` with ``psi(n) = sqrt(p'(n))``;
the isothermal gas (gamma = 1) uses ``n_tilde = sqrt(A) * log(n / n_bar)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import PositivityLost
from ..lp.grid import Field, VectorField

ISENTROPIC = "isentropic"
ISOTHERMAL = "isothermal"

# below this, 2/(gamma-1) loses too many digits
GAMMA_GAP = 1e-8


@dataclass(frozen=True)
class PhysicalParams:
    """Pressure law ``p = A n^gamma``, damping ``a`` and background density."""

    A: float = 1.0
    gamma: float = 1.4
    a: float = 1.0
    n_bar: float = 1.0

    def __post_init__(self) -> None:
        if not self.A > 0:
            raise ValueError(f"A must be positive, got {self.A}")
        if not self.a > 0:
            raise ValueError(f"damping a must be positive, got {self.a}")
        if not self.n_bar > 0:
            raise ValueError(f"n_bar must be positive, got {self.n_bar}")
        if not self.gamma >= 1:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if 1 < self.gamma < 1 + GAMMA_GAP:
            raise ValueError(f"gamma={self.gamma!r} too close to 1; use gamma = 1 (isothermal)")

    @property
    def isothermal(self) -> bool:
        return self.gamma == 1

    @property
    def branch(self) -> str:
        return ISOTHERMAL if self.isothermal else ISENTROPIC

    @property
    def psi_bar(self) -> float:
        """Background sound speed ``sqrt(A gamma) n_bar^((gamma-1)/2)``."""
        return math.sqrt(self.A * self.gamma) * self.n_bar ** ((self.gamma - 1) / 2)

    @property
    def kappa(self) -> float:
        """Coefficient ``(gamma-1)/2`` of the quadratic terms."""
        return (self.gamma - 1) / 2

    @property
    def wave_speed(self) -> float:
        """Linear wave speed of the symmetrized system (``sqrt(A)`` if isothermal)."""
        return math.sqrt(self.A) if self.isothermal else self.psi_bar

    def pressure(self, n):
        return self.A * np.asarray(n) ** self.gamma


def _require_positive(n: Field) -> None:
    low = float(np.min(n.values))
    if not low > 0:
        raise PositivityLost(f"density must be positive, min = {low:.3e}")


def sound_speed(n: Field, params: PhysicalParams) -> Field:
    _require_positive(n)
    g = params.gamma
    return Field(n.grid, values=math.sqrt(params.A * g) * n.values ** ((g - 1) / 2))


@dataclass
class State:
    """Symmetric variables ``(m, u)``; ``m`` holds ``n_tilde`` on the isothermal branch."""

    m: Field
    u: VectorField
    branch: str = ISENTROPIC

    def __post_init__(self) -> None:
        if self.u.grid != self.m.grid:
            raise ValueError("m and u must share one grid")
        if len(self.u) != self.m.grid.dim:
            raise ValueError("velocity needs one component per dimension")

    @property
    def grid(self):
        return self.m.grid

    @classmethod
    def equilibrium(cls, grid, branch: str = ISENTROPIC) -> State:
        return cls(Field.zeros(grid), VectorField.zeros(grid), branch)

    def __add__(self, other: State) -> State:
        return State(self.m + other.m, self.u + other.u, self.branch)

    def __sub__(self, other: State) -> State:
        return State(self.m - other.m, self.u - other.u, self.branch)

    def __mul__(self, c: float) -> State:
        return State(self.m * c, self.u * c, self.branch)

    __rmul__ = __mul__

    def sup(self) -> float:
        return max(self.m.sup(), self.u.sup())

    def resample(self, grid) -> State:
        return State(self.m.resample(grid), self.u.resample(grid), self.branch)


def positivity_margin(s: State, params: PhysicalParams) -> float:
    """``min((gamma-1)/2 m + psi_bar)``; always positive on the isothermal branch."""
    if s.branch == ISOTHERMAL:
        return math.inf
    return float(np.min(params.kappa * s.m.values + params.psi_bar))


def check_positivity(s: State, params: PhysicalParams) -> None:
    margin = positivity_margin(s, params)
    if not margin > 0:
        raise PositivityLost(f"(gamma-1)/2 m + psi_bar reached {margin:.3e}")


def to_symmetric(n: Field, u: VectorField, params: PhysicalParams) -> State:
    if params.isothermal:
        return to_isothermal(n, u, params)
    psi = sound_speed(n, params)
    m = (psi - params.psi_bar) * (2.0 / (params.gamma - 1))
    return State(m, u, ISENTROPIC)


def from_symmetric(s: State, params: PhysicalParams) -> tuple[Field, VectorField]:
    if s.branch == ISOTHERMAL:
        return from_isothermal(s, params)
    check_positivity(s, params)
    g = params.gamma
    base = params.kappa * s.m.values + params.psi_bar
    n = base ** (2.0 / (g - 1)) / (params.A * g) ** (1.0 / (g - 1))
    return Field(s.grid, values=n), s.u


def to_isothermal(n: Field, u: VectorField, params: PhysicalParams) -> State:
    _require_positive(n)
    nt = math.sqrt(params.A) * (np.log(n.values) - math.log(params.n_bar))
    return State(Field(n.grid, values=nt), u, ISOTHERMAL)


def from_isothermal(s: State, params: PhysicalParams) -> tuple[Field, VectorField]:
    n = params.n_bar * np.exp(s.m.values / math.sqrt(params.A))
    return Field(s.grid, values=n), s.u


def density(s: State, params: PhysicalParams) -> Field:
    return from_symmetric(s, params)[0]
