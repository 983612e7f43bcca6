"""Fixed-step simulation driver with diagnostic recording."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import PositivityLost
from ..lp.grid import Grid, make_grid
from ..lp.partition import build_partition
from .dynamics import FULL, Terms, cfl_dt, step_rk4
from .initial import random_band_limited_ic, single_mode_ic
from .model import PhysicalParams, State

COMPLETED = "completed"
BLOWUP = "blowup"
POSITIVITY_LOST = "positivity_lost"


@dataclass(frozen=True)
class ICSpec:
    kind: str = "random"
    amplitude: float = 1e-4
    band: tuple[float, float] = (1.0, 4.0)
    seed: int = 0
    mode: tuple[int, ...] | None = None
    component: str = "m"

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be non-negative, got {self.amplitude}")


@dataclass(frozen=True)
class SimConfig:
    grid: Grid
    params: PhysicalParams
    t_end: float
    ic: ICSpec = ICSpec()
    cfl: float = 0.5
    dt: float | None = None
    dealias: bool = True
    record_every: int = 1
    blowup_threshold: float | None = None
    terms: Terms = FULL
    sigma: float | None = None
    eps: float = 0.1
    eps_prime: float = 0.05
    keep_states: bool = False

    def __post_init__(self) -> None:
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @property
    def sigma_value(self) -> float:
        return 1.0 + self.grid.dim / 2.0 if self.sigma is None else self.sigma

    @property
    def threshold(self) -> float:
        if self.blowup_threshold is not None:
            return self.blowup_threshold
        return 1e3 * self.ic.amplitude if self.ic.amplitude > 0 else math.inf


@dataclass
class Trajectory:
    config: SimConfig
    records: list = field(default_factory=list)
    status: str = COMPLETED
    dt: float = 0.0
    steps: int = 0
    states: list[State] | None = None
    message: str = ""

    @property
    def times(self) -> list[float]:
        return [r.t for r in self.records]

    def series(self, name: str) -> list[float]:
        return [getattr(r, name) for r in self.records]


def initial_state(cfg: SimConfig) -> State:
    ic = cfg.ic
    if ic.kind == "mode":
        mode = ic.mode or (1,) + (0,) * (cfg.grid.dim - 1)
        return single_mode_ic(cfg.grid, mode, ic.amplitude, cfg.params, ic.component)
    return random_band_limited_ic(cfg.grid, ic.amplitude, ic.band, ic.seed, cfg.params, ic.kind)


def simulate(cfg: SimConfig, state: State | None = None) -> Trajectory:
    """Integrate to ``t_end`` with a fixed step, recording diagnostics.

    The step is the CFL step of the initial state, shrunk so that an integer
    number of steps lands on ``t_end``.  Stops early on a sup-norm breach
    (``blowup``) or loss of positivity.
    """
    from ..estimates.diagnostics import record_diagnostics

    s = initial_state(cfg) if state is None else state
    part = build_partition(cfg.grid)
    params = cfg.params

    def record(st: State, t: float):
        return record_diagnostics(st, t, params, part, cfg.sigma_value, cfg.eps,
                                  cfg.eps_prime, cfg.terms, cfg.dealias)

    dt0 = cfg.dt if cfg.dt is not None else cfl_dt(s, params, cfg.grid, cfg.cfl)
    n_steps = max(1, math.ceil(cfg.t_end / dt0 - 1e-9))
    dt = cfg.t_end / n_steps
    traj = Trajectory(cfg, dt=dt, states=[] if cfg.keep_states else None)

    def keep(st: State, t: float) -> None:
        traj.records.append(record(st, t))
        if traj.states is not None:
            traj.states.append(st)

    keep(s, 0.0)
    if not s.sup() < cfg.threshold:
        traj.status = BLOWUP
        traj.message = f"initial sup norm {s.sup():.3e} >= threshold {cfg.threshold:.3e}"
        return traj

    for i in range(1, n_steps + 1):
        t = i * dt
        try:
            s = step_rk4(s, params, dt, cfg.terms, cfg.dealias)
        except PositivityLost as exc:
            traj.status = POSITIVITY_LOST
            traj.message = str(exc)
            traj.steps = i
            return traj
        traj.steps = i
        sup = s.sup()
        if not sup < cfg.threshold:
            keep(s, t)
            traj.status = BLOWUP
            traj.message = f"sup norm {sup:.3e} >= threshold {cfg.threshold:.3e} at t={t:.6g}"
            return traj
        if i % cfg.record_every == 0 or i == n_steps:
            keep(s, t)
    return traj


def default_config(dim: int = 3, points: int = 32, **kw) -> SimConfig:
    return SimConfig(grid=make_grid(dim, points), params=kw.pop("params", PhysicalParams()), **kw)
