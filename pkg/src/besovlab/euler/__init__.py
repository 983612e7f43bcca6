"""Damped compressible Euler: model, symmetrizations, dynamics and simulation."""

from .dynamics import FULL, LINEAR, Terms, cfl_dt, rhs, rhs_isothermal, step_rk4, tangent, vorticity
from .initial import leray_project, random_band_limited_ic, single_mode_ic
from .linear import acoustic_eigenvalues, acoustic_propagator, linear_mode_solution
from .model import (
    ISENTROPIC,
    ISOTHERMAL,
    PhysicalParams,
    State,
    check_positivity,
    density,
    from_isothermal,
    from_symmetric,
    positivity_margin,
    sound_speed,
    to_isothermal,
    to_symmetric,
)
from .simulate import BLOWUP, COMPLETED, POSITIVITY_LOST, ICSpec, SimConfig, Trajectory, simulate
