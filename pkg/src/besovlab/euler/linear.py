"""Closed-form evolution of one Fourier mode of the linearized system.

About the rest state the coefficients of ``exp(i k.x)`` obey

    m'     = -i c |k| u_par
    u_par' = -i c |k| m - a u_par
    u_perp' = -a u_perp

with ``c`` the background sound speed.  The acoustic pair is solved through
``exp(Mt) = exp(-a t/2) [cosh(d t) I + sinh(d t)/d (M + a/2 I)]`` where
``d^2 = a^2/4 - c^2 |k|^2``; the critically damped case ``d = 0`` reduces to
``exp(-a t/2) [I + t (M + a/2 I)]``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .model import PhysicalParams


def acoustic_eigenvalues(kmag: float, params: PhysicalParams) -> tuple[complex, complex]:
    a, c = params.a, params.wave_speed
    root = cmath.sqrt(a * a - 4 * c * c * kmag * kmag)
    return (-a + root) / 2, (-a - root) / 2


def acoustic_propagator(kmag: float, params: PhysicalParams, t: float) -> np.ndarray:
    """2x2 matrix advancing ``(m, u_par)`` coefficients by time ``t``."""
    a, beta = params.a, params.wave_speed * kmag
    shifted = np.array([[a / 2, -1j * beta], [-1j * beta, -a / 2]])
    d2 = a * a / 4 - beta * beta
    if d2 == 0:
        return math.exp(-a * t / 2) * (np.eye(2) + t * shifted)
    d = cmath.sqrt(d2)
    return cmath.exp(-a * t / 2) * (cmath.cosh(d * t) * np.eye(2)
                                    + cmath.sinh(d * t) / d * shifted)


def linear_mode_solution(k, params: PhysicalParams, m0: complex, u0_parallel: complex,
                         u0_perp, t: float):
    """Evolve one mode; returns ``(m, u_parallel, u_perp)`` coefficients at ``t``."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    kmag = float(np.linalg.norm(k))
    if kmag == 0:
        raise ValueError("linear_mode_solution needs a nonzero wavevector")
    prop = acoustic_propagator(kmag, params, t)
    m, u_par = prop @ np.array([m0, u0_parallel], dtype=complex)
    u_perp = np.asarray(u0_perp, dtype=complex) * math.exp(-params.a * t)
    return complex(m), complex(u_par), u_perp
