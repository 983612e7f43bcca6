import math

import numpy as np
import pytest

from conftest import band_limited
from besovlab.estimates import (
    critical_sigma,
    dissipation_functional,
    energy_from_block_sums,
    energy_functional,
    record_diagnostics,
    time_derivative_state,
)
from besovlab.euler import PhysicalParams, State, random_band_limited_ic, rhs, step_rk4
from besovlab.lp import Field, VectorField, build_partition, make_grid


@pytest.fixture(scope="module")
def setup():
    g = make_grid(3, 16)
    p = PhysicalParams()
    return g, p, build_partition(g), random_band_limited_ic(g, 1e-3, (1, 4), 2, p)


class TestTimeDerivative:
    def test_matches_rhs_bitwise(self, setup):
        g, p, part, s = setup
        a, b = time_derivative_state(s, p), rhs(s, p)
        np.testing.assert_array_equal(a.m.values, b.m.values)

    def test_equilibrium(self, setup):
        g, p, _, _ = setup
        assert time_derivative_state(State.equilibrium(g), p).sup() == 0

    def test_finite_difference_order(self, setup):
        g, p, _, s = setup
        exact = time_derivative_state(s, p)
        errs = []
        for h in (0.02, 0.01):
            states = [s]
            for _ in range(4):
                states.append(step_rk4(states[-1], p, h))
            c = (-25, 48, -36, 16, -3)
            fd = states[0] * (c[0] / (12 * h))
            for ci, st in zip(c[1:], states[1:]):
                fd = fd + st * (ci / (12 * h))
            errs.append((fd - exact).sup())
        assert errs[0] / errs[1] > 12


class TestEnergy:
    def test_equilibrium(self, setup):
        g, p, part, _ = setup
        z = State.equilibrium(g)
        assert energy_functional(z, p, 2.5, 0.1, part) == 0
        assert dissipation_functional(z, p, 2.5, 0.1, part) == 0

    def test_constant_m(self, setup):
        g, p, part, _ = setup
        c = 0.01
        s = State(Field.constant(g, c), VectorField.zeros(g))
        sigma, eps = 2.5, 0.1
        expect = 2 ** (-2 * (sigma + eps)) * c**2 * g.volume
        assert energy_functional(s, p, sigma, eps, part) == pytest.approx(expect, rel=1e-13)
        assert dissipation_functional(s, p, sigma, eps, part) == pytest.approx(0.0, abs=1e-30)

    def test_two_summation_paths(self, setup):
        g, p, part, s = setup
        a = energy_functional(s, p, 2.5, 0.1, part)
        b = energy_from_block_sums(s, p, 2.5, 0.1, part)
        assert a == pytest.approx(b, rel=1e-10)

    def test_quadrature_path(self, setup):
        g, p, part, s = setup
        a = energy_functional(s, p, 2.5, 0.1, part)
        b = energy_functional(s, p, 2.5, 0.1, part, quadrature=True)
        assert a == pytest.approx(b, rel=1e-10)

    def test_dissipation_positive(self, setup):
        g, p, part, s = setup
        assert dissipation_functional(s, p, 2.5, 0.1, part) > 0


class TestRecord:
    def test_fields(self, setup):
        g, p, part, s = setup
        r = record_diagnostics(s, 0.0, p, part)
        assert r.energy == pytest.approx(r.besov_U**2 + r.besov_Ut**2, rel=1e-15)
        assert r.min_density > 0
        assert len(r.block_energies) == part.q_max + 2
        assert sum(r.block_energies) > 0
        assert all(v >= 0 for v in (r.dissipation, r.vorticity_norm, r.grad_m_norm, r.u_norm))
        assert set(r.as_dict()) >= {"t", "energy", "dissipation", "block_energies"}

    def test_1d_has_no_vorticity(self):
        g = make_grid(1, 16)
        s = State(band_limited(g, 1) * 1e-3, VectorField([band_limited(g, 2) * 1e-3]))
        r = record_diagnostics(s, 0.0, PhysicalParams(), build_partition(g))
        assert r.vorticity_norm is None

    def test_critical_sigma(self):
        assert critical_sigma(3) == 2.5 and critical_sigma(1) == 1.5
