import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import band_limited
from besovlab.errors import PositivityLost
from besovlab.euler import (
    ISENTROPIC,
    ISOTHERMAL,
    PhysicalParams,
    State,
    check_positivity,
    density,
    from_symmetric,
    positivity_margin,
    sound_speed,
    to_symmetric,
)
from besovlab.lp import Field, VectorField, make_grid


class TestParams:
    def test_defaults(self):
        p = PhysicalParams()
        assert p.psi_bar == pytest.approx(math.sqrt(1.4))
        assert p.kappa == pytest.approx(0.2)
        assert p.branch == ISENTROPIC

    def test_psi_bar_with_background(self):
        p = PhysicalParams(A=2.0, gamma=3.0, n_bar=4.0)
        assert p.psi_bar == pytest.approx(math.sqrt(6.0) * 4.0)

    def test_isothermal(self):
        p = PhysicalParams(gamma=1.0, A=4.0)
        assert p.isothermal and p.branch == ISOTHERMAL
        assert p.wave_speed == 2.0

    @pytest.mark.parametrize("kw", [dict(A=0), dict(a=0), dict(n_bar=-1), dict(gamma=0.9),
                                    dict(gamma=1 + 1e-10)])
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            PhysicalParams(**kw)


class TestTransforms:
    @settings(max_examples=20, deadline=None)
    @given(gamma=st.floats(1.05, 3.0), nbar=st.floats(0.2, 5.0), A=st.floats(0.1, 10.0))
    def test_round_trip(self, gamma, nbar, A):
        g = make_grid(1, 16)
        p = PhysicalParams(A=A, gamma=gamma, n_bar=nbar)
        n = Field(g, values=nbar * (1 + 0.3 * np.sin(g.points[0])))
        s = to_symmetric(n, VectorField.zeros(g), p)
        back, _ = from_symmetric(s, p)
        np.testing.assert_allclose(back.values, n.values, rtol=1e-11)

    def test_background_maps_to_zero(self):
        g = make_grid(2, 8)
        p = PhysicalParams(gamma=2.0, n_bar=3.0)
        s = to_symmetric(Field.constant(g, 3.0), VectorField.zeros(g), p)
        assert s.m.sup() < 1e-14

    def test_isothermal_routing(self):
        g = make_grid(1, 16)
        p = PhysicalParams(gamma=1.0, A=4.0, n_bar=2.0)
        n = Field(g, values=2.0 * np.exp(0.1 * np.cos(g.points[0])))
        s = to_symmetric(n, VectorField.zeros(g), p)
        assert s.branch == ISOTHERMAL
        np.testing.assert_allclose(s.m.values, 2.0 * 0.1 * np.cos(g.points[0]), atol=1e-14)
        np.testing.assert_allclose(density(s, p).values, n.values, rtol=1e-14)
        assert positivity_margin(s, p) == math.inf

    def test_sound_speed_needs_positive_density(self):
        g = make_grid(1, 8)
        with pytest.raises(PositivityLost):
            sound_speed(Field.constant(g, -1.0), PhysicalParams())

    def test_positivity_margin(self):
        g = make_grid(1, 8)
        p = PhysicalParams(gamma=3.0)  # kappa = 1
        s = State(Field.constant(g, -p.psi_bar), VectorField.zeros(g))
        assert positivity_margin(s, p) == pytest.approx(0.0, abs=1e-15)
        with pytest.raises(PositivityLost):
            check_positivity(s, p)


class TestState:
    def test_algebra(self, grid2d):
        s = State(band_limited(grid2d, 1), VectorField([band_limited(grid2d, 2)] * 2))
        z = s - s
        assert z.sup() == 0
        assert (2 * s).sup() == pytest.approx(2 * s.sup())

    def test_shape_validation(self, grid2d):
        with pytest.raises(ValueError):
            State(Field.zeros(grid2d), VectorField([Field.zeros(grid2d)]))
