import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import band_limited
from besovlab.lp import (
    BesovSpec,
    Field,
    VectorField,
    besov_from_blocks,
    besov_norm,
    block_l2_norms,
    block_lp_norms,
    blocks,
    build_partition,
    commutator_block,
    dyadic_block,
    low_cutoff,
    make_grid,
    modified_block,
    multiply,
    paraproduct,
    partition_report,
    remainder,
    spectral_gradient,
)
from besovlab.lp.grid import lp_norm


@pytest.fixture(scope="module")
def part3():
    return build_partition(make_grid(3, 16))


class TestPartition:
    @pytest.mark.parametrize("dim,n", [(1, 8), (1, 64), (2, 64), (3, 32)])
    def test_residual(self, dim, n):
        part = build_partition(make_grid(dim, n))
        assert part.residual <= 1e-12
        rep = partition_report(part)
        assert rep["chi_core_residual"] <= 1e-15
        assert rep["chi_tail_max"] <= 1e-15
        assert rep["shell_leak_max"] <= 1e-15
        assert 0.0 <= rep["table_min"] and rep["table_max"] <= 1.0

    def test_tables_match_oracle(self):
        g = make_grid(2, 16)
        part = build_partition(g)
        for q in part.indices:
            full = oracles.block_multiplier(16, 2, q)
            np.testing.assert_allclose(part.table(q), full[:, : g.n // 2 + 1], atol=1e-15)

    def test_tolerance_validation(self):
        g = make_grid(1, 16)
        with pytest.raises(ValueError, match="positive"):
            build_partition(g, tol=0)

    def test_index_range(self, part3):
        with pytest.raises(IndexError):
            part3.table(part3.q_max + 1)
        assert isinstance(part3.table_or_zero(-2), float)

    def test_low_cutoff_is_sum_of_blocks(self, part3):
        f = band_limited(part3.grid, 0, k_hi=part3.grid.k_max)
        for q in range(0, part3.q_max + 2):
            acc = Field.zeros(part3.grid)
            for p in range(-1, min(q, part3.q_max + 1)):
                acc = acc + dyadic_block(part3, f, p)
            np.testing.assert_allclose(low_cutoff(part3, f, q).values, acc.values, atol=1e-13)
        with pytest.raises(ValueError):
            low_cutoff(part3, f, -1)

    def test_blocks_reconstruct(self, part3):
        f = band_limited(part3.grid, 1, k_hi=part3.grid.k_max)
        total = sum((b.values for b in blocks(part3, f)), np.zeros(part3.grid.shape))
        np.testing.assert_allclose(total, f.values, atol=1e-12)

    def test_almost_orthogonal(self, part3):
        f = band_limited(part3.grid, 2, k_hi=part3.grid.k_max)
        norm = lp_norm(f, 2)
        for p in part3.indices:
            for q in part3.indices:
                if abs(p - q) >= 2:
                    dd = dyadic_block(part3, dyadic_block(part3, f, q), p)
                    assert lp_norm(dd, 2) <= 1e-12 * norm

    def test_modified_block_drops_out_of_range(self, part3):
        f = band_limited(part3.grid, 3, k_hi=part3.grid.k_max)
        top = modified_block(part3, f, part3.q_max)
        expect = dyadic_block(part3, f, part3.q_max - 1) + dyadic_block(part3, f, part3.q_max)
        np.testing.assert_allclose(top.values, expect.values, atol=1e-13)


class TestBernstein:
    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_shell_bounds(self, seed):
        part = build_partition(make_grid(2, 32))
        f = band_limited(part.grid, seed, k_hi=part.grid.k_max)
        for q in range(0, part.q_max + 1):
            b = dyadic_block(part, f, q)
            nb = lp_norm(b, 2)
            if nb == 0:
                continue
            ratio = lp_norm(spectral_gradient(b), 2) / (2**q * nb)
            assert 0.75 - 1e-12 <= ratio <= 8 / 3 + 1e-12


class TestBesov:
    def test_r_ordering(self, part3):
        f = band_limited(part3.grid, 4, k_hi=6)
        n_inf = besov_norm(part3, f, BesovSpec(1.0, 2, math.inf))
        n_2 = besov_norm(part3, f, BesovSpec(1.0, 2, 2))
        n_1 = besov_norm(part3, f, BesovSpec(1.0, 2, 1))
        assert n_inf <= n_2 <= n_1

    def test_monotone_in_s(self, part3):
        f = band_limited(part3.grid, 5, k_lo=1, k_hi=6)
        vals = [besov_norm(part3, f, BesovSpec(s)) for s in (0.0, 0.5, 1.0, 2.0)]
        assert vals == sorted(vals)

    def test_l2_at_s0_r2_brackets_l2(self, part3):
        # B^0_{2,2} is equivalent to L^2 with constants from sum phi^2 in [1/2, 1]
        f = band_limited(part3.grid, 6, k_hi=part3.grid.k_max)
        b = besov_norm(part3, f, BesovSpec(0.0))
        assert math.sqrt(0.5) * lp_norm(f, 2) <= b <= lp_norm(f, 2) * (1 + 1e-12)

    def test_quadrature_matches_parseval(self, part3):
        f = band_limited(part3.grid, 7)
        np.testing.assert_allclose(block_lp_norms(part3, f, 2, quadrature=True),
                                   block_l2_norms(part3, f), rtol=1e-10, atol=1e-14)

    def test_vector_norm_is_rss(self, part3):
        f, g = band_limited(part3.grid, 8), band_limited(part3.grid, 9)
        u = VectorField([f, g, Field.zeros(part3.grid)])
        expect = np.sqrt(block_l2_norms(part3, f) ** 2 + block_l2_norms(part3, g) ** 2)
        np.testing.assert_allclose(block_l2_norms(part3, u), expect, rtol=1e-14)

    def test_bad_exponents(self):
        with pytest.raises(ValueError):
            BesovSpec(1.0, 0.5, 2)

    def test_from_blocks(self):
        norms = np.array([1.0, 1.0, 1.0])
        assert besov_from_blocks(norms, 1.0, 1) == pytest.approx(0.5 + 1 + 2)
        assert besov_from_blocks(norms, 1.0, math.inf) == 2.0

    def test_grid_mismatch(self, part3):
        with pytest.raises(ValueError):
            dyadic_block(part3, Field.zeros(make_grid(3, 8)), 0)


class TestBony:
    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_reconstruction(self, seed):
        part = build_partition(make_grid(2, 32))
        f = band_limited(part.grid, seed, k_hi=part.grid.k_max)
        g = band_limited(part.grid, seed + 1, k_hi=part.grid.k_max)
        fg = multiply(f, g, dealiased=False)
        total = (paraproduct(part, f, g, False) + paraproduct(part, g, f, False)
                 + remainder(part, f, g, False))
        assert lp_norm(total - fg, 2) <= 1e-10 * lp_norm(fg, 2)

    def test_paraproduct_matches_double_sum(self):
        part = build_partition(make_grid(2, 32))
        f = band_limited(part.grid, 11, k_hi=part.grid.k_max)
        g = band_limited(part.grid, 12, k_hi=part.grid.k_max)
        ours = paraproduct(part, f, g, dealiased=False).values
        ref = oracles.paraproduct_double_sum(f.values, g.values)
        assert np.max(np.abs(ours - ref)) <= 1e-12 * np.max(np.abs(ref))

    def test_commutator_matches_oracle(self, part3):
        f = band_limited(part3.grid, 13, k_hi=4)
        g = band_limited(part3.grid, 14, k_hi=4)
        for q in part3.indices:
            ours = commutator_block(part3, f, g, q, dealiased=False).values
            np.testing.assert_allclose(ours, oracles.commutator(f.values, g.values, q),
                                       atol=1e-12)

    def test_commutator_with_constant_vanishes(self, part3):
        g = band_limited(part3.grid, 15)
        c = Field.constant(part3.grid, 2.5)
        for q in part3.indices:
            assert commutator_block(part3, c, g, q).sup() < 1e-12

    def test_far_blocks_of_paraproduct_terms_vanish(self, part3):
        f = band_limited(part3.grid, 16, k_hi=part3.grid.k_max)
        g = band_limited(part3.grid, 17, k_hi=part3.grid.k_max)
        for p in range(1, part3.q_max + 1):
            term = multiply(low_cutoff(part3, f, p - 1), dyadic_block(part3, g, p), False)
            for q in part3.indices:
                if abs(p - q) >= 5:
                    assert lp_norm(dyadic_block(part3, term, q), 2) <= 1e-12 * lp_norm(term, 2)
