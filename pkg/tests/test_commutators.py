import math

import numpy as np
import pytest

import oracles
from besovlab.estimates import VARIANTS, commutator_scan, scan_all, scan_fields
from besovlab.euler import PhysicalParams, State, random_band_limited_ic
from besovlab.lp import Field, build_partition, make_grid

SIGMA, EPS = 2.5, 0.1

# restated independently: (left, right, op, weight smoothness, norms, summary)
# a norm is (field, smoothness or None for sup, r)
S, SE, SE1 = SIGMA, SIGMA + EPS, SIGMA - 1 + EPS
TABLE = {
    "local/m-divu": ("m", "u", "div", S, [("m", S, 1), ("u", S, 1)], "l1"),
    "local/m-gradm": ("m", "m", "grad", S, [("grad m", None, 0), ("m", S, 1)], "l1"),
    "local/u-gradm": ("u", "m", "dot", S, [("u", S, 1), ("m", S, 1)], "l1"),
    "local/u-gradu": ("u", "u", "dot", S, [("grad u", None, 0), ("u", S, 1)], "l1"),
    "ut-gradm": ("ut", "m", "dot", SE1, [("ut", SE1, 2), ("grad m", SE1, 2)], "l2"),
    "u-gradmt": ("u", "mt", "dot", SE1, [("u", SE, 2), ("mt", SE1, 2)], "l2"),
    "ut-gradu": ("ut", "u", "dot", SE1, [("ut", SE1, 2), ("u", SE, 2)], "l2"),
    "u-gradut": ("u", "ut", "dot", SE1, [("u", SE, 2), ("ut", SE1, 2)], "l2"),
    "mt-divu": ("mt", "u", "div", SE1, [("mt", SE1, 2), ("u", SE, 2)], "l2"),
    "m-divut": ("m", "ut", "div", SE1, [("m", SE, 2), ("ut", SE1, 2)], "l2"),
    "mt-gradm": ("mt", "m", "grad", SE1, [("mt", SE1, 2), ("grad m", SE1, 2)], "l2"),
    "m-gradmt": ("m", "mt", "grad", SE1, [("m", SE, 2), ("mt", SE1, 2)], "l2"),
    "high/u-gradu": ("u", "u", "dot", SE, [("u", SE, 2), ("grad u", SE1, 2)], "l2"),
    "high/m-gradm": ("m", "m", "grad", SE, [("grad m", SE1, 2), ("m", SE, 2)], "l2"),
    "high/u-gradm": ("u", "m", "dot", SE, [("u", SE, 2), ("m", SE, 2)], "l2"),
    "low/u-gradm": ("u", "m", "dot", SE, [("u", SE, 2), ("grad m", SE1, 2)], "low"),
    "high/m-divu": ("m", "u", "div", SE, [("m", SE, 2), ("u", SE, 2)], "l2"),
    "low/m-divu": ("m", "u", "div", SE, [("m", SE, 2), ("u", SE, 2)], "low"),
}


def oracle_fields(fields):
    arr = {k: ([c.values for c in v] if k in ("u", "ut") else v.values) for k, v in fields.items()}
    arr["grad m"] = [oracles.derivative(arr["m"], j) for j in range(arr["m"].ndim)]
    arr["grad u"] = [oracles.derivative(c, j) for c in arr["u"] for j in range(len(arr["u"]))]
    return arr


def oracle_scan(arr, name):
    left, right, op, w, norms, summary = TABLE[name]
    denom = 1.0
    for field, s, r in norms:
        comps = arr[field] if isinstance(arr[field], list) else [arr[field]]
        denom *= (np.sqrt(sum(c**2 for c in comps)).max() if s is None
                  else oracles.besov(comps, s, r))
    f, g = arr[left], arr[right]
    if summary == "low":
        dim = arr["m"].ndim
        c = [2.0 ** (-w) * oracles.lp(oracles.bracket(f, g, op, -1), 2 * dim / (dim + 2)) / denom]
        return c
    qm = oracles.q_max_for(arr["m"].shape[0])
    return [2.0 ** (q * w) * oracles.l2_vec(oracles.bracket(f, g, op, q)) / denom
            for q in range(-1, qm + 1)]


@pytest.fixture(scope="module")
def sample():
    g = make_grid(3, 16)
    p = PhysicalParams()
    s = random_band_limited_ic(g, 1e-3, (1, 2), 3, p)
    return build_partition(g), scan_fields(s, p)


class TestVariants:
    def test_table_covers_registry(self):
        assert set(TABLE) == set(VARIANTS)

    @pytest.mark.parametrize("name", sorted(TABLE))
    def test_matches_independent_bracket(self, sample, name):
        part, fields = sample
        rep = commutator_scan(part, fields, name, SIGMA, EPS)
        ref = oracle_scan(oracle_fields(fields), name)
        np.testing.assert_allclose(rep.c_q, ref, rtol=1e-10, atol=1e-10 * max(ref))
        assert all(c >= 0 for c in rep.c_q)

    def test_summary_statistics(self, sample):
        part, fields = sample
        r1 = commutator_scan(part, fields, "local/m-divu", SIGMA, EPS)
        r2 = commutator_scan(part, fields, "high/m-divu", SIGMA, EPS)
        assert r1.statistic == pytest.approx(sum(r1.c_q))
        assert r2.statistic == pytest.approx(math.sqrt(sum(c * c for c in r2.c_q)))


class TestScanRules:
    def test_constant_m_gives_zero(self, sample):
        part, fields = sample
        f = dict(fields, m=Field.constant(part.grid, 0.3))
        rep = commutator_scan(part, f, "local/m-divu", SIGMA, EPS)
        assert max(rep.c_q) < 1e-12

    def test_zero_norm_rejected(self, sample):
        part, fields = sample
        f = dict(fields, m=Field.constant(part.grid, 0.3))
        with pytest.raises(ValueError, match="zero-norm"):
            commutator_scan(part, f, "local/m-gradm", SIGMA, EPS)

    def test_unknown_variant(self, sample):
        part, fields = sample
        with pytest.raises(KeyError):
            commutator_scan(part, fields, "nope")

    def test_low_needs_3d(self):
        g = make_grid(2, 16)
        p = PhysicalParams()
        fields = scan_fields(random_band_limited_ic(g, 1e-3, (1, 2), 0, p), p)
        part = build_partition(g)
        with pytest.raises(ValueError, match="dimension"):
            commutator_scan(part, fields, "low/m-divu")
        assert not any(k.startswith("low/") for k in scan_all(part, fields))

    def test_resolution_stability(self):
        p = PhysicalParams()
        g1, g2 = make_grid(3, 16), make_grid(3, 32)
        s = random_band_limited_ic(g1, 1e-3, (1, 2), 9, p)
        names = ["local/u-gradu", "local/m-gradm", "low/u-gradm", "high/m-divu"]
        a = scan_all(build_partition(g1), scan_fields(s, p), variants=names)
        b = scan_all(build_partition(g2), scan_fields(s.resample(g2), p), variants=names)
        for n in names:
            ratio = b[n].statistic / a[n].statistic
            assert 0.5 <= ratio <= 2.0
