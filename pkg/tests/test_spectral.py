import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stokesbubble.fourier import norm_F01
from stokesbubble.geometry import length_bounds, length_from_phi, length_ratio_bound
from stokesbubble.spectral import (
    X_MAX_A,
    A1_of,
    A_of,
    J1_analytic,
    J1_from_g,
    J1_quadrature,
    J2_analytic,
    J2_quadrature,
    LinearizationConfig,
    MultiplierReport,
    g_constants_analytic,
    g_constants_quadrature,
    multiplier_analytic,
    multiplier_quadrature,
    reports_to_json,
    verify_linearization,
)

from conftest import small_phi

PI = math.pi


class TestClosedForms:
    def test_examples(self):
        assert J1_analytic(2) == -PI / 2
        assert J2_analytic(2) == pytest.approx(-3 * PI / 2)
        assert J1_analytic(2) + J2_analytic(2) == pytest.approx(-2 * PI)
        assert multiplier_analytic(2) == pytest.approx(-0.5)
        assert multiplier_analytic(-3) == pytest.approx(-0.75)
        assert multiplier_analytic(1) == 0 and multiplier_analytic(-1) == 0

    def test_reject_zero(self):
        for f in (J1_analytic, J2_analytic, multiplier_analytic):
            with pytest.raises(ValueError):
                f(0)
        with pytest.raises(ValueError):
            multiplier_analytic(2, L=0)

    @given(st.integers(2, 10 ** 6), st.floats(0.1, 10), st.floats(0.1, 10))
    def test_dissipative(self, k, R, gamma):
        L = 2 * PI * R
        m = multiplier_analytic(k, L, gamma)
        assert m < 0
        assert m == pytest.approx(-gamma * k / (4 * R), rel=1e-12)
        assert multiplier_analytic(-k, L, gamma) == m
        assert J1_analytic(k) + J2_analytic(k) == pytest.approx(-PI * k, rel=1e-12)


class TestQuadratureOracles:
    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_J(self, k):
        assert abs(J1_quadrature(k) - J1_analytic(k)) <= 1e-8
        assert abs(J2_quadrature(k) - J2_analytic(k)) <= 1e-8

    def test_J3_examples(self):
        assert abs(J2_quadrature(3) - (-8 * PI / 3)) <= 1e-8
        assert abs(J1_quadrature(3) - (-PI / 3)) <= 1e-8

    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_negative_k(self, k):
        # J_i are real, so the conjugate-symmetry statement reads J_i(-k) = J_i(k)
        for q in (J1_quadrature, J2_quadrature):
            a, b = q(k), q(-k)
            assert abs(a.imag) <= 1e-9 and abs(b - np.conj(a)) <= 1e-8

    def test_J2_mpmath(self):
        """Independent high-precision evaluation of the J2 principal value."""
        k = 3
        mpmath.mp.dps = 30

        def even(b):
            f = lambda x: -mpmath.exp(-1j * x) * 1j * (1 + mpmath.exp(1j * x) + mpmath.exp(2j * x)
                                                      + mpmath.exp(3j * x)) * mpmath.exp(-1j * k * x) / (4 * (mpmath.exp(1j * x) - 1))
            return f(b) + f(-b)

        pv = mpmath.quad(even, [0, 1, mpmath.pi])
        val = complex((1j * k - 1j / k) * pv)
        assert abs(val - J2_quadrature(k)) <= 1e-10

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_g(self, k):
        g = g_constants_quadrature(k)
        ga = g_constants_analytic(k)
        assert "g4" not in g
        for name in g:
            assert abs(g[name] - ga[name]) <= 1e-8, name
        assert abs(J1_from_g(k, g) - (-PI / k)) <= 1e-8

    @pytest.mark.parametrize("k", range(2, 11))
    def test_J1_identity_analytic(self, k):
        assert abs(J1_from_g(k, g_constants_analytic(k)) - J1_analytic(k)) <= 1e-12

    def test_g4_example(self):
        assert abs(g_constants_quadrature(4)["g2"] - (-2 * PI)) <= 1e-8

    def test_eps_independence(self):
        a = J2_quadrature(4, eps=1e-4)
        b = J2_quadrature(4, eps=1e-3)
        assert abs(a - b) <= 1e-8

    def test_multiplier_quadrature(self):
        for k in (2, 4):
            assert abs(multiplier_quadrature(k) - multiplier_analytic(k)) <= 1e-8


class TestAFunctions:
    def test_small_x_limit(self):
        # A(x) = (pi/2) (1 + c x + ...) from the series of 1 - sqrt(1 - e)
        for x in (1e-6, 1e-8):
            e = 0.5 * PI * math.expm1(2 * x)
            series = (e / 2 + e * e / 8 + e ** 3 / 16) / x
            assert A_of(x) == pytest.approx(series, rel=1e-12)
        assert A_of(1e-9) == pytest.approx(PI / 2, rel=1e-8)

    def test_direct(self):
        x = 0.05
        direct = (1 - math.sqrt(1 - 0.5 * PI * (math.exp(2 * x) - 1))) / x
        assert abs(A_of(x) - direct) <= 1e-14

    def test_A1(self):
        assert A1_of(0) == 1.0
        with pytest.raises(ValueError):
            A1_of(-0.1)

    def test_domain(self):
        for x in (0.0, -0.1, X_MAX_A, 1.0):
            with pytest.raises(ValueError):
                A_of(x)

    def test_monotone(self):
        xs = np.linspace(1e-4, X_MAX_A * 0.999, 200)
        a = [A_of(x) for x in xs]
        a1 = [A1_of(x) for x in xs]
        assert np.all(np.diff(a) > 0) and np.all(np.diff(a1) < 0)


class TestLengthBoundsProperty:
    @settings(max_examples=300, deadline=None)
    @given(small_phi(max_N=8, size=0.05, skip_one=False), st.floats(0.2, 5.0))
    def test_bounds(self, phi, R):
        x = norm_F01(phi)
        L = length_from_phi(phi, R, 64)
        lo, hi = length_bounds(x, R)
        assert lo <= L <= hi
        assert abs(2 * PI * R / L - 1) <= length_ratio_bound(x)


@pytest.fixture(scope="module")
def rows():
    return verify_linearization(LinearizationConfig(kmax=6))


class TestReports:
    def test_rows(self, rows):
        quad = [r for r in rows if r.method == "pv_quadrature" and r.k >= 2]
        fd = [r for r in rows if r.method == "fd_linearization" and r.k >= 2]
        assert len(quad) == 5 and len(fd) == 5
        assert max(r.abs_err for r in quad) <= 1e-8
        assert all(r.abs_err <= 1e-4 * abs(r.analytic) for r in fd)
        for r in rows:
            assert r.abs_err == abs(r.analytic - r.numeric)

    def test_k1(self, rows):
        for r in rows:
            if r.k == 1:
                assert abs(r.numeric) <= 1e-6 and r.analytic == 0

    def test_gamma_scaling(self, rows):
        rows2 = verify_linearization(LinearizationConfig(kmax=6, gamma=2.0))
        for a, b in zip(rows, rows2):
            assert b.analytic == 2 * a.analytic
            assert b.numeric == pytest.approx(2 * a.numeric, rel=1e-9, abs=1e-12)

    def test_hermitian(self):
        from stokesbubble.dynamics import SimConfig, linearized_rhs_fd
        from stokesbubble.fourier import TrigSeries

        cfg = SimConfig(N=16, m=64)
        for k in (2, 3):
            out = linearized_rhs_fd(TrigSeries.from_modes(16, {k: 1.0}), 1e-6, cfg)
            assert out[-k] == np.conj(out[k])

    def test_json(self, rows):
        data = json.loads(reports_to_json(rows))
        assert set(data[0]) == {"k", "analytic", "numeric", "abs_err", "method"}
        assert isinstance(rows[0], MultiplierReport)
