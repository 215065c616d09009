import math
from fractions import Fraction

import pytest

from arr import genera
from arr.genera import BoundsError
from arr.series import RATIONALS, Series, exp_series, todd_series


class TestAlpha:
    def test_examples(self):
        assert genera.alpha(1, 0) == 1
        assert genera.alpha(2, 3) == 10
        assert genera.alpha(3, -2) == 0

    def test_closed_form_range(self):
        # matches binom(n+k, n) for k >= 0 and vanishes on -n <= k <= -1
        for n in range(0, 13):
            for k in range(-n, 13):
                got = genera.alpha(n, k)
                if k >= 0:
                    assert got == math.comb(n + k, n), (n, k)
                else:
                    assert got == 0, (n, k)
                assert got == genera.alpha_closed_form(n, k), (n, k)

    def test_bounds(self):
        with pytest.raises(BoundsError):
            genera.alpha(25, 0)
        with pytest.raises(BoundsError):
            genera.alpha(2, 49)
        assert genera.alpha(2, 30, max_abs_k=30) == math.comb(32, 2)


class TestAlphaLiteral:
    def test_examples(self):
        assert genera.alpha_literal(1, 0) == Fraction(5, 12)
        assert genera.alpha_literal(0, 0) == Fraction(1, 2)
        assert genera.alpha_literal(1, -1) == Fraction(-1, 12)

    def test_differs_from_alpha(self):
        assert genera.alpha_literal(1, 0) != genera.alpha(1, 0)

    def test_k_derivative_relation(self):
        # d/dk alpha_literal = alpha, so consecutive differences telescope
        # against the polynomial coefficients
        for n in range(0, 5):
            poly = genera.alpha_literal_k_polynomial(n)
            for k in range(-4, 5):
                val = sum(c * k**i for i, c in enumerate(poly))
                assert val == genera.alpha_literal(n, k), (n, k)


class TestSecondaryTodd:
    def test_first_values(self):
        t = genera.ttilde_table(3)
        assert t.values == (
            Fraction(0),
            Fraction(-1, 12),
            Fraction(-1, 8),
            Fraction(-329, 2160),
        )

    def test_round_trip_reproduces_even_series(self):
        # substituting the extracted numbers back and composing with
        # T = 1 - e^(-y) must reproduce the even zeta series
        max_m = 12
        order = max_m + 1
        table = genera.ttilde_table(max_m)
        lhs = Series.of(
            RATIONALS,
            order,
            [Fraction(0)]
            + [table[m] / (m + 1) for m in range(max_m + 1)],
        )
        t_of_y = Series.one(RATIONALS, order) - exp_series(order, -1)
        assert lhs.compose(t_of_y).coeffs == genera.even_zeta_series(order).coeffs

    def test_residue_identity(self):
        # Ttd_m equals the x^m coefficient of Td(x)^(m+1) R(x)
        for m in range(0, 11):
            series = genera.todd_power(m, m) * genera.aux_r_series(m)
            assert genera.ttilde(m) == series.coefficient(m), m

    def test_parity(self):
        r = genera.aux_r_series(15)
        assert all(r.coefficient(i) == 0 for i in range(0, 16, 2))
        f = genera.even_zeta_series(14)
        assert all(f.coefficient(i) == 0 for i in range(1, 15, 2))

    def test_bounds(self):
        with pytest.raises(BoundsError):
            genera.ttilde_table(41)


class TestBeta:
    def test_integral_examples(self):
        assert genera.beta_integral(1, 0) == Fraction(-1, 12)
        assert genera.beta_integral(2, 1) == Fraction(-5, 24)
        assert genera.beta_integral(3, 1) == Fraction(-779, 2160)

    def test_genus_examples(self):
        assert genera.beta_genus(2, 0) == Fraction(-1, 8)
        assert genera.beta_genus(2, -1) == Fraction(-1, 24)
        assert genera.beta_genus(3, 1) == Fraction(-689, 2160)

    def test_residual_examples(self):
        for k in range(-5, 6):
            assert genera.beta_residual(2, k) == 0
        for n in range(0, 11):
            assert genera.beta_residual(n, 0) == 0
        assert genera.beta_residual(3, 1) == Fraction(-1, 24)

    def test_two_route_agreement_window(self):
        for n in range(0, 3):
            for k in range(-12, 13):
                assert genera.beta_residual(n, k) == 0, (n, k)

    def test_genus_polynomial_matches_pointwise(self):
        for n in range(0, 6):
            poly = genera.beta_genus_k_polynomial(n)
            for k in range(-6, 7):
                assert genera.beta_genus(n, k) == sum(
                    c * k**i for i, c in enumerate(poly)
                )

    def test_aux_series_is_integrated_g(self):
        # the explicit Q[t] integration and the closed odd-zeta series agree
        # coefficientwise, which is what makes beta_integral's cross-check run
        for order in (4, 9, 16):
            assert genera._integrated_g_series(order).coeffs == genera.aux_r_series(order).coeffs

    def test_integral_duality_functional_equation(self):
        # beta_integral(n, k) = (-1)^(n+1) beta_integral(n, -k-n-1)
        for n in range(0, 8):
            sign = (-1) ** (n + 1)
            for k in range(-n, n + 1):
                assert genera.beta_integral(n, k) == sign * genera.beta_integral(
                    n, -k - n - 1
                ), (n, k)

    def test_bounds(self):
        with pytest.raises(BoundsError):
            genera.beta_genus(25, 0)


class TestToddPower:
    def test_matches_series_power(self):
        td = todd_series(6)
        assert genera.todd_power(2, 6).coeffs == (td * td * td).coeffs
