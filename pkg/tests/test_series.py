import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arr.scalars import DomainError
from arr.series import (
    RATIONAL_POLYS,
    RATIONALS,
    Series,
    TPoly,
    exp_series,
    geometric_series,
    integrate_t_01,
    lift_to_tpolys,
    subtract_t0_divide_t,
    todd_denominator_series,
    todd_series,
)

small_fracs = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))


def rational_series(order):
    return st.lists(small_fracs, min_size=order + 1, max_size=order + 1).map(
        lambda cs: Series(RATIONALS, order, tuple(cs))
    )


def tpoly_series(order):
    poly = st.lists(small_fracs, min_size=0, max_size=3).map(TPoly.of)
    return st.lists(poly, min_size=order + 1, max_size=order + 1).map(
        lambda cs: Series(RATIONAL_POLYS, order, tuple(cs))
    )


class TestRingOperations:
    def test_product_example(self):
        one_plus = Series.of(RATIONALS, 2, [1, 1])
        one_minus = Series.of(RATIONALS, 2, [1, -1])
        assert (one_plus * one_minus).coeffs == (1, 0, -1)

    def test_multiplicative_identity(self):
        f = Series.of(RATIONALS, 4, [3, Fraction(1, 2), 0, 7])
        assert (f * Series.one(RATIONALS, 4)).coeffs == f.coeffs

    def test_geometric_cancellation(self):
        f = geometric_series(5) * Series.of(RATIONALS, 5, [1, -1])
        assert f.coeffs == Series.one(RATIONALS, 5).coeffs

    def test_mixed_orders_truncate_down(self):
        a = Series.of(RATIONALS, 5, [1, 1, 1, 1, 1, 1])
        b = Series.of(RATIONALS, 2, [1, 2, 3])
        assert (a + b).order == 2
        assert (a * b).order == 2

    @given(rational_series(8), rational_series(8), rational_series(8))
    @settings(max_examples=40)
    def test_ring_axioms_rationals(self, f, g, h):
        assert ((f + g) + h).coeffs == (f + (g + h)).coeffs
        assert ((f * g) * h).coeffs == (f * (g * h)).coeffs
        assert (f * g).coeffs == (g * f).coeffs
        assert (f * (g + h)).coeffs == (f * g + f * h).coeffs

    @given(tpoly_series(5), tpoly_series(5), tpoly_series(5))
    @settings(max_examples=25)
    def test_ring_axioms_tpolys(self, f, g, h):
        assert ((f * g) * h).coeffs == (f * (g * h)).coeffs
        assert (f * (g + h)).coeffs == (f * g + f * h).coeffs


class TestInversion:
    def test_geometric(self):
        f = Series.of(RATIONALS, 6, [1, -1])
        assert f.invert().coeffs == geometric_series(6).coeffs

    def test_todd_denominator(self):
        inv = todd_denominator_series(4).invert()
        assert inv.coeffs == (
            Fraction(1),
            Fraction(1, 2),
            Fraction(1, 12),
            Fraction(0),
            Fraction(-1, 720),
        )

    def test_constant(self):
        f = Series.of(RATIONALS, 3, [2])
        assert f.invert().coeffs == (Fraction(1, 2), 0, 0, 0)

    def test_non_unit_rejected(self):
        with pytest.raises(DomainError):
            Series.of(RATIONALS, 3, [0, 1]).invert()
        with pytest.raises(DomainError):
            Series.of(RATIONAL_POLYS, 2, [TPoly.of([0, 1])]).invert()

    @given(rational_series(8))
    @settings(max_examples=40)
    def test_inverse_multiplies_to_one(self, f):
        if f.coeffs[0] == 0:
            f = f + Series.one(RATIONALS, 8)
        if f.coeffs[0] == 0:
            return
        assert (f * f.invert()).coeffs == Series.one(RATIONALS, 8).coeffs


class TestExpLog:
    def test_exp_example(self):
        assert exp_series(3).coeffs == (1, 1, Fraction(1, 2), Fraction(1, 6))

    def test_log_example(self):
        f = Series.of(RATIONALS, 3, [1, 1])
        assert f.log().coeffs == (0, 1, Fraction(-1, 2), Fraction(1, 3))

    def test_round_trip_example(self):
        f = Series.of(RATIONALS, 10, [1, 1, 1])
        assert f.log().exp().coeffs == f.coeffs

    def test_preconditions(self):
        with pytest.raises(DomainError):
            Series.of(RATIONALS, 3, [1, 1]).exp()
        with pytest.raises(DomainError):
            Series.of(RATIONALS, 3, [2, 1]).log()

    @given(rational_series(12))
    @settings(max_examples=40)
    def test_round_trips(self, f):
        g = Series(RATIONALS, 12, (Fraction(0),) + f.coeffs[1:])
        assert g.exp().log().coeffs == g.coeffs
        h = Series(RATIONALS, 12, (Fraction(1),) + f.coeffs[1:])
        assert h.log().exp().coeffs == h.coeffs

    def test_round_trip_order_30(self):
        rng = random.Random(30)
        coeffs = (Fraction(0),) + tuple(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(30)
        )
        f = Series(RATIONALS, 30, coeffs)
        assert f.exp().log().coeffs == f.coeffs


class TestComposition:
    def test_identity_substitution(self):
        f = Series.of(RATIONALS, 5, [2, 3, 5, 7, 11, 13])
        assert f.compose(Series.x(RATIONALS, 5)).coeffs == f.coeffs

    def test_inverse_function_round_trip(self):
        # (1 - e^(-y)) composed with -log(1-T) gives back T
        order = 8
        one_minus_exp = Series.one(RATIONALS, order) - exp_series(order, -1)
        neg_log = Series.of(
            RATIONALS, order, [0] + [Fraction(1, i) for i in range(1, order + 1)]
        )
        assert one_minus_exp.compose(neg_log).coeffs == Series.x(RATIONALS, order).coeffs

    def test_exp_of_neg_log(self):
        order = 4
        neg_log = Series.of(
            RATIONALS, order, [0] + [Fraction(1, i) for i in range(1, order + 1)]
        )
        assert exp_series(order).compose(neg_log).coeffs == geometric_series(order).coeffs

    def test_nonzero_constant_rejected(self):
        f = Series.of(RATIONALS, 3, [1, 1])
        with pytest.raises(DomainError):
            f.compose(Series.of(RATIONALS, 3, [1, 1]))

    @given(rational_series(6), rational_series(6), rational_series(6))
    @settings(max_examples=30)
    def test_associativity(self, f, g, h):
        g = Series(RATIONALS, 6, (Fraction(0),) + g.coeffs[1:])
        h = Series(RATIONALS, 6, (Fraction(0),) + h.coeffs[1:])
        assert f.compose(g).compose(h).coeffs == f.compose(g.compose(h)).coeffs


class TestToddSeries:
    def test_low_orders(self):
        td = todd_series(4)
        assert td.coeffs[:3] == (1, Fraction(1, 2), Fraction(1, 12))
        assert td.coefficient(3) == 0
        assert td.coefficient(4) == Fraction(-1, 720)

    def test_defining_identity(self):
        for order in (5, 12, 20):
            prod = todd_series(order) * todd_denominator_series(order)
            assert prod.coeffs == Series.one(RATIONALS, order).coeffs

    def test_coefficient_bounds(self):
        with pytest.raises(DomainError):
            todd_series(4).coefficient(5)
        assert Series.of(RATIONALS, 2, [0, 0, 1]).coefficient(1) == 0
        assert exp_series(3).coefficient(0) == 1


class TestCalculus:
    @given(rational_series(9), rational_series(9))
    @settings(max_examples=40)
    def test_leibniz(self, f, g):
        lhs = (f * g).derivative()
        rhs = f.derivative() * g.truncate(8) + f.truncate(8) * g.derivative()
        assert lhs.coeffs == rhs.coeffs

    def test_derivative_antiderivative(self):
        f = Series.of(RATIONALS, 6, [0, 1, 2, 3, 4, 5, 6])
        assert f.derivative().antiderivative().coeffs == f.coeffs


class TestTIntegration:
    def test_constant_in_t(self):
        f = lift_to_tpolys(exp_series(4))
        assert integrate_t_01(f).coeffs == exp_series(4).coeffs

    def test_t_squared(self):
        f = Series.of(RATIONAL_POLYS, 1, [TPoly.of([0, 0, 1])])
        assert integrate_t_01(f).coeffs == (Fraction(1, 3), 0)

    def test_cancellation(self):
        # x * (3t^2 - 2t) integrates to zero
        f = Series.of(RATIONAL_POLYS, 1, [TPoly(), TPoly.of([0, -2, 3])])
        assert integrate_t_01(f).coeffs == (0, 0)

    def test_subtract_divide_constant(self):
        f = Series.of(RATIONAL_POLYS, 2, [TPoly.constant(Fraction(1, 2))])
        out = subtract_t0_divide_t(f)
        assert all(not c for c in out.coeffs)

    def test_subtract_divide_shift(self):
        f = Series.of(RATIONAL_POLYS, 1, [TPoly(), TPoly.of([0, 0, 1])])  # t^2 x
        out = subtract_t0_divide_t(f)
        assert out.coeffs == (TPoly(), TPoly.of([0, 1]))

    def test_nondivisible_rejected(self):
        with pytest.raises(DomainError):
            TPoly.of([1, 1]).shift_down()
