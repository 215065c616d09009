import math
from fractions import Fraction

import pytest

from arr import genera, torsion
from arr.scalars import (
    DomainError,
    LogNumber,
    UnsupportedInputError,
    log_of_factorial,
    log_of_rational,
)

R = LogNumber.from_rational


class TestMonomials:
    def test_counts(self):
        for n in range(0, 5):
            for k in range(0, 9):
                listed = list(torsion.monomials(n, k))
                assert len(listed) == torsion.monomial_count(n, k) == math.comb(k + n, n)
                assert len(set(listed)) == len(listed)
                assert all(len(m) == n + 1 and sum(m) == k for m in listed)

    def test_enumeration_bound(self):
        with pytest.raises(UnsupportedInputError):
            torsion.chh1_L2(8, 40, enumeration_bound=1000)


class TestL2Norms:
    def test_examples(self):
        assert torsion.l2_norm_squared(1, 0, (0, 0)) == 1
        assert torsion.l2_norm_squared(1, 2, (2, 0)) == Fraction(1, 3)
        assert torsion.l2_norm_squared(2, 1, (1, 0, 0)) == Fraction(1, 6)

    def test_unit_section_norm_at_k0(self):
        # matches the 1/n! volume normalization
        for n in range(0, 6):
            assert torsion.l2_norm_squared(n, 0, (0,) * (n + 1)) == Fraction(
                1, math.factorial(n)
            )

    def test_mismatch_rejected(self):
        with pytest.raises(DomainError):
            torsion.l2_norm_squared(1, 2, (1, 0))
        with pytest.raises(DomainError):
            torsion.l2_norm_squared(1, 2, (1, 1, 0))


class TestChh1:
    def test_examples(self):
        assert torsion.chh1_L2(1, 1) == log_of_rational(2)
        assert torsion.chh1_L2(1, 2) == LogNumber.make(
            0, {2: Fraction(1, 2), 3: Fraction(3, 2)}
        )
        assert torsion.chh1_L2(2, 0) == LogNumber.make(0, {2: Fraction(1, 2)})

    def test_matches_streamed_enumeration(self):
        for n in range(0, 4):
            for k in range(0, 7):
                assert torsion.chh1_L2(n, k) == torsion.chh1_by_enumeration(n, k), (n, k)

    def test_pure_log_shape(self):
        for n in range(1, 5):
            for k in range(0, 9):
                v = torsion.chh1_L2(n, k)
                assert v.rational == 0
                assert all(c != 0 for _, c in v.logs)

    def test_primed_vanishes_in_window(self):
        for n in range(1, 5):
            for k in range(-n, 1):
                assert torsion.chh1_primed(n, k) == LogNumber.zero()

    def test_primed_below_range_rejected(self):
        with pytest.raises(UnsupportedInputError):
            torsion.chh1_primed(2, -3)


class TestPushforwardArch:
    def test_examples(self):
        assert torsion.pushforward_arch(1, 0) == R(Fraction(11, 24))
        assert torsion.pushforward_arch(2, -1) == R(Fraction(-1, 48))
        assert torsion.pushforward_arch(1, 1) == R(Fraction(23, 24))

    def test_route_switch(self):
        assert torsion.pushforward_arch(3, 1, "integral") - torsion.pushforward_arch(
            3, 1, "genus"
        ) == R(Fraction(1, 2) * genera.beta_residual(3, 1))

    def test_unknown_route(self):
        with pytest.raises(DomainError):
            torsion.beta(1, 0, "spectral")


class TestTValues:
    def test_primed_examples(self):
        assert torsion.t_primed_grr(1, -1) == R(Fraction(1, 24))
        assert torsion.t_primed_grr(2, 0) == R(Fraction(-19, 16))
        assert torsion.t_primed_grr(1, 1) == log_of_rational(2) + R(Fraction(-23, 24))

    def test_unprimed_conversion(self):
        assert torsion.t_value(1, -1) == R(Fraction(1, 24))
        assert torsion.t_value(1, 0) == torsion.t_primed_grr(1, 0)  # log 1! = 0
        assert torsion.t_value(2, 0) == torsion.t_primed_grr(2, 0) + log_of_rational(
            2
        ).scale(Fraction(1, 2))

    def test_below_range_rejected(self):
        with pytest.raises(UnsupportedInputError):
            torsion.t_primed_grr(1, -2)

    def test_table_examples(self):
        assert torsion.t_table_value(1, 0) == R(Fraction(-1, 2))
        assert torsion.t_table_value(2, 0) == R(Fraction(-5, 4))
        assert torsion.t_table_value(1, -1) == R(Fraction(1, 24))
        assert torsion.t_table_value(2, -1) == R(Fraction(1, 48))
        assert torsion.t_table_value(2, -2) == R(Fraction(-1, 48))

    def test_table_ordering(self):
        assert [k for k, _ in torsion.t_table(2)] == [0, -1, -2]
        with pytest.raises(DomainError):
            torsion.t_table_value(2, 1)

    def test_k0_is_pure_rational_sigma(self):
        from arr.scalars import harmonic_double_sum

        for n in range(0, 8):
            v = torsion.t_table_value(n, 0)
            assert v.is_rational
            assert v == R(-harmonic_double_sum(n) / 2)

    def test_grr_equals_table_in_negative_window(self):
        for n in range(1, 11):
            for k in range(-n, 0):
                assert torsion.t_primed_grr(n, k) == torsion.t_table_value(n, k)
                assert torsion.t_primed_grr(n, k) == R(-genera.beta_genus(n, k) / 2)

    def test_k0_residual_formula(self):
        for n in range(0, 8):
            want = (log_of_factorial(n) - R(genera.ttilde(n))).scale(Fraction(1, 2))
            assert torsion.grr_k0_residual(n) == want


class TestDuality:
    def test_examples(self):
        printed, flipped = torsion.duality_residuals(2, -1)
        assert printed == R(Fraction(1, 24)) and not flipped
        printed, flipped = torsion.duality_residuals(1, -1)
        assert printed == torsion.t_table_value(1, -1).scale(2) == R(Fraction(1, 12))
        assert not flipped
        printed, _ = torsion.duality_residuals(3, -2)
        assert printed == torsion.t_table_value(3, -2).scale(2)

    def test_flipped_vanishes_on_integral_table(self):
        for n in range(1, 9):
            for k in range(-n, 0):
                _, flipped = torsion.duality_residuals(n, k, "integral")
                assert not flipped, (n, k)

    def test_printed_table_breaks_at_n3(self):
        # the genus-route table inherits the beta discrepancy: exact values
        _, f1 = torsion.duality_residuals(3, -1, "genus")
        _, f3 = torsion.duality_residuals(3, -3, "genus")
        assert f1 == R(Fraction(-1, 24))
        assert f3 == R(Fraction(1, 24))

    def test_range(self):
        with pytest.raises(DomainError):
            torsion.duality_residuals(2, 0)
        with pytest.raises(DomainError):
            torsion.duality_residuals(2, -3)


class TestConsistencyReport:
    def test_low_dimensions_match(self):
        for row in torsion.consistency_report(1):
            if -1 <= row.k <= -1:
                assert row.flag == "MATCH"
        for row in torsion.consistency_report(2):
            if -2 <= row.k <= -1:
                assert row.flag == "MATCH"

    def test_k0_flagged(self):
        rows = {r.k: r for r in torsion.consistency_report(2)}
        assert rows[0].flag == "LEDGER"
        assert rows[0].grr_vs_table == torsion.grr_k0_residual(2)

    def test_route_difference(self):
        g = {r.k: r for r in torsion.consistency_report(3, "genus")}
        i = {r.k: r for r in torsion.consistency_report(3, "integral")}
        for k in range(-3, 4):
            assert g[k].t_grr - i[k].t_grr == R(
                Fraction(1, 2) * genera.beta_residual(3, k)
            )

    def test_report_invariant(self):
        for row in torsion.consistency_report(3):
            assert row.t_grr == row.chh1 - row.pushforward_arch
            assert row.beta_integral - row.beta_genus == genera.beta_residual(3, row.k)
