"""Coefficient families for the Riemann-Roch computation on projective space.

Everything here is an exact rational extracted from truncated power series:

* ``alpha(n, k)``   -- Euler-characteristic coefficient, the coefficient of
  x^n in e^(kx) * Td(x)^(n+1); equals binom(n+k, n) as a polynomial in k.
* ``alpha_literal(n, k)`` -- the coefficient of x^(n+1) in the same series.
  The two indexings circulate for the same symbol; both are exposed so the
  discrepancy is machine-visible (already at n=1, k=0: 1 vs 5/12).
* ``ttilde(m)``     -- secondary Todd numbers, defined by a generating-series
  identity in the variable T = 1 - e^(-y).
* ``beta_integral(n, k)`` / ``beta_genus(n, k)`` -- two independent routes to
  the correction coefficients; they agree for k = 0 and for n <= 2 but
  genuinely disagree for n >= 3, k != 0.  ``beta_residual`` reports the
  difference; this artifact does not adjudicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalars import DomainError, bernoulli, zeta_negative_odd
from .series import (
    RATIONAL_POLYS,
    RATIONALS,
    Series,
    TPoly,
    exp_series,
    integrate_t_01,
    subtract_t0_divide_t,
    todd_series,
)

DEFAULT_MAX_N = 24
DEFAULT_MAX_ABS_K = 48
DEFAULT_MAX_TTILDE = 40

# process-wide override, set once by the CLI before any computation; library
# callers pass explicit bounds instead
_MAX_N_OVERRIDE: int | None = None


class BoundsError(DomainError):
    """Requested indices exceed the configured computation bounds."""


def set_max_n_override(value: int | None) -> None:
    global _MAX_N_OVERRIDE
    _MAX_N_OVERRIDE = value


def check_bounds(n: int, k: int, max_n: int | None = None, max_abs_k: int | None = None) -> None:
    if max_n is None:
        max_n = DEFAULT_MAX_N if _MAX_N_OVERRIDE is None else _MAX_N_OVERRIDE
    max_abs_k = DEFAULT_MAX_ABS_K if max_abs_k is None else max_abs_k
    if n < 0:
        raise DomainError(f"dimension n must be >= 0, got {n}")
    if n > max_n:
        raise BoundsError(f"n = {n} exceeds the bound {max_n}")
    if abs(k) > max_abs_k:
        raise BoundsError(f"|k| = {abs(k)} exceeds the bound {max_abs_k}")


@lru_cache(maxsize=None)
def todd_power(n: int, order: int) -> Series:
    """Td(x)^(n+1) truncated at the given order."""
    return todd_series(order).pow(n + 1)


@lru_cache(maxsize=None)
def _ekx_todd_power(n: int, k: int) -> Series:
    """e^(kx) * Td(x)^(n+1) at order n+1, the common carrier of alpha values."""
    order = n + 1
    return exp_series(order, k) * todd_power(n, order)


def alpha(n: int, k: int, max_n: int | None = None, max_abs_k: int | None = None) -> Fraction:
    """Coefficient of x^n in e^(kx) * Td(x)^(n+1).

    Equals the Euler characteristic chi(P^n, O(k)) = binom(n+k, n) for every
    integer k (zero for -n <= k <= -1).
    """
    check_bounds(n, k, max_n, max_abs_k)
    return _ekx_todd_power(n, k).coefficient(n)


def alpha_literal(n: int, k: int, max_n: int | None = None, max_abs_k: int | None = None) -> Fraction:
    """Coefficient of x^(n+1) in e^(kx) * Td(x)^(n+1), the other indexing."""
    check_bounds(n, k, max_n, max_abs_k)
    return _ekx_todd_power(n, k).coefficient(n + 1)


def alpha_closed_form(n: int, k: int) -> Fraction:
    """binom(n+k, n) as a polynomial in k: prod_{i=1..n} (k+i) / n!."""
    num = 1
    for i in range(1, n + 1):
        num *= k + i
    return Fraction(num, math.factorial(n))


# ---------------------------------------------------------------------------
# Secondary Todd numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondaryToddTable:
    max_m: int
    values: tuple[Fraction, ...]  # values[m] for m = 0..max_m

    def __post_init__(self):
        assert len(self.values) == self.max_m + 1
        assert self.values[0] == 0  # the defining series has no T^1 term

    def __getitem__(self, m: int) -> Fraction:
        return self.values[m]


def even_zeta_series(order: int) -> Series:
    """F(y) = sum_{m>=1} zeta(1-2m)/(2m-1) * y^(2m)/(2m)!, truncated."""
    coeffs = [Fraction(0)] * (order + 1)
    m = 1
    while 2 * m <= order:
        coeffs[2 * m] = zeta_negative_odd(m) / ((2 * m - 1) * math.factorial(2 * m))
        m += 1
    return Series(RATIONALS, order, tuple(coeffs))


def neg_log1m_series(order: int) -> Series:
    """-log(1-T) = sum_{i>=1} T^i / i."""
    coeffs = [Fraction(0)] + [Fraction(1, i) for i in range(1, order + 1)]
    return Series(RATIONALS, order, tuple(coeffs))


@lru_cache(maxsize=None)
def ttilde_table(max_m: int, max_ttilde: int | None = None) -> SecondaryToddTable:
    """Extract the secondary Todd numbers from their generating identity.

    With T = 1 - e^(-y), the substitution y = -log(1-T) turns the identity
    sum_m Ttd_m/(m+1) T^(m+1) = F(y) into a plain coefficient read-off:
    Ttd_m = (m+1) * [T^(m+1)] F(-log(1-T)).
    """
    bound = DEFAULT_MAX_TTILDE if max_ttilde is None else max_ttilde
    if max_m < 0:
        raise DomainError(f"max_m must be >= 0, got {max_m}")
    if max_m > bound:
        raise BoundsError(f"max_m = {max_m} exceeds the bound {bound}")
    order = max_m + 1
    comp = even_zeta_series(order).compose(neg_log1m_series(order))
    values = tuple((m + 1) * comp.coefficient(m + 1) for m in range(max_m + 1))
    return SecondaryToddTable(max_m, values)


def ttilde(m: int, max_ttilde: int | None = None) -> Fraction:
    """The m-th secondary Todd number."""
    if m < 0:
        raise DomainError(f"index must be >= 0, got {m}")
    return ttilde_table(m, max_ttilde)[m]


# ---------------------------------------------------------------------------
# The beta family
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def aux_r_series(order: int) -> Series:
    """R(x) = sum_{m>=1} zeta(1-2m) x^(2m-1) / ((2m-1) * (2m-1)!).

    This is what the t-integral of the regularized integrand collapses to;
    it has odd-degree terms only.
    """
    coeffs = [Fraction(0)] * (order + 1)
    m = 1
    while 2 * m - 1 <= order:
        coeffs[2 * m - 1] = zeta_negative_odd(m) / (
            (2 * m - 1) * math.factorial(2 * m - 1)
        )
        m += 1
    return Series(RATIONALS, order, tuple(coeffs))


def regularized_cotangent_series(order: int) -> Series:
    """g(u) = 1/2 - sum_{m>=1} B_{2m} u^(2m-1) / (2m)!.

    The regular expansion of 1/u - e^(-u)/(1-e^(-u)); the pole of each summand
    cancels, so the combination is constructed directly rather than by
    symbolic pole cancellation.
    """
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1, 2)
    m = 1
    while 2 * m - 1 <= order:
        coeffs[2 * m - 1] = -bernoulli(2 * m) / math.factorial(2 * m)
        m += 1
    return Series(RATIONALS, order, tuple(coeffs))


@lru_cache(maxsize=None)
def _integrated_g_series(order: int) -> Series:
    """int_0^1 (g(t*x) - g(0))/t dt via the Q[t] machinery."""
    g = regularized_cotangent_series(order)
    # substitute u = t*x: the x^i coefficient becomes g_i * t^i
    gtx = Series(
        RATIONAL_POLYS,
        order,
        tuple(
            TPoly.of([Fraction(0)] * i + [c]) for i, c in enumerate(g.coeffs)
        ),
    )
    return integrate_t_01(subtract_t0_divide_t(gtx))


def beta_integral(
    n: int, k: int, max_n: int | None = None, max_abs_k: int | None = None
) -> Fraction:
    """Coefficient of x^n in the t-integrated correction series.

    Two internally independent routes are evaluated and cross-checked on
    every call: the explicit Q[t] integration of the regularized integrand,
    and the precomputed odd zeta series R(x).
    """
    check_bounds(n, k, max_n, max_abs_k)
    carrier = exp_series(n, k) * todd_power(n, n)
    via_t = (carrier * _integrated_g_series(n)).coefficient(n)
    via_r = (carrier * aux_r_series(n)).coefficient(n)
    if via_t != via_r:
        raise AssertionError(
            f"internal cross-check failed at (n={n}, k={k}): {via_t} != {via_r}"
        )
    return via_t


def beta_genus(
    n: int, k: int, max_n: int | None = None, max_abs_k: int | None = None
) -> Fraction:
    """sum_{j=0}^{n} Ttd_{n-j} * k^j / j!, the finite-sum route."""
    check_bounds(n, k, max_n, max_abs_k)
    table = ttilde_table(n)
    return sum(
        (table[n - j] * Fraction(k**j, math.factorial(j)) for j in range(n + 1)),
        Fraction(0),
    )


def beta_genus_k_polynomial(n: int) -> list[Fraction]:
    """beta_genus(n, -) as a polynomial in k; entry j is the k^j coefficient."""
    table = ttilde_table(n)
    return [table[n - j] / math.factorial(j) for j in range(n + 1)]


def alpha_literal_k_polynomial(n: int) -> list[Fraction]:
    """alpha_literal(n, -) as a polynomial in k of degree n+1."""
    td = todd_power(n, n + 1)
    return [td.coefficient(n + 1 - i) / math.factorial(i) for i in range(n + 2)]


def beta_residual(
    n: int, k: int, max_n: int | None = None, max_abs_k: int | None = None
) -> Fraction:
    """beta_integral - beta_genus; zero exactly where the two routes agree."""
    return beta_integral(n, k, max_n, max_abs_k) - beta_genus(n, k, max_n, max_abs_k)
