"""Analytic-torsion characteristic numbers for line bundles on P^n.

The number t(n, k) measures the archimedean defect in the Riemann-Roch
identity for the k-th power of the hyperplane bundle with its standard
metric, pushed forward to the base along with the L^2 metric on global
sections.  Everything reduces to exact rationals and logs of integers:

* the L^2 Gram data of the monomial basis,  |x_0^a0 ... x_n^an|^2
  = a_0! ... a_n! / (k+n)!,
* the archimedean pushforward (1/2) (alpha(n,k) * Sigma_n + beta(n,k)),
* the closed-table values  t(n,0) = -(1/2) Sigma_n  and
  t(n,k) = -(1/2) sum_j Ttd_{n-j} k^j / j!  for -n <= k <= -1.

The module also reports the places where the two beta routes, the two
k = 0 characterizations, and the two duality signs disagree; residuals are
surfaced, never silently reconciled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional

from . import genera
from .scalars import (
    DomainError,
    LogNumber,
    UnsupportedInputError,
    harmonic_double_sum,
    log_of_factorial,
)

DEFAULT_ENUMERATION_BOUND = 10**6

BETA_ROUTES = ("genus", "integral")


def beta(n: int, k: int, route: str = "genus") -> Fraction:
    if route == "genus":
        return genera.beta_genus(n, k)
    if route == "integral":
        return genera.beta_integral(n, k)
    raise DomainError(f"unknown beta route {route!r}; expected one of {BETA_ROUTES}")


# ---------------------------------------------------------------------------
# Monomials and L^2 norms
# ---------------------------------------------------------------------------


def monomials(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All exponent tuples (a_0..a_n) with sum k, lexicographic, streamed."""
    if n < 0 or k < 0:
        raise DomainError("monomials need n >= 0 and k >= 0")
    if n == 0:
        yield (k,)
        return
    for bars in combinations(range(k + n), n):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(k + n - 1 - prev)
        yield tuple(out)


def monomial_count(n: int, k: int) -> int:
    return math.comb(k + n, n)


def l2_norm_squared(n: int, k: int, exponents: tuple[int, ...]) -> Fraction:
    """Squared L^2 norm of a degree-k monomial section: a_0!...a_n!/(k+n)!."""
    if len(exponents) != n + 1 or any(a < 0 for a in exponents):
        raise DomainError(f"need n+1 = {n + 1} nonnegative exponents, got {exponents}")
    if sum(exponents) != k:
        raise DomainError(f"exponents {exponents} do not sum to k = {k}")
    num = 1
    for a in exponents:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(k + n))


def _factorial_prime_exponents(limit: int) -> list[dict[int, int]]:
    """exps[m][p] = multiplicity of p in m!, for m = 0..limit."""
    table: list[dict[int, int]] = [{}]
    for m in range(1, limit + 1):
        cur = dict(table[-1])
        rem = m
        d = 2
        while d * d <= rem:
            while rem % d == 0:
                cur[d] = cur.get(d, 0) + 1
                rem //= d
            d += 1
        if rem > 1:
            cur[rem] = cur.get(rem, 0) + 1
        table.append(cur)
    return table


@lru_cache(maxsize=None)
def chh1_L2(n: int, k: int, enumeration_bound: int | None = None) -> LogNumber:
    """Degree-one part of the metrized character of the section module.

    Exactly -(1/2) * sum over all monomials of log of the squared L^2 norm.
    The sum is evaluated by counting how often each factorial appears across
    the (symmetric) monomial set, which agrees with direct enumeration.
    """
    if n < 0 or k < 0:
        raise DomainError("chh1_L2 needs n >= 0 and k >= 0")
    bound = DEFAULT_ENUMERATION_BOUND if enumeration_bound is None else enumeration_bound
    count = monomial_count(n, k)
    if count > bound:
        raise UnsupportedInputError(
            f"monomial count {count} exceeds the enumeration bound {bound}"
        )
    fact_exps = _factorial_prime_exponents(k + n)
    total: dict[int, int] = {}
    # number of monomials whose first exponent equals a, times n+1 slots
    for a in range(k + 1):
        if n == 0:
            slot_count = 1 if a == k else 0
        else:
            slot_count = math.comb(k - a + n - 1, n - 1)
        if slot_count == 0:
            continue
        weight = (n + 1) * slot_count
        for p, e in fact_exps[a].items():
            total[p] = total.get(p, 0) + weight * e
    for p, e in fact_exps[k + n].items():
        total[p] = total.get(p, 0) - count * e
    return LogNumber.make(0, {p: Fraction(-e, 2) for p, e in total.items()})


def chh1_by_enumeration(n: int, k: int) -> LogNumber:
    """Direct streamed evaluation of the same sum; cross-check oracle."""
    from .scalars import log_of_rational

    acc = LogNumber.zero()
    for mono in monomials(n, k):
        acc = acc + log_of_rational(l2_norm_squared(n, k, mono))
    return acc.scale(Fraction(-1, 2))


def chh1_primed(n: int, k: int) -> LogNumber:
    """Character of the normalized direct image: zero for -n <= k <= 0.

    For k in that range the direct image is represented by the trivial
    metric (unit section norm), so the degree-one part vanishes; for k >= 1
    it is the L^2 value.  k < -n would need dual metrics that this artifact
    deliberately does not model.
    """
    if k < -n:
        raise UnsupportedInputError(
            f"k = {k} < -n = {-n}: dual-metric bookkeeping is not modeled"
        )
    if k <= 0:
        return LogNumber.zero()
    return chh1_L2(n, k)


# ---------------------------------------------------------------------------
# The characteristic numbers
# ---------------------------------------------------------------------------


def pushforward_arch(n: int, k: int, beta_route: str = "genus") -> LogNumber:
    """(1/2) * (alpha(n,k) * Sigma_n + beta(n,k)) as a rational LogNumber."""
    value = Fraction(1, 2) * (
        genera.alpha(n, k) * harmonic_double_sum(n) + beta(n, k, beta_route)
    )
    return LogNumber.from_rational(value)


def t_primed_grr(n: int, k: int, beta_route: str = "genus") -> LogNumber:
    """Riemann-Roch route: chh1_primed(n,k) - pushforward_arch(n,k)."""
    return chh1_primed(n, k) - pushforward_arch(n, k, beta_route)


def t_value(n: int, k: int, beta_route: str = "genus") -> LogNumber:
    """Unprimed convention: add (1/2) log n! at k = 0, identity otherwise."""
    t = t_primed_grr(n, k, beta_route)
    if k == 0:
        t = t + log_of_factorial(n).scale(Fraction(1, 2))
    return t


def t_table_value(n: int, k: int, beta_route: str = "genus") -> LogNumber:
    """Closed-table value, defined for -n <= k <= 0.

    The default genus route is the printed closed table; the integral route
    gives the variant table that satisfies the duality functional equation
    exactly (the two coincide for n <= 2 and for k = 0 ... k = -n at n <= 2).
    """
    if not -n <= k <= 0:
        raise DomainError(f"table values exist for -n <= k <= 0, got k = {k}")
    if k == 0:
        return LogNumber.from_rational(-harmonic_double_sum(n) / 2)
    return LogNumber.from_rational(-beta(n, k, beta_route) / 2)


def t_table(n: int) -> list[tuple[int, LogNumber]]:
    """The principal table, k = 0 down to -n."""
    return [(k, t_table_value(n, k)) for k in range(0, -n - 1, -1)]


def grr_k0_residual(n: int) -> LogNumber:
    """t_value(n,0) minus the table value: (1/2)(log n! - Ttd_n).

    The two printed characterizations of t(n,0) differ by exactly this;
    both are reported, neither is adjudicated.
    """
    return t_value(n, 0, "genus") - t_table_value(n, 0)


def duality_residuals(
    n: int, k: int, beta_route: str = "genus"
) -> tuple[LogNumber, LogNumber]:
    """Residuals of the reflection k <-> -k-n-1 on the closed table.

    Returns (printed-sign residual, flipped-sign residual):
        t(n,k) - (-1)^n     t(n,-k-n-1)
        t(n,k) - (-1)^(n+1) t(n,-k-n-1)

    On the integral route the flipped-sign residual vanishes identically
    (the integrand satisfies Td(-x) = e^(-x) Td(x) with an odd zeta factor,
    forcing beta(n,k) = (-1)^(n+1) beta(n,-k-n-1)); the genus-route table
    inherits that symmetry only where the two beta routes agree (n <= 2 and
    the fixed point k = -(n+1)/2), another face of the beta discrepancy.
    """
    if not -n <= k <= -1:
        raise DomainError(f"duality pairs need -n <= k <= -1, got k = {k}")
    left = t_table_value(n, k, beta_route)
    right = t_table_value(n, -k - n - 1, beta_route)
    sign = 1 if n % 2 == 0 else -1
    return left - right.scale(sign), left - right.scale(-sign)


# ---------------------------------------------------------------------------
# Consistency reporting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    """One (n, k) row of the consistency ledger."""

    n: int
    k: int
    alpha: Fraction
    beta_integral: Fraction
    beta_genus: Fraction
    chh1: LogNumber
    pushforward_arch: LogNumber
    t_grr: LogNumber  # primed convention: chh1 - pushforward_arch
    t_table: Optional[LogNumber]
    grr_vs_table: Optional[LogNumber]  # t_value - t_table where both exist
    flag: str  # MATCH | LEDGER | N/A
    duality_residual_printed: Optional[LogNumber]
    duality_residual_flipped: Optional[LogNumber]

    def __post_init__(self):
        assert self.t_grr == self.chh1 - self.pushforward_arch


def consistency_report(n: int, beta_route: str = "genus") -> list[TorsionReport]:
    """Rows for k = -n .. n under the selected beta route."""
    rows = []
    for k in range(-n, n + 1):
        ch = chh1_primed(n, k)
        pf = pushforward_arch(n, k, beta_route)
        t_grr = ch - pf
        table = t_table_value(n, k) if -n <= k <= 0 else None
        if table is not None:
            diff = t_value(n, k, beta_route) - table
            flag = "MATCH" if not diff else "LEDGER"
        else:
            diff = None
            flag = "N/A"
        if -n <= k <= -1:
            printed, flipped = duality_residuals(n, k, beta_route)
        else:
            printed = flipped = None
        rows.append(
            TorsionReport(
                n=n,
                k=k,
                alpha=genera.alpha(n, k),
                beta_integral=genera.beta_integral(n, k),
                beta_genus=genera.beta_genus(n, k),
                chh1=ch,
                pushforward_arch=pf,
                t_grr=t_grr,
                t_table=table,
                grr_vs_table=diff,
                flag=flag,
                duality_residual_printed=printed,
                duality_residual_flipped=flipped,
            )
        )
    return rows
