"""Exact scalar arithmetic.

Rationals are ``fractions.Fraction`` (arbitrary precision, always in lowest
terms with positive denominator).  On top of them this module provides the
log-extended numbers q0 + sum_p q_p*log(p) over prime bases, which carry every
degree-one arithmetic quantity in this package, plus the standard constants
(Bernoulli numbers, zeta at negative odd integers, harmonic sums).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

# Largest prime factor we are willing to certify by trial division plus a
# deterministic primality check.  Inputs in scope are factorials and small
# ratios, so this is never approached in practice.
_MAX_PRIME_FACTOR = 2**64

# Trial division covers everything below this bound before we fall back to a
# primality test on the remaining cofactor.
_TRIAL_BOUND = 1_000_000


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UnsupportedInputError(ValueError):
    """Input is valid but outside the supported range of this artifact."""


def _is_prime(n: int) -> bool:
    # sympy's test is deterministic far beyond 2**64; imported lazily because
    # factorial-shaped inputs never reach this path.
    from sympy import isprime

    return bool(isprime(n))


def factor_positive_integer(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as {prime: exponent}.

    Raises UnsupportedInputError if a prime factor above 2**64 would be
    needed; everything in scope factors over small primes.
    """
    if n <= 0:
        raise DomainError(f"can only factor positive integers, got {n}")
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 5
    while p <= _TRIAL_BOUND and p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        # 2/4 wheel: skips multiples of 2 and 3.
        p += 2 if p % 6 == 5 else 4
    if n > 1:
        if n < _TRIAL_BOUND * _TRIAL_BOUND or _is_prime(n):
            # No factor up to the trial bound, so a cofactor below its square
            # is prime; larger cofactors are certified explicitly.
            factors[n] = factors.get(n, 0) + 1
        elif n > _MAX_PRIME_FACTOR:
            raise UnsupportedInputError(
                f"cofactor {n} exceeds 2**64 and is not prime; refusing to factor"
            )
        else:
            from sympy import factorint

            for q, e in factorint(n).items():
                factors[int(q)] = factors.get(int(q), 0) + int(e)
    return factors


@dataclass(frozen=True)
class LogNumber:
    """Exact real of the form q0 + sum_p q_p*log(p), p prime, q in Q.

    Equality is structural, which is exact equality of reals because
    {1} union {log p} is linearly independent over Q.  Only the Q-module
    structure is provided; products of two log-bearing numbers never occur
    in scope and are deliberately unsupported.
    """

    rational: Fraction = Fraction(0)
    logs: tuple[tuple[int, Fraction], ...] = ()

    @staticmethod
    def make(rational: Fraction | int = 0, logs: dict[int, Fraction] | None = None) -> "LogNumber":
        """Normalized constructor: drops zero coefficients, sorts by prime."""
        items = tuple(
            (p, Fraction(c)) for p, c in sorted((logs or {}).items()) if c != 0
        )
        return LogNumber(Fraction(rational), items)

    @staticmethod
    def from_rational(q: Fraction | int) -> "LogNumber":
        return LogNumber(Fraction(q), ())

    def log_terms(self) -> dict[int, Fraction]:
        return dict(self.logs)

    @property
    def is_rational(self) -> bool:
        return not self.logs

    def __add__(self, other: "LogNumber") -> "LogNumber":
        if not isinstance(other, LogNumber):
            return NotImplemented
        terms = dict(self.logs)
        for p, c in other.logs:
            terms[p] = terms.get(p, Fraction(0)) + c
        return LogNumber.make(self.rational + other.rational, terms)

    def __sub__(self, other: "LogNumber") -> "LogNumber":
        return self + (-other)

    def __neg__(self) -> "LogNumber":
        return LogNumber(-self.rational, tuple((p, -c) for p, c in self.logs))

    def scale(self, q: Fraction | int) -> "LogNumber":
        q = Fraction(q)
        if q == 0:
            return LogNumber.zero()
        return LogNumber(self.rational * q, tuple((p, c * q) for p, c in self.logs))

    def __mul__(self, other):
        # Q-module structure only: LogNumber * LogNumber is not a LogNumber.
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.rational) or bool(self.logs)

    @staticmethod
    def zero() -> "LogNumber":
        return LogNumber()

    def __str__(self) -> str:
        parts: list[str] = []
        if self.rational or not self.logs:
            parts.append(str(self.rational))
        for p, c in self.logs:
            if c == 1:
                parts.append(f"log({p})")
            elif c == -1:
                parts.append(f"-log({p})")
            else:
                parts.append(f"({c})*log({p})")
        out = parts[0]
        for term in parts[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out


def log_of_rational(q: Fraction | int) -> LogNumber:
    """log(q) of a positive rational, decomposed over prime bases exactly."""
    q = Fraction(q)
    if q <= 0:
        raise DomainError(f"log requires a positive rational, got {q}")
    terms: dict[int, Fraction] = {}
    for p, e in factor_positive_integer(q.numerator).items():
        terms[p] = terms.get(p, Fraction(0)) + e
    for p, e in factor_positive_integer(q.denominator).items():
        terms[p] = terms.get(p, Fraction(0)) - e
    return LogNumber.make(0, terms)


def log_of_factorial(n: int) -> LogNumber:
    """log(n!) as an exact LogNumber."""
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    return log_of_rational(Fraction(math.factorial(n)))


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m in the B_1 = -1/2 convention (x/(e^x-1))."""
    if m < 0:
        raise DomainError(f"Bernoulli numbers need m >= 0, got {m}")
    if m == 0:
        return Fraction(1)
    if m % 2 == 1:
        return Fraction(-1, 2) if m == 1 else Fraction(0)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    acc = Fraction(0)
    for j in range(m):
        acc += math.comb(m + 1, j) * bernoulli(j)
    return -acc / (m + 1)


def zeta_negative_odd(m: int) -> Fraction:
    """zeta(1 - 2m) = -B_{2m}/(2m), exact, for m >= 1."""
    if m < 1:
        raise DomainError(f"zeta_negative_odd needs m >= 1, got {m}")
    return -bernoulli(2 * m) / (2 * m)


@dataclass(frozen=True)
class HarmonicData:
    """Harmonic numbers H_p for p <= n and their sum over p = 1..n."""

    n: int
    H: tuple[Fraction, ...]  # H[p] for p = 0..n, H[0] = 0
    Sigma: Fraction

    def __post_init__(self):
        assert len(self.H) == self.n + 1


@lru_cache(maxsize=None)
def harmonic_data(n: int) -> HarmonicData:
    if n < 0:
        raise DomainError(f"harmonic_data needs n >= 0, got {n}")
    H = [Fraction(0)]
    for p in range(1, n + 1):
        H.append(H[-1] + Fraction(1, p))
    return HarmonicData(n, tuple(H), sum(H[1:], Fraction(0)))


def harmonic_double_sum(n: int) -> Fraction:
    """sum_{p=1}^{n} sum_{j=1}^{p} 1/j."""
    return harmonic_data(n).Sigma


# ---------------------------------------------------------------------------
# Decimal rendering
# ---------------------------------------------------------------------------


def _format_scaled(n: int, digits: int) -> str:
    """Render the integer n as n/10**digits in fixed-point notation."""
    sign = "-" if n < 0 else ""
    n = abs(n)
    if digits == 0:
        return f"{sign}{n}"
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def lognumber_to_decimal(x: LogNumber, digits: int) -> str:
    """Correctly rounded fixed-point rendering with `digits` decimal places.

    Pure rationals round exactly (ties to even).  Log-bearing values are
    irrational, so interval evaluation of the logs at increasing precision
    settles the rounding unambiguously.
    """
    if digits <= 0 or digits > 1000:
        raise DomainError(f"digits must be in 1..1000, got {digits}")
    scale = 10**digits
    if x.is_rational:
        return _format_scaled(round(x.rational * scale), digits)

    import mpmath

    # enough bits that the integer part of the scaled value is exact, so the
    # endpoint floors cannot agree on a wrongly rounded integer
    magnitude = abs(x.rational) + sum((abs(c) * p for p, c in x.logs), Fraction(0))
    mag_bits = (int(magnitude) + 2).bit_length()
    prec = int(digits * 3.33) + mag_bits + 40
    while True:
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = prec
            with mpmath.workprec(prec):
                total = iv.mpf(x.rational.numerator) / iv.mpf(x.rational.denominator)
                for p, c in x.logs:
                    total += (iv.mpf(c.numerator) / iv.mpf(c.denominator)) * iv.log(p)
                # round-to-nearest = floor(y + 1/2); no ties since irrational
                shifted = total * scale + iv.mpf(1) / iv.mpf(2)
                lo = int(mpmath.floor(shifted.a))
                hi = int(mpmath.floor(shifted.b))
        finally:
            iv.prec = old
        if lo == hi:
            return _format_scaled(lo, digits)
        prec *= 2


def lognumber_float(x: LogNumber) -> float:
    """Double-precision approximation, for display annotations only."""
    v = float(x.rational)
    for p, c in x.logs:
        v += float(c) * math.log(p)
    return v
