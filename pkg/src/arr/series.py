"""Truncated univariate formal power series over an exact coefficient ring.

A series of order N is exact modulo x^(N+1) and stores exactly N+1
coefficients.  Two coefficient rings ship with the package: the rationals and
the polynomial ring Q[t] in an auxiliary variable t, which is needed to
integrate series coefficients over t in [0, 1].

Multiplication is schoolbook convolution; orders in scope stay below ~40, so
exactness and simplicity beat asymptotics.  Mixed-order operations truncate
down to the smaller order, which the result records.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable

from .scalars import DomainError


# ---------------------------------------------------------------------------
# Coefficient rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TPoly:
    """Polynomial in the auxiliary variable t over Q, exact coefficients."""

    coeffs: tuple[Fraction, ...] = ()  # coeffs[i] multiplies t**i; no trailing zeros

    @staticmethod
    def of(values: Iterable[Fraction | int]) -> "TPoly":
        c = [Fraction(v) for v in values]
        while c and c[-1] == 0:
            c.pop()
        return TPoly(tuple(c))

    @staticmethod
    def constant(q: Fraction | int) -> "TPoly":
        return TPoly.of([q])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "TPoly") -> "TPoly":
        if not isinstance(other, TPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return TPoly.of(out)

    def __neg__(self) -> "TPoly":
        return TPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TPoly.of(c * other for c in self.coeffs)
        if not isinstance(other, TPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return TPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return TPoly.of(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return TPoly.of(c / Fraction(other) for c in self.coeffs)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def at_zero(self) -> Fraction:
        """Value at t = 0."""
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def shift_down(self) -> "TPoly":
        """Divide by t; requires zero constant term."""
        if self.coeffs and self.coeffs[0] != 0:
            raise DomainError("polynomial not divisible by t")
        return TPoly(self.coeffs[1:])

    def integral_01(self) -> Fraction:
        """Exact integral over t in [0, 1]."""
        return sum(
            (c / (i + 1) for i, c in enumerate(self.coeffs)), Fraction(0)
        )

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return " + ".join(parts)


class CoefficientRing:
    """Capabilities the series engine needs from its coefficient ring.

    Elements themselves carry the arithmetic (+, -, *, ==); the ring object
    supplies constants, embedding of rationals, and inversion of units.
    """

    name: str = "?"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_rational(self, q: Fraction | int):
        raise NotImplementedError

    def invert(self, a):
        """Multiplicative inverse of a unit; raises DomainError otherwise."""
        raise NotImplementedError


class _RationalField(CoefficientRing):
    name = "QQ"

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def from_rational(self, q) -> Fraction:
        return Fraction(q)

    def invert(self, a: Fraction) -> Fraction:
        if a == 0:
            raise DomainError("division by zero in Q")
        return 1 / Fraction(a)


class _RationalPolynomialRing(CoefficientRing):
    name = "QQ[t]"

    def zero(self) -> TPoly:
        return TPoly()

    def one(self) -> TPoly:
        return TPoly.constant(1)

    def from_rational(self, q) -> TPoly:
        return TPoly.constant(q)

    def invert(self, a: TPoly) -> TPoly:
        if a.degree != 0:
            raise DomainError(f"{a} is not a unit in Q[t]")
        return TPoly.constant(1 / a.coeffs[0])


RATIONALS = _RationalField()
RATIONAL_POLYS = _RationalPolynomialRing()


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Series:
    """Truncated power series: exact modulo x^(order+1)."""

    ring: CoefficientRing
    order: int
    coeffs: tuple

    def __post_init__(self):
        if self.order < 0:
            raise DomainError(f"order must be >= 0, got {self.order}")
        if len(self.coeffs) != self.order + 1:
            raise DomainError(
                f"series of order {self.order} needs {self.order + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    @staticmethod
    def of(ring: CoefficientRing, order: int, coeffs: Iterable) -> "Series":
        c = list(coeffs)
        if len(c) > order + 1:
            raise DomainError("more coefficients than the order admits")
        c += [ring.zero()] * (order + 1 - len(c))
        return Series(ring, order, tuple(c))

    @staticmethod
    def zero(ring: CoefficientRing, order: int) -> "Series":
        return Series.of(ring, order, [])

    @staticmethod
    def one(ring: CoefficientRing, order: int) -> "Series":
        return Series.of(ring, order, [ring.one()])

    @staticmethod
    def x(ring: CoefficientRing, order: int) -> "Series":
        return Series.of(ring, order, [ring.zero(), ring.one()])

    def coefficient(self, i: int):
        if not 0 <= i <= self.order:
            raise DomainError(
                f"coefficient index {i} out of range for order {self.order}"
            )
        return self.coeffs[i]

    def truncate(self, order: int) -> "Series":
        if order >= self.order:
            return self
        return Series(self.ring, order, self.coeffs[: order + 1])

    def _common(self, other: "Series") -> tuple["Series", "Series"]:
        if self.ring is not other.ring:
            raise DomainError("series over different coefficient rings")
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n)

    def __add__(self, other: "Series") -> "Series":
        a, b = self._common(other)
        return Series(a.ring, a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __sub__(self, other: "Series") -> "Series":
        a, b = self._common(other)
        return Series(a.ring, a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __neg__(self) -> "Series":
        return Series(self.ring, self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            s = self.ring.from_rational(other)
            return Series(self.ring, self.order, tuple(c * s for c in self.coeffs))
        a, b = self._common(other)
        n = a.order
        zero = a.ring.zero()
        out = [zero] * (n + 1)
        for i, ca in enumerate(a.coeffs):
            if ca == zero:
                continue
            for j in range(n + 1 - i):
                cb = b.coeffs[j]
                if cb != zero:
                    out[i + j] = out[i + j] + ca * cb
        return Series(a.ring, n, tuple(out))

    __rmul__ = __mul__

    def pow(self, e: int) -> "Series":
        if e < 0:
            return self.invert().pow(-e)
        acc = Series.one(self.ring, self.order)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base if e > 1 else base
            e >>= 1
        return acc

    def invert(self) -> "Series":
        """Multiplicative inverse; the constant term must be a unit."""
        b0 = self.ring.invert(self.coeffs[0])
        out = [b0]
        for n in range(1, self.order + 1):
            acc = self.ring.zero()
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(-(b0 * acc))
        return Series(self.ring, self.order, tuple(out))

    def derivative(self) -> "Series":
        """d/dx, order drops by one (order-0 series differentiates to 0)."""
        if self.order == 0:
            return Series(self.ring, 0, (self.ring.zero(),))
        return Series(
            self.ring,
            self.order - 1,
            tuple(c * (i + 1) for i, c in enumerate(self.coeffs[1:])),
        )

    def antiderivative(self, constant=None) -> "Series":
        """Termwise antiderivative with given constant term; order grows by one."""
        c0 = constant if constant is not None else self.ring.zero()
        out = [c0] + [c * Fraction(1, i + 1) for i, c in enumerate(self.coeffs)]
        return Series(self.ring, self.order + 1, tuple(out))

    def exp(self) -> "Series":
        """exp of a series with zero constant term.

        E' = E * f' gives the coefficient recurrence
        e_n = (1/n) * sum_{j=1..n} j * f_j * e_{n-j}.
        """
        zero = self.ring.zero()
        if self.coeffs[0] != zero:
            raise DomainError("exp needs a zero constant term")
        out = [self.ring.one()]
        for n in range(1, self.order + 1):
            acc = zero
            for j in range(1, n + 1):
                acc = acc + (self.coeffs[j] * j) * out[n - j]
            out.append(acc * Fraction(1, n))
        return Series(self.ring, self.order, tuple(out))

    def log(self) -> "Series":
        """log of a series with constant term one.

        L' = f'/f, integrated with L(0) = 0.
        """
        if self.coeffs[0] != self.ring.one():
            raise DomainError("log needs constant term one")
        if self.order == 0:
            return Series.zero(self.ring, 0)
        g = self.derivative() * self.truncate(self.order - 1).invert()
        return g.antiderivative()

    def compose(self, inner: "Series") -> "Series":
        """self(inner(x)), requiring inner to have zero constant term."""
        if self.ring is not inner.ring:
            raise DomainError("series over different coefficient rings")
        if inner.coeffs[0] != inner.ring.zero():
            raise DomainError("composition needs zero constant term in the inner series")
        n = min(self.order, inner.order)
        f = self.truncate(n)
        g = inner.truncate(n)
        acc = Series.of(f.ring, n, [f.coeffs[n]])
        for i in range(n - 1, -1, -1):
            acc = acc * g + Series.of(f.ring, n, [f.coeffs[i]])
        return acc

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == self.ring.zero():
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"({c})*x")
            else:
                terms.append(f"({c})*x^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^{self.order + 1})"


# ---------------------------------------------------------------------------
# Stock series over Q
# ---------------------------------------------------------------------------


def exp_series(order: int, k: Fraction | int = 1) -> Series:
    """e^(k*x) truncated at the given order."""
    k = Fraction(k)
    coeffs = [Fraction(1)]
    for i in range(1, order + 1):
        coeffs.append(coeffs[-1] * k / i)
    return Series(RATIONALS, order, tuple(coeffs))


@lru_cache(maxsize=None)
def todd_denominator_series(order: int) -> Series:
    """(1 - e^(-x))/x = sum_i (-1)^i x^i / (i+1)!, truncated."""
    coeffs = []
    fact = 1
    for i in range(order + 1):
        fact *= i + 1
        coeffs.append(Fraction((-1) ** i, fact))
    return Series(RATIONALS, order, tuple(coeffs))


@lru_cache(maxsize=None)
def todd_series(order: int) -> Series:
    """x/(1 - e^(-x)), obtained by series division (never from a table)."""
    return todd_denominator_series(order).invert()


def geometric_series(order: int) -> Series:
    """1/(1-x)."""
    return Series(RATIONALS, order, tuple(Fraction(1) for _ in range(order + 1)))


# ---------------------------------------------------------------------------
# The Q[t] integration step
# ---------------------------------------------------------------------------


def subtract_t0_divide_t(f: Series) -> Series:
    """(f - f|_{t=0}) / t, coefficientwise in the x-series over Q[t]."""
    if f.ring is not RATIONAL_POLYS:
        raise DomainError("subtract_t0_divide_t expects a series over Q[t]")
    out = []
    for c in f.coeffs:
        shifted = (c - TPoly.constant(c.at_zero())).shift_down()
        out.append(shifted)
    return Series(RATIONAL_POLYS, f.order, tuple(out))


def integrate_t_01(f: Series) -> Series:
    """Integrate each x-coefficient (a polynomial in t) over t in [0, 1]."""
    if f.ring is not RATIONAL_POLYS:
        raise DomainError("integrate_t_01 expects a series over Q[t]")
    return Series(RATIONALS, f.order, tuple(c.integral_01() for c in f.coeffs))


def lift_to_tpolys(f: Series) -> Series:
    """Reinterpret a series over Q as a series over Q[t] with constant coefficients."""
    if f.ring is not RATIONALS:
        raise DomainError("lift_to_tpolys expects a series over Q")
    return Series(RATIONAL_POLYS, f.order, tuple(TPoly.constant(c) for c in f.coeffs))
