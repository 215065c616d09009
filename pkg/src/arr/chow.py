"""A finite exact model of the arithmetic intersection ring of P^n.

Classes are polynomials in the hyperplane generator h of degree at most n+1
(h^(n+2) = 0) whose coefficients are "dual-log" scalars: a rational geometric
part together with a LogNumber archimedean part that multiplies as a
square-zero ideal,

    (q, a) * (q', a') = (q*q', q*a' + q'*a).

Only the information that survives down to degree one over the base is
tracked: closed points, torsion classes and all current-level data are
deliberately collapsed into the scalar.  The pushforward to the base reads
off the degree-n geometric coefficient plus the height pairing
h^(n+1) -> (1/2) * sum_{p<=n} H_p of the top power of the generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .genera import (
    alpha_literal_k_polynomial,
    beta_genus_k_polynomial,
    todd_power,
)
from .scalars import DomainError, LogNumber, harmonic_double_sum
from .series import RATIONALS, Series, exp_series, todd_series


@dataclass(frozen=True)
class DualLog:
    """Scalar with square-zero archimedean part."""

    geometric: Fraction = Fraction(0)
    archimedean: LogNumber = LogNumber.zero()

    @staticmethod
    def of(geometric: Fraction | int = 0, archimedean: LogNumber | None = None) -> "DualLog":
        return DualLog(Fraction(geometric), archimedean or LogNumber.zero())

    @staticmethod
    def zero() -> "DualLog":
        return DualLog()

    @staticmethod
    def one() -> "DualLog":
        return DualLog(Fraction(1), LogNumber.zero())

    def __add__(self, other: "DualLog") -> "DualLog":
        return DualLog(self.geometric + other.geometric, self.archimedean + other.archimedean)

    def __neg__(self) -> "DualLog":
        return DualLog(-self.geometric, -self.archimedean)

    def __sub__(self, other: "DualLog") -> "DualLog":
        return self + (-other)

    def __mul__(self, other: "DualLog") -> "DualLog":
        if not isinstance(other, DualLog):
            return NotImplemented
        return DualLog(
            self.geometric * other.geometric,
            self.archimedean.scale(other.geometric) + other.archimedean.scale(self.geometric),
        )

    def scale(self, q: Fraction | int) -> "DualLog":
        q = Fraction(q)
        return DualLog(self.geometric * q, self.archimedean.scale(q))

    def __bool__(self) -> bool:
        return bool(self.geometric) or bool(self.archimedean)

    def __str__(self) -> str:
        return f"({self.geometric}; {self.archimedean})"


@dataclass(frozen=True)
class ModelRing:
    """Immutable configuration: the dimension and the height constant."""

    n: int
    height_constant: LogNumber

    @staticmethod
    def for_dimension(n: int) -> "ModelRing":
        if n < 0:
            raise DomainError(f"dimension must be >= 0, got {n}")
        return ModelRing(n, LogNumber.from_rational(harmonic_double_sum(n) / 2))


@dataclass(frozen=True)
class ModelClass:
    """Element of the model ring: coefficients of h^0 .. h^(n+1)."""

    n: int
    coeffs: tuple[DualLog, ...]

    def __post_init__(self):
        assert len(self.coeffs) == self.n + 2

    def coefficient(self, degree: int) -> DualLog:
        return self.coeffs[degree]

    def __add__(self, other: "ModelClass") -> "ModelClass":
        self._check(other)
        return ModelClass(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ModelClass":
        return ModelClass(self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "ModelClass") -> "ModelClass":
        return self + (-other)

    def __mul__(self, other: "ModelClass") -> "ModelClass":
        self._check(other)
        top = self.n + 1
        out = [DualLog.zero()] * (top + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(top + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return ModelClass(self.n, tuple(out))

    def scale(self, q: Fraction | int) -> "ModelClass":
        return ModelClass(self.n, tuple(c.scale(q) for c in self.coeffs))

    def _check(self, other: "ModelClass") -> None:
        if not isinstance(other, ModelClass) or other.n != self.n:
            raise DomainError("model classes live over different dimensions")

    def __str__(self) -> str:
        terms = [f"{c}*h^{j}" for j, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# Constructors and the structural maps
# ---------------------------------------------------------------------------


def zero_class(ring: ModelRing) -> ModelClass:
    return ModelClass(ring.n, tuple(DualLog.zero() for _ in range(ring.n + 2)))


def one_class(ring: ModelRing) -> ModelClass:
    return monomial(ring, 0, DualLog.one())


def monomial(ring: ModelRing, degree: int, value: DualLog) -> ModelClass:
    if not 0 <= degree <= ring.n + 1:
        raise DomainError(f"degree {degree} out of range 0..{ring.n + 1}")
    coeffs = [DualLog.zero()] * (ring.n + 2)
    coeffs[degree] = value
    return ModelClass(ring.n, tuple(coeffs))


def hyperplane(ring: ModelRing) -> ModelClass:
    """The first Chern class of the metrized line generator."""
    return monomial(ring, 1, DualLog.one())


def amap(ring: ModelRing, lam: LogNumber, degree: int) -> ModelClass:
    """Purely archimedean class in the given degree (kernel of zeta_map)."""
    return monomial(ring, degree, DualLog(Fraction(0), lam))


def zeta_map(x: ModelClass) -> list[Fraction]:
    """Forget the archimedean parts: the underlying cycle-class polynomial."""
    return [c.geometric for c in x.coeffs]


def apply_series(f: Series, x: ModelClass) -> ModelClass:
    """Evaluate a truncated series at a class with vanishing degree-0 part.

    The argument is nilpotent, so this is exact polynomial evaluation; pass a
    series of order at least n+1 to capture every surviving degree.
    """
    if x.coeffs[0]:
        raise DomainError("series evaluation needs a class with zero degree-0 part")
    ring_one = one_class(ModelRing(x.n, LogNumber.zero()))
    acc = ring_one.scale(f.coefficient(f.order))
    for i in range(f.order - 1, -1, -1):
        acc = acc * x + ring_one.scale(f.coefficient(i))
    return acc


def line_class_genus(ring: ModelRing, f: Series, k: int) -> ModelClass:
    """f(k*h) for a genus series f."""
    return apply_series(f, hyperplane(ring).scale(k))


def chern_character_line(ring: ModelRing, k: int) -> ModelClass:
    """ch of the k-th power of the metrized line generator: exp(k*h)."""
    return line_class_genus(ring, exp_series(ring.n + 1), k)


def todd_class_split(ring: ModelRing) -> ModelClass:
    """Td(h)^(n+1): the split-model Todd class, no archimedean correction."""
    n = ring.n
    return apply_series(todd_power(n, n + 1), hyperplane(ring))


# ---------------------------------------------------------------------------
# Pushforward, pullback, and the corrected Todd class
# ---------------------------------------------------------------------------


def pushforward(ring: ModelRing, x: ModelClass) -> DualLog:
    """Direct image to the base.

    Geometric part: the degree-n coefficient (the fiber degree).  Archimedean
    part: the degree-n archimedean coefficient plus the geometric degree-(n+1)
    coefficient paired against the height of the top self-intersection.
    Archimedean data in the top degree is part of what the model collapses.
    """
    n = ring.n
    q_top = x.coeffs[n + 1].geometric
    return DualLog(
        x.coeffs[n].geometric,
        x.coeffs[n].archimedean + ring.height_constant.scale(q_top),
    )


def pullback_from_point(ring: ModelRing, s: DualLog) -> ModelClass:
    """Pullback of a base scalar: the constant class s * 1."""
    return monomial(ring, 0, s)


def projection_formula_check(ring: ModelRing, x: ModelClass, s: DualLog) -> bool:
    """pushforward(x * pullback(s)) == pushforward(x) * s, exactly."""
    lhs = pushforward(ring, x * pullback_from_point(ring, s))
    rhs = pushforward(ring, x) * s
    return lhs == rhs


def solve_todd_correction(n: int) -> list[Fraction]:
    """Solve for the archimedean correction polynomial of the Todd class.

    Requirement: for every integer k the pushforward of exp(k*h) times the
    corrected Todd class has archimedean part

        (1/2) * (A(k) * Sigma_n + B(k)),

    where A is the coefficient of x^(n+1) in e^(kx) Td(x)^(n+1) as a
    polynomial in k and B is the finite Todd-number sum.  The geometric
    h^(n+1) coefficient of the product already contributes A(k) times the
    height, so the correction delta(h) = sum_j d_j h^j must satisfy

        [x^n] e^(kx) delta(x) = (1/2) * B(k)   for all k,

    a triangular system on powers of k: the k^(n-j) coefficient pins d_j.
    Raises if the residual target cannot be matched by degree <= n.
    """
    import math as _math

    half_sigma = harmonic_double_sum(n) / 2
    lit = alpha_literal_k_polynomial(n)  # degree n+1 in k
    target = [c * half_sigma for c in lit]  # required (1/2) * A(k) * Sigma_n
    for j, c in enumerate(beta_genus_k_polynomial(n)):
        target[j] += c / 2
    # subtract the geometric contribution A(k) * height
    residual = [t - c * half_sigma for t, c in zip(target, lit)]
    if any(residual[i] != 0 for i in range(n + 1, len(residual))):
        raise DomainError(
            "todd correction is unsolvable: residual has k-degree above n"
        )
    # [x^n] e^(kx) delta(x) = sum_j d_j k^(n-j)/(n-j)!
    delta = [Fraction(0)] * (n + 1)
    for power in range(n, -1, -1):
        delta[n - power] = residual[power] * _math.factorial(power)
    return delta


@lru_cache(maxsize=None)
def _todd_correction_cached(n: int) -> tuple[Fraction, ...]:
    return tuple(solve_todd_correction(n))


def arithmetic_todd(ring: ModelRing) -> ModelClass:
    """Split Todd class plus the solved archimedean correction."""
    cls = todd_class_split(ring)
    for j, d in enumerate(_todd_correction_cached(ring.n)):
        if d:
            cls = cls + amap(ring, LogNumber.from_rational(d), j)
    return cls


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------


def eq35_identity_check(ring: ModelRing) -> bool:
    """Squaring the pushforward of the Todd class: p^2 == -1 + 2p.

    Holds because the pushforward is 1 plus a square-zero element.
    """
    p = pushforward(ring, one_class(ring) * arithmetic_todd(ring))
    lhs = p * p
    rhs = -DualLog.one() + p.scale(2)
    return lhs == rhs


def thm4_exp_identity_check(ring: ModelRing, lam: LogNumber, degree: int) -> bool:
    """exp of an archimedean class truncates to 1 + a, and exp is additive
    on sums of archimedean classes (all higher powers vanish)."""
    if degree < 1:
        raise DomainError("exponentiation check needs degree >= 1")
    a = amap(ring, lam, degree)
    e = exp_series(ring.n + 1)
    if apply_series(e, a) != one_class(ring) + a:
        return False
    # additivity on a second archimedean class in another degree
    other_degree = min(ring.n + 1, degree + 1) if degree < ring.n + 1 else 1
    b = amap(ring, lam.scale(Fraction(1, 3)) + LogNumber.from_rational(1), other_degree)
    lhs = apply_series(e, a + b)
    rhs = apply_series(e, a) * apply_series(e, b)
    return lhs == rhs == one_class(ring) + a + b
