"""Exact rational polyhedral cones in small dimension.

Cones are finitely generated: the set of nonnegative combinations of the
generators, minus the origin.  Everything runs over Fraction with no floating
point anywhere: Fourier-Motzkin elimination decides feasibility (with native
strict-inequality handling and witness extraction), and a double-description
pass converts facet systems back to generators.  Dimensions in scope are
tiny (<= 4), so simplicity wins over asymptotics throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Sequence

from .scalars import DomainError

Vector = tuple[Fraction, ...]
IntVector = tuple[int, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def primitive_vector(v: Sequence[Fraction | int]) -> IntVector:
    """Scale a nonzero rational vector to coprime integers, keeping direction."""
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise DomainError("zero vector has no direction")
    denom_lcm = 1
    for x in fr:
        d = x.denominator
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    ints = [int(x * denom_lcm) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def mat_vec(m: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def kernel_basis(m: Matrix, ncols: int) -> list[IntVector]:
    """Primitive basis of the rational null space of an (rows x ncols) matrix."""
    rows = [list(map(Fraction, r)) for r in m]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(primitive_vector(vec))
    return basis


@dataclass(frozen=True)
class Cone:
    """Nonnegative hull of finitely many nonzero rational directions, minus 0."""

    generators: tuple[IntVector, ...]

    @staticmethod
    def from_vectors(vectors: Sequence[Sequence[Fraction | int]]) -> "Cone":
        gens = sorted({primitive_vector(v) for v in vectors})
        if not gens:
            raise DomainError("a cone needs at least one generator")
        return Cone(tuple(gens))

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def negated(self) -> "Cone":
        return Cone.from_vectors([tuple(-x for x in g) for g in self.generators])

    @staticmethod
    def subspace(basis: Sequence[IntVector]) -> "Cone":
        gens: list[IntVector] = []
        for b in basis:
            gens.append(b)
            gens.append(tuple(-x for x in b))
        return Cone.from_vectors(gens)


class Constraint(NamedTuple):
    """coeffs . x + const >= 0, or strictly > 0 when strict is set."""

    coeffs: tuple[Fraction, ...]
    const: Fraction
    strict: bool

    def normalized(self) -> "Constraint":
        entries = [abs(c) for c in self.coeffs] + [abs(self.const)]
        nz = [e for e in entries if e != 0]
        if not nz:
            return self
        denom_lcm = 1
        for e in nz:
            denom_lcm = denom_lcm * e.denominator // gcd(denom_lcm, e.denominator)
        nums = [int(e * denom_lcm) for e in entries]
        g = 0
        for x in nums:
            g = gcd(g, abs(x))
        scale = Fraction(denom_lcm, g)
        return Constraint(
            tuple(c * scale for c in self.coeffs), self.const * scale, self.strict
        )


def ge(coeffs: Sequence, const: Fraction | int = 0) -> Constraint:
    return Constraint(tuple(Fraction(c) for c in coeffs), Fraction(const), False)


def gt(coeffs: Sequence, const: Fraction | int = 0) -> Constraint:
    return Constraint(tuple(Fraction(c) for c in coeffs), Fraction(const), True)


def eq_pair(coeffs: Sequence, const: Fraction | int = 0) -> list[Constraint]:
    c = tuple(Fraction(x) for x in coeffs)
    k = Fraction(const)
    return [Constraint(c, k, False), Constraint(tuple(-x for x in c), -k, False)]


def _tidy(constraints: list[Constraint]) -> Optional[list[Constraint]]:
    """Normalize, drop trivially true rows; None when a row is plainly false."""
    seen = set()
    out = []
    for con in constraints:
        if all(c == 0 for c in con.coeffs):
            if con.const < 0 or (con.const == 0 and con.strict):
                return None
            continue
        con = con.normalized()
        key = (con.coeffs, con.const, con.strict)
        if key not in seen:
            seen.add(key)
            out.append(con)
    return out


def fm_eliminate(constraints: list[Constraint], var: int) -> Optional[list[Constraint]]:
    """Project away one variable; None signals detected infeasibility."""
    zero: list[Constraint] = []
    pos: list[Constraint] = []
    neg: list[Constraint] = []
    for con in constraints:
        c = con.coeffs[var]
        (zero if c == 0 else pos if c > 0 else neg).append(con)
    out = list(zero)
    for p in pos:
        cp = p.coeffs[var]
        for q in neg:
            cq = -q.coeffs[var]
            # cq * p + cp * q cancels the variable
            coeffs = tuple(cq * a + cp * b for a, b in zip(p.coeffs, q.coeffs))
            out.append(
                Constraint(coeffs, cq * p.const + cp * q.const, p.strict or q.strict)
            )
    return _tidy(out)


def feasible(constraints: list[Constraint], nvars: int) -> bool:
    cur = _tidy(list(constraints))
    if cur is None:
        return False
    for var in range(nvars - 1, -1, -1):
        cur = fm_eliminate(cur, var)
        if cur is None:
            return False
    return True


def find_solution(constraints: list[Constraint], nvars: int) -> Optional[Vector]:
    """An exact rational point satisfying the system, or None."""
    levels: list[list[Constraint]] = [None] * (nvars + 1)  # type: ignore[list-item]
    cur = _tidy(list(constraints))
    if cur is None:
        return None
    levels[nvars] = cur
    for var in range(nvars - 1, -1, -1):
        cur = fm_eliminate(cur, var)
        if cur is None:
            return None
        levels[var] = cur
    values: list[Fraction] = []
    for var in range(nvars):
        lo: Optional[tuple[Fraction, bool]] = None  # (bound, strict)
        hi: Optional[tuple[Fraction, bool]] = None
        for con in levels[var + 1]:
            c = con.coeffs[var]
            if c == 0:
                continue
            rest = con.const + sum(
                con.coeffs[i] * values[i] for i in range(var)
            )
            bound = -rest / c
            if c > 0:  # x >= bound (or >)
                if lo is None or bound > lo[0] or (bound == lo[0] and con.strict):
                    lo = (bound, con.strict)
            else:  # x <= bound (or <)
                if hi is None or bound < hi[0] or (bound == hi[0] and con.strict):
                    hi = (bound, con.strict)
        if lo is None and hi is None:
            values.append(Fraction(0))
        elif hi is None:
            values.append(lo[0] + 1 if lo[1] else lo[0])
        elif lo is None:
            values.append(hi[0] - 1 if hi[1] else hi[0])
        else:
            if lo[0] == hi[0]:
                values.append(lo[0])  # feasibility guarantees both non-strict
            else:
                values.append((lo[0] + hi[0]) / 2)
    return tuple(values)


# ---------------------------------------------------------------------------
# V-representation <-> H-representation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HRep:
    """{v : e.v = 0 for e in eqs, a.v >= 0 for a in ineqs}."""

    dim: int
    eqs: tuple[IntVector, ...]
    ineqs: tuple[IntVector, ...]

    def contains(self, v: Sequence) -> bool:
        return all(dot(e, v) == 0 for e in self.eqs) and all(
            dot(a, v) >= 0 for a in self.ineqs
        )

    def constraints(self, total_vars: int | None = None) -> list[Constraint]:
        n = total_vars or self.dim
        out: list[Constraint] = []
        for e in self.eqs:
            out.extend(eq_pair(tuple(e) + (0,) * (n - self.dim)))
        for a in self.ineqs:
            out.append(ge(tuple(a) + (0,) * (n - self.dim)))
        return out


_H_REP_CACHE: dict[tuple[IntVector, ...], HRep] = {}


def cone_h_rep(cone: Cone) -> HRep:
    """Facet description of a generated cone.

    The rays of the dual cone {a : a.g >= 0 for all generators g} are the
    facet normals; opposite dual ray pairs cut out the linear span.
    """
    cached = _H_REP_CACHE.get(cone.generators)
    if cached is not None:
        return cached
    d = cone.dim
    dual_rays = cone_v_rep(HRep(d, (), cone.generators))
    ray_set = set(dual_rays)
    eqs = sorted(
        v for v in ray_set if tuple(-x for x in v) in ray_set and v > tuple(-x for x in v)
    )
    eq_members = set(eqs) | {tuple(-x for x in e) for e in eqs}
    ineqs = sorted(v for v in ray_set if v not in eq_members)
    rep = HRep(d, tuple(eqs), tuple(ineqs))
    _H_REP_CACHE[cone.generators] = rep
    return rep


def cone_contains(cone: Cone, v: Sequence) -> bool:
    """Membership of a (possibly zero) vector in the closed hull."""
    return cone_h_rep(cone).contains(v)


def has_nonneg_combination(columns: Sequence[Sequence], target: Sequence) -> bool:
    """Exact phase-I simplex: does target = sum_j lam_j * columns_j, lam >= 0?

    Bland's rule guarantees termination; everything stays in Fraction.  This
    is the workhorse for membership and redundancy questions with many
    multipliers, where variable-by-variable elimination would blow up.
    """
    m = len(target)
    n = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(n)] for i in range(m)]
    rhs = [Fraction(t) for t in target]
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    # append artificial variables, which also form the starting basis
    for i in range(m):
        rows[i].extend(Fraction(1 if j == i else 0) for j in range(m))
    total = n + m
    basis = list(range(n, total))
    zero = Fraction(0)
    # reduced-cost row, maintained incrementally through the pivots
    zrow = [-sum(rows[i][j] for i in range(m)) for j in range(n)] + [zero] * m
    while True:
        entering = next((j for j in range(total) if zrow[j] < 0), None)
        if entering is None:
            break
        candidates = [
            (rhs[i] / rows[i][entering], basis[i], i)
            for i in range(m)
            if rows[i][entering] > 0
        ]
        if not candidates:
            break  # unbounded phase-I cannot happen, but stay safe
        _, _, pivot_row = min(candidates)
        pv = rows[pivot_row][entering]
        if pv != 1:
            rows[pivot_row] = [x / pv for x in rows[pivot_row]]
            rhs[pivot_row] /= pv
        for i in range(m):
            f = rows[i][entering]
            if i != pivot_row and f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pivot_row])]
                rhs[i] -= f * rhs[pivot_row]
        f = zrow[entering]
        if f != 0:
            zrow = [x - f * y for x, y in zip(zrow, rows[pivot_row])]
        basis[pivot_row] = entering
    objective = sum(rhs[i] for i in range(m) if basis[i] >= n)
    return objective == 0


def _prune_redundant(rays: list[IntVector]) -> list[IntVector]:
    """Drop rays that are nonnegative combinations of the others.

    Extreme rays are never droppable, so sequential removal is safe once
    duplicate directions have been merged.
    """
    keep = sorted(set(rays))
    for ray in list(keep):
        others = [r for r in keep if r != ray]
        if others and has_nonneg_combination(others, ray):
            keep.remove(ray)
    return keep


def cone_v_rep(hrep: HRep) -> tuple[IntVector, ...]:
    """Generators of an H-represented cone via incremental double description.

    Returns () when the cone is the origin alone.
    """
    d = hrep.dim
    # start from the lineality space cut out by the equalities
    basis = kernel_basis(tuple(tuple(Fraction(x) for x in e) for e in hrep.eqs), d) if hrep.eqs else [
        primitive_vector(tuple(1 if j == i else 0 for j in range(d))) for i in range(d)
    ]
    rays: list[IntVector] = []
    for b in basis:
        rays.append(b)
        rays.append(tuple(-x for x in b))
    rays = sorted(set(rays))
    for a in hrep.ineqs:
        pos = [r for r in rays if dot(a, r) > 0]
        zero = [r for r in rays if dot(a, r) == 0]
        neg = [r for r in rays if dot(a, r) < 0]
        new = pos + zero
        for p in pos:
            ap = dot(a, p)
            for nray in neg:
                an = -dot(a, nray)
                combo = tuple(ap * y + an * x for x, y in zip(p, nray))
                if any(combo):
                    new.append(primitive_vector(combo))
        rays = _prune_redundant(new)
    rays = _prune_redundant(rays)
    return tuple(sorted(rays))


def cone_from_h_rep(hrep: HRep) -> Optional[Cone]:
    rays = cone_v_rep(hrep)
    return Cone(tuple(rays)) if rays else None


# ---------------------------------------------------------------------------
# Decision procedures
# ---------------------------------------------------------------------------


def h_rep_has_nonzero(constraints: list[Constraint], dim: int) -> Optional[Vector]:
    """A nonzero witness in the conical solution set of a homogeneous system."""
    for i in range(dim):
        for sign in (1, -1):
            probe = [Fraction(0)] * dim
            probe[i] = Fraction(sign)
            sol = find_solution(constraints + [ge(probe, -1)], dim)
            if sol is not None:
                return sol
    return None


def cones_meet_nontrivially(c1: Cone, c2: Cone) -> Optional[Vector]:
    """A common nonzero vector of two cones, or None."""
    h1 = cone_h_rep(c1)
    h2 = cone_h_rep(c2)
    for g in c1.generators:  # cheap: a shared generator direction
        if h2.contains(g):
            return tuple(Fraction(x) for x in g)
    for g in c2.generators:
        if h1.contains(g):
            return tuple(Fraction(x) for x in g)
    cons = h1.constraints() + h2.constraints()
    return h_rep_has_nonzero(cons, c1.dim)


def cone_subset_of_union(cone: Cone, covers: Sequence[Cone]) -> Optional[Vector]:
    """None if cone (minus origin) is covered by the union; else a witness.

    Splits the difference into pieces along the facets of each covering cone;
    a surviving piece always carries at least one strict constraint, so the
    origin never masquerades as a witness.
    """
    if not covers:
        # witness: any generator (generators are nonzero)
        return tuple(Fraction(x) for x in cone.generators[0])
    # fast path: identical cone or generator-wise inclusion in a single cover
    for c2 in covers:
        h2 = cone_h_rep(c2)
        if all(h2.contains(g) for g in cone.generators):
            return None
    dim = cone.dim
    pieces: list[list[Constraint]] = [cone_h_rep(cone).constraints()]
    for c2 in covers:
        cover_cons = cone_h_rep(c2).constraints()
        next_pieces: list[list[Constraint]] = []
        for piece in pieces:
            prefix: list[Constraint] = []
            for con in cover_cons:
                violated = Constraint(
                    tuple(-c for c in con.coeffs), -con.const, not con.strict
                )
                cand = piece + prefix + [violated]
                if feasible(cand, dim):
                    next_pieces.append(cand)
                prefix.append(con)
        pieces = next_pieces
        if not pieces:
            return None
    return find_solution(pieces[0], dim)
