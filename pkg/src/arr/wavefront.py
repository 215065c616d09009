"""Set-level calculus of closed conical subsets over finite point models.

A space is a finite set of labeled points with an ambient cotangent dimension;
a conical set attaches finitely many rational polyhedral cones (minus the
origin) to points; a map carries a point map together with a derivative
matrix per source point, whose transpose moves covectors backwards.  The four
operations are

    normal_directions(f)      kernel directions of the transposed derivative,
    pullback(f, S)            images of covectors, defined under transversality,
    pushforward(f, S)         exact preimages union the normal directions,
    cone_sum(S, S')           pairwise closed sums, defined off the zero section,

and the checkers verify the compatibility laws between them (product/pullback
equality, pushforward projection inclusion, composition functoriality) on
concrete instances, reporting hypothesis status and exact witnesses on
failure.  Everything is decided exactly over Q via the cone engine.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cones import (
    Cone,
    Matrix,
    Vector,
    cone_contains,
    cone_subset_of_union,
    cones_meet_nontrivially,
    kernel_basis,
    mat_vec,
    primitive_vector,
    transpose,
)
from .scalars import DomainError


class TransversalityError(ValueError):
    """Pullback attempted where the normal directions meet the set."""

    def __init__(self, point: str, cone: Cone, witness: Vector):
        self.point = point
        self.cone = cone
        self.witness = witness
        super().__init__(
            f"not transverse at point {point!r}: direction {witness} lies in the "
            f"normal directions and in the cone with generators {cone.generators}"
        )


class ZeroSectionError(ValueError):
    """Sum attempted for sets whose sum would cross the zero section."""

    def __init__(self, point: str, witness: Vector):
        self.point = point
        self.witness = witness
        super().__init__(
            f"sets meet in opposite directions at point {point!r}: {witness}"
        )


@dataclass(frozen=True)
class SpaceModel:
    points: tuple[str, ...]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("cotangent dimension must be >= 1")
        if len(set(self.points)) != len(self.points):
            raise DomainError("point labels must be unique")


@dataclass(frozen=True)
class ConicalSet:
    space: SpaceModel
    cones: tuple[tuple[str, tuple[Cone, ...]], ...]  # sorted, no empty lists

    @staticmethod
    def build(space: SpaceModel, table: dict[str, Sequence[Cone]]) -> "ConicalSet":
        items = []
        for point, cone_list in sorted(table.items()):
            if point not in space.points:
                raise DomainError(f"unknown point {point!r}")
            unique = tuple(sorted(set(cone_list), key=lambda c: c.generators))
            for c in unique:
                if c.dim != space.dim:
                    raise DomainError("cone dimension does not match the space")
            if unique:
                items.append((point, unique))
        return ConicalSet(space, tuple(items))

    @staticmethod
    def empty(space: SpaceModel) -> "ConicalSet":
        return ConicalSet(space, ())

    def table(self) -> dict[str, tuple[Cone, ...]]:
        return dict(self.cones)

    def cones_at(self, point: str) -> tuple[Cone, ...]:
        return self.table().get(point, ())

    @property
    def is_empty(self) -> bool:
        return not self.cones

    def negated(self) -> "ConicalSet":
        return ConicalSet.build(
            self.space, {p: [c.negated() for c in cs] for p, cs in self.cones}
        )

    def relabeled(self, rename: dict[str, str], space: SpaceModel) -> "ConicalSet":
        return ConicalSet.build(
            space, {rename[p]: list(cs) for p, cs in self.cones}
        )


@dataclass(frozen=True)
class MapModel:
    source: SpaceModel
    target: SpaceModel
    point_map: tuple[tuple[str, str], ...]
    differentials: tuple[tuple[str, Matrix], ...]  # per source point, dim_Y x dim_X

    @staticmethod
    def build(
        source: SpaceModel,
        target: SpaceModel,
        point_map: dict[str, str],
        differentials: dict[str, Sequence[Sequence[Fraction | int]]],
    ) -> "MapModel":
        if set(point_map) != set(source.points):
            raise DomainError("point map must be total on the source")
        if any(v not in target.points for v in point_map.values()):
            raise DomainError("point map leaves the target")
        diffs = {}
        for x in source.points:
            m = differentials.get(x)
            if m is None:
                raise DomainError(f"missing differential at {x!r}")
            mat = tuple(tuple(Fraction(e) for e in row) for row in m)
            if len(mat) != target.dim or any(len(r) != source.dim for r in mat):
                raise DomainError(
                    f"differential at {x!r} must be {target.dim} x {source.dim}"
                )
            diffs[x] = mat
        return MapModel(
            source,
            target,
            tuple(sorted(point_map.items())),
            tuple(sorted(diffs.items())),
        )

    def image_point(self, x: str) -> str:
        return dict(self.point_map)[x]

    def differential(self, x: str) -> Matrix:
        return dict(self.differentials)[x]

    def cotangent_map(self, x: str) -> Matrix:
        """Transpose of the derivative: covectors at f(x) -> covectors at x."""
        return transpose(self.differential(x))

    @property
    def is_point_surjective(self) -> bool:
        return set(dict(self.point_map).values()) == set(self.target.points)


def compose_maps(f: MapModel, g: MapModel) -> MapModel:
    """g after f; differentials compose by the chain rule."""
    if f.target != g.source:
        raise DomainError("maps are not composable")
    pm = {x: g.image_point(f.image_point(x)) for x in f.source.points}
    diffs = {}
    for x in f.source.points:
        a = g.differential(f.image_point(x))
        b = f.differential(x)
        diffs[x] = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
            for i in range(len(a))
        )
    return MapModel.build(f.source, g.target, pm, diffs)


# ---------------------------------------------------------------------------
# The four operations
# ---------------------------------------------------------------------------


def normal_directions(f: MapModel) -> ConicalSet:
    """Kernel of the transposed derivative at each source point, at its image."""
    table: dict[str, list[Cone]] = {}
    for x in f.source.points:
        basis = kernel_basis(f.cotangent_map(x), f.target.dim)
        if basis:
            table.setdefault(f.image_point(x), []).append(Cone.subspace(basis))
    return ConicalSet.build(f.target, table)


def sets_intersect(a: ConicalSet, b: ConicalSet) -> Optional[tuple[str, Cone, Vector]]:
    """A common nonzero direction at a common point, or None."""
    tb = b.table()
    for point, cones_a in a.cones:
        for cb in tb.get(point, ()):
            for ca in cones_a:
                w = cones_meet_nontrivially(ca, cb)
                if w is not None:
                    return point, cb, w
    return None


def intersects_negation(a: ConicalSet, b: ConicalSet) -> bool:
    """Whether some cone of a meets the negation of some cone of b."""
    return sets_intersect(a, b.negated()) is not None


def pullback(f: MapModel, s: ConicalSet) -> ConicalSet:
    """Transported covectors; requires the normal directions to avoid s."""
    if s.space != f.target:
        raise DomainError("pullback needs a set on the target space")
    hit = sets_intersect(normal_directions(f), s)
    if hit is not None:
        raise TransversalityError(*hit)
    table: dict[str, list[Cone]] = {}
    for x in f.source.points:
        mt = f.cotangent_map(x)
        for cone in s.cones_at(f.image_point(x)):
            images = [mat_vec(mt, g) for g in cone.generators]
            table.setdefault(x, []).append(Cone.from_vectors(images))
    return ConicalSet.build(f.source, table)


_PREIMAGE_CACHE: dict[tuple, Optional[Cone]] = {}


def _preimage_cone(mt: Matrix, cone: Cone, target_dim: int) -> Optional[Cone]:
    """{xi != 0 : mt(xi) in the closed hull of cone}, as a generated cone."""
    from .cones import HRep, cone_from_h_rep, cone_h_rep

    key = (mt, cone.generators)
    if key in _PREIMAGE_CACHE:
        return _PREIMAGE_CACHE[key]
    h = cone_h_rep(cone)
    mt_t = transpose(mt)
    eqs = []
    for e in h.eqs:
        row = mat_vec(mt_t, e)
        if any(row):
            eqs.append(primitive_vector(row))
    ineqs = []
    for a in h.ineqs:
        row = mat_vec(mt_t, a)
        if any(row):
            ineqs.append(primitive_vector(row))
    result = cone_from_h_rep(
        HRep(target_dim, tuple(sorted(set(eqs))), tuple(sorted(set(ineqs))))
    )
    _PREIMAGE_CACHE[key] = result
    return result


def pushforward(f: MapModel, s: ConicalSet) -> ConicalSet:
    """Exact preimages of s under the cotangent maps, union normal directions."""
    if s.space != f.source:
        raise DomainError("pushforward needs a set on the source space")
    table: dict[str, list[Cone]] = {}
    for x in f.source.points:
        y = f.image_point(x)
        mt = f.cotangent_map(x)
        for cone in s.cones_at(x):
            pre = _preimage_cone(mt, cone, f.target.dim)
            if pre is not None:
                table.setdefault(y, []).append(pre)
        basis = kernel_basis(mt, f.target.dim)
        if basis:
            table.setdefault(y, []).append(Cone.subspace(basis))
    return ConicalSet.build(f.target, table)


def cone_sum(a: ConicalSet, b: ConicalSet) -> ConicalSet:
    """Pairwise closed sums at common points; errors on zero-section crossing."""
    if a.space != b.space:
        raise DomainError("sum needs sets on the same space")
    hit = sets_intersect(a, b.negated())
    if hit is not None:
        point, _, witness = hit
        raise ZeroSectionError(point, witness)
    tb = b.table()
    table: dict[str, list[Cone]] = {}
    for point, cones_a in a.cones:
        for cb in tb.get(point, ()):
            for ca in cones_a:
                table.setdefault(point, []).append(
                    Cone.from_vectors(ca.generators + cb.generators)
                )
    return ConicalSet.build(a.space, table)


def union_sets(*sets: ConicalSet) -> ConicalSet:
    space = sets[0].space
    table: dict[str, list[Cone]] = {}
    for s in sets:
        if s.space != space:
            raise DomainError("union needs sets on the same space")
        for point, cs in s.cones:
            table.setdefault(point, []).extend(cs)
    return ConicalSet.build(space, table)


def sum_closure(a: ConicalSet, b: ConicalSet) -> ConicalSet:
    """a union b union (a + b), the combination the calculus always uses."""
    return union_sets(a, b, cone_sum(a, b))


def member(s: ConicalSet, point: str, v: Sequence) -> bool:
    """Exact membership of a nonzero covector in the set at a point."""
    if not any(Fraction(x) for x in v):
        return False
    return any(cone_contains(c, v) for c in s.cones_at(point))


def subset(a: ConicalSet, b: ConicalSet) -> Optional[tuple[str, Vector]]:
    """None when a is contained in b; otherwise an exact witness direction."""
    if a.space != b.space:
        raise DomainError("containment needs sets on the same space")
    tb = b.table()
    for point, cones_a in a.cones:
        covers = list(tb.get(point, ()))
        for ca in cones_a:
            w = cone_subset_of_union(ca, covers)
            if w is not None:
                return point, w
    return None


def sets_equal(a: ConicalSet, b: ConicalSet) -> bool:
    return subset(a, b) is None and subset(b, a) is None


def symmetrize(
    s: ConicalSet, involution: dict[str, str], sign: int = -1
) -> ConicalSet:
    """Close a set under a point involution with a sign action on directions."""
    table: dict[str, list[Cone]] = {p: list(cs) for p, cs in s.cones}
    for point, cs in s.cones:
        image = involution.get(point, point)
        for c in cs:
            mirrored = (
                c if sign == 1 else Cone.from_vectors([[sign * x for x in g] for g in c.generators])
            )
            table.setdefault(image, []).append(mirrored)
    return ConicalSet.build(s.space, table)


def is_invariant(s: ConicalSet, involution: dict[str, str], sign: int = -1) -> bool:
    return sets_equal(s, symmetrize(s, involution, sign))


# ---------------------------------------------------------------------------
# Law checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one law on one instance; failures carry witnesses."""

    law: str
    hypotheses_satisfied: bool
    hypothesis_note: str = ""
    implication_holds: Optional[bool] = None
    forward_inclusion: Optional[bool] = None
    reverse_inclusion: Optional[bool] = None
    equality_expected: bool = True
    witnesses: tuple[str, ...] = ()

    @property
    def applicable(self) -> bool:
        return self.hypotheses_satisfied

    @property
    def passed(self) -> bool:
        if not self.hypotheses_satisfied:
            return True  # nothing to verify; hypothesis status is the content
        checks = [self.implication_holds, self.forward_inclusion]
        if self.equality_expected:
            checks.append(self.reverse_inclusion)
        return all(c is not False for c in checks)


def check_thm1(f: MapModel, s: ConicalSet, s2: ConicalSet) -> CheckReport:
    """Pullback distributes over union-plus-sum, given transversality.

    Hypotheses: s and s2 avoid each other's negation, and the normal
    directions of f avoid the combined set.  Also verifies the implication
    that the pulled-back sets again avoid each other's negation.
    """
    witnesses: list[str] = []
    if intersects_negation(s, s2):
        return CheckReport(
            "thm1", False, hypothesis_note="s meets -s2; sum undefined"
        )
    combined = sum_closure(s, s2)
    hit = sets_intersect(normal_directions(f), combined)
    if hit is not None:
        return CheckReport(
            "thm1",
            False,
            hypothesis_note=f"not transverse at {hit[0]!r}: {hit[2]}",
        )
    fs = pullback(f, s)
    fs2 = pullback(f, s2)
    implication = not intersects_negation(fs, fs2)
    if not implication:
        witnesses.append("pulled-back sets meet in opposite directions")
        return CheckReport(
            "thm1", True, implication_holds=False, witnesses=tuple(witnesses)
        )
    lhs = pullback(f, combined)
    rhs = sum_closure(fs, fs2)
    w1 = subset(lhs, rhs)
    w2 = subset(rhs, lhs)
    if w1 is not None:
        witnesses.append(f"lhs not within rhs at {w1[0]!r}: {w1[1]}")
    if w2 is not None:
        witnesses.append(f"rhs not within lhs at {w2[0]!r}: {w2[1]}")
    return CheckReport(
        "thm1",
        True,
        implication_holds=True,
        forward_inclusion=w1 is None,
        reverse_inclusion=w2 is None,
        witnesses=tuple(witnesses),
    )


def check_thm2(f: MapModel, s: ConicalSet, s2: ConicalSet) -> CheckReport:
    """Projection-formula inclusion for pushforward, given the disjointness
    of the pushed set from the negation of the target set.

    Hypothesis: pushforward(f, s) avoids -s2.  Implications verified: the
    normal directions avoid s2, and s avoids -pullback(f, s2).  Then
    pushforward(f, s u f*s2 u (s + f*s2)) is contained in
    pushforward(f, s) u s2 u (pushforward(f, s) + s2).
    """
    if s.space != f.source or s2.space != f.target:
        raise DomainError("thm2 wants s on the source and s2 on the target")
    push_s = pushforward(f, s)
    if intersects_negation(push_s, s2):
        return CheckReport(
            "thm2", False, hypothesis_note="pushforward(s) meets -s2"
        )
    witnesses: list[str] = []
    impl1 = sets_intersect(normal_directions(f), s2) is None
    if not impl1:
        return CheckReport(
            "thm2",
            True,
            implication_holds=False,
            witnesses=("normal directions meet s2 despite the hypothesis",),
            equality_expected=False,
        )
    fs2 = pullback(f, s2)
    impl2 = not intersects_negation(s, fs2)
    if not impl2:
        return CheckReport(
            "thm2",
            True,
            implication_holds=False,
            witnesses=("s meets -pullback(s2) despite the hypothesis",),
            equality_expected=False,
        )
    lhs = pushforward(f, sum_closure(s, fs2))
    rhs = sum_closure(push_s, s2)
    w = subset(lhs, rhs)
    if w is not None:
        witnesses.append(f"inclusion fails at {w[0]!r}: {w[1]}")
    return CheckReport(
        "thm2",
        True,
        implication_holds=True,
        forward_inclusion=w is None,
        equality_expected=False,
        witnesses=tuple(witnesses),
    )


def check_functoriality(f: MapModel, g: MapModel, s: ConicalSet) -> CheckReport:
    """(g o f) pushforward against the composition of pushforwards.

    Containment must always hold; equality exactly when the point map of f
    is surjective (otherwise kernel directions of g over points outside the
    image of f can enlarge the right-hand side).
    """
    composed = compose_maps(f, g)
    lhs = pushforward(composed, s)
    rhs = pushforward(g, pushforward(f, s))
    w = subset(lhs, rhs)
    witnesses: list[str] = []
    if w is not None:
        witnesses.append(f"composite exceeds the two-step image at {w[0]!r}: {w[1]}")
    surjective = f.is_point_surjective
    reverse: Optional[bool] = None
    if surjective:
        w2 = subset(rhs, lhs)
        reverse = w2 is None
        if w2 is not None:
            witnesses.append(f"two-step image exceeds composite at {w2[0]!r}: {w2[1]}")
    return CheckReport(
        "functoriality",
        True,
        forward_inclusion=w is None,
        reverse_inclusion=reverse,
        equality_expected=surjective,
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# Random instances and the instance file format
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    seed: int
    x: SpaceModel
    y: SpaceModel
    z: SpaceModel
    f: MapModel
    g: MapModel
    s_on_x: ConicalSet
    s_on_y: ConicalSet
    s2_on_y: ConicalSet


def _random_cone(rng: random.Random, dim: int) -> Cone:
    gens = []
    for _ in range(rng.randint(1, 3)):
        while True:
            v = tuple(rng.randint(-3, 3) for _ in range(dim))
            if any(v):
                gens.append(v)
                break
    return Cone.from_vectors(gens)


def _random_set(rng: random.Random, space: SpaceModel, density: float = 0.7) -> ConicalSet:
    table: dict[str, list[Cone]] = {}
    for p in space.points:
        if rng.random() < density:
            table[p] = [_random_cone(rng, space.dim) for _ in range(rng.randint(1, 3))]
    return ConicalSet.build(space, table)


def _random_map(rng: random.Random, src: SpaceModel, dst: SpaceModel) -> MapModel:
    pm = {x: rng.choice(dst.points) for x in src.points}
    diffs = {}
    for x in src.points:
        diffs[x] = [
            [rng.randint(-3, 3) for _ in range(src.dim)] for _ in range(dst.dim)
        ]
    return MapModel.build(src, dst, pm, diffs)


def random_instance(seed: int, dim: int | None = None) -> Instance:
    """Deterministic small instance; seed is recorded for reproducibility."""
    rng = random.Random(seed)
    d = dim if dim is not None else rng.randint(1, 3)
    if not 1 <= d <= 4:
        raise DomainError("instance dimension must be between 1 and 4")
    x = SpaceModel(tuple(f"x{i}" for i in range(rng.randint(1, 4))), d)
    y = SpaceModel(tuple(f"y{i}" for i in range(rng.randint(1, 4))), d)
    z = SpaceModel(tuple(f"z{i}" for i in range(rng.randint(1, 4))), d)
    f = _random_map(rng, x, y)
    g = _random_map(rng, y, z)
    s_on_x = _random_set(rng, x)
    s_on_y = _random_set(rng, y)
    s2_on_y = _random_set(rng, y)
    if rng.random() < 0.3 and len(y.points) >= 2:
        # exercise the involution closure: swap two points, flip directions
        a, b = rng.sample(y.points, 2)
        inv = {a: b, b: a}
        s_on_y = symmetrize(s_on_y, inv)
        s2_on_y = symmetrize(s2_on_y, inv)
    return Instance(seed, x, y, z, f, g, s_on_x, s_on_y, s2_on_y)


def run_instance(inst: Instance) -> list[CheckReport]:
    return [
        check_thm1(inst.f, inst.s_on_y, inst.s2_on_y),
        check_thm2(inst.f, inst.s_on_x, inst.s2_on_y),
        check_functoriality(inst.f, inst.g, inst.s_on_x),
    ]


# ---- instance files -------------------------------------------------------


def _parse_fraction(s) -> Fraction:
    return Fraction(str(s))


def load_instance_file(path: str) -> tuple[dict, list[tuple[str, CheckReport]]]:
    """Run the checks requested by a JSON instance file.

    The file lists spaces (points + dim), maps (point_map + differentials,
    matrix entries as rational strings like "1/2"), conical sets (generators
    per point), and a list of checks referencing them by name.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    spaces = {
        name: SpaceModel(tuple(sp["points"]), int(sp["dim"]))
        for name, sp in data.get("spaces", {}).items()
    }
    maps = {}
    for name, m in data.get("maps", {}).items():
        src = spaces[m["source"]]
        dst = spaces[m["target"]]
        diffs = {
            x: [[_parse_fraction(e) for e in row] for row in mat]
            for x, mat in m["differentials"].items()
        }
        maps[name] = MapModel.build(src, dst, dict(m["point_map"]), diffs)
    sets = {}
    for name, s in data.get("sets", {}).items():
        space = spaces[s["space"]]
        table = {
            point: [
                Cone.from_vectors([[_parse_fraction(e) for e in gen] for gen in gens])
                for gens in cone_list
            ]
            for point, cone_list in s.get("cones", {}).items()
        }
        sets[name] = ConicalSet.build(space, table)
    results: list[tuple[str, CheckReport]] = []
    for i, check in enumerate(data.get("checks", [])):
        kind = check["type"]
        label = check.get("label", f"{kind}#{i}")
        if kind == "thm1":
            rep = check_thm1(maps[check["map"]], sets[check["S"]], sets[check["Sprime"]])
        elif kind == "thm2":
            rep = check_thm2(maps[check["map"]], sets[check["S"]], sets[check["Sprime"]])
        elif kind == "functoriality":
            rep = check_functoriality(maps[check["f"]], maps[check["g"]], sets[check["S"]])
        else:
            raise DomainError(f"unknown check type {kind!r}")
        results.append((label, rep))
    return data, results
