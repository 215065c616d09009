import json
import random
from fractions import Fraction

import pytest
from oracle_membership import caratheodory_member

from arr import wavefront as wf
from arr.cones import Cone, cone_contains, cone_subset_of_union
from arr.scalars import DomainError


def plane(*points):
    return wf.SpaceModel(tuple(points), 2)


def ray(*coords):
    return Cone.from_vectors([coords])


class TestNormalDirections:
    def test_invertible_everywhere(self):
        x = plane("x0")
        f = wf.MapModel.build(x, x, {"x0": "x0"}, {"x0": [[2, 1], [1, 1]]})
        assert wf.normal_directions(f).is_empty

    def test_rank_one(self):
        f = wf.MapModel.build(
            plane("x0"), plane("y0"), {"x0": "y0"}, {"x0": [[1, 0], [0, 0]]}
        )
        assert wf.normal_directions(f).cones_at("y0") == (
            Cone.from_vectors([(0, 1), (0, -1)]),
        )

    def test_constant_map(self):
        f = wf.MapModel.build(
            plane("x0"), plane("y0"), {"x0": "y0"}, {"x0": [[0, 0], [0, 0]]}
        )
        full = Cone.from_vectors([(1, 0), (-1, 0), (0, 1), (0, -1)])
        assert wf.sets_equal(
            wf.normal_directions(f), wf.ConicalSet.build(plane("y0"), {"y0": [full]})
        )


class TestPullback:
    def setup_method(self):
        self.x = plane("x0")
        self.y = plane("y0")
        self.f = wf.MapModel.build(
            self.x, self.y, {"x0": "y0"}, {"x0": [[1, 0], [0, 0]]}
        )

    def test_identity(self):
        ident = wf.MapModel.build(self.x, self.x, {"x0": "x0"}, {"x0": [[1, 0], [0, 1]]})
        s = wf.ConicalSet.build(self.x, {"x0": [ray(1, 2), ray(-1, 1)]})
        assert wf.sets_equal(wf.pullback(ident, s), s)

    def test_rank_one_image(self):
        s = wf.ConicalSet.build(self.y, {"y0": [ray(1, 0)]})
        assert wf.pullback(self.f, s).cones_at("x0") == (ray(1, 0),)

    def test_transversality_failure_names_witness(self):
        s = wf.ConicalSet.build(self.y, {"y0": [ray(0, 1)]})
        with pytest.raises(wf.TransversalityError) as err:
            wf.pullback(self.f, s)
        assert err.value.point == "y0"
        assert wf.member(s, "y0", err.value.witness)


class TestPushforward:
    def test_identity(self):
        x = plane("x0")
        ident = wf.MapModel.build(x, x, {"x0": "x0"}, {"x0": [[1, 0], [0, 1]]})
        s = wf.ConicalSet.build(x, {"x0": [ray(1, 2)]})
        assert wf.sets_equal(wf.pushforward(ident, s), s)

    def test_half_plane_closure(self):
        f = wf.MapModel.build(
            plane("x0"), plane("y0"), {"x0": "y0"}, {"x0": [[1, 0], [0, 0]]}
        )
        s = wf.ConicalSet.build(plane("x0"), {"x0": [ray(1, 0)]})
        want = wf.ConicalSet.build(
            plane("y0"), {"y0": [Cone.from_vectors([(1, 0), (0, 1), (0, -1)])]}
        )
        assert wf.sets_equal(wf.pushforward(f, s), want)

    def test_empty_set_gives_normal_directions(self):
        f = wf.MapModel.build(
            plane("x0"), plane("y0"), {"x0": "y0"}, {"x0": [[1, 1], [2, 2]]}
        )
        assert wf.sets_equal(
            wf.pushforward(f, wf.ConicalSet.empty(plane("x0"))),
            wf.normal_directions(f),
        )


class TestConeSum:
    def test_quadrant(self):
        x = plane("x0")
        a = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        b = wf.ConicalSet.build(x, {"x0": [ray(0, 1)]})
        assert wf.cone_sum(a, b).cones_at("x0") == (
            Cone.from_vectors([(1, 0), (0, 1)]),
        )

    def test_zero_section_crossing(self):
        x = plane("x0")
        a = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        b = wf.ConicalSet.build(x, {"x0": [ray(-1, 0)]})
        with pytest.raises(wf.ZeroSectionError) as err:
            wf.cone_sum(a, b)
        assert err.value.point == "x0"

    def test_disjoint_points(self):
        x = plane("x0", "x1")
        a = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        b = wf.ConicalSet.build(x, {"x1": [ray(0, 1)]})
        assert wf.cone_sum(a, b).is_empty

    def test_intersects_negation(self):
        x = plane("x0")
        a = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        assert not wf.intersects_negation(a, a)
        b = wf.ConicalSet.build(x, {"x0": [ray(-1, 0)]})
        assert wf.intersects_negation(a, b)
        c = wf.ConicalSet.build(x, {"x0": [Cone.from_vectors([(1, 0), (0, 1)])]})
        d = wf.ConicalSet.build(x, {"x0": [ray(-1, -1)]})
        assert wf.intersects_negation(c, d)


class TestMembershipAndContainment:
    def test_origin_excluded(self):
        x = plane("x0")
        s = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        assert not wf.member(s, "x0", (0, 0))
        assert wf.member(s, "x0", (Fraction(1, 2), 0))

    def test_union_membership_needs_no_single_cone(self):
        quad1 = Cone.from_vectors([(1, 0), (0, 1)])
        quad4 = Cone.from_vectors([(1, 0), (0, -1)])
        half = Cone.from_vectors([(1, 0), (0, 1), (0, -1)])
        assert cone_subset_of_union(half, [quad1, quad4]) is None
        w = cone_subset_of_union(half, [quad1])
        assert w is not None and cone_contains(half, w) and not cone_contains(quad1, w)

    def test_engine_agrees_with_caratheodory(self):
        rng = random.Random(4242)
        for _ in range(300):
            dim = rng.randint(1, 3)
            gens = []
            for _ in range(rng.randint(1, 4)):
                v = tuple(rng.randint(-3, 3) for _ in range(dim))
                if any(v):
                    gens.append(v)
            if not gens:
                continue
            cone = Cone.from_vectors(gens)
            v = tuple(rng.randint(-4, 4) for _ in range(dim))
            assert cone_contains(cone, v) == caratheodory_member(cone.generators, v)

    def test_containment_agrees_with_ray_sampling(self):
        rng = random.Random(99)
        for _ in range(60):
            dim = rng.randint(2, 3)
            def rand_cone():
                gens = []
                for _ in range(rng.randint(1, 3)):
                    v = tuple(rng.randint(-2, 2) for _ in range(dim))
                    if any(v):
                        gens.append(v)
                return Cone.from_vectors(gens) if gens else None
            a = rand_cone()
            covers = [c for c in (rand_cone(), rand_cone()) if c]
            if a is None:
                continue
            witness = cone_subset_of_union(a, covers)
            if witness is None:
                # sampled directions of a must all land in the union
                for v in _sample_directions(dim):
                    if caratheodory_member(a.generators, v) and any(v):
                        assert any(
                            caratheodory_member(c.generators, v) for c in covers
                        ), (a, covers, v)
            else:
                assert caratheodory_member(a.generators, witness)
                assert not any(
                    caratheodory_member(c.generators, witness) for c in covers
                )


def _sample_directions(dim, bound=2):
    from itertools import product

    return [v for v in product(range(-bound, bound + 1), repeat=dim) if any(v)]


class TestLaws:
    def test_identity_instance(self):
        x = plane("x0")
        ident = wf.MapModel.build(x, x, {"x0": "x0"}, {"x0": [[1, 0], [0, 1]]})
        s = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        s2 = wf.ConicalSet.build(x, {"x0": [ray(1, 1)]})
        rep = wf.check_thm1(ident, s, s2)
        assert rep.applicable and rep.passed
        rep = wf.check_thm2(ident, s, s2)
        assert rep.applicable and rep.passed
        rep = wf.check_functoriality(ident, ident, s)
        assert rep.passed and rep.equality_expected

    def test_randomized_instances(self):
        applicable1 = applicable2 = 0
        for seed in range(1000, 1080):
            inst = wf.random_instance(seed)
            r1, r2, r3 = wf.run_instance(inst)
            assert r1.passed, (seed, r1)
            assert r2.passed, (seed, r2)
            assert r3.passed, (seed, r3)
            if r1.applicable:
                applicable1 += 1
                assert r1.implication_holds
            if r2.applicable:
                applicable2 += 1
                assert r2.implication_holds
            assert r3.forward_inclusion
            if r3.equality_expected:
                assert r3.reverse_inclusion
        assert applicable1 >= 10 and applicable2 >= 10

    def test_non_surjective_strictness(self):
        x = plane("x0")
        y = plane("y0", "y1")
        z = plane("z0")
        f = wf.MapModel.build(x, y, {"x0": "y0"}, {"x0": [[1, 0], [0, 1]]})
        g = wf.MapModel.build(
            y, z, {"y0": "z0", "y1": "z0"},
            {"y0": [[1, 0], [0, 1]], "y1": [[0, 0], [0, 0]]},
        )
        s = wf.ConicalSet.build(x, {"x0": [ray(1, 0)]})
        lhs = wf.pushforward(wf.compose_maps(f, g), s)
        rhs = wf.pushforward(g, wf.pushforward(f, s))
        assert wf.subset(lhs, rhs) is None
        assert wf.subset(rhs, lhs) is not None  # kernel over y1 enlarges rhs

    def test_pushforward_monotone(self):
        rng = random.Random(55)
        for seed in range(40):
            inst = wf.random_instance(3000 + seed)
            extra = wf.union_sets(
                inst.s_on_x,
                wf.ConicalSet.build(
                    inst.x,
                    {rng.choice(inst.x.points): [_random_cone(rng, inst.x.dim)]},
                ),
            )
            small = wf.pushforward(inst.f, inst.s_on_x)
            big = wf.pushforward(inst.f, extra)
            assert wf.subset(small, big) is None

    def test_relabeling_invariance(self):
        for seed in range(20):
            inst = wf.random_instance(4000 + seed)
            rename = {p: f"q_{p}" for p in inst.x.points}
            x2 = wf.SpaceModel(tuple(rename[p] for p in inst.x.points), inst.x.dim)
            f2 = wf.MapModel.build(
                x2,
                inst.y,
                {rename[p]: inst.f.image_point(p) for p in inst.x.points},
                {rename[p]: inst.f.differential(p) for p in inst.x.points},
            )
            lhs = wf.pushforward(f2, inst.s_on_x.relabeled(rename, x2))
            assert wf.sets_equal(lhs, wf.pushforward(inst.f, inst.s_on_x))


def _random_cone(rng, dim):
    while True:
        gens = [
            tuple(rng.randint(-3, 3) for _ in range(dim))
            for _ in range(rng.randint(1, 3))
        ]
        gens = [g for g in gens if any(g)]
        if gens:
            return Cone.from_vectors(gens)


class TestSymmetrize:
    def test_closure_under_involution(self):
        y = plane("a", "b")
        s = wf.ConicalSet.build(y, {"a": [ray(1, 2)]})
        inv = {"a": "b", "b": "a"}
        sym = wf.symmetrize(s, inv)
        assert wf.is_invariant(sym, inv)
        assert not wf.is_invariant(s, inv)
        assert sym.cones_at("b") == (ray(-1, -2),)


class TestInstanceFiles:
    def test_example_file_passes(self):
        _, results = wf.load_instance_file("docs/wavefront_instance.example.json")
        assert len(results) == 3
        assert all(rep.passed for _, rep in results)
        assert {label for label, _ in results} == {
            "pullback-product",
            "projection-inclusion",
            "composition",
        }

    def test_rational_matrix_entries(self, tmp_path):
        data = {
            "spaces": {"X": {"points": ["p"], "dim": 1}, "Y": {"points": ["q"], "dim": 1}},
            "maps": {
                "f": {
                    "source": "X",
                    "target": "Y",
                    "point_map": {"p": "q"},
                    "differentials": {"p": [["2/3"]]},
                }
            },
            "sets": {
                "S": {"space": "X", "cones": {"p": [[["1"]]]}},
                "T": {"space": "Y", "cones": {"q": [[["1"]]]}},
            },
            "checks": [{"type": "thm2", "map": "f", "S": "S", "Sprime": "T"}],
        }
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(data))
        _, results = wf.load_instance_file(str(path))
        assert results[0][1].passed

    def test_unknown_check_type(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"checks": [{"type": "nope"}]}))
        with pytest.raises(DomainError):
            wf.load_instance_file(str(path))
