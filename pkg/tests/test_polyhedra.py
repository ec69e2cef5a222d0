import random
from fractions import Fraction

import pytest

from explodedkit.lattice import IntegerMatrix, IntegralAffineMap
from explodedkit.polyhedra import (
    Polyhedron,
    canonicalize,
    contains_polyhedron,
    face_lattice,
    hull_chart,
    image_polyhedron,
    intersect,
    is_bounded,
    is_smooth_cone,
    is_valid_inequality,
    preimage_polyhedron,
    recession_cone,
    relative_interior_point,
    restrict_to_hull,
    tangent_cone,
    vertices,
    volume,
)


def P(dim, ineqs=(), eqs=()):
    return Polyhedron(dim, tuple(ineqs), tuple(eqs))


def halfline():  # [0, inf)
    return P(1, [((1,), 0)])


def quadrant():  # [0, inf)^2
    return P(2, [((1, 0), 0), ((0, 1), 0)])


def segment(a=0, b=5):  # [a, b]
    return P(1, [((1,), a), ((-1,), -b)])


def triangle():  # 0 <= x, 0 <= y, x + y <= 5
    return P(2, [((1, 0), 0), ((0, 1), 0), ((-1, -1), -5)])


class TestCanonicalize:
    def test_redundant_dropped(self):
        p = P(1, [((1,), 0), ((1,), -1)])
        assert canonicalize(p) == canonicalize(halfline())

    def test_implicit_equality_promoted(self):
        p = P(1, [((1,), 0), ((-1,), 0)])
        c = canonicalize(p)
        assert c.ineqs == ()
        assert c.eqs == (((1,), Fraction(0)),)

    def test_primitive_scaling(self):
        p = P(2, [((2, 2), 0)])
        c = canonicalize(p)
        assert c.ineqs == (((1, 1), Fraction(0)),)

    def test_empty_is_flagged_value(self):
        p = P(1, [((1,), 1), ((-1,), 0)])  # x >= 1 and x <= 0
        c = canonicalize(p)
        assert c.is_canonical_empty
        assert c == Polyhedron.empty(1)

    def test_idempotent(self):
        for p in [quadrant(), triangle(), segment(), P(0), Polyhedron.empty(2)]:
            c = canonicalize(p)
            assert canonicalize(c) == c

    def test_equal_sets_equal_forms(self):
        # same halfplane written with a redundant equality-shifted normal
        a = P(2, [((1, 0), 0)], [((0, 1), 2)])
        b = P(2, [((1, 2), 4)], [((0, 1), 2)])
        assert canonicalize(a) == canonicalize(b)


class TestFaceLattice:
    def test_quadrant(self):
        fl = face_lattice(quadrant())
        dims = sorted(f.dim for f in fl.faces)
        assert dims == [0, 1, 1, 2]

    def test_segment(self):
        fl = face_lattice(segment())
        dims = sorted(f.dim for f in fl.faces)
        assert dims == [0, 0, 1]

    def test_plane_cone(self):
        p = P(2, [((1, 0), 0), ((1, 1), 0)])
        fl = face_lattice(p)
        dims = sorted(f.dim for f in fl.faces)
        assert dims == [0, 1, 1, 2]

    def test_triangle_counts(self):
        fl = face_lattice(triangle())
        assert len(fl.of_dim(0)) == 3
        assert len(fl.of_dim(1)) == 3
        assert len(fl.of_dim(2)) == 1

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_euler_on_cube(self, d):
        ineqs = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            ineqs.append((tuple(e), 0))
            ineqs.append((tuple(-x for x in e), -1))
        fl = face_lattice(P(d, ineqs))
        total = sum((-1) ** f.dim for f in fl.faces if f.dim < d)
        assert total == 1 - (-1) ** d


class TestIntersect:
    def test_idempotent(self):
        p = canonicalize(triangle())
        assert intersect(p, p) == p

    def test_opposite_halvings_give_equality(self):
        c = intersect(P(1, [((1,), 0)]), P(1, [((-1,), 0)]))
        assert c.eqs == (((1,), Fraction(0)),)

    def test_quadrant_from_halfplanes(self):
        c = intersect(P(2, [((1, 0), 0)]), P(2, [((0, 1), 0)]))
        assert c == canonicalize(quadrant())

    def test_commutative_associative(self):
        a, b, c = P(2, [((1, 0), 0)]), P(2, [((0, 1), 0)]), P(2, [((-1, -1), -5)])
        assert intersect(a, b) == intersect(b, a)
        assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            intersect(P(1), P(2))


def random_unimodular(rng, n=3, steps=6):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for t in range(n):
            m[i][t] += c * m[j][t]
    return IntegerMatrix.from_rows(m)


class TestSmoothCone:
    def test_quadrant(self):
        assert is_smooth_cone(quadrant())

    def test_index_two_cone(self):
        # cone spanned by (1,0) and (1,2): normals (0,1) and (2,-1)
        p = P(2, [((0, 1), 0), ((2, -1), 0)])
        assert not is_smooth_cone(p)

    def test_halfplane(self):
        assert is_smooth_cone(P(2, [((1, 1), 0)]))

    def test_whole_space(self):
        assert is_smooth_cone(P(3))

    def test_non_cone_rejected(self):
        with pytest.raises(ValueError):
            is_smooth_cone(segment())

    def test_unimodular_invariance(self):
        rng = random.Random(7)
        base = P(3, [((1, 0, 0), 0), ((0, 1, 0), 0)])  # [0,inf)^2 x R
        for _ in range(20):
            u = random_unimodular(rng)
            f = IntegralAffineMap(u, (Fraction(0),) * 3)
            assert is_smooth_cone(image_polyhedron(base, f))


class TestRelativeInterior:
    def test_halfline_strict(self):
        (x,) = relative_interior_point(halfline())
        assert x > 0

    def test_point(self):
        p = P(1, eqs=[((1,), 0)])
        assert relative_interior_point(p) == (Fraction(0),)

    def test_triangle_all_strict(self):
        pt = relative_interior_point(triangle())
        x, y = pt
        assert x > 0 and y > 0 and x + y < 5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            relative_interior_point(Polyhedron.empty(2))


class TestHullAndImages:
    def test_hull_chart_roundtrip(self):
        p = P(3, eqs=[((1, 1, 0), 2)])
        ch = hull_chart(p)
        pt = relative_interior_point(canonicalize(p))
        z = ch.project(pt)
        assert ch.embed.apply(z) == pt

    def test_restrict_to_hull_full_dim(self):
        p = P(2, [((1, 0), 0)], [((0, 1), 1)])  # ray at height 1
        r = restrict_to_hull(p)
        assert r.dim == 1 and r.eqs == ()

    def test_image_preimage(self):
        f = IntegralAffineMap(
            IntegerMatrix.from_rows([(1,), (1,)]), (Fraction(0), Fraction(1))
        )
        img = image_polyhedron(halfline(), f)  # diagonal ray from (0,1)
        assert img.hull_dim() == 1
        assert img.contains((2, 3))
        assert not img.contains((2, 2))
        back = preimage_polyhedron(img, f)
        assert back == canonicalize(halfline())

    def test_contains_polyhedron(self):
        assert contains_polyhedron(quadrant(), triangle())
        assert not contains_polyhedron(triangle(), quadrant())


class TestVolumeAndBounds:
    def test_recession_and_bounded(self):
        assert not is_bounded(quadrant())
        assert is_bounded(triangle())
        rc = recession_cone(triangle())
        assert len(rc.eqs) == 2

    def test_segment_volume(self):
        assert volume(segment(0, 5)) == 5

    def test_triangle_volume(self):
        assert volume(triangle()) == Fraction(25, 2)

    def test_cube_volume(self):
        ineqs = []
        for i in range(3):
            e = [0] * 3
            e[i] = 1
            ineqs.append((tuple(e), 0))
            ineqs.append((tuple(-x for x in e), -2))
        assert volume(P(3, ineqs)) == 8

    def test_lower_dim_volume_uses_lattice_normalization(self):
        # segment from (0,0) to (1,1) has one lattice step
        p = P(2, [((1, 0), 0), ((-1, 0), -1)], [((1, -1), 0)])
        assert volume(p) == 1

    def test_vertices(self):
        vs = vertices(canonicalize(triangle()))
        assert set(vs) == {
            (Fraction(0), Fraction(0)),
            (Fraction(5), Fraction(0)),
            (Fraction(0), Fraction(5)),
        }


class TestTangentCone:
    def test_vertex_cone_of_triangle(self):
        c = canonicalize(triangle())
        fl = face_lattice(c)
        for v in fl.of_dim(0):
            tc = tangent_cone(c, v.active)
            assert is_smooth_cone(tc) in (True, False)  # well defined cone
            assert tc.contains((0, 0))

    def test_valid_inequality(self):
        assert is_valid_inequality(triangle(), (1, 1), -1)
        assert not is_valid_inequality(triangle(), (1, 1), 1)
