from fractions import Fraction

import pytest

from explodedkit.complexes import (
    AffineComplex,
    Inclusion,
    StratifiedMap,
    Stratum,
    complex_from_polyhedron,
    interval_complex,
    is_complete_base,
    strata_poset,
    underlying_space_components,
    validate_complex,
    validate_map,
)
from explodedkit.lattice import IntegerMatrix, IntegralAffineMap
from explodedkit.polyhedra import Polyhedron


def point_complex(sid="pt"):
    return AffineComplex((Stratum(sid, 0, Polyhedron(0)),), ())


def quadrant_polyhedron():
    return Polyhedron(2, (((1, 0), 0), ((0, 1), 0)))


def triangle_polyhedron():
    return Polyhedron(2, (((1, 0), 0), ((0, 1), 0), ((-1, -1), -5)))


class TestValidateComplex:
    def test_point_valid(self):
        assert validate_complex(point_complex()).ok

    def test_interval_with_endpoints_valid(self):
        c = interval_complex(1, 2)
        rep = validate_complex(c)
        assert rep.ok, str(rep)
        assert len(c.strata) == 3

    def test_face_complex_of_triangle_valid(self):
        c = complex_from_polyhedron(triangle_polyhedron())
        rep = validate_complex(c)
        assert rep.ok, str(rep)
        assert len(c.strata) == 7
        assert len(c.inclusions) == 12

    def test_missing_edge_stratum_detected(self):
        c = complex_from_polyhedron(triangle_polyhedron())
        # drop one edge stratum and every inclusion touching it
        victim = next(s.id for s in c.strata if s.dim == 1)
        broken = AffineComplex(
            tuple(s for s in c.strata if s.id != victim),
            tuple(i for i in c.inclusions if victim not in (i.source, i.target)),
        )
        rep = validate_complex(broken)
        assert not rep.ok
        assert any(i.code == "missing-inclusion" for i in rep.errors)

    def test_ray_without_vertex_invalid(self):
        ray = Stratum("ray", 1, Polyhedron(1, (((1,), 0),)))
        rep = validate_complex(AffineComplex((ray,), ()))
        assert not rep.ok
        assert any(i.code == "missing-inclusion" for i in rep.errors)

    def test_non_unimodular_differential_detected(self):
        # a 1 -> 2 dim inclusion with a doubled differential
        ray = Stratum("ray", 1, Polyhedron(1, (((1,), 0),)))
        vert = Stratum("v", 0, Polyhedron(0))
        v_in_ray = Inclusion(
            "v", "ray", IntegralAffineMap(IntegerMatrix.from_rows([()]), (Fraction(0),))
        )
        quad = Stratum("q", 2, quadrant_polyhedron())
        dbl = Inclusion(
            "ray",
            "q",
            IntegralAffineMap(IntegerMatrix.from_rows([(2,), (0,)]), (Fraction(0), Fraction(0))),
        )
        rep = validate_complex(AffineComplex((ray, vert, quad), (v_in_ray, dbl)))
        assert any(i.code == "non-unimodular-differential" for i in rep.errors)

    def test_self_gluing_warns(self):
        c = interval_complex(0, 1)
        edge = next(s for s in c.strata if s.dim == 1)
        extra = Inclusion(edge.id, edge.id, IntegralAffineMap.identity(1))
        c2 = AffineComplex(c.strata, c.inclusions + (extra,))
        rep = validate_complex(c2)
        assert any(i.code == "self-gluing" for i in rep.warnings)


class TestValidateMap:
    def test_identity_valid(self):
        c = interval_complex(1, 2)
        rep = validate_map(StratifiedMap.identity(c), c, c)
        assert rep.ok, str(rep)

    def test_face_inclusion_as_map(self):
        # the face complex of one triangle edge, mapped into the triangle's
        # face complex stratum-by-stratum
        from explodedkit.polyhedra import canonicalize, face_lattice

        tri = canonicalize(triangle_polyhedron())
        c = complex_from_polyhedron(tri)
        order = sorted(
            face_lattice(tri).faces, key=lambda f: (f.dim, tuple(sorted(f.active)))
        )
        by_poly = {f.polyhedron: s.id for f, s in zip(order, c.strata)}
        edge_face = next(f for f in face_lattice(tri).faces if f.dim == 1)
        sub = complex_from_polyhedron(edge_face.polyhedron)
        sub_order = sorted(
            face_lattice(edge_face.polyhedron).faces,
            key=lambda f: (f.dim, tuple(sorted(f.active))),
        )
        functor = {}
        maps = {}
        for f, s in zip(sub_order, sub.strata):
            functor[s.id] = by_poly[f.polyhedron]
            maps[s.id] = IntegralAffineMap.identity(s.dim)
        rep = validate_map(StratifiedMap.build(functor, maps), sub, c)
        assert rep.ok, str(rep)

    def test_interior_violation_detected(self):
        # map the open edge of [0,1] onto the vertex 0 of the same complex
        c = interval_complex(0, 1)
        edge = next(s.id for s in c.strata if s.dim == 1)
        verts = [i.source for i in c.inclusions if i.target == edge]
        f = StratifiedMap.build(
            {
                edge: edge,
                verts[0]: verts[0],
                verts[1]: verts[1],
            },
            {
                edge: IntegralAffineMap(
                    IntegerMatrix.from_rows([(0,)]), (Fraction(0),)
                ),
                verts[0]: IntegralAffineMap.identity(0),
                verts[1]: IntegralAffineMap.identity(0),
            },
        )
        rep = validate_map(f, c, c)
        assert not rep.ok
        assert any(i.code == "interior-violation" for i in rep.errors)


class TestComponentsAndPoset:
    def test_two_points(self):
        c = AffineComplex(
            (Stratum("a", 0, Polyhedron(0)), Stratum("b", 0, Polyhedron(0))), ()
        )
        assert underlying_space_components(c) == (("a",), ("b",))

    def test_interval_connected(self):
        assert len(underlying_space_components(interval_complex(1, 2))) == 1

    def test_quadrant_poset_diamond(self):
        c = complex_from_polyhedron(quadrant_polyhedron())
        p = strata_poset(c)
        assert len(p.elements) == 4
        bottom = [e for e in p.elements if all(p.leq(e, x) for x in p.elements)]
        assert len(bottom) == 1
        assert len(p.covers()) == 4

    def test_triangle_poset_levels(self):
        c = complex_from_polyhedron(triangle_polyhedron())
        p = strata_poset(c)
        dims = {s.id: s.dim for s in c.strata}
        for a, b in p.covers():
            assert dims[b] == dims[a] + 1


class TestCompleteBase:
    def test_triangle_complete(self):
        assert is_complete_base(complex_from_polyhedron(triangle_polyhedron()))

    def test_open_ray_incomplete(self):
        ray = Stratum("ray", 1, Polyhedron(1, (((1,), 0),)))
        assert not is_complete_base(AffineComplex((ray,), ()))

    def test_point_complete(self):
        assert is_complete_base(point_complex())
