import random
from fractions import Fraction

import pytest

from explodedkit.complexes import (
    AffineComplex,
    StratifiedMap,
    Stratum,
    complex_from_polyhedron,
    interval_complex,
    underlying_space_components,
    validate_complex,
    validate_map,
)
from explodedkit.explosion import ChartSignature, explode, exploded_chart_over
from explodedkit.lattice import IntegerMatrix, IntegralAffineMap
from explodedkit.polyhedra import Polyhedron, canonicalize
from explodedkit.refinement import (
    CellChart,
    LiftFailure,
    Subdivision,
    canonical_subdivision,
    cell_chart,
    common_refinement,
    complex_from_cells,
    compose_with_subdivision,
    identity_subdivision,
    lift_map,
    refine,
    validate_subdivision,
)

from helpers_fans import cone_from_generators, fan_subdivision


def quadrant_complex():
    return complex_from_polyhedron(
        Polyhedron(2, (((1, 0), 0), ((0, 1), 0)))
    )


def top_of(c):
    return max(c.strata, key=lambda s: s.dim).id


def diagonal_split(coarse=None):
    coarse = coarse or quadrant_complex()
    cells = [
        cone_from_generators([(0, 1), (1, 1)]),
        cone_from_generators([(1, 0), (1, 1)]),
    ]
    return complex_from_cells(coarse, {top_of(coarse): cells})


class TestValidateSubdivision:
    def test_identity_valid(self):
        s = identity_subdivision(quadrant_complex())
        rep = validate_subdivision(s)
        assert rep.ok, str(rep)

    def test_diagonal_split_valid(self):
        s = diagonal_split()
        rep = validate_subdivision(s)
        assert rep.ok, str(rep)
        assert validate_complex(s.fine).ok

    def test_ray_through_1_2_fails_saturation(self):
        coarse = quadrant_complex()
        cells = [
            cone_from_generators([(1, 0), (1, 2)]),  # normals (0,1),(2,-1): index 2
            cone_from_generators([(1, 2), (0, 1)]),  # normals (1,0),(-2,1): smooth
        ]
        s = complex_from_cells(coarse, {top_of(coarse): cells})
        strict = validate_subdivision(s)
        assert not strict.ok
        assert any(i.code in ("non-saturated-cell", "cell-basis") for i in strict.errors)
        loose = validate_subdivision(s, permissive=True)
        assert loose.ok, str(loose)

    def test_gap_detected(self):
        coarse = quadrant_complex()
        cells = [cone_from_generators([(1, 0), (1, 1)])]  # misses upper half
        s = complex_from_cells(coarse, {top_of(coarse): cells})
        rep = validate_subdivision(s)
        assert not rep.ok


class TestCellChart:
    def test_whole_cone_chart(self):
        sig = ChartSignature(1, 2, 1)
        normals = IntegerMatrix.from_rows([(0, 1, 0), (0, 0, 1)], ncols=3)
        ch = cell_chart(normals, sig)
        assert ch.signature == sig
        assert abs(ch.basis.det()) == 1

    def test_two_boundary_mix(self):
        sig = ChartSignature(0, 2, 0)
        normals = IntegerMatrix.from_rows([(1, 0), (1, 1)])
        ch = cell_chart(normals, sig)
        assert ch.signature == ChartSignature(0, 2, 0)
        assert ch.betas.nrows == 0
        assert abs(ch.basis.det()) == 1

    def test_extra_affine_normal_becomes_boundary(self):
        sig = ChartSignature(1, 1, 2)  # base dim 2
        normals = IntegerMatrix.from_rows([(1, 0), (0, 1)])
        ch = cell_chart(normals, sig)
        assert ch.signature == ChartSignature(0, 2, 2)

    def test_saturation_required(self):
        with pytest.raises(ValueError):
            cell_chart(IntegerMatrix.from_rows([(2, 0)]), ChartSignature(0, 2, 0))


class TestRefine:
    def test_identity_refinement_structure(self):
        chart = explode(ChartSignature(0, 2, 0))
        s = identity_subdivision(chart.base)
        r = refine(chart, s)
        sigs = r.chart.fiber_signature_dict
        assert sorted(s.total for s in sigs.values()) == sorted(
            s.total for s in chart.fiber_signature_dict.values()
        )
        assert len(underlying_space_components(r.chart.base)) == len(
            underlying_space_components(chart.base)
        )

    def test_diagonal_split_of_explosion(self):
        chart = explode(ChartSignature(0, 2, 0))
        cells = [
            cone_from_generators([(0, 1), (1, 1)]),
            cone_from_generators([(1, 0), (1, 1)]),
        ]
        s = complex_from_cells(chart.base, {"s": cells})
        r = refine(chart, s)
        sigs = r.chart.fiber_signature_dict
        base = r.chart.base
        deepest = [sid for sid, sg in sigs.items() if base.stratum(sid).dim == 0]
        assert len(deepest) == 1
        assert sigs[deepest[0]] == ChartSignature(0, 2, 0)
        open_cells = [sid for sid in sigs if base.stratum(sid).dim == 2]
        assert len(open_cells) == 2
        for sid in open_cells:
            assert sigs[sid] == ChartSignature(2, 0, 0)
        # two adjacent cells, one exponent relabeling between them
        assert len(r.transitions) == 1
        a, b, m = r.transitions[0]
        assert abs(m.det()) == 1

    def test_ray_subdivided_at_integer_point(self):
        chart = explode(ChartSignature(0, 1, 0))
        seg = Polyhedron(1, (((1,), 0), ((-1,), -2)))
        tail = Polyhedron(1, (((1,), 2),))
        s = complex_from_cells(chart.base, {"s": [seg, tail]})
        r = refine(chart, s)
        base = r.chart.base
        verts = [sid for sid in r.chart.fiber_signature_dict if base.stratum(sid).dim == 0]
        assert len(verts) == 2  # origin and the new vertex at 2
        for sid in verts:
            assert r.chart.fiber_signature_dict[sid] == ChartSignature(0, 1, 0)
        rep = validate_complex(base)
        assert rep.ok, str(rep)

    def test_output_canonical_under_input_reordering(self):
        chart = explode(ChartSignature(0, 2, 0))
        cells = [
            cone_from_generators([(0, 1), (1, 1)]),
            cone_from_generators([(1, 0), (1, 1)]),
        ]
        s1 = complex_from_cells(chart.base, {"s": cells})
        s2 = complex_from_cells(chart.base, {"s": list(reversed(cells))})
        assert refine(chart, s1) == refine(chart, s2)

    def test_components_preserved_on_random_fans(self):
        rng = random.Random(11)
        for _ in range(5):
            dim = rng.choice([2, 3])
            coarse, top, sub = fan_subdivision(rng, dim, rng.randint(1, 3))
            chart = exploded_chart_over(coarse, ChartSignature(0, dim, 0))
            r = refine(chart, sub)
            assert len(underlying_space_components(r.chart.base)) == len(
                underlying_space_components(coarse)
            )


class TestLift:
    def test_identity_subdivision_lift_is_f(self):
        c = quadrant_complex()
        s = identity_subdivision(c)
        pt = AffineComplex((Stratum("d", 0, Polyhedron(0)),), ())
        f = StratifiedMap.build(
            {"d": top_of(c)},
            {"d": IntegralAffineMap(IntegerMatrix.from_rows([(), ()]), (Fraction(1), Fraction(2)))},
        )
        lifted = lift_map(f, pt, s)
        assert lifted == f

    def test_point_lifts_into_containing_cell(self):
        s = diagonal_split()
        pt = AffineComplex((Stratum("d", 0, Polyhedron(0)),), ())
        f = StratifiedMap.build(
            {"d": top_of(s.coarse)},
            {"d": IntegralAffineMap(IntegerMatrix.from_rows([(), ()]), (Fraction(3), Fraction(1)))},
        )
        lifted = lift_map(f, pt, s)
        assert isinstance(lifted, StratifiedMap)
        fine_id = lifted.functor_dict["d"]
        img = s.image_in_coarse(fine_id)
        assert img.contains((3, 1))
        assert compose_with_subdivision(lifted, s) == f
        assert validate_map(lifted, pt, s.fine).ok

    def test_wall_crossing_certificate(self):
        s = diagonal_split()
        seg = interval_complex(0, 2, prefix="d")
        edge = next(x.id for x in seg.strata if x.dim == 1)
        functor = {x.id: top_of(s.coarse) for x in seg.strata}
        maps = {}
        for x in seg.strata:
            if x.dim == 1:
                maps[x.id] = IntegralAffineMap(
                    IntegerMatrix.from_rows([(0,), (1,)]), (Fraction(1), Fraction(1, 2))
                )
            else:
                # endpoints at (1, 1/2) and (1, 5/2), around the diagonal wall
                inc = next(i for i in seg.inclusions if i.source == x.id)
                val = inc.map.apply(())
                maps[x.id] = IntegralAffineMap(
                    IntegerMatrix.from_rows([(), ()]), (Fraction(1), val[0] + Fraction(1, 2))
                )
        f = StratifiedMap.build(functor, maps)
        assert validate_map(f, seg, s.coarse).ok
        result = lift_map(f, seg, s)
        assert isinstance(result, LiftFailure)
        assert result.stratum == edge
        assert result.wall[0] in ((1, -1), (-1, 1))

    def test_lift_deterministic(self):
        s = diagonal_split()
        pt = AffineComplex((Stratum("d", 0, Polyhedron(0)),), ())
        f = StratifiedMap.build(
            {"d": top_of(s.coarse)},
            {"d": IntegralAffineMap(IntegerMatrix.from_rows([(), ()]), (Fraction(1), Fraction(4)))},
        )
        assert lift_map(f, pt, s) == lift_map(f, pt, s)


class TestCommonRefinement:
    def test_identity_absorbs(self):
        s2 = diagonal_split()
        s1 = identity_subdivision(s2.coarse)
        common = common_refinement(s1, s2)
        assert common == canonical_subdivision(s2)

    def test_idempotent(self):
        s = diagonal_split()
        assert common_refinement(s, s) == canonical_subdivision(s)

    def test_two_rays_three_cells(self):
        coarse = quadrant_complex()
        top = top_of(coarse)
        s1 = complex_from_cells(
            coarse,
            {
                top: [
                    cone_from_generators([(0, 1), (1, 1)]),
                    cone_from_generators([(1, 0), (1, 1)]),
                ]
            },
        )
        s2 = complex_from_cells(
            coarse,
            {
                top: [
                    cone_from_generators([(1, 0), (1, 2)]),
                    cone_from_generators([(1, 2), (0, 1)]),
                ]
            },
        )
        common = common_refinement(s1, s2)
        tops = [s for s in common.fine.strata if s.dim == 2]
        assert len(tops) == 3
        rep = validate_subdivision(common)
        assert rep.ok, str(rep)
        # the common subdivision map lifts through each input, exhibiting
        # the result as a refinement of both
        for s in (s1, s2):
            lifted = lift_map(common.map, common.fine, s)
            assert isinstance(lifted, StratifiedMap)
            assert compose_with_subdivision(lifted, s) == common.map
