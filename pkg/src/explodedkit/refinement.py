"""Integral subdivisions of bases and the induced refinements.

A subdivision pairs a coarse complex with a fine one plus a stratified
map realizing a homeomorphism of underlying spaces whose per-stratum
differentials are integral isomorphisms onto their images.  Each fine
top cell inside a cone stratum is cut out by covectors that must form
an integral basis of a saturated subspace; the induced chart of a cell
relabels which coordinate products count as affine or boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complexes import (
    AffineComplex,
    Inclusion,
    Issue,
    Stratum,
    StratifiedMap,
    ValidationReport,
    chart_transition,
    underlying_space_components,
    validate_complex,
    validate_map,
)
from .explosion import ChartSignature, ExplodedChart, exploded_chart_over
from .lattice import (
    IntegerMatrix,
    IntegralAffineMap,
    extend_to_unimodular_basis,
    inverse_unimodular,
    is_integral_basis_of_saturated_subspace,
    left_inverse_saturated,
)
from .polyhedra import (
    Polyhedron,
    canonicalize,
    cone_apex,
    contains_polyhedron,
    face_lattice,
    hull_chart,
    image_polyhedron,
    intersect,
    is_smooth_cone,
    is_valid_inequality,
    preimage_polyhedron,
    relative_interior_point,
    restrict_to_hull,
    tangent_cone,
)
from .polyhedra import _dot  # exact dot product


@dataclass(frozen=True)
class Subdivision:
    """fine -> coarse subdivision data; `map` sends fine strata onto the
    pieces they cut out of coarse strata."""

    coarse: AffineComplex
    fine: AffineComplex
    map: StratifiedMap

    def fine_over(self, coarse_id: str) -> tuple[Stratum, ...]:
        functor = self.map.functor_dict
        return tuple(s for s in self.fine.strata if functor.get(s.id) == coarse_id)

    def image_in_coarse(self, fine_id: str) -> Polyhedron:
        s = self.fine.stratum(fine_id)
        return image_polyhedron(s.shape, self.map.maps_dict[fine_id])


def identity_subdivision(c: AffineComplex) -> Subdivision:
    return Subdivision(c, c, StratifiedMap.identity(c))


# ---------------------------------------------------------------------------
# Building a subdivision from top cells
# ---------------------------------------------------------------------------


def _poly_key(p: Polyhedron):
    return (p.ineqs, p.eqs)


def _factor_through_hull(target: Polyhedron, embed: IntegralAffineMap) -> IntegralAffineMap:
    """Unique mu with hull_chart(target).embed . mu == embed."""
    ch = hull_chart(target).embed
    k = ch.linear
    pinv = (
        left_inverse_saturated(k)
        if k.ncols
        else IntegerMatrix.from_rows((), ncols=k.nrows)
    )
    lin = pinv.mul(embed.linear)
    shift = [a - b for a, b in zip(embed.translation, ch.translation)]
    mu = IntegralAffineMap(lin, pinv.apply(shift))
    if ch.compose(mu) != embed:
        raise ValueError("embedding does not factor through the hull")
    return mu


def complex_from_cells(
    coarse: AffineComplex, cells: Mapping[str, Sequence[Polyhedron]]
) -> Subdivision:
    """Assemble the fine complex generated by top cells per coarse stratum.

    `cells[C]` lists full-dimensional polyhedra in C's chart.  Strata of
    coarse strata without explicit cells are induced from higher strata
    through the coarse inclusions.  All faces of all cells become fine
    strata (attributed to the coarse stratum whose interior holds their
    relative interior), deterministically ordered and labeled r0, r1...
    Non-smooth fine strata get the generalized flag rather than failing.
    """
    functor = {}
    given: dict[str, list[Polyhedron]] = {
        cid: [canonicalize(p) for p in cs] for cid, cs in cells.items()
    }
    order = sorted(coarse.strata, key=lambda s: -s.dim)
    all_cells: dict[str, list[Polyhedron]] = {}
    for c in order:
        if c.id in given and given[c.id]:
            all_cells[c.id] = _dedupe_polys(given[c.id])
            continue
        induced: list[Polyhedron] = []
        for inc in coarse.inclusions:
            if inc.source != c.id:
                continue
            for cell in all_cells.get(inc.target, []):
                piece = preimage_polyhedron(cell, inc.map)
                if piece.hull_dim() == c.dim:
                    induced.append(piece)
        if not induced and c.dim == 0:
            induced = [canonicalize(c.shape)]
        all_cells[c.id] = _dedupe_polys(induced)

    # Collect fine strata: faces of cells whose relative interior sits in
    # the interior of the owning coarse stratum.
    pieces: dict[str, list[Polyhedron]] = {c.id: [] for c in coarse.strata}
    for c in coarse.strata:
        shape = c.shape
        for cell in all_cells[c.id]:
            for f in face_lattice(cell).faces:
                pt = relative_interior_point(f.polyhedron)
                strict = all(_dot(cv, pt) > k for cv, k in shape.ineqs)
                if strict and f.polyhedron not in pieces[c.id]:
                    pieces[c.id].append(f.polyhedron)

    entries = []  # (dim, coarse id, image polyhedron)
    for cid, ps in pieces.items():
        for p in ps:
            entries.append((p.hull_dim(), cid, p))
    entries.sort(key=lambda e: (e[0], e[1], _poly_key(e[2])))

    strata = []
    embeds = {}
    images = {}
    owners = {}
    maps = {}
    for n, (d, cid, p) in enumerate(entries):
        sid = f"r{n}"
        shape = restrict_to_hull(p)
        smooth = all(
            is_smooth_cone(tangent_cone(shape, f.active))
            for f in face_lattice(shape).faces
        )
        strata.append(Stratum(sid, d, shape, generalized=not smooth))
        embeds[sid] = hull_chart(p).embed
        images[sid] = p
        owners[sid] = cid
        functor[sid] = cid
        maps[sid] = embeds[sid]

    # Inclusions between fine strata: G1 (over C1) includes into G2
    # (over C2) when some coarse inclusion carries G1 onto a face of G2.
    inclusions = []
    face_cache = {
        sid: {f.polyhedron for f in face_lattice(images[sid]).faces}
        for sid in images
    }
    for s1 in strata:
        for s2 in strata:
            if s1.dim >= s2.dim:
                continue
            c1, c2 = owners[s1.id], owners[s2.id]
            carried: list[IntegralAffineMap] = []
            if c1 == c2:
                if images[s1.id] in face_cache[s2.id]:
                    carried.append(embeds[s1.id])
            for inc in coarse.inclusion_between(c1, c2):
                moved = image_polyhedron(images[s1.id], inc.map)
                if moved in face_cache[s2.id]:
                    carried.append(inc.map.compose(embeds[s1.id]))
            seen_maps = []
            for emb in carried:
                mu = _factor_through_hull(images[s2.id], emb)
                if mu not in seen_maps:
                    seen_maps.append(mu)
                    inclusions.append(Inclusion(s1.id, s2.id, mu))

    fine = AffineComplex(tuple(strata), tuple(inclusions))
    fmap = StratifiedMap.build(functor, maps)
    return Subdivision(coarse, fine, fmap)


def _dedupe_polys(ps: Iterable[Polyhedron]) -> list[Polyhedron]:
    out: list[Polyhedron] = []
    for p in ps:
        if p not in out:
            out.append(p)
    return out


def subdivision_from_cone_cells(
    coarse: AffineComplex, top_id: str, cells: Sequence[Polyhedron]
) -> Subdivision:
    """Subdivision of a complex with a unique maximal stratum."""
    return complex_from_cells(coarse, {top_id: list(cells)})


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_subdivision(s: Subdivision, permissive: bool = False) -> ValidationReport:
    """Cover, pairwise-face, basis and homeomorphism diagnostics.

    In strict mode (default) every fine stratum must have smooth local
    models; permissive mode lets generalized strata through.
    """
    issues: list[Issue] = []
    rep_coarse = validate_complex(s.coarse)
    issues.extend(
        Issue(i.severity, f"coarse:{i.code}", i.message) for i in rep_coarse.issues
    )
    rep_fine = validate_complex(s.fine)
    issues.extend(
        Issue(i.severity, f"fine:{i.code}", i.message) for i in rep_fine.issues
    )
    if not permissive:
        for st in s.fine.strata:
            if st.generalized:
                issues.append(
                    Issue(
                        "error",
                        "non-saturated-cell",
                        f"fine stratum {st.id} is a generalized (non-smooth) cell",
                    )
                )
    rep_map = validate_map(s.map, s.fine, s.coarse)
    issues.extend(Issue(i.severity, f"map:{i.code}", i.message) for i in rep_map.issues)
    if any(i.severity == "error" for i in issues):
        return ValidationReport(tuple(issues))

    functor = s.map.functor_dict
    maps = s.map.maps_dict
    for st in s.fine.strata:
        lin = maps[st.id].linear
        if not is_integral_basis_of_saturated_subspace(lin.transpose()):
            issues.append(
                Issue(
                    "error",
                    "non-isomorphic-differential",
                    f"fine stratum {st.id}: differential is not an integral "
                    "isomorphism onto its image",
                )
            )
    if any(i.severity == "error" for i in issues):
        return ValidationReport(tuple(issues))

    for c in s.coarse.strata:
        fine_here = [st for st in s.fine.strata if functor[st.id] == c.id]
        cells = [
            (st, image_polyhedron(st.shape, maps[st.id]))
            for st in fine_here
            if st.dim == c.dim
        ]
        if not cells:
            issues.append(
                Issue("error", "cover-empty", f"no top cells over coarse stratum {c.id}")
            )
            continue
        face_sets = {st.id: {f.polyhedron for f in face_lattice(img).faces} for st, img in cells}
        # cone cells: explicit saturated-basis diagnostics
        for st, img in cells:
            if cone_apex(img) is not None:
                normals = IntegerMatrix.from_rows(
                    [cv for cv, _ in img.ineqs], ncols=img.dim
                )
                if not is_integral_basis_of_saturated_subspace(normals):
                    issues.append(
                        Issue(
                            "error" if not permissive else "warning",
                            "cell-basis",
                            f"cell {st.id} over {c.id}: normals are not an integral "
                            "basis of a saturated subspace",
                        )
                    )
        # pairwise intersections must be common faces
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                (st1, img1), (st2, img2) = cells[i], cells[j]
                x = intersect(img1, img2)
                if x.is_canonical_empty:
                    continue
                if x.hull_dim() == c.dim:
                    issues.append(
                        Issue(
                            "error",
                            "overlap",
                            f"cells {st1.id} and {st2.id} over {c.id} share interior",
                        )
                    )
                elif x not in face_sets[st1.id] or x not in face_sets[st2.id]:
                    issues.append(
                        Issue(
                            "error",
                            "non-face-intersection",
                            f"cells {st1.id} and {st2.id} over {c.id} do not meet "
                            "in a common face",
                        )
                    )
        # cover check by facet matching
        cshape = canonicalize(c.shape)
        for st, img in cells:
            for f in face_lattice(img).faces:
                if f.dim != c.dim - 1:
                    continue
                pt = relative_interior_point(f.polyhedron)
                on_boundary = any(_dot(cv, pt) == k for cv, k in cshape.ineqs)
                if on_boundary:
                    continue
                partners = [
                    st2.id
                    for st2, img2 in cells
                    if st2.id != st.id and f.polyhedron in face_sets[st2.id]
                ]
                if len(partners) != 1:
                    issues.append(
                        Issue(
                            "error",
                            "cover-gap",
                            f"facet of cell {st.id} over {c.id} is shared by "
                            f"{len(partners)} other cells (expected 1)",
                        )
                    )
        # lower strata must be faces of cells
        for st in fine_here:
            if st.dim == c.dim:
                continue
            img = image_polyhedron(st.shape, maps[st.id])
            if not any(img in fs for fs in face_sets.values()):
                issues.append(
                    Issue(
                        "error",
                        "floating-stratum",
                        f"fine stratum {st.id} over {c.id} is not a face of any cell",
                    )
                )
    return ValidationReport(tuple(issues))


# ---------------------------------------------------------------------------
# Cell charts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellChart:
    """Coordinate roles of the chart attached to one subdivision cell.

    The rows of `alphas` are the cell's facet covectors (new boundary
    coordinate products); `betas` completes them to a unimodular basis
    (new affine coordinate products); remaining coordinates keep their
    roles.
    """

    alphas: IntegerMatrix
    betas: IntegerMatrix
    signature: ChartSignature

    @property
    def basis(self) -> IntegerMatrix:
        return self.betas.stack(self.alphas)


def cell_chart(normals: IntegerMatrix, ambient: ChartSignature) -> CellChart:
    """Chart of the cell {y . alpha_j >= 0} inside a chart's cone base."""
    if normals.ncols != ambient.base_dim:
        raise ValueError("normals must live in the chart's base coordinates")
    if not is_integral_basis_of_saturated_subspace(normals):
        raise ValueError("cell normals are not an integral basis of a saturated subspace")
    full = extend_to_unimodular_basis(normals)
    r = normals.nrows
    betas = IntegerMatrix.from_rows(full.rows[: full.nrows - r], ncols=normals.ncols)
    sig = ChartSignature(ambient.base_dim - r, r, ambient.smooth)
    return CellChart(normals, betas, sig)


# ---------------------------------------------------------------------------
# Refinement of exploded chart data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RefinedChart:
    """Exploded chart data over the fine base, plus per-cell charts and
    the exponent relabelings between adjacent cells."""

    chart: ExplodedChart
    subdivision: Subdivision
    cell_charts: tuple[tuple[str, CellChart], ...]
    transitions: tuple[tuple[str, str, IntegerMatrix], ...]

    @property
    def cell_chart_dict(self) -> dict:
        return dict(self.cell_charts)


def canonical_subdivision(s: Subdivision) -> Subdivision:
    """Relabel fine strata deterministically (by dimension, owning
    coarse stratum, then canonical image); output is independent of the
    input's stratum ordering and naming."""
    functor = s.map.functor_dict
    keyed = sorted(
        s.fine.strata,
        key=lambda st: (st.dim, functor[st.id], _poly_key(s.image_in_coarse(st.id))),
    )
    rename = {st.id: f"r{n}" for n, st in enumerate(keyed)}
    strata = tuple(
        Stratum(rename[st.id], st.dim, st.shape, st.generalized) for st in keyed
    )
    inclusions = tuple(
        sorted(
            (
                Inclusion(rename[i.source], rename[i.target], i.map)
                for i in s.fine.inclusions
            ),
            key=lambda i: (i.source, i.target, i.map.linear.rows, i.map.translation),
        )
    )
    maps = s.map.maps_dict
    fmap = StratifiedMap.build(
        {rename[sid]: c for sid, c in functor.items()},
        {rename[sid]: m for sid, m in maps.items()},
    )
    return Subdivision(s.coarse, AffineComplex(strata, inclusions), fmap)


def _cone_signature(shape: Polyhedron, total: int, smooth: int) -> ChartSignature | None:
    """Ambient role split of a coarse cone stratum's own chart."""
    c = canonicalize(shape)
    if cone_apex(c) is None:
        return None
    b = len(c.ineqs)
    return ChartSignature(c.dim - b, b, smooth + (total - c.dim))


def refine(chart: ExplodedChart, s: Subdivision) -> RefinedChart:
    """Unique refinement of exploded chart data along a subdivision.

    The fine base is relabeled canonically, fiber signatures follow the
    role-flip rule (dimension d strata keep d affine roles), and each
    top cell over a cone stratum gets its CellChart plus unimodular
    exponent relabelings to adjacent cells.
    """
    if chart.base != s.coarse:
        raise ValueError("chart base and subdivision coarse complex differ")
    rep = validate_subdivision(s, permissive=True)
    if not rep.ok:
        raise ValueError(f"invalid subdivision:\n{rep}")
    s = canonical_subdivision(s)
    refined = exploded_chart_over(s.fine, chart.signature)
    functor = s.map.functor_dict
    cell_charts = []
    by_coarse: dict[str, list[tuple[str, Polyhedron]]] = {}
    for st in s.fine.strata:
        cid = functor[st.id]
        coarse_stratum = s.coarse.stratum(cid)
        img = s.image_in_coarse(st.id)
        if st.dim == coarse_stratum.dim:
            by_coarse.setdefault(cid, []).append((st.id, img))
            amb = _cone_signature(
                coarse_stratum.shape, chart.signature.base_dim, chart.signature.smooth
            )
            if amb is not None and cone_apex(img) is not None:
                normals = IntegerMatrix.from_rows(
                    [cv for cv, _ in img.ineqs], ncols=img.dim
                )
                if is_integral_basis_of_saturated_subspace(normals):
                    cell_charts.append((st.id, cell_chart(normals, amb)))
    chart_map = dict(cell_charts)
    transitions = []
    for cid, items in sorted(by_coarse.items()):
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                (id1, img1), (id2, img2) = items[a], items[b]
                if id1 not in chart_map or id2 not in chart_map:
                    continue
                common = intersect(img1, img2)
                if common.is_canonical_empty or common.hull_dim() != img1.dim - 1:
                    continue
                w1 = chart_map[id1].basis
                w2 = chart_map[id2].basis
                transitions.append((id1, id2, w2.mul(inverse_unimodular(w1))))
    return RefinedChart(
        chart=refined,
        subdivision=s,
        cell_charts=tuple(sorted(cell_charts)),
        transitions=tuple(sorted(transitions, key=lambda t: (t[0], t[1]))),
    )


# ---------------------------------------------------------------------------
# Lifting morphisms through a subdivision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftFailure:
    """Why a map does not factor through the fine complex: the image of
    `stratum` crosses `wall` (a facet inequality of cell `cell`)."""

    stratum: str
    cell: str
    wall: tuple[tuple[int, ...], Fraction]

    @property
    def failed(self) -> bool:
        return True


def lift_map(
    f: StratifiedMap, source: AffineComplex, s: Subdivision
) -> StratifiedMap | LiftFailure:
    """Unique lift of f through the subdivision, or a wall certificate.

    For every source stratum the image must lie inside a single fine
    piece; the lift rewrites the functor and factors each affine map
    through the fine stratum's chart.
    """
    functor = f.functor_dict
    maps = f.maps_dict
    fine_functor = s.map.functor_dict
    fine_maps = s.map.maps_dict
    new_functor = {}
    new_maps = {}
    for st in source.strata:
        cid = functor[st.id]
        phi = maps[st.id]
        x0 = relative_interior_point(st.shape)
        y0 = phi.apply(x0)
        home = None
        for fid, fcid in fine_functor.items():
            if fcid != cid:
                continue
            img = s.image_in_coarse(fid)
            if all(_dot(cv, y0) > k for cv, k in img.ineqs) and all(
                _dot(cv, y0) == k for cv, k in img.eqs
            ):
                home = fid
                break
        if home is None:
            raise ValueError(f"image of {st.id} does not meet any fine stratum interior")
        img = s.image_in_coarse(home)
        for cv, k in img.ineqs + img.eqs:
            pulled = tuple(
                sum(cv[i] * phi.linear.rows[i][j] for i in range(phi.target_dim))
                for j in range(phi.source_dim)
            )
            rhs = k - _dot(cv, phi.translation)
            ok = is_valid_inequality(st.shape, pulled, rhs)
            if ok and (cv, k) in img.eqs:
                ok = is_valid_inequality(
                    st.shape, tuple(-x for x in pulled), -rhs
                )
            if not ok:
                return LiftFailure(stratum=st.id, cell=home, wall=(cv, k))
        new_functor[st.id] = home
        new_maps[st.id] = _factor_through_hull(img, phi)
    return StratifiedMap.build(new_functor, new_maps)


def compose_with_subdivision(lift: StratifiedMap, s: Subdivision) -> StratifiedMap:
    """s.map composed with a lift into s.fine (a map back to s.coarse)."""
    functor = {}
    maps = {}
    fine_functor = s.map.functor_dict
    fine_maps = s.map.maps_dict
    for sid, fid in lift.functor_dict.items():
        functor[sid] = fine_functor[fid]
        maps[sid] = fine_maps[fid].compose(lift.maps_dict[sid])
    return StratifiedMap.build(functor, maps)


# ---------------------------------------------------------------------------
# Common refinement
# ---------------------------------------------------------------------------


def common_refinement(s1: Subdivision, s2: Subdivision) -> Subdivision:
    """Cells are the interior-meeting pairwise intersections of cells.

    Both inputs lift through the result; non-saturated intersection
    cells come back flagged generalized rather than as errors.
    """
    if s1.coarse != s2.coarse:
        raise ValueError("subdivisions refine different complexes")
    coarse = s1.coarse
    f1, f2 = s1.map.functor_dict, s2.map.functor_dict
    cells: dict[str, list[Polyhedron]] = {}
    for c in coarse.strata:
        tops1 = [
            s1.image_in_coarse(st.id)
            for st in s1.fine.strata
            if f1[st.id] == c.id and st.dim == c.dim
        ]
        tops2 = [
            s2.image_in_coarse(st.id)
            for st in s2.fine.strata
            if f2[st.id] == c.id and st.dim == c.dim
        ]
        here = []
        for a in tops1:
            for b in tops2:
                x = intersect(a, b)
                if not x.is_canonical_empty and x.hull_dim() == c.dim:
                    here.append(x)
        cells[c.id] = here
    return canonical_subdivision(complex_from_cells(coarse, cells))
