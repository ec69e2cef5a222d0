"""Stratified integral affine complexes.

A complex is a finite collection of polyhedral strata, each carried in
its own integral affine chart, glued by integral affine inclusions that
embed a stratum onto a face of another.  There is no global embedding;
all gluing data lives in the inclusion maps.

Standard validation insists every local model is a smooth cone
(unimodularly [0,inf)^k x R^m); strata may instead carry a
``generalized`` flag admitting arbitrary rational cone models, which
fiber products can produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    IntegerMatrix,
    IntegralAffineMap,
    is_integral_basis_of_saturated_subspace,
    left_inverse_saturated,
)
from .polyhedra import (
    Polyhedron,
    canonicalize,
    face_lattice,
    hull_chart,
    image_polyhedron,
    is_smooth_cone,
    is_valid_inequality,
    relative_interior_point,
    restrict_to_hull,
    tangent_cone,
)


@dataclass(frozen=True)
class Stratum:
    """One stratum, full-dimensional in its own chart R^dim."""

    id: str
    dim: int
    shape: Polyhedron
    generalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "shape", canonicalize(self.shape))
        if self.shape.dim != self.dim:
            raise ValueError(f"stratum {self.id}: chart dimension mismatch")


@dataclass(frozen=True)
class Inclusion:
    """Integral affine embedding of `source` onto a face of `target`."""

    source: str
    target: str
    map: IntegralAffineMap


@dataclass(frozen=True)
class AffineComplex:
    strata: tuple[Stratum, ...]
    inclusions: tuple[Inclusion, ...]

    def __post_init__(self):
        by_id = {}
        for s in self.strata:
            if s.id in by_id:
                raise ValueError(f"duplicate stratum id {s.id!r}")
            by_id[s.id] = s
        object.__setattr__(self, "_by_id", by_id)

    def stratum(self, sid: str) -> Stratum:
        return self._by_id[sid]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.strata)

    def inclusions_into(self, sid: str) -> tuple[Inclusion, ...]:
        return tuple(i for i in self.inclusions if i.target == sid)

    def inclusion_between(self, src: str, tgt: str) -> tuple[Inclusion, ...]:
        return tuple(i for i in self.inclusions if i.source == src and i.target == tgt)


@dataclass(frozen=True)
class StratifiedMap:
    """Functor on strata plus a per-stratum integral affine map."""

    functor: tuple[tuple[str, str], ...]
    maps: tuple[tuple[str, IntegralAffineMap], ...]

    @staticmethod
    def build(functor: dict, maps: dict) -> "StratifiedMap":
        return StratifiedMap(
            tuple(sorted(functor.items())), tuple(sorted(maps.items()))
        )

    @property
    def functor_dict(self) -> dict:
        return dict(self.functor)

    @property
    def maps_dict(self) -> dict:
        return dict(self.maps)

    @staticmethod
    def identity(c: AffineComplex) -> "StratifiedMap":
        return StratifiedMap.build(
            {s.id: s.id for s in c.strata},
            {s.id: IntegralAffineMap.identity(s.dim) for s in c.strata},
        )


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...]

    @property
    def ok(self) -> bool:
        return not any(i.severity == "error" for i in self.issues)

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    def __str__(self):
        if not self.issues:
            return "valid"
        return "\n".join(f"{i.severity}[{i.code}]: {i.message}" for i in self.issues)


def _err(code, msg):
    return Issue("error", code, msg)


def _warn(code, msg):
    return Issue("warning", code, msg)


def validate_complex(c: AffineComplex) -> ValidationReport:
    """Check every axiom of a stratified integral affine complex.

    Diagnostics, not exceptions: each violated axiom is reported with
    the offending stratum and face, and the report is empty iff valid.
    """
    issues: list[Issue] = []
    ids = set(c.ids)
    for inc in c.inclusions:
        if inc.source not in ids or inc.target not in ids:
            issues.append(_err("dangling-inclusion", f"{inc.source}->{inc.target} references a missing stratum"))
    if any(i.code == "dangling-inclusion" for i in issues):
        return ValidationReport(tuple(issues))

    for s in c.strata:
        if s.shape.is_canonical_empty:
            issues.append(_err("empty-stratum", f"stratum {s.id} has empty shape"))
            continue
        if s.shape.hull_dim() != s.dim:
            issues.append(
                _err("not-full-dim", f"stratum {s.id} is not full-dimensional in its chart")
            )
            continue
        if not s.generalized:
            for f in face_lattice(s.shape).faces:
                tc = tangent_cone(s.shape, f.active)
                if not is_smooth_cone(tc):
                    issues.append(
                        _err(
                            "non-smooth-local-model",
                            f"stratum {s.id}: tangent cone at face {sorted(f.active)} "
                            "is not a smooth cone",
                        )
                    )

    # Inclusion maps embed onto faces with unimodular differentials.
    image_of: dict[int, Polyhedron] = {}
    for n, inc in enumerate(c.inclusions):
        src = c.stratum(inc.source)
        tgt = c.stratum(inc.target)
        lin = inc.map.linear
        if lin.ncols != src.dim or lin.nrows != tgt.dim:
            issues.append(_err("map-shape", f"inclusion {inc.source}->{inc.target}: map shape mismatch"))
            continue
        if not is_integral_basis_of_saturated_subspace(lin.transpose()):
            issues.append(
                _err(
                    "non-unimodular-differential",
                    f"inclusion {inc.source}->{inc.target}: differential is not an "
                    "integral isomorphism onto a saturated lattice",
                )
            )
            continue
        img = image_polyhedron(src.shape, inc.map)
        image_of[n] = img
        if inc.source == inc.target:
            issues.append(_warn("self-gluing", f"stratum {inc.source} glued to itself"))

    for src, tgt in {(i.source, i.target) for i in c.inclusions}:
        if len(c.inclusion_between(src, tgt)) > 1:
            issues.append(
                _warn("multiple-gluing", f"multiple inclusions {src}->{tgt} (self-identification)")
            )

    # Every proper face of every stratum is the image of exactly one inclusion.
    for s in c.strata:
        if s.shape.is_canonical_empty or s.shape.hull_dim() != s.dim:
            continue
        proper_faces = [f for f in face_lattice(s.shape).faces if f.dim < s.dim]
        incs = [(n, i) for n, i in enumerate(c.inclusions) if i.target == s.id and n in image_of]
        matched_incs = set()
        for f in proper_faces:
            hits = [n for n, i in incs if image_of[n] == f.polyhedron]
            if not hits:
                issues.append(
                    _err(
                        "missing-inclusion",
                        f"stratum {s.id}: face {sorted(f.active)} (dim {f.dim}) is not "
                        "the image of any inclusion",
                    )
                )
            elif len(hits) > 1:
                issues.append(
                    _err(
                        "duplicate-inclusion",
                        f"stratum {s.id}: face {sorted(f.active)} is the image of "
                        f"{len(hits)} inclusions",
                    )
                )
            matched_incs.update(hits)
        for n, i in incs:
            if n not in matched_incs:
                issues.append(
                    _err(
                        "not-a-face",
                        f"inclusion {i.source}->{i.target}: image is not a face of the target",
                    )
                )

    # Closure under composition.
    by_pair: dict[tuple[str, str], list[Inclusion]] = {}
    for i in c.inclusions:
        by_pair.setdefault((i.source, i.target), []).append(i)
    for i1 in c.inclusions:
        for i2 in c.inclusions:
            if i2.source != i1.target:
                continue
            comp = i2.map.compose(i1.map)
            candidates = by_pair.get((i1.source, i2.target), [])
            if not any(k.map == comp for k in candidates):
                issues.append(
                    _err(
                        "composition-missing",
                        f"composite {i1.source}->{i1.target}->{i2.target} is not in "
                        "the inclusion set",
                    )
                )
    return ValidationReport(tuple(issues))


def _interior_point_maps_to_interior(
    src_shape: Polyhedron, tgt_shape: Polyhedron, f: IntegralAffineMap
) -> bool:
    x0 = relative_interior_point(src_shape)
    y0 = f.apply(x0)
    tgt = canonicalize(tgt_shape)
    from .polyhedra import _dot  # local: exact dot product

    return all(_dot(cv, y0) > k for cv, k in tgt.ineqs) and all(
        _dot(cv, y0) == k for cv, k in tgt.eqs
    )


def _image_contained(src_shape: Polyhedron, tgt_shape: Polyhedron, f: IntegralAffineMap) -> bool:
    """Does f(src_shape) lie inside tgt_shape?  Works for non-injective f."""
    tgt = canonicalize(tgt_shape)
    from .polyhedra import _dot

    lin, tr = f.linear, f.translation
    for cv, k in tgt.ineqs:
        pulled = tuple(
            sum(cv[i] * lin.rows[i][j] for i in range(lin.nrows)) for j in range(lin.ncols)
        )
        if not is_valid_inequality(src_shape, pulled, k - _dot(cv, tr)):
            return False
    for cv, k in tgt.eqs:
        pulled = tuple(
            sum(cv[i] * lin.rows[i][j] for i in range(lin.nrows)) for j in range(lin.ncols)
        )
        rhs = k - _dot(cv, tr)
        if not (
            is_valid_inequality(src_shape, pulled, rhs)
            and is_valid_inequality(src_shape, tuple(-x for x in pulled), -rhs)
        ):
            return False
    return True


def validate_map(
    f: StratifiedMap, src: AffineComplex, dst: AffineComplex
) -> ValidationReport:
    """Functoriality, interior-to-interior, and containment diagnostics."""
    issues: list[Issue] = []
    functor = f.functor_dict
    maps = f.maps_dict
    for s in src.strata:
        if s.id not in functor:
            issues.append(_err("functor-missing", f"no image stratum for {s.id}"))
            continue
        tid = functor[s.id]
        if tid not in set(dst.ids):
            issues.append(_err("functor-target", f"{s.id} maps to unknown stratum {tid}"))
            continue
        if s.id not in maps:
            issues.append(_err("map-missing", f"no affine map for {s.id}"))
            continue
        phi = maps[s.id]
        tgt = dst.stratum(tid)
        if phi.source_dim != s.dim or phi.target_dim != tgt.dim:
            issues.append(_err("map-shape", f"map for {s.id} has wrong shape"))
            continue
        if not _image_contained(s.shape, tgt.shape, phi):
            issues.append(
                _err("image-escapes", f"image of {s.id} is not contained in {tid}")
            )
            continue
        if not _interior_point_maps_to_interior(s.shape, tgt.shape, phi):
            issues.append(
                _err(
                    "interior-violation",
                    f"interior of {s.id} is not sent to the interior of {tid}",
                )
            )
    if issues:
        return ValidationReport(tuple(issues))
    # Commutation with every inclusion: f . iota == F(iota) . f.
    for inc in src.inclusions:
        s_img = functor[inc.source]
        t_img = functor[inc.target]
        lhs = maps[inc.target].compose(inc.map)
        candidates: list[IntegralAffineMap] = []
        if s_img == t_img:
            candidates.append(maps[inc.source])
        for k in dst.inclusion_between(s_img, t_img):
            candidates.append(k.map.compose(maps[inc.source]))
        if not any(lhs == cand for cand in candidates):
            issues.append(
                _err(
                    "functoriality",
                    f"square over inclusion {inc.source}->{inc.target} does not commute",
                )
            )
    return ValidationReport(tuple(issues))


def underlying_space_components(c: AffineComplex) -> tuple[tuple[str, ...], ...]:
    """Connected components of the glued space, as sorted id tuples."""
    parent = {s.id: s.id for s in c.strata}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for inc in c.inclusions:
        a, b = find(inc.source), find(inc.target)
        if a != b:
            parent[a] = b
    groups: dict[str, list[str]] = {}
    for s in c.strata:
        groups.setdefault(find(s.id), []).append(s.id)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


@dataclass(frozen=True)
class Poset:
    elements: tuple[str, ...]
    relation: frozenset  # pairs (a, b) meaning a <= b

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.relation

    def covers(self) -> tuple[tuple[str, str], ...]:
        """Pairs (a, b) with b covering a."""
        out = []
        for a, b in sorted(self.relation):
            if a == b:
                continue
            if any(
                (a, m) in self.relation and (m, b) in self.relation
                for m in self.elements
                if m != a and m != b
            ):
                continue
            out.append((a, b))
        return tuple(out)


def strata_poset(c: AffineComplex) -> Poset:
    """Reflexive-transitive closure of the inclusion relation."""
    rel = {(s.id, s.id) for s in c.strata}
    rel.update((i.source, i.target) for i in c.inclusions)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for bb, cc in list(rel):
                if bb == b and (a, cc) not in rel:
                    rel.add((a, cc))
                    changed = True
    return Poset(tuple(sorted(c.ids)), frozenset(rel))


def is_complete_base(c: AffineComplex) -> bool:
    """Every proper face of every stratum is glued in via an inclusion.

    A lone ray stratum missing its vertex fails; a closed complex where
    every boundary face carries its stratum passes.
    """
    for s in c.strata:
        if s.shape.is_canonical_empty:
            return False
        images = []
        for inc in c.inclusions_into(s.id):
            src = c.stratum(inc.source)
            try:
                images.append(image_polyhedron(src.shape, inc.map))
            except ValueError:
                return False
        for f in face_lattice(s.shape).faces:
            if f.dim >= s.dim:
                continue
            if not any(img == f.polyhedron for img in images):
                return False
    return True


# ---------------------------------------------------------------------------
# Chart transitions and face complexes
# ---------------------------------------------------------------------------


def chart_transition(
    inner: Polyhedron, outer: Polyhedron
) -> IntegralAffineMap:
    """Map from inner's hull chart into outer's hull chart.

    Requires hull(inner) to be contained in hull(outer); both polyhedra
    live in the same ambient space.
    """
    ci = hull_chart(inner).embed
    co = hull_chart(outer).embed
    ko = co.linear
    pinv = (
        left_inverse_saturated(ko)
        if ko.ncols
        else IntegerMatrix.from_rows((), ncols=ko.nrows)
    )
    lin = pinv.mul(ci.linear)
    shift = [a - b for a, b in zip(ci.translation, co.translation)]
    tr = pinv.apply(shift)
    # verify exactness: the composite must reproduce inner's embedding
    recompose = co.compose(IntegralAffineMap(lin, tr))
    if recompose != ci:
        raise ValueError("inner hull is not contained in outer hull")
    return IntegralAffineMap(lin, tr)


def complex_from_polyhedron(p: Polyhedron, prefix: str = "f") -> AffineComplex:
    """The face complex of a single polyhedron, each face in its own chart.

    Stratum ids are deterministic: faces are sorted by (dim, active set)
    and numbered.
    """
    c = canonicalize(p)
    if c.is_canonical_empty:
        raise ValueError("cannot build a complex from an empty polyhedron")
    fl = face_lattice(c)
    order = sorted(fl.faces, key=lambda f: (f.dim, tuple(sorted(f.active))))
    names = {f.active: f"{prefix}{f.dim}_{n}" for n, f in enumerate(order)}
    strata = []
    for f in order:
        strata.append(
            Stratum(
                id=names[f.active],
                dim=f.dim,
                shape=restrict_to_hull(f.polyhedron),
            )
        )
    inclusions = []
    for f in order:
        for g in order:
            if f.active > g.active:  # f is a proper face of g
                inclusions.append(
                    Inclusion(
                        source=names[f.active],
                        target=names[g.active],
                        map=chart_transition(f.polyhedron, g.polyhedron),
                    )
                )
    return AffineComplex(tuple(strata), tuple(inclusions))


def interval_complex(a, b, prefix: str = "s") -> AffineComplex:
    """Closed interval [a, b] with its two endpoint strata."""
    seg = Polyhedron(1, (((1,), Fraction(a)), ((-1,), -Fraction(b))))
    return complex_from_polyhedron(seg, prefix=prefix)
