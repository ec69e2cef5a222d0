"""Rational convex polyhedra with integral facet data.

H-representation is primary: a polyhedron is a finite list of
inequalities ``alpha . y >= c`` and equalities ``alpha . y == c`` with
integer covectors alpha and rational constants.  All decisions
(emptiness, redundancy, faces) are made by exact Fourier-Motzkin
elimination; the ambient dimensions in practice stay small.

The empty polyhedron is a first-class value with a canonical encoding
(the single unsatisfiable equality 0 == 1), not an error.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .lattice import (
    IntegerMatrix,
    IntegralAffineMap,
    extend_to_unimodular_basis,
    integer_kernel,
    inverse_unimodular,
    is_integral_basis_of_saturated_subspace,
    left_inverse_saturated,
    solve_rational_linear,
    vec_gcd,
)

IntVec = tuple[int, ...]
Constraint = tuple[IntVec, Fraction]


def _as_constraint(covector: Iterable[int], const) -> Constraint:
    cov = tuple(int(x) for x in covector)
    return cov, Fraction(const)


def _primitive_scale(cov: IntVec, const: Fraction) -> Constraint:
    """Divide by the gcd of the covector entries (sign preserved)."""
    g = vec_gcd(cov)
    if g == 0:
        return cov, const
    return tuple(x // g for x in cov), const / g


def _sign_normalize(cov: IntVec, const: Fraction) -> Constraint:
    """For equalities: first nonzero entry positive, primitive scale."""
    cov, const = _primitive_scale(cov, const)
    lead = next((x for x in cov if x != 0), 0)
    if lead < 0:
        return tuple(-x for x in cov), -const
    return cov, const


@dataclass(frozen=True)
class Polyhedron:
    """{y in R^dim : cov . y >= c for ineqs, cov . y == c for eqs}."""

    dim: int
    ineqs: tuple[Constraint, ...] = ()
    eqs: tuple[Constraint, ...] = ()

    def __post_init__(self):
        ineqs = tuple(_primitive_scale(*_as_constraint(cv, c)) for cv, c in self.ineqs)
        eqs = tuple(_sign_normalize(*_as_constraint(cv, c)) for cv, c in self.eqs)
        for cv, _ in ineqs + eqs:
            if len(cv) != self.dim:
                raise ValueError("covector length does not match ambient dimension")
        object.__setattr__(self, "ineqs", ineqs)
        object.__setattr__(self, "eqs", eqs)

    @staticmethod
    def empty(dim: int) -> "Polyhedron":
        return Polyhedron(dim, (), (((0,) * dim, Fraction(1)),))

    @staticmethod
    def whole_space(dim: int) -> "Polyhedron":
        return Polyhedron(dim)

    @property
    def is_canonical_empty(self) -> bool:
        return self == Polyhedron.empty(self.dim)

    def is_empty(self) -> bool:
        return feasible_point(self) is None

    def contains(self, point: Sequence) -> bool:
        pt = tuple(Fraction(x) for x in point)
        if len(pt) != self.dim:
            raise ValueError("point dimension mismatch")
        return all(_dot(cv, pt) >= c for cv, c in self.ineqs) and all(
            _dot(cv, pt) == c for cv, c in self.eqs
        )

    def hull_dim(self) -> int:
        """Dimension of the affine hull (-1 for the empty polyhedron)."""
        c = canonicalize(self)
        if c.is_canonical_empty:
            return -1
        return c.dim - len(c.eqs)


def _dot(cov: Sequence, pt: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(cov, pt)), Fraction(0))


# ---------------------------------------------------------------------------
# Exact Fourier-Motzkin feasibility with strictness flags.
#
# A raw constraint is (coeffs, const, strict) for coeffs . z >= const
# (> when strict).  Equalities are entered as two opposite inequalities.
# ---------------------------------------------------------------------------

RawCon = tuple[tuple[Fraction, ...], Fraction, bool]


def _raw_normalize(coeffs: Sequence[Fraction], const: Fraction, strict: bool) -> RawCon:
    dens = [x.denominator for x in coeffs] + [const.denominator]
    mult = lcm(*dens) if dens else 1
    ints = [int(x * mult) for x in coeffs]
    g = vec_gcd(ints)
    if g:
        ints = [x // g for x in ints]
        const = const * mult / g
    else:
        const = const * mult
    return tuple(Fraction(x) for x in ints), Fraction(const), strict


def _dedupe(cons: Iterable[RawCon]) -> list[RawCon]:
    best: dict[tuple[Fraction, ...], tuple[Fraction, bool]] = {}
    for coeffs, const, strict in cons:
        if all(x == 0 for x in coeffs) and (const < 0 or (const == 0 and not strict)):
            continue  # trivially true
        cur = best.get(coeffs)
        if cur is None or (const, strict) > cur:
            best[coeffs] = (const, strict)
    return [(k, v[0], v[1]) for k, v in best.items()]


def _fm_point(cons: list[RawCon], nvars: int) -> tuple[Fraction, ...] | None:
    """Feasible point of the system, or None.  Exact, deterministic."""
    cons = _dedupe(_raw_normalize(*c) for c in cons)
    levels = []
    for var in range(nvars - 1, -1, -1):
        zeros, pos, neg = [], [], []
        for c in cons:
            a = c[0][var]
            (zeros if a == 0 else pos if a > 0 else neg).append(c)
        levels.append((var, pos, neg))
        new = list(zeros)
        for pc, pk, ps in pos:
            for ncf, nk, ns in neg:
                ap, an = pc[var], ncf[var]
                coeffs = tuple(-an * x + ap * y for x, y in zip(pc, ncf))
                new.append((coeffs, -an * pk + ap * nk, ps or ns))
        cons = _dedupe(_raw_normalize(*c) for c in new)
    for coeffs, const, strict in cons:
        if const > 0 or (const == 0 and strict):
            return None
    # Back-substitute; Fourier-Motzkin consistency of the eliminated
    # system guarantees lo <= hi, with strictness forcing lo < hi.
    point: list[Fraction] = [Fraction(0)] * nvars
    for var, pos, neg in reversed(levels):
        lo = hi = None
        for coeffs, const, _ in pos:
            rest = sum(
                (coeffs[j] * point[j] for j in range(var) if coeffs[j] != 0), Fraction(0)
            )
            bound = (const - rest) / coeffs[var]
            if lo is None or bound > lo:
                lo = bound
        for coeffs, const, _ in neg:
            rest = sum(
                (coeffs[j] * point[j] for j in range(var) if coeffs[j] != 0), Fraction(0)
            )
            bound = (const - rest) / coeffs[var]
            if hi is None or bound < hi:
                hi = bound
        if lo is None and hi is None:
            point[var] = Fraction(0)
        elif hi is None:
            point[var] = lo + 1
        elif lo is None:
            point[var] = hi - 1
        elif lo < hi:
            point[var] = (lo + hi) / 2
        else:
            point[var] = lo
    return tuple(point)


def _system(p: Polyhedron, strict_ineqs: frozenset[int] | None = None) -> list[RawCon]:
    strict_ineqs = strict_ineqs or frozenset()
    cons: list[RawCon] = []
    for i, (cv, c) in enumerate(p.ineqs):
        cons.append((tuple(Fraction(x) for x in cv), c, i in strict_ineqs))
    for cv, c in p.eqs:
        fr = tuple(Fraction(x) for x in cv)
        cons.append((fr, c, False))
        cons.append((tuple(-x for x in fr), -c, False))
    return cons


@lru_cache(maxsize=None)
def feasible_point(p: Polyhedron) -> tuple[Fraction, ...] | None:
    return _fm_point(_system(p), p.dim)


@lru_cache(maxsize=None)
def _strict_feasible_point(
    p: Polyhedron, strict: frozenset[int]
) -> tuple[Fraction, ...] | None:
    return _fm_point(_system(p, strict), p.dim)


def is_valid_inequality(p: Polyhedron, covector: Sequence[int], const, strict: bool = False) -> bool:
    """Does cov . y >= const (or > const) hold on all of p?"""
    cov = tuple(int(x) for x in covector)
    c = Fraction(const)
    neg = (tuple(Fraction(-x) for x in cov), -c, not strict)
    return _fm_point(_system(p) + [neg], p.dim) is None


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


def _canonical_equalities(
    eqs: Sequence[Constraint], dim: int
) -> tuple[tuple[Constraint, ...], tuple[Fraction, ...]] | None:
    """RREF the equality system; returns (rows, particular point) or None
    if inconsistent.  Rows come out primitive-integer with positive lead."""
    rows = [[Fraction(x) for x in cv] + [c] for cv, c in eqs]
    pivots: list[int] = []
    r = 0
    for col in range(dim):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][dim] != 0:
            return None
    particular = [Fraction(0)] * dim
    for i, col in enumerate(pivots):
        particular[col] = rows[i][dim]
    out = []
    for i in range(r):
        mult = lcm(*[x.denominator for x in rows[i]])
        ints = [int(x * mult) for x in rows[i]]
        g = vec_gcd(ints[:dim])
        out.append((tuple(x // g for x in ints[:dim]), Fraction(ints[dim], g)))
    return tuple(out), tuple(particular)


@lru_cache(maxsize=None)
def _hull_data(eqs: tuple[Constraint, ...], dim: int):
    """Chart data of the affine subspace cut out by canonical equalities.

    Returns (particular point, K, B, E_sat, e_consts, W_inv) where the
    columns of K are a saturated basis of the direction space, the rows
    of E_sat a saturated basis of the covector span, B its canonical
    complement and e_consts the value of each E_sat row on the subspace.
    """
    canon = _canonical_equalities(eqs, dim)
    if canon is None:
        raise ValueError("inconsistent equality system")
    rows, particular = canon
    q = IntegerMatrix.from_rows([cv for cv, _ in rows], ncols=dim)
    k = integer_kernel(q).transpose()
    e_sat = integer_kernel(k.transpose())
    b = (
        IntegerMatrix.from_rows(
            extend_to_unimodular_basis(e_sat).rows[: dim - e_sat.nrows], ncols=dim
        )
        if e_sat.nrows
        else IntegerMatrix.identity(dim)
    )
    w = b.stack(e_sat)
    w_inv = inverse_unimodular(w) if w.nrows else IntegerMatrix.identity(0)
    e_consts = tuple(_dot(row, particular) for row in e_sat.rows)
    return particular, k, b, e_sat, e_consts, w_inv


def _reduce_ineq(
    cov: IntVec, const: Fraction, hull
) -> Constraint | None:
    """Canonical representative of an inequality modulo the equality span.

    Returns None when the inequality restricts trivially to the hull.
    """
    particular, k, b, e_sat, e_consts, w_inv = hull
    if e_sat.nrows == 0:
        return _primitive_scale(cov, const)
    coords = tuple(
        sum(cov[i] * w_inv.rows[i][j] for i in range(len(cov))) for j in range(w_inv.ncols)
    )
    nb = b.nrows
    x = coords[:nb]
    y = coords[nb:]
    c_red = const - sum((Fraction(yi) * d for yi, d in zip(y, e_consts)), Fraction(0))
    g = vec_gcd(x)
    if g == 0:
        return None  # constant on the hull; feasibility already checked
    x = tuple(v // g for v in x)
    c_red = c_red / g
    amb = tuple(sum(x[i] * b.rows[i][j] for i in range(nb)) for j in range(len(cov)))
    return amb, c_red


@lru_cache(maxsize=None)
def canonicalize(p: Polyhedron) -> Polyhedron:
    """Irredundant canonical form; equal point sets get equal encodings.

    Implicit equalities are promoted, inequality covectors are reduced
    to canonical primitive representatives modulo the affine hull, and
    redundant inequalities are removed.  The empty polyhedron
    canonicalizes to Polyhedron.empty(dim).
    """
    if feasible_point(p) is None:
        return Polyhedron.empty(p.dim)
    ineqs = list(p.ineqs)
    eqs = list(p.eqs)
    # Promote implicit equalities until a relatively interior point exists.
    while True:
        probe = Polyhedron(p.dim, tuple(ineqs), tuple(eqs))
        if _strict_feasible_point(probe, frozenset(range(len(ineqs)))) is not None:
            break
        new_ineqs = []
        for i, (cv, c) in enumerate(ineqs):
            if _strict_feasible_point(probe, frozenset([i])) is None:
                eqs.append((cv, c))
            else:
                new_ineqs.append((cv, c))
        if len(new_ineqs) == len(ineqs):
            break  # no progress; should not happen
        ineqs = new_ineqs
    canon_eq = _canonical_equalities(tuple(eqs), p.dim)
    assert canon_eq is not None  # feasibility was established above
    eq_rows, _ = canon_eq
    hull = _hull_data(eq_rows, p.dim)
    reduced: dict[IntVec, Fraction] = {}
    for cv, c in ineqs:
        r = _reduce_ineq(cv, c, hull)
        if r is None:
            continue
        cov, const = r
        if cov not in reduced or const > reduced[cov]:
            reduced[cov] = const
    candidates = sorted(reduced.items())
    # Remove redundant inequalities one at a time, deterministically.
    kept: list[Constraint] = []
    for i, (cv, c) in enumerate(candidates):
        others = kept + candidates[i + 1 :]
        test = Polyhedron(p.dim, tuple(others), tuple(eq_rows))
        if not is_valid_inequality(test, cv, c):
            kept.append((cv, c))
    return Polyhedron(p.dim, tuple(sorted(kept)), tuple(eq_rows))


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    """Canonical form of the intersection; may be empty."""
    if p.dim != q.dim:
        raise ValueError("ambient dimension mismatch")
    return canonicalize(Polyhedron(p.dim, p.ineqs + q.ineqs, p.eqs + q.eqs))


def relative_interior_point(p: Polyhedron) -> tuple[Fraction, ...]:
    """A rational point strictly inside every non-implicit inequality."""
    c = canonicalize(p)
    if c.is_canonical_empty:
        raise ValueError("empty polyhedron has no relative interior point")
    pt = _strict_feasible_point(c, frozenset(range(len(c.ineqs))))
    assert pt is not None
    return pt


# ---------------------------------------------------------------------------
# Faces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    """A nonempty face of a canonical polyhedron.

    `active` indexes the inequalities of the parent that hold with
    equality everywhere on the face.
    """

    polyhedron: Polyhedron
    active: frozenset[int]
    dim: int


@dataclass(frozen=True)
class FaceLattice:
    """All nonempty faces of a polyhedron, ordered by inclusion."""

    parent: Polyhedron
    faces: tuple[Face, ...]

    def leq(self, f1: Face, f2: Face) -> bool:
        """f1 is contained in f2."""
        return f1.active >= f2.active

    @property
    def top(self) -> Face:
        return next(f for f in self.faces if not f.active)

    def of_dim(self, d: int) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if f.dim == d)

    def facets_of(self, f: Face) -> tuple[Face, ...]:
        return tuple(
            g for g in self.faces if g.dim == f.dim - 1 and self.leq(g, f)
        )


def _face_from_active(p: Polyhedron, active: frozenset[int]) -> Polyhedron:
    eqs = p.eqs + tuple(p.ineqs[i] for i in sorted(active))
    ineqs = tuple(cn for i, cn in enumerate(p.ineqs) if i not in active)
    return canonicalize(Polyhedron(p.dim, ineqs, eqs))


@lru_cache(maxsize=None)
def face_lattice(p: Polyhedron) -> FaceLattice:
    """Enumerate all nonempty faces of a canonical, nonempty polyhedron."""
    c = canonicalize(p)
    if c.is_canonical_empty:
        raise ValueError("face lattice of an empty polyhedron")
    seen: dict[frozenset[int], Face] = {}

    def tight_set(poly: Polyhedron) -> frozenset[int]:
        pt = relative_interior_point(poly)
        return frozenset(i for i, (cv, k) in enumerate(c.ineqs) if _dot(cv, pt) == k)

    top_active = tight_set(c)  # empty for canonical c, by construction
    top = Face(c, top_active, c.dim - len(c.eqs))
    seen[top_active] = top
    queue = [top]
    while queue:
        f = queue.pop()
        for i in range(len(c.ineqs)):
            if i in f.active:
                continue
            sub = _face_from_active(c, f.active | {i})
            if sub.is_canonical_empty:
                continue
            act = tight_set(sub)
            if act in seen:
                continue
            face = Face(sub, act, c.dim - len(sub.eqs))
            seen[act] = face
            queue.append(face)
    faces = tuple(
        sorted(seen.values(), key=lambda f: (-f.dim, tuple(sorted(f.active))))
    )
    return FaceLattice(c, faces)


def tangent_cone(p: Polyhedron, active: frozenset[int]) -> Polyhedron:
    """Cone of feasible directions at a relative interior point of a face."""
    c = canonicalize(p)
    ineqs = tuple((c.ineqs[i][0], Fraction(0)) for i in sorted(active))
    eqs = tuple((cv, Fraction(0)) for cv, _ in c.eqs)
    return canonicalize(Polyhedron(c.dim, ineqs, eqs))


def recession_cone(p: Polyhedron) -> Polyhedron:
    c = canonicalize(p)
    return canonicalize(
        Polyhedron(
            c.dim,
            tuple((cv, Fraction(0)) for cv, _ in c.ineqs),
            tuple((cv, Fraction(0)) for cv, _ in c.eqs),
        )
    )


def is_bounded(p: Polyhedron) -> bool:
    rc = recession_cone(p)
    return len(rc.eqs) == rc.dim


# ---------------------------------------------------------------------------
# Cone tests
# ---------------------------------------------------------------------------


def cone_apex(p: Polyhedron) -> tuple[Fraction, ...] | None:
    """A point where every constraint is tight, or None (then p is not a
    translated cone)."""
    c = canonicalize(p)
    if c.is_canonical_empty:
        return None
    rows = [cv for cv, _ in c.ineqs + c.eqs]
    rhs = [k for _, k in c.ineqs + c.eqs]
    if not rows:
        return (Fraction(0),) * c.dim
    sol = solve_rational_linear(rows, rhs)
    if not sol.is_consistent:
        return None
    return sol.particular


def is_smooth_cone(p: Polyhedron) -> bool:
    """Is p unimodularly isomorphic to [0,inf)^k x R^(n-k) (translated)?

    True iff the facet normals of the canonical form are an integral
    basis of a saturated subspace.  Raises ValueError when p is not a
    translated cone.
    """
    c = canonicalize(p)
    if c.is_canonical_empty:
        raise ValueError("empty polyhedron is not a cone")
    if cone_apex(c) is None:
        raise ValueError("polyhedron is not a translated cone")
    normals = IntegerMatrix.from_rows([cv for cv, _ in c.ineqs], ncols=c.dim)
    return is_integral_basis_of_saturated_subspace(normals)


# ---------------------------------------------------------------------------
# Affine hull charts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HullChart:
    """Integral parameterization z -> origin + basis @ z of an affine hull.

    `embed` maps chart coordinates into the ambient space; its linear
    part has saturated independent columns, so integral structure is
    preserved both ways.
    """

    embed: IntegralAffineMap

    @property
    def dim(self) -> int:
        return self.embed.source_dim

    @property
    def ambient_dim(self) -> int:
        return self.embed.target_dim

    def project(self, point: Sequence) -> tuple[Fraction, ...]:
        """Chart coordinates of an ambient point on the hull."""
        k = self.embed.linear
        pinv = left_inverse_saturated(k) if k.ncols else IntegerMatrix.from_rows((), ncols=k.nrows)
        shifted = [Fraction(x) - t for x, t in zip(point, self.embed.translation)]
        z = pinv.apply(shifted)
        if self.embed.apply(z) != tuple(Fraction(x) for x in point):
            raise ValueError("point is not on the affine hull")
        return z


@lru_cache(maxsize=None)
def hull_chart(p: Polyhedron) -> HullChart:
    """Canonical integral chart of the affine hull of a nonempty p."""
    c = canonicalize(p)
    if c.is_canonical_empty:
        raise ValueError("empty polyhedron has no affine hull")
    particular, k, _, _, _, _ = _hull_data(c.eqs, c.dim)
    return HullChart(IntegralAffineMap(k, particular))


def restrict_to_hull(p: Polyhedron) -> Polyhedron:
    """Express p inside its own affine hull chart; output is full-dim."""
    c = canonicalize(p)
    chart = hull_chart(c)
    k = chart.embed.linear
    origin = chart.embed.translation
    ineqs = []
    for cv, const in c.ineqs:
        zcov = tuple(sum(cv[i] * k.rows[i][j] for i in range(c.dim)) for j in range(k.ncols))
        ineqs.append((zcov, const - _dot(cv, origin)))
    return canonicalize(Polyhedron(k.ncols, tuple(ineqs), ()))


def image_polyhedron(p: Polyhedron, f: IntegralAffineMap) -> Polyhedron:
    """Image of p under an *injective* integral affine map, canonical.

    The map's linear part must have independent columns spanning a
    saturated lattice (the only case the complexes need).
    """
    c = canonicalize(p)
    if c.is_canonical_empty:
        return Polyhedron.empty(f.target_dim)
    lin = f.linear
    cols_as_rows = lin.transpose()
    if not is_integral_basis_of_saturated_subspace(cols_as_rows):
        raise ValueError("image requires a saturated injective linear part")
    # y = lin z + t with z free: the image hull is cut out by the
    # integer kernel of lin^T (covectors annihilating the column span).
    ann = integer_kernel(cols_as_rows)
    eqs = tuple((row, _dot(row, f.translation)) for row in ann.rows)
    pinv = left_inverse_saturated(lin) if lin.ncols else IntegerMatrix.from_rows((), ncols=lin.nrows)
    ineqs = []
    for cv, const in c.ineqs:
        # cv . z >= const becomes (cv . pinv)(y - t) >= const on the hull.
        ycov = tuple(
            sum(cv[i] * pinv.rows[i][j] for i in range(len(cv))) for j in range(pinv.ncols)
        )
        ineqs.append((ycov, const + _dot(ycov, f.translation)))
    for cv, const in c.eqs:
        ycov = tuple(
            sum(cv[i] * pinv.rows[i][j] for i in range(len(cv))) for j in range(pinv.ncols)
        )
        val = const + _dot(ycov, f.translation)
        ineqs.append((ycov, val))
        ineqs.append((tuple(-x for x in ycov), -val))
    return canonicalize(Polyhedron(f.target_dim, tuple(ineqs), eqs))


def preimage_polyhedron(p: Polyhedron, f: IntegralAffineMap) -> Polyhedron:
    """{z : f(z) in p}, canonical."""
    lin, t = f.linear, f.translation
    ineqs = []
    eqs = []
    for cv, const in p.ineqs:
        zcov = tuple(
            sum(cv[i] * lin.rows[i][j] for i in range(lin.nrows)) for j in range(lin.ncols)
        )
        ineqs.append((zcov, const - _dot(cv, t)))
    for cv, const in p.eqs:
        zcov = tuple(
            sum(cv[i] * lin.rows[i][j] for i in range(lin.nrows)) for j in range(lin.ncols)
        )
        eqs.append((zcov, const - _dot(cv, t)))
    return canonicalize(Polyhedron(f.source_dim, tuple(ineqs), tuple(eqs)))


def contains_polyhedron(outer: Polyhedron, inner: Polyhedron) -> bool:
    """Is inner a subset of outer?  inner may be empty (then True)."""
    if outer.dim != inner.dim:
        raise ValueError("ambient dimension mismatch")
    if canonicalize(inner).is_canonical_empty:
        return True
    co = canonicalize(outer)
    return all(is_valid_inequality(inner, cv, c) for cv, c in co.ineqs) and all(
        is_valid_inequality(inner, cv, c) and is_valid_inequality(inner, tuple(-x for x in cv), -c)
        for cv, c in co.eqs
    )


# ---------------------------------------------------------------------------
# Exact volume of bounded polytopes (small dimension)
# ---------------------------------------------------------------------------


def vertices(p: Polyhedron) -> tuple[tuple[Fraction, ...], ...]:
    """All zero-dimensional faces, sorted."""
    fl = face_lattice(p)
    verts = []
    for f in fl.of_dim(0):
        sol = solve_rational_linear(
            [cv for cv, _ in f.polyhedron.eqs], [c for _, c in f.polyhedron.eqs]
        )
        verts.append(sol.particular)
    return tuple(sorted(verts))


def volume(p: Polyhedron) -> Fraction:
    """Exact Euclidean volume of a bounded polytope, relative to its
    own affine hull's integral structure (so unimodular-invariant)."""
    c = canonicalize(p)
    if c.is_canonical_empty:
        return Fraction(0)
    if not is_bounded(c):
        raise ValueError("volume of an unbounded polyhedron")
    full = restrict_to_hull(c)
    d = full.dim
    if d == 0:
        return Fraction(1)
    fl = face_lattice(full)

    def vert_of(face: Face) -> tuple[Fraction, ...]:
        sol = solve_rational_linear(
            [cv for cv, _ in face.polyhedron.eqs], [k for _, k in face.polyhedron.eqs]
        )
        return sol.particular

    def triangulate(face: Face) -> list[tuple[tuple[Fraction, ...], ...]]:
        if face.dim == 0:
            return [(vert_of(face),)]
        subverts = [g for g in fl.faces if g.dim == 0 and fl.leq(g, face)]
        v0_face = min(subverts, key=vert_of)
        v0 = vert_of(v0_face)
        simplices = []
        for g in fl.faces:
            if g.dim == face.dim - 1 and fl.leq(g, face) and not fl.leq(v0_face, g):
                for s in triangulate(g):
                    simplices.append((v0,) + s)
        return simplices

    total = Fraction(0)
    factorial = 1
    for i in range(1, d + 1):
        factorial *= i
    for simplex in triangulate(fl.top):
        base = simplex[0]
        rows = [[x - b for x, b in zip(v, base)] for v in simplex[1:]]
        det = _rational_det(rows)
        total += abs(det)
    return total / factorial


def _rational_det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    a = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det
