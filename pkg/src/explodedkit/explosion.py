"""Explosion of coordinate charts as pure coordinate-role bookkeeping.

A chart carries three kinds of coordinates: affine, boundary, smooth.
The explosion of a chart is a cone base (the affine factor times one
nonnegative ray per boundary coordinate) whose face strata carry fibers
obtained by relabeling boundary roles to affine ones.  Smooth data is
never evaluated: functions are tracked only through their integer
exponent vectors plus an opaque smooth tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .complexes import (
    AffineComplex,
    Inclusion,
    Issue,
    Stratum,
    ValidationReport,
)
from .lattice import IntegerMatrix, IntegralAffineMap
from .polyhedra import Polyhedron


@dataclass(frozen=True)
class ChartSignature:
    """Coordinate-role counts (affine, boundary, smooth) of a chart."""

    affine: int
    boundary: int
    smooth: int

    def __post_init__(self):
        if min(self.affine, self.boundary, self.smooth) < 0:
            raise ValueError("signature counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.affine + self.boundary + self.smooth

    @property
    def base_dim(self) -> int:
        return self.affine + self.boundary


@dataclass(frozen=True)
class LogMonomial:
    """Integer exponent data of a log smooth function on a chart.

    Models g + sum(a_i * x_i) + sum(b_j * log x_j) with `smooth_part` an
    uninterpreted tag standing in for g.
    """

    affine_exponents: tuple[int, ...]
    boundary_exponents: tuple[int, ...]
    smooth_part: str = "g"

    def __post_init__(self):
        object.__setattr__(
            self, "affine_exponents", tuple(int(x) for x in self.affine_exponents)
        )
        object.__setattr__(
            self, "boundary_exponents", tuple(int(x) for x in self.boundary_exponents)
        )

    def __add__(self, other: "LogMonomial") -> "LogMonomial":
        if len(self.affine_exponents) != len(other.affine_exponents) or len(
            self.boundary_exponents
        ) != len(other.boundary_exponents):
            raise ValueError("exponent shapes differ")
        return LogMonomial(
            tuple(a + b for a, b in zip(self.affine_exponents, other.affine_exponents)),
            tuple(a + b for a, b in zip(self.boundary_exponents, other.boundary_exponents)),
            f"({self.smooth_part}*{other.smooth_part})",
        )


@dataclass(frozen=True)
class ExplodedChart:
    """Combinatorial data of the explosion of a chart.

    The base is a stratified complex; each stratum id maps to the fiber
    signature over its interior and to the integer matrix giving the
    action of the stratum tangent basis on the fiber's affine
    coordinates (each basis vector translates its coordinate by one).
    """

    signature: ChartSignature
    base: AffineComplex
    fiber_signatures: tuple[tuple[str, ChartSignature], ...]
    actions: tuple[tuple[str, IntegerMatrix], ...]

    @property
    def fiber_signature_dict(self) -> dict:
        return dict(self.fiber_signatures)

    @property
    def action_dict(self) -> dict:
        return dict(self.actions)


def _stratum_id(zero_set: frozenset[int]) -> str:
    if not zero_set:
        return "s"
    return "s_" + "_".join(str(i) for i in sorted(zero_set))


def _cone_base_complex(m: int, k: int) -> AffineComplex:
    """R^m x [0,inf)^k with one stratum per subset of vanishing rays."""
    strata = []
    inclusions = []
    subsets = []
    for size in range(k + 1):
        subsets.extend(frozenset(c) for c in combinations(range(k), size))
    free_coords = {}
    for zero in subsets:
        free_bd = [i for i in range(k) if i not in zero]
        dim = m + len(free_bd)
        # chart coordinates: the m affine ones, then the free rays
        ineqs = []
        for pos in range(m, dim):
            cov = [0] * dim
            cov[pos] = 1
            ineqs.append((tuple(cov), Fraction(0)))
        strata.append(Stratum(_stratum_id(zero), dim, Polyhedron(dim, tuple(ineqs))))
        free_coords[zero] = free_bd
    for small in subsets:
        for big in subsets:
            if small < big:
                # the stratum killing `big` includes into the one killing `small`
                src_free = free_coords[big]
                tgt_free = free_coords[small]
                src_dim = m + len(src_free)
                tgt_dim = m + len(tgt_free)
                rows = []
                tgt_order = list(range(m)) + [m + i for i in tgt_free]
                src_order = list(range(m)) + [m + i for i in src_free]
                for tc in tgt_order:
                    row = [1 if sc == tc else 0 for sc in src_order]
                    rows.append(tuple(row))
                inclusions.append(
                    Inclusion(
                        _stratum_id(big),
                        _stratum_id(small),
                        IntegralAffineMap(
                            IntegerMatrix.from_rows(rows, ncols=src_dim),
                            (Fraction(0),) * tgt_dim,
                        ),
                    )
                )
    return AffineComplex(tuple(strata), tuple(inclusions))


def exploded_chart_over(base: AffineComplex, sig: ChartSignature) -> ExplodedChart:
    """Attach fiber signatures and actions to a given cone base.

    Over a stratum of dimension d the fiber keeps d affine roles and
    (affine+boundary-d) boundary roles; totals are conserved.
    """
    total = sig.base_dim
    fibers = []
    actions = []
    for s in base.strata:
        if s.dim > total:
            raise ValueError(f"stratum {s.id} exceeds the chart's base dimension")
        fibers.append((s.id, ChartSignature(s.dim, total - s.dim, sig.smooth)))
        actions.append((s.id, IntegerMatrix.identity(s.dim)))
    return ExplodedChart(sig, base, tuple(fibers), tuple(actions))


def explode(sig: ChartSignature) -> ExplodedChart:
    """The explosion of a chart with the given coordinate roles.

    The base is the cone R^affine x [0,inf)^boundary presented as a
    complex with all face strata; the fiber signature over the deepest
    stratum is the chart itself and boundary roles flip to affine as
    rays open up.
    """
    base = _cone_base_complex(sig.affine, sig.boundary)
    return exploded_chart_over(base, sig)


@dataclass(frozen=True)
class RoleRelabeling:
    """Where each coordinate of a restricted chart came from.

    Entries are ("affine", i) or ("boundary", i) with i the position in
    the original signature's role block.
    """

    affine_sources: tuple[tuple[str, int], ...]
    boundary_sources: tuple[tuple[str, int], ...]


def _check_boundary_indices(sig: ChartSignature, indices: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(sorted(set(int(i) for i in indices)))
    for i in idx:
        if not 0 <= i < sig.boundary:
            raise IndexError(f"boundary index {i} out of range 0..{sig.boundary - 1}")
    return idx


def restrict_to_normal_neighborhood(
    sig: ChartSignature, indices: Iterable[int]
) -> ChartSignature:
    """Flip the chosen boundary roles to affine ones."""
    idx = _check_boundary_indices(sig, indices)
    return ChartSignature(sig.affine + len(idx), sig.boundary - len(idx), sig.smooth)


def restriction_relabeling(
    sig: ChartSignature, indices: Iterable[int]
) -> RoleRelabeling:
    idx = _check_boundary_indices(sig, indices)
    affine = tuple(("affine", i) for i in range(sig.affine)) + tuple(
        ("boundary", i) for i in idx
    )
    boundary = tuple(("boundary", i) for i in range(sig.boundary) if i not in idx)
    return RoleRelabeling(affine, boundary)


def restrict_monomial(f: LogMonomial, indices: Iterable[int]) -> LogMonomial:
    """Move boundary exponents at `indices` into new affine slots.

    The smooth part is replaced by a recorded restriction tag; an empty
    index set returns the monomial unchanged.
    """
    idx = tuple(sorted(set(int(i) for i in indices)))
    for i in idx:
        if not 0 <= i < len(f.boundary_exponents):
            raise IndexError(f"boundary index {i} out of range")
    if not idx:
        return f
    new_affine = f.affine_exponents + tuple(f.boundary_exponents[i] for i in idx)
    new_boundary = tuple(
        e for i, e in enumerate(f.boundary_exponents) if i not in idx
    )
    tag = f"restrict({f.smooth_part};{','.join(map(str, idx))})"
    return LogMonomial(new_affine, new_boundary, tag)


def check_log_smooth_pullback(
    pullbacks: Sequence[LogMonomial], src: ChartSignature, dst: ChartSignature
) -> ValidationReport:
    """Exponent-level criteria for a pullback to define a log smooth map.

    `pullbacks` lists, per target coordinate in role order (affine, then
    boundary, then smooth), the monomial it pulls back to on the source
    chart.  Affine targets may use any integer exponents; boundary
    targets need nonnegative boundary exponents and no affine part;
    smooth targets may carry no exponents at all.
    """
    issues: list[Issue] = []
    if len(pullbacks) != dst.total:
        return ValidationReport(
            (Issue("error", "arity", f"expected {dst.total} pullbacks, got {len(pullbacks)}"),)
        )
    for t, mono in enumerate(pullbacks):
        if len(mono.affine_exponents) != src.affine or len(mono.boundary_exponents) != src.boundary:
            issues.append(
                Issue("error", "shape", f"pullback of coordinate {t} has wrong exponent shape")
            )
            continue
        if t < dst.affine:
            continue  # criterion 1: integral sums of affine and boundary
        if t < dst.affine + dst.boundary:
            j = t - dst.affine
            if any(e != 0 for e in mono.affine_exponents):
                issues.append(
                    Issue(
                        "error",
                        "criterion-2",
                        f"boundary coordinate {j}: pullback uses affine coordinates",
                    )
                )
            if any(e < 0 for e in mono.boundary_exponents):
                issues.append(
                    Issue(
                        "error",
                        "criterion-2",
                        f"boundary coordinate {j}: negative boundary exponent",
                    )
                )
        else:
            j = t - dst.affine - dst.boundary
            if any(e != 0 for e in mono.affine_exponents) or any(
                e != 0 for e in mono.boundary_exponents
            ):
                issues.append(
                    Issue(
                        "error",
                        "criterion-3",
                        f"smooth coordinate {j}: pullback carries nonzero exponents",
                    )
                )
    return ValidationReport(tuple(issues))


def identity_pullback(sig: ChartSignature) -> tuple[LogMonomial, ...]:
    """Coordinates of a chart pulled back along the identity."""
    out = []
    for i in range(sig.affine):
        out.append(
            LogMonomial(
                tuple(1 if j == i else 0 for j in range(sig.affine)),
                (0,) * sig.boundary,
                "0",
            )
        )
    for i in range(sig.boundary):
        out.append(
            LogMonomial(
                (0,) * sig.affine,
                tuple(1 if j == i else 0 for j in range(sig.boundary)),
                "0",
            )
        )
    for i in range(sig.smooth):
        out.append(LogMonomial((0,) * sig.affine, (0,) * sig.boundary, f"x{i}"))
    return tuple(out)
