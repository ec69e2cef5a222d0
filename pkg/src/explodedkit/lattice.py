"""Exact integer and rational linear algebra.

Everything here runs on arbitrary-precision Python ints and
``fractions.Fraction``; there is deliberately no floating point anywhere.
Covectors are rows, vectors are columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def vec_gcd(v: Sequence[int]) -> int:
    """gcd of the entries of an integer vector (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: Sequence[int]) -> bool:
    """True iff the integer vector is not a multiple of a shorter one.

    Raises ValueError on the zero vector, which is neither primitive nor
    a multiple of a primitive vector.
    """
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return g == 1


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix; rows is a tuple of row tuples.

    `width` only needs to be passed for matrices with zero rows, where
    the column count cannot be inferred.
    """

    rows: tuple[tuple[int, ...], ...]
    width: int = -1

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise ValueError("ragged rows")
            object.__setattr__(self, "width", w)
        elif self.width < 0:
            object.__setattr__(self, "width", 0)
        object.__setattr__(self, "rows", rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self.width

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]], ncols: int | None = None) -> "IntegerMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        return IntegerMatrix(rows, width=-1 if ncols is None else ncols)

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(nrows: int, ncols: int) -> "IntegerMatrix":
        return IntegerMatrix(tuple((0,) * ncols for _ in range(nrows)))

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "IntegerMatrix":
        if self.nrows == 0:
            return IntegerMatrix(((),) * self.width if self.width else ())
        if self.ncols == 0:
            return IntegerMatrix((), width=self.nrows)
        return IntegerMatrix(tuple(zip(*self.rows)))

    def mul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = other.transpose().rows
        return IntegerMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector; entries may be ints or Fractions."""
        if self.nrows and len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def stack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows and other.rows and self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        return IntegerMatrix(self.rows + other.rows)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def rank(self) -> int:
        return len(_row_echelon([list(map(Fraction, r)) for r in self.rows])[0])


@dataclass(frozen=True)
class IntegralAffineMap:
    """x -> linear @ x + translation, with an integer linear part."""

    linear: IntegerMatrix
    translation: tuple[Fraction, ...]

    def __post_init__(self):
        tr = tuple(Fraction(t) for t in self.translation)
        if self.linear.nrows != len(tr):
            raise ValueError("translation length must match row count")
        object.__setattr__(self, "translation", tr)

    @staticmethod
    def identity(n: int) -> "IntegralAffineMap":
        return IntegralAffineMap(IntegerMatrix.identity(n), (Fraction(0),) * n)

    @property
    def source_dim(self) -> int:
        return self.linear.ncols

    @property
    def target_dim(self) -> int:
        return self.linear.nrows

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        lv = self.linear.apply(v)
        return tuple(Fraction(a) + t for a, t in zip(lv, self.translation))

    def compose(self, inner: "IntegralAffineMap") -> "IntegralAffineMap":
        """self after inner."""
        lin = self.linear.mul(inner.linear)
        tr = tuple(
            Fraction(a) + t for a, t in zip(self.linear.apply(inner.translation), self.translation)
        )
        return IntegralAffineMap(lin, tr)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^ambient_dim spanned by the generator rows."""

    ambient_dim: int
    generators: IntegerMatrix

    def __post_init__(self):
        if self.generators.rows and self.generators.ncols != self.ambient_dim:
            raise ValueError("generator width must equal ambient dimension")
        if self.generators.rank() != self.generators.nrows:
            raise ValueError("generators must be linearly independent")


def _swap(a: list, i: int, j: int):
    a[i], a[j] = a[j], a[i]


def hermite_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Row-style Hermite normal form.

    Returns (h, u) with u unimodular, u @ m == h, h in row echelon form
    with positive pivots and entries above each pivot reduced into
    [0, pivot).  Zero rows of h sit at the bottom.
    """
    a = [list(r) for r in m.rows]
    n = m.nrows
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    row = 0
    for col in range(m.ncols):
        if row == n:
            break
        # Euclid on the column below `row` until one nonzero entry remains.
        while True:
            pivots = [i for i in range(row, n) if a[i][col] != 0]
            if not pivots:
                break
            i0 = min(pivots, key=lambda i: abs(a[i][col]))
            if i0 != row:
                _swap(a, row, i0)
                _swap(u, row, i0)
            done = True
            for i in range(row + 1, n):
                if a[i][col] != 0:
                    q = a[i][col] // a[row][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[row])]
                    if a[i][col] != 0:
                        done = False
            if done:
                break
        if a[row][col] == 0:
            continue
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
            u[row] = [-x for x in u[row]]
        for i in range(row):
            q = a[i][col] // a[row][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
    return IntegerMatrix(tuple(map(tuple, a))), IntegerMatrix(tuple(map(tuple, u)))


def _snf_inplace(a: list[list[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form core; returns (diagonal, u, v) with u@m@v diagonal."""
    nr = len(a)
    nc = len(a[0]) if a else 0
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def col_op(j1, j2, q):
        # col j2 -= q * col j1
        for r in a:
            r[j2] -= q * r[j1]
        for r in v:
            r[j2] -= q * r[j1]

    def col_swap(j1, j2):
        for r in a:
            r[j1], r[j2] = r[j2], r[j1]
        for r in v:
            r[j1], r[j2] = r[j2], r[j1]

    def clear_block(t: int):
        # Make column t and row t zero away from the pivot.  Every swap
        # strictly shrinks |a[t][t]|, so this terminates.
        changed = True
        while changed:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t]:
                        _swap(a, t, i)
                        _swap(u, t, i)
                        changed = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(t, j, q)
                    if a[t][j]:
                        col_swap(t, j)
                        changed = True

    t = 0
    while t < min(nr, nc):
        # Move a smallest-magnitude nonzero entry of the block to (t, t).
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0:
                    if pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]]):
                        pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        if i0 != t:
            _swap(a, t, i0)
            _swap(u, t, i0)
        if j0 != t:
            col_swap(t, j0)
        while True:
            clear_block(t)
            # Divisibility: fold a non-multiple into row t and re-clear.
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(nr, nc))]
    return diag, u, v


def smith_normal_form(
    m: IntegerMatrix,
) -> tuple[tuple[int, ...], IntegerMatrix, IntegerMatrix]:
    """Smith normal form: (d, u, v) with u @ m @ v == diag(d), d_i | d_{i+1}.

    d has min(nrows, ncols) entries, trailing zeros included; u and v are
    unimodular.
    """
    a = [list(r) for r in m.rows]
    if not a:
        return (), IntegerMatrix(()), IntegerMatrix.identity(m.ncols)
    diag, u, v = _snf_inplace(a)
    return tuple(diag), IntegerMatrix(tuple(map(tuple, u))), IntegerMatrix(tuple(map(tuple, v)))


def is_integral_basis_of_saturated_subspace(covectors: IntegerMatrix) -> bool:
    """True iff the rows are independent and span a saturated sublattice.

    Equivalently the rows extend to a basis of the full integer lattice;
    the test is that every Smith normal form diagonal entry equals 1.
    A matrix with zero rows passes trivially.
    """
    if covectors.nrows == 0:
        return True
    d, _, _ = smith_normal_form(covectors)
    return len(d) >= covectors.nrows and all(
        d[i] == 1 for i in range(covectors.nrows)
    )


def inverse_unimodular(m: IntegerMatrix) -> IntegerMatrix:
    """Exact inverse of a square integer matrix with determinant +-1."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("not square")
    a = [[Fraction(x) for x in r] + [Fraction(1 if i == j else 0) for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        _swap(a, col, piv)
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = []
    for r in a:
        vals = r[n:]
        if any(x.denominator != 1 for x in vals):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in vals))
    return IntegerMatrix(tuple(out))


def extend_to_unimodular_basis(covectors: IntegerMatrix) -> IntegerMatrix:
    """Complete saturated independent rows to a unimodular square matrix.

    The result has the input rows verbatim as its last rows; the rows
    added in front are a canonical complement (Hermite-reduced against
    the inputs).
    """
    k = covectors.nrows
    n = covectors.ncols
    if not is_integral_basis_of_saturated_subspace(covectors):
        raise ValueError("rows are not an integral basis of a saturated subspace")
    if k == n:
        return covectors
    if k == 0:
        return IntegerMatrix.identity(n)
    d, u, v = smith_normal_form(covectors)
    # covectors == u^-1 @ [I_k | 0] @ v^-1, so the first k rows of v^-1
    # span the same lattice; the remaining rows complete the basis.
    w = inverse_unimodular(v)
    complement = [list(w.rows[i]) for i in range(k, n)]
    # Canonicalize: Hermite-reduce the complement rows, then reduce each
    # against the input rows' pivots (unimodularity is preserved).
    comp_h, _ = hermite_normal_form(IntegerMatrix(tuple(map(tuple, complement))))
    comp = [list(r) for r in comp_h.rows]
    in_h, _ = hermite_normal_form(covectors)
    pivots = []
    for r in in_h.rows:
        j = next((j for j, x in enumerate(r) if x != 0), None)
        if j is not None:
            pivots.append((j, r))
    # Reducing with the HNF of the inputs changes complement rows by
    # lattice elements of the input row span only.
    for row in comp:
        for j, hr in pivots:
            q = row[j] // hr[j]
            if q:
                for t in range(n):
                    row[t] -= q * hr[t]
    out = IntegerMatrix(tuple(map(tuple, comp)) + covectors.rows)
    if abs(out.det()) != 1:
        raise AssertionError("basis completion failed")
    return out


def _row_echelon(a: list[list[Fraction]]) -> tuple[list[int], list[list[Fraction]]]:
    """Reduced row echelon form in place; returns (pivot columns, rows)."""
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        _swap(a, r, piv)
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots, a


@dataclass(frozen=True)
class LinearSolution:
    """Exact solution set of a rational linear system a x = b.

    kind is one of "unique", "affine", "inconsistent".  For solvable
    systems, `particular` is one solution and `kernel_basis` spans the
    homogeneous solutions (empty for unique solutions).  For
    inconsistent systems `certificate` is a rational row combination y
    with y a == 0 and y b != 0.
    """

    kind: str
    particular: tuple[Fraction, ...] | None
    kernel_basis: tuple[tuple[Fraction, ...], ...]
    certificate: tuple[Fraction, ...] | None = None

    @property
    def is_consistent(self) -> bool:
        return self.kind != "inconsistent"

    @property
    def dim(self) -> int:
        return len(self.kernel_basis)


def solve_rational_linear(
    a: Sequence[Sequence], b: Sequence
) -> LinearSolution:
    """Solve a x = b exactly over the rationals.

    `a` is a matrix given by rows, `b` the right-hand column; entries may
    be ints or Fractions.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    if len(b) != nr:
        raise ValueError("shape mismatch")
    # Augment with b and with an identity block to track row operations,
    # which yields the inconsistency certificate.
    aug = [
        [Fraction(x) for x in row]
        + [Fraction(b[i])]
        + [Fraction(1 if i == j else 0) for j in range(nr)]
        for i, row in enumerate(a)
    ]
    work = [row[: nc + 1] for row in aug]
    trace = [row[nc + 1 :] for row in aug]
    r = 0
    pivots: list[int] = []
    for c in range(nc):
        piv = next((i for i in range(r, nr) if work[i][c] != 0), None)
        if piv is None:
            continue
        _swap(work, r, piv)
        _swap(trace, r, piv)
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        trace[r] = [x * inv for x in trace[r]]
        for i in range(nr):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
                trace[i] = [x - f * y for x, y in zip(trace[i], trace[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if work[i][nc] != 0:
            return LinearSolution(
                kind="inconsistent",
                particular=None,
                kernel_basis=(),
                certificate=tuple(trace[i]),
            )
    particular = [Fraction(0)] * nc
    for i, c in enumerate(pivots):
        particular[c] = work[i][nc]
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * nc
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -work[i][fc]
        basis.append(tuple(vec))
    kind = "unique" if not basis else "affine"
    return LinearSolution(
        kind=kind,
        particular=tuple(particular),
        kernel_basis=tuple(basis),
        certificate=None,
    )


def integer_kernel(m: IntegerMatrix) -> IntegerMatrix:
    """Basis (rows) of the saturated integer kernel {x : m @ x == 0}."""
    n = m.ncols
    if m.nrows == 0:
        return IntegerMatrix.identity(n)
    d, u, v = smith_normal_form(m)
    rank = sum(1 for x in d if x != 0)
    # m @ v has zero columns past the rank; those columns of v span the
    # kernel, and they are saturated since v is unimodular.
    cols = [v.col(j) for j in range(rank, n)]
    return IntegerMatrix.from_rows(cols, ncols=n)


def left_inverse_saturated(m: IntegerMatrix) -> IntegerMatrix:
    """Integer left inverse of a matrix whose columns are a saturated basis.

    For m of shape (k, r) with saturated independent columns, returns p of
    shape (r, k) with p @ m == identity(r).
    """
    cols_as_rows = m.transpose()
    if not is_integral_basis_of_saturated_subspace(cols_as_rows):
        raise ValueError("columns are not a saturated basis")
    w = extend_to_unimodular_basis(cols_as_rows)  # last r rows are m^T
    winv = inverse_unimodular(w)
    r = m.ncols
    k = m.nrows
    # w @ w^-1 == I, so (m^T) @ (last-r columns of w^-1) == I_r.
    p_cols = [[winv.rows[i][j] for i in range(k)] for j in range(w.nrows - r, w.nrows)]
    return IntegerMatrix.from_rows(p_cols, ncols=k)
