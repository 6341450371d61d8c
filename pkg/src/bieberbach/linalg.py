"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding ``int`` or ``fractions.Fraction``
entries; vectors are plain tuples.  Nothing here touches floating point.

The workhorse is :func:`snf`, a Smith normal form with unimodular transforms
running on sparse rows, so that the large, very sparse relation matrices of
group presentations stay cheap.  Lattice helpers (kernels, complements,
saturation, fixed sublattices) are built on it and on a row-style Hermite
normal form used to canonicalise every basis that leaves this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Optional, Sequence, Union

Number = Union[int, Fraction]
Vector = tuple
Matrix = tuple


# ----------------------------------------------------------------------------
# small dense helpers


def as_matrix(rows: Iterable[Iterable[Number]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def shape(m: Matrix, cols: Optional[int] = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


def transpose(m: Matrix, cols: Optional[int] = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[Number]) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vadd(u: Sequence[Number], v: Sequence[Number]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence[Number], v: Sequence[Number]) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c: Number, v: Sequence[Number]) -> Vector:
    return tuple(c * x for x in v)


def normalize_number(x: Number) -> Number:
    """Return ``x`` as an ``int`` when it is integral, else as a Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def to_fraction_matrix(m: Matrix) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def is_integral(values: Iterable[Number]) -> bool:
    return all(Fraction(x).denominator == 1 for x in values)


def is_integer_matrix(m: Matrix) -> bool:
    return all(is_integral(row) for row in m)


def to_int_matrix(m: Matrix) -> Matrix:
    if not is_integer_matrix(m):
        raise ValueError("matrix has non-integral entries")
    return tuple(tuple(int(Fraction(x)) for x in row) for row in m)


def denominator_lcm(values: Iterable[Number]) -> int:
    out = 1
    for x in values:
        out = lcm(out, Fraction(x).denominator)
    return out


def frac_mod1(x: Number) -> Fraction:
    """Reduce a rational into [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def det(m: Matrix) -> Number:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return normalize_number(sign * result)


def rank(m: Matrix) -> int:
    """Rank over the rationals."""
    echelon = RationalEchelon()
    for row in m:
        echelon.add({j: Fraction(x) for j, x in enumerate(row) if x}, Fraction(0))
    return len(echelon.pivots)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse over the rationals; integral results come back as ints."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(normalize_number(x) for x in row[n:]) for row in a)


def is_unimodular(m: Matrix) -> bool:
    if not m:
        return True
    return is_integer_matrix(m) and abs(det(m)) == 1


def matrix_power(m: Matrix, e: int) -> Matrix:
    result = identity(len(m))
    for _ in range(e):
        result = matmul(result, m)
    return result


# ----------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    The diagonal entries ``d_1 | d_2 | ... | d_r`` are positive; everything
    past ``rank`` is zero.
    """

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.V))))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d)


class _SparseSmith:
    """In-place Smith reduction of a sparse integer matrix.

    Rows of the working matrix are dicts ``col -> value``; a column index
    keeps the rows touching each column so column operations stay local.
    Pivot rule: the smallest absolute nonzero entry of the active
    submatrix, ties broken in row-major order.
    """

    def __init__(self, rows: Sequence[dict], ncols: int, track_u: bool):
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = [dict(r) for r in rows]
        self.cols: list[set] = [set() for _ in range(ncols)]
        for i, r in enumerate(self.rows):
            for j in r:
                self.cols[j].add(i)
        # V is kept column-wise, U row-wise; both sparse
        self.vcols = [{j: 1} for j in range(ncols)]
        self.track_u = track_u
        self.urows = [{i: 1} for i in range(self.nrows)] if track_u else None
        self.active_rows = set(range(self.nrows))
        self.active_cols = set(range(ncols))
        self.pivots: list[tuple[int, int, int]] = []

    # elementary operations -------------------------------------------------
    def _row_axpy(self, dst: int, src: int, q: int) -> None:
        """row[dst] += q * row[src]"""
        if not q:
            return
        rd = self.rows[dst]
        for j, x in self.rows[src].items():
            y = rd.get(j, 0) + q * x
            if y:
                if j not in rd:
                    self.cols[j].add(dst)
                rd[j] = y
            elif j in rd:
                del rd[j]
                self.cols[j].discard(dst)
        if self.track_u:
            ud = self.urows[dst]
            for j, x in self.urows[src].items():
                y = ud.get(j, 0) + q * x
                if y:
                    ud[j] = y
                else:
                    ud.pop(j, None)

    def _col_axpy(self, dst: int, src: int, q: int) -> None:
        """col[dst] += q * col[src]"""
        if not q:
            return
        for i in list(self.cols[src]):
            r = self.rows[i]
            y = r.get(dst, 0) + q * r[src]
            if y:
                if dst not in r:
                    self.cols[dst].add(i)
                r[dst] = y
            elif dst in r:
                del r[dst]
                self.cols[dst].discard(i)
        vd = self.vcols[dst]
        for i, x in self.vcols[src].items():
            y = vd.get(i, 0) + q * x
            if y:
                vd[i] = y
            else:
                vd.pop(i, None)

    def _negate_row(self, i: int) -> None:
        r = self.rows[i]
        for j in r:
            r[j] = -r[j]
        if self.track_u:
            u = self.urows[i]
            for j in u:
                u[j] = -u[j]

    # pivoting --------------------------------------------------------------
    def _global_pivot(self) -> Optional[tuple[int, int]]:
        best = None
        best_abs = None
        for i in sorted(self.active_rows):
            row = self.rows[i]
            if not row:
                self.active_rows.discard(i)  # zero rows stay zero
                continue
            units = [j for j, x in row.items() if abs(x) == 1 and j in self.active_cols]
            if units:
                return i, min(units)  # nothing is smaller, and this row comes first
            for j, x in row.items():
                if j not in self.active_cols:
                    continue
                a = abs(x)
                if best is None or a < best_abs or (a == best_abs and (i, j) < best):
                    best, best_abs = (i, j), a
        return best

    def _sweep(self, i: int, j: int) -> bool:
        """Reduce column j and row i against the pivot; True if both clean."""
        p = self.rows[i][j]
        clean = True
        for r in sorted(self.cols[j] - {i}):
            if r not in self.active_rows:
                continue
            x = self.rows[r][j]
            self._row_axpy(r, i, -(x // p))
            if j in self.rows[r]:
                clean = False
        for c in sorted(k for k in self.rows[i] if k != j):
            if c not in self.active_cols:
                continue
            x = self.rows[i][c]
            self._col_axpy(c, j, -(x // p))
            if c in self.rows[i]:
                clean = False
        return clean

    def _nondivisible_row(self, i: int, j: int) -> Optional[int]:
        p = self.rows[i][j]
        if abs(p) == 1:
            return None
        for r in sorted(self.active_rows - {i}):
            for c, x in self.rows[r].items():
                if c in self.active_cols and x % p:
                    return r
        return None

    def run(self) -> None:
        while True:
            pos = self._global_pivot()
            if pos is None:
                return
            i, j = pos
            while True:
                if not self._sweep(i, j):
                    break  # a smaller remainder appeared: re-pick globally
                r = self._nondivisible_row(i, j)
                if r is None:
                    if self.rows[i][j] < 0:
                        self._negate_row(i)
                    self.pivots.append((i, j, self.rows[i][j]))
                    self.active_rows.discard(i)
                    self.active_cols.discard(j)
                    break
                self._row_axpy(i, r, 1)


def _dense_rows(m: Matrix) -> list[dict]:
    return [{j: int(x) for j, x in enumerate(row) if x} for row in m]


def _smith_core(rows: Sequence[dict], ncols: int, track_u: bool):
    """Run the reduction; return (pivots, row order, col order, state)."""
    state = _SparseSmith(rows, ncols, track_u)
    state.run()
    piv_rows = [p[0] for p in state.pivots]
    piv_cols = [p[1] for p in state.pivots]
    row_order = piv_rows + [i for i in range(state.nrows) if i not in set(piv_rows)]
    col_order = piv_cols + [j for j in range(ncols) if j not in set(piv_cols)]
    return state, row_order, col_order


def snf(m: Matrix, ncols: Optional[int] = None) -> SmithDecomposition:
    """Smith normal form ``U @ M @ V == D`` with unimodular ``U`` and ``V``.

    ``ncols`` is only needed for matrices with zero rows.

    >>> snf(((2, 4), (6, 8))).diagonal
    (2, 4)
    """
    nrows, nc = shape(m, ncols)
    state, row_order, col_order = _smith_core(_dense_rows(m), nc, track_u=True)
    U = tuple(tuple(state.urows[i].get(c, 0) for c in range(nrows)) for i in row_order)
    V = tuple(tuple(state.vcols[j].get(r, 0) for j in col_order) for r in range(nc))
    diag = [p[2] for p in state.pivots]
    D = tuple(tuple(diag[i] if i == j and i < len(diag) else 0 for j in range(nc))
              for i in range(nrows))
    return SmithDecomposition(U, D, V)


def smith_columns(rows: Sequence[dict], ncols: int) -> tuple[list[int], list[dict]]:
    """Smith diagonal and the column transform ``V`` only, for sparse input.

    Returns ``(diagonal, vcols)`` where ``vcols[t]`` is column ``t`` of ``V``
    as a sparse dict.  The relation matrices of large presentations never
    need ``U``; skipping it keeps them cheap.
    """
    state, _, col_order = _smith_core(rows, ncols, track_u=False)
    diag = [p[2] for p in state.pivots] + [0] * (ncols - len(state.pivots))
    return diag, [state.vcols[j] for j in col_order]


# ----------------------------------------------------------------------------
# Hermite normal form and lattices


def hnf(rows: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, T)`` with ``T`` unimodular, ``T @ M`` equal to ``H`` padded
    with zero rows at the bottom; ``H`` holds only the nonzero rows.  Pivots
    are positive and the entries above a pivot lie in ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    ncols = len(a[0]) if a else 0
    t = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[p] = a[p], a[r]
            t[r], t[p] = t[p], t[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < m and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                t[r] = [-x for x in t[r]]
            p = a[r][c]
            for i in range(r):
                q = a[i][c] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[r])]
            r += 1
    return tuple(map(tuple, a[:r])), tuple(map(tuple, t))


@dataclass(frozen=True)
class LatticeBasis:
    """A free sublattice of Z^dim given by linearly independent row vectors."""

    dim: int
    vectors: tuple[tuple[int, ...], ...] = ()

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def columns(self) -> Matrix:
        """Basis vectors as the columns of a ``dim x rank`` matrix."""
        return transpose(self.vectors, self.dim) if self.vectors else tuple(() for _ in range(self.dim))

    def contains(self, v: Sequence[int]) -> bool:
        if not self.vectors:
            return not any(v)
        return solve_integer(self.columns(), tuple(v)) is not None

    def __iter__(self):
        return iter(self.vectors)


def lattice(dim: int, vectors: Iterable[Sequence[Number]]) -> LatticeBasis:
    """Canonical (Hermite) basis of the lattice spanned by integer ``vectors``."""
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if not vecs:
        return LatticeBasis(dim, ())
    h, _ = hnf(tuple(vecs))
    return LatticeBasis(dim, h)


def kernel_lattice(m: Matrix, ncols: Optional[int] = None) -> LatticeBasis:
    """Saturated basis of ``{x in Z^cols : M x = 0}``.

    >>> kernel_lattice(((2, 4),)).vectors
    ((2, -1),)
    """
    _, nc = shape(m, ncols)
    diag, vcols = smith_columns(_dense_rows(m), nc)
    r = sum(1 for d in diag if d)
    vecs = [tuple(vcols[t].get(i, 0) for i in range(nc)) for t in range(r, nc)]
    return lattice(nc, vecs)


def saturate(sub: LatticeBasis) -> LatticeBasis:
    """Smallest saturated lattice containing ``sub`` (its rational span ∩ Z^n)."""
    if not sub.vectors:
        return sub
    perp = kernel_lattice(sub.vectors, sub.dim)
    if not perp.vectors:
        return lattice(sub.dim, identity(sub.dim))
    return kernel_lattice(perp.vectors, sub.dim)


def lattice_index(sub: LatticeBasis, ambient: LatticeBasis) -> int:
    """Index of ``sub`` in ``ambient`` (both of the same rank); 0 if infinite."""
    if sub.rank != ambient.rank:
        return 0
    coords = []
    for v in sub.vectors:
        x = solve_integer(ambient.columns(), v)
        if x is None:
            raise ValueError("sublattice is not contained in the ambient lattice")
        coords.append(x)
    return abs(det(tuple(coords))) if coords else 1


def complement_in_lattice(sub: LatticeBasis, map_to_quotient: Optional[Matrix] = None) -> LatticeBasis:
    """A basis ``B`` with ``Z^n = sub ⊕ B``.

    ``sub`` must be saturated.  When ``map_to_quotient`` is given, ``sub``
    is additionally required to be its kernel, so that the returned
    complement maps injectively onto the image lattice.

    The complement is read off the inverse of the Hermite row transform of
    the column matrix of ``sub``: that transform turns ``sub`` into the
    first coordinate block, and its inverse's remaining columns complete it
    to a unimodular basis.
    """
    n = sub.dim
    r = sub.rank
    if map_to_quotient is not None and map_to_quotient:
        if rank(map_to_quotient) != n - r:
            raise ValueError("sub is not the kernel of map_to_quotient")
        for v in sub.vectors:
            if any(matvec(map_to_quotient, v)):
                raise ValueError("sub is not contained in the kernel of map_to_quotient")
    if r == 0:
        return lattice(n, identity(n))
    h, t = hnf(sub.columns())
    if len(h) != r or abs(det(h)) != 1:
        raise ValueError("sublattice is not saturated; no lattice complement exists")
    tinv = to_int_matrix(inverse(t))
    comp = [tuple(tinv[i][j] for i in range(n)) for j in range(r, n)]
    return lattice(n, comp)


def fixed_sublattice(generators: Sequence[Matrix], dim: Optional[int] = None) -> LatticeBasis:
    """Saturated lattice of integer vectors fixed by every generator."""
    if dim is None:
        if not generators:
            raise ValueError("dimension required when no generators are given")
        dim = len(generators[0])
    rows = []
    for a in generators:
        for i in range(dim):
            rows.append(tuple(a[i][j] - (1 if i == j else 0) for j in range(dim)))
    if not rows:
        return lattice(dim, identity(dim))
    return kernel_lattice(tuple(rows), dim)


# ----------------------------------------------------------------------------
# solving


def solve_integer(m: Matrix, b: Sequence[Number], ncols: Optional[int] = None) -> Optional[Vector]:
    """Some integer ``x`` with ``M x = b``, or ``None`` when none exists."""
    nrows, nc = shape(m, ncols)
    if len(b) != nrows:
        raise ValueError("right-hand side has the wrong length")
    if not is_integral(b):
        # M x is integral for integral x
        return None
    b = tuple(int(Fraction(x)) for x in b)
    dec = snf(m, nc)
    ub = matvec(dec.U, b) if nrows else ()
    z = [0] * nc
    for i in range(nrows):
        d = dec.D[i][i] if i < nc else 0
        if d:
            if ub[i] % d:
                return None
            z[i] = ub[i] // d
        elif ub[i]:
            return None
    return matvec(dec.V, z) if nc else ()


class RationalEchelon:
    """Incremental sparse row echelon form over the rationals.

    Each stored row has its pivot as its smallest column and a unit pivot.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[dict, Fraction]] = {}
        self.inconsistent = False

    def add(self, row: dict, rhs: Fraction) -> None:
        row = {j: Fraction(x) for j, x in row.items() if x}
        rhs = Fraction(rhs)
        while row:
            c = min(row)
            if c in self.pivots:
                prow, prhs = self.pivots[c]
                f = row[c]
                for j, x in prow.items():
                    y = row.get(j, 0) - f * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
                rhs -= f * prhs
            else:
                f = row[c]
                self.pivots[c] = ({j: x / f for j, x in row.items()}, rhs / f)
                return
        if rhs:
            self.inconsistent = True

    def back_substitute(self, nvars: int, free_values: dict, homogeneous: bool = False) -> list:
        x = [Fraction(0)] * nvars
        for j, v in free_values.items():
            x[j] = Fraction(v)
        for c in sorted(self.pivots, reverse=True):
            prow, prhs = self.pivots[c]
            s = Fraction(0) if homogeneous else prhs
            for j, a in prow.items():
                if j != c:
                    s -= a * x[j]
            x[c] = s
        return x


def solve_sparse_rational(equations: Iterable[tuple[dict, Number]], nvars: int,
                          with_kernel: bool = True) -> Optional[tuple[Vector, tuple]]:
    """Sparse variant of :func:`solve_rational`; equations are ``(row, rhs)``."""
    ech = RationalEchelon()
    for row, rhs in equations:
        ech.add(row, rhs)
        if ech.inconsistent:
            return None
    free = [j for j in range(nvars) if j not in ech.pivots]
    particular = tuple(normalize_number(x) for x in ech.back_substitute(nvars, {}))
    kernel = ()
    if with_kernel:
        vecs = []
        for f in free:
            v = ech.back_substitute(nvars, {f: 1}, homogeneous=True)
            if next(x for x in v if x) < 0:
                v = [-x for x in v]
            vecs.append(tuple(normalize_number(x) for x in v))
        kernel = tuple(vecs)
    return particular, kernel


def solve_rational(m: Matrix, b: Sequence[Number], ncols: Optional[int] = None) -> Optional[tuple[Vector, tuple]]:
    """Solve ``M x = b`` over Q.

    Returns ``(particular, kernel_basis)`` where the particular solution has
    every free variable set to zero, or ``None`` if the system is
    inconsistent.
    """
    nrows, nc = shape(m, ncols)
    if len(b) != nrows:
        raise ValueError("right-hand side has the wrong length")
    eqs = (({j: x for j, x in enumerate(row) if x}, rhs) for row, rhs in zip(m, b))
    return solve_sparse_rational(eqs, nc)


# ----------------------------------------------------------------------------
# exterior powers


def exterior_trace_poly(a: Matrix) -> tuple[Number, ...]:
    """Coefficients ``c_0..c_n`` of ``det(I + t A)``.

    ``c_j`` is the trace of the j-th exterior power of ``A``.  Computed with
    the Faddeev-LeVerrier recurrence in exact arithmetic.
    """
    n = len(a)
    af = to_fraction_matrix(a)
    coeffs = [Fraction(1)]
    mk = zeros(n, n)
    for k in range(1, n + 1):
        prod = matmul(af, mk) if k > 1 else zeros(n, n)
        mk = tuple(tuple(x + (coeffs[-1] if i == j else 0) for j, x in enumerate(row))
                   for i, row in enumerate(prod))
        amk = matmul(af, mk)
        coeffs.append(-sum(amk[i][i] for i in range(n)) / k)
    # det(xI - A) = sum c_k x^(n-k); det(I + tA) picks up (-1)^k
    return tuple(normalize_number((-1) ** k * c) for k, c in enumerate(coeffs))


def exterior_power(a: Matrix, j: int) -> Matrix:
    """Explicit j-th exterior power on the lexicographic wedge basis."""
    n = len(a)
    basis = list(combinations(range(n), j))
    return tuple(
        tuple(det(tuple(tuple(a[r][c] for c in cols) for r in rows)) for cols in basis)
        for rows in basis)
