from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from bieberbach import linalg as la

small_int = st.integers(min_value=-6, max_value=6)


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return tuple(tuple(draw(small_int) for _ in range(c)) for _ in range(r))


# --- Smith form ---------------------------------------------------------------


@pytest.mark.parametrize("m, diag", [
    (((1, 0), (0, 1)), (1, 1)),
    (((2, 4), (6, 8)), (2, 4)),
    (((2,),), (2,)),
    (((12, 6, 4, 8), (3, 9, 6, 12), (2, 16, 14, 28), (20, 10, 10, 20)), (1, 10, 30, 0)),
])
def test_snf_examples(m, diag):
    assert la.snf(m).diagonal == diag


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_snf_factorisation(m):
    d = la.snf(m)
    assert la.matmul(la.matmul(d.U, m), d.V) == d.D
    assert la.is_unimodular(d.U) and la.is_unimodular(d.V)
    nz = d.invariant_factors
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert d.rank == la.rank(m)


@settings(max_examples=60, deadline=None)
@given(int_matrices(4, 4))
def test_snf_agrees_with_sympy(m):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import invariant_factors
    theirs = [abs(int(x)) for x in invariant_factors(sympy.Matrix(m), domain=sympy.ZZ) if x != 0]
    assert list(la.snf(m).invariant_factors) == theirs


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_smith_columns_matches_dense(m):
    rows = [{j: x for j, x in enumerate(r) if x} for r in m]
    diag, vcols = la.smith_columns(rows, len(m[0]))
    dense = la.snf(m)
    assert [x for x in diag if x] == list(dense.invariant_factors)
    v = tuple(tuple(col.get(i, 0) for col in vcols) for i in range(len(m[0])))
    assert la.is_unimodular(v)


# --- Hermite form and lattices --------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(int_matrices())
def test_hnf(m):
    h, t = la.hnf(m)
    assert la.is_unimodular(t)
    th = la.matmul(t, m)
    assert th[:len(h)] == h
    assert all(not any(row) for row in th[len(h):])
    pivots = [next(j for j, x in enumerate(row) if x) for row in h]
    assert pivots == sorted(set(pivots))
    for i, p in enumerate(pivots):
        assert h[i][p] > 0
        assert all(0 <= h[r][p] < h[i][p] for r in range(i))


@pytest.mark.parametrize("m, ncols, basis", [
    (((1, 0),), 2, ((0, 1),)),
    (((2, 0), (0, 3)), 2, ()),
    (((2, 4),), 2, ((2, -1),)),
])
def test_kernel_lattice_examples(m, ncols, basis):
    assert la.kernel_lattice(m, ncols).vectors == la.lattice(ncols, basis).vectors


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_kernel_lattice_is_saturated_kernel(m):
    ncols = len(m[0])
    k = la.kernel_lattice(m, ncols)
    assert k.rank == ncols - la.rank(m)
    for v in k.vectors:
        assert not any(la.matvec(m, v))
    assert la.saturate(k).vectors == k.vectors


@pytest.mark.parametrize("m, b, x", [
    (((2,),), (4,), (2,)),
    (((2,),), (3,), None),
    (((2, 0), (0, 0)), (1, 0), None),
])
def test_solve_integer_examples(m, b, x):
    assert la.solve_integer(m, b) == x


@settings(max_examples=80, deadline=None)
@given(int_matrices(), st.data())
def test_solve_integer_finds_planted_solution(m, data):
    x = tuple(data.draw(small_int) for _ in m[0])
    b = la.matvec(m, x)
    y = la.solve_integer(m, b)
    assert y is not None and la.matvec(m, y) == b


def test_solve_rational_examples():
    x, kernel = la.solve_rational(((1, 0), (0, 1)), (Fraction(1, 2), Fraction(1, 3)))
    assert x == (Fraction(1, 2), Fraction(1, 3)) and kernel == ()
    x, kernel = la.solve_rational(((1, 1),), (1,))
    assert x == (1, 0) and kernel == ((1, -1),)
    assert la.solve_rational(((1,), (2,)), (1, 1)) is None


def test_complement_examples():
    assert la.complement_in_lattice(la.lattice(2, [(0, 1)]), ((1, 0),)).vectors == ((1, 0),)
    assert la.complement_in_lattice(la.lattice(2, [(0, 1)]), ((2, 0),)).vectors == ((1, 0),)
    assert la.complement_in_lattice(la.lattice(1, []), ((1,),)).vectors == ((1,),)


def test_complement_rejects_unsaturated():
    with pytest.raises(ValueError):
        la.complement_in_lattice(la.lattice(2, [(0, 2)]))


@settings(max_examples=60, deadline=None)
@given(int_matrices(3, 4))
def test_complement_spans_with_saturation(m):
    n = len(m[0])
    sub = la.saturate(la.lattice(n, m))
    comp = la.complement_in_lattice(sub)
    both = tuple(sub.vectors) + tuple(comp.vectors)
    assert len(both) == n and abs(la.det(both)) == 1


def test_fixed_sublattice_examples():
    assert la.fixed_sublattice([la.identity(3)]).rank == 3
    assert la.fixed_sublattice([((1, 0), (0, -1))]).vectors == ((1, 0),)
    d1 = ((1, 0, 0), (0, -1, 0), (0, 0, -1))
    d2 = ((-1, 0, 0), (0, 1, 0), (0, 0, -1))
    assert la.fixed_sublattice([d1, d2]).rank == 0


def test_lattice_index():
    assert la.lattice_index(la.lattice(2, [(2, 0), (0, 3)]), la.lattice(2, [(1, 0), (0, 1)])) == 6


# --- exterior powers ------------------------------------------------------------


@pytest.mark.parametrize("a, coeffs", [
    (la.identity(3), (1, 3, 3, 1)),
    (((1, 0), (0, -1)), (1, 0, -1)),
    (((1, 0, 0), (0, -1, 0), (0, 0, -1)), (1, -1, -1, 1)),
])
def test_exterior_trace_examples(a, coeffs):
    assert la.exterior_trace_poly(a) == coeffs


def _minor_trace(a, j):
    """Sum of principal j x j minors, straight from the definition."""
    n = len(a)
    return sum(la.det(tuple(tuple(a[r][c] for c in s) for r in s)) if j else 1
               for s in combinations(range(n), j))


@settings(max_examples=80, deadline=None)
@given(int_matrices(4, 4).filter(lambda m: len(m) == len(m[0])))
def test_exterior_trace_matches_minors(a):
    n = len(a)
    poly = la.exterior_trace_poly(a)
    for j in range(n + 1):
        assert poly[j] == _minor_trace(a, j)
        wedge = la.exterior_power(a, j)
        assert sum(wedge[i][i] for i in range(len(wedge))) == poly[j]


@settings(max_examples=50, deadline=None)
@given(int_matrices(3, 3).filter(lambda m: len(m) == len(m[0])),
       int_matrices(3, 3).filter(lambda m: len(m) == len(m[0])))
def test_exterior_power_is_multiplicative(a, b):
    if len(a) != len(b):
        return
    for j in range(len(a) + 1):
        assert la.exterior_power(la.matmul(a, b), j) == la.matmul(la.exterior_power(a, j), la.exterior_power(b, j))


def test_rational_entries_stay_exact():
    a = ((Fraction(1, 2), 0), (0, Fraction(1, 3)))
    assert la.det(a) == Fraction(1, 6)
    assert la.inverse(a) == ((2, 0), (0, 3))
