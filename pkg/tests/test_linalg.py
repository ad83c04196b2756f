"""Exact linear algebra kernel tests.

Reference computations (rank, determinant, Smith form) come from sympy
so the hand-rolled Fraction routines are checked against an
independent implementation.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from vorocell.linalg import (
    SymMatrix,
    cone_membership,
    det,
    identity_matrix,
    invert,
    is_positive_definite,
    ldlt,
    mat_mul,
    matrix_rank,
    smith_normal_form,
    solve_linear,
    transpose,
)


# -- independent oracles ---------------------------------------------------


def sympy_rank(rows):
    return sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows]).rank()


def sympy_det(rows):
    return Fraction(str(sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows]).det()))


def sympy_smith_factors(rows):
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    d = sympy_snf(sympy.Matrix(rows))
    diag = [abs(d[i, i]) for i in range(min(d.rows, d.cols))]
    return [int(x) for x in diag if x != 0]


# -- matrices ----------------------------------------------------------------


small_entries = st.integers(min_value=-6, max_value=6)


def int_matrix(rows, cols):
    return st.lists(
        st.lists(small_entries, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    )


def test_symmatrix_basics():
    a = SymMatrix([[2, 1], [1, 2]])
    assert a[0, 1] == 1
    assert a.evaluate((1, -1)) == 2
    assert a.pair(SymMatrix.identity(2)) == 4
    assert (a + a).rows == a.scale(2).rows
    assert a.upper() == (Fraction(2), Fraction(1), Fraction(2))


def test_symmatrix_rejects_asymmetric():
    with pytest.raises(ValueError):
        SymMatrix([[1, 2], [3, 4]])


def test_rank_one():
    r = SymMatrix.rank_one((1, -2))
    assert r.rows == ((1, -2), (-2, 4))


def test_conjugate_is_congruence():
    a = SymMatrix([[2, 1], [1, 2]])
    u = [[1, 1], [0, 1]]
    b = a.conjugate(u)
    ut = transpose(u)
    expect = mat_mul(mat_mul(ut, [list(r) for r in a.rows]), u)
    assert [list(r) for r in b.rows] == expect


@given(int_matrix(3, 3))
def test_matrix_rank_matches_sympy(rows):
    assert matrix_rank([[Fraction(x) for x in r] for r in rows]) == sympy_rank(rows)


@given(int_matrix(3, 3))
def test_det_matches_sympy(rows):
    assert det([[Fraction(x) for x in r] for r in rows]) == sympy_det(rows)


@given(int_matrix(4, 3))
@settings(max_examples=60)
def test_smith_factors_match_sympy(rows):
    factors, rank = smith_normal_form(rows)
    expect = sympy_smith_factors(rows)
    assert list(factors) == expect
    assert rank == len(expect)


def test_invert_round_trip():
    m = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    inv = invert(m)
    assert mat_mul(m, inv) == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        invert([[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]])


def test_solve_linear_unique_and_kernel():
    sol = solve_linear([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]],
                       [Fraction(2), Fraction(0)])
    assert sol is not None and sol.unique
    assert sol.solution == (1, 1)
    under = solve_linear([[Fraction(1), Fraction(1)]], [Fraction(2)])
    assert under is not None and not under.unique
    assert len(under.kernel) == 1
    none = solve_linear([[Fraction(0), Fraction(0)]], [Fraction(1)])
    assert none.solution is None


def test_positive_definite_detection():
    assert is_positive_definite(SymMatrix([[2, 1], [1, 2]]))
    assert not is_positive_definite(SymMatrix([[1, 2], [2, 1]]))
    assert not is_positive_definite(SymMatrix([[1, 1], [1, 1]]))  # semidefinite


@given(int_matrix(3, 3))
@settings(max_examples=60)
def test_pd_agrees_with_leading_minors(rows):
    # Sylvester's criterion as the oracle
    sym = [[Fraction(rows[i][j] + rows[j][i]) for j in range(3)] for i in range(3)]
    a = SymMatrix(sym)
    minors = [det([row[: k + 1] for row in sym[: k + 1]]) for k in range(3)]
    assert is_positive_definite(a) == all(m > 0 for m in minors)


def test_ldlt_reconstructs():
    a = SymMatrix([[4, 2], [2, 3]])
    d, lower = ldlt(a)
    n = a.n

    def ell(i, k):
        if i == k:
            return Fraction(1)
        return lower[i][k] if k < i else Fraction(0)

    prod = [
        [sum(ell(i, k) * d[k] * ell(j, k) for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    assert prod == [list(r) for r in a.rows]
    assert ldlt(SymMatrix([[1, 2], [2, 1]])) is None


def test_cone_membership_interior_and_outside():
    rays = [SymMatrix.rank_one(v) for v in [(1, 0), (0, 1), (1, 1)]]
    inside = cone_membership(rays, SymMatrix([[2, 1], [1, 2]]))
    assert inside is not None
    assert inside.support == frozenset({0, 1, 2})
    total = SymMatrix.identity(2).scale(0)
    for c, r in zip(inside.coefficients, rays):
        total = total + r.scale(c)
    assert total.rows == SymMatrix([[2, 1], [1, 2]]).rows
    outside = cone_membership(rays, SymMatrix([[2, -1], [-1, 2]]))
    assert outside is None


def test_cone_membership_boundary_support():
    rays = [SymMatrix.rank_one(v) for v in [(1, 0), (0, 1), (1, 1)]]
    face = cone_membership(rays, SymMatrix([[1, 0], [0, 1]]))
    assert face is not None
    assert face.support == frozenset({0, 1})


def test_serialization_round_trip():
    a = SymMatrix([[Fraction(5, 3), Fraction(-1, 2)], [Fraction(-1, 2), Fraction(7)]])
    assert SymMatrix.from_json_dict(a.to_json_dict()).rows == a.rows
