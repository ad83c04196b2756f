"""Reduction walk: membership certificates, equivariance, termination.

The independent check used throughout: a result is correct iff the
returned coefficients and translated rays reconstruct the input form
exactly, with strictly positive coefficients exactly on the support.
That certificate does not trust any of the walk bookkeeping.
"""

import random
from fractions import Fraction

import pytest

from vorocell.linalg import SymMatrix, det, is_positive_definite, mat_mul, transpose
from vorocell.perfect import enumerate_perfect_forms
from vorocell.reduction import reduce_with_trace, voronoi_reduce


def reconstructs(x: SymMatrix, result, catalog) -> bool:
    rays = result.translated_rays(catalog)
    total = SymMatrix.identity(x.n).scale(0)
    for c, r in zip(result.coefficients, rays):
        if c <= 0:
            return False
        total = total + r.scale(c)
    return total.rows == x.rows


def random_unimodular(n, rng, steps=6):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            u[i][k] += c * u[j][k]
    return u


@pytest.fixture(scope="module")
def cat2():
    return enumerate_perfect_forms(2)


@pytest.fixture(scope="module")
def cat3():
    return enumerate_perfect_forms(3)


def test_hexagonal_form_is_interior(cat2):
    x = SymMatrix([[2, 1], [1, 2]])
    res = voronoi_reduce(x, cat2)
    assert res.class_index == 0
    assert res.steps == 0
    assert res.support == (0, 1, 2)
    assert res.coefficients == (1, 1, 1)
    assert reconstructs(x, res, cat2)


def test_identity_lies_on_a_face(cat2):
    res = voronoi_reduce(SymMatrix.identity(2), cat2)
    assert len(res.support) == 2
    assert reconstructs(SymMatrix.identity(2), res, cat2)


def test_witness_is_unimodular(cat2):
    x = SymMatrix([[13, 8], [8, 5]])
    res = voronoi_reduce(x, cat2)
    u = [list(map(Fraction, row)) for row in res.witness]
    assert abs(det(u)) == 1
    assert reconstructs(x, res, cat2)


def test_translation_equivariance(cat2):
    rng = random.Random(20240817)
    x = SymMatrix([[5, 2], [2, 3]])
    base = voronoi_reduce(x, cat2)
    base_rays = {r.rows for r in base.translated_rays(cat2)}
    for _ in range(12):
        u = random_unimodular(2, rng)
        y = x.conjugate(u)
        res = voronoi_reduce(y, cat2)
        assert res.class_index == base.class_index
        assert reconstructs(y, res, cat2)
        # the supporting rays transform with the same conjugation
        moved = {
            SymMatrix(mat_mul(mat_mul(transpose(u), [list(r) for r in m.rows]), u)).rows
            for m in base.translated_rays(cat2)
        }
        assert {r.rows for r in res.translated_rays(cat2)} == moved


def test_far_from_domain_takes_steps(cat2):
    u = [[1, 7], [0, 1]]
    x = SymMatrix([[2, 1], [1, 2]]).conjugate(u)
    res, trace = reduce_with_trace(x, cat2)
    assert res.steps == len(trace) > 0
    assert reconstructs(x, res, cat2)


def test_three_dimensional_walk(cat3):
    rng = random.Random(7)
    for _ in range(10):
        u = random_unimodular(3, rng)
        x = SymMatrix([[2, 1, 1], [1, 3, 0], [1, 0, 4]]).conjugate(u)
        assert is_positive_definite(x)
        res = voronoi_reduce(x, cat3)
        assert res.class_index == 0
        assert reconstructs(x, res, cat3)


def test_rational_entries(cat2):
    x = SymMatrix([[Fraction(7, 3), Fraction(1, 2)], [Fraction(1, 2), Fraction(5, 4)]])
    res = voronoi_reduce(x, cat2)
    assert reconstructs(x, res, cat2)


def test_rejects_non_positive_definite(cat2):
    with pytest.raises(ValueError):
        voronoi_reduce(SymMatrix([[1, 2], [2, 1]]), cat2)


def test_rejects_dimension_mismatch(cat2):
    with pytest.raises(ValueError):
        voronoi_reduce(SymMatrix.identity(3), cat2)


def test_rejects_incomplete_catalog():
    partial = enumerate_perfect_forms(4, limit=1)
    with pytest.raises(ValueError):
        voronoi_reduce(SymMatrix.identity(4), partial)
