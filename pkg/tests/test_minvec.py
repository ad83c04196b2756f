"""Minimal-vector enumeration against a brute-force box search."""

from fractions import Fraction
from math import isqrt

from hypothesis import given, settings
from hypothesis import strategies as st

from vorocell.linalg import SymMatrix, is_positive_definite
from vorocell.minvec import MinData, canonical_sign, is_primitive, minimal_vectors, vectors_below


# -- oracle: exhaustive search over a crude coordinate box -------------------


def brute_minimum(q: SymMatrix, box: int = 12):
    """Arithmetic minimum and minimal vectors by scanning the integer
    box [-box, box]^n, keeping one representative per +/- pair."""
    n = q.n
    best = None
    found = []

    def rec(prefix):
        nonlocal best, found
        if len(prefix) == n:
            v = tuple(prefix)
            if all(x == 0 for x in v) or not is_primitive(v):
                return
            val = q.evaluate(v)
            if best is None or val < best:
                best = val
                found = [canonical_sign(v)]
            elif val == best and canonical_sign(v) not in found:
                found.append(canonical_sign(v))
            return
        for x in range(-box, box + 1):
            rec(prefix + [x])

    rec([])
    return best, sorted(found)


def symmetric_pd(entries):
    n = 2
    rows = [[0] * n for _ in range(n)]
    a, b, c = entries
    rows[0][0] = 2 + abs(a)
    rows[1][1] = 2 + abs(b)
    rows[0][1] = rows[1][0] = c % 3 - 1
    return SymMatrix(rows)


def test_identity_minimum():
    md = minimal_vectors(SymMatrix.identity(3))
    assert md.mu == 1
    assert sorted(md.vectors) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert md.signed_count == 6


def test_hexagonal_form():
    md = minimal_vectors(SymMatrix([[2, 1], [1, 2]]))
    assert md.mu == 2
    assert sorted(md.vectors) == [(0, 1), (1, 0), (1, -1)] or sorted(
        md.vectors
    ) == sorted([(0, 1), (1, 0), (1, -1)])
    assert md.signed_count == 6


def test_root_form_a3():
    a3 = SymMatrix([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    md = minimal_vectors(a3)
    assert md.mu == 2
    assert md.signed_count == 12


@given(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 6)))
@settings(max_examples=40, deadline=None)
def test_matches_brute_force(entries):
    q = symmetric_pd(entries)
    assert is_positive_definite(q)
    mu, vecs = brute_minimum(q)
    md = minimal_vectors(q)
    assert md.mu == mu
    assert sorted(md.vectors) == vecs


def test_vectors_below_includes_bound():
    q = SymMatrix.identity(2)
    got = vectors_below(q, Fraction(2))
    vals = {v: val for v, val in got}
    assert vals[(1, 0)] == 1 and vals[(1, 1)] == 2
    assert (1, -1) in vals
    assert all(val <= 2 for val in vals.values())


def test_vectors_below_primitive_only():
    q = SymMatrix.identity(2)
    got = dict(vectors_below(q, Fraction(4)))
    assert (2, 0) not in got
    assert (0, 2) not in got


def test_fractional_form():
    q = SymMatrix([[Fraction(1, 2), 0], [0, Fraction(3)]])
    md = minimal_vectors(q)
    assert md.mu == Fraction(1, 2)
    assert md.vectors == ((1, 0),)


def test_min_data_round_trip():
    md = minimal_vectors(SymMatrix([[2, 1], [1, 2]]))
    again = MinData.from_json_dict(md.to_json_dict())
    assert again == md
