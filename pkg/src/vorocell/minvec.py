"""Enumeration of minimal vectors of positive-definite quadratic forms.

The arithmetic minimum mu(A) is the least value of x^T A x over nonzero
primitive integer vectors, and M(A) the finite set of vectors attaining
it.  Enumeration is a Fincke--Pohst style recursive sweep driven by the
exact LDL^T decomposition: writing

    x^T A x = sum_k d_k (x_k + sum_{i>k} L[i][k] x_i)^2,

coordinates are chosen from the last to the first, and at each level the
admissible integer interval is computed exactly with ``math.isqrt`` —
no floating point, no rounding.

Vectors are stored up to sign with the representative whose first
nonzero coordinate is positive (the rank-one matrix vv^T downstream is
sign-invariant); the doubled count is available where a comparison with
sign-counting conventions matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .linalg import SymMatrix, ldlt


def _floor_sqrt_plus(s: Fraction, c: Fraction) -> int:
    """floor(sqrt(s) + c) for s >= 0, computed exactly."""
    p, q = s.numerator, s.denominator
    a, b = c.numerator, c.denominator
    return (isqrt(p * q * b * b) + a * q) // (q * b)


def canonical_sign(v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def is_primitive(v: tuple[int, ...]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def vectors_below(q: SymMatrix, bound) -> list[tuple[tuple[int, ...], Fraction]]:
    """All primitive vectors (up to sign) with value <= bound, with values.

    Sorted lexicographically by vector; the returned representatives have
    their first nonzero coordinate positive.
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    decomp = ldlt(q)
    if decomp is None:
        raise ValueError("form is not positive definite")
    d, lower = decomp
    n = q.n
    x = [0] * n
    found: list[tuple[tuple[int, ...], Fraction]] = []

    def sweep(k: int, remaining: Fraction, zero_above: bool) -> None:
        # center of the admissible interval at this level, from the
        # already-fixed coordinates x_{k+1}..x_{n-1}
        c = Fraction(0)
        for i in range(k + 1, n):
            if x[i]:
                c += lower[i][k] * x[i]
        s = remaining / d[k]
        hi = _floor_sqrt_plus(s, -c)
        lo = -_floor_sqrt_plus(s, c)
        if zero_above and lo < 0:
            lo = 0  # pick one representative per +/- pair
        for xk in range(lo, hi + 1):
            x[k] = xk
            used = d[k] * (xk + c) ** 2
            if used > remaining:
                continue
            if k == 0:
                v = tuple(x)
                if (not zero_above or xk) and is_primitive(v):
                    found.append((canonical_sign(v), bound - (remaining - used)))
            else:
                sweep(k - 1, remaining - used, zero_above and xk == 0)
        x[k] = 0

    sweep(n - 1, bound, True)
    found.sort(key=lambda pair: pair[0])
    return found


@dataclass(frozen=True)
class MinData:
    """The arithmetic minimum and the minimal vectors, up to sign."""

    mu: Fraction
    vectors: tuple[tuple[int, ...], ...]

    @property
    def signed_count(self) -> int:
        """Cardinality when v and -v are counted separately."""
        return 2 * len(self.vectors)

    def to_json_dict(self) -> dict:
        return {"mu": str(self.mu), "vectors": [list(v) for v in self.vectors]}

    @staticmethod
    def from_json_dict(doc: dict) -> "MinData":
        return MinData(
            mu=Fraction(doc["mu"]),
            vectors=tuple(tuple(int(x) for x in v) for v in doc["vectors"]),
        )


def minimal_vectors(q: SymMatrix) -> MinData:
    """Exact mu(A) and the complete set M(A) up to sign."""
    # every e_i is primitive, so the smallest diagonal entry bounds mu
    start = min(q.rows[i][i] for i in range(q.n))
    if start <= 0:
        raise ValueError("form is not positive definite")
    below = vectors_below(q, start)
    mu = min(value for _, value in below)
    return MinData(mu=mu, vectors=tuple(v for v, value in below if value == mu))
