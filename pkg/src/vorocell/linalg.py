"""Exact rational linear algebra over small dense matrices.

Everything in this module works with ``fractions.Fraction`` (or plain
``int`` where entries are integral); there is deliberately no floating
point anywhere.  The matrices that show up downstream live in spaces of
dimension n(n+1)/2 for n <= 8, so simple dense algorithms are fine and
determinism matters more than speed.

Conventions:

* a "matrix" argument is a sequence of equal-length rows,
* symmetric matrices get their own immutable type (:class:`SymMatrix`)
  because the rest of the package passes them around as values,
* rationals serialize as ``"p/q"`` (or ``"p"`` when q == 1), which is
  exactly ``str(Fraction)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class SymMatrix:
    """Immutable symmetric matrix with exact rational entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence]) -> None:
        n = len(rows)
        table = tuple(tuple(_frac(x) for x in row) for row in rows)
        for row in table:
            if len(row) != n:
                raise ValueError("symmetric matrix must be square")
        for i in range(n):
            for j in range(i):
                if table[i][j] != table[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")
        self.n = n
        self.rows = table

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def identity(n: int) -> "SymMatrix":
        return SymMatrix([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @staticmethod
    def rank_one(v: Sequence[int]) -> "SymMatrix":
        """The rank-one form v v^T of an integer vector."""
        return SymMatrix([[Fraction(a * b) for b in v] for a in v])

    @staticmethod
    def from_upper(n: int, coords: Sequence) -> "SymMatrix":
        """Inverse of :meth:`upper`: rebuild from upper-triangle entries."""
        it = iter(coords)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = _frac(next(it))
        return SymMatrix(rows)

    # -- arithmetic ----------------------------------------------------------

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return SymMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "SymMatrix":
        c = _frac(c)
        return SymMatrix([[c * x for x in row] for row in self.rows])

    def evaluate(self, v: Sequence) -> Fraction:
        """The value v^T A v."""
        total = Fraction(0)
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = self.rows[i]
            total += vi * sum(row[j] * vj for j, vj in enumerate(v) if vj)
        return total

    def pair(self, other: "SymMatrix") -> Fraction:
        """Trace pairing <A,B> = trace(AB) = sum_ij A_ij B_ij."""
        return sum(
            a * b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def upper(self) -> tuple:
        """Upper-triangle entries, row by row; a coordinate system of
        dimension n(n+1)/2 in which entrywise equality of symmetric
        matrices becomes equality of vectors."""
        return tuple(self.rows[i][j] for i in range(self.n) for j in range(i, self.n))

    def conjugate(self, u: Sequence[Sequence[int]]) -> "SymMatrix":
        """U^T A U for a square integer matrix U."""
        n = self.n
        au = [[sum(self.rows[i][k] * u[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return SymMatrix(
            [[sum(u[k][i] * au[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)

    def integral_multiple(self) -> "SymMatrix":
        """The smallest positive rational multiple with integer entries
        of content 1 (gcd of entries)."""
        denoms = lcm(*(x.denominator for row in self.rows for x in row))
        numers = [x.numerator * (denoms // x.denominator) for row in self.rows for x in row]
        content = 0
        for a in numers:
            content = gcd(content, a)
        if content == 0:
            raise ValueError("zero matrix has no integral normalization")
        return self.scale(Fraction(denoms, content))

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"SymMatrix({[[str(x) for x in row] for row in self.rows]})"

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"n": self.n, "rows": [[str(x) for x in row] for row in self.rows]}

    @staticmethod
    def from_json_dict(doc: dict) -> "SymMatrix":
        m = SymMatrix([[Fraction(s) for s in row] for row in doc["rows"]])
        if m.n != doc["n"]:
            raise ValueError("declared dimension does not match rows")
        return m


# -- plain row-matrix helpers (integer or Fraction entries) -------------------


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    cols = len(b[0])
    inner = len(b)
    return [
        [sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a
    ]


def transpose(a: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*a)]


def identity_matrix(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matrix_rank(rows: Iterable[Sequence]) -> int:
    """Rank over the rationals, by Gaussian elimination."""
    work = [[_frac(x) for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def det(rows: Sequence[Sequence]) -> Fraction:
    work = [[_frac(x) for x in row] for row in rows]
    n = len(work)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            sign = -sign
        result *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col]:
                c = work[r][col] * inv
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    return result * sign


def invert(rows: Sequence[Sequence]) -> list:
    """Exact inverse of a square matrix; raises on singular input."""
    n = len(rows)
    work = [[_frac(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def ldlt(a: SymMatrix) -> Optional[tuple[list, list]]:
    """A = L D L^T with unit lower-triangular L and positive diagonal D.

    Returns (d, l) where d is the pivot list and l the strictly-lower
    multiplier table, or None as soon as a pivot fails to be positive:
    the decomposition doubles as the positive-definiteness test (the
    pivots are the ratios of consecutive leading principal minors).
    """
    n = a.n
    work = [list(row) for row in a.rows]
    d: list = []
    lower = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        pivot = work[k][k]
        if pivot <= 0:
            return None
        d.append(pivot)
        for i in range(k + 1, n):
            lower[i][k] = work[i][k] / pivot
        for i in range(k + 1, n):
            lik = lower[i][k]
            if lik:
                for j in range(k + 1, i + 1):
                    work[i][j] -= lik * work[j][k]
                    work[j][i] = work[i][j]
    return d, lower


def is_positive_definite(a: SymMatrix) -> bool:
    return ldlt(a) is not None


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of a linear system A x = b.

    ``solution`` is one particular solution (None when infeasible) and
    ``kernel`` a basis of the homogeneous solutions; the system has a
    unique solution exactly when ``solution`` is set and ``kernel`` is
    empty.
    """

    solution: Optional[tuple]
    kernel: tuple

    @property
    def unique(self) -> bool:
        return self.solution is not None and not self.kernel


def solve_linear(a_rows: Sequence[Sequence], b: Sequence) -> LinearSolution:
    rows = [list(map(_frac, row)) + [_frac(bi)] for row, bi in zip(a_rows, b)]
    if len(rows) != len(b):
        raise ValueError("matrix/vector size mismatch")
    ncols = len(a_rows[0]) if a_rows else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][ncols]:
            return LinearSolution(solution=None, kernel=())
    particular = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        particular[col] = rows[r][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -rows[r][f]
        kernel.append(tuple(vec))
    return LinearSolution(solution=tuple(particular), kernel=tuple(kernel))


# -- Smith normal form ---------------------------------------------------------


def smith_normal_form(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], int]:
    """Invariant factors (positive, each dividing the next) and rank.

    Pivot choice: the nonzero entry of minimal absolute value, ties
    broken by smallest row then column index, which keeps runs
    reproducible and entry growth tame.
    """
    work = [[int(x) for x in row] for row in rows]
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    factors: list[int] = []
    top = 0
    while True:
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                v = abs(work[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        work[top], work[bi] = work[bi], work[top]
        for row in work:
            row[top], row[bj] = row[bj], row[top]
        # clear the pivot row and column; restart if a remainder shrinks the pivot
        while True:
            pivot = work[top][top]
            dirty = False
            for i in range(top + 1, nrows):
                if work[i][top]:
                    q = work[i][top] // pivot
                    if q:
                        work[i] = [x - q * y for x, y in zip(work[i], work[top])]
                    if work[i][top]:
                        work[top], work[i] = work[i], work[top]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(top + 1, ncols):
                if work[top][j]:
                    q = work[top][j] // pivot
                    if q:
                        for row in work:
                            row[j] -= q * row[top]
                    if work[top][j]:
                        for row in work:
                            row[top], row[j] = row[j], row[top]
                        dirty = True
                        break
            if not dirty:
                break
        # the pivot must divide everything below-right; if not, fold the
        # offending row in and re-reduce
        pivot = work[top][top]
        offender = None
        for i in range(top + 1, nrows):
            for j in range(top + 1, ncols):
                if work[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            work[top] = [x + y for x, y in zip(work[top], work[offender])]
            continue
        factors.append(abs(pivot))
        top += 1
        if top == nrows or top == ncols:
            break
    return tuple(factors), len(factors)


# -- exact LP: membership in a finitely generated cone ------------------------


@dataclass(frozen=True)
class ConeMembership:
    """A certificate sum_i lambda_i ray_i = target with lambda >= 0."""

    coefficients: tuple
    support: frozenset


def _simplex_phase1(columns: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Minimize the sum of artificial variables for A x = b, x >= 0.

    Bland's smallest-index rule throughout (both entering and leaving),
    starting from the all-artificial basis, so the run — and therefore
    the certificate it produces — is canonical for a given input order.
    Returns the structural solution x, or None when the optimum is
    positive (the system has no nonnegative solution).
    """
    m = len(rhs)
    nstruct = len(columns)
    # rows with negative right-hand side are flipped so b >= 0
    tableau = []
    for r in range(m):
        row = [col[r] for col in columns]
        if rhs[r] < 0:
            row = [-x for x in row]
            b = -rhs[r]
        else:
            b = rhs[r]
        tableau.append(row + [Fraction(0)] * m + [b])
    for r in range(m):
        tableau[r][nstruct + r] = Fraction(1)
    basis = [nstruct + r for r in range(m)]
    # reduced costs for the phase-1 objective (sum of artificials)
    cost = [Fraction(0)] * (nstruct + m) + [Fraction(0)]
    for r in range(m):
        cost = [c - t for c, t in zip(cost, tableau[r])]
    for j in range(nstruct, nstruct + m):
        cost[j] += 1
    while True:
        entering = next((j for j in range(nstruct + m) if cost[j] < 0), None)
        if entering is None:
            break
        leaving_row = None
        best_ratio = None
        for r in range(m):
            a = tableau[r][entering]
            if a > 0:
                ratio = tableau[r][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving_row])
                ):
                    best_ratio = ratio
                    leaving_row = r
        if leaving_row is None:
            raise ArithmeticError("phase-1 objective unbounded; cannot happen")
        piv = tableau[leaving_row][entering]
        tableau[leaving_row] = [x / piv for x in tableau[leaving_row]]
        for r in range(m):
            if r != leaving_row and tableau[r][entering]:
                c = tableau[r][entering]
                tableau[r] = [x - c * y for x, y in zip(tableau[r], tableau[leaving_row])]
        if cost[entering]:
            c = cost[entering]
            cost = [x - c * y for x, y in zip(cost, tableau[leaving_row] + [])]
        basis[leaving_row] = entering
    objective = -cost[-1]
    if objective > 0:
        return None
    x = [Fraction(0)] * nstruct
    for r, var in enumerate(basis):
        if var < nstruct:
            x[var] = tableau[r][-1]
    return x


def cone_membership(rays: Sequence[SymMatrix], target: SymMatrix) -> Optional[ConeMembership]:
    """Decide target in cone(rays) inside the space of symmetric matrices.

    Returns nonnegative rational coefficients with support (indices of
    the strictly positive ones), or None when the target is outside.
    Membership is meant in the closed cone; the empty combination
    certifies the zero matrix.
    """
    if not rays:
        raise ValueError("need at least one ray")
    n = rays[0].n
    if target.n != n or any(r.n != n for r in rays):
        raise ValueError("all matrices must share a dimension")
    columns = [list(r.upper()) for r in rays]
    rhs = list(target.upper())
    x = _simplex_phase1(columns, rhs)
    if x is None:
        return None
    return ConeMembership(
        coefficients=tuple(x), support=frozenset(i for i, v in enumerate(x) if v > 0)
    )
