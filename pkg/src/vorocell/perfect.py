"""Perfect quadratic forms and the cones they cut out.

A positive-definite form A with arithmetic minimum mu and minimal
vectors M(A) is *perfect* when the linear system

    m^T Z m = mu   for every m in M(A)

determines Z uniquely among symmetric matrices.  Each perfect form spans
a full-dimensional "domain" cone generated by the rank-one matrices
q(m) = mm^T; these cones tile the positive-definite cone, neighboring
domains share facets, and walking the facet graph enumerates all
perfect forms up to unimodular equivalence.  Everything here is exact
rational arithmetic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .linalg import (
    SymMatrix,
    det,
    invert,
    is_positive_definite,
    matrix_rank,
    solve_linear,
    cone_membership,
)
from .minvec import MinData, minimal_vectors, vectors_below


class NeighborStepError(RuntimeError):
    """The contiguity step across a facet failed to produce a form."""


# -- perfection ----------------------------------------------------------------


@dataclass(frozen=True)
class PerfectionResult:
    perfect: bool
    kernel: tuple[SymMatrix, ...]  # directions left free when not perfect

    def __bool__(self) -> bool:
        return self.perfect


def _value_row(m: Sequence[int], n: int) -> list[int]:
    """Coefficients of z -> m^T Z m in the upper-triangle coordinates."""
    row = []
    for i in range(n):
        for j in range(i, n):
            row.append(m[i] * m[i] if i == j else 2 * m[i] * m[j])
    return row


def is_perfect(q: SymMatrix, min_data: Optional[MinData] = None) -> PerfectionResult:
    """Rank test of the minimal-vector value system, with kernel certificate."""
    if not is_positive_definite(q):
        raise ValueError("form is not positive definite")
    md = min_data if min_data is not None else minimal_vectors(q)
    rows = [_value_row(m, q.n) for m in md.vectors]
    rhs = [md.mu] * len(rows)
    sol = solve_linear(rows, rhs)
    assert sol.solution is not None  # q itself always solves its own system
    kernel = tuple(SymMatrix.from_upper(q.n, vec) for vec in sol.kernel)
    return PerfectionResult(perfect=not kernel, kernel=kernel)


# -- domain cones and their facets ---------------------------------------------


@dataclass(frozen=True)
class RankOneRay:
    vector: tuple[int, ...]
    matrix: SymMatrix

    @staticmethod
    def from_vector(v: Sequence[int]) -> "RankOneRay":
        v = tuple(int(x) for x in v)
        return RankOneRay(vector=v, matrix=SymMatrix.rank_one(v))


@dataclass(frozen=True)
class Facet:
    """A codimension-1 face of a domain cone.

    ``normal`` pairs to zero exactly on the supporting rays and is
    positive on the rest (inward normal under the trace pairing),
    scaled to integer entries of content 1.
    """

    normal: SymMatrix
    ray_support: tuple[int, ...]


def _reduce_content(vec: list[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    return tuple(x // g for x in vec)


def _pairing_vector(m: SymMatrix) -> tuple[int, ...]:
    """Upper-triangle coordinates of <m, .> (off-diagonals doubled)."""
    out = []
    for i in range(m.n):
        for j in range(i, m.n):
            x = m.rows[i][j] if i == j else 2 * m.rows[i][j]
            if x.denominator != 1:
                raise ValueError("expected integral matrix")
            out.append(x.numerator)
    return tuple(out)


def facets_of_cone(ray_matrices: Sequence[SymMatrix]) -> list[Facet]:
    """All facets of cone(rays), by double description of the dual cone.

    The extreme rays of {y : <r_i, y> >= 0 for all i} are exactly the
    inward facet normals of the primal cone; they are built up one
    halfspace at a time from a simplicial start, with the standard
    combinatorial adjacency test deciding which generator pairs may be
    combined.  Requires the rays to span (a full-dimensional cone).
    """
    if not ray_matrices:
        raise ValueError("need at least one ray")
    n = ray_matrices[0].n
    dim = n * (n + 1) // 2
    halfspaces = [_pairing_vector(r) for r in ray_matrices]
    # greedy choice of dim independent halfspaces for the simplicial start
    basis_idx: list[int] = []
    chosen: list[tuple[int, ...]] = []
    for i, h in enumerate(halfspaces):
        if matrix_rank(chosen + [h]) > len(chosen):
            basis_idx.append(i)
            chosen.append(h)
        if len(chosen) == dim:
            break
    if len(chosen) < dim:
        raise ValueError("ray set is not full-dimensional")
    inv = invert(chosen)  # columns pair to delta_ij against the chosen rows
    generators = []
    for j in range(dim):
        col = [inv[r][j] for r in range(dim)]
        denom = 1
        for x in col:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        generators.append(_reduce_content([int(x * denom) for x in col]))

    def dot(h: tuple[int, ...], g: tuple[int, ...]) -> int:
        return sum(a * b for a, b in zip(h, g))

    processed = list(basis_idx)
    tight = [frozenset(i for i in processed if dot(halfspaces[i], g) == 0) for g in generators]
    for idx in range(len(halfspaces)):
        if idx in basis_idx:
            continue
        h = halfspaces[idx]
        vals = [dot(h, g) for g in generators]
        if all(v >= 0 for v in vals):
            processed.append(idx)
            tight = [
                t | {idx} if v == 0 else t for t, v in zip(tight, vals)
            ]
            continue
        keep = [g for g, v in zip(generators, vals) if v >= 0]
        keep_tight = [t | ({idx} if v == 0 else set()) for t, v in zip(tight, vals) if v >= 0]
        new_gens: list[tuple[int, ...]] = []
        pos = [(g, t, v) for g, t, v in zip(generators, tight, vals) if v > 0]
        neg = [(g, t, v) for g, t, v in zip(generators, tight, vals) if v < 0]
        for gp, tp, vp in pos:
            for gm, tm, vm in neg:
                common = tp & tm
                # adjacency: no third generator is tight on everything both are
                if any(
                    common <= t2 and g2 is not gp and g2 is not gm
                    for g2, t2 in zip(generators, tight)
                ):
                    continue
                combo = [vp * a - vm * b for a, b in zip(gm, gp)]
                new_gens.append(_reduce_content(combo))
        processed.append(idx)
        generators = keep
        tight = keep_tight
        for g in new_gens:
            if g not in generators:
                generators.append(g)
                tight.append(
                    frozenset(i for i in processed if dot(halfspaces[i], g) == 0)
                )
    facets = []
    for g in generators:
        support = tuple(
            i for i, h in enumerate(halfspaces) if dot(h, g) == 0
        )
        normal = SymMatrix.from_upper(n, g)
        facets.append(Facet(normal=normal, ray_support=support))
    facets.sort(key=lambda f: f.ray_support)
    return facets


# -- perfect form records --------------------------------------------------------


class PerfectFormRecord:
    """A perfect form with its minimal vectors, rays, and (lazily) facets.

    The record keeps two scalings of the same form: ``form`` normalized
    to mu = 1, and ``integral_form``, the smallest integer multiple with
    content 1, on which all combinatorial work happens.
    """

    def __init__(self, form: SymMatrix, _trusted: bool = False) -> None:
        integral = form.integral_multiple()
        md = minimal_vectors(integral)
        if not _trusted and not is_perfect(integral, md).perfect:
            raise ValueError("form is not perfect")
        self.integral_form = integral
        self.min_data = md
        self.form = integral.scale(1 / md.mu)
        self.rays = tuple(RankOneRay.from_vector(v) for v in md.vectors)
        self._facets: Optional[tuple[Facet, ...]] = None
        self._invariant: Optional[tuple] = None

    @property
    def n(self) -> int:
        return self.integral_form.n

    @property
    def facets(self) -> tuple[Facet, ...]:
        if self._facets is None:
            self._facets = tuple(facets_of_cone([r.matrix for r in self.rays]))
        return self._facets

    def domain_cone(self) -> tuple[RankOneRay, ...]:
        return self.rays

    def invariant_key(self) -> tuple:
        """Cheap unimodular invariants used to pre-filter equivalence."""
        if self._invariant is not None:
            return self._invariant
        rows = self.integral_form.rows
        n = self.n
        images = [
            [sum(rows[i][j] * v[j] for j in range(n)) for i in range(n)]
            for v in self.min_data.vectors
        ]
        products = sorted(
            abs(sum(a[i] * im[i] for i in range(n)))
            for k, a in enumerate(self.min_data.vectors)
            for im in images[k + 1 :]
        )
        self._invariant = (
            self.min_data.mu,
            len(self.min_data.vectors),
            det(rows),
            tuple(products),
        )
        return self._invariant


def a_root_form(n: int) -> SymMatrix:
    """The Gram matrix of the A_n root lattice (2 on, -1 off the diagonal)."""
    if n < 1:
        raise ValueError("n must be positive")
    return SymMatrix(
        [
            [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)]
            for i in range(n)
        ]
    )


# -- contiguity ------------------------------------------------------------------


def neighbor(record: PerfectFormRecord, facet: Facet) -> SymMatrix:
    """The second perfect form whose domain shares the given facet.

    Walks Q + rho * R outward for the facet normal R: rho grows until
    fresh vectors drop to the minimum; the smallest positive crossing
    parameter (mu - Q[v]) / R[v] over vectors with R[v] < 0 is exact.
    """
    q = record.integral_form
    mu = record.min_data.mu
    r = facet.normal
    old = set(record.min_data.vectors)
    lo = Fraction(0)
    step = Fraction(1)
    for _ in range(200):
        cur = lo + step
        candidate = q + r.scale(cur)
        if not is_positive_definite(candidate):
            step /= 2
            continue
        fresh = [
            v
            for v, _val in vectors_below(candidate, mu)
            if v not in old and r.evaluate(v) < 0
        ]
        if fresh:
            rho = min((mu - q.evaluate(v)) / r.evaluate(v) for v in fresh)
            return q + r.scale(rho)
        lo = cur
        step *= 2
    raise NeighborStepError(
        f"no contiguous positive-definite form along facet {facet.ray_support}"
    )


# -- unimodular equivalence -------------------------------------------------------


def are_equivalent(a: SymMatrix, b: SymMatrix) -> Optional[list[list[int]]]:
    """A unimodular U with U^T A U = B, or None.  Scaling is not quotiented.

    Backtracks over the columns of U: column j must be a vector of
    A-value b_jj, and pairs of columns must reproduce the off-diagonal
    entries of B, so candidates come from one short-vector enumeration.
    """
    if a.n != b.n:
        return None
    if not is_positive_definite(a) or not is_positive_definite(b):
        raise ValueError("both forms must be positive definite")
    if det(a.rows) != det(b.rows):
        return None
    n = a.n
    targets = [b.rows[j][j] for j in range(n)]
    enumerated = vectors_below(a, max(targets))
    by_value: dict[Fraction, list[tuple[int, ...]]] = {}
    for v, val in enumerated:
        by_value.setdefault(val, []).extend([v, tuple(-x for x in v)])
    candidates = []
    for t in targets:
        pool = sorted(by_value.get(t, []))
        if not pool:
            return None
        candidates.append(pool)

    a_rows = a.rows
    cols: list[tuple[int, ...]] = []
    images: list[list[Fraction]] = []  # A * column, cached for inner products

    def place(j: int) -> bool:
        for v in candidates[j]:
            av = [sum(a_rows[i][k] * v[k] for k in range(n)) for i in range(n)]
            if all(
                sum(av[i] * u[i] for i in range(n)) == b.rows[j][jj]
                for jj, u in enumerate(cols)
            ):
                cols.append(v)
                images.append(av)
                if j + 1 == n or place(j + 1):
                    return True
                cols.pop()
                images.pop()
        return False

    if not place(0):
        return None
    u = [[cols[j][i] for j in range(n)] for i in range(n)]
    assert a.conjugate(u) == b and abs(det(u)) == 1
    return u


def unimodular_inverse(u: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = invert(u)
    out = [[int(x) for x in row] for row in inv]
    if any(x != y for row, irow in zip(inv, out) for x, y in zip(row, irow)):
        raise ValueError("matrix is not unimodular")
    return out


# -- enumeration and the on-disk catalog -------------------------------------------


class Catalog:
    """Perfect-form classes of one dimension with their facet graph."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.records: list[PerfectFormRecord] = []
        self.neighbors: list[Optional[list[int]]] = []  # per class, per facet
        self.complete = False
        self._witnesses: dict[tuple[int, int], tuple[int, list[list[int]]]] = {}

    def __len__(self) -> int:
        return len(self.records)

    def classify(self, record: PerfectFormRecord) -> tuple[Optional[int], Optional[list[list[int]]]]:
        """Match a record against the known classes: (index, witness U)
        with U^T . class_form . U = record_form, or (None, None)."""
        key = record.invariant_key()
        for i, known in enumerate(self.records):
            if known.invariant_key() != key:
                continue
            u = are_equivalent(known.integral_form, record.integral_form)
            if u is not None:
                return i, u
        return None, None

    def add(self, record: PerfectFormRecord) -> int:
        self.records.append(record)
        self.neighbors.append(None)
        return len(self.records) - 1

    def edge(self, class_index: int, facet_index: int) -> tuple[int, list[list[int]]]:
        """Neighbor class across one facet, with the witness U such that
        U^T (neighbor class form) U = the literal contiguous form."""
        cached = self._witnesses.get((class_index, facet_index))
        if cached is not None:
            return cached
        rec = self.records[class_index]
        contiguous = PerfectFormRecord(neighbor(rec, rec.facets[facet_index]))
        j, u = self.classify(contiguous)
        if j is None:
            raise ValueError("catalog is incomplete: unknown neighbor class")
        stored = self.neighbors[class_index]
        if stored is not None and stored[facet_index] != j:
            raise AssertionError("neighbor class disagrees with stored catalog edge")
        result = (j, u)
        self._witnesses[(class_index, facet_index)] = result
        return result

    # -- serialization ------------------------------------------------------

    @staticmethod
    def _record_core(record: PerfectFormRecord) -> dict:
        return {
            "form": record.integral_form.to_json_dict(),
            "mu": str(record.min_data.mu),
            "min_vectors": [list(v) for v in record.min_data.vectors],
        }

    @staticmethod
    def _record_hash(core: dict) -> str:
        blob = json.dumps(core, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json_dict(self) -> dict:
        classes = []
        for record, nb in zip(self.records, self.neighbors):
            core = self._record_core(record)
            entry = dict(core)
            entry["neighbors"] = list(nb) if nb is not None else None
            entry["hash"] = self._record_hash(core)
            classes.append(entry)
        return {
            "format": 1,
            "n": self.n,
            "complete": self.complete,
            "classes": classes,
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "Catalog":
        if doc.get("format") != 1:
            raise ValueError("unsupported catalog format")
        cat = Catalog(int(doc["n"]))
        for entry in doc["classes"]:
            core = {k: entry[k] for k in ("form", "mu", "min_vectors")}
            if Catalog._record_hash(core) != entry["hash"]:
                raise ValueError("catalog record hash mismatch")
            record = PerfectFormRecord(SymMatrix.from_json_dict(entry["form"]))
            if [list(v) for v in record.min_data.vectors] != entry["min_vectors"]:
                raise ValueError("catalog record minimal vectors mismatch")
            if str(record.min_data.mu) != entry["mu"]:
                raise ValueError("catalog record minimum mismatch")
            cat.add(record)
            cat.neighbors[-1] = (
                list(entry["neighbors"]) if entry["neighbors"] is not None else None
            )
        cat.complete = bool(doc["complete"])
        return cat


def enumerate_perfect_forms(
    n: int,
    limit: Optional[int] = None,
    seed: Optional[SymMatrix] = None,
    reverse_worklist: bool = False,
    catalog: Optional[Catalog] = None,
) -> Catalog:
    """All perfect-form classes in dimension n, by facet-graph traversal.

    Starting from the A_n root form (or a caller-provided seed), expand
    every facet of every discovered class with the contiguity step and
    keep one representative per equivalence class.  ``limit`` caps the
    class count; hitting it leaves the catalog flagged incomplete.
    Passing a partially expanded ``catalog`` resumes it in place.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if catalog is None:
        catalog = Catalog(n)
        catalog.add(PerfectFormRecord(seed if seed is not None else a_root_form(n)))
    pending = [i for i, nb in enumerate(catalog.neighbors) if nb is None]
    while pending:
        index = pending.pop(-1 if reverse_worklist else 0)
        record = catalog.records[index]
        edges = []
        for fi, facet in enumerate(record.facets):
            contiguous = PerfectFormRecord(neighbor(record, facet))
            found, u = catalog.classify(contiguous)
            if found is None:
                if limit is not None and len(catalog) >= limit:
                    catalog.neighbors[index] = None
                    catalog.complete = False
                    return catalog
                found = catalog.add(contiguous)
                u = identity_like(n)
                pending.append(found)
            catalog._witnesses[(index, fi)] = (found, u)
            edges.append(found)
        catalog.neighbors[index] = edges
    catalog.complete = True
    return catalog


def identity_like(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]
