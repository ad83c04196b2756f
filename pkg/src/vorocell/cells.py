"""Finite regular cell complexes: chain complexes, subdivision, duality,
quotients, and exact homology.

A complex is stored purely combinatorially: every cell knows its
dimension and its signed list of codimension-one faces, and the signed
incidence structure must compose to zero (the chain condition).  All
homology is computed exactly over the integers via Smith normal form,
with a sparse unit-pivot elimination pass so that boundary matrices
with tens of thousands of cells stay tractable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .linalg import matrix_rank, smith_normal_form


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    faces: tuple[tuple[str, int], ...]  # (face id, incidence sign)


class RegularComplex:
    """A validated cell complex with signed boundary data.

    Construction checks that face references are consistent (existing
    ids, dimension exactly one lower, signs in {-1, +1}, no repeats,
    nonempty boundary in positive dimension) and that the boundary of a
    boundary vanishes.
    """

    def __init__(self, cells: Iterable[Cell]) -> None:
        self.cells: dict[str, Cell] = {}
        for cell in cells:
            if cell.id in self.cells:
                raise ValueError(f"duplicate cell id {cell.id!r}")
            self.cells[cell.id] = cell
        for cell in self.cells.values():
            if cell.dim < 0:
                raise ValueError(f"cell {cell.id!r} has negative dimension")
            if cell.dim == 0 and cell.faces:
                raise ValueError(f"vertex {cell.id!r} must not list faces")
            if cell.dim > 0 and not cell.faces:
                raise ValueError(f"cell {cell.id!r} of dimension {cell.dim} has no faces")
            seen = set()
            for fid, sign in cell.faces:
                if fid not in self.cells:
                    raise ValueError(f"cell {cell.id!r} references unknown face {fid!r}")
                if self.cells[fid].dim != cell.dim - 1:
                    raise ValueError(
                        f"face {fid!r} of {cell.id!r} has dimension "
                        f"{self.cells[fid].dim}, expected {cell.dim - 1}"
                    )
                if sign not in (-1, 1):
                    raise ValueError(f"face sign of {fid!r} in {cell.id!r} must be -1 or +1")
                if fid in seen:
                    raise ValueError(f"face {fid!r} repeated in cell {cell.id!r}")
                seen.add(fid)
        for cell in self.cells.values():
            acc: dict[str, int] = {}
            for fid, sign in cell.faces:
                for ffid, fsign in self.cells[fid].faces:
                    acc[ffid] = acc.get(ffid, 0) + sign * fsign
            bad = [k for k, v in acc.items() if v != 0]
            if bad:
                raise ValueError(
                    f"boundary of boundary of {cell.id!r} is nonzero at {bad[0]!r}"
                )
        self._closures: dict[str, frozenset[str]] = {}

    @property
    def max_dim(self) -> int:
        return max((c.dim for c in self.cells.values()), default=-1)

    def cells_of_dim(self, d: int) -> list[Cell]:
        return sorted(
            (c for c in self.cells.values() if c.dim == d), key=lambda c: c.id
        )

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.max_dim + 1)
        for c in self.cells.values():
            counts[c.dim] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * k for d, k in enumerate(self.f_vector()))

    def closure(self, cell_id: str) -> frozenset[str]:
        cached = self._closures.get(cell_id)
        if cached is not None:
            return cached
        out = {cell_id}
        stack = [cell_id]
        while stack:
            for fid, _ in self.cells[stack.pop()].faces:
                if fid not in out:
                    out.add(fid)
                    stack.append(fid)
        result = frozenset(out)
        self._closures[cell_id] = result
        return result

    def boundary_matrix(self, d: int) -> dict[tuple[int, int], int]:
        """Sparse boundary map from d-cells to (d-1)-cells.

        Entry (i, j) is the incidence of the i-th (d-1)-cell in the
        boundary of the j-th d-cell, both in sorted-id order.
        """
        rows = {c.id: i for i, c in enumerate(self.cells_of_dim(d - 1))}
        out: dict[tuple[int, int], int] = {}
        for j, cell in enumerate(self.cells_of_dim(d)):
            for fid, sign in cell.faces:
                out[(rows[fid], j)] = sign
        return out

    def is_regular(self) -> bool:
        """Whether all pairwise closure intersections have a unique
        maximal cell — the condition that makes barycentric and dual
        constructions behave like their geometric counterparts."""
        ids = sorted(self.cells)
        for a, b in combinations(ids, 2):
            common = self.closure(a) & self.closure(b)
            if not common:
                continue
            maximal = [
                c
                for c in common
                if not any(c != d and c in self.closure(d) for d in common)
            ]
            if len(maximal) != 1:
                return False
        return True

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        ordered = sorted(self.cells.values(), key=lambda c: (c.dim, c.id))
        return {
            "format": 1,
            "dims": list(self.f_vector()),
            "cells": [
                {
                    "id": c.id,
                    "dim": c.dim,
                    "faces": [{"id": fid, "sign": s} for fid, s in c.faces],
                }
                for c in ordered
            ],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "RegularComplex":
        if doc.get("format") != 1:
            raise ValueError("unsupported complex format")
        cells = [
            Cell(
                id=str(entry["id"]),
                dim=int(entry["dim"]),
                faces=tuple((str(f["id"]), int(f["sign"])) for f in entry["faces"]),
            )
            for entry in doc["cells"]
        ]
        cx = RegularComplex(cells)
        if "dims" in doc and list(cx.f_vector()) != list(doc["dims"]):
            raise ValueError("cell counts disagree with the dims header")
        return cx


class SimplicialComplex:
    """An abstract simplicial complex given by its maximal faces."""

    def __init__(self, maximal_faces: Iterable[Iterable[int]]) -> None:
        cleaned = set()
        for f in maximal_faces:
            fs = frozenset(int(v) for v in f)
            if not fs:
                raise ValueError("empty face")
            cleaned.add(fs)
        # drop faces contained in a strictly larger one; only faces of
        # greater cardinality can contain them, so pure inputs skip this
        by_size: dict[int, list[frozenset[int]]] = {}
        for fs in cleaned:
            by_size.setdefault(len(fs), []).append(fs)
        larger: list[frozenset[int]] = []
        kept: list[frozenset[int]] = []
        for size in sorted(by_size, reverse=True):
            for fs in by_size[size]:
                if not any(fs < g for g in larger):
                    kept.append(fs)
            larger.extend(by_size[size])
        self.maximal_faces = tuple(sorted(tuple(sorted(f)) for f in kept))
        if not self.maximal_faces:
            raise ValueError("complex has no faces")
        self._faces: Optional[dict[int, list[tuple[int, ...]]]] = None

    def faces(self) -> dict[int, list[tuple[int, ...]]]:
        """All faces grouped by dimension, each sorted lexicographically."""
        if self._faces is None:
            seen: set[frozenset[int]] = set()
            for f in self.maximal_faces:
                fs = frozenset(f)
                for k in range(1, len(f) + 1):
                    for sub in combinations(f, k):
                        seen.add(frozenset(sub))
            grouped: dict[int, list[tuple[int, ...]]] = {}
            for fs in seen:
                t = tuple(sorted(fs))
                grouped.setdefault(len(t) - 1, []).append(t)
            for d in grouped:
                grouped[d].sort()
            self._faces = grouped
        return self._faces

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.maximal_faces) - 1

    def f_vector(self) -> tuple[int, ...]:
        faces = self.faces()
        return tuple(len(faces.get(d, [])) for d in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * k for d, k in enumerate(self.f_vector()))

    def to_regular(self) -> RegularComplex:
        """Signed cell structure with the sorted-vertex orientation: the
        face dropping the i-th vertex enters with sign (-1)^i."""

        def name(simplex: tuple[int, ...]) -> str:
            return ".".join(str(v) for v in simplex)

        cells = []
        for d, simplices in sorted(self.faces().items()):
            for s in simplices:
                faces = tuple(
                    (name(s[:i] + s[i + 1 :]), (-1) ** i) for i in range(len(s))
                ) if d > 0 else ()
                cells.append(Cell(id=name(s), dim=d, faces=faces))
        return RegularComplex(cells)

    def subdivide(self) -> "SimplicialComplex":
        return barycentric_subdivision(self.to_regular())

    def to_json_dict(self) -> dict:
        return {
            "format": 1,
            "maximal_faces": [list(f) for f in self.maximal_faces],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "SimplicialComplex":
        if doc.get("format") != 1:
            raise ValueError("unsupported complex format")
        return SimplicialComplex(doc["maximal_faces"])


def barycentric_subdivision(cx: RegularComplex) -> SimplicialComplex:
    """The order complex of the face poset: one vertex per cell, one
    maximal simplex per maximal chain of proper face relations.

    Vertices are numbered by the (dim, id) sort of the original cells,
    so the result is deterministic."""
    order = sorted(cx.cells.values(), key=lambda c: (c.dim, c.id))
    index = {c.id: i for i, c in enumerate(order)}
    has_coface = set()
    for c in cx.cells.values():
        for fid, _ in c.faces:
            has_coface.add(fid)
    tops = [c.id for c in cx.cells.values() if c.id not in has_coface]
    chains: list[tuple[int, ...]] = []

    def descend(cell_id: str, acc: list[int]) -> None:
        acc.append(index[cell_id])
        cell = cx.cells[cell_id]
        if cell.dim == 0:
            chains.append(tuple(sorted(acc)))
        else:
            for fid, _ in cell.faces:
                descend(fid, acc)
        acc.pop()

    for t in sorted(tops):
        descend(t, [])
    return SimplicialComplex(chains)


def dual_cells(cx: RegularComplex, selected_ids: Iterable[str]) -> RegularComplex:
    """The dual complex on a coface-closed selection of cells.

    The dual of a selected cell keeps its id but has complementary
    dimension; its faces are the duals of the selected cells covering
    it, with the incidence transposed.  Requires the selection to be
    closed upward (every coface of a selected cell selected), which is
    exactly what makes the transposed incidence a chain complex.
    """
    selected = set(selected_ids)
    unknown = selected - set(cx.cells)
    if unknown:
        raise ValueError(f"unknown cell id {sorted(unknown)[0]!r}")
    covers: dict[str, list[tuple[str, int]]] = {s: [] for s in selected}
    for cell in cx.cells.values():
        for fid, sign in cell.faces:
            if fid in selected:
                if cell.id not in selected:
                    raise ValueError(
                        f"selection is not coface-closed: {cell.id!r} covers "
                        f"{fid!r} but is not selected"
                    )
                covers[fid].append((cell.id, sign))
    top = max(cx.cells[s].dim for s in selected)
    cells = [
        Cell(
            id=s,
            dim=top - cx.cells[s].dim,
            faces=tuple(sorted(covers[s])),
        )
        for s in sorted(selected)
    ]
    return RegularComplex(cells)


# -- group actions and quotients -------------------------------------------------


def _parity(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting seq (distinct entries)."""
    inv = sum(
        1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j]
    )
    return -1 if inv % 2 else 1


class GroupAction:
    """A finite group of signed cell automorphisms.

    Input maps are treated as generators; the closure under composition
    is computed here.  Each element sends a cell id to an (image id,
    orientation sign) pair.
    """

    MAX_ELEMENTS = 20_000

    def __init__(self, generators: Sequence[Mapping[str, tuple[str, int]]]) -> None:
        if not generators:
            raise ValueError("need at least one generator")
        ids = sorted(generators[0])
        for g in generators:
            if sorted(g) != ids:
                raise ValueError("generators act on different cell sets")
            images = sorted(v for v, _ in g.values())
            if images != ids:
                raise ValueError("generator is not a bijection on cells")
            if any(s not in (-1, 1) for _, s in g.values()):
                raise ValueError("orientation signs must be -1 or +1")
        identity = {i: (i, 1) for i in ids}
        elements = {self._key(identity): identity}
        frontier = [identity]
        gens = [dict(g) for g in generators]
        while frontier:
            base = frontier.pop()
            for g in gens:
                composed = {}
                for cid, (mid, s) in base.items():
                    mid2, s2 = g[mid]
                    composed[cid] = (mid2, s * s2)
                key = self._key(composed)
                if key not in elements:
                    if len(elements) >= self.MAX_ELEMENTS:
                        raise ValueError("group closure exceeds the element cap")
                    elements[key] = composed
                    frontier.append(composed)
        self.elements: tuple[dict[str, tuple[str, int]], ...] = tuple(
            elements[k] for k in sorted(elements)
        )

    @staticmethod
    def _key(mapping: Mapping[str, tuple[str, int]]) -> tuple:
        return tuple(sorted((k, v[0], v[1]) for k, v in mapping.items()))

    def __len__(self) -> int:
        return len(self.elements)

    @staticmethod
    def from_vertex_permutations(
        simplicial: SimplicialComplex, perms: Sequence[Mapping[int, int]]
    ) -> "GroupAction":
        """Lift vertex permutations to signed maps on the cells of
        ``simplicial.to_regular()``, with the sort-parity sign."""
        all_faces = [s for d, group in sorted(simplicial.faces().items()) for s in group]
        face_set = {f: ".".join(map(str, f)) for f in all_faces}
        vertices = {v for f in all_faces for v in f}
        gens = []
        for p in perms:
            if not vertices <= set(p):
                raise ValueError("vertex map does not cover all vertices")
            mapping = {}
            for f, cid in face_set.items():
                image = tuple(p[v] for v in f)
                target = tuple(sorted(image))
                if target not in face_set:
                    raise ValueError(
                        f"vertex map does not preserve the complex at {f}"
                    )
                mapping[cid] = (face_set[target], _parity(image))
            gens.append(mapping)
        return GroupAction(gens)


@dataclass(frozen=True)
class QuotientResult:
    complex: RegularComplex
    regular: bool
    orbit_of: dict[str, str]  # original cell id -> orbit representative id


def quotient(cx: RegularComplex, action: GroupAction) -> QuotientResult:
    """The quotient complex of a free, boundary-compatible action.

    Validates that every element is a signed automorphism of the
    complex, that no non-identity element fixes a cell (naming the
    offender otherwise), and that each quotient incidence lands in
    {-1, 0, +1}.  The result carries the regularity verdict of the
    quotient, since free quotients of regular complexes need not stay
    regular.
    """
    ids = sorted(cx.cells)
    for g in action.elements:
        if sorted(g) != ids:
            raise ValueError("action is defined on a different cell set")
        for cid, (mid, sign) in g.items():
            src, dst = cx.cells[cid], cx.cells[mid]
            if src.dim != dst.dim:
                raise ValueError(f"map sends {cid!r} to a different dimension")
            expected = {}
            for fid, s in src.faces:
                f_img, f_sign = g[fid]
                expected[f_img] = expected.get(f_img, 0) + sign * s * f_sign
            actual = {fid: s for fid, s in dst.faces}
            if expected != actual:
                raise ValueError(
                    f"map is not a chain automorphism at cell {cid!r}"
                )

    identity_key = tuple(sorted((i, i, 1) for i in ids))
    for g in action.elements:
        if GroupAction._key(g) == identity_key:
            continue
        for cid, (mid, _) in g.items():
            if mid == cid:
                raise ValueError(
                    f"action is not free: cell {cid!r} is fixed by a "
                    f"non-identity element"
                )

    rep_of: dict[str, str] = {}
    transport: dict[str, tuple[str, int]] = {}  # cell -> (rep, sign moving rep onto it)
    for cid in ids:
        if cid in rep_of:
            continue
        rep = min(g[cid][0] for g in action.elements)
        # freeness makes h -> h(rep) a bijection onto the orbit, so each
        # member receives exactly one transport sign
        for h in action.elements:
            member, sign = h[rep]
            rep_of[member] = rep
            transport[member] = (rep, sign)

    new_cells = []
    for cid in sorted(set(rep_of.values())):
        cell = cx.cells[cid]
        acc: dict[str, int] = {}
        for fid, s in cell.faces:
            rep, carry = transport[fid]
            acc[rep] = acc.get(rep, 0) + s * carry
        faces = []
        for rep, coeff in sorted(acc.items()):
            if coeff == 0:
                continue
            if coeff not in (-1, 1):
                raise ValueError(
                    f"quotient incidence of {rep!r} in the orbit of {cid!r} "
                    f"is {coeff}, outside -1..1"
                )
            faces.append((rep, coeff))
        new_cells.append(Cell(id=cid, dim=cell.dim, faces=tuple(faces)))
    result = RegularComplex(new_cells)
    return QuotientResult(
        complex=result, regular=result.is_regular(), orbit_of=dict(rep_of)
    )


# -- homology ---------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]  # invariant factors > 1, per degree
    rational: bool


def _sparse_reduce(
    entries: Mapping[tuple[int, int], int], want_factors: bool
) -> tuple[int, list[int]]:
    """Rank (and invariant factors) of a sparse integer matrix.

    Pivots on +-1 entries chosen by the Markowitz fill estimate, which
    splits off unit invariant factors one at a time; whatever survives
    without a unit entry goes through the dense Smith routine.  For
    boundary matrices this residual is tiny (it is where torsion
    lives).
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in entries.items():
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
    # Candidate unit pivots live in a lazy heap keyed by the Markowitz
    # fill estimate.  Stale entries (vanished, no longer +-1, or with an
    # outdated cost) are re-checked on pop; any +-1 pivot is exact, so
    # staleness can only affect fill, never correctness.
    heap: list[tuple[int, int, int]] = []
    for r, row in rows.items():
        rlen = len(row)
        for c, v in row.items():
            if v in (-1, 1):
                heap.append(((rlen - 1) * (len(cols[c]) - 1), r, c))
    heapq.heapify(heap)
    units = 0
    while heap:
        cost, pr, pc = heapq.heappop(heap)
        prow = rows.get(pr)
        if prow is None or prow.get(pc) not in (-1, 1):
            continue
        current = (len(prow) - 1) * (len(cols[pc]) - 1)
        if current != cost:
            heapq.heappush(heap, (current, pr, pc))
            continue
        pivot = prow[pc]
        for r in list(cols[pc]):
            if r == pr:
                continue
            factor = rows[r][pc] * pivot  # pivot is +-1, so this is exact
            row = rows[r]
            for c, v in prow.items():
                nv = row.get(c, 0) - factor * v
                if nv:
                    row[c] = nv
                    cols.setdefault(c, set()).add(r)
                    if nv in (-1, 1):
                        heapq.heappush(
                            heap, ((len(row) - 1) * (len(cols[c]) - 1), r, c)
                        )
                else:
                    if c in row:
                        del row[c]
                        cols[c].discard(r)
            if not row:
                del rows[r]
        for c in prow:
            cols[c].discard(pr)
            if not cols[c]:
                del cols[c]
        del rows[pr]
        units += 1
    if not rows:
        return units, [1] * units
    live_rows = sorted(rows)
    live_cols = sorted({c for row in rows.values() for c in row})
    cmap = {c: i for i, c in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for i, r in enumerate(live_rows):
        for c, v in rows[r].items():
            dense[i][cmap[c]] = v
    if want_factors:
        factors, rank = smith_normal_form(dense)
        return units + rank, [1] * units + list(factors)
    rank = matrix_rank([[Fraction(v) for v in row] for row in dense])
    return units + rank, []


def homology(
    cx: "RegularComplex | SimplicialComplex", rational: bool = False
) -> HomologyResult:
    """Homology of the cell complex: Betti numbers, and over the
    integers also the torsion invariant factors in each degree."""
    if isinstance(cx, SimplicialComplex):
        cx = cx.to_regular()
    top = cx.max_dim
    counts = cx.f_vector()
    ranks = [0] * (top + 2)
    factors: list[list[int]] = [[] for _ in range(top + 2)]
    for d in range(1, top + 1):
        ranks[d], factors[d] = _sparse_reduce(
            cx.boundary_matrix(d), want_factors=not rational
        )
    betti = tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1))
    torsion = tuple(
        tuple(f for f in factors[d + 1] if f > 1) for d in range(top + 1)
    )
    return HomologyResult(betti=betti, torsion=torsion, rational=rational)
