"""Shellability search and sphere certification for pure simplicial
complexes.

A shelling is an ordering of the maximal faces in which each new face
meets the union of its predecessors in a nonempty union of its own
codimension-one faces.  Joined with the condition that every
codimension-one face lies in exactly two maximal faces, a shelling
certifies the complex is a sphere; with boundary present it certifies
a ball.  The search is greedy with chronological backtracking under a
node budget, so "unknown" is an honest possible outcome distinct from
"not shellable" (which only an exhausted search may report).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cells import SimplicialComplex

DEFAULT_BUDGET = 10_000_000


def _facet_list(c: SimplicialComplex) -> list[frozenset[int]]:
    facets = [frozenset(f) for f in c.maximal_faces]
    sizes = {len(f) for f in facets}
    if len(sizes) != 1:
        raise ValueError(f"complex is not pure: facet sizes {sorted(sizes)}")
    return facets


def _ridge_degrees(facets: Sequence[frozenset[int]]) -> dict[frozenset[int], int]:
    out: dict[frozenset[int], int] = {}
    for f in facets:
        for v in f:
            r = f - {v}
            out[r] = out.get(r, 0) + 1
        if not f:
            raise ValueError("empty facet")
    if len(next(iter(facets))) == 1:
        # facets are single vertices; their unique ridge is the empty face
        out[frozenset()] = len(facets)
    return out


def is_pseudomanifold(c: SimplicialComplex) -> bool:
    """Every codimension-one face lies in exactly two maximal faces."""
    facets = _facet_list(c)
    return all(d == 2 for d in _ridge_degrees(facets).values())


@dataclass(frozen=True)
class Shelling:
    """A shelling order with its per-step attachment record.

    ``attachments[j]`` lists the codimension-one faces along which the
    j-th facet is glued to the union of its predecessors; it is empty
    only for j = 0.
    """

    ordering: tuple[tuple[int, ...], ...]
    attachments: tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class ShellingResult:
    status: str  # "shelled" | "not-shellable" | "unknown"
    shelling: Optional[Shelling]
    nodes_used: int


class _SearchState:
    """Incremental bookkeeping for the shelling search.

    ``glue[i]`` holds, for the unused facet i, the vertices whose
    opposite ridge is already present in the built part; a facet is a
    legal next step iff that set is nonempty and no used facet contains
    all of it.
    """

    def __init__(self, facets: list[frozenset[int]]) -> None:
        self.facets = facets
        self.sorted_facets = [tuple(sorted(f)) for f in facets]
        self.ridge_to_facets: dict[frozenset[int], list[int]] = {}
        for i, f in enumerate(facets):
            for v in f:
                self.ridge_to_facets.setdefault(f - {v}, []).append(i)
        self.glue: list[set[int]] = [set() for _ in facets]
        self.used: list[bool] = [False] * len(facets)
        self.used_by_vertex: dict[int, set[int]] = {}
        self.ridge_count: dict[frozenset[int], int] = {}
        self.order: list[int] = []

    def place(self, idx: int) -> list[tuple[int, int]]:
        f = self.facets[idx]
        self.used[idx] = True
        self.order.append(idx)
        for v in f:
            self.used_by_vertex.setdefault(v, set()).add(idx)
        glue_log: list[tuple[int, int]] = []
        for v in f:
            r = f - {v}
            c = self.ridge_count.get(r, 0)
            self.ridge_count[r] = c + 1
            if c == 0:
                for j in self.ridge_to_facets[r]:
                    if not self.used[j]:
                        w = next(iter(self.facets[j] - r))
                        if w not in self.glue[j]:
                            self.glue[j].add(w)
                            glue_log.append((j, w))
        return glue_log

    def unplace(self, idx: int, glue_log: list[tuple[int, int]]) -> None:
        f = self.facets[idx]
        for j, w in glue_log:
            self.glue[j].discard(w)
        for v in f:
            r = f - {v}
            self.ridge_count[r] -= 1
            if self.ridge_count[r] == 0:
                del self.ridge_count[r]
        for v in f:
            self.used_by_vertex[v].discard(idx)
        self.order.pop()
        self.used[idx] = False

    def is_valid_step(self, idx: int) -> bool:
        if not self.order:
            return True
        glue = self.glue[idx]
        if not glue:
            return False
        # invalid iff some used facet contains the whole glue set
        pick = min(glue, key=lambda v: len(self.used_by_vertex.get(v, ())))
        for u in self.used_by_vertex.get(pick, ()):
            if glue <= self.facets[u]:
                return False
        return True

    def candidates(self) -> list[int]:
        if not self.order:
            return sorted(range(len(self.facets)), key=lambda i: self.sorted_facets[i])
        live = [i for i in range(len(self.facets)) if not self.used[i] and self.glue[i]]
        live.sort(key=lambda i: (-len(self.glue[i]), self.sorted_facets[i]))
        return live

    def attachment(self, idx: int) -> tuple[tuple[int, ...], ...]:
        f = self.facets[idx]
        return tuple(sorted(tuple(sorted(f - {v})) for v in self.glue[idx]))


def _greedy_run(state: _SearchState, nodes: int, budget: int) -> tuple[bool, int, list]:
    """Extend the current order greedily; returns (complete, nodes, log)."""
    log = []
    total = len(state.facets)
    while len(state.order) < total and nodes < budget:
        placed = False
        for idx in state.candidates():
            if state.is_valid_step(idx):
                nodes += 1
                attach = state.attachment(idx)
                log.append((idx, state.place(idx), attach))
                placed = True
                break
        if not placed:
            break
    return len(state.order) == total, nodes, log


def find_shelling(c: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> ShellingResult:
    """Search for a shelling: greedy by most-glued-first, then a
    one-shot reversed-prefix restart, then chronological backtracking.

    "not-shellable" is reported only when the full search space was
    exhausted inside the budget; running out of budget yields
    "unknown".
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    facets = _facet_list(c)
    state = _SearchState(facets)
    nodes = 0

    done, nodes, log = _greedy_run(state, nodes, budget)
    if done:
        return _success(state, nodes, _attachments_of(log))
    if nodes >= budget:
        return ShellingResult("unknown", None, nodes)

    # reversed-prefix restart: a failed prefix, reversed, is often a
    # viable start on pseudomanifolds
    prefix = list(reversed(state.order))
    while state.order:
        idx = state.order[-1]
        glue_log = log.pop()[1]
        state.unplace(idx, glue_log)
    replay: list = []
    ok = True
    for idx in prefix:
        if nodes >= budget:
            return ShellingResult("unknown", None, nodes)
        if state.is_valid_step(idx):
            nodes += 1
            attach = state.attachment(idx)
            replay.append((idx, state.place(idx), attach))
        else:
            ok = False
            break
    if ok:
        done, nodes, tail = _greedy_run(state, nodes, budget)
        if done:
            return _success(state, nodes, _attachments_of(replay + tail))
        if nodes >= budget:
            return ShellingResult("unknown", None, nodes)
    while state.order:
        idx = state.order[-1]
        glue_log = replay.pop()[1]
        state.unplace(idx, glue_log)

    # exhaustive chronological backtracking
    frames: list[tuple[list[int], int, Optional[list], Optional[tuple]]] = []
    frames.append([state.candidates(), 0, None, None])  # type: ignore[arg-type]
    attach_stack: list[tuple[tuple[int, ...], ...]] = []
    while frames:
        frame = frames[-1]
        cands, pos = frame[0], frame[1]
        advanced = False
        while pos < len(cands):
            idx = cands[pos]
            pos += 1
            if state.is_valid_step(idx):
                if nodes >= budget:
                    frame[1] = pos
                    return ShellingResult("unknown", None, nodes)
                nodes += 1
                attach = state.attachment(idx)
                glue_log = state.place(idx)
                frame[1] = pos
                frame[2] = glue_log
                frame[3] = idx
                attach_stack.append(attach)
                if len(state.order) == len(facets):
                    ordering = tuple(state.sorted_facets[i] for i in state.order)
                    return ShellingResult(
                        "shelled", Shelling(ordering, tuple(attach_stack)), nodes
                    )
                frames.append([state.candidates(), 0, None, None])  # type: ignore[arg-type]
                advanced = True
                break
        if advanced:
            continue
        frame[1] = pos
        frames.pop()
        if frames:
            parent = frames[-1]
            state.unplace(parent[3], parent[2])  # type: ignore[arg-type]
            attach_stack.pop()
    return ShellingResult("not-shellable", None, nodes)


def _attachments_of(log: list) -> tuple:
    return tuple(entry[2] for entry in log)


def _success(state: _SearchState, nodes: int, attachments: tuple) -> ShellingResult:
    ordering = tuple(state.sorted_facets[i] for i in state.order)
    return ShellingResult("shelled", Shelling(ordering, attachments), nodes)


def verify_shelling(c: SimplicialComplex, ordering: Sequence[Sequence[int]]) -> bool:
    """Check the shelling condition from scratch for a given order.

    Independent of the search: replays the definition directly — each
    facet after the first must meet the union of its predecessors in a
    nonempty union of its own codimension-one faces.
    """
    facets = _facet_list(c)
    given = [frozenset(f) for f in ordering]
    if sorted(map(sorted, given)) != sorted(map(sorted, facets)):
        return False
    if len(given) != len(set(given)):
        return False
    built_ridges: set[frozenset[int]] = set()
    used_by_vertex: dict[int, list[frozenset[int]]] = {}
    for j, f in enumerate(given):
        if j > 0:
            glue = {v for v in f if f - {v} in built_ridges}
            if not glue:
                return False
            pick = min(glue, key=lambda v: len(used_by_vertex.get(v, ())))
            for g in used_by_vertex.get(pick, ()):
                if glue <= g:
                    return False
        for v in f:
            built_ridges.add(f - {v})
            used_by_vertex.setdefault(v, []).append(f)
    return True


@dataclass(frozen=True)
class SphereCertificate:
    status: str  # "sphere" | "ball" | "unknown" | "not-pseudomanifold"
    shelling: Optional[Shelling]
    detail: str
    nodes_used: int


def certify_sphere(c: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> SphereCertificate:
    """Combine ridge counting with a shelling search.

    A shelled complex in which every codimension-one face lies in
    exactly two facets is a sphere; with free ridges present it is a
    ball.  A ridge in three or more facets rules both out; a failed or
    exhausted search leaves the verdict honestly unknown.
    """
    try:
        facets = _facet_list(c)
    except ValueError as e:
        return SphereCertificate("not-pseudomanifold", None, str(e), 0)
    degrees = _ridge_degrees(facets)
    worst = max(degrees.values())
    if worst > 2:
        ridge = sorted(min((r for r, d in degrees.items() if d > 2), key=sorted))
        return SphereCertificate(
            "not-pseudomanifold",
            None,
            f"ridge {ridge} lies in {worst} facets",
            0,
        )
    result = find_shelling(c, budget)
    if result.status != "shelled":
        reason = (
            "search space exhausted without a shelling"
            if result.status == "not-shellable"
            else "node budget exhausted"
        )
        return SphereCertificate("unknown", None, reason, result.nodes_used)
    boundary = sum(1 for d in degrees.values() if d == 1)
    if boundary:
        return SphereCertificate(
            "ball",
            result.shelling,
            f"shelled; {boundary} boundary ridges",
            result.nodes_used,
        )
    return SphereCertificate(
        "sphere",
        result.shelling,
        "shelled; every ridge lies in exactly two facets",
        result.nodes_used,
    )
