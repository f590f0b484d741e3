"""Structural analysis: tightness checks, hyperplane dominance, sinks, k-boxes.

A form is weakly totally tight (WTT) when every 2x2 subarray spanned by two
parallel hyperplanes and two lines crossing them has a constant row or
column.  For parallel hyperplanes H_j, H_k the cells of H_j on the lines
where the two differ decide dominance: if they are constant c, H_j dominates
H_k by c.  One-sided constancy is strict dominance; the strict-dominance
outcome of a hyperplane is its proper outcome and is unique in a WTT form.
A hyperplane dominated by all its parallels is a sink.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .core import (
    CapacityError,
    GameForm,
    GameFormError,
    Hyperplane,
    fill_undefined,
    line_profile,
    project,
)


class NotWttError(GameFormError):
    """Raised where WTT is a precondition; carries the witnessing subarray."""

    def __init__(self, message: str, violation: "WttViolation"):
        super().__init__(message)
        self.violation = violation


class InvariantViolation(GameFormError):
    """A consequence of WTT failed to hold; indicates a corrupted input."""


@dataclass(frozen=True)
class WttViolation:
    """A 2x2 subarray with no constant row or column.

    ``line_a``/``line_b`` index lines row-major over the dims with
    ``direction`` removed, matching core.line_profile.
    """

    direction: int
    j: int
    k: int
    line_a: int
    line_b: int

    def profiles(self, form: GameForm) -> tuple[tuple[int, ...], ...]:
        """The four witnessing cells: (j,a), (j,b), (k,a), (k,b)."""
        out = []
        for index in (self.j, self.k):
            for line in (self.line_a, self.line_b):
                base = line_profile(form, self.direction, line)
                out.append(base[: self.direction] + (index,) + base[self.direction :])
        return tuple(out)


def find_wtt_violation(form: GameForm) -> Optional[WttViolation]:
    """First violating subarray in scan order, after filling, or None."""
    filled = fill_undefined(form)
    hit = _backend.wtt_violation(filled.cells, filled.dims)
    if hit is None:
        return None
    return WttViolation(*map(int, hit))


def is_wtt(form: GameForm) -> bool:
    return find_wtt_violation(form) is None


def require_wtt(form: GameForm) -> None:
    hit = find_wtt_violation(form)
    if hit is not None:
        raise NotWttError(
            f"form is not weakly totally tight: direction {hit.direction}, "
            f"hyperplanes {hit.j},{hit.k}, lines {hit.line_a},{hit.line_b}",
            hit,
        )


def is_tt(form: GameForm, max_players: int = 6) -> bool:
    """Totally tight: every coalition-vs-rest projection passes the 2x2 test."""
    if form.n > max_players:
        raise CapacityError(f"is_tt bound exceeded: {form.n} players > {max_players}")
    filled = fill_undefined(form)
    if filled.n == 1:
        return True
    # player 0 pinned into the coalition: g^K and g^(rest) are transposes
    for bits in range(0, 1 << (filled.n - 1)):
        coalition = [0] + [i for i in range(1, filled.n) if bits >> (i - 1) & 1]
        if len(coalition) == filled.n:
            continue
        side = project(filled, coalition)
        if _backend.wtt_violation(side.cells, side.dims) is not None:
            return False
    return True


def is_tight_two_person(form: GameForm, max_outcomes: int = 20) -> bool:
    """Tight: for every outcome set B, a row lies in B or a column avoids B."""
    if form.n != 2:
        raise GameFormError("tightness test requires a two-person form")
    if not form.is_fully_defined():
        raise GameFormError("tightness test requires a fully defined form")
    a = len(form.outcomes)
    if a > max_outcomes:
        raise CapacityError(f"tightness bound exceeded: {a} outcomes > {max_outcomes}")
    mat = form.cells.reshape(form.dims)
    row_masks = np.bitwise_or.reduce(np.uint32(1) << mat.astype(np.uint32), axis=1)
    col_masks = np.bitwise_or.reduce(np.uint32(1) << mat.astype(np.uint32), axis=0)
    all_b = np.arange(1 << a, dtype=np.uint32)
    row_ok = np.zeros(1 << a, dtype=bool)
    for rm in row_masks:
        row_ok |= (all_b & rm) == rm
    col_ok = np.zeros(1 << a, dtype=bool)
    for cm in col_masks:
        col_ok |= (all_b & cm) == 0
    return bool((row_ok | col_ok).all())


class DominanceKind(Enum):
    J_STRICTLY_DOMINATES_K = "j_strictly_dominates_k"
    K_STRICTLY_DOMINATES_J = "k_strictly_dominates_j"
    MUTUAL = "mutual"
    NOT_WTT = "not_wtt"


@dataclass(frozen=True)
class DominanceRelation:
    """Dominance between parallel hyperplanes j and k.

    ``c`` is the constant of H_j on the differing lines when that side is
    constant; ``d`` likewise for H_k.  Mutual carries both (and c != d).
    """

    j: int
    k: int
    kind: DominanceKind
    c: Optional[int] = None
    d: Optional[int] = None

    def dominates(self, index: int) -> bool:
        """Whether the hyperplane ``index`` of the pair dominates the other."""
        if self.kind is DominanceKind.MUTUAL:
            return index in (self.j, self.k)
        if self.kind is DominanceKind.J_STRICTLY_DOMINATES_K:
            return index == self.j
        if self.kind is DominanceKind.K_STRICTLY_DOMINATES_J:
            return index == self.k
        return False


@dataclass(frozen=True)
class DominanceGraph:
    """All pairwise relations among the hyperplanes of one direction."""

    direction: int
    extent: int
    relations: dict[tuple[int, int], DominanceRelation]
    proper: tuple[Optional[int], ...]
    sinks: tuple[bool, ...]

    def relation(self, j: int, k: int) -> DominanceRelation:
        if j == k:
            raise GameFormError("a hyperplane has no relation with itself")
        return self.relations[(j, k) if j < k else (k, j)]


def _direction_matrix(form: GameForm, direction: int) -> np.ndarray:
    nd = form.cells.reshape(form.dims)
    return np.moveaxis(nd, direction, 0).reshape(form.dims[direction], -1)


def classify_pair(form: GameForm, direction: int, j: int, k: int) -> DominanceRelation:
    """Dominance kind for the ordered pair (H_j, H_k) in one direction."""
    if not form.is_fully_defined():
        raise GameFormError("classify_pair requires a fully defined form; fill first")
    if not 0 <= direction < form.n:
        raise GameFormError(f"direction {direction} out of range")
    si = form.dims[direction]
    if not (0 <= j < si and 0 <= k < si):
        raise GameFormError(f"hyperplane index out of range for extent {si}")
    if j == k:
        raise GameFormError("classify_pair needs two distinct hyperplanes")
    mat = _direction_matrix(form, direction)
    return _classify(mat[j], mat[k], j, k)


def _classify(u: np.ndarray, v: np.ndarray, j: int, k: int) -> DominanceRelation:
    diff = u != v
    if not diff.any():
        raise GameFormError(
            f"hyperplanes {j} and {k} are identical; normalize first"
        )
    du = u[diff]
    dv = v[diff]
    u_const = bool((du == du[0]).all())
    v_const = bool((dv == dv[0]).all())
    if u_const and v_const:
        return DominanceRelation(j, k, DominanceKind.MUTUAL, int(du[0]), int(dv[0]))
    if u_const:
        return DominanceRelation(j, k, DominanceKind.J_STRICTLY_DOMINATES_K, c=int(du[0]))
    if v_const:
        return DominanceRelation(j, k, DominanceKind.K_STRICTLY_DOMINATES_J, d=int(dv[0]))
    return DominanceRelation(j, k, DominanceKind.NOT_WTT)


def build_dominance_graph(form: GameForm, direction: int) -> DominanceGraph:
    """Classify every pair; derive proper outcomes and sink flags.

    Raises NotWttError when some pair has no constant side, with a concrete
    2x2 witness extracted from that pair.
    """
    if not form.is_fully_defined():
        raise GameFormError("dominance graphs require a fully defined form; fill first")
    si = form.dims[direction]
    mat = _direction_matrix(form, direction)
    relations: dict[tuple[int, int], DominanceRelation] = {}
    for j in range(si - 1):
        for k in range(j + 1, si):
            rel = _classify(mat[j], mat[k], j, k)
            if rel.kind is DominanceKind.NOT_WTT:
                raise NotWttError(
                    f"hyperplanes {j},{k} in direction {direction} have no "
                    "constant side on their differing lines",
                    _pair_witness(mat, direction, j, k),
                )
            relations[(j, k)] = rel
    proper: list[Optional[int]] = []
    for j in range(si):
        candidates = set()
        for (a, b), rel in relations.items():
            if a == j and rel.kind is DominanceKind.J_STRICTLY_DOMINATES_K:
                candidates.add(rel.c)
            elif b == j and rel.kind is DominanceKind.K_STRICTLY_DOMINATES_J:
                candidates.add(rel.d)
        if len(candidates) > 1:
            raise InvariantViolation(
                f"hyperplane {j} in direction {direction} strictly dominates "
                f"with distinct outcomes {sorted(candidates)}"
            )
        proper.append(candidates.pop() if candidates else None)
    sinks = []
    for j in range(si):
        sinks.append(
            all(
                relations[(min(j, k), max(j, k))].dominates(k)
                for k in range(si)
                if k != j
            )
        )
    return DominanceGraph(direction, si, relations, tuple(proper), tuple(sinks))


def _pair_witness(mat: np.ndarray, direction: int, j: int, k: int) -> WttViolation:
    # Same selection as the kernels: first diff line, then the first later
    # diff line differing from it on both hyperplanes.
    u, v = mat[j], mat[k]
    diff = np.flatnonzero(u != v)
    for pos in range(diff.size - 1):
        la = int(diff[pos])
        rest = diff[pos + 1 :]
        hits = rest[(u[rest] != u[la]) & (v[rest] != v[la])]
        if hits.size:
            return WttViolation(direction, j, k, la, int(hits[0]))
    raise InvariantViolation("pair classified NOT_WTT has no 2x2 witness")


def build_dominance_graphs(form: GameForm) -> tuple[DominanceGraph, ...]:
    return tuple(build_dominance_graph(form, d) for d in range(form.n))


def find_sink(form: GameForm) -> Optional[Hyperplane]:
    """First sink in scan order (direction, then index); None on no-sink forms.

    A direction of extent 1 yields its sole hyperplane vacuously.
    """
    for direction in range(form.n):
        graph = build_dominance_graph(form, direction)
        for index, flag in enumerate(graph.sinks):
            if flag:
                return Hyperplane(direction, index)
    return None


KBox = tuple[tuple[int, ...], tuple[int, ...], int]


def find_k_box(form: GameForm, graphs: Sequence[DominanceGraph]) -> Optional[KBox]:
    """Exhaustive scan for a k-box; expected absent on no-sink WTT forms.

    A k-box is a pair of cells with different outcomes, differing in exactly
    k coordinates, where neither cell's outcome is the proper outcome of its
    own hyperplane in any differing direction.  Oracle-grade O(p^2 n).
    """
    if not form.is_fully_defined():
        raise GameFormError("k-box search requires a fully defined form; fill first")
    if len(graphs) != form.n:
        raise GameFormError("one dominance graph per direction is required")
    cells = form.cells
    profiles = list(form.profiles())
    for xi in range(len(profiles) - 1):
        gx = int(cells[xi])
        x = profiles[xi]
        for yi in range(xi + 1, len(profiles)):
            gy = int(cells[yi])
            if gx == gy:
                continue
            y = profiles[yi]
            diffs = [i for i in range(form.n) if x[i] != y[i]]
            ok = True
            for i in diffs:
                px = graphs[i].proper[x[i]]
                py = graphs[i].proper[y[i]]
                if px is None or py is None:
                    raise GameFormError(
                        f"hyperplane without proper outcome in direction {i}; "
                        "k-box search needs a no-sink form"
                    )
                if gx == px or gy == py:
                    ok = False
                    break
            if ok:
                return (x, y, len(diffs))
    return None


def backend_name() -> str:
    return _backend.BACKEND


__all__ = [
    "DominanceGraph",
    "DominanceKind",
    "DominanceRelation",
    "InvariantViolation",
    "KBox",
    "NotWttError",
    "WttViolation",
    "backend_name",
    "build_dominance_graph",
    "build_dominance_graphs",
    "classify_pair",
    "find_k_box",
    "find_sink",
    "find_wtt_violation",
    "is_tight_two_person",
    "is_tt",
    "is_wtt",
    "require_wtt",
]
