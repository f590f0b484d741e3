"""Constructive assignment for weakly totally tight forms, plus the verifier.

The recursion mirrors the structure of such forms: after stripping constant
and duplicate hyperplanes, either some hyperplane is dominated by all of its
parallels (a sink), in which case every parallel covers its side with its
dominance outcome and the sink's subform is solved recursively, or no sink
exists, in which case every hyperplane outside the last direction covers
with its proper outcome and each last-direction hyperplane picks up the
single outcome its leftover cells share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import (
    DominanceGraph,
    DominanceKind,
    DominanceRelation,
    InvariantViolation,
    build_dominance_graphs,
    require_wtt,
)
from .core import (
    Assignment,
    FILLER_NAME,
    GameForm,
    GameFormError,
    UNDEFINED,
    expand_assignment,
    fill_undefined,
    normalize,
)

Lanes = list[list[Optional[int]]]


@dataclass(frozen=True)
class AssignmentCertificate:
    """A verified assignment plus the decisions that produced it."""

    assignment: Assignment
    trace: tuple[str, ...]


def verify(form: GameForm, assignment: Sequence[Sequence[Optional[int]]]) -> bool:
    """True iff every defined cell is covered by some assigned hyperplane.

    A hyperplane covers a cell when its assigned outcome equals the cell's
    outcome.  Unassigned (None) entries cover nothing; undefined cells need
    no cover.
    """
    if len(assignment) != form.n:
        raise GameFormError(
            f"assignment has {len(assignment)} players, form has {form.n}"
        )
    for i, lane in enumerate(assignment):
        if len(lane) != form.dims[i]:
            raise GameFormError(
                f"player {i}: {len(lane)} entries for extent {form.dims[i]}"
            )
        for v in lane:
            if v is not None and not 0 <= int(v) < len(form.outcomes):
                raise GameFormError(f"player {i}: outcome id {v} outside alphabet")
    if form.p == 0:
        return True
    nd = form.nd()
    covered = nd == UNDEFINED
    for i, lane in enumerate(assignment):
        vals = np.array(
            [UNDEFINED - 1 if v is None else int(v) for v in lane], dtype=np.int32
        )
        shape = [1] * form.n
        shape[i] = form.dims[i]
        covered = covered | (nd == vals.reshape(shape))
    return bool(covered.all())


def assign_wtt(form: GameForm) -> AssignmentCertificate:
    """Construct a verified assignment for a WTT form.

    Partial forms are filled with the ``*`` outcome first; entries that end
    up assigned the filler are reported as None (free).  Raises NotWttError
    on non-WTT input.
    """
    filled = fill_undefined(form)
    require_wtt(filled)
    trace: list[str] = []
    lanes = _solve(filled, 0, trace)
    star = None
    if filled is not form:
        star = filled.outcome_id(FILLER_NAME)
        trace.append("filled cells left on the filler outcome reported free")
    assignment = tuple(
        tuple(None if v is None or v == star else int(v) for v in lane)
        for lane in lanes
    )
    if not verify(form, assignment):
        raise InvariantViolation("constructed assignment failed verification")
    return AssignmentCertificate(assignment=assignment, trace=tuple(trace))


def _solve(form: GameForm, depth: int, trace: list[str]) -> Lanes:
    norm, log = normalize(form)
    for r in log:
        what = (
            f"constant hyperplane (outcome id {r.outcome})"
            if r.reason == "constant"
            else f"duplicate hyperplane (twin {r.twin})"
        )
        trace.append(
            f"level {depth}: removed {what} at direction {r.direction} index {r.index}"
        )
    lanes = _solve_normalized(norm, depth, trace)
    if log:
        expanded = expand_assignment(tuple(tuple(l) for l in lanes), log)
        trace.append(f"level {depth}: re-expanded {len(log)} removed hyperplanes")
        return [list(l) for l in expanded]
    return lanes


def _solve_normalized(form: GameForm, depth: int, trace: list[str]) -> Lanes:
    if form.p == 0:
        trace.append(f"level {depth}: empty form, all entries free")
        return [[None] * d for d in form.dims]
    if form.n == 1:
        trace.append(f"level {depth}: base case, one player")
        return [[int(c) for c in form.cells]]
    graphs = build_dominance_graphs(form)
    sink = _first_sink(graphs)
    if sink is not None:
        return _sink_branch(form, graphs, sink, depth, trace)
    return _no_sink_branch(form, graphs, depth, trace)


def _first_sink(graphs: Sequence[DominanceGraph]) -> Optional[tuple[int, int]]:
    for g in graphs:
        for index, flag in enumerate(g.sinks):
            if flag:
                return (g.direction, index)
    return None


def _sink_branch(
    form: GameForm,
    graphs: Sequence[DominanceGraph],
    sink: tuple[int, int],
    depth: int,
    trace: list[str],
) -> Lanes:
    i, j = sink
    trace.append(f"level {depth}: sink at direction {i} index {j}")
    graph = graphs[i]
    sink_lane: list[Optional[int]] = [None] * form.dims[i]
    for k in range(form.dims[i]):
        if k != j:
            sink_lane[k] = _domination_outcome(graph.relation(j, k), k)
    sub_dims = form.dims[:i] + form.dims[i + 1 :]
    sub_cells = np.take(form.nd(), j, axis=i).reshape(-1)
    sub = GameForm(sub_dims, form.outcomes, sub_cells)
    inner = _solve(sub, depth + 1, trace)
    lanes: Lanes = []
    pos = 0
    for d in range(form.n):
        if d == i:
            lanes.append(sink_lane)
        else:
            lanes.append(inner[pos])
            pos += 1
    return lanes


def _domination_outcome(rel: DominanceRelation, k: int) -> int:
    """The constant H_k shows on the lines where it differs from the sink."""
    if rel.j == k and rel.kind in (
        DominanceKind.J_STRICTLY_DOMINATES_K,
        DominanceKind.MUTUAL,
    ):
        return int(rel.c)
    if rel.k == k and rel.kind in (
        DominanceKind.K_STRICTLY_DOMINATES_J,
        DominanceKind.MUTUAL,
    ):
        return int(rel.d)
    raise InvariantViolation(
        f"hyperplane {k} does not dominate the sink of its direction"
    )


def _no_sink_branch(
    form: GameForm,
    graphs: Sequence[DominanceGraph],
    depth: int,
    trace: list[str],
) -> Lanes:
    last = form.n - 1
    trace.append(
        f"level {depth}: no-sink branch, shared outcomes in direction {last}"
    )
    nd = form.nd()
    covered = np.zeros(form.dims, dtype=bool)
    lanes: Lanes = []
    for d in range(last):
        proper = graphs[d].proper
        if any(v is None for v in proper):
            raise InvariantViolation(
                f"no-sink form with a proper-outcome-free hyperplane in direction {d}"
            )
        vals = np.array(proper, dtype=np.int32)
        shape = [1] * form.n
        shape[d] = form.dims[d]
        covered = covered | (nd == vals.reshape(shape))
        lanes.append([int(v) for v in proper])
    last_lane: list[Optional[int]] = []
    for t in range(form.dims[last]):
        leftover = nd[..., t][~covered[..., t]]
        uniq = np.unique(leftover)
        if uniq.size > 1:
            _raise_k_box(form, covered, t, int(uniq[0]), int(uniq[1]))
        if uniq.size == 1:
            last_lane.append(int(uniq[0]))
        else:
            proper = graphs[last].proper[t]
            if proper is not None:
                last_lane.append(int(proper))
            else:
                first = (0,) * last + (t,)
                last_lane.append(int(nd[first]))
            trace.append(
                f"level {depth}: direction {last} hyperplane {t} fully covered, "
                "free-hyperplane rule applied"
            )
    lanes.append(last_lane)
    return lanes


def _raise_k_box(
    form: GameForm, covered: np.ndarray, t: int, a: int, b: int
) -> None:
    nd = form.nd()
    mask = ~covered[..., t]
    x = _first_cell(nd[..., t], mask, a) + (t,)
    y = _first_cell(nd[..., t], mask, b) + (t,)
    k = sum(1 for i in range(form.n) if x[i] != y[i])
    raise InvariantViolation(
        f"two uncovered outcomes {a},{b} on direction {form.n - 1} hyperplane "
        f"{t}: cells {x} and {y} form a {k}-box, so the input was not WTT"
    )


def _first_cell(plane: np.ndarray, mask: np.ndarray, value: int) -> tuple[int, ...]:
    hits = np.argwhere(mask & (plane == value))
    return tuple(int(c) for c in hits[0])


__all__ = ["AssignmentCertificate", "assign_wtt", "verify"]
