"""Data model for n-person game forms.

A game form maps strategy profiles (one strategy per player) to outcomes and
may be partially defined.  Cells are stored densely in row-major order with
the LAST coordinate varying fastest; undefined cells hold the sentinel
``UNDEFINED``.  All objects are immutable after construction, so every
operation here is a pure function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

#: Sentinel id for an undefined cell.  Never a valid outcome id.
UNDEFINED = -1

#: Reserved outcome name introduced by :func:`fill_undefined`.
FILLER_NAME = "*"

#: An assignment entry that covers nothing.
UNASSIGNED = None

#: Per player, per strategy: an outcome id or UNASSIGNED.
Assignment = tuple[tuple[Optional[int], ...], ...]


class GameFormError(ValueError):
    """Invalid game form data or arguments."""


class BoundsError(GameFormError):
    """Coordinate outside the form's dims."""


class CapacityError(GameFormError):
    """Configured size budget exceeded."""


@dataclass(frozen=True)
class Hyperplane:
    """The (n-1)-dimensional subarray fixing one player's strategy."""

    direction: int
    index: int


@dataclass(frozen=True)
class Line:
    """The 1-dimensional subarray varying one player's strategy.

    ``fixed`` holds the other n-1 coordinates in ascending player order.
    """

    direction: int
    fixed: tuple[int, ...]


class GameForm:
    """An n-person game form over a named outcome alphabet.

    Parameters
    ----------
    dims:
        Strategy counts per player; entries may be 0 (degenerate, legal).
    outcomes:
        Outcome names; ids are their positions.
    cells:
        Flat row-major array (last coordinate fastest) of outcome ids,
        with UNDEFINED marking undefined cells.
    """

    __slots__ = ("dims", "outcomes", "cells", "_outcome_ids")

    def __init__(
        self,
        dims: Sequence[int],
        outcomes: Sequence[str],
        cells: Sequence[int] | np.ndarray,
    ) -> None:
        dims = tuple(int(d) for d in dims)
        if len(dims) < 1:
            raise GameFormError("a game form needs at least one player")
        if any(d < 0 for d in dims):
            raise GameFormError(f"negative extent in dims {dims}")
        outcomes = tuple(outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise GameFormError("duplicate outcome names")
        if any(not isinstance(name, str) or not name for name in outcomes):
            raise GameFormError("outcome names must be non-empty strings")
        arr = np.asarray(cells, dtype=np.int32).reshape(-1).copy()
        if arr.size != prod(dims):
            raise GameFormError(
                f"cells length {arr.size} != product of dims {prod(dims)}"
            )
        if arr.size and (arr.min() < UNDEFINED or arr.max() >= len(outcomes)):
            raise GameFormError("cell outcome id outside the alphabet")
        arr.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "cells", arr)
        object.__setattr__(
            self, "_outcome_ids", {name: k for k, name in enumerate(outcomes)}
        )

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("GameForm is immutable")

    # -- basic geometry ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def p(self) -> int:
        """Total number of strategy profiles."""
        return int(self.cells.size)

    @property
    def s(self) -> int:
        """Total number of hyperplanes (sum of dims)."""
        return sum(self.dims)

    def nd(self) -> np.ndarray:
        """Cells as a read-only n-dimensional view."""
        return self.cells.reshape(self.dims)

    def flat_index(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise BoundsError(f"profile {tuple(x)} has {len(x)} coordinates, want {self.n}")
        idx = 0
        for c, d in zip(x, self.dims):
            if not 0 <= c < d:
                raise BoundsError(f"coordinate {c} out of range 0..{d - 1}")
            idx = idx * d + c
        return idx

    def profile_of(self, flat: int) -> tuple[int, ...]:
        coords = []
        for d in reversed(self.dims):
            coords.append(flat % d)
            flat //= d
        return tuple(reversed(coords))

    def get_id(self, x: Sequence[int]) -> int:
        """Outcome id at profile x, or UNDEFINED."""
        return int(self.cells[self.flat_index(x)])

    def get(self, x: Sequence[int]) -> Optional[str]:
        """Outcome name at profile x, or None if the cell is undefined."""
        k = self.get_id(x)
        return None if k == UNDEFINED else self.outcomes[k]

    def outcome_id(self, name: str) -> int:
        try:
            return self._outcome_ids[name]
        except KeyError:
            raise GameFormError(f"unknown outcome {name!r}") from None

    def is_fully_defined(self) -> bool:
        return bool((self.cells != UNDEFINED).all()) if self.p else True

    def defined_count(self) -> int:
        return int((self.cells != UNDEFINED).sum())

    def profiles(self) -> Iterator[tuple[int, ...]]:
        """All profiles in row-major order (last coordinate fastest)."""
        return itertools.product(*(range(d) for d in self.dims))

    # -- equality / display -------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GameForm)
            and self.dims == other.dims
            and self.outcomes == other.outcomes
            and bool(np.array_equal(self.cells, other.cells))
        )

    def __hash__(self) -> int:
        return hash((self.dims, self.outcomes, self.cells.tobytes()))

    def __repr__(self) -> str:
        shape = "x".join(str(d) for d in self.dims)
        return f"GameForm({shape}, |A|={len(self.outcomes)}, defined={self.defined_count()}/{self.p})"

    # -- construction helpers ----------------------------------------------

    @staticmethod
    def from_nested(nested, outcomes: Optional[Sequence[str]] = None) -> "GameForm":
        """Build from nested lists of outcome names (None = undefined).

        Without an explicit alphabet, names are interned in row-major order
        of first appearance.
        """
        dims = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            dims.append(len(probe))
            probe = probe[0] if probe else None
        flat: list[Optional[str]] = []

        def walk(node, depth: int) -> None:
            if depth == len(dims):
                flat.append(node)
                return
            if not isinstance(node, (list, tuple)) or len(node) != dims[depth]:
                raise GameFormError("ragged nested cell data")
            for child in node:
                walk(child, depth + 1)

        walk(nested, 0)
        if outcomes is None:
            seen: dict[str, int] = {}
            for name in flat:
                if name is not None and name not in seen:
                    seen[name] = len(seen)
            outcomes = tuple(seen)
        table = {name: k for k, name in enumerate(outcomes)}
        try:
            ids = [UNDEFINED if name is None else table[name] for name in flat]
        except KeyError as exc:
            raise GameFormError(f"cell outcome {exc.args[0]!r} not in alphabet") from None
        return GameForm(dims, outcomes, ids)

    def to_nested(self) -> list:
        """Inverse of from_nested: nested lists of names/None."""
        def build(axis: int, base: int, stride: int):
            if axis == self.n:
                k = int(self.cells[base])
                return None if k == UNDEFINED else self.outcomes[k]
            step = stride // self.dims[axis] if self.dims[axis] else 0
            return [
                build(axis + 1, base + i * step, step)
                for i in range(self.dims[axis])
            ]

        return build(0, 0, self.p)


def get(form: GameForm, x: Sequence[int]) -> Optional[str]:
    """Outcome name at profile x, or None for an undefined cell."""
    return form.get(x)


def hyperplane_cells(form: GameForm, h: Hyperplane) -> list[tuple[int, ...]]:
    """Profiles with coordinate h.direction fixed to h.index.

    Row-major order of the free coordinates.
    """
    _check_hyperplane(form, h.direction, h.index)
    ranges = [
        [h.index] if i == h.direction else range(d)
        for i, d in enumerate(form.dims)
    ]
    return list(itertools.product(*ranges))


def hyperplane_values(form: GameForm, direction: int, index: int) -> np.ndarray:
    """Outcome ids on one hyperplane, row-major over the free coordinates."""
    _check_hyperplane(form, direction, index)
    return np.take(form.nd(), index, axis=direction).reshape(-1)


def line_cells(form: GameForm, line: Line) -> list[tuple[int, ...]]:
    """Profiles along one line, in order of the varying coordinate."""
    if not 0 <= line.direction < form.n:
        raise BoundsError(f"direction {line.direction} out of range")
    if len(line.fixed) != form.n - 1:
        raise BoundsError("line needs n-1 fixed coordinates")
    rest = [d for i, d in enumerate(form.dims) if i != line.direction]
    for c, d in zip(line.fixed, rest):
        if not 0 <= c < d:
            raise BoundsError(f"fixed coordinate {c} out of range 0..{d - 1}")
    out = []
    for j in range(form.dims[line.direction]):
        x = list(line.fixed)
        x.insert(line.direction, j)
        out.append(tuple(x))
    return out


def line_values(form: GameForm, line: Line) -> np.ndarray:
    return np.array([form.get_id(x) for x in line_cells(form, line)], dtype=np.int32)


def line_profile(form: GameForm, direction: int, line_index: int) -> tuple[int, ...]:
    """Decode a row-major line index (over the free axes) to fixed coordinates."""
    rest = [d for i, d in enumerate(form.dims) if i != direction]
    coords = []
    for d in reversed(rest):
        coords.append(line_index % d)
        line_index //= d
    return tuple(reversed(coords))


def project(form: GameForm, coalition: Iterable[int]) -> GameForm:
    """Two-person coalition projection.

    The row player enumerates the coalition's strategy tuples in row-major
    order of ascending player index; the column player does the same for the
    complement.  Cell values (including undefined ones) are copied.
    """
    coal = sorted(set(int(i) for i in coalition))
    if any(i < 0 or i >= form.n for i in coal):
        raise GameFormError(f"coalition {coal} outside players 0..{form.n - 1}")
    if not coal or len(coal) == form.n:
        raise GameFormError("coalition must be a nonempty proper subset of players")
    rest = [i for i in range(form.n) if i not in coal]
    rows = prod(form.dims[i] for i in coal)
    cols = prod(form.dims[i] for i in rest)
    cells = form.nd().transpose(coal + rest).reshape(rows * cols)
    return GameForm((rows, cols), form.outcomes, cells)


def delete_hyperplane(form: GameForm, direction: int, index: int) -> GameForm:
    """Restriction of the form with one hyperplane removed."""
    _check_hyperplane(form, direction, index)
    cells = np.delete(form.nd(), index, axis=direction)
    dims = list(form.dims)
    dims[direction] -= 1
    return GameForm(dims, form.outcomes, cells.reshape(-1))


def take_subform(form: GameForm, selectors: Sequence[Sequence[int]]) -> GameForm:
    """Subform on the given per-axis index lists (order preserved)."""
    if len(selectors) != form.n:
        raise GameFormError("one selector per direction required")
    nd = form.nd()
    for axis, sel in enumerate(selectors):
        sel = list(sel)
        if any(not 0 <= j < form.dims[axis] for j in sel):
            raise BoundsError(f"selector out of range in direction {axis}")
        nd = np.take(nd, sel, axis=axis)
    return GameForm(nd.shape, form.outcomes, nd.reshape(-1))


def fill_undefined(form: GameForm) -> GameForm:
    """Fully defined form with every undefined cell set to the filler ``*``.

    A fully defined form is returned unchanged.  The filler becomes a real
    alphabet member (the last id).
    """
    if form.is_fully_defined():
        return form
    if FILLER_NAME in form.outcomes:
        raise GameFormError(f"alphabet already contains the reserved name {FILLER_NAME!r}")
    star = len(form.outcomes)
    cells = form.cells.copy()
    cells[cells == UNDEFINED] = star
    return GameForm(form.dims, form.outcomes + (FILLER_NAME,), cells)


# -- normalization ---------------------------------------------------------


@dataclass(frozen=True)
class Removal:
    """One normalization step, in removal order.

    ``reason`` is "constant" (outcome holds the constant id, or None when the
    hyperplane was entirely undefined) or "duplicate" (twin holds the kept
    lower index at removal time).
    """

    direction: int
    index: int
    reason: str
    outcome: Optional[int] = None
    twin: Optional[int] = None


NormalizationLog = list[Removal]


def _constant_of(plane: np.ndarray) -> Optional[tuple]:
    """(outcome-or-None,) if removable-constant, else None.

    Removable-constant: at least one cell and either all cells carry one
    identical defined outcome or all cells are undefined.  Mixed hyperplanes
    are never removed.
    """
    if plane.size == 0:
        return None
    first = int(plane[0])
    if not (plane == first).all():
        return None
    return (None,) if first == UNDEFINED else (first,)


def _find_removal(form: GameForm) -> Optional[Removal]:
    nd = form.nd()
    for d in range(form.n):
        for j in range(form.dims[d]):
            const = _constant_of(np.take(nd, j, axis=d).reshape(-1))
            if const is not None:
                return Removal(d, j, "constant", outcome=const[0])
    for d in range(form.n):
        if prod(form.dims) == 0:
            continue
        for j in range(form.dims[d]):
            pj = np.take(nd, j, axis=d)
            if pj.size == 0:
                continue
            for k in range(j + 1, form.dims[d]):
                if np.array_equal(pj, np.take(nd, k, axis=d)):
                    return Removal(d, k, "duplicate", twin=j)
    return None


def normalize(form: GameForm) -> tuple[GameForm, NormalizationLog]:
    """Strip constant hyperplanes and duplicate parallel pairs to a fixpoint.

    One removal per pass: constants before duplicates, scanned by ascending
    direction then index; a duplicate pair keeps the lower-indexed twin.  The
    log suffices to re-expand an assignment of the reduced form (see
    :func:`expand_assignment`).  A direction may legally reach extent 0.
    """
    log: NormalizationLog = []
    current = form
    while True:
        step = _find_removal(current)
        if step is None:
            return current, log
        log.append(step)
        current = delete_hyperplane(current, step.direction, step.index)


def expand_assignment(assignment: Assignment, log: NormalizationLog) -> Assignment:
    """Undo a normalization log on an assignment of the reduced form.

    Walks the log in reverse: a constant hyperplane re-enters with its
    constant (UNASSIGNED when it was entirely undefined), a duplicate with
    its twin's current value.
    """
    lanes = [list(per_player) for per_player in assignment]
    for step in reversed(log):
        lane = lanes[step.direction]
        if step.reason == "constant":
            value = step.outcome
        else:
            value = lane[step.twin]
        lane.insert(step.index, value)
    return tuple(tuple(lane) for lane in lanes)


def assignment_names(form: GameForm, assignment: Assignment) -> list[list[Optional[str]]]:
    """Assignment ids mapped to outcome names (None stays None)."""
    return [
        [None if k is None else form.outcomes[k] for k in per_player]
        for per_player in assignment
    ]


def assignment_from_names(form: GameForm, names: Sequence[Sequence[Optional[str]]]) -> Assignment:
    return tuple(
        tuple(None if v is None else form.outcome_id(v) for v in per_player)
        for per_player in names
    )


def _check_hyperplane(form: GameForm, direction: int, index: int) -> None:
    if not 0 <= direction < form.n:
        raise BoundsError(f"direction {direction} out of range 0..{form.n - 1}")
    if not 0 <= index < form.dims[direction]:
        raise BoundsError(
            f"hyperplane index {index} out of range 0..{form.dims[direction] - 1}"
        )
