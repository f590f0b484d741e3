"""3-CNF-to-game-form reductions and non-assignable form generators."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from . import satenc
from .analysis import InvariantViolation
from .assign import verify
from .core import (
    FILLER_NAME,
    UNDEFINED,
    GameForm,
    GameFormError,
    fill_undefined,
    take_subform,
)

# (clause index, position 0..2); positions map to directions 0..2
Occurrence = tuple[int, int]

_FRESH_LETTERS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class ThreeCnf:
    """A 3-CNF with DIMACS-style signed literals over variables 1..num_vars."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise GameFormError("negative variable count")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for idx, clause in enumerate(clauses):
            if len(clause) != 3:
                raise GameFormError(
                    f"clause {idx} has {len(clause)} literals, want exactly 3"
                )
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise GameFormError(
                        f"clause {idx} literal {lit} outside variables 1..{self.num_vars}"
                    )
            if len({abs(l) for l in clause}) != 3:
                raise GameFormError(f"clause {idx} repeats a variable")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, valuation: Mapping[int, bool]) -> bool:
        """Evaluate under a variable valuation; missing variables read False."""
        return all(
            any(bool(valuation.get(abs(lit), False)) == (lit > 0) for lit in clause)
            for clause in self.clauses
        )

    @staticmethod
    def from_dimacs(text: str) -> "ThreeCnf":
        num_vars, clauses = satenc.parse_dimacs(text)
        for idx, clause in enumerate(clauses):
            if len(clause) != 3:
                raise GameFormError(
                    f"clause {idx} has {len(clause)} literals, want exactly 3"
                )
        return ThreeCnf(num_vars, tuple(tuple(c) for c in clauses))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(str(l) for l in c) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GadgetRecord:
    """One consistency gadget: its kind, the occurrences it binds, the
    hyperplane indices it added per direction, and its fresh outcome ids."""

    kind: str
    occurrences: tuple[Occurrence, ...]
    planes: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    outcomes: tuple[int, ...]


@dataclass(frozen=True)
class ReductionLayout:
    num_clauses: int
    box_planes: tuple[tuple[int, int, int], ...]
    clause_outcomes: tuple[int, ...]
    tokens: tuple[tuple[int, int, int], ...]  # (clause, position, outcome id)
    gadgets: tuple[GadgetRecord, ...]
    filler: Optional[int] = None

    def token_table(self) -> dict[Occurrence, int]:
        return {(i, q): k for i, q, k in self.tokens}


@dataclass(frozen=True, eq=False)
class ReductionArtifact:
    form: GameForm
    layout: ReductionLayout
    cnf: ThreeCnf


def _occurrences_by_variable(phi: ThreeCnf) -> dict[int, list[Occurrence]]:
    occs: dict[int, list[Occurrence]] = {}
    for i, clause in enumerate(phi.clauses):
        for q, lit in enumerate(clause):
            occs.setdefault(abs(lit), []).append((i, q))
    return occs


def _reduce3(phi: ThreeCnf, with_pins: bool) -> ReductionArtifact:
    m = phi.m
    occs = _occurrences_by_variable(phi)

    names = [f"c{i + 1}" for i in range(m)]
    token: dict[Occurrence, int] = {}
    for i, clause in enumerate(phi.clauses):
        for q, lit in enumerate(clause):
            if len(occs[abs(lit)]) >= 2:
                token[(i, q)] = len(names)
                names.append(f"t{i + 1}p{q + 1}")

    nxt = [m, m, m]
    cells: dict[tuple[int, int, int], int] = {(i, i, i): i for i in range(m)}
    gadgets: list[GadgetRecord] = []

    def alloc(direction: int, count: int) -> list[int]:
        start = nxt[direction]
        nxt[direction] += count
        return list(range(start, start + count))

    def fresh(count: int) -> list[int]:
        gid = len(gadgets) + 1
        ids = []
        for letter in _FRESH_LETTERS[:count]:
            ids.append(len(names))
            names.append(f"g{gid}{letter}")
        return ids

    def put(axes: tuple[int, int, int], block: Sequence[tuple[tuple[int, int, int], int]]) -> None:
        for coords, outcome in block:
            x = [0, 0, 0]
            for axis, coord in zip(axes, coords):
                x[axis] = coord
            key = (x[0], x[1], x[2])
            assert key not in cells
            cells[key] = outcome

    def emit_same(o1: Occurrence, o2: Occurrence, equal: bool) -> None:
        (i, q), (j, _) = o1, o2
        r2, r3 = (d for d in range(3) if d != q)
        t1, t2 = token[o1], token[o2]
        planes: list[tuple[int, ...]] = [(), (), ()]
        if equal:
            # a 2x2x2 block on the two shared-direction clause planes; the
            # four added planes pick up the token/fresh values
            l0, l1 = alloc(r2, 2)
            k0, k1 = alloc(r3, 2)
            fa, fb = fresh(2)
            put((q, r2, r3), [
                ((i, l1, k0), i), ((i, l0, k0), fa),
                ((j, l1, k0), fa), ((j, l0, k0), j),
                ((i, l1, k1), fb), ((i, l0, k1), t1),
                ((j, l1, k1), t2), ((j, l0, k1), fb),
            ])
            planes[r2] = (l0, l1)
            planes[r3] = (k0, k1)
            kind, dedicated = "same-equal", (fa, fb)
        else:
            # a forcing cube on six dedicated planes plus a 2x2 exchange
            # block tying the two clause planes to it
            l0, l1 = alloc(q, 2)
            p0, p1, p2, p3 = alloc(r2, 4)
            k0, k1 = alloc(r3, 2)
            fa, fb, fc, fd = fresh(4)
            put((q, r2, r3), [
                ((l0, p0, k0), fa), ((l0, p1, k0), fc),
                ((l1, p0, k0), fd), ((l1, p1, k0), fa),
                ((l0, p0, k1), fb), ((l0, p1, k1), t2),
                ((l1, p0, k1), t1), ((l1, p1, k1), fb),
                ((i, p2, k0), t1), ((i, p3, k0), i),
                ((j, p2, k0), t2), ((j, p3, k0), j),
            ])
            planes[q] = (l0, l1)
            planes[r2] = (p0, p1, p2, p3)
            planes[r3] = (k0, k1)
            kind, dedicated = "same-complement", (fa, fb, fc, fd)
        gadgets.append(GadgetRecord(kind, (o1, o2), tuple(planes), dedicated))

    def emit_cross(o1: Occurrence, o2: Occurrence, equal: bool) -> None:
        (i, q1), (j, q2) = o1, o2
        r3 = 3 - q1 - q2
        l0, l1 = alloc(q1, 2)
        p0, p1 = alloc(q2, 2)
        k0, k1 = alloc(r3, 2)
        fa, fb, fg, fh = fresh(4)
        t1, t2 = token[o1], token[o2]
        # six single-occurrence values on a 6-cycle of plane incidences;
        # its two perfect matchings are the two consistent modes
        e2, e3 = (t2, j) if equal else (j, t2)
        put((q1, q2, r3), [
            ((l0, p0, k0), fa), ((l1, p1, k0), fa),
            ((l0, p1, k1), fb), ((l1, p0, k1), fb),
            ((i, p0, k0), i),
            ((l0, p0, k1), fg),
            ((l0, j, k0), e2),
            ((l1, j, k0), e3),
            ((l1, p1, k1), fh),
            ((i, p1, k0), t1),
        ])
        planes: list[tuple[int, ...]] = [(), (), ()]
        planes[q1] = (l0, l1)
        planes[q2] = (p0, p1)
        planes[r3] = (k0, k1)
        kind = "cross-equal" if equal else "cross-complement"
        gadgets.append(GadgetRecord(kind, (o1, o2), tuple(planes), (fa, fb, fg, fh)))

    def emit_pin(o: Occurrence) -> None:
        i, q = o
        r2, r3 = (d for d in range(3) if d != q)
        (l0,) = alloc(q, 1)
        p0, p1 = alloc(r2, 2)
        k0, k1 = alloc(r3, 2)
        fa, fb, fc, fe = fresh(4)
        t = token[o]
        # forcing cube with the occurrence's clause plane as one side: every
        # model gives that plane either the clause outcome or the token
        put((q, r2, r3), [
            ((i, p0, k0), i), ((i, p1, k0), fa),
            ((l0, p0, k0), fa), ((l0, p1, k0), fc),
            ((i, p0, k1), t), ((i, p1, k1), fb),
            ((l0, p0, k1), fb), ((l0, p1, k1), fe),
        ])
        planes: list[tuple[int, ...]] = [(), (), ()]
        planes[q] = (l0,)
        planes[r2] = (p0, p1)
        planes[r3] = (k0, k1)
        gadgets.append(GadgetRecord("pin", (o,), tuple(planes), (fa, fb, fc, fe)))

    for v in sorted(occs):
        lst = occs[v]
        for a in range(len(lst)):
            for b in range(a + 1, len(lst)):
                o1, o2 = lst[a], lst[b]
                s1 = phi.clauses[o1[0]][o1[1]] > 0
                s2 = phi.clauses[o2[0]][o2[1]] > 0
                if o1[1] == o2[1]:
                    emit_same(o1, o2, s1 == s2)
                else:
                    emit_cross(o1, o2, s1 == s2)

    if with_pins:
        for i, clause in enumerate(phi.clauses):
            for q, lit in enumerate(clause):
                if len(occs[abs(lit)]) >= 2:
                    emit_pin((i, q))

    dims = (nxt[0], nxt[1], nxt[2])
    flat = np.full(dims[0] * dims[1] * dims[2], UNDEFINED, dtype=np.int32)
    s0, s1 = dims[1] * dims[2], dims[2]
    for (x, y, z), outcome in cells.items():
        flat[x * s0 + y * s1 + z] = outcome
    form = GameForm(dims, tuple(names), flat)
    layout = ReductionLayout(
        num_clauses=m,
        box_planes=tuple((i, i, i) for i in range(m)),
        clause_outcomes=tuple(range(m)),
        tokens=tuple((i, q, k) for (i, q), k in sorted(token.items())),
        gadgets=tuple(gadgets),
    )
    return ReductionArtifact(form, layout, phi)


def reduce_partial3(phi: ThreeCnf) -> ReductionArtifact:
    """Partially defined 3-person form assignable iff phi is satisfiable.

    Selector box: clause i owns plane i in every direction and the diagonal
    cell (i,i,i) carries its outcome c_{i+1}.  Every unordered pair of
    occurrences of one variable gets a consistency gadget on dedicated
    planes; equal-polarity pairs force both-or-neither clause outcomes,
    complementary pairs force exactly one.
    """
    return _reduce3(phi, with_pins=False)


def reduce_full4(phi: ThreeCnf) -> ReductionArtifact:
    """Fully defined 4-person form assignable iff phi is satisfiable.

    Requires check_deletion_property.  Adds a pin cube per occurrence of
    every variable occurring twice or more, fills the undefined cells with
    the filler outcome, and appends an extent-1 fourth direction whose
    single hyperplane is forced to the filler in every model.
    """
    if not check_deletion_property(phi):
        raise GameFormError(
            "formula fails the two-deletion nontriviality requirement"
        )
    base = _reduce3(phi, with_pins=True)
    filled = fill_undefined(base.form)
    form4 = GameForm(filled.dims + (1,), filled.outcomes, filled.cells)
    layout = replace(base.layout, filler=filled.outcome_id(FILLER_NAME))
    return ReductionArtifact(form4, layout, phi)


def gadget_block(artifact: ReductionArtifact, record: GadgetRecord) -> GameForm:
    """Standalone subform spanned by one gadget of a three-person reduction.

    The block keeps the gadget's dedicated planes plus the box plane of each
    coupled occurrence, and drops alphabet entries that do not occur in it.
    """
    selectors = []
    for d in range(3):
        rows = set(record.planes[d])
        for clause, pos in record.occurrences:
            if pos == d:
                rows.add(clause)
        selectors.append(sorted(rows))
    sub = take_subform(artifact.form, selectors)
    keep = sorted({int(k) for k in sub.cells.tolist() if k != UNDEFINED})
    remap = {k: i for i, k in enumerate(keep)}
    cells = np.array(
        [UNDEFINED if k == UNDEFINED else remap[k] for k in sub.cells.tolist()],
        dtype=np.int32,
    )
    return GameForm(sub.dims, tuple(sub.outcomes[k] for k in keep), cells)


def check_deletion_property(phi: ThreeCnf) -> bool:
    """True iff after deleting any two clauses, the rest still holds clauses
    with a repeated-variable literal in position 1, 2, and 3, not all three
    picked from a single clause."""
    m = phi.m
    if m < 3:
        return False
    counts: dict[int, int] = {}
    for clause in phi.clauses:
        for lit in clause:
            counts[abs(lit)] = counts.get(abs(lit), 0) + 1
    nontrivial = [[counts[abs(lit)] >= 2 for lit in clause] for clause in phi.clauses]
    for d1 in range(m):
        for d2 in range(d1 + 1, m):
            choices = [
                {i for i in range(m) if i not in (d1, d2) and nontrivial[i][q]}
                for q in range(3)
            ]
            if not all(choices):
                return False
            if len(choices[0] | choices[1] | choices[2]) == 1:
                return False
    return True


def decode(
    artifact: ReductionArtifact,
    assignment: Sequence[Sequence[Optional[int]]],
) -> dict[int, bool]:
    """Read a satisfying valuation of the encoded formula off an assignment.

    A clause plane carrying its own clause outcome marks that literal true;
    unforced variables default to False.
    """
    if not verify(artifact.form, assignment):
        raise GameFormError("assignment does not verify against the reduced form")
    phi = artifact.cnf
    value: dict[int, bool] = {}
    for i, clause in enumerate(phi.clauses):
        for q, lit in enumerate(clause):
            if assignment[q][i] == i:
                v, want = abs(lit), lit > 0
                if value.get(v, want) != want:
                    raise InvariantViolation(
                        f"clause outcomes imply both values for variable {v}"
                    )
                value[v] = want
    for v in range(1, phi.num_vars + 1):
        value.setdefault(v, False)
    if not phi.satisfied_by(value):
        raise InvariantViolation("decoded valuation does not satisfy the formula")
    return value


def gen_min_outcome_nonassignable(n: int, m: int) -> GameForm:
    """Partial n-person m^n form with n+1 outcomes and no feasible assignment.

    Outcome k sits on an m-cell diagonal shifted by the k-th base-m offset
    vector, so its cells share no coordinate; covering all of them consumes
    every hyperplane, and one extra outcome in a vacant cell overflows.
    """
    n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise GameFormError("need at least one player and one strategy")
    if n * m >= m**n:
        raise GameFormError(f"need n*m < m^n; got {n * m} >= {m**n}")
    flat = np.full(m**n, UNDEFINED, dtype=np.int32)
    strides = [m ** (n - 1 - i) for i in range(n)]

    def offset_vector(k: int) -> tuple[int, ...]:
        digits = []
        for _ in range(n - 1):
            digits.append(k % m)
            k //= m
        return tuple(reversed(digits))

    for k in range(n):
        off = offset_vector(k)
        for j in range(m):
            coords = (j,) + tuple((j + o) % m for o in off)
            flat[sum(c * s for c, s in zip(coords, strides))] = k
    vacant = int(np.flatnonzero(flat == UNDEFINED)[0])
    flat[vacant] = n
    return GameForm((m,) * n, tuple(f"o{k + 1}" for k in range(n + 1)), flat)


_SEQUENCE_ROWS = {
    3: ("aba", "cab", "bba"),
    4: ("abaa", "caba", "cbab", "bbba"),
    5: ("abaaa", "cabaa", "cbaba", "cbbab", "bbbba"),
}


def sequence_fixture(t: int) -> GameForm:
    """The recorded t-by-t minimal non-assignable two-person forms."""
    rows = _SEQUENCE_ROWS.get(int(t))
    if rows is None:
        raise GameFormError("only sizes 3, 4, and 5 are on record")
    nested = [list(row) for row in rows]
    return GameForm.from_nested(nested, outcomes=("a", "b", "c"))
