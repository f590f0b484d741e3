"""Assignability as satisfiability.

One boolean variable per (player, strategy, outcome) triple, restricted to
the outcomes that occur among the defined cells of that hyperplane: a model
can always retarget a variable of a never-occurring outcome onto an
occurring one without uncovering anything, so the pruning preserves
satisfiability.  Every defined cell contributes a cover clause; every
hyperplane a pairwise at-most-one family.  Two-person instances are 2-SAT,
decided by implication-graph strongly connected components; everything else
goes to the CDCL kernel or the form-level brute-force search.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2, prod
from typing import Iterator, Optional, Sequence

import numpy as np

from . import _backend
from .analysis import InvariantViolation
from .assign import verify
from .core import (
    Assignment,
    CapacityError,
    GameForm,
    GameFormError,
    UNDEFINED,
)

BRUTE_BUDGET_BITS = 64.0


@dataclass(frozen=True)
class CnfFormula:
    """CNF with flat clause storage and the variable/triple bijection.

    Clause c is ``lits[offsets[c]:offsets[c+1]]`` (signed DIMACS literals).
    ``varmap`` sends 1-based variable ids to (player, strategy, outcome).
    """

    num_vars: int
    lits: np.ndarray
    offsets: np.ndarray
    varmap: dict[int, tuple[int, int, int]]

    def __post_init__(self) -> None:
        lits = np.ascontiguousarray(self.lits, dtype=np.int32)
        offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        lits.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "lits", lits)
        object.__setattr__(self, "offsets", offsets)
        if offsets.size == 0 or offsets[0] != 0 or offsets[-1] != lits.size:
            raise GameFormError("clause offsets do not tile the literal array")
        if (np.diff(offsets) <= 0).any():
            raise GameFormError("empty clause at construction")
        if lits.size:
            mags = np.abs(lits)
            if mags.min() < 1 or mags.max() > self.num_vars:
                raise GameFormError("literal outside 1..num_vars")
            used = np.unique(mags)
            if any(int(v) not in self.varmap for v in used):
                raise GameFormError("varmap does not cover all used variables")
        object.__setattr__(
            self, "_ids", {triple: v for v, triple in self.varmap.items()}
        )

    @property
    def num_clauses(self) -> int:
        return int(self.offsets.size - 1)

    @property
    def clauses(self) -> list[list[int]]:
        return [
            [int(l) for l in self.lits[self.offsets[c] : self.offsets[c + 1]]]
            for c in range(self.num_clauses)
        ]

    def var_id(self, player: int, strategy: int, outcome: int) -> int:
        return self._ids[(player, strategy, outcome)]  # type: ignore[attr-defined]


def encode(form: GameForm) -> CnfFormula:
    """Cover clauses for defined cells plus per-hyperplane at-most-one pairs."""
    n = form.n
    dims = form.dims
    varmap: dict[int, tuple[int, int, int]] = {}
    occurring: list[list[np.ndarray]] = []
    tables: list[np.ndarray] = []
    next_id = 1
    width = max(len(form.outcomes), 1)
    for i in range(n):
        mat = np.moveaxis(form.nd(), i, 0).reshape(dims[i], -1)
        table = np.zeros((dims[i], width), dtype=np.int32)
        per_plane: list[np.ndarray] = []
        for j in range(dims[i]):
            vals = mat[j]
            occ = np.unique(vals[vals != UNDEFINED])
            per_plane.append(occ)
            for k in occ:
                varmap[next_id] = (i, j, int(k))
                table[j, int(k)] = next_id
                next_id += 1
        occurring.append(per_plane)
        tables.append(table)

    defined = np.flatnonzero(form.cells != UNDEFINED)
    vals = form.cells[defined]
    cover = np.empty((defined.size, n), dtype=np.int32)
    for i in range(n):
        stride = prod(dims[i + 1 :])
        coords = (defined // stride) % dims[i] if dims[i] > 0 else defined
        cover[:, i] = tables[i][coords, vals]

    amo: list[int] = []
    amo_count = 0
    for i in range(n):
        for j in range(dims[i]):
            occ = occurring[i][j]
            for a in range(occ.size - 1):
                va = int(tables[i][j, int(occ[a])])
                for b in range(a + 1, occ.size):
                    amo.append(-va)
                    amo.append(-int(tables[i][j, int(occ[b])]))
                    amo_count += 1

    lits = np.concatenate(
        [cover.reshape(-1), np.asarray(amo, dtype=np.int32)]
    ).astype(np.int32)
    offsets = np.concatenate(
        [
            np.arange(defined.size + 1, dtype=np.int64) * n,
            defined.size * n + 2 * np.arange(1, amo_count + 1, dtype=np.int64),
        ]
    )
    return CnfFormula(next_id - 1, lits, offsets, varmap)


# -- solvers ----------------------------------------------------------------


def solve(
    form: GameForm,
    method: Optional[str] = None,
    max_conflicts: int = 0,
    budget_bits: float = BRUTE_BUDGET_BITS,
) -> Optional[Assignment]:
    """Decide assignability; on SAT return a verified assignment.

    Method None picks two_sat for two-person forms and dpll otherwise.
    """
    if method is None:
        method = "two_sat" if form.n == 2 else "dpll"
    if method == "two_sat":
        return solve_two_person(form)
    if method == "dpll":
        cnf = encode(form)
        status, model = _backend.solve_cnf(
            cnf.num_vars, cnf.lits, cnf.offsets, max_conflicts
        )
        if status == _backend.BUDGET:
            raise CapacityError(f"conflict budget {max_conflicts} exceeded")
        if status != _backend.SAT:
            return None
        return _decode_model(form, cnf, model)
    if method == "brute":
        _check_brute_budget(form, budget_bits)
        return next(_brute_models(form), None)
    raise GameFormError(f"unknown method {method!r}")


def solve_two_person(form: GameForm) -> Optional[Assignment]:
    """2-SAT decision via implication-graph strongly connected components."""
    if form.n != 2:
        raise GameFormError("solve_two_person requires a two-person form")
    cnf = encode(form)
    sat, model = _two_sat(cnf)
    if not sat:
        return None
    return _decode_model(form, cnf, model)


def enumerate_models(
    form: GameForm, limit: int, budget_bits: float = BRUTE_BUDGET_BITS
) -> list[Assignment]:
    """Feasible supported assignments, deduplicated, sorted, first ``limit``.

    Supported: every assigned hyperplane covers at least one defined cell.
    Unsupported entries are free and omitted (reported None), so the list is
    finite and canonical.
    """
    _check_brute_budget(form, budget_bits)
    seen = set(_brute_models(form))
    ordered = sorted(seen, key=_model_key)
    return ordered[: max(0, int(limit))]


def _model_key(model: Assignment) -> tuple:
    return tuple(
        tuple(-1 if v is None else int(v) for v in lane) for lane in model
    )


def _check_brute_budget(form: GameForm, budget_bits: float) -> None:
    bits = form.s * log2(len(form.outcomes) + 1)
    if bits > budget_bits:
        raise CapacityError(
            f"brute-force budget exceeded: {bits:.1f} bits > {budget_bits:.1f}"
        )


def _brute_models(form: GameForm) -> Iterator[Assignment]:
    """DFS over defined cells in row-major order; branch on covering planes."""
    defined = np.flatnonzero(form.cells != UNDEFINED)
    entries = [
        (form.profile_of(int(flat)), int(form.cells[flat])) for flat in defined
    ]
    n = form.n
    planes: list[list[Optional[int]]] = [[None] * d for d in form.dims]

    def rec(start: int) -> Iterator[Assignment]:
        idx = start
        while idx < len(entries):
            x, val = entries[idx]
            if not any(planes[i][x[i]] == val for i in range(n)):
                break
            idx += 1
        if idx == len(entries):
            yield tuple(tuple(lane) for lane in planes)
            return
        x, val = entries[idx]
        for i in range(n):
            if planes[i][x[i]] is None:
                planes[i][x[i]] = val
                yield from rec(idx + 1)
                planes[i][x[i]] = None

    return rec(0)


def _decode_model(
    form: GameForm, cnf: CnfFormula, model: Sequence[bool]
) -> Assignment:
    lanes: list[list[Optional[int]]] = [[None] * d for d in form.dims]
    for var, (i, j, k) in cnf.varmap.items():
        if model[var - 1]:
            if lanes[i][j] is not None:
                raise InvariantViolation(
                    f"model assigns two outcomes to hyperplane ({i},{j})"
                )
            lanes[i][j] = k
    assignment = tuple(tuple(lane) for lane in lanes)
    if not verify(form, assignment):
        raise InvariantViolation("decoded model failed verification")
    return assignment


def _two_sat(cnf: CnfFormula) -> tuple[bool, Optional[list[bool]]]:
    nv = cnf.num_vars
    size = 2 * nv
    adj: list[list[int]] = [[] for _ in range(size)]
    for c in range(cnf.num_clauses):
        cl = cnf.lits[cnf.offsets[c] : cnf.offsets[c + 1]]
        if cl.size == 1:
            a = int(cl[0])
            adj[_node(-a)].append(_node(a))
        elif cl.size == 2:
            a, b = int(cl[0]), int(cl[1])
            adj[_node(-a)].append(_node(b))
            adj[_node(-b)].append(_node(a))
        else:
            raise GameFormError("clause of size > 2 in a 2-SAT instance")
    comp = _tarjan(adj)
    model = []
    for v in range(nv):
        pos, neg = comp[2 * v], comp[2 * v + 1]
        if pos == neg:
            return False, None
        model.append(pos < neg)
    return True, model


def _node(lit: int) -> int:
    return ((abs(lit) - 1) << 1) | (1 if lit < 0 else 0)


def _tarjan(adj: list[list[int]]) -> list[int]:
    """SCC ids in completion order (reverse topological)."""
    size = len(adj)
    index = [-1] * size
    low = [0] * size
    comp = [-1] * size
    onstack = [False] * size
    stack: list[int] = []
    counter = 0
    ccount = 0
    for root in range(size):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            descend = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    descend = True
                    break
                if onstack[w]:
                    low[v] = min(low[v], index[w])
            if descend:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ccount
                    if w == v:
                        break
                ccount += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


# -- DIMACS -----------------------------------------------------------------


def emit_dimacs(cnf: CnfFormula) -> str:
    lines = [
        f"c var {v} = y[{i}][{j}][{k}]"
        for v, (i, j, k) in sorted(cnf.varmap.items())
    ]
    lines.append(f"p cnf {cnf.num_vars} {cnf.num_clauses}")
    for c in range(cnf.num_clauses):
        cl = cnf.lits[cnf.offsets[c] : cnf.offsets[c + 1]]
        lines.append(" ".join(str(int(l)) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Read a DIMACS CNF; returns (num_vars, clauses)."""
    num_vars: Optional[int] = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise GameFormError(f"bad DIMACS header: {line!r}")
            try:
                num_vars = int(parts[2])
            except ValueError:
                raise GameFormError(f"bad DIMACS header: {line!r}") from None
            continue
        if num_vars is None:
            raise GameFormError(f"clause before DIMACS header: {line!r}")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise GameFormError(f"bad DIMACS literal: {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise GameFormError("missing DIMACS header")
    if current:
        raise GameFormError("unterminated final clause")
    return num_vars, clauses


def flat_clauses(clauses: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    """Clause lists to the flat (lits, offsets) pair the kernels take."""
    offsets = np.zeros(len(clauses) + 1, dtype=np.int64)
    for c, cl in enumerate(clauses):
        offsets[c + 1] = offsets[c] + len(cl)
    lits = np.fromiter(
        (l for cl in clauses for l in cl), dtype=np.int32, count=int(offsets[-1])
    )
    return lits, offsets


__all__ = [
    "BRUTE_BUDGET_BITS",
    "CnfFormula",
    "emit_dimacs",
    "encode",
    "enumerate_models",
    "flat_clauses",
    "parse_dimacs",
    "solve",
    "solve_two_person",
]
