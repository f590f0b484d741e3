"""Pure-Python CDCL solver (reference twin of the compiled kernel).

Complete backtracking search with two-watched-literal unit propagation, 1UIP
clause learning, phase saving and geometric restarts.  Everything is integer
arithmetic with ties broken by lowest variable id, so the search tree (and
hence the returned model) is identical to the compiled implementation.

Literals come in DIMACS convention (nonzero signed ints).  Internally literal
``l`` becomes code ``2*(|l|-1) + (1 if l < 0 else 0)``; ``code ^ 1`` negates.
"""

from __future__ import annotations

from typing import Optional, Sequence

SAT = 10
UNSAT = 20
BUDGET = 30

_DECAY_INTERVAL = 128
_FIRST_RESTART = 100


def solve_cnf(
    num_vars: int,
    clause_lits: Sequence[int],
    clause_offsets: Sequence[int],
    max_conflicts: int = 0,
) -> tuple[int, Optional[list[bool]]]:
    """Decide the CNF; on SAT also return the model as a bool list per var.

    Clause c holds the signed DIMACS literals
    ``clause_lits[clause_offsets[c]:clause_offsets[c+1]]``.  ``max_conflicts``
    0 means unlimited; otherwise BUDGET is returned once the conflict count
    passes the limit.
    """
    nv = num_vars
    raw = [int(l) for l in clause_lits]
    ends = [int(o) for o in clause_offsets]
    lits: list[int] = []
    offsets: list[int] = [0]
    units: list[int] = []
    for c in range(len(ends) - 1):
        clause = raw[ends[c] : ends[c + 1]]
        if len(clause) == 0:
            return UNSAT, None
        codes = sorted({_code(l, nv) for l in clause})
        if any(codes[i] ^ 1 == codes[i + 1] for i in range(len(codes) - 1)):
            continue  # tautology
        if len(codes) == 1:
            units.append(codes[0])
            continue
        lits.extend(codes)
        offsets.append(len(lits))

    watches: list[list[int]] = [[] for _ in range(2 * nv)]
    for ci in range(len(offsets) - 1):
        start = offsets[ci]
        watches[lits[start]].append(ci)
        watches[lits[start + 1]].append(ci)

    assigns = [-1] * nv          # -1 unassigned, else 0/1 truth of the var
    level = [0] * nv
    reason = [-1] * nv
    phase = [0] * nv             # saved literal parity; 0 assigns the var true
    activity = [0] * nv
    trail: list[int] = []
    trail_lim: list[int] = []
    qhead = 0

    def lit_value(code: int) -> int:
        v = assigns[code >> 1]
        return v if v < 0 else v ^ (code & 1)

    def enqueue(code: int, why: int) -> bool:
        val = lit_value(code)
        if val >= 0:
            return val == 1
        v = code >> 1
        assigns[v] = 1 ^ (code & 1)
        level[v] = len(trail_lim)
        reason[v] = why
        trail.append(code)
        return True

    for code in units:
        if not enqueue(code, -1):
            return UNSAT, None

    def propagate() -> int:
        nonlocal qhead
        while qhead < len(trail):
            fal = trail[qhead] ^ 1
            qhead += 1
            wl = watches[fal]
            keep = 0
            i = 0
            n_wl = len(wl)
            while i < n_wl:
                ci = wl[i]
                start = offsets[ci]
                if lits[start] == fal:
                    lits[start], lits[start + 1] = lits[start + 1], lits[start]
                first = lits[start]
                if lit_value(first) == 1:
                    wl[keep] = ci
                    keep += 1
                    i += 1
                    continue
                end = offsets[ci + 1]
                moved = False
                for m in range(start + 2, end):
                    if lit_value(lits[m]) != 0:
                        lits[start + 1], lits[m] = lits[m], lits[start + 1]
                        watches[lits[start + 1]].append(ci)
                        moved = True
                        break
                if moved:
                    i += 1
                    continue
                wl[keep] = ci
                keep += 1
                i += 1
                if lit_value(first) == 0:
                    while i < n_wl:
                        wl[keep] = wl[i]
                        keep += 1
                        i += 1
                    del wl[keep:]
                    qhead = len(trail)
                    return ci
                enqueue(first, ci)
            del wl[keep:]
        return -1

    def analyze(confl: int) -> tuple[list[int], int]:
        learnt = [0]
        seen = set()
        counter = 0
        p_code = -1
        idx = len(trail) - 1
        btlevel = 0
        cur = len(trail_lim)
        c = confl
        while True:
            start = offsets[c] + (0 if p_code < 0 else 1)
            for m in range(start, offsets[c + 1]):
                q = lits[m]
                v = q >> 1
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    activity[v] += 1
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
                        if level[v] > btlevel:
                            btlevel = level[v]
            while (trail[idx] >> 1) not in seen:
                idx -= 1
            p_code = trail[idx]
            idx -= 1
            seen.discard(p_code >> 1)
            counter -= 1
            if counter == 0:
                break
            c = reason[p_code >> 1]
        learnt[0] = p_code ^ 1
        return learnt, btlevel

    def cancel_until(lvl: int) -> None:
        nonlocal qhead
        while len(trail_lim) > lvl:
            mark = trail_lim.pop()
            while len(trail) > mark:
                code = trail.pop()
                v = code >> 1
                phase[v] = code & 1
                assigns[v] = -1
        qhead = len(trail)

    def record(learnt: list[int]) -> None:
        if len(learnt) == 1:
            enqueue(learnt[0], -1)
            return
        # second watch: a literal from the backjump level (max level)
        best = 1
        for m in range(2, len(learnt)):
            if level[learnt[m] >> 1] > level[learnt[best] >> 1]:
                best = m
        learnt[1], learnt[best] = learnt[best], learnt[1]
        ci = len(offsets) - 1
        lits.extend(learnt)
        offsets.append(len(lits))
        watches[learnt[0]].append(ci)
        watches[learnt[1]].append(ci)
        enqueue(learnt[0], ci)

    conflicts = 0
    restart_limit = _FIRST_RESTART
    since_restart = 0

    while True:
        confl = propagate()
        if confl >= 0:
            if not trail_lim:
                return UNSAT, None
            conflicts += 1
            since_restart += 1
            if max_conflicts and conflicts > max_conflicts:
                return BUDGET, None
            learnt, btlevel = analyze(confl)
            cancel_until(btlevel)
            record(learnt)
            if conflicts % _DECAY_INTERVAL == 0:
                for v in range(nv):
                    activity[v] >>= 1
            continue
        if len(trail) == nv:
            return SAT, [bool(a) for a in assigns]
        if since_restart >= restart_limit:
            since_restart = 0
            restart_limit += restart_limit >> 1
            cancel_until(0)
            continue
        best = -1
        best_act = -1
        for v in range(nv):
            if assigns[v] < 0 and activity[v] > best_act:
                best = v
                best_act = activity[v]
        trail_lim.append(len(trail))
        enqueue((best << 1) | phase[best], -1)


def _code(lit: int, num_vars: int) -> int:
    v = abs(lit)
    if lit == 0 or v > num_vars:
        raise ValueError(f"literal {lit} outside 1..{num_vars}")
    return ((v - 1) << 1) | (1 if lit < 0 else 0)
