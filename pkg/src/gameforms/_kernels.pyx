# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: naive weak-total-tightness scan and a CDCL solver.

These are twins of gameforms._wtt_py and gameforms._cdcl_py.  The scan
reports the same first witness; the solver makes the same decisions and
returns the same model.  Keep them in sync.
"""

from libcpp.algorithm cimport sort as cpp_sort
from libcpp.vector cimport vector

import numpy as np

SAT = 10
UNSAT = 20
BUDGET = 30


def wtt_violation(cells, dims):
    """First 2x2 subarray without a constant row or column, or None.

    ``cells`` must be fully defined.  Returns (direction, j, k, line_a,
    line_b) with j < k hyperplane indices and line_a < line_b row-major
    line indices within the (direction, extent)-matrix view.
    """
    cdef int n = len(dims)
    cdef long p = 1
    for extent in dims:
        p *= extent
    if p == 0:
        return None
    nd = np.asarray(cells, dtype=np.int32).reshape(dims)
    cdef const int[:, ::1] mat
    cdef int direction, si
    cdef long lines
    cdef tuple hit
    for direction in range(n):
        si = dims[direction]
        if si < 2:
            continue
        lines = p // si
        if lines < 2:
            continue
        mat = np.ascontiguousarray(np.moveaxis(nd, direction, 0).reshape(si, lines))
        hit = _scan_direction(mat, si, lines)
        if hit is not None:
            return (direction, hit[0], hit[1], hit[2], hit[3])
    return None


cdef tuple _scan_direction(const int[:, ::1] mat, int si, long lines):
    cdef int j, k, a, b, c, d
    cdef long la, lb
    for j in range(si - 1):
        for k in range(j + 1, si):
            for la in range(lines - 1):
                a = mat[j, la]
                c = mat[k, la]
                if a == c:
                    continue
                for lb in range(la + 1, lines):
                    b = mat[j, lb]
                    d = mat[k, lb]
                    if b != d and a != b and c != d:
                        return (j, k, la, lb)
    return None


cdef enum:
    DECAY_INTERVAL = 128
    FIRST_RESTART = 100


cdef class _Cdcl:
    cdef int nv
    cdef vector[int] lits
    cdef vector[long] offsets
    cdef vector[vector[int]] watches
    cdef vector[signed char] assigns
    cdef vector[int] level
    cdef vector[long] reason
    cdef vector[signed char] phase
    cdef vector[long] activity
    cdef vector[int] trail
    cdef vector[long] trail_lim
    cdef vector[signed char] seen
    cdef long qhead

    def __cinit__(self, int num_vars):
        self.nv = num_vars
        self.offsets.push_back(0)
        self.watches.resize(2 * num_vars)
        self.assigns.resize(num_vars, -1)
        self.level.resize(num_vars, 0)
        self.reason.resize(num_vars, -1)
        self.phase.resize(num_vars, 0)
        self.activity.resize(num_vars, 0)
        self.seen.resize(num_vars, 0)
        self.qhead = 0

    cdef inline int lit_value(self, int code):
        cdef int v = self.assigns[code >> 1]
        if v < 0:
            return -1
        return v ^ (code & 1)

    cdef bint enqueue(self, int code, long why):
        cdef int val = self.lit_value(code)
        if val >= 0:
            return val == 1
        cdef int v = code >> 1
        self.assigns[v] = 1 ^ (code & 1)
        self.level[v] = <int> self.trail_lim.size()
        self.reason[v] = why
        self.trail.push_back(code)
        return True

    cdef long propagate(self):
        cdef vector[int]* wl
        cdef long ci, start, end, m
        cdef size_t i, keep, n_wl
        cdef int fal, first, tmp
        cdef bint moved
        while self.qhead < <long> self.trail.size():
            fal = self.trail[self.qhead] ^ 1
            self.qhead += 1
            wl = &self.watches[fal]
            keep = 0
            i = 0
            n_wl = wl[0].size()
            while i < n_wl:
                ci = wl[0][i]
                start = self.offsets[ci]
                if self.lits[start] == fal:
                    tmp = self.lits[start]
                    self.lits[start] = self.lits[start + 1]
                    self.lits[start + 1] = tmp
                first = self.lits[start]
                if self.lit_value(first) == 1:
                    wl[0][keep] = ci
                    keep += 1
                    i += 1
                    continue
                end = self.offsets[ci + 1]
                moved = False
                for m in range(start + 2, end):
                    if self.lit_value(self.lits[m]) != 0:
                        tmp = self.lits[start + 1]
                        self.lits[start + 1] = self.lits[m]
                        self.lits[m] = tmp
                        self.watches[self.lits[start + 1]].push_back(<int> ci)
                        moved = True
                        break
                if moved:
                    i += 1
                    continue
                wl[0][keep] = ci
                keep += 1
                i += 1
                if self.lit_value(first) == 0:
                    while i < n_wl:
                        wl[0][keep] = wl[0][i]
                        keep += 1
                        i += 1
                    wl[0].resize(keep)
                    self.qhead = <long> self.trail.size()
                    return ci
                self.enqueue(first, ci)
            wl[0].resize(keep)
        return -1

    cdef tuple analyze(self, long confl):
        cdef vector[int] learnt
        learnt.push_back(0)
        cdef int counter = 0
        cdef int p_code = -1
        cdef long idx = <long> self.trail.size() - 1
        cdef int btlevel = 0
        cdef int cur = <int> self.trail_lim.size()
        cdef long c = confl
        cdef long start, m
        cdef int q, v
        while True:
            start = self.offsets[c] + (0 if p_code < 0 else 1)
            for m in range(start, self.offsets[c + 1]):
                q = self.lits[m]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self.seen[v] = 1
                    self.activity[v] += 1
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.push_back(q)
                        if self.level[v] > btlevel:
                            btlevel = self.level[v]
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p_code = self.trail[idx]
            idx -= 1
            self.seen[p_code >> 1] = 0
            counter -= 1
            if counter == 0:
                break
            c = self.reason[p_code >> 1]
        learnt[0] = p_code ^ 1
        out = [learnt[m] for m in range(<long> learnt.size())]
        for m in range(1, <long> learnt.size()):
            self.seen[learnt[m] >> 1] = 0
        return out, btlevel

    cdef void cancel_until(self, int lvl):
        cdef long mark
        cdef int code, v
        while <int> self.trail_lim.size() > lvl:
            mark = self.trail_lim.back()
            self.trail_lim.pop_back()
            while <long> self.trail.size() > mark:
                code = self.trail.back()
                self.trail.pop_back()
                v = code >> 1
                self.phase[v] = code & 1
                self.assigns[v] = -1
        self.qhead = <long> self.trail.size()

    cdef void record(self, list learnt):
        cdef long k = len(learnt)
        cdef long ci, m, best
        cdef int tmp
        if k == 1:
            self.enqueue(learnt[0], -1)
            return
        best = 1
        for m in range(2, k):
            if self.level[<int> learnt[m] >> 1] > self.level[<int> learnt[best] >> 1]:
                best = m
        tmp = learnt[1]
        learnt[1] = learnt[best]
        learnt[best] = tmp
        ci = <long> self.offsets.size() - 1
        for m in range(k):
            self.lits.push_back(learnt[m])
        self.offsets.push_back(<long> self.lits.size())
        self.watches[<int> learnt[0]].push_back(<int> ci)
        self.watches[<int> learnt[1]].push_back(<int> ci)
        self.enqueue(learnt[0], ci)

    cdef tuple run(self, long max_conflicts):
        cdef long conflicts = 0
        cdef long restart_limit = FIRST_RESTART
        cdef long since_restart = 0
        cdef long confl
        cdef int v, best, btlevel
        cdef long best_act
        cdef list learnt
        while True:
            confl = self.propagate()
            if confl >= 0:
                if self.trail_lim.empty():
                    return UNSAT, None
                conflicts += 1
                since_restart += 1
                if max_conflicts and conflicts > max_conflicts:
                    return BUDGET, None
                learnt, btlevel = self.analyze(confl)
                self.cancel_until(btlevel)
                self.record(learnt)
                if conflicts % DECAY_INTERVAL == 0:
                    for v in range(self.nv):
                        self.activity[v] >>= 1
                continue
            if <int> self.trail.size() == self.nv:
                return SAT, [bool(self.assigns[v]) for v in range(self.nv)]
            if since_restart >= restart_limit:
                since_restart = 0
                restart_limit += restart_limit >> 1
                self.cancel_until(0)
                continue
            best = -1
            best_act = -1
            for v in range(self.nv):
                if self.assigns[v] < 0 and self.activity[v] > best_act:
                    best = v
                    best_act = self.activity[v]
            self.trail_lim.push_back(<long> self.trail.size())
            self.enqueue((best << 1) | self.phase[best], -1)


def solve_cnf(num_vars, clause_lits, clause_offsets, max_conflicts=0):
    """Decide the CNF; on SAT also return the model as a bool list per var.

    Same contract as gameforms._cdcl_py.solve_cnf.
    """
    cdef int nv = num_vars
    cdef _Cdcl s = _Cdcl(nv)
    cdef const int[::1] raw = np.ascontiguousarray(clause_lits, dtype=np.int32)
    cdef const long long[::1] ends = np.ascontiguousarray(clause_offsets, dtype=np.int64)
    cdef vector[int] units
    cdef vector[int] tmp
    cdef long c, m, a, b, ci
    cdef int lit, v, code, w
    cdef bint taut
    for c in range(<long> ends.shape[0] - 1):
        a = ends[c]
        b = ends[c + 1]
        if a == b:
            return UNSAT, None
        tmp.clear()
        for m in range(a, b):
            lit = raw[m]
            v = lit if lit > 0 else -lit
            if lit == 0 or v > nv:
                raise ValueError(f"literal {lit} outside 1..{nv}")
            tmp.push_back(((v - 1) << 1) | (1 if lit < 0 else 0))
        cpp_sort(tmp.begin(), tmp.end())
        w = 0
        taut = False
        for m in range(<long> tmp.size()):
            code = tmp[m]
            if w > 0 and code == tmp[w - 1]:
                continue
            if w > 0 and code == (tmp[w - 1] ^ 1):
                taut = True
                break
            tmp[w] = code
            w += 1
        if taut:
            continue
        if w == 1:
            units.push_back(tmp[0])
            continue
        ci = <long> s.offsets.size() - 1
        for m in range(w):
            s.lits.push_back(tmp[m])
        s.offsets.push_back(<long> s.lits.size())
        s.watches[tmp[0]].push_back(<int> ci)
        s.watches[tmp[1]].push_back(<int> ci)
    for m in range(<long> units.size()):
        if not s.enqueue(units[m], -1):
            return UNSAT, None
    return s.run(max_conflicts)
