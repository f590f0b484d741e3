"""Kernel selection: compiled extension with a pure-Python fallback.

Set GAMEFORMS_PURE=1 to force the fallback.  Results are identical either
way; only speed differs.
"""

from __future__ import annotations

import os

from . import _cdcl_py, _wtt_py

SAT = _cdcl_py.SAT
UNSAT = _cdcl_py.UNSAT
BUDGET = _cdcl_py.BUDGET

# Above this cell count the vectorized numpy scan beats the compiled naive
# quadruple loop, which is quadratic in the cell count.
_VECTOR_CUTOFF = 4096

if os.environ.get("GAMEFORMS_PURE") == "1":
    _kernels = None
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        _kernels = None

BACKEND = "compiled" if _kernels is not None else "pure"


def wtt_violation(cells, dims):
    if _kernels is None or cells.size > _VECTOR_CUTOFF:
        return _wtt_py.wtt_violation(cells, dims)
    return _kernels.wtt_violation(cells, dims)


def solve_cnf(num_vars, clause_lits, clause_offsets, max_conflicts=0):
    if _kernels is None:
        return _cdcl_py.solve_cnf(num_vars, clause_lits, clause_offsets, max_conflicts)
    return _kernels.solve_cnf(num_vars, clause_lits, clause_offsets, max_conflicts)
