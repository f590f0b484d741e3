"""Pure-Python weak-total-tightness kernel.

Vectorized per hyperplane pair: a pair (j, k) admits a violating 2x2 subarray
iff among the lines where the two hyperplanes differ there are two lines with
different values on j AND different values on k.  (If not all j-values on the
differing lines are equal and not all k-values are equal, such a pair of
lines exists; the converse is immediate.)  The reported witness is the first
one in scan order: direction, then hyperplane pair (j < k), then line pair
(l < l'), all ascending - identical to the compiled kernel's naive scan.
"""

from __future__ import annotations

from math import prod
from typing import Optional

import numpy as np

Violation = tuple[int, int, int, int, int]  # direction, j, k, line_a, line_b


def wtt_violation(cells: np.ndarray, dims: tuple[int, ...]) -> Optional[Violation]:
    """First 2x2 subarray without a constant row or column, or None.

    ``cells`` must be fully defined (no UNDEFINED entries); callers fill
    partial forms first.
    """
    n = len(dims)
    p = prod(dims)
    if p == 0:
        return None
    nd = cells.reshape(dims)
    for direction in range(n):
        si = dims[direction]
        if si < 2:
            continue
        lines = p // si
        if lines < 2:
            continue
        mat = np.moveaxis(nd, direction, 0).reshape(si, lines)
        for j in range(si - 1):
            u = mat[j]
            for k in range(j + 1, si):
                v = mat[k]
                diff = np.flatnonzero(u != v)
                if diff.size < 2:
                    continue
                du = u[diff]
                dv = v[diff]
                if (du == du[0]).all() or (dv == dv[0]).all():
                    continue
                for pos in range(diff.size - 1):
                    la = int(diff[pos])
                    rest = diff[pos + 1 :]
                    hits = rest[(u[rest] != u[la]) & (v[rest] != v[la])]
                    if hits.size:
                        return (direction, j, k, la, int(hits[0]))
    return None
