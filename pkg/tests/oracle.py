"""Independent brute-force oracles, kept free of the package's internals.

Everything here works on plain nested lists (row-major, last axis fastest,
None = undefined) so the expected values are pinned by code that shares no
logic with the implementation under test.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence


def shape_of(nested) -> tuple[int, ...]:
    dims = []
    node = nested
    while isinstance(node, list):
        dims.append(len(node))
        node = node[0] if node else None
    return tuple(dims)


def cells_of(nested) -> dict[tuple[int, ...], object]:
    """profile -> value for every defined cell."""
    dims = shape_of(nested)
    out = {}
    for profile in itertools.product(*(range(d) for d in dims)):
        node = nested
        for c in profile:
            node = node[c]
        if node is not None:
            out[profile] = node
    return out


def assignable(nested) -> bool:
    """Exhaustive search over all per-strategy outcome assignments.

    Cost |A|**sum(dims); callers keep the inputs tiny.
    """
    dims = shape_of(nested)
    cells = cells_of(nested)
    if not cells:
        return True
    outcomes = sorted(set(cells.values()))
    lanes = [list(itertools.product(outcomes, repeat=d)) for d in dims]
    for pick in itertools.product(*lanes):
        if all(
            any(pick[i][profile[i]] == value for i in range(len(dims)))
            for profile, value in cells.items()
        ):
            return True
    return False


def is_wtt(nested, filler="\x00*") -> bool:
    """Every 2x2 subarray (direction, plane pair, line pair) has a constant
    row or column; undefined cells participate as one shared filler value."""
    dims = shape_of(nested)
    cells = cells_of(nested)
    n = len(dims)
    for d in range(n):
        others = [r for r in range(n) if r != d]
        lines = list(itertools.product(*(range(dims[r]) for r in others)))

        def at(plane: int, line: Sequence[int]):
            profile = [0] * n
            profile[d] = plane
            for r, c in zip(others, line):
                profile[r] = c
            return cells.get(tuple(profile), filler)

        for j, k in itertools.combinations(range(dims[d]), 2):
            for la, lb in itertools.combinations(lines, 2):
                ja, jb = at(j, la), at(j, lb)
                ka, kb = at(k, la), at(k, lb)
                if ja != jb and ka != kb and ja != ka and jb != kb:
                    return False
    return True


def cnf_satisfiable(num_vars: int, clauses) -> Optional[dict[int, bool]]:
    """First satisfying assignment over all 2**num_vars valuations, or None."""
    for bits in itertools.product((False, True), repeat=num_vars):
        valuation = {v + 1: bits[v] for v in range(num_vars)}
        if all(
            any(valuation[abs(l)] == (l > 0) for l in clause) for clause in clauses
        ):
            return valuation
    return None
