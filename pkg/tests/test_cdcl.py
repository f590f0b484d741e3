import itertools

import numpy as np
import pytest

import oracle
from gameforms import _backend, _cdcl_py, flat_clauses

try:
    from gameforms import _kernels
except ImportError:
    _kernels = None

SOLVERS = [("pure", _cdcl_py.solve_cnf)]
if _kernels is not None:
    SOLVERS.append(("compiled", _kernels.solve_cnf))


def run(solver, num_vars, clauses, max_conflicts=0):
    lits, offsets = flat_clauses(clauses)
    return solver(num_vars, lits, offsets, max_conflicts)


def check_model(model, num_vars, clauses):
    assert len(model) == num_vars
    valuation = {v + 1: bool(model[v]) for v in range(num_vars)}
    assert all(any(valuation[abs(l)] == (l > 0) for l in c) for c in clauses)


def pigeonhole(holes: int):
    """holes+1 pigeons into holes holes; classic UNSAT family."""
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(holes + 1)]
    for h in range(holes):
        for p1, p2 in itertools.combinations(range(holes + 1), 2):
            clauses.append([-var(p1, h), -var(p2, h)])
    return (holes + 1) * holes, clauses


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_empty_formula_is_sat(name, solver):
    status, model = run(solver, 3, [])
    assert status == _backend.SAT and len(model) == 3


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_unit_chain_propagates(name, solver):
    clauses = [[1], [-1, 2], [-2, 3], [-3, -4]]
    status, model = run(solver, 4, clauses)
    assert status == _backend.SAT
    check_model(model, 4, clauses)
    assert model[:3] == [1, 1, 1] and model[3] == 0


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_immediate_contradiction(name, solver):
    status, _ = run(solver, 1, [[1], [-1]])
    assert status == _backend.UNSAT


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_duplicate_and_tautological_literals(name, solver):
    clauses = [[1, 1], [1, -1, 2], [-1, -1, 2]]
    status, model = run(solver, 2, clauses)
    assert status == _backend.SAT
    check_model(model, 2, [[1], [2]])


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_pigeonhole_unsat(name, solver):
    for holes in (2, 3, 4):
        num_vars, clauses = pigeonhole(holes)
        status, _ = run(solver, num_vars, clauses)
        assert status == _backend.UNSAT


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_conflict_budget_reported(name, solver):
    num_vars, clauses = pigeonhole(5)
    status, _ = run(solver, num_vars, clauses, max_conflicts=3)
    assert status == _backend.BUDGET


@pytest.mark.parametrize("name,solver", SOLVERS)
def test_random_3sat_matches_oracle(name, solver, rng):
    for _ in range(150):
        num_vars = int(rng.integers(3, 9))
        num_clauses = int(rng.integers(1, 4 * num_vars))
        clauses = []
        for _ in range(num_clauses):
            vs = rng.choice(num_vars, size=3, replace=False) + 1
            signs = rng.choice([-1, 1], size=3)
            clauses.append([int(v * s) for v, s in zip(vs, signs)])
        expected = oracle.cnf_satisfiable(num_vars, clauses) is not None
        status, model = run(solver, num_vars, clauses)
        assert (status == _backend.SAT) == expected
        if status == _backend.SAT:
            check_model(model, num_vars, clauses)


@pytest.mark.skipif(_kernels is None, reason="compiled kernels unavailable")
def test_backends_agree_past_restart_threshold():
    # near-threshold ratio at n=70: several seeds exceed the first restart
    # limit (100 conflicts) and the batch mixes SAT with UNSAT
    num_vars = 70
    restarted = 0
    for seed in range(12):
        r = np.random.default_rng(seed)
        clauses = []
        for _ in range(int(4.26 * num_vars)):
            vs = r.choice(num_vars, size=3, replace=False) + 1
            signs = r.choice([-1, 1], size=3)
            clauses.append([int(v * s) for v, s in zip(vs, signs)])
        probe, _ = run(_cdcl_py.solve_cnf, num_vars, clauses, max_conflicts=99)
        restarted += probe == _backend.BUDGET
        s1, m1 = run(_cdcl_py.solve_cnf, num_vars, clauses)
        s2, m2 = run(_kernels.solve_cnf, num_vars, clauses)
        assert s1 == s2
        if s1 == _backend.SAT:
            check_model(m1, num_vars, clauses)
            check_model(m2, num_vars, clauses)
    assert restarted >= 3


def test_backend_dispatch_constants():
    assert (_backend.SAT, _backend.UNSAT, _backend.BUDGET) == (10, 20, 30)
