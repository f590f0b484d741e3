import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from gameforms import (
    DominanceKind,
    GameForm,
    GameFormError,
    Hyperplane,
    InvariantViolation,
    NotWttError,
    backend_name,
    build_dominance_graph,
    build_dominance_graphs,
    classify_pair,
    fill_undefined,
    find_k_box,
    find_sink,
    find_wtt_violation,
    is_tight_two_person,
    is_tt,
    is_wtt,
    require_wtt,
)
from gameforms import _wtt_py
from conftest import load_fixture, random_form

try:
    from gameforms import _kernels
except ImportError:
    _kernels = None


WTT_FIXTURES = ("example-2.json", "form-3.json", "nosink-3d-1.json", "nosink-3d-2.json")
NON_WTT_FIXTURES = (
    "example-1.json",
    "example-3.json",
    "example-4.json",
    "example-5.json",
    "seq-3.json",
    "fig-no-3D.json",
    "forcing-cube-left.json",
    "forcing-cube-right.json",
)


@pytest.mark.parametrize("name", WTT_FIXTURES)
def test_wtt_fixtures(name):
    f = load_fixture(name)
    assert is_wtt(f)
    assert find_wtt_violation(f) is None
    require_wtt(f)


@pytest.mark.parametrize("name", NON_WTT_FIXTURES)
def test_non_wtt_fixtures(name):
    f = load_fixture(name)
    assert not is_wtt(f)
    hit = find_wtt_violation(f)
    cells = hit.profiles(f)
    filled = fill_undefined(f)
    ja, jb, ka, kb = (filled.get_id(p) for p in cells)
    assert ja != jb and ka != kb and ja != ka and jb != kb
    with pytest.raises(NotWttError):
        require_wtt(f)


def test_is_wtt_matches_oracle(rng):
    for _ in range(150):
        f = random_form(rng, max_extent=3, max_outcomes=3, undefined_rate=0.2)
        assert is_wtt(f) == oracle.is_wtt(f.to_nested()), f.to_nested()


@pytest.mark.skipif(_kernels is None, reason="compiled kernels unavailable")
def test_kernels_agree_on_witness(rng):
    for _ in range(300):
        f = random_form(rng, max_extent=4, max_outcomes=4)
        pure = _wtt_py.wtt_violation(f.cells, f.dims)
        fast = _kernels.wtt_violation(f.cells, f.dims)
        if pure is None:
            assert fast is None
        else:
            assert tuple(map(int, pure)) == tuple(map(int, fast))


def test_vectorized_and_naive_paths_agree(rng):
    # both sides of the pure kernel's size cutoff
    small = random_form(rng, max_players=2, max_extent=3, max_outcomes=3)
    big = GameForm(
        (20, 20, 16),
        ("o1", "o2"),
        rng.integers(0, 2, size=6400, dtype=np.int32),
    )
    for f in (small, big):
        got = _wtt_py.wtt_violation(f.cells, f.dims)
        assert (got is None) == oracle.is_wtt(f.to_nested())


def _naive_relation(form, direction, j, k):
    mat = np.moveaxis(form.nd(), direction, 0).reshape(form.dims[direction], -1)
    u, v = mat[j], mat[k]
    diff = u != v
    du, dv = u[diff], v[diff]
    return (
        bool(diff.any()),
        bool((du == du[0]).all()) if diff.any() else None,
        bool((dv == dv[0]).all()) if diff.any() else None,
    )


def test_classify_pair_trichotomy(rng):
    for _ in range(80):
        f = random_form(rng, max_extent=3, max_outcomes=3)
        f = fill_undefined(f)
        for d in range(f.n):
            for j in range(f.dims[d]):
                for k in range(j + 1, f.dims[d]):
                    differs, u_const, v_const = _naive_relation(f, d, j, k)
                    if not differs:
                        with pytest.raises(GameFormError):
                            classify_pair(f, d, j, k)
                        continue
                    rel = classify_pair(f, d, j, k)
                    if u_const and v_const:
                        assert rel.kind is DominanceKind.MUTUAL
                        assert rel.c != rel.d
                    elif u_const:
                        assert rel.kind is DominanceKind.J_STRICTLY_DOMINATES_K
                    elif v_const:
                        assert rel.kind is DominanceKind.K_STRICTLY_DOMINATES_J
                    else:
                        assert rel.kind is DominanceKind.NOT_WTT


def test_form3_dominance_cycles():
    f = load_fixture("form-3.json")
    a, b, c = (f.outcome_id(x) for x in "abc")
    for direction in (0, 1):
        r13 = classify_pair(f, direction, 0, 2)
        assert r13.kind is DominanceKind.J_STRICTLY_DOMINATES_K and r13.c == a
        r32 = classify_pair(f, direction, 2, 1)
        assert r32.kind is DominanceKind.J_STRICTLY_DOMINATES_K and r32.c == c
        r21 = classify_pair(f, direction, 1, 0)
        assert r21.kind is DominanceKind.J_STRICTLY_DOMINATES_K and r21.c == b
        graph = build_dominance_graph(f, direction)
        assert graph.proper == (a, b, c)
        assert graph.sinks == (False, False, False)


def test_nosink_3d_h_cycle():
    f = load_fixture("nosink-3d-1.json")
    a, b, c = (f.outcome_id(x) for x in "abc")
    r13 = classify_pair(f, 0, 0, 2)
    assert r13.kind is DominanceKind.J_STRICTLY_DOMINATES_K and r13.c == a
    r32 = classify_pair(f, 0, 2, 1)
    assert r32.kind is DominanceKind.J_STRICTLY_DOMINATES_K and r32.c == c
    r21 = classify_pair(f, 0, 1, 0)
    assert r21.kind is DominanceKind.J_STRICTLY_DOMINATES_K and r21.c == b


@pytest.mark.parametrize("name", WTT_FIXTURES)
def test_no_sink_fixtures_have_no_sink_nor_k_box(name):
    f = load_fixture(name)
    assert find_sink(f) is None
    graphs = build_dominance_graphs(f)
    assert find_k_box(f, graphs) is None


def test_sink_detection():
    # the constant row dominates, so the other row is dominated by all
    # parallels and is the sink
    f = GameForm.from_nested([["a", "b"], ["c", "c"]])
    assert find_sink(f) == Hyperplane(0, 0)


def test_extent_one_direction_is_vacuous_sink():
    f = GameForm.from_nested([["a", "b", "c"]])
    assert find_sink(f) == Hyperplane(0, 0)


def test_build_dominance_graph_raises_with_witness():
    f = load_fixture("example-1.json")
    with pytest.raises(NotWttError) as exc:
        build_dominance_graph(f, 0)
    witness = exc.value.violation
    cells = witness.profiles(f)
    vals = [f.get_id(p) for p in cells]
    assert vals[0] != vals[1] and vals[2] != vals[3]
    assert vals[0] != vals[2] and vals[1] != vals[3]


def test_find_k_box_requires_proper_outcomes():
    f = GameForm.from_nested([["a", "b"], ["c", "c"]])
    graphs = build_dominance_graphs(f)
    with pytest.raises(GameFormError):
        find_k_box(f, graphs)


def test_is_tt_two_person_equals_wtt(rng):
    for _ in range(60):
        f = random_form(rng, max_players=2, max_extent=3, max_outcomes=3)
        assert is_tt(f) == is_wtt(f)


def test_tt_implies_tight(rng):
    hits = 0
    for _ in range(200):
        f = random_form(rng, max_players=2, max_extent=3, max_outcomes=3)
        if is_tt(f):
            hits += 1
            assert is_tight_two_person(fill_undefined(f))
    assert hits > 0


def test_known_tightness_values():
    assert not is_tight_two_person(GameForm.from_nested([["a", "b"], ["b", "a"]]))
    assert not is_tight_two_person(load_fixture("example-1.json"))
    assert is_tight_two_person(load_fixture("example-2.json"))


def test_backend_name_reports():
    assert backend_name() in ("pure", "compiled")
