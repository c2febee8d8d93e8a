import itertools
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wkb import kernel
from wkb.kernel import BUDGET, SAT, UNSAT, normalize_clauses, normalize_pb, solve


def lits(n):
    return st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))


@st.composite
def instances(draw, max_vars=7):
    n = draw(st.integers(1, max_vars))
    clauses = draw(st.lists(st.lists(lits(n), min_size=1, max_size=3), max_size=10))
    pbs = draw(
        st.lists(
            st.tuples(st.lists(st.tuples(lits(n), st.integers(0, 4)), max_size=5), st.integers(0, 6)),
            max_size=2,
        )
    )
    return n, clauses, pbs


def brute(n, clauses, pbs):
    for bits in itertools.product((False, True), repeat=n):
        val = lambda l: bits[abs(l) - 1] == (l > 0)  # noqa: E731
        if all(any(val(l) for l in c) for c in clauses) and all(
            sum(w for l, w in t if val(l)) <= b for t, b in pbs
        ):
            return True
    return False


def check_model(model, clauses, pbs):
    val = lambda l: model[abs(l)] == (l > 0)  # noqa: E731
    assert all(any(val(l) for l in c) for c in clauses)
    assert all(sum(w for l, w in t if val(l)) <= b for t, b in pbs)


@given(instances())
def test_kernels_agree_with_brute_force(inst):
    n, clauses, pbs = inst
    expected = brute(n, clauses, pbs)
    for backend in ["python"] + (["compiled"] if kernel.compiled_available() else []):
        for prune in (True, False):
            res = solve(n, clauses, pbs, backend=backend, prune=prune)
            assert res.status == (SAT if expected else UNSAT)
            if expected:
                check_model(res.model, clauses, pbs)


def test_pigeonhole_is_unsat(backend):
    # 5 pigeons, 4 holes
    P, H = 5, 4
    var = lambda p, h: p * H + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(H)] for p in range(P)]
    for h in range(H):
        for p, q in itertools.combinations(range(P), 2):
            clauses.append([-var(p, h), -var(q, h)])
    assert solve(P * H, clauses, backend=backend).status == UNSAT


def test_node_budget(backend):
    P, H = 7, 6
    var = lambda p, h: p * H + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(H)] for p in range(P)]
    for h in range(H):
        for p, q in itertools.combinations(range(P), 2):
            clauses.append([-var(p, h), -var(q, h)])
    assert solve(P * H, clauses, max_nodes=5, backend=backend).status == BUDGET


def test_large_weights_fall_back_to_python():
    big = 1 << 63
    res = solve(2, [[1, 2]], [([(1, big), (2, big)], big)], backend="compiled" if kernel.compiled_available() else None)
    assert res.status == SAT
    assert res.backend == "python"


def test_normalize_clauses():
    assert normalize_clauses([[1, -1, 2], [2, 2, 3]]) == [[2, 3]]
    assert normalize_clauses([[1], []]) is None


def test_normalize_pb():
    # x and not-x: one of them is always paid
    assert normalize_pb([(1, 2), (-1, 3)], 4) == ([], None)
    assert normalize_pb([(1, 2), (-1, 3)], 1) is None
    units, pb = normalize_pb([(1, 5), (2, 1), (3, 1)], 1)
    assert units == [[-1]]
    assert pb == ([(2, 1), (3, 1)], 1)
    assert normalize_pb([(1, 0)], 0) == ([], None)
    with pytest.raises(ValueError):
        normalize_pb([(1, -1)], 0)


def test_trace_lines_are_machine_readable():
    lines = []
    clauses = [[1, 2, 3], [-1, -2], [-2, -3], [4, 5], [-4, -5]]
    res = solve(5, clauses, [([(1, 1), (2, 1), (3, 1), (4, 1)], 2)], trace=lines.append)
    assert res.status == SAT and res.backend == "python"
    assert lines
    for line in lines:
        depth, decision, cost = line.split("|")
        assert int(depth) >= 1
        assert re.fullmatch(r"-?\d+", decision)
        assert int(cost) >= 0


def test_environment_forces_python_kernel(monkeypatch):
    monkeypatch.setenv("WKB_KERNEL", "python")
    assert kernel.default_backend() == "python"
    assert solve(1, [[1]]).backend == "python"
    monkeypatch.delenv("WKB_KERNEL")
    assert kernel.default_backend() == ("compiled" if kernel.compiled_available() else "python")
