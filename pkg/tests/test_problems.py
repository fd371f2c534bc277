from __future__ import annotations

import threading

import pytest
from hypothesis import given, settings, strategies as st

from redlab.problems import counted, mu_witness, path_problem, trivial_problem, words
from redlab.trees import ExplicitTree, full_tree, secret_prefix_tree

EMPTY_TREE = ExplicitTree([()], 4)


def zero_prefix_tree(depth):
    return ExplicitTree([(0,) * i for i in range(depth + 1)], depth)


def test_trivial_problem():
    p = trivial_problem()
    assert p.instance_valid((5, 7, 9))
    assert p.is_solution((1,), ())
    assert list(p.enumerate_instances(L=1, B=2)) == [(0,), (1,)]
    assert len(list(p.enumerate_instances(L=3, B=3))) == 27


def test_enumeration_is_lexicographic_and_deterministic():
    assert list(words(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    p = trivial_problem(2, 3)
    assert list(p.enumerate_instances()) == list(p.enumerate_instances())


def test_path_problem_examples():
    d = 4
    full = path_problem(full_tree(d), d)
    assert full.is_solution((0,) * (d + 1), (0,) * (d + 1))
    assert not full.is_solution((1,) * (d + 1), (3,) + (0,) * d)
    tiny = path_problem(EMPTY_TREE, d)
    assert tiny.is_solution((1,) * (d + 1), (1,) + (0,) * d)


def test_path_problem_collapses_nonzero_entries():
    d = 3
    p = path_problem(secret_prefix_tree((1, 0), d), d)
    # 7 is read as 1, so the prefix <7, 5> = <1, 1> leaves the tree at length 2
    assert p.is_solution((7, 5, 0, 0), (1, 0, 0, 0))
    assert not p.is_solution((7, 0, 0, 0), (1, 0, 0, 0))


def test_path_problem_rejects_witness_beyond_depth():
    p = path_problem(full_tree(3), 3)
    with pytest.raises(ValueError):
        p.is_solution((0, 0, 0, 0), (4, 0, 0, 0))


@pytest.mark.parametrize(
    "tree",
    [full_tree(3), EMPTY_TREE, zero_prefix_tree(3), secret_prefix_tree((1, 0, 1), 3)],
    ids=["full", "root-only", "zeros", "secret"],
)
def test_enumerated_pairs_are_solutions(tree):
    d = 3
    p = path_problem(tree, d)
    for u in p.enumerate_instances():
        assert p.instance_valid(u)
        for v in p.enumerate_solutions(u):
            assert p.is_solution(u, v)


def test_path_solution_enumeration_is_complete_at_small_depth():
    d = 2
    tree = secret_prefix_tree((1,), d)
    p = path_problem(tree, d)
    for u in p.enumerate_instances():
        listed = set(p.enumerate_solutions(u))
        brute = {(v0,) + r for v0 in range(d + 1) for r in words(d, d + 2) if p.is_solution(u, (v0,) + r)}
        assert listed == brute


def test_escape_verdict_stable_under_larger_depth():
    secret = (1, 1, 0)
    for d in (3, 5, 8):
        p = path_problem(secret_prefix_tree(secret, d), d)
        u = (1, 0) + (0,) * (d - 1)
        assert p.is_solution(u, (1,) + (0,) * d)


def test_mu_witness_examples():
    assert mu_witness((1, 1, 1, 1, 1), EMPTY_TREE, 4) == 1
    assert mu_witness((0, 1, 0, 1, 1), full_tree(4), 4) is None
    assert mu_witness((0, 0, 1, 0, 0), zero_prefix_tree(4), 4) == 3


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=5, max_size=5), st.lists(st.integers(0, 1), max_size=4))
def test_mu_witness_matches_prefix_scan(u, secret):
    tree = secret_prefix_tree(secret, 4)
    bits = tuple(int(a != 0) for a in u)
    n = lambda m: min(m + 1, len(secret))  # noqa: E731
    expected = next((m + 1 for m in range(5) if bits[: n(m)] != tuple(secret[: n(m)])), None)
    assert mu_witness(u, tree, 4) == expected


def test_counter_counts_calls():
    c = counted(lambda x: x * 2)
    assert c.count == 0
    assert [c(1), c(2), c(3)] == [2, 4, 6]
    assert c.count == 3


@settings(max_examples=50)
@given(st.integers(), st.integers())
def test_counted_solver_is_transparent(a, b):
    fn = lambda x: (x * 31 + b) % 97  # noqa: E731
    assert counted(fn)(a) == fn(a)


def test_counter_is_atomic_under_threads():
    c = counted(lambda x: x)
    threads = [threading.Thread(target=lambda: [c(i) for i in range(2000)]) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert c.count == 16000
