from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from redlab import ramsey as R
from redlab.problems import counted
from redlab.ramsey import Coloring, HomSet

from oracles import has_few_color_set, naive_color, naive_homogeneous, naive_max_few_colors


@st.composite
def colorings(draw, n=None, N=(2, 7), k=(1, 4)):
    n = draw(st.integers(1, 3)) if n is None else n
    N = draw(st.integers(max(N[0], n), N[1]))
    k = draw(st.integers(*k))
    size = len(list(itertools.combinations(range(N), n)))
    table = draw(st.lists(st.integers(0, k - 1), min_size=size, max_size=size))
    return Coloring(n, N, k, tuple(table))


def triangle_rainbow() -> Coloring:
    """K4 with its three perfect matchings coloured 1, 2, 3: every triangle uses three colours."""
    match = {(0, 1): 1, (2, 3): 1, (0, 2): 2, (1, 3): 2, (0, 3): 3, (1, 2): 3}
    return Coloring.from_function(4, 4, lambda s: match[s])


# --- encodings ----------------------------------------------------------------


def test_truncate_color():
    assert R.truncate_color(3, 4) == 3
    assert R.truncate_color(7, 4) == 0
    assert R.truncate_color(0, 1) == 0
    with pytest.raises(ValueError):
        R.truncate_color(0, 0)


def test_coloring_validation_and_json():
    with pytest.raises(ValueError):
        Coloring(2, 4, 2, (0,) * 5)
    with pytest.raises(ValueError):
        Coloring(2, 3, 2, (0, 1, 2))
    with pytest.raises(ValueError):
        Coloring(4, 5, 2, (0,) * 5)
    c = Coloring.from_function(5, 3, lambda s: sum(s))
    assert Coloring.from_json(c.to_json()) == c
    assert c.color((1, 2)) == 0  # 3 truncates to 0


@settings(max_examples=100, deadline=None)
@given(colorings())
def test_color_lookup_matches_lexicographic_index(c):
    for s in itertools.combinations(range(c.N), c.n):
        assert c.color(s) == naive_color(c.table, c.N, c.n, s)
        assert c.color(tuple(reversed(s))) == c.color(s)


# --- search -------------------------------------------------------------------


def test_constant_coloring_gives_first_vertices():
    c = Coloring.constant(6, 3, 2)
    for m in range(2, 7):
        assert R.find_homogeneous(c, m) == HomSet(tuple(range(m)), 2)
    assert R.find_homogeneous(c, 7) is None


@settings(max_examples=300, deadline=None)
@given(colorings(), st.integers(1, 7))
def test_find_homogeneous_matches_brute_force(c, m):
    m = max(m, c.n)
    got = R.find_homogeneous(c, m)
    expected = naive_homogeneous(c, m) if m <= c.N else None
    assert (None if got is None else (got.vertices, got.color)) == expected


@settings(max_examples=200, deadline=None)
@given(colorings())
def test_max_homogeneous_is_largest(c):
    h = R.max_homogeneous(c)
    sizes = [m for m in range(c.n, c.N + 1) if naive_homogeneous(c, m)]
    assert len(h) == max(sizes)
    assert (h.vertices, h.color) == naive_homogeneous(c, len(h))


def test_homogeneous_sets_enumerates_everything():
    c = R.random_coloring(random.Random(3), 6, 2)
    listed = {(h.vertices, h.color) for h in R.homogeneous_sets(c, 3)}
    brute = {
        (vs, col)
        for m in range(3, 7)
        for vs in itertools.combinations(range(6), m)
        for col in range(2)
        if R.is_homogeneous(c, vs, col)
    }
    assert listed == brute


@settings(max_examples=100, deadline=None)
@given(colorings(), st.data())
def test_homogeneity_closed_under_subsets(c, data):
    h = R.max_homogeneous(c)
    if h is None or len(h) <= c.n:
        return
    sub = data.draw(st.lists(st.sampled_from(h.vertices), min_size=c.n, unique=True))
    assert R.is_homogeneous(c, sorted(sub), h.color)


def test_homset_constructor_checks():
    c = Coloring.from_function(4, 2, lambda s: s[0] % 2)
    assert R.homset(c, (1, 2)).color == 1
    with pytest.raises(R.NotHomogeneous):
        R.homset(c, (0, 1, 2), 0)  # the pair (1, 2) has colour 1


def test_triangle_free_colourings_of_five_vertices():
    # each is a 5-cycle in one colour and its complement in the other: 4!/2 cycles, two colourings each
    res = R.ramsey_oracle(5, 3)
    brute = sum(naive_homogeneous(c, 3) is None for c in R.all_colorings(5, 2))
    assert res.without == brute == 12


def test_ramsey_oracle_small():
    res = R.ramsey_oracle(3, 3)
    assert (res.colorings, res.without) == (8, 6)
    assert res.counterexample == Coloring(2, 3, 2, (0, 0, 1))


# --- two applications -------------------------------------------------------------


def test_color_halving_examples():
    assert R.color_halving_forward(Coloring.constant(5, 4, 0)) == Coloring.constant(5, 2, 0)
    assert R.color_halving_forward(Coloring.constant(5, 4, 3)) == Coloring.constant(5, 2, 1)
    cyc = Coloring.from_function(4, 4, lambda s: (s[1] - s[0]) % 4 if s != (0, 3) else 2)
    g1 = R.color_halving_forward(cyc)
    for s in itertools.combinations(range(4), 2):
        assert g1.color(s) == (1 if cyc.color(s) > 1 else 0)
    with pytest.raises(ValueError):
        R.color_halving_forward(Coloring.constant(4, 4, 0, n=3))


def test_parity_forward_examples():
    x = HomSet((1, 3, 4), 1)
    assert R.parity_forward(Coloring.constant(6, 4, 2), x) == Coloring.constant(3, 2, 0)
    assert R.parity_forward(Coloring.constant(6, 4, 3), x) == Coloring.constant(3, 2, 1)
    mixed = Coloring.from_function(6, 4, lambda s: 2 + (s[0] + s[1]) % 2)
    g2 = R.parity_forward(mixed, x)
    for a, b in itertools.combinations(range(3), 2):
        assert g2.color((a, b)) == mixed.color((x.vertices[a], x.vertices[b])) % 2
    with pytest.raises(R.NotHomogeneous):
        R.parity_forward(Coloring.from_function(4, 4, lambda s: s[0]), (0, 2, 3))


def test_two_step_backward_examples():
    assert R.two_step_backward((2, 5, 7, 11), (0, 1)) == (2, 5)
    assert R.two_step_backward((2, 5, 7, 11), (0, 2, 3)) == (2, 7, 11)
    with pytest.raises(IndexError):
        R.two_step_backward((2, 5), (0, 2))


@settings(max_examples=100, deadline=None)
@given(colorings(n=2, N=(2, 9), k=(4, 4)))
def test_backward_map_preserves_homogeneity(f):
    x = R.max_homogeneous(R.color_halving_forward(f))
    if len(x) < 2:
        return
    g2 = R.parity_forward(f, x)
    for y in R.homogeneous_sets(g2, 2):
        assert R.is_homogeneous(f, R.two_step_backward(x, y), f.color(R.two_step_backward(x, y)[:2]))


def test_two_step_on_constant_coloring():
    solver = counted(R.max_homogeneous)
    h = R.rt24_via_two_rt22(Coloring.constant(6, 4, 3), solver, 6)
    assert h == HomSet(tuple(range(6)), 3) and solver.count == 2


def test_two_step_reports_failing_stage():
    with pytest.raises(R.SolverFailure) as exc:
        R.rt24_via_two_rt22(Coloring.constant(5, 4, 0), counted(lambda g: None), 2)
    assert exc.value.stage == 1
    liar = counted(lambda g: HomSet((0, 1), 1 - g.color((0, 1))))
    with pytest.raises(R.SolverFailure):
        R.rt24_via_two_rt22(Coloring.constant(5, 4, 0), liar, 2)
    small = counted(lambda g: R.find_homogeneous(g, 2))
    with pytest.raises(R.InsufficientSolution) as exc:
        R.rt24_via_two_rt22(Coloring.constant(5, 4, 0), small, 3)
    assert exc.value.stage == 2 and small.count == 2


# --- advice -------------------------------------------------------------------------


def test_find_2mono_constant_and_two_colours():
    assert R.find_2mono(Coloring.constant(5, 4, 2), 2) == ((0, 1, 2, 3, 4), (2, 3))
    assert R.find_2mono(Coloring.constant(5, 4, 3), 2) == ((0, 1, 2, 3, 4), (0, 3))
    two = Coloring.from_function(6, 4, lambda s: 1 if (s[0] + s[1]) % 2 else 3)
    assert R.find_2mono(two, 3) == (tuple(range(6)), (1, 3))


def test_find_2mono_threshold():
    f = triangle_rainbow()
    assert R.find_2mono(f, 3) is None
    assert R.find_2mono(f, 2) == ((0, 1), (1, 2))
    # five vertices whose largest 2-mono set has exactly three elements
    base = {(0, 1): 1, (2, 3): 1, (0, 2): 2, (1, 3): 2, (0, 3): 3, (1, 2): 3}
    five = Coloring.from_function(5, 4, lambda s: base.get(s, 0))
    assert len(naive_max_few_colors(five, 2)) == 3
    assert R.find_2mono(five, 4) is None
    assert R.find_2mono(five, 3) is not None


@settings(max_examples=200, deadline=None)
@given(colorings(n=2, N=(2, 7), k=(2, 5)), st.integers(2, 7))
def test_find_2mono_against_subset_search(f, s):
    got = R.find_2mono(f, s)
    best = naive_max_few_colors(f, 2)
    if len(best) < s:
        assert got is None
        assert not has_few_color_set(f, 2, s)
    else:
        x, pair = got
        assert x == best
        assert pair[0] < pair[1] and all(f.color(p) in pair for p in itertools.combinations(x, 2))


def test_classical_one_use_constant():
    solver = counted(R.max_homogeneous)
    h = R.classical_one_use_rt24(Coloring.constant(7, 4, 1), solver, 2, 2)
    assert h == HomSet(tuple(range(7)), 1) and solver.count == 1


def test_classical_one_use_insufficient_branch():
    solver = counted(R.max_homogeneous)
    with pytest.raises(R.InsufficientSolution) as exc:
        R.classical_one_use_rt24(triangle_rainbow(), solver, 3, 3)
    assert exc.value.stage == "j=1" and solver.count == 1


def test_classical_one_use_undersized_solver_is_reported():
    f = Coloring.from_function(6, 4, lambda s: 1 if (s[0] + s[1]) % 2 else 3)
    tiny = counted(lambda g: R.find_homogeneous(g, 2))
    with pytest.raises(R.InsufficientSolution):
        R.classical_one_use_rt24(f, tiny, 4, 3)
    assert tiny.count == 1


@settings(max_examples=150, deadline=None)
@given(colorings(n=2, N=(2, 8), k=(4, 4)), st.integers(2, 4))
def test_classical_one_use_output_inside_advice(f, s):
    advice = R.find_2mono(f, s)
    solver = counted(R.max_homogeneous)
    try:
        h = R.classical_one_use_rt24(f, solver, s, 2)
    except R.InsufficientSolution:
        assert advice is None
        return
    finally:
        assert solver.count == 1
    assert R.is_homogeneous(f, h.vertices, h.color)
    assert set(h.vertices) <= set(advice[0])


# --- generalized ------------------------------------------------------------------


def test_generalized_k2_is_a_direct_call():
    f = R.random_coloring(random.Random(5), 7, 2)
    seen = []
    solver = counted(lambda g: seen.append(g) or R.max_homogeneous(g))
    h = R.generalized_one_use(f, solver, 2, 2)
    assert seen == [f] and solver.count == 1
    assert h == R.max_homogeneous(f)


def test_generalized_pigeonhole():
    for seed in range(30):
        f = R.random_coloring(random.Random(seed), 9, 3, n=1)
        solver = counted(R.max_homogeneous)
        h = R.generalized_one_use(f, solver, 2, 2)
        assert solver.count == 1
        assert len({f.table[v] for v in h.vertices}) == 1
        assert len(h) == max(f.table.count(col) for col in range(3))


@settings(max_examples=100, deadline=None)
@given(colorings(N=(3, 6), k=(2, 8)))
def test_generalized_one_use_sound(f):
    solver = counted(R.max_homogeneous)
    try:
        h = R.generalized_one_use(f, solver, f.n, f.n)
    except R.InsufficientSolution:
        assert solver.count == 1
        return
    assert solver.count == 1
    assert R.is_homogeneous(f, h.vertices, h.color) and len(h) >= f.n


def test_find_multimono_matches_find_2mono_for_four_colours():
    rng = random.Random(8)
    for _ in range(200):
        f = R.random_coloring(rng, 6, 4)
        assert R.find_multimono(f, 2, 3) == R.find_2mono(f, 3)


# --- problems and reductions ----------------------------------------------------


def test_ramsey_problem_self_consistent():
    p = R.ramsey_problem(2, 2, 4, 2)
    count = 0
    for c in p.enumerate_instances():
        count += 1
        assert p.instance_valid(c)
        for h in p.enumerate_solutions(c):
            assert p.is_solution(c, h)
    assert count == 2**6
    assert not p.is_solution(Coloring.constant(4, 2, 0), HomSet((0,), 0))
