import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markedgroups import cayley as C
from markedgroups import colorers as K
from markedgroups import groups as G
from markedgroups import structure as S
from markedgroups.errors import ContractViolation, DomainError
from markedgroups.groups import Fiber
from markedgroups.solver import AnchorSet, greedy_maximal_discrete, is_proper


def level_rows(g, c):
    k = g.meta["k"]
    return [list(c.colors[n * k:(n + 1) * k]) for n in range(g.meta["levels"])]


# ---------------------------------------------------------------- k = 3


def test_transversal_coloring():
    for m in (4, 5, 9, 10):
        g = C.build(G.gamma_sec2(), C.Cycle(m))
        c = K.color_transversal_sec2(g, greedy_maximal_discrete(g, 1))
        assert is_proper(g, c)[0]
        assert all(sorted(r) == [1, 2, 3] for r in level_rows(g, c))


def test_transversal_rejects_bad_anchor_sets():
    g = C.build(G.gamma_sec2(), C.Cycle(4))
    with pytest.raises(DomainError):
        K.color_transversal_sec2(g, [g.index[Fiber(0, 0)], g.index[Fiber(1, 0)]])
    with pytest.raises(ContractViolation):
        K.color_transversal_sec2(g, [g.index[Fiber(0, 0)]])
    with pytest.raises(DomainError):
        K.color_transversal_sec2(C.build(G.gamma_sec2(), C.Segment(4)), [0])
    with pytest.raises(DomainError):
        K.color_transversal_sec2(C.build(G.delta_sec2(), C.Cycle(4)), [0])


# ---------------------------------------------------------------- Gamma_k


def test_staircase():
    assert K.staircase(0, 2, 4, 3) == [0, 1, 2, 2, 2]
    assert K.staircase(2, 1, 3, 3) == [2, 0, 1, 1]
    with pytest.raises(DomainError):
        K.staircase(0, 2, 1, 3)


@pytest.mark.parametrize("k,m", [(3, 12), (4, 20), (5, 25)])
def test_gamma_k_cycles(k, m):
    g = C.build(G.gamma_k(k), C.Cycle(m))
    c = K.color_gamma_k(g, greedy_maximal_discrete(g, k))
    assert is_proper(g, c)[0] and c.used() == set(range(1, k + 1))
    assert all(x is not None for x in c.provenance["transversal"])
    assert S.audit_tau_law(g, c) == []


def test_gamma_k_segment_colors_between_anchors():
    g = C.build(G.gamma_k(3), C.Segment(12))
    c = K.color_gamma_k(g, [g.index[Fiber(1, 2)], g.index[Fiber(0, 9)]])
    rows = level_rows(g, c)
    assert rows[0] == [None] * 3 and rows[11] == [None] * 3
    assert all(sorted(r) == [1, 2, 3] for r in rows[2:10])
    assert rows[2][1] == 1 and rows[9][0] == 1


def test_gamma_k_rejects_close_anchors():
    g = C.build(G.gamma_k(5), C.Cycle(20))
    with pytest.raises(DomainError):
        K.color_gamma_k(g, [g.index[Fiber(0, 0)], g.index[Fiber(0, 3)]])
    with pytest.raises(DomainError):
        K.color_gamma_k(g, [g.index[Fiber(0, 0)], g.index[Fiber(1, 0)]])
    with pytest.raises(DomainError):
        K.color_gamma_k(C.build(G.delta_k(3), C.Cycle(9)), [0])


# ---------------------------------------------------------------- Delta_k


def test_swap_gadget_example():
    # k = 3, sigma = id, rho = (2 3)
    anchor = [1, 2, 3]
    rows = K.swap_gadget(anchor, 2, 3, 4)
    assert [r.count(4) for r in rows] == [1, 1, 0]
    # after three levels sigma(i) is the color at position -(i - 1)
    sigma = tuple(rows[2][-(i - 1) % 3] for i in (1, 2, 3))
    want = S.transposition(3, 2, 3) * S.Permutation.identity(3)
    assert sigma == want.images
    state = K.SwapScheduleState(tuple(rows[0]), [], 4)
    state.check()
    assert state.missing() == {2}


def test_delta_shift_is_proper():
    g = C.build(G.delta_k(4), C.Segment(2))
    row = [1, 2, 3, 4]
    assert is_proper(g, row + K.delta_shift(row))[0]


@given(st.integers(3, 7), st.integers(0, 6), st.integers(0, 6), st.integers(1, 30))
def test_alignment_permutation_maps_shifted_fiber_to_target(k, x, y, gap):
    x, y = x % k, y % k
    row = [(j - x) % k + 1 for j in range(k)]
    for _ in range(gap):
        row = K.delta_shift(row)
    sigma = K.alignment_permutation(x, y, gap, k)
    assert [sigma(col) for col in row] == [(j - y) % k + 1 for j in range(k)]
    if gap % 2 == 0 and y == x:
        assert sigma == S.Permutation.identity(k)


def test_delta_k_cycle():
    g = C.build(G.delta_k(3), C.Cycle(15))
    c = K.color_delta_k(g, greedy_maximal_discrete(g, 6))
    assert is_proper(g, c)[0] and c.palette == 4
    assert S.audit_tau_law(g, c, skip_partial=True) == []


def test_delta_k_segment_k5():
    g = C.build(G.delta_k(5), C.Segment(60))
    anchors = [g.index[Fiber(0, 0)], g.index[Fiber(3, 20)], g.index[Fiber(1, 41)], g.index[Fiber(4, 59)]]
    c = K.color_delta_k(g, anchors)
    assert is_proper(g, c)[0] and c.palette == 6
    interior = set(c.provenance["swap_interior"])
    assert all(v in interior for v, col in enumerate(c.colors) if col == 6)
    assert 6 in c.used()
    for n in c.provenance["swap_levels"]:
        row = level_rows(g, c)[n]
        assert len(set(row)) == 5 and 6 in row
    assert S.audit_tau_law(g, c, skip_partial=True) == []


def test_delta_k_levels_at_three_steps_use_k_colors():
    g = C.build(G.delta_k(4), C.Segment(30))
    c = K.color_delta_k(g, [g.index[Fiber(0, 0)], g.index[Fiber(3, 29)]])
    rows = level_rows(g, c)
    for n in range(0, 30, 3):
        assert sorted(rows[n]) == [1, 2, 3, 4]


def test_delta_k_spacing():
    g = C.build(G.delta_k(4), C.Cycle(20))
    with pytest.raises(DomainError):
        K.color_delta_k(g, [0, 4 * 8])
    with pytest.raises(DomainError):
        K.color_delta_k(C.build(G.delta_k(4), C.Cycle(8)), [0])


# ----------------------------------------------------------- Gamma'_k


def test_gamma_prime_single_anchor_cycle():
    g = C.build(G.gamma_prime_k(3), C.Cycle(25))
    c = K.color_gamma_prime_k(g, [0])
    assert list(c.colors) == [1, 2, 2, 3, 3] * 5
    assert K.gamma_prime_markers(25, 3) == [0, 5, 10, 15, 20]
    assert [K.fill_color(d) for d in range(1, 5)] == [2, 2, 3, 3]


def test_gamma_prime_markers_with_pairs():
    marks = K.gamma_prime_markers(36, 3)  # l = 0, pairs only
    assert marks[:4] == [0, 1, 6, 7]
    marks = K.gamma_prime_markers(31, 3)  # l = 5, M = 25
    assert marks == [0, 5, 10, 15, 20, 25, 26]


def test_gamma_prime_spacing():
    g = C.build(G.gamma_prime_k(3), C.Segment(60))
    with pytest.raises(DomainError):
        K.color_gamma_prime_k(g, [0, 10])
    with pytest.raises(DomainError):
        K.color_gamma_prime_k(C.build(G.gamma_prime_k(3), C.Cycle(7)), [0])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**6))
def test_gamma_prime_random_segments(k, seed):
    rng = random.Random(seed)
    N = (2 * k - 1) ** 2
    g = C.build(G.gamma_prime_k(k), C.Segment(rng.randint(N + 2, 5 * N)))
    A = greedy_maximal_discrete(g, N, order=rng.sample(range(g.n), g.n), metric="line")
    c = K.color_gamma_prime_k(g, A)
    assert is_proper(g, c)[0]
    assert c.used() <= set(range(1, k + 1))
    assert K.same_color_gap_problems(g, c, k) == []
    dom = [c.colors[p] for p in range(min(A.anchors), max(A.anchors) + 1)]
    if len(dom) > 4 * k:
        assert len(S.extract_delta(dom, k).distinct()) == 1


# ----------------------------------------------------------- Delta'_k


def test_delta_prime_cluster():
    cl = K.cluster_colors(3, 1)
    assert [cl[n] for n in range(1, 5)] == [2, 2, 3, 3]
    assert [cl[-n] for n in range(1, 5)] == [3, 3, 2, 2]
    assert K.cluster_colors(3, -1)[-1] == 2


def test_reversal_schedule_k3():
    blocks = K.reversal_blocks(3)
    assert blocks[0] == (1, 2, 3) and blocks[-1] == (3, 2, 1)
    assert len(blocks) == 4  # one transposition, three gadget steps
    assert 6 * 3 * (3 // 2) == 18
    tape, interior = K.reversal_tape(3)
    assert len(tape) - 1 == 18 + 2 * 3 - 3
    assert all(tape[t] == 4 for t in range(len(tape)) if tape[t] == 4 and t in interior)
    assert {t for t, x in enumerate(tape) if x == 4} <= set(interior)


@pytest.mark.parametrize("k", range(3, 8))
def test_reversal_windows_distinct(k):
    e = [x for b in K.reversal_blocks(k) for x in b]
    assert e[-k:] == list(range(k, 0, -1))
    for j in range(len(e) - k + 1):
        assert len(set(e[j:j + k])) == k


def test_delta_prime_spacing_values():
    assert K.delta_prime_spacing(3) == 45 == 5 * 9
    assert [K.delta_prime_spacing(k) for k in (4, 5)] == [101, 147]


def test_natural_orientation_follows_a():
    spec = G.delta_prime_k(3)
    a = G.Dihedral(0, 1)
    for p in range(-6, 7):
        x = G.dihedral_from_cayley_coordinate(p)
        assert G.cayley_line_coordinate(G.mul(a, x, spec)) - p == K.natural_orientation(p)


def test_equal_orientation_steps():
    for k in (3, 4, 5):
        for G_ in range(2 * k * (2 * k - 1), 400):
            steps = K.equal_orientation_steps(G_, k)
            assert sum(steps) == G_
            assert steps[0] == steps[-1] == 2 * k - 1


def test_delta_prime_alternating_segment():
    g = C.build(G.delta_prime_k(3), C.Segment(200))
    anchors = [0, 50, 100, 150, 199]
    orient = {p: (1 if i % 2 == 0 else -1) for i, p in enumerate(anchors)}
    c = K.color_delta_prime_k(g, anchors, orient)
    assert is_proper(g, c)[0] and c.palette == 4
    assert 4 in c.used()
    assert [r["kind"] for r in c.provenance["runs"]] == ["opposite"] * 4


def test_delta_prime_natural_cycle():
    g = C.build(G.delta_prime_k(4), C.Cycle(240))
    c = K.color_delta_prime_k(g, AnchorSet((0, 120), 101, "line"))
    assert is_proper(g, c)[0]
    assert all(x is not None for x in c.colors)


def test_delta_prime_rejects():
    g = C.build(G.delta_prime_k(3), C.Segment(200))
    with pytest.raises(DomainError):
        K.color_delta_prime_k(g, [0, 40])
    with pytest.raises(DomainError):
        K.color_delta_prime_k(g, [0, 100], {0: 2})


def test_colorers_deterministic():
    g = C.build(G.delta_prime_k(5), C.Segment(700))
    A = greedy_maximal_discrete(g, K.delta_prime_spacing(5), metric="line")
    assert K.color_delta_prime_k(g, A).to_json() == K.color_delta_prime_k(g, A).to_json()
    h = C.build(G.delta_k(4), C.Cycle(30))
    B = greedy_maximal_discrete(h, 9)
    assert K.color_delta_k(h, B).to_json() == K.color_delta_k(h, B).to_json()
