import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markedgroups import cayley as C
from markedgroups import groups as G
from markedgroups import structure as S
from markedgroups.errors import DomainError
from markedgroups.solver import enumerate_colorings
from markedgroups.structure import Permutation


def test_permutation_basics():
    p = Permutation.from_cycles(4, (1, 2, 3))
    assert p.images == (2, 3, 1, 4)
    assert p * p.inverse() == Permutation.identity(4)
    assert str(p) == "(1 2 3)" and str(Permutation.identity(3)) == "id"
    assert not p.is_k_cycle()
    with pytest.raises(DomainError):
        Permutation((1, 1, 2))


def test_decomposition_examples():
    assert S.transposition_decomposition(Permutation.identity(3)) == []
    assert S.transposition_decomposition(Permutation.from_cycles(3, (1, 2))) == [(1, 2)]
    three = Permutation.from_cycles(3, (1, 2, 3))
    rhos = S.transposition_decomposition(three)
    assert rhos == [(1, 3), (1, 2)]
    comp = S.compose_transpositions(3, rhos)
    assert [comp(i) for i in (1, 2, 3)] == [2, 3, 1]


@pytest.mark.parametrize("k", range(1, 8))
def test_decomposition_exhaustive(k):
    for imgs in itertools.permutations(range(1, k + 1)):
        sigma = Permutation(imgs)
        rhos = S.transposition_decomposition(sigma)
        assert len(rhos) <= k - 1
        assert S.compose_transpositions(k, rhos) == sigma
        assert all(a < b for a, b in rhos)


def test_cycle_class():
    assert S.cycle_class(Permutation.from_cycles(3, (1, 2, 3))) == 1
    assert S.cycle_class(Permutation.from_cycles(3, (1, 3, 2))) == 2
    with pytest.raises(DomainError):
        S.cycle_class(Permutation.identity(3))


@pytest.mark.parametrize("k", [3, 4, 5, 7])
def test_cycle_classes_split_inverse_pairs(k):
    for imgs in itertools.permutations(range(1, k + 1)):
        t = Permutation(imgs)
        if t.is_k_cycle():
            assert S.cycle_class(t) != S.cycle_class(t.inverse())


def test_tau_of_constant_fiber_coloring():
    for k in (3, 4, 6):
        g = C.build(G.gamma_k(k), C.Cycle(2 * k + 1))
        c = [lab.i + 1 for lab in g.labels]
        want = Permutation.from_cycles(k, tuple(range(1, k + 1)))
        assert all(S.extract_tau(g, c, n) == want for n in range(g.meta["levels"]))
        assert S.audit_tau_law(g, c) == []


@pytest.mark.parametrize("spec", [G.gamma_k(3), G.delta_k(3)], ids=str)
def test_tau_laws_by_enumeration(spec):
    g = C.build(spec, C.Segment(8))
    twisted = spec.family is G.Family.DELTA_K
    seen = []

    def visit(c):
        taus = [S.extract_tau(g, c, n) for n in range(8)]
        assert all(t.is_k_cycle() for t in taus)
        assert S.audit_tau_law(g, c) == []
        classes = S.orbit_two_coloring(g, c)
        if twisted:
            assert classes in ([1, 2] * 4, [2, 1] * 4)
        else:
            assert len(set(classes)) == 1
        seen.append(c)

    assert enumerate_colorings(g, 3, visit) == 768 == len(seen)


def test_tau_law_violation_reported():
    g = C.build(G.delta_k(3), C.Cycle(6))
    good = [(lab.i if lab.n % 2 == 0 else -lab.i) % 3 + 1 for lab in g.labels]
    assert S.audit_tau_law(g, good) == []
    with pytest.raises(DomainError):
        S.audit_tau_law(g, [1] * g.n)


def test_extract_tau_rejects_bad_levels():
    g = C.build(G.gamma_k(3), C.Segment(3))
    with pytest.raises(DomainError):
        S.extract_tau(g, [1, 2, 3] * 3, 5)
    with pytest.raises(DomainError):
        S.extract_tau(g, [1, 2, 4] * 3, 0)
    with pytest.raises(DomainError):
        S.extract_tau(C.build(G.gamma_prime_k(3), C.Segment(5)), [1] * 5, 0)


def test_delta_examples():
    prof = S.extract_delta([1, 2, 2, 3, 3] * 4, 3)
    assert prof.distinct() == {1}
    assert prof.skipped == [18, 19]
    assert S.extract_delta([1, 3, 3, 2, 2] * 3, 3).distinct() == {2}
    with pytest.raises(DomainError):
        S.extract_delta([1, 1, 1, 1], 3)


def test_delta_law_by_enumeration():
    g = C.build(G.gamma_prime_k(3), C.Segment(14))
    kinds = set()

    def visit(c):
        vals = S.extract_delta(c, 3).distinct()
        assert len(vals) == 1
        kinds.update(vals)

    assert enumerate_colorings(g, 3, visit) > 0
    assert kinds == {1, 2}


def test_blocks_examples():
    k3 = C.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    rep = S.blocks_and_gallai(k3)
    assert rep.blocks == [[0, 1, 2]] and rep.kinds == ["K3"] and rep.is_gallai_tree
    c4 = C.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    rep = S.blocks_and_gallai(c4)
    assert rep.kinds == ["C4"] and not rep.is_gallai_tree
    c5 = C.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert S.blocks_and_gallai(c5).is_gallai_tree


def test_free_product_ball_blocks():
    g = C.free_product_ball(G.cyclic(3), G.cyclic(4), 2)
    rep = S.blocks_and_gallai(g)
    assert sorted(rep.kinds) == ["C4"] + ["K2"] * 4 + ["K3"] * 3
    assert not rep.is_gallai_tree
    ident = g.index[g.spec.identity]
    around = sorted(k for b, k in zip(rep.blocks, rep.kinds) if ident in b)
    assert around == ["C4", "K3"]


def _connected(g, verts):
    verts = set(verts)
    if not verts:
        return True
    start = next(iter(verts))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors[u]:
            if w in verts and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == verts


def naive_blocks(g):
    good = []
    for r in range(2, g.n + 1):
        for sub in itertools.combinations(range(g.n), r):
            if not _connected(g, sub):
                continue
            if r >= 3 and not all(_connected(g, set(sub) - {v}) for v in sub):
                continue
            good.append(frozenset(sub))
    return sorted(sorted(s) for s in good if not any(s < t for t in good))


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 9))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return C.from_edges(n, [e for e, b in zip(pairs, keep) if b])


@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_blocks_match_naive_oracle(g):
    assert S.biconnected_blocks(g) == naive_blocks(g)
