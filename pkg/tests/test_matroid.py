from __future__ import annotations

from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicflats.corpus import chains, set_presentations, transversal_matroids
from cyclicflats.errors import AxiomViolationError, InvalidCyclicFlatsError, NotAChainError, ResourceLimitError
from cyclicflats.matching import has_saturating_matching, max_matching
from cyclicflats.matroid import (
    Matroid,
    SetPresentation,
    avoidance_transversal_exists,
    avoidance_transversal_matroid,
    circuits,
    cyclic_flats,
    cyclic_sets,
    direct_sum_matroid,
    direct_sum_set_presentation,
    find_avoidance_presentation,
    flats,
    is_transversal,
    mask_of,
    matroid_from_cyclic_flats,
    nested_matroid_from_chain,
    nested_presentation_from_chain,
    set_of,
    uniform_matroid,
)
from cyclicflats.oracles import brute_force_set_ranks, naive_set_axiom_violation

EMPTY = frozenset()


def fs(*xs):
    return frozenset(xs)


def presentation(n, *sets):
    return SetPresentation(n, tuple(frozenset(s) for s in sets))


def set_presentation_strategy(max_n=4, max_k=3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.integers(0, (1 << n) - 1), max_size=max_k).map(
            lambda masks: SetPresentation(n, tuple(set_of(m) for m in masks))
        )
    )


def cycle_matroid_k4() -> Matroid:
    # edges 1..6 of K4; triangles are the 3-circuits, rank 3
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def rank(mask):
        parent = list(range(4))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        r = 0
        for i, (a, b) in enumerate(edges):
            if mask >> i & 1:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
                    r += 1
        return r

    return Matroid(6, [rank(m) for m in range(64)])


class TestMatching:
    def test_empty(self):
        assert max_matching([]) == 0
        assert has_saturating_matching([])

    def test_small(self):
        assert max_matching([0b11, 0b01]) == 2
        assert max_matching([0b01, 0b01]) == 1
        assert not has_saturating_matching([0b1, 0b1, 0b10])

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.integers(0, 15), max_size=5))
    def test_against_exhaustive_assignment(self, adj):
        best = 0
        for size in range(len(adj), -1, -1):
            for rows in combinations(range(len(adj)), size):
                if any(all(adj[r] >> c & 1 for r, c in zip(rows, cols)) for cols in permutations(range(4), size)):
                    best = size
                    break
            if best == size:
                break
        assert max_matching(adj) == best


class TestAvoidanceTransversals:
    def test_everything_avoids_the_empty_set(self):
        assert avoidance_transversal_exists({1}, presentation(1, ()))

    def test_blocked_slot(self):
        P = presentation(3, (), (1, 2))
        assert not avoidance_transversal_exists({1, 2}, P)
        assert avoidance_transversal_exists({1, 3}, P)

    def test_uniform(self):
        for n in range(1, 6):
            for k in range(0, n + 1):
                assert avoidance_transversal_matroid(presentation(n, *[()] * k)) == uniform_matroid(k, n)

    def test_small_example(self):
        M = avoidance_transversal_matroid(presentation(3, (), (1, 2)))
        assert M.rank_of_matroid == 2
        assert M.rank({1, 2}) == 1
        assert cyclic_flats(M) == {EMPTY: 0, fs(1, 2): 1}

    def test_empty_presentation(self):
        M = avoidance_transversal_matroid(SetPresentation(3, ()))
        assert set(M.ranks) == {0}

    def test_out_of_range_member(self):
        with pytest.raises(ValueError):
            presentation(2, (3,))

    def test_matching_rank_equals_brute_force(self):
        for n in range(1, 5):
            for P in set_presentations(n, 3):
                assert list(avoidance_transversal_matroid(P).ranks) == brute_force_set_ranks(P)

    @settings(max_examples=40, deadline=None)
    @given(set_presentation_strategy(max_n=5, max_k=4))
    def test_matching_rank_random(self, P):
        assert list(avoidance_transversal_matroid(P).ranks) == brute_force_set_ranks(P)


class TestRankAxioms:
    def test_bad_tables_rejected(self):
        with pytest.raises(AxiomViolationError):
            Matroid(1, [1, 1])
        with pytest.raises(AxiomViolationError):
            Matroid(2, [0, 1, 1, 0])
        with pytest.raises(AxiomViolationError):
            Matroid(1, [0, 2])
        with pytest.raises(AxiomViolationError):
            # two loops whose union has rank 1 break submodularity
            Matroid(2, [0, 0, 0, 1])

    def test_ground_cap(self):
        with pytest.raises(ResourceLimitError):
            Matroid(13, [0] * (1 << 13))

    def test_corpus_satisfies_the_naive_axioms(self):
        for n in range(1, 5):
            for _, M in transversal_matroids(n, 3):
                assert naive_set_axiom_violation(n, M.ranks) is None


class TestCyclicStructure:
    @pytest.mark.parametrize("k,n", [(1, 2), (2, 4), (3, 5), (1, 4)])
    def test_uniform(self, k, n):
        U = uniform_matroid(k, n)
        assert cyclic_flats(U) == {EMPTY: 0, frozenset(range(1, n + 1)): k}
        assert len(circuits(U)) == len(list(combinations(range(n), k + 1)))

    def test_free(self):
        assert cyclic_flats(uniform_matroid(3, 3)) == {EMPTY: 0}
        assert circuits(uniform_matroid(3, 3)) == []

    def test_definitions_against_rank_table(self):
        M = avoidance_transversal_matroid(presentation(4, (), (1, 2), (1, 2, 3)))
        r = M.ranks
        full = M.full_mask
        F = {mask_of(S) for S in flats(M)}
        C = {mask_of(S) for S in cyclic_sets(M)}
        for X in range(1 << 4):
            outside = [1 << i for i in range(4) if not X >> i & 1 and (1 << i) & full]
            assert (X in F) == all(r[X | y] > r[X] for y in outside)
            inside = [1 << i for i in range(4) if X >> i & 1]
            assert (X in C) == all(r[X & ~x] == r[X] for x in inside)
        assert set(cyclic_flats(M)) == {set_of(m) for m in F & C}

    def test_circuits_are_minimal_nonempty_cyclic(self):
        for _, M in transversal_matroids(4, 3):
            cyc = [S for S in cyclic_sets(M) if S]
            minimal = [S for S in cyc if not any(T < S for T in cyc)]
            assert sorted(map(sorted, circuits(M))) == sorted(map(sorted, minimal))

    def test_loops_form_the_bottom(self):
        M = avoidance_transversal_matroid(presentation(3, (1,)))
        # the only slot excludes element 1, so 1 is a loop
        bottom = min(cyclic_flats(M), key=len)
        assert bottom == fs(1)


class TestReconstruction:
    def test_uniform(self):
        assert matroid_from_cyclic_flats({EMPTY: 0, fs(1, 2, 3, 4): 2}, 4) == uniform_matroid(2, 4)

    def test_free(self):
        assert matroid_from_cyclic_flats({EMPTY: 0}, 3) == uniform_matroid(3, 3)

    def test_small_example(self):
        M = avoidance_transversal_matroid(presentation(3, (), (1, 2)))
        assert matroid_from_cyclic_flats({EMPTY: 0, fs(1, 2): 1}, 3) == M

    def test_rejects_non_lattice(self):
        with pytest.raises(InvalidCyclicFlatsError):
            matroid_from_cyclic_flats({EMPTY: 0, fs(1, 2): 1, fs(1, 2, 3): 2}, 3)
        with pytest.raises(InvalidCyclicFlatsError):
            matroid_from_cyclic_flats({}, 3)
        with pytest.raises(InvalidCyclicFlatsError):
            matroid_from_cyclic_flats({fs(1): 2}, 2)

    def test_round_trip_on_corpus(self):
        for n in range(1, 5):
            for _, M in transversal_matroids(n, 3):
                assert matroid_from_cyclic_flats(cyclic_flats(M), n) == M


class TestDirectSum:
    def test_two_coloops(self):
        U = uniform_matroid(1, 1)
        M = direct_sum_matroid(U, U)
        assert (M.rank({1}), M.rank({2}), M.rank({1, 2})) == (1, 1, 2)

    def test_presentation_example(self):
        P = direct_sum_set_presentation(presentation(1, ()), presentation(1, ()))
        assert P.sets == (fs(2), fs(1))
        assert avoidance_transversal_matroid(P) == direct_sum_matroid(uniform_matroid(1, 1), uniform_matroid(1, 1))

    def test_combined_presentation_exhaustive(self):
        for n1 in range(1, 4):
            for n2 in range(1, 4):
                if n1 + n2 > 5:
                    continue
                firsts = list(set_presentations(n1, 2))
                seconds = list(set_presentations(n2, 2))
                for P1 in firsts[:: max(1, len(firsts) // 12)]:
                    for P2 in seconds[:: max(1, len(seconds) // 12)]:
                        expected = direct_sum_matroid(avoidance_transversal_matroid(P1), avoidance_transversal_matroid(P2))
                        assert avoidance_transversal_matroid(direct_sum_set_presentation(P1, P2)) == expected

    def test_cyclic_flats_are_pairwise_unions(self):
        for _, M1 in transversal_matroids(2, 2):
            for _, M2 in transversal_matroids(3, 2):
                Z = cyclic_flats(direct_sum_matroid(M1, M2))
                expected = {
                    A | frozenset(x + 2 for x in B): ra + rb
                    for A, ra in cyclic_flats(M1).items()
                    for B, rb in cyclic_flats(M2).items()
                }
                assert Z == expected


class TestNested:
    @pytest.mark.parametrize("n,k", [(3, 1), (4, 2), (5, 3)])
    def test_uniform_chain(self, n, k):
        top = frozenset(range(1, n + 1))
        P = nested_presentation_from_chain({EMPTY: 0, top: k}, n)
        assert P.sets == (EMPTY,) * k
        assert avoidance_transversal_matroid(P) == uniform_matroid(k, n)

    def test_free_chain(self):
        P = nested_presentation_from_chain({EMPTY: 0}, 3)
        assert P.sets == (EMPTY,) * 3

    def test_two_step_chain(self):
        P = nested_presentation_from_chain({EMPTY: 0, fs(1, 2): 1}, 3)
        assert sorted(P.sets, key=len) == [EMPTY, fs(1, 2)]

    def test_not_a_chain(self):
        with pytest.raises(NotAChainError):
            nested_matroid_from_chain({EMPTY: 0, fs(1, 2): 1, fs(3, 4): 1}, 4)
        with pytest.raises(NotAChainError):
            nested_matroid_from_chain({EMPTY: 0, fs(1, 2): 1, fs(1, 2, 3): 1}, 4)

    def test_every_chain_on_small_grounds(self):
        for n in range(1, 5):
            for chain in chains(n):
                P = nested_presentation_from_chain(chain, n)
                assert avoidance_transversal_matroid(P) == nested_matroid_from_chain(chain, n)


class TestRecognition:
    def test_uniform(self):
        P = find_avoidance_presentation(uniform_matroid(2, 4))
        assert P is not None and avoidance_transversal_matroid(P) == uniform_matroid(2, 4)

    def test_free(self):
        assert find_avoidance_presentation(uniform_matroid(3, 3)).sets == (EMPTY,) * 3

    def test_k4_is_not_transversal(self):
        M = cycle_matroid_k4()
        assert M.rank_of_matroid == 3
        assert not is_transversal(M)

    def test_corpus_is_recognized(self):
        for _, M in transversal_matroids(4, 3):
            P = find_avoidance_presentation(M)
            assert P is not None and avoidance_transversal_matroid(P) == M

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            find_avoidance_presentation(uniform_matroid(2, 7))
