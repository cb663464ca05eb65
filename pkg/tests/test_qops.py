from __future__ import annotations

import pytest

from cyclicflats.corpus import transversal_qmatroids
from cyclicflats.errors import FieldMismatchError
from cyclicflats.field_linalg import (
    embed_direct_sum,
    full_space,
    get_ambient,
    intersect,
    parse_subspace,
    project,
    subspaces_of,
    zero_subspace,
)
from cyclicflats.oracles import literal_direct_sum_ranks
from cyclicflats.qmatroid import cyclic_flats, free_qmatroid, is_coordinate_qmatroid, restriction, uniform_qmatroid
from cyclicflats.qops import block_ambient, q_direct_sum, q_free_product
from cyclicflats.qtransversal import QPresentation, presentation_direct_sum, presentation_free_product, transversal_qmatroid


def sub(text, q=2):
    return parse_subspace(text, q, len(text.split(",")[0]))


def small_qmatroids(max_n=3):
    out = []
    for n in range(1, max_n + 1):
        out += [(P, M) for P, M in transversal_qmatroids(2, n, 2)]
    return out


def literal_free_product_ranks(M1, M2):
    """Rank table of ``M1 □ M2`` straight from the independence criterion."""
    q, n1, n2 = M1.q, M1.n, M2.n
    E = get_ambient(q, n1 + n2)
    first = embed_direct_sum([full_space(q, n1), zero_subspace(q, n2)])

    def independent(X):
        A = project(intersect(X, first), (n1, n2), 1)
        B = project(X, (n1, n2), 2)
        if M1.rank(A) != A.dim:
            return False
        return M1.rank_of_matroid - M1.rank(A) >= B.dim - M2.rank(B)

    return [max(Y.dim for Y in subspaces_of(X) if independent(Y)) for X in E.subspaces]


class TestBlockAmbient:
    def test_projections(self):
        B = block_ambient(2, 1, 2)
        p1, p2 = B.projections
        for i, X in enumerate(B.total.subspaces):
            assert B.first.subspaces[p1[i]] == project(X, (1, 2), 1)
            assert B.second.subspaces[p2[i]] == project(X, (1, 2), 2)


class TestDirectSum:
    def test_total_rank_adds(self):
        M = q_direct_sum(uniform_qmatroid(1, 1), uniform_qmatroid(1, 1))
        assert M.rank_of_matroid == 2
        assert M.rank(zero_subspace(2, 2)) == 0

    def test_diagonal_line(self):
        M = q_direct_sum(uniform_qmatroid(1, 1), uniform_qmatroid(1, 1))
        assert M.rank(sub("11")) == 1

    def test_against_the_literal_minimum(self):
        items = small_qmatroids(2)
        for _, M1 in items:
            for _, M2 in items:
                M = q_direct_sum(M1, M2)
                assert list(M.ranks) == literal_direct_sum_ranks(M1.rank, M2.rank, M.ambient, M1.n)

    def test_literal_minimum_on_three_plus_two(self):
        threes = [M for _, M in transversal_qmatroids(2, 3, 2)][::6]
        twos = [M for _, M in transversal_qmatroids(2, 2, 2)]
        for M1 in threes:
            for M2 in twos[::2]:
                M = q_direct_sum(M1, M2)
                assert list(M.ranks) == literal_direct_sum_ranks(M1.rank, M2.rank, M.ambient, 3)

    def test_cyclic_flats_of_the_sum(self):
        items = small_qmatroids(3)
        for _, M1 in items[::4]:
            for _, M2 in items[::5]:
                if M1.n + M2.n > 5:
                    continue
                Z = cyclic_flats(q_direct_sum(M1, M2))
                expected = {
                    embed_direct_sum([A, B]): ra + rb
                    for A, ra in cyclic_flats(M1).items()
                    for B, rb in cyclic_flats(M2).items()
                }
                assert Z == expected

    def test_coordinate_presentations(self):
        items = [(P, M) for P, M in small_qmatroids(3) if P.is_coordinate]
        for P1, M1 in items[::3]:
            for P2, M2 in items[::4]:
                if M1.n + M2.n <= 5:
                    assert transversal_qmatroid(presentation_direct_sum(P1, P2)) == q_direct_sum(M1, M2)

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            q_direct_sum(uniform_qmatroid(1, 1, 2), uniform_qmatroid(1, 1, 3))


class TestFreeProduct:
    def test_zero_is_independent(self):
        M = q_free_product(uniform_qmatroid(1, 2), uniform_qmatroid(0, 1))
        assert M.rank(zero_subspace(2, 3)) == 0

    def test_coloop_with_loop(self):
        M = q_free_product(uniform_qmatroid(1, 1), uniform_qmatroid(0, 1))
        assert list(M.ranks) == literal_free_product_ranks(uniform_qmatroid(1, 1), uniform_qmatroid(0, 1))
        assert M.rank(sub("10")) == 1
        assert M.rank(sub("01")) == 1
        assert M.rank(sub("11")) == 1
        assert M.rank_of_matroid == 1

    def test_free_first_factor(self):
        M2 = uniform_qmatroid(1, 2)
        M = q_free_product(free_qmatroid(1), M2)
        assert list(M.ranks) == literal_free_product_ranks(free_qmatroid(1), M2)
        assert M.rank_of_matroid == 2

    def test_against_the_literal_criterion(self):
        items = small_qmatroids(2)
        for _, M1 in items:
            for _, M2 in items:
                assert list(q_free_product(M1, M2).ranks) == literal_free_product_ranks(M1, M2)

    def test_matches_the_combined_presentation(self):
        items = small_qmatroids(3)
        for P1, M1 in items[::3]:
            for P2, M2 in items[::4]:
                if M1.n + M2.n <= 5 and len(P1) == M1.rank_of_matroid:
                    assert transversal_qmatroid(presentation_free_product(P1, P2)) == q_free_product(M1, M2)

    def test_restriction_to_the_first_block(self):
        items = small_qmatroids(2)
        for _, M1 in items:
            for _, M2 in items[::2]:
                M = q_free_product(M1, M2)
                H = embed_direct_sum([full_space(2, M1.n), zero_subspace(2, M2.n)])
                assert restriction(M, H) == M1

    def test_oversized_presentation_breaks_the_identity(self):
        # padding P1 = (0) with a copy of E1 keeps M1 = U11 but not the product with U01
        P1, P2 = QPresentation(2, 1, (zero_subspace(2, 1),)), QPresentation(2, 1, ())
        M1, M2 = transversal_qmatroid(P1), transversal_qmatroid(P2)
        padded = QPresentation(2, 1, P1.members + (full_space(2, 1),))
        assert transversal_qmatroid(padded) == M1
        assert transversal_qmatroid(presentation_free_product(P1, P2)) == q_free_product(M1, M2)
        padded_product = transversal_qmatroid(presentation_free_product(padded, P2))
        assert padded_product.rank_of_matroid == 2 != q_free_product(M1, M2).rank_of_matroid


def test_uniform_closure_example():
    U11, U12 = uniform_qmatroid(1, 1), uniform_qmatroid(1, 2)
    M = q_free_product(q_direct_sum(U11, U12), U11)
    assert M.n == 4 and is_coordinate_qmatroid(M)
