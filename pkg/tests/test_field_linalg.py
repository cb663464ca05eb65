from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicflats.errors import DimensionMismatchError, NotCoordinateError, ResourceLimitError
from cyclicflats.field_linalg import (
    canonicalize,
    contains,
    count_unordered_bases,
    embed_direct_sum,
    enumerate_bases,
    enumerate_subspaces,
    full_space,
    galois_number,
    gaussian_binomial,
    get_ambient,
    hyperplanes,
    intersect,
    is_coordinate,
    lines,
    parse_ambient,
    parse_subspace,
    parse_vector,
    format_subspace,
    perp,
    phi,
    phi_inverse,
    project,
    project_delete,
    span_sum,
    subspaces_of,
    support,
    support_space,
    vector_code,
    zero_subspace,
)
from cyclicflats.oracles import gaussian_count


def sub(text, q=2, n=None):
    n = n or len(text.split(",")[0])
    return parse_subspace(text, q, n)


def vectors_strategy(q, n, max_rows=4):
    row = st.tuples(*[st.integers(0, q - 1)] * n)
    return st.lists(row, max_size=max_rows)


class TestCanonicalForm:
    def test_worked_example(self):
        X = canonicalize([(1, 1, 0), (0, 1, 1)], 2)
        assert X.rows == ((1, 0, 1), (0, 1, 1))
        assert X.dim == 2

    def test_empty_rows_give_zero(self):
        assert canonicalize([], 2, 3).dim == 0
        assert canonicalize([], 2, 3) == zero_subspace(2, 3)

    def test_duplicates_collapse(self):
        assert canonicalize([(1, 0), (1, 0)], 2) == sub("10")

    def test_mixed_lengths_rejected(self):
        with pytest.raises(DimensionMismatchError):
            canonicalize([(1, 0), (1, 0, 1)], 2)

    def test_gf3_scaling(self):
        assert canonicalize([(2, 1)], 3) == canonicalize([(1, 2)], 3)
        assert canonicalize([(2, 1)], 3).rows == ((1, 2),)

    def test_every_spanning_set_gives_the_same_form(self):
        # exhaustive over F_2^3: every pair and triple of vectors spanning X canonicalizes to X
        vecs = list(product(range(2), repeat=3))
        for X in get_ambient(2, 3).subspaces:
            for a, b, c in product(vecs, repeat=3):
                Y = canonicalize([a, b, c], 2, 3)
                if Y.dim == X.dim and all(r in X for r in (a, b, c)):
                    assert Y == X

    @given(vectors_strategy(2, 5))
    def test_idempotent_gf2(self, rows):
        X = canonicalize(rows, 2, 5)
        assert canonicalize(X.rows, 2, 5) == X

    @given(vectors_strategy(5, 3))
    def test_idempotent_gf5(self, rows):
        X = canonicalize(rows, 5, 3)
        assert canonicalize(X.rows, 5, 3) == X
        pivots = X.pivots
        assert list(pivots) == sorted(set(pivots))


class TestLatticeOperations:
    def test_complementary_lines(self):
        A, B = sub("10"), sub("01")
        assert span_sum(A, B) == full_space(2, 2)
        assert intersect(A, B).dim == 0

    def test_idempotence(self):
        A = sub("110,011")
        assert span_sum(A, A) == A and intersect(A, A) == A

    def test_containment_example(self):
        A, B = sub("110"), sub("100,010")
        assert contains(B, A)
        assert span_sum(A, B) == B

    def test_ambient_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            span_sum(sub("10"), sub("100"))

    @pytest.mark.parametrize("q,n", [(2, 3), (3, 2)])
    def test_modular_law_exhaustive(self, q, n):
        subs = get_ambient(q, n).subspaces
        for A in subs:
            for B in subs:
                assert A.dim + B.dim == span_sum(A, B).dim + intersect(A, B).dim

    def test_perp_involution(self):
        for X in get_ambient(3, 3).subspaces:
            assert perp(perp(X)) == X
            assert perp(X).dim == 3 - X.dim

    def test_meet_join_tables_match_direct_operations(self):
        E = get_ambient(2, 4)
        subs = E.subspaces
        for a in range(0, len(E), 3):
            for b in range(len(E)):
                assert subs[E.meet(a, b)] == intersect(subs[a], subs[b])
                assert subs[E.join(a, b)] == span_sum(subs[a], subs[b])

    def test_row_operations_match_tables(self):
        E = get_ambient(2, 5)
        for a in (0, 7, 100, len(E) - 1):
            assert np.array_equal(E.meet_row(a), E.meet_table[a])
            assert np.array_equal(E.join_row(a), E.join_table[a])


class TestEnumeration:
    @pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)])
    def test_galois_counts(self, q, n):
        subs = enumerate_subspaces((q, n))
        assert len(subs) == gaussian_count(n, q) == galois_number(n, q)
        assert len(set(subs)) == len(subs)

    def test_frozen_galois_numbers(self):
        assert galois_number(4, 2) == 67
        assert galois_number(6, 2) == 2825
        assert gaussian_binomial(4, 2, 2) == 35

    def test_hyperplanes_and_lines(self):
        assert hyperplanes(zero_subspace(2, 3)) == []
        assert len(lines(full_space(2, 2))) == 3
        X = full_space(3, 3)
        assert len(hyperplanes(X)) == 13 and len(lines(X)) == 13
        assert all(H.dim == 2 and contains(X, H) for H in hyperplanes(X))

    def test_subspaces_of(self):
        X = sub("1000,0100,0010")
        inside = subspaces_of(X)
        assert len(inside) == 16
        assert all(contains(X, Y) for Y in inside)

    def test_caps(self):
        with pytest.raises(ResourceLimitError):
            get_ambient(3, 6)
        with pytest.raises(ResourceLimitError):
            get_ambient(5, 5)
        with pytest.raises(ValueError):
            get_ambient(4, 2)

    def test_ambient_order_starts_at_zero_and_ends_at_top(self):
        E = get_ambient(2, 4)
        assert E.subspaces[0].dim == 0 and E.subspaces[-1] == full_space(2, 4)
        assert list(E.dims) == sorted(E.dims)


class TestBases:
    def test_one_line(self):
        assert list(enumerate_bases(sub("10"))) == [frozenset({(1, 0)})]

    def test_plane_has_three_bases(self):
        assert len(list(enumerate_bases(full_space(2, 2)))) == 3

    def test_gf3_line(self):
        bases = list(enumerate_bases(parse_subspace("10", 3, 2)))
        assert sorted(bases, key=sorted) == [frozenset({(1, 0)}), frozenset({(2, 0)})]

    def test_zero_space_has_the_empty_basis(self):
        assert list(enumerate_bases(zero_subspace(2, 2))) == [frozenset()]

    @pytest.mark.parametrize("q,k", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
    def test_basis_counts(self, q, k):
        X = full_space(q, k)
        bases = list(enumerate_bases(X))
        assert len(bases) == len(set(bases)) == count_unordered_bases(k, q)
        assert all(canonicalize(list(b), q, k) == X for b in bases)


class TestBlocks:
    def test_projection_example(self):
        X = parse_subspace("101001", 2, 6)
        assert project(X, (2, 2, 2), 1) == sub("10")
        assert project(X, (2, 2, 2), 2) == sub("10")
        assert project(X, (2, 2, 2), 3) == sub("01")

    def test_block_embedding_example(self):
        Y = embed_direct_sum([zero_subspace(2, 2), full_space(2, 2), full_space(2, 2)])
        assert Y == sub("001000,000100,000010,000001")

    def test_projection_of_embedding(self):
        parts = [sub("11"), sub("101,011")]
        X = embed_direct_sum(parts)
        assert [project(X, (2, 3), i) for i in (1, 2)] == parts

    def test_bad_block_sizes(self):
        with pytest.raises(Exception):
            project(sub("1010"), (2, 3), 1)

    def test_project_delete(self):
        assert project_delete(sub("110"), 2) == sub("10")

    def test_project_delete_is_identity_on_the_coordinate_hyperplane(self):
        for X in get_ambient(2, 4).subspaces:
            if all(r[2] == 0 for r in X.rows):
                Y = project_delete(X, 3)
                assert Y.dim == X.dim
                assert [tuple(r[:2] + r[3:]) for r in X.rows] == list(Y.rows)


class TestCoordinateMaps:
    def test_phi(self):
        assert phi({1, 3}, 2, 4) == sub("1000,0010")
        assert phi(set(), 2, 3) == zero_subspace(2, 3)

    def test_support(self):
        assert support((1, 0, 1)) == frozenset({1, 3})

    def test_off_axis_line(self):
        X = sub("11")
        assert not is_coordinate(X)
        assert support_space(X) == frozenset({1, 2})
        with pytest.raises(NotCoordinateError):
            phi_inverse(X)

    def test_phi_inverse_roundtrip(self):
        for m in range(16):
            S = frozenset(i + 1 for i in range(4) if m >> i & 1)
            assert phi_inverse(phi(S, 3, 4)) == S
            assert is_coordinate(phi(S, 3, 4))

    def test_coordinate_iff_image_of_support(self):
        for X in get_ambient(3, 3).subspaces:
            assert is_coordinate(X) == (X == phi(support_space(X), 3, 3))

    def test_membership_follows_support_exhaustive(self):
        vecs = list(product(range(2), repeat=4))
        for m in range(16):
            S = frozenset(i + 1 for i in range(4) if m >> i & 1)
            X = phi(S, 2, 4)
            for v in vecs:
                assert (v in X) == (support(v) <= S)


class TestTextEncodings:
    def test_ambient_literal(self):
        assert parse_ambient("GF(3)^4") == (3, 4)
        with pytest.raises(ValueError):
            parse_ambient("GF(4)^2")

    def test_vector_literal_is_bit_exact(self):
        assert parse_vector("101101", 2) == (1, 0, 1, 1, 0, 1)
        with pytest.raises(ValueError):
            parse_vector("102", 2)

    def test_subspace_roundtrip(self):
        for X in get_ambient(3, 2).subspaces:
            assert parse_subspace(format_subspace(X), 3, 2) == X

    def test_zero_literal(self):
        assert parse_subspace("0", 2, 3).dim == 0
        assert parse_subspace("000", 2, 3).dim == 0

    def test_vector_code_distinct(self):
        codes = {vector_code(v, 3) for v in product(range(3), repeat=3)}
        assert codes == set(range(27))


@settings(max_examples=60, deadline=None)
@given(vectors_strategy(2, 5), vectors_strategy(2, 5))
def test_sum_and_intersection_are_lattice_bounds(a, b):
    A, B = canonicalize(a, 2, 5), canonicalize(b, 2, 5)
    S, I = span_sum(A, B), intersect(A, B)
    assert contains(S, A) and contains(S, B)
    assert contains(A, I) and contains(B, I)
    assert A.dim + B.dim == S.dim + I.dim
