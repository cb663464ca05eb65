from __future__ import annotations

import pytest

from cyclicflats.corpus import transversal_matroids, transversal_qmatroids
from cyclicflats.errors import FormatError, InvalidCyclicFlatsError
from cyclicflats.field_linalg import parse_subspace, zero_subspace
from cyclicflats.io import (
    format_q_cyclic_flats,
    format_q_presentation,
    format_rank_table,
    format_set,
    format_set_cyclic_flats,
    format_set_presentation,
    load_q,
    parse_matroid_file,
    parse_q_file,
    set_from_mask_literal,
)
from cyclicflats.matroid import SetPresentation, cyclic_flats
from cyclicflats.qtransversal import QPresentation


def test_set_literal_is_bit_exact():
    assert format_set({1, 3}, 4) == "1010"
    assert set_from_mask_literal("0110", 4) == frozenset({2, 3})


def test_matroid_presentation_file():
    text = "3\npresentation:\n000  # the empty set\n110\n"
    f = parse_matroid_file(text)
    assert f.presentation == SetPresentation(3, (frozenset(), frozenset({1, 2})))
    assert f.matroid().rank_of_matroid == 2


def test_matroid_cyclic_flats_file():
    f = parse_matroid_file("4\ncyclic-flats:\n0000 0\n1111 2\n")
    assert f.matroid().ranks[-1] == 2


def test_matroid_round_trips():
    for P, M in transversal_matroids(3, 3):
        assert parse_matroid_file(format_set_presentation(P)).presentation == P
        assert parse_matroid_file(format_set_cyclic_flats(3, cyclic_flats(M))).matroid() == M


def test_empty_set_presentation():
    P = SetPresentation(2, ())
    assert parse_matroid_file(format_set_presentation(P)).presentation == P


def test_q_presentation_forms():
    a = parse_q_file("GF(2)^3\npresentation:\n110,011\n0\n").presentation
    b = parse_q_file("GF(2)^3\nmember:\n110\n011\nmember:\n").presentation
    assert a == b
    assert a.members == (parse_subspace("110,011", 2, 3), zero_subspace(2, 3))


def test_q_round_trips():
    for P, M in transversal_qmatroids(2, 3, 2):
        assert parse_q_file(format_q_presentation(P)).presentation == P
        assert parse_q_file(format_q_cyclic_flats(M)).qmatroid() == M
        assert parse_q_file(format_rank_table(M)).qmatroid() == M
    P = QPresentation(3, 2, ())
    assert parse_q_file(format_q_presentation(P)).presentation == P


def test_load_from_disk(tmp_path):
    path = tmp_path / "m.q"
    path.write_text("GF(3)^2\npresentation:\n12\n", encoding="utf-8")
    f = load_q(path)
    assert (f.q, f.n) == (3, 2)
    assert f.qmatroid().rank_of_matroid == 1


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n",
        "3\nbases:\n111\n",
        "x\npresentation:\n111\n",
        "3\npresentation:\n11\n",
        "3\ncyclic-flats:\n111\n",
        "3\nrank-table:\n0 0\n",
        "3\npresentation:\n100\ncyclic-flats:\n",
    ],
)
def test_bad_matroid_files(text):
    with pytest.raises(FormatError):
        parse_matroid_file(text)


@pytest.mark.parametrize(
    "text",
    [
        "GF(2)^2\n",
        "GF(4)^2\npresentation:\n10\n",
        "GF(2)^2\npresentation:\n102\n",
        "GF(2)^2\ncyclic-flats:\n10\n",
        "GF(2)^2\nrank-table:\n0 0\n1 1\n",
        "GF(2)^2\nrank-table:\n0 0\n0 0\n1 1\n2 1\n3 1\n",
        "GF(2)^2\nrank-table:\n0 0\n1 1\n2 1\n3 1\n9 1\n",
        "GF(2)^2\nmember:\n10\npresentation:\n",
    ],
)
def test_bad_q_files(text):
    with pytest.raises((FormatError, ValueError)):
        parse_q_file(text)


def test_invalid_cyclic_flats_are_reported():
    f = parse_q_file("GF(2)^2\ncyclic-flats:\n0 0\n10 1\n")
    with pytest.raises(InvalidCyclicFlatsError):
        f.qmatroid()
