"""Parsing, validation and the round-trip identity of the covering file format."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

import covrough as cr
from conftest import FOUR_TEXT, oset


def test_parse_four_object_covering():
    universe, family = cr.parse_family(FOUR_TEXT)
    assert universe.labels == ("x1", "x2", "x3", "x4")
    assert family.names() == ("C1", "C2", "C3")
    assert family.block("C1").members.labels() == ("x1", "x4")
    assert family.block("C2").members.labels() == ("x1", "x2", "x4")
    assert family.block("C3").members.labels() == ("x3", "x4")
    assert family.is_covering


def test_parse_minimal_single_block():
    universe, family = cr.parse_family("universe: a\nblock B: a\n")
    assert universe.labels == ("a",)
    assert family.is_covering


def test_parse_non_covering_family_is_legal():
    _, family = cr.parse_family("universe: x1 x2\nblock C: x1\n")
    report = cr.validate(family)
    assert not report.is_covering
    assert report.uncovered.labels() == ("x2",)


def test_duplicate_member_mentions_collapse():
    _, family = cr.parse_family("universe: a b\nblock C: a a b a\n")
    assert family.block("C").members.labels() == ("a", "b")


def test_comments_and_blank_lines_ignored():
    text = "# header\n\nuniverse: a b  # inline\n\nblock C: a b # tail\n"
    _, family = cr.parse_family(text)
    assert family.universe.labels == ("a", "b")


@pytest.mark.parametrize(
    "text, line, needle",
    [
        ("universe: x1 x2\nblock C: x1 zz\n", 2, "unknown object label"),
        ("universe: x1 x2\nblock C: x1\nblock C: x2\n", 3, "duplicate block name"),
        ("universe: x1 x2\nblock C:\n", 2, "empty block"),
        ("universe:\nblock C: x1\n", 1, "empty universe"),
        ("universe: x1 x1\nblock C: x1\n", 1, "duplicate object label"),
        ("block C: x1\n", 1, "expected 'universe:'"),
        ("universe: x1\nnot-a-block x1\n", 2, "expected 'block"),
        ("universe: x1\nblock C x1\n", 2, "missing ':'"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, needle):
    with pytest.raises(cr.ParseError) as exc:
        cr.parse_family(text)
    assert exc.value.line == line
    assert needle in str(exc.value)


def test_parse_rejects_file_without_blocks():
    with pytest.raises(cr.ParseError, match="no blocks"):
        cr.parse_family("universe: x1 x2\n")


def test_validate_after_block_removal(four_family):
    survivors = tuple(b for b in four_family.blocks if b.name != "C3")
    family = cr.BlockFamily(four_family.universe, survivors)
    report = cr.validate(family)
    assert not report.is_covering
    assert report.uncovered.labels() == ("x3",)


def test_validate_partition_is_covering():
    _, family = cr.parse_family("universe: x1 x2\nblock A: x1\nblock B: x2\n")
    assert cr.validate(family).is_covering


label_st = st.text(alphabet="abcdefgh123", min_size=1, max_size=4)


@st.composite
def families(draw, max_n: int = 7, max_m: int = 5) -> cr.BlockFamily:
    labels = draw(
        st.lists(label_st, min_size=1, max_size=max_n, unique=True)
    )
    universe = cr.Universe(tuple(labels))
    n = universe.size
    m = draw(st.integers(1, max_m))
    names = [f"C{j}" for j in range(m)]
    blocks = tuple(
        cr.Block(name, cr.ObjectSet(universe, draw(st.integers(1, (1 << n) - 1))))
        for name in names
    )
    return cr.BlockFamily(universe, blocks)


@given(families())
def test_serialize_parse_roundtrip(family):
    universe, reparsed = cr.parse_family(cr.serialize_family(family))
    assert universe == family.universe
    assert reparsed == family


@given(families())
def test_uncovered_disjoint_from_every_block(family):
    uncovered = cr.validate(family).uncovered
    for block in family.blocks:
        assert not (uncovered & block.members)


def test_object_set_operations(four_family):
    u = four_family.universe
    a = oset(four_family, "x1", "x2")
    b = oset(four_family, "x2", "x3")
    assert (a | b).labels() == ("x1", "x2", "x3")
    assert (a & b).labels() == ("x2",)
    assert (a - b).labels() == ("x1",)
    assert a.complement().labels() == ("x3", "x4")
    assert a <= cr.ObjectSet.full(u)
    assert not (a <= b)
    assert "x1" in a and "x3" not in a
    assert len(a) == 2 and list(a) == ["x1", "x2"]


def test_mixed_universe_operations_rejected(four_family, six_family):
    with pytest.raises(ValueError):
        oset(four_family, "x1") | oset(six_family, "x1")


def test_block_family_rejects_empty_block(four_family):
    with pytest.raises(ValueError, match="empty"):
        cr.Block("Z", cr.ObjectSet.empty(four_family.universe))


def test_unknown_block_lookup(four_family):
    with pytest.raises(cr.PreconditionError, match="unknown block"):
        four_family.block("nope")
