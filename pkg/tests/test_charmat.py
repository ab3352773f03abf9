"""Fast per-element construction against the definitional products, plus cache state."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

import covrough as cr
from covrough.charmat import (
    block_gamma,
    block_pi,
    build_cache,
    definitional_gamma,
    definitional_pi,
    load_state,
    matrix_digest,
    membership_matrix,
    state_json,
)
from covrough.approx import indiscernible, neighborhood
from covrough.matrix import BoolMatrix, leq
from covrough.bench import random_covering
from conftest import GAMMA4, PI4, SIX_TEXT, oset


def _family(universe_labels: str, **blocks: str) -> cr.BlockFamily:
    lines = [f"universe: {universe_labels}"]
    lines += [f"block {name}: {members}" for name, members in blocks.items()]
    return cr.parse_family("\n".join(lines) + "\n")[1]


def test_membership_matrix_six_objects(six_family):
    m = membership_matrix(six_family)
    assert m.shape == (6, 3)
    assert m.to_dense()[0] == [1, 0, 1]
    assert m.to_dense() == [
        [1, 0, 1],
        [1, 0, 1],
        [0, 1, 0],
        [0, 1, 0],
        [0, 1, 1],
        [0, 1, 1],
    ]


def test_membership_matrix_partition_is_identity():
    family = _family("x1 x2", A="x1", B="x2")
    assert membership_matrix(family) == BoolMatrix.identity(2)


def test_membership_matrix_four_objects(four_family):
    assert membership_matrix(four_family).to_dense() == [
        [1, 1, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 1],
    ]


def test_block_gamma_two_member_block(four_family):
    assert block_gamma(four_family, "C1").to_dense() == [
        [1, 0, 0, 1],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [1, 0, 0, 1],
    ]


def test_block_gamma_full_universe_block():
    family = _family("a b c", C="a b c")
    assert block_gamma(family, "C").to_dense() == [[1, 1, 1]] * 3


def test_block_gamma_x2_x4():
    family = _family("x1 x2 x3 x4", C4="x2 x4")
    assert block_gamma(family, "C4").to_dense() == [
        [0, 0, 0, 0],
        [0, 1, 0, 1],
        [0, 0, 0, 0],
        [0, 1, 0, 1],
    ]


def test_block_pi_two_member_block(four_family):
    assert block_pi(four_family, "C1").to_dense() == [
        [1, 0, 0, 1],
        [2, 1, 1, 2],
        [2, 1, 1, 2],
        [1, 0, 0, 1],
    ]


def test_block_pi_x2_x4():
    family = _family("x1 x2 x3 x4", C4="x2 x4")
    assert block_pi(family, "C4").to_dense() == [
        [1, 2, 1, 2],
        [0, 1, 0, 1],
        [1, 2, 1, 2],
        [0, 1, 0, 1],
    ]


def test_block_pi_full_universe_block():
    family = _family("a b c", C="a b c")
    assert block_pi(family, "C").to_dense() == [[1, 1, 1]] * 3


def test_unknown_block_name(four_family):
    with pytest.raises(cr.PreconditionError):
        block_gamma(four_family, "zz")
    with pytest.raises(cr.PreconditionError):
        block_pi(four_family, "zz")


def test_build_cache_golden_matrices(four_cache):
    assert four_cache.gamma.to_dense() == GAMMA4
    assert four_cache.pi.to_dense() == PI4
    assert four_cache.per_block == tuple(b.members.bits for b in four_cache.family.blocks)


def test_build_cache_non_covering_trits(four_family):
    family = cr.BlockFamily(
        four_family.universe, tuple(b for b in four_family.blocks if b.name != "C3")
    )
    cache = build_cache(family, cross_check=True)
    assert cache.pi.to_dense() == [
        [1, 0, 0, 1],
        [1, 1, 0, 1],
        [2, 1, 1, 2],
        [1, 0, 0, 1],
    ]


def test_build_cache_cross_check_passes(six_family):
    cache = build_cache(six_family, cross_check=True)
    assert cache.gamma == definitional_gamma(six_family)
    assert cache.pi == definitional_pi(six_family)


def test_fast_equals_definitional_up_to_64_objects():
    rng = random.Random(2024)
    for _ in range(25):
        n = rng.randint(1, 64)
        m = rng.randint(1, 10)
        family = random_covering(rng, n, m)
        build_cache(family, cross_check=True)  # raises on divergence


@st.composite
def block_bits(draw, n: int) -> int:
    return draw(st.integers(1, (1 << n) - 1))


@given(st.data())
@settings(max_examples=80)
def test_per_block_fast_rules_equal_products(data):
    n = data.draw(st.integers(1, 16))
    universe = cr.Universe(tuple(f"x{i}" for i in range(n)))
    d = data.draw(block_bits(n))
    family = cr.BlockFamily(universe, (cr.Block("C", cr.ObjectSet(universe, d)),))
    m = membership_matrix(family)
    assert block_gamma(family, "C") == definitional_gamma(family)
    assert block_pi(family, "C") == definitional_pi(family)
    assert m.shape == (n, 1)


@given(st.data())
@settings(max_examples=80)
def test_block_gamma_diagonal_marks_membership(data):
    n = data.draw(st.integers(1, 12))
    universe = cr.Universe(tuple(f"x{i}" for i in range(n)))
    d = data.draw(block_bits(n))
    family = cr.BlockFamily(universe, (cr.Block("C", cr.ObjectSet(universe, d)),))
    assert block_gamma(family, "C").diagonal_bits() == d


@given(st.data())
@settings(max_examples=80)
def test_union_block_diagonal_is_join_of_diagonals(data):
    n = data.draw(st.integers(1, 12))
    universe = cr.Universe(tuple(f"x{i}" for i in range(n)))
    a = data.draw(block_bits(n))
    b = data.draw(block_bits(n))
    family = cr.BlockFamily(
        universe,
        (
            cr.Block("A", cr.ObjectSet(universe, a)),
            cr.Block("B", cr.ObjectSet(universe, b)),
            cr.Block("U", cr.ObjectSet(universe, a | b)),
        ),
    )
    diag_u = block_gamma(family, "U").diagonal_bits()
    assert diag_u == block_gamma(family, "A").diagonal_bits() | block_gamma(family, "B").diagonal_bits()


def test_union_block_matrix_is_not_join_of_matrices():
    # The diagonal rule does not lift to whole matrices: with A = {x1, x2},
    # B = {x1, x4} and their union C, entry (x2, x4) is 1 in C's matrix but 0
    # in the join.
    family = _family("x1 x2 x3 x4", A="x1 x2", B="x1 x4", C="x1 x2 x4")
    ga = block_gamma(family, "A")
    gb = block_gamma(family, "B")
    gc = block_gamma(family, "C")
    join = cr.entrywise_join([ga, gb])
    assert gc != join
    assert gc.entry(1, 3) == 1 and join.entry(1, 3) == 0


@given(st.data())
@settings(max_examples=80)
def test_intersection_block_matrix_is_meet_of_matrices(data):
    n = data.draw(st.integers(1, 12))
    universe = cr.Universe(tuple(f"x{i}" for i in range(n)))
    a = data.draw(block_bits(n))
    b = data.draw(block_bits(n))
    if not a & b:
        return  # blocks must be non-empty; skip empty intersections
    family = cr.BlockFamily(
        universe,
        (
            cr.Block("A", cr.ObjectSet(universe, a)),
            cr.Block("B", cr.ObjectSet(universe, b)),
            cr.Block("I", cr.ObjectSet(universe, a & b)),
        ),
    )
    ga = block_gamma(family, "A")
    gb = block_gamma(family, "B")
    meet = BoolMatrix(tuple(ra & rb for ra, rb in zip(ga.rows, gb.rows)), n)
    assert block_gamma(family, "I") == meet


def test_rows_are_neighborhoods_and_indiscernibles(six_family):
    cache = build_cache(six_family)
    for i, label in enumerate(six_family.universe.labels):
        assert cache.gamma.rows[i] == indiscernible(six_family, label).bits
        assert cache.pi.ge1[i] == neighborhood(six_family, label).bits
        assert cache.pi.ge2[i] == 0


def test_uncovered_row_trit_semantics():
    family = _family("x1 x2 x3 x4", C1="x1 x4", C2="x1 x2 x4")
    cache = build_cache(family)
    # x3 is uncovered: its row is 2 where the object lies in every block, else 1.
    row = cache.pi.to_dense()[2]
    assert row == [2, 1, 1, 2]
    everywhere = family.blocks[0].members.bits & family.blocks[1].members.bits
    for j in range(4):
        assert row[j] == (2 if everywhere >> j & 1 else 1)


def test_pi_below_gamma_on_random_coverings():
    rng = random.Random(7)
    for _ in range(50):
        family = random_covering(rng, rng.randint(1, 12), rng.randint(1, 6))
        cache = build_cache(family)
        assert leq(cache.pi.to_bool(), cache.gamma)


def test_state_roundtrip(four_cache):
    text = state_json(four_cache, history=("del-block C3",), origin="universe: x\nblock C: x\n")
    loaded = load_state(text)
    assert loaded.cache == four_cache
    assert loaded.history == ("del-block C3",)
    assert loaded.origin == "universe: x\nblock C: x\n"


def test_state_digest_mismatch_detected(four_cache):
    text = state_json(four_cache)
    tampered = text.replace(matrix_digest(four_cache.gamma), "0" * 64)
    with pytest.raises(cr.InternalCheckError, match="digest"):
        load_state(tampered)


def test_state_rejects_malformed_input():
    with pytest.raises(cr.ParseError):
        load_state("{not json")
    with pytest.raises(cr.ParseError):
        load_state('{"format": "something-else", "version": 1}')


def test_state_digests_are_optional(four_cache):
    import json

    data = json.loads(state_json(four_cache))
    del data["digest"]
    loaded = load_state(json.dumps(data))
    assert loaded.cache == four_cache
