"""Matrix kernel against scalar reference implementations and worked examples."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from covrough.matrix import (
    BoolMatrix,
    TritMatrix,
    bool_product,
    entrywise_join,
    entrywise_meet,
    leq,
    sharp_product,
    transpose,
)
from conftest import GAMMA4, PI4

# Membership matrix of the four-object covering (objects x blocks).
M4 = [
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 1],
]


def ref_bool_product(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Scalar triple-loop evaluation of the boolean product."""
    n, p, q = len(a), len(b), len(b[0])
    return [
        [max(a[i][k] & b[k][j] for k in range(p)) for j in range(q)]
        for i in range(n)
    ]


def ref_sharp_product(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Scalar evaluation of min_k (b[k][j] - a[i][k] + 1)."""
    n, p, q = len(a), len(b), len(b[0])
    return [
        [min(b[k][j] - a[i][k] + 1 for k in range(p)) for j in range(q)]
        for i in range(n)
    ]


@st.composite
def bool_matrices(draw, rows=None, cols=None, max_dim: int = 16):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    dense = draw(
        st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)
    )
    return BoolMatrix.from_dense(dense)


def test_bool_product_reproduces_gamma():
    m = BoolMatrix.from_dense(M4)
    assert bool_product(m, transpose(m)).to_dense() == GAMMA4


def test_identity_is_neutral():
    m = BoolMatrix.from_dense(M4)
    assert bool_product(BoolMatrix.identity(4), m) == m


@given(st.data())
@settings(max_examples=150)
def test_bool_product_matches_scalar_reference(data):
    a = data.draw(bool_matrices())
    b = data.draw(bool_matrices(rows=a.cols))
    assert bool_product(a, b).to_dense() == ref_bool_product(a.to_dense(), b.to_dense())


def test_bool_product_fixed_shapes_match_reference():
    # A deterministic 6x4 by 4x5 instance, checked against the scalar oracle.
    a = BoolMatrix.from_dense([[(i * 7 + j * 3) % 2 for j in range(4)] for i in range(6)])
    b = BoolMatrix.from_dense([[(i + j * j) % 2 for j in range(5)] for i in range(4)])
    assert bool_product(a, b).to_dense() == ref_bool_product(a.to_dense(), b.to_dense())


def test_sharp_product_single_block_column():
    col = BoolMatrix.from_dense([[1], [0], [0], [1]])
    expected = [
        [1, 0, 0, 1],
        [2, 1, 1, 2],
        [2, 1, 1, 2],
        [1, 0, 0, 1],
    ]
    assert sharp_product(col, transpose(col)).to_dense() == expected


def test_sharp_product_reproduces_pi():
    m = BoolMatrix.from_dense(M4)
    assert sharp_product(m, transpose(m)).to_dense() == PI4


def test_sharp_product_all_ones_column():
    col = BoolMatrix.from_dense([[1]] * 5)
    assert sharp_product(col, transpose(col)).to_dense() == [[1] * 5 for _ in range(5)]


@given(st.data())
@settings(max_examples=150)
def test_sharp_product_matches_scalar_reference(data):
    a = data.draw(bool_matrices())
    b = data.draw(bool_matrices(rows=a.cols))
    assert sharp_product(a, b).to_dense() == ref_sharp_product(a.to_dense(), b.to_dense())


def test_transpose_of_membership_matrix():
    m = BoolMatrix.from_dense(M4)
    t = transpose(m)
    assert t.shape == (3, 4)
    assert t.to_dense()[0] == [1, 0, 0, 1]


@given(bool_matrices())
def test_transpose_is_involutive(m):
    assert transpose(transpose(m)) == m


def test_transpose_fixes_symmetric_gamma():
    g = BoolMatrix.from_dense(GAMMA4)
    assert transpose(g) == g
    assert g.is_symmetric()


def test_trit_transpose_round_trip():
    t = TritMatrix.from_dense([[0, 1], [2, 1], [1, 0]])
    assert transpose(t).to_dense() == [[0, 2, 1], [1, 1, 0]]
    assert transpose(transpose(t)) == t


def _per_block_gammas():
    m = BoolMatrix.from_dense(M4)
    out = []
    for j in range(3):
        col = BoolMatrix.from_dense([[row[j]] for row in M4])
        out.append(bool_product(col, transpose(col)))
    return out


def _per_block_pis():
    out = []
    for j in range(3):
        col = BoolMatrix.from_dense([[row[j]] for row in M4])
        out.append(sharp_product(col, transpose(col)))
    return out


def test_join_of_per_block_gammas():
    assert entrywise_join(_per_block_gammas()).to_dense() == GAMMA4


def test_meet_of_per_block_pis():
    assert entrywise_meet(_per_block_pis()).to_dense() == PI4


def test_join_and_meet_of_singleton():
    g = BoolMatrix.from_dense(GAMMA4)
    assert entrywise_join([g]) == g
    p = TritMatrix.from_dense(PI4)
    assert entrywise_meet([p]) == p


def test_join_meet_reject_empty_and_mismatched():
    with pytest.raises(ValueError):
        entrywise_join([])
    with pytest.raises(ValueError):
        entrywise_meet([])
    with pytest.raises(ValueError):
        entrywise_join([BoolMatrix.identity(2), BoolMatrix.identity(3)])


def test_leq_pi_below_gamma():
    assert leq(TritMatrix.from_dense(PI4).to_bool(), BoolMatrix.from_dense(GAMMA4))


def test_leq_is_reflexive():
    g = BoolMatrix.from_dense(GAMMA4)
    assert leq(g, g)


def test_leq_gamma_not_below_pi():
    # Entry (x1, x2) is 1 in gamma but 0 in pi.
    assert not leq(BoolMatrix.from_dense(GAMMA4), TritMatrix.from_dense(PI4).to_bool())


def test_leq_shape_mismatch():
    with pytest.raises(ValueError):
        leq(BoolMatrix.identity(2), BoolMatrix.identity(3))


@given(st.data())
@settings(max_examples=60)
def test_bool_product_is_associative(data):
    a = data.draw(bool_matrices(max_dim=6))
    b = data.draw(bool_matrices(rows=a.cols, max_dim=6))
    c = data.draw(bool_matrices(rows=b.cols, max_dim=6))
    assert bool_product(bool_product(a, b), c) == bool_product(a, bool_product(b, c))


@given(st.data())
@settings(max_examples=60)
def test_join_meet_algebra(data):
    shape_r = data.draw(st.integers(1, 5))
    shape_c = data.draw(st.integers(1, 5))
    a = data.draw(bool_matrices(rows=shape_r, cols=shape_c))
    b = data.draw(bool_matrices(rows=shape_r, cols=shape_c))
    c = data.draw(bool_matrices(rows=shape_r, cols=shape_c))
    assert entrywise_join([a, b]) == entrywise_join([b, a])
    assert entrywise_join([a, a]) == a
    assert entrywise_join([entrywise_join([a, b]), c]) == entrywise_join([a, entrywise_join([b, c])])


def test_product_dimension_mismatch():
    with pytest.raises(ValueError):
        bool_product(BoolMatrix.identity(2), BoolMatrix.identity(3))
    with pytest.raises(ValueError):
        sharp_product(BoolMatrix.identity(2), BoolMatrix.identity(3))


def test_dump_format():
    assert BoolMatrix.from_dense([[1, 0], [0, 1]]).dumps() == "1 0\n0 1\n"
    assert TritMatrix.from_dense([[2, 1, 0]]).dumps() == "2 1 0\n"


def test_trit_plane_invariant_enforced():
    with pytest.raises(ValueError):
        TritMatrix((0b00,), (0b01,), 2)  # an entry marked ==2 but not >=1


def test_to_bool_rejects_twos():
    t = TritMatrix.from_dense([[2, 0]])
    with pytest.raises(ValueError):
        t.to_bool()
