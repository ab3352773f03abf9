"""Dense bit-packed boolean and three-valued matrix kernel.

Rows are Python ints used as bit vectors (bit j = column j), so row-level
AND/OR/containment run word-parallel.  Three-valued entries in {0, 1, 2} are
stored as two bit planes: `ge1` marks entries >= 1 and `ge2` entries >= 2,
which keeps the entrywise minimum a pair of row ANDs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of the set bits of `x`, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class BoolMatrix:
    """Matrix over {0, 1}; one int per row."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.cols < 0:
            raise ValueError("column count must be non-negative")
        mask = _mask(self.cols)
        for r in self.rows:
            if r & ~mask:
                raise ValueError("row has bits outside the column range")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.cols

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> BoolMatrix:
        cols = len(dense[0]) if dense else 0
        rows = []
        for dr in dense:
            if len(dr) != cols:
                raise ValueError("ragged dense input")
            row = 0
            for j, e in enumerate(dr):
                if e not in (0, 1):
                    raise ValueError(f"boolean entry expected, got {e!r}")
                row |= e << j
            rows.append(row)
        return cls(tuple(rows), cols)

    @classmethod
    def identity(cls, n: int) -> BoolMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def to_dense(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.cols)] for r in self.rows]

    def dumps(self) -> str:
        """One row per line, single-space separated, trailing newline."""
        return "".join(
            " ".join(str(r >> j & 1) for j in range(self.cols)) + "\n" for r in self.rows
        )

    def is_symmetric(self) -> bool:
        if len(self.rows) != self.cols:
            return False
        return all(
            self.rows[i] >> j & 1 == self.rows[j] >> i & 1
            for i in range(self.cols)
            for j in range(i + 1, self.cols)
        )

    def diagonal_bits(self) -> int:
        return sum((r >> i & 1) << i for i, r in enumerate(self.rows))


@dataclass(frozen=True)
class TritMatrix:
    """Matrix over {0, 1, 2} as two bit planes; entry = ge1 bit + ge2 bit."""

    ge1: tuple[int, ...]
    ge2: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ge1", tuple(self.ge1))
        object.__setattr__(self, "ge2", tuple(self.ge2))
        if len(self.ge1) != len(self.ge2):
            raise ValueError("bit planes differ in row count")
        mask = _mask(self.cols)
        for r1, r2 in zip(self.ge1, self.ge2):
            if (r1 | r2) & ~mask:
                raise ValueError("row has bits outside the column range")
            if r2 & ~r1:
                raise ValueError("an entry of 2 must also be marked >= 1")

    @property
    def nrows(self) -> int:
        return len(self.ge1)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.ge1), self.cols

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> TritMatrix:
        cols = len(dense[0]) if dense else 0
        ge1, ge2 = [], []
        for dr in dense:
            if len(dr) != cols:
                raise ValueError("ragged dense input")
            r1 = r2 = 0
            for j, e in enumerate(dr):
                if e not in (0, 1, 2):
                    raise ValueError(f"entry in {{0,1,2}} expected, got {e!r}")
                if e >= 1:
                    r1 |= 1 << j
                if e == 2:
                    r2 |= 1 << j
            ge1.append(r1)
            ge2.append(r2)
        return cls(tuple(ge1), tuple(ge2), cols)

    def entry(self, i: int, j: int) -> int:
        return (self.ge1[i] >> j & 1) + (self.ge2[i] >> j & 1)

    def to_dense(self) -> list[list[int]]:
        return [
            [(r1 >> j & 1) + (r2 >> j & 1) for j in range(self.cols)]
            for r1, r2 in zip(self.ge1, self.ge2)
        ]

    def dumps(self) -> str:
        return "".join(
            " ".join(str((r1 >> j & 1) + (r2 >> j & 1)) for j in range(self.cols)) + "\n"
            for r1, r2 in zip(self.ge1, self.ge2)
        )

    def has_twos(self) -> bool:
        return any(self.ge2)

    def to_bool(self) -> BoolMatrix:
        """Boolean reading; only valid when no entry equals 2."""
        if self.has_twos():
            raise ValueError("matrix contains entries equal to 2")
        return BoolMatrix(self.ge1, self.cols)


def bool_product(a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    """Boolean matrix product: out[i][j] = OR_k (a[i][k] AND b[k][j]).

    Row i of the result is the OR of the b-rows selected by the set bits of
    row i of `a`, which keeps the inner loop word-parallel.
    """
    if a.cols != b.nrows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    rows = []
    brows = b.rows
    for arow in a.rows:
        acc = 0
        r = arow
        while r:
            low = r & -r
            acc |= brows[low.bit_length() - 1]
            r ^= low
        rows.append(acc)
    return BoolMatrix(tuple(rows), b.cols)


def sharp_product(a: BoolMatrix, b: BoolMatrix) -> TritMatrix:
    """Min-style product: out[i][j] = min_k (b[k][j] - a[i][k] + 1).

    Each term lies in {0, 1, 2}, so the result is three-valued: the entry is
    >= 1 iff row i of `a` is contained in column j of `b`, and equals 2 iff
    row i is all zero while column j is all one.
    """
    if a.cols != b.nrows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    if a.cols == 0:
        raise ValueError("inner dimension must be at least 1")
    bcols = transpose(b).rows
    full = _mask(a.cols)
    ge1_rows, ge2_rows = [], []
    for arow in a.rows:
        g1 = g2 = 0
        for j, bc in enumerate(bcols):
            if arow & ~bc == 0:
                g1 |= 1 << j
                if arow == 0 and bc == full:
                    g2 |= 1 << j
        ge1_rows.append(g1)
        ge2_rows.append(g2)
    return TritMatrix(tuple(ge1_rows), tuple(ge2_rows), b.cols)


def transpose(m: BoolMatrix | TritMatrix) -> BoolMatrix | TritMatrix:
    """Transpose, preserving the matrix kind."""
    if isinstance(m, BoolMatrix):
        return BoolMatrix(_transpose_rows(m.rows, m.cols), len(m.rows))
    return TritMatrix(
        _transpose_rows(m.ge1, m.cols), _transpose_rows(m.ge2, m.cols), len(m.ge1)
    )


def _transpose_rows(rows: Sequence[int], cols: int) -> tuple[int, ...]:
    out = [0] * cols
    for i, r in enumerate(rows):
        while r:
            low = r & -r
            out[low.bit_length() - 1] |= 1 << i
            r ^= low
    return tuple(out)


def entrywise_join(mats: Sequence[BoolMatrix]) -> BoolMatrix:
    """Entrywise maximum (OR) of boolean matrices of identical shape."""
    if not mats:
        raise ValueError("entrywise_join of an empty list")
    shape = mats[0].shape
    rows = list(mats[0].rows)
    for m in mats[1:]:
        if m.shape != shape:
            raise ValueError(f"shape mismatch: {shape} vs {m.shape}")
        for i, r in enumerate(m.rows):
            rows[i] |= r
    return BoolMatrix(tuple(rows), shape[1])


def entrywise_meet(mats: Sequence[TritMatrix]) -> TritMatrix:
    """Entrywise minimum of three-valued matrices of identical shape."""
    if not mats:
        raise ValueError("entrywise_meet of an empty list")
    shape = mats[0].shape
    ge1 = list(mats[0].ge1)
    ge2 = list(mats[0].ge2)
    for m in mats[1:]:
        if m.shape != shape:
            raise ValueError(f"shape mismatch: {shape} vs {m.shape}")
        for i in range(len(ge1)):
            ge1[i] &= m.ge1[i]
            ge2[i] &= m.ge2[i]
    return TritMatrix(tuple(ge1), tuple(ge2), shape[1])


def leq(a: BoolMatrix, b: BoolMatrix) -> bool:
    """True iff a[i][j] <= b[i][j] everywhere."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return all(ar & ~br == 0 for ar, br in zip(a.rows, b.rows))


def bool_mat_vec(m: BoolMatrix, xbits: int) -> int:
    """Boolean product with a column vector given as bits; returns result bits."""
    out = 0
    for i, r in enumerate(m.rows):
        if r & xbits:
            out |= 1 << i
    return out


def sharp_mat_vec(m: BoolMatrix, xbits: int) -> tuple[int, int]:
    """Min-style product with a column vector; returns (>=1 bits, ==2 bits)."""
    full = _mask(m.cols)
    ge1 = ge2 = 0
    for i, r in enumerate(m.rows):
        if r & ~xbits == 0:
            ge1 |= 1 << i
            if r == 0 and xbits == full:
                ge2 |= 1 << i
    return ge1, ge2
