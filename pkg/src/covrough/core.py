"""Universe and block-family model.

Objects live in an ordered, labelled universe; a block family is an ordered
list of named, non-empty subsets of that universe.  A family whose blocks
jointly exhaust the universe is a covering; families that fail that condition
are legal state (they arise from deletions) but are flagged as non-covering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class CovroughError(Exception):
    """Base class for all errors raised by this library."""


class ParseError(CovroughError):
    """Malformed input text.  Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PreconditionError(CovroughError):
    """An operation was invoked on state that violates its preconditions."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InternalCheckError(CovroughError):
    """An internal cross-check failed; indicates a bug, not a caller error."""


# Labels must survive the line-oriented file formats round-trip; whitespace
# would merge tokens, '#' would start a comment, ':' ends a block name.
_FORBIDDEN = set("#:")


def _check_token(kind: str, token: str) -> None:
    if not token:
        raise ValueError(f"{kind} must be a non-empty string")
    if any(c.isspace() or c in _FORBIDDEN for c in token):
        raise ValueError(f"{kind} {token!r} may not contain whitespace, '#' or ':'")


@dataclass(frozen=True)
class Universe:
    """Ordered, labelled finite object set fixing all matrix row/column indexing."""

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("universe must contain at least one object")
        for label in self.labels:
            _check_token("object label", label)
        index = {label: i for i, label in enumerate(self.labels)}
        if len(index) != len(self.labels):
            raise ValueError("universe labels must be unique")
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        """Position of `label`; raises PreconditionError for unknown labels."""
        try:
            return self._index[label]
        except KeyError:
            raise PreconditionError(f"unknown object label {label!r}") from None

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1


@dataclass(frozen=True)
class ObjectSet:
    """Subset of a universe stored as a bit vector (bit i = object i)."""

    universe: Universe
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.universe.full_mask:
            raise ValueError("bit vector does not fit the universe")

    @classmethod
    def empty(cls, universe: Universe) -> ObjectSet:
        return cls(universe, 0)

    @classmethod
    def full(cls, universe: Universe) -> ObjectSet:
        return cls(universe, universe.full_mask)

    @classmethod
    def from_labels(cls, universe: Universe, labels: Iterable[str]) -> ObjectSet:
        bits = 0
        for label in labels:
            bits |= 1 << universe.index(label)
        return cls(universe, bits)

    @classmethod
    def from_indices(cls, universe: Universe, indices: Iterable[int]) -> ObjectSet:
        bits = 0
        for i in indices:
            if not 0 <= i < universe.size:
                raise ValueError(f"object index {i} out of range")
            bits |= 1 << i
        return cls(universe, bits)

    def _check_same(self, other: ObjectSet) -> None:
        if self.universe != other.universe:
            raise ValueError("object sets belong to different universes")

    def labels(self) -> tuple[str, ...]:
        return tuple(self.universe.labels[i] for i in self.indices())

    def indices(self) -> tuple[int, ...]:
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    def __contains__(self, label: str) -> bool:
        return bool(self.bits >> self.universe.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __or__(self, other: ObjectSet) -> ObjectSet:
        self._check_same(other)
        return ObjectSet(self.universe, self.bits | other.bits)

    def __and__(self, other: ObjectSet) -> ObjectSet:
        self._check_same(other)
        return ObjectSet(self.universe, self.bits & other.bits)

    def __sub__(self, other: ObjectSet) -> ObjectSet:
        self._check_same(other)
        return ObjectSet(self.universe, self.bits & ~other.bits)

    def __le__(self, other: ObjectSet) -> bool:
        self._check_same(other)
        return self.bits & ~other.bits == 0

    def complement(self) -> ObjectSet:
        return ObjectSet(self.universe, self.universe.full_mask & ~self.bits)


@dataclass(frozen=True)
class Block:
    """One named subset of the universe."""

    name: str
    members: ObjectSet

    def __post_init__(self) -> None:
        _check_token("block name", self.name)
        if not self.members:
            raise ValueError(f"block {self.name!r} must not be empty")


@dataclass(frozen=True)
class BlockFamily:
    """Ordered sequence of named blocks over one universe.

    The family may or may not be a covering; `is_covering` reports which.
    Immutable: updates build new families.
    """

    universe: Universe
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValueError("a block family must contain at least one block")
        names = set()
        for block in self.blocks:
            if block.members.universe != self.universe:
                raise ValueError(f"block {block.name!r} belongs to a different universe")
            if block.name in names:
                raise ValueError(f"duplicate block name {block.name!r}")
            names.add(block.name)

    @property
    def size(self) -> int:
        return len(self.blocks)

    def names(self) -> tuple[str, ...]:
        return tuple(block.name for block in self.blocks)

    def block_index(self, name: str) -> int:
        for i, block in enumerate(self.blocks):
            if block.name == name:
                return i
        raise PreconditionError(f"unknown block name {name!r}")

    def block(self, name: str) -> Block:
        return self.blocks[self.block_index(name)]

    def member_bits(self) -> tuple[int, ...]:
        return tuple(block.members.bits for block in self.blocks)

    def union_bits(self) -> int:
        bits = 0
        for block in self.blocks:
            bits |= block.members.bits
        return bits

    @property
    def is_covering(self) -> bool:
        return self.union_bits() == self.universe.full_mask


@dataclass(frozen=True)
class CoverReport:
    is_covering: bool
    uncovered: ObjectSet


def validate(family: BlockFamily) -> CoverReport:
    """Report whether the family covers its universe and which objects it misses."""
    uncovered = ObjectSet(family.universe, family.universe.full_mask & ~family.union_bits())
    return CoverReport(is_covering=not uncovered, uncovered=uncovered)


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_family(text: str) -> tuple[Universe, BlockFamily]:
    """Parse the line-oriented covering file format.

    Line 1 (ignoring blanks and comments) declares the universe; every further
    line declares one block.  Order is significant; duplicate member mentions
    within a block collapse to one.
    """
    universe: Universe | None = None
    blocks: list[Block] = []
    seen_names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if universe is None:
            if not line.startswith("universe:"):
                raise ParseError("expected 'universe:' declaration", lineno)
            labels = line[len("universe:"):].split()
            if not labels:
                raise ParseError("empty universe", lineno)
            if len(set(labels)) != len(labels):
                raise ParseError("duplicate object label in universe", lineno)
            try:
                universe = Universe(tuple(labels))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        if not line.startswith("block "):
            raise ParseError("expected 'block <name>: <members>'", lineno)
        head, sep, tail = line[len("block "):].partition(":")
        if not sep:
            raise ParseError("missing ':' after block name", lineno)
        name = head.strip()
        if not name or len(name.split()) != 1:
            raise ParseError("block name must be a single token", lineno)
        if name in seen_names:
            raise ParseError(f"duplicate block name {name!r}", lineno)
        members = tail.split()
        if not members:
            raise ParseError(f"empty block {name!r}", lineno)
        bits = 0
        for label in members:
            if label not in universe:
                raise ParseError(f"unknown object label {label!r} in block {name!r}", lineno)
            bits |= 1 << universe.index(label)
        seen_names.add(name)
        blocks.append(Block(name, ObjectSet(universe, bits)))

    if universe is None:
        raise ParseError("empty covering file")
    if not blocks:
        raise ParseError("covering file declares no blocks")
    return universe, BlockFamily(universe, tuple(blocks))


def serialize_family(family: BlockFamily) -> str:
    """Inverse of parse_family: emit the canonical covering file text."""
    lines = ["universe: " + " ".join(family.universe.labels)]
    for block in family.blocks:
        lines.append(f"block {block.name}: " + " ".join(block.members.labels()))
    return "\n".join(lines) + "\n"
