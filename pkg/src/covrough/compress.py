"""Quotient compression of a covering approximation space.

A map between universes whose fibers each fit inside the neighborhood of
their members lets the block-based upper/lower approximations be computed on
the (smaller) image family and pulled back, with identical results.  Only a
query set that is a union of fibers can be pushed through losslessly, so
non-saturated queries are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    Block,
    BlockFamily,
    ObjectSet,
    ParseError,
    PreconditionError,
    Universe,
)
from .charmat import build_cache
from .matrix import iter_bits
from .approx import approx_matrix, neighborhood


@dataclass(frozen=True)
class ConsistentMap:
    """Total surjective map between universes, stored as per-object target indices."""

    source: Universe
    target: Universe
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != self.source.size:
            raise ValueError("assignment must cover every source object")
        hit = 0
        for t in self.assignment:
            if not 0 <= t < self.target.size:
                raise ValueError(f"target index {t} out of range")
            hit |= 1 << t
        if hit != self.target.full_mask:
            raise ValueError("every target object needs a non-empty fiber")

    @classmethod
    def from_pairs(cls, source: Universe, pairs: Sequence[tuple[str, str]]) -> ConsistentMap:
        """Build from (source label, target label) pairs; the target universe is
        inferred from the right-hand sides in first-appearance order."""
        seen: dict[str, int] = {}
        order: list[str] = []
        assigned: dict[int, int] = {}
        for src, dst in pairs:
            i = source.index(src)
            if i in assigned:
                raise ValueError(f"object {src!r} is mapped twice")
            if dst not in seen:
                seen[dst] = len(order)
                order.append(dst)
            assigned[i] = seen[dst]
        missing = [label for label in source.labels if source.index(label) not in assigned]
        if missing:
            raise ValueError(f"unmapped objects: {' '.join(missing)}")
        return cls(source, Universe(tuple(order)), tuple(assigned[i] for i in range(source.size)))

    def image_index(self, source_index: int) -> int:
        return self.assignment[source_index]

    def fibers(self) -> tuple[ObjectSet, ...]:
        """Preimage of each target object, in target order."""
        bits = [0] * self.target.size
        for i, t in enumerate(self.assignment):
            bits[t] |= 1 << i
        return tuple(ObjectSet(self.source, b) for b in bits)

    def image_bits(self, source_bits: int) -> int:
        out = 0
        for i in iter_bits(source_bits):
            out |= 1 << self.assignment[i]
        return out

    def preimage_bits(self, target_bits: int) -> int:
        out = 0
        for i, t in enumerate(self.assignment):
            if target_bits >> t & 1:
                out |= 1 << i
        return out

    def image(self, x: ObjectSet) -> ObjectSet:
        if x.universe != self.source:
            raise ValueError("set belongs to a different universe")
        return ObjectSet(self.target, self.image_bits(x.bits))

    def preimage(self, y: ObjectSet) -> ObjectSet:
        if y.universe != self.target:
            raise ValueError("set belongs to a different universe")
        return ObjectSet(self.source, self.preimage_bits(y.bits))

    def is_saturated(self, x: ObjectSet) -> bool:
        """True iff x is a union of fibers, i.e. preimage(image(x)) == x."""
        return self.preimage_bits(self.image_bits(x.bits)) == x.bits


def parse_map(text: str, source: Universe) -> ConsistentMap:
    """Parse lines of the form 'x_label -> y_label'."""
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        pos = raw.find("#")
        line = (raw if pos < 0 else raw[:pos]).strip()
        if not line:
            continue
        left, sep, right = line.partition("->")
        src, dst = left.strip(), right.strip()
        if not sep or not src or not dst or len(src.split()) != 1 or len(dst.split()) != 1:
            raise ParseError("expected '<source label> -> <target label>'", lineno)
        pairs.append((src, dst))
    try:
        return ConsistentMap.from_pairs(source, pairs)
    except (ValueError, PreconditionError) as exc:
        raise ParseError(str(exc)) from None


def check_consistent(family: BlockFamily, cmap: ConsistentMap) -> bool:
    """True iff every fiber is contained in the neighborhood of each of its members."""
    if cmap.source != family.universe:
        raise ValueError("map source does not match the family's universe")
    if not family.is_covering:
        raise PreconditionError("consistency is defined over a covering family")
    fiber_bits = [f.bits for f in cmap.fibers()]
    for i, label in enumerate(family.universe.labels):
        fiber = fiber_bits[cmap.assignment[i]]
        if fiber & ~neighborhood(family, label).bits:
            return False
    return True


def _require_consistent(family: BlockFamily, cmap: ConsistentMap) -> None:
    if not check_consistent(family, cmap):
        raise PreconditionError("map is not consistent with the family")


def induced_family(family: BlockFamily, cmap: ConsistentMap) -> BlockFamily:
    """Image family over the target universe: each block maps to its image, name kept."""
    _require_consistent(family, cmap)
    blocks = tuple(
        Block(block.name, ObjectSet(cmap.target, cmap.image_bits(block.members.bits)))
        for block in family.blocks
    )
    return BlockFamily(cmap.target, blocks)


@dataclass(frozen=True)
class CompressionResult:
    """Pulled-back approximations plus the quotient-level values they came from."""

    sh: ObjectSet
    sl: ObjectSet
    image_x: ObjectSet
    image_sh: ObjectSet
    image_sl: ObjectSet


def approx_via_compression(
    family: BlockFamily, cmap: ConsistentMap, x: ObjectSet
) -> CompressionResult:
    """Compute the block-based upper/lower approximations through the quotient.

    Requires a consistent map and a saturated query set; the pullbacks equal
    the direct values on the source family.
    """
    _require_consistent(family, cmap)
    if x.universe != family.universe:
        raise ValueError("query set belongs to a different universe")
    if not cmap.is_saturated(x):
        raise PreconditionError("query set is not a union of fibers of the map")
    quotient = induced_family(family, cmap)
    image_x = cmap.image(x)
    approx = approx_matrix(build_cache(quotient), image_x)
    return CompressionResult(
        sh=cmap.preimage(approx.sh),
        sl=cmap.preimage(approx.sl),
        image_x=image_x,
        image_sh=approx.sh,
        image_sl=approx.sl,
    )


def suggest_consistent_map(family: BlockFamily, prefix: str = "y") -> ConsistentMap:
    """Construct a consistent map by merging objects with identical neighborhoods.

    Each fiber then sits inside the shared neighborhood of its members, so the
    result is always consistent; it is a canonical (not necessarily maximal)
    compression.
    """
    if not family.is_covering:
        raise PreconditionError("consistency is defined over a covering family")
    classes: dict[int, int] = {}
    assignment = []
    for label in family.universe.labels:
        key = neighborhood(family, label).bits
        if key not in classes:
            classes[key] = len(classes)
        assignment.append(classes[key])
    target = Universe(tuple(f"{prefix}{i + 1}" for i in range(len(classes))))
    return ConsistentMap(family.universe, target, tuple(assignment))
