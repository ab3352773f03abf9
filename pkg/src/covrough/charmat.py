"""Characteristic matrices of a block family and the per-block cache.

Two square matrices summarise a family over n objects: `gamma`, the boolean
product of the membership matrix with its transpose (row i = union of the
blocks containing object i), and `pi`, the min-style product (row i = the
intersection of those blocks, three-valued when some object is uncovered).
Both are aggregated from per-block membership vectors, which is also the
state the dynamic-update module maintains incrementally.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Block,
    BlockFamily,
    InternalCheckError,
    ObjectSet,
    ParseError,
    Universe,
)
from .matrix import BoolMatrix, TritMatrix, bool_product, iter_bits, sharp_product, transpose

STATE_FORMAT = "covrough-state"
STATE_VERSION = 1


@dataclass(frozen=True)
class CharCache:
    """A family with its aggregated matrices and per-block membership vectors.

    Immutable; dynamic updates produce new caches that share the unchanged
    per-block vectors and matrix rows.
    """

    family: BlockFamily
    gamma: BoolMatrix
    pi: TritMatrix
    per_block: tuple[int, ...]

    @property
    def universe(self) -> Universe:
        return self.family.universe

    @property
    def n(self) -> int:
        return self.family.universe.size

    def covered_bits(self) -> int:
        bits = 0
        for d in self.per_block:
            bits |= d
        return bits

    def block_vector(self, name: str) -> int:
        return self.per_block[self.family.block_index(name)]


def membership_matrix(family: BlockFamily) -> BoolMatrix:
    """n x m matrix: entry (i, j) = 1 iff object i belongs to block j."""
    n = family.universe.size
    rows = [0] * n
    for j, block in enumerate(family.blocks):
        for i in iter_bits(block.members.bits):
            rows[i] |= 1 << j
    return BoolMatrix(tuple(rows), family.size)


def block_gamma(family: BlockFamily, name: str) -> BoolMatrix:
    """Per-block type-1 matrix: member rows copy the membership vector, others are zero."""
    d = family.block(name).members.bits
    n = family.universe.size
    return BoolMatrix(tuple(d if d >> i & 1 else 0 for i in range(n)), n)


def block_pi(family: BlockFamily, name: str) -> TritMatrix:
    """Per-block type-2 matrix: member rows are the membership vector, others are it plus one."""
    d = family.block(name).members.bits
    n = family.universe.size
    full = family.universe.full_mask
    ge1 = tuple(d if d >> i & 1 else full for i in range(n))
    ge2 = tuple(0 if d >> i & 1 else d for i in range(n))
    return TritMatrix(ge1, ge2, n)


def aggregate(vectors: Sequence[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Fold per-block membership vectors into (gamma rows, pi >=1 plane, pi ==2 plane).

    Row i of gamma is the OR of the vectors whose bit i is set; row i of the
    >=1 plane is their AND (all-ones when no vector covers i, in which case
    the ==2 plane row is the AND of every vector).
    """
    full = (1 << n) - 1
    gamma = [0] * n
    ge1 = [full] * n
    covered = 0
    and_all = full
    for d in vectors:
        covered |= d
        and_all &= d
        for i in iter_bits(d):
            gamma[i] |= d
            ge1[i] &= d
    ge2 = [0 if covered >> i & 1 else and_all for i in range(n)]
    return tuple(gamma), tuple(ge1), tuple(ge2)


def definitional_gamma(family: BlockFamily) -> BoolMatrix:
    """Type-1 matrix straight from its defining product (cross-check path)."""
    m = membership_matrix(family)
    return bool_product(m, transpose(m))


def definitional_pi(family: BlockFamily) -> TritMatrix:
    """Type-2 matrix straight from its defining product (cross-check path)."""
    m = membership_matrix(family)
    return sharp_product(m, transpose(m))


def build_cache(family: BlockFamily, *, cross_check: bool = False) -> CharCache:
    """Build the cache via per-element aggregation.

    With cross_check=True the result is verified against the definitional
    products; a mismatch raises InternalCheckError.
    """
    n = family.universe.size
    vectors = family.member_bits()
    gamma_rows, ge1, ge2 = aggregate(vectors, n)
    gamma = BoolMatrix(gamma_rows, n)
    pi = TritMatrix(ge1, ge2, n)
    if cross_check:
        if gamma != definitional_gamma(family):
            raise InternalCheckError("fast gamma construction disagrees with its defining product")
        if pi != definitional_pi(family):
            raise InternalCheckError("fast pi construction disagrees with its defining product")
    return CharCache(family=family, gamma=gamma, pi=pi, per_block=vectors)


def matrix_digest(m: BoolMatrix | TritMatrix) -> str:
    return hashlib.sha256(m.dumps().encode("utf-8")).hexdigest()


def state_dict(
    cache: CharCache,
    history: Iterable[str] = (),
    origin: str | None = None,
) -> dict:
    """JSON-ready session state: blocks as member index arrays, matrices as digests.

    The matrices themselves are recomputed on load and checked against the
    stored digests.  `origin` carries the covering text the history started
    from so the whole session can be replayed.
    """
    return {
        "format": STATE_FORMAT,
        "version": STATE_VERSION,
        "universe": list(cache.universe.labels),
        "blocks": [
            {"name": block.name, "members": list(block.members.indices())}
            for block in cache.family.blocks
        ],
        "digest": {"gamma": matrix_digest(cache.gamma), "pi": matrix_digest(cache.pi)},
        "history": list(history),
        "origin": origin,
    }


def state_json(cache: CharCache, history: Iterable[str] = (), origin: str | None = None) -> str:
    return json.dumps(state_dict(cache, history, origin), indent=2) + "\n"


@dataclass(frozen=True)
class LoadedState:
    cache: CharCache
    history: tuple[str, ...]
    origin: str | None


def load_state(text: str) -> LoadedState:
    """Rebuild a cache from session-state JSON, verifying any stored digests."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"state file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or data.get("format") != STATE_FORMAT:
        raise ParseError("not a covrough state file")
    if data.get("version") != STATE_VERSION:
        raise ParseError(f"unsupported state version {data.get('version')!r}")
    try:
        universe = Universe(tuple(data["universe"]))
        blocks = tuple(
            Block(entry["name"], ObjectSet.from_indices(universe, entry["members"]))
            for entry in data["blocks"]
        )
        family = BlockFamily(universe, blocks)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed state file: {exc}") from None
    cache = build_cache(family)
    digest = data.get("digest") or {}
    stored_gamma = digest.get("gamma")
    stored_pi = digest.get("pi")
    if stored_gamma is not None and stored_gamma != matrix_digest(cache.gamma):
        raise InternalCheckError("state digest mismatch for gamma")
    if stored_pi is not None and stored_pi != matrix_digest(cache.pi):
        raise InternalCheckError("state digest mismatch for pi")
    history = tuple(data.get("history") or ())
    origin = data.get("origin")
    return LoadedState(cache=cache, history=history, origin=origin)
