"""Incremental maintenance of the characteristic matrices under five update kinds.

Each apply_* function returns a new cache whose matrices are bitwise equal to
a from-scratch rebuild of the updated family, while touching only the rows,
columns and block vectors the update actually disturbs.  Application is
transactional: any precondition failure leaves the input cache untouched
(caches are immutable, so this holds by construction).

Update kinds: add blocks (AE), delete blocks (DE), add objects (AO), delete
objects (DO), and attribute changes that move an object between blocks or
isolate it into a fresh singleton block (CA).
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
    _check_token,
)
from .charmat import CharCache, aggregate
from .matrix import BoolMatrix, TritMatrix, iter_bits


@dataclass
class WorkCounters:
    """Instrumentation for the touched-work guarantees; tests assert on these."""

    old_block_reads: int = 0
    rows_recomputed: int = 0
    cols_recomputed: int = 0
    uncovered_rows_refreshed: int = 0

    def reset(self) -> None:
        self.old_block_reads = 0
        self.rows_recomputed = 0
        self.cols_recomputed = 0
        self.uncovered_rows_refreshed = 0


counters = WorkCounters()


# --- deltas, as label-level descriptions (resolved against a cache on apply) ---


@dataclass(frozen=True)
class AddBlocks:
    blocks: tuple[tuple[str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class DeleteBlocks:
    names: tuple[str, ...]


@dataclass(frozen=True)
class AddObjects:
    labels: tuple[str, ...]
    memberships: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class DeleteObjects:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class MoveObject:
    label: str
    from_block: str
    to_block: str


@dataclass(frozen=True)
class IsolateObject:
    label: str
    from_block: str
    new_block: str


Delta = AddBlocks | DeleteBlocks | AddObjects | DeleteObjects | MoveObject | IsolateObject


def _set_bit(x: int, k: int, value: int) -> int:
    return x | 1 << k if value else x & ~(1 << k)


def apply_ae(cache: CharCache, new_blocks: Sequence[tuple[str, ObjectSet]]) -> CharCache:
    """Add blocks: join their per-block matrices into gamma, meet them into pi.

    No existing per-block vector is recomputed or read; member rows are
    updated in place and, on non-covering caches, the ==2 plane of still
    uncovered rows is narrowed by each new block.
    """
    family = cache.family
    universe = family.universe
    existing = set(family.names())
    for name, members in new_blocks:
        if name in existing:
            raise PreconditionError(f"block name {name!r} already exists")
        existing.add(name)
        if members.universe != universe:
            raise PreconditionError(f"new block {name!r} belongs to a different universe")
        if not members:
            raise PreconditionError(f"new block {name!r} is empty")

    g = list(cache.gamma.rows)
    ge1 = list(cache.pi.ge1)
    ge2 = list(cache.pi.ge2)
    uncovered = universe.full_mask & ~cache.gamma.diagonal_bits()
    for _, members in new_blocks:
        d = members.bits
        for i in iter_bits(d):
            g[i] |= d
            ge1[i] &= d
            ge2[i] = 0
        for i in iter_bits(uncovered & ~d):
            if ge2[i]:
                ge2[i] &= d
        uncovered &= ~d

    n = universe.size
    blocks = family.blocks + tuple(Block(name, members) for name, members in new_blocks)
    return CharCache(
        family=BlockFamily(universe, blocks),
        gamma=BoolMatrix(tuple(g), n),
        pi=TritMatrix(tuple(ge1), tuple(ge2), n),
        per_block=cache.per_block + tuple(m.bits for _, m in new_blocks),
    )


def apply_de(cache: CharCache, block_names: Sequence[str]) -> CharCache:
    """Delete blocks by refolding the surviving per-block vectors.

    Join and meet are not invertible, so deletion re-aggregates; the cached
    vectors make that one pass with no per-block recomputation.  The result
    may be non-covering, which downgrades cover status rather than erroring.
    """
    family = cache.family
    if len(set(block_names)) != len(block_names):
        raise PreconditionError("duplicate block name in deletion")
    doomed = {name: family.block_index(name) for name in block_names}
    keep = [i for i in range(family.size) if i not in set(doomed.values())]
    if not keep:
        raise PreconditionError("cannot delete every block")

    vectors = tuple(cache.per_block[i] for i in keep)
    counters.old_block_reads += len(vectors)
    n = family.universe.size
    gamma_rows, ge1, ge2 = aggregate(vectors, n)
    blocks = tuple(family.blocks[i] for i in keep)
    return CharCache(
        family=BlockFamily(family.universe, blocks),
        gamma=BoolMatrix(gamma_rows, n),
        pi=TritMatrix(ge1, ge2, n),
        per_block=vectors,
    )


def apply_ao(
    cache: CharCache,
    new_labels: Sequence[str],
    memberships: Sequence[Sequence[str]],
) -> CharCache:
    """Add objects: keep the old n x n corner verbatim, compute only the border.

    Gamma gains the new rows (mirrored into the new columns by symmetry); pi
    gains the new rows over the full width plus new-column extensions of the
    old rows.  Every new object must land in at least one existing block so
    the extended family still covers the newcomers.
    """
    family = cache.family
    universe = family.universe
    n = universe.size
    t = len(new_labels)
    if t == 0:
        raise PreconditionError("no objects to add")
    if len(memberships) != t:
        raise PreconditionError("one membership list per new object is required")
    seen: set[str] = set()
    for label in new_labels:
        try:
            _check_token("object label", label)
        except ValueError as exc:
            raise PreconditionError(str(exc)) from None
        if label in universe or label in seen:
            raise PreconditionError(f"object label {label!r} already exists")
        seen.add(label)

    block_index = {name: j for j, name in enumerate(family.names())}
    member_block_idx: list[list[int]] = []
    for label, names in zip(new_labels, memberships):
        if not names:
            raise PreconditionError(f"new object {label!r} is not assigned to any block")
        idx = []
        for name in names:
            if name not in block_index:
                raise PreconditionError(f"unknown block name {name!r}")
            idx.append(block_index[name])
        member_block_idx.append(sorted(set(idx)))

    # Extend the per-block vectors with the new objects' bits.
    ext = list(cache.per_block)
    for j, idx in enumerate(member_block_idx):
        bit = 1 << (n + j)
        for bi in idx:
            ext[bi] |= bit

    full_t = (1 << t) - 1
    old_mask = (1 << n) - 1

    # Border of the old rows: OR / AND of the member blocks' new-object bits.
    new_or = [0] * n
    new_and = [full_t] * n
    and_all_new = full_t
    for d in ext:
        npart = d >> n
        and_all_new &= npart
        opart = d & old_mask
        for i in iter_bits(opart):
            new_or[i] |= npart
            new_and[i] &= npart

    covered = cache.gamma.diagonal_bits()
    g = [cache.gamma.rows[i] | new_or[i] << n for i in range(n)]
    ge1 = [cache.pi.ge1[i] | new_and[i] << n for i in range(n)]
    ge2 = [
        cache.pi.ge2[i] if covered >> i & 1 else cache.pi.ge2[i] | and_all_new << n
        for i in range(n)
    ]

    # Full-width rows of the new objects.
    full_ext = (1 << (n + t)) - 1
    for idx in member_block_idx:
        row_or = 0
        row_and = full_ext
        for bi in idx:
            row_or |= ext[bi]
            row_and &= ext[bi]
        g.append(row_or)
        ge1.append(row_and)
        ge2.append(0)

    new_universe = Universe(universe.labels + tuple(new_labels))
    blocks = tuple(
        Block(block.name, ObjectSet(new_universe, d))
        for block, d in zip(family.blocks, ext)
    )
    return CharCache(
        family=BlockFamily(new_universe, blocks),
        gamma=BoolMatrix(tuple(g), n + t),
        pi=TritMatrix(tuple(ge1), tuple(ge2), n + t),
        per_block=tuple(ext),
    )


def _squeeze(x: int, deleted: Sequence[int], n: int) -> int:
    """Drop the given bit positions from an n-bit vector, closing the gaps."""
    out = 0
    src = dst = 0
    for pos in (*deleted, n):
        width = pos - src
        if width > 0:
            out |= (x >> src & (1 << width) - 1) << dst
            dst += width
        src = pos + 1
    return out


def apply_do(cache: CharCache, labels: Sequence[str]) -> CharCache:
    """Delete objects by removing their rows and columns from both matrices.

    Blocks emptied by the deletion are dropped from the family.  Dropping a
    block removes its all-ones contribution to the meet, which can raise
    surviving entries of uncovered rows from 1 to 2, so those ==2 plane rows
    are refreshed from the surviving vectors.
    """
    family = cache.family
    universe = family.universe
    n = universe.size
    if len(set(labels)) != len(labels):
        raise PreconditionError("duplicate object label in deletion")
    deleted = sorted(universe.index(label) for label in labels)
    if len(deleted) == n:
        raise PreconditionError("cannot delete every object")

    kept = [i for i in range(n) if i not in set(deleted)]
    new_n = len(kept)
    squeezed = [_squeeze(d, deleted, n) for d in cache.per_block]
    keep_blocks = [j for j, d in enumerate(squeezed) if d]
    if not keep_blocks:
        raise PreconditionError("deletion would empty every block")
    dropped_any = len(keep_blocks) != len(squeezed)

    g = [_squeeze(cache.gamma.rows[i], deleted, n) for i in kept]
    ge1 = [_squeeze(cache.pi.ge1[i], deleted, n) for i in kept]
    ge2 = [_squeeze(cache.pi.ge2[i], deleted, n) for i in kept]

    vectors = tuple(squeezed[j] for j in keep_blocks)
    if dropped_any:
        and_all = (1 << new_n) - 1
        covered = 0
        for d in vectors:
            and_all &= d
            covered |= d
        for i in range(new_n):
            if not covered >> i & 1:
                ge2[i] = and_all
                counters.uncovered_rows_refreshed += 1

    new_universe = Universe(tuple(universe.labels[i] for i in kept))
    blocks = tuple(
        Block(family.blocks[j].name, ObjectSet(new_universe, squeezed[j]))
        for j in keep_blocks
    )
    return CharCache(
        family=BlockFamily(new_universe, blocks),
        gamma=BoolMatrix(tuple(g), new_n),
        pi=TritMatrix(tuple(ge1), tuple(ge2), new_n),
        per_block=vectors,
    )


def _rewrite_row_and_column(
    cache: CharCache,
    k: int,
    per_block: Sequence[int],
) -> tuple[list[int], list[int], list[int]]:
    """Recompute row k and column k of both matrices against updated vectors.

    Gamma's column is the mirror of its row (gamma is symmetric).  Pi's
    column is recomputed entrywise: a covered row i has a 1 at column k iff
    object k lies in every block containing object i; uncovered rows keep a
    value >= 1 there, with 2 iff object k lies in every block.
    """
    n = cache.n
    member_ds = [d for d in per_block if d >> k & 1]
    gamma_row = 0
    pi_row = cache.universe.full_mask
    for d in member_ds:
        gamma_row |= d
        pi_row &= d
    counters.rows_recomputed += 2

    g = list(cache.gamma.rows)
    ge1 = list(cache.pi.ge1)
    ge2 = list(cache.pi.ge2)
    g[k] = gamma_row
    ge1[k] = pi_row
    ge2[k] = 0

    or_nonmember = 0
    covered = 0
    and_all = cache.universe.full_mask
    for d in per_block:
        covered |= d
        and_all &= d
        if not d >> k & 1:
            or_nonmember |= d
    ones_col = covered & ~or_nonmember
    k_in_all = and_all >> k & 1
    for i in range(n):
        if i == k:
            continue
        g[i] = _set_bit(g[i], k, gamma_row >> i & 1)
        if covered >> i & 1:
            ge1[i] = _set_bit(ge1[i], k, ones_col >> i & 1)
        else:
            ge2[i] = _set_bit(ge2[i], k, k_in_all)
    counters.cols_recomputed += 2
    return g, ge1, ge2


def apply_ca_move(cache: CharCache, label: str, from_block: str, to_block: str) -> CharCache:
    """Move an object between blocks; only row k and column k change."""
    family = cache.family
    k = family.universe.index(label)
    fi = family.block_index(from_block)
    ti = family.block_index(to_block)
    bk = 1 << k
    if not cache.per_block[fi] & bk:
        raise PreconditionError(f"object {label!r} is not in block {from_block!r}")
    if cache.per_block[ti] & bk:
        raise PreconditionError(f"object {label!r} is already in block {to_block!r}")
    if cache.per_block[fi] == bk:
        raise PreconditionError(f"move would empty block {from_block!r}")

    per_block = list(cache.per_block)
    per_block[fi] ^= bk
    per_block[ti] |= bk
    g, ge1, ge2 = _rewrite_row_and_column(cache, k, per_block)

    n = cache.n
    blocks = list(family.blocks)
    blocks[fi] = Block(from_block, ObjectSet(family.universe, per_block[fi]))
    blocks[ti] = Block(to_block, ObjectSet(family.universe, per_block[ti]))
    return CharCache(
        family=BlockFamily(family.universe, tuple(blocks)),
        gamma=BoolMatrix(tuple(g), n),
        pi=TritMatrix(tuple(ge1), tuple(ge2), n),
        per_block=tuple(per_block),
    )


def apply_ca_isolate(cache: CharCache, label: str, from_block: str, new_block_name: str) -> CharCache:
    """Remove an object from a block into a fresh singleton block of its own.

    Row and column k change as for a move.  On a non-covering cache the new
    singleton also narrows the all-block intersection, so the ==2 plane of
    uncovered rows is refreshed.
    """
    family = cache.family
    k = family.universe.index(label)
    fi = family.block_index(from_block)
    bk = 1 << k
    if not cache.per_block[fi] & bk:
        raise PreconditionError(f"object {label!r} is not in block {from_block!r}")
    if cache.per_block[fi] == bk:
        raise PreconditionError(f"isolating would empty block {from_block!r}")
    if new_block_name in family.names():
        raise PreconditionError(f"block name {new_block_name!r} already exists")
    try:
        _check_token("block name", new_block_name)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None

    per_block = list(cache.per_block)
    per_block[fi] ^= bk
    per_block.append(bk)
    g, ge1, ge2 = _rewrite_row_and_column(cache, k, per_block)

    n = cache.n
    covered = 0
    and_all = family.universe.full_mask
    for d in per_block:
        covered |= d
        and_all &= d
    uncovered = family.universe.full_mask & ~covered
    for i in iter_bits(uncovered):
        ge2[i] = and_all
        counters.uncovered_rows_refreshed += 1

    blocks = list(family.blocks)
    blocks[fi] = Block(from_block, ObjectSet(family.universe, per_block[fi]))
    blocks.append(Block(new_block_name, ObjectSet(family.universe, bk)))
    return CharCache(
        family=BlockFamily(family.universe, tuple(blocks)),
        gamma=BoolMatrix(tuple(g), n),
        pi=TritMatrix(tuple(ge1), tuple(ge2), n),
        per_block=tuple(per_block),
    )


def apply_delta(cache: CharCache, delta: Delta) -> CharCache:
    """Dispatch a label-level delta to the matching apply_* operation."""
    if isinstance(delta, AddBlocks):
        resolved = [
            (name, ObjectSet.from_labels(cache.universe, labels))
            for name, labels in delta.blocks
        ]
        return apply_ae(cache, resolved)
    if isinstance(delta, DeleteBlocks):
        return apply_de(cache, delta.names)
    if isinstance(delta, AddObjects):
        return apply_ao(cache, delta.labels, delta.memberships)
    if isinstance(delta, DeleteObjects):
        return apply_do(cache, delta.labels)
    if isinstance(delta, MoveObject):
        return apply_ca_move(cache, delta.label, delta.from_block, delta.to_block)
    if isinstance(delta, IsolateObject):
        return apply_ca_isolate(cache, delta.label, delta.from_block, delta.new_block)
    raise TypeError(f"not a delta: {delta!r}")


# --- delta script format ---


def parse_script(text: str) -> list[tuple[int, Delta]]:
    """Parse the line-oriented delta script into (line number, delta) pairs.

    Grammar, one command per line (comments with '#', blanks ignored):
      add-block <name>: <labels...>
      del-block <name>
      add-object <label>: <block names...>
      del-object <label>
      move <label> <from-block> <to-block>
      isolate <label> <from-block> <new-block-name>
    """
    out: list[tuple[int, Delta]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        pos = raw.find("#")
        line = (raw if pos < 0 else raw[:pos]).strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "add-block":
            name, sep, members = rest.partition(":")
            name = name.strip()
            if not sep or not name or len(name.split()) != 1:
                raise ParseError("expected 'add-block <name>: <labels...>'", lineno)
            labels = tuple(members.split())
            if not labels:
                raise ParseError(f"empty block {name!r}", lineno)
            out.append((lineno, AddBlocks(((name, labels),))))
        elif head == "del-block":
            if len(rest.split()) != 1:
                raise ParseError("expected 'del-block <name>'", lineno)
            out.append((lineno, DeleteBlocks((rest,))))
        elif head == "add-object":
            label, sep, names = rest.partition(":")
            label = label.strip()
            if not sep or not label or len(label.split()) != 1:
                raise ParseError("expected 'add-object <label>: <block names...>'", lineno)
            blocks = tuple(names.split())
            if not blocks:
                raise ParseError(f"new object {label!r} needs at least one block", lineno)
            out.append((lineno, AddObjects((label,), (blocks,))))
        elif head == "del-object":
            if len(rest.split()) != 1:
                raise ParseError("expected 'del-object <label>'", lineno)
            out.append((lineno, DeleteObjects((rest,))))
        elif head == "move":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("expected 'move <label> <from> <to>'", lineno)
            out.append((lineno, MoveObject(*parts)))
        elif head == "isolate":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("expected 'isolate <label> <from> <new-name>'", lineno)
            out.append((lineno, IsolateObject(*parts)))
        else:
            raise ParseError(f"unknown command {head!r}", lineno)
    return out


@dataclass(frozen=True)
class ScriptStep:
    line: int
    delta: Delta
    summary: str


def _summarize(before: CharCache, after: CharCache, delta: Delta) -> str:
    if isinstance(delta, AddObjects):
        return "objects added: " + " ".join(delta.labels)
    if isinstance(delta, DeleteObjects):
        return "objects removed: " + " ".join(delta.labels)
    changed = [
        before.universe.labels[i]
        for i in range(before.n)
        if before.gamma.rows[i] != after.gamma.rows[i]
        or before.pi.ge1[i] != after.pi.ge1[i]
        or before.pi.ge2[i] != after.pi.ge2[i]
    ]
    return "rows changed: " + (" ".join(changed) if changed else "none")


def run_script(cache: CharCache, text: str) -> tuple[CharCache, list[ScriptStep]]:
    """Apply a delta script top to bottom.

    The first error aborts with its line number; since application never
    mutates its input, the caller's cache is untouched on failure.
    """
    steps: list[ScriptStep] = []
    current = cache
    for lineno, delta in parse_script(text):
        try:
            nxt = apply_delta(current, delta)
        except PreconditionError as exc:
            raise PreconditionError(str(exc), line=lineno) from None
        steps.append(ScriptStep(line=lineno, delta=delta, summary=_summarize(current, nxt, delta)))
        current = nxt
    return current, steps
