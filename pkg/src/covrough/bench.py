"""Benchmark harness and seeded random space generators.

Times the incremental update paths against from-scratch rebuilds and the fast
per-element matrix construction against a naive scalar triple loop, always
verifying that the compared computations produce identical results.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .core import Block, BlockFamily, ObjectSet, PreconditionError, Universe
from .charmat import CharCache, build_cache
from .matrix import BoolMatrix, TritMatrix
from .dynamic import (
    AddBlocks,
    AddObjects,
    DeleteBlocks,
    DeleteObjects,
    Delta,
    IsolateObject,
    MoveObject,
    apply_delta,
)


def random_covering(rng: random.Random, n: int, m: int) -> BlockFamily:
    """Seeded random covering: m dense random blocks, patched to cover everything."""
    universe = Universe(tuple(f"x{i + 1}" for i in range(n)))
    bits = []
    for _ in range(m):
        d = rng.getrandbits(n)
        if not d:
            d = 1 << rng.randrange(n)
        bits.append(d)
    covered = 0
    for d in bits:
        covered |= d
    for i in range(n):
        if not covered >> i & 1:
            bits[rng.randrange(m)] |= 1 << i
    blocks = tuple(
        Block(f"C{j + 1}", ObjectSet(universe, d)) for j, d in enumerate(bits)
    )
    return BlockFamily(universe, blocks)


def random_partition_family(rng: random.Random, n: int) -> BlockFamily:
    """Seeded random partition of an n-object universe."""
    universe = Universe(tuple(f"x{i + 1}" for i in range(n)))
    k = rng.randint(1, n)
    bits = [0] * k
    for i in range(n):
        bits[rng.randrange(k)] |= 1 << i
    blocks = tuple(
        Block(f"P{j + 1}", ObjectSet(universe, d)) for j, d in enumerate(bits) if d
    )
    return BlockFamily(universe, blocks)


def random_query(rng: random.Random, universe: Universe) -> ObjectSet:
    return ObjectSet(universe, rng.getrandbits(universe.size))


class _FreshNames:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.counter = 0

    def __call__(self) -> str:
        self.counter += 1
        return f"{self.prefix}{self.counter}"


class DeltaStream:
    """Generates random preconditions-respecting deltas against an evolving cache."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.fresh_block = _FreshNames("B")
        self.fresh_object = _FreshNames("o")

    def _random_subset(self, n: int) -> int:
        bits = self.rng.getrandbits(n)
        return bits if bits else 1 << self.rng.randrange(n)

    def _gen_add_blocks(self, cache: CharCache) -> Delta:
        universe = cache.universe
        count = self.rng.randint(1, 2)
        blocks = []
        for _ in range(count):
            members = ObjectSet(universe, self._random_subset(universe.size))
            blocks.append((self.fresh_block(), members.labels()))
        return AddBlocks(tuple(blocks))

    def _gen_delete_blocks(self, cache: CharCache) -> Delta | None:
        names = cache.family.names()
        if len(names) < 2:
            return None
        count = self.rng.randint(1, min(2, len(names) - 1))
        return DeleteBlocks(tuple(self.rng.sample(names, count)))

    def _gen_add_objects(self, cache: CharCache) -> Delta:
        names = cache.family.names()
        t = self.rng.randint(1, 2)
        labels, memberships = [], []
        for _ in range(t):
            labels.append(self.fresh_object())
            count = self.rng.randint(1, len(names))
            memberships.append(tuple(self.rng.sample(names, count)))
        return AddObjects(tuple(labels), tuple(memberships))

    def _gen_delete_objects(self, cache: CharCache) -> Delta | None:
        universe = cache.universe
        if universe.size < 2:
            return None
        candidates = list(universe.labels)
        self.rng.shuffle(candidates)
        for label in candidates:
            bit = 1 << universe.index(label)
            if any(d & ~bit for d in cache.per_block):
                return DeleteObjects((label,))
        return None

    def _gen_move(self, cache: CharCache) -> Delta | None:
        blocks = cache.family.blocks
        if len(blocks) < 2:
            return None
        order = list(range(len(blocks)))
        self.rng.shuffle(order)
        for fi in order:
            d_from = cache.per_block[fi]
            if d_from.bit_count() < 2:
                continue
            for ti in order:
                movable = d_from & ~cache.per_block[ti]
                if ti == fi or not movable:
                    continue
                k = self.rng.choice(ObjectSet(cache.universe, movable).labels())
                return MoveObject(k, blocks[fi].name, blocks[ti].name)
        return None

    def _gen_isolate(self, cache: CharCache) -> Delta | None:
        blocks = cache.family.blocks
        order = list(range(len(blocks)))
        self.rng.shuffle(order)
        for fi in order:
            d_from = cache.per_block[fi]
            if d_from.bit_count() < 2:
                continue
            k = self.rng.choice(ObjectSet(cache.universe, d_from).labels())
            return IsolateObject(k, blocks[fi].name, self.fresh_block())
        return None

    def next_delta(self, cache: CharCache) -> Delta:
        generators: list[Callable[[CharCache], Delta | None]] = [
            self._gen_add_blocks,
            self._gen_delete_blocks,
            self._gen_add_objects,
            self._gen_delete_objects,
            self._gen_move,
            self._gen_isolate,
        ]
        self.rng.shuffle(generators)
        for gen in generators:
            delta = gen(cache)
            if delta is not None:
                return delta
        raise PreconditionError("no applicable delta for this cache")


@dataclass(frozen=True)
class BenchRow:
    kind: str
    deltas: int
    incremental_s: float
    rebuild_s: float
    identical: bool

    @property
    def speedup(self) -> float:
        return self.rebuild_s / self.incremental_s if self.incremental_s > 0 else float("inf")


def _time_best(fn: Callable[[], object], repeat: int) -> tuple[object, float]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return result, best


def bench_incremental(
    n: int, m: int, delta_count: int, seed: int, repeat: int = 3
) -> list[BenchRow]:
    """Time incremental apply vs from-scratch rebuild per delta kind.

    Every timed apply is verified bitwise against build_cache of the updated
    family; a mismatch shows up as identical=False.
    """
    rows = []
    for kind in ("AE", "CA", "AO"):
        rng = random.Random(seed)
        cache = build_cache(random_covering(rng, n, m))
        stream = DeltaStream(rng)
        gen = {
            "AE": stream._gen_add_blocks,
            "CA": stream._gen_move,
            "AO": lambda c: _big_add_objects(stream, c, 32),
        }[kind]
        inc_total = reb_total = 0.0
        identical = True
        applied_count = 0
        for _ in range(delta_count):
            delta = gen(cache)
            if delta is None:
                break
            applied, t_inc = _time_best(lambda: apply_delta(cache, delta), repeat)
            rebuilt, t_reb = _time_best(lambda: build_cache(applied.family), repeat)
            identical = identical and applied == rebuilt
            inc_total += t_inc
            reb_total += t_reb
            cache = applied
            applied_count += 1
        rows.append(
            BenchRow(kind=kind, deltas=applied_count, incremental_s=inc_total,
                     rebuild_s=reb_total, identical=identical)
        )
    return rows


def _big_add_objects(stream: DeltaStream, cache: CharCache, t: int) -> Delta:
    names = cache.family.names()
    labels, memberships = [], []
    for _ in range(t):
        labels.append(stream.fresh_object())
        count = stream.rng.randint(1, max(1, len(names) // 2))
        memberships.append(tuple(stream.rng.sample(names, count)))
    return AddObjects(tuple(labels), tuple(memberships))


def naive_gamma(family: BlockFamily) -> BoolMatrix:
    """Scalar triple loop over objects x objects x blocks; the comparison baseline."""
    n = family.universe.size
    member = [[d >> i & 1 for i in range(n)] for d in family.member_bits()]
    dense = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = 0
            for row in member:
                if row[i] and row[j]:
                    e = 1
                    break
            dense[i][j] = e
    return BoolMatrix.from_dense(dense)


def naive_pi(family: BlockFamily) -> TritMatrix:
    """Scalar triple loop evaluating the min-style product entry by entry."""
    n = family.universe.size
    member = [[d >> i & 1 for i in range(n)] for d in family.member_bits()]
    dense = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = 2
            for row in member:
                term = row[j] - row[i] + 1
                if term < e:
                    e = term
                    if e == 0:
                        break
            dense[i][j] = e
    return TritMatrix.from_dense(dense)


@dataclass(frozen=True)
class BuildBenchRow:
    n: int
    m: int
    fast_s: float
    naive_s: float
    identical: bool

    @property
    def speedup(self) -> float:
        return self.naive_s / self.fast_s if self.fast_s > 0 else float("inf")


def bench_build(n: int, m: int, seed: int, repeat: int = 3) -> BuildBenchRow:
    """Time the fast per-element construction against the naive triple loop."""
    family = random_covering(random.Random(seed), n, m)
    fast, fast_s = _time_best(lambda: build_cache(family), repeat)
    start = time.perf_counter()
    slow_gamma = naive_gamma(family)
    slow_pi = naive_pi(family)
    naive_s = time.perf_counter() - start
    identical = fast.gamma == slow_gamma and fast.pi == slow_pi
    return BuildBenchRow(n=n, m=m, fast_s=fast_s, naive_s=naive_s, identical=identical)
