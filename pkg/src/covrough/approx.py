"""Six rough approximation operators in matrix form and set-theoretic form.

The matrix form evaluates products of the characteristic matrices with the
query set's bit vector; the set-theoretic form works directly on blocks and
neighborhoods and serves as the independent oracle.  Five of the six
operators provably agree between the two forms; the sixth (XL) can differ,
so both values are surfaced through an equivalence report instead of
silently preferring one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BlockFamily, InternalCheckError, ObjectSet, PreconditionError
from .charmat import CharCache, build_cache
from .matrix import BoolMatrix, bool_mat_vec, bool_product, iter_bits, sharp_mat_vec, transpose

OPERATOR_NAMES = ("sh", "sl", "ih", "il", "xh", "xl")


@dataclass(frozen=True)
class ApproxSextuple:
    """The six approximation sets of one query set: block-based upper/lower (sh/sl),
    neighborhood membership (ih/il) and neighborhood union (xh/xl) pairs."""

    sh: ObjectSet
    sl: ObjectSet
    ih: ObjectSet
    il: ObjectSet
    xh: ObjectSet
    xl: ObjectSet

    def as_dict(self) -> dict[str, ObjectSet]:
        return {name: getattr(self, name) for name in OPERATOR_NAMES}


@dataclass(frozen=True)
class OperatorComparison:
    name: str
    matches: bool
    matrix_value: ObjectSet
    oracle_value: ObjectSet


@dataclass(frozen=True)
class EquivalenceReport:
    operators: tuple[OperatorComparison, ...]

    def mismatches(self) -> tuple[OperatorComparison, ...]:
        return tuple(op for op in self.operators if not op.matches)

    def operator(self, name: str) -> OperatorComparison:
        for op in self.operators:
            if op.name == name:
                return op
        raise KeyError(name)

    @property
    def all_match(self) -> bool:
        return not self.mismatches()


def _member_vectors(family: BlockFamily, label: str) -> list[int]:
    i = family.universe.index(label)
    vectors = [b.members.bits for b in family.blocks if b.members.bits >> i & 1]
    if not vectors:
        raise PreconditionError(f"object {label!r} is not covered by any block")
    return vectors


def neighborhood(family: BlockFamily, label: str) -> ObjectSet:
    """Intersection of all blocks containing the object (its smallest granule)."""
    bits = family.universe.full_mask
    for d in _member_vectors(family, label):
        bits &= d
    return ObjectSet(family.universe, bits)


def indiscernible(family: BlockFamily, label: str) -> ObjectSet:
    """Union of all blocks containing the object."""
    bits = 0
    for d in _member_vectors(family, label):
        bits |= d
    return ObjectSet(family.universe, bits)


def _require_covering(family: BlockFamily) -> None:
    if not family.is_covering:
        raise PreconditionError("approximation operators require a covering family")


def _require_query(family: BlockFamily, x: ObjectSet) -> None:
    if x.universe != family.universe:
        raise ValueError("query set belongs to a different universe")


def gram_matrix(cache: CharCache) -> BoolMatrix:
    """Boolean product of the transposed pi matrix with pi (computed fresh per call)."""
    pi_bool = cache.pi.to_bool()
    return bool_product(transpose(pi_bool), pi_bool)


def gram_equals_pi(cache: CharCache) -> bool:
    """Reported check: does the gram matrix of pi equal pi itself?

    True for every partition; false for some genuine coverings, so this is
    surfaced as a per-instance report rather than asserted as an invariant.
    """
    _require_covering(cache.family)
    return gram_matrix(cache) == cache.pi.to_bool()


def _sharp_as_bool(m: BoolMatrix, xbits: int) -> int:
    ge1, ge2 = sharp_mat_vec(m, xbits)
    if ge2:
        raise InternalCheckError("min-style product with a query vector produced an entry of 2")
    return ge1


def approx_matrix(cache: CharCache, x: ObjectSet) -> ApproxSextuple:
    """Evaluate all six operators through the characteristic matrices."""
    _require_covering(cache.family)
    _require_query(cache.family, x)
    universe = cache.universe
    gamma = cache.gamma
    pi_bool = cache.pi.to_bool()
    gram = bool_product(transpose(pi_bool), pi_bool)
    xbits = x.bits

    def of(bits: int) -> ObjectSet:
        return ObjectSet(universe, bits)

    return ApproxSextuple(
        sh=of(bool_mat_vec(gamma, xbits)),
        sl=of(_sharp_as_bool(gamma, xbits)),
        ih=of(bool_mat_vec(pi_bool, xbits)),
        il=of(_sharp_as_bool(pi_bool, xbits)),
        xh=of(bool_mat_vec(gram, xbits)),
        xl=of(_sharp_as_bool(gram, xbits)),
    )


def approx_oracle(family: BlockFamily, x: ObjectSet) -> ApproxSextuple:
    """Evaluate all six operators set-theoretically, without any matrices.

    sh unions the blocks meeting the query; sl is its dual on the complement;
    ih/il collect objects whose neighborhood meets / fits inside the query;
    xh/xl union those neighborhoods themselves.
    """
    _require_covering(family)
    _require_query(family, x)
    universe = family.universe
    n = universe.size
    full = universe.full_mask
    vectors = family.member_bits()
    xbits = x.bits

    sh = 0
    for d in vectors:
        if d & xbits:
            sh |= d
    xc = full & ~xbits
    sh_of_xc = 0
    for d in vectors:
        if d & xc:
            sh_of_xc |= d
    sl = full & ~sh_of_xc

    neigh = [full] * n
    for d in vectors:
        for i in iter_bits(d):
            neigh[i] &= d

    ih = il = xh = xl = 0
    for i in range(n):
        ni = neigh[i]
        if ni & xbits:
            ih |= 1 << i
            xh |= ni
        if ni & ~xbits == 0:
            il |= 1 << i
            xl |= ni

    def of(bits: int) -> ObjectSet:
        return ObjectSet(universe, bits)

    return ApproxSextuple(sh=of(sh), sl=of(sl), ih=of(ih), il=of(il), xh=of(xh), xl=of(xl))


def equivalence_report(
    family: BlockFamily, x: ObjectSet, cache: CharCache | None = None
) -> EquivalenceReport:
    """Operator-by-operator comparison of the matrix form against the oracle form.

    sh/sl/ih/il/xh are expected to match always; an xl mismatch is documented
    behavior, not an error.
    """
    if cache is None:
        cache = build_cache(family)
    elif cache.family != family:
        raise ValueError("cache was built for a different family")
    via_matrix = approx_matrix(cache, x).as_dict()
    via_oracle = approx_oracle(family, x).as_dict()
    comparisons = tuple(
        OperatorComparison(
            name=name,
            matches=via_matrix[name] == via_oracle[name],
            matrix_value=via_matrix[name],
            oracle_value=via_oracle[name],
        )
        for name in OPERATOR_NAMES
    )
    return EquivalenceReport(comparisons)
