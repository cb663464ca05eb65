"""Matroids on [n] stored as complete rank tables.

Subsets are exchanged as collections of 1-indexed elements; internally they
are ``n``-bit masks where bit ``i - 1`` marks element ``i``, and a rank table
is a tuple of length ``2**n`` indexed by mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    AxiomViolationError,
    DimensionMismatchError,
    InvalidCyclicFlatsError,
    NotAChainError,
    ResourceLimitError,
)
from .matching import has_saturating_matching, max_matching

MAX_GROUND = 8
SEARCH_CAP = 6

WeightedFlats = dict[frozenset[int], int]


def mask_of(S: Iterable[int]) -> int:
    m = 0
    for x in S:
        m |= 1 << (x - 1)
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _sort_key(S: frozenset[int]) -> tuple:
    return (len(S), sorted(S))


def check_rank_axioms(n: int, ranks) -> None:
    """Raise :class:`AxiomViolationError` unless ``ranks`` is a matroid rank function."""
    size = 1 << n
    r = np.asarray(ranks, dtype=np.int64)
    if r.shape != (size,):
        raise DimensionMismatchError(f"rank table of length {r.shape} for ground set of size {n}")
    if r[0] != 0:
        raise AxiomViolationError("normalization", (frozenset(),), f"r(empty set) = {r[0]}")
    idx = np.arange(size)
    for i in range(n):
        bit = 1 << i
        lo = idx[(idx & bit) == 0]
        step = r[lo | bit] - r[lo]
        bad = np.flatnonzero((step < 0) | (step > 1))
        if bad.size:
            X = set_of(int(lo[bad[0]]))
            raise AxiomViolationError(
                "unit increase", (X, i + 1), f"r({sorted(X)} + {i + 1}) - r({sorted(X)}) = {step[bad[0]]}"
            )
    lhs = r[idx[:, None] | idx[None, :]] + r[idx[:, None] & idx[None, :]]
    rhs = r[:, None] + r[None, :]
    bad = np.argwhere(lhs > rhs)
    if bad.size:
        a, b = (int(x) for x in bad[0])
        raise AxiomViolationError("submodularity", (set_of(a), set_of(b)))


@dataclass(frozen=True)
class Matroid:
    """A matroid on ``[n]``; the rank table is validated on construction."""

    n: int
    ranks: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GROUND:
            raise ResourceLimitError(f"ground set of size {self.n} exceeds the cap {MAX_GROUND}")
        object.__setattr__(self, "ranks", tuple(int(x) for x in self.ranks))
        check_rank_axioms(self.n, self.ranks)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def rank_of_matroid(self) -> int:
        return self.ranks[-1]

    def rank(self, S: Iterable[int]) -> int:
        return self.ranks[mask_of(S)]

    def is_independent(self, S: Iterable[int]) -> bool:
        m = mask_of(S)
        return self.ranks[m] == _popcount(m)


@dataclass(frozen=True)
class SetPresentation:
    """An ordered family of avoidance sets on ``[n]``; repeats are allowed."""

    n: int
    sets: tuple[frozenset[int], ...] = field(default=())

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if any(not 1 <= x <= self.n for x in s):
                raise DimensionMismatchError(f"avoidance set {sorted(s)} is not inside [1..{self.n}]")
        object.__setattr__(self, "sets", sets)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(s) for s in self.sets)


def _slot_adjacency(mask: int, slot_masks: tuple[int, ...]) -> list[int]:
    adj = []
    x = 0
    while mask >> x:
        if (mask >> x) & 1:
            adj.append(sum(1 << i for i, a in enumerate(slot_masks) if not (a >> x) & 1))
        x += 1
    return adj


def avoidance_transversal_exists(X: Iterable[int], P: SetPresentation) -> bool:
    """Can the elements of ``X`` be matched to distinct sets that avoid them?"""
    m = mask_of(X)
    if m >> P.n:
        raise DimensionMismatchError(f"{sorted(set_of(m))} is not inside [1..{P.n}]")
    return has_saturating_matching(_slot_adjacency(m, P.masks))


def _matching_ranks(n: int, slot_masks: tuple[int, ...]) -> list[int]:
    return [max_matching(_slot_adjacency(m, slot_masks)) for m in range(1 << n)]


def avoidance_transversal_matroid(P: SetPresentation) -> Matroid:
    return Matroid(P.n, _matching_ranks(P.n, P.masks))


def uniform_matroid(k: int, n: int) -> Matroid:
    return Matroid(n, [min(k, _popcount(m)) for m in range(1 << n)])


def _flat_masks(M: Matroid) -> list[int]:
    r, n = M.ranks, M.n
    return [
        m
        for m in range(1 << n)
        if all(r[m | (1 << y)] > r[m] for y in range(n) if not (m >> y) & 1)
    ]


def _cyclic_masks(M: Matroid) -> list[int]:
    r, n = M.ranks, M.n
    return [m for m in range(1 << n) if all(r[m & ~(1 << x)] == r[m] for x in range(n) if (m >> x) & 1)]


def _as_sets(masks: Iterable[int]) -> list[frozenset[int]]:
    return sorted((set_of(m) for m in masks), key=_sort_key)


def is_flat(M: Matroid, S: Iterable[int]) -> bool:
    m = mask_of(S)
    return all(M.ranks[m | (1 << y)] > M.ranks[m] for y in range(M.n) if not (m >> y) & 1)


def is_cyclic(M: Matroid, S: Iterable[int]) -> bool:
    m = mask_of(S)
    return all(M.ranks[m & ~(1 << x)] == M.ranks[m] for x in range(M.n) if (m >> x) & 1)


def flats(M: Matroid) -> list[frozenset[int]]:
    return _as_sets(_flat_masks(M))


def cyclic_sets(M: Matroid) -> list[frozenset[int]]:
    return _as_sets(_cyclic_masks(M))


def circuits(M: Matroid) -> list[frozenset[int]]:
    """Minimal dependent sets."""
    r = M.ranks
    out = []
    for m in range(1, 1 << M.n):
        if r[m] == _popcount(m):
            continue
        # dependent; minimal iff every single deletion is independent
        if all(r[m & ~(1 << x)] == _popcount(m) - 1 for x in range(M.n) if (m >> x) & 1):
            out.append(m)
    return _as_sets(out)


def cyclic_flats(M: Matroid) -> WeightedFlats:
    cyc = set(_cyclic_masks(M))
    return {set_of(m): M.ranks[m] for m in sorted(_flat_masks(M), key=lambda m: (_popcount(m), m)) if m in cyc}


def weighted_flats(Z: Mapping | Iterable) -> WeightedFlats:
    """Normalize ``{subset: rank}`` or ``[(subset, rank), ...]`` input."""
    items = Z.items() if isinstance(Z, Mapping) else Z
    out: WeightedFlats = {}
    for S, rho in items:
        S = frozenset(S)
        if S in out:
            raise InvalidCyclicFlatsError(f"repeated cyclic flat {sorted(S)}")
        rho = int(rho)
        if not 0 <= rho <= len(S):
            raise InvalidCyclicFlatsError(f"rank {rho} out of range for {sorted(S)}")
        out[S] = rho
    return dict(sorted(out.items(), key=lambda kv: _sort_key(kv[0])))


def matroid_from_cyclic_flats(Z: Mapping | Iterable, n: int) -> Matroid:
    """Rebuild the matroid with the given weighted cyclic flats.

    Uses ``r(X) = min(|X|, min_Z (r(Z) + |X - Z|))`` and rejects the input unless
    the rebuilt matroid has exactly ``Z`` as its weighted cyclic flats.
    """
    Z = weighted_flats(Z)
    if not Z:
        raise InvalidCyclicFlatsError("empty cyclic-flat family")
    zs = [(mask_of(S), rho) for S, rho in Z.items()]
    if any(m >> n for m, _ in zs):
        raise InvalidCyclicFlatsError(f"cyclic flat outside [1..{n}]")
    ranks = [min([_popcount(x)] + [rho + _popcount(x & ~m) for m, rho in zs]) for x in range(1 << n)]
    try:
        M = Matroid(n, ranks)
    except AxiomViolationError as exc:
        raise InvalidCyclicFlatsError(f"reconstruction is not a matroid: {exc}") from exc
    if cyclic_flats(M) != Z:
        raise InvalidCyclicFlatsError("family is not the weighted cyclic-flat lattice of any matroid")
    return M


def direct_sum_matroid(M1: Matroid, M2: Matroid) -> Matroid:
    """``M1 ⊕ M2`` on ``[n1 + n2]``; ``M2`` is relabelled to ``n1+1..n1+n2``."""
    low = M1.full_mask
    ranks = [M1.ranks[m & low] + M2.ranks[m >> M1.n] for m in range(1 << (M1.n + M2.n))]
    return Matroid(M1.n + M2.n, ranks)


def direct_sum_set_presentation(P1: SetPresentation, P2: SetPresentation) -> SetPresentation:
    n1, n2 = P1.n, P2.n
    S = frozenset(range(1, n1 + 1))
    T = frozenset(range(n1 + 1, n1 + n2 + 1))
    shifted = [frozenset(x + n1 for x in B) for B in P2.sets]
    return SetPresentation(n1 + n2, tuple(A | T for A in P1.sets) + tuple(S | B for B in shifted))


def check_chain(chain: Mapping | Iterable) -> list[tuple[frozenset[int], int]]:
    """Return the chain entries ordered bottom to top or raise :class:`NotAChainError`."""
    items = list(weighted_flats(chain).items())
    for (a, ra), (b, rb) in zip(items, items[1:]):
        if not (a < b and ra < rb):
            raise NotAChainError(f"{sorted(a)} (rank {ra}) and {sorted(b)} (rank {rb}) do not form a strict chain")
    if not items:
        raise NotAChainError("empty chain")
    return items


def nested_matroid_from_chain(chain: Mapping | Iterable, n: int) -> Matroid:
    check_chain(chain)
    return matroid_from_cyclic_flats(chain, n)


def nested_presentation_from_chain(chain: Mapping | Iterable, n: int) -> SetPresentation:
    """Avoidance presentation of the nested matroid of a chain of cyclic flats.

    Each chain member is repeated by the rank jump to the next member; the top
    member is repeated once per element outside it (those elements are
    coloops).
    """
    items = check_chain(chain)
    sets: list[frozenset[int]] = []
    for (Z, r), (_, r_next) in zip(items, items[1:]):
        sets += [Z] * (r_next - r)
    top, _ = items[-1]
    sets += [top] * (n - len(top))
    P = SetPresentation(n, tuple(sets))
    if avoidance_transversal_matroid(P) != nested_matroid_from_chain(chain, n):
        raise AssertionError(f"presentation {P} does not realize the chain {items}")
    return P


def find_avoidance_presentation(M: Matroid) -> SetPresentation | None:
    """Search for an avoidance presentation of ``M`` with ``r(M)`` members.

    Candidates are the cyclic flats of ``M`` and the empty set.  Partial
    presentations are pruned when their matroid already exceeds ``M``
    somewhere, or cannot reach ``M`` with the slots left.
    """
    if M.n > SEARCH_CAP:
        raise ResourceLimitError(f"transversal search is capped at ground size {SEARCH_CAP}")
    total = M.rank_of_matroid
    target = np.array(M.ranks)
    cands = sorted({mask_of(S) for S in cyclic_flats(M)} | {0}, key=lambda m: (_popcount(m), m))

    def search(start: int, slots: tuple[int, ...]) -> tuple[int, ...] | None:
        ranks = np.array(_matching_ranks(M.n, slots))
        if np.any(ranks > target) or np.any(ranks + (total - len(slots)) < target):
            return None
        if len(slots) == total:
            return slots
        for i in range(start, len(cands)):
            found = search(i, slots + (cands[i],))
            if found is not None:
                return found
        return None

    found = search(0, ())
    if found is None:
        return None
    return SetPresentation(M.n, tuple(set_of(m) for m in found))


def is_transversal(M: Matroid) -> bool:
    return find_avoidance_presentation(M) is not None
