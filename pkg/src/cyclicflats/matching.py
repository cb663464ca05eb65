"""Augmenting-path bipartite matching on bitmask adjacency lists.

Both sides are tiny here (at most a handful of vectors against a handful of
presentation slots), so Kuhn's algorithm is plenty.
"""

from __future__ import annotations

from typing import Sequence


def max_matching(adj: Sequence[int]) -> int:
    """Size of a maximum matching.

    ``adj[u]`` is the bitmask of right-hand vertices adjacent to left vertex ``u``.
    """
    owner: dict[int, int] = {}

    def augment(u: int, seen: int) -> tuple[bool, int]:
        free = adj[u] & ~seen
        while free:
            bit = free & -free
            free ^= bit
            seen |= bit
            j = bit.bit_length() - 1
            if j not in owner:
                owner[j] = u
                return True, seen
            ok, seen = augment(owner[j], seen)
            if ok:
                owner[j] = u
                return True, seen
        return False, seen

    size = 0
    for u in range(len(adj)):
        if augment(u, 0)[0]:
            size += 1
    return size


def has_saturating_matching(adj: Sequence[int]) -> bool:
    """True when every left vertex can be matched simultaneously."""
    if any(a == 0 for a in adj):
        return False
    return max_matching(adj) == len(adj)
