"""Deterministic instance corpora for the verification suites.

Everything exhaustive is enumerated in a fixed order; the seed only drives the
sampled parts (random linear bases, random operation trees, spot checks).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from .errors import InvalidCyclicFlatsError
from .field_linalg import canonicalize, enumerate_bases, full_space, get_ambient, phi
from .matroid import (
    Matroid,
    SetPresentation,
    avoidance_transversal_matroid,
    check_chain,
    matroid_from_cyclic_flats,
    set_of,
)
from .qmatroid import QMatroid
from .qtransversal import QPresentation, lift_presentation, transversal_qmatroid


def set_presentations(n: int, max_k: int):
    """All multisets of at most ``max_k`` subsets of ``[n]``, by size then mask order."""
    for k in range(max_k + 1):
        for masks in combinations_with_replacement(range(1 << n), k):
            yield SetPresentation(n, tuple(set_of(m) for m in masks))


@lru_cache(maxsize=None)
def transversal_matroids(n: int, max_k: int) -> tuple[tuple[SetPresentation, Matroid], ...]:
    """One ``(presentation, matroid)`` per distinct transversal matroid on ``[n]``.

    Presentations are scanned by increasing size, so the kept one is the
    smallest, which for a transversal matroid has exactly ``r(M)`` sets.
    """
    seen: dict[tuple, tuple[SetPresentation, Matroid]] = {}
    for P in set_presentations(n, max_k):
        M = avoidance_transversal_matroid(P)
        seen.setdefault(M.ranks, (P, M))
    return tuple(seen.values())


def q_presentations(q: int, n: int, max_k: int):
    subs = get_ambient(q, n).subspaces
    for k in range(max_k + 1):
        for members in combinations_with_replacement(subs, k):
            yield QPresentation(q, n, members)


@lru_cache(maxsize=None)
def transversal_qmatroids(q: int, n: int, max_k: int) -> tuple[tuple[QPresentation, QMatroid], ...]:
    """One ``(presentation, q-matroid)`` per distinct transversal q-matroid, smallest presentation kept."""
    seen: dict[QMatroid, tuple[QPresentation, QMatroid]] = {}
    for P in q_presentations(q, n, max_k):
        M = transversal_qmatroid(P)
        seen.setdefault(M, (P, M))
    return tuple(seen.values())


def chains(n: int):
    """Every valid weighted chain of cyclic flats over ``[n]`` (strict chains, rising ranks)."""
    full = (1 << n) - 1
    out = []

    def extend(chain: list[tuple[int, int]]):
        try:
            check_chain({set_of(m): r for m, r in chain})
            matroid_from_cyclic_flats({set_of(m): r for m, r in chain}, n)
        except (InvalidCyclicFlatsError, ValueError):
            pass
        else:
            out.append({set_of(m): r for m, r in chain})
        top, rank = chain[-1]
        for m in range(full + 1):
            if m != top and m & top == top:
                size = bin(m).count("1")
                for r in range(rank + 1, size):
                    extend(chain + [(m, r)])

    for bottom in range(full + 1):
        extend([(bottom, 0)])
    return out


@dataclass(frozen=True)
class Corpus:
    """Parameters of a verification run; equal parameters give equal instance lists."""

    seed: int = 0
    max_dim: int = 6
    q: int = 2
    set_max_n: int = 4
    set_max_k: int = 3
    q_max_k: int = 2
    pair_max_dim: int = 5

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def set_instances(self):
        """``(id, presentation, matroid)`` over every ground size up to ``set_max_n``."""
        out = []
        for n in range(1, min(self.set_max_n, self.max_dim) + 1):
            for j, (P, M) in enumerate(transversal_matroids(n, self.set_max_k)):
                out.append((f"n{n}-{j}", P, M))
        return out

    def spot_set_instances(self, count: int = 6):
        """A few random presentations on ``[5]`` for spot checks beyond the exhaustive range."""
        if self.max_dim < 5:
            return []
        rng = self.rng("spot5")
        out = []
        for j in range(count):
            k = rng.randint(1, 3)
            P = SetPresentation(5, tuple(set_of(rng.randrange(32)) for _ in range(k)))
            out.append((f"n5-spot{j}", P, avoidance_transversal_matroid(P)))
        return out

    def coordinate_q_instances(self, max_n: int = 4):
        """Lifted set corpus: coordinate transversal q-matroids over GF(q)^n."""
        out = []
        for n in range(1, min(max_n, self.max_dim) + 1):
            seen = set()
            for j, (P, _) in enumerate(transversal_matroids(n, self.set_max_k)):
                Q = lift_presentation(P, self.q)
                M = transversal_qmatroid(Q)
                if M not in seen:
                    seen.add(M)
                    out.append((f"c{n}-{j}", Q, M))
        return out

    def general_q_instances(self, max_n: int = 3):
        """All transversal q-matroids from presentations of at most ``q_max_k`` arbitrary subspaces."""
        out = []
        for n in range(1, min(max_n, self.max_dim) + 1):
            for j, (P, M) in enumerate(transversal_qmatroids(self.q, n, self.q_max_k)):
                out.append((f"g{n}-{j}", P, M))
        return out

    def q_instances(self):
        """Coordinate corpus plus the general small corpus, deduplicated."""
        out, seen = [], set()
        for item in self.coordinate_q_instances() + self.general_q_instances():
            if item[2] not in seen:
                seen.add(item[2])
                out.append(item)
        return out

    def pairs(self, first, second, max_total: int | None = None):
        limit = min(self.pair_max_dim if max_total is None else max_total, self.max_dim)
        return [(a, b) for a in first for b in second if a[1].n + b[1].n <= limit]

    def chain_instances(self, max_n: int = 4):
        out = []
        for n in range(1, min(max_n, self.max_dim) + 1):
            for j, chain in enumerate(chains(n)):
                out.append((f"chain{n}-{j}", n, {phi(S, self.q, n): r for S, r in chain.items()}))
        return out


def sample_bases(q: int, n: int, count: int, rng: random.Random):
    """``count`` random ordered linear bases of GF(q)^n (rows of an invertible matrix)."""
    out = []
    while len(out) < count:
        rows = [tuple(rng.randrange(q) for _ in range(n)) for _ in range(n)]
        if canonicalize(rows, q, n).dim == n:
            out.append(tuple(rows))
    return out


def all_bases(q: int, n: int):
    """Every unordered linear basis of GF(q)^n."""
    return [tuple(sorted(b)) for b in enumerate_bases(full_space(q, n))]


__all__ = [
    "Corpus",
    "all_bases",
    "chains",
    "q_presentations",
    "sample_bases",
    "set_presentations",
    "transversal_matroids",
    "transversal_qmatroids",
]
