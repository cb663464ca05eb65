"""Direct sum and free product of q-matroids over a two-block ambient space."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .field_linalg import AmbientSpace, embed_direct_sum, full_space, get_ambient, project, zero_subspace
from .qmatroid import QMatroid, check_same_field, ranks_from_flags


@dataclass(frozen=True)
class BlockAmbient:
    """``E_1 ⊕ E_2`` with its block boundaries and precomputed projections."""

    q: int
    n1: int
    n2: int

    @property
    def sizes(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def total(self) -> AmbientSpace:
        return get_ambient(self.q, self.n1 + self.n2)

    @property
    def first(self) -> AmbientSpace:
        return get_ambient(self.q, self.n1)

    @property
    def second(self) -> AmbientSpace:
        return get_ambient(self.q, self.n2)

    @cached_property
    def projections(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays giving ``pi_1(X)`` and ``pi_2(X)`` for every ``X`` of the total space."""
        E, A, B = self.total, self.first, self.second
        p1 = np.array([A.index[project(X, self.sizes, 1)] for X in E.subspaces], dtype=np.int64)
        p2 = np.array([B.index[project(X, self.sizes, 2)] for X in E.subspaces], dtype=np.int64)
        return p1, p2

    @cached_property
    def first_block_index(self) -> int:
        """Index of ``E_1 ⊕ 0``."""
        X = embed_direct_sum([full_space(self.q, self.n1), zero_subspace(self.q, self.n2)])
        return self.total.index[X]

    @cached_property
    def first_block_parts(self) -> np.ndarray:
        """Index in ``E_1`` of ``pi_1(X ∩ (E_1 ⊕ 0))`` for every ``X``."""
        p1, _ = self.projections
        return p1[self.total.meet_row(self.first_block_index)]


@lru_cache(maxsize=None)
def block_ambient(q: int, n1: int, n2: int) -> BlockAmbient:
    return BlockAmbient(q, n1, n2)


def q_direct_sum(M1: QMatroid, M2: QMatroid) -> QMatroid:
    """``M1 ⊕ M2``: ``rho(X) = min over Y <= X of rho1(pi1 Y) + rho2(pi2 Y) + dim X - dim Y``.

    The minimum is accumulated along the lattice: a ``Y`` strictly below ``X``
    lies under some hyperplane ``H`` of ``X``, so
    ``rho(X) = min(rho1(pi1 X) + rho2(pi2 X), min_H rho(H) + 1)``.
    """
    q = check_same_field(M1, M2)
    B = block_ambient(q, M1.n, M2.n)
    E = B.total
    p1, p2 = B.projections
    split = M1.ranks.astype(np.int64)[p1] + M2.ranks.astype(np.int64)[p2]
    r = np.zeros(len(E), dtype=np.int64)
    for i, hs in enumerate(E.hyperplane_lists):
        best = split[i]
        for h in hs:
            if r[h] + 1 < best:
                best = r[h] + 1
        r[i] = best
    return QMatroid(E, r)


def q_free_product(M1: QMatroid, M2: QMatroid) -> QMatroid:
    """``M1 □ M2`` from its independent spaces.

    ``X`` is independent when ``S = pi1(X ∩ (E1 ⊕ 0))`` is independent in ``M1``
    and ``rho1(E1) - rho1(S) >= dim pi2(X) - rho2(pi2(X))``.
    """
    q = check_same_field(M1, M2)
    B = block_ambient(q, M1.n, M2.n)
    E = B.total
    _, p2 = B.projections
    s = B.first_block_parts
    r1, r2 = M1.ranks.astype(np.int64), M2.ranks.astype(np.int64)
    d1, d2 = M1.ambient.dims.astype(np.int64), M2.ambient.dims.astype(np.int64)
    indep_part = r1[s] == d1[s]
    slack = r1[-1] - r1[s] >= d2[p2] - r2[p2]
    return QMatroid(E, ranks_from_flags(E, indep_part & slack))
