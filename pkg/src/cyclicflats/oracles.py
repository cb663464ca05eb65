"""Slow, literal re-implementations used to cross-check the fast code paths.

Each function follows a definition word for word and shares as little code
with the main modules as possible.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .field_linalg import AmbientSpace, canonicalize, intersect, project, span_sum, subspaces_of
from .matroid import SetPresentation


def brute_force_set_ranks(P: SetPresentation) -> list[int]:
    """Rank table of the avoidance transversal matroid by trying every injection.

    ``r(X)`` is the largest ``|Y|`` with ``Y ⊆ X`` admitting an injective
    ``m: Y -> slots`` with ``y ∉ A_m(y)``.
    """
    n, k = P.n, len(P)
    sets = P.sets
    exists = [False] * (1 << n)
    for mask in range(1 << n):
        elems = [i + 1 for i in range(n) if mask >> i & 1]
        if len(elems) > k:
            continue
        exists[mask] = any(
            all(x not in sets[s] for x, s in zip(elems, slots))
            for slots in permutations(range(k), len(elems))
        )
    ranks = [0] * (1 << n)
    for mask in range(1 << n):
        ranks[mask] = max(
            bin(sub).count("1")
            for sub in _submasks(mask)
            if exists[sub]
        )
    return ranks


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def literal_direct_sum_ranks(r1, r2, E: AmbientSpace, n1: int) -> list[int]:
    """``min over Y <= X of rho1(pi1 Y) + rho2(pi2 Y) + dim X - dim Y`` for every ``X``.

    ``r1`` and ``r2`` are callables on subspaces of the two blocks.
    """
    n2 = E.n - n1
    out = []
    for X in E.subspaces:
        out.append(
            min(
                r1(project(Y, (n1, n2), 1)) + r2(project(Y, (n1, n2), 2)) + X.dim - Y.dim
                for Y in subspaces_of(X)
            )
        )
    return out


def naive_q_axiom_violation(E: AmbientSpace, r) -> str | None:
    """Name of the first violated q-rank axiom, found with plain subspace arithmetic."""
    subs = E.subspaces
    rank = {X: int(v) for X, v in zip(subs, r)}
    if rank[subs[0]] != 0:
        return "normalization"
    for X in subs:
        if not 0 <= rank[X] <= X.dim:
            return "bounds"
    for X in subs:
        for Y in subs:
            if Y.dim == X.dim + 1 and span_sum(X, Y) == Y:
                if rank[Y] < rank[X]:
                    return "monotonicity"
                if rank[Y] > rank[X] + 1:
                    return "unit increase"
    for A in subs:
        for B in subs:
            if rank[span_sum(A, B)] + rank[intersect(A, B)] > rank[A] + rank[B]:
                return "submodularity"
    return None


def naive_set_axiom_violation(n: int, r) -> str | None:
    if r[0] != 0:
        return "normalization"
    for X in range(1 << n):
        for i in range(n):
            if not X >> i & 1:
                d = r[X | 1 << i] - r[X]
                if d < 0 or d > 1:
                    return "unit increase"
    for X in range(1 << n):
        for Y in range(1 << n):
            if r[X | Y] + r[X & Y] > r[X] + r[Y]:
                return "submodularity"
    return None


def spans_basis_subset(rank_of, beta, total_rank: int, q: int, n: int) -> bool:
    """Does some ``total_rank`` vectors of ``beta`` span an independent space?"""
    for T in combinations(beta, total_rank):
        X = canonicalize(T, q, n)
        if rank_of(X) == X.dim == total_rank:
            return True
    return False


def gaussian_count(n: int, q: int) -> int:
    """Number of subspaces of GF(q)^n from the recurrence ``G_{n+1} = 2 G_n + (q^n - 1) G_{n-1}``."""
    a, b = 1, 2
    if n == 0:
        return a
    for m in range(1, n):
        a, b = b, 2 * b + (q**m - 1) * a
    return b


__all__ = [
    "brute_force_set_ranks",
    "gaussian_count",
    "literal_direct_sum_ranks",
    "naive_q_axiom_violation",
    "naive_set_axiom_violation",
    "spans_basis_subset",
]
