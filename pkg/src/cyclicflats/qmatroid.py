"""q-Matroids as complete rank tables over the subspace lattice of GF(q)^n.

A rank table is a numpy array indexed like ``AmbientSpace.subspaces``.  Every
:class:`QMatroid` is validated against the rank axioms when it is built, so
holding one is a proof that its table is a q-matroid.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AxiomViolationError,
    DimensionMismatchError,
    FieldMismatchError,
    InvalidCyclicFlatsError,
    NotAChainError,
    NotCoordinateError,
)
from .field_linalg import (
    TABLE_LIMIT,
    AmbientSpace,
    Subspace,
    apply_matrix,
    canonicalize,
    contains,
    contains_vector,
    format_ambient,
    format_subspace,
    get_ambient,
    is_coordinate,
    matrix_inverse,
    phi,
    phi_inverse,
    unit_vector,
)
from .matroid import Matroid, matroid_from_cyclic_flats
from .matroid import cyclic_flats as set_cyclic_flats

QWeightedFlats = dict[Subspace, int]


def _ambient_of(E: AmbientSpace | tuple[int, int]) -> AmbientSpace:
    return E if isinstance(E, AmbientSpace) else get_ambient(*E)


def check_q_axioms(E: AmbientSpace, r: np.ndarray) -> None:
    """Raise :class:`AxiomViolationError` naming the first violated axiom instance.

    Checks normalization, the bounds ``0 <= rho(X) <= dim X``, monotonicity and
    unit increase along every covering pair ``X < X + <v>``, and submodularity
    over all pairs of subspaces.
    """
    g = len(E)
    if r.shape != (g,):
        raise DimensionMismatchError(f"rank table of length {r.shape[0]} for {g} subspaces of {E!r}")
    subs = E.subspaces
    if r[0] != 0:
        raise AxiomViolationError("normalization", (subs[0],), f"rank of the zero space is {r[0]}")
    bad = np.flatnonzero((r < 0) | (r > E.dims))
    if bad.size:
        X = subs[bad[0]]
        raise AxiomViolationError("bounds", (X,), f"rank {r[bad[0]]} of {format_subspace(X)} outside [0, {X.dim}]")
    lo, hi = E.cover_pairs
    step = r[hi] - r[lo]
    for axiom, mask in (("monotonicity", step < 0), ("unit increase", step > 1)):
        bad = np.flatnonzero(mask)
        if bad.size:
            k = bad[0]
            raise AxiomViolationError(axiom, (subs[lo[k]], subs[hi[k]]))
    if g <= TABLE_LIMIT:
        lhs = r[E.join_table] + r[E.meet_table]
        viol = np.argwhere(lhs > r[:, None] + r[None, :])
        if viol.size:
            a, b = (int(x) for x in viol[0])
            raise AxiomViolationError("submodularity", (subs[a], subs[b]))
        return
    for a in range(g):
        lhs = r[E.join_row(a)] + r[E.meet_row(a)]
        viol = np.flatnonzero(lhs > r[a] + r)
        if viol.size:
            raise AxiomViolationError("submodularity", (subs[a], subs[int(viol[0])]))


class QMatroid:
    """A q-matroid on GF(q)^n with a validated rank table."""

    __slots__ = ("ambient", "ranks")

    def __init__(self, ambient: AmbientSpace | tuple[int, int], ranks: Sequence[int] | np.ndarray):
        E = _ambient_of(ambient)
        r = np.array(ranks, dtype=np.int16)
        check_q_axioms(E, r)
        r.setflags(write=False)
        self.ambient = E
        self.ranks = r

    @property
    def q(self) -> int:
        return self.ambient.q

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def rank_of_matroid(self) -> int:
        return int(self.ranks[-1])

    def rank(self, X: Subspace) -> int:
        return int(self.ranks[self.ambient.index_of(X)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatroid):
            return NotImplemented
        return (self.q, self.n) == (other.q, other.n) and np.array_equal(self.ranks, other.ranks)

    def __hash__(self) -> int:
        return hash((self.q, self.n, self.ranks.tobytes()))

    def __repr__(self) -> str:
        return f"QMatroid({format_ambient(self.q, self.n)}, rank {self.rank_of_matroid})"


def validate_q_axioms(table: Mapping[Subspace, int] | Sequence[int], ambient=None) -> QMatroid:
    """Turn a total rank table into a :class:`QMatroid` or raise on the first violation."""
    if isinstance(table, Mapping):
        if ambient is None:
            first = next(iter(table))
            ambient = (first.q, first.n)
        E = _ambient_of(ambient)
        missing = [X for X in E.subspaces if X not in table]
        if missing:
            raise DimensionMismatchError(f"rank table misses {len(missing)} subspaces, e.g. {missing[0]!r}")
        ranks = [table[X] for X in E.subspaces]
    else:
        if ambient is None:
            raise DimensionMismatchError("a positional rank table needs its ambient space")
        E = _ambient_of(ambient)
        ranks = list(table)
    return QMatroid(E, ranks)


def uniform_qmatroid(k: int, n: int, q: int = 2) -> QMatroid:
    E = get_ambient(q, n)
    return QMatroid(E, np.minimum(E.dims, k))


def free_qmatroid(n: int, q: int = 2) -> QMatroid:
    E = get_ambient(q, n)
    return QMatroid(E, E.dims)


def ranks_from_flags(E: AmbientSpace, flags: np.ndarray) -> np.ndarray:
    """``rho(X) = dim X`` if ``X`` is flagged, else the best hyperplane rank.

    This is the largest dimension of a flagged subspace of ``X``: every proper
    subspace of ``X`` lies in one of its hyperplanes.
    """
    r = np.zeros(len(E), dtype=np.int16)
    dims = E.dims
    for i, hs in enumerate(E.hyperplane_lists):
        if flags[i]:
            r[i] = dims[i]
        elif hs:
            r[i] = max(r[h] for h in hs)
    return r


def rank_from_independents(pred: Callable[[Subspace], bool], ambient) -> QMatroid:
    """q-Matroid whose rank is the largest dimension of a subspace satisfying ``pred``.

    ``pred`` is expected to describe the independent spaces of a q-matroid;
    anything else fails axiom validation.
    """
    E = _ambient_of(ambient)
    flags = np.array([bool(pred(X)) for X in E.subspaces])
    return QMatroid(E, ranks_from_flags(E, flags))


def is_independent(M: QMatroid, X: Subspace) -> bool:
    return M.rank(X) == X.dim


def independent_spaces(M: QMatroid) -> list[Subspace]:
    return [X for X, r, d in zip(M.ambient.subspaces, M.ranks, M.ambient.dims) if r == d]


def bases_of(M: QMatroid, X: Subspace) -> list[Subspace]:
    """Inclusion-maximal independent subspaces of ``X``."""
    E = M.ambient
    x = E.index_of(X)
    r, dims = M.ranks, E.dims
    inside = set(int(i) for i in E.down_set(x))
    out = []
    for i in sorted(inside):
        if r[i] != dims[i]:
            continue
        if any(c in inside and r[c] == dims[c] for c in E.cover_lists[i]):
            continue
        out.append(E.subspaces[i])
    if len({B.dim for B in out}) != 1 or out[0].dim != M.ranks[x]:
        raise AssertionError(f"bases of {format_subspace(X)} are not equidimensional of dimension rho(X)")
    return out


def _flat_flags(M: QMatroid) -> np.ndarray:
    lo, hi = M.ambient.cover_pairs
    r = M.ranks
    flags = np.ones(len(M.ambient), dtype=bool)
    flags[lo[r[hi] == r[lo]]] = False
    return flags


def _cyclic_flags(M: QMatroid) -> np.ndarray:
    lo, hi = M.ambient.cover_pairs
    r = M.ranks
    flags = np.ones(len(M.ambient), dtype=bool)
    flags[hi[r[hi] != r[lo]]] = False
    return flags


def is_flat(M: QMatroid, X: Subspace) -> bool:
    """Every one-dimensional extension of ``X`` raises the rank."""
    E = M.ambient
    i = E.index_of(X)
    return all(M.ranks[c] > M.ranks[i] for c in E.cover_lists[i])


def is_cyclic(M: QMatroid, X: Subspace) -> bool:
    """Every hyperplane of ``X`` has the rank of ``X``; the zero space is cyclic."""
    E = M.ambient
    i = E.index_of(X)
    return all(M.ranks[h] == M.ranks[i] for h in E.hyperplane_lists[i])


def flats(M: QMatroid) -> list[Subspace]:
    return [X for X, f in zip(M.ambient.subspaces, _flat_flags(M)) if f]


def cyclic_spaces(M: QMatroid) -> list[Subspace]:
    return [X for X, c in zip(M.ambient.subspaces, _cyclic_flags(M)) if c]


def circuits(M: QMatroid) -> list[Subspace]:
    """Minimal dependent spaces: dependent, with every hyperplane independent."""
    E, r, dims = M.ambient, M.ranks, M.ambient.dims
    return [
        E.subspaces[i]
        for i, hs in enumerate(E.hyperplane_lists)
        if r[i] < dims[i] and all(r[h] == dims[h] for h in hs)
    ]


def cyclic_flats(M: QMatroid) -> QWeightedFlats:
    both = _flat_flags(M) & _cyclic_flags(M)
    return {M.ambient.subspaces[i]: int(M.ranks[i]) for i in np.flatnonzero(both)}


def q_weighted_flats(Z: Mapping | Iterable) -> QWeightedFlats:
    items = Z.items() if isinstance(Z, Mapping) else Z
    out: QWeightedFlats = {}
    amb = None
    for X, rho in items:
        if amb is None:
            amb = X.ambient
        elif X.ambient != amb:
            raise DimensionMismatchError("cyclic flats from different ambient spaces")
        if X in out:
            raise InvalidCyclicFlatsError(f"repeated cyclic flat {format_subspace(X)}")
        rho = int(rho)
        if not 0 <= rho <= X.dim or (X.dim > 0 and rho == X.dim):
            raise InvalidCyclicFlatsError(f"rank {rho} impossible for a cyclic flat of dimension {X.dim}")
        out[X] = rho
    return out


def qmatroid_from_cyclic_flats(Z: Mapping | Iterable, ambient=None) -> QMatroid:
    """Rebuild the q-matroid with the given weighted cyclic flats.

    Uses ``rho(X) = min(dim X, min_Z (rho(Z) + dim X - dim(X ∩ Z)))`` and
    rejects the input unless the result has exactly ``Z`` as its weighted
    cyclic flats.
    """
    Z = q_weighted_flats(Z)
    if not Z:
        raise InvalidCyclicFlatsError("empty cyclic-flat family")
    if ambient is None:
        ambient = next(iter(Z)).ambient
    E = _ambient_of(ambient)
    dims = E.dims.astype(np.int16)
    r = dims.copy()
    for X, rho in Z.items():
        inter = dims[E.meet_row(E.index_of(X))]
        r = np.minimum(r, rho + dims - inter)
    try:
        M = QMatroid(E, r)
    except AxiomViolationError as exc:
        raise InvalidCyclicFlatsError(f"reconstruction is not a q-matroid: {exc}") from exc
    if cyclic_flats(M) != Z:
        raise InvalidCyclicFlatsError("family is not the weighted cyclic-flat lattice of any q-matroid")
    return M


def restriction(M: QMatroid, H: Subspace) -> QMatroid:
    """``M|H`` re-coordinatized so that the echelon rows of ``H`` are the standard basis."""
    E = M.ambient
    E.index_of(H)
    if H.dim == 0:
        return QMatroid(get_ambient(M.q, 0), [0])
    local = get_ambient(M.q, H.dim)
    ranks = [M.ranks[E.index[apply_matrix(Y, H.rows)]] for Y in local.subspaces]
    return QMatroid(local, ranks)


def transform(M: QMatroid, A: Sequence[Sequence[int]]) -> QMatroid:
    """Image of ``M`` under the invertible map ``v -> v A``."""
    E = M.ambient
    inv = matrix_inverse(A, M.q)
    ranks = [M.ranks[E.index[apply_matrix(Y, inv)]] for Y in E.subspaces]
    return QMatroid(E, ranks)


def chain_adapted_basis(chain: Sequence[Subspace]) -> list[tuple[int, ...]]:
    """A basis of the ambient space in which every chain member is spanned by a prefix.

    Built greedily: echelon rows of each member not yet spanned, then the
    standard basis vectors needed to complete it.
    """
    if not chain:
        raise NotAChainError("empty chain")
    q, n = chain[0].ambient
    ordered = sorted(chain, key=lambda X: X.dim)
    for a, b in zip(ordered, ordered[1:]):
        if not contains(b, a) or a == b:
            raise NotAChainError(f"{format_subspace(a)} and {format_subspace(b)} are not strictly nested")
    basis: list[tuple[int, ...]] = []
    span = Subspace(q, n, ())
    for v in [r for X in ordered for r in X.rows] + [unit_vector(n, i) for i in range(1, n + 1)]:
        if not contains_vector(span, v):
            basis.append(tuple(v))
            span = canonicalize(span.rows + (tuple(v),), q, n)
    return basis


def is_coordinate_qmatroid(M: QMatroid) -> bool:
    return all(is_coordinate(Z) for Z in cyclic_flats(M))


def corresponding_matroid(M: QMatroid) -> Matroid:
    Z = cyclic_flats(M)
    if not all(is_coordinate(X) for X in Z):
        raise NotCoordinateError("q-matroid has a cyclic flat that is not coordinate")
    return matroid_from_cyclic_flats({phi_inverse(X): r for X, r in Z.items()}, M.n)


def corresponding_qmatroid(N: Matroid, q: int = 2) -> QMatroid:
    E = get_ambient(q, N.n)
    return qmatroid_from_cyclic_flats({phi(S, q, N.n): r for S, r in set_cyclic_flats(N).items()}, E)


def is_nested(M: QMatroid) -> bool:
    Z = sorted(cyclic_flats(M), key=lambda X: X.dim)
    return all(contains(b, a) for a, b in zip(Z, Z[1:]))


def check_same_field(M1: QMatroid, M2: QMatroid) -> int:
    if M1.q != M2.q:
        raise FieldMismatchError(f"GF({M1.q}) and GF({M2.q})")
    return M1.q
