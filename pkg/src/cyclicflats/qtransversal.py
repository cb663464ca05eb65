"""Transversal q-matroids: subspace presentations and their partial q-transversals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, FieldMismatchError, NotCoordinateError
from .field_linalg import (
    AmbientSpace,
    Subspace,
    apply_matrix,
    contains_vector,
    embed_direct_sum,
    enumerate_bases,
    format_ambient,
    format_subspace,
    full_space,
    get_ambient,
    is_coordinate,
    matrix_inverse,
    phi,
    phi_inverse,
    zero_subspace,
)
from .matching import has_saturating_matching
from .matroid import SetPresentation, check_chain, nested_presentation_from_chain
from .qmatroid import (
    QMatroid,
    chain_adapted_basis,
    q_weighted_flats,
    qmatroid_from_cyclic_flats,
    ranks_from_flags,
)


@dataclass(frozen=True)
class QPresentation:
    """An ordered family of subspaces of GF(q)^n; repeats are allowed."""

    q: int
    n: int
    members: tuple[Subspace, ...] = ()

    def __post_init__(self):
        members = tuple(self.members)
        for X in members:
            if X.q != self.q:
                raise FieldMismatchError(f"member over GF({X.q}) in a GF({self.q}) presentation")
            if X.n != self.n:
                raise DimensionMismatchError(f"member of GF({X.q})^{X.n} in {format_ambient(self.q, self.n)}")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def ambient(self) -> AmbientSpace:
        return get_ambient(self.q, self.n)

    @property
    def is_coordinate(self) -> bool:
        return all(is_coordinate(X) for X in self.members)

    def __repr__(self) -> str:
        inner = "; ".join(format_subspace(X) for X in self.members)
        return f"QPresentation({format_ambient(self.q, self.n)}: {inner})"


def basis_has_avoidance_transversal(basis: Iterable[Sequence[int]], P: QPresentation) -> bool:
    """Match each basis vector to a distinct member that does not contain it."""
    adj = [
        sum(1 << i for i, X in enumerate(P.members) if not contains_vector(X, b))
        for b in basis
    ]
    return has_saturating_matching(adj)


def is_partial_q_transversal(X: Subspace, P: QPresentation) -> bool:
    """Does every linear basis of ``X`` have an avoidance transversal of ``P``?

    Bases are streamed and the scan stops at the first failure.
    """
    if (X.q, X.n) != (P.q, P.n):
        raise DimensionMismatchError(f"{X!r} is not in {format_ambient(P.q, P.n)}")
    if X.dim > len(P):
        return False
    return all(basis_has_avoidance_transversal(b, P) for b in enumerate_bases(X))


def containment_counts(P: QPresentation) -> np.ndarray:
    """For every subspace ``W`` of the ambient, the number of members containing ``W``."""
    E = P.ambient
    counts = np.zeros(len(E), dtype=np.int16)
    for X in P.members:
        counts[E.down_set(E.index[X])] += 1
    return counts


def independence_flags(P: QPresentation, method: str = "hall") -> np.ndarray:
    """Partial q-transversal flag for every subspace of the ambient.

    Independence is hereditary, so a subspace is only examined once all its
    hyperplanes passed.  ``method="bases"`` then scans every linear basis.
    ``method="hall"`` uses Hall's condition instead: a basis fails exactly when
    some subset ``T`` of it lies in more than ``k - |T|`` members, and the spans
    of such subsets run over all subspaces, so with the hyperplanes already
    known to pass only ``W = X`` is left to test.
    """
    E = P.ambient
    k = len(P)
    flags = np.zeros(len(E), dtype=bool)
    if method == "hall":
        counts = containment_counts(P)
        for i, hs in enumerate(E.hyperplane_lists):
            flags[i] = E.dims[i] + counts[i] <= k and all(flags[h] for h in hs)
    elif method == "bases":
        for i, hs in enumerate(E.hyperplane_lists):
            flags[i] = (
                E.dims[i] <= k
                and all(flags[h] for h in hs)
                and is_partial_q_transversal(E.subspaces[i], P)
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    return flags


def transversal_qmatroid(P: QPresentation, method: str = "hall") -> QMatroid:
    """The q-matroid whose independent spaces are the partial q-transversals of ``P``."""
    E = P.ambient
    return QMatroid(E, ranks_from_flags(E, independence_flags(P, method)))


def lift_presentation(P: SetPresentation, q: int = 2) -> QPresentation:
    return QPresentation(q, P.n, tuple(phi(S, q, P.n) for S in P.sets))


def unlift_presentation(P: QPresentation) -> SetPresentation:
    if not P.is_coordinate:
        raise NotCoordinateError("presentation has a member that is not coordinate")
    return SetPresentation(P.n, tuple(phi_inverse(X) for X in P.members))


def _check_pair(P1: QPresentation, P2: QPresentation) -> int:
    if P1.q != P2.q:
        raise FieldMismatchError(f"GF({P1.q}) and GF({P2.q})")
    return P1.q


def presentation_free_product(P1: QPresentation, P2: QPresentation) -> QPresentation:
    """``(A_1 ⊕ 0, ..., A_k ⊕ 0, E_1 ⊕ B_1, ..., E_1 ⊕ B_l)``."""
    q = _check_pair(P1, P2)
    z2, e1 = zero_subspace(q, P2.n), full_space(q, P1.n)
    members = [embed_direct_sum([A, z2]) for A in P1.members]
    members += [embed_direct_sum([e1, B]) for B in P2.members]
    return QPresentation(q, P1.n + P2.n, tuple(members))


def presentation_direct_sum(P1: QPresentation, P2: QPresentation) -> QPresentation:
    """``(A_1 ⊕ E_2, ..., A_k ⊕ E_2, E_1 ⊕ B_1, ..., E_1 ⊕ B_l)``."""
    q = _check_pair(P1, P2)
    e2, e1 = full_space(q, P2.n), full_space(q, P1.n)
    members = [embed_direct_sum([A, e2]) for A in P1.members]
    members += [embed_direct_sum([e1, B]) for B in P2.members]
    return QPresentation(q, P1.n + P2.n, tuple(members))


def transform_presentation(P: QPresentation, A: Sequence[Sequence[int]]) -> QPresentation:
    """Apply the invertible map ``v -> v A`` to every member."""
    return QPresentation(P.q, P.n, tuple(apply_matrix(X, A) for X in P.members))


def nested_q_presentation(chain: Mapping | Iterable, adapt_basis: bool = False) -> QPresentation:
    """Presentation of the nested q-matroid with the given chain of cyclic flats.

    Coordinate chains are handled directly through the set-side construction.
    With ``adapt_basis=True`` any chain is first moved to coordinates by a
    chain-adapted basis and the resulting members are mapped back.  The
    result is always checked against :func:`qmatroid_from_cyclic_flats`.
    """
    Z = q_weighted_flats(chain)
    if not Z:
        raise NotCoordinateError("empty chain")
    q, n = next(iter(Z)).ambient
    if all(is_coordinate(X) for X in Z):
        sets = {phi_inverse(X): r for X, r in Z.items()}
        check_chain(sets)
        P = lift_presentation(nested_presentation_from_chain(sets, n), q)
    elif adapt_basis:
        basis = chain_adapted_basis(list(Z))
        to_coords = matrix_inverse(basis, q)
        moved = {apply_matrix(X, to_coords): r for X, r in Z.items()}
        P = transform_presentation(nested_q_presentation(moved), basis)
    else:
        raise NotCoordinateError("chain has a member that is not coordinate; pass adapt_basis=True")
    if transversal_qmatroid(P) != qmatroid_from_cyclic_flats(Z, get_ambient(q, n)):
        raise AssertionError(f"{P!r} does not realize the nested q-matroid")
    return P

