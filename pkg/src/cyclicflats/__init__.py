"""Matroids and q-matroids over small prime fields, organised around cyclic flats.

The modules follow the layers of the theory: finite-field linear algebra
(:mod:`field_linalg`), matroids on ``[n]`` (:mod:`matroid`), q-matroids as
rank tables (:mod:`qmatroid`), transversal presentations (:mod:`qtransversal`)
and the two binary operations (:mod:`qops`).  :mod:`harness` and :mod:`cli`
verify the theory exhaustively at small sizes.
"""

from __future__ import annotations

from .field_linalg import (
    AmbientSpace,
    Subspace,
    canonicalize,
    get_ambient,
    parse_subspace,
    phi,
    phi_inverse,
    project,
)
from .matroid import Matroid, SetPresentation, avoidance_transversal_matroid, matroid_from_cyclic_flats
from .qmatroid import (
    QMatroid,
    corresponding_matroid,
    corresponding_qmatroid,
    cyclic_flats,
    qmatroid_from_cyclic_flats,
    validate_q_axioms,
)
from .qops import q_direct_sum, q_free_product
from .qtransversal import QPresentation, is_partial_q_transversal, transversal_qmatroid

__version__ = "0.1.0"

__all__ = [
    "AmbientSpace",
    "Matroid",
    "QMatroid",
    "QPresentation",
    "SetPresentation",
    "Subspace",
    "avoidance_transversal_matroid",
    "canonicalize",
    "corresponding_matroid",
    "corresponding_qmatroid",
    "cyclic_flats",
    "get_ambient",
    "is_partial_q_transversal",
    "matroid_from_cyclic_flats",
    "parse_subspace",
    "phi",
    "phi_inverse",
    "project",
    "q_direct_sum",
    "q_free_product",
    "qmatroid_from_cyclic_flats",
    "transversal_qmatroid",
    "validate_q_axioms",
]
