"""Exact linear algebra over the prime fields GF(2), GF(3) and GF(5).

Vectors are plain tuples of residues; coordinate ``i`` (1-indexed, as in the
text encoding) is ``v[i - 1]``.  A :class:`Subspace` always carries its rows in
reduced row echelon form, so structural equality is subspace equality and
subspaces can be used as dictionary keys.

Over GF(2) rows are packed into machine integers (bit ``i - 1`` holds
coordinate ``i``) and eliminated with XOR; other fields use residue lists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import prod
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    BlockMismatchError,
    DimensionMismatchError,
    FieldMismatchError,
    FormatError,
    NotCoordinateError,
    ResourceLimitError,
)

SUPPORTED_FIELDS = (2, 3, 5)
MAX_AMBIENT_DIM = {2: 8, 3: 5, 5: 4}
# Above this many subspaces the pairwise meet/join tables are streamed row by
# row instead of being held in memory.
TABLE_LIMIT = 3000

Vector = tuple[int, ...]


def check_field(q: int) -> int:
    if q not in SUPPORTED_FIELDS:
        raise FieldMismatchError(f"unsupported field GF({q}); expected one of {SUPPORTED_FIELDS}")
    return q


def check_cap(q: int, n: int) -> None:
    check_field(q)
    if n < 0:
        raise DimensionMismatchError(f"negative dimension {n}")
    if n > MAX_AMBIENT_DIM[q]:
        raise ResourceLimitError(
            f"GF({q})^{n} exceeds the enumeration cap of dimension {MAX_AMBIENT_DIM[q]} for q={q}"
        )


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (k - i) - 1 for i in range(k))
    return num // den


def galois_number(n: int, q: int) -> int:
    """Total number of subspaces of GF(q)^n."""
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def vector_code(v: Sequence[int], q: int) -> int:
    """Integer code of ``v``: base-q digits, coordinate 1 least significant."""
    code = 0
    for x in reversed(v):
        code = code * q + x
    return code


def _pack(v: Sequence[int]) -> int:
    word = 0
    for i, x in enumerate(v):
        if x & 1:
            word |= 1 << i
    return word


def _unpack(word: int, n: int) -> Vector:
    return tuple((word >> i) & 1 for i in range(n))


def _rref_gf2(rows: Iterable[Sequence[int]], n: int) -> tuple[Vector, ...]:
    basis: dict[int, int] = {}  # pivot bit -> row word
    for v in rows:
        w = _pack(v)
        for p, r in basis.items():
            if (w >> p) & 1:
                w ^= r
        if not w:
            continue
        p = (w & -w).bit_length() - 1
        for q_, r in basis.items():
            if (r >> p) & 1:
                basis[q_] = r ^ w
        basis[p] = w
    return tuple(_unpack(basis[p], n) for p in sorted(basis))


def _rref(rows: Iterable[Sequence[int]], q: int, n: int) -> tuple[Vector, ...]:
    if q == 2:
        return _rref_gf2(rows, n)
    m = [[x % q for x in r] for r in rows]
    out = 0
    for col in range(n):
        piv = next((i for i in range(out, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[out], m[piv] = m[piv], m[out]
        inv = pow(m[out][col], q - 2, q)
        prow = [(x * inv) % q for x in m[out]]
        m[out] = prow
        for i in range(len(m)):
            f = m[i][col]
            if i != out and f:
                m[i] = [(a - f * b) % q for a, b in zip(m[i], prow)]
        out += 1
        if out == len(m):
            break
    return tuple(tuple(r) for r in m[:out])


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(q)^n given by its reduced row echelon rows.

    Build instances with :func:`canonicalize`; the constructor trusts that
    ``rows`` is already canonical.
    """

    q: int
    n: int
    rows: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ambient(self) -> tuple[int, int]:
        return (self.q, self.n)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.rows)

    def __contains__(self, v: Sequence[int]) -> bool:
        return contains_vector(self, v)

    def __repr__(self) -> str:
        return f"Subspace(GF({self.q})^{self.n}: {format_subspace(self)})"

    def vectors(self) -> Iterator[Vector]:
        """All ``q**dim`` elements."""
        q, n = self.q, self.n
        for coeffs in product(range(q), repeat=self.dim):
            yield tuple(
                sum(c * r[j] for c, r in zip(coeffs, self.rows)) % q for j in range(n)
            )

    def nonzero_vectors(self) -> Iterator[Vector]:
        for v in self.vectors():
            if any(v):
                yield v

    def element_mask(self) -> int:
        """Bitset over vector codes of the elements of this subspace."""
        if self.q == 2:
            elems = [0]
            for r in self.rows:
                w = _pack(r)
                elems += [e ^ w for e in elems]
            return sum(1 << e for e in elems)
        mask = 0
        for v in self.vectors():
            mask |= 1 << vector_code(v, self.q)
        return mask


def canonicalize(rows: Iterable[Sequence[int]], q: int, n: int | None = None) -> Subspace:
    """Canonical subspace spanned by ``rows``."""
    check_field(q)
    rows = [tuple(r) for r in rows]
    if n is None:
        if not rows:
            raise DimensionMismatchError("cannot infer the ambient dimension of an empty row list")
        n = len(rows[0])
    for r in rows:
        if len(r) != n:
            raise DimensionMismatchError(f"row {r} has length {len(r)}, expected {n}")
    return Subspace(q, n, _rref(rows, q, n))


def zero_subspace(q: int, n: int) -> Subspace:
    return Subspace(check_field(q), n, ())


def full_space(q: int, n: int) -> Subspace:
    check_field(q)
    return Subspace(q, n, tuple(unit_vector(n, i) for i in range(1, n + 1)))


def unit_vector(n: int, i: int) -> Vector:
    """Standard basis vector e_i (1-indexed)."""
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def _same_ambient(*spaces: Subspace) -> tuple[int, int]:
    amb = spaces[0].ambient
    for s in spaces[1:]:
        if s.q != amb[0]:
            raise FieldMismatchError(f"GF({s.q}) vs GF({amb[0]})")
        if s.n != amb[1]:
            raise DimensionMismatchError(f"ambient dimension {s.n} vs {amb[1]}")
    return amb


def contains_vector(X: Subspace, v: Sequence[int]) -> bool:
    if len(v) != X.n:
        raise DimensionMismatchError(f"vector of length {len(v)} in GF({X.q})^{X.n}")
    q = X.q
    w = [x % q for x in v]
    for p, r in zip(X.pivots, X.rows):
        c = w[p]
        if c:
            w = [(a - c * b) % q for a, b in zip(w, r)]
    return not any(w)


def span_sum(A: Subspace, B: Subspace) -> Subspace:
    q, n = _same_ambient(A, B)
    return Subspace(q, n, _rref(A.rows + B.rows, q, n))


def perp(X: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    q, n = X.q, X.n
    piv = X.pivots
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for p, r in zip(piv, X.rows):
            v[p] = (-r[f]) % q
        basis.append(v)
    return Subspace(q, n, _rref(basis, q, n))


def intersect(A: Subspace, B: Subspace) -> Subspace:
    _same_ambient(A, B)
    return perp(span_sum(perp(A), perp(B)))


def contains(A: Subspace, B: Subspace) -> bool:
    """True when ``B`` is a subspace of ``A``."""
    _same_ambient(A, B)
    return B.dim <= A.dim and all(contains_vector(A, r) for r in B.rows)


def _combine(coeffs: Sequence[int], rows: Sequence[Vector], q: int, n: int) -> Vector:
    return tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(n))


def _projective_points(d: int, q: int) -> Iterator[Vector]:
    """Nonzero vectors of GF(q)^d whose first nonzero entry is 1."""
    for lead in range(d):
        for tail in product(range(q), repeat=d - lead - 1):
            yield (0,) * lead + (1,) + tail


def lines(X: Subspace) -> list[Subspace]:
    """All one-dimensional subspaces of ``X``."""
    q, n = X.q, X.n
    return [Subspace(q, n, _rref([_combine(c, X.rows, q, n)], q, n)) for c in _projective_points(X.dim, q)]


def hyperplanes(X: Subspace) -> list[Subspace]:
    """All codimension-one subspaces of ``X`` (empty for the zero space)."""
    q, n, d = X.q, X.n, X.dim
    out = []
    for c in _projective_points(d, q):
        p = c.index(1)
        kernel = []
        for j in range(d):
            if j == p:
                continue
            a = [0] * d
            a[j] = 1
            a[p] = (-c[j]) % q
            kernel.append(_combine(a, X.rows, q, n))
        out.append(Subspace(q, n, _rref(kernel, q, n)))
    return out


def apply_matrix(X: Subspace, A: Sequence[Sequence[int]]) -> Subspace:
    """Image of ``X`` under the row-vector map ``v -> v A``.

    ``A`` has ``X.n`` rows; its row length is the target dimension.
    """
    if len(A) != X.n:
        raise DimensionMismatchError(f"matrix with {len(A)} rows applied to GF({X.q})^{X.n}")
    q = X.q
    m = len(A[0]) if A else 0
    rows = [_combine(r, A, q, m) for r in X.rows]
    return Subspace(q, m, _rref(rows, q, m))


def matrix_inverse(A: Sequence[Sequence[int]], q: int) -> list[list[int]]:
    n = len(A)
    aug = [list(A[i]) + list(unit_vector(n, i + 1)) for i in range(n)]
    red = _rref(aug, q, 2 * n)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is singular")
    return [list(r[n:]) for r in red]


def subspaces_of(X: Subspace) -> list[Subspace]:
    """Every subspace of ``X``, in the enumeration order of GF(q)^dim(X)."""
    if X.dim == 0:
        return [X]
    return [apply_matrix(Y, X.rows) for Y in get_ambient(X.q, X.dim).subspaces]


def enumerate_bases(X: Subspace) -> Iterator[frozenset[Vector]]:
    """Stream every unordered linear basis of ``X``.

    The zero space has exactly one basis, the empty set.
    """
    q, n, k = X.q, X.n, X.dim
    vecs = sorted(X.nonzero_vectors(), key=lambda v: vector_code(v, q))
    if k == 0:
        yield frozenset()
        return

    def grow(start: int, chosen: list[Vector], span: Subspace) -> Iterator[frozenset[Vector]]:
        if len(chosen) == k:
            yield frozenset(chosen)
            return
        # leave room for the remaining picks
        for i in range(start, len(vecs) - (k - len(chosen)) + 1):
            v = vecs[i]
            if contains_vector(span, v):
                continue
            chosen.append(v)
            yield from grow(i + 1, chosen, Subspace(q, n, _rref(span.rows + (v,), q, n)))
            chosen.pop()

    yield from grow(0, [], zero_subspace(q, n))


def count_unordered_bases(k: int, q: int) -> int:
    ordered = prod(q**k - q**i for i in range(k))
    fact = prod(range(1, k + 1))
    return ordered // fact


# -- block decompositions and projections -------------------------------------


def _block_offsets(sizes: Sequence[int]) -> list[int]:
    offs = [0]
    for s in sizes:
        offs.append(offs[-1] + s)
    return offs


def embed_direct_sum(parts: Sequence[Subspace]) -> Subspace:
    """Place each part in its own coordinate block of the direct sum."""
    if not parts:
        raise BlockMismatchError("direct sum of no blocks")
    q = parts[0].q
    if any(p.q != q for p in parts):
        raise FieldMismatchError("blocks over different fields")
    offs = _block_offsets([p.n for p in parts])
    total = offs[-1]
    rows = []
    for p, off in zip(parts, offs):
        for r in p.rows:
            rows.append((0,) * off + r + (0,) * (total - off - p.n))
    return Subspace(q, total, _rref(rows, q, total))


def project(X: Subspace, sizes: Sequence[int], i: int) -> Subspace:
    """Projection of ``X`` onto block ``i`` (1-indexed) of the decomposition ``sizes``."""
    if sum(sizes) != X.n:
        raise BlockMismatchError(f"blocks {tuple(sizes)} do not partition GF({X.q})^{X.n}")
    if not 1 <= i <= len(sizes):
        raise BlockMismatchError(f"block index {i} outside 1..{len(sizes)}")
    offs = _block_offsets(sizes)
    lo, hi = offs[i - 1], offs[i]
    return Subspace(X.q, hi - lo, _rref([r[lo:hi] for r in X.rows], X.q, hi - lo))


def project_delete(X: Subspace, i: int) -> Subspace:
    """Image of ``X`` after deleting coordinate ``i`` (1-indexed)."""
    if not 1 <= i <= X.n:
        raise BlockMismatchError(f"coordinate {i} outside 1..{X.n}")
    rows = [r[: i - 1] + r[i:] for r in X.rows]
    return Subspace(X.q, X.n - 1, _rref(rows, X.q, X.n - 1))


# -- the coordinate correspondence --------------------------------------------


def phi(S: Iterable[int], q: int, n: int) -> Subspace:
    """Span of the standard basis vectors indexed by ``S`` (1-indexed)."""
    check_field(q)
    S = sorted(set(S))
    if S and (S[0] < 1 or S[-1] > n):
        raise DimensionMismatchError(f"{S} is not a subset of [1..{n}]")
    return Subspace(q, n, tuple(unit_vector(n, i) for i in S))


def support(v: Sequence[int]) -> frozenset[int]:
    return frozenset(i + 1 for i, x in enumerate(v) if x)


def support_space(V: Subspace) -> frozenset[int]:
    out: set[int] = set()
    for r in V.rows:
        out |= support(r)
    return frozenset(out)


def is_coordinate(X: Subspace) -> bool:
    return all(sum(1 for x in r if x) == 1 for r in X.rows)


def phi_inverse(X: Subspace) -> frozenset[int]:
    if not is_coordinate(X):
        raise NotCoordinateError(f"{format_subspace(X)} is not spanned by standard basis vectors")
    return support_space(X)


# -- text encodings -----------------------------------------------------------

_AMBIENT_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*\^\s*(\d+)\s*$")


def parse_ambient(text: str) -> tuple[int, int]:
    m = _AMBIENT_RE.match(text)
    if not m:
        raise FormatError(f"expected an ambient literal like 'GF(2)^6', got {text!r}")
    q, n = int(m.group(1)), int(m.group(2))
    if q not in SUPPORTED_FIELDS:
        raise FormatError(f"unsupported field GF({q})")
    return q, n


def format_ambient(q: int, n: int) -> str:
    return f"GF({q})^{n}"


def parse_vector(text: str, q: int, n: int | None = None) -> Vector:
    text = text.strip()
    if not text or any(c not in "0123456789" for c in text):
        raise FormatError(f"bad vector literal {text!r}")
    v = tuple(int(c) for c in text)
    if any(x >= q for x in v):
        raise FormatError(f"digit out of range for GF({q}) in {text!r}")
    if n is not None and len(v) != n:
        raise FormatError(f"vector {text!r} has {len(v)} digits, expected {n}")
    return v


def format_vector(v: Sequence[int]) -> str:
    return "".join(str(x) for x in v)


def parse_subspace(text: str, q: int, n: int) -> Subspace:
    """Parse a comma-separated list of row literals; ``0`` alone is the zero space."""
    text = text.strip()
    if text in ("0", ""):
        return zero_subspace(q, n)
    rows = [parse_vector(t, q, n) for t in text.split(",")]
    return canonicalize(rows, q, n)


def format_subspace(X: Subspace) -> str:
    if X.dim == 0:
        return "0" * X.n if X.n else "0"
    return ",".join(format_vector(r) for r in X.rows)


# -- the full subspace lattice ------------------------------------------------


def _rref_matrices(q: int, n: int, k: int) -> Iterator[tuple[Vector, ...]]:
    for pivots in combinations(range(n), k):
        slots = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for vals in product(range(q), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), x in zip(slots, vals):
                rows[r][c] = x
            yield tuple(tuple(r) for r in rows)


# odd multipliers for hashing multi-word element masks
_MIX = np.array(
    [0x9E3779B97F4A7C15, 0xC2B2AE3D27D4EB4F, 0x165667B19E3779F9, 0xD6E8FEB86659FD93,
     0xFF51AFD7ED558CCD, 0xC4CEB9FE1A85EC53, 0x94D049BB133111EB, 0xBF58476D1CE4E5B9,
     0x2545F4914F6CDD1D, 0x9FB21C651E98DF25],
    dtype=np.uint64,
)


class AmbientSpace:
    """GF(q)^n together with an indexed enumeration of all its subspaces.

    Subspaces are ordered by dimension, then pivot columns, then the free
    entries of their echelon form; rank tables everywhere are arrays in this
    order.  Lattice structure (covers, meets, joins) is built lazily.
    """

    def __init__(self, q: int, n: int):
        check_cap(q, n)
        self.q = q
        self.n = n
        subs = [Subspace(q, n, rows) for k in range(n + 1) for rows in _rref_matrices(q, n, k)]
        expected = galois_number(n, q)
        if len(subs) != expected:
            raise AssertionError(f"enumerated {len(subs)} subspaces of GF({q})^{n}, expected {expected}")
        self.subspaces: tuple[Subspace, ...] = tuple(subs)
        self.index: dict[Subspace, int] = {s: i for i, s in enumerate(subs)}
        self.dims = np.array([s.dim for s in subs], dtype=np.int16)

    def __repr__(self) -> str:
        return f"AmbientSpace({format_ambient(self.q, self.n)})"

    def __len__(self) -> int:
        return len(self.subspaces)

    def __iter__(self) -> Iterator[Subspace]:
        return iter(self.subspaces)

    def __getitem__(self, i: int) -> Subspace:
        return self.subspaces[i]

    @property
    def zero(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.subspaces) - 1

    def index_of(self, X: Subspace) -> int:
        if X.ambient != (self.q, self.n):
            raise DimensionMismatchError(
                f"{format_ambient(*X.ambient)} subspace used in {format_ambient(self.q, self.n)}"
            )
        return self.index[X]

    @cached_property
    def masks(self) -> list[int]:
        return [s.element_mask() for s in self.subspaces]

    @cached_property
    def _mask_index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    @cached_property
    def hyperplane_lists(self) -> tuple[tuple[int, ...], ...]:
        idx = self.index
        return tuple(tuple(sorted(idx[h] for h in hyperplanes(s))) for s in self.subspaces)

    @cached_property
    def cover_lists(self) -> tuple[tuple[int, ...], ...]:
        """Upper covers: the subspaces ``X + <v>`` for ``v`` outside ``X``."""
        ups: list[list[int]] = [[] for _ in self.subspaces]
        for i, hs in enumerate(self.hyperplane_lists):
            for h in hs:
                ups[h].append(i)
        return tuple(tuple(u) for u in ups)

    @cached_property
    def cover_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Parallel arrays ``(lower, upper)`` over every covering pair."""
        lo = [h for hs in self.hyperplane_lists for h in hs]
        hi = [i for i, hs in enumerate(self.hyperplane_lists) for _ in hs]
        return np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64)

    @cached_property
    def line_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.subspaces) if s.dim == 1)

    @cached_property
    def perp_indices(self) -> np.ndarray:
        return np.array([self.index[perp(s)] for s in self.subspaces], dtype=np.int64)

    def meet(self, i: int, j: int) -> int:
        return self._mask_index[self.masks[i] & self.masks[j]]

    def join(self, i: int, j: int) -> int:
        p = self.perp_indices
        return int(p[self.meet(int(p[i]), int(p[j]))])

    def is_subspace(self, i: int, j: int) -> bool:
        """True when subspace ``i`` is contained in subspace ``j``."""
        return self.masks[i] & ~self.masks[j] == 0

    @cached_property
    def _words(self) -> np.ndarray:
        nwords = max(1, -(-(self.q**self.n) // 64))
        low = (1 << 64) - 1
        arr = np.zeros((len(self.subspaces), nwords), dtype=np.uint64)
        for i, m in enumerate(self.masks):
            for w in range(nwords):
                arr[i, w] = (m >> (64 * w)) & low
        return arr

    def _keys(self, words: np.ndarray) -> np.ndarray:
        if words.shape[1] == 1:
            return words[:, 0].copy()
        mix = _MIX[: words.shape[1]]
        return (words * mix).sum(axis=1, dtype=np.uint64)

    @cached_property
    def _key_lookup(self) -> tuple[np.ndarray, np.ndarray]:
        keys = self._keys(self._words)
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        if np.any(sorted_keys[1:] == sorted_keys[:-1]):
            raise AssertionError("element-mask hash collision")
        return sorted_keys, order

    def meet_row(self, i: int) -> np.ndarray:
        """Indices of ``X_i ∩ X_j`` for every ``j``."""
        if "meet_table" in self.__dict__:
            return self.__dict__["meet_table"][i]
        sorted_keys, order = self._key_lookup
        keys = self._keys(self._words & self._words[i])
        pos = np.searchsorted(sorted_keys, keys)
        if not np.array_equal(sorted_keys[pos], keys):
            raise AssertionError("intersection outside the enumeration")
        return order[pos]

    def join_row(self, i: int) -> np.ndarray:
        """Indices of ``X_i + X_j`` for every ``j``."""
        if "join_table" in self.__dict__:
            return self.__dict__["join_table"][i]
        p = self.perp_indices
        return p[self.meet_row(int(p[i]))[p]]

    @cached_property
    def meet_table(self) -> np.ndarray:
        g = len(self.subspaces)
        if g > TABLE_LIMIT:
            raise ResourceLimitError(f"{g} subspaces: meet table too large, use meet_row")
        return np.stack([self.meet_row(i) for i in range(g)]).astype(np.int32)

    @cached_property
    def join_table(self) -> np.ndarray:
        g = len(self.subspaces)
        if g > TABLE_LIMIT:
            raise ResourceLimitError(f"{g} subspaces: join table too large, use join_row")
        p = self.perp_indices
        # join(i, j) = perp(meet(perp i, perp j))
        return p[self.meet_table[np.ix_(p, p)]].astype(np.int32)

    def down_set(self, i: int) -> np.ndarray:
        """Indices of all subspaces of ``X_i``."""
        words = self._words
        return np.flatnonzero(np.all((words & ~words[i]) == 0, axis=1))


@lru_cache(maxsize=None)
def get_ambient(q: int, n: int) -> AmbientSpace:
    """Shared, cached :class:`AmbientSpace` for GF(q)^n."""
    return AmbientSpace(q, n)


def enumerate_subspaces(E: AmbientSpace | tuple[int, int]) -> list[Subspace]:
    if not isinstance(E, AmbientSpace):
        E = get_ambient(*E)
    return list(E.subspaces)
