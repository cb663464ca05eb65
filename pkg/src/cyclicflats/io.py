"""Plain-text file formats for matroids, q-matroids and presentations.

Matroid files start with the ground-set size, q-matroid files with an ambient
literal such as ``GF(2)^4``.  One section follows::

    presentation:      one avoidance set (bitmask string) or subspace literal per line
    member:            q-side alternative: one block of row literals per member
    cyclic-flats:      "<set or subspace literal> <rank>" per line
    rank-table:        "<index> <rank>" per line, q-side only, every subspace once

``#`` starts a comment.  Subspace literals are comma-separated rows; a row of
zeros (or a lone ``0``) is the zero subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError
from .field_linalg import (
    canonicalize,
    format_ambient,
    format_subspace,
    format_vector,
    get_ambient,
    parse_ambient,
    parse_subspace,
    parse_vector,
    zero_subspace,
)
from .matroid import (
    Matroid,
    SetPresentation,
    avoidance_transversal_matroid,
    mask_of,
    matroid_from_cyclic_flats,
    set_of,
)
from .qmatroid import QMatroid, cyclic_flats, qmatroid_from_cyclic_flats, validate_q_axioms
from .qtransversal import QPresentation, transversal_qmatroid

SECTIONS = ("presentation", "member", "cyclic-flats", "rank-table")


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _split_header(text: str) -> tuple[str, str, list[str]]:
    """Return ``(header, section, body_lines)``; ``member:`` blocks keep their markers."""
    lines = _lines(text)
    if len(lines) < 2:
        raise FormatError("expected a header line and a section")
    header, rest = lines[0], lines[1:]
    head = rest[0]
    name = head.split(":", 1)[0].strip()
    if not head.count(":") or name not in SECTIONS:
        raise FormatError(f"expected one of {', '.join(s + ':' for s in SECTIONS)} after the header, got {head!r}")
    if name == "member":
        return header, "member", rest
    tail = head.split(":", 1)[1].strip()
    body = ([tail] if tail else []) + rest[1:]
    for line in body:
        if line.split(":", 1)[0].strip() in SECTIONS and line.endswith(":"):
            raise FormatError("a file holds exactly one section")
    return header, name, body


def _set_literal(text: str, n: int) -> frozenset[int]:
    bits = parse_vector(text, 2, n)
    return frozenset(i + 1 for i, b in enumerate(bits) if b)


def format_set(S, n: int) -> str:
    m = mask_of(S)
    return format_vector([(m >> i) & 1 for i in range(n)]) if n else ""


@dataclass(frozen=True)
class MatroidFile:
    n: int
    presentation: SetPresentation | None = None
    cyclic_flats: dict | None = None

    def matroid(self) -> Matroid:
        if self.presentation is not None:
            return avoidance_transversal_matroid(self.presentation)
        return matroid_from_cyclic_flats(self.cyclic_flats, self.n)


def parse_matroid_file(text: str) -> MatroidFile:
    header, section, body = _split_header(text)
    try:
        n = int(header)
    except ValueError:
        raise FormatError(f"matroid files start with the ground-set size, got {header!r}") from None
    if section == "presentation":
        sets = tuple(_set_literal(line, n) for line in body)
        return MatroidFile(n, presentation=SetPresentation(n, sets))
    if section == "cyclic-flats":
        Z = {}
        for line in body:
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"expected '<mask> <rank>', got {line!r}")
            Z[_set_literal(parts[0], n)] = int(parts[1])
        return MatroidFile(n, cyclic_flats=Z)
    raise FormatError(f"section {section!r} is not valid in a matroid file")


def format_set_presentation(P: SetPresentation) -> str:
    lines = [str(P.n), "presentation:"] + [format_set(S, P.n) for S in P.sets]
    return "\n".join(lines) + "\n"


def format_set_cyclic_flats(n: int, Z: dict) -> str:
    lines = [str(n), "cyclic-flats:"] + [f"{format_set(S, n)} {r}" for S, r in Z.items()]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class QFile:
    q: int
    n: int
    presentation: QPresentation | None = None
    cyclic_flats: dict | None = None
    ranks: tuple[int, ...] | None = None

    def qmatroid(self) -> QMatroid:
        if self.presentation is not None:
            return transversal_qmatroid(self.presentation)
        if self.cyclic_flats is not None:
            return qmatroid_from_cyclic_flats(self.cyclic_flats, get_ambient(self.q, self.n))
        return validate_q_axioms(self.ranks, get_ambient(self.q, self.n))


def parse_q_file(text: str) -> QFile:
    header, section, body = _split_header(text)
    q, n = parse_ambient(header)
    if section == "presentation":
        members = tuple(parse_subspace(line, q, n) for line in body)
        return QFile(q, n, presentation=QPresentation(q, n, members))
    if section == "member":
        blocks: list[list[str]] = []
        for line in body:
            key, sep, tail = line.partition(":")
            if sep and key.strip() == "member":
                blocks.append([tail.strip()] if tail.strip() else [])
            elif sep:
                raise FormatError(f"unexpected section {line!r} among member blocks")
            else:
                blocks[-1].append(line)
        members = []
        for rows in blocks:
            if not rows:
                members.append(zero_subspace(q, n))
            else:
                members.append(canonicalize([v for r in rows for v in parse_subspace(r, q, n).rows], q, n))
        return QFile(q, n, presentation=QPresentation(q, n, tuple(members)))
    if section == "cyclic-flats":
        Z = {}
        for line in body:
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"expected '<subspace> <rank>', got {line!r}")
            Z[parse_subspace(parts[0], q, n)] = int(parts[1])
        return QFile(q, n, cyclic_flats=Z)
    E = get_ambient(q, n)
    ranks: list[int | None] = [None] * len(E)
    for line in body:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<index> <rank>', got {line!r}")
        i, r = int(parts[0]), int(parts[1])
        if not 0 <= i < len(E) or ranks[i] is not None:
            raise FormatError(f"bad or repeated subspace index {i}")
        ranks[i] = r
    if any(r is None for r in ranks):
        raise FormatError(f"rank table must list all {len(E)} subspaces of {header}")
    return QFile(q, n, ranks=tuple(ranks))


def format_q_presentation(P: QPresentation) -> str:
    lines = [format_ambient(P.q, P.n)]
    if not P.members:
        lines.append("presentation:")
    for X in P.members:
        lines.append("member:")
        lines += [format_vector(r) for r in X.rows]
    return "\n".join(lines) + "\n"


def format_q_cyclic_flats(M_or_q, n: int | None = None, Z: dict | None = None) -> str:
    """Cyclic-flats file for a q-matroid, or for ``(q, n, Z)`` given explicitly."""
    if isinstance(M_or_q, QMatroid):
        q, n, Z = M_or_q.q, M_or_q.n, cyclic_flats(M_or_q)
    else:
        q = M_or_q
    lines = [format_ambient(q, n), "cyclic-flats:"] + [f"{format_subspace(X)} {r}" for X, r in Z.items()]
    return "\n".join(lines) + "\n"


def format_rank_table(M: QMatroid) -> str:
    lines = [format_ambient(M.q, M.n), "rank-table:"] + [f"{i} {int(r)}" for i, r in enumerate(M.ranks)]
    return "\n".join(lines) + "\n"


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_matroid(path: str | Path) -> MatroidFile:
    return parse_matroid_file(read_text(path))


def load_q(path: str | Path) -> QFile:
    return parse_q_file(read_text(path))


def format_set_literal(S, n: int) -> str:
    return format_set(S, n)


def set_from_mask_literal(text: str, n: int) -> frozenset[int]:
    return _set_literal(text, n)


__all__ = [
    "MatroidFile",
    "QFile",
    "format_q_cyclic_flats",
    "format_q_presentation",
    "format_rank_table",
    "format_set",
    "format_set_cyclic_flats",
    "format_set_presentation",
    "load_matroid",
    "load_q",
    "parse_matroid_file",
    "parse_q_file",
    "set_of",
]
