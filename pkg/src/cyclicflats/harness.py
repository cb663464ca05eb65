"""Verification suites for the structural claims and worked examples.

A suite is a list of tasks.  A task names a registered check and carries its
instance as plain-text files (the formats of :mod:`cyclicflats.io`) plus a few
parameters, so any failing task can be written to disk and replayed later.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, islice, product
from math import comb
from pathlib import Path
from typing import Callable

from .corpus import Corpus, all_bases, sample_bases, transversal_qmatroids
from .errors import AxiomViolationError, CyclicFlatsError
from .field_linalg import (
    apply_matrix,
    canonicalize,
    embed_direct_sum,
    full_space,
    get_ambient,
    galois_number,
    gaussian_binomial,
    hyperplanes,
    intersect,
    is_coordinate,
    parse_subspace,
    phi,
    phi_inverse,
    project,
    span_sum,
    support,
    zero_subspace,
)
from .io import (
    format_q_cyclic_flats,
    format_q_presentation,
    format_rank_table,
    format_set_presentation,
    parse_matroid_file,
    parse_q_file,
)
from .matroid import (
    SetPresentation,
    avoidance_transversal_matroid,
    check_chain,
    check_rank_axioms,
    circuits,
    cyclic_sets,
    direct_sum_matroid,
    direct_sum_set_presentation,
    find_avoidance_presentation,
    flats,
    mask_of,
    matroid_from_cyclic_flats,
    nested_matroid_from_chain,
    nested_presentation_from_chain,
    set_of,
)
from .matroid import cyclic_flats as set_cyclic_flats
from .oracles import (
    brute_force_set_ranks,
    gaussian_count,
    literal_direct_sum_ranks,
    naive_q_axiom_violation,
    naive_set_axiom_violation,
    spans_basis_subset,
)
from .qmatroid import (
    QMatroid,
    bases_of,
    check_q_axioms,
    corresponding_matroid,
    corresponding_qmatroid,
    cyclic_flats,
    is_coordinate_qmatroid,
    is_cyclic,
    is_flat,
    is_nested,
    qmatroid_from_cyclic_flats,
    rank_from_independents,
    ranks_from_flags,
    restriction,
    uniform_qmatroid,
)
from .qops import q_direct_sum, q_free_product
from .qtransversal import (
    QPresentation,
    independence_flags,
    is_partial_q_transversal,
    lift_presentation,
    nested_q_presentation,
    presentation_direct_sum,
    presentation_free_product,
    transversal_qmatroid,
)

CACHE_ENV = "CYCLICFLATS_CACHE_DIR"

NONCOORDINATE_EXAMPLE = """GF(2)^6
presentation:
100000,010000,001000
000100,000010,000001
100100,010010,001001
"""


def cache_dir() -> Path:
    """Directory for cached rank tables and default witness files."""
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "cyclicflats")


@dataclass
class Outcome:
    """One claim evaluated on one instance.

    ``info`` outcomes are observations, reported in the notes and never
    counted as passes or failures.  ``replay`` overrides the task as the
    witness when a batch check pins a failure on a single instance.
    """

    claim: str
    ok: bool
    detail: str = ""
    info: bool = False
    replay: dict | None = None
    count: int = 1


@dataclass(frozen=True)
class Task:
    id: str
    check: str
    files: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def witness(self, suite: str) -> dict:
        return {"suite": suite, "id": self.id, "check": self.check, "files": dict(self.files), "params": dict(self.params)}


CHECKS: dict[str, Callable] = {}


def check(name: str):
    def register(fn):
        CHECKS[name] = fn
        return fn

    return register


def run_task(task: Task) -> tuple[list[Outcome], int]:
    """Evaluate a task; exceptions become a failed ``check completed`` claim."""
    try:
        result = CHECKS[task.check](task.files, task.params)
    except (CyclicFlatsError, AssertionError, ValueError, KeyError) as exc:
        return [Outcome("check completed", False, f"{type(exc).__name__}: {exc}")], 1
    if isinstance(result, tuple):
        return result
    return result, 1


def _claim(claim: str, ok, detail: str = "") -> Outcome:
    return Outcome(claim, bool(ok), detail)


def _info(claim: str, detail: str) -> Outcome:
    return Outcome(claim, True, detail, info=True)


def _presentation(text: str) -> QPresentation:
    P = parse_q_file(text).presentation
    if P is None:
        raise ValueError("expected a presentation file")
    return P


def _set_presentation(text: str) -> SetPresentation:
    P = parse_matroid_file(text).presentation
    if P is None:
        raise ValueError("expected a presentation file")
    return P


# ---------------------------------------------------------------- examples


@check("projection-example")
def _projection_example(files, params):
    sizes = (2, 2, 2)
    X = parse_subspace("101001", 2, 6)
    e1, e2 = parse_subspace("10", 2, 2), parse_subspace("01", 2, 2)
    block = embed_direct_sum([zero_subspace(2, 2), full_space(2, 2), full_space(2, 2)])
    return [
        _claim("pi_1 of <e1+e3+e6> is <e1>", project(X, sizes, 1) == e1),
        _claim("pi_2 of <e1+e3+e6> is <e1>", project(X, sizes, 2) == e1),
        _claim("pi_3 of <e1+e3+e6> is <e2>", project(X, sizes, 3) == e2),
        _claim("0+E2+E3 is <e3,e4,e5,e6>", block == parse_subspace("001000,000100,000010,000001", 2, 6)),
    ]


def cached_transversal_qmatroid(P: QPresentation) -> QMatroid:
    """``transversal_qmatroid(P)`` with the rank table kept under :func:`cache_dir`."""
    text = format_q_presentation(P)
    key = hashlib.sha256(text.encode()).hexdigest()[:16]
    path = cache_dir() / f"rank-{key}.txt"
    if path.exists():
        try:
            M = parse_q_file(path.read_text(encoding="utf-8")).qmatroid()
            if (M.q, M.n) == (P.q, P.n):
                return M
        except (CyclicFlatsError, ValueError):
            pass
    M = transversal_qmatroid(P)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(format_rank_table(M), encoding="utf-8")
        tmp.replace(path)
    except OSError:
        pass
    return M


@check("noncoordinate-example")
def _noncoordinate_example(files, params):
    P = _presentation(files["presentation"])
    M = cached_transversal_qmatroid(P)
    E = full_space(P.q, P.n)
    Xs = P.members
    out = []
    for i, X in enumerate(Xs, 1):
        out.append(_claim(f"X{i} is a flat", is_flat(M, X)))
        out.append(_claim(f"X{i} is cyclic", is_cyclic(M, X)))
        out.append(_claim(f"X{i} is a cyclic flat", X in cyclic_flats(M)))
    X1 = Xs[0]
    hs = hyperplanes(X1)
    out.append(_claim("every hyperplane of X1 is independent", all(M.rank(H) == H.dim for H in hs)))
    out.append(_claim("X1 is dependent", M.rank(X1) < X1.dim))
    out.append(_claim("rank of X1 is 2", M.rank(X1) == 2))
    out.append(_claim(
        "every hyperplane of X1 passes the basis scan",
        all(is_partial_q_transversal(H, P) for H in hs),
    ))
    out.append(_claim("X1 fails the basis scan", not is_partial_q_transversal(X1, P)))
    pairs = [(a, b) for a in range(len(Xs)) for b in range(a + 1, len(Xs))]
    out.append(_claim("pairwise intersections are zero", all(intersect(Xs[a], Xs[b]).dim == 0 for a, b in pairs)))
    out.append(_claim("each pair spans the ambient space", all(span_sum(Xs[a], Xs[b]) == E for a, b in pairs)))
    Z = cyclic_flats(M)
    out.append(_info(
        "coordinate status",
        f"{len(Z)} cyclic flats; coordinate in the standard basis: {is_coordinate_qmatroid(M)}; "
        f"ranks of X1, X2, X3: {[M.rank(X) for X in Xs]}",
    ))
    return out


# ------------------------------------------------------------- embedding


@check("embedding")
def _embedding(files, params):
    P = _set_presentation(files["presentation"])
    q = int(params.get("q", 2))
    n = P.n
    M = avoidance_transversal_matroid(P)
    Q = lift_presentation(P, q)
    QM = transversal_qmatroid(Q)
    E = QM.ambient
    Z = set_cyclic_flats(M)
    ZQ = cyclic_flats(QM)
    lifted = {phi(S, q, n): r for S, r in Z.items()}
    img = [E.index[phi(set_of(m), q, n)] for m in range(1 << n)]
    size = [bin(m).count("1") for m in range(1 << n)]
    flat_masks = {mask_of(F) for F in flats(M)}
    cyc_masks = {mask_of(C) for C in cyclic_sets(M)}
    out = [
        _claim("cyclic flats of the lift are the lifted cyclic flats", set(ZQ) == set(lifted)),
        _claim("ranks agree on cyclic flats", all(QM.rank(X) == r for X, r in lifted.items())),
        _claim("the lift is coordinate", is_coordinate_qmatroid(QM)),
    ]
    out.append(_claim(
        "corresponding matroid of the lift is M",
        is_coordinate_qmatroid(QM) and corresponding_matroid(QM) == M,
    ))
    out.append(_claim("corresponding q-matroid of M is the lift", corresponding_qmatroid(M, q) == QM))
    out.append(_claim(
        "every lifted subset keeps its rank",
        all(QM.ranks[img[m]] == M.ranks[m] for m in range(1 << n)),
    ))
    out.append(_claim(
        "independent sets lift to independent spaces",
        all(QM.ranks[img[m]] == size[m] for m in range(1 << n) if M.ranks[m] == size[m]),
    ))
    out.append(_claim(
        "flats lift to flats and non-flats to non-flats",
        all(is_flat(QM, E.subspaces[img[m]]) == (m in flat_masks) for m in range(1 << n)),
    ))
    out.append(_claim(
        "cyclic sets lift to cyclic spaces",
        all(is_cyclic(QM, E.subspaces[img[m]]) for m in cyc_masks),
    ))
    vectors = list(product(range(q), repeat=n))
    out.append(_claim(
        "a vector lies in a member exactly when its support lies in the avoidance set",
        all((v in X) == (support(v) <= S) for X, S in zip(Q.members, P.sets) for v in vectors),
    ))
    out.append(_claim(
        "members are cyclic flats on one side exactly when on the other",
        all((S in Z) == (X in ZQ) for X, S in zip(Q.members, P.sets)),
    ))
    found = find_avoidance_presentation(corresponding_matroid(QM))
    out.append(_claim(
        "a presentation of the corresponding matroid lifts to one of the q-matroid",
        found is not None and transversal_qmatroid(lift_presentation(found, q)) == QM,
    ))
    return out


# ---------------------------------------------------------------- nested


@check("nested")
def _nested(files, params):
    qf = parse_q_file(files["chain"])
    chain = qf.cyclic_flats
    E = get_ambient(qf.q, qf.n)
    target = qmatroid_from_cyclic_flats(chain, E)
    coordinate = all(is_coordinate(X) for X in chain)
    out = [_claim("the chain q-matroid is nested", is_nested(target))]
    try:
        P = nested_q_presentation(chain, adapt_basis=not coordinate)
        ok, detail = transversal_qmatroid(P) == target, ""
    except AssertionError as exc:
        ok, detail = False, str(exc)
    out.append(_claim("the nested presentation realizes the chain", ok, detail))
    if coordinate:
        sets = {phi_inverse(X): r for X, r in chain.items()}
        check_chain(sets)
        S = nested_presentation_from_chain(sets, qf.n)
        out.append(_claim(
            "the set-side presentation realizes the chain matroid",
            avoidance_transversal_matroid(S) == nested_matroid_from_chain(sets, qf.n),
        ))
    return out


# ------------------------------------------------------- binary operations


def _pair(files):
    return _presentation(files["first"]), _presentation(files["second"])


def _first_block(q: int, n1: int, n2: int):
    return embed_direct_sum([full_space(q, n1), zero_subspace(q, n2)])


@check("free-product")
def _free_product(files, params):
    P1, P2 = _pair(files)
    M1, M2 = transversal_qmatroid(P1), transversal_qmatroid(P2)
    M = q_free_product(M1, M2)
    same = M == transversal_qmatroid(presentation_free_product(P1, P2))
    out = []
    if len(P1) == M1.rank_of_matroid:
        out.append(_claim("free product equals the transversal q-matroid of the combined presentation", same))
    else:
        out.append(_info(
            "first presentation larger than its rank",
            f"|P1| = {len(P1)} > rank {M1.rank_of_matroid}; combined presentation "
            f"{'agrees' if same else 'disagrees'}",
        ))
    out.append(_claim(
        "restriction to E1+0 is the first factor",
        restriction(M, _first_block(M.q, M1.n, M2.n)) == M1,
    ))
    return out


@check("free-product-padding")
def _free_product_padding(files, params):
    """Pad ``P1`` with a copy of ``E1``: ``M1`` is unchanged but ``|P1|`` exceeds the rank."""
    P1, P2 = _pair(files)
    padded = QPresentation(P1.q, P1.n, P1.members + (full_space(P1.q, P1.n),))
    M1, M2 = transversal_qmatroid(padded), transversal_qmatroid(P2)
    same = q_free_product(M1, M2) == transversal_qmatroid(presentation_free_product(padded, P2))
    return [Outcome("padded first presentation", same, info=True)]


@check("direct-sum")
def _direct_sum(files, params):
    P1, P2 = _pair(files)
    M1, M2 = transversal_qmatroid(P1), transversal_qmatroid(P2)
    M = q_direct_sum(M1, M2)
    out = [_claim(
        "direct sum equals the transversal q-matroid of the combined presentation",
        M == transversal_qmatroid(presentation_direct_sum(P1, P2)),
    )]
    Z1, Z2 = cyclic_flats(M1), cyclic_flats(M2)
    sums = {embed_direct_sum([A, B]): a + b for A, a in Z1.items() for B, b in Z2.items()}
    out.append(_claim("cyclic flats of the direct sum are the sums of cyclic flats", cyclic_flats(M) == sums))
    if P1.is_coordinate and P2.is_coordinate:
        out.append(_claim("direct sum of coordinate q-matroids is coordinate", is_coordinate_qmatroid(M)))
        out.append(_claim(
            "corresponding matroid of the sum is the sum of corresponding matroids",
            corresponding_matroid(M) == direct_sum_matroid(corresponding_matroid(M1), corresponding_matroid(M2)),
        ))
    return out


@check("set-direct-sum")
def _set_direct_sum(files, params):
    S1, S2 = _set_presentation(files["first"]), _set_presentation(files["second"])
    N1, N2 = avoidance_transversal_matroid(S1), avoidance_transversal_matroid(S2)
    N = direct_sum_matroid(N1, N2)
    shift = lambda S: frozenset(x + S1.n for x in S)  # noqa: E731
    unions = {A | shift(B): a + b for A, a in set_cyclic_flats(N1).items() for B, b in set_cyclic_flats(N2).items()}
    return [
        _claim(
            "transversal matroid of the combined presentation is the direct sum",
            avoidance_transversal_matroid(direct_sum_set_presentation(S1, S2)) == N,
        ),
        _claim("cyclic flats of the direct sum are the unions of cyclic flats", set_cyclic_flats(N) == unions),
    ]


@check("direct-sum-probe")
def _direct_sum_probe(files, params):
    P1, P2 = _pair(files)
    M = q_direct_sum(transversal_qmatroid(P1), transversal_qmatroid(P2))
    return [_claim(
        "direct sum equals the transversal q-matroid of the combined presentation",
        M == transversal_qmatroid(presentation_direct_sum(P1, P2)),
    )]


# ---------------------------------------------------------------- axioms


@check("q-axioms")
def _q_axioms(files, params):
    qf = parse_q_file(files["qmatroid"])
    E = get_ambient(qf.q, qf.n)
    if qf.presentation is not None:
        raw = ranks_from_flags(E, independence_flags(qf.presentation))
    else:
        raw = qf.qmatroid().ranks.copy()
    try:
        check_q_axioms(E, raw)
        ok, detail = True, ""
    except AxiomViolationError as exc:
        ok, detail = False, str(exc)
    out = [_claim("normalization, monotonicity, unit increase and submodularity hold", ok, detail)]
    if len(E) <= 16:
        naive = naive_q_axiom_violation(E, raw)
        out.append(_claim("plain pairwise scan finds no violation", naive is None, naive or ""))
    return out


@check("set-axioms")
def _set_axioms(files, params):
    P = _set_presentation(files["presentation"])
    raw = brute_force_set_ranks(P)
    try:
        check_rank_axioms(P.n, raw)
        ok, detail = True, ""
    except AxiomViolationError as exc:
        ok, detail = False, str(exc)
    naive = naive_set_axiom_violation(P.n, raw)
    return [
        _claim("normalization, unit increase and submodularity hold", ok, detail),
        _claim("plain pairwise scan finds no violation", naive is None, naive or ""),
    ]


# ---------------------------------------------------------------- oracles


@check("matching-rank")
def _matching_rank(files, params):
    P = _set_presentation(files["presentation"])
    return [_claim(
        "matching rank equals the largest avoidable subset",
        list(avoidance_transversal_matroid(P).ranks) == brute_force_set_ranks(P),
    )]


@check("matching-rank-batch")
def _matching_rank_batch(files, params):
    n, k, start, stop = (int(params[key]) for key in ("n", "k", "start", "stop"))
    outcomes, count = [], 0
    for masks in islice(combinations_with_replacement(range(1 << n), k), start, stop):
        count += 1
        P = SetPresentation(n, tuple(set_of(m) for m in masks))
        if list(avoidance_transversal_matroid(P).ranks) != brute_force_set_ranks(P):
            outcomes.append(Outcome(
                "matching rank equals the largest avoidable subset", False,
                replay={"check": "matching-rank", "files": {"presentation": format_set_presentation(P)}, "params": {}},
            ))
    if count > len(outcomes):
        outcomes.append(Outcome("matching rank equals the largest avoidable subset", True, count=count - len(outcomes)))
    return outcomes, count


@check("q-oracles")
def _q_oracles(files, params):
    P = _presentation(files["qmatroid"])
    M = transversal_qmatroid(P)
    E = M.ambient
    out = [
        _claim(
            "rank from independent spaces equals the table",
            rank_from_independents(lambda X: M.rank(X) == X.dim, E) == M,
        ),
        _claim("reconstruction from cyclic flats round-trips", qmatroid_from_cyclic_flats(cyclic_flats(M), E) == M),
    ]
    if len(E) <= 67:
        out.append(_claim("Hall criterion agrees with the basis scan", transversal_qmatroid(P, method="bases") == M))
    tops = [full_space(M.q, M.n)] + list(cyclic_flats(M))
    out.append(_claim("bases are equidimensional", all(len(bases_of(M, X)) >= 1 for X in tops)))
    cyc = [i for i, X in enumerate(E.subspaces) if is_cyclic(M, X)]
    join = E.join_table if len(E) <= 400 else None
    ok = True
    for a in cyc:
        for b in cyc:
            j = join[a, b] if join is not None else E.join(a, b)
            if not is_cyclic(M, E.subspaces[j]):
                ok = False
    out.append(_claim("sums of cyclic spaces are cyclic", ok))
    return out


@check("set-oracles")
def _set_oracles(files, params):
    P = _set_presentation(files["presentation"])
    M = avoidance_transversal_matroid(P)
    cyc = [C for C in cyclic_sets(M) if C]
    minimal = [C for C in cyc if not any(D < C for D in cyc)]
    return [
        _claim("reconstruction from cyclic flats round-trips", matroid_from_cyclic_flats(set_cyclic_flats(M), M.n) == M),
        _claim("circuits are the minimal nonempty cyclic sets", sorted(map(sorted, circuits(M))) == sorted(map(sorted, minimal))),
    ]


@check("literal-direct-sum")
def _literal_direct_sum(files, params):
    P1, P2 = _pair(files)
    M1, M2 = transversal_qmatroid(P1), transversal_qmatroid(P2)
    M = q_direct_sum(M1, M2)
    literal = literal_direct_sum_ranks(M1.rank, M2.rank, M.ambient, M1.n)
    return [_claim("hyperplane recursion equals the minimum over all subspaces", list(M.ranks) == literal)]


@check("subspace-count")
def _subspace_count(files, params):
    q, n = int(params["q"]), int(params["n"])
    E = get_ambient(q, n)
    return [
        _claim("number of subspaces equals the Galois number", len(E) == galois_number(n, q) == gaussian_count(n, q)),
        _claim(
            "subspaces per dimension equal the Gaussian binomials",
            all(int((E.dims == k).sum()) == gaussian_binomial(n, k, q) for k in range(n + 1)),
        ),
        _claim("canonical forms are distinct", len(set(E.subspaces)) == len(E)),
    ]


# ---------------------------------------------------------- linear bases


@check("lin-basis-basis")
def _lin_basis_basis(files, params):
    M = transversal_qmatroid(_presentation(files["qmatroid"]))
    samples = params.get("samples")
    if samples is None:
        bases = all_bases(M.q, M.n)
    else:
        bases = sample_bases(M.q, M.n, int(samples), random.Random(params["seed"]))
    rho = M.rank_of_matroid
    bad = [b for b in bases if not spans_basis_subset(M.rank, b, rho, M.q, M.n)]
    detail = f"{len(bases)} bases" + (f"; first failure {bad[0]}" if bad else "")
    return [_claim("every linear basis contains a linear basis of a basis", not bad, detail)]


# ------------------------------------------------------- uniform closure

LEAVES = {"U11": (1, 1), "U12": (1, 2), "U23": (2, 3)}
_TOKEN = re.compile(r"\s*(ds|fp|U\d\d|\(|\)|,)")


def parse_tree(text: str):
    """Parse ``ds(a,b)``, ``fp(a,b)`` and leaf names into nested tuples."""
    tokens = [m.group(1) for m in _TOKEN.finditer(text)]
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot parse operation tree {text!r}")
    pos = 0

    def take():
        nonlocal pos
        if pos == len(tokens):
            raise ValueError(f"unexpected end of {text!r}")
        pos += 1
        return tokens[pos - 1]

    def node():
        tok = take()
        if tok in LEAVES:
            return tok
        if tok not in ("ds", "fp") or take() != "(":
            raise ValueError(f"unexpected {tok!r} in {text!r}")
        a = node()
        if take() != ",":
            raise ValueError(f"expected ',' in {text!r}")
        b = node()
        if take() != ")":
            raise ValueError(f"expected ')' in {text!r}")
        return (tok, a, b)

    tree = node()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return tree


def tree_dim(tree) -> int:
    return LEAVES[tree][1] if isinstance(tree, str) else tree_dim(tree[1]) + tree_dim(tree[2])


def evaluate_tree(tree, q: int = 2) -> tuple[QMatroid, QPresentation]:
    """The q-matroid of an operation tree and the presentation the combinators build for it."""
    if isinstance(tree, str):
        k, n = LEAVES[tree]
        return uniform_qmatroid(k, n, q), QPresentation(q, n, (zero_subspace(q, n),) * k)
    op, a, b = tree
    (M1, P1), (M2, P2) = evaluate_tree(a, q), evaluate_tree(b, q)
    if op == "ds":
        return q_direct_sum(M1, M2), presentation_direct_sum(P1, P2)
    return q_free_product(M1, M2), presentation_free_product(P1, P2)


@check("uniform-closure")
def _uniform_closure(files, params):
    tree = parse_tree(params["tree"])
    M, P = evaluate_tree(tree)
    return [
        _claim("the result is the transversal q-matroid of the constructed presentation", transversal_qmatroid(P) == M),
        _claim("the presentation is coordinate", P.is_coordinate),
        _claim("the result is coordinate", is_coordinate_qmatroid(M)),
        _claim("the corresponding matroid is transversal", find_avoidance_presentation(corresponding_matroid(M)) is not None),
    ]


def random_tree(rng, max_dim: int) -> str:
    names = sorted(LEAVES)
    while True:
        leaves = [rng.choice(names) for _ in range(rng.randint(2, 3))]
        if sum(LEAVES[x][1] for x in leaves) <= max_dim:
            break
    expr = leaves[0]
    for leaf in leaves[1:]:
        op = rng.choice(["ds", "fp"])
        expr = f"{op}({expr},{leaf})" if rng.random() < 0.5 else f"{op}({leaf},{expr})"
    return expr


# ------------------------------------------------------------------ suites


def _qfile(P: QPresentation) -> str:
    return format_q_presentation(P)


def _pair_tasks(check_name, pairs):
    return [
        Task(f"{a[0]}|{b[0]}", check_name, {"first": _qfile(a[1]), "second": _qfile(b[1])})
        for a, b in pairs
    ]


def suite_projection(C: Corpus):
    return [Task("example", "projection-example")]


def suite_noncoordinate(C: Corpus):
    if C.max_dim < 6:
        return []
    return [Task("example", "noncoordinate-example", {"presentation": NONCOORDINATE_EXAMPLE})]


def suite_embedding(C: Corpus):
    items = C.set_instances() + C.spot_set_instances()
    return [Task(i, "embedding", {"presentation": format_set_presentation(P)}, {"q": C.q}) for i, P, _ in items]


def _invertible(rng, q: int, n: int):
    while True:
        A = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
        if canonicalize(A, q, n).dim == n:
            return A


def suite_nested(C: Corpus):
    tasks = []
    chains = C.chain_instances()
    for i, n, chain in chains:
        tasks.append(Task(i, "nested", {"chain": format_q_cyclic_flats(C.q, n, chain)}))
    rng = C.rng("nested")
    moved = [c for c in chains if len(c[2]) > 1]
    for j in range(min(24, len(moved))):
        i, n, chain = moved[rng.randrange(len(moved))]
        A = _invertible(rng, C.q, n)
        image = {apply_matrix(X, A): r for X, r in chain.items()}
        tasks.append(Task(f"{i}-moved{j}", "nested", {"chain": format_q_cyclic_flats(C.q, n, image)}))
    return tasks


def suite_free_product(C: Corpus):
    items = C.q_instances()
    tasks = _pair_tasks("free-product", C.pairs(items, items))
    small = [x for x in items if x[1].n <= 2]
    tasks += _pair_tasks("free-product-padding", C.pairs(small, small, 3))
    return tasks


def suite_direct_sum(C: Corpus):
    coord = C.coordinate_q_instances()
    tasks = _pair_tasks("direct-sum", C.pairs(coord, coord))
    sets = [x for x in C.set_instances() if x[1].n <= 3]
    tasks += [
        Task(f"{a[0]}|{b[0]}", "set-direct-sum", {
            "first": format_set_presentation(a[1]), "second": format_set_presentation(b[1]),
        })
        for a in sets for b in sets
    ]
    return tasks


def _analogue_presentations(q: int):
    """Small relatives of the non-coordinate example: three pairwise complementary subspaces."""
    lines = QPresentation(q, 2, tuple(parse_subspace(v, q, 2) for v in ("10", "01", "11")))
    planes = QPresentation(q, 4, tuple(parse_subspace(v, q, 4) for v in ("1000,0100", "0010,0001", "1010,0101")))
    return [("lines2", lines), ("planes4", planes)]


def suite_probe(C: Corpus):
    items = C.q_instances()
    pairs = [(a, b) for a, b in C.pairs(items, items) if not (a[1].is_coordinate and b[1].is_coordinate)]
    tasks = _pair_tasks("direct-sum-probe", pairs)
    analogues = [(i, P, None) for i, P in _analogue_presentations(C.q)]
    small = [x for x in items if x[1].n <= 3]
    tasks += _pair_tasks("direct-sum-probe", C.pairs(analogues, small) + C.pairs(small, analogues))
    if C.max_dim >= 4:
        ternary = [(f"t{P.n}-{j}", P, M) for n in (1, 2) for j, (P, M) in enumerate(transversal_qmatroids(3, n, 2))]
        ternary = [x for x in ternary if not x[1].is_coordinate] + [x for x in ternary if x[1].is_coordinate][:3]
        tasks += _pair_tasks("direct-sum-probe", C.pairs(ternary, ternary, 4))
    return tasks


def suite_axioms(C: Corpus):
    tasks = [Task(i, "q-axioms", {"qmatroid": _qfile(P)}) for i, P, _ in C.q_instances()]
    tasks += [Task(i, "set-axioms", {"presentation": format_set_presentation(P)}) for i, P, _ in C.set_instances()]
    return tasks


def suite_oracles(C: Corpus, batch: int = 4000):
    tasks = []
    for n in range(1, min(5, C.max_dim) + 1):
        for k in range(0, 5):
            total = _multichoose(1 << n, k)
            for start in range(0, total, batch):
                stop = min(total, start + batch)
                tasks.append(Task(f"n{n}k{k}[{start}:{stop}]", "matching-rank-batch", {},
                                  {"n": n, "k": k, "start": start, "stop": stop}))
    items = C.q_instances()
    tasks += [Task(i, "q-oracles", {"qmatroid": _qfile(P)}) for i, P, _ in items]
    tasks += [Task(i, "set-oracles", {"presentation": format_set_presentation(P)}) for i, P, _ in C.set_instances()]
    tasks += _pair_tasks("literal-direct-sum", C.pairs(items, items, 4))
    for q, top in ((2, 6), (3, 4), (5, 3)):
        for n in range(1, min(top, C.max_dim) + 1):
            tasks.append(Task(f"GF({q})^{n}", "subspace-count", {}, {"q": q, "n": n}))
    return tasks


def _multichoose(m: int, k: int) -> int:
    return comb(m + k - 1, k)


def suite_lin_basis(C: Corpus):
    tasks = []
    for i, P, _ in C.q_instances():
        params = {} if P.n <= 3 else {"samples": 100, "seed": f"{C.seed}:{i}"}
        tasks.append(Task(i, "lin-basis-basis", {"qmatroid": _qfile(P)}, params))
    return tasks


def suite_uniform_closure(C: Corpus):
    fixed = ["fp(ds(U11,U12),U11)", "U23", "ds(ds(U11,U12),U11)"]
    rng = C.rng("closure")
    trees = [t for t in fixed if tree_dim(parse_tree(t)) <= C.max_dim]
    trees += [random_tree(rng, min(6, C.max_dim)) for _ in range(3)]
    return [Task(f"tree{j}", "uniform-closure", {}, {"tree": t}) for j, t in enumerate(trees)]


@dataclass(frozen=True)
class Suite:
    name: str
    build: Callable
    summary: str
    probe: bool = False


SUITES = {
    s.name: s
    for s in (
        Suite("projection-example", suite_projection, "block projections of <e1+e3+e6> in GF(2)^2+GF(2)^2+GF(2)^2"),
        Suite("noncoordinate-example", suite_noncoordinate, "three complementary cyclic flats in GF(2)^6"),
        Suite("embedding", suite_embedding, "lifting transversal matroids keeps the weighted cyclic flats"),
        Suite("nested", suite_nested, "nested q-matroids are transversal"),
        Suite("free-product", suite_free_product, "free product of transversal q-matroids"),
        Suite("direct-sum", suite_direct_sum, "direct sum of coordinate transversal q-matroids and its cyclic flats"),
        Suite("axioms", suite_axioms, "rank axioms of every corpus object"),
        Suite("oracles", suite_oracles, "fast paths against literal definitions"),
        Suite("lin-basis-basis", suite_lin_basis, "every linear basis contains one of a basis"),
        Suite("uniform-closure", suite_uniform_closure, "operation trees of uniform q-matroids"),
        Suite("conjecture-probe", suite_probe, "direct sums with non-coordinate factors", probe=True),
    )
}


# ------------------------------------------------------------------ reports


@dataclass
class VerificationReport:
    suite: str
    instances: int = 0
    passes: int = 0
    failures: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    claims: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    elapsed_ms: int | None = None
    probe: bool = False
    suites: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        if self.probe or self.suites and any(s.probe for s in self.suites):
            return "counterexample" if self.findings else ("evidence" if self.probe else "pass")
        return "pass"

    @property
    def exit_code(self) -> int:
        if self.failures:
            return 1
        return 3 if self.findings else 0

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "instances": self.instances,
            "passes": self.passes,
            "failures": self.failures,
            "elapsed_ms": self.elapsed_ms,
            "status": self.status,
            "claims": self.claims,
        }
        if self.probe or self.findings:
            out["findings"] = self.findings
        if self.notes:
            out["notes"] = self.notes
        if self.suites:
            out["suites"] = [s.to_dict() for s in self.suites]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for rep in self.suites or [self]:
            lines.append(
                f"{rep.suite}: {rep.status} ({rep.instances} instances, {rep.passes} checks passed, "
                f"{len(rep.failures)} failed" + (f", {len(rep.findings)} findings" if rep.probe else "") + ")"
            )
            for claim, counts in sorted(rep.claims.items()):
                mark = "ok  " if counts["failed"] == 0 else "FAIL"
                lines.append(f"  {mark} {claim}: {counts['passed']}/{counts['passed'] + counts['failed']}")
            for key, value in sorted(rep.notes.items()):
                lines.append(f"  note {key}: {value}")
            for f in rep.failures[:10] + rep.findings[:10]:
                lines.append(f"  witness {f['id']}: {f['claim']}" + (f" ({f['detail']})" if f.get("detail") else ""))
        if self.suites:
            lines.append(f"all: {self.status} ({self.instances} instances, {len(self.failures)} failures)")
        if self.elapsed_ms is not None:
            lines.append(f"elapsed: {self.elapsed_ms} ms")
        return "\n".join(lines) + "\n"


def _record(report: VerificationReport, task: Task, outcomes: list[Outcome], count: int, probe: bool):
    report.instances += count
    for o in outcomes:
        if o.info:
            bucket = report.notes.setdefault(o.claim, {})
            if o.detail:
                bucket.setdefault("observations", []).append(f"{task.id}: {o.detail}")
            else:
                key = "agrees" if o.ok else "disagrees"
                bucket[key] = bucket.get(key, 0) + 1
            continue
        counts = report.claims.setdefault(o.claim, {"passed": 0, "failed": 0})
        if o.ok:
            counts["passed"] += o.count
            report.passes += o.count
            continue
        counts["failed"] += 1
        witness = task.witness(report.suite)
        if o.replay:
            witness.update(o.replay)
        entry = {"id": task.id, "claim": o.claim, "detail": o.detail, "witness": witness}
        finding = probe and o.claim != "check completed"
        (report.findings if finding else report.failures).append(entry)


def run_suite(name: str, corpus: Corpus | None = None, jobs: int = 1, timing: bool = False) -> VerificationReport:
    """Run one suite (or ``all``) and assemble its report."""
    corpus = corpus or Corpus()
    start = time.perf_counter()
    if name == "all":
        report = VerificationReport("all")
        for sub in SUITES:
            rep = run_suite(sub, corpus, jobs, timing)
            report.suites.append(rep)
            report.instances += rep.instances
            report.passes += rep.passes
            report.failures += [dict(f, id=f"{sub}/{f['id']}") for f in rep.failures]
            report.findings += [dict(f, id=f"{sub}/{f['id']}") for f in rep.findings]
    else:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        suite = SUITES[name]
        tasks = suite.build(corpus)
        report = VerificationReport(name, probe=suite.probe)
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
        else:
            results = [run_task(t) for t in tasks]
        for task, (outcomes, count) in zip(tasks, results):
            _record(report, task, outcomes, count, suite.probe)
        _summarize_notes(report)
    if timing:
        report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


def _summarize_notes(report: VerificationReport) -> None:
    for bucket in report.notes.values():
        obs = bucket.get("observations")
        if obs and len(obs) > 20:
            bucket["observations"] = obs[:20] + [f"... {len(obs) - 20} more"]


def write_witnesses(report: VerificationReport, directory: str | Path) -> list[Path]:
    """Write every failure and finding as a replayable JSON file."""
    directory = Path(directory)
    entries = [("failure", f) for f in report.failures] + [("finding", f) for f in report.findings]
    paths = []
    if entries:
        directory.mkdir(parents=True, exist_ok=True)
    for j, (kind, f) in enumerate(entries):
        payload = dict(f["witness"], kind=kind, claim=f["claim"], detail=f.get("detail", ""))
        stem = re.sub(r"[^A-Za-z0-9_.-]+", "_", f"{payload['suite']}-{f['id']}")[:80]
        path = directory / f"{j:03d}-{stem}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def replay(path: str | Path) -> VerificationReport:
    """Re-run a witness file.  The claim that failed (or was found) is evaluated again."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    task = Task(payload.get("id", "replay"), payload["check"], payload.get("files", {}), payload.get("params", {}))
    probe = payload.get("kind") == "finding"
    report = VerificationReport(f"replay:{payload.get('suite', '?')}", probe=probe)
    outcomes, count = run_task(task)
    _record(report, task, outcomes, count, probe)
    return report


__all__ = [
    "CACHE_ENV",
    "CHECKS",
    "NONCOORDINATE_EXAMPLE",
    "SUITES",
    "Outcome",
    "Task",
    "VerificationReport",
    "cache_dir",
    "cached_transversal_qmatroid",
    "evaluate_tree",
    "parse_tree",
    "replay",
    "run_suite",
    "run_task",
    "write_witnesses",
]
