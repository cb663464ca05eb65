"""Command-line interface.

Exit status: 0 success, 1 verification failure, 2 usage or input error,
3 a finding from the direct-sum probe.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import Corpus
from .errors import CyclicFlatsError
from .field_linalg import format_ambient, format_subspace, full_space, parse_subspace
from .harness import SUITES, cache_dir, replay, run_suite, write_witnesses
from .io import (
    format_q_cyclic_flats,
    format_q_presentation,
    format_rank_table,
    format_set,
    format_set_cyclic_flats,
    format_set_presentation,
    load_matroid,
    load_q,
    set_from_mask_literal,
)
from .matroid import (
    cyclic_flats as set_cyclic_flats,
    direct_sum_matroid,
    direct_sum_set_presentation,
    find_avoidance_presentation,
)
from .qmatroid import (
    QMatroid,
    corresponding_matroid,
    corresponding_qmatroid,
    cyclic_flats,
    is_coordinate_qmatroid,
    restriction,
)
from .qops import q_direct_sum, q_free_product
from .qtransversal import (
    is_partial_q_transversal,
    presentation_direct_sum,
    presentation_free_product,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FINDING = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str, data: dict) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _q_data(M: QMatroid) -> dict:
    return {
        "ambient": format_ambient(M.q, M.n),
        "rank": M.rank_of_matroid,
        "ranks": [int(r) for r in M.ranks],
        "cyclic_flats": [{"subspace": format_subspace(X), "rank": r} for X, r in cyclic_flats(M).items()],
    }


def _q_table_text(M: QMatroid) -> str:
    summary = [f"# cyclic flats of {format_ambient(M.q, M.n)}, rank {M.rank_of_matroid}:"]
    summary += [f"#   {format_subspace(X)} {r}" for X, r in cyclic_flats(M).items()]
    return format_rank_table(M) + "\n".join(summary) + "\n"


def _set_z_data(n: int, Z: dict) -> dict:
    return {"ground_size": n, "cyclic_flats": [{"set": format_set(S, n), "rank": r} for S, r in Z.items()]}


# ----------------------------------------------------------------- matroid


def cmd_matroid_rank(args) -> int:
    M = load_matroid(args.file).matroid()
    S = set_from_mask_literal(args.set, M.n) if args.set else frozenset(range(1, M.n + 1))
    r = M.rank(S)
    _emit(args, str(r), {"set": format_set(S, M.n), "rank": r})
    return EXIT_OK


def cmd_matroid_cyclic_flats(args) -> int:
    M = load_matroid(args.file).matroid()
    Z = set_cyclic_flats(M)
    _emit(args, format_set_cyclic_flats(M.n, Z), _set_z_data(M.n, Z))
    return EXIT_OK


def cmd_matroid_is_transversal(args) -> int:
    M = load_matroid(args.file).matroid()
    P = find_avoidance_presentation(M)
    text = "true\n" + format_set_presentation(P) if P else "false\n"
    data = {"transversal": P is not None, "presentation": [format_set(S, M.n) for S in P.sets] if P else None}
    _emit(args, text, data)
    return EXIT_OK


def cmd_matroid_direct_sum(args) -> int:
    A, B = load_matroid(args.first), load_matroid(args.second)
    N = direct_sum_matroid(A.matroid(), B.matroid())
    Z = set_cyclic_flats(N)
    data = _set_z_data(N.n, Z)
    if A.presentation is not None and B.presentation is not None:
        P = direct_sum_set_presentation(A.presentation, B.presentation)
        data["presentation"] = [format_set(S, N.n) for S in P.sets]
        text = format_set_presentation(P)
    else:
        text = format_set_cyclic_flats(N.n, Z)
    _emit(args, text, data)
    return EXIT_OK


# ------------------------------------------------------------------- q-side


def _subspace_arg(text: str | None, M: QMatroid):
    if text is None:
        return full_space(M.q, M.n)
    return parse_subspace(text, M.q, M.n)


def cmd_q_rank(args) -> int:
    M = load_q(args.file).qmatroid()
    X = _subspace_arg(args.subspace, M)
    r = M.rank(X)
    _emit(args, str(r), {"subspace": format_subspace(X), "rank": r})
    return EXIT_OK


def cmd_q_cyclic_flats(args) -> int:
    M = load_q(args.file).qmatroid()
    _emit(args, format_q_cyclic_flats(M), _q_data(M))
    return EXIT_OK


def cmd_q_is_coordinate(args) -> int:
    M = load_q(args.file).qmatroid()
    ok = is_coordinate_qmatroid(M)
    _emit(args, "true" if ok else "false", {"coordinate": ok})
    return EXIT_OK


def cmd_q_correspond(args) -> int:
    if args.matroid:
        N = load_matroid(args.matroid).matroid()
        M = corresponding_qmatroid(N, args.q)
        _emit(args, format_q_cyclic_flats(M), _q_data(M))
        return EXIT_OK
    if not args.file:
        raise UsageError("q correspond needs --file (q-matroid) or --matroid (matroid)")
    N = corresponding_matroid(load_q(args.file).qmatroid())
    Z = set_cyclic_flats(N)
    _emit(args, format_set_cyclic_flats(N.n, Z), _set_z_data(N.n, Z))
    return EXIT_OK


def cmd_q_restrict(args) -> int:
    M = load_q(args.file).qmatroid()
    R = restriction(M, parse_subspace(args.subspace, M.q, M.n))
    _emit(args, _q_table_text(R), _q_data(R))
    return EXIT_OK


def _presentation_file(path):
    qf = load_q(path)
    if qf.presentation is None:
        raise UsageError(f"{path} is not a presentation file")
    return qf.presentation


def cmd_q_transversal_build(args) -> int:
    M = load_q(args.file).qmatroid()
    _emit(args, _q_table_text(M), _q_data(M))
    return EXIT_OK


def cmd_q_transversal_is_independent(args) -> int:
    P = _presentation_file(args.file)
    X = parse_subspace(args.subspace, P.q, P.n)
    ok = is_partial_q_transversal(X, P)
    _emit(args, "true" if ok else "false", {"subspace": format_subspace(X), "independent": ok})
    return EXIT_OK


def cmd_q_transversal_combine(args) -> int:
    P1, P2 = _presentation_file(args.first), _presentation_file(args.second)
    P = presentation_free_product(P1, P2) if args.free_product else presentation_direct_sum(P1, P2)
    data = {"ambient": format_ambient(P.q, P.n), "members": [format_subspace(X) for X in P.members]}
    _emit(args, format_q_presentation(P), data)
    return EXIT_OK


def cmd_q_op(args) -> int:
    M1, M2 = load_q(args.first).qmatroid(), load_q(args.second).qmatroid()
    M = q_direct_sum(M1, M2) if args.operation == "direct-sum" else q_free_product(M1, M2)
    _emit(args, _q_table_text(M), _q_data(M))
    return EXIT_OK


# ------------------------------------------------------------------ verify


def cmd_verify(args) -> int:
    if args.suite == "replay":
        if not args.witness:
            raise UsageError("verify replay needs a witness file")
        report = replay(args.witness)
    else:
        if args.witness:
            raise UsageError("only 'verify replay' takes a witness file")
        if args.max_dim < 1:
            raise UsageError("--max-dim must be positive")
        corpus = Corpus(seed=args.seed, max_dim=args.max_dim)
        report = run_suite(args.suite, corpus, jobs=args.jobs, timing=args.timing)
    if report.failures or report.findings:
        target = Path(args.witness_dir) if args.witness_dir else cache_dir() / "witnesses"
        paths = write_witnesses(report, target)
        print(f"wrote {len(paths)} witness file(s) to {target}", file=sys.stderr)
    if args.format == "json":
        sys.stdout.write(report.to_json() + "\n")
    else:
        sys.stdout.write(report.to_text())
    return report.exit_code


# ------------------------------------------------------------------ parser


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand."""
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "json"), default=d("text"), help="output format")
    p.add_argument("--seed", type=int, default=d(0), help="corpus seed for sampled instances")
    p.add_argument("--max-dim", type=int, default=d(6), help="largest ambient dimension used by the suites")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    parser = argparse.ArgumentParser(
        prog="cyclicflats",
        description="Matroids and q-matroids over small prime fields: cyclic flats, transversal presentations, verification.",
        parents=[_common(suppress=False)],
    )
    top = parser.add_subparsers(dest="command", required=True)

    def leaf(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    m = top.add_parser("matroid", help="matroids on [n]").add_subparsers(dest="sub", required=True)
    p = leaf(m, "rank", cmd_matroid_rank, "rank of a subset (default: the ground set)")
    p.add_argument("--file", required=True)
    p.add_argument("--set", help="bitmask string, digit i is element i")
    p = leaf(m, "cyclic-flats", cmd_matroid_cyclic_flats, "weighted cyclic flats")
    p.add_argument("--file", required=True)
    p = leaf(m, "is-transversal", cmd_matroid_is_transversal, "search for a presentation")
    p.add_argument("--file", required=True)
    p = leaf(m, "direct-sum", cmd_matroid_direct_sum, "direct sum of two matroids")
    p.add_argument("first")
    p.add_argument("second")

    q = top.add_parser("q", help="q-matroids on GF(q)^n").add_subparsers(dest="sub", required=True)
    p = leaf(q, "rank", cmd_q_rank, "rank of a subspace (default: the ambient space)")
    p.add_argument("--file", required=True)
    p.add_argument("--subspace", help="comma-separated rows, e.g. 101,011")
    p = leaf(q, "cyclic-flats", cmd_q_cyclic_flats, "weighted cyclic flats")
    p.add_argument("--file", required=True)
    p = leaf(q, "is-coordinate", cmd_q_is_coordinate, "are all cyclic flats coordinate subspaces")
    p.add_argument("--file", required=True)
    p = leaf(q, "correspond", cmd_q_correspond, "corresponding matroid, or with --matroid the corresponding q-matroid")
    p.add_argument("--file")
    p.add_argument("--matroid")
    p.add_argument("--q", type=int, default=2, help="field for --matroid")
    p = leaf(q, "restrict", cmd_q_restrict, "restriction to a subspace, in its echelon basis")
    p.add_argument("--file", required=True)
    p.add_argument("--subspace", required=True)

    t = q.add_parser("transversal", help="transversal q-matroids").add_subparsers(dest="action", required=True)
    p = leaf(t, "build", cmd_q_transversal_build, "rank table of a presentation")
    p.add_argument("--file", required=True)
    p = leaf(t, "is-independent", cmd_q_transversal_is_independent, "partial q-transversal test by basis scan")
    p.add_argument("--file", required=True)
    p.add_argument("subspace")
    p = leaf(t, "combine", cmd_q_transversal_combine, "combine two presentations")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--free-product", action="store_true")
    kind.add_argument("--direct-sum", action="store_true")
    p.add_argument("first")
    p.add_argument("second")

    o = q.add_parser("op", help="binary operations").add_subparsers(dest="operation", required=True)
    for name in ("direct-sum", "free-product"):
        p = leaf(o, name, cmd_q_op, f"{name.replace('-', ' ')} of two q-matroids")
        p.add_argument("first")
        p.add_argument("second")

    p = top.add_parser("verify", parents=[common], help="run verification suites")
    p.set_defaults(func=cmd_verify)
    p.add_argument("suite", choices=list(SUITES) + ["all", "replay"])
    p.add_argument("witness", nargs="?", help="witness file for 'replay'")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--timing", action="store_true", help="record elapsed_ms (reports are then not byte-stable)")
    p.add_argument("--witness-dir", help="where failing or probe witnesses are written")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (CyclicFlatsError, ValueError, OSError) as exc:
        print(f"cyclicflats: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
