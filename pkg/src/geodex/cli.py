"""Command-line entry point: ``geodex <command> [options]``.

Exit codes: 0 success, 1 invalid input digraph or a digraph that is not of
excess one, 2 usage errors (bad flags, malformed ranges, missing files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .arithmetic import moore_bound
from .automorphism import (
    PermutationVector,
    classify_outlier_structure,
    permutation_vector,
    VertexPermutation,
)
from .digraph import (
    VertexType,
    excess_profile,
    load_digraph,
    outlier_map,
    store_digraph,
    vertex_type,
    verify_path_identity,
)
from .errors import CheckpointError, DigraphFormatError, NotAutomorphism, NotExcessOne
from .feasibility import (
    charpoly_JminusP,
    complement_charpoly,
    degree3_nonexistence,
    k2_charpoly,
    k2_enumerate_cases,
    k2_type_counts,
    scan_type1_divisibility,
    scan_vt_feasible,
    type2_forced,
)
from .report import to_dict, to_plain
from .search import SearchConfig, search_excess_one


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive), ``"a,b,c"`` or a mix such as ``"3,5..7"``."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..")
                lo_i, hi_i = int(lo), int(hi)
                if hi_i < lo_i:
                    raise argparse.ArgumentTypeError(f"empty range {part!r}")
                values.extend(range(lo_i, hi_i + 1))
            else:
                values.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed range {text!r}") from None
    return sorted(set(values))


def _pv(text: str) -> PermutationVector:
    try:
        return PermutationVector.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed permutation vector {text!r}") from None


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text()


def _emit(args, plain: str, machine: dict) -> None:
    if args.format == "machine":
        print(json.dumps(machine))
    else:
        print(plain)


def _bool(v: bool) -> str:
    return "true" if v else "false"


def cmd_moore(args) -> int:
    m = moore_bound(args.d, args.k)
    _emit(args, str(m), {"d": args.d, "k": args.k, "moore": m})
    return 0


def cmd_check(args) -> int:
    g = load_digraph(_read(args.file))
    prof = excess_profile(g, args.d, args.k)
    facts = {
        "n": prof.n,
        "d": prof.d,
        "k": prof.k,
        "moore": prof.moore,
        "excess": prof.excess,
        "diregular": prof.diregular,
        "geodetic": prof.geodetic,
        "excess_one": prof.is_excess_one,
    }
    plain = " ".join(f"{k}={_bool(v) if isinstance(v, bool) else v}" for k, v in facts.items())
    _emit(args, plain, facts)
    return 0 if prof.is_excess_one else 1


def cmd_outlier(args) -> int:
    g = load_digraph(_read(args.file))
    o = outlier_map(g, args.k)
    perm = VertexPermutation(o.o)
    pv = permutation_vector(perm)
    structure = classify_outlier_structure(perm, args.k)
    types = [vertex_type(g, args.k, o, u) for u in range(g.n)]
    facts = {
        "outlier": list(o.o),
        "pv": pv.serialize(),
        "structure": structure.tag.value,
        "index": structure.index,
        "path_identity": verify_path_identity(g, args.k, o),
        "type_i": sum(t is VertexType.TYPE_I for t in types),
        "type_ii": sum(t is VertexType.TYPE_II for t in types),
    }
    plain = "\n".join([
        "outlier " + " ".join(map(str, o.o)),
        f"pv [{facts['pv']}]",
        f"structure {structure}",
        f"path_identity {_bool(facts['path_identity'])}",
        f"type_i={facts['type_i']} type_ii={facts['type_ii']}",
    ])
    _emit(args, plain, facts)
    return 0


def _scan_output(args, pairs) -> int:
    by_d: dict[int, list[int]] = {}
    for d, k in pairs:
        by_d.setdefault(d, []).append(k)
    for d, ks in by_d.items():
        _emit(args, f"d={d} k=" + ",".join(map(str, ks)), {"d": d, "k": ks})
    return 0


def cmd_scan_div(args) -> int:
    return _scan_output(args, scan_type1_divisibility(args.d, args.k, args.workers))


def cmd_scan_vt(args) -> int:
    return _scan_output(args, scan_vt_feasible(args.d, args.k, args.workers))


def cmd_type2(args) -> int:
    for d in args.d:
        for k in args.k:
            hits = type2_forced(d, k)
            _emit(args, f"d={d} k={k} forced={','.join(hits) or 'none'}", {"d": d, "k": k, "forced": hits})
    return 0


def _report(args, report) -> None:
    _emit(args, to_plain(report), to_dict(report))


def cmd_degree3(args) -> int:
    for k in args.k:
        report = degree3_nonexistence(k)
        if args.all or not report.feasible:
            _report(args, report)
    return 0


def cmd_spectrum(args) -> int:
    pv = args.pv
    if args.k is None:
        s = complement_charpoly(pv)
        _emit(args, f"n={pv.total} pv=[{pv.serialize()}] J-P charpoly {s}",
              {"n": pv.total, "pv": pv.serialize(), "spectrum": [[p.serialize(), m] for p, m in s.factors]})
        return 0
    if args.d is None:
        raise UsageError("spectrum needs -d together with -k")
    s = charpoly_JminusP(args.d, args.k, pv)
    _emit(args, f"J-P charpoly {s}", {"spectrum": [[p.serialize(), m] for p, m in s.factors]})
    if args.k == 2:
        report = k2_charpoly(args.d, pv)
        if report.feasible:
            report.alpha_beta = k2_type_counts(args.d, report.spectrum)
        _report(args, report)
    return 0


def cmd_k2_cases(args) -> int:
    for d in args.d:
        for report in k2_enumerate_cases(d):
            _report(args, report)
    return 0


def cmd_search(args) -> int:
    cfg = SearchConfig(
        d=args.d,
        k=args.k,
        node_budget=args.budget,
        workers=args.workers,
        checkpoint=args.checkpoint,
        common_out_rule=not args.no_common_out,
        transposition_rule=not args.no_transposition,
        prefix_depth=args.prefix_depth,
    )
    result = search_excess_one(cfg)
    if result.exhausted:
        status = "exhausted" if not result.theorem_dependent else "exhausted (conditional on the degree-3 common-out rule)"
    else:
        status = "budget exceeded, no proof of non-existence"
    facts = {
        "d": args.d,
        "k": args.k,
        "order": cfg.order,
        "exhausted": result.exhausted,
        "theorem_dependent": result.theorem_dependent,
        "found": [store_digraph(g) for g in result.found],
        "nodes": result.nodes,
    }
    lines = [f"d={args.d} k={args.k} order={cfg.order}: {status}",
             f"  nodes={result.nodes} found={len(result.found)} time={result.wall_time:.2f}s"]
    for g in result.found:
        lines.append(store_digraph(g).rstrip("\n"))
    _emit(args, "\n".join(lines), facts)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geodex", description="Digraphs of excess one: checks, scans and search.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "machine"), default="plain")
    common.add_argument("--workers", type=int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moore", parents=[common], help="print the Moore bound M(d,k)")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_moore)

    p = sub.add_parser("check", parents=[common], help="excess profile of a digraph file")
    p.add_argument("-f", "--file", required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("outlier", parents=[common], help="outlier map and its cycle structure")
    p.add_argument("-f", "--file", required=True)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_outlier)

    for name, func, helptext in (
        ("scan-div", cmd_scan_div, "(k+1) | d(M(d,k)+1) scan"),
        ("scan-vt", cmd_scan_vt, "vertex-transitive divisibility scan"),
        ("type2", cmd_type2, "conditions forcing a Type II vertex"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("-d", type=parse_range, required=True)
        p.add_argument("-k", type=parse_range, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("degree3", parents=[common], help="arithmetic exclusion of (3,k;+1)-digraphs")
    p.add_argument("-k", type=parse_range, required=True)
    p.add_argument("--all", action="store_true", help="also print values of k that are not excluded")
    p.set_defaults(func=cmd_degree3)

    p = sub.add_parser("spectrum", parents=[common], help="char poly of J-P (and the k=2 factorisation)")
    p.add_argument("--pv", type=_pv, required=True, help='cycle census, e.g. "2:1 4:14"')
    p.add_argument("-d", type=int)
    p.add_argument("-k", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("k2-cases", parents=[common], help="all k=2 outlier cases for each d")
    p.add_argument("-d", type=parse_range, required=True)
    p.set_defaults(func=cmd_k2_cases)

    p = sub.add_parser("search", parents=[common], help="exhaustive search for (d,k;+1)-digraphs")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--budget", type=int, help="node budget")
    p.add_argument("--checkpoint", help="checkpoint file (resumed if present)")
    p.add_argument("--prefix-depth", type=int)
    p.add_argument("--no-common-out", action="store_true", help="disable the degree-3 common-out rule")
    p.add_argument("--no-transposition", action="store_true", help="disable the equal-neighbourhood rule")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"geodex: error: {exc}", file=sys.stderr)
        return 2
    except (DigraphFormatError, NotExcessOne, NotAutomorphism) as exc:
        print(f"geodex: invalid digraph: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, CheckpointError) as exc:
        print(f"geodex: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
