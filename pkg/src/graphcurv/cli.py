"""Batch command-line front end.

Subcommands: ``generate``, ``curvature``, ``rewire sdrf``, ``rewire digl``,
``analyze``, and ``sensitivity``. Outputs are deterministic for fixed inputs
and seed; text outputs carry a timestamp comment line unless ``--no-header``
is passed. Exit codes: 0 success, 1 usage error, 2 data error, 3 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from typing import Callable, Sequence, TextIO

from . import metrics
from .curvature import balanced_forman_from_profile, curvature_report, neighbor_sets, profile_from_sets
from .errors import ConsistencyError, DataError, ParameterError
from .graph import (
    Graph,
    bfs_distances,
    generate,
    largest_component,
    load_edge_list,
    load_labels,
    make_undirected,
    save_edge_list,
)
from .rewiring import SdrfConfig, digl_rewire, load_weighted_edge_list, sdrf
from .sensitivity import (
    bottleneck_report,
    bottleneck_value,
    influence_score,
    jacobian_upper_bound,
    power_entry,
    squashing_check,
)
from .spectral import EXHAUSTIVE_CHEEGER_LIMIT, spectral_report

KIND_ALIASES = {
    "bf": "balanced_forman",
    "balanced_forman": "balanced_forman",
    "forman": "forman",
    "ollivier": "ollivier",
    "phi": "jost_liu",
    "jost_liu": "jost_liu",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def _float_or_inf(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise _UsageError(f"expected a number or 'inf', got {text!r}") from exc


def _header_line(no_header: bool) -> str | None:
    if no_header:
        return None
    return f"# generated {datetime.now(timezone.utc).isoformat()}"


def _write_text(path: str, no_header: bool, body: Callable[[TextIO], None]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        header = _header_line(no_header)
        if header is not None:
            fh.write(header + "\n")
        body(fh)


def _write_json(path: str, obj: dict, no_header: bool) -> None:
    if not no_header:
        obj = {"generated_at": datetime.now(timezone.utc).isoformat(), **obj}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _load_graph(path: str, args) -> Graph:
    if getattr(args, "binarize", False):
        g = load_weighted_edge_list(path).binarize()
    elif getattr(args, "undirected", False):
        g = make_undirected(load_edge_list(path, directed=True))
    else:
        g = load_edge_list(path)
    if getattr(args, "largest_component", False):
        g = largest_component(g)
    return g


def _add_load_flags(parser: argparse.ArgumentParser, binarize: bool = True) -> None:
    parser.add_argument(
        "--undirected",
        action="store_true",
        help="treat the input as directed arcs and take the symmetric closure",
    )
    parser.add_argument(
        "--largest-component",
        action="store_true",
        help="restrict to the largest connected component before analysis",
    )
    if binarize:
        parser.add_argument(
            "--binarize",
            action="store_true",
            help="input is a weighted 'u v w' list; use its unweighted support",
        )


def build_parser() -> _Parser:
    parser = _Parser(prog="graphcurv", description=__doc__)
    parser.add_argument("--no-header", action="store_true", help="omit timestamp headers")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a generated family graph")
    p_gen.add_argument("family", choices=["cycle", "complete", "grid2d", "tree", "barbell", "erdos_renyi"])
    p_gen.add_argument("params", nargs="+", type=float, help="family parameters")
    p_gen.add_argument("--out", required=True)

    p_curv = sub.add_parser("curvature", help="per-edge curvature report")
    p_curv.add_argument("graph")
    p_curv.add_argument(
        "--kinds",
        default="bf",
        help="comma list of bf,forman,ollivier,phi (default bf)",
    )
    p_curv.add_argument("--out", required=True, help=".csv or .json output path")
    p_curv.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_load_flags(p_curv)

    p_rewire = sub.add_parser("rewire", help="graph rewiring")
    rsub = p_rewire.add_subparsers(dest="method", required=True)

    p_sdrf = rsub.add_parser("sdrf", help="stochastic discrete Ricci flow")
    p_sdrf.add_argument("graph")
    p_sdrf.add_argument("--tau", type=_float_or_inf, default=math.inf)
    p_sdrf.add_argument("--max-iter", type=int, default=100)
    p_sdrf.add_argument("--c-plus", type=_float_or_inf, default=math.inf)
    p_sdrf.add_argument("--seed", type=int, default=0)
    p_sdrf.add_argument("--floor", type=float, default=0.0, help="convergence floor")
    p_sdrf.add_argument("--kind", default="bf", help="curvature kind driving the flow")
    p_sdrf.add_argument("--out", required=True)
    p_sdrf.add_argument("--trace", help="JSON-lines edit log path")
    _add_load_flags(p_sdrf, binarize=False)

    p_digl = rsub.add_parser("digl", help="personalized-PageRank diffusion rewiring")
    p_digl.add_argument("graph")
    p_digl.add_argument("--alpha", type=float, required=True)
    group = p_digl.add_mutually_exclusive_group(required=True)
    group.add_argument("--top-k", type=int)
    group.add_argument("--eps", type=float)
    p_digl.add_argument("--symmetrize", action="store_true")
    p_digl.add_argument("--out", required=True)
    _add_load_flags(p_digl, binarize=False)

    p_an = sub.add_parser("analyze", help="spectral/bottleneck report")
    p_an.add_argument("graph")
    p_an.add_argument("--against", help="second graph for comparison metrics")
    p_an.add_argument("--labels", help="node-label file for homophily")
    p_an.add_argument("--alpha", type=float, default=0.15, help="PPR alpha for diffusion checks")
    p_an.add_argument("--ppr-k", type=int, default=2, help="mass-concentration k")
    p_an.add_argument("--cheeger-limit", type=int, default=EXHAUSTIVE_CHEEGER_LIMIT)
    p_an.add_argument("--out", required=True, help="JSON report path")
    _add_load_flags(p_an)

    p_sens = sub.add_parser("sensitivity", help="propagation bounds and edge checkers")
    p_sens.add_argument("graph")
    p_sens.add_argument("--depth", type=int, default=2)
    p_sens.add_argument("--pairs", default="all", help="'all' or 'i,s' node names")
    p_sens.add_argument("--c-phi", type=float, default=1.0)
    p_sens.add_argument("--c-psi", type=float, default=1.0)
    p_sens.add_argument(
        "--delta",
        type=float,
        default=None,
        help="margin for edge checkers (default: per-edge 2 + curvature)",
    )
    p_sens.add_argument("--out", required=True, help="per-pair CSV path")
    p_sens.add_argument("--checks-out", help="per-edge checker CSV (default <out>-checks.csv)")
    p_sens.add_argument("--report", help="bottleneck JSON report (default <out>-bottleneck.json)")
    _add_load_flags(p_sens)

    return parser


# ----------------------------------------------------------------------
# Subcommand bodies


def _cmd_generate(args) -> int:
    g = generate(args.family, *args.params)
    _write_text(args.out, args.no_header, lambda fh: save_edge_list(g, fh))
    return 0


def _parse_kinds(text: str) -> tuple[str, ...]:
    kinds = []
    for token in text.split(","):
        token = token.strip()
        if token not in KIND_ALIASES:
            raise _UsageError(f"--kinds: unknown curvature kind {token!r}")
        kind = KIND_ALIASES[token]
        if kind not in kinds:
            kinds.append(kind)
    if not kinds:
        raise _UsageError("--kinds: no kinds given")
    return tuple(kinds)


def _cmd_curvature(args) -> int:
    g = _load_graph(args.graph, args)
    kinds = _parse_kinds(args.kinds)
    report = curvature_report(g, kinds, jobs=max(1, args.jobs))
    if args.out.endswith(".json"):
        _write_json(args.out, report.to_json_obj(), args.no_header)
    else:
        _write_text(args.out, args.no_header, lambda fh: report.to_csv(fh, g.name_of))
    return 0


def _cmd_sdrf(args) -> int:
    g = _load_graph(args.graph, args)
    kind = KIND_ALIASES.get(args.kind)
    if kind is None or kind == "ollivier":
        raise _UsageError(f"--kind: unsupported flow curvature {args.kind!r}")
    cfg = SdrfConfig(
        tau=args.tau,
        max_iterations=args.max_iter,
        c_plus=args.c_plus,
        convergence_floor=args.floor,
        seed=args.seed,
        curvature_kind=kind,
    )
    rewired, trace = sdrf(g, cfg)
    _write_text(args.out, args.no_header, lambda fh: save_edge_list(rewired, fh))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            trace.to_jsonl(fh)
    return 0


def _cmd_digl(args) -> int:
    g = _load_graph(args.graph, args)
    weighted = digl_rewire(
        g, args.alpha, top_k=args.top_k, epsilon=args.eps, symmetrize=args.symmetrize
    )
    _write_text(args.out, args.no_header, weighted.save)
    return 0


def _cmd_analyze(args) -> int:
    g = _load_graph(args.graph, args)
    adj = neighbor_sets(g)
    curvatures = [
        balanced_forman_from_profile(profile_from_sets(adj, u, v)) for u, v in g.edges()
    ]
    min_curv = min(curvatures) if curvatures else None
    report = spectral_report(
        g,
        alpha=args.alpha,
        k=args.ppr_k,
        curvature_minimum=min_curv,
        limit=args.cheeger_limit,
    )
    obj = {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "lambda1": report.lambda1,
        "cheeger": report.cheeger,
        "cheeger_method": report.method,
        "cheeger_witness": [g.name_of(i) for i in report.cheeger_witness],
        "min_balanced_forman": min_curv,
        "bottleneck_value": bottleneck_value(g),
        "bound_checks": [c.to_json_obj() for c in report.bound_checks],
    }
    labeling = load_labels(args.labels, g) if args.labels else None
    if args.against:
        other = _load_graph(args.against, args)
        comparison = metrics.compare(g, other, labeling)
        obj["comparison"] = comparison.to_json_obj()
        for line in comparison.summary_lines():
            print(line)
    elif labeling is not None:
        obj["homophily"] = metrics.homophily(g, labeling, skip_isolated=True)
    _write_json(args.out, obj, args.no_header)
    return 0


def _resolve_pair(g: Graph, text: str) -> tuple[int, int]:
    tokens = [t.strip() for t in text.split(",")]
    if len(tokens) != 2:
        raise _UsageError(f"--pairs: expected 'all' or 'i,s', got {text!r}")
    by_name = {g.name_of(i): i for i in range(g.node_count)}
    pair = []
    for tok in tokens:
        if tok not in by_name:
            raise DataError(f"--pairs: unknown node {tok!r}")
        pair.append(by_name[tok])
    return pair[0], pair[1]


def _cmd_sensitivity(args) -> int:
    g = _load_graph(args.graph, args)
    depth = args.depth
    if depth < 1:
        raise _UsageError("--depth must be at least 1")
    if args.pairs == "all":
        pairs = [(i, s) for i in range(g.node_count) for s in range(g.node_count)]
    else:
        pairs = [_resolve_pair(g, args.pairs)]

    def pair_rows(fh: TextIO) -> None:
        fh.write("i,s,distance,power_entry,jacobian_bound,influence_score\n")
        dist_cache: dict[int, list[float]] = {}
        for i, s in pairs:
            if i not in dist_cache:
                dist_cache[i] = bfs_distances(g, i)
            d = dist_cache[i][s]
            entry = power_entry(g, depth, i, s)
            bound = jacobian_upper_bound(g, depth - 1, i, s, args.c_phi, args.c_psi)
            influence = influence_score(g, depth - 1, i, s)
            d_txt = "inf" if d == math.inf else str(int(d))
            fh.write(
                f"{g.name_of(i)},{g.name_of(s)},{d_txt},{entry!r},{bound!r},{influence!r}\n"
            )

    _write_text(args.out, args.no_header, pair_rows)

    base = args.out[:-4] if args.out.endswith(".csv") else args.out
    checks_path = args.checks_out or f"{base}-checks.csv"
    report_path = args.report or f"{base}-bottleneck.json"

    adj = neighbor_sets(g)
    connected = g.is_connected()
    report = bottleneck_report(g, args.delta) if connected else None
    check_rows = []
    for idx, (u, v) in enumerate(g.edges()):
        ric = balanced_forman_from_profile(profile_from_sets(adj, u, v))
        delta = args.delta if args.delta is not None else ric + 2.0
        if report is not None:
            t3 = report.squashing_checks[idx]
            omega = report.betweenness_checks[idx]
        else:
            t3 = squashing_check(g, u, v, delta)
            omega = None
        check_rows.append((u, v, delta, ric, t3, omega))

    def checks_body(fh: TextIO) -> None:
        fh.write(
            "i,j,delta,curvature,squash_applicable,squash_passes,far_side_size,"
            "mean_power_entry,mean_upper_bound,omega_applicable,omega_passes,"
            "mean_betweenness,betweenness_lower_bound\n"
        )
        for u, v, delta, ric, t3, omega in check_rows:
            def fmt(record, key):
                if record is None or key not in record.details:
                    return ""
                return repr(record.details[key])

            omega_app = "" if omega is None else omega.applicable
            omega_pass = "" if omega is None or omega.passes is None else omega.passes
            t3_pass = "" if t3.passes is None else t3.passes
            fh.write(
                f"{g.name_of(u)},{g.name_of(v)},{delta!r},{ric!r},"
                f"{t3.applicable},{t3_pass},{int(t3.details['far_side_size'])},"
                f"{fmt(t3, 'mean_power_entry')},{fmt(t3, 'mean_upper_bound')},"
                f"{omega_app},{omega_pass},"
                f"{fmt(omega, 'mean_betweenness')},{fmt(omega, 'betweenness_lower_bound')}\n"
            )

    _write_text(checks_path, args.no_header, checks_body)

    obj: dict = {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "depth": depth,
    }
    if report is not None:
        obj["betweenness"] = {
            g.name_of(i): report.node_betweenness[i] for i in range(g.node_count)
        }
        obj["bottleneck_value"] = report.bottleneck
    else:
        obj["betweenness"] = None
        obj["bottleneck_value"] = None
    obj["edge_checks"] = [
        {
            "i": g.name_of(u),
            "j": g.name_of(v),
            "delta": delta,
            "curvature": ric,
            "squashing": {
                "conditions": t3.conditions,
                "applicable": t3.applicable,
                "passes": t3.passes,
                "details": t3.details,
            },
            "betweenness": None
            if omega is None
            else {
                "conditions": omega.conditions,
                "applicable": omega.applicable,
                "passes": omega.passes,
                "details": omega.details,
            },
        }
        for u, v, delta, ric, t3, omega in check_rows
    ]
    _write_json(report_path, obj, args.no_header)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "curvature": _cmd_curvature,
    "analyze": _cmd_analyze,
    "sensitivity": _cmd_sensitivity,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "rewire":
            handler = _cmd_sdrf if args.method == "sdrf" else _cmd_digl
        else:
            handler = _COMMANDS[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"graphcurv: usage error: {exc}", file=sys.stderr)
        return 1
    except ParameterError as exc:
        print(f"graphcurv: usage error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"graphcurv: internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except (DataError, OSError) as exc:
        print(f"graphcurv: data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
