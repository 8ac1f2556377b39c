"""Command-line interface: check, oracle, divisions, transform, dual, verify.

Exit codes: 0 yes/success, 1 no/invalid, 2 usage or input error, 3 unknown
(budget exhausted). The HIMM_BUDGET environment variable sets the default
search budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import hypergraph as hg
from .divisions import division_set
from .engine import (
    decide_dual_immersion,
    decide_immersion,
    immersion_oracle,
    immersion_violations,
    witness_from_obj,
    witness_to_obj,
)
from .errors import HimmError
from .labeled import (
    ROLE_VERTEX,
    Params,
    default_params,
    densify,
    graph_to_json,
    m_factor_graph,
    to_dot,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3


def _load(path: str) -> hg.Hypergraph:
    return hg.from_json(Path(path).read_text())


def _env_budget() -> int | None:
    raw = os.environ.get("HIMM_BUDGET")
    return int(raw) if raw else None


def _params(h, g, args) -> Params:
    base = default_params(h, g, args.mode)
    m = args.m if args.m is not None else base.M
    ell = args.l if args.l is not None else base.L
    return Params(M=m, L=ell, mode=args.mode)


def _decision_obj(d) -> dict:
    return {
        "answer": d.answer,
        "witness": witness_to_obj(d.witness) if d.witness else None,
        "stats": d.stats,
    }


def _emit_decision(d, args) -> int:
    print(json.dumps(_decision_obj(d), indent=2, sort_keys=True))
    if getattr(args, "witness", None) and d.witness:
        Path(args.witness).write_text(
            json.dumps(witness_to_obj(d.witness), indent=2, sort_keys=True) + "\n")
    return {"yes": EXIT_YES, "no": EXIT_NO, "unknown": EXIT_UNKNOWN}[d.answer]


def cmd_check(args) -> int:
    h = _load(args.guest)
    g = _load(args.host)
    budget = args.budget if args.budget is not None else _env_budget()
    if args.method in ("pipeline", "both"):
        d = decide_immersion(h, g, _params(h, g, args), budget, args.star_only)
    else:
        d = immersion_oracle(h, g, budget)
    if args.method == "both":
        o = immersion_oracle(h, g, budget)
        if "unknown" not in (d.answer, o.answer) and d.answer != o.answer:
            print(
                f"method disagreement: pipeline={d.answer} oracle={o.answer}",
                file=sys.stderr)
            return EXIT_ERROR
    return _emit_decision(d, args)


def cmd_oracle(args) -> int:
    h = _load(args.guest)
    g = _load(args.host)
    budget = args.budget if args.budget is not None else _env_budget()
    return _emit_decision(immersion_oracle(h, g, budget), args)


def cmd_dual(args) -> int:
    h = _load(args.guest)
    g = _load(args.host)
    budget = args.budget if args.budget is not None else _env_budget()
    d = decide_dual_immersion(h, g, None, budget)
    return _emit_decision(d, args)


def cmd_divisions(args) -> int:
    h = _load(args.guest)
    ds = division_set(h, star_only=args.star_only)
    if args.count_only:
        print(len(ds.members))
        return EXIT_YES
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, member in enumerate(ds.members):
        stem = outdir / f"division{i:03d}"
        stem.with_suffix(".json").write_text(graph_to_json(member.graph))
        stem.with_suffix(".dot").write_text(to_dot(member.graph, f"division{i}"))
        print(stem.with_suffix(".json"))
    return EXIT_YES


def cmd_transform(args) -> int:
    g = _load(args.host)
    if args.dual:
        res = hg.transpose(g)
        if res.dropped_vertices:
            print(f"dropped degree-0 vertices: {list(res.dropped_vertices)}",
                  file=sys.stderr)
        print(hg.to_json(res.hypergraph), end="")
        return EXIT_YES
    m = args.m_factor if args.m_factor is not None else 1
    x = m_factor_graph(g, m)
    expect = m * len(g.vertices) + len(g.edges)
    print(f"nodes={len(x.nodes)} expected M|V|+|E|={expect}", file=sys.stderr)
    if args.densify is not None:
        targets = [n.name for n in x.nodes if n.role == ROLE_VERTEX and n.dup == 1]
        x = densify(x, targets, args.densify)
        expect += (args.densify - 1) * len(g.vertices)
        print(f"densified nodes={len(x.nodes)} expected {expect}", file=sys.stderr)
    print(graph_to_json(x), end="")
    if args.dot:
        Path(args.dot).write_text(to_dot(x))
    return EXIT_YES


def cmd_verify(args) -> int:
    h = _load(args.guest)
    g = _load(args.host)
    w = witness_from_obj(json.loads(Path(args.witness_file).read_text()))
    problems = immersion_violations(h, g, w)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_NO
    # replay lands on an isomorphic copy of the guest image; report the map
    print(json.dumps({"finalIsomorphism": dict(sorted(w.vertex_map.items()))},
                     indent=2, sort_keys=True))
    return EXIT_YES


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--budget", type=int, default=None,
                   help="search expansion cap (default: HIMM_BUDGET env)")
    p.add_argument("--witness", default=None, help="write witness JSON here")


def _add_params(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=["pin", "literalDensify"], default="pin")
    p.add_argument("--m", type=int, default=None, help="override duplicate count M")
    p.add_argument("--l", type=int, default=None, help="override clique size L")
    p.add_argument("--star-only", action="store_true",
                   help="restrict the division set to star divisions")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="himm",
                                 description="hypergraph immersion decision tool")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide immersion of guest in host")
    p.add_argument("guest")
    p.add_argument("host")
    p.add_argument("--method", choices=["pipeline", "oracle", "both"],
                   default="pipeline")
    _add_params(p)
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("oracle", help="decide immersion by brute force")
    p.add_argument("guest")
    p.add_argument("host")
    _add_common(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("dual", help="decide dual immersion via transposes")
    p.add_argument("guest")
    p.add_argument("host")
    _add_common(p)
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("divisions", help="enumerate the division set of a guest")
    p.add_argument("guest")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--star-only", action="store_true")
    p.add_argument("--out", default="divisions", help="output directory")
    p.set_defaults(fn=cmd_divisions)

    p = sub.add_parser("transform", help="factor graph / densify / transpose")
    p.add_argument("host")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--factor", action="store_true",
                       help="plain factor graph (same as --m-factor 1)")
    group.add_argument("--dual", action="store_true", help="emit the transpose")
    p.add_argument("--m-factor", type=int, default=None, metavar="M")
    p.add_argument("--densify", type=int, default=None, metavar="L")
    p.add_argument("--dot", default=None, help="also write DOT here")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("verify", help="check an immersion witness")
    p.add_argument("guest")
    p.add_argument("host")
    p.add_argument("witness_file")
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (HimmError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
