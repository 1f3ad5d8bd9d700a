"""Command-line interface.

Exit codes: 0 success, 1 a verified negative result (failed certificate,
failed trial, refuted embedding), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetError, CertificateError, InputError, SizeRamseyError
from .experiment import ExperimentConfig, run_experiment, verify_record, write_csv
from .graph import verify_product_embedding
from .io import dumps_report, read_graph
from .necklace import DEFAULT_BUDGET_SECS, necklace_split, parse_color_string, split_violations
from .product import embed_into_product
from .ramsey.host import build_blowup_host, color_host, host_summary, write_host_coloring
from .separators import TreewidthProfile
from .treedecomp import tree_decomposition


def _emit(report: dict, output: str | None) -> None:
    text = dumps_report(report)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_decompose(args) -> int:
    g = read_graph(args.input)
    td = tree_decomposition(g, args.td_mode)
    profile = TreewidthProfile.parse(args.profile)
    degree = args.max_degree if args.max_degree is not None else max(g.max_degree, 2)
    pe = embed_into_product(g, degree, profile, s=args.s, td=td)
    report = verify_product_embedding(pe)
    out = pe.to_json()
    out["decomposition_width"] = td.width
    out["verification"] = report
    _emit(out, args.output)
    return 0 if report["pass"] else 1


def cmd_necklace(args) -> int:
    colors, k = parse_color_string(args.colors, args.k)
    split = necklace_split(colors, k, args.budget_secs)
    problems = split_violations(colors, k, split)
    out = split.to_json()
    out["k"] = k
    out["verified"] = not problems
    out["violations"] = problems
    _emit(out, args.output)
    return 0 if not problems else 1


def _host_from_args(args):
    base = read_graph(args.input)
    return build_blowup_host(base, args.m, args.p, args.seed, complete_parts=args.mode == "dense")


def cmd_host(args) -> int:
    host = _host_from_args(args)
    _emit(host_summary(host), args.output)
    return 0


def cmd_color(args) -> int:
    host = _host_from_args(args)
    color_host(host, args.k, args.strategy, args.color_seed, args.coloring)
    if args.coloring_out:
        with open(args.coloring_out, "w") as fh:
            write_host_coloring(host, fh)
    _emit(host_summary(host), args.output)
    return 0


def _config_from_args(args, trials: int) -> ExperimentConfig:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
    flags = {
        "family": args.family, "n": args.n, "max_degree": args.max_degree, "k": args.k,
        "profile": args.profile, "mode": args.mode, "p": args.p, "m": args.m,
        "c_prime": args.c_prime, "rho": args.rho, "alpha": args.alpha, "eps": args.eps,
        "mu": args.mu, "eta": args.eta, "lam": args.lam, "seed": args.seed,
        "budget_secs": args.budget_secs, "strategy": args.strategy, "width": args.width,
        "chunk": args.chunk, "input": args.input, "s": args.s, "restarts": args.restarts,
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.no_certify:
        data["certify_structure"] = False
    data["trials"] = trials if trials else data.get("trials", 1)
    return ExperimentConfig.from_json(data)


def cmd_experiment(args) -> int:
    cfg = _config_from_args(args, args.trials)
    report, times = run_experiment(cfg)
    _emit(report, args.output)
    if args.csv:
        write_csv(report, args.csv)
    if args.timing:
        Path(args.timing).write_text(json.dumps({"seconds": times}, indent=2) + "\n")
    return 0 if report["summary"]["successes"] == cfg.trials else 1


def cmd_embed(args) -> int:
    cfg = _config_from_args(args, 1)
    report, _ = run_experiment(cfg)
    row = report["trials"][0]
    if args.record and row.get("record"):
        Path(args.record).write_text(dumps_report(row["record"]))
    _emit(row, args.output)
    return 0 if row["success"] else 1


def cmd_verify(args) -> int:
    record = json.loads(Path(args.input).read_text())
    if "record" in record and "kind" not in record:
        record = record["record"]
    report = verify_record(record)
    _emit(report, args.output)
    return 0 if report["pass"] else 1


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--family", choices=["grid", "random-bounded-tw", "tree", "path", "cycle", "from-file"])
    p.add_argument("--n", type=int, help="instance size (grid side length for grids)")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--k", type=int, help="number of colors")
    p.add_argument("--profile", help="treewidth profile, e.g. const:3, sqrt:1,1, log:2")
    p.add_argument("--mode", choices=["dense", "sparse"])
    p.add_argument("--p", type=float)
    p.add_argument("--m", type=int, help="block size (default c_prime * s)")
    p.add_argument("--c-prime", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget-secs", type=float)
    p.add_argument("--strategy", choices=["random", "adversarial-majority"])
    p.add_argument("--width", type=int, help="treewidth bound for random-bounded-tw")
    p.add_argument("--chunk", type=int, help="vertices per node for path/cycle witnesses")
    p.add_argument("--input", help="graph file for the from-file family")
    p.add_argument("--s", type=int, help="override the partition bag budget")
    p.add_argument("--restarts", type=int)
    p.add_argument("--no-certify", action="store_true", help="sparse mode: skip structure density checks")
    p.add_argument("--output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sizeramsey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="embed a graph into a tree ⊠ clique product")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--profile", default="const:3")
    p.add_argument("--s", type=int)
    p.add_argument("--td-mode", choices=["heuristic", "exact"], default="heuristic")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("necklace", help="split a colored necklace with few cuts")
    p.add_argument("--colors", required=True, help="e.g. RBRB; '.' marks an uncolored bead")
    p.add_argument("--k", type=int)
    p.add_argument("--budget-secs", type=float, default=DEFAULT_BUDGET_SECS)
    p.add_argument("--output")
    p.set_defaults(func=cmd_necklace)

    for name, func in (("host", cmd_host), ("color", cmd_color)):
        p = sub.add_parser(name, help=f"build a blow-up host{' and color it' if name == 'color' else ''}")
        p.add_argument("--input", required=True, help="base graph file")
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--p", type=float, default=1.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=["dense", "sparse"], default="sparse",
                       help="dense: complete parts; sparse: independent parts")
        p.add_argument("--output")
        if name == "color":
            p.add_argument("--k", type=int, required=True)
            p.add_argument("--strategy", choices=["random", "adversarial-majority", "from-file"],
                           default="random")
            p.add_argument("--color-seed", type=int, default=0)
            p.add_argument("--coloring", help="coloring file for --strategy from-file")
            p.add_argument("--coloring-out", help="write 'u v c' lines here")
        p.set_defaults(func=func)

    p = sub.add_parser("embed", help="run one Ramsey trial and print its record")
    _experiment_flags(p)
    p.add_argument("--record", help="write the verifiable embedding record here")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("experiment", help="run seeded Ramsey trials")
    _experiment_flags(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--csv")
    p.add_argument("--timing", help="write per-trial seconds here (kept out of the report)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="re-check a product or host embedding record")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CertificateError, BudgetError, SizeRamseyError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
