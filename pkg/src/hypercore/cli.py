"""Command-line front end.

    hypercore core   --input toy.hg --mode asap -k 2 -g 2 -p 0.7 [--report run.json]
    hypercore sweep  --input toy.hg --vary p --values 0.2,0.4,0.6 -k 2 -g 2
    hypercore bench  --sizes 1000,2000,4000 --repeats 3
    hypercore verify --input toy.hg -k 2 -g 2 -p 0.7
    hypercore gen    --nodes 1000 --edges 2000 --output g.hg

Exit status: 0 ok, 1 internal invariant breach or verification failure,
2 bad parameters, 3 unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import re
import statistics
import sys
import time
from dataclasses import fields
from pathlib import Path

from . import __version__, _accel
from .errors import FormatError, InvariantError, ParameterError
from .generate import GenConfig, default_seed, gen_hypergraph, gen_hypergraph_text
from .hypergraph import check_params, dumps_hypergraph, load_hypergraph
from .kgcore import kg_core
from .oracle import compare, minimize
from .peel import ALGORITHMS
from .report import Instrumentation, RunReport

log = logging.getLogger("hypercore")

EXIT_INVARIANT = 1
EXIT_PARAM = 2
EXIT_PARSE = 3

SWEEP_COLUMNS = [
    "algo", "vary", "value", "k", "g", "p", "nodes", "strong_edges",
    "gnbr_calls", "gnbr_calls_kg", "gnbr_calls_post", "iterations", "wall_time",
]
BENCH_COLUMNS = [
    "size", "nodes", "hyperedges", "algo", "k", "g", "p", "core_nodes", "core_edges",
    "gnbr_calls", "gnbr_calls_kg", "gnbr_calls_post", "iterations", "early_removal_share",
    "median_wall_time", "repeats",
]


def natural_key(label: str):
    return [(0, int(tok), "") if tok.isdigit() else (1, 0, tok) for tok in re.split(r"(\d+)", label) if tok]


def _read_input(path):
    try:
        return load_hypergraph(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def run_kg(hg, k, g):
    counter = Instrumentation()
    t0 = time.perf_counter()
    res = kg_core(hg, k, g, counter=counter)
    elapsed = time.perf_counter() - t0
    n = len(res.alive)
    report = RunReport("kg", k, g, None, gnbr_calls_kg=counter.calls["kg"], kg_core_nodes=n,
                       result_nodes=n, wall_time=elapsed, kg_time=elapsed)
    return res.alive, report


def run_algo(hg, algo, k, g, p, debug_sound=False, exact_seed=False):
    if algo == "kg":
        return run_kg(hg, k, g)
    if p is None:
        raise ParameterError(f"-p is required for --mode {algo}")
    if algo == "asap":
        res, report = ALGORITHMS[algo](hg, k, g, p, debug_sound=debug_sound, exact_seed=exact_seed)
    elif algo == "npa":
        res, report = ALGORITHMS[algo](hg, k, g, p)
    else:
        raise ParameterError(f"unknown algorithm {algo!r}")
    if debug_sound and (report.bound_violations or report.exactness_violations):
        raise InvariantError(
            f"pruning bound violations: {report.bound_violations[:5]} "
            f"exactness violations: {report.exactness_violations[:5]}"
        )
    return res.nodes, report


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_core(args) -> int:
    check_params(args.k, args.g, args.p)
    hg = _read_input(args.input)
    nodes, report = run_algo(hg, args.mode, args.k, args.g, args.p, args.debug_sound, args.exact_seed)
    out = sys.stdout
    for label in sorted((hg.label(v) for v in nodes), key=natural_key):
        out.write(label + "\n")
    if args.report:
        Path(args.report).write_text(report.to_json(timing=not args.no_timing), encoding="utf-8")
    return 0


def _sweep_rows(hg, vary, values, k, g, p, algos):
    rows = []
    for value in values:
        kk, gg, pp = k, g, p
        if vary == "k":
            kk = int(value)
        elif vary == "g":
            gg = int(value)
        else:
            pp = value
        check_params(kk, gg, pp)
        for algo in algos:
            _, rep = run_algo(hg, algo, kk, gg, pp)
            rows.append({
                "algo": algo, "vary": vary, "value": value, "k": kk, "g": gg, "p": rep.p,
                "nodes": rep.result_nodes, "strong_edges": rep.result_edges,
                "gnbr_calls": rep.gnbr_calls, "gnbr_calls_kg": rep.gnbr_calls_kg,
                "gnbr_calls_post": rep.gnbr_calls_post, "iterations": rep.iterations,
                "wall_time": f"{rep.wall_time:.6f}",
            })
    return rows


def _write_csv(rows, columns, dest):
    if dest in (None, "-"):
        fh = sys.stdout
        close = False
    else:
        fh = open(dest, "w", encoding="utf-8", newline="")
        close = True
    try:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if close:
            fh.close()


def _algos(text):
    algos = [a.strip() for a in text.split(",") if a.strip()]
    for a in algos:
        if a not in ("kg", "npa", "asap"):
            raise ParameterError(f"unknown algorithm {a!r}")
    return algos


def cmd_sweep(args) -> int:
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ParameterError("--values is empty")
    if args.vary == "p":
        for v in values:
            check_params(args.k, args.g, v)
    else:
        check_params(args.k, args.g, args.p)
        for v in values:
            if not v.isdigit():
                raise ParameterError(f"--vary {args.vary} expects positive integers, got {v!r}")
    algos = _algos(args.algos)
    hg = _read_input(args.input)
    _accel.warmup()
    _write_csv(_sweep_rows(hg, args.vary, values, args.k, args.g, args.p, algos), SWEEP_COLUMNS, args.output)
    return 0


def parse_gen_config(text, size, seed) -> GenConfig:
    """``text`` is a JSON file path or inline ``key=value,...``; node_count
    comes from ``size`` and edge_count from ``edge_ratio`` (default 2)."""
    opts = {}
    if text:
        path = Path(text)
        if path.exists():
            opts = json.loads(path.read_text(encoding="utf-8"))
        else:
            for item in text.split(","):
                if not item.strip():
                    continue
                key, _, value = item.partition("=")
                opts[key.strip()] = json.loads(value)
    known = {f.name for f in fields(GenConfig)} | {"edge_ratio"}
    unknown = set(opts) - known
    if unknown:
        raise ParameterError(f"unknown generator option(s): {sorted(unknown)}")
    ratio = opts.pop("edge_ratio", 2.0)
    opts.setdefault("edge_count", int(round(ratio * size)))
    opts["node_count"] = size
    opts.setdefault("seed", seed)
    return GenConfig(**opts).validate()


def cmd_bench(args) -> int:
    check_params(args.k, args.g, args.p)
    algos = _algos(args.algos)
    sizes = _int_list(args.sizes)
    if not sizes or args.repeats < 1:
        raise ParameterError("--sizes must be non-empty and --repeats >= 1")
    seed = default_seed() if args.seed is None else args.seed
    _accel.warmup()
    rows = []
    status = 0
    for size in sizes:
        cfg = parse_gen_config(args.gen_config, size, seed)
        hg = gen_hypergraph(cfg)
        results = {}
        for algo in algos:
            times = []
            for _ in range(args.repeats):
                nodes, rep = run_algo(hg, algo, args.k, args.g, args.p)
                times.append(rep.wall_time)
            results[algo] = (nodes, rep)
            rows.append({
                "size": size, "nodes": hg.node_count, "hyperedges": hg.edge_count, "algo": algo,
                "k": args.k, "g": args.g, "p": rep.p, "core_nodes": rep.result_nodes,
                "core_edges": rep.result_edges, "gnbr_calls": rep.gnbr_calls,
                "gnbr_calls_kg": rep.gnbr_calls_kg, "gnbr_calls_post": rep.gnbr_calls_post,
                "iterations": rep.iterations, "early_removal_share": f"{rep.removal_share(3):.4f}",
                "median_wall_time": f"{statistics.median(times):.6f}", "repeats": args.repeats,
            })
        if "npa" in results and "asap" in results:
            (n_nodes, n_rep), (a_nodes, a_rep) = results["npa"], results["asap"]
            problem = None
            if n_nodes != a_nodes:
                problem = "npa and asap returned different cores"
            elif a_rep.gnbr_calls > n_rep.gnbr_calls:
                problem = f"asap made more g-neighbour calls ({a_rep.gnbr_calls} > {n_rep.gnbr_calls})"
            if problem:
                status = EXIT_INVARIANT
                dump = Path(args.dump_dir or ".") / f"bench_violation_{size}.hg"
                dump.write_text(dumps_hypergraph(hg), encoding="utf-8")
                print(f"error: size {size}: {problem}; instance written to {dump}", file=sys.stderr)
            else:
                saved = n_rep.gnbr_calls_post - a_rep.gnbr_calls_post
                share = saved / n_rep.gnbr_calls_post if n_rep.gnbr_calls_post else 0.0
                print(
                    f"size {size}: post-phase g-neighbour calls npa={n_rep.gnbr_calls_post} "
                    f"asap={a_rep.gnbr_calls_post} (-{share:.1%}); "
                    f"removals in first 3 iterations {n_rep.removal_share(3):.1%}",
                    file=sys.stderr,
                )
    _write_csv(rows, BENCH_COLUMNS, args.output)
    return status


def _grid(args):
    if args.grid:
        return [(k, g, p) for k in (1, 2, 3, 4) for g in (1, 2, 3) for p in ("0", "0.25", "0.5", "0.75", "1")]
    if args.p is None:
        raise ParameterError("verify needs -p or --grid")
    check_params(args.k, args.g, args.p)
    return [(args.k, args.g, args.p)]


def cmd_verify(args) -> int:
    cells = _grid(args)
    hg = _read_input(args.input)
    for k, g, p in cells:
        problem = compare(hg, k, g, p)
        if problem is None:
            continue
        small = minimize(hg, lambda h: compare(h, k, g, p) is not None)
        text = dumps_hypergraph(small)
        print(f"MISMATCH k={k} g={g} p={p}: {problem}", file=sys.stderr)
        print(f"# minimized counterexample ({small.edge_count} hyperedges)", file=sys.stderr)
        sys.stderr.write(text)
        if args.dump:
            Path(args.dump).write_text(text, encoding="utf-8")
        return EXIT_INVARIANT
    print(f"ok: oracle, npa and asap agree on {len(cells)} parameter cell(s)")
    return 0


def cmd_gen(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    cfg = GenConfig(args.nodes, args.edges, args.min_card, args.max_card, args.skew, seed).validate()
    text = gen_hypergraph_text(cfg)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercore", description="(k,g)- and (k,g,p)-cores of hypergraphs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def kgp(p, k=2, g=2, frac=None):
        p.add_argument("-k", type=int, default=k)
        p.add_argument("-g", type=int, default=g)
        p.add_argument("-p", type=str, default=frac, help="fraction threshold in [0,1]")

    core = sub.add_parser("core", help="compute one core and print its node labels")
    core.add_argument("--input", required=True)
    core.add_argument("--mode", choices=("kg", "npa", "asap"), default="asap")
    kgp(core)
    core.add_argument("--report", help="write the run report as JSON here")
    core.add_argument("--no-timing", action="store_true", help="omit timing fields from the JSON report")
    core.add_argument("--debug-sound", action="store_true", help="check every asap bound against brute force")
    core.add_argument("--exact-seed", action="store_true", help="seed asap tables with exact histograms")
    core.set_defaults(func=cmd_core)

    sweep = sub.add_parser("sweep", help="vary one of k, g, p and emit CSV")
    sweep.add_argument("--input", required=True)
    sweep.add_argument("--vary", choices=("k", "g", "p"), required=True)
    sweep.add_argument("--values", required=True, help="comma-separated list")
    kgp(sweep, frac="0.5")
    sweep.add_argument("--algos", default="npa,asap")
    sweep.add_argument("--output", default="-")
    sweep.set_defaults(func=cmd_sweep)

    bench = sub.add_parser("bench", help="run npa/asap on generated hypergraphs of several sizes")
    bench.add_argument("--sizes", default="1000,2000,4000")
    bench.add_argument("--algos", default="npa,asap")
    bench.add_argument("--gen-config", default=None, help="JSON file or inline key=value,... (edge_ratio, min_card, max_card, skew)")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--seed", type=int, default=None, help="defaults to $HYPERCORE_SEED or 0")
    kgp(bench, k=5, g=2, frac="0.6")
    bench.add_argument("--output", default="-")
    bench.add_argument("--dump-dir", default=None)
    bench.set_defaults(func=cmd_bench)

    verify = sub.add_parser("verify", help="differential check: oracle vs npa vs asap")
    verify.add_argument("--input", required=True)
    kgp(verify)
    verify.add_argument("--grid", action="store_true", help="check k in 1..4, g in 1..3, p in {0,.25,.5,.75,1}")
    verify.add_argument("--dump", help="write the minimized counterexample here")
    verify.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="emit a synthetic hypergraph file")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--edges", type=int, required=True)
    gen.add_argument("--min-card", type=int, default=2)
    gen.add_argument("--max-card", type=int, default=10)
    gen.add_argument("--skew", type=float, default=1.0)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--output", default="-")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
