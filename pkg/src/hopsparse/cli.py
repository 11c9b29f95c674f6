"""Command-line front end.

Exit codes: 0 success (and verified when ``--verify`` is given), 1 verification
failure, 2 usage or input error, 3 construction error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import derived, hopsets, verify
from .graph import GENERATOR_KINDS, GeneratorSpec, Graph, GraphError, PairSet, generate_graph, \
    load_graph, sample_pairs, save_graph
from .hopsets import EXACT, ApproxMode, Hopset
from .missing import ConstructionError, MissingSpanner, hopsets_to_missing_spanner
from .paths import greedy_spanner
from .schedule import custom_schedule, schedule_directed

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CONSTRUCT = 0, 1, 2, 3
CSV_HEADER = ["kind", "n", "p", "params", "seed", "size", "claimed_stretch", "verified", "ms"]
EXPERIMENT_KINDS = ("preserver", "reach-preserver", "undirected-preserver", "hopset", "shortcut",
                    "spanner")


class UsageError(Exception):
    pass


# -- shared helpers --------------------------------------------------------------

def _graph(args) -> Graph:
    return load_graph(args.graph, args.format, directed=not args.undirected)


def _pairs(args, g: Graph) -> PairSet:
    if args.pairs:
        rows = []
        for line in Path(args.pairs).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                u, v = line.split()[:2]
                rows.append((int(u), int(v)))
        return PairSet.of(rows, g.n)
    if args.random_pairs is None:
        raise UsageError("give --pairs FILE or --random-pairs P")
    return sample_pairs(g, args.random_pairs, args.pair_seed)


def _write(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)


def _report(args, rep: verify.VerificationReport) -> int:
    # keep stdout clean for the structure itself when it is written there
    stream = sys.stderr if args.output in (None, "-") else sys.stdout
    print(rep.to_json() if args.json else rep.to_text(), file=stream)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def _emit_result(args, g: Graph, res: derived.SubgraphResult, scope=None) -> int:
    _write(args, res.to_text())
    if not args.verify:
        return EXIT_OK
    return _report(args, verify.check_stretch(g, res, scope or verify.AllPairs()))


# -- subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.kind, args.n, args.density, (args.wmin, args.wmax), args.seed,
                         directed=not args.undirected, window=args.window, layers=args.layers)
    g = generate_graph(spec)
    if args.output in (None, "-"):
        sys.stdout.write(g.serialize())
    else:
        save_graph(g, args.output)
    return EXIT_OK


def cmd_hopset(args) -> int:
    g = _graph(args)
    mode = ApproxMode.parse(args.mode)
    if args.algo == "folklore":
        h = hopsets.folklore_exact_hopset(g, args.beta, args.seed)
    elif args.algo == "tcw":
        h = hopsets.base_tcw(g, mode)
    elif args.algo == "sublinear":
        h = hopsets.sublinear_from_superlinear(g, hopsets.BASE_TCW, args.beta, mode, args.seed)
    else:
        h = hopsets.undirected_sublinear_hopset(g, hopsets.BASE_TCW, args.beta, mode, args.seed)
    _write(args, h.to_text())
    if not args.verify:
        return EXIT_OK
    return _report(args, verify.check_hopset(g, h, args.claim or h.beta, mode))


def cmd_shortcut(args) -> int:
    g = _graph(args)
    h = hopsets.shortcut_folklore(g, args.d, args.seed)
    _write(args, h.to_text())
    if not args.verify:
        return EXIT_OK
    return _report(args, verify.check_shortcut(g, h, args.claim or h.beta))


def cmd_missing_spanner(args) -> int:
    g = _graph(args)
    mode = ApproxMode.parse(args.mode)
    if args.betas:
        sched = custom_schedule(g.n, [int(x) for x in args.betas.split(",")], mode.eps)
    else:
        sched = schedule_directed(g.n, args.p, args.a, args.b, mode.eps)
    hier = derived.build_hierarchy(g, sched, hopsets.BASE_TCW, mode, args.seed,
                                   undirected=not g.directed)
    ms = hopsets_to_missing_spanner(g, hier, sched)
    _write(args, ms.to_json() + "\n")
    if not args.verify:
        return EXIT_OK
    return _report(args, verify.check_missing_spanner(g, ms))


def cmd_preserver(args) -> int:
    g = _graph(args)
    pairs = _pairs(args, g)
    if g.directed:
        res = derived.directed_preserver_pipeline(g, pairs, eps=Fraction(args.eps), seed=args.seed)
    else:
        eps = Fraction(args.eps) or Fraction(1, 2)
        res = derived.undirected_preserver_pipeline(g, pairs, k=args.k, eps=eps, seed=args.seed)
    return _emit_result(args, g, res, verify.Pairs(pairs.pairs))


def cmd_reach_preserver(args) -> int:
    g = _graph(args)
    pairs = _pairs(args, g)
    res = derived.reachability_preserver_pipeline(g, pairs, seed=args.seed)
    return _emit_result(args, g, res, verify.Pairs(pairs.pairs))


def cmd_spanner(args) -> int:
    g = _graph(args)
    eps = Fraction(args.eps)
    if args.type == "greedy":
        keys = greedy_spanner(g, args.k)
        wm = g.weight_map
        res = derived.SubgraphResult(g.n, g.directed, {e: wm[e] for e in keys}, "spanner",
                                     Fraction(2 * args.k - 1), 0, {"k": args.k})
    elif args.type == "weighted":
        res = derived.weighted_near_additive_spanner(g, k=args.k, eps=eps, seed=args.seed)
    else:
        h = hopsets.folklore_exact_hopset(g, args.beta, args.seed)
        if args.type == "emulator":
            res = derived.emulator_from_hopset(g, h, args.k)
        else:
            res = derived.spanner_from_emulator(g, h, args.k, eps)
    return _emit_result(args, g, res)


def _sources(args, g: Graph) -> list[int]:
    if args.sources:
        return [int(x) for x in args.sources.split(",")]
    import numpy as np
    rng = np.random.default_rng(args.seed)
    return sorted(rng.choice(g.n, size=args.num_sources, replace=False).tolist())


def cmd_sourcewise(args) -> int:
    g = _graph(args)
    S = _sources(args, g)
    build = derived.sourcewise_spanner_partitioned if args.partitioned else derived.sourcewise_spanner
    res = build(g, S, args.k, Fraction(args.eps), seed=args.seed)
    return _emit_result(args, g, res, verify.Sourcewise(tuple(S)))


def cmd_slack(args) -> int:
    g = _graph(args)
    res = derived.slack_spanner(g, Fraction(args.eps), args.k, seed=args.seed)
    return _emit_result(args, g, res, verify.Slack(float(Fraction(args.eps))))


def cmd_verify(args) -> int:
    g = _graph(args)
    text = Path(args.structure).read_text()
    first = text.split("\n", 1)[0]
    if first.startswith("# hopset"):
        h = Hopset.from_text(text)
        if h.mode.kind == "reachability" and g.directed:
            rep = verify.check_shortcut(g, h, args.claim or h.beta)
        else:
            rep = verify.check_hopset(g, h, args.claim or h.beta, h.mode)
    elif first.lstrip().startswith("{"):
        rep = verify.check_missing_spanner(g, MissingSpanner.from_json(text, g))
    elif first.startswith("# {"):
        res = derived.SubgraphResult.from_text(text)
        if args.pairs or args.random_pairs is not None:
            scope = verify.Pairs(_pairs(args, g).pairs)
        elif args.sources:
            scope = verify.Sourcewise(tuple(int(x) for x in args.sources.split(",")))
        elif args.slack is not None:
            scope = verify.Slack(float(Fraction(args.slack)))
        else:
            scope = verify.AllPairs()
        rep = verify.check_stretch(g, res, scope)
    else:
        raise UsageError(f"unrecognised structure file {args.structure}")
    print(rep.to_json() if args.json else rep.to_text())
    return EXIT_OK if rep.passed else EXIT_VERIFY


# -- experiments -----------------------------------------------------------------

def _cells(cfg: dict) -> list[dict]:
    kind = cfg["kind"]
    if kind not in EXPERIMENT_KINDS:
        raise UsageError(f"unknown experiment kind {kind!r}")
    grid = {
        "n": cfg.get("n") or [],
        "p": cfg.get("p") or [0],
        "beta": cfg.get("beta") or [0],
        "k": cfg.get("k") or [0],
        "eps": cfg.get("eps") or ["0"],
        "seed": list(range(int(cfg.get("seeds", 1)))),
    }
    if not grid["n"]:
        raise UsageError("experiment grid is empty (no n values)")
    cells = []
    for n, p, beta, k, eps, seed in itertools.product(*grid.values()):
        cells.append({"kind": kind, "n": int(n), "p": int(p), "beta": int(beta), "k": int(k),
                      "eps": str(eps), "seed": seed, "graph": cfg.get("graph", "random-dag"),
                      "density": float(cfg.get("density", 0.05)),
                      "window": int(cfg.get("window", 0)), "wmax": int(cfg.get("wmax", 8))})
    return cells


def _params(cell: dict) -> str:
    keys = {"hopset": ("beta",), "shortcut": ("beta",), "spanner": ("k", "eps"),
            "undirected-preserver": ("k", "eps"), "preserver": ("eps",), "reach-preserver": ()}
    return ";".join(f"{k}={cell[k]}" for k in keys[cell["kind"]])


def run_cell(cell: dict) -> dict:
    kind = cell["kind"]
    directed = kind not in ("undirected-preserver", "spanner")
    gkind = cell["graph"] if directed else ("gnp" if cell["graph"] == "random-dag" else cell["graph"])
    g = generate_graph(GeneratorSpec(gkind, cell["n"], cell["density"], (1, cell["wmax"]),
                                     seed=cell["seed"], directed=directed, window=cell["window"]))
    eps = Fraction(cell["eps"])
    t0 = time.perf_counter()
    if kind == "hopset":
        h = hopsets.folklore_exact_hopset(g, cell["beta"], cell["seed"])
        size, stretch = len(h), "1"
        ok = verify.check_hopset(g, h, 3 * cell["beta"]).passed
    elif kind == "shortcut":
        h = hopsets.shortcut_folklore(g, cell["beta"], cell["seed"])
        size, stretch = len(h), "reach"
        ok = verify.check_shortcut(g, h, 3 * cell["beta"]).passed
    elif kind == "spanner":
        res = derived.weighted_near_additive_spanner(g, k=cell["k"] or 1, eps=eps or Fraction(1, 2),
                                                     seed=cell["seed"])
        size, stretch = len(res), f"{res.alpha}+{res.beta_add}"
        ok = verify.check_stretch(g, res).passed
    else:
        pairs = sample_pairs(g, cell["p"], cell["seed"])
        if kind == "preserver":
            res = derived.directed_preserver_pipeline(g, pairs, eps=eps, seed=cell["seed"])
        elif kind == "reach-preserver":
            res = derived.reachability_preserver_pipeline(g, pairs, seed=cell["seed"])
        else:
            res = derived.undirected_preserver_pipeline(g, pairs, k=cell["k"] or None,
                                                        eps=eps or Fraction(1, 2), seed=cell["seed"])
        size = len(res)
        stretch = "reach" if res.alpha is None else str(res.alpha)
        ok = verify.check_stretch(g, res, verify.Pairs(pairs.pairs)).passed
    ms = round((time.perf_counter() - t0) * 1000)
    return {"kind": kind, "n": cell["n"], "p": cell["p"], "params": _params(cell),
            "seed": cell["seed"], "size": size, "claimed_stretch": stretch,
            "verified": "PASS" if ok else "FAIL", "ms": ms}


def run_experiment(cfg: dict, workers: int = 1, timing: bool = True) -> list[dict]:
    cells = _cells(cfg)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(run_cell, c) for c in cells]
        rows = []
        for i, fut in enumerate(futures):
            try:
                rows.append(fut.result())
            except (GraphError, ConstructionError) as exc:
                raise type(exc)(f"cell {i} {cells[i]}: {exc}") from exc
    if not timing:
        for r in rows:
            r["ms"] = 0
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def write_plot_data(rows: list[dict], outdir: Path) -> list[Path]:
    """One two-column ``x y`` file per (kind, n, params) curve: x = p (or the
    hopbound for hopsets), y = mean size over seeds."""
    outdir.mkdir(parents=True, exist_ok=True)
    curves: dict[tuple, dict[int, list[int]]] = {}
    for r in rows:
        x = r["p"] if r["kind"] not in ("hopset", "shortcut") else int(r["params"].split("=")[1])
        curves.setdefault((r["kind"], r["n"], r["params"]), {}).setdefault(x, []).append(r["size"])
    written = []
    for (kind, n, params), pts in sorted(curves.items()):
        tag = params.replace(";", "_").replace("=", "") or "default"
        path = outdir / f"{kind}_n{n}_{tag}.dat"
        path.write_text("".join(f"{x} {sum(ys) / len(ys):g}\n" for x, ys in sorted(pts.items())))
        written.append(path)
    return written


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def cmd_experiment(args) -> int:
    cfg = {"kind": args.kind, "n": args.n, "p": args.p, "beta": args.beta, "k": args.k,
           "eps": args.eps, "seeds": args.seeds, "graph": args.graph_kind,
           "density": args.density, "window": args.window, "wmax": args.wmax}
    if cfg["kind"] is None:
        raise UsageError("experiment needs --kind")
    rows = run_experiment(cfg, args.workers, timing=not args.no_timing)
    text = rows_to_csv(rows)
    _write(args, text)
    if args.plot_dir:
        write_plot_data(rows, Path(args.plot_dir))
    return EXIT_OK if all(r["verified"] == "PASS" for r in rows) else EXIT_VERIFY


# -- parser ----------------------------------------------------------------------

def _common(sp, graph=True, out=True, verify_flag=True):
    if graph:
        sp.add_argument("--graph", "-g", required=True, help="input graph file")
        sp.add_argument("--format", default="edge-list", choices=("edge-list", "dimacs-gr"))
        sp.add_argument("--undirected", action="store_true")
    if out:
        sp.add_argument("--output", "-o", help="output file (default stdout)")
    if verify_flag:
        sp.add_argument("--verify", action="store_true", help="check the result before exiting")
    sp.add_argument("--json", action="store_true", help="JSON verification report")
    sp.add_argument("--seed", type=int, default=0)


def _pair_flags(sp):
    sp.add_argument("--pairs", help="file of 'u v' demand pairs")
    sp.add_argument("--random-pairs", type=int, help="sample P reachable pairs")
    sp.add_argument("--pair-seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopsparse", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file of defaults; command-line flags override it")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="generate a graph")
    sp.add_argument("--kind", choices=GENERATOR_KINDS, default="gnp")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--density", type=float, default=0.1)
    sp.add_argument("--wmin", type=int, default=1)
    sp.add_argument("--wmax", type=int, default=1)
    sp.add_argument("--undirected", action="store_true")
    sp.add_argument("--window", type=int, default=0)
    sp.add_argument("--layers", type=int, default=4)
    _common(sp, graph=False, verify_flag=False)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("hopset", help="build a hopset")
    _common(sp)
    sp.add_argument("--algo", choices=("folklore", "tcw", "sublinear", "undirected-sublinear"),
                    default="folklore")
    sp.add_argument("--beta", type=int, default=8)
    sp.add_argument("--mode", default="exact", help="exact | mult:EPS")
    sp.add_argument("--claim", type=int, help="hopbound to verify (default: the hopset's own claim)")
    sp.set_defaults(func=cmd_hopset)

    sp = sub.add_parser("shortcut", help="build a shortcut set")
    _common(sp)
    sp.add_argument("--d", type=int, default=8)
    sp.add_argument("--claim", type=int)
    sp.set_defaults(func=cmd_shortcut)

    sp = sub.add_parser("missing-spanner", help="hopset hierarchy to missing spanner (JSON)")
    _common(sp)
    sp.add_argument("--betas", help="comma-separated custom schedule beta_1,...,beta_l")
    sp.add_argument("--p", type=int, default=16, help="pair count used to derive the schedule")
    sp.add_argument("--a", type=float, default=2.0)
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--mode", default="exact")
    sp.set_defaults(func=cmd_missing_spanner)

    sp = sub.add_parser("preserver", help="pairwise distance preserver")
    _common(sp)
    _pair_flags(sp)
    sp.add_argument("--eps", default="0")
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_preserver)

    sp = sub.add_parser("reach-preserver", help="pairwise reachability preserver")
    _common(sp)
    _pair_flags(sp)
    sp.set_defaults(func=cmd_reach_preserver)

    sp = sub.add_parser("spanner", help="spanners and emulators")
    _common(sp)
    sp.add_argument("--type", choices=("weighted", "near-additive", "emulator", "greedy"),
                    default="weighted")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--eps", default="1/2")
    sp.add_argument("--beta", type=int, default=8)
    sp.set_defaults(func=cmd_spanner)

    sp = sub.add_parser("sourcewise", help="sourcewise spanner")
    _common(sp)
    sp.add_argument("--sources", help="comma-separated source ids")
    sp.add_argument("--num-sources", type=int, default=8)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--eps", default="1/2")
    sp.add_argument("--partitioned", action="store_true")
    sp.set_defaults(func=cmd_sourcewise)

    sp = sub.add_parser("slack", help="slack spanner")
    _common(sp)
    sp.add_argument("--eps", default="1/8")
    sp.add_argument("--k", type=int, default=2)
    sp.set_defaults(func=cmd_slack)

    sp = sub.add_parser("verify", help="verify a saved structure against a graph")
    _common(sp, out=False, verify_flag=False)
    sp.add_argument("--structure", "-s", required=True)
    sp.add_argument("--claim", type=int)
    _pair_flags(sp)
    sp.add_argument("--sources")
    sp.add_argument("--slack")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("experiment", help="size-vs-parameter sweep to CSV")
    _common(sp, graph=False, verify_flag=False)
    sp.add_argument("--kind", choices=EXPERIMENT_KINDS)
    sp.add_argument("--n", type=_int_list, default=None)
    sp.add_argument("--p", type=_int_list, default=None)
    sp.add_argument("--beta", type=_int_list, default=None)
    sp.add_argument("--k", type=_int_list, default=None)
    sp.add_argument("--eps", type=_str_list, default=None)
    sp.add_argument("--seeds", type=int, default=1)
    sp.add_argument("--graph-kind", default="random-dag", choices=GENERATOR_KINDS)
    sp.add_argument("--density", type=float, default=0.05)
    sp.add_argument("--window", type=int, default=0)
    sp.add_argument("--wmax", type=int, default=8)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--plot-dir", help="directory for two-column plot-data files")
    sp.add_argument("--no-timing", action="store_true", help="write ms=0 for byte-stable output")
    sp.set_defaults(func=cmd_experiment)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    pre, _ = ap.parse_known_args(argv)
    if not pre.config:
        return ap.parse_args(argv)
    try:
        cfg = json.loads(Path(pre.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {pre.config}: {exc}") from exc
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    sub = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
    sub.choices[pre.command].set_defaults(**cfg)
    return ap.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConstructionError as exc:
        print(f"construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except (UsageError, GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
