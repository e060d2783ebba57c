"""Command-line entry point (``xqaoa``)."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from xqaoa import bench
from xqaoa.analytic import VARIANTS, AnsatzObjective
from xqaoa.baselines import classical_relaxed, extract_cut_xeqy, gw_certificate, gw_round, gw_solve
from xqaoa.graphs import (
    BRUTE_FORCE_CAP,
    GraphError,
    brute_force_maxcut,
    dumps_graph,
    generate_regular,
    load_graph,
    save_graph,
)
from xqaoa.optimize import OptimizerConfig, init_qaoa_informed, init_random, multistart
from xqaoa.simulator import SimulatorObjective


def _emit(doc: dict, out):
    text = json.dumps(doc, indent=2, default=bench._json_default)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _optimizer(args) -> OptimizerConfig:
    return OptimizerConfig(grad_tolerance=args.grad_tol, max_evaluations=args.max_evals,
                           workers=args.workers, grad_step=args.grad_step)


def cmd_generate(args):
    g = generate_regular(args.n, args.degree, args.seed)
    if args.optimum:
        g = type(g)(g.n, g.edges, optimum=brute_force_maxcut(g).cut_value)
    if args.out:
        save_graph(g, args.out)
    else:
        sys.stdout.write(dumps_graph(g))


def cmd_oracle(args):
    g = load_graph(args.graph)
    res = brute_force_maxcut(g, cap=args.cap)
    _emit({"graph": args.graph, "n": g.n, "m": g.m, **res.to_dict()}, args.out)


def cmd_solve(args):
    g = load_graph(args.graph)
    cfg = _optimizer(args)
    v = args.variant
    doc = {"graph": args.graph, "variant": v, "restarts": args.restarts, "seed": args.seed}
    if v == "CR":
        sol, cut = classical_relaxed(g, args.restarts, args.seed, cfg)
        doc.update(relaxed_value=sol.objective_value, cut=cut.to_dict())
    elif v == "GW":
        sol = gw_solve(g, seed=args.seed)
        best, _ = gw_round(g, sol, args.restarts, seed=args.seed)
        doc.update(sdp_value=sol.objective_value, cut=best.to_dict())
    elif args.p == 1 and args.shots is None:
        informed = v == "QAOA*"
        variant = "QAOA" if informed else v
        obj = AnsatzObjective(g, variant)
        sampler = (lambda rng: np.array(init_qaoa_informed(rng))) if informed else \
            (lambda rng: init_random(variant, g, rng).to_vector())
        res = multistart(obj, sampler, args.restarts, args.seed, cfg, workers=1)
        a = obj.angles(res.best.x_final)
        doc.update(best_value=res.best.best_value, converged=res.best.converged,
                   angles=a.canonical(g.weights).to_vector().tolist())
        if variant == "XEQY":
            with warnings.catch_warnings(record=True):
                warnings.simplefilter("always")
                doc["cut"] = extract_cut_xeqy(g, a).to_dict()
    else:
        if v not in VARIANTS:
            raise SystemExit(f"variant {v} has no simulator form")
        obj = SimulatorObjective(g, v, args.p, shots=args.shots, seed=args.seed)
        vg = obj.value_and_gradient if args.shots is None else None
        sampler = lambda rng: init_random(v, g, rng, args.p).to_vector()
        res = multistart(obj, sampler, args.restarts, args.seed, cfg, value_and_gradient=vg)
        doc.update(best_value=res.best.best_value, converged=res.best.converged, p=args.p,
                   angles=res.best.x_final.tolist())
    if g.optimum:
        doc["optimum"] = g.optimum
    _emit(doc, args.out)


def cmd_certify_gw(args):
    g = load_graph(args.graph)
    sol = gw_solve(g, rank=args.rank, seed=args.seed)
    cert = gw_certificate(g, sol)
    best, values = gw_round(g, sol, args.restarts, seed=args.seed)
    _emit({"graph": args.graph, "certificate": cert.to_dict(), "holds": cert.holds,
           "best_rounded_cut": best.to_dict(), "mean_rounded_cut": float(np.mean(values))}, args.out)


def _bench_config(args, **kw) -> bench.BenchConfig:
    return bench.BenchConfig(
        n=args.n, degree=args.degree, instances=args.instances, seed=args.seed,
        restarts=args.restarts, graphs=tuple(args.graph or ()), oracle=args.oracle,
        shots=getattr(args, "shots", None), workers=args.workers, grad_tolerance=args.grad_tol,
        max_evaluations=args.max_evals, **kw,
    )


def cmd_bench_variants(args):
    algs = tuple(args.variant) if args.variant else bench.ALGORITHMS
    recs = bench.run_variant_comparison(_bench_config(args, algorithms=algs), args.out)
    _emit({"median_ratio": bench.medians(recs)}, None)


def cmd_bench_transition(args):
    rep = bench.run_transition_study(_bench_config(args, algorithms=("XEQY",)), args.out)
    rep.pop("records")
    for k in ("gamma_histogram", "beta_histogram"):
        rep.pop(k)
    _emit(rep, None)


def cmd_bench_depth(args):
    algs = tuple(args.variant) if args.variant else bench.DEPTH_VARIANTS
    ps = tuple(range(1, args.p + 1))
    recs = bench.run_depth_study(
        _bench_config(args, algorithms=algs, p_values=ps, deep_restarts=args.deep_restarts), args.out)
    _emit({"median_ratio": bench.medians(recs)}, None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xqaoa", description="MaxCut with QAOA-family ansatze and classical baselines")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph_many=False):
        if graph_many:
            p.add_argument("--graph", action="append", help="edge-list file (repeatable)")
        else:
            p.add_argument("--graph", required=True, help="edge-list file (.csv or .json)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=10)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--grad-tol", type=float, default=1e-6)
        p.add_argument("--grad-step", type=float, default=None)
        p.add_argument("--max-evals", type=int, default=100_000)
        p.add_argument("--out", default=None)

    p = sub.add_parser("generate", help="random regular graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optimum", action="store_true", help="record the brute-force optimum")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="exact MaxCut by enumeration")
    p.add_argument("--graph", required=True)
    p.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("solve", help="optimise one ansatz or baseline on a graph")
    common(p)
    p.add_argument("--variant", default="XEQY", choices=list(VARIANTS) + ["QAOA*", "CR", "GW"])
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--shots", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify-gw", help="GW relaxation, rounding and guarantee certificate")
    common(p)
    p.add_argument("--rank", type=int, default=None)
    p.set_defaults(func=cmd_certify_gw)

    for name, func, help_ in (
        ("bench-variants", cmd_bench_variants, "variant comparison campaign"),
        ("bench-transition", cmd_bench_transition, "X=Y angle transition statistics"),
        ("bench-depth", cmd_bench_depth, "statevector depth study"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p, graph_many=True)
        p.add_argument("--n", type=int, default=16)
        p.add_argument("--degree", type=int, default=3)
        p.add_argument("--instances", type=int, default=1)
        p.add_argument("--oracle", default="brute", choices=["brute", "recorded", "none"])
        if name != "bench-transition":
            p.add_argument("--variant", action="append", help="algorithm to include (repeatable)")
        if name == "bench-depth":
            p.add_argument("--p", type=int, default=3, help="maximum depth")
            p.add_argument("--shots", type=int, default=None)
            p.add_argument("--deep-restarts", type=int, default=2)
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (GraphError, bench.ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
