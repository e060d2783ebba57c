"""Benchmark campaigns: variant comparison, angle-transition statistics and
the simulator depth study.

Every campaign writes one CSV row per (graph, algorithm, run) and a JSON
summary. The CSV holds no timing data, so repeated campaigns with the same
configuration produce byte-identical files; wall times live in the JSON.
"""
from __future__ import annotations

import csv
import io
import json
import time
import warnings
import zlib
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from xqaoa.analytic import AngleAssignment, AnsatzObjective, expectation
from xqaoa.baselines import (
    NonTransitionedWarning,
    cr_runs,
    extract_cut_xeqy,
    gw_certificate,
    gw_round,
    gw_solve,
    snap_xeqy,
)
from xqaoa.graphs import BRUTE_FORCE_CAP, Graph, brute_force_maxcut, generate_regular, load_graph
from xqaoa.optimize import (
    OptimizerConfig,
    init_qaoa_informed,
    init_random,
    lbfgs_maximize,
    make_rng,
    multistart,
)
from xqaoa.simulator import MAX_QUBITS, SimulatorObjective

__all__ = [
    "ALGORITHMS",
    "BenchConfig",
    "BenchmarkRecord",
    "CSV_COLUMNS",
    "ConfigError",
    "DEPTH_VARIANTS",
    "Instance",
    "SCHEMA_VERSION",
    "build_instances",
    "medians",
    "quartiles",
    "run_algorithm",
    "run_depth_study",
    "run_transition_study",
    "run_variant_comparison",
    "stream_seed",
    "write_campaign",
]

SCHEMA_VERSION = 1
# QAOA* is QAOA from the informed window; XEQY-G0 is X=Y with every gamma held at 0
ALGORITHMS = ("XY", "XEQY", "Y", "MA", "QAOA", "QAOA*", "CR", "GW", "XEQY-G0")
DEPTH_VARIANTS = ("QAOA", "MA", "XEQY")
WARM_NUDGE = 0.1
CSV_COLUMNS = (
    "graph_id", "n", "D", "algorithm", "variant", "p", "run", "seed",
    "value", "cut_value", "optimum", "ratio", "converged", "evaluations",
)


class ConfigError(ValueError):
    """Campaign configuration cannot be executed."""


@dataclass
class BenchConfig:
    """Campaign settings.

    Instances are either loaded from ``graphs`` (paths) or generated as
    ``instances`` random ``degree``-regular graphs on ``n`` vertices.
    ``oracle`` is "brute" (exact optimum, n <= cap), "recorded" (optimum
    stored in the graph file) or "none".
    """

    n: int = 16
    degree: int = 3
    instances: int = 1
    seed: int = 0
    restarts: int = 10
    algorithms: tuple = ("XEQY", "MA", "QAOA")
    graphs: tuple = ()
    oracle: str = "brute"
    p_values: tuple = (1,)
    deep_restarts: int = 2
    shots: int | None = None
    workers: int = 1
    grad_tolerance: float = 1e-6
    max_evaluations: int = 100_000
    gw_trials: int | None = None

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(grad_tolerance=self.grad_tolerance,
                               max_evaluations=self.max_evaluations, workers=self.workers)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["algorithms"] = list(self.algorithms)
        d["graphs"] = [str(x) for x in self.graphs]
        d["p_values"] = list(self.p_values)
        return d


@dataclass
class Instance:
    graph_id: str
    graph: Graph
    degree: int | None
    index: int


@dataclass
class BenchmarkRecord:
    graph_id: str
    n: int
    D: int | None
    algorithm: str
    variant: str
    restarts: int
    seed: int
    best_value: float
    best_cut_value: float
    optimum: float | None
    ratio: float | None
    wall_time: float
    values: list
    p: int = 1
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


# --------------------------------------------------------------------------
# seeds and instances


def stream_seed(master: int, label: str, index: int) -> np.random.SeedSequence:
    """Independent stream per (label, instance); adding labels leaves others untouched."""
    return np.random.SeedSequence(master, spawn_key=(zlib.crc32(label.encode()), index))


def _seed_int(ss: np.random.SeedSequence) -> int:
    return int(ss.generate_state(1, np.uint32)[0])


def _degree_of(g: Graph):
    d = np.unique(g.degrees)
    return int(d[0]) if len(d) == 1 else None


def build_instances(cfg: BenchConfig) -> list[Instance]:
    if cfg.oracle not in ("brute", "recorded", "none"):
        raise ConfigError(f"unknown oracle {cfg.oracle!r}")
    out = []
    if cfg.graphs:
        for i, path in enumerate(cfg.graphs):
            g = load_graph(path)
            out.append(Instance(Path(path).stem, g, _degree_of(g), i))
    else:
        for i in range(cfg.instances):
            s = _seed_int(stream_seed(cfg.seed, "graph", i))
            g = generate_regular(cfg.n, cfg.degree, s)
            out.append(Instance(f"rr-n{cfg.n}-d{cfg.degree}-{i:03d}", g, cfg.degree, i))
    resolved = []
    for inst in out:
        g = inst.graph
        if cfg.oracle == "brute":
            if g.n > BRUTE_FORCE_CAP:
                raise ConfigError(f"brute-force oracle requested for n={g.n} > cap {BRUTE_FORCE_CAP}")
            if g.optimum is None:
                g = Graph(g.n, g.edges, labels=g.labels, optimum=brute_force_maxcut(g).cut_value)
        elif cfg.oracle == "recorded" and g.optimum is None:
            raise ConfigError(f"{inst.graph_id} has no recorded optimum")
        resolved.append(Instance(inst.graph_id, g, inst.degree, inst.index))
    return resolved


def _ratio(value, optimum):
    if optimum is None or optimum <= 0:
        return None
    return value / optimum


# --------------------------------------------------------------------------
# one algorithm on one instance


_QUANTUM = {"XY": "XY", "XEQY": "XEQY", "Y": "Y", "MA": "MA", "QAOA": "QAOA", "QAOA*": "QAOA", "XEQY-G0": "XEQY"}


def _sampler(algorithm: str, g: Graph):
    if algorithm == "QAOA*":
        return lambda rng: np.array(init_qaoa_informed(rng))
    if algorithm == "XEQY-G0":
        return lambda rng: rng.uniform(0.0, np.pi, g.n)
    variant = _QUANTUM[algorithm]
    return lambda rng: init_random(variant, g, rng).to_vector()


def _extract(g, a):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonTransitionedWarning)
        return extract_cut_xeqy(g, a)


def run_algorithm(inst: Instance, algorithm: str, cfg: BenchConfig):
    """Returns ``(record, rows)`` for one algorithm on one instance."""
    rec, rows, _ = _run_algorithm(inst, algorithm, cfg)
    return rec, rows


def _run_algorithm(inst: Instance, algorithm: str, cfg: BenchConfig):
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}")
    g = inst.graph
    ss = stream_seed(cfg.seed, algorithm, inst.index)
    seed = _seed_int(ss)
    opt_cfg = cfg.optimizer()
    start = time.perf_counter()
    rows = []
    extra = {}
    res = None
    if algorithm in _QUANTUM:
        variant = _QUANTUM[algorithm]
        obj = AnsatzObjective(g, variant, freeze_gamma=(algorithm == "XEQY-G0"))
        res = multistart(obj, _sampler(algorithm, g), cfg.restarts, ss, opt_cfg)
        values = [r.best_value for r in res.runs]
        for k, run in enumerate(res.runs):
            cut = ""
            if variant == "XEQY":
                cut = _extract(g, obj.angles(run.x_final)).cut_value
            rows.append(_row(inst, algorithm, variant, 1, k, run.seed, run.best_value, cut, g.optimum,
                             run.converged, run.evaluations))
        best_value = res.best.best_value
        best_cut = best_value
        if variant == "XEQY":
            extra["extracted_cut"] = max(r["cut_value"] for r in rows)
    elif algorithm == "CR":
        res, cuts = cr_runs(g, cfg.restarts, ss, opt_cfg)
        values = [c.cut_value for c in cuts]
        for k, (run, c) in enumerate(zip(res.runs, cuts)):
            rows.append(_row(inst, algorithm, "", 1, k, run.seed, run.best_value, c.cut_value, g.optimum,
                             run.converged, run.evaluations))
        best_value = best_cut = max(values)
    else:  # GW
        child_solve, child_round = ss.spawn(2)
        sol = gw_solve(g, seed=child_solve)
        cert = gw_certificate(g, sol)
        trials = cfg.gw_trials or cfg.restarts
        best, values = gw_round(g, sol, trials, seed=child_round)
        for k, v in enumerate(values):
            rows.append(_row(inst, algorithm, "", 1, k, seed, v, v, g.optimum, sol.converged, ""))
        best_value = best_cut = best.cut_value
        extra.update(sdp_value=cert.sdp_value, expected_cut=cert.expected_cut)
    wall = time.perf_counter() - start
    rec = BenchmarkRecord(
        graph_id=inst.graph_id, n=g.n, D=inst.degree, algorithm=algorithm,
        variant=_QUANTUM.get(algorithm, ""), restarts=cfg.restarts, seed=seed,
        best_value=best_value, best_cut_value=best_cut, optimum=g.optimum,
        ratio=_ratio(best_cut, g.optimum), wall_time=wall, values=values, extra=extra,
    )
    return rec, rows, res


def _row(inst, algorithm, variant, p, run, seed, value, cut, optimum, converged, evaluations):
    # expected cost for ansatz runs, the classical cut for CR / GW
    ratio_base = value if variant else cut
    r = _ratio(ratio_base, optimum)
    return {
        "graph_id": inst.graph_id, "n": inst.graph.n, "D": "" if inst.degree is None else inst.degree,
        "algorithm": algorithm, "variant": variant, "p": p, "run": run, "seed": seed,
        "value": value, "cut_value": cut, "optimum": "" if optimum is None else optimum,
        "ratio": "" if r is None else r, "converged": int(bool(converged)), "evaluations": evaluations,
    }


# --------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_campaign(out_dir, name: str, cfg: BenchConfig, records, rows, summary: dict | None = None):
    """Writes ``<name>.csv`` and ``<name>.json`` under ``out_dir``; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = sorted(rows, key=lambda r: (r["graph_id"], r["algorithm"], r["p"], r["run"]))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(v) for k, v in r.items()})
    csv_path = out / f"{name}.csv"
    csv_path.write_text(buf.getvalue())
    doc = {
        "schema_version": SCHEMA_VERSION,
        "campaign": name,
        "config": cfg.to_dict(),
        "records": [r.to_dict() for r in records],
        "summary": summary or {},
    }
    json_path = out / f"{name}.json"
    json_path.write_text(json.dumps(doc, indent=2, default=_json_default))
    return csv_path, json_path


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))


def medians(records, key="ratio") -> dict:
    """Median of ``key`` per (algorithm, p)."""
    groups: dict = {}
    for r in records:
        v = getattr(r, key)
        if v is not None:
            groups.setdefault((r.algorithm, r.p), []).append(v)
    return {f"{a}@p{p}": float(np.median(v)) for (a, p), v in sorted(groups.items())}


def quartiles(records, key="ratio") -> dict:
    groups: dict = {}
    for r in records:
        v = getattr(r, key)
        if v is not None:
            groups.setdefault((r.algorithm, r.p), []).append(v)
    return {f"{a}@p{p}": [float(q) for q in np.quantile(v, [0.25, 0.5, 0.75])]
            for (a, p), v in sorted(groups.items())}


# --------------------------------------------------------------------------
# campaigns


def run_variant_comparison(cfg: BenchConfig, out_dir=None):
    """Every algorithm in ``cfg.algorithms`` on every instance."""
    instances = build_instances(cfg)
    records, rows = [], []
    for inst in instances:
        for alg in cfg.algorithms:
            rec, r = run_algorithm(inst, alg, cfg)
            records.append(rec)
            rows.extend(r)
    if out_dir is not None:
        write_campaign(out_dir, "variants", cfg, records, rows,
                       {"median_ratio": medians(records), "quartiles": quartiles(records)})
    return records


def _histogram(values, upper, bins=20):
    counts, edges = np.histogram(values, bins=bins, range=(0.0, upper))
    return {"counts": counts.tolist(), "edges": edges.tolist()}


def run_transition_study(cfg: BenchConfig, out_dir=None, threshold: float = 0.15,
                         ablation: bool = True) -> dict:
    """Distances of converged X=Y angles to the snap sets and extraction checks.

    With ``ablation`` the gamma-frozen X=Y ansatz and the relaxed
    classical baseline are also run on every instance.
    """
    instances = build_instances(cfg)
    gdist, bdist = [], []
    converged = total = agree = flagged_runs = 0
    max_gap = 0.0
    records, rows = [], []
    for inst in instances:
        g = inst.graph
        rec, r, res = _run_algorithm(inst, "XEQY", cfg)
        records.append(rec)
        rows.extend(r)
        obj = AnsatzObjective(g, "XEQY")
        for run in res.runs:
            total += 1
            if not run.converged:
                continue
            converged += 1
            a = obj.angles(run.x_final)
            snap = snap_xeqy(g, a)
            gdist.append(snap.gamma_distance)
            bdist.append(snap.beta_distance)
            cut = _extract(g, a)
            flagged_runs += bool(cut.flagged)
            gap = abs(cut.cut_value - expectation(g, snap.angles))
            max_gap = max(max_gap, gap)
            agree += gap <= 1e-9
        if ablation:
            for alg in ("XEQY-G0", "CR"):
                rec, r = run_algorithm(inst, alg, cfg)
                records.append(rec)
                rows.extend(r)
    gd = np.concatenate(gdist) if gdist else np.zeros(0)
    bd = np.concatenate(bdist) if bdist else np.zeros(0)
    report = {
        "runs": total,
        "converged_runs": converged,
        "gamma_within": float(np.mean(gd <= threshold)) if gd.size else None,
        "beta_within": float(np.mean(bd <= threshold)) if bd.size else None,
        "threshold": threshold,
        "extraction_agreement": agree,
        "extraction_max_gap": max_gap,
        "runs_with_flagged_vertices": flagged_runs,
        "gamma_histogram": _histogram(gd, np.pi),
        "beta_histogram": _histogram(bd, np.pi / 4),
        "median_ratio": medians(records),
    }
    if out_dir is not None:
        write_campaign(out_dir, "transition", cfg, records, rows, report)
    report["records"] = records
    return report


def _pad_layer(variant: str, g: Graph, x, p: int):
    """Append an identity layer (all angles 0) to a depth-p parameter vector."""
    width = AngleAssignment.n_params(variant, g.n, g.m, 1)
    return np.concatenate([np.asarray(x, dtype=float), np.zeros(width)])


def _emit_depth(records, rows, inst, variant, p, ps, runs, ss, wall):
    if p not in ps:
        return
    g = inst.graph
    best = max(runs, key=lambda r: r.best_value)
    for k, run in enumerate(runs):
        rows.append(_row(inst, variant, variant, p, k, run.seed if run.seed is not None else "",
                         run.best_value, "", g.optimum, run.converged, run.evaluations))
    records.append(BenchmarkRecord(
        graph_id=inst.graph_id, n=g.n, D=inst.degree, algorithm=variant, variant=variant,
        restarts=len(runs), seed=_seed_int(ss), best_value=best.best_value,
        best_cut_value=best.best_value, optimum=g.optimum,
        ratio=_ratio(best.best_value, g.optimum), wall_time=wall,
        values=[r.best_value for r in runs], p=p,
    ))


def run_depth_study(cfg: BenchConfig, out_dir=None):
    """Statevector-backed QAOA / MA / X=Y for each depth in ``cfg.p_values``.

    Depth 1 uses ``cfg.restarts`` random starts. Each deeper level starts
    from the previous optimum extended by an identity layer, from the same
    point with the new layer drawn near zero, and from
    ``cfg.deep_restarts - 2`` random points. The first start keeps the
    previous value, so the best value can only grow with depth. Once a
    level reaches the known optimum, deeper levels keep only the first
    start. Exact mode uses adjoint gradients; shot mode uses central
    differences of the sampled objective.
    """
    ps = sorted(set(int(p) for p in cfg.p_values))
    if not ps or ps[0] < 1 or ps[-1] > 5:
        raise ConfigError("depths must lie in 1..5")
    instances = build_instances(cfg)
    for inst in instances:
        if inst.graph.n > MAX_QUBITS:
            raise ConfigError(f"{inst.graph_id}: n={inst.graph.n} exceeds simulator cap {MAX_QUBITS}")
    algorithms = [a for a in cfg.algorithms if a in DEPTH_VARIANTS] or list(DEPTH_VARIANTS)
    opt_cfg = cfg.optimizer()
    records, rows = [], []
    for inst in instances:
        g = inst.graph
        for variant in algorithms:
            prev = None
            for p in range(1, ps[-1] + 1):
                ss = stream_seed(cfg.seed, f"depth-{variant}-p{p}", inst.index)
                obj = SimulatorObjective(g, variant, p, shots=cfg.shots, seed=_seed_int(ss))
                vg = obj.value_and_gradient if cfg.shots is None else None
                start = time.perf_counter()
                runs = []
                if prev is None:
                    sampler = lambda rng, v=variant, p=p: init_random(v, g, rng, p).to_vector()
                    runs = multistart(obj, sampler, cfg.restarts, ss, opt_cfg, value_and_gradient=vg).runs
                else:
                    # the padded point is stationary; a nudged copy lets the new layer move
                    x0 = _pad_layer(variant, g, prev, p - 1)
                    runs.append(lbfgs_maximize(obj, x0, opt_cfg, value_and_gradient=vg))
                    if g.optimum is not None and runs[0].best_value >= g.optimum - 1e-9:
                        # already optimal; deeper circuits cannot improve on it
                        prev = runs[0].x_final
                        _emit_depth(records, rows, inst, variant, p, ps, runs, ss, time.perf_counter() - start)
                        continue
                    nudge = make_rng(ss.spawn(1)[0]).normal(0.0, WARM_NUDGE, x0.size - prev.size)
                    x1 = np.concatenate([prev, nudge])
                    runs.append(lbfgs_maximize(obj, x1, opt_cfg, value_and_gradient=vg))
                    extra_n = cfg.deep_restarts - 2
                    if extra_n > 0:
                        sampler = lambda rng, v=variant, p=p: init_random(v, g, rng, p).to_vector()
                        runs += multistart(obj, sampler, extra_n, ss, opt_cfg, value_and_gradient=vg).runs
                prev = max(runs, key=lambda r: r.best_value).x_final
                _emit_depth(records, rows, inst, variant, p, ps, runs, ss, time.perf_counter() - start)
    if out_dir is not None:
        write_campaign(out_dir, "depth", cfg, records, rows,
                       {"median_ratio": medians(records), "quartiles": quartiles(records)})
    return records
