"""Acceptance criteria. Each test prints one PASS/FAIL line."""
import math
import time
import warnings

import numpy as np
import pytest

from conftest import random_graph
from xqaoa import analytic, bench
from xqaoa.analytic import AngleAssignment, AnsatzObjective
from xqaoa.baselines import cr_objective, gw_certificate, gw_constant, gw_round, gw_solve
from xqaoa.graphs import Graph, brute_force_maxcut, generate_regular, has_odd_edge_degrees, path_graph, star_graph
from xqaoa.optimize import OptimizerConfig, cga_gradient, init_random, lbfgs_maximize, make_rng, multistart
from xqaoa.simulator import SimulatorObjective, build_state, expectation

PI = math.pi
VARIANTS = ("QAOA", "MA", "XY", "XEQY", "Y")


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_c01_analytic_matches_statevector(report):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 11)))
        for _ in range(50):
            for v in VARIANTS:
                a = init_random(v, g, make_rng(int(rng.integers(1 << 31))))
                worst = max(worst, abs(analytic.expectation(g, a) - expectation(build_state(g, a), g)))
    wall = time.perf_counter() - start
    report(1, worst <= 1e-9 and wall <= 120, f"max |analytic - statevector| = {worst:.2e}, {wall:.1f} s")


def test_c02_reduction_chain(report):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(3, 12)))
        n, m = g.n, g.m
        gam = rng.uniform(0, 2 * PI, (1, m))
        bet = rng.uniform(0, PI, (1, n))
        alp = rng.uniform(0, PI, (1, n))
        f = analytic.expectation
        worst = max(worst, abs(f(g, AngleAssignment("XY", gam, bet, np.zeros((1, n))))
                               - f(g, AngleAssignment("MA", gam, bet, np.zeros((1, n))))))
        gq, bq = rng.uniform(0, 2 * PI), rng.uniform(0, PI)
        worst = max(worst, abs(f(g, AngleAssignment("MA", np.full((1, m), gq), np.full((1, n), bq), np.zeros((1, n))))
                               - f(g, AngleAssignment.qaoa(gq, bq, n, m))))
        worst = max(worst, abs(f(g, AngleAssignment("XY", gam, bet, bet)) - f(g, AngleAssignment("XEQY", gam, bet, bet))))
        worst = max(worst, abs(f(g, AngleAssignment("XY", gam, np.zeros((1, n)), alp))
                               - f(g, AngleAssignment("Y", gam, np.zeros((1, n)), alp))))
    report(2, worst <= 1e-12, f"max reduction gap = {worst:.2e}")


def _parity_trees(rng, count):
    out = []
    while len(out) < count:
        n = int(rng.integers(4, 10))
        edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
        g = Graph(n, edges)
        if has_odd_edge_degrees(g) and all(g.degrees[u] for u in range(n)):
            out.append(g)
    return out


def test_c03_exact_y_and_star_separation(report):
    rng = np.random.default_rng(3)
    graphs = [star_graph(4)] + [star_graph(k) for k in (2, 6, 8, 10)] + [path_graph(3)] + _parity_trees(rng, 5)
    worst = 0.0
    for g in graphs:
        assert has_odd_edge_degrees(g)
        a = AngleAssignment("Y", np.full((1, g.m), PI), np.zeros((1, g.n)), np.full((1, g.n), PI / 4))
        worst = max(worst, abs(analytic.expectation(g, a) - g.m))
    ratio, _, _ = analytic.star_qaoa1_optimum(4)
    s4 = AnsatzObjective(star_graph(4), "QAOA")
    grid = np.linspace(0, 2 * PI, 24, endpoint=False)
    best = 0.0
    for gm in grid:
        for bt in grid[:12]:
            best = max(best, lbfgs_maximize(s4, [gm, bt]).best_value)
    ok = worst <= 1e-12 and abs(ratio - 0.75) <= 1e-6 and best <= 3.0 + 1e-6
    report(3, ok, f"{len(graphs)} graphs, max |<C> - |E|| = {worst:.1e}; S4 ratio {ratio:.7f}, "
                  f"grid+LBFGS max {best:.9f} (expected 0.75)")


def test_c04_trig_lemmas(report):
    rng = np.random.default_rng(4)
    worst = 0.0
    for f in range(1, 9):
        for _ in range(100):
            res = analytic.trig_identity_check(f, rng.uniform(-PI, PI, f), rng.uniform(-PI, PI, f))
            worst = max(worst, *res.values())
    report(4, worst <= 1e-12, f"max residual = {worst:.2e}")


def test_c05_gw_guarantee(report):
    rng = np.random.default_rng(5)
    worst_slack = math.inf
    sandwich = True
    for i in range(20):
        g = random_graph(rng, int(rng.integers(6, 19)), p_edge=0.35, weighted=bool(i % 2))
        sol = gw_solve(g, seed=i)
        cert = gw_certificate(g, sol)
        worst_slack = min(worst_slack, cert.expected_cut - 0.87856 * cert.sdp_value)
        opt = brute_force_maxcut(g).cut_value
        best, _ = gw_round(g, sol, trials=100, seed=i)
        sandwich &= cert.sdp_value >= opt - 1e-9 and opt >= best.cut_value - 1e-9
    const, theta = gw_constant()
    # 0.87856 is the truncated value of 0.8785672; compare after truncation to 5 places
    const_ok = math.floor(const * 1e5) / 1e5 == 0.87856 and abs(theta - 2.331122) <= 1e-4
    ok = worst_slack >= -1e-9 and sandwich and const_ok
    report(5, ok, f"min(expected - 0.87856 sdp) = {worst_slack:.3e}, sandwich {sandwich}, "
                  f"constant {const:.7f} (quoted 0.87856), theta {theta:.6f}")


def test_c06_gamma_zero_reduction(report):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(5):
        g = random_graph(rng, int(rng.integers(4, 14)))
        for _ in range(200):
            beta = rng.uniform(-PI, PI, (1, g.n))
            a = AngleAssignment("XEQY", np.zeros((1, g.m)), beta, beta)
            worst = max(worst, abs(analytic.expectation(g, a) - cr_objective(g, 2 * beta[0])))
    report(6, worst <= 1e-12, f"1000 vectors on 5 graphs, max gap = {worst:.2e}")


@pytest.mark.slow
def test_c07_desk_scale_ordering(report):
    start = time.perf_counter()
    lines, ok = [], True
    for degree in (3, 6):
        cfg = bench.BenchConfig(n=32, degree=degree, instances=10, restarts=50, seed=7,
                                algorithms=("XEQY", "MA", "QAOA"))
        recs = bench.run_variant_comparison(cfg)
        med = bench.medians(recs)
        q = bench.quartiles(recs)
        x, ma, qa = med["XEQY@p1"], med["MA@p1"], med["QAOA@p1"]
        ok &= x > ma >= qa and x - ma >= 0.02 and q["XEQY@p1"][0] >= 0.92
        lines.append(f"D={degree}: XEQY {x:.4f} (Q1 {q['XEQY@p1'][0]:.4f}) MA {ma:.4f} QAOA {qa:.4f}")
    wall = time.perf_counter() - start
    ok &= wall <= 15 * 60
    report(7, ok, "; ".join(lines) + f"; {wall:.0f} s")


@pytest.mark.slow
def test_c08_transition_statistics(report):
    cfg = bench.BenchConfig(n=32, degree=3, instances=5, restarts=50, seed=8)
    rep = bench.run_transition_study(cfg, ablation=False)
    ok = (rep["gamma_within"] >= 0.95 and rep["beta_within"] >= 0.95
          and rep["extraction_agreement"] == rep["converged_runs"] and rep["extraction_max_gap"] <= 1e-9)
    report(8, ok, f"{rep['converged_runs']}/{rep['runs']} converged; gamma within 0.15: {rep['gamma_within']:.3f}, "
                  f"beta within 0.15: {rep['beta_within']:.3f}; extraction agrees on "
                  f"{rep['extraction_agreement']} runs (max gap {rep['extraction_max_gap']:.1e})")


@pytest.mark.slow
def test_c09_depth_study(report):
    start = time.perf_counter()
    cfg = bench.BenchConfig(n=16, degree=3, instances=20, restarts=2, seed=9, p_values=(1, 2, 3),
                            algorithms=("QAOA", "MA", "XEQY"), grad_tolerance=1e-4, deep_restarts=2)
    recs = bench.run_depth_study(cfg)
    wall = time.perf_counter() - start
    med = bench.medians(recs)
    by = {(r.graph_id, r.algorithm, r.p): r.best_value for r in recs}
    monotone = all(by[(gid, "QAOA", p)] >= by[(gid, "QAOA", p - 1)] - 1e-6
                   for (gid, alg, p) in by if alg == "QAOA" and p > 1)
    ok = (wall <= 20 * 60 and monotone and med["XEQY@p1"] >= med["QAOA@p1"]
          and med["XEQY@p1"] >= med["MA@p1"])
    detail = ", ".join(f"{k} {v:.4f}" for k, v in med.items())
    report(9, ok, f"{detail}; QAOA nondecreasing in p: {monotone}; {wall:.0f} s")


def test_c10_optimizer(report):
    rosen = lambda x: -((1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2)
    run = lbfgs_maximize(rosen, [-1.2, 1.0], OptimizerConfig(grad_tolerance=1e-9))
    err = float(np.max(np.abs(run.x_final - 1.0)))
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    f = AnsatzObjective(k3, "QAOA")
    x = np.array([0.4, 0.3])
    _, exact = SimulatorObjective(k3, "QAOA", 1).value_and_gradient(x)
    hs = [4e-2, 2e-2, 1e-2, 5e-3]
    errs = [np.linalg.norm(cga_gradient(f, x, h) - exact) for h in hs]
    order = min(math.log2(errs[i] / errs[i + 1]) for i in range(len(hs) - 1))
    g = generate_regular(20, 3, 10)
    xa = init_random("XY", g, make_rng(10)).to_vector()
    fx = AnsatzObjective(g, "XY")
    gap = float(np.max(np.abs(cga_gradient(fx, xa, workers=1) - cga_gradient(fx, xa, workers=8))))
    ok = err <= 1e-6 and order >= 1.9 and gap <= 1e-15
    report(10, ok, f"Rosenbrock error {err:.1e}; CGA order {order:.3f}; workers 1 vs 8 gap {gap:.1e}")


def test_c11_performance(report):
    g = generate_regular(256, 10, 11)
    f = AnsatzObjective(g, "XY")
    x = init_random("XY", g, make_rng(11)).to_vector()
    f(x)
    reps = 20
    t0 = time.perf_counter()
    for _ in range(reps):
        f(x)
    single = (time.perf_counter() - t0) / reps
    h = generate_regular(32, 3, 12)
    fx = AnsatzObjective(h, "XEQY")
    t0 = time.perf_counter()
    multistart(fx, lambda r: init_random("XEQY", h, r).to_vector(), 50, 12, OptimizerConfig(workers=8))
    full = time.perf_counter() - t0
    ok = single <= 10e-3 and full <= 30
    report(11, ok, f"n=256 D=10 evaluation {single * 1e3:.2f} ms; 50-restart XEQY n=32 {full:.1f} s (8 workers requested)")
