"""Limited-memory BFGS maximisation with central-difference gradients,
multistart driver and initial-point samplers."""
from __future__ import annotations

import math
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from xqaoa.analytic import AngleAssignment, VARIANTS, VariantError
from xqaoa.graphs import Graph

__all__ = [
    "MultistartResult",
    "NonFiniteObjectiveError",
    "OptimizationRun",
    "OptimizerConfig",
    "cga_gradient",
    "init_qaoa_informed",
    "init_random",
    "lbfgs_maximize",
    "make_rng",
    "multistart",
    "run_seeds",
]


class NonFiniteObjectiveError(FloatingPointError):
    """The objective returned NaN/inf while differencing along ``coordinate``."""

    def __init__(self, coordinate, value):
        self.coordinate = coordinate
        self.value = value
        super().__init__(f"objective not finite ({value}) when perturbing coordinate {coordinate}")


@dataclass(frozen=True)
class OptimizerConfig:
    """LBFGS settings. ``grad_step=None`` means ``1e-6 * max(1, |x_i|)``."""

    memory: int = 10
    grad_step: float | None = None
    grad_tolerance: float = 1e-6
    max_evaluations: int = 100_000
    workers: int = 1
    c1: float = 1e-4
    c2: float = 0.9

    def __post_init__(self):
        if self.memory < 1:
            raise ValueError("memory must be >= 1")
        if self.grad_step is not None and not self.grad_step > 0:
            raise ValueError("grad_step must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class OptimizationRun:
    x0: np.ndarray
    x_final: np.ndarray
    best_value: float
    converged: bool
    gradient_norm_final: float
    objective_trace: list = field(default_factory=list)
    evaluations: int = 0
    iterations: int = 0
    seed: int | None = None
    wall_time: float = 0.0
    message: str = ""


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator (Philox) for a seed or a SeedSequence."""
    return np.random.Generator(np.random.Philox(seed))


# --------------------------------------------------------------------------
# gradients


def _steps(x, h):
    if h is None:
        return 1e-6 * np.maximum(1.0, np.abs(x))
    return np.full(x.shape, float(h))


def _evaluate_points(f, points, workers):
    batch = getattr(f, "batch", None)
    if batch is not None:
        if workers <= 1 or len(points) < 2 * workers:
            return np.asarray(batch(points), dtype=float)
        chunks = np.array_split(points, workers)
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(batch, chunks))
        return np.concatenate(parts)
    if workers <= 1:
        return np.array([f(p) for p in points], dtype=float)
    with ThreadPoolExecutor(workers) as pool:
        return np.array(list(pool.map(f, points)), dtype=float)


def _cga_points(x, h):
    steps = _steps(x, h)
    n = len(x)
    plus = np.tile(x, (n, 1))
    minus = plus.copy()
    idx = np.arange(n)
    plus[idx, idx] += steps
    minus[idx, idx] -= steps
    # divide by the representable step, not the nominal one
    width = plus[idx, idx] - minus[idx, idx]
    return plus, minus, width


def cga_gradient(f: Callable, x, h: float | None = None, workers: int = 1) -> np.ndarray:
    """Central-difference gradient ``(f(x + h e_i) - f(x - h e_i)) / 2h``.

    All ``2n`` evaluations are issued together: through ``f.batch`` when the
    objective provides one, else through a thread pool of ``workers``.
    Each point is evaluated independently, so the result does not depend on
    ``workers``.
    """
    x = np.asarray(x, dtype=float)
    plus, minus, width = _cga_points(x, h)
    vals = _evaluate_points(f, np.vstack([plus, minus]), workers)
    n = len(x)
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise NonFiniteObjectiveError(k % n, vals[k])
    return (vals[:n] - vals[n:]) / width


class _Counted:
    """Wraps the objective; tracks evaluations and the best point seen."""

    def __init__(self, f, cfg, value_and_gradient):
        self.f = f
        self.cfg = cfg
        self.vg = value_and_gradient
        self.evals = 0

    def value(self, x):
        self.evals += 1
        v = float(self.f(x))
        if not math.isfinite(v):
            raise NonFiniteObjectiveError(None, v)
        return v

    def value_grad(self, x):
        if self.vg is not None:
            self.evals += 1
            v, g = self.vg(x)
            return float(v), np.asarray(g, dtype=float)
        # one combined dispatch: the point itself plus the 2n stencil points
        plus, minus, width = _cga_points(x, self.cfg.grad_step)
        pts = np.vstack([x[None, :], plus, minus])
        vals = _evaluate_points(self.f, pts, self.cfg.workers)
        self.evals += len(pts)
        bad = ~np.isfinite(vals)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise NonFiniteObjectiveError(None if k == 0 else (k - 1) % len(x), vals[k])
        n = len(x)
        return float(vals[0]), (vals[1:n + 1] - vals[n + 1:]) / width


# --------------------------------------------------------------------------
# line search (minimisation of phi(t) = -f(x + t d))


def _cubic_min(a, fa, ga, b, fb, gb):
    d1 = ga + gb - 3 * (fa - fb) / (a - b)
    rad = d1 * d1 - ga * gb
    if rad < 0:
        return None
    d2 = math.copysign(math.sqrt(rad), b - a)
    denom = gb - ga + 2 * d2
    if denom == 0:
        return None
    return b - (b - a) * (gb + d2 - d1) / denom


def _strong_wolfe(phi, phi0, dphi0, t0, c1, c2, max_steps=30):
    """Nocedal & Wright line search with zoom. ``phi(t)`` returns
    ``(value, slope, payload)``. Returns ``(t, value, payload)`` or None."""
    t_prev, f_prev, g_prev = 0.0, phi0, dphi0
    t = t0
    for i in range(max_steps):
        ft, gt, pay = phi(t)
        if ft > phi0 + c1 * t * dphi0 or (i > 0 and ft >= f_prev):
            return _zoom(phi, phi0, dphi0, t_prev, f_prev, g_prev, t, ft, gt, c1, c2)
        if abs(gt) <= -c2 * dphi0:
            return t, ft, pay
        if gt >= 0:
            return _zoom(phi, phi0, dphi0, t, ft, gt, t_prev, f_prev, g_prev, c1, c2, best=(t, ft, pay))
        t_prev, f_prev, g_prev = t, ft, gt
        t = t * 2.0
    return None


def _zoom(phi, phi0, dphi0, lo, flo, glo, hi, fhi, ghi, c1, c2, best=None, max_steps=30):
    for _ in range(max_steps):
        t = _cubic_min(lo, flo, glo, hi, fhi, ghi)
        a, b = min(lo, hi), max(lo, hi)
        width = b - a
        if t is None or not (a + 0.1 * width <= t <= b - 0.1 * width):
            t = 0.5 * (lo + hi)
        ft, gt, pay = phi(t)
        if ft > phi0 + c1 * t * dphi0 or ft >= flo:
            hi, fhi, ghi = t, ft, gt
        else:
            if abs(gt) <= -c2 * dphi0:
                return t, ft, pay
            if gt * (hi - lo) >= 0:
                hi, fhi, ghi = lo, flo, glo
            lo, flo, glo = t, ft, gt
            best = (t, ft, pay)
        if abs(hi - lo) < 1e-16 * max(1.0, abs(lo)):
            break
    # accept the best sufficient-decrease point found, if any
    if best is not None and best[1] < phi0:
        return best
    return None


# --------------------------------------------------------------------------
# LBFGS


def _two_loop(g, S, Y, rho):
    q = g.copy()
    alphas = []
    for s, y, r in zip(reversed(S), reversed(Y), reversed(rho)):
        a = r * np.dot(s, q)
        alphas.append(a)
        q -= a * y
    if S:
        gamma = np.dot(S[-1], Y[-1]) / np.dot(Y[-1], Y[-1])
        q *= gamma
    for (s, y, r), a in zip(zip(S, Y, rho), reversed(alphas)):
        b = r * np.dot(y, q)
        q += (a - b) * s
    return -q


def lbfgs_maximize(f: Callable, x0, cfg: OptimizerConfig | None = None,
                   value_and_gradient: Callable | None = None, seed=None) -> OptimizationRun:
    """Maximise ``f`` from ``x0`` with limited-memory BFGS.

    Gradients come from :func:`cga_gradient` unless ``value_and_gradient``
    (returning ``(f(x), grad f(x))``) is supplied. Stops when every gradient
    component is at most ``cfg.grad_tolerance`` in magnitude (converged) or
    when the evaluation budget runs out or no further progress is possible
    (not converged). Accepted steps satisfy the strong Wolfe conditions, so
    the objective never decreases.
    """
    cfg = cfg or OptimizerConfig()
    start = time.perf_counter()
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must be finite")
    x_init = x.copy()
    obj = _Counted(f, cfg, value_and_gradient)
    fx, gx = obj.value_grad(x)
    # internal minimisation of F = -f
    F, G = -fx, -gx
    trace = [(obj.evals, fx)]
    S, Y, rho = deque(maxlen=cfg.memory), deque(maxlen=cfg.memory), deque(maxlen=cfg.memory)
    converged = False
    message = ""
    it = 0
    while True:
        gmax = float(np.max(np.abs(G))) if G.size else 0.0
        if gmax <= cfg.grad_tolerance:
            converged = True
            message = "gradient tolerance reached"
            break
        if obj.evals >= cfg.max_evaluations:
            message = "evaluation budget exhausted"
            break
        d = _two_loop(G, S, Y, rho)
        slope = float(np.dot(G, d))
        if not slope < 0:
            S.clear(); Y.clear(); rho.clear()
            d = -G
            slope = float(np.dot(G, d))
        t0 = 1.0 if S else min(1.0, 1.0 / max(gmax, 1e-300))

        def phi(t, d=d):
            xt = x + t * d
            v, g = obj.value_grad(xt)
            return -v, float(np.dot(-g, d)), (xt, -g)

        res = _strong_wolfe(phi, F, slope, t0, cfg.c1, cfg.c2)
        if res is None and S:
            S.clear(); Y.clear(); rho.clear()
            d = -G
            slope = float(np.dot(G, d))

            def phi(t, d=d):
                xt = x + t * d
                v, g = obj.value_grad(xt)
                return -v, float(np.dot(-g, d)), (xt, -g)

            res = _strong_wolfe(phi, F, slope, min(1.0, 1.0 / max(gmax, 1e-300)), cfg.c1, cfg.c2)
        if res is None:
            message = "line search could not make progress"
            break
        t, F_new, (x_new, G_new) = res
        s = x_new - x
        y = G_new - G
        sy = float(np.dot(s, y))
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            S.append(s); Y.append(y); rho.append(1.0 / sy)
        x, F, G = x_new, F_new, G_new
        it += 1
        trace.append((obj.evals, -F))
        if np.max(np.abs(s)) <= 1e-15 * max(1.0, float(np.max(np.abs(x)))):
            message = "step underflow"
            break
    return OptimizationRun(
        x0=x_init, x_final=x, best_value=-F, converged=converged,
        gradient_norm_final=float(np.max(np.abs(G))) if G.size else 0.0,
        objective_trace=trace, evaluations=obj.evals, iterations=it, seed=seed,
        wall_time=time.perf_counter() - start, message=message,
    )


# --------------------------------------------------------------------------
# multistart


@dataclass
class MultistartResult:
    best: OptimizationRun
    runs: list

    @property
    def values(self) -> np.ndarray:
        return np.array([r.best_value for r in self.runs])


def run_seeds(seed, count: int) -> list[np.random.SeedSequence]:
    """Child seed sequences; the first ``k`` children do not depend on ``count``."""
    if isinstance(seed, np.random.SeedSequence):
        # fresh copy: spawn() advances the parent's child counter
        seed = np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key)
    else:
        seed = np.random.SeedSequence(seed)
    return seed.spawn(count)


def multistart(f: Callable, sampler: Callable, restarts: int, seed,
               cfg: OptimizerConfig | None = None, value_and_gradient: Callable | None = None,
               workers: int = 1) -> MultistartResult:
    """Independent LBFGS runs from ``sampler(rng)`` starting points.

    Run ``i`` draws from a generator seeded with the ``i``-th child of
    ``seed``, so a larger ``restarts`` only appends runs. Ties on the best
    value go to the earliest run.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    cfg = cfg or OptimizerConfig()
    children = run_seeds(seed, restarts)

    def one(child):
        rng = make_rng(child)
        x0 = sampler(rng)
        run_seed = int(child.generate_state(1)[0])
        return lbfgs_maximize(f, x0, cfg, value_and_gradient=value_and_gradient, seed=run_seed)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(one, children))
    else:
        runs = [one(c) for c in children]
    best = max(runs, key=lambda r: r.best_value)
    return MultistartResult(best, runs)


# --------------------------------------------------------------------------
# initial points


def init_qaoa_informed(rng) -> tuple[float, float]:
    """(gamma, beta) uniform on [0, pi/4]^2, clear of the QAOA_1 barren plateaus."""
    rng = rng if isinstance(rng, np.random.Generator) else make_rng(rng)
    g, b = rng.uniform(0.0, np.pi / 4, size=2)
    return float(g), float(b)


def init_random(variant: str, g: Graph, rng, p: int = 1) -> AngleAssignment:
    """gamma ~ U[0, 2pi), beta and alpha ~ U[0, pi), shaped for ``variant``."""
    if variant not in VARIANTS:
        raise VariantError(f"unknown variant {variant!r}")
    rng = rng if isinstance(rng, np.random.Generator) else make_rng(rng)
    n, m = g.n, g.m
    blocks = []
    for _ in range(p):
        if variant == "QAOA":
            blocks.append([rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi)])
            continue
        gam = rng.uniform(0, 2 * np.pi, m)
        if variant in ("MA", "XEQY"):
            blocks.append(np.concatenate([gam, rng.uniform(0, np.pi, n)]))
        elif variant == "XY":
            blocks.append(np.concatenate([gam, rng.uniform(0, np.pi, n), rng.uniform(0, np.pi, n)]))
        else:
            blocks.append(np.concatenate([gam, rng.uniform(0, np.pi, n)]))
    x = np.concatenate([np.asarray(b, dtype=float) for b in blocks])
    return AngleAssignment.from_vector(variant, x, n, m, p)
