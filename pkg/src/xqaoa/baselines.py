"""Classical baselines (relaxed sine program, Goemans-Williamson) and cut
extraction from converged X=Y angles."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from xqaoa.analytic import AngleAssignment, VariantError
from xqaoa.graphs import CutResult, Graph, cut_value
from xqaoa.optimize import OptimizerConfig, make_rng, multistart

__all__ = [
    "GW_WORST_ANGLE",
    "GwCertificate",
    "NonTransitionedWarning",
    "RelaxedSolution",
    "SNAP_TOLERANCE",
    "classical_relaxed",
    "cr_runs",
    "cr_objective",
    "default_rank",
    "extract_cut_xeqy",
    "gw_certificate",
    "gw_constant",
    "gw_round",
    "gw_solve",
    "sdp_objective",
    "snap_xeqy",
]

SNAP_TOLERANCE = math.pi / 8
GW_WORST_ANGLE = 2.331122


class NonTransitionedWarning(UserWarning):
    """Some X=Y vertex angles were not near pi/4 or 3pi/4."""


@dataclass(frozen=True, eq=False)
class RelaxedSolution:
    kind: str
    objective_value: float
    theta: np.ndarray | None = None
    vectors: np.ndarray | None = None
    converged: bool = True

    def __post_init__(self):
        if self.kind not in ("CR", "GW"):
            raise ValueError(f"unknown relaxation kind {self.kind!r}")
        for name in ("theta", "vectors"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.array(arr, dtype=float)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "objective_value": self.objective_value, "converged": self.converged}
        if self.theta is not None:
            out["theta"] = self.theta.tolist()
        if self.vectors is not None:
            out["vectors"] = self.vectors.tolist()
        return out


@dataclass(frozen=True)
class GwCertificate:
    sdp_value: float
    expected_cut: float
    guarantee_constant: float
    worst_angle: float

    @property
    def holds(self) -> bool:
        return self.expected_cut >= self.guarantee_constant * self.sdp_value - 1e-9

    def to_dict(self) -> dict:
        return {
            "sdp_value": self.sdp_value,
            "expected_cut": self.expected_cut,
            "guarantee_constant": self.guarantee_constant,
            "worst_angle": self.worst_angle,
        }


# --------------------------------------------------------------------------
# relaxed sine program


def cr_objective(g: Graph, theta) -> float:
    """sum_uv w/2 (1 - sin t_u sin t_v)."""
    s = np.sin(np.asarray(theta, dtype=float))
    return float(0.5 * np.sum(g.weights * (1.0 - s[g.eu] * s[g.ev])))


def _cr_value_and_gradient(g: Graph):
    eu, ev, w = g.eu, g.ev, g.weights

    def vg(theta):
        s, c = np.sin(theta), np.cos(theta)
        val = 0.5 * np.sum(w * (1.0 - s[eu] * s[ev]))
        grad = np.zeros_like(theta)
        np.add.at(grad, eu, -0.5 * w * c[eu] * s[ev])
        np.add.at(grad, ev, -0.5 * w * s[eu] * c[ev])
        return val, grad

    return vg


def cr_runs(g: Graph, restarts: int = 100, seed=0, cfg: OptimizerConfig | None = None):
    """All multistart runs of the sine relaxation and the rounded cut of each."""
    vg = _cr_value_and_gradient(g)
    f = lambda t: vg(np.asarray(t, dtype=float))[0]
    sampler = lambda rng: rng.uniform(0.0, 2 * np.pi, g.n)
    res = multistart(f, sampler, restarts, seed, cfg, value_and_gradient=vg)
    cuts = []
    for run in res.runs:
        z = (np.sin(run.x_final) < 0).astype(np.int8)
        c = cut_value(g, z)
        cuts.append(CutResult(z, c, _ratio(g, c)))
    return res, cuts


def classical_relaxed(g: Graph, restarts: int = 100, seed=0, cfg: OptimizerConfig | None = None):
    """Multistart maximisation of the sine relaxation, rounded by the sign of sin(theta).

    Every restart is rounded; the best rounded cut is returned together
    with the relaxed solution it came from.
    """
    res, cuts = cr_runs(g, restarts, seed, cfg)
    k = max(range(len(cuts)), key=lambda i: cuts[i].cut_value)
    run = res.runs[k]
    sol = RelaxedSolution("CR", cr_objective(g, run.x_final), theta=run.x_final, converged=run.converged)
    return sol, cuts[k]


def _ratio(g: Graph, value: float):
    if g.optimum is None or g.optimum <= 0:
        return None
    return value / g.optimum


# --------------------------------------------------------------------------
# Goemans-Williamson


def default_rank(n: int) -> int:
    return math.ceil(math.sqrt(2 * n)) + 1


def sdp_objective(g: Graph, vectors) -> float:
    """sum_uv w/2 (1 - v_u . v_v)."""
    V = np.asarray(vectors, dtype=float)
    dots = np.einsum("ij,ij->i", V[g.eu], V[g.ev])
    return float(0.5 * np.sum(g.weights * (1.0 - dots)))


def _normalise(X):
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return X / np.where(norms > 0, norms, 1.0), norms


def _bm_value_and_gradient(g: Graph, n: int, r: int):
    eu, ev, w = g.eu, g.ev, g.weights

    def vg(x):
        X = x.reshape(n, r)
        V, norms = _normalise(X)
        dots = np.einsum("ij,ij->i", V[eu], V[ev])
        val = 0.5 * np.sum(w * (1.0 - dots))
        dV = np.zeros_like(V)
        np.add.at(dV, eu, -0.5 * w[:, None] * V[ev])
        np.add.at(dV, ev, -0.5 * w[:, None] * V[eu])
        # project onto the tangent space of the sphere, chain through the norm
        radial = np.einsum("ij,ij->i", dV, V)[:, None]
        dX = (dV - radial * V) / np.where(norms > 0, norms, 1.0)
        return val, dX.ravel()

    return vg


def gw_solve(g: Graph, rank: int | None = None, seed=0, restarts: int = 5,
             cfg: OptimizerConfig | None = None) -> RelaxedSolution:
    """Low-rank factorised vector program: unit vectors on S^(r-1).

    Rows of an unconstrained ``n x r`` matrix are normalised before the
    objective is evaluated, so LBFGS works on an unconstrained problem.
    """
    r = default_rank(g.n) if rank is None else int(rank)
    if r < 2:
        raise ValueError("rank must be >= 2")
    n = g.n
    vg = _bm_value_and_gradient(g, n, r)
    f = lambda x: vg(np.asarray(x, dtype=float))[0]
    cfg = cfg or OptimizerConfig(grad_tolerance=1e-8)
    sampler = lambda rng: rng.standard_normal(n * r)
    res = multistart(f, sampler, restarts, seed, cfg, value_and_gradient=vg)
    V, _ = _normalise(res.best.x_final.reshape(n, r))
    return RelaxedSolution("GW", sdp_objective(g, V), vectors=V, converged=res.best.converged)


def _check_gw(sol: RelaxedSolution):
    if sol.kind != "GW" or sol.vectors is None:
        raise ValueError("expected a GW solution with vectors")


def gw_round(g: Graph, sol: RelaxedSolution, trials: int = 100, seed=0):
    """Random-hyperplane rounding. A zero inner product goes to side 0."""
    _check_gw(sol)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(seed)
    R = rng.standard_normal((trials, sol.vectors.shape[1]))
    Z = (sol.vectors @ R.T < 0).astype(np.int8)  # shape (n, trials)
    if g.m:
        values = (Z[g.eu] != Z[g.ev]).T.astype(float) @ g.weights
    else:
        values = np.zeros(trials)
    k = int(np.argmax(values))
    best = CutResult(Z[:, k].copy(), float(values[k]), _ratio(g, float(values[k])))
    return best, values.tolist()


def _gw_ratio(theta):
    return (2.0 / np.pi) * theta / (1.0 - np.cos(theta))


def gw_constant() -> tuple[float, float]:
    """Minimum over (0, pi] of (2/pi) theta / (1 - cos theta) and its argmin."""
    res = minimize_scalar(_gw_ratio, bounds=(1e-3, np.pi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.fun), float(res.x)


def gw_certificate(g: Graph, sol: RelaxedSolution) -> GwCertificate:
    """Exact expected rounded cut, sum w arccos(v_u . v_v) / pi."""
    _check_gw(sol)
    V = sol.vectors
    dots = np.clip(np.einsum("ij,ij->i", V[g.eu], V[g.ev]), -1.0, 1.0)
    expected = float(np.sum(g.weights * np.arccos(dots)) / np.pi)
    const, theta = gw_constant()
    return GwCertificate(sdp_objective(g, V), expected, const, theta)


# --------------------------------------------------------------------------
# X=Y cut extraction


@dataclass
class SnappedAngles:
    angles: AngleAssignment
    swaps: np.ndarray  # 1 where the effective edge angle snapped to pi
    beta_targets: np.ndarray  # 0 for pi/4, 1 for 3pi/4
    gamma_distance: np.ndarray
    beta_distance: np.ndarray
    flagged: tuple = field(default_factory=tuple)


def snap_xeqy(g: Graph, a: AngleAssignment) -> SnappedAngles:
    """Round ``gamma * w`` to {0, pi, 2pi} mod 2pi and beta to {pi/4, 3pi/4} mod pi."""
    if a.variant != "XEQY" or a.p != 1:
        raise VariantError("cut extraction needs a depth-1 XEQY assignment")
    if a.n != g.n or a.m != g.m:
        raise VariantError("assignment does not match graph size")
    w = g.weights
    eff = a.gamma[0] * w
    red = np.mod(eff, 2 * np.pi)
    k = np.rint(red / np.pi)  # 0, 1 or 2
    swaps = (k == 1).astype(np.int8)
    gdist = np.abs(red - k * np.pi)
    safe = np.where(w > 0, w, 1.0)
    gamma = np.where(w > 0, (eff - red + k * np.pi) / safe, 0.0)

    b = np.mod(a.beta[0], np.pi)
    d1 = np.abs(b - np.pi / 4)
    d3 = np.abs(b - 3 * np.pi / 4)
    upper = (d3 < d1).astype(np.int8)
    bdist = np.minimum(d1, d3)
    beta = a.beta[0] - b + np.where(upper, 3 * np.pi / 4, np.pi / 4)
    flagged = tuple(int(i) for i in np.flatnonzero(bdist > SNAP_TOLERANCE))
    snapped = AngleAssignment("XEQY", gamma[None, :], beta[None, :], beta[None, :])
    return SnappedAngles(snapped, swaps, upper, gdist, bdist, flagged)


def extract_cut_xeqy(g: Graph, a: AngleAssignment) -> CutResult:
    """Read a classical cut off converged X=Y angles.

    A vertex whose snapped angle is pi/4 reads ``1 - s`` and one at 3pi/4
    reads ``s``, where ``s`` is the parity of incident edges snapped to pi.
    Vertices further than pi/8 from both targets are flagged and rounded
    to the nearer one.
    """
    snap = snap_xeqy(g, a)
    parity = np.zeros(g.n, dtype=np.int64)
    if g.m:
        np.add.at(parity, g.eu, snap.swaps)
        np.add.at(parity, g.ev, snap.swaps)
    parity &= 1
    z = np.where(snap.beta_targets == 1, parity, 1 - parity).astype(np.int8)
    if snap.flagged:
        warnings.warn(f"{len(snap.flagged)} vertex angle(s) not transitioned: {list(snap.flagged)}",
                      NonTransitionedWarning, stacklevel=2)
    c = cut_value(g, z)
    return CutResult(z, c, _ratio(g, c), snap.flagged)
