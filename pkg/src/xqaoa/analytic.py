"""Closed-form depth-1 expectation values of the MaxCut cost for QAOA,
multi-angle QAOA and the XQAOA mixer family.

Every edge term depends only on the edge's neighbourhood sets (e, d, F)
and is evaluated from products of cosines taken in a single linear pass.
Edge-scaled angles ``γ'_uv = γ_uv * w_uv`` are formed on every call.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from xqaoa._accel import njit, pick
from xqaoa.graphs import Graph, neighborhoods

__all__ = [
    "VARIANTS",
    "AngleAssignment",
    "AnsatzObjective",
    "StarGraphSpec",
    "VariantError",
    "edge_products",
    "expectation",
    "maqaoa1_edge_terms",
    "maqaoa1_expectation",
    "qaoa1_edge",
    "qaoa1_edge_terms",
    "qaoa1_expectation",
    "qaoa1_unweighted_edge",
    "star_qaoa1_optimum",
    "trig_identity_check",
    "xqaoa1_xeqy_expectation",
    "xqaoa1_xy_edge_terms",
    "xqaoa1_xy_expectation",
    "xqaoa1_y_edge_terms",
    "xqaoa1_y_expectation",
]

VARIANTS = ("QAOA", "MA", "XY", "XEQY", "Y")


class VariantError(ValueError):
    """Angle assignment does not match the requested ansatz variant."""


# --------------------------------------------------------------------------
# angle assignments


def _block_sizes(variant: str, n: int, m: int) -> tuple[int, int, int]:
    """Per-layer counts of free (gamma, beta, alpha) parameters."""
    return {
        "QAOA": (1, 1, 0),
        "MA": (m, n, 0),
        "XY": (m, n, n),
        "XEQY": (m, n, 0),
        "Y": (m, 0, n),
    }[variant]


@dataclass(frozen=True, eq=False)
class AngleAssignment:
    """Angles of a depth-``p`` ansatz, always stored in expanded form.

    ``gamma`` has shape ``(p, m)`` (one angle per edge), ``beta`` and
    ``alpha`` have shape ``(p, n)`` (one angle per vertex). The variant
    restricts which entries are free; the restriction is checked on
    construction. Angles are kept unwrapped; see :meth:`canonical`.
    """

    variant: str
    gamma: np.ndarray
    beta: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise VariantError(f"unknown variant {self.variant!r}")
        gamma = np.atleast_2d(np.asarray(self.gamma, dtype=float))
        beta = np.atleast_2d(np.asarray(self.beta, dtype=float))
        alpha = np.atleast_2d(np.asarray(self.alpha, dtype=float))
        if not (gamma.shape[0] == beta.shape[0] == alpha.shape[0]) or beta.shape != alpha.shape:
            raise VariantError("gamma/beta/alpha layer shapes disagree")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha", alpha)
        v = self.variant
        if v in ("QAOA", "MA") and np.any(alpha != 0):
            raise VariantError(f"{v} requires alpha = 0")
        if v == "Y" and np.any(beta != 0):
            raise VariantError("Y requires beta = 0")
        if v == "XEQY" and np.any(alpha != beta):
            raise VariantError("XEQY requires alpha = beta")
        if v == "QAOA":
            spread_g = gamma.shape[1] > 0 and np.ptp(gamma, axis=1).any()
            spread_b = beta.shape[1] > 0 and np.ptp(beta, axis=1).any()
            if spread_g or spread_b:
                raise VariantError("QAOA requires one shared gamma and beta per layer")

    @property
    def p(self) -> int:
        return self.gamma.shape[0]

    @property
    def n(self) -> int:
        return self.beta.shape[1]

    @property
    def m(self) -> int:
        return self.gamma.shape[1]

    @staticmethod
    def n_params(variant: str, n: int, m: int, p: int = 1) -> int:
        return p * sum(_block_sizes(variant, n, m))

    @property
    def num_params(self) -> int:
        return self.n_params(self.variant, self.n, self.m, self.p)

    @classmethod
    def from_vector(cls, variant: str, x, n: int, m: int, p: int = 1) -> "AngleAssignment":
        """Inverse of :meth:`to_vector`. Layers are concatenated blocks
        ``[gamma, beta, alpha]`` restricted to the variant's free entries."""
        x = np.asarray(x, dtype=float)
        ng, nb, na = _block_sizes(variant, n, m)
        size = ng + nb + na
        if x.shape != (p * size,):
            raise VariantError(f"{variant} with n={n}, m={m}, p={p} needs {p * size} parameters, got {x.shape}")
        blocks = x.reshape(p, size)
        g = np.broadcast_to(blocks[:, :ng], (p, m)) if ng == 1 else blocks[:, :ng]
        b = blocks[:, ng:ng + nb]
        a = blocks[:, ng + nb:]
        zeros = np.zeros((p, n))
        if variant == "QAOA":
            b = np.broadcast_to(b, (p, n))
            a = zeros
        elif variant == "MA":
            a = zeros
        elif variant == "XEQY":
            a = b
        elif variant == "Y":
            b = zeros
        return cls(variant, np.array(g), np.array(b), np.array(a))

    def to_vector(self) -> np.ndarray:
        parts = []
        for layer in range(self.p):
            g, b, a = self.gamma[layer], self.beta[layer], self.alpha[layer]
            if self.variant == "QAOA":
                parts.append([g[0] if g.size else 0.0, b[0] if b.size else 0.0])
            elif self.variant in ("MA", "XEQY"):
                parts.append(np.concatenate([g, b]))
            elif self.variant == "XY":
                parts.append(np.concatenate([g, b, a]))
            else:
                parts.append(np.concatenate([g, a]))
        return np.concatenate([np.asarray(q, dtype=float) for q in parts])

    @classmethod
    def qaoa(cls, gamma, beta, n: int, m: int) -> "AngleAssignment":
        """Shared-angle QAOA assignment; ``gamma``/``beta`` are scalars or length-p."""
        gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
        beta = np.atleast_1d(np.asarray(beta, dtype=float))
        p = len(gamma)
        return cls("QAOA", np.repeat(gamma[:, None], m, axis=1),
                   np.repeat(beta[:, None], n, axis=1), np.zeros((p, n)))

    def as_variant(self, variant: str) -> "AngleAssignment":
        """Relabel the same angles under another (compatible) variant."""
        return AngleAssignment(variant, self.gamma, self.beta, self.alpha)

    def layer(self, k: int) -> "AngleAssignment":
        return AngleAssignment(self.variant, self.gamma[k:k + 1], self.beta[k:k + 1], self.alpha[k:k + 1])

    def canonical(self, weights=None) -> "AngleAssignment":
        """Angles folded into reporting ranges: beta, alpha in [0, pi) and
        the effective edge angle ``gamma * w`` in [0, 2 pi)."""
        w = np.ones(self.m) if weights is None else np.asarray(weights, dtype=float)
        safe = np.where(w > 0, w, 1.0)
        g = np.mod(self.gamma * w, 2 * np.pi) / safe
        return AngleAssignment(self.variant, g, np.mod(self.beta, np.pi), np.mod(self.alpha, np.pi))


def _require(a: AngleAssignment, variant: str, g: Graph):
    if a.variant != variant:
        raise VariantError(f"expected a {variant} assignment, got {a.variant}")
    if a.p != 1:
        raise VariantError("closed-form expectations exist for p = 1 only")
    if a.m != g.m or a.n != g.n:
        raise VariantError(f"assignment shape (n={a.n}, m={a.m}) does not match graph (n={g.n}, m={g.m})")


# --------------------------------------------------------------------------
# neighbourhood cosine products


@njit
def _edge_products_jit(gp, e_ptr, e_edges, d_ptr, d_edges, f_ptr, f_u, f_v):
    m = gp.shape[0]
    out = np.empty((6, m))
    cg = np.cos(gp)
    for k in range(m):
        pe0 = 1.0
        for j in range(e_ptr[k], e_ptr[k + 1]):
            pe0 *= cg[e_edges[j]]
        pd0 = 1.0
        for j in range(d_ptr[k], d_ptr[k + 1]):
            pd0 *= cg[d_edges[j]]
        pef = 1.0
        pdf = 1.0
        pplus = 1.0
        pminus = 1.0
        for j in range(f_ptr[k], f_ptr[k + 1]):
            a = gp[f_u[j]]
            b = gp[f_v[j]]
            pdf *= cg[f_u[j]]
            pef *= cg[f_v[j]]
            pplus *= math.cos(a + b)
            pminus *= math.cos(a - b)
        out[0, k] = pe0 * pef
        out[1, k] = pd0 * pdf
        out[2, k] = pe0
        out[3, k] = pd0
        out[4, k] = pplus
        out[5, k] = pminus
    return out


def _segment_prod(values, ptr, m):
    out = np.ones(m)
    seg = np.repeat(np.arange(m), np.diff(ptr))
    np.multiply.at(out, seg, values)
    return out


def _edge_products_numpy(gp, e_ptr, e_edges, d_ptr, d_edges, f_ptr, f_u, f_v):
    m = gp.shape[0]
    cg = np.cos(gp)
    pe0 = _segment_prod(cg[e_edges], e_ptr, m)
    pd0 = _segment_prod(cg[d_edges], d_ptr, m)
    a, b = gp[f_u], gp[f_v]
    pdf = _segment_prod(cg[f_u], f_ptr, m)
    pef = _segment_prod(cg[f_v], f_ptr, m)
    pplus = _segment_prod(np.cos(a + b), f_ptr, m)
    pminus = _segment_prod(np.cos(a - b), f_ptr, m)
    return np.stack([pe0 * pef, pd0 * pdf, pe0, pd0, pplus, pminus])


_edge_products = pick(_edge_products_jit, _edge_products_numpy)


def edge_products(g: Graph, gamma_eff) -> np.ndarray:
    """Neighbourhood cosine products for every edge, shape ``(6, m)``.

    Rows: ``prod_{w in e} cos γ'_wv``, ``prod_{w in d} cos γ'_uw``, the same
    two products restricted to vertices outside F, then
    ``prod_{f in F} cos(γ'_uf + γ'_vf)`` and ``prod_{f in F} cos(γ'_uf - γ'_vf)``.
    Empty products are 1.
    """
    t = g.topology
    gp = np.ascontiguousarray(gamma_eff, dtype=np.float64)
    return _edge_products(gp, t.e_ptr, t.e_edges, t.d_ptr, t.d_edges, t.f_ptr, t.f_uedges, t.f_vedges)


# --------------------------------------------------------------------------
# per-variant edge terms


def qaoa1_edge_terms(g: Graph, gamma: float, beta: float) -> np.ndarray:
    w = g.weights
    gp = gamma * w
    pe, pd, pe0, pd0, pplus, pminus = edge_products(g, gp)
    return w / 2 + w / 4 * (
        math.sin(4 * beta) * np.sin(gp) * (pe + pd)
        + math.sin(2 * beta) ** 2 * pe0 * pd0 * (pplus - pminus)
    )


def qaoa1_expectation(g: Graph, gamma: float, beta: float) -> float:
    """QAOA_1 expectation of the weighted MaxCut cost at shared angles."""
    if g.m == 0:
        return 0.0
    return float(np.sum(qaoa1_edge_terms(g, gamma, beta)))


def qaoa1_edge(g: Graph, edge, gamma: float, beta: float) -> float:
    """Contribution of a single edge to :func:`qaoa1_expectation`."""
    nb = neighborhoods(g, edge)
    idx = g.edge_index
    w = g.weights

    def gp(a, b):
        return gamma * w[idx[(a, b) if a < b else (b, a)]]

    u, v = nb.u, nb.v
    pe = math.prod(math.cos(gp(x, v)) for x in nb.e)
    pd = math.prod(math.cos(gp(u, x)) for x in nb.d)
    pe0 = math.prod(math.cos(gp(x, v)) for x in nb.e - nb.F)
    pd0 = math.prod(math.cos(gp(u, x)) for x in nb.d - nb.F)
    pplus = math.prod(math.cos(gp(u, f) + gp(v, f)) for f in nb.F)
    pminus = math.prod(math.cos(gp(u, f) - gp(v, f)) for f in nb.F)
    wuv = w[idx[(u, v)]]
    return wuv / 2 + wuv / 4 * (
        math.sin(4 * beta) * math.sin(gp(u, v)) * (pe + pd)
        + math.sin(2 * beta) ** 2 * pe0 * pd0 * (pplus - pminus)
    )


def qaoa1_unweighted_edge(sizes, gamma: float, beta: float) -> float:
    """Unweighted QAOA_1 edge term from the neighbourhood sizes ``(|e|, |d|, |F|)``."""
    ne, nd, nf = (int(s) for s in sizes)
    if nf < 0 or nf > min(ne, nd):
        raise ValueError(f"inconsistent neighbourhood sizes {sizes}")
    c = math.cos(gamma)
    return 0.5 + 0.25 * (
        math.sin(4 * beta) * math.sin(gamma) * (c ** ne + c ** nd)
        + math.sin(2 * beta) ** 2 * c ** (ne + nd - 2 * nf) * (math.cos(2 * gamma) ** nf - 1)
    )


def maqaoa1_edge_terms(g: Graph, a: AngleAssignment) -> np.ndarray:
    _require(a, "MA", g)
    w = g.weights
    gp = a.gamma[0] * w
    b = a.beta[0]
    bu, bv = b[g.eu], b[g.ev]
    pe, pd, pe0, pd0, pplus, pminus = edge_products(g, gp)
    sg = np.sin(gp)
    return w / 2 + w / 2 * (
        np.cos(2 * bu) * np.sin(2 * bv) * sg * pe
        + np.sin(2 * bu) * np.cos(2 * bv) * sg * pd
        + 0.5 * np.sin(2 * bu) * np.sin(2 * bv) * pe0 * pd0 * (pplus - pminus)
    )


def maqaoa1_expectation(g: Graph, a: AngleAssignment) -> float:
    """MA-QAOA_1 expectation (per-edge gamma, per-vertex beta)."""
    if g.m == 0:
        _require(a, "MA", g)
        return 0.0
    return float(np.sum(maqaoa1_edge_terms(g, a)))


def _xy_terms(g: Graph, gamma, beta, alpha) -> np.ndarray:
    w = g.weights
    gp = gamma * w
    bu, bv = beta[g.eu], beta[g.ev]
    au, av = alpha[g.eu], alpha[g.ev]
    pe, pd, pe0, pd0, pplus, pminus = edge_products(g, gp)
    c2au, c2av = np.cos(2 * au), np.cos(2 * av)
    rest = pe0 * pd0
    return w / 2 + w / 2 * (
        c2au * c2av * np.sin(gp) * (np.cos(2 * bu) * np.sin(2 * bv) * pe + np.sin(2 * bu) * np.cos(2 * bv) * pd)
        - 0.5 * np.sin(2 * au) * np.sin(2 * av) * rest * (pplus + pminus)
        + 0.5 * c2au * np.sin(2 * bu) * c2av * np.sin(2 * bv) * rest * (pplus - pminus)
    )


def xqaoa1_xy_edge_terms(g: Graph, a: AngleAssignment) -> np.ndarray:
    _require(a, "XY", g)
    return _xy_terms(g, a.gamma[0], a.beta[0], a.alpha[0])


def xqaoa1_xy_expectation(g: Graph, a: AngleAssignment) -> float:
    """XQAOA_1 expectation with independent X and Y mixer angles."""
    _require(a, "XY", g)
    if g.m == 0:
        return 0.0
    return float(np.sum(_xy_terms(g, a.gamma[0], a.beta[0], a.alpha[0])))


def xqaoa1_xeqy_expectation(g: Graph, a: AngleAssignment) -> float:
    """XQAOA_1 expectation with one shared X/Y angle per qubit."""
    _require(a, "XEQY", g)
    if g.m == 0:
        return 0.0
    return float(np.sum(_xy_terms(g, a.gamma[0], a.beta[0], a.beta[0])))


def xqaoa1_y_edge_terms(g: Graph, a: AngleAssignment) -> np.ndarray:
    _require(a, "Y", g)
    w = g.weights
    gp = a.gamma[0] * w
    al = a.alpha[0]
    _, _, pe0, pd0, pplus, pminus = edge_products(g, gp)
    return w / 2 - w / 4 * np.sin(2 * al[g.eu]) * np.sin(2 * al[g.ev]) * pe0 * pd0 * (pplus + pminus)


def xqaoa1_y_expectation(g: Graph, a: AngleAssignment) -> float:
    """XQAOA_1 expectation with a Y-only mixer."""
    if g.m == 0:
        _require(a, "Y", g)
        return 0.0
    return float(np.sum(xqaoa1_y_edge_terms(g, a)))


def expectation(g: Graph, a: AngleAssignment) -> float:
    """Dispatch on ``a.variant`` to the matching closed form."""
    if a.variant == "QAOA":
        _require(a, "QAOA", g)
        if g.m == 0:
            return 0.0
        b = a.beta[0, 0] if a.n else 0.0
        return qaoa1_expectation(g, float(a.gamma[0, 0]), float(b))
    return {
        "MA": maqaoa1_expectation,
        "XY": xqaoa1_xy_expectation,
        "XEQY": xqaoa1_xeqy_expectation,
        "Y": xqaoa1_y_expectation,
    }[a.variant](g, a)


# --------------------------------------------------------------------------
# fused evaluator for optimisation


@njit
def _xy_total_row(gp, cg, sg, c2a, s2a, c2b, s2b, w, eu, ev,
                  e_ptr, e_edges, d_ptr, d_edges, f_ptr, f_u, f_v):
    total = 0.0
    for k in range(gp.shape[0]):
        u = eu[k]
        v = ev[k]
        pe0 = 1.0
        for j in range(e_ptr[k], e_ptr[k + 1]):
            pe0 *= cg[e_edges[j]]
        pd0 = 1.0
        for j in range(d_ptr[k], d_ptr[k + 1]):
            pd0 *= cg[d_edges[j]]
        pef = 1.0
        pdf = 1.0
        pplus = 1.0
        pminus = 1.0
        for j in range(f_ptr[k], f_ptr[k + 1]):
            a = gp[f_u[j]]
            b = gp[f_v[j]]
            pdf *= cg[f_u[j]]
            pef *= cg[f_v[j]]
            pplus *= math.cos(a + b)
            pminus *= math.cos(a - b)
        rest = pe0 * pd0
        cc = c2a[u] * c2a[v]
        t = cc * sg[k] * (c2b[u] * s2b[v] * pe0 * pef + s2b[u] * c2b[v] * pd0 * pdf)
        t -= 0.5 * s2a[u] * s2a[v] * rest * (pplus + pminus)
        t += 0.5 * cc * s2b[u] * s2b[v] * rest * (pplus - pminus)
        total += 0.5 * w[k] * (1.0 + t)
    return total


@njit
def _xy_total_batch_jit(gamma, beta, alpha, w, eu, ev,
                        e_ptr, e_edges, d_ptr, d_edges, f_ptr, f_u, f_v):
    rows = gamma.shape[0]
    out = np.empty(rows)
    for r in range(rows):
        gp = gamma[r] * w
        out[r] = _xy_total_row(
            gp, np.cos(gp), np.sin(gp),
            np.cos(2 * alpha[r]), np.sin(2 * alpha[r]),
            np.cos(2 * beta[r]), np.sin(2 * beta[r]),
            w, eu, ev, e_ptr, e_edges, d_ptr, d_edges, f_ptr, f_u, f_v,
        )
    return out


class AnsatzObjective:
    """Flat-vector objective ``x -> <C>`` for a depth-1 ansatz variant.

    The parameter layout is that of :meth:`AngleAssignment.to_vector`.
    With ``freeze_gamma=True`` (XEQY only) the vector holds just the
    per-vertex angles and every edge angle is held at zero.
    """

    def __init__(self, g: Graph, variant: str, freeze_gamma: bool = False):
        if variant not in VARIANTS:
            raise VariantError(f"unknown variant {variant!r}")
        if freeze_gamma and variant != "XEQY":
            raise VariantError("freeze_gamma is only defined for XEQY")
        self.graph = g
        self.variant = variant
        self.freeze_gamma = freeze_gamma
        self.n_params = g.n if freeze_gamma else AngleAssignment.n_params(variant, g.n, g.m)
        self._use_jit = pick(_xy_total_batch_jit, None) is not None

    def angles(self, x) -> AngleAssignment:
        x = np.asarray(x, dtype=float)
        if self.freeze_gamma:
            x = np.concatenate([np.zeros(self.graph.m), x])
        return AngleAssignment.from_vector(self.variant, x, self.graph.n, self.graph.m)

    def _expand(self, X):
        """Rows of flat vectors -> (gamma, beta, alpha) arrays of shape (rows, m|n)."""
        g = self.graph
        n, m = g.n, g.m
        rows = X.shape[0]
        zeros_n = np.zeros((rows, n))
        if self.freeze_gamma:
            return np.zeros((rows, m)), X, X
        v = self.variant
        if v == "QAOA":
            return (np.repeat(X[:, :1], m, axis=1), np.repeat(X[:, 1:2], n, axis=1), zeros_n)
        gam = X[:, :m]
        if v == "MA":
            return gam, X[:, m:], zeros_n
        if v == "XEQY":
            return gam, X[:, m:], X[:, m:]
        if v == "XY":
            return gam, X[:, m:m + n], X[:, m + n:]
        return gam, zeros_n, X[:, m:]

    def batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_params:
            raise VariantError(f"expected {self.n_params} parameters, got {X.shape[1]}")
        g = self.graph
        if g.m == 0:
            return np.zeros(X.shape[0])
        gam, beta, alpha = self._expand(X)
        if self._use_jit:
            t = g.topology
            return _xy_total_batch_jit(
                np.ascontiguousarray(gam), np.ascontiguousarray(beta), np.ascontiguousarray(alpha),
                t.weights, t.eu, t.ev, t.e_ptr, t.e_edges, t.d_ptr, t.d_edges,
                t.f_ptr, t.f_uedges, t.f_vedges,
            )
        return np.array([np.sum(_xy_terms(g, gam[r], beta[r], alpha[r])) for r in range(X.shape[0])])

    def __call__(self, x) -> float:
        return float(self.batch(np.asarray(x, dtype=np.float64)[None, :])[0])


# --------------------------------------------------------------------------
# star graphs


@dataclass(frozen=True)
class StarGraphSpec:
    """Star ``S_k`` with ``k`` leaves."""

    k: int

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValueError("a star needs at least one leaf")


def _g_star(gamma, k):
    return np.sin(gamma) * (1.0 + np.cos(gamma) ** (k - 1))


def star_qaoa1_optimum(s: StarGraphSpec | int, grid: int = 100_000):
    """Best QAOA_1 approximation ratio on the star ``S_k``.

    Every edge contributes ``1/2 + 1/4 sin 4β g_k(γ)`` with
    ``g_k(γ) = sin γ (1 + cos^{k-1} γ)``; the β factor peaks at ``β = π/8``
    and ``g_k`` is maximised on a dense grid over ``[0, 2π)`` followed by a
    bounded local refinement around the best grid point.

    Returns ``(ratio, gamma_star, beta_star)``.
    """
    k = s.k if isinstance(s, StarGraphSpec) else StarGraphSpec(int(s)).k
    xs = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = _g_star(xs, k)
    i = int(np.argmax(vals))
    step = xs[1] - xs[0]
    res = minimize_scalar(lambda t: -_g_star(t, k), bounds=(xs[i] - step, xs[i] + step),
                          method="bounded", options={"xatol": 1e-13})
    gstar, gmax = (float(res.x), -float(res.fun)) if -res.fun >= vals[i] else (float(xs[i]), float(vals[i]))
    return 0.5 + 0.25 * gmax, gstar, math.pi / 8


# --------------------------------------------------------------------------
# product-to-sum identities


TRIG_IDENTITY_CAP = 12


def trig_identity_check(f: int, x, y) -> dict:
    """Residuals of the cosine product-to-sum identities at ``(x, y)``.

    Each right-hand side is summed over all ``2**f`` bit patterns ``mu``
    with terms ``prod_i cos^{1-mu_i} x_i cos^{1-mu_i} y_i sin^{mu_i} x_i sin^{mu_i} y_i``.
    Keys: ``"difference"`` (prod cos(x - y)), ``"sum"`` (prod cos(x + y)),
    ``"even"`` (their sum) and ``"odd"`` (their difference).
    """
    f = int(f)
    if f < 0 or f > TRIG_IDENTITY_CAP:
        raise ValueError(f"f must be in 0..{TRIG_IDENTITY_CAP}, got {f}")
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != (f,) or y.shape != (f,):
        raise ValueError("x and y must both have length f")
    lhs_diff = float(np.prod(np.cos(x - y)))
    lhs_sum = float(np.prod(np.cos(x + y)))
    cc = np.cos(x) * np.cos(y)
    ss = np.sin(x) * np.sin(y)
    even = odd = 0.0
    for mu in itertools.product((0, 1), repeat=f):
        term = 1.0
        for i, bit in enumerate(mu):
            term *= ss[i] if bit else cc[i]
        if sum(mu) % 2:
            odd += term
        else:
            even += term
    rhs_diff = even + odd
    rhs_sum = even - odd
    return {
        "difference": abs(lhs_diff - rhs_diff),
        "sum": abs(lhs_sum - rhs_sum),
        "even": abs((lhs_diff + lhs_sum) - 2 * even),
        "odd": abs((lhs_diff - lhs_sum) - 2 * odd),
    }
