"""Dense statevector simulation of QAOA / MA-QAOA / XQAOA circuits of any depth.

Qubit ``i`` is vertex ``i`` and the basis index ``z`` stores its bit at
position ``i`` (little-endian). One layer applies the diagonal phase
``exp(-i sum_uv γ_uv C_uv)`` and then, on every qubit, ``exp(-i β X)``
followed by ``exp(-i α Y)``. Global phases are never tracked.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from xqaoa._accel import njit, pick
from xqaoa.analytic import AngleAssignment, VariantError
from xqaoa.graphs import Graph

__all__ = [
    "MAX_QUBITS",
    "SimulatorError",
    "SimulatorObjective",
    "Statevector",
    "build_state",
    "cut_values",
    "expectation",
    "expectation_and_gradient",
    "load_statevector",
    "sample",
    "save_statevector",
    "shot_expectation",
]

MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10


class SimulatorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits > MAX_QUBITS:
            raise SimulatorError(f"{self.n_qubits} qubits exceeds the cap of {MAX_QUBITS}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise SimulatorError("amplitude vector has the wrong length")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOLERANCE:
            raise SimulatorError("state is not normalised")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_size(n):
    if n > MAX_QUBITS:
        raise SimulatorError(f"graph with {n} vertices exceeds the simulator cap of {MAX_QUBITS} qubits")


# --------------------------------------------------------------------------
# kernels


@njit
def _cut_diag_jit(n, eu, ev, w):
    # edge-outer and branch-free so the inner loop vectorises
    dim = 1 << n
    out = np.zeros(dim)
    for k in range(eu.shape[0]):
        u = eu[k]
        v = ev[k]
        wk = w[k]
        for z in range(dim):
            out[z] += wk * (((z >> u) ^ (z >> v)) & 1)
    return out


def _cut_diag_numpy(n, eu, ev, w):
    z = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n)
    for u, v, wt in zip(eu, ev, w):
        out += wt * (((z >> u) ^ (z >> v)) & 1)
    return out


_cut_diag = pick(_cut_diag_jit, _cut_diag_numpy)


def cut_values(g: Graph) -> np.ndarray:
    """``C(z)`` for every basis index ``z`` (read-only, cached per graph)."""
    _check_size(g.n)
    return _cached_diag(g)


@lru_cache(maxsize=4)
def _cached_diag(g: Graph) -> np.ndarray:
    out = _cut_diag(g.n, g.eu, g.ev, g.weights)
    out.setflags(write=False)
    return out


@njit(fastmath=True)
def _apply_phase_jit(psi, eu, ev, gw):
    n = 0
    while (1 << n) < psi.shape[0]:
        n += 1
    phase = _cut_diag_jit(n, eu, ev, gw)
    for z in range(psi.shape[0]):
        psi[z] *= complex(math.cos(phase[z]), -math.sin(phase[z]))


def _apply_phase_numpy(psi, eu, ev, gw):
    z = np.arange(psi.shape[0], dtype=np.int64)
    phase = np.zeros(psi.shape[0])
    for u, v, c in zip(eu, ev, gw):
        phase += c * (((z >> u) ^ (z >> v)) & 1)
    psi *= np.exp(-1j * phase)


@njit(fastmath=True)
def _apply_1q_jit(psi, q, u00, u01, u10, u11):
    stride = 1 << q
    low = stride - 1
    for i in range(psi.shape[0] >> 1):
        j = ((i >> q) << (q + 1)) | (i & low)
        a0 = psi[j]
        a1 = psi[j + stride]
        psi[j] = u00 * a0 + u01 * a1
        psi[j + stride] = u10 * a0 + u11 * a1


def _apply_1q_numpy(psi, q, u00, u01, u10, u11):
    view = psi.reshape(-1, 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = u00 * a0 + u01 * a1
    view[:, 1, :] = u10 * a0 + u11 * a1


@njit(fastmath=True)
def _adjoint_1q_jit(lam, psi, q, u00, u01, u10, u11):
    # overlaps o_ab = sum conj(lam_a) psi_b over qubit-q pairs, then apply u to both
    stride = 1 << q
    low = stride - 1
    o00 = 0j
    o01 = 0j
    o10 = 0j
    o11 = 0j
    for i in range(psi.shape[0] >> 1):
        j = ((i >> q) << (q + 1)) | (i & low)
        p0 = psi[j]
        p1 = psi[j + stride]
        l0 = lam[j]
        l1 = lam[j + stride]
        c0 = l0.conjugate()
        c1 = l1.conjugate()
        o00 += c0 * p0
        o01 += c0 * p1
        o10 += c1 * p0
        o11 += c1 * p1
        psi[j] = u00 * p0 + u01 * p1
        psi[j + stride] = u10 * p0 + u11 * p1
        lam[j] = u00 * l0 + u01 * l1
        lam[j + stride] = u10 * l0 + u11 * l1
    return o00, o01, o10, o11


def _adjoint_1q_numpy(lam, psi, q, u00, u01, u10, u11):
    lv = lam.reshape(-1, 2, 1 << q)
    pv = psi.reshape(-1, 2, 1 << q)
    o = (np.vdot(lv[:, 0, :], pv[:, 0, :]), np.vdot(lv[:, 0, :], pv[:, 1, :]),
         np.vdot(lv[:, 1, :], pv[:, 0, :]), np.vdot(lv[:, 1, :], pv[:, 1, :]))
    _apply_1q_numpy(psi, q, u00, u01, u10, u11)
    _apply_1q_numpy(lam, q, u00, u01, u10, u11)
    return o


@njit(fastmath=True)
def _phase_pair_jit(lam, psi, phase_diag, scale):
    for z in range(psi.shape[0]):
        ph = scale * phase_diag[z]
        f = complex(math.cos(ph), -math.sin(ph))
        psi[z] *= f
        lam[z] *= f


def _phase_pair_numpy(lam, psi, phase_diag, scale):
    f = np.exp(-1j * scale * phase_diag)
    psi *= f
    lam *= f


@njit(fastmath=True)
def _edge_overlaps_jit(lam, psi, eu, ev):
    m = eu.shape[0]
    dim = psi.shape[0]
    t = np.empty(dim)
    for z in range(dim):
        t[z] = (lam[z].conjugate() * psi[z]).imag
    out = np.zeros(m)
    for k in range(m):
        u = eu[k]
        v = ev[k]
        acc = 0.0
        for z in range(dim):
            acc += t[z] * (((z >> u) ^ (z >> v)) & 1)
        out[k] = acc
    return out


def _edge_overlaps_numpy(lam, psi, eu, ev):
    z = np.arange(psi.shape[0], dtype=np.int64)
    t = (np.conj(lam) * psi).imag
    return np.array([np.sum(t[(((z >> u) ^ (z >> v)) & 1) == 1]) for u, v in zip(eu, ev)])


@njit
def _streaming_expectation_jit(psi, eu, ev, w):
    total = 0.0
    for z in range(psi.shape[0]):
        p = psi[z].real ** 2 + psi[z].imag ** 2
        if p == 0.0:
            continue
        s = 0.0
        for k in range(eu.shape[0]):
            if ((z >> eu[k]) ^ (z >> ev[k])) & 1:
                s += w[k]
        total += p * s
    return total


def _streaming_expectation_numpy(psi, eu, ev, w):
    return float(np.dot(np.abs(psi) ** 2, _cut_diag_numpy(int(np.log2(psi.shape[0])), eu, ev, w)))


_apply_phase = pick(_apply_phase_jit, _apply_phase_numpy)
_apply_1q = pick(_apply_1q_jit, _apply_1q_numpy)
_adjoint_1q = pick(_adjoint_1q_jit, _adjoint_1q_numpy)
_phase_pair = pick(_phase_pair_jit, _phase_pair_numpy)
_edge_overlaps = pick(_edge_overlaps_jit, _edge_overlaps_numpy)
_streaming_expectation = pick(_streaming_expectation_jit, _streaming_expectation_numpy)


def _mixer(beta, alpha):
    """2x2 matrix of ``exp(-i α Y) exp(-i β X)``."""
    cb, sb = math.cos(beta), math.sin(beta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    rx = np.array([[cb, -1j * sb], [-1j * sb, cb]])
    ry = np.array([[ca, -sa], [sa, ca]])
    return ry @ rx


def _rx(beta):
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(alpha):
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _apply(psi, q, u):
    _apply_1q(psi, q, complex(u[0, 0]), complex(u[0, 1]), complex(u[1, 0]), complex(u[1, 1]))


# --------------------------------------------------------------------------
# public operations


def _validate(g: Graph, angles: AngleAssignment):
    _check_size(g.n)
    if angles.n != g.n or angles.m != g.m:
        raise VariantError(f"angles (n={angles.n}, m={angles.m}) do not match graph (n={g.n}, m={g.m})")
    if angles.p < 1:
        raise VariantError("need at least one layer")


def _evolve(g: Graph, angles: AngleAssignment) -> np.ndarray:
    n = g.n
    psi = np.full(1 << n, 1.0 / math.sqrt(1 << n), dtype=np.complex128)
    use_y = angles.variant in ("XY", "XEQY", "Y")
    for layer in range(angles.p):
        _apply_phase(psi, g.eu, g.ev, angles.gamma[layer] * g.weights)
        for q in range(n):
            b = angles.beta[layer, q]
            a = angles.alpha[layer, q] if use_y else 0.0
            _apply(psi, q, _mixer(b, a))
    return psi


def build_state(g: Graph, angles: AngleAssignment) -> Statevector:
    """Output state of the ``angles.p``-layer ansatz on ``g`` from ``|+...+>``."""
    _validate(g, angles)
    return Statevector(g.n, _evolve(g, angles))


def expectation(psi: Statevector, g: Graph) -> float:
    """``<psi| C |psi>`` streamed over basis states."""
    if psi.n_qubits != g.n:
        raise SimulatorError(f"state has {psi.n_qubits} qubits, graph has {g.n} vertices")
    return float(_streaming_expectation(psi.amplitudes, g.eu, g.ev, g.weights))


def expectation_and_gradient(g: Graph, angles: AngleAssignment):
    """Exact ``<C>`` and its gradient with respect to the expanded angles.

    Uses one forward pass and one reverse (adjoint) pass. Returns
    ``(value, dgamma, dbeta, dalpha)`` with the shapes of ``angles.gamma``,
    ``angles.beta`` and ``angles.alpha``.
    """
    _validate(g, angles)
    n, p = g.n, angles.p
    use_y = angles.variant in ("XY", "XEQY", "Y")
    psi = np.full(1 << n, 1.0 / math.sqrt(1 << n), dtype=np.complex128)
    scratch = np.zeros_like(psi)
    phases = []
    mixers = []
    for layer in range(p):
        ph = _cut_diag(n, g.eu, g.ev, angles.gamma[layer] * g.weights)
        phases.append(ph)
        _phase_pair(scratch, psi, ph, 1.0)
        row = []
        for q in range(n):
            u = _mixer(angles.beta[layer, q], angles.alpha[layer, q] if use_y else 0.0)
            row.append(u)
            _apply(psi, q, u)
        mixers.append(row)
    diag = cut_values(g)
    value = float(np.dot(np.abs(psi) ** 2, diag))
    lam = diag * psi
    dgamma = np.zeros((p, g.m))
    dbeta = np.zeros((p, n))
    dalpha = np.zeros((p, n))
    gen_y = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)  # -iY
    gen_x = np.array([[0.0, -1j], [-1j, 0.0]])  # -iX
    for layer in range(p - 1, -1, -1):
        for q in range(n - 1, -1, -1):
            u = mixers[layer][q]
            ui = u.conj().T
            o = np.array(_adjoint_1q(lam, psi, q, complex(ui[0, 0]), complex(ui[0, 1]),
                                     complex(ui[1, 0]), complex(ui[1, 1]))).reshape(2, 2)
            # both generators are taken at the point just after the gate
            ry = _ry(angles.alpha[layer, q]) if use_y else None
            gx = ry @ gen_x @ ry.conj().T if use_y else gen_x
            dbeta[layer, q] = 2.0 * np.sum(gx * o).real
            if use_y:
                dalpha[layer, q] = 2.0 * np.sum(gen_y * o).real
        # conj(lam) psi is unchanged by the diagonal phase
        dgamma[layer] = 2.0 * g.weights * _edge_overlaps(lam, psi, g.eu, g.ev)
        _phase_pair(lam, psi, phases[layer], -1.0)
    return value, dgamma, dbeta, dalpha


def sample(psi: Statevector, shots: int, seed: int) -> np.ndarray:
    """``shots`` i.i.d. basis indices drawn from ``|psi_z|^2`` (inverse CDF)."""
    if shots < 1:
        raise SimulatorError("shots must be positive")
    cdf = np.cumsum(psi.probabilities)
    cdf /= cdf[-1]
    rng = np.random.Generator(np.random.Philox(seed))
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    return np.minimum(idx, len(cdf) - 1)


def bitstrings(indices, n: int) -> list[str]:
    """Basis indices as bit strings ordered by vertex (vertex 0 first)."""
    return ["".join(str((int(z) >> i) & 1) for i in range(n)) for z in indices]


def shot_expectation(g: Graph, angles: AngleAssignment, shots: int, seed: int) -> float:
    """Empirical mean of ``C`` over ``shots`` measurement samples."""
    psi = build_state(g, angles)
    idx = sample(psi, shots, seed)
    return float(np.mean(cut_values(g)[idx]))


def save_statevector(psi: Statevector, path) -> None:
    """Raw little-endian (real, imag) float64 pairs."""
    with open(path, "wb") as fh:
        fh.write(psi.amplitudes.astype("<c16").tobytes())


def load_statevector(path) -> Statevector:
    with open(path, "rb") as fh:
        amps = np.frombuffer(fh.read(), dtype="<c16").astype(np.complex128)
    n = int(round(math.log2(len(amps)))) if len(amps) else 0
    if (1 << n) != len(amps):
        raise SimulatorError("dump length is not a power of two")
    return Statevector(n, amps)


# --------------------------------------------------------------------------
# optimisation objective


def _collapse_gradient(variant, dgamma, dbeta, dalpha):
    parts = []
    for layer in range(dgamma.shape[0]):
        g, b, a = dgamma[layer], dbeta[layer], dalpha[layer]
        if variant == "QAOA":
            parts.append([g.sum(), b.sum()])
        elif variant == "MA":
            parts.append(np.concatenate([g, b]))
        elif variant == "XEQY":
            parts.append(np.concatenate([g, b + a]))
        elif variant == "XY":
            parts.append(np.concatenate([g, b, a]))
        else:
            parts.append(np.concatenate([g, a]))
    return np.concatenate([np.asarray(x, dtype=float) for x in parts])


class SimulatorObjective:
    """``x -> <C>`` of a depth-``p`` ansatz computed on the statevector.

    ``shots=None`` gives the exact expectation; otherwise each call returns
    a sampled estimate with a fresh, deterministic seed per call.
    :meth:`gradient` is the exact adjoint gradient of the exact expectation.
    """

    def __init__(self, g: Graph, variant: str, p: int, shots: int | None = None, seed: int = 0):
        _check_size(g.n)
        self.graph = g
        self.variant = variant
        self.p = int(p)
        self.shots = shots
        self.n_params = AngleAssignment.n_params(variant, g.n, g.m, self.p)
        self._seed = np.random.SeedSequence(seed)
        self._calls = 0

    def angles(self, x) -> AngleAssignment:
        return AngleAssignment.from_vector(self.variant, x, self.graph.n, self.graph.m, self.p)

    def __call__(self, x) -> float:
        a = self.angles(x)
        if self.shots is None:
            return expectation(build_state(self.graph, a), self.graph)
        self._calls += 1
        child = np.random.SeedSequence(self._seed.entropy, spawn_key=(self._calls,))
        return shot_expectation(self.graph, a, self.shots, int(child.generate_state(1)[0]))

    def gradient(self, x) -> np.ndarray:
        _, dg, db, da = expectation_and_gradient(self.graph, self.angles(x))
        return _collapse_gradient(self.variant, dg, db, da)

    def value_and_gradient(self, x):
        val, dg, db, da = expectation_and_gradient(self.graph, self.angles(x))
        return val, _collapse_gradient(self.variant, dg, db, da)
