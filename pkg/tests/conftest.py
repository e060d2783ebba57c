"""Independent oracles shared by the test modules.

Nothing here imports the kernels under test: brute force is plain
itertools, and the dense simulator builds full 2^n x 2^n operators
with ``scipy.linalg.expm`` and Kronecker products.
"""
import itertools
from functools import reduce

import numpy as np
import pytest
from scipy.linalg import expm

from xqaoa.graphs import Graph

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def enumerate_maxcut(n, edges):
    """Exhaustive MaxCut over all 2^n assignments."""
    best = -1.0
    for z in itertools.product((0, 1), repeat=n):
        c = sum(w for u, v, w in edges if z[u] != z[v])
        best = max(best, c)
    return best


def cut_table(n, edges):
    """C(z) indexed little-endian (vertex i is bit i)."""
    vals = np.zeros(1 << n)
    for idx in range(1 << n):
        vals[idx] = sum(w for u, v, w in edges if ((idx >> u) & 1) != ((idx >> v) & 1))
    return vals


def dense_state(n, edges, gammas, betas, alphas):
    """|psi> for layers given as lists of per-edge gamma and per-vertex beta/alpha."""
    dim = 1 << n
    psi = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    for gam, bet, alp in zip(gammas, betas, alphas):
        phase = np.zeros(dim)
        for (u, v, w), g in zip(edges, gam):
            for idx in range(dim):
                if ((idx >> u) & 1) != ((idx >> v) & 1):
                    phase[idx] += g * w
        psi = np.exp(-1j * phase) * psi
        gates = [expm(-1j * alp[q] * Y) @ expm(-1j * bet[q] * X) for q in range(n)]
        # vertex 0 is the least significant bit, so it is the last Kronecker factor
        full = reduce(np.kron, gates[::-1])
        psi = full @ psi
    return psi


def dense_expectation(n, edges, gammas, betas, alphas):
    psi = dense_state(n, edges, gammas, betas, alphas)
    return float(np.dot(np.abs(psi) ** 2, cut_table(n, edges)))


def random_graph(rng, n, p_edge=0.5, weighted=True, min_edges=1):
    while True:
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p_edge:
                    w = float(rng.uniform(0, 2)) if weighted else 1.0
                    edges.append((u, v, w))
        if len(edges) >= min_edges:
            return Graph(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
