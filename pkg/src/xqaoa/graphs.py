"""Weighted undirected graphs, edge neighbourhoods, regular-graph sampling,
an exhaustive MaxCut oracle and edge-list file I/O."""
from __future__ import annotations

import io
import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from xqaoa._accel import njit, pick

__all__ = [
    "BRUTE_FORCE_CAP",
    "CutResult",
    "EdgeNeighborhood",
    "EdgeTopology",
    "Graph",
    "GraphError",
    "GraphFormatError",
    "brute_force_maxcut",
    "complete_graph",
    "cut_value",
    "cycle_graph",
    "dumps_graph",
    "generate_regular",
    "has_odd_edge_degrees",
    "is_triangle_free",
    "is_two_colourable",
    "load_edge_list",
    "load_graph",
    "neighborhoods",
    "path_graph",
    "petersen_graph",
    "save_graph",
    "star_graph",
]

#: Largest vertex count accepted by :func:`brute_force_maxcut`.
BRUTE_FORCE_CAP = 32


class GraphError(ValueError):
    """Invalid graph construction or query."""


class GraphFormatError(GraphError):
    """Malformed edge-list input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class EdgeNeighborhood:
    """Neighbourhood sets of the edge ``{u, v}`` (``u < v``).

    ``e`` holds the neighbours of ``v`` other than ``u``, ``d`` the
    neighbours of ``u`` other than ``v`` and ``F`` the common neighbours.
    """

    u: int
    v: int
    e: frozenset
    d: frozenset
    F: frozenset

    @property
    def edge_degree(self) -> int:
        return len(self.e) + len(self.d) - len(self.F)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.e), len(self.d), len(self.F)


@dataclass(frozen=True)
class EdgeTopology:
    """Flat (CSR) index arrays describing every edge neighbourhood.

    For edge ``k = (u, v)``:

    * ``e_edges[e_ptr[k]:e_ptr[k+1]]`` are ids of edges ``(w, v)``, ``w`` in e minus F
    * ``d_edges[d_ptr[k]:d_ptr[k+1]]`` are ids of edges ``(u, w)``, ``w`` in d minus F
    * ``f_uedges`` / ``f_vedges`` over ``f_ptr`` are ids of ``(u, f)`` and ``(v, f)``
    """

    n: int
    eu: np.ndarray
    ev: np.ndarray
    weights: np.ndarray
    e_ptr: np.ndarray
    e_edges: np.ndarray
    d_ptr: np.ndarray
    d_edges: np.ndarray
    f_ptr: np.ndarray
    f_uedges: np.ndarray
    f_vedges: np.ndarray
    adj_ptr: np.ndarray
    adj_vertices: np.ndarray
    adj_edges: np.ndarray

    @property
    def m(self) -> int:
        return len(self.eu)

    def arrays(self):
        """Positional tuple consumed by the jitted kernels."""
        return (self.eu, self.ev, self.weights, self.e_ptr, self.e_edges,
                self.d_ptr, self.d_edges, self.f_ptr, self.f_uedges, self.f_vedges)


class Graph:
    """Undirected graph with non-negative edge weights on vertices ``0..n-1``.

    Edges are stored once as ``(u, v, w)`` with ``u < v`` in lexicographic
    order. Instances are immutable; derived structures are cached.
    """

    def __init__(self, n: int, edges: Iterable[Sequence], *, labels=None, optimum=None):
        n = int(n)
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        canon = {}
        for item in edges:
            if len(item) == 2:
                u, v = item
                w = 1.0
            else:
                u, v, w = item
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if not math.isfinite(w) or w < 0:
                raise GraphError(f"edge ({u}, {v}) has invalid weight {w}")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise GraphError(f"duplicate edge {key}")
            canon[key] = w
        self._n = n
        self._edges = tuple((u, v, canon[(u, v)]) for u, v in sorted(canon))
        self.labels = tuple(labels) if labels is not None else None
        self.optimum = None if optimum is None else float(optimum)
        self._nbhd_cache = {}

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple:
        return self._edges

    @cached_property
    def eu(self) -> np.ndarray:
        return _frozen(np.array([e[0] for e in self._edges], dtype=np.int64))

    @cached_property
    def ev(self) -> np.ndarray:
        return _frozen(np.array([e[1] for e in self._edges], dtype=np.int64))

    @cached_property
    def weights(self) -> np.ndarray:
        return _frozen(np.array([e[2] for e in self._edges], dtype=np.float64))

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def is_unweighted(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    @cached_property
    def adjacency(self) -> tuple:
        nbrs = [[] for _ in range(self._n)]
        for u, v, _ in self._edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def edge_index(self) -> dict:
        return {(u, v): k for k, (u, v, _) in enumerate(self._edges)}

    def degree(self, vertex: int) -> int:
        return len(self.adjacency[vertex])

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.array([len(a) for a in self.adjacency], dtype=np.int64))

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.edge_index[key]
        except KeyError:
            raise GraphError(f"edge {key} not in graph") from None

    def weight(self, u: int, v: int) -> float:
        return self._edges[self.edge_id(u, v)][2]

    def is_connected(self) -> bool:
        if self._n == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == self._n

    def with_weights(self, weights) -> "Graph":
        weights = np.asarray(weights, dtype=float)
        return Graph(self._n, [(u, v, w) for (u, v, _), w in zip(self._edges, weights)])

    @cached_property
    def topology(self) -> EdgeTopology:
        return _build_topology(self)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _build_topology(g: Graph) -> EdgeTopology:
    adj = [set(a) for a in g.adjacency]
    idx = g.edge_index

    def eid(a, b):
        return idx[(a, b) if a < b else (b, a)]

    e_ptr, d_ptr, f_ptr = [0], [0], [0]
    e_edges, d_edges, f_u, f_v = [], [], [], []
    for u, v, _ in g.edges:
        common = adj[u] & adj[v]
        for w in sorted(adj[v] - {u} - common):
            e_edges.append(eid(w, v))
        for w in sorted(adj[u] - {v} - common):
            d_edges.append(eid(u, w))
        for f in sorted(common):
            f_u.append(eid(u, f))
            f_v.append(eid(v, f))
        e_ptr.append(len(e_edges))
        d_ptr.append(len(d_edges))
        f_ptr.append(len(f_u))

    adj_ptr = [0]
    adj_vertices, adj_edges = [], []
    for x in range(g.n):
        for y in g.adjacency[x]:
            adj_vertices.append(y)
            adj_edges.append(eid(x, y))
        adj_ptr.append(len(adj_vertices))

    def arr(x):
        return _frozen(np.asarray(x, dtype=np.int64))

    return EdgeTopology(
        n=g.n, eu=g.eu, ev=g.ev, weights=g.weights,
        e_ptr=arr(e_ptr), e_edges=arr(e_edges),
        d_ptr=arr(d_ptr), d_edges=arr(d_edges),
        f_ptr=arr(f_ptr), f_uedges=arr(f_u), f_vedges=arr(f_v),
        adj_ptr=arr(adj_ptr), adj_vertices=arr(adj_vertices), adj_edges=arr(adj_edges),
    )


def neighborhoods(g: Graph, edge) -> EdgeNeighborhood:
    """Neighbourhood sets ``e``, ``d``, ``F`` of ``edge``.

    Results are cached on the graph. The edge may be given in either
    orientation; the returned record always has ``u < v``.
    """
    u, v = int(edge[0]), int(edge[1])
    if u > v:
        u, v = v, u
    g.edge_id(u, v)
    cached = g._nbhd_cache.get((u, v))
    if cached is not None:
        return cached
    nu, nv = set(g.adjacency[u]), set(g.adjacency[v])
    nb = EdgeNeighborhood(
        u=u, v=v,
        e=frozenset(nv - {u}),
        d=frozenset(nu - {v}),
        F=frozenset(nu & nv),
    )
    g._nbhd_cache[(u, v)] = nb
    return nb


def has_odd_edge_degrees(g: Graph) -> bool:
    """True iff every edge degree ``|N(u) ∪ N(v)| - 2`` is odd.

    This is the per-edge parity test only; it does not by itself rule out
    triangles (every edge of K3 has edge degree 1).
    """
    return all(neighborhoods(g, (u, v)).edge_degree % 2 == 1 for u, v, _ in g.edges)


def is_triangle_free(g: Graph) -> bool:
    return all(not neighborhoods(g, (u, v)).F for u, v, _ in g.edges)


def is_two_colourable(g: Graph):
    """BFS 2-colouring. Returns ``(True, colours)`` or ``(False, None)``."""
    colour = [-1] * g.n
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return False, None
    return True, np.array(colour, dtype=np.int8)


# --------------------------------------------------------------------------
# cut values and the exhaustive oracle


@dataclass
class CutResult:
    """A partition ``z`` and its cut weight.

    ``ratio`` is ``cut_value / optimum`` when an optimum is known.
    ``flagged`` lists vertices whose bit was decided by a fallback rule.
    """

    assignment: np.ndarray
    cut_value: float
    ratio: float | None = None
    flagged: tuple = field(default_factory=tuple)

    def bitstring(self) -> str:
        return "".join(str(int(b)) for b in self.assignment)

    def to_dict(self) -> dict:
        return {
            "assignment": self.bitstring(),
            "cut_value": self.cut_value,
            "ratio": self.ratio,
            "flagged": list(self.flagged),
        }


def cut_value(g: Graph, assignment) -> float:
    """Weight of edges whose endpoints receive different bits."""
    z = np.asarray(assignment).astype(np.int64)
    if z.shape != (g.n,):
        raise GraphError(f"assignment length {z.shape} does not match n={g.n}")
    if g.m == 0:
        return 0.0
    cut = z[g.eu] != z[g.ev]
    return float(np.sum(g.weights[cut]))


@njit
def _gray_maxcut_jit(n_free, adj_ptr, adj_vertices, adj_weights):
    # Vertex n_free (the last one) stays on side 0. Bits of `state` are the
    # sides of vertices 0..n_free-1; one vertex flips per Gray-code step.
    n = n_free + 1
    side = np.zeros(n, dtype=np.int8)
    cur = 0.0
    best = 0.0
    best_state = np.int64(0)
    state = np.int64(0)
    total = np.int64(1) << n_free
    for step in range(1, total):
        # index of lowest set bit of step
        x = step
        bit = 0
        while (x & 1) == 0:
            x >>= 1
            bit += 1
        delta = 0.0
        sb = side[bit]
        for k in range(adj_ptr[bit], adj_ptr[bit + 1]):
            if side[adj_vertices[k]] == sb:
                delta += adj_weights[k]
            else:
                delta -= adj_weights[k]
        side[bit] = 1 - sb
        state ^= np.int64(1) << bit
        cur += delta
        if cur > best + 1e-12:
            best = cur
            best_state = state
    return best, best_state


def _block_maxcut_numpy(n_free, g: Graph, block_bits=18):
    eu, ev, w = g.eu, g.ev, g.weights
    best = -1.0
    best_state = 0
    total = 1 << n_free
    block = 1 << min(block_bits, n_free)
    for start in range(0, total, block):
        z = np.arange(start, min(start + block, total), dtype=np.int64)
        vals = np.zeros(len(z))
        for u, v, wt in zip(eu, ev, w):
            # vertex n_free is pinned to 0
            bu = (z >> u) & 1 if u < n_free else 0
            bv = (z >> v) & 1 if v < n_free else 0
            vals += wt * (bu ^ bv)
        k = int(np.argmax(vals))
        if vals[k] > best + 1e-12:
            best = float(vals[k])
            best_state = int(z[k])
    return best, best_state


def _split_tables(g: Graph, n_free: int, n_lo: int):
    """Tables for the split enumeration: vertices ``0..n_lo-1`` are "low",
    ``n_lo..n_free-1`` are "high", vertex ``n_free`` is pinned to 0."""
    lo_lo, hi_hi, cross = [], [], []
    for u, v, w in g.edges:
        if v < n_lo:
            lo_lo.append((u, v, w))
        elif u >= n_lo:
            hi_hi.append((u, v, w))
        else:
            cross.append((u, v, w))
    z = np.arange(1 << n_lo, dtype=np.int64)
    lo_cut = np.zeros(1 << n_lo)
    for u, v, w in lo_lo:
        lo_cut += w * (((z >> u) ^ (z >> v)) & 1)
    hi = np.array([(u, v, w) for u, v, w in hi_hi], dtype=np.float64).reshape(-1, 3)
    cr = np.array([(u, v, w) for u, v, w in cross], dtype=np.float64).reshape(-1, 3)
    return lo_cut, hi, cr


@njit(fastmath=True)
def _split_maxcut_jit(n_free, n_lo, n_lo1, lo_cut, hi, cross):
    n_hi = n_free - n_lo
    n_lo2 = n_lo - n_lo1
    size1 = 1 << n_lo1
    size2 = 1 << n_lo2
    coef = np.zeros(n_lo)
    t1 = np.zeros(size1)
    t2 = np.zeros(size2)
    acc = np.empty(size1)
    best = -1.0
    best_h = 0
    for h in range(1 << n_hi):
        base = 0.0
        for k in range(hi.shape[0]):
            a = int(hi[k, 0]) - n_lo
            b = int(hi[k, 1]) - n_lo
            ba = (h >> a) & 1 if a < n_hi else 0
            bb = (h >> b) & 1 if b < n_hi else 0
            if ba != bb:
                base += hi[k, 2]
        for a in range(n_lo):
            coef[a] = 0.0
        for k in range(cross.shape[0]):
            a = int(cross[k, 0])
            b = int(cross[k, 1]) - n_lo
            hb = (h >> b) & 1 if b < n_hi else 0
            # edge cut iff l_a xor h_b:  h_b + l_a (1 - 2 h_b)
            base += cross[k, 2] * hb
            coef[a] += cross[k, 2] * (1 - 2 * hb)
        t1[0] = 0.0
        for x in range(1, size1):
            low = x & (-x)
            bit = 0
            while (low >> bit) != 1:
                bit += 1
            t1[x] = t1[x ^ low] + coef[bit]
        t2[0] = 0.0
        for x in range(1, size2):
            low = x & (-x)
            bit = 0
            while (low >> bit) != 1:
                bit += 1
            t2[x] = t2[x ^ low] + coef[n_lo1 + bit]
        # column-wise running maxima keep the inner loop branch-free
        for x1 in range(size1):
            acc[x1] = -1.0
        for x2 in range(size2):
            off = x2 * size1
            c = t2[x2]
            for x1 in range(size1):
                v = lo_cut[off + x1] + c
                acc[x1] = v if v > acc[x1] else acc[x1]
        local = -1.0
        for x1 in range(size1):
            local = max(local, acc[x1] + t1[x1])
        local += base
        if local > best + 1e-12:
            best = local
            best_h = h
    return best, best_h


def _split_best_low(n_lo, lo_cut, hi, cross, n_hi, h):
    """Recover the best low half for a fixed high half (numpy)."""
    z = np.arange(1 << n_lo, dtype=np.int64)
    vals = lo_cut.copy()
    for a, b, w in cross:
        a, b = int(a), int(b) - n_lo
        hb = (h >> b) & 1 if b < n_hi else 0
        vals += w * (((z >> a) & 1) ^ hb)
    return int(np.argmax(vals))


def _split_maxcut_numpy(n_free, n_lo, n_lo1, lo_cut, hi, cross):
    n_hi = n_free - n_lo
    best, best_h = -1.0, 0
    z = np.arange(1 << n_hi, dtype=np.int64)
    hi_bits = [((z >> b) & 1) if b < n_hi else np.zeros_like(z) for b in range(n_hi + 1)]
    base = np.zeros(len(z))
    for a, b, w in hi:
        base += w * (hi_bits[int(a) - n_lo] ^ hi_bits[int(b) - n_lo])
    zl = np.arange(1 << n_lo, dtype=np.int64)
    lo_bits = np.stack([(zl >> a) & 1 for a in range(n_lo)], axis=1).astype(float)
    for h in range(1 << n_hi):
        coef = np.zeros(n_lo)
        c = base[h]
        for a, b, w in cross:
            hb = int(hi_bits[int(b) - n_lo][h])
            c += w * hb
            coef[int(a)] += w * (1 - 2 * hb)
        val = float(np.max(lo_cut + lo_bits @ coef)) + c
        if val > best + 1e-12:
            best, best_h = val, h
    return best, best_h


def brute_force_maxcut(g: Graph, cap: int = BRUTE_FORCE_CAP, method: str = "auto") -> CutResult:
    """Exact MaxCut by exhaustive enumeration of ``2**(n-1)`` partitions.

    The last vertex is pinned to side 0 (global bit-flip symmetry).
    ``method="gray"`` walks all partitions in Gray-code order with an
    O(deg) cut update per step. ``method="split"`` fixes the upper half of
    the vertices at a time; the cut is then linear in the lower-half bits
    and is maximised with two small lookup tables. ``"auto"`` uses Gray
    code up to 20 free vertices and the split scheme above that.
    """
    if g.n > cap:
        raise GraphError(f"brute-force MaxCut refused: n={g.n} exceeds cap {cap}")
    if g.n <= 1 or g.m == 0:
        z = np.zeros(g.n, dtype=np.int8)
        return CutResult(z, 0.0, 1.0 if g.m == 0 else None)
    n_free = g.n - 1
    if method == "auto":
        method = "gray" if n_free <= 20 else "split"
    if method == "gray":
        state = _gray_search(g, n_free)
    elif method == "split":
        state = _split_search(g, n_free)
    else:
        raise ValueError(f"unknown method {method!r}")
    z = np.array([(state >> i) & 1 for i in range(n_free)] + [0], dtype=np.int8)
    return CutResult(z, cut_value(g, z), 1.0)


def _gray_search(g: Graph, n_free: int) -> int:
    kernel = pick(_gray_maxcut_jit, None)
    if kernel is None:
        return int(_block_maxcut_numpy(n_free, g)[1])
    topo = g.topology
    adj_w = g.weights[topo.adj_edges]
    return int(kernel(n_free, topo.adj_ptr, topo.adj_vertices, adj_w)[1])


def _split_search(g: Graph, n_free: int) -> int:
    n_lo = (n_free + 1) // 2
    n_lo1 = n_lo // 2
    lo_cut, hi, cross = _split_tables(g, n_free, n_lo)
    kernel = pick(_split_maxcut_jit, _split_maxcut_numpy)
    _, h = kernel(n_free, n_lo, n_lo1, lo_cut, hi, cross)
    h = int(h)
    low = _split_best_low(n_lo, lo_cut, hi, cross, n_free - n_lo, h)
    return low | (h << n_lo)


# --------------------------------------------------------------------------
# generators


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(k: int) -> Graph:
    """Star ``S_k``: centre 0 joined to leaves ``1..k``."""
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def generate_regular(n: int, degree: int, seed: int, max_restarts: int = 10_000) -> Graph:
    """Uniform-ish random simple ``degree``-regular graph (pairing model).

    Unpaired points are matched two at a time, uniformly at random. A pair
    that would create a self-loop or a repeated edge is rejected and
    redrawn; when no admissible pair remains the whole pairing restarts.
    """
    n, degree = int(n), int(degree)
    if (n * degree) % 2:
        raise GraphError(f"n*D must be even (n={n}, D={degree})")
    if degree >= n or degree < 0:
        raise GraphError(f"infeasible degree {degree} for n={n}")
    rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(max_restarts):
        edges = _try_pairing(n, degree, rng)
        if edges is not None:
            return Graph(n, edges)
    raise GraphError(f"pairing failed after {max_restarts} restarts")


def _try_pairing(n, degree, rng):
    points = np.repeat(np.arange(n), degree).tolist()
    adj = [set() for _ in range(n)]
    edges = []
    rejected = 0
    while points:
        i, j = rng.choice(len(points), size=2, replace=False)
        a, b = points[i], points[j]
        if a != b and b not in adj[a]:
            adj[a].add(b)
            adj[b].add(a)
            edges.append((a, b))
            for k in sorted((i, j), reverse=True):
                points[k] = points[-1]
                points.pop()
            rejected = 0
            continue
        rejected += 1
        if rejected > 4 * len(points) and not _has_admissible_pair(points, adj):
            return None
    return edges


def _has_admissible_pair(points, adj):
    verts = sorted(set(points))
    for x in range(len(verts)):
        for y in range(x + 1, len(verts)):
            if verts[y] not in adj[verts[x]]:
                return True
    return False


# --------------------------------------------------------------------------
# file formats


def load_edge_list(source, format: str = "csv") -> Graph:
    """Parse a CSV edge list (``u,v[,w]`` per line) or a JSON graph.

    ``source`` may be bytes, str, or a binary/text stream. Sparse or
    non-zero-based vertex ids are remapped to ``0..n-1`` in sorted order
    and the original ids kept in ``Graph.labels``.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if format == "csv":
        return _parse_csv(source)
    if format == "json":
        return _parse_json(source)
    raise GraphFormatError(f"unknown format {format!r}")


def _parse_csv(text: str) -> Graph:
    declared_n = None
    optimum = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, val = body.partition("=")
            key = key.strip().lower()
            try:
                if key == "n":
                    declared_n = int(val)
                elif key == "optimum":
                    optimum = float(val)
            except ValueError:
                raise GraphFormatError(f"bad header {body!r}", lineno) from None
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"expected 'u,v[,w]', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 and parts[2] else 1.0
        except ValueError:
            raise GraphFormatError(f"cannot parse {line!r}", lineno) from None
        rows.append((lineno, u, v, w))
    return _assemble(rows, declared_n, optimum)


def _parse_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict) or "edges" not in obj:
        raise GraphFormatError("JSON graph must be an object with an 'edges' list")
    rows = []
    for k, item in enumerate(obj["edges"]):
        if not isinstance(item, (list, tuple)) or len(item) not in (2, 3):
            raise GraphFormatError(f"edge #{k} must be [u, v] or [u, v, w]")
        w = float(item[2]) if len(item) == 3 else 1.0
        rows.append((k + 1, int(item[0]), int(item[1]), w))
    return _assemble(rows, obj.get("n"), obj.get("optimum"))


def _assemble(rows, declared_n, optimum) -> Graph:
    seen = {}
    for lineno, u, v, w in rows:
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if u < 0 or v < 0:
            raise GraphFormatError("negative vertex id", lineno)
        if w < 0 or not math.isfinite(w):
            raise GraphFormatError(f"invalid weight {w}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
    ids = sorted({x for _, u, v, _ in rows for x in (u, v)})
    dense = not ids or (ids[0] == 0 and ids[-1] == len(ids) - 1)
    if declared_n is not None:
        declared_n = int(declared_n)
        if ids and ids[-1] >= declared_n:
            raise GraphFormatError(f"vertex id {ids[-1]} exceeds declared n={declared_n}")
        return Graph(declared_n, [(u, v, w) for _, u, v, w in rows], optimum=optimum)
    if dense:
        return Graph(len(ids), [(u, v, w) for _, u, v, w in rows], optimum=optimum)
    remap = {x: i for i, x in enumerate(ids)}
    return Graph(len(ids), [(remap[u], remap[v], w) for _, u, v, w in rows],
                 labels=ids, optimum=optimum)


def dumps_graph(g: Graph, format: str = "csv") -> str:
    """Canonical text form: ``# n=..`` header then sorted ``u,v,w`` lines."""
    if format == "csv":
        out = io.StringIO()
        out.write(f"# n={g.n}\n")
        if g.optimum is not None:
            out.write(f"# optimum={g.optimum!r}\n")
        for u, v, w in g.edges:
            out.write(f"{u},{v},{w!r}\n")
        return out.getvalue()
    if format == "json":
        obj = {"n": g.n, "edges": [[u, v, w] for u, v, w in g.edges]}
        if g.optimum is not None:
            obj["optimum"] = g.optimum
        return json.dumps(obj) + "\n"
    raise GraphFormatError(f"unknown format {format!r}")


def save_graph(g: Graph, path, format: str | None = None) -> None:
    path = str(path)
    fmt = format or ("json" if path.endswith(".json") else "csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_graph(g, fmt))


def load_graph(path, format: str | None = None) -> Graph:
    path = str(path)
    fmt = format or ("json" if path.endswith(".json") else "csv")
    with open(path, "rb") as fh:
        return load_edge_list(fh, fmt)
