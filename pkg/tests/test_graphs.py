import io
import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import enumerate_maxcut
from xqaoa.graphs import (
    BRUTE_FORCE_CAP,
    CutResult,
    Graph,
    GraphError,
    GraphFormatError,
    brute_force_maxcut,
    complete_graph,
    cut_value,
    cycle_graph,
    dumps_graph,
    generate_regular,
    has_odd_edge_degrees,
    is_triangle_free,
    is_two_colourable,
    load_edge_list,
    load_graph,
    neighborhoods,
    path_graph,
    petersen_graph,
    save_graph,
    star_graph,
)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(g.edges)
    return h


@st.composite
def graphs(draw, max_n=9, weighted=True):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    if weighted:
        ws = draw(st.lists(st.floats(0, 3, allow_nan=False), min_size=len(chosen), max_size=len(chosen)))
    else:
        ws = [1.0] * len(chosen)
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)])


class TestGraphType:
    def test_edges_canonical(self):
        g = Graph(3, [(2, 0, 1.5), (1, 0)])
        assert g.edges == ((0, 1, 1.0), (0, 2, 1.5))

    def test_rejects_self_loop_duplicate_negative(self):
        with pytest.raises(GraphError):
            Graph(3, [(1, 1, 1.0)])
        with pytest.raises(GraphError):
            Graph(3, [(0, 1), (1, 0)])
        with pytest.raises(GraphError):
            Graph(3, [(0, 1, -0.5)])

    @given(graphs())
    def test_adjacency_matches_networkx(self, g):
        h = to_nx(g)
        for u in range(g.n):
            assert sorted(g.adjacency[u]) == sorted(h.neighbors(u))
        assert list(g.degrees) == [h.degree(u) for u in range(g.n)]

    def test_unweighted_flag(self):
        assert complete_graph(4).is_unweighted
        assert not Graph(2, [(0, 1, 2.0)]).is_unweighted


class TestNeighborhoods:
    def test_star_centre_leaf(self):
        s4 = star_graph(4)
        nb = neighborhoods(s4, (0, 2))
        assert nb.e == frozenset() and nb.d == frozenset({1, 3, 4}) and nb.F == frozenset()
        assert nb.edge_degree == 3

    def test_k3(self):
        nb = neighborhoods(complete_graph(3), (0, 1))
        assert (len(nb.e), len(nb.d), len(nb.F), nb.edge_degree) == (1, 1, 1, 1)

    def test_k4(self):
        nb = neighborhoods(complete_graph(4), (1, 3))
        assert (len(nb.e), len(nb.d), len(nb.F), nb.edge_degree) == (2, 2, 2, 2)

    @given(graphs(weighted=False))
    def test_invariants(self, g):
        h = to_nx(g)
        for u, v, _ in g.edges:
            nb = neighborhoods(g, (u, v))
            assert nb.F == nb.e & nb.d
            assert u not in nb.e | nb.d and v not in nb.e | nb.d
            assert len(nb.e) == h.degree(v) - 1 and len(nb.d) == h.degree(u) - 1
            union = (set(h.neighbors(u)) | set(h.neighbors(v))) - {u, v}
            assert nb.edge_degree == len(union)

    def test_unknown_edge(self):
        with pytest.raises(GraphError):
            neighborhoods(path_graph(3), (0, 2))


class TestPredicates:
    def test_p3_and_s4_odd(self):
        assert has_odd_edge_degrees(path_graph(3))
        assert has_odd_edge_degrees(star_graph(4))

    def test_k3_literal(self):
        # every K3 edge has edge degree 1, so the per-edge predicate holds
        assert has_odd_edge_degrees(complete_graph(3))
        assert not is_triangle_free(complete_graph(3))

    def test_c4(self):
        ok, colours = is_two_colourable(cycle_graph(4))
        assert ok and is_triangle_free(cycle_graph(4))
        assert len(set(colours)) == 2

    def test_k3_not_bipartite(self):
        ok, colours = is_two_colourable(complete_graph(3))
        assert not ok and colours is None

    @given(graphs(weighted=False))
    def test_against_networkx(self, g):
        h = to_nx(g)
        ok, colours = is_two_colourable(g)
        assert ok == nx.is_bipartite(h)
        if ok:
            assert all(colours[u] != colours[v] for u, v, _ in g.edges)
        assert is_triangle_free(g) == (sum(nx.triangles(h).values()) == 0)


class TestBruteForce:
    @pytest.mark.parametrize("g,expected", [
        (complete_graph(3), 2.0), (complete_graph(4), 4.0), (petersen_graph(), 12.0),
    ])
    def test_known(self, g, expected):
        res = brute_force_maxcut(g)
        assert res.cut_value == expected
        assert cut_value(g, res.assignment) == expected

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=10))
    def test_matches_enumeration(self, g):
        res = brute_force_maxcut(g)
        assert res.cut_value == pytest.approx(enumerate_maxcut(g.n, g.edges), abs=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_split_and_gray_agree(self, seed):
        rng = np.random.default_rng(seed)
        g = generate_regular(22, 3, seed).with_weights(rng.uniform(0, 2, 33))
        a = brute_force_maxcut(g, method="gray")
        b = brute_force_maxcut(g, method="split")
        assert a.cut_value == pytest.approx(b.cut_value, abs=1e-9)
        assert cut_value(g, b.assignment) == pytest.approx(b.cut_value, abs=1e-9)

    @given(graphs(max_n=8))
    def test_flip_invariance(self, g):
        res = brute_force_maxcut(g)
        assert cut_value(g, 1 - res.assignment) == pytest.approx(res.cut_value)

    def test_cap(self):
        with pytest.raises(GraphError, match="cap"):
            brute_force_maxcut(generate_regular(BRUTE_FORCE_CAP + 2, 3, 0))

    def test_cut_result_dict(self):
        r = CutResult(np.array([0, 1]), 1.0, 1.0)
        assert r.to_dict()["assignment"] == "01"


class TestGenerator:
    def test_k4_unique(self):
        assert generate_regular(4, 3, 99).edges == complete_graph(4).edges

    def test_parity_and_degree_errors(self):
        with pytest.raises(GraphError):
            generate_regular(5, 3, 0)
        with pytest.raises(GraphError):
            generate_regular(4, 4, 0)

    def test_audit_32_3(self):
        g = generate_regular(32, 3, 7)
        h = to_nx(g)
        assert g.m == 48 and nx.is_regular(h) and h.degree(0) == 3
        assert g.is_connected() == nx.is_connected(h)

    @pytest.mark.parametrize("n,d", [(10, 3), (16, 4), (32, 6), (20, 7)])
    def test_regular_and_simple(self, n, d):
        g = generate_regular(n, d, 3)
        assert set(g.degrees) == {d} and g.m == n * d // 2

    def test_deterministic(self):
        assert generate_regular(24, 3, 5) == generate_regular(24, 3, 5)
        assert generate_regular(24, 3, 5) != generate_regular(24, 3, 6)


class TestIO:
    def test_single_line(self):
        g = load_edge_list(b"0,1,1.0")
        assert g.n == 2 and g.edges == ((0, 1, 1.0),)

    def test_self_loop_line_number(self):
        with pytest.raises(GraphFormatError) as err:
            load_edge_list("0,1\n# c\n0,0,1.0\n")
        assert err.value.line == 3

    def test_duplicate_line_number(self):
        with pytest.raises(GraphFormatError) as err:
            load_edge_list("0,1\n1,0\n")
        assert err.value.line == 2

    def test_bad_token(self):
        with pytest.raises(GraphFormatError):
            load_edge_list("0,x\n")

    def test_sparse_ids_remapped(self):
        g = load_edge_list("10,30\n30,20\n")
        assert g.n == 3 and g.labels == (10, 20, 30)
        assert g.edges == ((0, 2, 1.0), (1, 2, 1.0))

    def test_json(self):
        doc = json.dumps({"n": 3, "edges": [[0, 1, 2.0], [1, 2]]})
        g = load_edge_list(io.BytesIO(doc.encode()), format="json")
        assert g.edges == ((0, 1, 2.0), (1, 2, 1.0))

    def test_128_dataset_audit(self, tmp_path):
        g = generate_regular(128, 3, 11)
        p = tmp_path / "rr128.csv"
        save_graph(g, p)
        h = load_graph(p)
        assert h.m == 192 and set(h.degrees) == {3}

    @settings(max_examples=30)
    @given(graphs())
    def test_round_trip_canonical(self, g):
        text = dumps_graph(g)
        assert dumps_graph(load_edge_list(text)) == text

    def test_optimum_header(self, tmp_path):
        g = Graph(3, [(0, 1), (1, 2)], optimum=2.0)
        p = tmp_path / "p3.csv"
        save_graph(g, p)
        assert load_graph(p).optimum == 2.0
