import json
import random
from itertools import product

import networkx as nx
import pytest

from cyberemergence.errors import InvalidArgumentError, ParseError
from cyberemergence.graph import (Graph, adjacency_matrix, bridge_interconnect,
                                  disjoint_union, dumps_graph, empty_graph,
                                  full_interconnect, graph_to_dict,
                                  loads_graph, make_complete,
                                  make_erdos_renyi, make_path, make_star,
                                  read_graph, to_networkx, write_graph)
from cyberemergence.spectral import spectral_radius


class TestGraph:

    def test_edges_are_canonical_and_undirected(self):
        g = Graph(3, frozenset({(1, 0), (2, 1)}))
        assert g.edges == frozenset({(0, 1), (1, 2)})
        assert Graph(3, frozenset({(0, 1)})) == Graph(3, frozenset({(1, 0)}))

    def test_self_loop_rejected(self):
        with pytest.raises(InvalidArgumentError):
            Graph(3, frozenset({(1, 1)}))

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidArgumentError):
            Graph(3, frozenset({(0, 3)}))

    def test_negative_size_rejected(self):
        with pytest.raises(InvalidArgumentError):
            Graph(-1, frozenset())

    def test_degrees_and_neighbors(self):
        g = make_star(4)
        assert list(g.degrees()) == [3, 1, 1, 1]
        assert g.neighbors(0) == [1, 2, 3]
        assert g.neighbors(2) == [0]

    def test_adjacency_is_symmetric(self):
        a = adjacency_matrix(make_path(4)).toarray()
        assert (a == a.T).all()
        assert a.sum() == 6


class TestGenerators:

    def test_complete_single_node(self):
        g = make_complete(1)
        assert g.n == 1
        assert g.edge_count == 0

    def test_complete_edge_count(self):
        assert make_complete(8).edge_count == 28

    def test_complete_small(self):
        assert make_complete(3).edges == frozenset({(0, 1), (0, 2), (1, 2)})

    @pytest.mark.parametrize("maker", [make_complete, make_star, make_path])
    def test_zero_nodes_rejected(self, maker):
        with pytest.raises(InvalidArgumentError):
            maker(0)

    def test_star(self):
        g = make_star(5)
        assert g.edge_count == 4
        assert all(0 in edge for edge in g.edges)

    def test_path(self):
        assert make_path(3).edges == frozenset({(0, 1), (1, 2)})

    def test_erdos_renyi_empty_when_p_zero(self):
        assert make_erdos_renyi(10, 0.0, 123).edge_count == 0

    def test_erdos_renyi_complete_when_p_one(self):
        assert make_erdos_renyi(7, 1.0, 5) == make_complete(7)

    def test_erdos_renyi_is_deterministic(self):
        assert make_erdos_renyi(20, 0.3, 99) == make_erdos_renyi(20, 0.3, 99)
        assert make_erdos_renyi(20, 0.3, 99) != make_erdos_renyi(20, 0.3, 100)

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_erdos_renyi_rejects_bad_probability(self, p):
        with pytest.raises(InvalidArgumentError):
            make_erdos_renyi(5, p, 0)


class TestComposition:

    def test_disjoint_union_counts(self):
        g = disjoint_union(make_complete(4), make_complete(6))
        assert g.n == 10
        assert g.edge_count == 21

    def test_disjoint_union_identity(self):
        g = make_star(5)
        assert disjoint_union(g, empty_graph(0)) == g

    def test_disjoint_union_of_single_nodes(self):
        g = disjoint_union(make_complete(1), make_complete(1))
        assert (g.n, g.edge_count) == (2, 0)

    def test_right_operand_is_shifted(self):
        g = disjoint_union(make_path(2), make_path(2))
        assert g.edges == frozenset({(0, 1), (2, 3)})

    def test_join_of_complete_graphs_is_complete(self):
        assert full_interconnect(make_complete(6), make_complete(6)) == \
            make_complete(12)

    def test_join_single_nodes(self):
        assert full_interconnect(make_complete(1), make_complete(1)) == \
            make_complete(2)

    def test_join_paths(self):
        g = full_interconnect(make_path(2), make_path(2))
        assert g.edge_count == 6
        assert g == make_complete(4)

    def test_join_complete_for_all_small_sizes(self):
        for a, b in product(range(1, 31), repeat=2):
            assert full_interconnect(make_complete(a), make_complete(b)) == \
                make_complete(a + b)

    def test_join_edge_count_formula(self):
        rng = random.Random(7)
        for seed in range(20):
            g1 = make_erdos_renyi(rng.randint(1, 15), rng.random(), seed)
            g2 = make_erdos_renyi(rng.randint(1, 15), rng.random(), seed + 100)
            joined = full_interconnect(g1, g2)
            assert joined.edge_count == \
                g1.edge_count + g2.edge_count + g1.n * g2.n

    @pytest.mark.parametrize("compose", [disjoint_union, full_interconnect])
    def test_commutative_up_to_isomorphism(self, compose):
        for seed in range(5):
            g1 = make_erdos_renyi(6, 0.4, seed)
            g2 = make_erdos_renyi(4, 0.6, seed + 50)
            left, right = compose(g1, g2), compose(g2, g1)

            assert sorted(left.degrees()) == sorted(right.degrees())
            assert spectral_radius(left).lambda1 == \
                pytest.approx(spectral_radius(right).lambda1, abs=1e-8)
            assert nx.is_isomorphic(to_networkx(left), to_networkx(right))

    def test_empty_bridge_is_union(self):
        k3 = make_complete(3)
        assert bridge_interconnect(k3, k3, []) == disjoint_union(k3, k3)

    def test_full_bridge_is_join(self):
        k3 = make_complete(3)
        pairs = list(product(range(3), range(3)))
        assert bridge_interconnect(k3, k3, pairs) == full_interconnect(k3, k3)

    def test_single_bridge(self):
        k3 = make_complete(3)
        g = bridge_interconnect(k3, k3, [(0, 0)])
        assert g.edge_count == 7
        assert (0, 3) in g.edges

    def test_duplicate_bridges_collapse(self):
        k3 = make_complete(3)
        g = bridge_interconnect(k3, k3, [(0, 0), (0, 0), (1, 2)])
        assert g.edge_count == 8

    @pytest.mark.parametrize("pair", [(3, 0), (0, 3), (-1, 0)])
    def test_bridge_out_of_range(self, pair):
        k3 = make_complete(3)
        with pytest.raises(InvalidArgumentError):
            bridge_interconnect(k3, k3, [pair])


class TestFiles:

    def test_round_trip_complete(self, tmp_path):
        path = tmp_path / "k5.json"
        write_graph(make_complete(5), path)
        assert read_graph(path) == make_complete(5)

    def test_round_trip_random(self, tmp_path):
        for seed in range(10):
            g = make_erdos_renyi(12, 0.35, seed)
            path = tmp_path / "g{}.json".format(seed)
            write_graph(g, path)
            assert read_graph(path) == g

    def test_written_edges_are_sorted(self, tmp_path):
        path = tmp_path / "g.json"
        write_graph(Graph(3, frozenset({(2, 1), (1, 0)})), path)
        data = json.loads(path.read_text())
        assert data == {"n": 3, "edges": [[0, 1], [1, 2]]}

    def test_one_edge_per_line(self):
        g = Graph(3, frozenset({(1, 2), (0, 1)}))
        assert dumps_graph(g).splitlines() == [
            "{", '  "n": 3,', '  "edges": [', "    [0, 1],", "    [1, 2]",
            "  ]", "}"]
        assert json.loads(dumps_graph(g)) == graph_to_dict(g)
        assert json.loads(dumps_graph(empty_graph(2))) == \
            {"n": 2, "edges": []}

    def test_reader_accepts_either_order(self):
        g = loads_graph('{"n": 3, "edges": [[2, 0]]}')
        assert g.edges == frozenset({(0, 2)})

    def test_self_loop(self):
        with pytest.raises(ParseError, match="self-loop"):
            loads_graph('{"n": 5, "edges": [[0, 0]]}')

    def test_out_of_range(self):
        with pytest.raises(ParseError, match="out of range") as info:
            loads_graph('{"n": 5, "edges": [[0, 1], [7, 1]]}')
        assert info.value.field == "edges[1]"

    def test_duplicate_edge(self):
        with pytest.raises(ParseError, match="duplicate"):
            loads_graph('{"n": 3, "edges": [[0, 1], [1, 0]]}')

    def test_malformed_json_reports_line(self):
        with pytest.raises(ParseError) as info:
            loads_graph('{\n  "n": 3,\n  "edges": [[0, 1],\n}')
        assert info.value.line is not None
        assert "line" in str(info.value)

    def test_missing_count(self):
        with pytest.raises(ParseError) as info:
            loads_graph('{"edges": []}')
        assert info.value.field == "n"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            read_graph(tmp_path / "missing.json")
