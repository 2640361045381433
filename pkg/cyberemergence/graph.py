"""
ATTACK-DEFENSE GRAPHS

## Purpose
Build, store and compose the structures over which attacks spread.

A cybersystem induces an attack-defense structure G = (V, E): the nodes are
the system's components (computers, services) and an edge says that one node
can attack the other. Nodes are the integers 0..n-1 and edges are undirected,
so (u, v) and (v, u) are the same edge. Graphs are simple: no self-loops and
no multi-edges.

## Composition
Two cybersystems G1 (n1 nodes) and G2 (n2 nodes) are composed by placing them
side by side and adding cross edges. The left operand keeps its ids and the
right operand's ids are shifted by n1.
* disjoint union: no cross edges; the systems do not interact.
* join (full interconnection): every node of G1 can attack every node of G2.
Joining two complete graphs gives the complete graph on n1+n2 nodes.
* bridge: only the listed cross edges are added.

## File format
JSON, UTF-8: {"n": <int>, "edges": [[u, v], ...]}. Edges are written with
u < v in ascending order; the reader accepts either order.
"""


import json
from dataclasses import dataclass
from itertools import combinations, product

import networkx as nx
import numpy as np
from loguru import logger
from scipy import sparse

from cyberemergence.errors import InvalidArgumentError, ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise InvalidArgumentError(
                "node count must be an integer, got {!r}".format(self.n))
        if self.n < 0:
            raise InvalidArgumentError(
                "node count must be >= 0, got {}".format(self.n))

        canonical = set()
        for edge in self.edges:
            u, v = _canonical_edge(edge, self.n)
            canonical.add((u, v))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", frozenset(canonical))

    @property
    def edge_count(self):
        return len(self.edges)

    def sorted_edges(self):
        return sorted(self.edges)

    def degrees(self):
        degree = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return degree

    def neighbors(self, node):
        return sorted({v if u == node else u
                       for u, v in self.edges if node in (u, v)})

    def with_edge(self, u, v):
        return Graph(self.n, self.edges | {(u, v)})

    def summary(self):
        return {"n": self.n, "edges": self.edge_count}


def _canonical_edge(edge, n):
    try:
        u, v = edge
        u, v = int(u), int(v)
    except (TypeError, ValueError):
        raise InvalidArgumentError(
            "an edge must be a pair of node ids, got {!r}".format(edge))

    if u == v:
        raise InvalidArgumentError("self-loop on node {}".format(u))
    if not (0 <= u < n and 0 <= v < n):
        raise InvalidArgumentError(
            "edge ({}, {}) out of range for n={}".format(u, v, n))

    return (u, v) if u < v else (v, u)


def empty_graph(n=0):
    return Graph(n, frozenset())


def from_networkx(nx_graph):
    """Relabels the nodes of `nx_graph` to 0..n-1 in sorted order."""
    relabelled = nx.convert_node_labels_to_integers(nx_graph,
                                                    ordering="sorted")
    return Graph(relabelled.number_of_nodes(),
                 frozenset(tuple(e) for e in relabelled.edges()))


def to_networkx(g):
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.n))
    nx_graph.add_edges_from(g.sorted_edges())
    return nx_graph


def adjacency_matrix(g, dtype=float):
    """Symmetric adjacency matrix in CSR form."""
    if g.edge_count == 0:
        return sparse.csr_matrix((g.n, g.n), dtype=dtype)

    edges = np.array(g.sorted_edges(), dtype=np.int64)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    data = np.ones(len(rows), dtype=dtype)
    return sparse.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def _check_node_count(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgumentError(
            "node count must be an integer >= 1, got {!r}".format(n))


# GENERATORS
def make_complete(n):
    _check_node_count(n)
    return from_networkx(nx.complete_graph(n))


def make_star(n):
    """Node 0 is the hub, connected to the other n-1 nodes."""
    _check_node_count(n)
    return from_networkx(nx.star_graph(n - 1))


def make_path(n):
    _check_node_count(n)
    return from_networkx(nx.path_graph(n))


def make_erdos_renyi(n, p, seed):
    """
    G(n, p) with one PCG64 uniform per node pair, pairs visited in ascending
    (u, v) order; the pair is an edge iff its uniform is < p. The same seed
    gives the same graph on every platform.
    """
    _check_node_count(n)
    if not 0 <= p <= 1:
        raise InvalidArgumentError(
            "edge probability must be in [0, 1], got {}".format(p))

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    pairs = list(combinations(range(n), 2))
    draws = rng.random(len(pairs))
    edges = frozenset(pair for pair, u in zip(pairs, draws) if u < p)

    logger.debug("G({}, {}) seed={} -> {} edges", n, p, seed, len(edges))
    return Graph(n, edges)


# COMPOSITION
def _shift(g, offset):
    return {(u + offset, v + offset) for u, v in g.edges}


def disjoint_union(g1, g2):
    return Graph(g1.n + g2.n, frozenset(g1.edges | _shift(g2, g1.n)))


def full_interconnect(g1, g2):
    cross = {(u, g1.n + v) for u, v in product(range(g1.n), range(g2.n))}
    composite = Graph(g1.n + g2.n,
                      frozenset(g1.edges | _shift(g2, g1.n) | cross))

    logger.debug("join: {}+{} nodes, {} edges", g1.n, g2.n,
                 composite.edge_count)
    return composite


def bridge_interconnect(g1, g2, cross_edges):
    """
    `cross_edges` are (g1-node, g2-node) pairs in each operand's own ids.
    Duplicates collapse to one edge.
    """
    cross = set()
    for pair in cross_edges:
        try:
            u, v = pair
            u, v = int(u), int(v)
        except (TypeError, ValueError):
            raise InvalidArgumentError(
                "a bridge edge must be a (g1-node, g2-node) pair, "
                "got {!r}".format(pair))
        if not 0 <= u < g1.n:
            raise InvalidArgumentError(
                "bridge node {} out of range for left graph "
                "(n={})".format(u, g1.n))
        if not 0 <= v < g2.n:
            raise InvalidArgumentError(
                "bridge node {} out of range for right graph "
                "(n={})".format(v, g2.n))
        cross.add((u, g1.n + v))

    return Graph(g1.n + g2.n,
                 frozenset(g1.edges | _shift(g2, g1.n) | cross))


# FILES
def graph_to_dict(g):
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def dumps_graph(g):
    # One edge per line.
    data = graph_to_dict(g)
    rows = ",\n".join("    " + json.dumps(edge) for edge in data["edges"])
    edges = "[\n{}\n  ]".format(rows) if rows else "[]"
    return '{{\n  "n": {},\n  "edges": {}\n}}\n'.format(
        json.dumps(data["n"]), edges)


def write_graph(g, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_graph(g))


def loads_graph(text, path=None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("malformed JSON: {}".format(e.msg), path=path,
                         line=e.lineno)

    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path=path)

    n = data.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError("node count must be a non-negative integer",
                         path=path, field="n")

    edges = data.get("edges")
    if not isinstance(edges, list):
        raise ParseError("edges must be a list", path=path, field="edges")

    seen = set()
    for index, edge in enumerate(edges):
        field = "edges[{}]".format(index)
        if (not isinstance(edge, list) or len(edge) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool)
                           for x in edge)):
            raise ParseError("edge must be a pair of integers", path=path,
                             field=field)
        u, v = edge
        if u == v:
            raise ParseError("self-loop on node {}".format(u), path=path,
                             field=field)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError("edge ({}, {}) out of range for n={}".format(
                u, v, n), path=path, field=field)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError("duplicate edge ({}, {})".format(*key),
                             path=path, field=field)
        seen.add(key)

    return Graph(n, frozenset(seen))


def read_graph(path):
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ParseError("cannot read graph file: {}".format(e.strerror),
                         path=path)
    return loads_graph(text, path=path)


if __name__ == "__main__":
    g = full_interconnect(make_complete(6), make_complete(6))
    print(g.summary())
    print(g == make_complete(12))
