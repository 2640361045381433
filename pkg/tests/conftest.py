import matplotlib

matplotlib.use("Agg")

import pytest

from cyberemergence.graph import make_complete, make_path, write_graph


@pytest.fixture
def graph_file(tmp_path):
    """Writes a graph to tmp_path and returns the path as a string."""
    def write(g, name="graph.json"):
        path = tmp_path / name
        write_graph(g, path)
        return str(path)
    return write


@pytest.fixture
def k6_file(graph_file):
    return graph_file(make_complete(6), "k6.json")


@pytest.fixture
def k8_file(graph_file):
    return graph_file(make_complete(8), "k8.json")


@pytest.fixture
def path_file(graph_file):
    return graph_file(make_path(12), "path.json")
