import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbc_deploy.graph import (
    UNREACHABLE,
    Graph,
    GraphFormatError,
    all_pairs,
    bfs_single_source,
    parse_edge_list,
    read_edge_list,
    relabel_edges,
)
from gbc_deploy.oracle import enumerate_shortest_paths

from conftest import random_graphs


def test_parse_path_graph(p3):
    assert p3.n == 3 and p3.m == 2
    assert p3.adjacency == ((1,), (0, 2), (1,))


def test_parse_skips_comments_and_blanks():
    g = parse_edge_list("# c\n\n0 1\n")
    assert (g.n, g.m) == (2, 1)


def test_parse_crlf(tmp_path):
    path = tmp_path / "g.edges"
    path.write_bytes(b"0 1\r\n1 2\r\n")
    assert read_edge_list(path).m == 2


@pytest.mark.parametrize(
    "text, code, line",
    [
        ("0 0", "REJECT_SELF_LOOP", 1),
        ("0 1\n1 0", "REJECT_DUPLICATE", 2),
        ("0 1\n# x\n1 a", "PARSE_ERROR", 3),
        ("0 1 2", "PARSE_ERROR", 1),
    ],
)
def test_parse_errors(text, code, line):
    with pytest.raises(GraphFormatError) as err:
        parse_edge_list(text)
    assert err.value.code == code
    assert err.value.line == line


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])


def test_relabel_edges():
    edges, mapping = relabel_edges([("a", "z"), ("z", 7)])
    assert edges == [(0, 1), (1, 2)]
    assert mapping == {"a": 0, "z": 1, 7: 2}


def test_bfs_p3(p3):
    dist, sigma = bfs_single_source(p3, 0)
    assert dist.tolist() == [0, 1, 2]
    assert sigma.tolist() == [1, 1, 1]


def test_bfs_c4(c4):
    dist, sigma = bfs_single_source(c4, 0)
    assert dist[2] == 2
    assert sigma[2] == len(enumerate_shortest_paths(c4, 0, 2)) == 2


def test_bfs_star(star):
    dist, sigma = bfs_single_source(star, 0)
    assert dist.tolist() == [0, 1, 1, 1]
    assert sigma.tolist() == [1, 1, 1, 1]


def test_all_pairs_fig1(fig1):
    assert all_pairs(fig1).sigma[1, 4] == 3


def test_all_pairs_disconnected():
    spd = all_pairs(parse_edge_list("0 1\n2 3"))
    assert spd.dist[0, 2] == UNREACHABLE
    assert spd.sigma[0, 2] == 0


def test_all_pairs_c4_sigma(c4):
    spd = all_pairs(c4)
    twos = [(s, t) for s, t in itertools.permutations(range(4), 2) if spd.sigma[s, t] == 2]
    assert sorted(twos) == [(0, 2), (1, 3), (2, 0), (3, 1)]
    for s, t in itertools.permutations(range(4), 2):
        assert spd.sigma[s, t] == len(enumerate_shortest_paths(c4, s, t))


def test_single_node_graph():
    spd = all_pairs(Graph.from_edges(1, []))
    assert spd.dist.tolist() == [[0]]
    assert spd.sigma.tolist() == [[1.0]]


def test_all_pairs_matches_single_source_and_enumeration():
    for g in random_graphs(60, seed=11):
        spd = all_pairs(g)
        for s in range(g.n):
            dist, sigma = bfs_single_source(g, s)
            assert np.array_equal(dist, spd.dist[s])
            assert np.array_equal(sigma, spd.sigma[s])
            for t in range(g.n):
                if s != t:
                    assert round(spd.sigma[s, t]) == len(enumerate_shortest_paths(g, s, t))


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 10))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_shortest_path_invariants(g):
    spd = all_pairs(g)
    d, s = spd.dist, spd.sigma
    assert np.all(np.diag(d) == 0) and np.all(np.diag(s) == 1)
    assert np.array_equal(d, d.T) and np.array_equal(s, s.T)
    off = ~np.eye(g.n, dtype=bool)
    assert np.array_equal((d == UNREACHABLE) & off, (s == 0) & off)
    assert np.all(s[d != UNREACHABLE] >= 1)
    reach = d != UNREACHABLE
    for v in range(g.n):
        ok = reach & reach[:, [v]] & reach[[v], :]
        assert np.all((d <= d[:, [v]] + d[[v], :])[ok])
