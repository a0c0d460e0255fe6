import pytest
from hypothesis import given, settings, strategies as st

from matchnet.errors import ParameterError, StructureError
from matchnet.graphs import (PyramidInfo, adjacency, bfs_dist,
                             cartesian_product, check_connected, check_tree,
                             complete_graph, cycle_graph, family_name,
                             family_params, from_json, generate, graph,
                             hypercube_graph, max_degree, maximal_matching,
                             mesh_coords, mesh_graph, mesh_vertex,
                             multigrid_graph, multipartite_graph,
                             multipartite_parts, path_graph, pyramid_graph,
                             random_tree, spanning_tree, star_graph, to_dot,
                             to_json, tree_contour, tree_diameter_path)


def test_generators_basic():
    assert path_graph(5).edges == frozenset({(1, 2), (2, 3), (3, 4), (4, 5)})
    assert len(complete_graph(6).edges) == 15
    assert len(cycle_graph(6).edges) == 6
    assert star_graph(5).edges == frozenset({(1, v) for v in range(2, 6)})


def test_generate_specs():
    for spec, n in [("path:7", 7), ("cycle:5", 5), ("complete:4", 4),
                    ("star:6", 6), ("multipartite:3,2", 6), ("hypercube:3", 8),
                    ("mesh:2,3", 6), ("random_tree:9,1", 9),
                    ("pyramid:2,2", 5), ("multigrid:3,1", 7)]:
        g = generate(spec)
        assert g.n == n
        assert g.family == spec or family_name(g) == spec.split(":")[0]
        check_connected(g)
    with pytest.raises(ParameterError):
        generate("moebius:5")
    with pytest.raises(ParameterError):
        generate("path:x")


def test_hypercube_edges_flip_one_bit():
    g = hypercube_graph(4)
    assert g.n == 16
    for u, v in g.edges:
        x = (u - 1) ^ (v - 1)
        assert x and x & (x - 1) == 0
    assert len(g.edges) == 4 * 16 // 2


def test_mesh_numbering_last_coordinate_fastest():
    g = mesh_graph((2, 3))
    assert mesh_vertex((1, 1), (2, 3)) == 1
    assert mesh_vertex((1, 3), (2, 3)) == 3
    assert mesh_vertex((2, 1), (2, 3)) == 4
    for v in range(1, 7):
        assert mesh_vertex(mesh_coords(v, (2, 3)), (2, 3)) == v
    assert (1, 4) in g.edges and (1, 2) in g.edges and (1, 5) not in g.edges


def test_multipartite_parts_and_edges():
    g = multipartite_graph(3, 2)
    parts = multipartite_parts(3, 2)
    assert parts == [[1, 2], [3, 4], [5, 6]]
    for p in parts:
        assert (p[0], p[1]) not in g.edges
    assert len(g.edges) == 3 * 4 // 2 * 2  # complete tripartite on 2+2+2


def test_pyramid_structure():
    info = PyramidInfo(3, 2)
    assert info.level_sizes == [1, 4, 16]
    assert info.level_vertices(0) == [1]
    assert info.level_vertices(1) == [2, 3, 4, 5]
    g = pyramid_graph(3, 2)
    assert g.n == 21
    # every non-apex vertex has exactly one parent edge
    for v in info.level_vertices(1) + info.level_vertices(2):
        assert (min(info.parent(v), v), max(info.parent(v), v)) in g.edges


def test_multigrid_keeps_all_odd_child_edge_only():
    info = PyramidInfo(2, 2)
    g = multigrid_graph(2, 2)
    # level 1 is a 2x2 mesh: 4 mesh edges, plus exactly one vertical edge
    vertical = [e for e in g.edges if 1 in e]
    assert vertical == [(1, info.first_child(1))]
    assert len(g.edges) == 4 + 1


def test_multigrid_phi_counts():
    info = PyramidInfo(3, 2)
    assert info.phi(2) == 1
    assert info.phi(1) == 3
    paths = info.vertical_paths()
    assert sum(len(p) - 1 == 2 for p in paths) == 1
    assert sum(len(p) - 1 == 1 for p in paths) == 3
    with pytest.raises(ParameterError):
        info.phi(5)


def test_cartesian_product_ids():
    g = cartesian_product(path_graph(2), path_graph(3))
    assert g.n == 6
    # (a,b) -> (a-1)*3+b; matches mesh numbering
    assert g.edges == mesh_graph((2, 3)).edges
    assert [f.n for f in g.factors] == [2, 3]


def test_spanning_tree_examples():
    t = spanning_tree(complete_graph(4))
    check_tree(t)
    assert len(t.edges) == 3
    t = spanning_tree(mesh_graph((3, 3)))
    check_tree(t)
    assert len(t.edges) == 8
    assert t.edges <= mesh_graph((3, 3)).edges


def test_diameter_path_is_eccentric():
    for seed in range(5):
        t = random_tree(14, seed)
        path = tree_diameter_path(t)
        d = bfs_dist(t, path[0])
        assert d[path[-1]] == max(d.values())
        assert len(path) - 1 == d[path[-1]]


def test_contour_walk_and_marks():
    for seed in range(6):
        t = random_tree(11, seed)
        c = tree_contour(t)
        assert len(c.walk) == 2 * t.n - 1
        assert c.walk[0] == c.walk[-1] == 1 or t.n == 1
        # every vertex appears deg(v) times (root once more: both endpoints)
        adj = adjacency(t)
        for v in range(1, t.n + 1):
            expect = len(adj[v]) + (1 if v == c.root else 0)
            assert c.walk.count(v) == expect
        marks = sorted(c.marks.values())
        assert len(set(marks)) == t.n
        assert all(b - a <= 3 for a, b in zip(marks, marks[1:]))


def test_maximal_matching_is_maximal():
    for g in (complete_graph(7), mesh_graph((3, 4)), star_graph(9)):
        m = maximal_matching(g)
        used = {v for e in m for v in e}
        assert len(used) == 2 * len(m)
        for u, v in g.edges:
            assert u in used or v in used


def test_connectivity_and_tree_checks():
    with pytest.raises(StructureError):
        check_connected(graph(4, [(1, 2), (3, 4)]))
    with pytest.raises(StructureError):
        check_tree(cycle_graph(4))
    with pytest.raises(StructureError):
        graph(3, [(1, 5)])


@settings(max_examples=40)
@given(st.integers(2, 16), st.integers(0, 10_000))
def test_json_roundtrip(n, seed):
    t = random_tree(n, seed)
    g2, order = from_json(to_json(t, order=range(1, n + 1)))
    assert g2.n == t.n and g2.edges == t.edges and g2.family == t.family
    assert order == list(range(1, n + 1))


def test_json_rejects_malformed():
    with pytest.raises(StructureError):
        from_json("{not json")
    with pytest.raises(StructureError):
        from_json('{"edges": []}')


def test_dot_lists_all_vertices():
    g = pyramid_graph(2, 2)
    dot = to_dot(g)
    for v in range(1, g.n + 1):
        assert f"  {v};" in dot
    assert dot.count("--") == len(g.edges)


def test_random_tree_seeded():
    assert random_tree(20, 3).edges == random_tree(20, 3).edges
    assert random_tree(20, 3).edges != random_tree(20, 4).edges
    check_tree(random_tree(2, 0))


def test_degree_helpers():
    assert max_degree(star_graph(7)) == 6
    assert max_degree(path_graph(2)) == 1
