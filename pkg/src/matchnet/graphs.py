"""Graph types, generators, and tree utilities.

Vertices are the integers 1..n everywhere.  Edges are unordered pairs
stored as (u, v) with u < v.  All generators emit connected graphs with
a documented canonical numbering:

- path:n          1 - 2 - ... - n
- cycle:n         ring 1 - 2 - ... - n - 1
- complete:n      all pairs
- star:n          center 1, leaves 2..n
- multipartite:p,s   part i is the block {(i-1)s+1 .. is}; edges join
                  different parts
- hypercube:dim   vertices 1..2^dim, u ~ v iff (u-1) xor (v-1) is a
                  power of two
- mesh:L1,..,Ld   coordinates x in [1,L1] x ... x [1,Ld]; the last
                  coordinate varies fastest; edges join points differing
                  by one in a single coordinate
- random_tree:n,seed   Pruefer sequence drawn from random.Random(seed)
- pyramid:m,d     m levels of d-dimensional meshes with sides 1,2,..,2^(m-1),
                  numbered level-major from the apex; every child
                  x in level l connects to its parent ceil(x/2) in level l-1
- multigrid:m,d   pyramid minus all parent edges except the one from the
                  child with all-odd local coordinates

The family string stored on a Graph is exactly the generator spec
("mesh:3,3"), so a graph read back from JSON can be re-dispatched.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ParameterError, StructureError


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on vertices 1..n."""

    n: int
    edges: frozenset
    family: str | None = None
    # For cartesian products built in-memory; not serialized.
    factors: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("graph needs at least one vertex")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise StructureError(f"bad edge ({u},{v}) for n={self.n}")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __repr__(self):  # keep reprs short, edge sets get large
        fam = f" family={self.family!r}" if self.family else ""
        return f"Graph(n={self.n}, m={len(self.edges)}{fam})"


def graph(n: int, edges: Iterable[tuple[int, int]], family: str | None = None,
          factors: tuple = ()) -> Graph:
    es = frozenset(_norm_edge(u, v) for u, v in edges)
    for u, v in es:
        if u == v:
            raise StructureError(f"self-loop at {u}")
    return Graph(n=n, edges=es, family=family, factors=factors)


@lru_cache(maxsize=None)
def adjacency(g: Graph) -> dict[int, tuple[int, ...]]:
    """Vertex -> sorted tuple of neighbours."""
    adj: dict[int, list[int]] = {v: [] for v in range(1, g.n + 1)}
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    return {v: tuple(sorted(ns)) for v, ns in adj.items()}


def bfs_dist(g: Graph, src: int) -> dict[int, int]:
    adj = adjacency(g)
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def is_connected(g: Graph) -> bool:
    return len(bfs_dist(g, 1)) == g.n


def check_connected(g: Graph) -> None:
    if not is_connected(g):
        raise StructureError("graph is not connected")


def is_tree(g: Graph) -> bool:
    return len(g.edges) == g.n - 1 and is_connected(g)


def check_tree(g: Graph) -> None:
    if not is_tree(g):
        raise StructureError("graph is not a tree")


def max_degree(g: Graph) -> int:
    adj = adjacency(g)
    return max(len(adj[v]) for v in range(1, g.n + 1))


def shortest_path(g: Graph, src: int, dst: int) -> list[int]:
    """One shortest path src..dst (BFS, smallest-id tie-break)."""
    adj = adjacency(g)
    parent = {src: None}
    frontier = [src]
    while frontier and dst not in parent:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    if dst not in parent:
        raise StructureError(f"no path {src}..{dst}")
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


# ---------------------------------------------------------------------------
# generators


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ParameterError("path needs n >= 1")
    return graph(n, [(i, i + 1) for i in range(1, n)], family=f"path:{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle needs n >= 3")
    es = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return graph(n, es, family=f"cycle:{n}")


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ParameterError("complete graph needs n >= 1")
    es = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    return graph(n, es, family=f"complete:{n}")


def star_graph(n: int) -> Graph:
    if n < 2:
        raise ParameterError("star needs n >= 2")
    return graph(n, [(1, v) for v in range(2, n + 1)], family=f"star:{n}")


def multipartite_graph(p: int, s: int) -> Graph:
    """Complete p-partite graph with p parts of size s each."""
    if p < 2 or s < 1:
        raise ParameterError("multipartite needs p >= 2 parts, size s >= 1")
    n = p * s
    part = {v: (v - 1) // s for v in range(1, n + 1)}
    es = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
          if part[u] != part[v]]
    return graph(n, es, family=f"multipartite:{p},{s}")


def multipartite_parts(p: int, s: int) -> list[list[int]]:
    return [list(range((i - 1) * s + 1, i * s + 1)) for i in range(1, p + 1)]


def hypercube_graph(dim: int) -> Graph:
    if dim < 1:
        raise ParameterError("hypercube needs dim >= 1")
    n = 1 << dim
    es = []
    for u in range(n):
        for b in range(dim):
            v = u ^ (1 << b)
            if v > u:
                es.append((u + 1, v + 1))
    return graph(n, es, family=f"hypercube:{dim}")


def mesh_strides(lengths: Sequence[int]) -> list[int]:
    strides = [1] * len(lengths)
    for i in range(len(lengths) - 2, -1, -1):
        strides[i] = strides[i + 1] * lengths[i + 1]
    return strides


def mesh_vertex(coords: Sequence[int], lengths: Sequence[int]) -> int:
    strides = mesh_strides(lengths)
    return 1 + sum((c - 1) * s for c, s in zip(coords, strides))


def mesh_coords(v: int, lengths: Sequence[int]) -> tuple[int, ...]:
    strides = mesh_strides(lengths)
    rem = v - 1
    out = []
    for s in strides:
        out.append(rem // s + 1)
        rem %= s
    return tuple(out)


def mesh_graph(lengths: Sequence[int]) -> Graph:
    lengths = tuple(int(x) for x in lengths)
    if not lengths or any(x < 1 for x in lengths):
        raise ParameterError("mesh needs positive side lengths")
    n = math.prod(lengths)
    es = []
    for v in range(1, n + 1):
        coords = mesh_coords(v, lengths)
        for i, L in enumerate(lengths):
            if coords[i] < L:
                nb = list(coords)
                nb[i] += 1
                es.append((v, mesh_vertex(nb, lengths)))
    fam = "mesh:" + ",".join(str(x) for x in lengths)
    return graph(n, es, family=fam)


def random_tree(n: int, seed: int = 0) -> Graph:
    """Uniform labeled tree from a seeded Pruefer sequence."""
    if n < 1:
        raise ParameterError("tree needs n >= 1")
    fam = f"random_tree:{n},{seed}"
    if n == 1:
        return graph(1, [], family=fam)
    if n == 2:
        return graph(2, [(1, 2)], family=fam)
    rng = random.Random(seed)
    seq = [rng.randrange(1, n + 1) for _ in range(n - 2)]
    degree = {v: 1 for v in range(1, n + 1)}
    for v in seq:
        degree[v] += 1
    import heapq

    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    es = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        es.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    es.append((u, w))
    return graph(n, es, family=fam)


# ---------------------------------------------------------------------------
# pyramids and multigrids


class PyramidInfo:
    """Coordinate bookkeeping shared by pyramid and multigrid families.

    Level l (0-based from the apex) is a d-dimensional mesh of side 2^l
    with n_l = 2^(l*d) vertices.  Vertices are numbered level-major; the
    in-level numbering is the mesh numbering above.
    """

    def __init__(self, m: int, d: int):
        if m < 1 or d < 1:
            raise ParameterError("pyramid needs m >= 1, d >= 1")
        self.m = m
        self.d = d
        self.level_sizes = [1 << (l * d) for l in range(m)]
        self.level_offsets = [0]
        for s in self.level_sizes[:-1]:
            self.level_offsets.append(self.level_offsets[-1] + s)
        self.n = sum(self.level_sizes)

    def side(self, level: int) -> int:
        return 1 << level

    def lengths(self, level: int) -> tuple[int, ...]:
        return (self.side(level),) * self.d

    def level_of(self, v: int) -> int:
        for l in range(self.m - 1, -1, -1):
            if v > self.level_offsets[l]:
                return l
        raise StructureError(f"vertex {v} out of range")

    def vertex(self, level: int, coords: Sequence[int]) -> int:
        return self.level_offsets[level] + mesh_vertex(coords, self.lengths(level))

    def coords(self, v: int) -> tuple[int, tuple[int, ...]]:
        l = self.level_of(v)
        return l, mesh_coords(v - self.level_offsets[l], self.lengths(l))

    def level_vertices(self, level: int) -> list[int]:
        off = self.level_offsets[level]
        return list(range(off + 1, off + self.level_sizes[level] + 1))

    def parent(self, v: int) -> int:
        l, c = self.coords(v)
        if l == 0:
            raise StructureError("apex has no parent")
        pc = tuple((x + 1) // 2 for x in c)
        return self.vertex(l - 1, pc)

    def first_child(self, v: int) -> int:
        """Child with all-odd local coordinates (the kept multigrid edge)."""
        l, c = self.coords(v)
        if l == self.m - 1:
            raise StructureError("bottom level has no children")
        cc = tuple(2 * x - 1 for x in c)
        return self.vertex(l + 1, cc)

    def phi(self, k: int) -> int:
        """Number of maximal vertical multigrid paths with k edges."""
        if k == self.m - 1:
            return 1
        if 0 <= k < self.m - 1:
            lvl = self.m - 1 - k
            return self.level_sizes[lvl] - self.level_sizes[lvl - 1]
        raise ParameterError(f"no vertical paths of length {k}")

    def vertical_paths(self) -> list[list[int]]:
        """Maximal vertical paths of the multigrid, as vertex lists top-down.

        Each vertex lies on exactly one path.  A path starts at the apex
        or at any vertex with at least one even local coordinate, and
        follows first_child down to the bottom level.
        """
        paths = []
        for l in range(self.m):
            for v in self.level_vertices(l):
                _, c = self.coords(v)
                if l == 0 or any(x % 2 == 0 for x in c):
                    p = [v]
                    while self.level_of(p[-1]) < self.m - 1:
                        p.append(self.first_child(p[-1]))
                    paths.append(p)
        assert sum(len(p) for p in paths) == self.n
        return paths


def _pyramid_edges(info: PyramidInfo, all_children: bool) -> list[tuple[int, int]]:
    es = []
    for l in range(info.m):
        lengths = info.lengths(l)
        off = info.level_offsets[l]
        for v in info.level_vertices(l):
            coords = mesh_coords(v - off, lengths)
            for i, L in enumerate(lengths):
                if coords[i] < L:
                    nb = list(coords)
                    nb[i] += 1
                    es.append((v, off + mesh_vertex(nb, lengths)))
        if l > 0:
            for v in info.level_vertices(l):
                _, c = info.coords(v)
                if all_children or all(x % 2 == 1 for x in c):
                    es.append(_norm_edge(info.parent(v), v))
    return es


def pyramid_graph(m: int, d: int) -> Graph:
    info = PyramidInfo(m, d)
    return graph(info.n, _pyramid_edges(info, all_children=True),
                 family=f"pyramid:{m},{d}")


def multigrid_graph(m: int, d: int) -> Graph:
    info = PyramidInfo(m, d)
    return graph(info.n, _pyramid_edges(info, all_children=False),
                 family=f"multigrid:{m},{d}")


# ---------------------------------------------------------------------------
# cartesian product


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Cartesian product; vertex (a, b) gets id (a-1)*|g2| + b."""
    n1, n2 = g1.n, g2.n
    es = []
    for a in range(1, n1 + 1):
        base = (a - 1) * n2
        for u, v in g2.edges:
            es.append((base + u, base + v))
    for u, v in g1.edges:
        for b in range(1, n2 + 1):
            es.append(((u - 1) * n2 + b, (v - 1) * n2 + b))
    return graph(n1 * n2, es, family="product", factors=(g1, g2))


def product_vertex(a: int, b: int, n2: int) -> int:
    return (a - 1) * n2 + b


def product_coords(v: int, n2: int) -> tuple[int, int]:
    return (v - 1) // n2 + 1, (v - 1) % n2 + 1


# ---------------------------------------------------------------------------
# family spec parsing


_FAMILIES = {
    "path": (path_graph, 1),
    "cycle": (cycle_graph, 1),
    "complete": (complete_graph, 1),
    "star": (star_graph, 1),
    "multipartite": (multipartite_graph, 2),
    "hypercube": (hypercube_graph, 1),
    "random_tree": (random_tree, 2),
    "pyramid": (pyramid_graph, 2),
    "multigrid": (multigrid_graph, 2),
}


def generate(spec: str) -> Graph:
    """Build a graph from a family spec string like "mesh:3,3"."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    args = [a for a in rest.split(",") if a.strip() != ""]
    try:
        ints = [int(a) for a in args]
    except ValueError as e:
        raise ParameterError(f"non-integer parameter in {spec!r}") from e
    if name == "mesh":
        return mesh_graph(ints)
    if name not in _FAMILIES:
        raise ParameterError(f"unknown family {name!r}")
    fn, arity = _FAMILIES[name]
    if name == "random_tree" and len(ints) == 1:
        ints.append(0)  # seed defaults to 0
    if len(ints) != arity:
        raise ParameterError(f"family {name!r} takes {arity} parameter(s)")
    return fn(*ints)


def family_name(g: Graph) -> str | None:
    if g.family is None:
        return None
    return g.family.partition(":")[0]


def family_params(g: Graph) -> list[int]:
    if g.family is None or ":" not in g.family:
        return []
    return [int(x) for x in g.family.partition(":")[2].split(",")]


# ---------------------------------------------------------------------------
# trees: spanning tree, diameter path, contour


def spanning_tree(g: Graph) -> Graph:
    """Spanning tree grown around a longest BFS-to-BFS path.

    Double sweep: BFS from 1 picks the farthest vertex u, BFS from u
    picks w; the u..w shortest path seeds the tree and the rest of the
    graph is attached by BFS from the path.
    """
    check_connected(g)
    if g.n == 1:
        return graph(1, [], family=g.family and f"tree-of-{g.family}")
    d1 = bfs_dist(g, 1)
    u = min(v for v in d1 if d1[v] == max(d1.values()))
    du = bfs_dist(g, u)
    w = min(v for v in du if du[v] == max(du.values()))
    path = shortest_path(g, u, w)
    es = [(path[i], path[i + 1]) for i in range(len(path) - 1)]
    seen = set(path)
    adj = adjacency(g)
    frontier = list(path)
    while frontier:
        nxt = []
        for v in frontier:
            for x in adj[v]:
                if x not in seen:
                    seen.add(x)
                    es.append((v, x))
                    nxt.append(x)
        frontier = nxt
    assert len(seen) == g.n
    return graph(g.n, es)


def tree_diameter_path(t: Graph) -> list[int]:
    """Vertex list of a longest path in the tree (double BFS)."""
    check_tree(t)
    if t.n == 1:
        return [1]
    d1 = bfs_dist(t, 1)
    u = min(v for v in d1 if d1[v] == max(d1.values()))
    du = bfs_dist(t, u)
    w = min(v for v in du if du[v] == max(du.values()))
    return shortest_path(t, u, w)


@dataclass(frozen=True)
class Contour:
    """Closed DFS walk of a tree plus the theorem's vertex marks.

    walk has 2n-1 entries, starts and ends at the root, and crosses every
    tree edge exactly twice.  Each vertex owns one marked position: its
    first walk occurrence when its distance from the root is even, its
    last occurrence when odd.  Consecutive marks are at most 3 apart.
    """

    root: int
    walk: tuple
    marks: dict  # vertex -> walk index

    def rank_order(self) -> tuple:
        """Target order: rank vertices by mark position (1-based ranks)."""
        by_mark = sorted(self.marks, key=lambda v: self.marks[v])
        pi = [0] * len(by_mark)
        for r, v in enumerate(by_mark, start=1):
            pi[v - 1] = r
        return tuple(pi)


def tree_contour(t: Graph, root: int = 1) -> Contour:
    check_tree(t)
    if not (1 <= root <= t.n):
        raise ParameterError(f"root {root} out of range")
    adj = adjacency(t)
    if t.n == 1:
        return Contour(root=root, walk=(root,), marks={root: 0})
    walk = [root]
    parent = {root: None}
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            if w != parent[v]:
                parent[w] = v
                walk.append(w)
                stack.append((w, iter(adj[w])))
                advanced = True
                break
        if not advanced:
            stack.pop()
            if stack:
                walk.append(stack[-1][0])
    assert len(walk) == 2 * t.n - 1
    dist = bfs_dist(t, root)
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, v in enumerate(walk):
        first.setdefault(v, i)
        last[v] = i
    marks = {v: (first[v] if dist[v] % 2 == 0 else last[v])
             for v in range(1, t.n + 1)}
    assert len(set(marks.values())) == t.n
    return Contour(root=root, walk=tuple(walk), marks=marks)


# ---------------------------------------------------------------------------
# matchings


def maximal_matching(g: Graph) -> list[tuple[int, int]]:
    """Greedy maximal matching over lexicographically sorted edges."""
    used: set[int] = set()
    out = []
    for u, v in sorted(g.edges):
        if u not in used and v not in used:
            out.append((u, v))
            used.add(u)
            used.add(v)
    return out


# ---------------------------------------------------------------------------
# serialization


def to_json(g: Graph, order: Sequence[int] | None = None) -> str:
    doc = {
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "family": g.family,
        "order": list(order) if order is not None else None,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> tuple[Graph, list[int] | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureError(f"bad graph JSON: {e}") from e
    for key in ("n", "edges"):
        if key not in doc:
            raise StructureError(f"graph JSON missing {key!r}")
    g = graph(doc["n"], [tuple(e) for e in doc["edges"]],
              family=doc.get("family"))
    order = doc.get("order")
    return g, list(order) if order is not None else None


def to_dot(g: Graph) -> str:
    lines = ["graph G {"]
    for v in range(1, g.n + 1):
        lines.append(f"  {v};")
    for u, v in g.sorted_edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
