"""Builders for sorting networks on concrete host graphs.

Every builder returns a SortingNetwork whose stages are matchings of host
edges, with a depth certificate recording the claimed bound next to the
achieved depth.  Builders are pure: the same parameters always produce the
same network, byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import zip_longest

from .errors import ConstructionError, ParameterError, StructureError
from .graphs import (Graph, PyramidInfo, adjacency, cartesian_product,
                     check_connected,
                     check_tree, complete_graph, family_name, family_params,
                     hypercube_graph, max_degree, maximal_matching, mesh_graph,
                     path_graph, pyramid_graph, spanning_tree, tree_contour,
                     tree_diameter_path)
from .network import (DIR, SWAP, SortingNetwork, make_network)
from .perms import identity
from .routing import (complete_assignment, route_auto, route_depth_bound,
                      route_multigrid, route_to_path)


@dataclass(frozen=True)
class DepthCertificate:
    formula_name: str
    parameters: dict
    claimed_bound: int
    achieved_depth: int

    def as_dict(self) -> dict:
        return {"formula_name": self.formula_name,
                "parameters": dict(self.parameters),
                "claimed_bound": self.claimed_bound,
                "achieved_depth": self.achieved_depth}


def _cert(name: str, parameters: dict, claimed: int, achieved: int) -> dict:
    if achieved > claimed:
        raise ConstructionError(
            f"{name}: achieved depth {achieved} exceeds claimed {claimed}")
    return DepthCertificate(name, parameters, claimed, achieved).as_dict()


def _claimed(net: SortingNetwork) -> int:
    if net.certificate is not None:
        return net.certificate["claimed_bound"]
    return net.depth


# ---------------------------------------------------------------------------
# fixed-schedule sorters

def odd_even_transposition(n: int) -> SortingNetwork:
    """Odd-even transposition sort on the path; depth exactly n for n >= 2."""
    if n < 1:
        raise ParameterError("need n >= 1")
    host = path_graph(n)
    if n == 1:
        return make_network(host, (1,), [],
                            certificate=_cert("odd_even", {"n": 1}, 0, 0))
    stages = []
    for k in range(1, n + 1):
        stages.append([(i, i + 1, DIR) for i in range(1, n) if i % 2 == k % 2])
    return make_network(host, identity(n), stages,
                        certificate=_cert("odd_even", {"n": n}, n, n))


def bitonic_hypercube(dim: int) -> SortingNetwork:
    """Bitonic sorter on the hypercube; every comparator flips one bit."""
    if dim < 1:
        raise ParameterError("need dim >= 1")
    n = 1 << dim
    stages = []
    k = 2
    while k <= n:
        j = k >> 1
        while j >= 1:
            stage = []
            for i in range(n):
                partner = i ^ j
                if partner > i:
                    if i & k == 0:
                        stage.append((i + 1, partner + 1, DIR))
                    else:
                        stage.append((partner + 1, i + 1, DIR))
            stages.append(stage)
            j >>= 1
        k <<= 1
    bound = dim * (dim + 1) // 2
    return make_network(hypercube_graph(dim), identity(n), stages,
                        certificate=_cert("bitonic", {"n": n, "d": dim},
                                          bound, len(stages)))


def _merge_sort_stages(size: int) -> list[list[tuple[int, int]]]:
    # Batcher's odd-even merge sort over 0-based wires; size a power of two.
    # Every comparator (a, b) has a < b and directs the minimum to a.
    stages = []
    p = 1
    while p < size:
        k = p
        while k >= 1:
            stage = []
            for j in range(k % p, size - k, 2 * k):
                for i in range(min(k, size - j - k)):
                    if (i + j) // (2 * p) == (i + j + k) // (2 * p):
                        stage.append((i + j, i + j + k))
            stages.append(stage)
            k //= 2
        p *= 2
    return stages


def batcher_complete(n: int) -> SortingNetwork:
    """Batcher sorter on the complete graph.

    Sizes off a power of two are padded with virtual maximal keys; the
    comparators touching pad wires never move anything and are dropped.
    The result directs every minimum toward the lower vertex id.
    """
    if n < 1:
        raise ParameterError("need n >= 1")
    host = complete_graph(n)
    size = 1
    levels = 0
    while size < n:
        size <<= 1
        levels += 1
    stages = []
    for raw in _merge_sort_stages(size):
        stage = [(a + 1, b + 1, DIR) for a, b in raw if b < n]
        if stage:
            stages.append(stage)
    bound = levels * (levels + 1) // 2
    return make_network(host, identity(n), stages,
                        certificate=_cert("batcher", {"n": n},
                                          bound, len(stages)))


def sequential_sorter(q: int) -> list[tuple[int, int]]:
    """Batcher comparisons flattened to one compare-exchange at a time."""
    net = batcher_complete(q)
    return [(u, v) for stage in net.stages for u, v, _ in stage]


# ---------------------------------------------------------------------------
# trees: contour emulation of the path sorter

def contour_tree_sort(t: Graph) -> SortingNetwork:
    """Sort on a tree by emulating the path sorter along a closed walk.

    The walk crosses each edge twice; one visit of every vertex is marked
    so consecutive marks are at most three walk steps apart.  Each round
    of the virtual transposition sort is split into color classes of
    non-interfering walk intervals, and each comparison expands to walk
    in, compare, walk back (at most five stages).  Marked order is the
    target order.
    """
    check_tree(t)
    n = t.n
    if n == 1:
        return make_network(t, (1,), [],
                            certificate=_cert("contour", {"n": 1}, 0, 0))
    contour = tree_contour(t)
    tour = contour.walk
    marks = sorted(contour.marks.values())
    assert all(b - a <= 3 for a, b in zip(marks, marks[1:]))
    order = contour.rank_order()

    delta = max_degree(t)
    color_cap = 4 * delta - 3
    stages = []
    for rnd in range(1, n + 1):
        intervals = [(marks[i - 1], marks[i])
                     for i in range(1, n) if i % 2 == rnd % 2]
        if not intervals:
            continue
        proj = [frozenset(tour[a:b + 1]) for a, b in intervals]
        colors = []
        for i in range(len(intervals)):
            used = {colors[j] for j in range(i) if proj[i] & proj[j]}
            c = 0
            while c in used:
                c += 1
            colors.append(c)
        assert max(colors) < color_cap, "interval coloring exceeded its cap"
        for c in range(max(colors) + 1):
            group = [intervals[i] for i in range(len(intervals))
                     if colors[i] == c]
            plans = []
            for a, b in group:
                walk_in = [(tour[x], tour[x + 1], SWAP) for x in range(a, b - 1)]
                compare = [(tour[b - 1], tour[b], DIR)]
                walk_out = [(tour[x], tour[x + 1], SWAP)
                            for x in range(b - 2, a - 1, -1)]
                plans.append(walk_in + compare + walk_out)
            for step in zip_longest(*plans):
                stages.append([cmp for cmp in step if cmp is not None])
    bound = 5 * color_cap * n
    return make_network(t, order, stages,
                        certificate=_cert("contour",
                                          {"n": n, "delta": delta},
                                          bound, len(stages)))


# ---------------------------------------------------------------------------
# simulation of a complete-graph sorter through routing

def _advance(pos: list[int], realized) -> None:
    for i in range(len(pos)):
        pos[i] = realized[pos[i] - 1]


def _fixup(g: Graph, pos: list[int], router, stages_out: list) -> int:
    """Route every logical label back to its own vertex; returns stage count."""
    if pos == list(range(1, g.n + 1)):
        return 0
    perm = [0] * g.n
    for label, vertex in enumerate(pos, start=1):
        perm[vertex - 1] = label
    plan = router(tuple(perm))
    used = 0
    for s in plan.stages:
        if s:
            stages_out.append(s)
            used += 1
    _advance(pos, plan.realized)
    assert pos == list(range(1, g.n + 1))
    return used


def simulate_complete(g: Graph, base: SortingNetwork, router=None,
                      router_bound: int | None = None) -> SortingNetwork:
    """Run a complete-graph sorter on g by routing pairs onto a matching.

    Each base stage is split into groups no larger than the maximal
    matching; each group's pairs are routed onto distinct matching edges,
    compared there, and the relabeling is tracked so later stages see the
    logical wires.  A final routing restores label == vertex.
    """
    check_connected(g)
    n = g.n
    if base.graph.n != n or len(base.graph.edges) != n * (n - 1) // 2:
        raise ParameterError("base network must sort the complete graph on n")
    if router is None:
        router = lambda pi: route_auto(g, pi)
    rb = route_depth_bound(g) if router_bound is None else router_bound
    matching = maximal_matching(g)
    nu = len(matching)
    assert nu >= 1 or n == 1

    pos = list(range(1, n + 1))
    stages_out: list = []
    for stage in base.stages:
        comps = list(stage)
        for lo in range(0, len(comps), nu):
            group = comps[lo:lo + nu]
            placed = [(pos[u - 1], pos[v - 1], kind) for u, v, kind in group]
            if all((min(a, b), max(a, b)) in g.edges for a, b, _ in placed):
                stages_out.append(placed)
                continue
            want = {}
            for (u, v, _), (a, b) in zip(group, matching):
                want[pos[u - 1]] = a
                want[pos[v - 1]] = b
            plan = router(complete_assignment(n, want))
            assert plan.depth <= rb, "router exceeded its depth bound"
            for s in plan.stages:
                if s:
                    stages_out.append(s)
            _advance(pos, plan.realized)
            stages_out.append([(pos[u - 1], pos[v - 1], kind)
                               for u, v, kind in group])
    _fixup(g, pos, router, stages_out)

    t = -(-n // nu) if nu else 1
    claimed = base.depth * t * (rb + 1) + rb
    cert = _cert("simulate_complete",
                 {"n": n, "nu": nu, "rt_used": rb, "base_depth": base.depth},
                 claimed, len(stages_out))
    return make_network(g, base.order, stages_out, certificate=cert)


# ---------------------------------------------------------------------------
# sorting through a distinguished subgraph

def _check_standard(net: SortingNetwork, what: str) -> None:
    # Filtering a network to an occupied prefix is only sound when every
    # comparator directs its minimum to the lower rank and nothing swaps
    # unconditionally: virtual maximal keys on the empty slots then never
    # move.
    if tuple(net.order) != identity(net.graph.n):
        raise StructureError(f"{what} must sort into identity order")
    for stage in net.stages:
        for u, v, kind in stage:
            if kind != DIR or u >= v:
                raise StructureError(
                    f"{what} must direct minima toward lower ranks")


def _induced_connected(g: Graph, verts: list[int]) -> bool:
    inside = set(verts)
    seen = {verts[0]}
    frontier = [verts[0]]
    adj = adjacency(g)
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w in inside and w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(inside)


def _check_embedding(g: Graph, verts: list[int], net: SortingNetwork,
                     what: str) -> None:
    if len(set(verts)) != len(verts) or not all(1 <= v <= g.n for v in verts):
        raise ParameterError(f"{what}: vertex list is not a subset of the host")
    if net.graph.n != len(verts):
        raise ParameterError(f"{what}: network size differs from vertex list")
    for stage in net.stages:
        for u, v, _ in stage:
            a, b = verts[u - 1], verts[v - 1]
            if (min(a, b), max(a, b)) not in g.edges:
                raise StructureError(
                    f"{what}: comparator ({u},{v}) maps off the host edges")
    if not _induced_connected(g, verts):
        raise StructureError(f"{what}: induced subgraph is disconnected")


def _padded_parts(n: int, size: int) -> list[list[int]]:
    """Consecutive label blocks of exactly `size`, short remainder last.

    Merge-split over a comparison network only sorts when blocks share one
    size; a short block is sound only as the LAST one, where it behaves as
    if padded with maximal sentinels (every comparison sends maxima to the
    higher wire, so the phantom slots never leave it).  Spreading the
    remainder across blocks breaks sortedness, e.g. sizes (3,3,2,2) leave
    the one-counts (3,3,0,0) at (1,1,2,2) after a 4-wire merge network.
    """
    parts = [list(range(lo, min(lo + size - 1, n) + 1))
             for lo in range(1, n + 1, size)]
    assert all(len(p) == size for p in parts[:-1])
    return parts


def subgraph_sort(g: Graph, h_vertices, h_net: SortingNetwork,
                  partial_router=None, capacity: int | None = None,
                  router_bound: int | None = None) -> SortingNetwork:
    """Sort g by repeatedly merging pairs of vertex blocks inside H.

    The vertex set is split into blocks of at most half the merge
    capacity; a sequential comparison list over blocks drives merges:
    each merge routes both blocks into H (lowest ranks first), applies
    h_net restricted to the occupied prefix, and rebinds block labels to
    the sorted prefix.  h_net must be standard (all minima toward lower
    ranks) for the restriction to be sound.
    """
    check_connected(g)
    n = g.n
    hv = list(h_vertices)
    if n == 1:
        return make_network(g, (1,), [],
                            certificate=_cert("subgraph", {"n": 1}, 0, 0))
    _check_embedding(g, hv, h_net, "subgraph sorter")
    _check_standard(h_net, "subgraph sorter")
    p = len(hv)
    c = p if capacity is None else capacity
    if not 2 <= c <= p:
        raise ParameterError("merge capacity must be between 2 and |H|")
    if partial_router is None:
        partial_router = lambda src, dst: route_auto(
            g, complete_assignment(n, dict(zip(src, dst))))
    rb = route_depth_bound(g) if router_bound is None else router_bound

    half = c // 2
    q = -(-n // half)
    parts = _padded_parts(n, half)
    assert len(parts) == q and max(len(a) for a in parts) <= half
    comps = sequential_sorter(q)

    pos = list(range(1, n + 1))
    stages_out: list = []
    for i, j in comps:
        block = parts[i - 1] + parts[j - 1]
        k = len(block)
        sources = [pos[l - 1] for l in block]
        targets = hv[:k]
        plan = partial_router(sources, targets)
        assert plan.depth <= rb, "router exceeded its depth bound"
        for s in plan.stages:
            if s:
                stages_out.append(s)
        _advance(pos, plan.realized)
        # any arrangement inside H works, the merge sorts the block anyway
        assert sorted(pos[l - 1] for l in block) == sorted(targets)
        for stage in h_net.stages:
            kept = [(hv[u - 1], hv[v - 1], DIR)
                    for u, v, _ in stage if v <= k]
            if kept:
                stages_out.append(kept)
        for r, label in enumerate(block):
            pos[label - 1] = hv[r]
    fix_bound = route_depth_bound(g)
    _fixup(g, pos, lambda pi: route_auto(g, pi), stages_out)

    claimed = len(comps) * (rb + h_net.depth) + fix_bound
    cert = _cert("subgraph",
                 {"n": n, "p": p, "q": q, "rt_used": rb,
                  "base_depth": len(comps)},
                 claimed, len(stages_out))
    return make_network(g, identity(n), stages_out, certificate=cert)


def longest_path_sort(g: Graph) -> SortingNetwork:
    """Sort any connected graph through the diameter path of a spanning tree."""
    check_connected(g)
    n = g.n
    if n == 1:
        return make_network(g, (1,), [],
                            certificate=_cert("longest_path", {"n": 1}, 0, 0))
    if n == 2:
        (u, v), = g.edges
        stages = [[(u, v, DIR)]]
        return make_network(g, identity(2), stages,
                            certificate=_cert("longest_path",
                                              {"n": 2, "d": 1}, 1, 1))
    tree = spanning_tree(g)
    path = tree_diameter_path(tree)
    d = len(path) - 1
    h_net = odd_even_transposition(d + 1)
    k_max = 2 * (d // 2)
    rb = d + 2 * (k_max - 1)
    router = lambda src, dst: route_to_path(tree, src, dst)
    net = subgraph_sort(g, path, h_net, partial_router=router,
                        capacity=d, router_bound=rb)
    cert = _cert("longest_path",
                 {"n": n, "d": d, "q": net.certificate["parameters"]["q"],
                  "rt_used": rb},
                 net.certificate["claimed_bound"], net.depth)
    return replace(net, certificate=cert)


# ---------------------------------------------------------------------------
# parallel merges in disjoint subgraphs

def parallel_subgraph_sort(g: Graph, partition, nets,
                           router=None,
                           router_bound: int | None = None) -> SortingNetwork:
    """Sort g with one merge arena per partition class, merges in parallel.

    The partition classes are halved into 2q blocks; a parallel sorter on
    2q wires drives the merges, and every merge fills one arena exactly,
    so the arena nets run unfiltered.  Needs equal class sizes and an
    even class size (each merge of two blocks must fill an arena).
    """
    check_connected(g)
    n = g.n
    parts = [list(pv) for pv in partition]
    q = len(parts)
    flat = sorted(v for pv in parts for v in pv)
    if flat != list(range(1, n + 1)):
        raise ParameterError("partition must cover every vertex exactly once")
    size = n // q
    if any(len(pv) != size for pv in parts):
        raise ParameterError("partition classes must have equal sizes")
    if size % 2 != 0:
        raise ParameterError("partition classes must have even size")
    if len(nets) != q:
        raise ParameterError("need one arena network per partition class")
    for pv, net in zip(parts, nets):
        _check_embedding(g, pv, net, "arena sorter")
        if tuple(net.order) != identity(size):
            raise StructureError("arena sorter must sort into identity order")
    if router is None:
        router = lambda pi: route_auto(g, pi)
    rb = route_depth_bound(g) if router_bound is None else router_bound

    halves = []
    for pv in parts:
        halves.append(pv[:size // 2])
        halves.append(pv[size // 2:])
    base = batcher_complete(2 * q)

    pos = list(range(1, n + 1))
    stages_out: list = []
    for stage in base.stages:
        pairs = [(u, v) for u, v, kind in stage]
        want = {}
        merges = []
        for idx, (u, v) in enumerate(pairs):
            arena = parts[idx]
            block = halves[u - 1] + halves[v - 1]
            for r, label in enumerate(block):
                want[pos[label - 1]] = arena[r]
            merges.append((idx, block))
        plan = router(complete_assignment(n, want))
        assert plan.depth <= rb, "router exceeded its depth bound"
        for s in plan.stages:
            if s:
                stages_out.append(s)
        _advance(pos, plan.realized)
        active = [nets[idx] for idx, _ in merges]
        arenas = [parts[idx] for idx, _ in merges]
        for step in zip_longest(*(net.stages for net in active)):
            merged = []
            for arena, sub in zip(arenas, step):
                if sub:
                    merged += [(arena[u - 1], arena[v - 1], kind)
                               for u, v, kind in sub]
            if merged:
                stages_out.append(merged)
        for (idx, block) in merges:
            for r, label in enumerate(block):
                pos[label - 1] = parts[idx][r]

    # wire w of the block sorter ends holding ranks (w-1)h+1..wh, bound to
    # halves[w-1] in list order; route each pebble to the vertex of its rank
    # so the network sorts into identity order even for scattered classes
    half = size // 2
    final_rank = [0] * (n + 1)
    for w, blk in enumerate(halves):
        for off, label in enumerate(blk):
            final_rank[label] = w * half + off + 1
    perm = [0] * n
    for label in range(1, n + 1):
        perm[pos[label - 1] - 1] = final_rank[label]
    if perm != list(range(1, n + 1)):
        plan = route_auto(g, tuple(perm))
        for s in plan.stages:
            if s:
                stages_out.append(s)

    max_net = max((net.depth for net in nets), default=0)
    claimed = base.depth * (rb + max_net) + route_depth_bound(g)
    cert = _cert("parallel_subgraph",
                 {"n": n, "q": q, "rt_used": rb, "base_depth": base.depth},
                 claimed, len(stages_out))
    return make_network(g, identity(n), stages_out, certificate=cert)


# ---------------------------------------------------------------------------
# cartesian products and pyramids

def _factor_sorter(g: Graph):
    """A sorter for one product factor, dispatched on its family."""
    fam = family_name(g)
    if fam == "path" or g.edges == path_graph(g.n).edges:
        return odd_even_transposition(g.n)
    if fam == "complete" or len(g.edges) == g.n * (g.n - 1) // 2:
        return batcher_complete(g.n)
    if fam == "hypercube":
        (dim,) = family_params(g)
        return bitonic_hypercube(dim)
    if fam == "mesh":
        lengths = family_params(g)
        if len(lengths) == 1:
            return odd_even_transposition(g.n)
        return product_sort(path_graph(lengths[0]), mesh_graph(lengths[1:]))
    if fam == "multipartite":
        return simulate_complete(g, batcher_complete(g.n))
    if fam == "product" and len(g.factors) == 2:
        return product_sort(*g.factors)
    return longest_path_sort(g)


def product_sort(g1: Graph, g2: Graph) -> SortingNetwork:
    """Sort a cartesian product using copies of one factor as merge arenas.

    Both factor choices are certified and the cheaper valid one is taken;
    a factor is usable as arena when the other side has even order.  When
    both sides are odd the construction falls back to the diameter-path
    sorter, recorded in the certificate.
    """
    host = cartesian_product(g1, g2)
    n1, n2 = g1.n, g2.n
    if n1 == 1 or n2 == 1:
        inner = _factor_sorter(g2 if n1 == 1 else g1)
        return make_network(host, inner.order, inner.stages,
                            certificate=inner.certificate)

    options = []
    if n2 % 2 == 0:
        net2 = _factor_sorter(g2)
        parts = [[(a - 1) * n2 + b for b in range(1, n2 + 1)]
                 for a in range(1, n1 + 1)]
        score = batcher_complete(2 * n1).depth * \
            (route_depth_bound(host) + net2.depth)
        options.append((score, 0, parts, net2))
    if n1 % 2 == 0:
        net1 = _factor_sorter(g1)
        parts = [[(a - 1) * n2 + b for a in range(1, n1 + 1)]
                 for b in range(1, n2 + 1)]
        score = batcher_complete(2 * n2).depth * \
            (route_depth_bound(host) + net1.depth)
        options.append((score, 1, parts, net1))
    if not options:
        net = longest_path_sort(host)
        cert = dict(net.certificate)
        cert["parameters"] = dict(cert["parameters"], fallback="longest_path")
        return replace(net, certificate=cert)

    _, _, parts, arena_net = min(options, key=lambda o: (o[0], o[1]))
    net = parallel_subgraph_sort(host, parts, [arena_net] * len(parts))
    cert = _cert("product",
                 {"n": host.n, "q": len(parts),
                  "rt_used": route_depth_bound(host),
                  "base_depth": batcher_complete(2 * len(parts)).depth},
                 net.certificate["claimed_bound"], net.depth)
    return replace(net, certificate=cert)


def pyramid_sort(m: int, d: int) -> SortingNetwork:
    """Sort the pyramid: pool the upper levels into the bottom mesh, sort
    there, return the smallest pebbles upward, and squeeze stragglers out
    through two rounds of child-parent merges.

    Target order is levels ascending from the apex, each level in its
    mesh order.
    """
    if m < 1 or d < 1:
        raise ParameterError("need m >= 1 and d >= 1")
    host = pyramid_graph(m, d)
    n = host.n
    if m == 1:
        return make_network(host, (1,), [],
                            certificate=_cert("pyramid", {"n": 1}, 0, 0))

    info = PyramidInfo(m, d)
    bottom = list(info.level_vertices(m - 1))
    nb = len(bottom)
    base0 = bottom[0] - 1
    upper = n - nb
    n_mid = info.level_sizes[m - 2]
    assert upper <= nb
    assert upper <= 2 * n_mid - 1

    mesh = mesh_graph(info.lengths(m - 1))
    mesh_net = _factor_sorter(mesh)
    mesh_sort = [[(u + base0, v + base0, kind) for u, v, kind in stage]
                 for stage in mesh_net.stages if stage]

    def pyramid_route(want: dict) -> list:
        plan = route_multigrid(m, d, complete_assignment(n, want))
        return [s for s in plan.stages if s]

    def mesh_route(want: dict) -> list:
        plan = route_auto(mesh, complete_assignment(nb, want))
        return [[(u + base0, v + base0, kind) for u, v, kind in s]
                for s in plan.stages if s]

    mids = info.level_vertices(m - 2)
    merge_stage = []
    step4_want = {}
    for i in range(1, n_mid + 1):
        parent = mids[n_mid - i]
        child = info.first_child(parent)
        assert info.parent(child) == parent
        step4_want[i] = child - base0
        merge_stage.append((parent, child, DIR))

    pool_in = pyramid_route({s: bottom[s - 1] for s in range(1, upper + 1)})
    pool_out = pyramid_route({bottom[r - 1]: r for r in range(1, upper + 1)})
    raise_smallest = mesh_route(step4_want)

    stages: list = []
    for _ in range(2):
        stages += pool_in + mesh_sort          # pool the upper levels, sort
        stages += pool_out + mesh_sort         # return the smallest, resort
        stages += raise_smallest               # lift candidates to children
        stages.append(merge_stage)             # child-parent compare
    stages += pool_in + mesh_sort
    stages += pool_out + mesh_sort

    rt_pyr = route_depth_bound(host)
    rt_mesh = route_depth_bound(mesh)
    claimed = 6 * rt_pyr + 6 * _claimed(mesh_net) + 2 * rt_mesh + 2
    cert = _cert("pyramid", {"n": n, "d": d, "m": m, "rt_used": rt_pyr},
                 claimed, len(stages))
    return make_network(host, identity(n), stages, certificate=cert)
