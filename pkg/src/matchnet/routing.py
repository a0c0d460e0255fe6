"""Permutation routing: move pebbles to target vertices via disjoint swaps.

Every planner here produces rounds of vertex-disjoint swaps on host edges.
Pebbles start on their home vertices (pebble v on vertex v) and the plan
realizes a permutation pi, meaning the pebble from v ends on pi(v).  The
planners are deterministic: same input, same plan, byte for byte.

Internally all planners work with "rounds": plain lists of swap pairs.
Public entry points wrap the rounds into a RoutingPlan and re-check both
correctness (realized permutation) and the advertised depth bound.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import zip_longest

from .errors import ConstructionError, ParameterError, StructureError, TaskError
from .graphs import (
    Graph,
    PyramidInfo,
    adjacency,
    bfs_dist,
    cartesian_product,
    check_connected,
    check_tree,
    complete_graph,
    family_name,
    family_params,
    graph,
    hypercube_graph,
    is_tree,
    mesh_coords,
    mesh_graph,
    multigrid_graph,
    multipartite_graph,
    path_graph,
    spanning_tree,
    tree_diameter_path,
)
from .network import SWAP, RoutingPlan, make_plan, make_stage
from .perms import check_permutation, compose, cycles, identity

# rounds: list of rounds, each round a list of disjoint (u, v) swap pairs


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _stages_from_rounds(g: Graph, rounds):
    return [make_stage(g, [(u, v, SWAP) for u, v in rnd]) for rnd in rounds if rnd]


def _relabel_rounds(rounds, order):
    """Map local vertex i+1 to order[i] in every pair."""
    return [[_norm(order[u - 1], order[v - 1]) for u, v in rnd] for rnd in rounds]


def _merge_parallel(blocks):
    """Interleave round lists that touch disjoint vertex sets."""
    merged = []
    for chunk in zip_longest(*blocks, fillvalue=()):
        pairs = [p for part in chunk for p in part]
        if pairs:
            merged.append(pairs)
    return merged


def _apply_rounds(n: int, rounds):
    """Final position of each pebble: result[v-1] = where pebble v ends."""
    at = list(range(n + 1))  # at[vertex] = pebble
    for rnd in rounds:
        for u, v in rnd:
            at[u], at[v] = at[v], at[u]
    pos = [0] * n
    for v in range(1, n + 1):
        pos[at[v] - 1] = v
    return pos


def _finish(host: Graph, rounds, pi, bound: int | None) -> RoutingPlan:
    plan = make_plan(host, _stages_from_rounds(host, rounds))
    assert list(plan.realized) == list(pi), "plan does not realize the permutation"
    if bound is not None:
        assert plan.depth <= bound, f"depth {plan.depth} exceeds bound {bound}"
    return plan


def complete_assignment(n: int, want: dict[int, int]) -> list[int]:
    """Extend a partial position->target map to a full permutation.

    Unconstrained positions are sent to the unused targets in ascending
    order, so the result is deterministic.
    """
    targets = set(want.values())
    if len(targets) != len(want):
        raise ParameterError("duplicate targets in partial assignment")
    free = iter(sorted(set(range(1, n + 1)) - targets))
    pi = []
    for pos in range(1, n + 1):
        pi.append(want[pos] if pos in want else next(free))
    check_permutation(pi, n)
    return pi


# ---------------------------------------------------------------------------
# involutions

def two_cycle_decompose(pi) -> tuple[tuple, tuple]:
    """Split pi into two involutions with pi = pi2 . pi1 (pi1 applied first).

    Within each cycle (c_0 .. c_{k-1}) the first involution maps c_j to
    c_{-j mod k} and the second maps c_j to c_{1-j mod k}; both are products
    of disjoint transpositions and their composition walks the cycle.
    """
    n = len(pi)
    check_permutation(pi, n)
    mu1 = list(identity(n))
    mu2 = list(identity(n))
    for cyc in cycles(pi):
        k = len(cyc)
        for j, v in enumerate(cyc):
            mu1[v - 1] = cyc[(-j) % k]
            mu2[v - 1] = cyc[(1 - j) % k]
    assert compose(mu2, mu1) == tuple(pi)
    for mu in (mu1, mu2):
        assert all(mu[mu[v - 1] - 1] == v for v in range(1, n + 1))
    return tuple(mu1), tuple(mu2)


def _involution_pairs(mu) -> list[tuple[int, int]]:
    return [(v, mu[v - 1]) for v in range(1, len(mu) + 1) if mu[v - 1] > v]


# ---------------------------------------------------------------------------
# complete graphs

def _complete_rounds(pi):
    rounds = []
    for mu in two_cycle_decompose(pi):
        pairs = _involution_pairs(mu)
        if pairs:
            rounds.append(pairs)
    return rounds


def route_complete(n: int, pi) -> RoutingPlan:
    """Route any permutation on K_n in at most two swap rounds."""
    check_permutation(pi, n)
    return _finish(complete_graph(n), _complete_rounds(pi), pi, 2)


# ---------------------------------------------------------------------------
# paths

def _path_rounds(n: int, pi):
    """Odd-even transposition on destination indices; n rounds always sort."""
    key = list(pi)
    rounds = []
    for r in range(n):
        pairs = []
        for i in range(1 + r % 2, n, 2):  # 1-based positions (i, i+1)
            if key[i - 1] > key[i]:
                key[i - 1], key[i] = key[i], key[i - 1]
                pairs.append((i, i + 1))
        if pairs:
            rounds.append(pairs)
    assert key == list(range(1, n + 1))
    return rounds


def _is_canonical_path(g: Graph) -> bool:
    return g.sorted_edges() == [(i, i + 1) for i in range(1, g.n)]


def route_path(g: Graph, pi) -> RoutingPlan:
    """Route on the path 1-2-..-n; depth at most n."""
    if not _is_canonical_path(g):
        raise StructureError("route_path needs the canonical path graph")
    check_permutation(pi, g.n)
    return _finish(g, _path_rounds(g.n, pi), pi, g.n)


# ---------------------------------------------------------------------------
# trees

def _centroid(t: Graph) -> int:
    adj = adjacency(t)
    n = t.n
    parent = {1: 0}
    order = [1]
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    size = {v: 1 for v in range(1, n + 1)}
    for v in reversed(order):
        if parent[v]:
            size[parent[v]] += size[v]
    best, best_v = n + 1, 0
    for v in range(1, n + 1):
        heaviest = n - size[v]
        for w in adj[v]:
            if w != parent[v]:
                heaviest = max(heaviest, size[w])
        if heaviest < best or (heaviest == best and v < best_v):
            best, best_v = heaviest, v
    return best_v


def _path_order(t: Graph) -> list[int]:
    adj = adjacency(t)
    end = min(v for v in range(1, t.n + 1) if len(adj[v]) <= 1)
    order = [end]
    prev = 0
    while len(order) < t.n:
        nxt = [w for w in adj[order[-1]] if w != prev]
        assert len(nxt) == 1
        prev = order[-1]
        order.append(nxt[0])
    return order


def _tree_rounds(t: Graph, pi):
    n = t.n
    dest = [0] + list(pi)  # dest[v] = target of the pebble now on v
    if all(dest[v] == v for v in range(1, n + 1)):
        return []
    adj = adjacency(t)
    if max(len(adj[v]) for v in range(1, n + 1)) <= 2:
        order = _path_order(t)
        posin = {v: i + 1 for i, v in enumerate(order)}
        sub = [posin[dest[order[i]]] for i in range(n)]
        return _relabel_rounds(_path_rounds(n, sub), order)

    c = _centroid(t)
    comp = {c: 0}  # component label = id of the root neighbour
    depth = {c: 0}
    parent = {c: 0}
    order = [c]
    for v in order:
        for w in adj[v]:
            if w not in comp:
                comp[w] = w if v == c else comp[v]
                depth[w] = depth[v] + 1
                parent[w] = v
                order.append(w)

    def proper(v):
        return comp[dest[v]] == comp[v] if v != c else dest[c] == c

    by_depth = sorted((v for v in range(1, n + 1) if v != c),
                      key=lambda v: (depth[v], v))
    rounds = []
    while True:
        improper = [v for v in range(1, n + 1) if not proper(v)]
        if not improper:
            break
        pairs = []
        used = set()
        if dest[c] != c:
            q = comp[dest[c]]  # pebble on c belongs past this root
            if not proper(q):
                pairs.append(_norm(c, q))
                used.update((c, q))
        else:
            cands = [r for r in adj[c] if not proper(r)]
            if cands:
                x = min(cands)
                pairs.append(_norm(c, x))
                used.update((c, x))
        for v in by_depth:
            p = parent[v]
            if p == c or v in used or p in used:
                continue
            if not proper(v) and proper(p):
                pairs.append(_norm(p, v))
                used.update((p, v))
        if not pairs:
            raise ConstructionError("tree routing stalled")
        for u, v in pairs:
            dest[u], dest[v] = dest[v], dest[u]
        rounds.append(pairs)
        if len(rounds) > 6 * n:
            raise ConstructionError("tree routing did not converge")

    comps = defaultdict(list)
    for v in range(1, n + 1):
        if v != c:
            comps[comp[v]].append(v)
    blocks = []
    for r in sorted(comps):
        vs = sorted(comps[r])
        local = {v: i + 1 for i, v in enumerate(vs)}
        inside = set(vs)
        sub_edges = [(local[u], local[v]) for u, v in t.sorted_edges()
                     if u in inside and v in inside]
        sub_t = graph(len(vs), sub_edges)
        sub_pi = [local[dest[v]] for v in vs]
        blocks.append(_relabel_rounds(_tree_rounds(sub_t, sub_pi), vs))
    return rounds + _merge_parallel(blocks)


def route_tree(t: Graph, pi) -> RoutingPlan:
    """Route any permutation on a tree; depth at most 3n.

    Phase one drags every pebble into the centroid component holding its
    target (promoting misplaced pebbles rootward, exchanging across the
    centroid one pebble per round); the components then recurse in
    parallel, halving the problem size each level.
    """
    check_tree(t)
    check_permutation(pi, t.n)
    return _finish(t, _tree_rounds(t, pi), pi, 3 * t.n)


# ---------------------------------------------------------------------------
# partial routing onto a diameter path

def route_to_path(t: Graph, sources, targets) -> RoutingPlan:
    """Bring k tagged pebbles onto targets lying on a diameter path.

    Targets are assigned farthest-source-first to its nearest remaining
    target (ties by smallest vertex id).  Pebble i in that reversed order
    gets the arrival deadline d + 2i and starts walking just in time, so
    walks overlap without ever displacing an already delivered pebble.
    Depth is at most d + 2(k-1) for k >= 1.
    """
    check_tree(t)
    dpath = tree_diameter_path(t)
    d = len(dpath) - 1
    sources = [int(s) for s in sources]
    targets = [int(u) for u in targets]
    if len(sources) != len(targets):
        raise ParameterError("sources and targets must pair up")
    if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
        raise ParameterError("sources and targets must be distinct vertices")
    on_path = set(dpath)
    for u in targets:
        if u not in on_path:
            raise ParameterError(f"target {u} is not on the diameter path")
    k = len(sources)
    if k > d:
        raise TaskError(f"cannot place {k} pebbles with diameter {d}")
    if k == 0:
        return make_plan(t, [])

    dist = {s: bfs_dist(t, s) for s in sources}
    remaining_s = sorted(sources)
    remaining_t = sorted(targets)
    selection = []
    while remaining_s:
        v = min(remaining_s,
                key=lambda s: (-min(dist[s][u] for u in remaining_t), s))
        u = min(remaining_t, key=lambda w: (dist[v][w], w))
        selection.append((v, u))
        remaining_s.remove(v)
        remaining_t.remove(u)
    order = selection[::-1]  # order[i] must arrive by round d + 2i

    # next step toward each target along the unique tree path
    toward = {}
    adj = adjacency(t)
    for u in targets:
        nxt = {u: 0}
        frontier = [u]
        while frontier:
            fresh = []
            for v in frontier:
                for w in adj[v]:
                    if w not in nxt:
                        nxt[w] = v
                        fresh.append(w)
            frontier = fresh
        toward[u] = nxt

    pos = [s for s, _ in order]
    goal = [u for _, u in order]
    start = [d + 2 * i - dist[order[i][0]][goal[i]] + 1 for i in range(k)]
    occ = {pos[i]: i for i in range(k)}
    settled = [False] * k

    # Walk rules, applied in deadline order each round: a moving pebble may
    # push through untracked pebbles, waiting pebbles, and parked pebbles
    # (a parked one steps aside and re-parks two rounds later), but yields
    # to a pebble that is itself walking; two walkers meeting head-on share
    # one swap.  Yield-to-walker is what rules out displacement ping-pong.
    rounds = []
    limit = d + 2 * k + 4 * t.n + 8
    tick = 0
    while not all(settled):
        tick += 1
        if tick > limit:
            raise ConstructionError("partial routing did not converge")
        pairs = []
        used = set()
        for i in range(k):
            if tick < start[i] or pos[i] == goal[i] or pos[i] in used:
                continue
            cur = pos[i]
            nxt = toward[goal[i]][cur]
            if nxt in used:
                continue
            j = occ.get(nxt)
            if (j is not None and pos[j] != goal[j] and tick >= start[j]
                    and toward[goal[j]][pos[j]] != cur):
                continue  # yield to a walker going somewhere else
            pairs.append(_norm(cur, nxt))
            used.update((cur, nxt))
            del occ[cur]
            if j is not None:
                occ[cur] = j
                pos[j] = cur
                settled[j] = False
            pos[i] = nxt
            occ[nxt] = i
        if pairs:
            rounds.append(pairs)
        # arrival only counts from the scheduled start on, so a pebble parked
        # early stays displaceable and cannot wall off a later walker
        for i in range(k):
            if not settled[i] and pos[i] == goal[i] and tick >= start[i]:
                settled[i] = True

    assert len(rounds) <= d + 2 * (k - 1)
    plan = make_plan(t, _stages_from_rounds(t, rounds))
    want = dict(selection)
    for s in sources:
        assert plan.realized[s - 1] == want[s]
    return plan


# ---------------------------------------------------------------------------
# cartesian products

def _regular_bipartite_matchings(count, n: int, degree: int):
    """Split an n x n degree-regular demand matrix into `degree` perfect
    matchings (augmenting-path search, deterministic order)."""
    count = [row[:] for row in count]
    matchings = []
    for _ in range(degree):
        match_l = {}
        match_r = {}

        def augment(a, seen):
            for b in range(1, n + 1):
                if count[a][b] > 0 and b not in seen:
                    seen.add(b)
                    if b not in match_r or augment(match_r[b], seen):
                        match_l[a] = b
                        match_r[b] = a
                        return True
            return False

        for a in range(1, n + 1):
            if a not in match_l:
                ok = augment(a, set())
                assert ok, "regular demand matrix failed to decompose"
        for a, b in match_l.items():
            count[a][b] -= 1
        matchings.append(match_l)
    assert all(count[a][b] == 0 for a in range(1, n + 1)
               for b in range(1, n + 1))
    return matchings


def _product_rounds_one(g1: Graph, g2: Graph, pi, inner_first: bool):
    """Three-phase product routing; phases alternate factor directions.

    inner_first: inner(g2 copies) -> outer(g1 copies) -> inner, with the
    intermediate coordinate chosen by decomposing the row-to-row demand
    matrix into perfect matchings.  Otherwise the mirrored order.
    """
    n1, n2 = g1.n, g2.n
    n = n1 * n2
    row = [0] * (n + 1)  # current g1 coordinate of each pebble
    col = [0] * (n + 1)  # current g2 coordinate
    drow = [0] * (n + 1)
    dcol = [0] * (n + 1)
    for p in range(1, n + 1):
        row[p], col[p] = (p - 1) // n2 + 1, (p - 1) % n2 + 1
        q = pi[p - 1]
        drow[p], dcol[p] = (q - 1) // n2 + 1, (q - 1) % n2 + 1

    def inner_phase(target_col):
        blocks = []
        for a in range(1, n1 + 1):
            members = {col[p]: p for p in range(1, n + 1) if row[p] == a}
            sub = [target_col[members[b]] for b in range(1, n2 + 1)]
            verts = [(a - 1) * n2 + b for b in range(1, n2 + 1)]
            blocks.append(_relabel_rounds(_auto_rounds(g2, sub), verts))
        for p in range(1, n + 1):
            col[p] = target_col[p]
        return _merge_parallel(blocks)

    def outer_phase(target_row):
        blocks = []
        for b in range(1, n2 + 1):
            members = {row[p]: p for p in range(1, n + 1) if col[p] == b}
            sub = [target_row[members[a]] for a in range(1, n1 + 1)]
            verts = [(a - 1) * n2 + b for a in range(1, n1 + 1)]
            blocks.append(_relabel_rounds(_auto_rounds(g1, sub), verts))
        for p in range(1, n + 1):
            row[p] = target_row[p]
        return _merge_parallel(blocks)

    if inner_first:
        axis, deg, mid_n = row, n2, n1
        dest_axis = drow
    else:
        axis, deg, mid_n = col, n1, n2
        dest_axis = dcol
    count = [[0] * (mid_n + 1) for _ in range(mid_n + 1)]
    for p in range(1, n + 1):
        count[axis[p]][dest_axis[p]] += 1
    matchings = _regular_bipartite_matchings(count, mid_n, deg)
    slots = defaultdict(list)
    for idx, m in enumerate(matchings):
        for a, b in m.items():
            slots[(a, b)].append(idx)
    buckets = defaultdict(list)
    for p in range(1, n + 1):
        buckets[(axis[p], dest_axis[p])].append(p)
    mid = [0] * (n + 1)
    for key in buckets:
        for p, idx in zip(sorted(buckets[key]), slots[key]):
            mid[p] = idx + 1

    if inner_first:
        return (inner_phase(mid)
                + outer_phase(drow)
                + inner_phase(dcol))
    return (outer_phase(mid)
            + inner_phase(dcol)
            + outer_phase(drow))


def _product_rounds(g1: Graph, g2: Graph, pi):
    first = _product_rounds_one(g1, g2, pi, inner_first=True)
    second = _product_rounds_one(g1, g2, pi, inner_first=False)
    return first if len(first) <= len(second) else second


def route_product(g1: Graph, g2: Graph, pi) -> RoutingPlan:
    """Route on the cartesian product of two routable factors.

    Both phase orders (inner-outer-inner and its mirror) are planned and
    the shallower one is kept; either is within bound(g1) + bound(g2) +
    min(bound(g1), bound(g2)).
    """
    host = cartesian_product(g1, g2)
    check_permutation(pi, host.n)
    b1, b2 = route_depth_bound(g1), route_depth_bound(g2)
    return _finish(host, _product_rounds(g1, g2, pi), pi, b1 + b2 + min(b1, b2))


# ---------------------------------------------------------------------------
# complete multipartite graphs

def _multipartite_involution_rounds(p: int, s: int, pairs):
    """Realize one involution on K_{s,..,s} in at most three rounds.

    Cross-part transpositions swap directly.  Same-part transpositions
    pair up across parts (two rounds through a 4-cycle of cross edges);
    when exactly three parts hold one transposition each, a three-round
    rotation over their six vertices settles all three with no outside
    help.  Leftovers, necessarily confined to a single part, either share
    the 4-cycle with a fully-outside cross transposition or walk through
    an idle outside vertex in three rounds; a counting argument over the
    outside vertices shows one of the two escapes always exists.
    """
    n = p * s
    part = lambda v: (v - 1) // s + 1
    slots = [[], [], []]
    cross = []
    same = defaultdict(list)
    for u, v in sorted(pairs):
        if part(u) == part(v):
            same[part(u)].append((u, v))
        else:
            cross.append((u, v))

    while True:
        live = sorted((x for x in same if same[x]),
                      key=lambda x: (-len(same[x]), x))
        if len(live) < 2:
            break
        if len(live) == 3 and all(len(same[x]) == 1 for x in live):
            (u1, v1), (u2, v2), (u3, v3) = (same[x].pop(0) for x in sorted(live))
            slots[0] += [_norm(u1, u2), _norm(v1, u3), _norm(v2, v3)]
            slots[1] += [_norm(u1, v2), _norm(v1, v3)]
            slots[2] += [_norm(u1, u3), _norm(v1, u2)]
            continue
        (u, v), (w, z) = same[live[0]].pop(0), same[live[1]].pop(0)
        slots[0] += [_norm(u, w), _norm(v, z)]
        slots[1] += [_norm(u, z), _norm(v, w)]

    leftover_part = next((x for x in same if same[x]), None)
    if leftover_part is not None:
        x = leftover_part
        mates = [cp for cp in cross if part(cp[0]) != x and part(cp[1]) != x]
        paired = {v for pr in pairs for v in pr}
        idle = [w for w in range(1, n + 1) if w not in paired and part(w) != x]
        for u, v in same[x]:
            if mates:
                a, b = mates.pop(0)
                cross.remove((a, b))
                slots[0] += [_norm(u, a), _norm(v, b)]
                slots[1] += [_norm(u, b), _norm(v, a)]
            else:
                assert idle, "no escape vertex for a same-part transposition"
                w = idle.pop(0)
                slots[0].append(_norm(u, w))
                slots[1].append(_norm(w, v))
                slots[2].append(_norm(u, w))
    slots[0] += cross
    return [sorted(slot) for slot in slots if slot]


def _multipartite_rounds(p: int, s: int, pi):
    rounds = []
    for mu in two_cycle_decompose(pi):
        rounds += _multipartite_involution_rounds(p, s, _involution_pairs(mu))
    return rounds


def route_multipartite(p: int, s: int, pi) -> RoutingPlan:
    """Route on the complete p-partite graph with parts of size s; depth <= 6."""
    host = multipartite_graph(p, s)
    check_permutation(pi, host.n)
    return _finish(host, _multipartite_rounds(p, s, pi), pi, 6)


# ---------------------------------------------------------------------------
# multigrids (and pyramids, whose edges are a superset)

def _level_mesh_rounds(info: PyramidInfo, level: int, sub):
    """Route a permutation inside one level's mesh; local ids are mesh ids."""
    side = info.side(level)
    if side == 1:
        return []
    lengths = info.lengths(level)
    local_mesh = mesh_graph(lengths)
    verts = [info.vertex(level, mesh_coords(i, lengths))
             for i in range(1, local_mesh.n + 1)]
    return _relabel_rounds(_auto_rounds(local_mesh, sub), verts)


def _multigrid_involution_rounds(info: PyramidInfo, mu, accounting=None):
    """Five macro-rounds for one involution: position pebbles onto vertical
    paths inside their levels, ride the paths in two waves, then settle
    every level.  Wave capacity per upper level i is the number of maximal
    vertical paths topping out at i, and |P_i| never exceeds twice that."""
    n = info.n
    m = info.m
    if all(mu[v - 1] == v for v in range(1, n + 1)):
        return []
    paths_at = defaultdict(list)
    for path in info.vertical_paths():
        paths_at[info.level_of(path[0])].append(path)

    by_upper = defaultdict(list)
    for u, v in _involution_pairs(mu):
        lu, lv = info.level_of(u), info.level_of(v)
        if lu == lv:
            continue
        if lu > lv:
            u, v, lu, lv = v, u, lv, lu
        by_upper[lu].append((u, v, lu, lv))
    waves = ([], [])
    for i in sorted(by_upper):
        cap = len(paths_at[i])
        group = sorted(by_upper[i])
        assert cap == info.phi(m - 1 - i)
        assert len(group) <= 2 * cap, "vertical path capacity exceeded"
        if accounting is not None:
            accounting[i] = (len(group), 2 * cap)
        waves[0].extend(zip(group, paths_at[i]))
        waves[1].extend(zip(group[cap:], paths_at[i]))

    at = list(range(n + 1))  # at[vertex] = pebble (named by start vertex)
    spot = list(range(n + 1))  # spot[pebble] = vertex

    def run(rounds):
        for rnd in rounds:
            for a, b in rnd:
                at[a], at[b] = at[b], at[a]
                spot[at[a]], spot[at[b]] = a, b
        return rounds

    def intra_round(boarding):
        """Per-level permutation sending each listed pebble to its path seat."""
        blocks = []
        for level in range(m):
            verts = info.level_vertices(level)
            base = verts[0] - 1
            req = {}
            for pebble, seat in boarding:
                if info.level_of(spot[pebble]) == level:
                    assert info.level_of(seat) == level
                    req[seat] = pebble
            placed = set(req.values())
            sub = [0] * len(verts)
            free = iter([v for v in verts if v not in req])
            for seat, pebble in sorted(req.items()):
                sub[spot[pebble] - base - 1] = seat - base
            for v in verts:
                if at[v] not in placed:
                    sub[v - base - 1] = next(free) - base
            blocks.append(_level_mesh_rounds(info, level, sub))
        return run(_merge_parallel(blocks))

    def vertical_round(assignments):
        blocks = []
        for (u, v, lu, lv), path in assignments:
            top = info.level_of(path[0])
            hi, lo = lu - top + 1, lv - top + 1
            assert at[path[hi - 1]] == u and at[path[lo - 1]] == v
            sub = list(range(1, len(path) + 1))
            sub[hi - 1], sub[lo - 1] = lo, hi
            blocks.append(_relabel_rounds(_path_rounds(len(path), sub), path))
        return run(_merge_parallel(blocks))

    rounds = []
    seats1 = []
    for (u, v, lu, lv), path in waves[0]:
        top = info.level_of(path[0])
        seats1 += [(u, path[lu - top]), (v, path[lv - top])]
    rounds += intra_round(seats1)
    rounds += vertical_round(waves[0])
    seats2 = []
    for (u, v, lu, lv), path in waves[1]:
        top = info.level_of(path[0])
        seats2 += [(u, path[lu - top]), (v, path[lv - top])]
    rounds += intra_round(seats2)
    rounds += vertical_round(waves[1])
    # final settle: everyone is on the right level now
    blocks = []
    for level in range(m):
        verts = info.level_vertices(level)
        base = verts[0] - 1
        sub = []
        for v in verts:
            target = mu[at[v] - 1]
            assert info.level_of(target) == level, "pebble on wrong level"
            sub.append(target - base)
        blocks.append(_level_mesh_rounds(info, level, sub))
    rounds += run(_merge_parallel(blocks))
    for v in range(1, n + 1):
        assert spot[v] == mu[v - 1]
    return rounds


def _multigrid_rounds(m: int, d: int, pi, accounting=None):
    info = PyramidInfo(m, d)
    rounds = []
    for mu in two_cycle_decompose(pi):
        acct = {} if accounting is not None else None
        rounds += _multigrid_involution_rounds(info, mu, acct)
        if accounting is not None:
            accounting.append(acct)
    return rounds


def multigrid_accounting(m: int, d: int, pi) -> list[dict]:
    """Per-involution vertical-pair counts: {upper level: (count, capacity)}."""
    accounting: list[dict] = []
    _multigrid_rounds(m, d, pi, accounting)
    return accounting


def _multigrid_depth_bound(m: int, d: int) -> int:
    info = PyramidInfo(m, d)
    mesh_bound = route_depth_bound(mesh_graph(info.lengths(m - 1)))
    return 2 * (3 * mesh_bound + 2 * m)


def route_multigrid(m: int, d: int, pi) -> RoutingPlan:
    """Route on the multigrid (pyramid with thinned vertical edges).

    The plan is also valid on the full pyramid, whose edge set is a
    superset.
    """
    host = multigrid_graph(m, d)
    check_permutation(pi, host.n)
    return _finish(host, _multigrid_rounds(m, d, pi), pi,
                   _multigrid_depth_bound(m, d))


# ---------------------------------------------------------------------------
# generic fallback and dispatch

def _generic_rounds(g: Graph, pi):
    if is_tree(g):
        return _tree_rounds(g, pi)
    tree = spanning_tree(g)
    return _tree_rounds(tree, pi)


def route_generic(g: Graph, pi) -> RoutingPlan:
    """Route on any connected graph via a spanning tree; depth <= 3n."""
    check_connected(g)
    check_permutation(pi, g.n)
    return _finish(g, _generic_rounds(g, pi), pi, 3 * g.n)


def _auto_rounds(g: Graph, pi):
    if all(pi[v - 1] == v for v in range(1, g.n + 1)):
        return []
    fam = family_name(g)
    if fam == "path" or _is_canonical_path(g):
        return _path_rounds(g.n, pi)
    if fam == "complete" or len(g.edges) == g.n * (g.n - 1) // 2:
        return _complete_rounds(pi)
    if fam == "multipartite":
        p, s = family_params(g)
        return _multipartite_rounds(p, s, pi)
    if fam == "hypercube":
        (dim,) = family_params(g)
        if dim == 1:
            return _path_rounds(2, pi)
        return _product_rounds(path_graph(2), hypercube_graph(dim - 1), pi)
    if fam == "mesh":
        lengths = family_params(g)
        if len(lengths) == 1:
            return _path_rounds(g.n, pi)
        return _product_rounds(path_graph(lengths[0]),
                               mesh_graph(lengths[1:]), pi)
    if fam in ("multigrid", "pyramid"):
        m, d = family_params(g)
        return _multigrid_rounds(m, d, pi)
    if fam == "product" and len(g.factors) == 2:
        return _product_rounds(g.factors[0], g.factors[1], pi)
    return _generic_rounds(g, pi)


def route_auto(g: Graph, pi) -> RoutingPlan:
    """Route on any connected graph, dispatching to the family planner."""
    check_connected(g)
    check_permutation(pi, g.n)
    return _finish(g, _auto_rounds(g, pi), pi, route_depth_bound(g))


def route_depth_bound(g: Graph) -> int:
    """Worst-case plan depth promised by route_auto for this graph."""
    fam = family_name(g)
    if fam == "path" or _is_canonical_path(g):
        return g.n
    if fam == "complete" or len(g.edges) == g.n * (g.n - 1) // 2:
        return 2
    if fam == "multipartite":
        return 6
    if fam == "hypercube":
        (dim,) = family_params(g)
        if dim == 1:
            return 2
        b1, b2 = 2, route_depth_bound(hypercube_graph(dim - 1))
        return b1 + b2 + min(b1, b2)
    if fam == "mesh":
        lengths = family_params(g)
        if len(lengths) == 1:
            return g.n
        b1 = lengths[0]
        b2 = route_depth_bound(mesh_graph(lengths[1:]))
        return b1 + b2 + min(b1, b2)
    if fam in ("multigrid", "pyramid"):
        m, d = family_params(g)
        return _multigrid_depth_bound(m, d)
    if fam == "product" and len(g.factors) == 2:
        b1 = route_depth_bound(g.factors[0])
        b2 = route_depth_bound(g.factors[1])
        return b1 + b2 + min(b1, b2)
    return 3 * g.n
