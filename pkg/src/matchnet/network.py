"""Sorting networks restricted to graph edges, and their execution.

A stage is a tuple of comparator triples (u, v, kind) whose edges form a
matching of the host graph:

- kind "dir":  compare-exchange; after the stage vertex u holds the
  smaller key and v the larger.  Orientation is positional, so (u, v)
  and (v, u) are different comparators.
- kind "swap": unconditional exchange of the two keys.

A network carries a target order: a permutation pi where pi[v-1] is the
rank vertex v must hold once sorting finishes, i.e. reading vertices in
increasing rank gives nondecreasing keys.

A routing plan is the swap-only special case; its semantic payload is
the realized permutation (pebble starting at v ends at realized[v-1]),
which is recomputed by simulation and never trusted from input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from . import graphs, perms
from .errors import ConstructionError, StructureError, TaskError

DIR = "dir"
SWAP = "swap"

Comparator = tuple  # (u, v, kind)
Stage = tuple  # tuple of Comparator


def make_stage(g: graphs.Graph, comparators: Sequence) -> Stage:
    """Validate and freeze one stage: edges exist and form a matching."""
    seen: set[int] = set()
    out = []
    for u, v, kind in comparators:
        if kind not in (DIR, SWAP):
            raise StructureError(f"bad comparator kind {kind!r}")
        if (min(u, v), max(u, v)) not in g.edges:
            raise ConstructionError(f"({u},{v}) is not an edge of the host graph")
        if u in seen or v in seen:
            raise ConstructionError(f"stage is not a matching at ({u},{v})")
        seen.add(u)
        seen.add(v)
        if kind == SWAP and u > v:
            u, v = v, u
        out.append((u, v, kind))
    return tuple(out)


@dataclass(frozen=True)
class SortingNetwork:
    graph: graphs.Graph
    order: tuple  # target ranks, order[v-1] = rank of vertex v
    stages: tuple  # tuple of Stage
    provenance: dict = field(default_factory=dict, compare=False)
    certificate: dict | None = field(default=None, compare=False)

    @property
    def depth(self) -> int:
        return len(self.stages)

    def comparator_count(self) -> int:
        return sum(len(s) for s in self.stages)


def make_network(g: graphs.Graph, order: Sequence[int], stages: Sequence,
                 provenance: dict | None = None,
                 certificate: dict | None = None) -> SortingNetwork:
    order = perms.check_permutation(order, g.n)
    frozen = tuple(make_stage(g, s) for s in stages)
    return SortingNetwork(graph=g, order=order, stages=frozen,
                          provenance=provenance or {},
                          certificate=certificate)


@dataclass(frozen=True)
class RoutingPlan:
    graph: graphs.Graph
    stages: tuple  # swap-only stages
    realized: tuple  # realized[v-1] = final vertex of the pebble from v

    @property
    def depth(self) -> int:
        return len(self.stages)


def make_plan(g: graphs.Graph, stages: Sequence) -> RoutingPlan:
    frozen = []
    for s in stages:
        for u, v, kind in s:
            if kind != SWAP:
                raise StructureError("routing plans may only contain swaps")
        frozen.append(make_stage(g, s))
    realized = plan_realized(g.n, frozen)
    return RoutingPlan(graph=g, stages=tuple(frozen), realized=realized)


def plan_realized(n: int, stages: Sequence) -> tuple:
    pos = list(range(1, n + 1))  # pos[pebble-1] = current vertex
    at = list(range(1, n + 1))  # at[vertex-1] = pebble there
    for s in stages:
        for u, v, _ in s:
            pu, pv = at[u - 1], at[v - 1]
            at[u - 1], at[v - 1] = pv, pu
            pos[pu - 1], pos[pv - 1] = v, u
    return tuple(pos)


# ---------------------------------------------------------------------------
# execution


def apply_stage(keys: list, stage: Stage) -> None:
    for u, v, kind in stage:
        a, b = keys[u - 1], keys[v - 1]
        if kind == DIR:
            if b < a:
                keys[u - 1], keys[v - 1] = b, a
        else:
            keys[u - 1], keys[v - 1] = b, a


def execute(net: SortingNetwork | RoutingPlan, keys: Sequence) -> list:
    """Run every stage over a pebble configuration (keys[v-1] on vertex v)."""
    if len(keys) != net.graph.n:
        raise TaskError(f"expected {net.graph.n} keys, got {len(keys)}")
    out = list(keys)
    for s in net.stages:
        apply_stage(out, s)
    return out


def is_sorted_for(order: Sequence[int], keys: Sequence) -> bool:
    """Keys read along increasing rank are nondecreasing."""
    inv = perms.inverse(order)
    prev = None
    for r in range(1, len(keys) + 1):
        k = keys[inv[r - 1] - 1]
        if prev is not None and k < prev:
            return False
        prev = k
    return True


def concatenate(a: SortingNetwork, b: SortingNetwork) -> SortingNetwork:
    """Run a's stages then b's; both must share the host graph."""
    if a.graph.n != b.graph.n or a.graph.edges != b.graph.edges:
        raise StructureError("concatenate needs the same host graph")
    return SortingNetwork(graph=a.graph, order=b.order,
                          stages=a.stages + b.stages,
                          provenance={"concat": [a.provenance, b.provenance]},
                          certificate=None)


def plan_stages_as_network(plan: RoutingPlan) -> tuple:
    return plan.stages


def apply_position_map(g: graphs.Graph, stage: Sequence, pos: Sequence[int]) -> Stage:
    """Map a stage over logical labels to physical vertices.

    pos[l-1] is the physical vertex currently holding logical label l.
    Raises ConstructionError when a mapped pair is not a graph edge: a
    construction that trips this has routed its labels inconsistently.
    """
    mapped = [(pos[u - 1], pos[v - 1], kind) for u, v, kind in stage]
    return make_stage(g, mapped)


# ---------------------------------------------------------------------------
# serialization


def _graph_doc(g: graphs.Graph) -> dict:
    return {
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "family": g.family,
        "order": None,
    }


def _stages_doc(stages: Sequence) -> list:
    return [{"cmp": [[u, v, kind] for u, v, kind in s]} for s in stages]


def network_to_json(net: SortingNetwork) -> str:
    doc = {
        "version": 1,
        "graph": _graph_doc(net.graph),
        "order": list(net.order),
        "stages": _stages_doc(net.stages),
    }
    if net.provenance:
        doc["provenance"] = net.provenance
    if net.certificate is not None:
        doc["certificate"] = net.certificate
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def plan_to_json(plan: RoutingPlan) -> str:
    doc = {
        "version": 1,
        "graph": _graph_doc(plan.graph),
        "order": list(plan.realized),
        "stages": _stages_doc(plan.stages),
        "plan": True,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _parse_doc(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureError(f"bad network JSON: {e}") from e
    if doc.get("version") != 1:
        raise StructureError("unsupported network JSON version")
    for key in ("graph", "order", "stages"):
        if key not in doc:
            raise StructureError(f"network JSON missing {key!r}")
    return doc


def network_from_json(text: str) -> SortingNetwork:
    doc = _parse_doc(text)
    gdoc = doc["graph"]
    g = graphs.graph(gdoc["n"], [tuple(e) for e in gdoc["edges"]],
                     family=gdoc.get("family"))
    stages = [[(c[0], c[1], c[2]) for c in s["cmp"]] for s in doc["stages"]]
    return make_network(g, doc["order"], stages,
                        provenance=doc.get("provenance") or {},
                        certificate=doc.get("certificate"))


def plan_from_json(text: str) -> RoutingPlan:
    doc = _parse_doc(text)
    gdoc = doc["graph"]
    g = graphs.graph(gdoc["n"], [tuple(e) for e in gdoc["edges"]],
                     family=gdoc.get("family"))
    stages = [[(c[0], c[1], c[2]) for c in s["cmp"]] for s in doc["stages"]]
    plan = make_plan(g, stages)
    stored = doc.get("order")
    if stored is not None and tuple(stored) != plan.realized:
        raise StructureError("stored plan permutation disagrees with simulation")
    return plan
