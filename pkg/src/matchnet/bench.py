"""Benchmark suites: build networks, verify them, report depth vs bound.

Row order is fixed by the suite definition, never by completion order, so
the CSV is byte-identical across runs with the same seed.  Wall time is
shown in the text table only; it can never be byte-stable.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import constructions as cons
from .errors import ParameterError
from .graphs import family_params, generate, mesh_graph, path_graph
from .verify import verify_auto

CSV_COLUMNS = ["suite", "family", "construction", "n", "achieved_depth",
               "certificate_bound", "method", "verdict", "seed"]

PYRAMID_NOTE = ("pyramid certificates use the product mesh sorter, an extra "
                "log factor over the original mesh-sorter bound")


@dataclass(frozen=True)
class BenchRow:
    suite: str
    family: str
    construction: str
    n: int
    achieved_depth: int
    certificate_bound: int
    method: str
    verdict: str
    seed: int
    wall_time: float

    def csv_values(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


def _build(construction: str, spec: str, seed: int):
    if construction == "odd_even":
        n = int(spec.split(":")[1])
        return cons.odd_even_transposition(n)
    if construction == "bitonic":
        dim = int(spec.split(":")[1])
        return cons.bitonic_hypercube(dim)
    if construction == "batcher":
        n = int(spec.split(":")[1])
        return cons.batcher_complete(n)
    if construction == "contour":
        return cons.contour_tree_sort(generate(spec))
    if construction == "simulate_complete":
        g = generate(spec)
        return cons.simulate_complete(g, cons.batcher_complete(g.n))
    if construction == "longest_path":
        return cons.longest_path_sort(generate(spec))
    if construction == "product":
        g = generate(spec)
        lengths = family_params(g)
        if len(lengths) < 2:
            raise ParameterError("product rows need a mesh with >= 2 axes")
        return cons.product_sort(path_graph(lengths[0]),
                                 mesh_graph(lengths[1:]))
    if construction == "pyramid":
        m, d = (int(x) for x in spec.split(":")[1].split(","))
        return cons.pyramid_sort(m, d)
    raise ParameterError(f"unknown construction {construction!r}")


def _run_row(args) -> BenchRow:
    suite, construction, spec, seed = args
    t0 = time.perf_counter()
    net = _build(construction, spec, seed)
    report = verify_auto(net)
    wall = time.perf_counter() - t0
    cert = net.certificate or {}
    return BenchRow(
        suite=suite,
        family=spec,
        construction=construction,
        n=net.graph.n,
        achieved_depth=net.depth,
        certificate_bound=cert.get("claimed_bound", net.depth),
        method=report.method,
        verdict="pass" if report.passed else "fail",
        seed=seed,
        wall_time=wall,
    )


def _suite_specs(suite: str, seed: int) -> list[tuple[str, str, str, int]]:
    if suite == "paths":
        return [("paths", "odd_even", f"path:{n}", seed) for n in (4, 8, 16)]
    if suite == "trees":
        rows = [("trees", "contour", f"random_tree:{n},{seed + i}", seed)
                for i, n in enumerate((8, 10, 12))]
        rows.append(("trees", "contour", "star:8", seed))
        rows.append(("trees", "longest_path", f"random_tree:12,{seed}", seed))
        return rows
    if suite == "meshes":
        return [("meshes", "product", "mesh:2,4", seed),
                ("meshes", "product", "mesh:4,4", seed),
                ("meshes", "longest_path", "mesh:3,3", seed)]
    if suite == "hypercubes":
        return [("hypercubes", "bitonic", f"hypercube:{d}", seed)
                for d in (1, 2, 3, 4)]
    if suite == "multipartite":
        return [("multipartite", "simulate_complete", "multipartite:2,2", seed),
                ("multipartite", "simulate_complete", "multipartite:3,2", seed),
                ("multipartite", "simulate_complete", "multipartite:2,4", seed),
                ("multipartite", "batcher", "complete:8", seed)]
    if suite == "pyramids":
        return [("pyramids", "pyramid", "pyramid:2,1", seed),
                ("pyramids", "pyramid", "pyramid:2,2", seed),
                ("pyramids", "pyramid", "pyramid:3,1", seed),
                ("pyramids", "pyramid", "pyramid:4,1", seed)]
    raise ParameterError(f"unknown suite {suite!r}")


SUITES = ["paths", "trees", "meshes", "hypercubes", "multipartite", "pyramids"]


def run_suite(suite: str, seed: int = 0, jobs: int = 1) -> list[BenchRow]:
    names = SUITES if suite == "all" else [suite]
    specs = []
    for name in names:
        specs += _suite_specs(name, seed)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_row, specs))
    return [_run_row(s) for s in specs]


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_values())
    return buf.getvalue()


def rows_to_table(rows: list[BenchRow], seed: int = 0) -> str:
    headers = CSV_COLUMNS + ["wall_time"]
    cells = [[str(v) for v in row.csv_values()] + [f"{row.wall_time:.3f}s"]
             for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    def fmt(vals):
        return "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()
    lines = [f"seed: {seed}", fmt(headers), fmt(["-" * w for w in widths])]
    lines += [fmt(c) for c in cells]
    if any(r.construction == "pyramid" for r in rows):
        lines.append(f"note: {PYRAMID_NOTE}")
    return "\n".join(lines) + "\n"
