"""Dataset synthesis, JSONL persistence, filters, and bandwidth reports.

Three synthetic families are provided:

* two-community graphs: halves wired densely inside (p=0.3) and sparsely
  across (p=0.05), reduced to the largest connected component;
* planar graphs: Delaunay triangulations of 64 uniform points in the
  unit square;
* 2-D grids: every a-by-b lattice with 10 <= a <= b <= 20.

Each graph derives its own random stream from (seed, index), so corpora
are reproducible and order-independent.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, fields
from multiprocessing import Pool

import numpy as np

from .delaunay import triangulate
from .errors import FormatError, InputError, NumericError
from .graph import Graph, bandwidth_of_ordering, from_edge_list, savings_factor
from .ordering import OrderingConfig, components, cuthill_mckee
from .rng import derive_rng, derive_seed

__all__ = [
    "DatasetSpec",
    "gen_community2",
    "gen_planar",
    "gen_grid2d",
    "grid_graph",
    "save_jsonl",
    "load_jsonl",
    "filter_connected",
    "filter_size",
    "split",
    "BandwidthReport",
    "bandwidth_report",
]

DATASET_KINDS = ("community2", "planar", "grid2d", "file")


@dataclass(frozen=True)
class DatasetSpec:
    """Recipe for one corpus: a synthetic family or a file to load.

    The grid family is a fixed enumeration, so ``count`` acts as its
    replica multiplier instead of a graph count.
    """

    kind: str
    count: int = 1
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in DATASET_KINDS:
            raise InputError(
                f"unknown dataset kind {self.kind!r}, expected one of {DATASET_KINDS}"
            )
        if self.count < 1:
            raise InputError(f"count must be at least 1, got {self.count}")
        if (self.kind == "file") != (self.path is not None):
            raise InputError("path is required for kind 'file' and only for it")

    def realize(self) -> list[Graph]:
        if self.kind == "community2":
            return gen_community2(self.count, self.seed)
        if self.kind == "planar":
            return gen_planar(self.count, self.seed)
        if self.kind == "grid2d":
            return gen_grid2d(replicas=self.count)
        return load_jsonl(self.path)


def gen_community2(count: int, seed: int = 0) -> list[Graph]:
    """Two-community graphs with 60..160 nodes before the LCC filter."""
    if count < 1:
        raise InputError(f"need a positive graph count, got {count}")
    out = []
    for i in range(count):
        rng = derive_rng(seed, i)
        n_total = int(rng.integers(60, 161))
        n1 = (n_total + 1) // 2
        edges: list[tuple[int, int]] = []
        for base, size in ((0, n1), (n1, n_total - n1)):
            iu, ju = np.triu_indices(size, k=1)
            mask = rng.random(iu.shape[0]) < 0.3
            edges.extend(
                (base + int(a), base + int(b)) for a, b in zip(iu[mask], ju[mask])
            )
        cross = rng.random((n1, n_total - n1)) < 0.05
        ai, bi = np.nonzero(cross)
        edges.extend((int(a), n1 + int(b)) for a, b in zip(ai, bi))
        g, _ = from_edge_list(n_total, edges)
        out.append(_largest_component(g))
    return out


def _largest_component(g: Graph) -> Graph:
    comps = components(g)
    keep = max(comps, key=len)
    index = {v: i for i, v in enumerate(keep)}
    sets: list[set[int]] = [set() for _ in keep]
    for v in keep:
        for w in g.adj[v]:
            if w in index:
                sets[index[v]].add(index[w])
    return Graph(n=len(keep), adj=tuple(tuple(sorted(s)) for s in sets))


def gen_planar(count: int, seed: int = 0, n_points: int = 64) -> list[Graph]:
    """Delaunay triangulations of uniform points in the unit square."""
    if count < 1:
        raise InputError(f"need a positive graph count, got {count}")
    out = []
    for i in range(count):
        rng = derive_rng(seed, i)
        for _attempt in range(32):
            pts = rng.random((n_points, 2))
            try:
                tris = triangulate(pts)
            except NumericError:
                continue
            break
        else:
            raise NumericError(
                f"planar graph {i}: degenerate point sets on 32 consecutive draws"
            )
        edges = set()
        for a, b, c in tris:
            edges.update(((a, b), (b, c), (a, c)))
        g, _ = from_edge_list(n_points, sorted(edges))
        out.append(g)
    return out


def grid_graph(rows: int, cols: int) -> Graph:
    """Rectangular lattice in row-major labeling."""
    if rows < 1 or cols < 1:
        raise InputError(f"grid sides must be positive, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    g, _ = from_edge_list(rows * cols, edges)
    return g


def gen_grid2d(replicas: int = 1) -> list[Graph]:
    """All a-by-b grids with 10 <= a <= b <= 20 (66 graphs per replica)."""
    if replicas < 1:
        raise InputError(f"need a positive replica count, got {replicas}")
    base = [grid_graph(a, b) for a in range(10, 21) for b in range(a, 21)]
    return base * replicas


# --- persistence -----------------------------------------------------------


def save_jsonl(path: str | os.PathLike, graphs: list[Graph]) -> None:
    """One graph per line: {"n": ..., "edges": [[u, v], ...]} with u < v."""
    with open(path, "w", encoding="utf-8") as fh:
        for g in graphs:
            rec = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def load_jsonl(path: str | os.PathLike) -> list[Graph]:
    """Read a graph-per-line file, addressing problems by line number."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(rec, dict) or set(rec) != {"n", "edges"}:
                raise FormatError(
                    f"line {lineno}: expected an object with keys 'n' and 'edges'"
                )
            n = rec["n"]
            if not isinstance(n, int) or n < 1:
                raise FormatError(f"line {lineno}: 'n' must be a positive integer")
            edges = rec["edges"]
            if not isinstance(edges, list):
                raise FormatError(f"line {lineno}: 'edges' must be a list")
            pairs = []
            for e in edges:
                if (
                    not isinstance(e, list)
                    or len(e) != 2
                    or not all(isinstance(x, int) for x in e)
                ):
                    raise FormatError(f"line {lineno}: edge {e!r} is not an int pair")
                u, v = e
                if not u < v:
                    raise FormatError(f"line {lineno}: edge [{u}, {v}] must have u < v")
                if v >= n or u < 0:
                    raise InputError(
                        f"line {lineno}: edge [{u}, {v}] out of range for n={n}"
                    )
                pairs.append((u, v))
            g, _ = from_edge_list(n, pairs)
            out.append(g)
    return out


def filter_connected(graphs: list[Graph]) -> list[Graph]:
    return [g for g in graphs if len(components(g)) == 1]


def filter_size(graphs: list[Graph], min_nodes: int, max_nodes: int) -> list[Graph]:
    """Keep graphs with min_nodes <= n <= max_nodes (inclusive bounds)."""
    if min_nodes > max_nodes:
        raise InputError(f"empty size window [{min_nodes}, {max_nodes}]")
    return [g for g in graphs if min_nodes <= g.n <= max_nodes]


def split(
    graphs: list[Graph], fractions: tuple[float, ...], seed: int = 0
) -> list[list[Graph]]:
    """Shuffle and partition into len(fractions) parts.

    Sizes are fractions rounded down, with leftovers going to the parts
    with the largest fractional remainders (earlier parts win ties), so
    the sizes always sum to len(graphs).
    """
    if not fractions or any(f < 0 for f in fractions):
        raise InputError("fractions must be non-negative and non-empty")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise InputError(f"fractions must sum to 1, got {sum(fractions)}")
    n = len(graphs)
    rng = derive_rng(seed)
    order = [graphs[j] for j in rng.permutation(n)]
    raw = [f * n for f in fractions]
    sizes = [math.floor(r) for r in raw]
    leftovers = n - sum(sizes)
    by_remainder = sorted(range(len(raw)), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in by_remainder[:leftovers]:
        sizes[i] += 1
    parts = []
    at = 0
    for s in sizes:
        parts.append(order[at : at + s])
        at += s
    return parts


# --- bandwidth reporting ---------------------------------------------------


@dataclass(frozen=True)
class BandwidthReport:
    """Corpus-level ordering statistics (std is the population kind)."""

    count: int
    n_mean: float
    n_std: float
    bw_mean: float
    bw_std: float
    savings_mean: float
    savings_std: float
    bw_max: int

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _report_one(args: tuple[Graph, OrderingConfig]) -> tuple[int, int, float]:
    g, cfg = args
    bw = bandwidth_of_ordering(g, cuthill_mckee(g, cfg))
    sav = savings_factor(g.n, max(bw, 1)) if g.n >= 2 else 1.0
    return g.n, bw, sav


def bandwidth_report(
    graphs: list[Graph], cfg: OrderingConfig | None = None, workers: int = 1
) -> BandwidthReport:
    """Node, bandwidth, and savings statistics under per-graph orderings.

    Graph ``i`` gets its ordering from the stream (cfg.seed, i), so the
    report does not depend on ``workers``.
    """
    if not graphs:
        raise InputError("cannot report on an empty corpus")
    cfg = cfg or OrderingConfig()
    jobs = [(g, cfg.reseeded(derive_seed(cfg.seed, i))) for i, g in enumerate(graphs)]
    if workers > 1:
        with Pool(workers) as pool:
            rows = pool.map(_report_one, jobs)
    else:
        rows = [_report_one(j) for j in jobs]
    ns = np.array([r[0] for r in rows], dtype=np.float64)
    bws = np.array([r[1] for r in rows], dtype=np.float64)
    savs = np.array([r[2] for r in rows], dtype=np.float64)
    return BandwidthReport(
        count=len(rows),
        n_mean=float(ns.mean()),
        n_std=float(ns.std()),
        bw_mean=float(bws.mean()),
        bw_std=float(bws.std()),
        savings_mean=float(savs.mean()),
        savings_std=float(savs.std()),
        bw_max=int(bws.max()),
    )
