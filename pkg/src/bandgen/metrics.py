"""Distribution-level graph comparison.

A graph is summarized by four views: its degree histogram, a 100-bin
clustering-coefficient histogram, the mean count vector over the fifteen
node orbits of connected subgraphs on up to four nodes, and a 200-bin
histogram of normalized-Laplacian eigenvalues on [0, 2].  Two graph sets
are then compared with squared maximum mean discrepancy per view (biased
V-statistic, Gaussian kernel over a 1-Wasserstein or Euclidean ground
distance), plus a manifold-style precision/recall built from k-NN radii
over a fixed 96-dimensional embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from multiprocessing import Pool

import numpy as np

from .errors import InputError, NumericError
from .graph import Graph
from .linalg import symmetric_eigenvalues

__all__ = [
    "KernelConfig",
    "GraphStats",
    "MMDReport",
    "PRReport",
    "clustering_coefficients",
    "orbit_counts4",
    "normalized_laplacian",
    "laplacian_spectrum",
    "graph_stats",
    "stats_many",
    "wasserstein_hist",
    "mmd2",
    "mmd_suite",
    "embed_stats",
    "f1_pr",
    "average_precision",
    "spearman_r",
]


@dataclass(frozen=True)
class KernelConfig:
    """Kernel widths, bin counts, and k-NN settings for all metrics."""

    degree_sigma: float = 1.0
    cluster_sigma: float = 1.0
    spectra_sigma: float = 1.0
    orbit_sigma: float = 30.0
    cluster_bins: int = 100
    spectrum_bins: int = 200
    embed_bins: int = 32
    k_neighbors: int = 5

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class GraphStats:
    """Per-graph summaries consumed by the set-level metrics."""

    degree_hist: np.ndarray
    cluster_hist: np.ndarray
    orbit_mean: np.ndarray
    spectrum_hist: np.ndarray


@dataclass(frozen=True)
class MMDReport:
    degree: float
    cluster: float
    orbit: float
    spectra: float
    mean: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class PRReport:
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# --- per-graph statistics ---------------------------------------------------


def clustering_coefficients(g: Graph) -> np.ndarray:
    """Local clustering coefficient per node (0 for degree < 2)."""
    nbr = [set(a) for a in g.adj]
    out = np.zeros(g.n)
    for v in range(g.n):
        k = len(g.adj[v])
        if k < 2:
            continue
        links = 0
        a = g.adj[v]
        for i in range(k):
            ni = nbr[a[i]]
            for j in range(i + 1, k):
                if a[j] in ni:
                    links += 1
        out[v] = 2.0 * links / (k * (k - 1))
    return out


def orbit_counts4(g: Graph) -> np.ndarray:
    """Counts of the 15 orbits of connected <=4-node induced subgraphs.

    Orbit numbering: 0 edge endpoint; 1/2 path-3 end/middle; 3 triangle;
    4/5 path-4 end/middle; 6/7 claw leaf/center; 8 cycle-4; 9/10/11 paw
    tail/ring/hub; 12/13 diamond rim/hub; 14 complete-4.
    """
    n = g.n
    counts = np.zeros((n, 15), dtype=np.int64)
    nbr = [set(a) for a in g.adj]

    for v in range(n):
        counts[v, 0] = len(g.adj[v])

    for u in range(n):
        for v in g.adj[u]:
            if v <= u:
                continue
            for w in nbr[u] & nbr[v]:
                if w > v:
                    counts[u, 3] += 1
                    counts[v, 3] += 1
                    counts[w, 3] += 1
    for m in range(n):
        a = g.adj[m]
        for i in range(len(a)):
            ni = nbr[a[i]]
            for j in range(i + 1, len(a)):
                if a[j] not in ni:
                    counts[m, 2] += 1
                    counts[a[i], 1] += 1
                    counts[a[j], 1] += 1

    def classify(sub: list[int]) -> None:
        degs = [0, 0, 0, 0]
        m_edges = 0
        for i in range(4):
            for j in range(i + 1, 4):
                if sub[j] in nbr[sub[i]]:
                    m_edges += 1
                    degs[i] += 1
                    degs[j] += 1
        if m_edges == 3:
            if max(degs) == 3:
                orbit = {1: 6, 3: 7}
            else:
                orbit = {1: 4, 2: 5}
        elif m_edges == 4:
            if max(degs) == 2:
                orbit = {2: 8}
            else:
                orbit = {1: 9, 2: 10, 3: 11}
        elif m_edges == 5:
            orbit = {2: 12, 3: 13}
        else:
            orbit = {3: 14}
        for i in range(4):
            counts[sub[i], orbit[degs[i]]] += 1

    # ESU enumeration of connected 4-node induced subgraphs, each once.
    def extend(sub: list[int], ext: list[int], root: int, closed: frozenset) -> None:
        if len(sub) == 3:
            for w in ext:
                classify(sub + [w])
            return
        pool = list(ext)
        while pool:
            w = pool.pop()
            grown = pool + [u for u in g.adj[w] if u > root and u not in closed]
            extend(sub + [w], grown, root, closed | nbr[w] | {w})

    for v in range(n):
        extend([v], [u for u in g.adj[v] if u > v], v, frozenset(nbr[v]) | {v})
    return counts


def normalized_laplacian(g: Graph) -> np.ndarray:
    """I - D^{-1/2} A D^{-1/2}, with zero rows for isolated nodes."""
    n = g.n
    a = np.zeros((n, n))
    for u in range(n):
        for v in g.adj[u]:
            a[u, v] = 1.0
    deg = a.sum(axis=1)
    inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    lap = -a * inv_sqrt[:, None] * inv_sqrt[None, :]
    di = np.arange(n)
    lap[di, di] = np.where(deg > 0, 1.0, 0.0)
    return lap


def laplacian_spectrum(g: Graph, tol: float = 1e-8) -> np.ndarray:
    """Ascending normalized-Laplacian eigenvalues, clamped to [0, 2]."""
    vals = symmetric_eigenvalues(normalized_laplacian(g))
    if vals.size and (vals.min() < -tol or vals.max() > 2.0 + tol):
        raise NumericError(
            f"spectrum escaped [0, 2] beyond tolerance: [{vals.min()}, {vals.max()}]"
        )
    return np.clip(vals, 0.0, 2.0)


def graph_stats(g: Graph, cfg: KernelConfig | None = None) -> GraphStats:
    cfg = cfg or KernelConfig()
    degs = np.array(g.degrees(), dtype=np.int64)
    degree_hist = np.bincount(degs, minlength=1) / g.n
    cc = clustering_coefficients(g)
    cluster_hist = np.histogram(cc, bins=cfg.cluster_bins, range=(0.0, 1.0))[0] / g.n
    orbit_mean = orbit_counts4(g).mean(axis=0)
    spec = laplacian_spectrum(g)
    spectrum_hist = (
        np.histogram(spec, bins=cfg.spectrum_bins, range=(0.0, 2.0))[0] / g.n
    )
    return GraphStats(
        degree_hist=degree_hist,
        cluster_hist=cluster_hist,
        orbit_mean=orbit_mean,
        spectrum_hist=spectrum_hist,
    )


def _stats_job(args: tuple[Graph, KernelConfig]) -> GraphStats:
    return graph_stats(*args)


def stats_many(
    graphs: list[Graph], cfg: KernelConfig | None = None, workers: int = 1
) -> list[GraphStats]:
    cfg = cfg or KernelConfig()
    if workers > 1 and len(graphs) > 1:
        with Pool(workers) as pool:
            return pool.map(_stats_job, [(g, cfg) for g in graphs])
    return [graph_stats(g, cfg) for g in graphs]


# --- set-level metrics ------------------------------------------------------


def wasserstein_hist(a: np.ndarray, b: np.ndarray) -> float:
    """1-Wasserstein distance between histograms on a shared unit-bin grid.

    Shorter histograms are zero-padded on the right.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    width = max(a.size, b.size)
    diff = np.zeros(width)
    diff[: a.size] = a
    diff[: b.size] -= b
    return float(np.abs(np.cumsum(diff)).sum())


def _hist_matrix(stats: list[np.ndarray], width: int) -> np.ndarray:
    out = np.zeros((len(stats), width))
    for i, h in enumerate(stats):
        out[i, : h.size] = h
    return out


def _pairwise_w1(xs: list[np.ndarray], ys: list[np.ndarray]) -> np.ndarray:
    width = max(max(h.size for h in xs), max(h.size for h in ys))
    cx = np.cumsum(_hist_matrix(xs, width), axis=1)
    cy = np.cumsum(_hist_matrix(ys, width), axis=1)
    return np.abs(cx[:, None, :] - cy[None, :, :]).sum(axis=2)


def _pairwise_euclid(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    d2 = ((xs[:, None, :] - ys[None, :, :]) ** 2).sum(axis=2)
    return np.sqrt(np.maximum(d2, 0.0))


def mmd2(xs, ys, sigma: float = 1.0, metric: str = "wasserstein") -> float:
    """Squared MMD between two sets of summaries (biased V-statistic).

    ``metric`` chooses the ground distance: "wasserstein" for histogram
    lists, "euclidean" for fixed-length vectors.  The kernel is
    exp(-dist^2 / (2 sigma^2)); tiny negative results are clamped to 0.
    """
    if len(xs) == 0 or len(ys) == 0:
        raise InputError("MMD needs non-empty sets")
    if sigma <= 0:
        raise InputError(f"kernel sigma must be positive, got {sigma}")
    if metric == "wasserstein":
        dxx = _pairwise_w1(xs, xs)
        dyy = _pairwise_w1(ys, ys)
        dxy = _pairwise_w1(xs, ys)
    elif metric == "euclidean":
        xa = np.asarray(xs, dtype=np.float64)
        ya = np.asarray(ys, dtype=np.float64)
        dxx = _pairwise_euclid(xa, xa)
        dyy = _pairwise_euclid(ya, ya)
        dxy = _pairwise_euclid(xa, ya)
    else:
        raise InputError(f"unknown ground metric {metric!r}")
    s2 = 2.0 * sigma * sigma
    val = (
        np.exp(-(dxx**2) / s2).mean()
        + np.exp(-(dyy**2) / s2).mean()
        - 2.0 * np.exp(-(dxy**2) / s2).mean()
    )
    return max(float(val), 0.0)


def mmd_suite(
    generated: list[Graph],
    reference: list[Graph],
    cfg: KernelConfig | None = None,
    workers: int = 1,
    generated_stats: list[GraphStats] | None = None,
    reference_stats: list[GraphStats] | None = None,
) -> MMDReport:
    """Squared MMD for all four views plus their mean."""
    cfg = cfg or KernelConfig()
    gs = generated_stats or stats_many(generated, cfg, workers)
    rs = reference_stats or stats_many(reference, cfg, workers)
    degree = mmd2([s.degree_hist for s in gs], [s.degree_hist for s in rs], cfg.degree_sigma)
    cluster = mmd2([s.cluster_hist for s in gs], [s.cluster_hist for s in rs], cfg.cluster_sigma)
    orbit = mmd2(
        np.array([s.orbit_mean for s in gs]),
        np.array([s.orbit_mean for s in rs]),
        cfg.orbit_sigma,
        metric="euclidean",
    )
    spectra = mmd2(
        [s.spectrum_hist for s in gs], [s.spectrum_hist for s in rs], cfg.spectra_sigma
    )
    return MMDReport(
        degree=degree,
        cluster=cluster,
        orbit=orbit,
        spectra=spectra,
        mean=(degree + cluster + orbit + spectra) / 4.0,
    )


def _downsample(h: np.ndarray, out_bins: int) -> np.ndarray:
    idx = np.floor(np.arange(out_bins) * h.size / out_bins).astype(int)
    return np.add.reduceat(h, idx)


def embed_stats(stats: GraphStats, cfg: KernelConfig | None = None) -> np.ndarray:
    """Fixed-length embedding: clamped degree / clustering / spectrum blocks."""
    cfg = cfg or KernelConfig()
    b = cfg.embed_bins
    deg = np.zeros(b)
    h = stats.degree_hist
    if h.size <= b:
        deg[: h.size] = h
    else:
        deg[:] = h[:b]
        deg[b - 1] += h[b:].sum()
    return np.concatenate(
        [deg, _downsample(stats.cluster_hist, b), _downsample(stats.spectrum_hist, b)]
    )


def f1_pr(
    generated: list[Graph],
    reference: list[Graph],
    cfg: KernelConfig | None = None,
    workers: int = 1,
    generated_stats: list[GraphStats] | None = None,
    reference_stats: list[GraphStats] | None = None,
) -> PRReport:
    """Manifold precision/recall from k-NN radii in embedding space.

    A generated point is precise when it falls within the k-NN radius of
    some reference point, and vice versa for recall; membership uses <=.
    """
    cfg = cfg or KernelConfig()
    k = cfg.k_neighbors
    if len(generated) <= k or len(reference) <= k:
        raise InputError(f"both sets need more than k={k} graphs")
    gs = generated_stats or stats_many(generated, cfg, workers)
    rs = reference_stats or stats_many(reference, cfg, workers)
    ge = np.array([embed_stats(s, cfg) for s in gs])
    re = np.array([embed_stats(s, cfg) for s in rs])
    d_rr = _pairwise_euclid(re, re)
    d_gg = _pairwise_euclid(ge, ge)
    d_rg = _pairwise_euclid(re, ge)
    r_ref = np.partition(d_rr, k, axis=1)[:, k]
    r_gen = np.partition(d_gg, k, axis=1)[:, k]
    precision = float((d_rg <= r_ref[:, None]).any(axis=0).mean())
    recall = float((d_rg <= r_gen[None, :]).any(axis=1).mean())
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRReport(precision=precision, recall=recall, f1=f1)


# --- scalar statistics ------------------------------------------------------


def average_precision(scores, labels) -> float:
    """Area under the precision-recall curve with tie-grouped steps.

    Equal scores form one group sharing the precision at the group end,
    so a constant scorer lands exactly on the positive prevalence.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if s.ndim != 1 or s.shape != y.shape:
        raise InputError("scores and labels must be equal-length vectors")
    if not np.isin(y, (0.0, 1.0)).all():
        raise InputError("labels must be binary")
    total_pos = y.sum()
    if total_pos == 0:
        raise InputError("average precision needs at least one positive label")
    order = np.argsort(-s, kind="stable")
    s = s[order]
    y = y[order]
    ends = np.append(np.nonzero(np.diff(s))[0], s.size - 1)
    tp = np.cumsum(y)[ends]
    prev = np.concatenate(([0.0], tp[:-1]))
    precision_at = tp / (ends + 1.0)
    return float(((tp - prev) * precision_at).sum() / total_pos)


def spearman_r(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.ndim != 1 or xv.shape != yv.shape:
        raise InputError("inputs must be equal-length vectors")
    if xv.size < 3:
        raise InputError(f"need at least 3 observations, got {xv.size}")
    rx = _average_ranks(xv)
    ry = _average_ranks(yv)
    sx = rx.std()
    sy = ry.std()
    if sx == 0.0 or sy == 0.0:
        raise NumericError("rank correlation is undefined for constant input")
    return float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))


def _average_ranks(v: np.ndarray) -> np.ndarray:
    order = np.argsort(v, kind="stable")
    s = v[order]
    ranks = np.empty(v.size)
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and s[j + 1] == s[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks
