"""Graph container, node orderings, and band-matrix reparameterization.

A graph on nodes ``0..n-1`` is stored as a tuple of sorted neighbor
tuples.  All containers here are frozen; they can be hashed, compared,
and shipped across process boundaries without defensive copies.

The band representation fixes a node ordering, keeps only adjacency
entries within ``width`` of the diagonal, and stores them nearest-first:
row ``i`` holds ``min(i, width)`` cells where cell ``k`` encodes the edge
between ordered nodes ``i`` and ``i - 1 - k``.  A graph admits this
representation under an ordering exactly when the ordering's bandwidth is
at most ``width``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import BandOverflowError, FormatError, InputError

__all__ = [
    "Graph",
    "Ordering",
    "OrderingFamily",
    "BandMatrix",
    "TrainSequence",
    "from_edge_list",
    "identity_ordering",
    "apply_ordering",
    "bandwidth_of_ordering",
    "band_reparameterize",
    "band_expand",
    "banded_edge_set",
    "savings_factor",
    "to_sequence",
    "from_sequence",
]


class OrderingFamily(Enum):
    """How an ordering was produced."""

    IDENTITY = "identity"
    BFS = "bfs"
    DFS = "dfs"
    CM = "cm"
    EXACT = "exact"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with nodes labeled ``0..n-1``.

    ``adj[v]`` is a strictly increasing tuple of the neighbors of ``v``;
    symmetry is guaranteed by construction (build instances through
    :func:`from_edge_list` or the generators in :mod:`bandgen.datasets`).
    """

    n: int
    adj: tuple[tuple[int, ...], ...]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adj]

    @property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]


def _graph_from_sets(n: int, sets: list[set[int]]) -> Graph:
    return Graph(n=n, adj=tuple(tuple(sorted(s)) for s in sets))


def from_edge_list(n: int, edges) -> tuple[Graph, int]:
    """Build a graph from an iterable of node pairs.

    Self-loops and repeated edges (in either orientation) are dropped and
    counted; endpoints outside ``0..n-1`` raise :class:`InputError`.

    Returns:
        (graph, dropped) where ``dropped`` is the number of discarded pairs.
    """
    if n < 1:
        raise InputError(f"graph needs at least one node, got n={n}")
    sets: list[set[int]] = [set() for _ in range(n)]
    dropped = 0
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v or v in sets[u]:
            dropped += 1
            continue
        sets[u].add(v)
        sets[v].add(u)
    return _graph_from_sets(n, sets), dropped


@dataclass(frozen=True)
class Ordering:
    """A bijection from node labels to positions.

    ``perm[v]`` is the position assigned to node ``v``; positions are a
    permutation of ``0..n-1``.
    """

    perm: tuple[int, ...]
    family: OrderingFamily

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        object.__setattr__(self, "perm", perm)
        n = len(perm)
        seen = [False] * n
        for p in perm:
            if not 0 <= p < n or seen[p]:
                raise InputError("ordering is not a permutation of 0..n-1")
            seen[p] = True

    def inverse(self) -> tuple[int, ...]:
        """Node at each position: ``inverse()[p]`` is the node placed at p."""
        inv = [0] * len(self.perm)
        for v, p in enumerate(self.perm):
            inv[p] = v
        return tuple(inv)


def identity_ordering(n: int) -> Ordering:
    if n < 1:
        raise InputError(f"ordering needs at least one node, got n={n}")
    return Ordering(perm=tuple(range(n)), family=OrderingFamily.IDENTITY)


def apply_ordering(g: Graph, o: Ordering) -> Graph:
    """Relabel ``g`` so node ``v`` becomes ``o.perm[v]``."""
    if len(o.perm) != g.n:
        raise InputError(f"ordering length {len(o.perm)} != node count {g.n}")
    sets: list[set[int]] = [set() for _ in range(g.n)]
    for u in range(g.n):
        pu = o.perm[u]
        for v in g.adj[u]:
            sets[pu].add(o.perm[v])
    return _graph_from_sets(g.n, sets)


def bandwidth_of_ordering(g: Graph, o: Ordering) -> int:
    """Largest position gap spanned by any edge of ``g`` under ``o``.

    Zero for edgeless graphs.
    """
    if len(o.perm) != g.n:
        raise InputError(f"ordering length {len(o.perm)} != node count {g.n}")
    perm = o.perm
    best = 0
    for u in range(g.n):
        pu = perm[u]
        for v in g.adj[u]:
            if v > u:
                s = abs(pu - perm[v])
                if s > best:
                    best = s
    return best


@dataclass(frozen=True)
class BandMatrix:
    """Lower-band adjacency under some ordering, nearest diagonal first.

    Row ``i`` has ``min(i, width)`` binary cells; cell ``k`` of row ``i``
    is 1 iff ordered nodes ``i`` and ``i - 1 - k`` are adjacent.
    """

    n: int
    width: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0 or self.width < 0:
            raise InputError("band matrix sizes must be non-negative")
        if len(self.rows) != self.n:
            raise InputError(f"expected {self.n} band rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            if len(row) != min(i, self.width):
                raise InputError(
                    f"band row {i} has {len(row)} cells, expected {min(i, self.width)}"
                )
            if any(cell not in (0, 1) for cell in row):
                raise InputError(f"band row {i} contains a non-binary cell")

    @property
    def num_edges(self) -> int:
        return sum(sum(row) for row in self.rows)


def band_reparameterize(g: Graph, o: Ordering, width: int) -> BandMatrix:
    """Encode ``g`` as a band matrix under ordering ``o``.

    Raises:
        BandOverflowError: some edge spans more than ``width`` positions.
    """
    if width < 0:
        raise InputError(f"band width must be non-negative, got {width}")
    if len(o.perm) != g.n:
        raise InputError(f"ordering length {len(o.perm)} != node count {g.n}")
    perm = o.perm
    cells: list[list[int]] = [[0] * min(i, width) for i in range(g.n)]
    for u in range(g.n):
        pu = perm[u]
        for v in g.adj[u]:
            if v > u:
                pv = perm[v]
                lo, hi = (pu, pv) if pu < pv else (pv, pu)
                stretch = hi - lo
                if stretch > width:
                    raise BandOverflowError(u, v, stretch, width)
                cells[hi][stretch - 1] = 1
    return BandMatrix(n=g.n, width=width, rows=tuple(tuple(r) for r in cells))


def band_expand(b: BandMatrix, o: Ordering) -> Graph:
    """Decode a band matrix back to a graph in the labeling given by ``o``.

    ``o`` must be the ordering used to build ``b``; pass the identity to
    keep band positions as node labels.
    """
    if b.n < 1:
        raise InputError("cannot expand an empty band matrix to a graph")
    if len(o.perm) != b.n:
        raise InputError(f"ordering length {len(o.perm)} != band size {b.n}")
    inv = o.inverse()
    sets: list[set[int]] = [set() for _ in range(b.n)]
    for i, row in enumerate(b.rows):
        for k, cell in enumerate(row):
            if cell:
                u, v = inv[i], inv[i - 1 - k]
                sets[u].add(v)
                sets[v].add(u)
    return _graph_from_sets(b.n, sets)


def banded_edge_set(n: int, width: int) -> list[tuple[int, int]]:
    """Node pairs whose positions differ by 1..width, in lexicographic order."""
    if n < 1:
        raise InputError(f"need at least one node, got n={n}")
    if width < 0:
        raise InputError(f"band width must be non-negative, got {width}")
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, min(i + width, n - 1) + 1)
    ]


def savings_factor(n: int, width: int) -> float:
    """Ratio of all node pairs to pairs within the band.

    Measures how much smaller the banded support is than the full upper
    triangle; equals 1 when the band already covers every pair.
    """
    if n < 2:
        raise InputError(f"savings factor needs n >= 2, got {n}")
    if width < 1:
        raise InputError(f"savings factor needs width >= 1, got {width}")
    complete = n * (n - 1) // 2
    if width >= n - 1:
        return 1.0
    band = n * width - width * (width + 1) // 2
    return complete / band


@dataclass(frozen=True)
class TrainSequence:
    """Band rows framed for sequence models.

    Each of the ``n + 2`` rows has ``width + 1`` cells: a leading
    indicator column followed by the band row padded with zeros on the
    right.  The first and last rows are pure indicator rows (indicator 1,
    rest 0); interior row ``i`` carries band row ``i - 1`` with
    indicator 0.
    """

    rows: tuple[tuple[int, ...], ...]

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1

    @property
    def n(self) -> int:
        return len(self.rows) - 2


def to_sequence(b: BandMatrix) -> TrainSequence:
    w = b.width
    boundary = (1,) + (0,) * w
    rows = [boundary]
    for row in b.rows:
        rows.append((0,) + row + (0,) * (w - len(row)))
    rows.append(boundary)
    return TrainSequence(rows=tuple(rows))


def from_sequence(s: TrainSequence) -> BandMatrix:
    """Recover the band matrix from a framed sequence.

    Raises:
        FormatError: indicator placement, padding, or row shape violates
            the framing contract.
    """
    rows = s.rows
    if len(rows) < 2:
        raise FormatError(f"sequence needs at least 2 rows, got {len(rows)}")
    ncols = len(rows[0])
    if ncols < 1:
        raise FormatError("sequence rows need an indicator column")
    w = ncols - 1
    n = len(rows) - 2
    boundary = (1,) + (0,) * w
    band_rows: list[tuple[int, ...]] = []
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise FormatError(f"sequence row {i} has {len(row)} cells, expected {ncols}")
        if any(cell not in (0, 1) for cell in row):
            raise FormatError(f"sequence row {i} contains a non-binary cell")
        if i == 0 or i == len(rows) - 1:
            if row != boundary:
                raise FormatError(f"sequence row {i} must be a pure indicator row")
            continue
        if row[0] != 0:
            raise FormatError(f"interior sequence row {i} has its indicator set")
        keep = min(i - 1, w)
        if any(row[1 + keep:]):
            raise FormatError(f"sequence row {i} has non-zero padding")
        band_rows.append(row[1 : 1 + keep])
    return BandMatrix(n=n, width=w, rows=tuple(band_rows))
