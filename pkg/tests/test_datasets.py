import json

import numpy as np
import pytest

from bandgen.datasets import (
    BandwidthReport,
    DatasetSpec,
    bandwidth_report,
    filter_connected,
    filter_size,
    gen_community2,
    gen_grid2d,
    gen_planar,
    grid_graph,
    load_jsonl,
    save_jsonl,
    split,
)
from bandgen.delaunay import triangulate
from bandgen.errors import FormatError, InputError
from bandgen.graph import bandwidth_of_ordering, from_edge_list, savings_factor
from bandgen.ordering import OrderingConfig, components, cuthill_mckee
from bandgen.rng import derive_seed

from oracles import delaunay_naive


def is_connected(g):
    return len(components(g)) == 1


class TestCommunity2:
    def test_shapes_and_connectivity(self):
        graphs = gen_community2(20, seed=4)
        assert len(graphs) == 20
        for g in graphs:
            assert is_connected(g)
            assert 2 <= g.n <= 160

    def test_deterministic(self):
        a = gen_community2(5, seed=9)
        b = gen_community2(5, seed=9)
        assert [g.adj for g in a] == [g.adj for g in b]
        c = gen_community2(5, seed=10)
        assert [g.adj for g in a] != [g.adj for g in c]

    def test_two_block_density(self):
        # intra blocks at p=0.3 dominate the 0.05 cross links
        g = gen_community2(1, seed=0)[0]
        half = g.n // 2
        intra = cross = 0
        for u, v in g.edges():
            # generator labels community A before community B
            if (u < half) == (v < half):
                intra += 1
            else:
                cross += 1
        assert intra > 3 * cross


class TestPlanar:
    def test_basic_invariants(self):
        graphs = gen_planar(10, seed=1)
        for g in graphs:
            assert g.n == 64
            assert is_connected(g)
            assert g.num_edges <= 3 * 64 - 6

    def test_deterministic(self):
        assert [g.adj for g in gen_planar(3, seed=5)] == [
            g.adj for g in gen_planar(3, seed=5)
        ]

    def test_triangulation_matches_naive_oracle(self):
        rng = np.random.default_rng(123)
        for _ in range(20):
            pts = rng.random((10, 2))
            fast = set(triangulate(pts))
            slow = delaunay_naive(pts)
            assert fast == slow

    def test_triangulate_rejects_degenerate_input(self):
        with pytest.raises(InputError):
            triangulate(np.zeros((2, 2)))

    def test_euler_bound(self):
        rng = np.random.default_rng(7)
        pts = rng.random((30, 2))
        tris = triangulate(pts)
        edges = set()
        for a, b, c in tris:
            edges.update({(a, b), (a, c), (b, c)})
        assert len(edges) <= 3 * 30 - 6


class TestGrid:
    def test_grid_graph_structure(self):
        g = grid_graph(3, 4)
        assert g.n == 12
        assert g.num_edges == 3 * 3 + 4 * 2  # cols*(rows-1) + rows*(cols-1)
        assert is_connected(g)

    def test_grid_bipartite(self):
        g = grid_graph(4, 5)
        color = [-1] * g.n
        color[0] = 0
        stack = [0]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    stack.append(u)
                else:
                    assert color[u] != color[v]

    def test_gen_grid2d_counts(self):
        graphs = gen_grid2d()
        assert len(graphs) == 66
        assert len(gen_grid2d(replicas=2)) == 132
        sizes = {g.n for g in graphs}
        assert min(sizes) == 100 and max(sizes) == 400


class TestDatasetSpec:
    def test_synthetic_kinds_match_generators(self):
        spec = DatasetSpec(kind="community2", count=3, seed=8)
        assert [g.adj for g in spec.realize()] == [
            g.adj for g in gen_community2(3, seed=8)
        ]
        assert len(DatasetSpec(kind="grid2d", count=2).realize()) == 132

    def test_file_kind_loads(self, tmp_path):
        p = tmp_path / "g.jsonl"
        save_jsonl(p, [grid_graph(2, 3)])
        got = DatasetSpec(kind="file", path=str(p)).realize()
        assert len(got) == 1 and got[0].n == 6

    def test_validation(self):
        with pytest.raises(InputError):
            DatasetSpec(kind="mystery")
        with pytest.raises(InputError):
            DatasetSpec(kind="planar", count=0)
        with pytest.raises(InputError):
            DatasetSpec(kind="file")  # needs a path
        with pytest.raises(InputError):
            DatasetSpec(kind="planar", path="x.jsonl")


class TestJsonl:
    def test_round_trip(self, tmp_path):
        graphs = gen_community2(3, seed=2)
        p = tmp_path / "g.jsonl"
        save_jsonl(p, graphs)
        back = load_jsonl(p)
        assert [g.adj for g in back] == [g.adj for g in graphs]

    def test_bad_json_line(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text('{"n": 2, "edges": [[0, 1]]}\nnot json\n')
        with pytest.raises(FormatError) as exc:
            load_jsonl(p)
        assert "line 2" in str(exc.value)

    def test_unsorted_edge_rejected(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text('{"n": 2, "edges": [[1, 0]]}\n')
        with pytest.raises(FormatError):
            load_jsonl(p)

    def test_out_of_range_rejected(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text('{"n": 2, "edges": [[0, 5]]}\n')
        with pytest.raises(InputError):
            load_jsonl(p)

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text('{"n": 2, "edges": [], "extra": 1}\n')
        with pytest.raises(FormatError):
            load_jsonl(p)

    def test_save_emits_sorted_pairs(self, tmp_path):
        g, _ = from_edge_list(3, [(2, 0), (2, 1)])
        p = tmp_path / "g.jsonl"
        save_jsonl(p, [g])
        rec = json.loads(p.read_text().splitlines()[0])
        assert rec["edges"] == [[0, 2], [1, 2]]


class TestFiltersAndSplit:
    def test_filter_connected(self):
        g1, _ = from_edge_list(4, [(0, 1), (2, 3)])
        g2 = grid_graph(2, 2)
        assert filter_connected([g1, g2]) == [g2]

    def test_filter_size_inclusive(self):
        gs = [grid_graph(1, k) for k in (2, 3, 4)]
        assert filter_size(gs, 3, 4) == gs[1:]

    def test_split_partition(self):
        gs = gen_grid2d()
        a, b, c = split(gs, (0.6, 0.2, 0.2), seed=3)
        assert len(a) + len(b) + len(c) == len(gs)
        pool = [id(g) for g in a + b + c]
        assert sorted(pool) == sorted(id(g) for g in gs)

    def test_split_largest_remainder(self):
        gs = [grid_graph(1, k) for k in range(2, 7)]  # 5 graphs
        a, b, c = split(gs, (0.5, 0.3, 0.2), seed=0)
        assert (len(a), len(b), len(c)) == (3, 1, 1)

    def test_split_deterministic(self):
        gs = gen_grid2d()
        a1, _, _ = split(gs, (0.6, 0.2, 0.2), seed=5)
        a2, _, _ = split(gs, (0.6, 0.2, 0.2), seed=5)
        assert [g.adj for g in a1] == [g.adj for g in a2]


class TestBandwidthReport:
    def test_matches_direct_computation(self):
        graphs = [grid_graph(3, k) for k in range(3, 7)]
        cfg = OrderingConfig(seed=5)
        rep = bandwidth_report(graphs, cfg)
        bws = []
        ns = []
        sav = []
        for i, g in enumerate(graphs):
            o = cuthill_mckee(g, cfg.reseeded(derive_seed(cfg.seed, i)))
            bw = bandwidth_of_ordering(g, o)
            bws.append(bw)
            ns.append(g.n)
            sav.append(savings_factor(g.n, max(1, bw)))
        assert isinstance(rep, BandwidthReport)
        assert rep.count == 4
        assert rep.bw_max == max(bws)
        assert rep.bw_mean == pytest.approx(np.mean(bws))
        assert rep.bw_std == pytest.approx(np.std(bws))
        assert rep.n_mean == pytest.approx(np.mean(ns))
        assert rep.savings_mean == pytest.approx(np.mean(sav))

    def test_worker_parity(self):
        graphs = [grid_graph(2, k) for k in range(2, 8)]
        cfg = OrderingConfig(seed=1)
        assert bandwidth_report(graphs, cfg).as_dict() == bandwidth_report(
            graphs, cfg, workers=2
        ).as_dict()
