import numpy as np
import pytest

from bandgen.errors import BandOverflowError, FormatError, InputError
from bandgen.graph import (
    BandMatrix,
    Graph,
    Ordering,
    OrderingFamily,
    apply_ordering,
    band_expand,
    band_reparameterize,
    banded_edge_set,
    bandwidth_of_ordering,
    from_edge_list,
    from_sequence,
    identity_ordering,
    savings_factor,
    to_sequence,
)
from bandgen.ordering import OrderingConfig, cuthill_mckee

from oracles import random_graph


def path(n):
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])[0]


def cycle(n):
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])[0]


class TestFromEdgeList:
    def test_basic(self):
        g, dropped = from_edge_list(3, [(0, 1), (1, 2)])
        assert g.n == 3
        assert g.edges() == [(0, 1), (1, 2)]
        assert dropped == 0

    def test_drops_self_loops_and_duplicates(self):
        g, dropped = from_edge_list(3, [(0, 1), (1, 0), (2, 2), (0, 1)])
        assert g.edges() == [(0, 1)]
        assert dropped == 3

    def test_out_of_range(self):
        with pytest.raises(InputError):
            from_edge_list(3, [(0, 3)])
        with pytest.raises(InputError):
            from_edge_list(3, [(-1, 0)])

    def test_degrees(self):
        g = path(4)
        assert g.degrees() == [1, 2, 2, 1]
        assert g.num_edges == 3
        assert g.has_edge(1, 2) and not g.has_edge(0, 2)


class TestOrdering:
    def test_rejects_non_permutation(self):
        with pytest.raises(InputError):
            Ordering((0, 0, 1), OrderingFamily.IDENTITY)

    def test_accepts_numpy_ints(self):
        o = Ordering(tuple(np.arange(3)[::-1]), OrderingFamily.IDENTITY)
        assert o.perm == (2, 1, 0)

    def test_inverse(self):
        o = Ordering((2, 0, 1), OrderingFamily.IDENTITY)
        inv = o.inverse()
        for pos, node in enumerate(o.perm):
            assert inv[node] == pos

    def test_apply_ordering_relabels(self):
        g = path(3)
        o = Ordering((2, 1, 0), OrderingFamily.IDENTITY)
        h = apply_ordering(g, o)
        # reversing a path gives the same path shape
        assert h.edges() == [(0, 1), (1, 2)]

    def test_bandwidth_matches_applied_graph(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g = random_graph(rng, 8, 0.4)
            perm = tuple(int(v) for v in rng.permutation(8))
            o = Ordering(perm, OrderingFamily.BFS)
            h = apply_ordering(g, o)
            direct = bandwidth_of_ordering(g, o)
            relabeled = bandwidth_of_ordering(h, identity_ordering(8))
            assert direct == relabeled

    def test_bandwidth_of_path_identity(self):
        assert bandwidth_of_ordering(path(6), identity_ordering(6)) == 1


class TestBandMatrix:
    def test_row_lengths_enforced(self):
        with pytest.raises(InputError):
            BandMatrix(3, 2, ((), (1, 1), (0,)))

    def test_reparameterize_path(self):
        g = path(4)
        b = band_reparameterize(g, identity_ordering(4), 1)
        assert b.rows == ((), (1,), (1,), (1,))

    def test_overflow_reports_original_labels(self):
        g = cycle(4)
        with pytest.raises(BandOverflowError) as exc:
            band_reparameterize(g, identity_ordering(4), 1)
        err = exc.value
        assert err.stretch == 3
        assert err.width == 1
        assert {err.u, err.v} == {0, 3}
        assert "stretch 3" in str(err)

    def test_round_trip_random(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            g = random_graph(rng, 10, 0.3)
            o = cuthill_mckee(g, OrderingConfig(seed=3))
            w = max(1, bandwidth_of_ordering(g, o))
            b = band_reparameterize(g, o, w)
            assert band_expand(b, o) == g

    def test_round_trip_wider_band(self):
        g = path(5)
        o = identity_ordering(5)
        b = band_reparameterize(g, o, 3)
        assert band_expand(b, o) == g
        assert b.num_edges == g.num_edges


class TestBandedEdgeSet:
    def test_small(self):
        assert banded_edge_set(3, 1) == [(0, 1), (1, 2)]

    def test_counts(self):
        for n in (2, 5, 9):
            for w in range(1, n):
                pairs = banded_edge_set(n, w)
                assert len(pairs) == n * w - w * (w + 1) // 2
                assert all(0 < j - i <= w for i, j in pairs)


class TestSavingsFactor:
    def test_full_band_is_one(self):
        assert savings_factor(5, 4) == 1.0
        assert savings_factor(5, 7) == 1.0

    def test_matches_pair_enumeration(self):
        for n in (4, 10, 23):
            for w in range(1, n):
                complete = n * (n - 1) / 2
                assert savings_factor(n, w) == pytest.approx(
                    complete / len(banded_edge_set(n, w)), abs=0
                )

    def test_errors(self):
        with pytest.raises(InputError):
            savings_factor(1, 1)
        with pytest.raises(InputError):
            savings_factor(5, 0)


class TestSequence:
    def test_framing(self):
        g = path(3)
        b = band_reparameterize(g, identity_ordering(3), 2)
        s = to_sequence(b)
        arr = np.array(s.rows)
        assert arr.shape == (g.n + 2, b.width + 1)
        # boundary rows carry the indicator bit only
        assert arr[0, 0] == 1 and arr[-1, 0] == 1
        assert arr[0, 1:].sum() == 0 and arr[-1, 1:].sum() == 0
        # interior rows have indicator 0
        assert arr[1:-1, 0].sum() == 0

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            g = random_graph(rng, 7, 0.5)
            o = cuthill_mckee(g, OrderingConfig(seed=0))
            w = max(1, bandwidth_of_ordering(g, o))
            b = band_reparameterize(g, o, w)
            assert from_sequence(to_sequence(b)) == b

    def test_rejects_bad_frame(self):
        g = path(3)
        s = to_sequence(band_reparameterize(g, identity_ordering(3), 1))
        rows = [list(r) for r in s.rows]
        rows[0][0] = 0
        with pytest.raises(FormatError):
            from_sequence(type(s)(tuple(tuple(r) for r in rows)))

    def test_rejects_cells_beyond_diagonal(self):
        # row i may only use its first min(i, width) cells
        g = path(3)
        s = to_sequence(band_reparameterize(g, identity_ordering(3), 2))
        rows = [list(r) for r in s.rows]
        rows[1][2] = 1  # row for node 0 has no second predecessor
        with pytest.raises(FormatError):
            from_sequence(type(s)(tuple(tuple(r) for r in rows)))
