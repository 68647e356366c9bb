"""Enumeration, relation rows, dimensions, and quotient normal forms."""

import itertools

import pytest

from trivalent import graphs as G
from trivalent.cache import Cache
from trivalent.linalg import exact_rref, reduce_vector
from trivalent.spaces import (
    GraphSpace,
    _canonical_four,
    _four_key,
    classify,
    enumerate_graphs,
)

import oracles


def space(k):
    return GraphSpace(k)


class TestEnumeration:
    def test_k1_classes(self):
        reps, zeros = classify(enumerate_graphs(1))
        assert reps == []
        theta = G.validate(2, [(0, 1), (0, 1), (0, 1)])
        dumbbell = G.validate(2, [(0, 0), (0, 1), (1, 1)])
        assert zeros == {G.reduce(theta).key, G.reduce(dumbbell).key}

    @pytest.mark.parametrize("k,count", [(1, 2), (2, 5), (3, 17), (4, 71)])
    def test_class_counts(self, k, count):
        assert space(k).num_classes == count

    def test_representatives_are_valid_and_distinct(self):
        sp = space(3)
        keys = [G.reduce(g).key for g in sp.basis]
        assert len(set(keys)) == len(keys)
        for g in sp.basis:
            G.validate(g.num_vertices, g.edges)

    @pytest.mark.parametrize("k,matchings", [(1, 15), (2, 10395)])
    def test_matches_stub_matching_sweep(self, k, matchings):
        """Completeness oracle: classes found by pairing stubs directly."""
        seen = set()
        total = 0
        for m in oracles.stub_matchings(k):
            total += 1
            if oracles.is_connected(2 * k, m):
                seen.add(G.reduce(G.validate(2 * k, m)).key)
        assert total == matchings
        sp = space(k)
        ours = {G.reduce(g).key for g in sp.basis} | set(sp.zero_keys)
        assert ours == seen


class TestClassVector:
    def test_zero_class(self):
        sp = space(1)
        assert sp.class_vector(G.validate(2, [(0, 1), (0, 1), (0, 1)])) == {}

    def test_signed_class(self):
        sp = space(2)
        k4 = G.validate(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        vec = sp.class_vector(k4)
        assert len(vec) == 1
        ((i, s),) = vec.items()
        assert s in (1, -1)
        swapped = G.validate(4, (k4.edges[1], k4.edges[0]) + k4.edges[2:])
        assert sp.class_vector(swapped) == {i: -s}

    def test_wrong_k_rejected(self):
        with pytest.raises(ValueError):
            space(2).class_vector(G.validate(2, [(0, 1), (0, 1), (0, 1)]))


class TestDimensions:
    @pytest.mark.parametrize("k,dim", [(1, 0), (2, 1), (3, 0), (4, 0)])
    def test_small_k(self, k, dim):
        sp = space(k)
        assert sp.dimension() == dim
        assert sp.exact_dimension() == dim

    def test_k5(self):
        assert space(5).dimension() == 1

    def test_seed_invariance(self):
        sp = space(3)
        assert sp.dimension(seed=1) == sp.dimension(seed=999)

    def test_more_primes(self):
        assert space(2).dimension(primes=5) == 1


class TestNormalForm:
    def test_kills_relation_rows(self):
        for k in (2, 3):
            sp = space(k)
            for row in sp.relation_rows():
                assert sp.normal_form(row) == {}

    def test_idempotent_and_linear(self):
        sp = space(3)
        vecs = [{i: 1} for i in range(len(sp.basis))]
        for v in vecs:
            nf = sp.normal_form(v)
            assert sp.normal_form(nf) == nf
        a, b = vecs[0], vecs[-1]
        combo = dict(a)
        for c, val in b.items():
            combo[c] = combo.get(c, 0) + 3 * val
        nf_combo = sp.normal_form(combo)
        expect = {}
        for c, val in sp.normal_form(a).items():
            expect[c] = expect.get(c, 0) + val
        for c, val in sp.normal_form(b).items():
            expect[c] = expect.get(c, 0) + 3 * val
        assert nf_combo == {c: v for c, v in expect.items() if v}

    def test_loop_classes_vanish_at_k2(self):
        """No special-casing of loops anywhere: the triple relation alone
        sends every loop-bearing class at k=2 to zero."""
        sp = space(2)
        for g in sp.basis:
            has_loop = any(u == v for u, v in g.edges)
            nf = sp.reduce_graph(g)
            if has_loop:
                assert nf == {}
            else:
                assert nf != {}

    def test_k4_survives(self):
        sp = space(2)
        k4 = G.validate(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        assert sp.reduce_graph(k4) != {}


class TestRelationRows:
    def test_deterministic(self):
        a = GraphSpace(3).relation_rows()
        b = GraphSpace(3).relation_rows()
        assert a == b

    def test_integer_entries(self):
        for row in space(4).relation_rows():
            for v in row.values():
                assert isinstance(v, int)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_tagging_saturation(self, k):
        """Rows built from any stub ordering of a hub stay in the span of
        the rows built from the canonical ordering."""
        sp = space(k)
        piv = exact_rref(sp.relation_rows())
        fours = {}
        for g in sp.basis:
            for e, (u, v) in enumerate(g.edges):
                if u != v:
                    f = _canonical_four(G.contract_edge(g, e))
                    fours.setdefault(_four_key(f), f)
        for f in fours.values():
            for perm in itertools.permutations(range(4)):
                tagged = G.FourValentGraph(
                    f.num_vertices, f.edges, f.hub, tuple(f.tagging[i] for i in perm)
                )
                row = sp._expansion_row(tagged)
                assert reduce_vector(row, piv) == {}


class TestCache:
    def test_round_trip(self, tmp_path):
        cache = Cache(tmp_path)
        warm = GraphSpace(2, cache)
        basis = warm.basis
        rows = warm.relation_rows()
        nf = warm.normal_form({0: 1})
        dim = warm.dimension()
        assert {p for p, _ in [(n, s) for n, s in cache.status()]} == {
            "basis-k2.json",
            "zeros-k2.json",
            "relations-k2.json",
            "rref-k2.json",
        }
        cold = GraphSpace(2, cache)
        assert cold.basis == basis
        assert cold.relation_rows() == rows
        assert cold.normal_form({0: 1}) == nf
        assert cold.dimension() == dim

    def test_version_mismatch_ignored(self, tmp_path):
        cache = Cache(tmp_path)
        GraphSpace(2, cache).basis
        p = cache.path(2, "basis")
        p.write_text('{"format_version": 999, "payload": []}')
        assert cache.load(2, "basis") is None
        sp = GraphSpace(2, cache)
        assert len(sp.basis) == 2

    def test_corrupt_file_ignored(self, tmp_path):
        cache = Cache(tmp_path)
        cache.path(2, "basis").parent.mkdir(parents=True, exist_ok=True)
        cache.path(2, "basis").write_text("{not json")
        assert cache.load(2, "basis") is None

    def test_disabled_cache_writes_nothing(self, tmp_path):
        cache = Cache(tmp_path, enabled=False)
        GraphSpace(2, cache).dimension()
        assert cache.status() == []

    def test_clear(self, tmp_path):
        cache = Cache(tmp_path)
        GraphSpace(2, cache).basis
        assert cache.clear() == 2
        assert cache.status() == []


class TestParallelRank:
    def test_jobs_match_serial(self):
        sp = space(3)
        serial = sp.dimension(jobs=1)
        assert sp.dimension(jobs=2) == serial
