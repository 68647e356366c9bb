"""The span of trivalent graph classes modulo the local triple relation.

For each k the space is spanned by isomorphism classes of connected
trivalent multigraphs on 2k vertices, with classes whose automorphisms act
oddly on edge labels already zero.  Contracting any non-loop edge produces a
graph with one 4-valent hub; its three trivalent splittings, weighted
(+1, -1, +1), give one relation row per hub graph.  Dimensions come from
modular ranks at several large random primes, cross-checked exactly at
small k by the tests.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .cache import Cache
from .canon import canonicalize
from .graphs import (
    FourValentGraph,
    LabelledTrivalentGraph,
    canonical_key,
    canonical_representative,
    contract_edge,
    half_edges_at,
    ihx_expansions,
    reduce,
    validate,
)
from .linalg import exact_rref, gen_primes, rank_mod_p, reduce_vector


class PrimeDisagreementError(Exception):
    """Modular ranks kept disagreeing across retries."""


DEFAULT_SEED = 74207281
DEFAULT_PRIME_COUNT = 3


# partitions of s into parts <= 3; a part is one fresh vertex's multiplicity
_PARTITIONS = {
    0: ((),),
    1: ((1,),),
    2: ((2,), (1, 1)),
    3: ((3,), (2, 1), (1, 1, 1)),
}


def _distributions(total: int, caps):
    """All ways to hand at most `total` stubs to slots with capacities."""
    if not caps:
        yield ()
        return
    first = caps[0]
    for m in range(min(first, total) + 1):
        for rest in _distributions(total - m, caps[1:]):
            yield (m,) + rest


def _degrees(t, edges):
    deg = [0] * t
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def _dead_or_final(t, edges, deg, n):
    """(is_dead, is_final) for a partial state on t touched vertices."""
    parent = list(range(t))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    comps: dict = {}
    for v in range(t):
        comps.setdefault(find(v), []).append(v)
    complete_comps = sum(1 for vs in comps.values() if all(deg[v] == 3 for v in vs))
    if complete_comps == 0:
        return False, False
    if len(comps) == 1 and t == n:
        return False, True
    # a finished component can never join the rest
    return True, False


def enumerate_graphs(k: int):
    """One labelled representative per isomorphism class of connected
    trivalent multigraphs on 2k vertices.

    Grows partial graphs by completing one deficient vertex at a time
    (largest degree first, smallest index on ties), deduplicating partial
    states by canonical form.  Untouched vertices are interchangeable, so a
    state is just the graph on the touched ones.
    """
    n = 2 * k
    finals = []
    start = (1, ())
    seen = {(1, canonicalize(1, ()).enc)}
    stack = [start]
    while stack:
        t, edges = stack.pop()
        deg = _degrees(t, edges)
        deficient = [v for v in range(t) if deg[v] < 3]
        if not deficient:
            dead, final = _dead_or_final(t, edges, deg, n)
            if final:
                finals.append(validate(n, edges))
            continue
        v = max(deficient, key=lambda u: (deg[u], -u))
        need = 3 - deg[v]
        others = [u for u in deficient if u != v]
        caps = [3 - deg[u] for u in others]
        r = n - t
        for loops in (0, 1) if need >= 2 else (0,):
            s = need - 2 * loops
            for dist in _distributions(s, caps):
                s_fresh = s - sum(dist)
                for part in _PARTITIONS[s_fresh]:
                    if len(part) > r:
                        continue
                    new_edges = list(edges)
                    if loops:
                        new_edges.append((v, v))
                    for u, m in zip(others, dist):
                        a, b = (u, v) if u < v else (v, u)
                        new_edges.extend([(a, b)] * m)
                    nt = t
                    for m in part:
                        new_edges.extend([(v, nt)] * m)
                        nt += 1
                    ndeg = _degrees(nt, new_edges)
                    stubs_left = sum(3 - d for d in ndeg) + 3 * (n - nt)
                    if stubs_left % 2:
                        continue
                    dead, final = _dead_or_final(nt, new_edges, ndeg, n)
                    if dead:
                        continue
                    key = (nt, canonicalize(nt, new_edges).enc)
                    if key in seen:
                        continue
                    seen.add(key)
                    stack.append((nt, tuple(new_edges)))
    return finals


def classify(graphs):
    """Split labelled graphs into (signed class reps sorted by key, zero keys)."""
    signed: dict = {}
    zeros = set()
    for g in graphs:
        r = reduce(g)
        if r.is_zero:
            zeros.add(r.key)
        elif r.key not in signed:
            signed[r.key] = canonical_representative(g)
    reps = [signed[key] for key in sorted(signed)]
    return reps, frozenset(zeros)


def _canonical_four(c: FourValentGraph) -> FourValentGraph:
    """Relabel a hub graph canonically; the tagging is the hub's stubs in
    (edge label, end) order of the sorted canonical edge list."""
    res = canonicalize(c.num_vertices, c.edges)
    perm = res.perm
    pairs = []
    for u, v in c.edges:
        a, b = perm[u], perm[v]
        pairs.append((a, b) if a <= b else (b, a))
    pairs.sort()
    hub = perm[c.hub]
    tagging = tuple(half_edges_at(pairs, hub))
    return FourValentGraph(c.num_vertices, tuple(pairs), hub, tagging)


def _four_key(c: FourValentGraph) -> str:
    return "hub:%d:" % c.num_vertices + ",".join("%d-%d" % p for p in c.edges)


class GraphSpace:
    """All classes at one k: basis, relation rows, rank, reduction."""

    def __init__(self, k: int, cache: Cache | None = None):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k = k
        self._cache = cache
        self._basis = None
        self._zeros = None
        self._rows = None
        self._rref = None
        self._index = None

    # -- basis ------------------------------------------------------------

    def _load_classes(self) -> bool:
        if self._cache is None:
            return False
        basis = self._cache.load(self.k, "basis")
        zeros = self._cache.load(self.k, "zeros")
        if basis is None or zeros is None:
            return False
        self._basis = tuple(
            LabelledTrivalentGraph(g["vertices"], tuple(tuple(e) for e in g["edges"]))
            for g in basis
        )
        self._zeros = frozenset(zeros)
        return True

    def _ensure_classes(self):
        if self._basis is not None:
            return
        if self._load_classes():
            return
        reps, zeros = classify(enumerate_graphs(self.k))
        self._basis = tuple(reps)
        self._zeros = zeros
        if self._cache is not None:
            self._cache.store(self.k, "basis", [g.to_json() for g in reps])
            self._cache.store(self.k, "zeros", sorted(zeros))

    @property
    def basis(self):
        self._ensure_classes()
        return self._basis

    @property
    def zero_keys(self):
        self._ensure_classes()
        return self._zeros

    @property
    def num_classes(self) -> int:
        return len(self.basis) + len(self.zero_keys)

    def _key_index(self):
        if self._index is None:
            self._index = {reduce(g).key: i for i, g in enumerate(self.basis)}
        return self._index

    # -- vectors ----------------------------------------------------------

    def class_vector(self, g: LabelledTrivalentGraph) -> dict:
        """Sparse coefficient vector of the class of a labelled graph."""
        if g.k != self.k:
            raise ValueError(f"graph has {g.num_vertices} vertices, space expects {2 * self.k}")
        r = reduce(g)
        if r.is_zero:
            return {}
        idx = self._key_index()
        if r.key not in idx:
            raise ValueError("graph class missing from the enumerated basis")
        return {idx[r.key]: r.sign}

    # -- relations ----------------------------------------------------------

    def _expansion_row(self, four: FourValentGraph) -> dict:
        row: dict = {}
        for coeff, h in ihx_expansions(four, len(four.edges)):
            for i, v in self.class_vector(h).items():
                row[i] = row.get(i, 0) + coeff * v
        return {i: v for i, v in row.items() if v}

    def relation_rows(self):
        """One row per contracted hub class, zero rows dropped."""
        if self._rows is not None:
            return self._rows
        if self._cache is not None:
            data = self._cache.load(self.k, "relations")
            if data is not None:
                self._rows = [
                    {int(c): v for c, v in zip(row["cols"], row["vals"])} for row in data
                ]
                return self._rows
        rows = []
        seen = set()
        for g in self.basis:
            for e, (u, v) in enumerate(g.edges):
                if u == v:
                    continue
                four = _canonical_four(contract_edge(g, e))
                fkey = _four_key(four)
                if fkey in seen:
                    continue
                seen.add(fkey)
                row = self._expansion_row(four)
                if row:
                    rows.append(row)
        self._rows = rows
        if self._cache is not None:
            payload = [
                {"cols": sorted(r), "vals": [r[c] for c in sorted(r)]} for r in rows
            ]
            self._cache.store(self.k, "relations", payload)
        return rows

    # -- rank and dimension -------------------------------------------------

    def dimension(
        self,
        primes: int = DEFAULT_PRIME_COUNT,
        seed: int = DEFAULT_SEED,
        jobs: int = 1,
    ) -> int:
        rows = self.relation_rows()
        if not rows:
            return len(self.basis)
        for attempt in range(3):
            ps = gen_primes(primes, seed + attempt)
            if jobs > 1:
                with ProcessPoolExecutor(max_workers=jobs) as pool:
                    ranks = list(pool.map(_rank_task, [(rows, p) for p in ps]))
            else:
                ranks = [rank_mod_p(rows, p) for p in ps]
            if len(set(ranks)) == 1:
                return len(self.basis) - ranks[0]
        raise PrimeDisagreementError(f"ranks still disagree after retries: {ranks}")

    def exact_dimension(self) -> int:
        """Dimension via fraction-exact elimination; slower, used as a check."""
        from .linalg import exact_rank

        return len(self.basis) - exact_rank(self.relation_rows())

    # -- normal form ----------------------------------------------------------

    def _ensure_rref(self):
        if self._rref is not None:
            return self._rref
        if self._cache is not None:
            data = self._cache.load(self.k, "rref")
            if data is not None:
                self._rref = {
                    int(piv): {
                        int(c): Fraction(v) for c, v in zip(row["cols"], row["vals"])
                    }
                    for piv, row in data.items()
                }
                return self._rref
        self._rref = exact_rref(self.relation_rows())
        if self._cache is not None:
            payload = {
                str(piv): {
                    "cols": sorted(row),
                    "vals": [str(row[c]) for c in sorted(row)],
                }
                for piv, row in self._rref.items()
            }
            self._cache.store(self.k, "rref", payload)
        return self._rref

    def normal_form(self, vec: dict) -> dict:
        """Residual of a coefficient vector against the relation span.

        Linear and idempotent; vanishes exactly on combinations of relation
        rows, so equal normal forms mean equal classes in the quotient.
        """
        return reduce_vector(vec, self._ensure_rref())

    def reduce_graph(self, g: LabelledTrivalentGraph) -> dict:
        return self.normal_form(self.class_vector(g))


def _rank_task(args):
    rows, p = args
    return rank_mod_p(rows, p)


def dimension(k: int, cache: Cache | None = None, **kw) -> int:
    return GraphSpace(k, cache).dimension(**kw)
