"""Labelled trivalent multigraphs: validation, reduction, contraction, arrows.

A graph on 2k vertices carries 3k labelled edges (the list position is the
label).  Loops and parallel edges are allowed; loops contribute 2 to the
degree of their vertex.  Reduction sends a labelled graph to its class under
relabelling: swapping two edge labels flips the sign, swapping two vertex
labels keeps it, and a class is zero exactly when some automorphism induces
an odd permutation of the edge labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .canon import CanonResult, canonicalize, close_group, perm_parity


class GraphError(Exception):
    """Base class for graph-domain errors."""


class NonTrivalentError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


class WrongEdgeCountError(GraphError):
    pass


class LoopContractionError(GraphError):
    pass


@dataclass(frozen=True)
class LabelledTrivalentGraph:
    """Connected trivalent multigraph; edge-list position is the edge label."""

    num_vertices: int
    edges: tuple

    @property
    def k(self) -> int:
        return self.num_vertices // 2

    def degree(self, v: int) -> int:
        d = 0
        for a, b in self.edges:
            d += (a == v) + (b == v)
        return d

    def to_json(self) -> dict:
        return {"vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "LabelledTrivalentGraph":
        return validate(int(data["vertices"]), [tuple(e) for e in data["edges"]])


def _connected(num_vertices: int, edges) -> bool:
    if num_vertices == 0:
        return False
    adj: list = [[] for _ in range(num_vertices)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == num_vertices


def validate(num_vertices: int, edges) -> LabelledTrivalentGraph:
    """Check degrees, connectivity and the edge count; return the graph."""
    edges = tuple((int(u), int(v)) for u, v in edges)
    if num_vertices <= 0 or num_vertices % 2 != 0:
        raise NonTrivalentError(f"vertex count {num_vertices} is not a positive even number")
    for u, v in edges:
        if not (0 <= u < num_vertices and 0 <= v < num_vertices):
            raise NonTrivalentError(f"edge ({u},{v}) out of range")
    if len(edges) != 3 * num_vertices // 2:
        raise WrongEdgeCountError(
            f"expected {3 * num_vertices // 2} edges for {num_vertices} vertices, got {len(edges)}"
        )
    g = LabelledTrivalentGraph(num_vertices, edges)
    for v in range(num_vertices):
        if g.degree(v) != 3:
            raise NonTrivalentError(f"vertex {v} has degree {g.degree(v)}")
    if not _connected(num_vertices, edges):
        raise DisconnectedError("graph is not connected")
    return g


@dataclass(frozen=True)
class GraphClass:
    """Reduction of a labelled graph: canonical key plus sign, or zero."""

    key: str
    sign: int | None

    @property
    def is_zero(self) -> bool:
        return self.sign is None


@dataclass(frozen=True)
class Automorphism:
    """Compatible pair of a vertex permutation and an edge permutation."""

    vertex_perm: tuple
    edge_perm: tuple

    @property
    def edge_parity(self) -> int:
        return perm_parity(self.edge_perm)


def canonical_key(num_vertices: int, pairs) -> str:
    return "cub:%d:" % num_vertices + ",".join("%d-%d" % p for p in sorted(pairs))


def _canon(g: LabelledTrivalentGraph) -> CanonResult:
    return canonicalize(g.num_vertices, g.edges)


def _canonical_pairs(g: LabelledTrivalentGraph, perm) -> list:
    out = []
    for u, v in g.edges:
        a, b = perm[u], perm[v]
        out.append((a, b) if a <= b else (b, a))
    return out


def _has_parallel(pairs) -> bool:
    seen = set()
    for p in pairs:
        if p[0] != p[1] and p in seen:
            return True
        seen.add(p)
    return False


def _induced_edge_perm(edges, pair_to_idx, phi):
    out = [0] * len(edges)
    for i, (u, v) in enumerate(edges):
        a, b = phi[u], phi[v]
        out[i] = pair_to_idx[(a, b) if a <= b else (b, a)]
    return tuple(out)


def reduce(g: LabelledTrivalentGraph) -> GraphClass:
    """Canonical key plus the sign of the edge relabelling, or zero.

    Zero happens exactly when some automorphism permutes the edge labels
    oddly: any parallel pair gives an odd swap outright, and otherwise the
    parity of the edge permutation induced by each vertex automorphism
    generator decides (parity is multiplicative, so generators suffice).
    """
    res = _canon(g)
    pairs = _canonical_pairs(g, res.perm)
    key = canonical_key(g.num_vertices, pairs)
    if _has_parallel(pairs):
        return GraphClass(key, None)
    pair_to_idx = {}
    for i, (u, v) in enumerate(g.edges):
        pair_to_idx[(u, v) if u <= v else (v, u)] = i
    for phi in res.aut_generators:
        if perm_parity(_induced_edge_perm(g.edges, pair_to_idx, phi)) < 0:
            return GraphClass(key, None)
    order = sorted(range(len(pairs)), key=lambda i: pairs[i])
    return GraphClass(key, perm_parity(order))


def canonical_representative(g: LabelledTrivalentGraph) -> LabelledTrivalentGraph:
    """The same class with canonical vertex labels and sorted edge list."""
    res = _canon(g)
    return LabelledTrivalentGraph(g.num_vertices, tuple(sorted(_canonical_pairs(g, res.perm))))


def automorphisms(g: LabelledTrivalentGraph):
    """Full automorphism group as (list, |Aut|, |Aut_e|, |Aut_v|).

    Aut_e (vertex-fixing automorphisms) permutes parallel classes only; a
    loop has no flip of its own.  |Aut| = |Aut_e| * |Aut_v| by construction.
    """
    res = _canon(g)
    vgroup = close_group(g.num_vertices, res.aut_generators)
    classes: dict = {}
    for i, (u, v) in enumerate(g.edges):
        classes.setdefault((u, v) if u <= v else (v, u), []).append(i)
    class_pairs = sorted(classes)
    aut_e = 1
    for p in class_pairs:
        aut_e *= _factorial(len(classes[p]))
    out = []
    for phi in vgroup:
        targets = []
        for p in class_pairs:
            a, b = phi[p[0]], phi[p[1]]
            targets.append(classes[(a, b) if a <= b else (b, a)])
        for assignment in itertools.product(
            *[itertools.permutations(t) for t in targets]
        ):
            eperm = [0] * len(g.edges)
            for p, images in zip(class_pairs, assignment):
                for src, dst in zip(classes[p], images):
                    eperm[src] = dst
            out.append(Automorphism(phi, tuple(eperm)))
    assert len(out) == aut_e * len(vgroup)
    return out, len(out), aut_e, len(vgroup)


def iso_sign(g: LabelledTrivalentGraph, h: LabelledTrivalentGraph):
    """None if not isomorphic; 0 if the common class is zero; else the
    relative sign of the edge relabelling carrying g to h."""
    rg, rh = reduce(g), reduce(h)
    if rg.key != rh.key:
        return None
    if rg.is_zero:
        return 0
    return rg.sign * rh.sign


@dataclass(frozen=True)
class FourValentGraph:
    """Multigraph with one 4-valent hub, the rest trivalent.

    tagging lists the hub's four half-edges as (edge_label, end) pairs in a
    fixed order; end 0/1 names the first/second entry of the stored pair.
    """

    num_vertices: int
    edges: tuple
    hub: int
    tagging: tuple


def half_edges_at(edges, v, skip=None):
    out = []
    for i, (a, b) in enumerate(edges):
        if i == skip:
            continue
        if a == v:
            out.append((i, 0))
        if b == v:
            out.append((i, 1))
    return out


def contract_edge(g: LabelledTrivalentGraph, e: int) -> FourValentGraph:
    """Contract the non-loop edge e, merging its endpoints into a 4-valent hub.

    The tagging lists the two stubs formerly at the lower-labelled endpoint
    first (in edge-label order), then the two formerly at the other endpoint.
    """
    if not (0 <= e < len(g.edges)):
        raise GraphError(f"no edge {e}")
    a, b = g.edges[e]
    if a == b:
        raise LoopContractionError(f"edge {e} is a loop")
    lo, hi = (a, b) if a < b else (b, a)
    stubs = half_edges_at(g.edges, lo, skip=e) + half_edges_at(g.edges, hi, skip=e)

    def vmap(w):
        if w == hi:
            return lo
        return w - 1 if w > hi else w

    new_edges = []
    for i, (u, v) in enumerate(g.edges):
        if i == e:
            continue
        new_edges.append((vmap(u), vmap(v)))
    new_tagging = tuple((i - 1 if i > e else i, end) for i, end in stubs)
    return FourValentGraph(g.num_vertices - 1, tuple(new_edges), lo, new_tagging)


# The three splittings of a 4-valent hub pair the tagged stubs as
# {1,2|3,4}, {1,3|2,4}, {1,4|2,3}.  Because reduce() already charges a sign
# for every edge-label transposition, the classical alternating form of the
# triple relation becomes a plain sum here: the middle splitting's minus is
# carried by the class signs themselves.
IHX_PAIRINGS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
IHX_COEFFS = (1, 1, 1)


def ihx_expansions(c: FourValentGraph, new_edge_label: int):
    """The three trivalent expansions of the hub with their coefficients.

    The hub keeps its index and takes the first pair of stubs; the second
    pair moves to a fresh vertex appended at the end; the new edge joining
    them is inserted at new_edge_label.  Vertex labels never affect signs.
    """
    out = []
    w = c.num_vertices
    for coeff, pairing in zip(IHX_COEFFS, IHX_PAIRINGS):
        edges = [list(e) for e in c.edges]
        for slot in pairing[2:]:
            ei, end = c.tagging[slot]
            edges[ei][end] = w
        edges = [tuple(e) for e in edges]
        edges.insert(new_edge_label, (c.hub, w))
        out.append((coeff, validate(c.num_vertices + 1, edges)))
    return out


@dataclass(frozen=True)
class ArrowGraph:
    """Trivalent graph with one direction per edge; no vertex is a source
    or a sink (a loop supplies its vertex with both an inflow and an
    outflow)."""

    graph: LabelledTrivalentGraph
    directions: tuple

    def out_in_counts(self, v: int):
        out = inn = 0
        for t, h in self.directions:
            if t == v:
                out += 1
            if h == v:
                inn += 1
        return out, inn


def make_arrow(g: LabelledTrivalentGraph, directions) -> ArrowGraph:
    directions = tuple((int(t), int(h)) for t, h in directions)
    if len(directions) != len(g.edges):
        raise GraphError("one direction per edge required")
    for (t, h), (u, v) in zip(directions, g.edges):
        if {t, h} != {u, v}:
            raise GraphError(f"direction ({t},{h}) does not match edge ({u},{v})")
    a = ArrowGraph(g, directions)
    for v in range(g.num_vertices):
        out, inn = a.out_in_counts(v)
        if out == 0 or inn == 0:
            raise GraphError(f"vertex {v} is a source or sink")
    return a


def find_arrow_orientation(g: LabelledTrivalentGraph) -> ArrowGraph:
    """First edge orientation (in label order, as-stored direction first)
    leaving every vertex with at least one outgoing and one incoming end."""
    n = g.num_vertices
    m = len(g.edges)
    remaining = [g.degree(v) for v in range(n)]
    out = [0] * n
    inn = [0] * n
    chosen: list = []

    def feasible(v):
        return out[v] + remaining[v] >= 1 and inn[v] + remaining[v] >= 1

    def place(i):
        if i == m:
            return all(out[v] >= 1 and inn[v] >= 1 for v in range(n))
        u, v = g.edges[i]
        options = [(u, v)] if u == v else [(u, v), (v, u)]
        for t, h in options:
            chosen.append((t, h))
            out[t] += 1
            inn[h] += 1
            remaining[u] -= 1
            remaining[v] -= 1  # a loop spends both of its ends here
            if feasible(u) and feasible(v) and place(i + 1):
                return True
            chosen.pop()
            out[t] -= 1
            inn[h] -= 1
            remaining[u] += 1
            remaining[v] += 1
        return False

    if not place(0):
        raise GraphError("no source/sink-free orientation exists")
    return make_arrow(g, chosen)


def all_arrow_orientations(g: LabelledTrivalentGraph):
    """Every valid edge orientation, in deterministic order."""
    m = len(g.edges)
    results = []
    for bits in itertools.product(*[(0,) if u == v else (0, 1) for u, v in g.edges]):
        dirs = []
        for flip, (u, v) in zip(bits, g.edges):
            dirs.append((v, u) if flip else (u, v))
        try:
            results.append(make_arrow(g, dirs))
        except GraphError:
            continue
    assert len(results) > 0
    return results


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
