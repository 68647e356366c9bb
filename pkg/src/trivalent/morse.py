"""Finite graded chain complexes, contractions, transport, split-edge graphs.

Degrees run 0..4 throughout.  Boundary matrices are integer, propagators
rational; all identities are checked with exact arithmetic.  Matrices are
dense row-major lists, entry (row=target, col=source), and shapes follow the
rank vector so zero-rank degrees work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import LabelledTrivalentGraph, validate
from .linalg import solve_exact, exact_rank

TOP_DEGREE = 4


class MorseError(Exception):
    pass


class NotAComplexError(MorseError):
    """Some composite boundary entry is nonzero; carries the first one."""

    def __init__(self, degree, row, col, value):
        self.degree, self.row, self.col, self.value = degree, row, col, value
        super().__init__(
            f"boundary composite at degree {degree} has entry {value} at ({row},{col})"
        )


class NotAcyclicError(MorseError):
    """No contraction exists; carries the offending degree and rank defect."""

    def __init__(self, degree, defect):
        self.degree, self.defect = degree, defect
        super().__init__(f"homology at degree {degree} has dimension {defect}")


class DegreeMismatchError(MorseError):
    pass


class InvalidDecorationError(MorseError):
    pass


def _zeros(rows, cols):
    return [[Fraction(0)] * cols for _ in range(rows)]


def _identity(n):
    m = _zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def _mul(a, b, rows, inner, cols):
    """a (rows x inner) times b (inner x cols); exact shapes, empty-safe."""
    out = _zeros(rows, cols)
    for i in range(rows):
        ai, oi = a[i], out[i]
        for t in range(inner):
            v = ai[t]
            if v:
                bt = b[t]
                for j in range(cols):
                    if bt[j]:
                        oi[j] += v * bt[j]
    return out


@dataclass(frozen=True)
class GradedComplex:
    """ranks[d] basis elements in degree d; boundaries[d] maps d to d-1."""

    ranks: tuple
    boundaries: dict = field(hash=False)

    def __post_init__(self):
        if len(self.ranks) != TOP_DEGREE + 1 or any(r < 0 for r in self.ranks):
            raise MorseError("ranks must be five non-negative integers")
        for d in range(1, TOP_DEGREE + 1):
            m = self.boundaries.get(d)
            if m is None:
                raise MorseError(f"missing boundary for degree {d}")
            if len(m) != self.ranks[d - 1] or any(len(row) != self.ranks[d] for row in m):
                raise MorseError(
                    f"boundary {d} must be {self.ranks[d - 1]} x {self.ranks[d]}"
                )

    def boundary(self, d: int):
        """The matrix of ∂_d, including the zero maps at both ends."""
        if d < 1 or d > TOP_DEGREE:
            return []
        return self.boundaries[d]

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "boundaries": {
                str(d): [[int(x) for x in row] for row in self.boundaries[d]]
                for d in range(1, TOP_DEGREE + 1)
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedComplex":
        ranks = tuple(int(r) for r in data["ranks"])
        bnd = {
            int(d): [[int(x) for x in row] for row in m]
            for d, m in data["boundaries"].items()
        }
        return cls(ranks, bnd)


def check_complex(c: GradedComplex) -> GradedComplex:
    """Verify ∂∘∂ = 0 in every degree; raises with the first bad entry."""
    for d in range(2, TOP_DEGREE + 1):
        prod = _mul(
            c.boundaries[d - 1],
            c.boundaries[d],
            c.ranks[d - 2],
            c.ranks[d - 1],
            c.ranks[d],
        )
        for i, row in enumerate(prod):
            for j, v in enumerate(row):
                if v:
                    raise NotAComplexError(d, i, j, v)
    return c


@dataclass(frozen=True)
class Propagator:
    """Rational g_d: degree d -> degree d+1, for d = 0..3."""

    ranks: tuple
    mats: dict = field(hash=False)

    def g(self, d: int):
        if d < 0 or d >= TOP_DEGREE:
            return []
        return self.mats[d]

    def entry(self, d: int, target: int, source: int) -> Fraction:
        return self.mats[d][target][source]

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "gs": {
                str(d): [[str(x) for x in row] for row in self.mats[d]]
                for d in range(TOP_DEGREE)
            },
        }


def _homology_defect(c: GradedComplex, d: int) -> int:
    def rank_of(deg):
        if deg < 1 or deg > TOP_DEGREE:
            return 0
        rows = [
            {j: v for j, v in enumerate(row) if v} for row in c.boundaries[deg]
        ]
        return exact_rank(rows)

    return c.ranks[d] - rank_of(d) - rank_of(d + 1)


def compute_propagator(c: GradedComplex) -> Propagator:
    """A chain contraction: ∂g + g∂ = id in every degree, or NotAcyclic.

    Solved degree by degree from the bottom; the elimination order is fixed
    and free variables are zeroed, so the answer is deterministic.
    """
    check_complex(c)
    gs: dict = {}
    prev = None  # g_{d-1}
    for d in range(TOP_DEGREE):
        rd, rup = c.ranks[d], c.ranks[d + 1]
        rhs = _identity(rd)
        if d > 0 and prev is not None:
            correction = _mul(prev, c.boundaries[d], rd, c.ranks[d - 1], rd)
            rhs = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(rhs, correction)]
        if rd == 0:
            gs[d] = _zeros(rup, 0)
            prev = gs[d]
            continue
        sol = solve_exact(c.boundaries[d + 1], rhs)
        if sol is None:
            raise NotAcyclicError(d, _homology_defect(c, d))
        gs[d] = sol
        prev = sol
    # top degree: g_3 ∂_4 = id follows from exactness; verify outright
    top = _mul(gs[3], c.boundaries[4], c.ranks[4], c.ranks[3], c.ranks[4])
    if top != _identity(c.ranks[4]):
        raise NotAcyclicError(TOP_DEGREE, _homology_defect(c, TOP_DEGREE))
    return Propagator(c.ranks, gs)


def contraction_identity_holds(c: GradedComplex, g: Propagator) -> bool:
    """Exact check of ∂_{d+1} g_d + g_{d-1} ∂_d = id for d = 0..4."""
    for d in range(TOP_DEGREE + 1):
        rd = c.ranks[d]
        total = _zeros(rd, rd)
        if d < TOP_DEGREE:
            total = _mul(c.boundaries[d + 1], g.mats[d], rd, c.ranks[d + 1], rd)
        if d > 0:
            other = _mul(g.mats[d - 1], c.boundaries[d], rd, c.ranks[d - 1], rd)
            total = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(total, other)]
        if total != _identity(rd):
            return False
    return True


def _neg_transpose(m, rows, cols):
    out = [[Fraction(0)] * rows for _ in range(cols)]
    for i in range(rows):
        for j in range(cols):
            out[j][i] = -m[i][j]
    return out


def dual_propagator(c: GradedComplex, g: Propagator):
    """Degree-reversed complex with ∂* = −∂^T and its contraction −g^T."""
    ranks = tuple(reversed(c.ranks))
    bnd = {}
    for d in range(1, TOP_DEGREE + 1):
        src = TOP_DEGREE + 1 - d  # ∂*_d is -(∂_{5-d})^T
        bnd[d] = _neg_transpose(c.boundaries[src], c.ranks[src - 1], c.ranks[src])
    dual_c = GradedComplex(ranks, bnd)
    mats = {}
    for d in range(TOP_DEGREE):
        src = TOP_DEGREE - 1 - d  # g*_d is -(g_{3-d})^T
        mats[d] = _neg_transpose(g.mats[src], c.ranks[src + 1], c.ranks[src])
    return dual_c, Propagator(ranks, mats)


@dataclass(frozen=True)
class BasisRef:
    """A basis element of a graded complex: degree 0..4 plus position."""

    degree: int
    position: int

    def __post_init__(self):
        if not (0 <= self.degree <= TOP_DEGREE) or self.position < 0:
            raise InvalidDecorationError(f"bad basis reference {self}")


@dataclass(frozen=True)
class HandleSlideEvent:
    """Elementary basis slide between two distinct same-degree elements."""

    p: BasisRef
    q: BasisRef
    sign: int

    def __post_init__(self):
        if self.p.degree != self.q.degree or self.p == self.q:
            raise MorseError("handle slides need two distinct same-degree elements")
        if self.sign not in (1, -1):
            raise MorseError("sign must be +1 or -1")


def transport(events, ranks):
    """Product of elementary matrices, one factor per event in order.

    Per degree d the result is (1 + s_1 E_{q_1 p_1}) ... (1 + s_n E_{q_n p_n})
    over the degree-d events; each factor has determinant 1, so the product
    is invertible over the integers.
    """
    ranks = tuple(ranks)
    out = {d: [[1 if i == j else 0 for j in range(ranks[d])] for i in range(ranks[d])]
           for d in range(TOP_DEGREE + 1)}
    for ev in events:
        d = ev.p.degree
        n = ranks[d]
        if ev.p.position >= n or ev.q.position >= n:
            raise MorseError(f"event {ev} is out of range for rank {n}")
        phi = out[d]
        # right-multiply by I + sign * unit(q row, p col): add sign*col_q to col_p
        col_p, col_q = ev.p.position, ev.q.position
        for i in range(n):
            phi[i][col_p] += ev.sign * phi[i][col_q]
    return out


@dataclass(frozen=True)
class CGraph:
    """Trivalent graph with some edges split into two decorated arcs.

    Splitting edge i = (u, v) inserts white endpoints: arcs (u, w_{i,0}) and
    (w_{i,1}, v).  The decoration of a split edge is a pair of basis
    references (p_i, q_i); a compact edge keeps degree 1.
    """

    underlying: LabelledTrivalentGraph
    split: tuple
    decorations: dict = field(hash=False)
    arcs: dict = field(hash=False)

    @property
    def num_black(self) -> int:
        return self.underlying.num_vertices

    @property
    def num_white(self) -> int:
        return 2 * len(self.split)

    def edge_degree(self, i: int) -> int:
        if i in self.decorations:
            p, q = self.decorations[i]
            return p.degree - q.degree
        return 1


def split_edges(g: LabelledTrivalentGraph, subset, decorations) -> CGraph:
    """Split the chosen edges into decorated arc pairs."""
    subset = tuple(sorted(set(int(i) for i in subset)))
    for i in subset:
        if not (0 <= i < len(g.edges)):
            raise InvalidDecorationError(f"no edge {i} to split")
    decs = {}
    for i in subset:
        if i not in decorations:
            raise InvalidDecorationError(f"split edge {i} lacks a decoration")
        p, q = decorations[i]
        if not isinstance(p, BasisRef) or not isinstance(q, BasisRef):
            raise InvalidDecorationError(f"decoration of edge {i} must be basis references")
        decs[i] = (p, q)
    extra = set(decorations) - set(subset)
    if extra:
        raise InvalidDecorationError(f"decorations for unsplit edges {sorted(extra)}")
    arcs = {}
    for i in subset:
        u, v = g.edges[i]
        arcs[i] = ((u, ("w", i, 0)), (("w", i, 1), v))
    return CGraph(g, subset, decs, arcs)


def close(c: CGraph) -> LabelledTrivalentGraph:
    """Rejoin every split edge by identifying its two white endpoints."""
    edges = []
    for i, (u, v) in enumerate(c.underlying.edges):
        if i in c.arcs:
            (a, w0), (w1, b) = c.arcs[i]
            # identify w0 with w1: the arc pair reconnects a to b
            edges.append((a, b))
        else:
            edges.append((u, v))
    return validate(c.underlying.num_vertices, edges)


def trace_tr_g(gs, c: CGraph):
    """(product of −g-coefficients over split edges, closed graph).

    gs maps each split edge label to the Propagator used for it; the factor
    for edge i with decoration (p, q) is −(entry of p in g(q)), which needs
    |p| = |q| + 1.
    """
    coeff = Fraction(1)
    for i in c.split:
        p, q = c.decorations[i]
        if p.degree != q.degree + 1:
            raise DegreeMismatchError(
                f"edge {i}: need degree(p) = degree(q) + 1, got {p.degree}, {q.degree}"
            )
        try:
            g = gs[i]
        except (KeyError, IndexError):
            raise InvalidDecorationError(f"no propagator for split edge {i}")
        mat = g.g(q.degree)
        if p.position >= len(mat) or (mat and q.position >= len(mat[0])):
            raise InvalidDecorationError(f"decoration of edge {i} is out of range")
        coeff *= -mat[p.position][q.position]
    return coeff, close(c)


# the two admissible vertex kinds for the counting formula
TYPE_I = "I"
TYPE_II = "II"


def surviving_indices(vertex_type: str):
    """Index tuples (inputs | outputs) whose weighted sum hits the target.

    A trivalent vertex carries three half-edge indices: inputs from {1,2,3}
    weighted 4−a, outputs from {0,1,2} weighted a, summing to 4 for type I
    and 5 for type II.  Tuples are sorted within each side and listed in a
    fixed overall order.
    """
    if vertex_type == TYPE_I:
        target = 4
    elif vertex_type == TYPE_II:
        target = 5
    else:
        raise ValueError(f"unknown vertex type {vertex_type!r}")
    out = []
    for n_in in range(4):
        n_out = 3 - n_in
        seen = set()
        for ins in _sorted_tuples((1, 2, 3), n_in):
            for outs in _sorted_tuples((0, 1, 2), n_out):
                if sum(4 - a for a in ins) + sum(outs) == target:
                    seen.add((ins, outs))
        out.extend(sorted(seen))
    return out


def _sorted_tuples(alphabet, length):
    if length == 0:
        yield ()
        return
    for i, a in enumerate(alphabet):
        for rest in _sorted_tuples(alphabet[i:], length - 1):
            yield (a,) + rest
