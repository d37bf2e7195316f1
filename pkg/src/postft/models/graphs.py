"""One-dimensional bordisms as finite graphs.

Every component is an arc between two boundary vertices or a cycle.
Boundary vertices have degree one and interior vertices degree two; a
cycle of length two is a pair of parallel edges.  Closed objects are
point counts and fields on them are tuples indexed by boundary position.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from operator import itemgetter

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import MultiGraphMatcher

from ..engine import (
    ActionSystem,
    BordismModel,
    BoundaryMismatch,
    ClosedHomeo,
    EngineError,
    FieldsSystem,
)
from ..moncat import GridMaxMonoid, StrictMonoidalCategory, f2_category
from ..semiring import parse_number, render_number


class InvalidGraph(EngineError):
    pass


@dataclass(frozen=True)
class Graph1Bordism:
    n: int
    edges: tuple
    incoming: tuple = ()
    outgoing: tuple = ()

    def __post_init__(self):
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "incoming", tuple(self.incoming))
        object.__setattr__(self, "outgoing", tuple(self.outgoing))
        self._validate()

    def _validate(self):
        degree = Counter()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraph(f"edge {(u, v)} leaves the vertex range")
            if u == v:
                raise InvalidGraph("loops are not allowed")
            degree[u] += 1
            degree[v] += 1
        boundary = self.incoming + self.outgoing
        if len(set(boundary)) != len(boundary):
            raise InvalidGraph("boundary vertices must be distinct")
        for v in boundary:
            if not 0 <= v < self.n:
                raise InvalidGraph(f"boundary vertex {v} is not a vertex")
            if degree[v] != 1:
                raise InvalidGraph(f"boundary vertex {v} has degree {degree[v]}")
        bset = set(boundary)
        for v in range(self.n):
            if v not in bset and degree[v] != 2:
                raise InvalidGraph(f"interior vertex {v} has degree {degree[v]}")

    @cached_property
    def components(self) -> list[tuple[int, ...]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        groups: dict = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])

    @cached_property
    def neighbours(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def to_json(self):
        return {
            "vertices": list(range(self.n)),
            "edges": [list(e) for e in self.edges],
            "in": list(self.incoming),
            "out": list(self.outgoing),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Graph1Bordism":
        try:
            labels = doc.get("vertices")
            if labels is None:
                seen = [v for e in doc.get("edges", []) for v in e]
                labels = sorted(set(seen) | set(doc.get("in", [])) | set(doc.get("out", [])), key=repr)
            index = {v: i for i, v in enumerate(labels)}
            return cls(
                len(labels),
                tuple((index[u], index[v]) for u, v in doc.get("edges", [])),
                tuple(index[v] for v in doc.get("in", [])),
                tuple(index[v] for v in doc.get("out", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidGraph):
                raise
            raise InvalidGraph(f"malformed graph: {exc}") from exc


@dataclass(frozen=True)
class GraphHomeo:
    source: Graph1Bordism
    target: Graph1Bordism
    vmap: tuple  # vertex v of source goes to vmap[v]


def glue_map(W1: Graph1Bordism, W2: Graph1Bordism) -> list[int]:
    """Where each vertex of ``W2`` lands in the glued graph."""
    if len(W1.outgoing) != len(W2.incoming):
        raise BoundaryMismatch(
            f"cannot glue {len(W1.outgoing)} outgoing points to {len(W2.incoming)} incoming"
        )
    seam = {v: W1.outgoing[i] for i, v in enumerate(W2.incoming)}
    out, fresh = [], W1.n
    for v in range(W2.n):
        if v in seam:
            out.append(seam[v])
        else:
            out.append(fresh)
            fresh += 1
    return out


def relabel(W: Graph1Bordism, perm: list[int]) -> Graph1Bordism:
    return Graph1Bordism(
        W.n,
        tuple((perm[u], perm[v]) for u, v in W.edges),
        tuple(perm[v] for v in W.incoming),
        tuple(perm[v] for v in W.outgoing),
    )


def random_graph(rng: random.Random, n_in: int, n_out: int, max_edges: int = 8) -> Graph1Bordism:
    """Random arcs pairing the boundary points, plus random cycles."""
    ends = [("in", i) for i in range(n_in)] + [("out", j) for j in range(n_out)]
    if len(ends) % 2:
        raise BoundaryMismatch("an odd number of boundary points cannot bound arcs")
    rng.shuffle(ends)
    arcs = [ends[i : i + 2] for i in range(0, len(ends), 2)]
    budget = max_edges - len(arcs)
    if budget < 0:
        raise BoundaryMismatch("too many boundary points for the edge budget")
    slot = {}
    n = 0
    for end in sorted(ends):
        slot[end] = n
        n += 1
    edges = []
    for a, b in arcs:
        extra = rng.randint(0, min(2, budget))
        budget -= extra
        chain = [slot[a]] + list(range(n, n + extra)) + [slot[b]]
        n += extra
        edges.extend(zip(chain, chain[1:]))
    while budget >= 2 and rng.random() < 0.35:
        length = rng.randint(2, min(4, budget))
        budget -= length
        cyc = list(range(n, n + length))
        n += length
        edges.extend(zip(cyc, cyc[1:] + cyc[:1]))
    W = Graph1Bordism(
        n,
        tuple(edges),
        tuple(slot[("in", i)] for i in range(n_in)),
        tuple(slot[("out", j)] for j in range(n_out)),
    )
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(W, perm)


class GraphModel(BordismModel):
    empty_closed = 0

    def __init__(self, max_edges: int = 8, max_points: int = 2):
        self.max_edges = max_edges
        self.max_points = max_points

    def incoming(self, W):
        return len(W.incoming)

    def outgoing(self, W):
        return len(W.outgoing)

    def closed_union(self, M, N):
        return M + N

    def empty_bordism(self):
        return Graph1Bordism(0, ())

    def union(self, W1, W2):
        k = W1.n
        return Graph1Bordism(
            W1.n + W2.n,
            W1.edges + tuple((u + k, v + k) for u, v in W2.edges),
            W1.incoming + tuple(v + k for v in W2.incoming),
            W1.outgoing + tuple(v + k for v in W2.outgoing),
        )

    def glue(self, W1, W2):
        m = glue_map(W1, W2)
        n = W1.n + W2.n - len(W2.incoming)
        return Graph1Bordism(
            n,
            W1.edges + tuple((m[u], m[v]) for u, v in W2.edges),
            W1.incoming,
            tuple(m[v] for v in W2.outgoing),
        )

    def cylinder(self, M):
        return Graph1Bordism(2 * M, tuple((i, M + i) for i in range(M)), range(M), range(M, 2 * M))

    def cup(self, M):
        """From nothing to two copies of ``M``, point ``i`` joined to point ``M + i``."""
        return Graph1Bordism(2 * M, tuple((i, M + i) for i in range(M)), (), range(2 * M))

    def cap(self, M):
        return Graph1Bordism(2 * M, tuple((i, M + i) for i in range(M)), range(2 * M), ())

    def _nx(self, W):
        G = nx.MultiGraph()
        role = {v: "in" for v in W.incoming} | {v: "out" for v in W.outgoing}
        for v in range(W.n):
            G.add_node(v, role=role.get(v, "interior"))
        G.add_edges_from(W.edges)
        return G

    def isomorphisms(self, W1, W2, limit: int = 5000) -> list[GraphHomeo]:
        """Graph isomorphisms carrying incoming to incoming and outgoing to outgoing."""
        if (W1.n, len(W1.edges), len(W1.incoming), len(W1.outgoing)) != (
            W2.n, len(W2.edges), len(W2.incoming), len(W2.outgoing)
        ):
            return []
        matcher = MultiGraphMatcher(
            self._nx(W1), self._nx(W2), node_match=lambda a, b: a["role"] == b["role"]
        )
        out = []
        for mapping in matcher.isomorphisms_iter():
            out.append(GraphHomeo(W1, W2, tuple(mapping[v] for v in range(W1.n))))
            if len(out) >= limit:
                break
        return out

    def boundary_homeos(self, phi: GraphHomeo):
        src, tgt, vmap = phi.source, phi.target, phi.vmap
        pos_in = {v: i for i, v in enumerate(tgt.incoming)}
        pos_out = {v: i for i, v in enumerate(tgt.outgoing)}
        k_in, k_out = len(src.incoming), len(src.outgoing)
        return (
            ClosedHomeo(k_in, k_in, tuple(pos_in[vmap[v]] for v in src.incoming)),
            ClosedHomeo(k_out, k_out, tuple(pos_out[vmap[v]] for v in src.outgoing)),
        )

    def compose_homeos(self, phi: GraphHomeo, psi: GraphHomeo) -> GraphHomeo:
        """``psi`` after ``phi``."""
        return GraphHomeo(phi.source, psi.target, tuple(psi.vmap[v] for v in phi.vmap))

    def closed_homeomorphisms(self, M, N):
        if M != N:
            return []
        return [ClosedHomeo(M, N, p) for p in permutations(range(M))]

    def closed_identity(self, M):
        return ClosedHomeo(M, M, tuple(range(M)))

    def random_closed(self, rng):
        return rng.randint(0, self.max_points)

    def _counts(self, rng, parity_with: int | None = None) -> int:
        k = rng.randint(0, self.max_points)
        if parity_with is not None and (k + parity_with) % 2:
            k = k + 1 if k < self.max_points else k - 1
        return k

    def random_bordism(self, rng, incoming=None, outgoing=None, max_edges=None):
        m = self._counts(rng) if incoming is None else incoming
        n = self._counts(rng, m) if outgoing is None else outgoing
        return random_graph(rng, m, n, max_edges or self.max_edges)

    def random_glue_pair(self, rng):
        half = self.max_edges // 2
        m = self._counts(rng)
        k = self._counts(rng, m)
        p = self._counts(rng, k)
        return random_graph(rng, m, k, half), random_graph(rng, k, p, half)

    def random_union_pair(self, rng):
        half = self.max_edges // 2
        return self.random_bordism(rng, max_edges=half), self.random_bordism(rng, max_edges=half)

    def random_copy(self, rng, W):
        perm = list(range(W.n))
        rng.shuffle(perm)
        V = relabel(W, perm)
        ins, outs = list(V.incoming), list(V.outgoing)
        rng.shuffle(ins)
        rng.shuffle(outs)
        return Graph1Bordism(V.n, V.edges, tuple(ins), tuple(outs))

    def random_coboundary(self, rng, M):
        return random_graph(rng, 0, M, self.max_edges)

    def bordism_from_json(self, doc):
        return Graph1Bordism.from_json(doc)

    def bordism_to_json(self, W):
        return W.to_json()

    def closed_from_json(self, doc):
        return int(doc)


def _picker(indices):
    """A fast ``t -> tuple(t[i] for i in indices)``."""
    indices = tuple(indices)
    if len(indices) == 0:
        return lambda t: ()
    if len(indices) == 1:
        (i,) = indices
        return lambda t: (t[i],)
    return itemgetter(*indices)


class GridValue(Fraction):
    """A rational that remembers its hash.

    Field enumeration hashes the same handful of values millions of times
    and ``Fraction.__hash__`` recomputes a modular inverse on every call.
    """

    __slots__ = ("_hash",)

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            self._hash = h = Fraction.__hash__(self)
            return h


class VertexFields(FieldsSystem):
    """Fields are vertex labelings by consecutive integers counted in grid units.

    With ``scale`` k the label ``i`` stands for the value ``i/k``; JSON
    input and output use the values.
    """

    def __init__(self, labels, scale: int = 1):
        self.values = sorted(labels)
        if self.values != list(range(self.values[0], self.values[-1] + 1)):
            raise EngineError("vertex labels must be consecutive integers")
        self.scale = scale

    def value(self, label) -> Fraction:
        return Fraction(label, self.scale)

    def closed_fields(self, M):
        return list(product(self.values, repeat=M))

    def boundary(self, W, F):
        return tuple(F[v] for v in W.incoming), tuple(F[v] for v in W.outgoing)

    def boundary_map(self, W):
        get_in, get_out = _picker(W.incoming), _picker(W.outgoing)
        return lambda F: (get_in(F), get_out(F))

    def split_closed(self, M, N, f):
        return f[:M], f[M:]

    def join_closed(self, M, N, f, g):
        return f + g

    def split_union(self, W1, W2, F):
        return F[: W1.n], F[W1.n :]

    def join_union(self, W1, W2, F1, F2):
        return F1 + F2

    def split_glue(self, W1, W2, F):
        m = glue_map(W1, W2)
        return F[: W1.n], tuple(F[m[v]] for v in range(W2.n))

    def join_glue(self, W1, W2, F1, F2):
        if any(F1[u] != F2[v] for u, v in zip(W1.outgoing, W2.incoming)):
            return None
        m = glue_map(W1, W2)
        out = list(F1) + [None] * (W2.n - len(W2.incoming))
        for v in range(W2.n):
            out[m[v]] = F2[v]
        return tuple(out)

    def pullback(self, phi: GraphHomeo, F):
        return tuple(F[w] for w in phi.vmap)

    def closed_pullback(self, phi: ClosedHomeo, f):
        return tuple(f[j] for j in phi.perm)

    def field_from_json(self, M, doc):
        labels = tuple(Fraction(parse_number(v)) * self.scale for v in doc)
        if len(labels) != M or any(t.denominator != 1 or t not in self.values for t in labels):
            raise EngineError(f"{doc!r} is not a field on {M} points")
        return tuple(int(t) for t in labels)

    def field_to_json(self, M, f):
        return [render_number(self.value(t)) for t in f]


class LocallyConstantFields(VertexFields):
    """One value per connected component."""

    def bordism_fields(self, W):
        comp_of = [0] * W.n
        for i, comp in enumerate(W.components):
            for v in comp:
                comp_of[v] = i
        for choice in product(self.values, repeat=len(W.components)):
            yield tuple(choice[c] for c in comp_of)

    def label_array(self, W) -> np.ndarray:
        """All fields on ``W`` as rows of an integer array."""
        comp_of = [0] * W.n
        for i, comp in enumerate(W.components):
            for v in comp:
                comp_of[v] = i
        column = np.array(self.values, dtype=np.int64)[:, None]
        choices = _row_product([column] * len(W.components))
        return choices[:, comp_of]


class StepFields(VertexFields):
    """Adjacent vertices differ by at most one grid step."""

    def _component_labelings(self, W, comp) -> tuple[list[int], list[tuple]]:
        """Vertices of ``comp`` in walk order and all admissible labelings of them."""
        order, seen, stack = [], {comp[0]}, [comp[0]]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in W.neighbours[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        rank = {v: i for i, v in enumerate(order)}
        earlier = [[rank[w] for w in W.neighbours[v] if rank[w] < rank[v]] for v in order]
        lo_label, hi_label = self.values[0], self.values[-1]
        partial = [()]
        for t in range(len(order)):
            grown = []
            for lab in partial:
                lo, hi = lo_label, hi_label
                for r in earlier[t]:
                    lo, hi = max(lo, lab[r] - 1), min(hi, lab[r] + 1)
                grown.extend(lab + (i,) for i in range(lo, hi + 1))
            partial = grown
        return order, partial

    def bordism_fields(self, W):
        vertices, choices = [], []
        for comp in W.components:
            order, labs = self._component_labelings(W, comp)
            vertices.extend(order)
            choices.append(labs)
        position = [0] * W.n
        for i, v in enumerate(vertices):
            position[v] = i
        arrange = _picker(position)
        for combo in product(*choices):
            yield arrange(sum(combo, ()))

    def label_array(self, W) -> np.ndarray:
        """All fields on ``W`` as rows of an integer array."""
        vertices, blocks = [], []
        for comp in W.components:
            order, labs = self._component_labelings(W, comp)
            vertices.extend(order)
            blocks.append(np.array(labs, dtype=np.int64).reshape(len(labs), len(order)))
        position = [0] * W.n
        for i, v in enumerate(vertices):
            position[v] = i
        return _row_product(blocks)[:, position]


def _row_product(blocks) -> np.ndarray:
    """Cartesian product of row sets, concatenating the chosen rows."""
    out = np.zeros((1, 0), dtype=np.int64)
    for B in blocks:
        out = np.hstack([np.repeat(out, len(B), axis=0), np.tile(B, (len(out), 1))])
    return out


class VertexAction(ActionSystem):
    """Actions of vertex labelings that can also be evaluated row-wise on an array.

    ``act_codes`` returns one index into ``morphisms`` per row.  The
    histogram then enumerates the same fields as the generic loop, only in
    bulk.
    """

    morphisms: list

    def act_codes(self, A: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def histogram(self, W, fields):
        array = getattr(fields, "label_array", None)
        if array is None:
            return super().histogram(W, fields)
        lo, base = fields.values[0], len(fields.values)
        ends = list(W.incoming) + list(W.outgoing)
        m = len(self.morphisms)
        if base ** len(ends) * m >= 2**62:
            return super().histogram(W, fields)
        A = array(W)
        keys = self.act_codes(A).astype(np.int64)
        for col in ends:
            keys = keys * base + (A[:, col] - lo)
        uniq, counts = np.unique(keys, return_counts=True)
        columns = []
        for _ in ends:
            uniq, digit = np.divmod(uniq, base)
            columns.append((digit + lo).tolist())
        columns.reverse()
        n, n_in = len(counts), len(W.incoming)
        ins = list(zip(*columns[:n_in])) if n_in else [()] * n
        outs = list(zip(*columns[n_in:])) if len(ends) > n_in else [()] * n
        morphisms = self.morphisms
        return Counter(
            {((i, o), morphisms[a]): c for i, o, a, c in zip(ins, outs, uniq.tolist(), counts.tolist())}
        )


class MaxAction(VertexAction):
    """Largest vertex value, in the grid-max monoid."""

    def __init__(self, k: int):
        self.category = GridMaxMonoid(k)
        self.table = self.morphisms = [GridValue(i, k) for i in range(k + 1)]

    def act(self, W, F):
        return self.table[max(F, default=0)]

    def act_codes(self, A):
        if A.shape[1] == 0:
            return np.zeros(len(A), dtype=np.int64)
        return A.max(axis=1)


class ZeroAvoidingAction(VertexAction):
    """``1`` when the field never vanishes, ``0`` otherwise, in {0, 1} under multiplication."""

    morphisms = ["1", "0"]

    def __init__(self):
        self.category = f2_category()

    def act(self, W, F):
        return "0" if 0 in F else "1"

    def act_codes(self, A):
        return (A == 0).any(axis=1)


class ConstantAction(VertexAction):
    def __init__(self, category: StrictMonoidalCategory):
        self.category = category
        self.value = category.unit_identity
        self.morphisms = [self.value]

    def act(self, W, F):
        return self.value

    def act_codes(self, A):
        return np.zeros(len(A), dtype=np.int64)


class CappedSumAction(ActionSystem):
    """Sum of vertex values capped at 1; deliberately not compatible with gluing."""

    def __init__(self, k: int):
        self.category = GridMaxMonoid(k)

    def act(self, W, F):
        return min(Fraction(sum(F), self.category.k), 1)


def strands_graph(interior: int = 4) -> Graph1Bordism:
    """Two parallel strands, incoming ``(p+, p-)`` to outgoing ``(q+, q-)``."""
    return _two_arcs(interior, pairs=(("in", 0, "out", 0), ("in", 1, "out", 1)))


def turnback_graph(interior: int = 4) -> Graph1Bordism:
    """An arc joining ``p+`` to ``p-`` and an arc joining ``q+`` to ``q-``."""
    return _two_arcs(interior, pairs=(("in", 0, "in", 1), ("out", 0, "out", 1)))


def _two_arcs(interior: int, pairs) -> Graph1Bordism:
    slot = {("in", 0): 0, ("in", 1): 1, ("out", 0): 2, ("out", 1): 3}
    n, edges = 4, []
    for s1, i1, s2, i2 in pairs:
        chain = [slot[(s1, i1)], *range(n, n + interior), slot[(s2, i2)]]
        n += interior
        edges.extend(zip(chain, chain[1:]))
    return Graph1Bordism(n, tuple(edges), (0, 1), (2, 3))
