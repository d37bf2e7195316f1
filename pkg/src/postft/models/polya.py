"""Finite group actions as zero-dimensional bordisms.

A bordism is a union of orbits of a finite group acting on a finite set on
the right.  Its fields are subsets of the set of pairs ``(w, g)`` with ``g``
fixing ``w``; the action counts how many pairs a field contains, saturating
at two.  The value at the middle element of the three-element monoid is
then the number of such pairs, which leads to orbit counting.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product

from ..engine import ActionSystem, BordismModel, BoundaryMismatch, ClosedHomeo, EngineError, FieldsSystem
from ..moncat import polya_category

FIELD_ENUMERATION_LIMIT = 16


def close_group(generators, degree: int) -> list[tuple[int, ...]]:
    """All products of the generating permutations, identity first."""
    ident = tuple(range(degree))
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise EngineError(f"{g!r} is not a permutation of {degree} points")
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                gh = tuple(g[h[i]] for i in range(degree))
                if gh not in seen:
                    seen.add(gh)
                    order.append(gh)
                    nxt.append(gh)
        frontier = nxt
    return [order[0]] + sorted(order[1:])


def cyclic_group(n: int) -> list[tuple[int, ...]]:
    return close_group([tuple((i + 1) % n for i in range(n))], n)


def dihedral_group(n: int) -> list[tuple[int, ...]]:
    return close_group([tuple((i + 1) % n for i in range(n)), tuple((-i) % n for i in range(n))], n)


def cycle_count(g) -> int:
    seen, cycles = set(), 0
    for i in range(len(g)):
        if i not in seen:
            cycles += 1
            while i not in seen:
                seen.add(i)
                i = g[i]
    return cycles


class GSet:
    """A finite set with a right action of a permutation group, by index."""

    def __init__(self, points, group, act):
        self.points = list(points)
        self.group = list(group)
        self._act = act
        self._index = {p: i for i, p in enumerate(self.points)}

    def act(self, w, gi: int):
        return self._act(w, self.group[gi])

    @classmethod
    def colorings(cls, group, degree: int, colors: int) -> "GSet":
        """Colorings ``w : X -> Y`` with ``(w g)(x) = w(g(x))``."""
        return cls(product(range(colors), repeat=degree), group, lambda w, g: tuple(w[g[x]] for x in range(degree)))

    @classmethod
    def base(cls, group, degree: int) -> "GSet":
        """The points themselves, acted on by inverses so the action is on the right."""
        inverse = {g: tuple(sorted(range(degree), key=lambda i: g[i])) for g in group}
        return cls(range(degree), group, lambda x, g: inverse[g][x])

    @cached_property
    def stabilizers(self) -> dict:
        return {w: tuple(i for i in range(len(self.group)) if self.act(w, i) == w) for w in self.points}

    def orbit(self, w) -> frozenset:
        return frozenset(self.act(w, i) for i in range(len(self.group)))

    @cached_property
    def orbits(self) -> list[frozenset]:
        seen, out = set(), []
        for w in self.points:
            if w not in seen:
                o = self.orbit(w)
                seen |= o
                out.append(o)
        return out

    def pairs(self, W) -> list[tuple]:
        stab = self.stabilizers
        return [(w, gi) for w in sorted(W) for gi in stab[w]]


@dataclass(frozen=True)
class EquivariantMap:
    source: frozenset
    target: frozenset
    mapping: tuple  # sorted (w, w') pairs


class PolyaModel(BordismModel):
    """Bordisms are unions of orbits of a fixed G-set; boundaries are empty."""

    empty_closed = ()

    def __init__(self, gset: GSet):
        self.gset = gset

    def incoming(self, W):
        return ()

    outgoing = incoming

    def closed_union(self, M, N):
        return ()

    def empty_bordism(self):
        return frozenset()

    def union(self, W1, W2):
        if W1 & W2:
            raise BoundaryMismatch("the two pieces overlap")
        return W1 | W2

    glue = union

    def cylinder(self, M):
        return frozenset()

    cup = cap = cylinder

    def _orbits_of(self, W) -> list[frozenset]:
        return [o for o in self.gset.orbits if o <= W]

    def orbit_type(self, orbit: frozenset) -> frozenset:
        """Orbits are equivariantly isomorphic exactly when their stabilizers agree."""
        return frozenset(self.gset.stabilizers[v] for v in orbit)

    def _by_type(self, W) -> dict:
        groups: dict = {}
        for o in self._orbits_of(W):
            groups.setdefault(self.orbit_type(o), []).append(o)
        return groups

    def isomorphisms(self, W1, W2, limit: int = 200) -> list[EquivariantMap]:
        """Equivariant bijections ``W1 -> W2``, up to ``limit`` of them."""
        gs = self.gset
        types1, types2 = self._by_type(W1), self._by_type(W2)
        if {t: len(v) for t, v in types1.items()} != {t: len(v) for t, v in types2.items()}:
            return []
        if set().union(*self._orbits_of(W1)) != set(W1) or set().union(*self._orbits_of(W2)) != set(W2):
            return []
        order = sorted(types1, key=lambda t: sorted(t))
        reps = [min(o) for t in order for o in types1[t]]
        matchings = product(*(permutations(types2[t]) for t in order))
        out = []
        for matching in matchings:
            targets = [o for group in matching for o in group]
            options = [
                [v for v in sorted(o) if gs.stabilizers[v] == gs.stabilizers[w]]
                for w, o in zip(reps, targets)
            ]
            for images in product(*options):
                pairs = {}
                for w, v in zip(reps, images):
                    for gi in range(len(gs.group)):
                        pairs[gs.act(w, gi)] = gs.act(v, gi)
                out.append(EquivariantMap(W1, W2, tuple(sorted(pairs.items()))))
                if len(out) >= limit:
                    return out
        return out

    def boundary_homeos(self, phi):
        e = ClosedHomeo((), (), ())
        return e, e

    def compose_homeos(self, phi, psi):
        first, second = dict(phi.mapping), dict(psi.mapping)
        return EquivariantMap(phi.source, psi.target, tuple(sorted((w, second[v]) for w, v in first.items())))

    def random_bordism(self, rng):
        orbs = self.gset.orbits
        return frozenset().union(*(o for o in orbs if rng.random() < 0.4))

    def random_union_pair(self, rng):
        W = self.random_bordism(rng)
        left = [o for o in self._orbits_of(W) if rng.random() < 0.5]
        W1 = frozenset().union(*left)
        return W1, W - W1

    random_glue_pair = random_union_pair

    def random_copy(self, rng, W):
        """Another union of orbits of the same types."""
        pool = self._by_type(frozenset(self.gset.points))
        for group in pool.values():
            rng.shuffle(group)
        taken = []
        for t, group in sorted(self._by_type(W).items(), key=lambda kv: sorted(kv[0])):
            taken.extend(pool[t][: len(group)])
        return frozenset().union(*taken)

    def bordism_from_json(self, doc):
        def point(w):
            return tuple(w) if isinstance(w, list) else w

        if "orbits_of" in doc:
            return frozenset().union(*(self.gset.orbit(point(w)) for w in doc["orbits_of"]))
        if doc.get("all"):
            return frozenset(self.gset.points)
        W = frozenset(point(w) for w in doc["points"])
        if not W <= set(self.gset.points):
            raise EngineError("bordism contains points outside the G-set")
        return W

    def bordism_to_json(self, W):
        return {"points": [list(w) if isinstance(w, tuple) else w for w in sorted(W)]}


class PairSubsetFields(FieldsSystem):
    """Fields on ``W`` are subsets of its stabilizer pairs."""

    def __init__(self, gset: GSet):
        self.gset = gset

    def closed_fields(self, M):
        return [()]

    def bordism_fields(self, W):
        pairs = self.gset.pairs(W)
        if len(pairs) > FIELD_ENUMERATION_LIMIT:
            raise EngineError(f"{2 ** len(pairs)} fields are too many to list")
        for r in range(len(pairs) + 1):
            for sub in combinations(pairs, r):
                yield frozenset(sub)

    def boundary(self, W, F):
        return (), ()

    def split_closed(self, M, N, f):
        return (), ()

    def join_closed(self, M, N, f, g):
        return ()

    def split_union(self, W1, W2, F):
        return frozenset(p for p in F if p[0] in W1), frozenset(p for p in F if p[0] in W2)

    def join_union(self, W1, W2, F1, F2):
        return F1 | F2

    split_glue = split_union

    def join_glue(self, W1, W2, F1, F2):
        return F1 | F2

    def pullback(self, phi: EquivariantMap, F):
        """Pairs ``(w, g)`` whose image ``(phi(w), g)`` lies in ``F``.

        Only equivariant bijections act on fields; anything else raises.
        """
        gs = self.gset
        fwd = dict(phi.mapping)
        if set(fwd) != set(phi.source) or set(fwd.values()) != set(phi.target) or len(fwd) != len(phi.target):
            raise EngineError("not a bijection between the two bordisms")
        for w in phi.source:
            for gi in range(len(gs.group)):
                if fwd[gs.act(w, gi)] != gs.act(fwd[w], gi):
                    raise EngineError(f"{w!r} -> {fwd[w]!r} does not commute with the group")
        stab = gs.stabilizers
        return frozenset((w, gi) for w in phi.source for gi in stab[w] if (fwd[w], gi) in F)

    def closed_pullback(self, phi, f):
        return ()


class PolyaAction(ActionSystem):
    """``1`` for the empty field, ``chi`` for one pair, ``mu`` for more."""

    def __init__(self, gset: GSet):
        self.category = polya_category()
        self.gset = gset

    def act(self, W, F):
        return ("1", "chi")[len(F)] if len(F) < 2 else "mu"

    def histogram(self, W, fields):
        n = len(self.gset.pairs(W))
        if n <= FIELD_ENUMERATION_LIMIT:
            return super().histogram(W, fields)
        # group the 2^n subsets by size class instead of listing them
        empty = ((), ())
        counts = Counter({(empty, "1"): 1, (empty, "chi"): n})
        if 2**n - 1 - n:
            counts[(empty, "mu")] = 2**n - 1 - n
        return counts


def orbit_count_union_find(gset: GSet) -> int:
    """Orbits via union-find over the generator action."""
    parent = {w: w for w in gset.points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for w in gset.points:
        for gi in range(len(gset.group)):
            a, b = find(w), find(gset.act(w, gi))
            if a != b:
                parent[a] = b
    return len({find(w) for w in gset.points})


def fixed_point_sum(gset: GSet) -> int:
    return sum(sum(1 for w in gset.points if gset.act(w, gi) == w) for gi in range(len(gset.group)))


def stabilizer_sum(gset: GSet) -> int:
    return sum(sum(1 for gi in range(len(gset.group)) if gset.act(w, gi) == w) for w in gset.points)


def cycle_index_sum(group, colors: int) -> int:
    return sum(colors ** cycle_count(g) for g in group)
