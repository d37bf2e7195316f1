"""Finite multisets of primes as closed zero-dimensional bordisms.

The multiset of prime factors of ``n`` is ``W(n)``; its fields are the
sub-multisets, i.e. the divisors of ``n``.  Disjoint union of multisets
is multiplication of coprime numbers.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import permutations, product

from ..engine import ActionSystem, BordismModel, BoundaryMismatch, ClosedHomeo, EngineError, FieldsSystem
from ..moncat import IntegerMonoid, trivial_category


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    if n < 1:
        raise EngineError(f"cannot factor {n}")
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == ((p, 1),)


@dataclass(frozen=True)
class Multiset:
    """A multiset of primes as sorted ``(prime, multiplicity)`` pairs."""

    items: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for p, e in self.items:
            if not is_prime(p):
                raise EngineError(f"{p} is not prime")
            if e < 0:
                raise EngineError("multiplicities are nonnegative")
            merged[p] = merged.get(p, 0) + e
        object.__setattr__(self, "items", tuple(sorted((p, e) for p, e in merged.items() if e)))

    @classmethod
    def of(cls, n: int) -> "Multiset":
        return cls(factorize(n))

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.items)

    @property
    def size(self) -> int:
        return sum(e for _, e in self.items)

    def __and__(self, other: "Multiset") -> "Multiset":
        theirs = dict(other.items)
        return Multiset(tuple((p, min(e, theirs[p])) for p, e in self.items if p in theirs))

    def __or__(self, other: "Multiset") -> "Multiset":
        mine, theirs = dict(self.items), dict(other.items)
        return Multiset(tuple((p, max(mine.get(p, 0), theirs.get(p, 0))) for p in mine | theirs))

    def __add__(self, other: "Multiset") -> "Multiset":
        return Multiset(self.items + other.items)

    def __le__(self, other: "Multiset") -> bool:
        theirs = dict(other.items)
        return all(e <= theirs.get(p, 0) for p, e in self.items)

    def to_json(self):
        return {"n": self.value, "primes": [list(i) for i in self.items]}


@dataclass(frozen=True)
class PrimeBijection:
    source: Multiset
    target: Multiset
    mapping: tuple  # sorted (p, q) pairs


class MultisetModel(BordismModel):
    empty_closed = ()

    def __init__(self, max_n: int = 200):
        self.max_n = max_n

    def incoming(self, W):
        return ()

    outgoing = incoming

    def closed_union(self, M, N):
        return ()

    def empty_bordism(self):
        return Multiset()

    def union(self, W1, W2):
        if {p for p, _ in W1.items} & {p for p, _ in W2.items}:
            raise BoundaryMismatch("multisets with a common prime are not disjoint")
        return W1 + W2

    glue = union

    def cylinder(self, M):
        return Multiset()

    cup = cap = cylinder

    def isomorphisms(self, W1, W2, limit: int = 5000):
        """Bijections of the underlying primes preserving multiplicity."""
        by_mult1, by_mult2 = {}, {}
        for p, e in W1.items:
            by_mult1.setdefault(e, []).append(p)
        for p, e in W2.items:
            by_mult2.setdefault(e, []).append(p)
        if {e: len(v) for e, v in by_mult1.items()} != {e: len(v) for e, v in by_mult2.items()}:
            return []
        mults = sorted(by_mult1)
        choices = [list(permutations(by_mult2[e])) for e in mults]
        out = []
        for combo in product(*choices):
            pairs = []
            for e, image in zip(mults, combo):
                pairs.extend(zip(by_mult1[e], image))
            out.append(PrimeBijection(W1, W2, tuple(sorted(pairs))))
            if len(out) >= limit:
                break
        return out

    def boundary_homeos(self, phi):
        e = ClosedHomeo((), (), ())
        return e, e

    def compose_homeos(self, phi, psi):
        first, second = dict(phi.mapping), dict(psi.mapping)
        return PrimeBijection(phi.source, psi.target, tuple(sorted((p, second[q]) for p, q in first.items())))

    def random_bordism(self, rng):
        return Multiset.of(rng.randint(1, self.max_n))

    def random_union_pair(self, rng):
        """A random ``n`` split into two coprime factors."""
        W = self.random_bordism(rng)
        left = tuple(i for i in W.items if rng.random() < 0.5)
        right = tuple(i for i in W.items if i not in left)
        return Multiset(left), Multiset(right)

    random_glue_pair = random_union_pair

    def random_copy(self, rng, W):
        """A multiset with the same multiplicity pattern on other primes."""
        primes = [p for p in range(2, 60) if is_prime(p)]
        rng.shuffle(primes)
        items = tuple((q, e) for q, (_, e) in zip(primes, W.items))
        return Multiset(items)

    def bordism_from_json(self, doc):
        if isinstance(doc, int):
            return Multiset.of(doc)
        if "n" in doc and "primes" not in doc:
            return Multiset.of(int(doc["n"]))
        return Multiset(tuple(tuple(i) for i in doc["primes"]))

    def bordism_to_json(self, W):
        return W.to_json()


class SubmultisetFields(FieldsSystem):
    """Fields on ``W`` are sub-multisets; the boundary is always empty."""

    def closed_fields(self, M):
        return [()]

    def bordism_fields(self, W):
        primes = [p for p, _ in W.items]
        for exps in product(*(range(e + 1) for _, e in W.items)):
            yield Multiset(tuple(zip(primes, exps)))

    def boundary(self, W, F):
        return (), ()

    def split_closed(self, M, N, f):
        return (), ()

    def join_closed(self, M, N, f, g):
        return ()

    def split_union(self, W1, W2, F):
        return F & W1, F & W2

    def join_union(self, W1, W2, F1, F2):
        return F1 + F2

    split_glue = split_union

    def join_glue(self, W1, W2, F1, F2):
        return F1 + F2

    def pullback(self, phi: PrimeBijection, F):
        back = {q: p for p, q in phi.mapping}
        return Multiset(tuple((back[q], e) for q, e in F.items))

    def closed_pullback(self, phi, f):
        return ()


class TrivialAction(ActionSystem):
    def __init__(self):
        self.category = trivial_category()

    def act(self, W, F):
        return "1"


class OmegaAction(ActionSystem):
    """Number of prime factors of the divisor, counted with multiplicity."""

    def __init__(self):
        self.category = IntegerMonoid()

    def act(self, W, F):
        return F.size


def divisor_count(n: int) -> int:
    """Independent count by trial division."""
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def omega_profile(n: int) -> list[int]:
    """How many divisors of ``n`` have each number of prime factors, by trial division."""
    counts: dict = {}
    for d in range(1, n + 1):
        if n % d == 0:
            k, m, p = 0, d, 2
            while m > 1:
                while m % p == 0:
                    m //= p
                    k += 1
                p += 1
            counts[k] = counts.get(k, 0) + 1
    return [counts.get(k, 0) for k in range(max(counts) + 1)]


def coprime_pairs(rng: random.Random, count: int, limit: int = 1000) -> list[tuple[int, int]]:
    out = []
    while len(out) < count:
        a, b = rng.randint(1, limit), rng.randint(1, limit)
        if math.gcd(a, b) == 1 and a * b <= limit * limit:
            out.append((a, b))
    return out
