"""Finitely supported functions on finite ground sets with semiring values.

Products of ground sets are kept flat: the product of ``A x B`` with ``C``
has three factors and its keys are triples.  Contraction and inner products
sum over a repeated middle factor, which is matrix multiplication when all
factors are plain sets.
"""
from __future__ import annotations

import random
from itertools import product
from typing import Callable, Iterable

from .reports import LawReport, jsonable


class GroundSetMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class GroundSet:
    """A finite ordered set of hashable keys, or a flat product of such sets."""

    __slots__ = ("_keys", "_index", "factors", "name")

    def __init__(self, keys: Iterable = (), name: str | None = None):
        self._keys = tuple(keys)
        self._index = {k: i for i, k in enumerate(self._keys)}
        if len(self._index) != len(self._keys):
            raise ValueError("ground set keys must be distinct")
        self.factors: tuple[GroundSet, ...] = ()
        self.name = name

    @classmethod
    def product(cls, *sets: "GroundSet") -> "GroundSet":
        factors: list[GroundSet] = []
        for s in sets:
            factors.extend(s.factors if s.factors else (s,))
        if not 2 <= len(factors) <= 4:
            raise ShapeMismatch(f"products have 2 to 4 factors, got {len(factors)}")
        prod = cls.__new__(cls)
        prod._keys = None
        prod._index = None
        prod.factors = tuple(factors)
        prod.name = None
        return prod

    @property
    def arity(self) -> int:
        return len(self.factors) or 1

    def __contains__(self, key) -> bool:
        if self.factors:
            return (
                type(key) is tuple
                and len(key) == len(self.factors)
                and all(k in f for k, f in zip(key, self.factors))
            )
        try:
            return key in self._index
        except TypeError:
            return False

    def __iter__(self):
        if self.factors:
            return iter(product(*self.factors))
        return iter(self._keys)

    def __len__(self):
        if self.factors:
            n = 1
            for f in self.factors:
                n *= len(f)
            return n
        return len(self._keys)

    def position(self, key) -> int:
        return self._index[key]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroundSet):
            return NotImplemented
        if self.factors or other.factors:
            return self.factors == other.factors
        return self._keys == other._keys

    def __hash__(self):
        return hash(self.factors) if self.factors else hash(self._keys)

    def __repr__(self):
        if self.factors:
            return " x ".join(repr(f) for f in self.factors)
        return self.name or f"GroundSet({len(self._keys)})"


class FunVector:
    """Immutable sparse map from a ground set to a semiring; zeros are dropped."""

    __slots__ = ("ground", "semiring", "_data", "_hash")

    def __init__(self, ground: GroundSet, semiring, data: dict | None = None, check: bool = True):
        self.ground = ground
        self.semiring = semiring
        self._hash = None
        is_zero = semiring.is_zero
        clean = {}
        for k, v in (data or {}).items():
            if check and k not in ground:
                raise GroundSetMismatch(f"key {k!r} is not in {ground!r}")
            if not is_zero(v):
                clean[k] = v
        self._data = clean

    def __getitem__(self, key):
        if key in self._data:
            return self._data[key]
        if key not in self.ground:
            raise GroundSetMismatch(f"key {key!r} is not in {self.ground!r}")
        return self.semiring.zero

    def items(self):
        return self._data.items()

    def support(self) -> list:
        return list(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if not isinstance(other, FunVector):
            return NotImplemented
        return (
            self.ground == other.ground
            and self.semiring.monoid_key == other.semiring.monoid_key
            and self._data == other._data
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __repr__(self):
        return f"FunVector({dict(self._data)!r})"

    def with_semiring(self, semiring) -> "FunVector":
        if semiring.monoid_key != self.semiring.monoid_key:
            raise GroundSetMismatch("semirings do not share an additive monoid")
        return FunVector(self.ground, semiring, self._data, check=False)

    def to_json(self):
        render = self.semiring.element_to_json
        return [[jsonable(k), render(v)] for k, v in self._data.items()]


def _same_shape(f: FunVector, g: FunVector):
    if f.ground != g.ground:
        raise GroundSetMismatch(f"{f.ground!r} differs from {g.ground!r}")
    if f.semiring.monoid_key != g.semiring.monoid_key:
        raise GroundSetMismatch("value semirings differ")


def pointwise(kind: str, f: FunVector, g: FunVector, semiring=None) -> FunVector:
    """``kind`` is ``"add"`` or ``"mul"``."""
    _same_shape(f, g)
    S = semiring or f.semiring
    if kind == "add":
        out = dict(f._data)
        for k, v in g._data.items():
            out[k] = S.plus(out[k], v) if k in out else v
    elif kind == "mul":
        out = {k: S.times(v, g._data[k]) for k, v in f._data.items() if k in g._data}
    else:
        raise ValueError(f"unknown pointwise operation {kind!r}")
    return FunVector(f.ground, S, out, check=False)


def sum_vectors(vectors: list[FunVector]) -> FunVector:
    if not vectors:
        raise ValueError("empty family of vectors has no ground set")
    total = vectors[0]
    for v in vectors[1:]:
        total = pointwise("add", total, v)
    return total


def pullback(mapping: dict | Callable, g: FunVector, domain: GroundSet) -> FunVector:
    """``g`` composed with ``mapping : domain -> g.ground``."""
    get = mapping.__getitem__ if isinstance(mapping, dict) else mapping
    out = {}
    for a in domain:
        b = get(a)
        if b not in g.ground:
            raise GroundSetMismatch(f"{a!r} maps to {b!r}, outside {g.ground!r}")
        if b in g._data:
            out[a] = g._data[b]
    return FunVector(domain, g.semiring, out, check=False)


def _flat(key, ground: GroundSet) -> tuple:
    return key if ground.factors else (key,)


def tensor(f: FunVector, g: FunVector, semiring=None) -> FunVector:
    """``(a, b) -> f(a) * g(b)`` on the flattened product of the ground sets."""
    S = semiring or f.semiring
    if S.monoid_key != g.semiring.monoid_key:
        raise GroundSetMismatch("value semirings differ")
    ground = GroundSet.product(f.ground, g.ground)
    out = {}
    for a, x in f._data.items():
        fa = _flat(a, f.ground)
        for b, y in g._data.items():
            out[fa + _flat(b, g.ground)] = S.times(x, y)
    return FunVector(ground, S, out, check=False)


def contract(F: FunVector, semiring=None) -> FunVector:
    """Sum over the two middle factors of ``A x B x B x C`` along their diagonal."""
    facs = F.ground.factors
    if len(facs) != 4:
        raise ShapeMismatch("contraction needs a four-factor ground set")
    if facs[1] != facs[2]:
        raise ShapeMismatch("the two middle factors must coincide")
    S = semiring or F.semiring
    out: dict = {}
    for (a, b, b2, c), v in F._data.items():
        if b == b2:
            key = (a, c)
            out[key] = S.plus(out[key], v) if key in out else v
    return FunVector(GroundSet.product(facs[0], facs[3]), S, out, check=False)


def _split_ground(ground: GroundSet, side: str):
    if side == "last":
        if not ground.factors:
            raise ShapeMismatch("left operand of an inner product needs a product ground set")
        return ground.factors[-1], ground.factors[:-1]
    if not ground.factors:
        return ground, ()
    return ground.factors[0], ground.factors[1:]


def inner(f: FunVector, g: FunVector, semiring=None) -> FunVector:
    """``(a, c) -> sum_b f(a, b) * g(b, c)``.

    The last factor of ``f`` is summed against the first factor of ``g``;
    ``g`` may also live on that single factor, giving a vector on the rest
    of ``f``'s factors.
    """
    S = semiring or f.semiring
    if S.monoid_key != g.semiring.monoid_key:
        raise GroundSetMismatch("value semirings differ")
    mid_f, rest_f = _split_ground(f.ground, "last")
    mid_g, rest_g = _split_ground(g.ground, "first")
    if mid_f != mid_g:
        raise ShapeMismatch(f"cannot pair {mid_f!r} with {mid_g!r}")
    rest = rest_f + rest_g
    if not rest:
        raise ShapeMismatch("inner product would have an empty ground set")
    ground = rest[0] if len(rest) == 1 else GroundSet.product(*rest)

    by_mid: dict = {}
    if g.ground.factors:
        for key, y in g._data.items():
            by_mid.setdefault(key[0], []).append((key[1:], y))
    else:
        for key, y in g._data.items():
            by_mid[key] = [((), y)]

    plus, times = S.plus, S.times
    # vectors repeat a few values many times, so each product is computed once
    products: dict = {}
    out: dict = {}
    for key, x in f._data.items():
        partners = by_mid.get(key[-1])
        if not partners:
            continue
        head = key[:-1]
        for tail, y in partners:
            k = head + tail
            if len(rest) == 1:
                k = k[0]
            v = products.get((x, y))
            if v is None:
                v = products[(x, y)] = times(x, y)
            out[k] = plus(out[k], v) if k in out else v
    return FunVector(ground, S, out, check=False)


def random_vector(ground: GroundSet, S, rng: random.Random, density: float = 0.5) -> FunVector:
    return FunVector(
        ground, S, {k: S.sample(rng) for k in ground if rng.random() < density}, check=False
    )


def _rekey(f: FunVector, ground: GroundSet, keymap: Callable) -> FunVector:
    return FunVector(ground, f.semiring, {keymap(k): v for k, v in f._data.items()}, check=False)


def check_laws(
    S, sizes: tuple[int, ...] = (2, 3, 2, 2), samples: int = 50, seed: int = 0, inner_product=inner
) -> LawReport:
    """Bilinearity, associativity, unit, associator and braiding checks.

    ``inner_product`` can be replaced to test a faulty contraction.
    """
    rng = random.Random(seed)
    report = LawReport(subject=f"fun-semialgebra over {getattr(S, 'carrier', S)}")
    A, B, C, D = (GroundSet(range(n), name=name) for n, name in zip(sizes, "ABCD"))
    AB, BC, CD = (GroundSet.product(x, y) for x, y in ((A, B), (B, C), (C, D)))
    point = GroundSet(["*"], name="1")
    unit_vec = FunVector(point, S, {"*": S.one})

    for _ in range(samples):
        f, f2 = random_vector(AB, S, rng), random_vector(AB, S, rng)
        g, g2 = random_vector(BC, S, rng), random_vector(BC, S, rng)
        h = random_vector(CD, S, rng)
        lhs = inner_product(inner_product(f, g), h)
        rhs = inner_product(f, inner_product(g, h))
        report.record("inner_assoc", lhs == rhs, (f, g, h))
        report.record(
            "inner_left_linear",
            inner_product(pointwise("add", f, f2), g)
            == pointwise("add", inner_product(f, g), inner_product(f2, g)),
            (f, f2, g),
        )
        report.record(
            "inner_right_linear",
            inner_product(f, pointwise("add", g, g2))
            == pointwise("add", inner_product(f, g), inner_product(f, g2)),
            (f, g, g2),
        )
        report.record(
            "inner_is_contracted_tensor", contract(tensor(f, g)) == inner_product(f, g), (f, g)
        )

        # unitors: tensoring with the unit vector on a point and forgetting the point
        fa = random_vector(A, S, rng)
        right = _rekey(tensor(fa, unit_vec), A, lambda k: k[0])
        left = _rekey(tensor(unit_vec, fa), A, lambda k: k[1])
        report.record("unitors", right == fa and left == fa, fa)

        # associator: nesting the product either way gives the same flat vector
        fb, fc = random_vector(B, S, rng), random_vector(C, S, rng)
        report.record(
            "associator", tensor(tensor(fa, fb), fc) == tensor(fa, tensor(fb, fc)), (fa, fb, fc)
        )

        # braiding is an involution and matches the opposite-order tensor when S commutes
        BA = GroundSet.product(B, A)
        swap = _rekey(tensor(fa, fb), BA, lambda k: (k[1], k[0]))
        back = _rekey(swap, GroundSet.product(A, B), lambda k: (k[1], k[0]))
        report.record("braiding_involution", back == tensor(fa, fb), (fa, fb))
        if getattr(S, "commutative", False):
            report.record("braiding_symmetry", swap == tensor(fb, fa), (fa, fb))

        # pullback is functorial
        p1 = {a: rng.randrange(len(B)) for a in A}
        p2 = {b: rng.randrange(len(C)) for b in B}
        comp = {a: p2[p1[a]] for a in A}
        report.record(
            "pullback_functorial",
            pullback(comp, fc, A) == pullback(p1, pullback(p2, fc, B), A),
            (p1, p2, fc),
        )
    return report
