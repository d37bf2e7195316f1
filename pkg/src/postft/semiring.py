"""Exact complete semirings.

Every carrier is a small descriptor object that knows its zero, its one and
how to add and multiply raw payloads.  Payloads are plain Python values:

=====================  ===============================================
carrier                payload
=====================  ===============================================
boolean                ``bool``
nat-inf                ``int >= 0`` or ``INF``
nonneg-rat-inf         ``int``/``Fraction >= 0`` or ``INF``
tropical-min-plus      ``int``/``Fraction >= 0`` or ``INF``
arctic-max-plus        ``int``/``Fraction >= 0``, ``INF`` or ``NEG_INF``
formal-language        ``frozenset`` of words (``str``)
binary-relation        ``frozenset`` of ``(a, b)`` pairs
matrix                 ``tuple`` of row ``tuple`` s of inner payloads
=====================  ===============================================

Sums over finite families follow the carrier's own summation law; for
count-valued multiplicities use :meth:`Semiring.repeat`.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Any, Iterable

from .reports import LawReport

INF = math.inf
NEG_INF = -math.inf


class SemiringError(ValueError):
    pass


class DescriptorMismatch(SemiringError):
    """A payload does not belong to the carrier it was used with."""


def _is_count(x) -> bool:
    return type(x) is int and x >= 0


def _is_nonneg_rational(x) -> bool:
    return (type(x) is int or type(x) is Fraction) and x >= 0


def _is_inf(x) -> bool:
    return type(x) is float and x == INF


def render_number(x) -> str:
    if type(x) is float:
        return "inf" if x > 0 else "-inf"
    if type(x) is Fraction and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def parse_number(text) -> int | Fraction | float:
    if isinstance(text, bool):
        raise SemiringError(f"not a number: {text!r}")
    if isinstance(text, int):
        return text
    text = str(text).strip()
    if text in ("inf", "+inf"):
        return INF
    if text == "-inf":
        return NEG_INF
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SemiringError(f"not an exact number: {text!r}") from exc
    return int(value) if value.denominator == 1 else value


def _random_rational(rng: random.Random) -> Fraction | int:
    value = Fraction(rng.randint(0, 12), rng.randint(1, 6))
    return int(value) if value.denominator == 1 else value


class Semiring:
    """Base class; subclasses supply ``plus``, ``times``, ``is_element``."""

    carrier = "abstract"
    idempotent = False
    commutative = True

    zero: Any
    one: Any

    # raw operations, no validation
    def plus(self, a, b):
        raise NotImplementedError

    def times(self, a, b):
        raise NotImplementedError

    def is_element(self, x) -> bool:
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError

    @property
    def monoid_key(self):
        return self

    def is_zero(self, x) -> bool:
        return x == self.zero

    def equal(self, a, b) -> bool:
        return a == b

    def check(self, x):
        if not self.is_element(x):
            raise DescriptorMismatch(f"{x!r} is not an element of {self.carrier}")
        return x

    def add(self, a, b):
        return self.plus(self.check(a), self.check(b))

    def mul(self, a, b):
        return self.times(self.check(a), self.check(b))

    def sum(self, family: Iterable) -> Any:
        total = self.zero
        for x in family:
            total = self.plus(total, self.check(x))
        return total

    def repeat(self, count, a):
        """The sum of ``count`` copies of ``a``; ``count`` may be ``INF``."""
        if not (_is_count(count) or _is_inf(count)):
            raise SemiringError(f"repeat count must be a natural or inf, got {count!r}")
        self.check(a)
        if self.idempotent:
            return a if count >= 1 else self.zero
        return self._repeat(count, a)

    def _repeat(self, count, a):
        if _is_inf(count):
            raise SemiringError(f"{self.carrier} has no infinite sums")
        return reduce(self.plus, [a] * count, self.zero)

    # JSON
    def to_json(self) -> dict:
        return {"carrier": self.carrier}

    def element_to_json(self, x):
        return render_number(x)

    def element_from_json(self, obj):
        return self.check(parse_number(obj))

    def __str__(self):
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class Boolean(Semiring):
    carrier = "boolean"
    idempotent = True
    zero = False
    one = True

    def plus(self, a, b):
        return a or b

    def times(self, a, b):
        return a and b

    def is_element(self, x):
        return type(x) is bool

    def sample(self, rng):
        return rng.random() < 0.5

    def element_to_json(self, x):
        return "1" if x else "0"

    def element_from_json(self, obj):
        if obj in ("1", 1, True, "true"):
            return True
        if obj in ("0", 0, False, "false"):
            return False
        raise DescriptorMismatch(f"{obj!r} is not a boolean")


class _CountLike(Semiring):
    """Shared arithmetic of the two count carriers."""

    zero = 0
    one = 1

    def plus(self, a, b):
        return a + b

    def times(self, a, b):
        if a == 0 or b == 0:
            return 0
        return a * b

    def _repeat(self, count, a):
        if count == 0 or a == 0:
            return 0
        return count * a


@dataclass(frozen=True)
class NatInf(_CountLike):
    carrier = "nat-inf"

    def is_element(self, x):
        return _is_count(x) or _is_inf(x)

    def sample(self, rng):
        r = rng.random()
        if r < 0.1:
            return INF
        if r < 0.3:
            return 0
        return rng.randint(1, 20)


@dataclass(frozen=True)
class RatInf(_CountLike):
    carrier = "nonneg-rat-inf"

    def is_element(self, x):
        return _is_nonneg_rational(x) or _is_inf(x)

    def sample(self, rng):
        r = rng.random()
        if r < 0.1:
            return INF
        if r < 0.25:
            return 0
        return _random_rational(rng)


@dataclass(frozen=True)
class Tropical(Semiring):
    """min-plus; zero is ``INF`` and one is 0."""

    carrier = "tropical-min-plus"
    idempotent = True
    zero = INF
    one = 0

    def plus(self, a, b):
        return a if a <= b else b

    def times(self, a, b):
        return a + b

    def is_element(self, x):
        return _is_nonneg_rational(x) or _is_inf(x)

    def sample(self, rng):
        return INF if rng.random() < 0.15 else _random_rational(rng)


@dataclass(frozen=True)
class Arctic(Semiring):
    """max-plus with ``NEG_INF`` as zero; ``NEG_INF`` absorbs ``INF``."""

    carrier = "arctic-max-plus"
    idempotent = True
    zero = NEG_INF
    one = 0

    def plus(self, a, b):
        return a if a >= b else b

    def times(self, a, b):
        if a == NEG_INF or b == NEG_INF:
            return NEG_INF
        return a + b

    def is_element(self, x):
        return _is_nonneg_rational(x) or (type(x) is float and math.isinf(x))

    def sample(self, rng):
        r = rng.random()
        if r < 0.12:
            return NEG_INF
        if r < 0.2:
            return INF
        return _random_rational(rng)


@dataclass(frozen=True)
class FormalLanguage(Semiring):
    """Finite sets of words over single-character symbols."""

    alphabet: tuple = ("a", "b")
    carrier = "formal-language"
    idempotent = True
    commutative = False

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if any(not isinstance(s, str) or len(s) != 1 for s in self.alphabet):
            raise SemiringError("alphabet symbols must be single characters")

    @property
    def zero(self):
        return frozenset()

    @property
    def one(self):
        return frozenset({""})

    def plus(self, a, b):
        return a | b

    def times(self, a, b):
        return frozenset(u + v for u in a for v in b)

    def is_element(self, x):
        return (
            type(x) is frozenset
            and all(isinstance(w, str) and all(c in self.alphabet for c in w) for w in x)
        )

    def sample(self, rng):
        words = set()
        for _ in range(rng.randint(0, 3)):
            words.add("".join(rng.choice(self.alphabet) for _ in range(rng.randint(0, 2))))
        return frozenset(words)

    def to_json(self):
        return {"carrier": self.carrier, "alphabet": list(self.alphabet)}

    def element_to_json(self, x):
        return sorted(x, key=lambda w: (len(w), w))

    def element_from_json(self, obj):
        return self.check(frozenset(obj))


@dataclass(frozen=True)
class BinaryRelation(Semiring):
    """Relations on a finite base set under union and composition."""

    base: tuple = (0, 1, 2)
    carrier = "binary-relation"
    idempotent = True
    commutative = False

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))

    @property
    def zero(self):
        return frozenset()

    @property
    def one(self):
        return frozenset((a, a) for a in self.base)

    def plus(self, a, b):
        return a | b

    def times(self, r, s):
        after = {}
        for b, c in s:
            after.setdefault(b, []).append(c)
        return frozenset((a, c) for a, b in r for c in after.get(b, ()))

    def is_element(self, x):
        return type(x) is frozenset and all(
            type(p) is tuple and len(p) == 2 and p[0] in self.base and p[1] in self.base for p in x
        )

    def sample(self, rng):
        return frozenset(p for p in product(self.base, repeat=2) if rng.random() < 0.3)

    def to_json(self):
        return {"carrier": self.carrier, "base": list(self.base)}

    def element_to_json(self, x):
        order = {b: i for i, b in enumerate(self.base)}
        return [list(p) for p in sorted(x, key=lambda p: (order[p[0]], order[p[1]]))]

    def element_from_json(self, obj):
        return self.check(frozenset(tuple(p) for p in obj))


MAX_MATRIX_DEPTH = 2


@dataclass(frozen=True)
class Matrix(Semiring):
    """Square matrices over an inner carrier."""

    dim: int = 2
    inner: Semiring = NatInf()
    carrier = "matrix"

    def __post_init__(self):
        if self.dim < 1:
            raise SemiringError("matrix dimension must be positive")
        if self.depth > MAX_MATRIX_DEPTH:
            raise SemiringError(f"matrix nesting deeper than {MAX_MATRIX_DEPTH}")

    @property
    def depth(self) -> int:
        return 1 + (self.inner.depth if isinstance(self.inner, Matrix) else 0)

    @property
    def idempotent(self):
        return self.inner.idempotent

    @property
    def commutative(self):
        return self.dim == 1 and self.inner.commutative

    @property
    def zero(self):
        z = self.inner.zero
        return tuple(tuple(z for _ in range(self.dim)) for _ in range(self.dim))

    @property
    def one(self):
        z, o = self.inner.zero, self.inner.one
        return tuple(tuple(o if i == j else z for j in range(self.dim)) for i in range(self.dim))

    def plus(self, a, b):
        p = self.inner.plus
        return tuple(tuple(p(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def times(self, a, b):
        n, inner = self.dim, self.inner
        cols = list(zip(*b))
        out = []
        for row in a:
            new_row = []
            for col in cols:
                acc = inner.zero
                for x, y in zip(row, col):
                    acc = inner.plus(acc, inner.times(x, y))
                new_row.append(acc)
            out.append(tuple(new_row))
        return tuple(out) if n else ()

    def is_element(self, x):
        return (
            type(x) is tuple
            and len(x) == self.dim
            and all(type(r) is tuple and len(r) == self.dim for r in x)
            and all(self.inner.is_element(v) for r in x for v in r)
        )

    def repeat(self, count, a):
        self.check(a)
        return tuple(tuple(self.inner.repeat(count, v) for v in r) for r in a)

    def sample(self, rng):
        return tuple(tuple(self.inner.sample(rng) for _ in range(self.dim)) for _ in range(self.dim))

    def to_json(self):
        return {"carrier": self.carrier, "dim": self.dim, "inner": self.inner.to_json()}

    def element_to_json(self, x):
        return [[self.inner.element_to_json(v) for v in r] for r in x]

    def element_from_json(self, obj):
        return self.check(tuple(tuple(self.inner.element_from_json(v) for v in r) for r in obj))


_SIMPLE = {
    "boolean": Boolean,
    "nat-inf": NatInf,
    "nonneg-rat-inf": RatInf,
    "tropical-min-plus": Tropical,
    "arctic-max-plus": Arctic,
}

CARRIERS = (*_SIMPLE, "formal-language", "binary-relation", "matrix")


def semiring_from_json(doc) -> Semiring:
    """Build a descriptor from ``{"carrier": ..., ...}`` or a bare carrier name."""
    if isinstance(doc, str):
        doc = {"carrier": doc}
    if not isinstance(doc, dict) or "carrier" not in doc:
        raise SemiringError(f"bad semiring descriptor: {doc!r}")
    name = doc["carrier"]
    if name in _SIMPLE:
        return _SIMPLE[name]()
    if name == "formal-language":
        return FormalLanguage(tuple(doc.get("alphabet", ("a", "b"))))
    if name == "binary-relation":
        return BinaryRelation(tuple(doc.get("base", (0, 1, 2))))
    if name == "matrix":
        return Matrix(int(doc.get("dim", 2)), semiring_from_json(doc.get("inner", "nat-inf")))
    raise SemiringError(f"unknown carrier {name!r}; choose from {', '.join(CARRIERS)}")


def standard_semirings() -> list[Semiring]:
    """One representative of each of the eight carriers."""
    return [
        Boolean(),
        NatInf(),
        RatInf(),
        Tropical(),
        Arctic(),
        FormalLanguage(("a", "b")),
        BinaryRelation((0, 1, 2)),
        Matrix(2, NatInf()),
    ]


def _random_partition(rng: random.Random, n: int) -> list[list[int]]:
    blocks: dict[int, list[int]] = {}
    n_blocks = rng.randint(1, max(1, min(n, 5)))
    for i in range(n):
        blocks.setdefault(rng.randrange(n_blocks), []).append(i)
    return list(blocks.values())


def check_laws(S: Semiring, samples: int = 500, seed: int = 0) -> LawReport:
    """Check the complete-semiring laws on seeded random samples."""
    rng = random.Random(seed)
    report = LawReport(subject=S.carrier)
    eq, plus, times, zero, one = S.equal, S.plus, S.times, S.zero, S.one

    def total(family):
        return reduce(plus, family, zero)

    for _ in range(samples):
        a, b, c = S.sample(rng), S.sample(rng), S.sample(rng)
        report.record("add_assoc", eq(plus(plus(a, b), c), plus(a, plus(b, c))), (a, b, c))
        report.record("add_comm", eq(plus(a, b), plus(b, a)), (a, b))
        report.record("add_zero", eq(plus(a, zero), a) and eq(plus(zero, a), a), a)
        report.record("mul_assoc", eq(times(times(a, b), c), times(a, times(b, c))), (a, b, c))
        report.record("mul_one", eq(times(a, one), a) and eq(times(one, a), a), a)
        report.record(
            "left_distrib", eq(times(a, plus(b, c)), plus(times(a, b), times(a, c))), (a, b, c)
        )
        report.record(
            "right_distrib", eq(times(plus(a, b), c), plus(times(a, c), times(b, c))), (a, b, c)
        )
        report.record(
            "zero_absorbing", eq(times(a, zero), zero) and eq(times(zero, a), zero), a
        )
        if S.commutative:
            report.record("mul_comm", eq(times(a, b), times(b, a)), (a, b))

        s = plus(a, b)
        if eq(s, zero):
            report.record("zerosumfree", eq(a, zero) and eq(b, zero), (a, b))
        else:
            report.record("zerosumfree", True)

        n = rng.randint(0, 16)
        family = [S.sample(rng) for _ in range(n)]
        whole = total(family)
        report.record("sum_empty", eq(S.sum([]), zero))
        report.record("sum_singleton", eq(S.sum([a]), a), a)
        report.record("sum_pair", eq(S.sum([a, b]), plus(a, b)), (a, b))
        blocks = _random_partition(rng, n)
        regrouped = S.sum(total(family[i] for i in blk) for blk in blocks)
        report.record("partition", eq(regrouped, whole), (family, blocks))
        report.record(
            "inf_distrib_left", eq(S.sum(times(a, x) for x in family), times(a, whole)), (a, family)
        )
        report.record(
            "inf_distrib_right", eq(S.sum(times(x, a) for x in family), times(whole, a)), (a, family)
        )
        rows, cols = rng.randint(0, 4), rng.randint(0, 4)
        grid = [[S.sample(rng) for _ in range(cols)] for _ in range(rows)]
        by_rows = S.sum(S.sum(r) for r in grid)
        by_cols = S.sum(S.sum(grid[i][j] for i in range(rows)) for j in range(cols))
        report.record("fubini", eq(by_rows, by_cols), grid)
        k = rng.randint(0, 6)
        report.record("repeat", eq(S.repeat(k, a), total([a] * k)), (k, a))
    return report
