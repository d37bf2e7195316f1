"""Convolution semirings of a strict monoidal category.

A :class:`ConvElement` is a finitely supported map from morphisms to a
semiring.  It carries two products: the composition product, summing over
factorizations ``beta . alpha``, and the monoidal product, summing over
``alpha (x) beta``.  In both, the value of the second factor is multiplied
on the left: ``(f * g)(gamma) = sum g(beta) f(alpha)``.
"""
from __future__ import annotations

import random

from .moncat import StrictMonoidalCategory, arrow_category
from .reports import LawReport
from .semiring import Semiring


class ConvError(ValueError):
    pass


class ConvElement:
    __slots__ = ("algebra", "_data", "lazy_unit", "_hash")

    def __init__(self, algebra: "ConvAlgebra", data: dict, lazy_unit: bool = False):
        self.algebra = algebra
        if len(data) > 1:
            key = algebra.category.sort_key
            data = {m: data[m] for m in sorted(data, key=key)}
        self._data = dict(data)
        self.lazy_unit = lazy_unit
        self._hash = None

    def __getitem__(self, m):
        if self.lazy_unit:
            cat = self.algebra.category
            S = self.algebra.semiring
            return S.one if m == cat.identity(cat.dom(m)) else S.zero
        return self._data.get(m, self.algebra.semiring.zero)

    def items(self):
        if self.lazy_unit:
            raise ConvError("the composition unit has infinite support")
        return self._data.items()

    def support(self) -> list:
        return list(self._data)

    def is_zero(self) -> bool:
        return not self._data and not self.lazy_unit

    def restrict(self, dom, cod) -> "ConvElement":
        cat = self.algebra.category
        return ConvElement(
            self.algebra,
            {m: v for m, v in self._data.items() if cat.dom(m) == dom and cat.cod(m) == cod},
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ConvElement):
            return NotImplemented
        return (
            (self.algebra is other.algebra or self.algebra == other.algebra)
            and self.lazy_unit == other.lazy_unit
            and self._data == other._data
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.lazy_unit, frozenset(self._data.items())))
        return self._hash

    def __repr__(self):
        if self.lazy_unit:
            return "ConvElement(<composition unit>)"
        return f"ConvElement({self._data!r})"

    def to_json(self):
        if self.lazy_unit:
            return {"composition_unit": True}
        cat, S = self.algebra.category, self.algebra.semiring
        return {_key(cat.morphism_to_json(m)): S.element_to_json(v) for m, v in self._data.items()}


def _key(m) -> str:
    return m if isinstance(m, str) else str(m)


class ConvAlgebra:
    """The convolution semiring of ``category`` with values in ``semiring``."""

    def __init__(self, category: StrictMonoidalCategory, semiring: Semiring):
        self.category = category
        self.semiring = semiring
        self.zero = ConvElement(self, {})
        self.comp = _Product(self, "comp")
        self.mon = _Product(self, "mon")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, ConvAlgebra)
            and self.category == other.category
            and self.semiring == other.semiring
        )

    def __hash__(self):
        return hash((self.category, self.semiring))

    def element(self, mapping: dict) -> ConvElement:
        cat, S = self.category, self.semiring
        data = {}
        for m, v in mapping.items():
            if not cat.contains(m):
                raise ConvError(f"{m!r} is not a morphism of {cat.name}")
            S.check(v)
            if not S.is_zero(v):
                data[m] = v
        return ConvElement(self, data)

    def char(self, m) -> ConvElement:
        """The indicator of a single morphism."""
        if not self.category.contains(m):
            raise ConvError(f"{m!r} is not a morphism of {self.category.name}")
        return ConvElement(self, {m: self.semiring.one})

    def one_comp(self) -> ConvElement:
        cat = self.category
        objs = cat.objects()
        if objs is None:
            return ConvElement(self, {}, lazy_unit=True)
        return ConvElement(self, {cat.identity(x): self.semiring.one for x in objs})

    def one_mon(self) -> ConvElement:
        return self.char(self.category.unit_identity)

    def add(self, f: ConvElement, g: ConvElement) -> ConvElement:
        if f.lazy_unit or g.lazy_unit:
            if f.is_zero() or g.is_zero():
                return g if f.is_zero() else f
            raise ConvError("sums with the composition unit of an infinite category")
        plus = self.semiring.plus
        out = dict(f._data)
        for m, v in g._data.items():
            out[m] = plus(out[m], v) if m in out else v
        is_zero = self.semiring.is_zero
        return ConvElement(self, {m: v for m, v in out.items() if not is_zero(v)})

    def sum(self, family) -> ConvElement:
        total = self.zero
        for f in family:
            total = self.add(total, f)
        return total

    def repeat(self, count, f: ConvElement) -> ConvElement:
        S = self.semiring
        if f.lazy_unit:
            raise ConvError("repeat of the composition unit of an infinite category")
        return ConvElement(
            self,
            {m: r for m, v in f._data.items() if not S.is_zero(r := S.repeat(count, v))},
        )

    def comp_product(self, f: ConvElement, g: ConvElement) -> ConvElement:
        """Sum of ``g(beta) f(alpha)`` over composable ``beta . alpha``."""
        if f.lazy_unit:
            return g
        if g.lazy_unit:
            return f
        cat, S = self.category, self.semiring
        by_dom: dict = {}
        for b, y in g._data.items():
            by_dom.setdefault(cat.dom(b), []).append((b, y))
        out: dict = {}
        for a, x in f._data.items():
            for b, y in by_dom.get(cat.cod(a), ()):
                c = cat.compose(b, a)
                v = S.times(y, x)
                out[c] = S.plus(out[c], v) if c in out else v
        return ConvElement(self, {m: v for m, v in out.items() if not S.is_zero(v)})

    def mon_product(self, f: ConvElement, g: ConvElement) -> ConvElement:
        """Sum of ``g(beta) f(alpha)`` over ``alpha (x) beta``."""
        if f.lazy_unit or g.lazy_unit:
            raise ConvError("monoidal product with the composition unit of an infinite category")
        cat, S = self.category, self.semiring
        out: dict = {}
        for a, x in f._data.items():
            for b, y in g._data.items():
                c = cat.tensor(a, b)
                v = S.times(y, x)
                out[c] = S.plus(out[c], v) if c in out else v
        return ConvElement(self, {m: v for m, v in out.items() if not S.is_zero(v)})

    def sample(self, rng: random.Random, size: int = 3, values=None) -> ConvElement:
        """A random element with at most ``size`` support points."""
        S = self.semiring
        data = {}
        for _ in range(rng.randint(0, size)):
            v = rng.choice(values) if values is not None else S.sample(rng)
            if not S.is_zero(v):
                data[self.category.sample(rng)] = v
        return ConvElement(self, data)


class _Product:
    """A semiring view of a :class:`ConvAlgebra` under one of its products."""

    def __init__(self, algebra: ConvAlgebra, kind: str):
        self.algebra = algebra
        self.kind = kind
        self.times = algebra.comp_product if kind == "comp" else algebra.mon_product
        self.plus = algebra.add
        self.sum = algebra.sum
        self.repeat = algebra.repeat
        self.zero = algebra.zero
        self.carrier = f"conv-{kind}"
        self.commutative = False

    @property
    def one(self):
        return self.algebra.one_comp() if self.kind == "comp" else self.algebra.one_mon()

    @property
    def monoid_key(self):
        return self.algebra

    def is_zero(self, f) -> bool:
        return f.is_zero()

    def equal(self, a, b) -> bool:
        return a == b

    def sample(self, rng):
        return self.algebra.sample(rng)

    def element_to_json(self, f):
        return f.to_json()


def check_conv_laws(
    category: StrictMonoidalCategory, semiring: Semiring, samples: int = 200, seed: int = 0
) -> LawReport:
    """Semiring laws for both products, plus the two-product compatibility
    on one-object categories."""
    rng = random.Random(seed)
    Q = ConvAlgebra(category, semiring)
    report = LawReport(subject=f"convolution {category.name} / {semiring.carrier}")
    central = [semiring.zero, semiring.one]
    for _ in range(samples):
        a, b, c = Q.sample(rng), Q.sample(rng), Q.sample(rng)
        report.record("add_assoc", Q.add(Q.add(a, b), c) == Q.add(a, Q.add(b, c)), (a, b, c))
        report.record("add_comm", Q.add(a, b) == Q.add(b, a), (a, b))
        report.record("add_zero", Q.add(a, Q.zero) == a, a)
        for kind, prod, one in (
            ("comp", Q.comp_product, Q.one_comp()),
            ("mon", Q.mon_product, Q.one_mon()),
        ):
            report.record(f"{kind}_assoc", prod(prod(a, b), c) == prod(a, prod(b, c)), (a, b, c))
            report.record(
                f"{kind}_left_distrib",
                prod(a, Q.add(b, c)) == Q.add(prod(a, b), prod(a, c)),
                (a, b, c),
            )
            report.record(
                f"{kind}_right_distrib",
                prod(Q.add(a, b), c) == Q.add(prod(a, c), prod(b, c)),
                (a, b, c),
            )
            report.record(
                f"{kind}_zero", prod(a, Q.zero).is_zero() and prod(Q.zero, a).is_zero(), a
            )
            if not one.lazy_unit:
                report.record(f"{kind}_unit", prod(a, one) == a and prod(one, a) == a, a)
        if category.is_monoid:
            d = Q.sample(rng)
            if not semiring.commutative:
                b, c = Q.sample(rng, values=central), Q.sample(rng, values=central)
            lhs = Q.comp_product(Q.mon_product(a, b), Q.mon_product(c, d))
            rhs = Q.mon_product(Q.comp_product(a, c), Q.comp_product(b, d))
            report.record("interchange", lhs == rhs, (a, b, c, d))
    return report


def noncommutativity_witness(semiring: Semiring) -> tuple[ConvElement, ConvElement]:
    """Elements ``f``, ``g`` of the arrow category's convolution semiring with
    ``f * g != g * f`` for the composition product."""
    Q = ConvAlgebra(arrow_category(), semiring)
    return Q.char("g"), Q.char("id_Y")
