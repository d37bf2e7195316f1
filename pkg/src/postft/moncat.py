"""Strict monoidal categories: finite tables and a few rule-based families.

Table categories name their morphisms by strings.  Rule categories use
Python values directly: integers for the integer monoid, fractions for the
grid-max monoid and :class:`MatMorphism` for matrices under the Kronecker
product.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .reports import LawReport
from .semiring import parse_number, render_number


class CategoryError(ValueError):
    pass


class NotComposable(CategoryError):
    pass


class NotAMorphism(CategoryError):
    pass


class InvalidCategory(CategoryError):
    def __init__(self, message, report: LawReport | None = None):
        super().__init__(message)
        self.report = report


class UnsupportedEnumeration(TypeError):
    """Raised when a rule-based category is asked to list its morphisms."""


class StrictMonoidalCategory:
    """Interface shared by table and rule categories."""

    name = "category"
    unit = None

    def objects(self) -> list | None:
        """All objects, or ``None`` when there are infinitely many."""
        return None

    def morphisms(self) -> list | None:
        return None

    def contains(self, m) -> bool:
        raise NotImplementedError

    def dom(self, m):
        raise NotImplementedError

    def cod(self, m):
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    def compose(self, beta, alpha):
        """``beta`` after ``alpha``."""
        raise NotImplementedError

    def tensor(self, a, b):
        raise NotImplementedError

    def tensor_objects(self, x, y):
        raise NotImplementedError

    def sort_key(self, m):
        return m

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def sample_from(self, rng: random.Random, obj):
        """A random morphism with domain ``obj``."""
        raise NotImplementedError

    def morphism_to_json(self, m):
        return m

    def morphism_from_json(self, obj):
        if not self.contains(obj):
            raise NotAMorphism(f"{obj!r} is not a morphism of {self.name}")
        return obj

    @property
    def unit_identity(self):
        return self.identity(self.unit)

    @property
    def is_monoid(self) -> bool:
        objs = self.objects()
        return objs is not None and len(objs) == 1

    def composable(self, beta, alpha) -> bool:
        return self.cod(alpha) == self.dom(beta)


class TableCategory(StrictMonoidalCategory):
    def __init__(
        self,
        objects,
        morphisms: dict,
        composition: dict,
        identities: dict,
        tensor_objects: dict,
        tensor_morphisms: dict,
        unit,
        name: str = "table",
    ):
        self.name = name
        self._objects = list(objects)
        self._morphisms = dict(morphisms)  # id -> (dom, cod)
        self._comp = dict(composition)  # (beta, alpha) -> gamma
        self._ids = dict(identities)
        self._tobj = dict(tensor_objects)
        self._tmor = dict(tensor_morphisms)
        self.unit = unit
        self._order = {m: i for i, m in enumerate(self._morphisms)}
        self._validate()

    def _validate(self):
        objs = set(self._objects)
        if self.unit not in objs:
            raise InvalidCategory(f"unit {self.unit!r} is not an object")
        for m, (d, c) in self._morphisms.items():
            if d not in objs or c not in objs:
                raise InvalidCategory(f"morphism {m!r} has an unknown endpoint")
        for x in objs:
            if self._ids.get(x) not in self._morphisms:
                raise InvalidCategory(f"object {x!r} has no identity")
        for a in self._morphisms:
            for b in self._morphisms:
                if self._morphisms[a][1] == self._morphisms[b][0]:
                    if self._comp.get((b, a)) not in self._morphisms:
                        raise InvalidCategory(f"composite of {b!r} after {a!r} is missing")
                if self._tmor.get((a, b)) not in self._morphisms:
                    raise InvalidCategory(f"tensor of {a!r} and {b!r} is missing")
        for x in objs:
            for y in objs:
                if self._tobj.get((x, y)) not in objs:
                    raise InvalidCategory(f"tensor of objects {x!r}, {y!r} is missing")

    def objects(self):
        return list(self._objects)

    def morphisms(self):
        return list(self._morphisms)

    def contains(self, m):
        return isinstance(m, str) and m in self._morphisms

    def _get(self, m):
        try:
            return self._morphisms[m]
        except (KeyError, TypeError):
            raise NotAMorphism(f"{m!r} is not a morphism of {self.name}") from None

    def dom(self, m):
        return self._get(m)[0]

    def cod(self, m):
        return self._get(m)[1]

    def identity(self, obj):
        return self._ids[obj]

    def compose(self, beta, alpha):
        if self.cod(alpha) != self.dom(beta):
            raise NotComposable(f"{beta!r} cannot follow {alpha!r}")
        return self._comp[(beta, alpha)]

    def tensor(self, a, b):
        self._get(a), self._get(b)
        return self._tmor[(a, b)]

    def tensor_objects(self, x, y):
        return self._tobj[(x, y)]

    def sort_key(self, m):
        return self._order[m]

    def sample(self, rng):
        return rng.choice(list(self._morphisms))

    def sample_from(self, rng, obj):
        return rng.choice([m for m, (d, _) in self._morphisms.items() if d == obj])

    def to_json(self):
        return {
            "objects": list(self._objects),
            "morphisms": [
                {"id": m, "dom": d, "cod": c} for m, (d, c) in self._morphisms.items()
            ],
            "compose": [[b, a, g] for (b, a), g in self._comp.items()],
            "identities": dict(self._ids),
            "tensor_objects": [[x, y, z] for (x, y), z in self._tobj.items()],
            "tensor": [[a, b, c] for (a, b), c in self._tmor.items()],
            "unit": self.unit,
        }


def table_category_from_json(doc: dict, check: bool = True) -> TableCategory:
    """Load a table category; with ``check`` the axioms must hold."""
    try:
        cat = TableCategory(
            objects=doc["objects"],
            morphisms={m["id"]: (m["dom"], m["cod"]) for m in doc["morphisms"]},
            composition={(b, a): g for b, a, g in doc["compose"]},
            identities=doc["identities"],
            tensor_objects={(x, y): z for x, y, z in doc["tensor_objects"]},
            tensor_morphisms={(a, b): c for a, b, c in doc["tensor"]},
            unit=doc["unit"],
            name=doc.get("name", "table"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidCategory):
            raise
        raise InvalidCategory(f"malformed category table: {exc}") from exc
    if check:
        report = check_axioms(cat)
        if not report.passed:
            raise InvalidCategory(f"axioms fail: {', '.join(report.failed())}", report)
    return cat


def monoid_category(elements, table: dict, unit=None, name: str = "monoid") -> TableCategory:
    """A finite commutative monoid seen as a one-object category.

    Composition and tensor are both the monoid product.
    """
    elements = list(elements)
    for a, b in product(elements, repeat=2):
        if table.get((a, b)) not in elements:
            raise InvalidCategory(f"product {a!r}*{b!r} is missing")
        if table[(a, b)] != table[(b, a)]:
            raise InvalidCategory("monoid is not commutative")
    for a, b, c in product(elements, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise InvalidCategory("monoid is not associative")
    units = [e for e in elements if all(table[(e, a)] == a for a in elements)]
    if unit is None:
        if not units:
            raise InvalidCategory("monoid has no unit")
        unit = units[0]
    elif unit not in units:
        raise InvalidCategory(f"{unit!r} is not a unit")
    return TableCategory(
        objects=["*"],
        morphisms={e: ("*", "*") for e in elements},
        composition=dict(table),
        identities={"*": unit},
        tensor_objects={("*", "*"): "*"},
        tensor_morphisms=dict(table),
        unit="*",
        name=name,
    )


def trivial_category() -> TableCategory:
    return monoid_category(["1"], {("1", "1"): "1"}, name="trivial")


def polya_category() -> TableCategory:
    """The monoid {1, chi, mu} with chi*chi = chi*mu = mu*mu = mu."""
    els = ["1", "chi", "mu"]
    table = {}
    for a, b in product(els, repeat=2):
        table[(a, b)] = b if a == "1" else a if b == "1" else "mu"
    return monoid_category(els, table, unit="1", name="polya")


def f2_category() -> TableCategory:
    """{0, 1} under multiplication."""
    return monoid_category(
        ["1", "0"], {(a, b): "1" if a == b == "1" else "0" for a in "10" for b in "10"},
        unit="1", name="f2",
    )


def arrow_category() -> TableCategory:
    """Two objects X < Y and one arrow ``g`` between them, tensored by max."""
    objs = ["X", "Y"]
    mors = {"id_X": ("X", "X"), "id_Y": ("Y", "Y"), "g": ("X", "Y")}
    comp = {
        ("id_X", "id_X"): "id_X",
        ("id_Y", "id_Y"): "id_Y",
        ("g", "id_X"): "g",
        ("id_Y", "g"): "g",
    }
    top = {"X": 0, "Y": 1}
    tobj = {(x, y): objs[max(top[x], top[y])] for x in objs for y in objs}
    tmor = {}
    for a, b in product(mors, repeat=2):
        d = tobj[(mors[a][0], mors[b][0])]
        c = tobj[(mors[a][1], mors[b][1])]
        tmor[(a, b)] = "g" if (d, c) == ("X", "Y") else f"id_{d}"
    return TableCategory(objs, mors, comp, {"X": "id_X", "Y": "id_Y"}, tobj, tmor, "X", name="arrow")


def factorizations(cat: StrictMonoidalCategory, gamma, mode: str = "compose") -> list[tuple]:
    """All ``(beta, alpha)`` with ``beta . alpha = gamma`` (``mode="compose"``)
    or all ``(alpha, beta)`` with ``alpha (x) beta = gamma`` (``mode="tensor"``)."""
    if not isinstance(cat, TableCategory):
        raise UnsupportedEnumeration(f"{cat.name} is rule-based; factorizations need a table")
    if not cat.contains(gamma):
        raise NotAMorphism(f"{gamma!r} is not a morphism of {cat.name}")
    mors = cat.morphisms()
    if mode == "compose":
        return [
            (b, a)
            for a in mors
            for b in mors
            if cat.composable(b, a) and cat.compose(b, a) == gamma
        ]
    if mode == "tensor":
        return [(a, b) for a in mors for b in mors if cat.tensor(a, b) == gamma]
    raise ValueError(f"unknown factorization mode {mode!r}")


def composite_tensor_sets(cat: TableCategory, gamma, xi1, xi2) -> tuple[set, set]:
    """The pairs ``(eta1, eta2)`` completing ``(xi1, xi2)`` to ``gamma``.

    Returns ``(ctc, tct)``: in the first, each ``eta`` is composed with its
    ``xi`` before tensoring; in the second, both pairs are tensored first.
    """
    mors = cat.morphisms()
    if mors is None:
        raise UnsupportedEnumeration(f"{cat.name} is rule-based")
    ctc, tct = set(), set()
    xi = cat.tensor(xi1, xi2)
    for e1 in mors:
        for e2 in mors:
            if cat.composable(e1, xi1) and cat.composable(e2, xi2):
                if cat.tensor(cat.compose(e1, xi1), cat.compose(e2, xi2)) == gamma:
                    ctc.add((e1, e2))
            eta = cat.tensor(e1, e2)
            if cat.composable(eta, xi) and cat.compose(eta, xi) == gamma:
                tct.add((e1, e2))
    return ctc, tct


@dataclass(frozen=True)
class IntegerMonoid(StrictMonoidalCategory):
    """The integers under addition, as a one-object category."""

    name = "integer-monoid"
    unit = "*"
    window = 10

    def objects(self):
        return ["*"]

    def contains(self, m):
        return type(m) is int

    def dom(self, m):
        self._check(m)
        return "*"

    cod = dom

    def _check(self, m):
        if type(m) is not int:
            raise NotAMorphism(f"{m!r} is not an integer")

    def identity(self, obj):
        return 0

    def compose(self, beta, alpha):
        self._check(beta), self._check(alpha)
        return beta + alpha

    tensor = compose

    def tensor_objects(self, x, y):
        return "*"

    def sample(self, rng):
        return rng.randint(-self.window, self.window)

    def sample_from(self, rng, obj):
        return self.sample(rng)

    def morphism_to_json(self, m):
        return str(m)

    def morphism_from_json(self, obj):
        return int(obj)


@dataclass(frozen=True)
class GridMaxMonoid(StrictMonoidalCategory):
    """``{0, 1/k, ..., 1}`` under max, as a one-object category."""

    k: int = 1
    unit = "*"

    @property
    def name(self):
        return f"grid-max-{self.k}"

    def objects(self):
        return ["*"]

    def values(self) -> list[Fraction]:
        return [Fraction(i, self.k) for i in range(self.k + 1)]

    def contains(self, m):
        return (
            isinstance(m, (int, Fraction)) and not isinstance(m, bool) and 0 <= m <= 1 and (Fraction(m) * self.k).denominator == 1
        )

    def _check(self, m):
        if not self.contains(m):
            raise NotAMorphism(f"{m!r} is not on the 1/{self.k} grid")

    def dom(self, m):
        self._check(m)
        return "*"

    cod = dom

    def identity(self, obj):
        return Fraction(0)

    def compose(self, beta, alpha):
        self._check(beta), self._check(alpha)
        return max(beta, alpha)

    tensor = compose

    def tensor_objects(self, x, y):
        return "*"

    def sample(self, rng):
        return Fraction(rng.randint(0, self.k), self.k)

    def sample_from(self, rng, obj):
        return self.sample(rng)

    def morphism_to_json(self, m):
        return render_number(Fraction(m))

    def morphism_from_json(self, obj):
        m = Fraction(parse_number(obj))
        self._check(m)
        return m


@dataclass(frozen=True)
class MatMorphism:
    """A ``rows x cols`` rational matrix, a morphism ``cols -> rows``."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(Fraction(v) for v in r) for r in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise NotAMorphism("matrix shape does not match its entries")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, rows_list) -> "MatMorphism":
        rows_list = [list(r) for r in rows_list]
        cols = len(rows_list[0]) if rows_list else 0
        return cls(len(rows_list), cols, tuple(tuple(r) for r in rows_list))

    def to_json(self):
        return [[render_number(v) for v in r] for r in self.entries]


class MatrixCategory(StrictMonoidalCategory):
    """Objects are dimensions; tensor is the Kronecker product."""

    name = "matrix-category"
    unit = 1

    def __eq__(self, other):
        return isinstance(other, MatrixCategory)

    def __hash__(self):
        return hash("matrix-category")

    def contains(self, m):
        return isinstance(m, MatMorphism)

    def _check(self, m):
        if not isinstance(m, MatMorphism):
            raise NotAMorphism(f"{m!r} is not a matrix")

    def dom(self, m):
        self._check(m)
        return m.cols

    def cod(self, m):
        self._check(m)
        return m.rows

    def identity(self, n):
        return MatMorphism(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def compose(self, beta, alpha):
        if self.cod(alpha) != self.dom(beta):
            raise NotComposable(f"{beta.rows}x{beta.cols} cannot follow {alpha.rows}x{alpha.cols}")
        cols = list(zip(*alpha.entries)) if alpha.rows else [() for _ in range(alpha.cols)]
        entries = tuple(
            tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
            for row in beta.entries
        )
        return MatMorphism(beta.rows, alpha.cols, entries)

    def tensor(self, a, b):
        self._check(a), self._check(b)
        entries = tuple(
            tuple(x * y for x in ra for y in rb) for ra in a.entries for rb in b.entries
        )
        return MatMorphism(a.rows * b.rows, a.cols * b.cols, entries)

    def tensor_objects(self, x, y):
        return x * y

    def sort_key(self, m):
        return (m.rows, m.cols, m.entries)

    def _random(self, rng, rows, cols):
        return MatMorphism(
            rows, cols, tuple(tuple(rng.randint(-2, 2) for _ in range(cols)) for _ in range(rows))
        )

    def sample(self, rng):
        return self._random(rng, rng.randint(1, 3), rng.randint(1, 3))

    def sample_from(self, rng, obj):
        return self._random(rng, rng.randint(1, 3), obj)

    def morphism_to_json(self, m):
        return m.to_json()

    def morphism_from_json(self, obj):
        return MatMorphism.of([[parse_number(v) for v in r] for r in obj])


def _check_pairs(cat, report, pairs):
    """Endpoint laws of tensors and composites on the given pairs."""
    comp, tens, dom, cod = cat.compose, cat.tensor, cat.dom, cat.cod
    for a, b in pairs:
        ta = tens(a, b)
        report.record(
            "tensor_endpoints",
            dom(ta) == cat.tensor_objects(dom(a), dom(b))
            and cod(ta) == cat.tensor_objects(cod(a), cod(b)),
            (a, b),
        )
        if cat.composable(b, a):
            ba = comp(b, a)
            report.record("composite_endpoints", dom(ba) == dom(a) and cod(ba) == cod(b), (b, a))


def check_axioms(cat: StrictMonoidalCategory, samples: int = 300, seed: int = 0) -> LawReport:
    """Category, strict monoidal and interchange laws.

    Table categories with at most 200 morphisms are checked exhaustively
    (interchange is sampled once the quadruples exceed a budget); rule
    categories are sampled.
    """
    rng = random.Random(seed)
    report = LawReport(subject=cat.name)
    comp, tens, ident = cat.compose, cat.tensor, cat.identity
    mors = cat.morphisms()
    exhaustive = mors is not None and len(mors) <= 200

    if exhaustive:
        triples = product(mors, repeat=3)
        pairs = list(product(mors, repeat=2))
        singles = mors
    else:
        triples, pairs, singles = [], [], []
        for _ in range(samples):
            a = cat.sample(rng)
            b = cat.sample_from(rng, cat.cod(a))
            c = cat.sample_from(rng, cat.cod(b))
            triples.append((a, b, c))
            pairs.append((a, b))
            pairs.append((a, cat.sample(rng)))
            singles.append(a)

    for a in singles:
        report.record(
            "identity_laws",
            comp(a, ident(cat.dom(a))) == a and comp(ident(cat.cod(a)), a) == a,
            a,
        )
        u = cat.unit_identity
        report.record("tensor_unit", tens(u, a) == a and tens(a, u) == a, a)
    objs = cat.objects()
    obj_list = objs if objs is not None else [cat.dom(a) for a in singles[:30]]
    for x in obj_list:
        report.record(
            "unit_object",
            cat.tensor_objects(cat.unit, x) == x and cat.tensor_objects(x, cat.unit) == x,
            x,
        )
        for y in obj_list:
            report.record(
                "tensor_identities",
                tens(ident(x), ident(y)) == ident(cat.tensor_objects(x, y)),
                (x, y),
            )
    _check_pairs(cat, report, pairs)

    for a, b, c in triples:
        report.record("tensor_assoc", tens(tens(a, b), c) == tens(a, tens(b, c)), (a, b, c))
        if cat.composable(b, a) and cat.composable(c, b):
            report.record(
                "compose_assoc", comp(c, comp(b, a)) == comp(comp(c, b), a), (a, b, c)
            )

    # interchange: (e1 . x1) (x) (e2 . x2) == (e1 (x) e2) . (x1 (x) x2)
    if exhaustive:
        chains = [(x, e) for x, e in product(mors, repeat=2) if cat.composable(e, x)]
        if len(chains) ** 2 <= 250_000:
            quads = [(p, q) for p in chains for q in chains]
        else:
            quads = [(rng.choice(chains), rng.choice(chains)) for _ in range(50_000)]
    else:
        quads = []
        for _ in range(samples):
            x1, x2 = cat.sample(rng), cat.sample(rng)
            quads.append(
                ((x1, cat.sample_from(rng, cat.cod(x1))), (x2, cat.sample_from(rng, cat.cod(x2))))
            )
    for (x1, e1), (x2, e2) in quads:
        lhs = tens(comp(e1, x1), comp(e2, x2))
        top, bottom = tens(e1, e2), tens(x1, x2)
        ok = cat.composable(top, bottom) and comp(top, bottom) == lhs
        report.record("interchange", ok, (x1, e1, x2, e2))
    return report
