"""State sums of a positive topological field theory.

A :class:`TFT` combines a bordism model, a system of fields on it and an
action with values in a strict monoidal category.  The state sum of a
bordism evaluated on a boundary field is the sum, in the convolution
semiring, of the indicators of the actions of all fields with that
boundary restriction.

State vectors are indexed by a tuple of closed objects ("parts").  A
bordism's vector has parts ``(incoming, outgoing)``; a vector on a single
closed object has one part.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import product

from .conv import ConvAlgebra, ConvElement
from .funalg import FunVector, GroundSet, inner, pointwise, pullback, sum_vectors
from .moncat import MatrixCategory, StrictMonoidalCategory
from .reports import LawReport, jsonable
from .semiring import Semiring


class EngineError(ValueError):
    pass


class BoundaryMismatch(EngineError):
    pass


class ConstraintViolation(EngineError):
    """A state vector is not constant on isotopy classes of fields."""


class UnsupportedOperation(EngineError):
    pass


class InvalidRepresentation(EngineError):
    pass


@dataclass(frozen=True)
class ClosedHomeo:
    """Sends point ``i`` of ``source`` to point ``perm[i]`` of ``target``."""

    source: object
    target: object
    perm: tuple

    def then(self, other: "ClosedHomeo") -> "ClosedHomeo":
        """``other`` after ``self``."""
        return ClosedHomeo(self.source, other.target, tuple(other.perm[i] for i in self.perm))


class BordismModel:
    """Bordisms with boundaries, ordered disjoint union and gluing.

    Subclasses implement the operations their instances use; sampling
    helpers drive the randomized checks.
    """

    empty_closed: object = ()

    def incoming(self, W):
        raise NotImplementedError

    def outgoing(self, W):
        raise NotImplementedError

    def closed_union(self, M, N):
        raise NotImplementedError

    def empty_bordism(self):
        raise NotImplementedError

    def union(self, W1, W2):
        raise NotImplementedError

    def glue(self, W1, W2):
        raise NotImplementedError

    def cylinder(self, M):
        raise UnsupportedOperation(f"{type(self).__name__} has no cylinders")

    def cup(self, M):
        raise UnsupportedOperation(f"{type(self).__name__} has no bent cylinders")

    def cap(self, M):
        raise UnsupportedOperation(f"{type(self).__name__} has no bent cylinders")

    def isomorphisms(self, W1, W2, limit: int = 5000) -> list:
        raise NotImplementedError

    def boundary_homeos(self, phi) -> tuple[ClosedHomeo, ClosedHomeo]:
        raise NotImplementedError

    def closed_homeomorphisms(self, M, N) -> list[ClosedHomeo]:
        return [ClosedHomeo(M, N, ())] if M == N == self.empty_closed else []

    def closed_identity(self, M) -> ClosedHomeo:
        return self.closed_homeomorphisms(M, M)[0]

    def isotopic(self, phi: ClosedHomeo, psi: ClosedHomeo) -> bool:
        # closed objects are 0-dimensional: isotopic maps coincide
        return phi == psi

    def random_closed(self, rng: random.Random):
        return self.empty_closed

    def random_bordism(self, rng: random.Random):
        raise NotImplementedError

    def random_glue_pair(self, rng: random.Random):
        raise NotImplementedError

    def random_union_pair(self, rng: random.Random):
        raise NotImplementedError

    def random_copy(self, rng: random.Random, W):
        return W

    def random_coboundary(self, rng: random.Random, M):
        raise UnsupportedOperation(f"{type(self).__name__} cannot sample coboundaries")

    def bordism_from_json(self, doc):
        raise NotImplementedError

    def bordism_to_json(self, W):
        raise NotImplementedError

    def closed_from_json(self, doc):
        return self.empty_closed


class FieldsSystem:
    """Fields on closed objects and bordisms with restriction and gluing maps."""

    def closed_fields(self, M) -> list:
        raise NotImplementedError

    def bordism_fields(self, W):
        raise NotImplementedError

    def boundary(self, W, F) -> tuple:
        """Restriction of ``F`` to ``(incoming, outgoing)``."""
        raise NotImplementedError

    def boundary_map(self, W):
        """``F -> boundary(W, F)`` for repeated use on one bordism."""
        return lambda F: self.boundary(W, F)

    def split_closed(self, M, N, f) -> tuple:
        raise NotImplementedError

    def join_closed(self, M, N, f, g):
        raise NotImplementedError

    def split_union(self, W1, W2, F) -> tuple:
        raise NotImplementedError

    def join_union(self, W1, W2, F1, F2):
        raise NotImplementedError

    def split_glue(self, W1, W2, F) -> tuple:
        raise NotImplementedError

    def join_glue(self, W1, W2, F1, F2):
        """The glued field, or ``None`` when the pieces disagree on the seam."""
        raise NotImplementedError

    def pullback(self, phi, F):
        raise NotImplementedError

    def closed_pullback(self, phi: ClosedHomeo, f):
        raise NotImplementedError

    def isotopy_classes(self, M) -> list[list]:
        return [[f] for f in self.closed_fields(M)]

    def field_from_json(self, M, doc):
        return doc

    def field_to_json(self, M, f):
        return jsonable(f)


class ActionSystem:
    """Assigns a morphism of ``category`` to every field on a bordism."""

    category: StrictMonoidalCategory

    def act(self, W, F):
        raise NotImplementedError

    def histogram(self, W, fields: FieldsSystem) -> Counter:
        """Counts of ``(boundary field, action)`` over all fields on ``W``."""
        boundary, act = fields.boundary_map(W), self.act
        return Counter((boundary(F), act(W, F)) for F in fields.bordism_fields(W))


@dataclass(frozen=True)
class Representation:
    """A strict monoidal functor into the matrix category."""

    source: StrictMonoidalCategory
    on_objects: object  # callable or dict
    on_morphisms: object
    window: tuple | None = None  # sampled morphisms for rule categories

    def obj(self, x):
        f = self.on_objects
        return f[x] if isinstance(f, dict) else f(x)

    def __call__(self, m):
        f = self.on_morphisms
        return f[m] if isinstance(f, dict) else f(m)

    def check(self, samples: int = 200, seed: int = 0) -> LawReport:
        rng = random.Random(seed)
        src, tgt = self.source, MatrixCategory()
        report = LawReport(subject=f"representation of {src.name}")
        mors = src.morphisms()
        if mors is None:
            if self.window is not None:
                mors = list(self.window)
            else:
                mors = [src.sample(rng) for _ in range(samples)]
        objs = src.objects() or sorted({src.dom(m) for m in mors} | {src.cod(m) for m in mors}, key=repr)
        report.record("unit", self.obj(src.unit) == tgt.unit, src.unit)
        for x in objs:
            report.record("identities", self(src.identity(x)) == tgt.identity(self.obj(x)), x)
        for m in mors:
            r = self(m)
            report.record(
                "endpoints",
                tgt.contains(r) and tgt.dom(r) == self.obj(src.dom(m)) and tgt.cod(r) == self.obj(src.cod(m)),
                m,
            )
        for a, b in product(mors, repeat=2):
            if src.composable(b, a):
                report.record("composition", self(src.compose(b, a)) == tgt.compose(self(b), self(a)), (b, a))
            report.record("tensor", self(src.tensor(a, b)) == tgt.tensor(self(a), self(b)), (a, b))
            report.record(
                "tensor_objects",
                self.obj(src.tensor_objects(src.dom(a), src.dom(b)))
                == tgt.tensor_objects(self.obj(src.dom(a)), self.obj(src.dom(b))),
                (a, b),
            )
        return report


class LinearizedAction(ActionSystem):
    def __init__(self, base: ActionSystem, rep: Representation):
        self.base = base
        self.rep = rep
        self.category = MatrixCategory()

    def act(self, W, F):
        return self.rep(self.base.act(W, F))

    def histogram(self, W, fields):
        counts: Counter = Counter()
        for (b, m), c in self.base.histogram(W, fields).items():
            counts[(b, self.rep(m))] += c
        return counts


@dataclass(frozen=True)
class StateVector:
    parts: tuple
    vec: FunVector

    def __getitem__(self, key) -> ConvElement:
        return self.vec[key]

    def items(self):
        return self.vec.items()

    def to_json(self):
        render = jsonable
        return {
            "parts": [render(p) for p in self.parts],
            "values": [[render(k), v.to_json()] for k, v in self.vec.items()],
        }


class TFT:
    """A positive TFT instance: model, fields, action and value semiring."""

    def __init__(
        self,
        name: str,
        model: BordismModel,
        fields: FieldsSystem,
        action: ActionSystem,
        semiring: Semiring,
        subdivision_invariant: bool = True,
        params: dict | None = None,
    ):
        self.name = name
        self.model = model
        self.fields = fields
        self.action = action
        self.semiring = semiring
        self.category = action.category
        self.subdivision_invariant = subdivision_invariant
        self.params = dict(params or {})
        self.Q = ConvAlgebra(self.category, semiring)
        self._grounds: dict = {}
        self._vectors: dict = {}

    def __repr__(self):
        return f"TFT({self.name!r})"

    # spaces of boundary fields

    def ground(self, M) -> GroundSet:
        g = self._grounds.get(M)
        if g is None:
            g = self._grounds[M] = GroundSet(self.fields.closed_fields(M), name=f"F({M!r})")
        return g

    def space(self, parts: tuple) -> GroundSet:
        if len(parts) == 1:
            return self.ground(parts[0])
        return GroundSet.product(*(self.ground(p) for p in parts))

    def _vector(self, parts, data, semiring=None) -> StateVector:
        return StateVector(tuple(parts), FunVector(self.space(parts), semiring or self.Q.comp, data, check=False))

    def zero_state(self, parts) -> StateVector:
        return self._vector(parts, {})

    # state sums

    def t_char(self, W, F) -> ConvElement:
        return self.Q.char(self.action.act(W, F))

    def state_sum(self, W, boundary) -> ConvElement:
        """Direct sum of action indicators over fields restricting to ``boundary``."""
        fields = self.fields
        return self.Q.sum(
            self.t_char(W, F) for F in fields.bordism_fields(W) if fields.boundary(W, F) == boundary
        )

    def state_vector(self, W) -> StateVector:
        z = self._vectors.get(W)
        if z is not None:
            return z
        S, Q = self.semiring, self.Q
        histogram = self.action.histogram(W, self.fields)
        # validate each distinct action once instead of once per boundary field
        Q.element({m: S.one for m in {m for _, m in histogram}})
        grouped: dict = {}
        repeats: dict = {}
        for (b, m), count in histogram.items():
            r = repeats.get(count)
            if r is None:
                r = repeats[count] = S.repeat(count, S.one)
            grouped.setdefault(b, {})[m] = r
        # share one element per distinct value
        interned: dict = {}
        data = {}
        for b, vals in grouped.items():
            key = frozenset(vals.items())
            x = interned.get(key)
            if x is None:
                x = interned[key] = ConvElement(Q, vals)
            data[b] = x
        parts = (self.model.incoming(W), self.model.outgoing(W))
        z = self._vector(parts, data)
        self.check_constraint(z)
        self._vectors[W] = z
        return z

    def check_constraint(self, z: StateVector):
        """Raise unless ``z`` is constant on isotopy classes of boundary fields."""
        classes = [self.fields.isotopy_classes(p) for p in z.parts]
        if all(len(c) == 1 for cl in classes for c in cl):
            return
        for combo in product(*classes):
            keys = list(product(*combo)) if len(combo) > 1 else list(combo[0])
            values = {z[k] for k in keys}
            if len(values) > 1:
                raise ConstraintViolation(f"state vector differs within class {combo!r}")

    # operations on state vectors

    def pushforward(self, homeos: tuple, z: StateVector) -> StateVector:
        """Transport ``z`` along one closed homeomorphism per part."""
        if len(homeos) != len(z.parts) or any(h.source != p for h, p in zip(homeos, z.parts)):
            raise BoundaryMismatch("homeomorphisms do not start at the parts of the vector")
        targets = tuple(h.target for h in homeos)
        domain = self.space(targets)
        pb = self.fields.closed_pullback
        if len(homeos) == 1:
            (h,) = homeos
            mapping = {f: pb(h, f) for f in domain}
        else:
            mapping = {key: tuple(pb(h, f) for h, f in zip(homeos, key)) for key in domain}
        return StateVector(targets, pullback(mapping, z.vec, domain))

    def tensor_states(self, kind: str, z: StateVector, z2: StateVector) -> StateVector:
        """Ordered disjoint union of state vectors, part by part.

        ``kind`` picks the monoidal (``"m"``) or composition (``"c"``) product.
        """
        if len(z.parts) != len(z2.parts):
            raise BoundaryMismatch("state vectors have different numbers of parts")
        prod = self.Q.mon_product if kind == "m" else self.Q.comp_product
        if kind not in ("m", "c"):
            raise ValueError(f"unknown tensor kind {kind!r}")
        join, union = self.fields.join_closed, self.model.closed_union
        pairs = list(zip(z.parts, z2.parts))
        parts = tuple(union(a, b) for a, b in pairs)
        single = len(pairs) == 1
        # state vectors take few distinct values: multiply each pair of values once
        products: dict = {}
        data = {}
        for k1, x in z.items():
            k1 = (k1,) if single else k1
            for k2, y in z2.items():
                v = products.get((x, y))
                if v is None:
                    v = products[(x, y)] = prod(x, y)
                if v.is_zero():
                    continue
                k2 = (k2,) if single else k2
                key = tuple(join(a, b, f, g) for (a, b), f, g in zip(pairs, k1, k2))
                data[key[0] if single else key] = v
        return self._vector(parts, data)

    def contract_states(self, z: StateVector, z2: StateVector) -> StateVector:
        """Sum over the shared part: the last of ``z`` and the first of ``z2``."""
        if len(z.parts) < 2:
            raise BoundaryMismatch("left state vector needs two parts")
        if z.parts[-1] != z2.parts[0]:
            raise BoundaryMismatch(f"cannot glue along {z.parts[-1]!r} and {z2.parts[0]!r}")
        vec = inner(z.vec, z2.vec, self.Q.comp)
        return StateVector(z.parts[:-1] + z2.parts[1:], vec)

    def add_states(self, z: StateVector, z2: StateVector) -> StateVector:
        if z.parts != z2.parts:
            raise BoundaryMismatch("state vectors live on different objects")
        return StateVector(z.parts, pointwise("add", z.vec, z2.vec))

    def pointwise_product(self, kind: str, z: StateVector, z2: StateVector) -> StateVector:
        if z.parts != z2.parts:
            raise BoundaryMismatch("state vectors live on different objects")
        S = self.Q.mon if kind == "m" else self.Q.comp
        return StateVector(z.parts, pointwise("mul", z.vec, z2.vec, S).with_semiring(self.Q.comp))

    def counit(self, z: StateVector) -> ConvElement:
        return self.Q.sum(v for _, v in z.items())

    def partial_counit(self, side: str, z: StateVector) -> StateVector:
        """Sum out the first (``side="left"``) or last (``"right"``) part."""
        if len(z.parts) != 2:
            raise BoundaryMismatch("partial counits need a two-part vector")
        keep = 1 if side == "left" else 0
        if side not in ("left", "right"):
            raise ValueError(f"unknown side {side!r}")
        data: dict = {}
        for key, v in z.items():
            k = key[keep]
            data[k] = self.Q.add(data[k], v) if k in data else v
        return self._vector((z.parts[keep],), data)

    def frobenius_witness(self, z: StateVector, kind: str) -> tuple[StateVector, ConvElement]:
        """A vector pairing nontrivially with a nonzero ``z``.

        The witness is the indicator of the isotopy class of the first
        field where ``z`` is nonzero, valued in the unit of the chosen
        product.  Returns the witness and the pairing.
        """
        if not len(z.vec):
            raise EngineError("the zero vector has no witness")
        first = next(iter(z.vec.support()))
        key = first if len(z.parts) > 1 else (first,)
        blocks = []
        for part, f in zip(z.parts, key):
            blocks.append(next(c for c in self.fields.isotopy_classes(part) if f in c))
        cells = list(product(*blocks)) if len(blocks) > 1 else list(blocks[0])
        one = self.Q.one_mon() if kind == "m" else self.Q.one_comp()
        witness = StateVector(z.parts, FunVector(z.vec.ground, self.Q.comp, {c: one for c in cells}, check=False))
        pairing = self.counit(self.pointwise_product(kind, z, witness))
        return witness, pairing

    def cylinder_vector(self, M) -> StateVector:
        return self.state_vector(self.model.cylinder(M))

    def projection(self, z: StateVector) -> StateVector:
        """Glue the cylinder over the first part onto ``z``."""
        return self.contract_states(self.cylinder_vector(z.parts[0]), z)

    def coboundary_aggregate(self, M, catalog) -> StateVector:
        """Sum of the state vectors of a finite catalog of bordisms from nothing to ``M``."""
        model = self.model
        vectors = []
        for W in catalog:
            if model.incoming(W) != model.empty_closed or model.outgoing(W) != M:
                raise BoundaryMismatch(f"{W!r} is not a bordism from nothing to {M!r}")
            vectors.append(self.state_vector(W).vec)
        if not vectors:
            return self.zero_state((model.empty_closed, M))
        return StateVector((model.empty_closed, M), sum_vectors(vectors))

    def render(self, x):
        """JSON form of state vectors (with field values as the fields render them) and elements."""
        if not isinstance(x, StateVector):
            return jsonable(x)
        fields = self.fields
        single = len(x.parts) == 1

        def key(k):
            ks = (k,) if single else k
            return [fields.field_to_json(p, f) for p, f in zip(x.parts, ks)]

        return {
            "parts": [jsonable(p) for p in x.parts],
            "values": [[key(k), v.to_json()] for k, v in x.items()],
        }

    # helpers for checks

    def random_state(self, parts: tuple, rng: random.Random, density: float = 0.3) -> StateVector:
        data = {}
        for key in self.space(parts):
            if rng.random() < density:
                v = self.Q.sample(rng, size=2)
                if not v.is_zero():
                    data[key] = v
        return self._vector(parts, data)

    def linearize(self, rep: Representation, samples: int = 200, seed: int = 0) -> "TFT":
        if rep.source is not self.category and rep.source != self.category:
            raise InvalidRepresentation("representation starts at a different category")
        report = rep.check(samples, seed)
        if not report.passed:
            raise InvalidRepresentation(f"not a strict monoidal functor: {', '.join(report.failed())}")
        return TFT(
            f"{self.name}-linearized",
            self.model,
            self.fields,
            LinearizedAction(self.action, rep),
            self.semiring,
            self.subdivision_invariant,
            self.params,
        )
