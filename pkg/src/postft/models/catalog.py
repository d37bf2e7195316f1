"""Catalog bordisms: labelled boundaries plus an integer signature.

A catalog entry stands for a bordism of which only the boundary labels and
the signature are recorded.  Gluing adds signatures, so every field (there
is exactly one) has the signature as its action in the integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from ..engine import ActionSystem, BordismModel, BoundaryMismatch, ClosedHomeo, EngineError, FieldsSystem
from ..moncat import IntegerMonoid
from .signature import signature_of_form

STAR = "*"


@dataclass(frozen=True)
class CatalogBordism:
    incoming: tuple = ()
    outgoing: tuple = ()
    signature: int = 0

    def __post_init__(self):
        object.__setattr__(self, "incoming", tuple(self.incoming))
        object.__setattr__(self, "outgoing", tuple(self.outgoing))
        if type(self.signature) is not int:
            raise EngineError("signatures are integers")

    def to_json(self):
        return {"in": list(self.incoming), "out": list(self.outgoing), "signature": self.signature}

    @classmethod
    def from_json(cls, doc: dict) -> "CatalogBordism":
        if "form" in doc:
            sig = signature_of_form(doc["form"])
            if "signature" in doc and int(doc["signature"]) != sig:
                raise EngineError(f"stated signature {doc['signature']} differs from the form's {sig}")
        else:
            sig = int(doc.get("signature", 0))
        return cls(tuple(doc.get("in", ())), tuple(doc.get("out", ())), sig)


@dataclass(frozen=True)
class LabelHomeo:
    source: CatalogBordism
    target: CatalogBordism
    perm_in: tuple
    perm_out: tuple


def _label_perms(src: tuple, tgt: tuple) -> list[tuple]:
    if sorted(src) != sorted(tgt):
        return []
    return [p for p in permutations(range(len(src))) if all(tgt[p[i]] == src[i] for i in range(len(src)))]


class CatalogModel(BordismModel):
    empty_closed = ()

    def __init__(self, labels=("a", "b"), max_points: int = 2, max_signature: int = 3):
        self.labels = tuple(labels)
        self.max_points = max_points
        self.max_signature = max_signature

    def incoming(self, W):
        return W.incoming

    def outgoing(self, W):
        return W.outgoing

    def closed_union(self, M, N):
        return tuple(M) + tuple(N)

    def empty_bordism(self):
        return CatalogBordism()

    def union(self, W1, W2):
        return CatalogBordism(W1.incoming + W2.incoming, W1.outgoing + W2.outgoing, W1.signature + W2.signature)

    def glue(self, W1, W2):
        if W1.outgoing != W2.incoming:
            raise BoundaryMismatch(f"cannot glue {W1.outgoing!r} to {W2.incoming!r}")
        return CatalogBordism(W1.incoming, W2.outgoing, W1.signature + W2.signature)

    def cylinder(self, M):
        return CatalogBordism(M, M, 0)

    def cup(self, M):
        return CatalogBordism((), tuple(M) + tuple(M), 0)

    def cap(self, M):
        return CatalogBordism(tuple(M) + tuple(M), (), 0)

    def isomorphisms(self, W1, W2, limit: int = 5000):
        if W1.signature != W2.signature:
            return []
        out = []
        for pi, po in product(_label_perms(W1.incoming, W2.incoming), _label_perms(W1.outgoing, W2.outgoing)):
            out.append(LabelHomeo(W1, W2, pi, po))
            if len(out) >= limit:
                break
        return out

    def boundary_homeos(self, phi: LabelHomeo):
        return (
            ClosedHomeo(phi.source.incoming, phi.target.incoming, phi.perm_in),
            ClosedHomeo(phi.source.outgoing, phi.target.outgoing, phi.perm_out),
        )

    def compose_homeos(self, phi, psi):
        return LabelHomeo(
            phi.source,
            psi.target,
            tuple(psi.perm_in[i] for i in phi.perm_in),
            tuple(psi.perm_out[i] for i in phi.perm_out),
        )

    def closed_homeomorphisms(self, M, N):
        return [ClosedHomeo(M, N, p) for p in _label_perms(tuple(M), tuple(N))]

    def closed_identity(self, M):
        return ClosedHomeo(M, M, tuple(range(len(M))))

    def random_closed(self, rng):
        return tuple(rng.choice(self.labels) for _ in range(rng.randint(0, self.max_points)))

    def random_bordism(self, rng, incoming=None, outgoing=None):
        return CatalogBordism(
            self.random_closed(rng) if incoming is None else incoming,
            self.random_closed(rng) if outgoing is None else outgoing,
            rng.randint(-self.max_signature, self.max_signature),
        )

    def random_glue_pair(self, rng):
        W1 = self.random_bordism(rng)
        return W1, self.random_bordism(rng, incoming=W1.outgoing)

    def random_union_pair(self, rng):
        return self.random_bordism(rng), self.random_bordism(rng)

    def random_copy(self, rng, W):
        ins, outs = list(W.incoming), list(W.outgoing)
        rng.shuffle(ins)
        rng.shuffle(outs)
        return CatalogBordism(tuple(ins), tuple(outs), W.signature)

    def random_coboundary(self, rng, M):
        return self.random_bordism(rng, incoming=(), outgoing=M)

    def bordism_from_json(self, doc):
        return CatalogBordism.from_json(doc)

    def bordism_to_json(self, W):
        return W.to_json()

    def closed_from_json(self, doc):
        return tuple(doc)


class SingleFields(FieldsSystem):
    """Exactly one field on everything."""

    def closed_fields(self, M):
        return [STAR]

    def bordism_fields(self, W):
        yield STAR

    def boundary(self, W, F):
        return STAR, STAR

    def split_closed(self, M, N, f):
        return STAR, STAR

    def join_closed(self, M, N, f, g):
        return STAR

    def split_union(self, W1, W2, F):
        return STAR, STAR

    def join_union(self, W1, W2, F1, F2):
        return STAR

    split_glue = split_union

    def join_glue(self, W1, W2, F1, F2):
        return STAR

    def pullback(self, phi, F):
        return STAR

    def closed_pullback(self, phi, f):
        return STAR


class SignatureAction(ActionSystem):
    def __init__(self):
        self.category = IntegerMonoid()

    def act(self, W, F):
        return W.signature
