"""Ready-made TFT instances and the counting identities they produce."""
from __future__ import annotations

from fractions import Fraction

from ..engine import TFT, Representation
from ..funalg import FunVector
from ..moncat import MatMorphism, trivial_category
from ..semiring import Boolean, NatInf, Semiring, semiring_from_json
from .catalog import CatalogModel, SignatureAction, SingleFields
from .graphs import (
    ConstantAction,
    GraphModel,
    LocallyConstantFields,
    MaxAction,
    StepFields,
    ZeroAvoidingAction,
)
from .multisets import Multiset, MultisetModel, OmegaAction, SubmultisetFields, TrivialAction
from .polya import (
    GSet,
    PairSubsetFields,
    PolyaAction,
    PolyaModel,
    close_group,
    cycle_index_sum,
    cyclic_group,
    dihedral_group,
    fixed_point_sum,
    orbit_count_union_find,
    stabilizer_sum,
)

INSTANCE_NAMES = (
    "max-lc",
    "max-step",
    "iv-lc",
    "iv-step",
    "delta",
    "signature",
    "polya",
    "divisor",
    "omega-divisor",
)


class UnknownInstance(ValueError):
    pass


def grid(k: int, signed: bool = False) -> list[int]:
    """Labels of the grid ``{0, 1/k, ..., 1}`` (or ``-1 .. 1``) in units of ``1/k``."""
    if k < 1:
        raise ValueError("the grid needs k >= 1")
    return list(range(-k if signed else 0, k + 1))


def _semiring(value, default: Semiring) -> Semiring:
    if value is None:
        return default
    if isinstance(value, Semiring):
        return value
    return semiring_from_json(value)


def build_instance(
    name: str,
    k: int = 1,
    nmax: int = 2,
    semiring=None,
    group: str = "cyclic",
    degree: int = 3,
    colors: int = 2,
    generators=None,
    gset: GSet | None = None,
    max_edges: int = 8,
    max_points: int = 2,
) -> TFT:
    """Build one of :data:`INSTANCE_NAMES`.

    ``k`` is the grid resolution of the max and iv instances, ``nmax`` the
    largest value of the delta instance.  The polya instance acts on
    colorings of ``degree`` beads with ``colors`` colours by the cyclic or
    dihedral group, or by explicit ``generators``, unless ``gset`` is given.
    """
    params = {"k": k, "nmax": nmax}
    if name in ("max-lc", "max-step", "iv-lc", "iv-step", "delta"):
        model = GraphModel(max_edges=max_edges, max_points=max_points)
        family, mode = (name.split("-") + ["lc"])[:2]
        if family == "max":
            values, action = grid(k), MaxAction(k)
        elif family == "iv":
            values, action = grid(k, signed=True), ZeroAvoidingAction()
        else:
            if nmax < 0:
                raise ValueError("nmax must be >= 0")
            values, action = list(range(nmax + 1)), ConstantAction(trivial_category())
        scale = 1 if family == "delta" else k
        fields = (LocallyConstantFields if mode == "lc" else StepFields)(values, scale)
        default = Boolean() if family == "delta" else NatInf()
        return TFT(name, model, fields, action, _semiring(semiring, default), mode == "lc", params)
    if name == "signature":
        return TFT(name, CatalogModel(max_points=max_points), SingleFields(), SignatureAction(), _semiring(semiring, NatInf()))
    if name == "polya":
        if gset is None:
            if generators is not None:
                perms = close_group(generators, degree)
            elif group == "dihedral":
                perms = dihedral_group(degree)
            else:
                perms = cyclic_group(degree)
            gset = GSet.colorings(perms, degree, colors)
        params.update(degree=degree, colors=colors)
        return TFT(name, PolyaModel(gset), PairSubsetFields(gset), PolyaAction(gset), _semiring(semiring, NatInf()), True, params)
    if name in ("divisor", "omega-divisor"):
        action = TrivialAction() if name == "divisor" else OmegaAction()
        return TFT(name, MultisetModel(), SubmultisetFields(), action, _semiring(semiring, NatInf()))
    raise UnknownInstance(f"unknown instance {name!r}; choose from {', '.join(INSTANCE_NAMES)}")


def closed_value(inst: TFT, W):
    """The state sum of a bordism with empty boundary."""
    z = inst.state_vector(W)
    e = inst.model.empty_closed
    key = (inst.fields.closed_fields(e)[0],) * 2
    return z[key]


# Polya counting


def polya_counts(gset: GSet, colors: int | None = None) -> dict:
    """The quantities that orbit counting equates, each computed separately.

    ``state_sum`` evaluates the state sum of the whole G-set at ``chi``;
    ``by_orbits`` multiplies the state sums of the single orbits with the
    monoidal product first.  ``cycle_sum`` needs ``colors`` and only makes
    sense for colourings.
    """
    inst = build_instance("polya", gset=gset)
    Q = inst.Q
    W = frozenset(gset.points)
    whole = closed_value(inst, W)["chi"]
    product_over_orbits = Q.one_mon()
    for orbit in gset.orbits:
        product_over_orbits = Q.mon_product(product_over_orbits, closed_value(inst, orbit))
    counts = {
        "state_sum": whole,
        "by_orbits": product_over_orbits["chi"],
        "stabilizer_sum": stabilizer_sum(gset),
        "fixed_point_sum": fixed_point_sum(gset),
        "orbits_times_order": orbit_count_union_find(gset) * len(gset.group),
    }
    if colors is not None:
        counts["cycle_sum"] = cycle_index_sum(gset.group, colors)
    return counts


def polya_report(group, degree: int, colors: int) -> dict:
    gset = GSet.colorings(group, degree, colors)
    counts = polya_counts(gset, colors)
    orbits = orbit_count_union_find(gset)
    return {
        "group_order": len(group),
        "degree": degree,
        "colors": colors,
        "orbits": orbits,
        "counts": counts,
        "match": len(set(counts.values())) == 1,
    }


# divisors


def divisor_state_sum(inst: TFT, n: int):
    return closed_value(inst, Multiset.of(n))


def omega_vector(inst: TFT, n: int) -> list:
    """Values of the omega-divisor state sum at 0, 1, ..., up to the top degree."""
    z = divisor_state_sum(inst, n)
    top = max(z.support(), default=0)
    return [z[i] for i in range(top + 1)]


# linearization


def polya_representation(inst: TFT) -> Representation:
    """``1`` goes to the 1x1 identity and both ``chi`` and ``mu`` to zero."""
    one, zero = MatMorphism.of([[1]]), MatMorphism.of([[0]])
    return Representation(inst.category, {"*": 1}, {"1": one, "chi": zero, "mu": zero})


def powers_of_two_representation(category) -> Representation:
    """``k`` goes to the 1x1 matrix ``[2^k]`` on the integer monoid."""
    return Representation(
        category, lambda x: 1, lambda m: MatMorphism.of([[Fraction(2) ** m]]), window=tuple(range(0, 11))
    )


def as_vector(inst: TFT, mapping: dict, parts: tuple) -> FunVector:
    return FunVector(inst.space(parts), inst.Q.comp, mapping)
