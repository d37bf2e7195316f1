import random
from collections import Counter

import pytest

from postft.engine import (
    ActionSystem,
    BoundaryMismatch,
    ClosedHomeo,
    ConstraintViolation,
    EngineError,
    InvalidRepresentation,
    Representation,
)
from postft.models.graphs import CappedSumAction, Graph1Bordism
from postft.models.instances import (
    build_instance,
    polya_representation,
    powers_of_two_representation,
)
from postft.moncat import IntegerMonoid, MatMorphism
from postft.semiring import Boolean, Tropical
from postft.verify import check_action_axioms

INTERVAL = Graph1Bordism(4, ((0, 2), (2, 3), (3, 1)), (0,), (1,))


def small_instances():
    return [
        build_instance("max-lc", k=2),
        build_instance("max-step", k=1),
        build_instance("iv-lc", k=1),
        build_instance("iv-step", k=1),
        build_instance("delta", nmax=2),
    ]


@pytest.mark.parametrize("inst", small_instances(), ids=repr)
def test_state_vector_matches_direct_state_sum(inst):
    rng = random.Random(11)
    for _ in range(15):
        W = inst.model.random_bordism(rng, max_edges=6)
        z = inst.state_vector(W)
        M, N = inst.model.incoming(W), inst.model.outgoing(W)
        for b in inst.space((M, N)):
            assert z[b] == inst.state_sum(W, b)


@pytest.mark.parametrize("inst", small_instances(), ids=repr)
def test_fast_histogram_matches_generic(inst):
    rng = random.Random(5)
    for _ in range(20):
        W = inst.model.random_bordism(rng, max_edges=6)
        fast = inst.action.histogram(W, inst.fields)
        assert fast == ActionSystem.histogram(inst.action, W, inst.fields)


def test_locally_constant_field_count():
    inst = build_instance("iv-lc", k=2)
    rng = random.Random(2)
    for _ in range(20):
        W = inst.model.random_bordism(rng)
        assert sum(1 for _ in inst.fields.bordism_fields(W)) == 5 ** len(W.components)


def test_interval_state_vector_by_hand():
    inst = build_instance("max-lc", k=1)
    z = inst.state_vector(INTERVAL)
    Q = inst.Q
    assert z[((0,), (0,))] == Q.char(0)
    assert z[((1,), (1,))] == Q.char(1)
    assert z[((0,), (1,))].is_zero()


def test_counts_become_repeated_units():
    # two components on a closed graph: each field counted once, grouped by action
    inst = build_instance("max-lc", k=1)
    W = Graph1Bordism(6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)))
    value = inst.state_vector(W)[((), ())]
    assert dict(value.items()) == {0: 1, 1: 3}
    boolean = build_instance("max-lc", k=1, semiring=Boolean())
    assert dict(boolean.state_vector(W)[((), ())].items()) == {0: True, 1: True}


def test_state_vectors_are_cached_and_checked():
    inst = build_instance("delta", nmax=1)
    assert inst.state_vector(INTERVAL) is inst.state_vector(INTERVAL)


def test_constraint_violation_is_detected():
    inst = build_instance("max-lc", k=1)

    class Merged(type(inst.fields)):
        def isotopy_classes(self, M):
            return [self.closed_fields(M)]

    merged = Merged(inst.fields.values, inst.fields.scale)
    inst.fields = merged
    with pytest.raises(ConstraintViolation):
        inst.state_vector(INTERVAL)


def test_state_operations():
    inst = build_instance("max-lc", k=1)
    z = inst.state_vector(INTERVAL)
    both = inst.tensor_states("m", z, z)
    assert both.parts == (2, 2)
    assert both[((0, 1), (0, 1))] == inst.Q.char(1)
    glued = inst.contract_states(z, z)
    assert glued == z
    assert inst.add_states(z, inst.zero_state(z.parts)) == z
    assert inst.partial_counit("left", z).parts == (1,)
    assert inst.counit(z) == inst.Q.add(inst.Q.char(0), inst.Q.char(1))


def test_state_operation_errors():
    inst = build_instance("max-lc", k=1)
    z = inst.state_vector(INTERVAL)
    cup = inst.state_vector(inst.model.cup(1))
    with pytest.raises(BoundaryMismatch):
        inst.add_states(z, cup)
    with pytest.raises(BoundaryMismatch):
        inst.contract_states(z, inst.state_vector(inst.model.cylinder(2)))
    with pytest.raises(ValueError):
        inst.tensor_states("x", z, z)
    with pytest.raises(ValueError):
        inst.partial_counit("middle", z)
    with pytest.raises(BoundaryMismatch):
        inst.pushforward((ClosedHomeo(2, 2, (1, 0)),), z)
    with pytest.raises(EngineError):
        inst.frobenius_witness(inst.zero_state(z.parts), "m")


def test_pushforward_along_a_swap():
    inst = build_instance("max-lc", k=1)
    cyl = inst.state_vector(inst.model.cylinder(2))
    swap = ClosedHomeo(2, 2, (1, 0))
    moved = inst.pushforward((swap, inst.model.closed_identity(2)), cyl)
    assert moved[((1, 0), (0, 1))] == inst.Q.char(1)
    assert moved[((0, 1), (0, 1))].is_zero()


def test_frobenius_witness_pairs_nontrivially():
    inst = build_instance("max-lc", k=1)
    z = inst.state_vector(INTERVAL)
    for kind in ("m", "c"):
        _, pairing = inst.frobenius_witness(z, kind)
        assert not pairing.is_zero()


def test_render_uses_field_values():
    inst = build_instance("max-lc", k=2)
    doc = inst.render(inst.state_vector(INTERVAL))
    keys = [k for k, _ in doc["values"]]
    assert [["1/2"], ["1/2"]] in keys


def test_bad_representation_is_rejected():
    inst = build_instance("polya")
    swap = MatMorphism.of([[0, 1], [1, 0]])
    bad = Representation(inst.category, {"*": 1}, {"1": MatMorphism.of([[1, 0], [0, 1]]), "chi": swap, "mu": swap})
    assert not bad.check().passed
    with pytest.raises(InvalidRepresentation):
        inst.linearize(bad)


def test_linearized_polya_instance():
    inst = build_instance("polya", degree=3, colors=2)
    lin = inst.linearize(polya_representation(inst))
    assert check_action_axioms(lin, samples=20, seed=0).passed
    rng = random.Random(0)
    W = inst.model.random_bordism(rng)
    z, zl = inst.state_vector(W), lin.state_vector(W)
    rep = polya_representation(inst)
    for key, v in z.items():
        image = Counter()
        for m, c in v.items():
            image[rep(m)] += c
        assert dict(zl[key].items()) == {m: c for m, c in image.items() if c}


def test_powers_of_two_representation():
    rep = powers_of_two_representation(IntegerMonoid())
    assert rep.check().passed
    assert rep(3) == MatMorphism.of([[8]])


def test_capped_sum_breaks_the_action_axioms():
    inst = build_instance("max-lc", k=4)
    inst.action = CappedSumAction(4)
    report = check_action_axioms(inst, samples=60, seed=0)
    assert {"disjoint", "gluing"} <= set(report.failed())


def test_tropical_values():
    inst = build_instance("max-lc", k=1, semiring=Tropical())
    assert inst.state_vector(INTERVAL)[((0,), (0,))][0] == 0
