import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postft.funalg import (
    FunVector,
    GroundSet,
    GroundSetMismatch,
    ShapeMismatch,
    check_laws,
    contract,
    inner,
    pointwise,
    pullback,
    random_vector,
    tensor,
)
from postft.semiring import INF, Boolean, FormalLanguage, NatInf, Tropical

N = NatInf()
A, B, C = GroundSet(range(3), "A"), GroundSet(range(4), "B"), GroundSet(range(2), "C")
AB, BC = GroundSet.product(A, B), GroundSet.product(B, C)


def as_array(f: FunVector, rows: GroundSet, cols: GroundSet) -> np.ndarray:
    return np.array([[f[(r, c)] for c in cols] for r in rows], dtype=object)


def finite_vector(ground, rng, hi=9):
    return FunVector(ground, N, {k: rng.randint(0, hi) for k in ground if rng.random() < 0.6})


def test_inner_is_matrix_multiplication():
    rng = random.Random(0)
    for _ in range(40):
        f, g = finite_vector(AB, rng), finite_vector(BC, rng)
        expected = as_array(f, A, B).dot(as_array(g, B, C))
        assert (as_array(inner(f, g), A, C) == expected).all()


def test_inner_with_vector_is_matrix_vector_product():
    rng = random.Random(1)
    f = finite_vector(AB, rng)
    v = finite_vector(B, rng)
    expected = as_array(f, A, B).dot(np.array([v[b] for b in B], dtype=object))
    out = inner(f, v)
    assert out.ground == A
    assert [out[a] for a in A] == list(expected)


def test_tropical_inner_is_min_plus():
    T = Tropical()
    f = FunVector(AB, T, {(0, 0): 1, (0, 1): 5})
    g = FunVector(BC, T, {(0, 1): 7, (1, 1): 2})
    assert inner(f, g)[(0, 1)] == 7
    assert inner(f, g)[(0, 0)] == INF


def test_contract_of_tensor_is_inner():
    rng = random.Random(2)
    for _ in range(20):
        f, g = finite_vector(AB, rng), finite_vector(BC, rng)
        assert contract(tensor(f, g)) == inner(f, g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_inner_associative_over_words(seed):
    rng = random.Random(seed)
    L = FormalLanguage(("a", "b"))
    CD = GroundSet.product(C, GroundSet(range(2), "D"))
    f, g, h = (random_vector(G, L, rng) for G in (AB, BC, CD))
    assert inner(inner(f, g), h) == inner(f, inner(g, h))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_tensor_is_bilinear(seed):
    rng = random.Random(seed)
    f, f2, g = finite_vector(A, rng), finite_vector(A, rng), finite_vector(B, rng)
    assert tensor(pointwise("add", f, f2), g) == pointwise("add", tensor(f, g), tensor(f2, g))


@pytest.mark.parametrize("S", [NatInf(), FormalLanguage(("a", "b")), Boolean()], ids=lambda S: S.carrier)
def test_law_suite(S):
    report = check_laws(S, samples=40, seed=4)
    assert report.passed, report.failed()


def test_law_suite_catches_a_contraction_over_half_the_middle_factor():
    def half_inner(f, g, semiring=None):
        mid = f.ground.factors[-1]
        kept = set(list(mid)[: len(mid) // 2])
        trimmed = FunVector(f.ground, f.semiring, {k: v for k, v in f.items() if k[-1] in kept})
        return inner(trimmed, g, semiring)

    report = check_laws(NatInf(), sizes=(2, 4, 2, 2), samples=40, seed=0, inner_product=half_inner)
    assert not report.passed
    assert "inner_is_contracted_tensor" in report.failed()


def test_pullback_along_a_permutation():
    g = FunVector(A, N, {0: 1, 2: 5})
    swapped = pullback({0: 2, 1: 1, 2: 0}, g, A)
    assert swapped[0] == 5 and swapped[2] == 1 and swapped[1] == 0


def test_zeros_are_dropped_and_keys_checked():
    f = FunVector(A, N, {0: 0, 1: 3})
    assert f.support() == [1]
    with pytest.raises(GroundSetMismatch):
        FunVector(A, N, {7: 1})
    with pytest.raises(GroundSetMismatch):
        f[9]


def test_shape_errors():
    f = FunVector(AB, N, {})
    with pytest.raises(ShapeMismatch):
        inner(f, FunVector(GroundSet.product(C, A), N, {}))
    with pytest.raises(ShapeMismatch):
        contract(tensor(f, FunVector(GroundSet.product(C, C), N, {})))
    with pytest.raises(ShapeMismatch):
        GroundSet.product(A, B, C, A, B)
    with pytest.raises(GroundSetMismatch):
        pointwise("add", FunVector(A, N, {}), FunVector(B, N, {}))
    with pytest.raises(GroundSetMismatch):
        pointwise("add", FunVector(A, N, {}), FunVector(A, Boolean(), {}))


def test_products_flatten():
    ABC = GroundSet.product(AB, C)
    assert ABC.arity == 3
    assert len(ABC) == 24
    assert (0, 3, 1) in ABC and (0, 3) not in ABC
