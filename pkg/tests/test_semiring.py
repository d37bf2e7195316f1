import json
import random
from fractions import Fraction
from functools import reduce
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postft.semiring import (
    CARRIERS,
    INF,
    NEG_INF,
    Arctic,
    BinaryRelation,
    Boolean,
    DescriptorMismatch,
    FormalLanguage,
    Matrix,
    NatInf,
    RatInf,
    SemiringError,
    Tropical,
    check_laws,
    parse_number,
    render_number,
    semiring_from_json,
    standard_semirings,
)

finite_rat = st.fractions(min_value=0, max_value=50, max_denominator=12)
nat = st.one_of(st.integers(0, 10**6), st.just(INF))
rat = st.one_of(finite_rat, st.just(INF))
arctic = st.one_of(finite_rat, st.just(INF), st.just(NEG_INF))
words = st.frozensets(st.text(alphabet="ab", max_size=3), max_size=4)
relations = st.frozensets(st.tuples(st.sampled_from((0, 1, 2)), st.sampled_from((0, 1, 2))))
nat_matrix = st.tuples(st.tuples(nat, nat), st.tuples(nat, nat))

CASES = [
    (Boolean(), st.booleans()),
    (NatInf(), nat),
    (RatInf(), rat),
    (Tropical(), rat),
    (Arctic(), arctic),
    (FormalLanguage(("a", "b")), words),
    (BinaryRelation((0, 1, 2)), relations),
    (Matrix(2, NatInf()), nat_matrix),
]
IDS = [S.carrier for S, _ in CASES]


@pytest.mark.parametrize("S, elems", CASES, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_semiring_axioms_hold(S, elems, data):
    a, b, c = (data.draw(elems) for _ in range(3))
    assert S.add(S.add(a, b), c) == S.add(a, S.add(b, c))
    assert S.add(a, b) == S.add(b, a)
    assert S.add(a, S.zero) == a
    assert S.mul(S.mul(a, b), c) == S.mul(a, S.mul(b, c))
    assert S.mul(a, S.one) == a == S.mul(S.one, a)
    assert S.mul(a, S.add(b, c)) == S.add(S.mul(a, b), S.mul(a, c))
    assert S.mul(S.add(a, b), c) == S.add(S.mul(a, c), S.mul(b, c))
    assert S.mul(a, S.zero) == S.zero == S.mul(S.zero, a)
    if S.commutative:
        assert S.mul(a, b) == S.mul(b, a)


@pytest.mark.parametrize("S, elems", CASES, ids=IDS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_sums_regroup_and_distribute(S, elems, data):
    family = data.draw(st.lists(elems, max_size=16))
    a = data.draw(elems)
    cut = data.draw(st.integers(0, len(family)))
    whole = S.sum(family)
    assert S.add(S.sum(family[:cut]), S.sum(family[cut:])) == whole
    assert S.sum(reversed(family)) == whole
    assert S.sum(S.mul(a, x) for x in family) == S.mul(a, whole)
    assert S.sum(S.mul(x, a) for x in family) == S.mul(whole, a)
    if S.add(a, a) == S.zero:
        assert a == S.zero


@pytest.mark.parametrize("S, elems", CASES, ids=IDS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_repeat_is_iterated_sum(S, elems, data):
    a = data.draw(elems)
    k = data.draw(st.integers(0, 7))
    assert S.repeat(k, a) == reduce(S.add, [a] * k, S.zero)


@pytest.mark.parametrize("S", standard_semirings(), ids=lambda S: S.carrier)
def test_law_suite_passes_for_every_carrier(S):
    report = check_laws(S, samples=200, seed=3)
    assert report.passed, report.failed()
    assert report.checks["partition"].cases == 200


def test_law_suite_flags_a_non_distributive_structure():
    class PlusMax(NatInf):
        carrier = "plus-max"

        def times(self, a, b):
            return max(a, b)

    report = check_laws(PlusMax(), samples=100, seed=0)
    assert "left_distrib" in report.failed()
    bad = report.checks["left_distrib"].counterexample
    a, b, c = bad
    assert max(a, b + c) != max(a, b) + max(a, c)


def test_law_suite_is_reproducible():
    one = json.dumps(check_laws(RatInf(), samples=50, seed=9).to_json(), sort_keys=True)
    two = json.dumps(check_laws(RatInf(), samples=50, seed=9).to_json(), sort_keys=True)
    assert one == two


def test_infinity_conventions():
    N = NatInf()
    assert N.mul(0, INF) == 0 and N.mul(INF, 0) == 0
    assert N.mul(3, INF) == INF
    assert N.add(INF, 4) == INF
    assert N.repeat(INF, 0) == 0
    assert N.repeat(INF, 2) == INF
    A = Arctic()
    assert A.mul(NEG_INF, INF) == NEG_INF
    assert A.mul(INF, 2) == INF
    T = Tropical()
    assert T.zero == INF and T.one == 0
    assert T.add(3, Fraction(5, 2)) == Fraction(5, 2)


def test_idempotent_repeat():
    assert Boolean().repeat(5, True) is True
    assert Boolean().repeat(0, True) is False
    assert Tropical().repeat(INF, 3) == 3
    lang = FormalLanguage(("a", "b"))
    assert lang.repeat(3, frozenset({"ab"})) == frozenset({"ab"})


def test_repeat_rejects_bad_counts():
    with pytest.raises(SemiringError):
        NatInf().repeat(-1, 2)
    with pytest.raises(SemiringError):
        NatInf().repeat(Fraction(1, 2), 2)


def test_matrix_product_matches_numpy():
    rng = random.Random(5)
    M = Matrix(3, NatInf())
    for _ in range(50):
        a = tuple(tuple(rng.randint(0, 9) for _ in range(3)) for _ in range(3))
        b = tuple(tuple(rng.randint(0, 9) for _ in range(3)) for _ in range(3))
        expected = (np.array(a) @ np.array(b)).tolist()
        assert [list(r) for r in M.mul(a, b)] == expected


def test_tropical_matrix_product_is_shortest_paths():
    M = Matrix(2, Tropical())
    a = ((0, 3), (INF, 0))
    b = ((0, INF), (1, 0))
    # entry (0, 0): min(0 + 0, 3 + 1)
    assert M.mul(a, b) == ((0, 3), (1, 0))


def test_language_product_matches_concatenation():
    L = FormalLanguage(("a", "b"))
    x, y = frozenset({"", "a"}), frozenset({"b", "ab"})
    assert L.mul(x, y) == frozenset(u + v for u, v in product(x, y))
    assert L.mul(y, x) != L.mul(x, y)


def test_relation_product_is_relational_composition():
    R = BinaryRelation((0, 1, 2))
    r = frozenset({(0, 1)})
    s = frozenset({(1, 2)})
    assert R.mul(r, s) == frozenset({(0, 2)})
    assert R.mul(s, r) == frozenset()


def test_matrix_nesting_is_bounded():
    Matrix(2, Matrix(2, NatInf()))
    with pytest.raises(SemiringError):
        Matrix(2, Matrix(2, Matrix(2, NatInf())))


def test_descriptor_mismatch():
    with pytest.raises(DescriptorMismatch):
        NatInf().add(-1, 2)
    with pytest.raises(DescriptorMismatch):
        Boolean().mul(1, True)
    with pytest.raises(DescriptorMismatch):
        FormalLanguage(("a",)).add(frozenset({"b"}), frozenset())
    with pytest.raises(SemiringError):
        FormalLanguage(("ab",))


@pytest.mark.parametrize("S", standard_semirings(), ids=lambda S: S.carrier)
def test_json_round_trip(S):
    rng = random.Random(1)
    assert semiring_from_json(json.loads(json.dumps(S.to_json()))) == S
    for _ in range(30):
        x = S.sample(rng)
        assert S.element_from_json(json.loads(json.dumps(S.element_to_json(x)))) == x


def test_number_rendering():
    assert render_number(INF) == "inf"
    assert render_number(Fraction(3, 4)) == "3/4"
    assert render_number(Fraction(4, 2)) == "2"
    assert parse_number("3/4") == Fraction(3, 4)
    assert parse_number("inf") == INF
    assert parse_number("6/3") == 2 and type(parse_number("6/3")) is int
    with pytest.raises(SemiringError):
        parse_number("x")
    assert Boolean().element_to_json(True) == "1"


def test_unknown_carrier():
    assert len(CARRIERS) == 8
    with pytest.raises(SemiringError):
        semiring_from_json("tropical")
