import json
import math
import random
from collections import Counter
from fractions import Fraction
from itertools import permutations, product
from pathlib import Path

import numpy as np
import pytest

from postft.engine import BoundaryMismatch, EngineError
from postft.models.catalog import CatalogBordism
from postft.models.graphs import Graph1Bordism, InvalidGraph, strands_graph, turnback_graph
from postft.models.instances import (
    build_instance,
    closed_value,
    divisor_state_sum,
    omega_vector,
    polya_counts,
    polya_report,
)
from postft.models.multisets import Multiset, divisor_count, factorize, omega_profile
from postft.models.polya import (
    GSet,
    cyclic_group,
    dihedral_group,
    fixed_point_sum,
    orbit_count_union_find,
)
from postft.models.signature import FormError, e8_form, signature_of_form, sturm_signature

DATA = Path(__file__).resolve().parents[1] / "data"


# graphs


def path_graph(edges: int) -> Graph1Bordism:
    return Graph1Bordism(edges + 1, tuple((i, i + 1) for i in range(edges)), (0,), (edges,))


@pytest.mark.parametrize(
    "n, edges, ins, outs",
    [
        (2, ((0, 0),), (), ()),
        (3, ((0, 1), (1, 2)), (), ()),
        (2, ((0, 1),), (0, 0), ()),
        (3, ((0, 1), (1, 2)), (0, 5), ()),
        (2, ((0, 3),), (), ()),
    ],
)
def test_invalid_graphs(n, edges, ins, outs):
    with pytest.raises(InvalidGraph):
        Graph1Bordism(n, edges, ins, outs)


def test_graph_json_relabels_vertices():
    doc = {"edges": [["a", "x"], ["x", "b"]], "in": ["a"], "out": ["b"]}
    W = Graph1Bordism.from_json(doc)
    assert W.n == 3 and len(W.components) == 1
    assert Graph1Bordism.from_json(W.to_json()) == W
    with pytest.raises(InvalidGraph):
        Graph1Bordism.from_json({"edges": [["a"]]})


def brute_isomorphism_count(W1, W2):
    if W1.n != W2.n:
        return 0
    target = Counter(W2.edges)
    count = 0
    for p in permutations(range(W1.n)):
        if {p[v] for v in W1.incoming} != set(W2.incoming):
            continue
        if {p[v] for v in W1.outgoing} != set(W2.outgoing):
            continue
        if Counter(tuple(sorted((p[u], p[v]))) for u, v in W1.edges) == target:
            count += 1
    return count


def test_isomorphisms_match_brute_force():
    model = build_instance("max-lc").model
    rng = random.Random(8)
    checked = 0
    while checked < 30:
        W = model.random_bordism(rng, max_edges=5)
        if W.n > 7:
            continue
        W2 = model.random_copy(rng, W)
        found = model.isomorphisms(W, W2)
        assert len(found) == brute_isomorphism_count(W, W2) > 0
        for phi in found:
            assert Counter(tuple(sorted((phi.vmap[u], phi.vmap[v]))) for u, v in W.edges) == Counter(W2.edges)
        checked += 1


def test_gluing_and_union():
    model = build_instance("max-lc").model
    cyl = model.cylinder(2)
    assert model.glue(cyl, cyl).n == 6
    assert len(model.glue(model.cup(1), model.cap(1)).components) == 1
    with pytest.raises(BoundaryMismatch):
        model.glue(model.cylinder(1), model.cylinder(2))
    assert model.union(cyl, cyl).incoming == (0, 1, 4, 5)


def walk_count(edges: int, k: int, start: int, end: int) -> int:
    """Walks on -k..k with steps of at most one, by matrix powers."""
    size = 2 * k + 1
    T = np.zeros((size, size), dtype=object)
    for i in range(size):
        for j in range(max(0, i - 1), min(size, i + 2)):
            T[i, j] = 1
    P = np.identity(size, dtype=object)
    for _ in range(edges):
        P = P.dot(T)
    return P[start + k, end + k]


@pytest.mark.parametrize("edges", range(1, 9))
@pytest.mark.parametrize("k", [1, 2])
def test_discrete_intermediate_values_on_paths(edges, k):
    inst = build_instance("iv-step", k=k)
    W = path_graph(edges)
    z = inst.state_vector(W)
    for a, b in product(range(-k, k + 1), repeat=2):
        v = z[((a,), (b,))]
        total = sum(c for _, c in v.items())
        assert total == walk_count(edges, k, a, b)
        if a * b < 0:
            # a sign change forces a zero somewhere along the path
            assert v.support() in ([], ["0"])
    # one edge cannot climb from -1 to 1
    assert z[((-1,), (1,))].is_zero() == (edges == 1)


def test_strands_and_turnbacks_are_separated():
    inst = build_instance("iv-step", k=1)
    boundary = ((1, -1), (1, -1))
    strands = inst.state_sum(strands_graph(), boundary)
    turnback = inst.state_sum(turnback_graph(), boundary)
    assert "1" in strands.support()
    assert turnback.support() == ["0"]
    doc = json.loads((DATA / "strands.json").read_text())
    assert Graph1Bordism.from_json(doc) == strands_graph()


# multisets and divisors


def test_factorize_and_multiset_arithmetic():
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    with pytest.raises(EngineError):
        factorize(0)
    with pytest.raises(EngineError):
        Multiset(((4, 1),))
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.randint(1, 5000), rng.randint(1, 5000)
        A, B = Multiset.of(a), Multiset.of(b)
        assert (A & B).value == math.gcd(a, b)
        assert (A | B).value == math.lcm(a, b)
        assert (A + B).value == a * b
        assert (A <= B) == (b % a == 0)


def test_divisor_counts_up_to_a_thousand():
    inst = build_instance("divisor")
    unit = inst.category.unit_identity
    for n in range(1, 1001):
        expected = math.prod(e + 1 for _, e in factorize(n))
        assert divisor_state_sum(inst, n)[unit] == expected == divisor_count(n)


def test_divisor_count_is_multiplicative_on_coprime_pairs():
    inst = build_instance("divisor")
    model = inst.model
    rng = random.Random(3)
    for _ in range(100):
        W1, W2 = model.random_union_pair(rng)
        both = closed_value(inst, model.union(W1, W2))
        assert both == inst.Q.mon_product(closed_value(inst, W1), closed_value(inst, W2))
    with pytest.raises(BoundaryMismatch):
        model.union(Multiset.of(6), Multiset.of(10))


def test_omega_profile():
    inst = build_instance("omega-divisor")
    assert omega_vector(inst, 12) == [1, 2, 2, 1]
    assert omega_profile(12) == [1, 2, 2, 1]
    product_ = inst.Q.mon_product(divisor_state_sum(inst, 4), divisor_state_sum(inst, 3))
    assert product_ == divisor_state_sum(inst, 12)
    for n in range(1, 301):
        assert omega_vector(inst, n) == omega_profile(n)


# Polya counting


def necklaces(n: int, c: int) -> int:
    return sum(c ** math.gcd(n, i) for i in range(n)) // n


def brute_orbits(group, degree, colors):
    canon = set()
    for w in product(range(colors), repeat=degree):
        canon.add(min(tuple(w[g[x]] for x in range(degree)) for g in group))
    return len(canon)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("colors", [1, 2, 3])
def test_cyclic_colourings(n, colors):
    report = polya_report(cyclic_group(n), n, colors)
    assert report["match"], report
    assert report["orbits"] == necklaces(n, colors) == brute_orbits(cyclic_group(n), n, colors)
    assert report["counts"]["state_sum"] == report["orbits"] * n


@pytest.mark.parametrize("colors", [1, 2, 3])
def test_dihedral_colourings(colors):
    group = dihedral_group(4)
    assert len(group) == 8
    report = polya_report(group, 4, colors)
    assert report["match"]
    assert report["orbits"] == brute_orbits(group, 4, colors)


def test_known_orbit_counts():
    assert polya_report(cyclic_group(3), 3, 2)["orbits"] == 4
    assert polya_report(cyclic_group(4), 4, 2)["orbits"] == 6
    assert polya_report(dihedral_group(4), 4, 3)["orbits"] == 21


def test_burnside_on_the_base_set():
    for group, degree in ((cyclic_group(5), 5), (dihedral_group(4), 4)):
        gset = GSet.base(group, degree)
        counts = polya_counts(gset)
        assert len(set(counts.values())) == 1
        assert orbit_count_union_find(gset) == 1
        assert fixed_point_sum(gset) == len(group)


def test_orbit_state_sums_are_exact_for_large_gsets():
    # C6 on 3 colours has 780 stabilizer pairs: far beyond listing subsets
    gset = GSet.colorings(cyclic_group(6), 6, 3)
    counts = polya_counts(gset, 3)
    assert counts["state_sum"] == 130 * 6
    inst = build_instance("polya", degree=6, colors=3)
    z = closed_value(inst, frozenset(gset.points))
    n = 780
    assert z["mu"] == 2**n - 1 - n


# signature


def numpy_signature(rows) -> int:
    ev = np.linalg.eigvalsh(np.array(rows, dtype=float))
    tol = 1e-9 * max(1.0, float(np.abs(ev).max(initial=0)))
    return int((ev > tol).sum() - (ev < -tol).sum())


def test_signature_matches_sturm_and_numpy():
    rng = random.Random(12)
    for _ in range(50):
        n = rng.randint(1, 8)
        B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, n))]
        # Gram matrices give forms with zero eigenvalues too
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        for rows in (
            [[A[i][j] + A[j][i] for j in range(n)] for i in range(n)],
            [[sum(B[r][i] * B[r][j] for r in range(len(B))) for j in range(n)] for i in range(n)],
        ):
            s = signature_of_form(rows)
            assert s == sturm_signature(rows) == numpy_signature(rows)


def test_signature_examples():
    assert signature_of_form([[1]]) == 1
    assert signature_of_form([[0]]) == 0
    assert signature_of_form(e8_form()) == 8
    assert signature_of_form([[0, 1], [1, 0]]) == 0
    assert signature_of_form([[Fraction(1, 2), 0], [0, -3]]) == 0
    assert sturm_signature(e8_form()) == 8
    with pytest.raises(FormError):
        signature_of_form([[1, 2], [3, 4]])
    with pytest.raises(FormError):
        signature_of_form([[1, 2]])


# catalog bordisms


def test_catalog_model():
    inst = build_instance("signature")
    model = inst.model
    W1 = CatalogBordism((), ("a",), 2)
    W2 = CatalogBordism(("a",), (), -5)
    assert closed_value(inst, model.glue(W1, W2))[-3] == 1
    with pytest.raises(BoundaryMismatch):
        model.glue(W1, W1)
    ab = CatalogBordism(("a", "b", "a"), (), 1)
    assert len(model.isomorphisms(ab, CatalogBordism(("a", "a", "b"), (), 1))) == 2
    assert model.isomorphisms(ab, CatalogBordism(("a", "a", "b"), (), 0)) == []


def test_catalog_forms():
    doc = json.loads((DATA / "closed-e8.json").read_text())
    assert CatalogBordism.from_json(doc).signature == 8
    with pytest.raises(EngineError):
        CatalogBordism.from_json({"form": [[1]], "signature": 2})


def test_catalog_aggregate():
    inst = build_instance("signature")
    doc = json.loads((DATA / "catalog-a.json").read_text())
    catalog = [inst.model.bordism_from_json(b) for b in doc["bordisms"]]
    z = inst.coboundary_aggregate(("a",), catalog)
    value = z[("*", "*")]
    assert dict(value.items()) == {-2: 1, 0: 1, 1: 2}
    with pytest.raises(BoundaryMismatch):
        inst.coboundary_aggregate(("b",), catalog)
