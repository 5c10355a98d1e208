# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Tests for charfun module."""

from functools import reduce
from math import gcd

import pytest
import sympy

from orbicoh.charfun import (
    CharacteristicFunction,
    SamplingExhausted,
    ZeroDimensionalFace,
    apply_unimodular,
    exists_coprime_vertex,
    induced,
    mu,
    mu_table,
    nhat_index,
    random_characteristic_function,
    random_primitive_vector,
    validate,
    vertex_dets,
)
from orbicoh.fan import (
    counterexample_pair,
    random_unimodular,
    reference_example,
    weighted_triangle,
)
from orbicoh.lattice import (
    INFINITE,
    from_columns,
    is_primitive,
    primitivize,
    quotient_projection,
    rank,
)
from orbicoh.poset import PosetClass, PosetKind, classify, diamond, prism, simplex


def gcd_all(values):
    return reduce(gcd, values, 0)


def test_validate__weighted_triangle():
    for a in range(1, 11):
        assert validate(*weighted_triangle(a)) == []


def test_validate__not_primitive():
    charfun = CharacteristicFunction(2, [(2, 2), (0, 1), (-1, -1)])
    errors = validate(simplex(2), charfun)
    assert errors == ["Vector [2, 2] of facet 1 is not primitive."]


def test_validate__dependent_at_vertex():
    charfun = CharacteristicFunction(2, [(1, 0), (-1, 0), (1, 0), (0, -1)])
    errors = validate(prism(2), charfun)
    assert "Vectors at Q_{1,+} are linearly dependent." in errors
    assert "Vectors at Q_{2,+} are linearly dependent." in errors
    assert len(errors) == 2


def test_validate__shape():
    assert validate(simplex(2), CharacteristicFunction(3, [(1, 0, 0)] * 3))
    assert validate(simplex(2), CharacteristicFunction(2, [(1, 0), (0, 1)]))
    errors = validate(simplex(2), CharacteristicFunction(2, [(1, 0), (0, 1), (1,)]))
    assert errors == ["Vector [1] of facet 3 has wrong length."]


def test_nhat_index():
    for a in range(1, 8):
        assert nhat_index(weighted_triangle(a)[1]) == a
    for d in range(1, 5):
        assert nhat_index(counterexample_pair(d)[1]) == 1
    assert nhat_index(CharacteristicFunction(2, [(1, 0), (-1, 0)])) is INFINITE


def test_mu_table__weighted_triangle():
    for a in range(1, 8):
        poset, charfun = weighted_triangle(a)
        table = mu_table(poset, charfun)
        assert table[poset.top] == a
        assert all(value == 1 for face, value in table.items() if face.facets)


def test_mu_table__counterexample():
    for d in range(1, 5):
        poset, charfun = counterexample_pair(d)
        assert set(mu_table(poset, charfun).values()) == {1}


def test_mu__faces_of_low_codimension(rng):
    for n in (2, 3, 4):
        poset = prism(n)
        charfun = random_characteristic_function(poset, rng)
        for face in poset.faces:
            if len(face.facets) >= n - 1:
                assert mu(poset, charfun, face) == 1


def test_mu_table__unimodular_invariance(rng):
    for n in (2, 3):
        poset = simplex(n)
        for _ in range(10):
            charfun = random_characteristic_function(poset, rng)
            changed = apply_unimodular(charfun, random_unimodular(n, rng))
            assert mu_table(poset, changed) == mu_table(poset, charfun)
            assert vertex_dets(poset, changed) == vertex_dets(poset, charfun)


def test_apply_unimodular__rejects():
    charfun = CharacteristicFunction(2, [(1, 0), (0, 1)])
    with pytest.raises(ValueError):
        apply_unimodular(charfun, [[2, 0], [0, 1]])


def test_induced__top():
    poset, charfun = weighted_triangle(3)
    assert induced(poset, charfun, poset.top) == (poset, charfun)


def test_induced__vertex():
    poset, charfun = weighted_triangle(3)
    with pytest.raises(ZeroDimensionalFace):
        induced(poset, charfun, poset.vertices()[0])


def test_induced__counterexample_facet():
    for d in range(1, 6):
        poset, charfun = counterexample_pair(d)
        face = poset.find_by_labels(["3"])
        sub, subfun = induced(poset, charfun, face)
        assert sorted(sub.facet_labels) == ["+", "-", "1", "2"]
        assert validate(sub, subfun) == []

        vectors = dict(zip(poset.facet_labels, charfun.vectors))
        projection = quotient_projection(from_columns([vectors["3"]], 3))
        basis = projection * from_columns([vectors["4"], vectors["+"]], 3)
        for label, expected in (("1", [-1, 0]), ("2", [2, -1])):
            image = subfun.vectors[sub.facet_index(label)]
            assert list(basis.inv() * sympy.Matrix(image)) == expected


def test_induced__prism_cap_is_a_simplex(rng):
    for n in (3, 4):
        poset = prism(n)
        charfun = random_characteristic_function(poset, rng)
        sub, subfun = induced(poset, charfun, poset.find_by_labels(["+"]))
        assert classify(sub) == PosetClass(PosetKind.SIMPLEX, n - 1)
        assert validate(sub, subfun) == []


def test_induced__composes(rng):
    poset = simplex(4)
    for _ in range(10):
        charfun = random_characteristic_function(poset, rng)
        sub, subfun = induced(poset, charfun, poset.find([0]))
        for j in range(1, 5):
            label = poset.facet_labels[j]
            inner = sub.find_by_labels([label])
            assert mu(sub, subfun, inner) == mu(poset, charfun, poset.find([0, j]))


def test_vertex_dets__counterexample():
    poset, charfun = counterexample_pair(2)
    dets = {
        frozenset(poset.facet_labels[i] for i in vertex.facets): value
        for vertex, value in vertex_dets(poset, charfun).items()
    }
    assert dets[frozenset({"1", "2", "5"})] == 6
    assert dets[frozenset({"2", "3", "-"})] == 10
    assert dets[frozenset({"2", "3", "+"})] == 4
    assert dets[frozenset({"1", "4", "+"})] == 1


def test_vertex_dets__diamond(rng):
    for n in (2, 3, 4):
        poset = diamond(n)
        charfun = random_characteristic_function(poset, rng)
        values = set(vertex_dets(poset, charfun).values())
        assert values == {mu(poset, charfun, poset.top)}


def test_vertex_dets__unimodular_simplex():
    for n in (2, 3, 4):
        poset, charfun = reference_example(PosetKind.SIMPLEX, n)
        assert set(vertex_dets(poset, charfun).values()) == {1}


def test_exists_coprime_vertex():
    poset, charfun = counterexample_pair(2)
    vertex = exists_coprime_vertex(poset, charfun, 2)
    assert vertex == poset.find_by_labels(["1", "4", "+"])

    square = prism(2)
    charfun = CharacteristicFunction(2, [(1, 0), (-1, 0), (1, 2), (1, -2)])
    assert validate(square, charfun) == []
    assert set(vertex_dets(square, charfun).values()) == {2}
    assert exists_coprime_vertex(square, charfun, 2) is None
    assert exists_coprime_vertex(square, charfun, 3) is not None


def test_simplex_gcd_identities(rng):
    for trial in range(300):
        n = 2 + trial % 3
        poset = simplex(n)
        charfun = random_characteristic_function(poset, rng)
        top = mu(poset, charfun, poset.top)
        dets = list(vertex_dets(poset, charfun).values())

        assert top == gcd_all(dets)
        for skipped in range(len(dets)):
            assert top == gcd_all(dets[:skipped] + dets[skipped + 1 :])
        for facet in poset.facets():
            assert top % mu(poset, charfun, facet) == 0


def _abs_det(vectors, n):
    return abs(int(from_columns(vectors, n).det()))


def test_minor_gcds_after_projection(rng):
    found = 0
    while found < 300:
        n = 2 + found % 3
        last = random_primitive_vector(n, rng, 5)
        others = [tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(n)]
        vectors = others + [last]
        if rank(from_columns(vectors, n)) < n:
            continue
        found += 1

        d = [_abs_det(vectors[:i] + vectors[i + 1 :], n) for i in range(n + 1)]
        assert gcd_all(d[:n]) == gcd_all(d)

        projection = quotient_projection(from_columns([last], n))
        projected = []
        for vector in others:
            image = tuple(int(x) for x in projection * sympy.Matrix(vector))
            projected.append(primitivize(image)[0] if any(image) else image)
        d_prime = [
            _abs_det(projected[:j] + projected[j + 1 :], n - 1) for j in range(n)
        ]
        assert gcd_all(d) % gcd_all(d_prime) == 0


def test_prism_coprime_vertex(rng):
    primes = (2, 3, 5, 7)
    for trial in range(300):
        n = 2 + trial % 3
        poset = prism(n)
        charfun = random_characteristic_function(poset, rng)
        top = mu(poset, charfun, poset.top)
        caps = [mu(poset, charfun, poset.find_by_labels([c])) for c in "+-"]
        for p in primes:
            if top % p and any(cap % p for cap in caps):
                assert exists_coprime_vertex(poset, charfun, p) is not None


def test_random_characteristic_function(rng):
    poset = prism(3)
    charfun = random_characteristic_function(poset, rng, bound=3)
    assert validate(poset, charfun) == []
    assert all(is_primitive(v) and max(map(abs, v)) <= 3 for v in charfun.vectors)


def test_random_characteristic_function__exhausted(rng):
    with pytest.raises(SamplingExhausted):
        random_characteristic_function(simplex(2), rng, attempts=0)
