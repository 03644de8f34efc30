"""Group and character basics: axioms, duality, orthogonality, distances."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumsetlab.errors import CapExceededError, GroupMismatchError
from sumsetlab.groups import (
    GroupElement,
    character_distance,
    cyclic,
    enumerate_dual,
    enumerate_group,
    parse_group,
    sumset_indices,
    vector,
)

SMALL_GROUPS = [
    cyclic(1),
    cyclic(2),
    cyclic(3),
    cyclic(4),
    cyclic(12),
    cyclic(13),
    cyclic(31),
    vector(2, 1),
    vector(2, 4),
    vector(3, 3),
    vector(5, 2),
]


def test_enumeration_examples():
    assert [e.coords for e in enumerate_group(cyclic(4))] == [0, 1, 2, 3]
    assert [e.coords for e in enumerate_group(vector(2, 2))] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [e.coords for e in enumerate_group(cyclic(1))] == [0]


def test_dual_enumeration_examples():
    freqs = [c.frequency for c in enumerate_dual(cyclic(3))]
    assert freqs == [0, 1, 2]
    chars = enumerate_dual(vector(2, 1))
    assert [c.frequency for c in chars] == [(0,), (1,)]
    vals0 = {complex(round(c.real, 9), round(c.imag, 9)) for c in chars[0].values_table()}
    vals1 = {complex(round(c.real, 9), round(c.imag, 9)) for c in chars[1].values_table()}
    assert vals0 == {1 + 0j}
    assert vals1 == {1 + 0j, -1 + 0j}
    assert len(enumerate_dual(cyclic(1))) == 1
    assert enumerate_dual(cyclic(7))[0].is_principal


def test_character_distance_examples():
    g = cyclic(12)
    c = g.character(1)
    assert character_distance(c, g.element(0)) == 0.0
    assert character_distance(c, g.element(6)) == pytest.approx(2.0, abs=1e-12)
    assert character_distance(c, g.element(1)) == pytest.approx(2 * math.sin(math.pi / 12), abs=1e-12)


def test_character_distance_requires_same_group():
    with pytest.raises(GroupMismatchError):
        character_distance(cyclic(5).character(1), cyclic(7).element(1))


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=lambda g: g.literal)
def test_group_axioms_exhaustive(group):
    order = group.order
    add = np.empty((order, order), dtype=np.int64)
    for i in range(order):
        ci = group.coords_of(i)
        for j in range(order):
            add[i, j] = group.index_of(group.add(ci, group.coords_of(j)))
    # commutativity on all pairs
    assert np.array_equal(add, add.T)
    # zero neutral, negation inverts
    assert np.array_equal(add[0], np.arange(order))
    neg = np.array([group.index_of(group.neg(group.coords_of(i))) for i in range(order)])
    assert np.array_equal(add[np.arange(order), neg], np.zeros(order, dtype=np.int64))
    # associativity on all triples, via the composition of index tables
    for c in range(order):
        assert np.array_equal(add[add, c], add[:, add[:, c]][np.arange(order)])


def test_group_axioms_exhaustive_order_512():
    # associativity through index tables stays cheap even at order 512
    for group in (cyclic(512), vector(2, 9)):
        order = group.order
        mat = group.coords_matrix()
        if group.kind == "cyclic":
            add = (np.arange(order)[:, None] + np.arange(order)[None, :]) % order
        else:
            powers = group.modulus ** np.arange(group.dim - 1, -1, -1, dtype=np.int64)
            add = ((mat[:, None, :] + mat[None, :, :]) % group.modulus) @ powers
        assert np.array_equal(add, add.T)
        assert np.array_equal(add[0], np.arange(order))
        lhs = add[add, 77]
        rhs = add[:, add[:, 77]][np.arange(order)]
        assert np.array_equal(lhs, rhs)
        for c in (0, 1, 100, 511):
            assert np.array_equal(add[add, c], add[:, add[:, c]][np.arange(order)])


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=lambda g: g.literal)
def test_character_orthogonality(group):
    for char in enumerate_dual(group):
        total = complex(np.sum(char.values_table()))
        expected = group.order if char.is_principal else 0.0
        assert abs(total - expected) < 1e-9


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=lambda g: g.literal)
def test_character_homomorphism_and_unit_circle(group):
    for char in enumerate_dual(group)[: min(group.order, 6)]:
        table = char.values_table()
        assert np.max(np.abs(np.abs(table) - 1.0)) < 1e-12
        for x in range(min(group.order, 8)):
            for y in range(min(group.order, 8)):
                ex, ey = group.coords_of(x), group.coords_of(y)
                lhs = char.value(GroupElement(group, group.add(ex, ey)))
                rhs = char.value(GroupElement(group, ex)) * char.value(GroupElement(group, ey))
                assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=lambda g: g.literal)
def test_distance_symmetric_under_negation(group):
    neg = group.negation_permutation()
    for char in enumerate_dual(group)[: min(group.order, 8)]:
        table = char.distance_table()
        assert np.max(np.abs(table - table[neg])) < 1e-12


def test_element_arithmetic():
    g = vector(3, 2)
    a = g.element((1, 2))
    b = g.element((2, 2))
    assert (a + b).coords == (0, 1)
    assert (-a).coords == (2, 1)
    assert (a - a).is_zero()


@given(st.integers(min_value=1, max_value=500), st.integers(), st.integers())
@settings(max_examples=40, deadline=None)
def test_cyclic_add_matches_modular_arithmetic(n, x, y):
    g = cyclic(n)
    assert (g.element(x) + g.element(y)).coords == (x + y) % n


def test_parse_group_literals():
    assert parse_group("zN:97") == cyclic(97)
    assert parse_group("vec:2^8") == vector(2, 8)
    assert parse_group("zN:97").literal == "zN:97"
    assert parse_group("vec:2^8").literal == "vec:2^8"
    with pytest.raises(ValueError):
        parse_group("gl:2")
    with pytest.raises(ValueError):
        parse_group("vec:4^3")  # base must be prime


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        vector(2, 25)
    with pytest.raises(CapExceededError):
        enumerate_group(cyclic(100), cap=50)


def test_sumset_indices_vector():
    g = vector(2, 2)
    out = sumset_indices(g, np.array([1]), np.array([2]))  # (0,1) + (1,0) = (1,1)
    assert out.tolist() == [3]
