from math import comb

import pytest

from nokequal import Parameters
from nokequal.forest import ContractError
from nokequal.invariants import (
    SearchTooLarge, TensorClass, betti, betti_from_relations, cup_length, determination_predicates,
    elementary_generator, improved_quotient, longest_nonzero_product, tc_bounds, top_degree_shapes,
    x_gen, zcl, zero_divisor,
)
from nokequal.ring import Z, Z2, unit


def test_betti_small():
    assert betti(Parameters(2, 3, 4)) == {0: 1, 3: 4, 4: 3}
    assert betti(Parameters(2, 3, 6)) == {0: 1, 3: 20, 4: 45, 5: 36, 6: 20, 7: 10}


@pytest.mark.parametrize("t", [(2, 3, 5), (3, 3, 5), (2, 4, 7)])
def test_betti_mod2_matches(t):
    p = Parameters(*t)
    assert betti_from_relations(p, Z2) == betti(p) == betti_from_relations(p, Z)


@pytest.mark.parametrize("t", [(2, 3, 4), (2, 3, 7), (3, 4, 9), (4, 5, 11)])
def test_bottom_degree(t):
    p = Parameters(*t)
    table = betti(p)
    assert table[0] == 1
    assert min(d for d in table if d > 0) == p.a and max(table) == p.hdim
    assert table[p.a] == comb(p.n, p.k)


def test_elementary_generator_contracts():
    p = Parameters(2, 3, 6)
    with pytest.raises(ContractError):
        elementary_generator((1, 2, 3), 4, p)
    with pytest.raises(ContractError):
        elementary_generator((1, 2), 2, p)


def test_tensor_koszul_sign():
    p = Parameters(2, 3, 6)
    a, b = x_gen(3, p), x_gen(6, p)
    one = unit(p)
    left = TensorClass.pure([one, a]) * TensorClass.pure([b, one])
    # moving b (degree 3) past a (degree 3) costs a sign
    assert left.terms == TensorClass.pure([b, a]).scale(-1).terms


def test_zero_divisor_shape():
    p = Parameters(2, 3, 4)
    z = zero_divisor(x_gen(3, p), 1, 2)
    assert len(z.terms) == 2 and sorted(z.terms.values()) == [-1, 1]
    z2 = zero_divisor(x_gen(3, p, Z2), 1, 2)
    assert sorted(z2.terms.values()) == [1, 1]


def test_cup_length_certificate():
    p = Parameters(2, 3, 6)
    value, cert = cup_length(p)
    assert value == 2 and cert.verified and not cert.product.is_zero()
    assert cert.product_degree == 6


def test_exhaustive_cap():
    with pytest.raises(SearchTooLarge):
        longest_nonzero_product(Parameters(2, 3, 6), cap=10)


def test_zcl_needs_s_at_least_two():
    with pytest.raises(ContractError):
        zcl(Parameters(2, 3, 4), 1)


@pytest.mark.parametrize("t,s", [((2, 3, 4), 2), ((2, 3, 7), 2), ((3, 3, 7), 3), ((2, 4, 9), 2)])
def test_zcl_witness(t, s):
    p = Parameters(*t)
    value, cert = zcl(p, s)
    assert value == s * p.m and cert.verified


def test_zcl_mod2_witness():
    value, cert = zcl(Parameters(2, 3, 6), 2, ring=Z2)
    assert value == 4 and cert.verified


def test_improved_quotient():
    assert [improved_quotient(x, 3) for x in range(0, 8)] == [0, 0, 0, 0, 1, 1, 1, 2]


def test_tc_bounds_examples():
    r = tc_bounds(Parameters(2, 8, 40), 2)
    assert (r.lower, r.upperImproved, r.determined, r.value) == (10, 10, True, 10)
    r = tc_bounds(Parameters(2, 3, 11), 1)
    assert (r.lower, r.upperPlain, r.upperImproved, r.determined, r.value) == (3, 4, 4, False, None)
    assert tc_bounds(Parameters(2, 3, 12), 5).value == 20


def test_tc_source_labels():
    # (2,3,5): x = (1+2-1)*1 = 2, a = 3
    assert tc_bounds(Parameters(2, 3, 5), 1).source == "dimension"
    # (2,3,7): m=2, b=1, x = 2, a = 3 ; (2,4,6): m=1, b=2, x=2, a=5
    p = Parameters(2, 3, 8)   # m=2, b=2, x=3=a
    assert tc_bounds(p, 1).source == "obstruction"


def test_predicates():
    assert determination_predicates(Parameters(3, 3, 7))["millerFormality"] is None
    pr = determination_predicates(Parameters(2, 3, 5))
    assert pr["omnibus"] and pr["millerFormality"]


def test_top_degree_shapes_single_component():
    # in the top degree of (2,3,6) every basic forest is one tree of two squares
    assert set(top_degree_shapes(Parameters(2, 3, 6))) == {(1, 2, 2)}


def test_m_equals_one_zcl_product():
    p = Parameters(2, 3, 4)
    x3, x4 = x_gen(3, p).terms[0][0], x_gen(4, p).terms[0][0]
    _, cert = zcl(p, 2)
    assert cert.product.terms == {(x3, x4): 1, (x4, x3): -1}
    _, cert2 = zcl(p, 2, ring=Z2)
    assert cert2.product.terms == {(x3, x4): 1, (x4, x3): 1}


def test_equality_case_uses_improvement():
    for s in range(1, 6):
        r = tc_bounds(Parameters(2, 3, 12), s)
        assert r.value == 4 * s and r.upperPlain == 4 * s + s and r.source == "obstruction"


def test_nothing_above_top_degree():
    from nokequal.forest import enumerate_basic
    assert len(enumerate_basic(Parameters(2, 3, 6), 8)) == 0
