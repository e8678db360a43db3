from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualarc import gf
from dualarc.gf import enumerate_elements, field_of_order, make_field

from oracles import BruteField, has_root


SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32, 49, 64, 81]


def test_prime_field_modulus():
    F = make_field(3, 1)
    assert F.q == 3
    assert F.modulus == (0, 1)


def test_gf4_modulus_and_x_squared():
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)
    x = F.from_digits((0, 1))
    assert F(x) * F(x) == F(F.from_digits((1, 1)))


def test_gf9_modulus_is_least_irreducible():
    F = make_field(3, 2)
    # oracle: monic quadratics x^2 + c1 x + c0 with no root, least (c0, c1)
    cands = [(c0, c1) for c0 in range(3) for c1 in range(3) if not has_root((c0, c1, 1), 3)]
    assert F.modulus == (*min(cands), 1)
    assert F.modulus == (1, 0, 1)


def test_make_field_errors():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(3, 0)
    with pytest.raises(ValueError):
        make_field(2, 21)
    with pytest.raises(ValueError):
        field_of_order(12)


def test_supports_two_to_the_twenty():
    F = make_field(2, 20)
    a = F(12345)
    assert a * a.inverse() == F.one


def test_gf5_add():
    F = make_field(5)
    assert gf.add(F(2), F(4)) == F(1)


def test_gf9_inverses_exhaustive(gf9):
    for a in enumerate_elements(gf9)[1:]:
        assert gf.mul(a, gf.inv(a)) == gf9.one


def test_inv_zero_raises(gf9):
    with pytest.raises(ZeroDivisionError):
        gf.inv(gf9.zero)


def test_mixed_specs_rejected():
    with pytest.raises(ValueError):
        gf.add(make_field(3)(1), make_field(5)(1))


def test_enumerate_orders():
    assert [int(a) for a in enumerate_elements(make_field(2))] == [0, 1]
    els = enumerate_elements(make_field(2, 2))
    assert len(els) == 4 and int(els[0]) == 0
    els9 = enumerate_elements(make_field(3, 2))
    assert len(els9) == 9
    assert all((a == b) == (i == j) for (i, a), (j, b) in itertools.product(enumerate(els9), repeat=2))


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_tables_match_polynomial_oracle(q):
    F = field_of_order(q)
    bf = BruteField(F.p, F.e, F.modulus)
    codes = np.arange(q)
    A, B = np.meshgrid(codes, codes, indexing="ij")
    mul = F.mul_arr(A, B)
    add = F.add_arr(A, B)
    for a, b in itertools.product(range(q), repeat=2):
        assert mul[a, b] == bf.mul(a, b)
        assert add[a, b] == bf.add(a, b)


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_closure_cyclic_group_frobenius(q):
    F = field_of_order(q)
    els = enumerate_elements(F)
    # some element has multiplicative order exactly q-1
    def order(a):
        k, x = 1, a
        while x != F.one:
            x, k = x * a, k + 1
        return k
    assert max(order(a) for a in els[1:]) == q - 1
    # Frobenius is additive and multiplicative
    for a, b in itertools.product(els, repeat=2):
        assert (a + b) ** F.p == a ** F.p + b ** F.p
        assert (a * b) ** F.p == (a ** F.p) * (b ** F.p)
        assert int(a + b) < q and int(a * b) < q


def test_large_logexp_field_agrees_with_oracle():
    F = make_field(3, 7)
    bf = BruteField(F.p, F.e, F.modulus)
    rng = np.random.default_rng(0)
    a = rng.integers(0, F.q, 300)
    b = rng.integers(0, F.q, 300)
    got = F.mul_arr(a, b)
    assert all(int(g) == bf.mul(int(x), int(y)) for g, x, y in zip(got, a, b))
    got = F.add_arr(a, b)
    assert all(int(g) == bf.add(int(x), int(y)) for g, x, y in zip(got, a, b))


def test_serialization_round_trip(gf9):
    a = gf9.from_digits((2, 1))
    assert gf9.format_code(a) == "21"
    assert gf9.parse_code("21") == a
    for c in range(9):
        assert gf9.parse_code(gf9.format_code(c)) == c


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([4, 8, 9, 25, 27, 2048, 3**7]), st.data())
def test_field_axioms_property(q, data):
    F = field_of_order(q)
    a, b, c = (F(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert a + (-a) == F.zero
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if a:
        assert a * a.inverse() == F.one
        assert (b / a) * a == b


def test_field_spec_pickles(gf9):
    import pickle

    assert pickle.loads(pickle.dumps(gf9)) == gf9
