import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistcodes.gf import (
    DEFAULT_MODULI,
    FieldElem,
    FieldError,
    field_from_order,
    is_irreducible,
    least_irreducible,
    make_field,
    subfield_elements,
)

from reference import ref_field_for

SMALL = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (5, 2), (7, 1), (11, 1), (13, 1), (17, 1)]


@pytest.fixture(scope="module", params=SMALL, ids=lambda pm: f"GF({pm[0]}^{pm[1]})")
def field(request):
    return make_field(*request.param)


def test_tables_match_reference_arithmetic(field):
    ref = ref_field_for(field)
    a, b = np.meshgrid(field.elements, field.elements, indexing="ij")
    mul = field.mul(a, b)
    add = field.add(a, b)
    for x in range(field.q):
        for y in range(field.q):
            assert add[x, y] == ref.add(x, y)
            assert mul[x, y] == ref.mul(x, y)
    for x in range(1, field.q):
        assert field.inv(x) == ref.inv(x)
        assert field.neg(x) == ref.neg(x)


def test_prime_subfield_is_first_p_indices(field):
    # indices 0..p-1 add and multiply like integers mod p
    p = field.p
    for x in range(p):
        for y in range(p):
            assert field.add(x, y) == (x + y) % p
            assert field.mul(x, y) == (x * y) % p


def test_generator_has_full_order(field):
    g = field.generator
    seen = {int(field.pow(g, e)) for e in range(field.q - 1)}
    assert seen == set(range(1, field.q))


def test_zero_to_zero_is_one(field):
    assert field.pow(0, 0) == 1
    assert field.pow(0, 3) == 0
    assert np.array_equal(field.pow(field.elements, 0), np.ones(field.q, dtype=np.int64))


def test_frobenius_is_additive(field):
    a, b = np.meshgrid(field.elements, field.elements, indexing="ij")
    lhs = field.pow(field.add(a, b), field.p)
    rhs = field.add(field.pow(a, field.p), field.pow(b, field.p))
    assert np.array_equal(lhs, rhs)


def test_power_sums(field):
    # sum_a a^l = 0 unless l is a positive multiple of q-1, where it is -1
    q = field.q
    for l in range(0, 2 * (q - 1) + 1):
        s = int(field.sum(field.pow(field.elements, l)))
        expected = int(field.neg(1)) if l > 0 and l % (q - 1) == 0 else 0
        assert s == expected, l


def test_sum_matches_reduce(field):
    rng = np.random.default_rng(0)
    M = rng.integers(0, field.q, size=(4, 7))
    acc = np.zeros(7, dtype=np.int64)
    for row in M:
        acc = field.add(acc, row)
    assert np.array_equal(field.sum(M, axis=0), acc)
    assert int(field.sum(M)) == int(field.sum(acc))


def test_square_roots(field):
    for a in range(field.q):
        if field.is_square(a):
            r = field.sqrt(a)
            assert field.mul(r, r) == a
        else:
            with pytest.raises(FieldError):
                field.sqrt(a)
    n_squares = sum(field.is_square(a) for a in range(1, field.q))
    assert n_squares == (field.q - 1 if field.p == 2 else (field.q - 1) // 2)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_axioms(pm, data):
    F = make_field(*pm)
    el = st.integers(0, F.q - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_pow_matches_repeated_multiplication(pm, data):
    F = make_field(*pm)
    a = data.draw(st.integers(0, F.q - 1))
    e = data.draw(st.integers(0, 3 * F.q))
    acc = 1
    for _ in range(e):
        acc = int(F.mul(acc, a))
    assert int(F.pow(a, e)) == acc


def test_negative_powers():
    F = make_field(2, 4)
    for a in range(1, 16):
        assert F.mul(F.pow(a, -3), F.pow(a, 3)) == 1


def test_inverse_of_zero_raises():
    F = make_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.inv(np.array([1, 0, 2]))


def test_default_moduli_are_irreducible():
    for (p, m), mod in DEFAULT_MODULI.items():
        assert is_irreducible(mod, p), (p, m)


def test_least_irreducible_gf4_and_gf9():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)  # x^2 + 1


def test_custom_modulus_gives_isomorphic_but_distinct_context():
    A = make_field(3, 2)
    B = make_field(3, 2, (1, 0, 1))
    assert A != B
    assert B.q == 9
    ref = ref_field_for(B)
    for x in range(9):
        for y in range(9):
            assert B.mul(x, y) == ref.mul(x, y)


@pytest.mark.parametrize(
    "args, match",
    [((4, 1), "not prime"), ((2, 0), ">= 1"), ((2, 17), "size guard"), ((2, 2, (1, 0, 1)), "reducible"),
     ((2, 2, (1, 1)), "monic of degree")],
)
def test_make_field_errors(args, match):
    with pytest.raises(FieldError, match=match):
        make_field(*args)


def test_field_from_order():
    assert field_from_order(16).spec == make_field(2, 4).spec
    assert field_from_order(13).q == 13
    with pytest.raises(FieldError):
        field_from_order(12)


def test_cache_and_pickle():
    F = make_field(2, 4)
    assert make_field(2, 4) is F
    G = pickle.loads(pickle.dumps(F))
    assert G == F and hash(G) == hash(F)


def test_subfields():
    F = make_field(2, 8)
    S = subfield_elements(F, 4)
    assert len(S) == 16 and S[0] == 0 and S[1] == 1
    # closed under + and *
    a, b = np.meshgrid(S, S, indexing="ij")
    assert set(F.add(a, b).ravel().tolist()) <= set(S.tolist())
    assert set(F.mul(a, b).ravel().tolist()) <= set(S.tolist())
    assert np.array_equal(subfield_elements(F, 1), np.array([0, 1]))
    with pytest.raises(FieldError):
        subfield_elements(F, 3)
    assert len(subfield_elements(make_field(3, 6), 3)) == 27


def test_field_elem_operators():
    F = make_field(7)
    a, b = F(3), F(5)
    assert int(a + b) == 1
    assert int(a - b) == 5
    assert int(a * b) == 1
    assert int(a / b) == 2
    assert int(-a) == 4
    assert int(a**-1) == 5
    assert a.inverse() == b
    assert 2 * a == F(6)
    assert a == 10  # integers map through Z -> GF(7)


def test_field_elem_cross_field_mixing_is_an_error():
    with pytest.raises(FieldError):
        make_field(7)(1) + make_field(11)(1)
    with pytest.raises(FieldError):
        FieldElem(make_field(7), 7)


def test_coefficients_convention():
    F = make_field(3, 2)
    # index = c0 + 3*c1
    assert F.coefficients(5) == (2, 1)
    assert F.coefficients(0) == (0, 0)
