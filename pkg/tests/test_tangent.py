import random
from math import comb

import pytest

from helpers import random_diffop, random_poly, random_word_operator
from logdiff.arrangement import builtin_arrangement, rank2_basis, saito_check
from logdiff.exprparse import parse_diffop, parse_poly
from logdiff.linalg import sym_indices
from logdiff.polyring import LinearForm, Poly, coordinates, divides_power
from logdiff.tangent import (
    Decomposition,
    DecompositionError,
    Word,
    decompose,
    decomposition_to_json,
    is_tangent,
    is_tangent_q,
    reassemble,
    tangency_table,
    transport,
)
from logdiff.weyl import DiffOp, iterated_commutator
from logdiff.jacobian import OpFamily, higher_jacobian


def P(text, nvars):
    return parse_poly(text, nvars)


def D(text, nvars):
    return parse_diffop(text, nvars)


def fixture_basis(name):
    arr, thetas = builtin_arrangement(name)
    result = saito_check(arr, thetas)
    assert result.ok
    return arr, result


# -- truncated tangency ------------------------------------------------------------

def test_plain_partial_fails_immediately():
    arr, _ = builtin_arrangement("boolean1")
    assert not is_tangent(D("d1", 1), arr, 1)


def test_truncation_level_matters():
    arr, _ = builtin_arrangement("boolean1")
    u = D("x*d1^2", 1)
    assert is_tangent(u, arr, 1)
    assert not is_tangent(u, arr, 2)
    assert is_tangent_q(u, arr, 1)
    assert not is_tangent_q(u, arr, 2)


def test_words_of_tangent_generators_stay_tangent():
    rng = random.Random(51)
    for name in ("boolean2", "triple2"):
        arr, thetas = builtin_arrangement(name)
        for _ in range(10):
            u = random_word_operator(rng, thetas, arr.dim)
            for t_max in (1, 2, 3):
                assert is_tangent(u, arr, t_max)
                assert is_tangent_q(u, arr, t_max)


def test_euler_and_constants_always_pass():
    from logdiff.arrangement import euler_derivation

    for name in ("boolean2", "triple2", "generic3"):
        arr, _ = builtin_arrangement(name)
        assert is_tangent_q(euler_derivation(arr.dim).as_diffop(), arr, 5)
        assert is_tangent_q(DiffOp.one(arr.dim), arr, 3)
        assert is_tangent(DiffOp.zero(arr.dim), arr, 3)


def test_truncated_tests_agree_on_random_operators():
    rng = random.Random(52)
    for name in ("boolean1", "boolean2", "triple2", "generic3"):
        arr, _ = builtin_arrangement(name)
        for _ in range(15):
            u = random_diffop(rng, arr.dim, max_order=2)
            for t_max in (1, 2):
                assert is_tangent(u, arr, t_max) == is_tangent_q(u, arr, t_max)


def test_tangency_table_witness():
    arr, _ = builtin_arrangement("boolean1")
    rows = tangency_table(D("x*d1^2", 1), arr, 2)
    assert [(r.form_index, r.t, r.ok) for r in rows] == [(1, 1, True), (1, 2, False)]
    beta, coeff = rows[1].witness
    assert beta == (0,)
    assert coeff == P("2*x", 1)


# -- transport ----------------------------------------------------------------------

def test_transport_first_order():
    arr, _ = builtin_arrangement("boolean1")
    dec = transport(D("d1", 1), arr)
    assert [(w.coeff, w.word) for w in dec.words] == [(Poly.one(1), (1,))]
    assert reassemble(dec) == D("x*d1", 1)


def test_transport_second_order_words():
    arr, _ = builtin_arrangement("boolean1")
    u = D("d1^2", 1)
    dec = transport(u, arr)
    assert reassemble(dec) == P("x^3", 1) * u
    assert {w.word for w in dec.words} == {(1, 1), (1,)}


def test_transport_of_polynomial_is_the_empty_word():
    arr, _ = builtin_arrangement("boolean2")
    f = P("x^2 - y", 2)
    dec = transport(DiffOp.from_poly(f), arr)
    assert [(w.coeff, w.word) for w in dec.words] == [(f, ())]


def test_transport_zero_rejected():
    arr, _ = builtin_arrangement("boolean1")
    with pytest.raises(ValueError):
        transport(DiffOp.zero(1), arr)


def test_transport_round_trip_random():
    rng = random.Random(53)
    arr, _ = builtin_arrangement("boolean2")
    for _ in range(15):
        u = random_diffop(rng, 2, max_order=3)
        if not u:
            continue
        dec = transport(u, arr)
        expected = arr.q ** comb(u.order + 1, 2) * u
        assert reassemble(dec) == expected
        # every generator is a scaled partial, every word stays within range
        assert len(dec.generators) == 2


# -- decomposition --------------------------------------------------------------------

def test_decompose_worked_example():
    arr, basis = fixture_basis("boolean1")
    u = D("x^2*d1^2", 1)
    dec = decompose(u, arr, basis)
    assert [(w.coeff, w.word) for w in dec.words] == [
        (Poly.one(1), (1, 1)),
        (Poly.constant(1, -1), (1,)),
    ]
    assert reassemble(dec) == u
    # the identity spelled out: (x d)(x d) - (x d)
    xd = D("x*d1", 1)
    assert xd * xd - xd == u


def test_decompose_polynomial_input():
    arr, basis = fixture_basis("boolean2")
    f = P("x^2 + 3*y", 2)
    dec = decompose(DiffOp.from_poly(f), arr, basis)
    assert [(w.coeff, w.word) for w in dec.words] == [(f, ())]


def test_decompose_zero_input():
    arr, basis = fixture_basis("boolean2")
    dec = decompose(DiffOp.zero(2), arr, basis)
    assert dec.words == ()
    assert reassemble(dec) == DiffOp.zero(2)


def test_decompose_mixed_product():
    arr, basis = fixture_basis("boolean2")
    u = D("x*y*d1*d2", 2)
    dec = decompose(u, arr, basis)
    assert reassemble(dec) == u
    top = {w.word for w in dec.words if len(w.word) == 2}
    assert top == {(1, 2)}


def test_decompose_round_trip_on_random_words():
    rng = random.Random(54)
    fixtures = ["boolean1", "boolean2", "boolean3", "triple2"]
    for name in fixtures:
        arr, basis = fixture_basis(name)
        for _ in range(8):
            u = random_word_operator(rng, basis.thetas, arr.dim)
            if not u:
                continue
            dec = decompose(u, arr, basis)
            assert reassemble(dec) == u
            assert dec.generators == basis.thetas


def test_decompose_round_trip_four_lines():
    # two-variable arrangement with four forms and the generic rank-2 basis
    rng = random.Random(55)
    from logdiff.arrangement import Arrangement

    arr = Arrangement([LinearForm((1, 0)), LinearForm((0, 1)),
                       LinearForm((1, 1)), LinearForm((1, -1))])
    basis = saito_check(arr, rank2_basis(arr))
    assert basis.ok
    for _ in range(8):
        u = random_word_operator(rng, basis.thetas, 2, max_len=2)
        if not u:
            continue
        dec = decompose(u, arr, basis)
        assert reassemble(dec) == u


def test_decompose_rejects_non_tangent_operator():
    arr, basis = fixture_basis("boolean1")
    with pytest.raises(DecompositionError):
        decompose(D("d1", 1), arr, basis)


def test_decompose_division_failure_diagnosis():
    arr, basis = fixture_basis("boolean1")
    with pytest.raises(DecompositionError) as info:
        decompose(D("d1", 1), arr, basis, check_tangency=False)
    assert info.value.level == 1
    assert info.value.index == (1,)


def test_decompose_respects_custom_tmax():
    arr, basis = fixture_basis("boolean1")
    u = D("x*d1^2", 1)
    # passes the truncated pre-check at t_max=1 but the division detects it
    with pytest.raises(DecompositionError) as info:
        decompose(u, arr, basis, t_max=1)
    assert info.value.level is not None
    with pytest.raises(DecompositionError):
        decompose(u, arr, basis)  # default t_max = order catches it up front


def test_decompose_levels_strictly_drop():
    rng = random.Random(56)
    arr, basis = fixture_basis("boolean2")
    for _ in range(5):
        u = random_word_operator(rng, basis.thetas, 2)
        if not u:
            continue
        dec = decompose(u, arr, basis)
        lengths = [len(w.word) for w in dec.words]
        assert lengths == sorted(lengths, reverse=True)
        for w in dec.words:
            assert all(1 <= i <= 2 for i in w.word)


def test_reassemble_edge_cases():
    arr, basis = fixture_basis("boolean1")
    empty = Decomposition((), basis.thetas)
    assert reassemble(empty) == DiffOp.zero(1)
    single = Decomposition((Word(Poly.one(1), (1,)),), basis.thetas)
    assert reassemble(single) == D("x*d1", 1)


def test_decomposition_json_ordering():
    arr, basis = fixture_basis("boolean1")
    dec = decompose(D("x^2*d1^2", 1), arr, basis)
    payload = decomposition_to_json(dec)
    assert payload == [
        {"coeff": "1", "word": [1, 1]},
        {"coeff": "-1", "word": [1]},
    ]


def test_word_validation():
    with pytest.raises(ValueError):
        Word(Poly.zero(1), ())
    with pytest.raises(ValueError):
        Word(Poly.one(1), (2, 1))


# -- divisibility of Jacobians of tangent families ------------------------------------

def test_jacobian_divisible_by_q_power():
    rng = random.Random(57)
    for name in ("boolean2", "triple2"):
        arr, basis = fixture_basis(name)
        fs = coordinates(arr.dim)
        for power in (1, 2):
            exponent = comb(power + arr.dim - 1, arr.dim)
            for _ in range(5):
                entries = tuple(
                    random_word_operator(rng, basis.thetas, arr.dim,
                                         max_len=power, max_words=1)
                    for _ in sym_indices(arr.dim, power)
                )
                fam = OpFamily(arr.dim, power, entries)
                jac = higher_jacobian(fs, fam)
                assert divides_power(arr.q, exponent, jac)


def test_bracket_values_inherit_form_powers():
    # tangent operators bracketed with a form repeated q times give values
    # divisible by that form to the q-th power
    rng = random.Random(58)
    arr, basis = fixture_basis("triple2")
    for _ in range(10):
        u = random_word_operator(rng, basis.thetas, 2)
        form = rng.choice(arr.forms).as_poly()
        q = rng.randint(1, 2)
        others = [random_poly(rng, 2) for _ in range(rng.randint(0, 1))]
        fs = [form] * q + others
        value = iterated_commutator(u, fs).value_at_one()
        assert divides_power(form, q, value)
