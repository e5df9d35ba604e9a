import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kan, valpha
from kanjordan import linalg as la
from kanjordan.analysis import (all_witness_words, check_irreducible, check_isomorphic, classify, closure,
                                recover_coefficients, special_elements, witness_table, witness_word,
                                witness_word_bar, word_basis)
from kanjordan.bimodule import (BimoduleAction, build_V_alpha, direct_sum, opposite, permute_basis,
                                regular_bimodule, valpha_index)
from kanjordan.kantor import kan_index
from kanjordan.scalars import QQ, FieldContext


def test_special_line_of_valpha():
    K = special_elements(valpha(3, 2))
    assert K == [{0: QQ.one}]


@pytest.mark.parametrize("n", [2, 3])
def test_regular_special_vector_is_top_monomial(n):
    Reg = regular_bimodule(kan(n))
    K = special_elements(Reg)
    assert len(K) == 1
    assert set(K[0]) == {kan_index(n, list(range(1, n + 1)))}


def test_special_space_adds_over_sums():
    V = valpha(2, 1)
    assert len(special_elements(direct_sum(V, opposite(V)))) == 2


def test_empty_kernel_raises():
    K = kan(2)
    V = BimoduleAction.build(K, [0], {kan_index(2, [1], True): {0: {0: 1}}})
    with pytest.raises(ValueError):
        special_elements(V)


def test_witness_on_special_vector():
    V = valpha(2, 1)
    W = witness_word(2, 0)
    v = V.basis_vector(0)
    assert W.apply(V, v) == v
    for m in range(1, 8):
        assert W.apply(V, V.basis_vector(m)) == {}


def test_bar_witness_single_index():
    V = valpha(2, 0)
    m = valpha_index(2, [1], True)
    assert witness_word_bar(2, 1).apply(V, V.basis_vector(m)) == V.basis_vector(0)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha", [0, 1, -1, 2])
def test_witness_table_is_identity(n, alpha):
    V = valpha(n, alpha)
    v = V.basis_vector(0)
    basis = word_basis(V, v)
    assert witness_table(V, basis, v, all_witness_words(n)) == []
    if alpha:
        assert witness_table(V, basis, v, all_witness_words(n, alpha, QQ)) == []


def test_witness_words_are_signed():
    # calibrated signs are recorded, not assumed
    coeffs = {witness_word(3, m).coefficient for m in range(8)} | {witness_word_bar(3, m).coefficient for m in range(8)}
    assert coeffs <= {1, -1} and -1 in coeffs


@pytest.mark.parametrize("alpha", [0, 3])
def test_basis_independence_with_formal_coefficients(alpha):
    ctx = FieldContext(0, True)
    V = build_V_alpha(2, alpha, 0, ctx)
    v = V.basis_vector(0)
    basis = word_basis(V, v)
    x = {}
    for k, b in enumerate(basis):
        x = la.vadd(x, b, ctx.alpha ** (k + 1))
    got = recover_coefficients(V, x, v, basis, alpha)
    assert got == [ctx.alpha ** (k + 1) for k in range(len(basis))]


@settings(max_examples=10)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=16, max_size=16))
def test_recover_random_coordinates(cs):
    V = valpha(3, Fraction(1, 2))
    v = V.basis_vector(0)
    basis = word_basis(V, v)
    x = {}
    for b, c in zip(basis, cs):
        x = la.vadd(x, b, QQ.coerce(c))
    assert recover_coefficients(V, x, v, basis) == [QQ.coerce(c) for c in cs]


def test_closure():
    V = valpha(2, 1)
    assert len(closure(V, V.basis_vector(0))) == 8
    assert closure(V, {}) == []
    Reg = regular_bimodule(kan(2))
    assert len(closure(Reg, Reg.basis_vector(0))) == 8


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha", [0, 1, -1, 2, Fraction(1, 2)])
def test_valpha_irreducible(n, alpha):
    res = check_irreducible(valpha(n, alpha))
    assert res.irreducible
    cert = res.certificate
    assert cert["type"] == "irreducible" and cert["closure_dimension"] == 2 ** (n + 1)
    assert len(cert["witness_words"]) == 2 ** (n + 1)
    json.dumps(cert)


def test_regular_irreducible():
    assert check_irreducible(regular_bimodule(kan(2))).irreducible


def test_direct_sum_reducible():
    V = valpha(2, 1)
    res = check_irreducible(direct_sum(V, V))
    assert not res.irreducible
    sub = res.certificate["subspace_basis"]
    assert res.certificate["type"] == "reducible" and 0 < len(sub) < 16


def test_classify_round_trip():
    c = classify(valpha(3, 2, 1))
    assert c.key() == (1, 2)
    assert c.to_dict(QQ) == {"parity": 1, "alpha": "2"}


@pytest.mark.parametrize("alpha", [0, 1, -1])
def test_classify_opposite(alpha):
    V = valpha(2, alpha, 0)
    assert classify(opposite(V)).key() == (1, alpha)


@pytest.mark.parametrize("n", [2, 3])
def test_v0_matches_regular(n):
    V0 = valpha(n, 0, n % 2)
    Reg = regular_bimodule(kan(n))
    assert classify(V0).key() == classify(Reg).key() == (n % 2, 0)
    res = check_isomorphic(V0, Reg)
    assert res.isomorphic and res.phi


def test_classify_symbolic():
    ctx = FieldContext(0, True)
    V = build_V_alpha(2, ctx.alpha, 1, ctx)
    assert classify(V).key() == (1, ctx.alpha)


def test_iso_under_relabeling():
    V = valpha(2, 1)
    perm = list(range(8))
    random.Random(3).shuffle(perm)
    res = check_isomorphic(V, permute_basis(V, perm))
    assert res.isomorphic
    # phi is a signed permutation here
    assert all(len(row) == 1 for row in res.phi.values())


def test_iso_separates():
    assert not check_isomorphic(valpha(2, 1), valpha(2, 2))
    V = valpha(2, 1)
    assert not check_isomorphic(V, opposite(V))
    assert not check_isomorphic(valpha(2, 1), valpha(3, 1))


def test_iso_is_an_equivalence_relation():
    fam = []
    for a in (0, 1, 2):
        fam += [valpha(2, a, 0), opposite(valpha(2, a, 0)), valpha(2, a, 1)]
    rel = [[bool(check_isomorphic(x, y)) for y in fam] for x in fam]
    n = len(fam)
    assert all(rel[i][i] for i in range(n))
    assert all(rel[i][j] == rel[j][i] for i in range(n) for j in range(n))
    assert all(not (rel[i][j] and rel[j][k]) or rel[i][k] for i in range(n) for j in range(n) for k in range(n))
    # the opposite of V(a, p=0) is V(a, p=1)
    assert rel[1][2] and rel[4][5]
