from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kan, valpha
from kanjordan.bimodule import (BimoduleAction, _sgn, build_V_alpha, check_jordan_bimodule, direct_sum, opposite,
                                peirce_decompose, permute_basis, regular_bimodule, split_null_extension,
                                sub_bimodule, valpha_action_entry, valpha_index, zero_module)
from kanjordan.kantor import kan_index
from kanjordan.scalars import QQ, FieldContext
from kanjordan.superalg import StructureTable, check_supercommutative


def third_case_unsigned(n, alpha):
    """V(alpha) with the sign (-1)^s dropped from bv(I).e_J."""
    V = valpha(n, alpha)
    full = 1 << n
    R = {}
    for a, M in V.R.items():
        R[a] = {}
        for m, row in M.items():
            s = (a & (full - 1)).bit_count()
            flip = m >= full and a < full and s % 2 == 1
            R[a][m] = {j: -c if flip else c for j, c in row.items()}
    return BimoduleAction.build(V.algebra, V.vparity, R, V.vlabels, "tampered")


# -- regular and opposite ---------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_regular_bimodule(n):
    K = kan(n)
    Reg = regular_bimodule(K)
    assert Reg.dim == 2 ** (n + 1)
    assert Reg.matrix(K.unit) == {i: {i: QQ.one} for i in range(K.dim)}
    assert check_jordan_bimodule(K, Reg).ok


def test_opposite_is_involution():
    V = valpha(2, 1)
    W = opposite(opposite(V))
    assert W.same_action(V) and W.name == V.name
    assert all(p != q for p, q in zip(opposite(V).vparity, V.vparity))


@pytest.mark.parametrize("alpha", [0, 2])
def test_opposite_stays_jordan(alpha):
    V = valpha(2, alpha, 1)
    assert check_jordan_bimodule(V.algebra, opposite(V)).ok


def test_split_null_extension_shape():
    V = valpha(2, 1)
    E = split_null_extension(V.algebra, V)
    assert E.dim == 16 and E.unit is None
    assert check_supercommutative(E).ok
    # V.V = 0
    assert not any(i >= 8 and j >= 8 for i, j in E.product)


# -- Peirce decomposition ------------------------------------------------------------

def test_peirce_valpha_is_unital():
    V0, V1, Vh = peirce_decompose(kan(2), valpha(2, 3))
    assert (V0.dim, V1.dim, Vh.dim) == (0, 8, 0)


def test_peirce_regular():
    K = kan(3)
    V0, V1, Vh = peirce_decompose(K, regular_bimodule(K))
    assert (V0.dim, V1.dim, Vh.dim) == (0, 16, 0)


def test_peirce_regular_plus_zero():
    K = kan(2)
    V = direct_sum(regular_bimodule(K), zero_module(K, [0, 1, 1]))
    V0, V1, Vh = peirce_decompose(K, V)
    assert (V0.dim, V1.dim, Vh.dim) == (3, 8, 0)
    assert check_jordan_bimodule(K, V).ok


def test_peirce_half():
    F = StructureTable.build([0], {(0, 0): [(0, 1)]}, unit=0, name="F")
    V = BimoduleAction.build(F, [0, 0], {0: {0: {0: Fraction(1, 2)}, 1: {1: 1}}})
    V0, V1, Vh = peirce_decompose(F, V)
    assert (V0.dim, V1.dim, Vh.dim) == (0, 1, 1)
    assert check_jordan_bimodule(F, V).ok


def test_peirce_rejects_bad_spectrum():
    F = StructureTable.build([0], {(0, 0): [(0, 1)]}, unit=0, name="F")
    V = BimoduleAction.build(F, [0], {0: {0: {0: 2}}})
    with pytest.raises(ValueError):
        peirce_decompose(F, V)
    assert not check_jordan_bimodule(F, V).ok


# -- V(alpha) ------------------------------------------------------------------------

def test_bar_of_special_vector():
    V = valpha(2, 1)
    v = V.basis_vector(valpha_index(2, []))
    assert V.act(v, kan_index(2, [], True)) == V.basis_vector(valpha_index(2, [], True))


def test_single_bar_kills():
    V = valpha(2, 5)
    x = V.basis_vector(valpha_index(2, [1], True))
    assert V.act(x, kan_index(2, [1], True)) == {}


def test_bar_bar_top_gives_alpha():
    ctx = FieldContext(0, True)
    V = build_V_alpha(2, ctx.alpha, 0, ctx)
    x = V.basis_vector(valpha_index(2, [1, 2], True))
    assert V.act(x, kan_index(2, [1, 2], True)) == {valpha_index(2, []): ctx.alpha}


def test_entry_signs_against_permuted_order():
    # v((2,1)) = -v((1,2)); bv((2,1)).be_{(1,2)} = -alpha v, so the ascending entry is +alpha
    m, a = valpha_index(2, [1, 2], True), kan_index(2, [1, 2], True)
    target, c = valpha_action_entry(2, m, a, 3, QQ)
    assert target == 0 and c == 3


def test_module_parities():
    V = valpha(3, 1, 1)
    for m, p in enumerate(V.vparity):
        bar, mask = divmod(m, 8)
        assert p == (1 + mask.bit_count() + bar) % 2


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("parity", [0, 1])
def test_valpha_jordan(n, parity):
    for alpha in (0, -1, Fraction(1, 2)):
        assert check_jordan_bimodule(kan(n), valpha(n, alpha, parity)).ok


def test_valpha_symbolic():
    ctx = FieldContext(0, True)
    V = build_V_alpha(2, ctx.alpha, 0, ctx)
    rep = check_jordan_bimodule(V.algebra, V)
    assert rep.ok and rep.checked == 16 ** 4


def test_third_case_sign_matters():
    V = third_case_unsigned(2, 1)
    assert not check_jordan_bimodule(V.algebra, V).ok


def test_valpha_rejects_small_n():
    with pytest.raises(ValueError):
        build_V_alpha(1)


def test_valpha_over_f3_reuses_kan():
    F3 = FieldContext(3)
    K = kan(3, "F3")
    V = build_V_alpha(3, 2, 0, F3, K)
    assert V.algebra is K
    assert check_jordan_bimodule(K, V).ok


# -- constructions and JSON ---------------------------------------------------------

def test_direct_sum_and_sub_bimodule():
    V = valpha(2, 1)
    S = direct_sum(V, V)
    assert S.dim == 16
    diag = [{i: QQ.one, 8 + i: QQ.one} for i in range(8)]
    D = sub_bimodule(S, diag)
    assert D.dim == 8 and check_jordan_bimodule(D.algebra, D).ok
    with pytest.raises(ValueError):
        sub_bimodule(S, [{0: QQ.one}, {0: QQ.one}])
    with pytest.raises(ValueError):
        sub_bimodule(S, [{0: QQ.one}, {1: QQ.one}])  # not invariant


@settings(max_examples=10)
@given(st.permutations(list(range(8))))
def test_permuted_basis_still_jordan(perm):
    V = permute_basis(valpha(2, 2), perm)
    assert check_jordan_bimodule(V.algebra, V).ok


@pytest.mark.parametrize("field,alpha", [("Q", "1/2"), ("F5", "3"), ("Q[al]", "al")])
def test_bimodule_json_round_trip(field, alpha):
    V = valpha(2, alpha, 1, field)
    back = BimoduleAction.from_json(V.to_json())
    assert back.same_action(V) and back.vlabels == V.vlabels and back.name == V.name
    assert back.to_json() == V.to_json()


def test_json_embeds_foreign_algebra():
    F = StructureTable.build([0], {(0, 0): [(0, 1)]}, unit=0, name="F")
    V = BimoduleAction.build(F, [0, 1], {0: {0: {0: 1}, 1: {1: 1}}})
    d = V.to_dict()
    assert "algebra" in d
    assert BimoduleAction.from_dict(d).same_action(V)


def test_validate_catches_parity():
    K = kan(2)
    with pytest.raises(ValueError):
        BimoduleAction.build(K, [0, 0], {1: {0: {1: 1}}})
