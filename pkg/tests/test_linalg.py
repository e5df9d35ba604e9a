from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanjordan import linalg as la
from kanjordan.config import CheckConfig, RunRecord, SweepConfig
from kanjordan.report import CheckReport, Violation
from kanjordan.scalars import QQ, FieldContext

small_matrix = st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=6)


def to_rows(M):
    return [{j: QQ.coerce(c) for j, c in enumerate(r) if c} for r in M]


@settings(max_examples=60)
@given(small_matrix)
def test_rank_matches_numpy(M):
    assert la.rank(to_rows(M), QQ) == np.linalg.matrix_rank(np.array(M, dtype=float))


@settings(max_examples=60)
@given(small_matrix)
def test_nullspace_is_kernel(M):
    rows = to_rows(M)
    K = la.nullspace(rows, 5, QQ)
    assert len(K) == 5 - la.rank(rows, QQ)
    for x in K:
        for r in rows:
            assert sum(r.get(j, 0) * c for j, c in x.items()) == 0


@settings(max_examples=40)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_invert(vals):
    M = {i: {j: QQ.coerce(vals[3 * i + j]) for j in range(3) if vals[3 * i + j]} for i in range(3)}
    M = {i: r for i, r in M.items() if r}
    if la.rank(list(M.values()), QQ) < 3:
        with pytest.raises(ValueError):
            la.invert(M, 3, QQ)
        return
    assert la.mat_mul(M, la.invert(M, 3, QQ)) == la.identity(3, QQ)


def test_rowspace_coordinates_mod_p():
    F5 = FieldContext(5)
    rs = la.RowSpace(F5)
    a, b = {0: F5.one, 1: F5.coerce(2)}, {1: F5.one, 2: F5.one}
    assert rs.add(a) and rs.add(b)
    target = la.vadd(la.vscale(a, F5.coerce(3)), b)
    assert rs.coordinates(target) == {0: F5.coerce(3), 1: F5.one}
    assert not rs.add(target)
    assert rs.coordinates({2: F5.one, 0: F5.one}) is None


def test_symbolic_pivots_refused():
    ctx = FieldContext(0, True)
    with pytest.raises(ValueError):
        la.rank([{0: ctx.alpha}], ctx)


def test_report_round_trip_and_limit():
    rep = CheckReport("demo")
    for k in range(5):
        rep.add(Violation((f"x{k}", "y"), {"e[1]": "2"}, "note"), limit=2)
    assert rep.total == 5 and len(rep.violations) == 2 and rep.status == "fail" and not rep
    back = CheckReport.from_json(rep.to_json())
    assert back.to_dict() == rep.to_dict()
    merged = rep.merge(CheckReport("other", checked=3))
    assert merged.total == 5 and merged.checked == 3


def test_report_status_is_checked_on_load():
    d = CheckReport("demo").to_dict()
    d["status"] = "fail"
    with pytest.raises(ValueError):
        CheckReport.from_dict(d)


def test_configs():
    with pytest.raises(ValueError):
        CheckConfig(method="magic")
    with pytest.raises(ValueError):
        CheckConfig(threads=0)
    sweep = SweepConfig()
    assert [c.name for c in sweep.contexts()] == ["Q", "F5", "F7"]
    assert Fraction(1, 2) in sweep.alphas
    assert RunRecord("x", True, 1.0).line().startswith("[PASS]")
