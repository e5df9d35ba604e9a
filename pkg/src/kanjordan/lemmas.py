"""Operator relations that every unital Jordan module over Kan(n) satisfies.

The checks for the action on v(I), bv(I) rebuild those vectors from the
special vector by operator words, so they test the module itself rather than
the labelling of its basis.
"""
from __future__ import annotations

import itertools
import time

from . import linalg as la
from .analysis import be_idx, classify, e_idx, kan_label, kan_rank, module_word, special_elements
from .bimodule import BimoduleAction
from .grassmann import indices_of, mask_of, perm_sign
from .report import CheckReport, Violation
from .superalg import DEFAULT_LIMIT


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


def supercommutator(V: BimoduleAction, a: int, b: int) -> dict:
    """[R_a, R_b]_s = R_a R_b - (-1)^{|a||b|} R_b R_a."""
    pa, pb = V.algebra.parity[a], V.algebra.parity[b]
    return la.mat_add(la.mat_mul(V.matrix(a), V.matrix(b)), la.mat_mul(V.matrix(b), V.matrix(a)), -_sgn(pa * pb))


def _power(V: BimoduleAction, a: int, k: int) -> dict:
    M = V.matrix(a)
    for _ in range(k - 1):
        M = la.mat_mul(M, V.matrix(a))
    return M


def _fmt(V, M: dict) -> dict:
    return {V.vlabels[i]: V.format_vector(r) for i, r in sorted(M.items()) if r}


def check_supercommutators(V: BimoduleAction, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """Vanishing supercommutators of right multiplications."""
    n = kan_rank(V)
    full = (1 << n) - 1
    rep = CheckReport(f"supercommutator relations on {V.name}")
    t0 = time.perf_counter()
    for I in range(full + 1):
        for J in range(full + 1):
            cases = [("[R_eI,R_eJ]", e_idx(n, I), e_idx(n, J), True),
                     ("[R_eI,R_beJ] for |I&J|>=2", e_idx(n, I), be_idx(n, J), (I & J).bit_count() >= 2),
                     ("[R_beI,R_beJ] for I&J nonempty", be_idx(n, I), be_idx(n, J), bool(I & J))]
            if J == 0:
                cases.append(("[R_eI,R_1b] for I != I_n", e_idx(n, I), be_idx(n, 0), I != full))
            for name, a, b, applies in cases:
                if not applies:
                    continue
                M = supercommutator(V, a, b)
                rep.checked += 1
                if not la.is_zero(M):
                    rep.add(Violation((kan_label(n, a), kan_label(n, b)), _fmt(V, M), name), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_power_relations(V: BimoduleAction, alpha=None, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """Nilpotency of R_a, R_be_i^3 = R_be_i and R_1b^2 = alpha (alpha read off the module if omitted)."""
    n = kan_rank(V)
    rep = CheckReport(f"power relations on {V.name}")
    t0 = time.perf_counter()
    ctx = V.ctx
    singles = {be_idx(n, 1 << i) for i in range(n)}
    for a in range(V.algebra.dim):
        if a == e_idx(n, 0) or a == be_idx(n, 0):
            continue
        if V.algebra.parity[a] == 1:
            M, name = _power(V, a, 2), "R_a^2 = 0 for odd a"
        elif a in singles:
            M, name = la.mat_add(_power(V, a, 3), V.matrix(a), -1), "R_be_i^3 = R_be_i"
        else:
            M, name = _power(V, a, 3), "R_a^3 = 0 for even a"
        rep.checked += 1
        if not la.is_zero(M):
            rep.add(Violation((kan_label(n, a),), _fmt(V, M), name), limit)
    if alpha is None:
        alpha = classify(V).alpha
    M = la.mat_add(_power(V, be_idx(n, 0), 2), la.identity(V.dim, ctx), -ctx.coerce(alpha))
    rep.checked += 1
    if not la.is_zero(M):
        rep.add(Violation(("b1",), _fmt(V, M), f"R_1b^2 = {ctx.format(ctx.coerce(alpha))}"), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_bar_triple_relations(V: BimoduleAction, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """R_be_i R_1b R_be_i = 0 and R_be_i R_1b R_be_j = -R_be_j R_1b R_be_i."""
    n = kan_rank(V)
    rep = CheckReport(f"bar triple relations on {V.name}")
    t0 = time.perf_counter()
    one_b = V.matrix(be_idx(n, 0))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            A = la.mat_mul(la.mat_mul(V.matrix(be_idx(n, 1 << (i - 1))), one_b), V.matrix(be_idx(n, 1 << (j - 1))))
            if i == j:
                M = A
            else:
                B = la.mat_mul(la.mat_mul(V.matrix(be_idx(n, 1 << (j - 1))), one_b), V.matrix(be_idx(n, 1 << (i - 1))))
                M = la.mat_add(A, B)
            rep.checked += 1
            if not la.is_zero(M):
                rep.add(Violation((f"be[{i}]", f"be[{j}]"), _fmt(V, M)), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_special_space(V: BimoduleAction, expect_dim: int | None = 1) -> CheckReport:
    """The joint annihilator of all e_I, be_I (I nonempty) is nonzero, of the expected dimension."""
    rep = CheckReport(f"special vectors of {V.name}")
    t0 = time.perf_counter()
    try:
        K = special_elements(V)
    except ValueError as exc:
        rep.add(Violation(("kernel",), {}, str(exc)), None)
        return rep
    rep.checked = 1
    if expect_dim is not None and len(K) != expect_dim:
        rep.add(Violation(("kernel",), {"dimension": str(len(K))}, f"expected dimension {expect_dim}"), None)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def _special(V: BimoduleAction, v: dict | None) -> dict:
    if v is not None:
        return v
    return classify(V).special_vector


def check_vanishing(V: BimoduleAction, v: dict | None = None, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """v(I)e_J = v(I)be_J = bv(I)e_J = 0 for J not in I, and bv(I)be_J = 0 when |J - I| >= 2."""
    n = kan_rank(V)
    v = _special(V, v)
    rep = CheckReport(f"vanishing of the action on {V.name}")
    t0 = time.perf_counter()
    full = (1 << n) - 1
    for I in range(full + 1):
        seq = indices_of(I)
        vI = module_word(n, seq).apply(V, v)
        vIb = module_word(n, seq, True).apply(V, v)
        for J in range(full + 1):
            checks = []
            if J & ~I:
                checks += [("v(I)e_J", vI, e_idx(n, J)), ("v(I)be_J", vI, be_idx(n, J)),
                           ("bv(I)e_J", vIb, e_idx(n, J))]
            if (J & ~I).bit_count() >= 2:
                checks.append(("bv(I)be_J", vIb, be_idx(n, J)))
            for name, x, a in checks:
                y = V.act(x, a)
                rep.checked += 1
                if y:
                    rep.add(Violation((str(seq), kan_label(n, a)), V.format_vector(y), name), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_action_values(V: BimoduleAction, v: dict | None = None, alpha=None,
                        limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """The four action values for J inside I, and bv(I)be_J when exactly one index of J is outside I.

    Every ordering of J is tried, with I arranged as (rest, j_s, ..., j_1);
    e_J in that ordering is sign(ordering) times the ascending monomial.
    """
    n = kan_rank(V)
    ctx = V.ctx
    if v is None or alpha is None:
        c = classify(V)
        v = c.special_vector if v is None else v
        alpha = c.alpha if alpha is None else alpha
    alpha = ctx.coerce(alpha)
    rep = CheckReport(f"action values on {V.name}")
    t0 = time.perf_counter()
    full = (1 << n) - 1

    def word(seq, bar=False):
        return module_word(n, seq, bar).apply(V, v)

    def act_signed(x, a, sign):
        return la.vscale(V.act(x, a), ctx.coerce(sign))

    def record(inputs, got, want, name):
        rep.checked += 1
        if got != want:
            rep.add(Violation(inputs, {"got": V.format_vector(got), "expected": V.format_vector(want)}, name), limit)

    for Jmask in range(full + 1):
        Jset = indices_of(Jmask)
        s = len(Jset)
        for Jord in itertools.permutations(Jset):
            sj = perm_sign(list(Jord))
            for rest_mask in range(full + 1):
                if rest_mask & Jmask:
                    continue
                rest = indices_of(rest_mask)
                Iord = rest + list(Jord[::-1])
                vI, vIb = word(Iord), word(Iord, True)
                tgt, tgtb = word(rest), word(rest, True)
                key = (str(Iord), str(list(Jord)))
                record(key, act_signed(vI, e_idx(n, Jmask), sj), tgt, "v(I)e_J = v(I-J)")
                record(key, act_signed(vI, be_idx(n, Jmask), sj), tgtb, "v(I)be_J = bv(I-J)")
                record(key, act_signed(vIb, e_idx(n, Jmask), sj), la.vscale(tgtb, ctx.coerce(_sgn(s))),
                       "bv(I)e_J = (-1)^s bv(I-J)")
                record(key, act_signed(vIb, be_idx(n, Jmask), sj),
                       la.vscale(tgt, alpha * ctx.coerce(_sgn(s - 1) * (s - 1))),
                       "bv(I)be_J = (-1)^(s-1) alpha (s-1) v(I-J)")
                if s >= 1:
                    # j_s outside I: I = (rest, j_{s-1}, ..., j_1)
                    Iord2 = rest + list(Jord[:-1][::-1])
                    got = act_signed(word(Iord2, True), be_idx(n, Jmask), sj)
                    want = la.vscale(word(rest + [Jord[-1]]), ctx.coerce(_sgn(s - 1)))
                    record((str(Iord2), str(list(Jord))), got, want, "bv(I)be_J = (-1)^(s-1) v(I-J+j_s)")
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_lemmas(V: BimoduleAction, limit: int | None = DEFAULT_LIMIT, alpha=None) -> CheckReport:
    """All of the above, merged into one report."""
    t0 = time.perf_counter()
    parts = [check_supercommutators(V, limit), check_power_relations(V, alpha, limit), check_bar_triple_relations(V, limit),
             check_special_space(V, 1), check_vanishing(V, None, limit), check_action_values(V, None, alpha, limit)]
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p, limit)
    out.subject = f"operator lemmas on {V.name}"
    out.timing_ms = (time.perf_counter() - t0) * 1e3
    return out
