"""Jordan brackets on P (x) F[t]/(t^N) from a generalized derivation, and the embedded V(alpha)."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .bimodule import BimoduleAction, build_V_alpha, valpha_label
from .grassmann import indices_of, perm_sign
from .kantor import DotBracketAlgebra, grassmann_poisson, kantor_double
from .report import CheckReport, Violation
from .scalars import QQ, FieldContext
from .superalg import DEFAULT_LIMIT, Element, StructureTable


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


@dataclass(frozen=True)
class TruncatedPolyAlgebra:
    """F[t]/(t^N) with the derivation D(t^k) = -k alpha t^k."""

    N: int
    alpha: object = 0
    ctx: FieldContext = QQ

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("truncation order must be at least 2")
        object.__setattr__(self, "alpha", self.ctx.coerce(self.alpha))

    def mul(self, i: int, j: int) -> int | None:
        """Exponent of t^i t^j, None when it falls into (t^N)."""
        return i + j if i + j < self.N else None

    def D(self, k: int):
        """Coefficient c with D(t^k) = c t^k."""
        return self.alpha * self.ctx.coerce(-k)

    def check_derivation(self) -> bool:
        """D(ab) = D(a)b + aD(b) on basis monomials (the ideal (t^N) is D-stable)."""
        return all(self.D(i + j) == self.D(i) + self.D(j) for i in range(self.N) for j in range(self.N))

    def label(self, k: int) -> str:
        return f"t^{k}"


def graded_E(P: DotBracketAlgebra) -> dict:
    """E(e_I) = (|I| - 1) e_I on a Grassmann algebra, as {basis: {basis: coeff}}."""
    ctx = P.ctx
    return {m: {m: ctx.coerce(m.bit_count() - 1)} for m in range(P.dim) if m.bit_count() != 1}


def _apply(E: dict, x: Element) -> Element:
    out = x.table.zero()
    for i, c in x.coeffs.items():
        out = out + Element(x.table, E.get(i, {})).scale(c)
    return out


def check_generalized_derivation(P: DotBracketAlgebra, E: dict, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """E(ab) = E(a)b + aE(b) - abE(1) and E{p,q} = {Ep,q} + {p,Eq} + {p,q}E(1) on basis pairs."""
    t0 = time.perf_counter()
    rep = CheckReport(f"generalized derivation on {P.name}")
    B = [P.basis(i) for i in range(P.dim)]
    E1 = _apply(E, P.basis(P.unit))
    lab = P.dot.labels
    for i in range(P.dim):
        Ea = _apply(E, B[i])
        for j in range(P.dim):
            Eb = _apply(E, B[j])
            ab = B[i] * B[j]
            r = _apply(E, ab) - Ea * B[j] - B[i] * Eb + ab * E1
            rep.checked += 1
            if r:
                rep.add(Violation((lab[i], lab[j]), r.labelled(), "generalized Leibniz"), limit)
            pq = P.br(B[i], B[j])
            r = _apply(E, pq) - P.br(Ea, B[j]) - P.br(B[i], Eb) - pq * E1
            rep.checked += 1
            if r:
                rep.add(Violation((lab[i], lab[j]), r.labelled(), "bracket compatibility"), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def jordan_bracket_tensor(P: DotBracketAlgebra, E: dict, A: TruncatedPolyAlgebra, name: str = "") -> DotBracketAlgebra:
    """P (x) A with <p(x)a, q(x)b> = {p,q}(x)ab + E(p)q(x)aD(b) - (-1)^{|p||q|}E(q)p(x)D(a)b.

    Basis index of p (x) t^k is ``k * dim(P) + p``.
    """
    if not P.is_poisson_D():
        raise ValueError("the tensor bracket needs a Poisson algebra (D = 0)")
    if A.ctx != P.ctx:
        raise ValueError("field mismatch between P and A")
    ctx = P.ctx
    d, N = P.dim, A.N
    B = [P.basis(i) for i in range(d)]
    EB = [_apply(E, b) for b in B]
    dot_prods: dict = {}
    br: dict = {}
    for i in range(N):
        for j in range(N):
            k = A.mul(i, j)
            if k is None:
                continue
            for p in range(d):
                for q in range(d):
                    src_p, src_q = i * d + p, j * d + q
                    terms = P.dot.product.get((p, q), ())
                    if terms:
                        dot_prods[(src_p, src_q)] = [(k * d + m, c) for m, c in terms]
                    val = P.br(B[p], B[q])
                    Db, Da = A.D(j), A.D(i)
                    if Db != 0:
                        val = val + (EB[p] * B[q]).scale(Db)
                    if Da != 0:
                        val = val - (EB[q] * B[p]).scale(Da * _sgn(P.dot.parity[p] * P.dot.parity[q]))
                    if val:
                        br[(src_p, src_q)] = [(k * d + m, c) for m, c in val.coeffs.items()]
    parity = [P.dot.parity[p] for _ in range(N) for p in range(d)]
    labels = [f"{P.dot.labels[p]}*{A.label(k)}" for k in range(N) for p in range(d)]
    tname = name or f"{P.name}[t]/(t^{N})"
    dot = StructureTable.build(parity, dot_prods, labels, ctx, P.unit, tname)
    return DotBracketAlgebra.build(dot, br, tname)


def grassmann_tensor(n: int, alpha, N: int, ctx: FieldContext = QQ) -> DotBracketAlgebra:
    P = grassmann_poisson(n, ctx)
    return jordan_bracket_tensor(P, graded_E(P), TruncatedPolyAlgebra(N, alpha, ctx),
                                 f"G{n}[t]/(t^{N}),alpha={ctx.format(ctx.coerce(alpha))}")


def build_J_GnT_alpha(n: int, alpha=0, N: int = 4, ctx: FieldContext = QQ) -> StructureTable:
    """Kantor double of G_n (x) F[t]/(t^N) with the tensor bracket; dimension 2 * 2^n * N."""
    if n < 2:
        raise ValueError("need n >= 2")
    A = grassmann_tensor(n, alpha, N, ctx)
    return kantor_double(A, f"J(G{n}[t]/(t^{N}))_{ctx.format(ctx.coerce(alpha))}")


def tensor_index(n: int, mask: int, k: int, N: int, bar: bool = False) -> int:
    d = 1 << n
    return (d * N if bar else 0) + k * d + mask


def embedding_sign(n: int, mask: int) -> int:
    """Sign of the arrangement (I_n minus I ascending, then I descending) of 1..n."""
    I = indices_of(mask)
    rest = [i for i in range(1, n + 1) if i not in I]
    return perm_sign(rest + I[::-1])


@dataclass
class EmbeddingResult:
    W: BimoduleAction              # Kan(n) acting on G_n (x) t + its bar, in W's own basis
    transported: BimoduleAction    # the same action rewritten in the v(I), bv(I) basis
    reference: BimoduleAction      # the explicit V(alpha) table
    mismatches: list               # (module label, algebra label, transported, reference)
    closed: bool

    @property
    def ok(self) -> bool:
        return self.closed and not self.mismatches


def embed_V_alpha(n: int, alpha=0, ctx: FieldContext = QQ, N: int = 2, tensor_alpha=None) -> EmbeddingResult:
    """Compare the Kan(n)-action on W = G_n (x) t + bar(G_n (x) t) with the explicit V(alpha).

    v(I) is sent to sign * e_{I_n minus I} (x) t and bv(I) to the bar of that,
    with ``embedding_sign``.  ``tensor_alpha`` is the parameter used in the
    derivation D(t) = -tensor_alpha * t; by default ``-alpha``, which is the
    value for which W realizes V(alpha) (see the tests).
    """
    from .kantor import build_kan

    alpha = ctx.coerce(alpha)
    ta = -alpha if tensor_alpha is None else ctx.coerce(tensor_alpha)
    big = build_J_GnT_alpha(n, ta, N, ctx)
    K = build_kan(n, ctx)
    full = 1 << n
    # Kan(n) basis index a = bar * 2^n + mask sits at t-degree 0
    kan_to_big = [tensor_index(n, a % full, 0, N, a >= full) for a in range(K.dim)]
    w_to_big = [tensor_index(n, m % full, 1, N, m >= full) for m in range(2 * full)]
    big_to_w = {g: i for i, g in enumerate(w_to_big)}
    closed = True
    R: dict = {}
    for a in range(K.dim):
        M = {}
        for i, g in enumerate(w_to_big):
            row = {}
            for k, c in big.product.get((g, kan_to_big[a]), ()):
                if k not in big_to_w:
                    closed = False
                    continue
                row[big_to_w[k]] = c
            if row:
                M[i] = row
        R[a] = M
    wpar = [big.parity[g] for g in w_to_big]
    wlabels = [big.labels[g] for g in w_to_big]
    W = BimoduleAction.build(K, wpar, R, wlabels, f"W(n={n},alpha={ctx.format(alpha)})")

    # v basis index m -> (W index, sign)
    phi = {}
    for m in range(2 * full):
        bar, I = divmod(m, full)
        phi[m] = (bar * full + ((full - 1) & ~I), embedding_sign(n, I))
    inv = {w: (m, s) for m, (w, s) in phi.items()}
    TR: dict = {}
    for a, M in W.R.items():
        TM = {}
        for wi, row in M.items():
            m, s = inv[wi]
            TM[m] = {inv[wj][0]: c * (s * inv[wj][1]) for wj, c in row.items()}
        TR[a] = TM
    ref = build_V_alpha(n, alpha, n % 2, ctx, K)
    transported = BimoduleAction.build(K, [wpar[phi[m][0]] for m in range(2 * full)], TR,
                                       [valpha_label(n, m) for m in range(2 * full)],
                                       f"W->V(n={n},alpha={ctx.format(alpha)})")
    mismatches = []
    for a in range(K.dim):
        A1, A2 = transported.matrix(a), ref.matrix(a)
        for m in range(2 * full):
            r1, r2 = A1.get(m, {}), A2.get(m, {})
            if r1 != r2:
                mismatches.append((ref.vlabels[m], K.labels[a],
                                   transported.format_vector(r1), ref.format_vector(r2)))
    if transported.vparity != ref.vparity:
        mismatches.append(("parity", "", transported.vparity, ref.vparity))
    return EmbeddingResult(W, transported, ref, mismatches, closed)
