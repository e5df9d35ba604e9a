"""Special vectors, witness words, irreducibility certificates and classification over Kan(n)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .bimodule import BimoduleAction, build_V_alpha, valpha_index, valpha_label
from .grassmann import format_monomial, indices_of, mask_of
from .scalars import QQ, FieldContext


def kan_rank(V: BimoduleAction) -> int:
    """n such that V is over a table of dimension 2^(n+1); raises for anything else."""
    d = V.algebra.dim
    n = d.bit_length() - 2
    if n < 2 or d != 1 << (n + 1) or V.algebra.unit != 0:
        raise ValueError(f"{V.algebra.name} does not look like Kan(n)")
    return n


# Kan(n) basis indices
def e_idx(n: int, mask: int) -> int:
    return mask


def be_idx(n: int, mask: int) -> int:
    return (1 << n) + mask


def kan_label(n: int, a: int) -> str:
    bar, mask = divmod(a, 1 << n)
    return ("b" if bar else "") + format_monomial(mask)


@dataclass(frozen=True)
class OperatorWord:
    """R_{a_1} ... R_{a_p} applied left to right, times a scalar ``coefficient``."""

    factors: tuple[int, ...]
    coefficient: object = 1

    def apply(self, V: BimoduleAction, x: dict) -> dict:
        for a in self.factors:
            if not x:
                return x
            x = V.act(x, a)
        return la.vscale(x, V.ctx.coerce(self.coefficient))

    def then(self, other: "OperatorWord") -> "OperatorWord":
        return OperatorWord(self.factors + other.factors, self.coefficient * other.coefficient)

    def matrix(self, V: BimoduleAction) -> dict:
        M = la.identity(V.dim, V.ctx)
        for a in self.factors:
            M = la.mat_mul(M, V.matrix(a))
        return la.mat_scale(M, V.ctx.coerce(self.coefficient))

    def to_dict(self, n: int, ctx: FieldContext = QQ) -> dict:
        return {"factors": [kan_label(n, a) for a in self.factors],
                "coefficient": ctx.format(ctx.coerce(self.coefficient))}


def module_word(n: int, seq: Sequence[int], bar: bool = False) -> OperatorWord:
    """Word producing v(seq) (or its bar) from v: R_1b R_be_{i1} ... R_1b R_be_{ik} [R_1b]."""
    f: list[int] = []
    for i in seq:
        f += [be_idx(n, 0), be_idx(n, 1 << (i - 1))]
    if bar:
        f.append(be_idx(n, 0))
    return OperatorWord(tuple(f))


# -- special elements --------------------------------------------------------------

def annihilator_operators(n: int) -> list[int]:
    return [a for a in range(1 << (n + 1)) if a % (1 << n) != 0]


def special_elements(V: BimoduleAction) -> list[dict]:
    """Basis of the joint kernel of R_{e_I}, R_{be_I} for all nonempty I."""
    n = kan_rank(V)
    K = la.left_kernel([V.matrix(a) for a in annihilator_operators(n)], V.dim, V.ctx)
    if not K:
        raise ValueError("no special vector: not a unital Jordan Kan(n)-bimodule")
    return K


# -- witness words -----------------------------------------------------------------

def _raw_witness(n: int, mask: int) -> tuple[int, ...]:
    full = (1 << n) - 1
    comp = indices_of(full & ~mask)
    f = [e_idx(n, mask)]
    for c in comp:
        f += [be_idx(n, 0), be_idx(n, 1 << (c - 1))]
    if mask != full:
        f.append(e_idx(n, full & ~mask))
    else:
        f += [be_idx(n, 0), be_idx(n, 1), e_idx(n, 1)]
    return tuple(f)


@lru_cache(maxsize=None)
def _reference(n: int) -> BimoduleAction:
    return build_V_alpha(n, 0, 0, QQ)


def _calibrate(n: int, factors: tuple[int, ...], source: int) -> int:
    """The sign s with (source vector of V(0)) . factors = s * v; the word stores 1/s = s."""
    V = _reference(n)
    out = OperatorWord(factors).apply(V, {source: QQ.one})
    if set(out) != {0} or abs(out[0]) != 1:
        raise AssertionError(f"witness word for {V.vlabels[source]} does not land on +-v: {out}")
    return int(out[0])


@lru_cache(maxsize=None)
def witness_word(n: int, mask: int) -> OperatorWord:
    """W(I): sends v(I) to v and kills every other v(J) and every bv(J).

    The word is the composite from the proof of linear independence; its sign
    is fixed by evaluating it once on V(0) and stored as the coefficient.
    """
    f = _raw_witness(n, mask)
    return OperatorWord(f, _calibrate(n, f, valpha_index(n, indices_of(mask))))


@lru_cache(maxsize=None)
def witness_word_bar(n: int, mask: int) -> OperatorWord:
    """W'(I) by the construction that works for every alpha, including 0.

    I != I_n: R_{be_i} W(I + {i}) with i the least index outside I;
    I = I_n: R_{e_n} W'(I_n - {n}).  Signs are calibrated on V(0).
    """
    full = (1 << n) - 1
    if mask != full:
        i = indices_of(full & ~mask)[0]
        f = (be_idx(n, 1 << (i - 1)),) + _raw_witness(n, mask | (1 << (i - 1)))
    else:
        f = (e_idx(n, 1 << (n - 1)),) + witness_word_bar(n, full & ~(1 << (n - 1))).factors
    return OperatorWord(f, _calibrate(n, f, valpha_index(n, indices_of(mask), bar=True)))


def witness_word_bar_alpha(n: int, mask: int, alpha, ctx: FieldContext) -> OperatorWord:
    """W'(I) = (1/alpha) R_1b W(I), valid when alpha != 0."""
    alpha = ctx.coerce(alpha)
    if alpha == 0:
        raise ValueError("this witness needs alpha != 0")
    W = witness_word(n, mask)
    return OperatorWord((be_idx(n, 0),) + W.factors, ctx.coerce(W.coefficient) / alpha)


def word_basis(V: BimoduleAction, v: dict) -> list[dict]:
    """Images v(I), bv(I) of ``v``, indexed like the V(alpha) basis."""
    n = kan_rank(V)
    out = []
    for m in range(1 << (n + 1)):
        bar, mask = divmod(m, 1 << n)
        out.append(module_word(n, indices_of(mask), bool(bar)).apply(V, v))
    return out


def all_witness_words(n: int, alpha=None, ctx: FieldContext = QQ) -> list[OperatorWord]:
    """W(I) then W'(I) for every I, in V(alpha) basis order."""
    full = 1 << n
    words = [witness_word(n, m) for m in range(full)]
    if alpha is not None and ctx.coerce(alpha) != 0:
        words += [witness_word_bar_alpha(n, m, alpha, ctx) for m in range(full)]
    else:
        words += [witness_word_bar(n, m) for m in range(full)]
    return words


def witness_table(V: BimoduleAction, basis: Sequence[dict], v: dict, words: Sequence[OperatorWord]) -> list:
    """Entries (k, j, value) where basis[k] . words[j] differs from delta_{kj} v."""
    bad = []
    for j, W in enumerate(words):
        for k, b in enumerate(basis):
            got = W.apply(V, b)
            want = v if k == j else {}
            if got != want:
                bad.append((k, j, got))
    return bad


def recover_coefficients(V: BimoduleAction, x: dict, v: dict, basis: Sequence[dict] | None = None,
                         alpha=None) -> list:
    """Read off the coordinates of ``x`` in the word basis by applying each witness word.

    Each image must be a multiple of ``v``; returns the multipliers in basis
    order (they equal the coordinates when the witness table is the identity).
    """
    n = kan_rank(V)
    pivot = min(v)
    out = []
    for W in all_witness_words(n, alpha, V.ctx):
        y = W.apply(V, x)
        c = y.get(pivot, V.ctx.zero) / v[pivot]
        if y != la.vscale(v, c):
            raise ValueError("witness image is not on the special line")
        out.append(c)
    return out


# -- closure and irreducibility --------------------------------------------------------

def closure(V: BimoduleAction, x: dict) -> list[dict]:
    """Basis of the smallest subspace containing ``x`` and closed under every R_a."""
    rs = la.RowSpace(V.ctx)
    queue = [x] if x else []
    basis = []
    while queue:
        y = queue.pop()
        r, _ = rs.reduce(y)
        if not r:
            continue
        rs.add(r)
        basis.append(r)
        for a in V.R:
            z = V.act(r, a)
            if z:
                queue.append(z)
    return basis


def _homogeneous_parts(V: BimoduleAction, x: dict) -> list[dict]:
    parts = []
    for p in (0, 1):
        part = {i: c for i, c in x.items() if V.vparity[i] == p}
        if part:
            parts.append(part)
    return parts


@dataclass
class IrreducibilityResult:
    irreducible: bool
    certificate: dict

    def __bool__(self):
        return self.irreducible


def check_irreducible(V: BimoduleAction) -> IrreducibilityResult:
    """Certificate-producing irreducibility test for unital Jordan modules over Kan(n).

    With a one-dimensional special line F v, the words v(I), bv(I) give a
    basis and the witness words W(I), W'(I) project each coordinate onto v;
    together with closure(v) = V this shows every nonzero submodule is V.
    Otherwise a proper invariant subspace is exhibited.
    """
    n = kan_rank(V)
    ctx = V.ctx
    K = special_elements(V)
    if len(K) > 1:
        candidates = [x for s in K for x in _homogeneous_parts(V, s)]
        total: dict = {}
        for s in K:
            total = la.vadd(total, s)
        candidates += _homogeneous_parts(V, total)
        for c in candidates:
            sub = closure(V, c)
            if len(sub) < V.dim:
                return IrreducibilityResult(False, {
                    "type": "reducible",
                    "reason": f"special space has dimension {len(K)}",
                    "subspace_basis": [V.format_vector(b) for b in sub],
                })
        raise ValueError("special space is not a line but no proper invariant subspace was found")
    v = K[0]
    basis = word_basis(V, v)
    rank = la.rank(basis, ctx)
    if rank < V.dim:
        sub = closure(V, v)
        if len(sub) < V.dim:
            return IrreducibilityResult(False, {"type": "reducible", "reason": "closure of the special vector",
                                                "subspace_basis": [V.format_vector(b) for b in sub]})
        raise ValueError("word images of the special vector do not span V")
    alpha = _eigenvalue(v, V.act(V.act(v, be_idx(n, 0)), be_idx(n, 0)), ctx)
    words = all_witness_words(n, alpha if alpha is not None and alpha != 0 else None, ctx)
    bad = witness_table(V, basis, v, words)
    if bad:
        raise ValueError(f"witness words failed on {len(bad)} entries; module is not of the expected form")
    if len(closure(V, v)) != V.dim:
        raise AssertionError("closure of the special vector is proper although the word basis spans V")
    labels = [valpha_label(n, m) for m in range(V.dim)]
    cert = {
        "type": "irreducible",
        "special_vector": V.format_vector(v),
        "alpha": ctx.format(alpha) if alpha is not None else None,
        "witness_words": [{"target": labels[k], **w.to_dict(n, ctx)} for k, w in enumerate(words)],
        "word_basis": [{"name": labels[k], "factors": module_word(n, indices_of(k % (1 << n)), k >= 1 << n).to_dict(n, ctx)["factors"]}
                       for k in range(V.dim)],
        "closure_dimension": V.dim,
    }
    return IrreducibilityResult(True, cert)


def _eigenvalue(v: dict, w: dict, ctx: FieldContext):
    """lambda with w = lambda v, or None."""
    if not v:
        return None
    p = min(v)
    lam = w.get(p, ctx.zero) / v[p]
    return lam if la.vscale(v, lam) == w or (not w and lam == 0) else None


# -- classification ----------------------------------------------------------------

@dataclass
class ClassificationResult:
    v_parity: int
    alpha: object
    special_vector: dict = field(default_factory=dict)

    def key(self):
        return (self.v_parity, self.alpha)

    def to_dict(self, ctx: FieldContext, V: BimoduleAction | None = None) -> dict:
        d = {"parity": self.v_parity, "alpha": ctx.format(self.alpha)}
        if V is not None:
            d["special_vector"] = V.format_vector(self.special_vector)
        return d


def classify(V: BimoduleAction) -> ClassificationResult:
    """Parity of the special vector and alpha with v R_1b^2 = alpha v."""
    n = kan_rank(V)
    K = special_elements(V)
    if len(K) != 1:
        raise ValueError(f"special space has dimension {len(K)}; module is not irreducible")
    v = K[0]
    ps = {V.vparity[i] for i in v}
    if len(ps) != 1:
        raise ValueError("special vector is not homogeneous")
    w = V.act(V.act(v, be_idx(n, 0)), be_idx(n, 0))
    alpha = _eigenvalue(v, w, V.ctx)
    if alpha is None:
        raise ValueError("special line is not an eigenline of R_1b^2")
    return ClassificationResult(ps.pop(), alpha, v)


@dataclass
class IsomorphismResult:
    isomorphic: bool
    phi: dict | None = None      # row-vector matrix: x -> x @ phi
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def check_isomorphic(V: BimoduleAction, W: BimoduleAction) -> IsomorphismResult:
    """Decide V ~ W by their classifications; when equal, build and verify the explicit map."""
    if V.dim != W.dim or not V.algebra.same_structure(W.algebra):
        return IsomorphismResult(False, None, "different dimension or algebra")
    cV, cW = classify(V), classify(W)
    if cV.v_parity != cW.v_parity:
        return IsomorphismResult(False, None, "special vectors have different parity")
    if cV.alpha != cW.alpha:
        return IsomorphismResult(False, None, "different alpha")
    ctx = V.ctx
    BV = word_basis(V, cV.special_vector)
    BW = word_basis(W, cW.special_vector)
    MV = {k: b for k, b in enumerate(BV)}
    MW = {k: b for k, b in enumerate(BW)}
    try:
        inv = la.invert(MV, V.dim, ctx)
    except ValueError:
        raise ValueError("word images do not form a basis; module is not irreducible")
    phi = la.mat_mul(inv, MW)
    for a in range(V.algebra.dim):
        left = la.mat_mul(V.matrix(a), phi)
        right = la.mat_mul(phi, W.matrix(a))
        if left != right:
            raise AssertionError(f"isomorphism fails equivariance at {V.algebra.labels[a]}")
    for i, row in phi.items():
        for j in row:
            if V.vparity[i] != W.vparity[j]:
                raise AssertionError("isomorphism does not preserve parity")
    return IsomorphismResult(True, phi, "equal parity and alpha; map verified")
