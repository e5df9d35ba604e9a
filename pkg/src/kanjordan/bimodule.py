"""Graded bimodules given by right-action matrices, and the modules V(alpha) over Kan(n)."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from . import linalg as la
from .grassmann import indices_of, mask_of, normalize, perm_sign, format_monomial
from .report import CheckReport
from .scalars import QQ, FieldContext
from .superalg import DEFAULT_LIMIT, StructureTable, check_jordan_superidentity


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


@dataclass(frozen=True, eq=False)
class BimoduleAction:
    """Right action ``v -> v.a`` of each algebra basis element, as a sparse row-vector matrix.

    The left action is implied by supercommutativity: a.v = (-1)^{|a||v|} v.a.
    """

    algebra: StructureTable
    dim: int
    vparity: tuple[int, ...]
    R: dict          # algebra index -> {row: {col: scalar}}
    vlabels: tuple[str, ...]
    name: str = ""

    @classmethod
    def build(cls, algebra: StructureTable, vparity: Sequence[int], R: dict,
              vlabels: Sequence[str] | None = None, name: str = "", validate: bool = True):
        dim = len(vparity)
        ctx = algebra.ctx
        clean = {}
        for a, M in R.items():
            rows = {}
            for i, row in M.items():
                r = {j: ctx.coerce(c) for j, c in row.items()}
                r = {j: c for j, c in r.items() if c != 0}
                if r:
                    rows[i] = r
            if rows:
                clean[a] = rows
        vlabels = tuple(vlabels) if vlabels is not None else tuple(f"u{i}" for i in range(dim))
        V = cls(algebra, dim, tuple(int(p) & 1 for p in vparity), clean, vlabels, name)
        if validate:
            V.validate()
        return V

    @property
    def ctx(self) -> FieldContext:
        return self.algebra.ctx

    def validate(self) -> None:
        if len(self.vlabels) != self.dim:
            raise ValueError("label count does not match module dimension")
        ap = self.algebra.parity
        for a, M in self.R.items():
            if not 0 <= a < self.algebra.dim:
                raise ValueError(f"action of unknown algebra index {a}")
            for i, row in M.items():
                for j in row:
                    if not (0 <= i < self.dim and 0 <= j < self.dim):
                        raise ValueError("action matrix index out of range")
                    if self.vparity[j] != (self.vparity[i] + ap[a]) % 2:
                        raise ValueError(f"{self.vlabels[i]}.{self.algebra.labels[a]} -> {self.vlabels[j]} breaks parity")

    def matrix(self, a: int) -> dict:
        return self.R.get(a, {})

    def act(self, v: dict, a: int) -> dict:
        return la.vec_mat(v, self.matrix(a))

    def act_element(self, v: dict, x: dict) -> dict:
        """v . x for an algebra element given as {basis index: coefficient}."""
        out: dict = {}
        for a, c in x.items():
            out = la.vadd(out, self.act(v, a), c)
        return out

    def basis_vector(self, i: int) -> dict:
        return {i: self.ctx.one}

    def same_action(self, other: "BimoduleAction") -> bool:
        return (self.dim == other.dim and self.vparity == other.vparity and self.R == other.R
                and self.algebra.same_structure(other.algebra))

    def with_matrix(self, a: int, M: dict, name: str = "") -> "BimoduleAction":
        R = dict(self.R)
        R[a] = M
        return BimoduleAction.build(self.algebra, self.vparity, R, self.vlabels, name or self.name + "*", validate=False)

    def format_vector(self, v: dict) -> dict:
        return {self.vlabels[i]: self.ctx.format(c) for i, c in sorted(v.items())}

    # -- serialization -----------------------------------------------------------

    def to_dict(self, embed_algebra: bool | None = None) -> dict:
        ctx = self.ctx
        d = {
            "algebra_ref": self.algebra.name,
            "dimV": self.dim,
            "vparities": list(self.vparity),
            "R": [[a, [[i, [[j, ctx.format(c)] for j, c in sorted(row.items())]] for i, row in sorted(M.items())]]
                  for a, M in sorted(self.R.items())],
            "vlabels": list(self.vlabels),
            "field": ctx.name,
            "name": self.name,
        }
        if embed_algebra is None:
            embed_algebra = _kan_n(self.algebra.name) is None
        if embed_algebra:
            d["algebra"] = self.algebra.to_dict()
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict, algebra: StructureTable | None = None, validate: bool = True) -> "BimoduleAction":
        ctx = FieldContext.from_name(d.get("field", "Q"))
        if algebra is None:
            if "algebra" in d:
                algebra = StructureTable.from_dict(d["algebra"])
            else:
                n = _kan_n(d.get("algebra_ref", ""))
                if n is None:
                    raise ValueError(f"cannot resolve algebra {d.get('algebra_ref')!r}")
                from .kantor import build_kan
                algebra = build_kan(n, ctx)
        if algebra.ctx != ctx:
            raise ValueError("bimodule field differs from the algebra's field")
        if len(d["vparities"]) != d["dimV"]:
            raise ValueError("vparities length does not match dimV")
        R = {int(a): {int(i): {int(j): ctx.parse(c) for j, c in row} for i, row in M} for a, M in d["R"]}
        return cls.build(algebra, d["vparities"], R, d.get("vlabels"), d.get("name", ""), validate)

    @classmethod
    def from_json(cls, text: str, algebra: StructureTable | None = None) -> "BimoduleAction":
        return cls.from_dict(json.loads(text), algebra)

    def __repr__(self):
        return f"BimoduleAction({self.name or 'anonymous'}, dim={self.dim}, over {self.algebra.name})"


def _kan_n(name: str) -> int | None:
    m = re.fullmatch(r"Kan\((\d+)\)", name or "")
    return int(m.group(1)) if m else None


# -- constructions -----------------------------------------------------------------

def split_null_extension(J: StructureTable, V: BimoduleAction) -> StructureTable:
    """J + V with J.J from J, J.V and V.J from the action, and V.V = 0."""
    if not V.algebra.same_structure(J):
        raise ValueError("bimodule is over a different algebra")
    dJ = J.dim
    prods = {k: list(t) for k, t in J.product.items()}
    for a, M in V.R.items():
        pa = J.parity[a]
        for i, row in M.items():
            terms = [(dJ + j, c) for j, c in row.items()]
            prods[(dJ + i, a)] = terms
            if pa and V.vparity[i]:
                prods[(a, dJ + i)] = [(k, -c) for k, c in terms]
            else:
                prods[(a, dJ + i)] = terms
    parity = list(J.parity) + list(V.vparity)
    labels = list(J.labels) + list(V.vlabels)
    return StructureTable.build(parity, prods, labels, J.ctx, None, f"E({J.name},{V.name})")


def check_jordan_bimodule(J: StructureTable, V: BimoduleAction, limit: int | None = DEFAULT_LIMIT, *,
                          method: str = "auto", threads: int = 1, progress=None) -> CheckReport:
    """Jordan identity on the split null extension; passes iff V is a Jordan bimodule (J being Jordan)."""
    E = split_null_extension(J, V)
    rep = check_jordan_superidentity(E, limit, method=method, threads=threads, progress=progress)
    rep.subject = f"Jordan bimodule {V.name or 'V'} over {J.name or 'J'}"
    return rep


def regular_bimodule(J: StructureTable) -> BimoduleAction:
    R: dict = {}
    for (i, a), terms in J.product.items():
        R.setdefault(a, {})[i] = {k: c for k, c in terms}
    return BimoduleAction.build(J, J.parity, R, J.labels, f"Reg({J.name})")


def opposite(V: BimoduleAction) -> BimoduleAction:
    """Same right action, every module parity flipped."""
    name = V.name[:-3] if V.name.endswith("^op") else V.name + "^op"
    return BimoduleAction(V.algebra, V.dim, tuple(1 - p for p in V.vparity), V.R, V.vlabels, name)


def direct_sum(V: BimoduleAction, W: BimoduleAction, name: str = "") -> BimoduleAction:
    if not V.algebra.same_structure(W.algebra):
        raise ValueError("summands over different algebras")
    off = V.dim
    R: dict = {}
    for a in set(V.R) | set(W.R):
        M = {i: dict(r) for i, r in V.matrix(a).items()}
        for i, r in W.matrix(a).items():
            M[off + i] = {off + j: c for j, c in r.items()}
        R[a] = M
    labels = [f"{l}'1" for l in V.vlabels] + [f"{l}'2" for l in W.vlabels]
    return BimoduleAction.build(V.algebra, V.vparity + W.vparity, R, labels,
                                name or f"{V.name}+{W.name}", validate=False)


def zero_module(J: StructureTable, parities: Sequence[int], name: str = "Zero") -> BimoduleAction:
    return BimoduleAction.build(J, parities, {}, None, name)


def permute_basis(V: BimoduleAction, perm: Sequence[int], name: str = "") -> BimoduleAction:
    """Relabel so that new basis vector ``k`` is old vector ``perm[k]``."""
    inv = {old: new for new, old in enumerate(perm)}
    R = {a: {inv[i]: {inv[j]: c for j, c in row.items()} for i, row in M.items()} for a, M in V.R.items()}
    return BimoduleAction.build(V.algebra, [V.vparity[p] for p in perm], R, [V.vlabels[p] for p in perm],
                                name or V.name, validate=False)


def sub_bimodule(V: BimoduleAction, basis: Sequence[dict], name: str = "") -> BimoduleAction:
    """Action on the span of homogeneous, independent ``basis``; raises unless the span is invariant."""
    ctx = V.ctx
    rs = la.RowSpace(ctx)
    for b in basis:
        if not rs.add(b):
            raise ValueError("sub-bimodule basis is linearly dependent")
    parities = []
    for b in basis:
        ps = {V.vparity[i] for i in b}
        if len(ps) != 1:
            raise ValueError("sub-bimodule basis vectors must be homogeneous")
        parities.append(ps.pop())
    R: dict = {}
    for a in V.R:
        M = {}
        for k, b in enumerate(basis):
            coords = rs.coordinates(V.act(b, a))
            if coords is None:
                raise ValueError(f"span is not invariant under {V.algebra.labels[a]}")
            if coords:
                M[k] = coords
        if M:
            R[a] = M
    return BimoduleAction.build(V.algebra, parities, R, [f"w{k}" for k in range(len(basis))],
                                name or f"sub({V.name})", validate=False)


def _eigenspace(V: BimoduleAction, M: dict, lam) -> list[dict]:
    """Homogeneous basis of {x : x M = lam x}, computed parity block by parity block."""
    ctx = V.ctx
    shifted = la.mat_add(M, la.identity(V.dim, ctx), -ctx.coerce(lam))
    out = []
    for p in (0, 1):
        idx = [i for i in range(V.dim) if V.vparity[i] == p]
        pos = {g: l for l, g in enumerate(idx)}
        block = {pos[i]: {pos[j]: c for j, c in shifted.get(i, {}).items() if j in pos} for i in idx}
        for x in la.left_kernel([block], len(idx), ctx):
            out.append({idx[l]: c for l, c in x.items()})
    return out


def peirce_decompose(J: StructureTable, V: BimoduleAction):
    """Split V into the eigenspaces of R_1 for 0, 1 and 1/2; returns ``(V0, V1, Vhalf)``."""
    if J.unit is None:
        raise ValueError("Peirce decomposition needs a unital algebra")
    ctx = V.ctx
    M = V.matrix(J.unit)
    half = ctx.one / ctx.coerce(2)
    spaces = [_eigenspace(V, M, lam) for lam in (ctx.zero, ctx.one, half)]
    if sum(len(s) for s in spaces) != V.dim:
        raise ValueError("R_1 is not diagonalizable with eigenvalues in {0, 1, 1/2}: not a Jordan bimodule")
    names = ("V(0)", "V(1)", "V(1/2)")
    return tuple(sub_bimodule(V, s, f"{V.name}:{nm}") for s, nm in zip(spaces, names))


# -- V(alpha) --------------------------------------------------------------------

@dataclass(frozen=True)
class VAlphaSpec:
    n: int
    alpha: object = 0
    v_parity: int = 0


def valpha_label(n: int, index: int) -> str:
    bar, mask = divmod(index, 1 << n)
    body = "[" + ",".join(str(i) for i in indices_of(mask)) + "]"
    return ("bv" if bar else "v") + body


def valpha_index(n: int, indices=(), bar: bool = False) -> int:
    return ((1 << n) if bar else 0) + mask_of(indices)


def valpha_action_entry(n: int, m: int, a: int, alpha, ctx: FieldContext):
    """(target index, coefficient) of basis vector ``m`` acted on by Kan(n) basis ``a``, or None."""
    full = 1 << n
    mbar, I = divmod(m, full)
    abar, J = divmod(a, full)
    J1, J2 = I & J, J & ~I
    s1, s2 = J1.bit_count(), J2.bit_count()
    s = s1 + s2
    # rewrite e_J and v(I) in the interlocked order, tracking signs
    sgnJ = perm_sign(indices_of(J1) + indices_of(J2))
    rest = indices_of(I & ~J1)
    sgnI = perm_sign(rest + indices_of(J1)[::-1])
    sign = sgnI * sgnJ
    if not mbar and not abar:
        if s2:
            return None
        return I & ~J, ctx.one * sign
    if not mbar and abar:
        if s2:
            return None
        return full + (I & ~J), ctx.one * sign
    if mbar and not abar:
        if s2:
            return None
        return full + (I & ~J), ctx.one * (sign * _sgn(s))
    if s2 == 1:
        nsign, mask = normalize(rest + indices_of(J2))
        return mask, ctx.one * (sign * _sgn(s1) * nsign)
    if s2 == 0:
        c = ctx.coerce(alpha) * ctx.coerce((s - 1) * sign * _sgn(s - 1))
        return (I & ~J, c) if c != 0 else None
    return None


def build_V_alpha(n: int, alpha=0, v_parity: int = 0, ctx: FieldContext = QQ,
                  algebra: StructureTable | None = None) -> BimoduleAction:
    """The module V(alpha) on v(I), bv(I) with the explicit Kan(n) action.

    ``alpha`` may be any scalar of ``ctx``; over a symbolic context pass
    ``ctx.alpha`` to keep it formal.
    """
    from .kantor import build_kan

    if n < 2:
        raise ValueError("V(alpha) needs n >= 2")
    K = algebra if algebra is not None else build_kan(n, ctx)
    alpha = ctx.coerce(alpha)
    full = 1 << n
    dim = 2 * full
    R: dict = {}
    for a in range(K.dim):
        M = {}
        for m in range(dim):
            r = valpha_action_entry(n, m, a, alpha, ctx)
            if r is not None:
                M[m] = {r[0]: r[1]}
        R[a] = M
    vpar = [(v_parity + (m % full).bit_count() + m // full) % 2 for m in range(dim)]
    labels = [valpha_label(n, m) for m in range(dim)]
    return BimoduleAction.build(K, vpar, R, labels, f"V(n={n},alpha={ctx.format(alpha)},p={v_parity % 2})")
