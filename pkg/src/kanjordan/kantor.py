"""Dot-bracket superalgebras, Kantor doubling, the doubling conditions and Kan(n)."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .grassmann import (Grassmann, GrassmannElement, format_monomial, indices_of, mask_of, normalize,
                        parity as mask_parity, poisson_bracket, wedge, wedge_sign)
from .report import CheckReport, Violation
from .scalars import QQ, FieldContext
from .superalg import DEFAULT_LIMIT, Element, StructureTable, multiply


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


@dataclass(frozen=True, eq=False)
class DotBracketAlgebra:
    """A unital supercommutative associative ``dot`` table plus a bilinear bracket.

    The bracket is stored as a second structure table over the same basis, so
    bracket entries get the same parity validation as products.  ``D(f)`` is
    always derived as ``{f, 1}``.
    """

    dot: StructureTable
    bracket: StructureTable
    name: str = ""
    _D: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, dot: StructureTable, bracket_entries: dict, name: str = "") -> "DotBracketAlgebra":
        if dot.unit is None:
            raise ValueError("dot-bracket algebra must be unital")
        br = StructureTable.build(dot.parity, bracket_entries, dot.labels, dot.ctx, None, name + " bracket")
        return cls(dot, br, name or dot.name)

    @property
    def dim(self) -> int:
        return self.dot.dim

    @property
    def ctx(self) -> FieldContext:
        return self.dot.ctx

    @property
    def unit(self) -> int:
        return self.dot.unit

    def basis(self, i: int) -> Element:
        return self.dot.basis(i)

    def mul(self, x: Element, y: Element) -> Element:
        return multiply(x, y)

    def br(self, x: Element, y: Element) -> Element:
        """Bracket of two dot-table elements."""
        bx = Element(self.bracket, x.coeffs)
        by = Element(self.bracket, y.coeffs)
        return Element(self.dot, multiply(bx, by).coeffs)

    def D(self, x: Element) -> Element:
        return self.br(x, self.dot.basis(self.unit))

    def D_basis(self, i: int) -> Element:
        if i not in self._D:
            self._D[i] = self.D(self.basis(i))
        return self._D[i]

    def is_poisson_D(self) -> bool:
        return all(not self.D_basis(i) for i in range(self.dim))

    def with_bracket_entry(self, i: int, j: int, terms) -> "DotBracketAlgebra":
        """Copy with one bracket entry replaced (mutation testing); parity is not re-validated."""
        entries = dict(self.bracket.product)
        entries[(i, j)] = terms
        br = StructureTable.build(self.dot.parity, entries, self.dot.labels, self.ctx, None,
                                  self.bracket.name, validate=False)
        return DotBracketAlgebra(self.dot, br, self.name + "*")


def kantor_double(A: DotBracketAlgebra, name: str = "") -> StructureTable:
    """The superalgebra A + bar(A) with the four doubling rules; bars live at ``dim(A) + i``."""
    if A.unit is None:
        raise ValueError("Kantor doubling needs a unital algebra")
    d = A.dim
    par = A.dot.parity
    prods: dict = {}

    def put(i, j, terms, shift, sign):
        if terms:
            prods[(i, j)] = [(k + shift, c if sign > 0 else -c) for k, c in terms]

    for i in range(d):
        for j in range(d):
            fg = A.dot.product.get((i, j), ())
            put(i, j, fg, 0, 1)
            put(i, d + j, fg, d, 1)
            put(d + i, j, fg, d, _sgn(par[j]))
            put(d + i, d + j, A.bracket.product.get((i, j), ()), 0, _sgn(par[j]))
    parity = list(par) + [(p + 1) % 2 for p in par]
    labels = list(A.dot.labels) + ["b" + lab for lab in A.dot.labels]
    return StructureTable.build(parity, prods, labels, A.ctx, A.unit, name or f"J({A.name})")


# -- the Grassmann Poisson superalgebra ------------------------------------------

def grassmann_dot_table(n: int, ctx: FieldContext = QQ) -> StructureTable:
    d = 1 << n
    one = ctx.one
    prods = {}
    for a in range(d):
        for b in range(d):
            if a & b == 0:
                prods[(a, b)] = [(a | b, one if wedge_sign(a, b) > 0 else -one)]
    labels = [format_monomial(m) for m in range(d)]
    return StructureTable.build([mask_parity(m) for m in range(d)], prods, labels, ctx, 0, f"G{n}")


def grassmann_poisson(n: int, ctx: FieldContext = QQ) -> DotBracketAlgebra:
    """(G_n, wedge, Poisson bracket), the bracket computed from the odd derivations."""
    G = Grassmann(n, ctx)
    dot = grassmann_dot_table(n, ctx)
    entries = {}
    for a in range(G.dim):
        for b in range(G.dim):
            r = poisson_bracket(G.monomial(a), G.monomial(b))
            if r:
                entries[(a, b)] = list(r.terms.items())
    return DotBracketAlgebra.build(dot, entries, f"G{n}")


def _closed_form_bracket_product(n: int, a: int, b: int) -> tuple[int, int] | None:
    """bar(e_I) * bar(e_J) by the intersection formula: (sign, mask) or None when zero."""
    common = a & b
    if common == 0 or common & (common - 1):
        return None
    I, J = indices_of(a), indices_of(b)
    i = indices_of(common)[0]
    p, q = I.index(i) + 1, J.index(i) + 1
    k, s = len(I), len(J)
    rest = [x for x in I if x != i] + [x for x in J if x != i]
    sign, mask = normalize(rest)
    return _sgn(s + k + p + q) * sign, mask


def closed_form_kan_table(n: int, ctx: FieldContext = QQ) -> StructureTable:
    """Kan(n) written down directly from the monomial multiplication rules."""
    d = 1 << n
    one = ctx.one
    prods: dict = {}
    for a in range(d):
        for b in range(d):
            s = len(indices_of(b))
            if a & b == 0:
                sign, mask = normalize(indices_of(a) + indices_of(b))
                c = one * sign
                prods[(a, b)] = [(mask, c)]
                prods[(a, d + b)] = [(d + mask, c)]
                prods[(d + a, b)] = [(d + mask, c * _sgn(s))]
            r = _closed_form_bracket_product(n, a, b)
            if r is not None:
                prods[(d + a, d + b)] = [(r[1], one * r[0])]
    parity = [mask_parity(m) for m in range(d)] + [1 - mask_parity(m) for m in range(d)]
    labels = [format_monomial(m) for m in range(d)] + ["b" + format_monomial(m) for m in range(d)]
    return StructureTable.build(parity, prods, labels, ctx, 0, f"Kan({n})")


def build_kan(n: int, ctx: FieldContext = QQ) -> StructureTable:
    """Kan(n) = J(G_n), built by doubling and cross-checked against the closed-form table."""
    if n < 2:
        raise ValueError("Kan(n) needs n >= 2")
    doubled = kantor_double(grassmann_poisson(n, ctx), f"Kan({n})")
    direct = closed_form_kan_table(n, ctx)
    if not doubled.same_structure(direct):
        bad = doubled.differences(direct)[:5]
        raise AssertionError(f"Kantor double and closed-form table disagree at {bad}")
    return doubled


def kan_index(n: int, indices=(), bar: bool = False) -> int:
    """Basis index of e_I (or its bar) in Kan(n); ``indices`` must be ascending."""
    idx = list(indices)
    if idx != sorted(set(idx)) or any(not 1 <= i <= n for i in idx):
        raise ValueError(f"bad index set {idx} for n={n}")
    return ((1 << n) if bar else 0) + mask_of(idx)


# -- the doubling conditions ------------------------------------------------------

def _leibniz_residual(A: DotBracketAlgebra, f: Element, g: Element, h: Element) -> Element:
    pf, pg = f.parity(), g.parity()
    return (A.br(f, g * h) - A.br(f, g) * h - (g * A.br(f, h)).scale(_sgn(pf * pg))
            + (A.D(f) * g) * h)


def _jacobi_residual(A: DotBracketAlgebra, f: Element, g: Element, h: Element) -> Element:
    pf, pg, ph = f.parity(), g.parity(), h.parity()
    lhs = A.br(f, A.br(g, h)) - A.br(A.br(f, g), h) - A.br(g, A.br(f, h)).scale(_sgn(pf * pg))
    rhs = (A.D(f) * A.br(g, h) + (A.D(g) * A.br(h, f)).scale(_sgn(pf * (pg + ph)))
           + (A.D(h) * A.br(f, g)).scale(_sgn(ph * (pf + pg))))
    return lhs - rhs


def _cubic_term(A: DotBracketAlgebra, a: Element, b: Element, c: Element) -> Element:
    """{{a,b},c} + {a,b} D(c); the odd-cube condition is the symmetrization of this."""
    ab = A.br(a, b)
    return A.br(ab, c) + ab * A.D(c)


def _skew_residual(A: DotBracketAlgebra, f: Element, g: Element) -> Element:
    return A.br(f, g) + A.br(g, f).scale(_sgn(f.parity() * g.parity()))


def check_kantor_conditions(A: DotBracketAlgebra, limit: int | None = DEFAULT_LIMIT, *,
                            odd_cube: bool | None = None) -> CheckReport:
    """Super-skew-symmetry, generalized Leibniz and Jacobi on all basis triples.

    The odd-cube condition {{x,x},x} = -{x,x}D(x) is checked as a polynomial
    identity in the coordinates of an odd x (every monomial coefficient of the
    cubic form must vanish).  It is on by default in characteristic 3 only,
    where it does not follow from the other two.
    """
    t0 = time.perf_counter()
    if odd_cube is None:
        odd_cube = A.ctx.p == 3
    rep = CheckReport(f"Kantor conditions on {A.name or 'dot-bracket algebra'}")
    lab = A.dot.labels
    B = [A.basis(i) for i in range(A.dim)]
    for i in range(A.dim):
        for j in range(i, A.dim):
            r = _skew_residual(A, B[i], B[j])
            rep.checked += 1
            if r:
                rep.add(Violation((lab[i], lab[j]), r.labelled(), "skew-symmetry"), limit)
    for name, fn in (("generalized Leibniz", _leibniz_residual), ("generalized Jacobi", _jacobi_residual)):
        for i, j, k in itertools.product(range(A.dim), repeat=3):
            r = fn(A, B[i], B[j], B[k])
            rep.checked += 1
            if r:
                rep.add(Violation((lab[i], lab[j], lab[k]), r.labelled(), name), limit)
    if odd_cube:
        odd = [i for i in range(A.dim) if A.dot.parity[i] == 1]
        for combo in itertools.combinations_with_replacement(odd, 3):
            r = A.dot.zero()
            for perm in set(itertools.permutations(combo)):
                r = r + _cubic_term(A, *(B[x] for x in perm))
            rep.checked += 1
            if r:
                rep.add(Violation(tuple(lab[x] for x in combo), r.labelled(), "odd cube"), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_poisson(A: DotBracketAlgebra, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """Kantor conditions plus D = 0 (the Poisson case)."""
    rep = check_kantor_conditions(A, limit, odd_cube=True)
    for i in range(A.dim):
        Di = A.D_basis(i)
        if Di:
            rep.add(Violation((A.dot.labels[i],), Di.labelled(), "D(f) = {f,1} is nonzero"), limit)
    rep.subject = f"Poisson conditions on {A.name}"
    return rep


def speciality_witness(A: DotBracketAlgebra):
    """First basis triple (in index order) with {{a,b},c} != 0, or None.

    A nonzero value shows the double is not special, hence exceptional.
    """
    B = [A.basis(i) for i in range(A.dim)]
    for i, j, k in itertools.product(range(A.dim), repeat=3):
        r = A.br(A.br(B[i], B[j]), B[k])
        if r:
            lab = A.dot.labels
            return (lab[i], lab[j], lab[k]), r
    return None
