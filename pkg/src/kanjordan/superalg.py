"""Finite-dimensional superalgebras given by structure constants, and identity checkers."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _engine
from ._engine import Identity, Term, neg1
from .report import CheckReport, Violation
from .scalars import QQ, FieldContext

DEFAULT_LIMIT = 10


@dataclass(frozen=True, eq=False)
class StructureTable:
    """Basis parities plus sparse structure constants ``(i, j) -> ((k, c), ...)``."""

    dim: int
    parity: tuple[int, ...]
    product: dict
    labels: tuple[str, ...]
    ctx: FieldContext = QQ
    unit: int | None = None
    name: str = ""

    @classmethod
    def build(cls, parity: Sequence[int], products: dict, labels: Sequence[str] | None = None,
              ctx: FieldContext = QQ, unit: int | None = None, name: str = "", validate: bool = True):
        dim = len(parity)
        labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(dim))
        clean = {}
        for (i, j), terms in products.items():
            acc: dict[int, object] = {}
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                acc[k] = acc.get(k, ctx.zero) + ctx.coerce(c)
            entry = tuple(sorted((k, c) for k, c in acc.items() if c != 0))
            if entry:
                clean[(i, j)] = entry
        table = cls(dim, tuple(int(p) & 1 for p in parity), clean, labels, ctx, unit, name)
        if validate:
            table.validate()
        return table

    def validate(self) -> None:
        if len(self.labels) != self.dim:
            raise ValueError("label count does not match dimension")
        for (i, j), terms in self.product.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError(f"product index ({i}, {j}) out of range")
            for k, _ in terms:
                if not 0 <= k < self.dim:
                    raise ValueError(f"product target {k} out of range")
                if self.parity[k] != (self.parity[i] + self.parity[j]) % 2:
                    raise ValueError(f"product {self.labels[i]}*{self.labels[j]} -> {self.labels[k]} breaks parity")
        if self.unit is not None:
            u = self.unit
            one = self.ctx.one
            for x in range(self.dim):
                if self.product.get((u, x), ()) != ((x, one),) or self.product.get((x, u), ()) != ((x, one),):
                    raise ValueError(f"basis element {self.labels[u]} is not a unit (fails on {self.labels[x]})")

    # -- elements -------------------------------------------------------------

    def basis(self, i: int) -> "Element":
        return Element(self, {i: self.ctx.one})

    def element(self, coeffs: dict | None = None) -> "Element":
        return Element(self, coeffs or {})

    def zero(self) -> "Element":
        return Element(self, {})

    def mul_basis(self, i: int, j: int) -> tuple:
        return self.product.get((i, j), ())

    def index(self, label: str) -> int:
        return self.labels.index(label)

    # -- comparison / derived tables -----------------------------------------

    def same_structure(self, other: "StructureTable") -> bool:
        return (self.dim == other.dim and self.parity == other.parity and self.product == other.product
                and self.ctx == other.ctx and self.unit == other.unit)

    def differences(self, other: "StructureTable") -> list[tuple[int, int]]:
        keys = set(self.product) | set(other.product)
        return sorted(k for k in keys if self.product.get(k, ()) != other.product.get(k, ()))

    def with_entry(self, i: int, j: int, terms, validate: bool = False) -> "StructureTable":
        """Copy with the product of basis ``i`` and ``j`` replaced (for mutation tests)."""
        prods = dict(self.product)
        prods[(i, j)] = terms
        return StructureTable.build(self.parity, prods, self.labels, self.ctx, None, self.name + "*", validate)

    def restrict(self, indices: Sequence[int], labels: Sequence[str] | None = None, name: str = "") -> "StructureTable":
        """Sub-table on ``indices`` (renumbered in the given order); raises unless closed."""
        pos = {g: l for l, g in enumerate(indices)}
        prods = {}
        for a, ga in enumerate(indices):
            for b, gb in enumerate(indices):
                terms = self.product.get((ga, gb), ())
                for k, _ in terms:
                    if k not in pos:
                        raise ValueError(f"{self.labels[ga]}*{self.labels[gb]} leaves the subspace")
                if terms:
                    prods[(a, b)] = [(pos[k], c) for k, c in terms]
        unit = pos.get(self.unit) if self.unit is not None else None
        return StructureTable.build([self.parity[g] for g in indices], prods,
                                    labels or [self.labels[g] for g in indices], self.ctx, unit, name)

    def specialize(self, value) -> "StructureTable":
        """Substitute a concrete parameter value into a symbolic table."""
        base = self.ctx.base_context()
        prods = {k: [(t, base.coerce(self.ctx.evaluate(c, value))) for t, c in terms]
                 for k, terms in self.product.items()}
        return StructureTable.build(self.parity, prods, self.labels, base, self.unit, self.name, validate=False)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "parities": list(self.parity),
            "unit": self.unit,
            "products": [[i, j, [[k, self.ctx.format(c)] for k, c in terms]]
                         for (i, j), terms in sorted(self.product.items())],
            "labels": list(self.labels),
            "field": self.ctx.name,
            "name": self.name,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict, validate: bool = True) -> "StructureTable":
        ctx = FieldContext.from_name(d.get("field", "Q"))
        prods = {(int(i), int(j)): [(int(k), ctx.parse(c)) for k, c in terms] for i, j, terms in d["products"]}
        if len(d["parities"]) != d["dim"]:
            raise ValueError("parities length does not match dim")
        return cls.build(d["parities"], prods, d.get("labels"), ctx, d.get("unit"), d.get("name", ""), validate)

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "StructureTable":
        return cls.from_dict(json.loads(text), validate)

    def __repr__(self):
        return f"StructureTable({self.name or 'anonymous'}, dim={self.dim}, field={self.ctx.name})"


class Element:
    """Sparse element of a structure table; zero coefficients are never stored."""

    __slots__ = ("table", "coeffs")

    def __init__(self, table: StructureTable, coeffs: dict):
        self.table = table
        ctx = table.ctx
        self.coeffs = {}
        for i, c in coeffs.items():
            c = ctx.coerce(c)
            if c != 0:
                self.coeffs[i] = c

    def _same(self, other):
        if not isinstance(other, Element) or other.table is not self.table:
            if isinstance(other, Element) and other.table.same_structure(self.table):
                return
            raise ValueError("elements belong to different tables")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        zero = self.table.ctx.zero
        for i, c in other.coeffs.items():
            out[i] = out.get(i, zero) + c
        return Element(self.table, out)

    def __neg__(self):
        return Element(self.table, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.table.ctx.coerce(c)
        return Element(self.table, {i: c * v for i, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.coeffs == other.coeffs and self.table.same_structure(other.table)

    def __bool__(self):
        return bool(self.coeffs)

    def parity(self) -> int:
        ps = {self.table.parity[i] for i in self.coeffs}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def labelled(self) -> dict:
        return {self.table.labels[i]: self.table.ctx.format(c) for i, c in sorted(self.coeffs.items())}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({self.table.ctx.format(c)})*{self.table.labels[i]}" for i, c in sorted(self.coeffs.items()))


def multiply(x: Element, y: Element) -> Element:
    """Bilinear extension of the structure constants."""
    x._same(y)
    T = x.table
    out: dict[int, object] = {}
    zero = T.ctx.zero
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            for k, c in T.product.get((i, j), ()):
                out[k] = out.get(k, zero) + a * b * c
    return Element(T, out)


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


# -- supercommutativity --------------------------------------------------------

def check_supercommutative(T: StructureTable, limit: int | None = DEFAULT_LIMIT) -> CheckReport:
    """Report basis pairs (i <= j) with e_i e_j != (-1)^{|i||j|} e_j e_i."""
    t0 = time.perf_counter()
    rep = CheckReport(f"supercommutativity of {T.name or 'table'}")
    p = T.parity
    for i in range(T.dim):
        for j in range(i, T.dim):
            xy = multiply(T.basis(i), T.basis(j))
            yx = multiply(T.basis(j), T.basis(i))
            r = xy - yx.scale(_sgn(p[i] * p[j]))
            rep.checked += 1
            if r:
                rep.add(Violation((T.labels[i], T.labels[j]), r.labelled()), limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


# -- Jordan superidentity -------------------------------------------------------

def jordan_residual(x: Element, y: Element, z: Element, t: Element) -> Element:
    """LHS - RHS of the graded Jordan identity for homogeneous arguments."""
    a, b, c, d = x.parity(), y.parity(), z.parity(), t.parity()
    lhs = ((x * y) * z) * t
    lhs = lhs + (((x * t) * z) * y).scale(_sgn(b * c + b * d + c * d))
    lhs = lhs + (((y * t) * z) * x).scale(_sgn(a * b + a * c + a * d + c * d))
    rhs = (x * y) * (z * t)
    rhs = rhs + ((x * z) * (y * t)).scale(_sgn(b * c))
    rhs = rhs + ((x * t) * (y * z)).scale(_sgn(d * (b + c)))
    return lhs - rhs


JORDAN = Identity(
    "jordan",
    ("x", "y", "z", "t"),
    (
        Term(((("x", "y"), "z"), "t")),
        Term(((("x", "t"), "z"), "y"), lambda P: neg1(P["y"] * P["z"] + P["y"] * P["t"] + P["z"] * P["t"])),
        Term(((("y", "t"), "z"), "x"),
             lambda P: neg1(P["x"] * P["y"] + P["x"] * P["z"] + P["x"] * P["t"] + P["z"] * P["t"])),
        Term((("x", "y"), ("z", "t")), None, -1),
        Term((("x", "z"), ("y", "t")), lambda P: neg1(P["y"] * P["z"]), -1),
        Term((("x", "t"), ("y", "z")), lambda P: neg1(P["t"] * (P["y"] + P["z"])), -1),
    ),
)


def _naive_identity(T: StructureTable, residual_fn, domains: Sequence[Iterable[int]], subject: str,
                    limit: int | None) -> CheckReport:
    import itertools

    rep = CheckReport(subject)
    for tup in itertools.product(*[list(d) for d in domains]):
        r = residual_fn(*[T.basis(i) for i in tup])
        rep.checked += 1
        if r:
            rep.add(Violation(tuple(T.labels[i] for i in tup), r.labelled()), limit)
    return rep


def _fast_identity(T: StructureTable, identity: Identity, domains: dict | None, subject: str,
                   limit: int | None, threads: int, progress, chunk_var: str | None = None) -> CheckReport:
    failures, n = _engine.evaluate_identity(T, identity, domains, threads=threads, progress=progress,
                                            chunk_var=chunk_var)
    rep = CheckReport(subject, checked=n)
    for tup, outs in failures:
        res = {T.labels[k]: T.ctx.format(v) for k, v in sorted(outs.items())}
        rep.add(Violation(tuple(T.labels[i] for i in tup), res), limit)
    return rep


def check_jordan_superidentity(T: StructureTable, limit: int | None = DEFAULT_LIMIT, *, method: str = "auto",
                               threads: int = 1, progress=None, domains: dict | None = None) -> CheckReport:
    """Evaluate the graded Jordan identity on all homogeneous basis quadruples.

    ``method`` is ``"fast"`` (sparse integer engine), ``"naive"`` (scalar
    arithmetic, one quadruple at a time) or ``"auto"`` (fast, falling back to
    naive on integer overflow).  ``domains`` optionally restricts variables
    ``x, y, z, t`` to index subsets.
    """
    t0 = time.perf_counter()
    subject = f"Jordan superidentity on {T.name or 'table'}"
    rep = None
    if method in ("fast", "auto"):
        try:
            rep = _fast_identity(T, JORDAN, domains, subject, limit, threads, progress)
        except OverflowError:
            if method == "fast":
                raise
    if rep is None:
        doms = [domains.get(v, range(T.dim)) if domains else range(T.dim) for v in JORDAN.variables]
        rep = _naive_identity(T, jordan_residual, doms, subject, limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


# -- super-associator identity ----------------------------------------------------

def _assoc(a: Element, b: Element, c: Element) -> Element:
    return (a * b) * c - a * (b * c)


def super_associator_residual(a: Element, d: Element, b: Element, c: Element) -> Element:
    """(a,d,b)c - (-1)^{|b||c|}(a,dc,b) + (-1)^{|a||d|+|b||c|} d(a,c,b).

    This says x -> (a,x,b) is a graded derivation.  The variant with d(a,b,c)
    in the last term fails already for ordinary Jordan matrix algebras.
    """
    pa, pd, pb, pc = a.parity(), d.parity(), b.parity(), c.parity()
    return (_assoc(a, d, b) * c - _assoc(a, d * c, b).scale(_sgn(pb * pc))
            + (d * _assoc(a, c, b)).scale(_sgn(pa * pd + pb * pc)))


SUPER_ASSOCIATOR = Identity(
    "super-associator",
    ("a", "d", "b", "c"),
    (
        Term(((("a", "d"), "b"), "c")),
        Term((("a", ("d", "b")), "c"), None, -1),
        Term((("a", ("d", "c")), "b"), lambda P: neg1(P["b"] * P["c"]), -1),
        Term(("a", (("d", "c"), "b")), lambda P: neg1(P["b"] * P["c"])),
        Term(("d", (("a", "c"), "b")), lambda P: neg1(P["a"] * P["d"] + P["b"] * P["c"])),
        Term(("d", ("a", ("c", "b"))), lambda P: neg1(P["a"] * P["d"] + P["b"] * P["c"]), -1),
    ),
)


def check_super_associator(T: StructureTable, limit: int | None = DEFAULT_LIMIT, *, method: str = "auto",
                           threads: int = 1) -> CheckReport:
    t0 = time.perf_counter()
    subject = f"super-associator identity on {T.name or 'table'}"
    rep = None
    if method in ("fast", "auto"):
        try:
            rep = _fast_identity(T, SUPER_ASSOCIATOR, None, subject, limit, threads, None)
        except OverflowError:
            if method == "fast":
                raise
    if rep is None:
        rep = _naive_identity(T, super_associator_residual, [range(T.dim)] * 4, subject, limit)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep


# -- operator relations for bimodules ---------------------------------------------

# right-action relations, written on the split null extension with v in V
OPERATOR_RJ1 = Identity(
    "operator relation RJ1",
    ("v", "y", "z", "t"),
    (
        Term(((("v", "y"), "z"), "t")),
        Term(((("v", "t"), "z"), "y"), lambda P: neg1(P["y"] * P["z"] + P["y"] * P["t"] + P["z"] * P["t"])),
        Term(("v", (("y", "t"), "z")), lambda P: neg1(P["z"] * P["t"])),
        Term((("v", "y"), ("z", "t")), None, -1),
        Term((("v", "z"), ("y", "t")), lambda P: neg1(P["y"] * P["z"]), -1),
        Term((("v", "t"), ("y", "z")), lambda P: neg1(P["t"] * (P["y"] + P["z"])), -1),
    ),
)

OPERATOR_RJ2 = Identity(
    "operator relation RJ2",
    ("v", "x", "y", "z"),
    (
        Term((("v", ("x", "y")), "z")),
        Term((("v", "z"), ("x", "y")), lambda P: neg1((P["x"] + P["y"]) * P["z"]), -1),
        Term((("v", ("x", "z")), "y"), lambda P: neg1(P["y"] * P["z"])),
        Term((("v", "y"), ("x", "z")), lambda P: neg1(P["y"] * P["z"] + (P["x"] + P["z"]) * P["y"]), -1),
        Term((("v", ("y", "z")), "x"), lambda P: neg1(P["x"] * (P["y"] + P["z"]))),
        Term((("v", "x"), ("y", "z")), lambda P: neg1(P["x"] * (P["y"] + P["z"]) + (P["y"] + P["z"]) * P["x"]), -1),
    ),
)


def _rj1_residual(v, y, z, t):
    b, c, d = y.parity(), z.parity(), t.parity()
    lhs = ((v * y) * z) * t + (((v * t) * z) * y).scale(_sgn(b * c + b * d + c * d)) \
        + (v * ((y * t) * z)).scale(_sgn(c * d))
    rhs = (v * y) * (z * t) + ((v * z) * (y * t)).scale(_sgn(b * c)) + ((v * t) * (y * z)).scale(_sgn(d * (b + c)))
    return lhs - rhs


def _supercomm_apply(v, a, b):
    """v [R_a, R_b]_s = (v a) b - (-1)^{|a||b|} (v b) a."""
    return (v * a) * b - ((v * b) * a).scale(_sgn(a.parity() * b.parity()))


def _rj2_residual(v, x, y, z):
    px, py, pz = x.parity(), y.parity(), z.parity()
    return (_supercomm_apply(v, x * y, z) + _supercomm_apply(v, x * z, y).scale(_sgn(py * pz))
            + _supercomm_apply(v, y * z, x).scale(_sgn(px * (py + pz))))


def check_operator_relations(T: StructureTable, V, limit: int | None = DEFAULT_LIMIT, *, method: str = "auto",
                             threads: int = 1) -> CheckReport:
    """Both right-operator relations for every basis triple of ``T`` on every basis vector of ``V``.

    Evaluated inside the split null extension, where ``v R_a`` is the product ``v a``.
    """
    from .bimodule import split_null_extension

    t0 = time.perf_counter()
    E = split_null_extension(T, V)
    vdom = range(T.dim, E.dim)
    jdom = range(T.dim)
    subject = f"operator relations of {V.name or 'bimodule'} over {T.name or 'table'}"
    reps = []
    for ident, fn in ((OPERATOR_RJ1, _rj1_residual), (OPERATOR_RJ2, _rj2_residual)):
        doms = {ident.variables[0]: vdom, **{v: jdom for v in ident.variables[1:]}}
        rep = None
        if method in ("fast", "auto"):
            try:
                rep = _fast_identity(E, ident, doms, f"{ident.name}", limit, threads, None)
            except OverflowError:
                if method == "fast":
                    raise
        if rep is None:
            rep = _naive_identity(E, fn, [vdom, jdom, jdom, jdom], ident.name, limit)
        for viol in rep.violations:
            viol.note = ident.name
        reps.append(rep)
    out = reps[0].merge(reps[1], limit)
    out.subject = subject
    out.timing_ms = (time.perf_counter() - t0) * 1e3
    return out

