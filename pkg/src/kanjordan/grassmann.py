"""Grassmann superalgebra G_n: signed monomials, odd partial derivatives, Poisson bracket.

A monomial e_I is an ``int`` bitmask; generator ``k`` (1-based) is bit ``k - 1``.
Signs come from inversion counts, never from list permutations.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .scalars import QQ, FieldContext


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> list[int]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def parity(mask: int) -> int:
    return popcount(mask) & 1


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries), i.e. (-1)^inversions."""
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv & 1 else 1


def normalize(seq: Sequence[int]) -> tuple[int, int]:
    """Normalize an ordered word e_{i_1}...e_{i_m} to ``(sign, mask)``; sign 0 on a repeat."""
    if len(set(seq)) != len(seq):
        return 0, 0
    return perm_sign(seq), mask_of(seq)


def wedge_sign(a: int, b: int) -> int:
    """Sign of e_A e_B = sign * e_{A|B} for disjoint masks.

    Counts pairs (i in A, j in B) with i > j: for each generator of B, the
    generators of A above it.
    """
    n_inv = 0
    bb = b
    while bb:
        low = bb & -bb
        n_inv += popcount(a & ~((low << 1) - 1))
        bb ^= low
    return -1 if n_inv & 1 else 1


def derivative_sign(k: int, mask: int) -> int:
    """(-1)^(p-1) where p is the position of generator ``k`` inside ``mask``."""
    return -1 if popcount(mask & ((1 << (k - 1)) - 1)) & 1 else 1


def format_monomial(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e[" + ",".join(str(i) for i in indices_of(mask)) + "]"


def parse_monomial(text: str) -> int:
    text = text.strip()
    if text == "1":
        return 0
    if not (text.startswith("e[") and text.endswith("]")):
        raise ValueError(f"bad monomial {text!r}")
    body = text[2:-1].strip()
    if not body:
        return 0
    idx = [int(t) for t in body.split(",")]
    if idx != sorted(set(idx)):
        raise ValueError(f"monomial indices must be strictly ascending: {text!r}")
    return mask_of(idx)


class GrassmannElement:
    """Sparse linear combination of monomials of G_n; zero coefficients never stored."""

    __slots__ = ("n", "ctx", "terms")

    def __init__(self, n: int, terms: dict[int, object] | None = None, ctx: FieldContext = QQ):
        self.n = n
        self.ctx = ctx
        self.terms = {}
        for m, c in (terms or {}).items():
            if m >> n:
                raise ValueError(f"monomial {format_monomial(m)} outside G_{n}")
            c = ctx.coerce(c)
            if c != 0:
                self.terms[m] = c

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int] | int, coeff=1, ctx: FieldContext = QQ):
        if isinstance(indices, int):
            return cls(n, {indices: coeff}, ctx)
        sign, mask = normalize(list(indices))
        return cls(n, {mask: sign * ctx.coerce(coeff)} if sign else {}, ctx)

    def _check(self, other: "GrassmannElement"):
        if not isinstance(other, GrassmannElement):
            raise TypeError("expected a GrassmannElement")
        if other.n != self.n:
            raise ValueError(f"mismatched generator counts {self.n} and {other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, self.ctx.zero) + c
        return GrassmannElement(self.n, out, self.ctx)

    def __neg__(self):
        return GrassmannElement(self.n, {m: -c for m, c in self.terms.items()}, self.ctx)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ctx.coerce(c)
        return GrassmannElement(self.n, {m: c * v for m, v in self.terms.items()}, self.ctx)

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def parity(self) -> int:
        ps = {parity(m) for m in self.terms}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def homogeneous_parts(self) -> Iterator["GrassmannElement"]:
        for p in (0, 1):
            part = {m: c for m, c in self.terms.items() if parity(m) == p}
            if part:
                yield GrassmannElement(self.n, part, self.ctx)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.ctx.format(c)})*{format_monomial(m)}" for m, c in sorted(self.terms.items()))


def wedge(f: GrassmannElement, g: GrassmannElement) -> GrassmannElement:
    f._check(g)
    out: dict[int, object] = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            if a & b:
                continue
            m = a | b
            term = ca * cb if wedge_sign(a, b) > 0 else -(ca * cb)
            out[m] = out.get(m, f.ctx.zero) + term
    return GrassmannElement(f.n, out, f.ctx)


def partial(k: int, f: GrassmannElement) -> GrassmannElement:
    """Odd left superderivation d/de_k."""
    if not 1 <= k <= f.n:
        raise ValueError(f"generator index {k} outside 1..{f.n}")
    bit = 1 << (k - 1)
    out = {}
    for m, c in f.terms.items():
        if m & bit:
            out[m ^ bit] = c if derivative_sign(k, m) > 0 else -c
    return GrassmannElement(f.n, out, f.ctx)


def poisson_bracket(f: GrassmannElement, g: GrassmannElement) -> GrassmannElement:
    """{f, g} = (-1)^|f| sum_k (df/de_k)(dg/de_k), extended bilinearly."""
    f._check(g)
    total = GrassmannElement(f.n, {}, f.ctx)
    for fh in f.homogeneous_parts():
        acc = GrassmannElement(f.n, {}, f.ctx)
        for k in range(1, f.n + 1):
            acc = acc + wedge(partial(k, fh), partial(k, g))
        total = total + (-acc if fh.parity() else acc)
    return total


class Grassmann:
    """The algebra G_n with its basis enumerated by bitmask."""

    def __init__(self, n: int, ctx: FieldContext = QQ):
        if n < 1:
            raise ValueError("need at least one generator")
        self.n = n
        self.ctx = ctx
        self.dim = 1 << n

    def basis(self) -> range:
        return range(self.dim)

    def e(self, *indices: int) -> GrassmannElement:
        return GrassmannElement.monomial(self.n, list(indices), 1, self.ctx)

    def monomial(self, mask: int) -> GrassmannElement:
        return GrassmannElement(self.n, {mask: 1}, self.ctx)

    def one(self) -> GrassmannElement:
        return self.monomial(0)

    def top(self) -> int:
        return self.dim - 1

    def wedge(self, f, g):
        return wedge(f, g)

    def partial(self, k, f):
        return partial(k, f)

    def bracket(self, f, g):
        return poisson_bracket(f, g)

    def degree(self, mask: int) -> int:
        return popcount(mask)
