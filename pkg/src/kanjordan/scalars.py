"""Exact scalars: rationals, prime-field residues, and polynomials in a formal ``al``.

Rationals are plain :class:`fractions.Fraction`.  Residues mod an odd prime are
:class:`GF` values, and :class:`Poly` holds a polynomial in the parameter
(printed ``al``) over either of those.  A :class:`FieldContext` ties the choice
together and does coercion, parsing and formatting.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class GF:
    """Residue class modulo an odd prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "v", v % p)

    def __setattr__(self, name, value):
        raise AttributeError("GF values are immutable")

    def _coerce(self, other):
        if isinstance(other, GF):
            if other.p != self.p:
                raise ValueError(f"mixing residues mod {self.p} and mod {other.p}")
            return other
        if isinstance(other, int):
            return GF(other, self.p)
        if isinstance(other, Fraction):
            return GF(other.numerator, self.p) / GF(other.denominator, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GF(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GF(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GF(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GF(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GF(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "GF":
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero mod {self.p}")
        return GF(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return GF(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, GF):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            o = self._coerce(other)
            return self.v == o.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class Poly:
    """Polynomial in the formal parameter over a base field context.

    Coefficients are stored lowest degree first with trailing zeros stripped,
    so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs", "base")

    def __init__(self, coeffs, base: "FieldContext"):
        cs = [base.coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):
        raise AttributeError("Poly values are immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.base != self.base:
                raise ValueError("mixing polynomials over different fields")
            return other
        if isinstance(other, (int, Fraction, GF)):
            return Poly((other,), self.base)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out, self.base)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.base)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return Poly((), self.base)
        out = [self.base.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.degree > 0:
            raise ValueError("division by a non-constant polynomial is not supported")
        if not o.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        c = o.coeffs[0]
        return Poly([a / c for a in self.coeffs], self.base)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return Poly((1,), self.base) / self ** (-e)
        out = Poly((1,), self.base)
        for _ in range(e):
            out = out * self
        return out

    def evaluate(self, x):
        """Substitute a base-field value for the parameter (Horner)."""
        x = self.base.coerce(x)
        acc = self.base.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, Poly) else other
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs and self.base == o.base

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0]) if self.coeffs else hash(0)
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return self.base.symbolic_context().format(self)


Scalar = Union[Fraction, GF, Poly]

_GF_RE = re.compile(r"^\s*(-?\d+)\s+mod\s+(\d+)\s*$")
_TERM_RE = re.compile(r"^(.*?)\s*\*\s*al(?:\^(\d+))?$")


@dataclass(frozen=True)
class FieldContext:
    """Exact coefficient field: rationals (``p == 0``) or GF(p), optionally with ``al``."""

    p: int = 0
    symbolic: bool = False

    def __post_init__(self):
        if self.p == 2:
            raise ValueError("characteristic 2 is not allowed")
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"{self.p} is not a prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        base = "Q" if self.p == 0 else f"F{self.p}"
        return base + ("[al]" if self.symbolic else "")

    @classmethod
    def from_name(cls, name: str) -> "FieldContext":
        """Parse ``Q``, ``F5``, ``Q[al]``, ``F7[al]`` (also ``q``, ``5``, ``p5``)."""
        s = name.strip()
        symbolic = s.endswith("[al]")
        if symbolic:
            s = s[: -len("[al]")]
        low = s.lower()
        if low in ("q", "rational", "rationals"):
            return cls(0, symbolic)
        for prefix in ("f", "p", "gf"):
            if low.startswith(prefix) and low[len(prefix):].isdigit():
                return cls(int(low[len(prefix):]), symbolic)
        if low.isdigit():
            return cls(int(low), symbolic)
        raise ValueError(f"unknown field {name!r}")

    def base_context(self) -> "FieldContext":
        return FieldContext(self.p, False)

    def symbolic_context(self) -> "FieldContext":
        return FieldContext(self.p, True)

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def alpha(self) -> Poly:
        if not self.symbolic:
            raise ValueError("the formal parameter needs a symbolic context")
        return Poly((0, 1), self.base_context())

    def _base_coerce(self, x):
        if isinstance(x, str):
            return self._base_parse(x)
        if isinstance(x, Poly):
            if x.degree > 0:
                raise ValueError(f"cannot coerce non-constant {x!r} into {self.name}")
            x = x.coeffs[0] if x.coeffs else 0
        if self.p == 0:
            if isinstance(x, GF):
                raise ValueError("cannot coerce a residue into the rationals")
            return Fraction(x)
        if isinstance(x, GF):
            if x.p != self.p:
                raise ValueError(f"residue mod {x.p} in a context mod {self.p}")
            return x
        if isinstance(x, Fraction):
            return GF(x.numerator, self.p) / GF(x.denominator, self.p)
        if isinstance(x, int):
            return GF(x, self.p)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    def coerce(self, x) -> Scalar:
        if not self.symbolic:
            return self._base_coerce(x)
        if isinstance(x, Poly):
            if x.base.p != self.p:
                raise ValueError("polynomial over a different field")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return Poly((self._base_coerce(x),), self.base_context())

    __call__ = coerce

    def coefficients(self, x) -> list:
        """Base-field coefficients of ``x`` in the parameter, lowest degree first."""
        x = self.coerce(x)
        if isinstance(x, Poly):
            return list(x.coeffs)
        return [x] if x != 0 else []

    def evaluate(self, x, value):
        """Specialise a (possibly symbolic) scalar at a concrete parameter value."""
        x = self.coerce(x)
        if isinstance(x, Poly):
            return x.evaluate(value)
        return x

    # -- text ---------------------------------------------------------------

    def _base_format(self, c) -> str:
        if self.p == 0:
            c = Fraction(c)
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return f"{GF(c.v if isinstance(c, GF) else int(c), self.p).v} mod {self.p}"

    def _base_parse(self, s: str):
        s = s.strip()
        if self.p == 0:
            return Fraction(s)
        m = _GF_RE.match(s)
        if m:
            if int(m.group(2)) != self.p:
                raise ValueError(f"{s!r} is not mod {self.p}")
            return GF(int(m.group(1)), self.p)
        return self._base_coerce(Fraction(s))

    def format(self, x) -> str:
        x = self.coerce(x)
        if not isinstance(x, Poly):
            return self._base_format(x)
        if not x.coeffs:
            return self._base_format(0)
        parts = []
        for k, c in enumerate(x.coeffs):
            if c == 0:
                continue
            cs = self._base_format(c)
            if k == 0:
                parts.append(cs)
            elif k == 1:
                parts.append(f"{cs}*al")
            else:
                parts.append(f"{cs}*al^{k}")
        return " + ".join(parts)

    def parse(self, s: str) -> Scalar:
        if not self.symbolic:
            return self._base_parse(s)
        base = self.base_context()
        coeffs: dict[int, object] = {}
        for part in s.split(" + "):
            part = part.strip()
            if part in ("al", "+al"):
                k, c = 1, base.one
            elif part == "-al":
                k, c = 1, -base.one
            else:
                m = _TERM_RE.match(part)
                if m:
                    k = int(m.group(2)) if m.group(2) else 1
                    c = base._base_parse(m.group(1))
                else:
                    k, c = 0, base._base_parse(part)
            coeffs[k] = coeffs.get(k, base.zero) + c
        top = max(coeffs) if coeffs else 0
        return Poly([coeffs.get(k, 0) for k in range(top + 1)], base)


def field_context(kind: str = "rational", p: int | None = None, symbolic: bool = False) -> FieldContext:
    """Build a field context: ``kind`` is ``"rational"`` or ``"prime"`` (with ``p``)."""
    if kind in ("rational", "q", "Q"):
        return FieldContext(0, symbolic)
    if kind == "prime":
        if p is None:
            raise ValueError("prime field needs p")
        return FieldContext(p, symbolic)
    raise ValueError(f"unknown field kind {kind!r}")


QQ = FieldContext(0)
