"""Exact sparse linear algebra over a FieldContext.

Vectors are ``dict[int, scalar]`` with no zero entries; matrices are
``dict[int, vector]`` keyed by row.  Row vectors act on the left: ``v @ M``.
Over a symbolic context only constant pivots are accepted.
"""
from __future__ import annotations

from typing import Iterable

from .scalars import FieldContext


def _clean(v: dict) -> dict:
    return {k: c for k, c in v.items() if c != 0}


def vadd(u: dict, v: dict, c=1) -> dict:
    """u + c*v."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k)
        y = x * c if y is None else y + x * c
        if y != 0:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(v: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: x * c for k, x in v.items()}


def vec_mat(v: dict, M: dict) -> dict:
    out: dict = {}
    for i, c in v.items():
        row = M.get(i)
        if row:
            out = vadd(out, row, c)
    return out


def mat_mul(A: dict, B: dict) -> dict:
    out = {}
    for i, row in A.items():
        r = vec_mat(row, B)
        if r:
            out[i] = r
    return out


def mat_add(A: dict, B: dict, c=1) -> dict:
    out = {}
    for i in set(A) | set(B):
        r = vadd(A.get(i, {}), B.get(i, {}), c)
        if r:
            out[i] = r
    return out


def mat_scale(A: dict, c) -> dict:
    return {i: vscale(r, c) for i, r in A.items() if c != 0 and r}


def identity(dim: int, ctx: FieldContext) -> dict:
    return {i: {i: ctx.one} for i in range(dim)}


def transpose(A: dict) -> dict:
    out: dict = {}
    for i, row in A.items():
        for j, c in row.items():
            out.setdefault(j, {})[i] = c
    return out


def is_zero(A: dict) -> bool:
    return not any(A.values())


def _pivot_inverse(c, ctx: FieldContext):
    if ctx.symbolic and getattr(c, "degree", 0) > 0:
        raise ValueError("elimination would divide by a non-constant polynomial in al")
    return ctx.one / c


class RowSpace:
    """Incrementally maintained reduced echelon basis of a span of row vectors.

    ``origin[r]`` records each stored row as a combination of the inserted
    vectors, so membership tests can also return coordinates.
    """

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.rows: dict[int, dict] = {}   # pivot column -> reduced row (pivot entry 1)
        self.origin: dict[int, dict] = {}
        self.n_inserted = 0

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> tuple[dict, dict]:
        """Residual of ``v`` modulo the span and the combination of inserted vectors subtracted."""
        v = _clean(v)
        comb: dict = {}
        changed = True
        while changed:
            changed = False
            for col in sorted(v):
                row = self.rows.get(col)
                if row is not None:
                    c = v[col]
                    v = vadd(v, row, -c)
                    comb = vadd(comb, self.origin[col], c)
                    changed = True
                    break
        return v, comb

    def add(self, v: dict) -> bool:
        """Insert ``v``; True if it enlarged the span."""
        idx = self.n_inserted
        self.n_inserted += 1
        r, comb = self.reduce(v)
        if not r:
            return False
        col = min(r)
        inv = _pivot_inverse(r[col], self.ctx)
        r = vscale(r, inv)
        origin = vscale(vadd({idx: self.ctx.one}, comb, -1), inv)
        # keep rows fully reduced against the new pivot
        for pc in list(self.rows):
            c = self.rows[pc].get(col)
            if c is not None:
                self.rows[pc] = vadd(self.rows[pc], r, -c)
                self.origin[pc] = vadd(self.origin[pc], origin, -c)
        self.rows[col] = r
        self.origin[col] = origin
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def coordinates(self, v: dict) -> dict | None:
        """Coefficients expressing ``v`` in the inserted vectors, or None if outside the span."""
        r, comb = self.reduce(v)
        return None if r else comb

    def basis(self) -> list[dict]:
        return [self.rows[c] for c in sorted(self.rows)]


def rank(vectors: Iterable[dict], ctx: FieldContext) -> int:
    rs = RowSpace(ctx)
    for v in vectors:
        rs.add(v)
    return rs.rank


def nullspace(rows: Iterable[dict], ncols: int, ctx: FieldContext) -> list[dict]:
    """Basis of {x : r . x = 0 for every row r}, in reduced form."""
    rs = RowSpace(ctx)
    for r in rows:
        rs.add(r)
    pivots = set(rs.rows)
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        x = {free: ctx.one}
        for pc, row in rs.rows.items():
            c = row.get(free)
            if c is not None:
                x[pc] = -c
        out.append(x)
    return out


def left_kernel(mats: Iterable[dict], dim: int, ctx: FieldContext) -> list[dict]:
    """Basis of {v : v @ M = 0 for every M} for square ``dim``-sized matrices."""
    rows = []
    for M in mats:
        # v @ M = 0  <=>  for each column j: sum_i v_i M[i][j] = 0
        rows.extend(transpose(M).values())
    return nullspace(rows, dim, ctx)


def invert(M: dict, dim: int, ctx: FieldContext) -> dict:
    """Inverse of a square matrix, raising ValueError when singular."""
    rs = RowSpace(ctx)
    for i in range(dim):
        if not rs.add(M.get(i, {})):
            raise ValueError("matrix is singular")
    # rows are now the identity (pivot columns 0..dim-1), origins give M^{-1}
    return {c: rs.origin[c] for c in range(dim) if rs.origin[c]}
