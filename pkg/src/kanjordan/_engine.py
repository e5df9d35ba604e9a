"""Vectorised exact evaluation of multilinear identities on a structure table.

An identity is a signed sum of product trees over named variables, e.g.
``((x*y)*z)*t``.  Every variable ranges over (a subset of) the basis; all tuples
are evaluated at once with integer sparse matrices.  Rational tables are scaled
to integers by the lcm of the denominators, which is sound because every term of
an identity has the same number of products.  Prime-field tables are reduced mod
p after every contraction.  Polynomial coefficients (formal ``al``) carry an
extra degree axis and contract by convolution.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .scalars import GF, Poly

Tree = Union[str, tuple]

_LIMIT = 1 << 62


def neg1(e: np.ndarray) -> np.ndarray:
    """(-1)**e for an integer array."""
    return 1 - 2 * (np.asarray(e) & 1)


@dataclass(frozen=True)
class Term:
    tree: Tree
    sign: Callable[[dict], np.ndarray] | None = None
    coeff: int = 1


@dataclass(frozen=True)
class Identity:
    name: str
    variables: tuple[str, ...]
    terms: tuple[Term, ...]


def leaves(tree: Tree) -> list[str]:
    if isinstance(tree, str):
        return [tree]
    return leaves(tree[0]) + leaves(tree[1])


class EncodedTable:
    """Integer sparse form of a :class:`StructureTable`."""

    def __init__(self, table):
        ctx = table.ctx
        self.d = d = table.dim
        self.p = ctx.p or None
        self.ctx = ctx
        self.parity = np.asarray(table.parity, dtype=np.int64)
        ii, cols, coeff_lists = [], [], []
        for (i, j), terms in table.product.items():
            for k, c in terms:
                ii.append(i)
                cols.append(j * d + k)
                coeff_lists.append(ctx.coefficients(c))
        self.ndeg = max([len(c) for c in coeff_lists] + [1])
        if self.p is None:
            dens = [Fraction(c).denominator for cs in coeff_lists for c in cs]
            self.scale = math.lcm(*dens) if dens else 1
        else:
            self.scale = 1
        vals = np.zeros((len(ii), self.ndeg), dtype=np.int64)
        for r, cs in enumerate(coeff_lists):
            for g, c in enumerate(cs):
                if self.p is None:
                    v = Fraction(c) * self.scale
                    if abs(v.numerator) >= _LIMIT:
                        raise OverflowError("structure constant too large for the integer engine")
                    vals[r, g] = v.numerator
                else:
                    vals[r, g] = c.v
        ii = np.asarray(ii, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        self.M = [sp.csr_matrix((vals[:, g], (ii, cols)), shape=(d, d * d)) for g in range(self.ndeg)]
        self.maxabs = int(np.abs(vals).max()) if len(ii) else 0

    def decode(self, ints: Sequence[int], n_products: int):
        """Turn a residual coefficient vector back into a scalar of the table's field."""
        ctx = self.ctx
        if self.p is None:
            den = self.scale ** n_products
            coeffs = [Fraction(int(v), den) for v in ints]
        else:
            coeffs = [GF(int(v), self.p) for v in ints]
        if ctx.symbolic:
            return Poly(coeffs, ctx.base_context())
        return coeffs[0] if coeffs else ctx.zero


class _Sparse:
    """Sparse tensor: coords (nnz, nvars + 1) with the output index last; vals (nnz, ndeg)."""

    __slots__ = ("vars", "coords", "vals")

    def __init__(self, variables, coords, vals):
        self.vars = tuple(variables)
        self.coords = coords
        self.vals = vals


def _check_bound(a: int, b: int, inner: int, ndeg: int, p) -> None:
    if p is not None:
        return
    if a * b * max(inner, 1) * max(ndeg, 1) >= _LIMIT:
        raise OverflowError("integer engine bound exceeded")


def _reduce(vals: np.ndarray, p) -> np.ndarray:
    return vals % p if p is not None else vals


def _collect(rows, cols, data, degs, ncols, ndeg, p):
    """Aggregate (row, col, degree, value) quadruples into unique (row, col) with a degree axis."""
    if len(rows) == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros((0, ndeg), np.int64)
    key = rows * ncols + cols
    if ndeg == 1:
        # scipy products already have unique entries per matrix
        order = np.argsort(key, kind="stable")
        key = key[order]
        vals = data[order].reshape(-1, 1)
        if len(key) > 1 and np.any(key[1:] == key[:-1]):
            uk, start = np.unique(key, return_index=True)
            vals = np.add.reduceat(vals, start, axis=0)
            key = uk
    else:
        uk, inv = np.unique(key, return_inverse=True)
        vals = np.zeros((len(uk), ndeg), dtype=np.int64)
        np.add.at(vals, (inv, degs), data)
        key = uk
    vals = _reduce(vals, p)
    keep = np.any(vals != 0, axis=1)
    key = key[keep]
    return key // ncols, key % ncols, vals[keep]


def _ravel(cols: np.ndarray, d: int) -> np.ndarray:
    key = np.zeros(cols.shape[0], dtype=np.int64)
    for c in range(cols.shape[1]):
        key = key * d + cols[:, c]
    return key


def _unravel(key: np.ndarray, d: int, width: int) -> np.ndarray:
    out = np.empty((key.shape[0], width), dtype=np.int64)
    for c in range(width - 1, -1, -1):
        out[:, c] = key % d
        key = key // d
    return out


def _leaf(var: str, domain: np.ndarray) -> _Sparse:
    dom = np.asarray(domain, dtype=np.int64)
    return _Sparse((var,), np.stack([dom, dom], axis=1), np.ones((len(dom), 1), dtype=np.int64))


def _product(A: _Sparse, B: _Sparse, enc: EncodedTable, b_is_leaf: bool) -> _Sparse:
    d, p = enc.d, enc.p
    nA = len(A.vars)
    if A.coords.shape[0] == 0 or B.coords.shape[0] == 0:
        return _Sparse(A.vars + B.vars, np.zeros((0, nA + len(B.vars) + 1), np.int64),
                       np.zeros((0, 1), np.int64))
    akey = _ravel(A.coords[:, :-1], d)
    ua, ra = np.unique(akey, return_inverse=True)
    amax = int(np.abs(A.vals).max())
    _check_bound(amax, enc.maxabs, d, min(A.vals.shape[1], enc.ndeg), p)
    ndeg_x = A.vals.shape[1] + enc.ndeg - 1
    rows, cols, data, degs = [], [], [], []
    for ga in range(A.vals.shape[1]):
        if not np.any(A.vals[:, ga]):
            continue
        amat = sp.csr_matrix((A.vals[:, ga], (ra, A.coords[:, -1])), shape=(len(ua), d))
        for gm, M in enumerate(enc.M):
            X = (amat @ M).tocoo()
            rows.append(X.row.astype(np.int64))
            cols.append(X.col.astype(np.int64))
            data.append(X.data.astype(np.int64))
            degs.append(np.full(X.nnz, ga + gm, np.int64))
    xr, xc, xv = _collect(np.concatenate(rows), np.concatenate(cols), np.concatenate(data),
                          np.concatenate(degs), d * d, ndeg_x, p)
    if b_is_leaf:
        # X[a, (l, m)] with l restricted to the leaf's domain
        allowed = np.zeros(d, dtype=bool)
        allowed[B.coords[:, 0]] = True
        l = xc // d
        keep = allowed[l]
        xr, xc, xv = xr[keep], xc[keep], xv[keep]
        coords = np.concatenate([_unravel(ua[xr], d, nA), (xc // d)[:, None], (xc % d)[:, None]], axis=1)
        return _Sparse(A.vars + B.vars, coords, xv)
    nB = len(B.vars)
    bkey = _ravel(B.coords[:, :-1], d)
    ub, rb = np.unique(bkey, return_inverse=True)
    xmax = int(np.abs(xv).max()) if len(xv) else 0
    bmax = int(np.abs(B.vals).max())
    _check_bound(xmax, bmax, d, min(ndeg_x, B.vals.shape[1]), p)
    ncols = len(ua) * d
    ndeg = ndeg_x + B.vals.shape[1] - 1
    rows, cols, data, degs = [], [], [], []
    for gx in range(ndeg_x):
        sel = xv[:, gx] != 0
        if not np.any(sel):
            continue
        ymat = sp.csr_matrix((xv[sel, gx], (xc[sel] // d, xr[sel] * d + xc[sel] % d)), shape=(d, ncols))
        for gb in range(B.vals.shape[1]):
            if not np.any(B.vals[:, gb]):
                continue
            bmat = sp.csr_matrix((B.vals[:, gb], (rb, B.coords[:, -1])), shape=(len(ub), d))
            Z = (bmat @ ymat).tocoo()
            rows.append(Z.row.astype(np.int64))
            cols.append(Z.col.astype(np.int64))
            data.append(Z.data.astype(np.int64))
            degs.append(np.full(Z.nnz, gx + gb, np.int64))
    if not rows:
        return _Sparse(A.vars + B.vars, np.zeros((0, nA + nB + 1), np.int64), np.zeros((0, 1), np.int64))
    zr, zc, zv = _collect(np.concatenate(rows), np.concatenate(cols), np.concatenate(data),
                          np.concatenate(degs), ncols, ndeg, p)
    a_part = _unravel(ua[zc // d], d, nA)
    b_part = _unravel(ub[zr], d, nB)
    coords = np.concatenate([a_part, b_part, (zc % d)[:, None]], axis=1)
    return _Sparse(A.vars + B.vars, coords, zv)


def _evaluate_tree(tree: Tree, domains: dict, enc: EncodedTable) -> _Sparse:
    if isinstance(tree, str):
        return _leaf(tree, domains[tree])
    left, right = tree
    A = _evaluate_tree(left, domains, enc)
    B = _evaluate_tree(right, domains, enc)
    return _product(A, B, enc, isinstance(right, str))


def _evaluate_chunk(identity: Identity, enc: EncodedTable, domains: dict):
    d, p = enc.d, enc.p
    nv = len(identity.variables)
    pos = {v: i for i, v in enumerate(identity.variables)}
    keys, vals_list = [], []
    n_products = None
    ndeg = 1
    for term in identity.terms:
        lv = leaves(term.tree)
        if sorted(lv) != sorted(identity.variables):
            raise ValueError(f"term {term.tree} does not use each variable once")
        if n_products is None:
            n_products = len(lv) - 1
        elif n_products != len(lv) - 1:
            raise ValueError("identity terms must have equal degree")
        T = _evaluate_tree(term.tree, domains, enc)
        if T.coords.shape[0] == 0:
            continue
        perm = [T.vars.index(v) for v in identity.variables]
        coords = np.concatenate([T.coords[:, perm], T.coords[:, -1:]], axis=1)
        sign = np.full(coords.shape[0], term.coeff, dtype=np.int64)
        if term.sign is not None:
            par = {v: enc.parity[coords[:, pos[v]]] for v in identity.variables}
            sign = sign * term.sign(par)
        keys.append(_ravel(coords, d))
        vals_list.append(T.vals * sign[:, None])
        ndeg = max(ndeg, T.vals.shape[1])
    if not keys:
        return []
    key = np.concatenate(keys)
    vals = np.concatenate([np.pad(v, ((0, 0), (0, ndeg - v.shape[1]))) for v in vals_list])
    uk, inv = np.unique(key, return_inverse=True)
    acc = np.zeros((len(uk), ndeg), dtype=np.int64)
    np.add.at(acc, inv, vals)
    acc = _reduce(acc, p)
    nz = np.any(acc != 0, axis=1)
    uk, acc = uk[nz], acc[nz]
    if len(uk) == 0:
        return []
    coords = _unravel(uk, d, nv + 1)
    out: dict[tuple, dict] = {}
    for c, v in zip(coords, acc):
        out.setdefault(tuple(int(x) for x in c[:-1]), {})[int(c[-1])] = v.tolist()
    return sorted(out.items()), n_products


def evaluate_identity(table, identity: Identity, domains: dict | None = None, *, chunk_var: str | None = None,
                      n_chunks: int | None = None, threads: int = 1, progress=None, enc: EncodedTable | None = None):
    """Return ``(failures, n_tuples)``: sorted ``[(tuple, {out: scalar})]`` over all basis tuples.

    Raises :class:`OverflowError` when a rational table would overflow int64;
    callers fall back to the scalar evaluator.
    """
    enc = enc or EncodedTable(table)
    d = enc.d
    doms = {v: np.arange(d, dtype=np.int64) for v in identity.variables}
    for v, dom in (domains or {}).items():
        doms[v] = np.asarray(sorted(set(int(x) for x in dom)), dtype=np.int64)
    n_tuples = math.prod(len(doms[v]) for v in identity.variables)
    chunk_var = chunk_var or identity.variables[0]
    base = doms[chunk_var]
    if n_chunks is None:
        n_chunks = max(1, min(len(base), d // 4 or 1))
    pieces = [c for c in np.array_split(base, n_chunks) if len(c)]

    def run(piece):
        local = dict(doms)
        local[chunk_var] = piece
        return _evaluate_chunk(identity, enc, local)

    results = []
    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for i, r in enumerate(ex.map(run, pieces)):
                results.append(r)
                if progress:
                    progress(i + 1, len(pieces), sum(len(x[0]) for x in results if x))
    else:
        for i, piece in enumerate(pieces):
            results.append(run(piece))
            if progress:
                progress(i + 1, len(pieces), sum(len(x[0]) for x in results if x))
    failures = []
    for r in results:
        if not r:
            continue
        items, n_products = r
        for tup, outs in items:
            failures.append((tup, {k: enc.decode(v, n_products) for k, v in outs.items()}))
    failures.sort(key=lambda f: f[0])
    return failures, n_tuples
