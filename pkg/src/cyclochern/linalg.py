"""Exact sparse linear algebra over Q(i).

Matrices are passed as iterables of sparse vectors (``dict[key, scalar]``);
whether those vectors are rows or columns does not matter for rank.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Sequence

from .scalars import GaussQ, simplify

__all__ = ["exact_rank", "rref", "nullspace", "solve", "span_rank",
           "in_span", "inverse_dense", "NotInvertible"]


class NotInvertible(ArithmeticError):
    pass


def _realify(vectors: list[dict]) -> list[dict]:
    # rank_C [P + iQ] = rank_R [[P, -Q], [Q, P]] / 2
    out = []
    for v in vectors:
        a, b = {}, {}
        for k, c in v.items():
            if isinstance(c, GaussQ):
                re_, im_ = c.re, c.im
            else:
                re_, im_ = c, 0
            if re_:
                a[(k, 0)] = re_
                b[(k, 1)] = re_
            if im_:
                a[(k, 1)] = im_
                b[(k, 0)] = -im_
        out.append(a)
        out.append(b)
    return out


def _integral(vec: dict) -> dict:
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    if den != 1:
        vec = {k: int(c * den) for k, c in vec.items()}
    else:
        vec = {k: int(c) for k, c in vec.items()}
    g = 0
    for c in vec.values():
        g = gcd(g, c)
        if g == 1:
            return vec
    return {k: c // g for k, c in vec.items()} if g > 1 else vec


def exact_rank(vectors: Iterable[dict]) -> int:
    """Rank of a set of sparse vectors, computed exactly.

    Fraction-free elimination over the integers (rows are cleared of
    denominators and kept primitive), with a Markowitz-style pivot choice:
    shortest active row first, then its column with the fewest entries.
    Gaussian-rational input is handled through the real 2x2 block form.
    """
    vecs = [v for v in vectors if v]
    if not vecs:
        return 0
    if any(isinstance(c, GaussQ) for v in vecs for c in v.values()):
        return exact_rank(_realify(vecs)) // 2
    rows = [_integral(v) for v in vecs]
    col_rows: dict[Hashable, set] = defaultdict(set)
    for r, row in enumerate(rows):
        for c in row:
            col_rows[c].add(r)
    heap = [(len(row), r) for r, row in enumerate(rows)]
    heapq.heapify(heap)
    done = [False] * len(rows)
    rank = 0
    while heap:
        n, r = heapq.heappop(heap)
        if done[r] or n != len(rows[r]):
            continue
        row = rows[r]
        done[r] = True
        if not row:
            continue
        piv = min(row, key=lambda c: len(col_rows[c]))
        for c in row:
            col_rows[c].discard(r)
        rank += 1
        p = row[piv]
        for s in list(col_rows[piv]):
            other = rows[s]
            q = other[piv]
            g = gcd(p, q)
            ps, qs = p // g, q // g
            if ps != 1:
                for c in other:
                    other[c] *= ps
            for c, v in row.items():
                nv = other.get(c, 0) - qs * v
                if nv:
                    if c not in other:
                        col_rows[c].add(s)
                    other[c] = nv
                elif c in other:
                    del other[c]
                    col_rows[c].discard(s)
            if other:
                h = 0
                for v in other.values():
                    h = gcd(h, v)
                    if h == 1:
                        break
                if h > 1:
                    for c in other:
                        other[c] //= h
                heapq.heappush(heap, (len(other), s))
        rows[r] = {}
    return rank


def span_rank(vectors: Iterable[dict]) -> int:
    return exact_rank(vectors)


def rref(rows: Iterable[dict], pivot_order: Sequence | None = None,
         forbidden: frozenset = frozenset()):
    """Reduced row echelon form over the field Q(i).

    Returns ``(pivots, table)`` where ``table[pivot_col]`` is the reduced row
    (pivot entry 1, no other pivot column present).  Columns in
    ``forbidden`` are never chosen as pivots; a row whose remaining support
    lies only in forbidden columns is returned under the key ``None`` (the
    first such row found), signalling inconsistency for :func:`solve`.
    """
    table: dict = {}
    col_index: dict = defaultdict(set)   # column -> pivot columns whose row contains it
    rank_key = None
    if pivot_order is not None:
        order = {c: i for i, c in enumerate(pivot_order)}
        rank_key = lambda c: order.get(c, len(order))
    bad = None
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        # reduce by existing pivots
        for pc in [c for c in row if c in table]:
            if pc not in row:
                continue
            f = row[pc]
            for c, v in table[pc].items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = simplify(nv)
                else:
                    row.pop(c, None)
        cands = [c for c in row if c not in forbidden]
        if not cands:
            if row and bad is None:
                bad = row
            continue
        if rank_key is not None:
            piv = min(cands, key=rank_key)
        else:
            piv = min(cands, key=lambda c: (0 if row[c] in (1, -1) else 1))
        inv = 1 / Fraction(row[piv]) if not isinstance(row[piv], GaussQ) else 1 / row[piv]
        row = {c: simplify(v * inv) for c, v in row.items()}
        # eliminate piv from existing pivot rows
        for pc in list(col_index.get(piv, ())):
            prow = table[pc]
            f = prow.get(piv)
            if not f:
                col_index[piv].discard(pc)
                continue
            for c, v in row.items():
                nv = prow.get(c, 0) - f * v
                if nv:
                    if c not in prow:
                        col_index[c].add(pc)
                    prow[c] = simplify(nv)
                else:
                    prow.pop(c, None)
                    col_index[c].discard(pc)
        table[piv] = row
        for c in row:
            if c != piv:
                col_index[c].add(piv)
    if bad is not None:
        table[None] = bad
    return list(k for k in table if k is not None), table


def _columns_to_rows(cols: Sequence[dict]) -> list[dict]:
    rows: dict = defaultdict(dict)
    for j, col in enumerate(cols):
        for k, v in col.items():
            if v:
                rows[k][j] = v
    return list(rows.values())


def nullspace(cols: Sequence[dict]) -> list[dict]:
    """Basis of {x : sum_j x_j cols[j] = 0}, as sparse vectors over column indices."""
    n = len(cols)
    pivots, table = rref(_columns_to_rows(cols), pivot_order=range(n))
    pivset = set(pivots)
    basis = []
    free_to_pivots: dict = defaultdict(list)
    for p in pivots:
        for c, v in table[p].items():
            if c != p:
                free_to_pivots[c].append((p, v))
    for f in range(n):
        if f in pivset:
            continue
        vec = {f: 1}
        for p, v in free_to_pivots.get(f, ()):
            vec[p] = simplify(-v)
        basis.append(vec)
    return basis


_RHS = ("__rhs__",)


def solve(cols: Sequence[dict], target: dict):
    """Return x (sparse over column indices) with sum_j x_j cols[j] = target, or None."""
    rows: dict = defaultdict(dict)
    for j, col in enumerate(cols):
        for k, v in col.items():
            if v:
                rows[k][j] = v
    for k, v in target.items():
        if v:
            rows[k][_RHS] = v
    pivots, table = rref(list(rows.values()), forbidden=frozenset([_RHS]))
    if None in table:
        return None
    x = {}
    for p in pivots:
        v = table[p].get(_RHS, 0)
        if v:
            x[p] = simplify(v)
    return x


def in_span(cols: Sequence[dict], target: dict) -> bool:
    return solve(cols, target) is not None


def inverse_dense(mat: list[list]) -> list[list]:
    """Inverse of a small dense square matrix over Q(i)."""
    n = len(mat)
    rows = []
    for i in range(n):
        row = {j: mat[i][j] for j in range(n) if mat[i][j]}
        row.update({("inv", j): 1 for j in range(n) if j == i})
        rows.append(row)
    pivots, table = rref(rows, pivot_order=list(range(n)),
                         forbidden=frozenset(("inv", j) for j in range(n)))
    if len(pivots) < n or None in table:
        raise NotInvertible("matrix is singular")
    out = [[0] * n for _ in range(n)]
    for p in pivots:
        for c, v in table[p].items():
            if isinstance(c, tuple):
                out[p][c[1]] = v
    return out
