"""Exact sparse linear algebra over the rationals.

Rows are ``{column: value}`` dicts. Every row is first scaled to a primitive
integer row; elimination is fraction-free (``a*r - b*s`` followed by removal
of the row content), and among the candidate rows for a pivot column the one
whose pivot entry has the smallest bit length wins.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "primitive_row",
    "echelon",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "in_span",
    "mat_mul",
    "mat_sub",
    "mat_power",
    "identity",
    "zeros",
]

Row = Mapping[int, object]


def primitive_row(row: Row) -> dict[int, int]:
    """Integer multiple of ``row`` with coprime entries (sign untouched)."""
    items = [(k, Fraction(v)) for k, v in row.items() if v]
    if not items:
        return {}
    den = lcm(*(v.denominator for _, v in items))
    ints = {k: (v.numerator * (den // v.denominator)) for k, v in items}
    g = gcd(*ints.values())
    if g != 1:
        ints = {k: v // g for k, v in ints.items()}
    return ints


def _content_free(row: dict[int, int]) -> dict[int, int]:
    g = gcd(*row.values()) if row else 1
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _combine(pivot: dict[int, int], row: dict[int, int], col: int) -> dict[int, int]:
    """Eliminate ``col`` from ``row`` using ``pivot``."""
    p, r = pivot[col], row[col]
    g = gcd(p, r)
    a, b = p // g, r // g
    out = {k: a * v for k, v in row.items()}
    for k, v in pivot.items():
        s = out.get(k, 0) - b * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return _content_free(out)


def echelon(rows: Iterable[Row], order: Sequence[int] | None = None) -> list[tuple[int, dict[int, int]]]:
    """Row echelon form as a list of ``(pivot column, integer row)``.

    ``order`` optionally gives the column processing order (a permutation of
    the column labels that occur); by default columns are taken ascending.
    """
    rank_of = None
    if order is not None:
        rank_of = {c: i for i, c in enumerate(order)}

    def lead(r):
        if rank_of is None:
            return min(r)
        return min(rank_of[c] for c in r)

    buckets: dict[int, list[dict[int, int]]] = {}
    heap: list[int] = []
    for row in rows:
        r = primitive_row(row)
        if r:
            key = lead(r)
            if key not in buckets:
                buckets[key] = []
                heapq.heappush(heap, key)
            buckets[key].append(r)

    pivots = []
    while heap:
        key = heapq.heappop(heap)
        group = buckets.pop(key)
        col = key if rank_of is None else order[key]
        best = min(range(len(group)), key=lambda i: (abs(group[i][col]).bit_length(), len(group[i]), i))
        piv = group[best]
        for i, r in enumerate(group):
            if i == best:
                continue
            new = _combine(piv, r, col)
            if new:
                k2 = lead(new)
                if k2 not in buckets:
                    buckets[k2] = []
                    heapq.heappush(heap, k2)
                buckets[k2].append(new)
        pivots.append((col, piv))
    return pivots


def rref(rows: Iterable[Row], order: Sequence[int] | None = None) -> list[tuple[int, dict[int, int]]]:
    """Reduced echelon form (integer rows, pivot entries not normalised)."""
    piv = echelon(rows, order)
    for i in range(len(piv) - 1, -1, -1):
        col, prow = piv[i]
        for j in range(i):
            cj, rj = piv[j]
            if col in rj:
                piv[j] = (cj, _combine(prow, rj, col))
    return piv


def rank(rows: Iterable[Row]) -> int:
    return len(echelon(rows))


def nullspace(rows: Iterable[Row], ncols: int) -> list[list[int]]:
    """Basis of ``{v : row . v = 0 for every row}`` as primitive integer vectors.

    Columns are eliminated from the right, so each basis vector's first
    nonzero entry sits in its own free column and is zero in all others; the
    basis is returned sorted by that column with a positive leading entry.
    """
    rows = list(rows)
    for r in rows:
        for c in r:
            if not 0 <= c < ncols:
                raise IndexError(f"column {c} outside 0..{ncols - 1}")
    order = list(range(ncols - 1, -1, -1))
    piv = rref(rows, order)
    pivot_cols = {c for c, _ in piv}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        vec = {f: Fraction(1)}
        for c, r in piv:
            if f in r:
                vec[c] = Fraction(-r[f], r[c])
        ints = primitive_row(vec)
        if ints[min(ints)] < 0:
            ints = {k: -v for k, v in ints.items()}
        dense = [0] * ncols
        for k, v in ints.items():
            dense[k] = v
        basis.append(dense)
    return basis


def solve(rows: Sequence[Row], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One solution of ``rows . u = rhs`` (free unknowns set to zero), or
    ``None`` when the system is inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs differ in length")
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = b
        aug.append(row)
    piv = rref(aug)
    sol = [Fraction(0)] * ncols
    for c, r in piv:
        if c == ncols:
            return None
        sol[c] = Fraction(r.get(ncols, 0), r[c])
    return sol


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    def as_row(x):
        return {i: a for i, a in enumerate(x) if a}
    base = [as_row(x) for x in vectors]
    r0 = rank(base)
    return rank(base + [as_row(v)]) == r0


# Small dense helpers for n x n matrices of Fractions.

def zeros(n: int, m: int | None = None) -> list[list[Fraction]]:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> list[list[Fraction]]:
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_mul(A, B) -> list[list[Fraction]]:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    if A and len(A[0]) != k:
        raise ValueError("shape mismatch")
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for l in range(k):
            a = Ai[l]
            if a:
                Bl = B[l]
                for j in range(m):
                    if Bl[j]:
                        Oi[j] += a * Bl[j]
    return out


def mat_sub(A, B) -> list[list[Fraction]]:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_power(A, k: int) -> list[list[Fraction]]:
    out = identity(len(A))
    for _ in range(k):
        out = mat_mul(out, A)
    return out
