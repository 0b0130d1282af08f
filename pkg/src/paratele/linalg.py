"""Exact linear algebra over the rational-function field.

Matrices are lists of rows of RatFun entries.  Elimination is plain Gaussian
over the field (every entry stays canonical, so arithmetic is exact); pivots
prefer structurally small entries to limit expression growth.
"""

from __future__ import annotations

from .ratfun import RatFun


def _size(f: RatFun) -> int:
    return len(f.num.terms) + len(f.den.terms)


def rref(rows: list) -> tuple:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        best = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero:
                if best is None or _size(rows[i][c]) < _size(rows[best][c]):
                    best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [e * inv for e in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[: len(pivots)], pivots


def nullspace(rows: list, ncols: int, nvars: int) -> list:
    """Basis of the right nullspace of the matrix, in reduced echelon form."""
    red, pivots = rref(rows)
    zero = RatFun.zero(nvars)
    one = RatFun.one(nvars)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for rr, pc in zip(red, pivots):
            if not rr[fc].is_zero:
                vec[pc] = -rr[fc]
        basis.append(vec)
    if basis:
        basis, _ = rref(basis)
    return basis


def in_span(vec: list, basis: list) -> bool:
    """Exact membership of vec in the row span of basis."""
    rows = [list(b) for b in basis]
    red, pivots = rref(rows)
    v = list(vec)
    for rr, pc in zip(red, pivots):
        if not v[pc].is_zero:
            f = v[pc]
            v = [a - f * b for a, b in zip(v, rr)]
    return all(e.is_zero for e in v)
