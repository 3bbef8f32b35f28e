"""Row reduction over either scalar backend.

Exact mode eliminates over the rationals; float mode uses partial pivoting
and treats entries below ``tol * max(1, max|entry|)`` as zero, so rank
decisions are deterministic in both.
"""

from __future__ import annotations

from collections.abc import Sequence

from .scalar import Field


def _threshold(rows, field: Field) -> float:
    if field.exact:
        return 0
    biggest = max((abs(v) for row in rows for v in row), default=0.0)
    return field.tol * max(1.0, biggest)


def rref(rows: Sequence[Sequence], ncols: int, field: Field):
    """Reduced row echelon form. Returns ``(nonzero_rows, pivot_columns)``."""
    A = [[field.convert(v) for v in r] for r in rows]
    thr = _threshold(A, field)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(A):
            break
        best = max(range(r, len(A)), key=lambda i: abs(A[i][c]))
        if abs(A[best][c]) <= thr:
            continue
        A[r], A[best] = A[best], A[r]
        p = A[r][c]
        A[r] = [v / p for v in A[r]]
        for i in range(len(A)):
            if i != r:
                f = A[i][c]
                if f != 0:
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int, field: Field) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols, field)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, field: Field) -> list[list]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows, ncols, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [field.zero] * ncols
        x[fcol] = field.one
        for row, pc in zip(R, pivots):
            x[pc] = -row[fcol]
        basis.append(x)
    return basis


def independent_subset(vectors: Sequence[Sequence], ncols: int, field: Field) -> list[int]:
    """Indices of a greedily chosen maximal independent subset, in input order."""
    chosen: list[int] = []
    picked: list[Sequence] = []
    r = 0
    for idx, v in enumerate(vectors):
        if rank(picked + [v], ncols, field) > r:
            picked.append(v)
            chosen.append(idx)
            r += 1
            if r == ncols:
                break
    return chosen


def same_span(U: Sequence[Sequence], V: Sequence[Sequence], ncols: int, field: Field) -> bool:
    ru, rv = rank(U, ncols, field), rank(V, ncols, field)
    return ru == rv == rank(list(U) + list(V), ncols, field)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], field: Field) -> list[list]:
    Bt = list(zip(*B)) if B else []
    return [[sum((a * b for a, b in zip(row, col)), field.zero) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence, field: Field) -> list:
    return [sum((a * b for a, b in zip(row, x)), field.zero) for row in A]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*A)]


def matrices_equal(A, B, field: Field) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(field.eq(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )
