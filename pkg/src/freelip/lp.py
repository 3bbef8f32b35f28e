"""Dense simplex solvers over either scalar backend.

Tableaux are numpy arrays: ``dtype=object`` holding ``mpq`` in the exact
backend, ``float64`` otherwise. Bland's rule is used throughout, so the
solvers terminate on the degenerate problems that metric data produce.
"""

from __future__ import annotations

import numpy as np

from .scalar import Field


class LPError(RuntimeError):
    pass


class Unbounded(LPError):
    pass


class Infeasible(LPError):
    pass


def _eps(field: Field) -> float:
    return 0 if field.exact else 1e-11


def _array(rows, field: Field) -> np.ndarray:
    if field.exact:
        arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                arr[i, j] = field.convert(v)
        return arr
    return np.array(rows, dtype=float)


def _leaving_row(col: np.ndarray, rhs: np.ndarray, labels, eps) -> int | None:
    best = None
    best_ratio = None
    for i in range(len(col)):
        a = col[i]
        if a > eps:
            ratio = rhs[i] / a
            if best is None or ratio < best_ratio - eps or (
                ratio <= best_ratio + eps and labels[i] < labels[best]
            ):
                best, best_ratio = i, ratio
    return best


def maximize_origin_feasible(A, b, c, field: Field):
    """Solve ``max c.x  s.t.  A x <= b, x >= 0`` where ``b >= 0``.

    Condensed (dictionary) tableau: only the original columns are stored,
    so the pivot cost is ``rows * len(c)`` regardless of the slack count.
    Returns ``(value, x)``.
    """
    m, k = len(A), len(c)
    eps = _eps(field)
    M = _array([list(A[i]) + [b[i]] for i in range(m)] + [[-x for x in c] + [0]], field)
    if any(M[i, k] < 0 for i in range(m)):
        raise ValueError("right-hand side must be nonnegative")
    # labels 0..k-1 are structural variables, k..k+m-1 slacks
    nonbasic = list(range(k))
    basic = list(range(k, k + m))
    while True:
        obj = M[m]
        s = None
        for j in sorted(range(k), key=lambda j: nonbasic[j]):
            if obj[j] < -eps:
                s = j
                break
        if s is None:
            break
        r = _leaving_row(M[:m, s], M[:m, k], basic, eps)
        if r is None:
            raise Unbounded("objective is unbounded")
        p = M[r, s]
        col = M[:, s].copy()
        newrow = M[r] / p
        newrow[s] = field.one / p
        M -= np.outer(col, newrow)
        M[:, s] = -col / p
        M[r] = newrow
        basic[r], nonbasic[s] = nonbasic[s], basic[r]
    x = [field.zero] * k
    for i, lab in enumerate(basic):
        if lab < k:
            x[lab] = M[i, k]
    return M[m, k], x


def minimize_equality(A, b, c, field: Field):
    """Solve ``min c.x  s.t.  A x = b, x >= 0`` with a two-phase full tableau.

    Returns ``(value, x)``. Raises :class:`Infeasible` or :class:`Unbounded`.
    """
    m, N = len(A), len(c)
    eps = _eps(field)
    rows = []
    for i in range(m):
        row = list(A[i]) + [b[i]]
        if field.convert(b[i]) < 0:
            row = [-v for v in row]
        rows.append(row)
    if m == 0:
        if any(field.convert(cj) < -eps for cj in c):
            raise Unbounded("objective is unbounded")
        return field.zero, [field.zero] * N

    # columns: N structural, m artificial, then rhs
    T = np.empty((m + 1, N + m + 1), dtype=object if field.exact else float)
    T[:] = field.zero
    body = _array(rows, field)
    T[:m, :N] = body[:, :N]
    T[:m, N + m] = body[:, N]
    for i in range(m):
        T[i, N + i] = field.one
    T[m, :N] = -body[:, :N].sum(axis=0)
    T[m, N + m] = -body[:, N].sum()
    basis = list(range(N, N + m))

    _run_phase(T, basis, allowed=N + m, eps=eps, field=field)
    if -T[m, N + m] > (eps * 1e3 if eps else 0):
        raise Infeasible("equality system has no nonnegative solution")

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= N:
            piv = next((j for j in range(N) if abs(T[i, j]) > eps), None)
            if piv is None:
                continue
            _pivot(T, basis, i, piv, field)
        keep.append(i)
    rows_idx = keep + [m]
    T = np.concatenate([T[rows_idx, :N], T[rows_idx, N + m:]], axis=1)
    basis = [basis[i] for i in keep]
    m2 = len(basis)

    cvec = _array([list(c)], field)[0]
    T[m2, :N] = cvec
    T[m2, N] = field.zero
    for i, j in enumerate(basis):
        if cvec[j] != 0:
            T[m2] -= cvec[j] * T[i]
    _run_phase(T, basis, allowed=N, eps=eps, field=field)

    x = [field.zero] * N
    for i, j in enumerate(basis):
        x[j] = T[i, N]
    return -T[m2, N], x


def _pivot(T: np.ndarray, basis: list[int], r: int, s: int, field: Field) -> None:
    T[r] = T[r] / T[r, s]
    col = T[:, s].copy()
    col[r] = field.zero
    T -= np.outer(col, T[r])
    basis[r] = s


def _run_phase(T: np.ndarray, basis: list[int], allowed: int, eps, field: Field) -> None:
    m = len(basis)
    last = T.shape[1] - 1
    while True:
        obj = T[m]
        s = next((j for j in range(allowed) if obj[j] < -eps), None)
        if s is None:
            return
        r = _leaving_row(T[:m, s], T[:m, last], basis, eps)
        if r is None:
            raise Unbounded("objective is unbounded")
        _pivot(T, basis, r, s, field)
