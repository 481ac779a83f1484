"""Exact matrices over Q, polynomial rings, and rational-function fields.

Matrices are numpy object arrays whose entries are ints, Fractions,
Polynomials or RationalFunctions; numpy's ``@`` and ``np.trace`` only need
``+`` and ``*`` on the entries, which all of these provide.  Linear systems
over Q are solved by sparse exact Gauss-Jordan elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from .poly import Polynomial, RationalFunction, evaluate


class ShapeError(ValueError):
    pass


def matrix(rows) -> np.ndarray:
    rows = [list(r) for r in rows]
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for a, r in enumerate(rows):
        for b, v in enumerate(r):
            out[a, b] = v
    return out


def zeros(n: int, m: int | None = None) -> np.ndarray:
    out = np.empty((n, n if m is None else m), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n)
    for k in range(n):
        out[k, k] = 1
    return out


def to_fractions(A) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        out[idx] = Fraction(v)
    return out


def mat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if 0 in A.shape or 0 in B.shape:
        return zeros(A.shape[0], B.shape[1])
    return A @ B


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ShapeError("commutator needs square matrices of equal size")
    return mat_mul(A, B) - mat_mul(B, A)


def trace(A: np.ndarray):
    if A.shape[0] != A.shape[1]:
        raise ShapeError("trace of a non-square matrix")
    total = 0
    for k in range(A.shape[0]):
        total = total + A[k, k]
    return total


def is_zero_matrix(A: np.ndarray) -> bool:
    return all(_is_zero(v) for v in A.flat)


def _is_zero(v) -> bool:
    if isinstance(v, (Polynomial, RationalFunction)):
        return v.is_zero()
    return v == 0


def matrices_equal(A: np.ndarray, B: np.ndarray) -> bool:
    return A.shape == B.shape and is_zero_matrix(A - B)


def eval_matrix(A: np.ndarray, point) -> np.ndarray:
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        out[idx] = evaluate(v, point)
    return out


# determinants --------------------------------------------------------------


def _minor(A, i, j):
    return np.delete(np.delete(A, i, axis=0), j, axis=1)


def _det_cofactor(A):
    n = A.shape[0]
    if n == 0:
        return 1
    if n == 1:
        return A[0, 0]
    if n == 2:
        return A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    total = 0
    for j in range(n):
        a = A[0, j]
        if _is_zero(a):
            continue
        term = a * _det_cofactor(_minor(A, 0, j))
        total = total + term if j % 2 == 0 else total - term
    return total


def _exact_div(a, b):
    """a / b where b divides a exactly (Bareiss guarantees it)."""
    if isinstance(a, Polynomial) or isinstance(b, Polynomial):
        if not isinstance(b, Polynomial):
            return a * (Fraction(1) / Fraction(b))
        if b.is_constant():
            return a * (1 / b.constant_value()) if isinstance(a, Polynomial) else Fraction(a) / b.constant_value()
        return _poly_exact_div(a, b)
    return a / b if isinstance(a, RationalFunction) else Fraction(a) / Fraction(b)


def _poly_exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    from .orders import MonomialOrder

    order = MonomialOrder.degrevlex(b.ring)
    lb, cb = b.leading(order)
    q = b.ring.zero
    r = a
    while not r.is_zero():
        lr, cr = r.leading(order)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if min(shift) < 0:
            raise ArithmeticError("polynomial division is not exact")
        t = b.ring.monomial(shift, cr / cb)
        q = q + t
        r = r - t * b
    return q


def _det_bareiss(A):
    M = A.copy()
    n = M.shape[0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if _is_zero(M[k, k]):
            for r in range(k + 1, n):
                if not _is_zero(M[r, k]):
                    M[[k, r]] = M[[r, k]]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i, j] = _exact_div(M[i, j] * M[k, k] - M[i, k] * M[k, j], prev)
        prev = M[k, k]
    d = M[n - 1, n - 1]
    return d if sign == 1 else -d


def det(A: np.ndarray):
    if A.shape[0] != A.shape[1]:
        raise ShapeError("determinant of a non-square matrix")
    if A.shape[0] <= 4:
        return _det_cofactor(A)
    return _det_bareiss(A)


def det_and_adjugate(A: np.ndarray):
    """(det A, adj A) with A @ adj(A) = det(A) * I."""
    if A.shape[0] != A.shape[1]:
        raise ShapeError("adjugate of a non-square matrix")
    n = A.shape[0]
    adj = zeros(n)
    if n == 1:
        adj[0, 0] = 1
        return A[0, 0], adj
    for i in range(n):
        for j in range(n):
            c = det(_minor(A, i, j))
            adj[j, i] = c if (i + j) % 2 == 0 else -c
    return det(A), adj


def inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of a matrix over Q."""
    d, adj = det_and_adjugate(to_fractions(A))
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    out = np.empty(adj.shape, dtype=object)
    for idx, v in np.ndenumerate(adj):
        out[idx] = Fraction(v) / d
    return out


def det_leibniz(A: np.ndarray):
    """Permutation-sum determinant; slow, used as an independent check."""
    n = A.shape[0]
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = 1
        for r in range(n):
            term = term * A[r, perm[r]]
        total = total + term if inv % 2 == 0 else total - term
    return total


# linear systems over Q -------------------------------------------------------


def rref_rows(rows: list[dict], ncols: int):
    """Gauss-Jordan on sparse rows (dict col -> Fraction).

    Returns ``(pivot_cols, reduced_rows)`` with each reduced row monic at its
    pivot and zero in every other pivot column.
    """
    pivot_row: dict[int, dict] = {}
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        # pivot rows vanish in every other pivot column, so one pass suffices
        for c in [c for c in r if c in pivot_row]:
            f = r[c]
            for cc, vv in pivot_row[c].items():
                nv = r.get(cc, 0) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for other in pivot_row.values():
            if p in other:
                f = other[p]
                for cc, vv in r.items():
                    nv = other.get(cc, 0) - f * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        pivot_row[p] = r
    pivots = sorted(pivot_row)
    basis = [pivot_row[p] for p in pivots]
    return pivots, basis


def rank(A) -> int:
    A = np.asarray(A, dtype=object)
    rows = [{j: A[i, j] for j in range(A.shape[1]) if A[i, j] != 0} for i in range(A.shape[0])]
    return len(rref_rows(rows, A.shape[1])[0])


def nullspace_rows(rows: list[dict], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    pivots, red = rref_rows(rows, ncols)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for p, r in zip(pivots, red):
            if free in r:
                v[p] = -r[free]
        out.append(v)
    return out


def nullspace(A) -> list[list[Fraction]]:
    A = np.asarray(A, dtype=object)
    rows = [{j: A[i, j] for j in range(A.shape[1]) if A[i, j] != 0} for i in range(A.shape[0])]
    return nullspace_rows(rows, A.shape[1])


@dataclass
class AffineSolutionSpace:
    particular: list[Fraction]
    kernel_basis: list[list[Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.kernel_basis)

    def point(self, coeffs: Sequence) -> list[Fraction]:
        x = list(self.particular)
        for c, k in zip(coeffs, self.kernel_basis):
            c = Fraction(c)
            if c:
                x = [a + c * b for a, b in zip(x, k)]
        return x


def solve_linear(A, b) -> AffineSolutionSpace | None:
    """All solutions of A x = b over Q, or None when the system is inconsistent."""
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    if len(b) != m:
        raise ShapeError("right-hand side length does not match rows")
    rows = []
    for i in range(m):
        r = {j: A[i, j] for j in range(n) if A[i, j] != 0}
        if b[i] != 0:
            r[n] = b[i]
        rows.append(r)
    pivots, red = rref_rows(rows, n + 1)
    if n in pivots:
        return None
    particular = [Fraction(0)] * n
    for p, r in zip(pivots, red):
        particular[p] = r.get(n, Fraction(0))
    homog = [{c: v for c, v in r.items() if c != n} for r in red]
    kernel = nullspace_rows(homog, n)
    return AffineSolutionSpace(particular, kernel)
