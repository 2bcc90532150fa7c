"""Dense linear algebra over F_q on matrices of element indices.

Multiplication by a fixed constant of F_q is F_p-linear, so an F_q matrix is
applied to batches of vectors as one integer matrix product over F_p.
"""
from __future__ import annotations

import numpy as np

from .errors import SingularEvaluation
from .field_core import FieldConfig


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(field: FieldConfig, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Plain product over F_q (reference path, used for checks)."""
    t = field.np_tables
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = t.add[out, t.mul[A[:, k][:, None], B[k][None, :]]]
    return out


def mat_inverse(field: FieldConfig, M: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises SingularEvaluation when no pivot exists."""
    t = field.np_tables
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("matrix must be square")
    A = np.hstack([M, identity(n)])
    for col in range(n):
        nz = np.nonzero(A[col:, col])[0]
        if nz.size == 0:
            raise SingularEvaluation(f"no pivot in column {col}")
        piv = col + nz[0]
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
        A[col] = t.mul[t.inv[A[col, col]], A[col]]
        factors = A[:, col].copy()
        factors[col] = 0
        rows = np.nonzero(factors)[0]
        if rows.size:
            A[rows] = t.sub[A[rows], t.mul[factors[rows][:, None], A[col][None, :]]]
    return A[:, n:].copy()


class LinearMap:
    """An F_q matrix prepared for batched application."""

    def __init__(self, field: FieldConfig, M: np.ndarray):
        self.field = field
        self.matrix = np.asarray(M, dtype=np.int64)
        r, c = self.matrix.shape
        m, p = field.m, field.p
        t = field.np_tables
        if m == 1:
            self._fp = self.matrix.T.copy()
        else:
            # mulmat[e][:, k] = digits of e * t^k
            basis = np.array([p ** k for k in range(m)], dtype=np.int64)
            mulmat = t.digits[t.mul[:, basis]]  # (q, m, m): [e, k, digit]
            blocks = mulmat[self.matrix]  # (r, c, k, digit)
            # rows indexed by (c, k), columns by (r, digit)
            self._fp = blocks.transpose(1, 2, 0, 3).reshape(c * m, r * m).copy()
        self.shape = (r, c)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        """Apply to the rows of X (shape (T, c)) and return shape (T, r)."""
        field = self.field
        X = np.asarray(X, dtype=np.int64)
        T = X.shape[0]
        if field.m == 1:
            return (X @ self._fp) % field.p
        t = field.np_tables
        D = t.digits[X].reshape(T, -1)
        Y = (D @ self._fp) % field.p
        return Y.reshape(T, self.shape[0], field.m) @ t.powers
