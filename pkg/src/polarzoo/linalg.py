"""Small dense linear algebra over GF(q) on index matrices."""
from __future__ import annotations

import numpy as np

from .gf import GF


def as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    m = np.asarray(rows, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size else np.zeros((0, ncols or 0), dtype=np.int64)
    return m


def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (leading ones) and pivot columns; zero rows dropped."""
    A = as_matrix(M).copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = F.vmul(A[r], F.inv(int(A[r, c])))
        others = np.nonzero(A[:, c])[0]
        for i in others:
            if i != r:
                A[i] = F.vsub(A[i], F.vmul(A[r], int(A[i, c])))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: GF, M) -> int:
    return len(rref(F, M)[1])


def nullspace(F: GF, M, ncols: int | None = None) -> np.ndarray:
    """Basis (rows) of {x : M x = 0}."""
    A = as_matrix(M, ncols)
    n = A.shape[1] if ncols is None else ncols
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(piv):
            basis[t, pc] = F.neg(int(R[i, f]))
    return basis


def matmul(F: GF, A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if F.e == 1:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, k, None], B[None, k, :]))
    return out


def matvec_rows(F: GF, X, G) -> np.ndarray:
    """Row vectors X times matrix G."""
    return matmul(F, X, G)


def normalize_rows(F: GF, X) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    X = np.asarray(X, dtype=np.int64)
    if X.shape[0] == 0:
        return X.copy()
    first = np.argmax(X != 0, axis=1)
    lead = X[np.arange(X.shape[0]), first]
    inv = F.vinv(lead)
    return F.vmul(X, inv[:, None])


def det(F: GF, M) -> int:
    A = as_matrix(M).copy()
    n = A.shape[0]
    d = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            A[[c, k]] = A[[k, c]]
            d = F.neg(d)
        piv = int(A[c, c])
        d = F.mul(d, piv)
        inv = F.inv(piv)
        for i in range(c + 1, n):
            if A[i, c]:
                A[i] = F.vsub(A[i], F.vmul(A[c], F.mul(int(A[i, c]), inv)))
    return d


def inverse(F: GF, M) -> np.ndarray:
    A = as_matrix(M)
    n = A.shape[0]
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)) or R.shape[0] < n:
        raise ValueError("singular matrix")
    return R[:, n:]


def solve_combination(F: GF, basis, v) -> np.ndarray | None:
    """Coefficients c with c @ basis = v, or None."""
    B = as_matrix(basis)
    k = B.shape[0]
    aug = np.hstack([B.T, np.asarray(v, dtype=np.int64).reshape(-1, 1)])
    R, piv = rref(F, aug)
    if k in piv:
        return None
    c = np.zeros(k, dtype=np.int64)
    for i, pc in enumerate(piv):
        c[pc] = R[i, k]
    return c
