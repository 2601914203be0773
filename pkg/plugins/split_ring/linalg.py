"""Exact linear algebra over GF(p) on numpy int64 matrices."""

import numpy as np


def mod_p(a: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(a % p, dtype=np.int64)


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """RREF over GF(p). Returns (rref, pivot_cols)."""
    a = mod_p(np.array(a, dtype=np.int64, copy=True), p)
    if a.ndim != 2:
        raise ValueError("rref_mod expects a matrix")
    m, n = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nonzero = np.flatnonzero(a[r:, c])
        if nonzero.size == 0:
            continue
        piv = r + int(nonzero[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = mod_p(a[r] * pow(int(a[r, c]), -1, p), p)
        others = np.flatnonzero(a[:, c])
        for i in others:
            if i != r:
                a[i] = mod_p(a[i] - a[i, c] * a[r], p)
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    if np.size(a) == 0:
        return 0
    return len(rref_mod(a, p)[1])


def row_basis(rows: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis of the row span."""
    if np.size(rows) == 0:
        return np.zeros((0, rows.shape[-1] if rows.ndim == 2 else 0), dtype=np.int64)
    r, pivots = rref_mod(rows, p)
    return r[: len(pivots)]


def nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Right nullspace of `a` over GF(p); rows of the result form an echelon basis."""
    a = mod_p(a, p)
    m, n = a.shape
    r, pivots = rref_mod(a, p)
    free = [j for j in range(n) if j not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-r[row, f]) % p
    return row_basis(basis, p) if len(free) else basis


def solve_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of a @ x = b over GF(p) (free variables 0), or None."""
    a = mod_p(a, p)
    m, n = a.shape
    aug = np.concatenate([a, mod_p(b, p).reshape(-1, 1)], axis=1)
    r, pivots = rref_mod(aug, p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, n]
    return x


def in_span(rows: np.ndarray, v: np.ndarray, p: int) -> bool:
    if np.size(rows) == 0:
        return not np.any(mod_p(v, p))
    return rank_mod(np.vstack([rows, v]), p) == rank_mod(rows, p)


def same_span(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    ra, rb = row_basis(a, p), row_basis(b, p)
    return ra.shape == rb.shape and np.array_equal(ra, rb)
