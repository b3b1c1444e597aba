"""Linear algebra over GF(2).

Dense matrices are ``numpy`` arrays of dtype ``uint8`` holding 0/1 entries.
Hot paths (tableau membership, decoders) use the packed-row helpers at the
bottom of the module, where a row is a Python ``int`` bitmask with bit ``j``
holding column ``j``.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "as_bits",
    "rref",
    "rank",
    "solve",
    "kernel",
    "inverse",
    "matmul",
    "symplectic_product",
    "vec",
    "unvec",
    "vec_permutation",
    "pack",
    "unpack",
    "parity",
    "PackedBasis",
    "solve_packed",
]


def as_bits(M) -> np.ndarray:
    """Coerce ``M`` to a uint8 array reduced mod 2."""
    return (np.asarray(M, dtype=np.int64) & 1).astype(np.uint8)


def rref(M):
    """Reduced row-echelon form of ``M`` over GF(2).

    Pivoting is leftmost column first, topmost available row first.

    Returns:
        (reduced, pivots, transform) with ``transform @ M == reduced`` (mod 2)
        and ``pivots`` the increasing list of pivot columns.
    """
    R = as_bits(M).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    rows, cols = R.shape
    T = np.eye(rows, dtype=np.uint8)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
            T[[r, p]] = T[[p, r]]
        hits = np.nonzero(R[:, c])[0]
        hits = hits[hits != r]
        if hits.size:
            R[hits] ^= R[r]
            T[hits] ^= T[r]
        pivots.append(c)
        r += 1
    return R, pivots, T


def rank(M) -> int:
    M = as_bits(M)
    if M.size == 0:
        return 0
    return len(rref(M)[1])


def kernel(A) -> np.ndarray:
    """Basis (as rows) of the right null space ``{v : A v = 0}``."""
    A = as_bits(A)
    cols = A.shape[1]
    R, pivots, _ = rref(A)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            if R[r, f]:
                basis[i, p] = 1
    return basis


def solve(A, b):
    """Solve ``A x = b`` over GF(2).

    Returns:
        (x, kernel_basis). ``x`` is ``None`` when ``b`` is outside the column
        space of ``A``; otherwise it is the particular solution with every
        free variable set to zero.
    """
    A = as_bits(A)
    b = as_bits(b).reshape(-1)
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"b has length {b.shape[0]}, expected {A.shape[0]}")
    aug = np.concatenate([A, b[:, None]], axis=1)
    R, pivots, _ = rref(aug)
    cols = A.shape[1]
    ker = kernel(A)
    if pivots and pivots[-1] == cols:
        return None, ker
    x = np.zeros(cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x[p] = R[r, cols]
    return x, ker


def inverse(M) -> np.ndarray:
    M = as_bits(M)
    n, m = M.shape
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    R, pivots, T = rref(M)
    if len(pivots) != n:
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return T


def matmul(A, B) -> np.ndarray:
    return (as_bits(A).astype(np.int64) @ as_bits(B).astype(np.int64) & 1).astype(np.uint8)


def symplectic_product(u, v) -> int:
    """``a.d + b.c mod 2`` for ``u = [a, b]`` and ``v = [c, d]``."""
    u = as_bits(u).reshape(-1)
    v = as_bits(v).reshape(-1)
    if u.shape != v.shape or u.shape[0] % 2:
        raise ValueError("symplectic_product needs two vectors of equal even length")
    n = u.shape[0] // 2
    a, b = u[:n].astype(np.int64), u[n:].astype(np.int64)
    c, d = v[:n].astype(np.int64), v[n:].astype(np.int64)
    return int((a @ d + b @ c) & 1)


def vec(M) -> np.ndarray:
    """Column-major vectorization (columns read top to bottom)."""
    return as_bits(M).reshape(-1, order="F")


def unvec(v, rows: int) -> np.ndarray:
    return as_bits(v).reshape(rows, -1, order="F")


def vec_permutation(n: int) -> np.ndarray:
    """Permutation ``W`` (n^2 x n^2) with ``W vec(Q) = vec(Q^T)``."""
    if n < 1:
        raise ValueError("n must be positive")
    W = np.zeros((n * n, n * n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            # Q[i, j] sits at j*n + i in vec(Q) and at i*n + j in vec(Q^T)
            W[i * n + j, j * n + i] = 1
    return W


# ---------------------------------------------------------------------------
# packed rows

def pack(bits) -> int:
    out = 0
    for j, bit in enumerate(np.asarray(bits).reshape(-1)):
        if int(bit) & 1:
            out |= 1 << j
    return out


def unpack(word: int, length: int) -> np.ndarray:
    return np.array([(word >> j) & 1 for j in range(length)], dtype=np.uint8)


def parity(word: int) -> int:
    return word.bit_count() & 1


class PackedBasis:
    """Incremental GF(2) row basis over packed rows.

    Each stored vector remembers which inserted rows it is the sum of, so
    membership queries also return a certificate combination.
    """

    def __init__(self):
        self._pivots = {}  # pivot bit -> (vector, combination mask)
        self._count = 0

    def __len__(self):
        return len(self._pivots)

    def reduce(self, word: int):
        """Return (residual, combination) after eliminating against the basis."""
        combo = 0
        residual = 0
        rest = word
        while rest:
            top = rest.bit_length() - 1
            entry = self._pivots.get(top)
            if entry is None:
                residual |= 1 << top
                rest &= ~(1 << top)
            else:
                rest ^= entry[0]
                combo ^= entry[1]
        return residual, combo

    def contains(self, word: int) -> bool:
        return self.reduce(word)[0] == 0

    def add(self, word: int) -> bool:
        """Insert ``word``; returns False (and stores nothing) if dependent."""
        index = self._count
        self._count += 1
        residual, combo = self.reduce(word)
        if residual == 0:
            return False
        combo ^= 1 << index
        top = residual.bit_length() - 1
        self._pivots[top] = (residual, combo)
        return True

    def express(self, word: int):
        """Mask of inserted-row indices summing to ``word``, or None."""
        residual, combo = self.reduce(word)
        return combo if residual == 0 else None


def solve_packed(rows, target: int):
    """Mask of ``rows`` whose XOR equals ``target``, or None if impossible.

    ``rows`` must be linearly independent for the answer to be unique.
    """
    basis = PackedBasis()
    for w in rows:
        basis.add(w)
    return basis.express(target)
