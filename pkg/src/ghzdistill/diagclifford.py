"""Diagonal Clifford synthesis.

A symmetric binary matrix ``R`` names the diagonal Clifford
``U_R = diag(i^{v R v^T})``: diagonal entries are phase gates, off-diagonal
entries are CZ gates.  ``U_R E(a, 0) U_R^dag = E(a, aR)``, so turning the
X-only images ``E(a_i, 0)`` back into ``E(a_i, b_i)`` amounts to solving
``A R = B`` for symmetric ``R``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2lin as gf2
from .stabcode import StabilizerCode

__all__ = [
    "CliffordInfeasible",
    "SymmetricBinaryMatrix",
    "CliffordSolveProblem",
    "required_targets",
    "solve",
    "solve_kronecker",
    "conjugation_sign",
    "sign_fixups",
    "clifford_for",
]


class CliffordInfeasible(ValueError):
    """No symmetric ``R`` satisfies ``A R = B``."""


class SymmetricBinaryMatrix:
    def __init__(self, R):
        R = gf2.as_bits(R)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {R.shape}")
        if not np.array_equal(R, R.T):
            raise ValueError("matrix is not symmetric")
        self.matrix = R
        self.matrix.setflags(write=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __eq__(self, other):
        other = other.matrix if isinstance(other, SymmetricBinaryMatrix) else gf2.as_bits(other)
        return self.matrix.shape == other.shape and bool(np.array_equal(self.matrix, other))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def phase_qubits(self) -> list:
        return [i for i in range(self.n) if self.matrix[i, i]]

    def cz_pairs(self) -> list:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.matrix[i, j]]

    def gate_reading(self) -> str:
        p = ", ".join(str(q + 1) for q in self.phase_qubits()) or "none"
        cz = ", ".join(f"({i + 1},{j + 1})" for i, j in self.cz_pairs()) or "none"
        return f"P on qubits: {p}\nCZ on pairs: {cz}"

    def __str__(self):
        return "\n".join("".join(str(int(v)) for v in row) for row in self.matrix)

    def __repr__(self):
        return f"SymmetricBinaryMatrix({self.matrix.tolist()})"


@dataclass(frozen=True)
class CliffordSolveProblem:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, B = gf2.as_bits(self.A), gf2.as_bits(self.B)
        if A.ndim != 2 or A.shape != B.shape:
            raise ValueError(f"A and B must have equal 2-D shapes, got {A.shape} and {B.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def is_consistent(self) -> bool:
        """Necessary condition for a symmetric solution: ``A B^T`` symmetric."""
        M = gf2.matmul(self.A, self.B.T)
        return bool(np.array_equal(M, M.T))

    def check(self, R) -> bool:
        return bool(np.array_equal(gf2.matmul(self.A, np.asarray(R)), self.B))


def required_targets(code: StabilizerCode) -> CliffordSolveProblem:
    """Rows ``a_i`` / ``b_i`` of the non-pure-Z generators, then ``c_j`` / ``d_j``."""
    rows = list(code.standard.xrows) + list(code.logicals.xbar)
    A = np.array([r.x_bits for r in rows], dtype=np.uint8).reshape(len(rows), code.n)
    B = np.array([r.z_bits for r in rows], dtype=np.uint8).reshape(len(rows), code.n)
    return CliffordSolveProblem(A, B)


def _upper_index(n):
    index = {}
    for i in range(n):
        for j in range(i, n):
            index[(i, j)] = len(index)
    return index


def solve(problem: CliffordSolveProblem) -> SymmetricBinaryMatrix:
    """Symmetric ``R`` with ``A R = B``; free unknowns are set to zero."""
    if not problem.is_consistent():
        raise CliffordInfeasible("A B^T is not symmetric")
    A, B = problem.A, problem.B
    m, n = A.shape
    index = _upper_index(n)
    M = np.zeros((m * n, len(index)), dtype=np.uint8)
    rhs = np.zeros(m * n, dtype=np.uint8)
    for row in range(m):
        for col in range(n):
            eq = row * n + col
            rhs[eq] = B[row, col]
            for l in range(n):
                if A[row, l]:
                    M[eq, index[(min(l, col), max(l, col))]] ^= 1
    x, _ = gf2.solve(M, rhs)
    if x is None:
        raise CliffordInfeasible("the linear system A R = B has no symmetric solution")
    R = np.zeros((n, n), dtype=np.uint8)
    for (i, j), u in index.items():
        R[i, j] = R[j, i] = x[u]
    return SymmetricBinaryMatrix(R)


def solve_kronecker(problem: CliffordSolveProblem) -> SymmetricBinaryMatrix:
    """Same problem written as ``(I (x) A) vec R = vec B`` with ``(I - W) vec R = 0``."""
    A, B = problem.A, problem.B
    n = A.shape[1]
    top = np.kron(np.eye(n, dtype=np.uint8), A)
    bottom = (np.eye(n * n, dtype=np.uint8) ^ gf2.vec_permutation(n))
    M = np.concatenate([top, bottom]) & 1
    rhs = np.concatenate([gf2.vec(B), np.zeros(n * n, dtype=np.uint8)])
    x, _ = gf2.solve(M, rhs)
    if x is None:
        raise CliffordInfeasible("the linear system A R = B has no symmetric solution")
    return SymmetricBinaryMatrix(gf2.unvec(x, n))


def conjugation_sign(a, b, R) -> int:
    """Sign in ``U_R E(a, b) U_R^dag = sign * E(a, b ^ aR)``.

    ``aR`` is taken over the integers, so carries contribute to the sign.
    """
    a = gf2.as_bits(a).reshape(-1).astype(int)
    b = gf2.as_bits(b).reshape(-1).astype(int)
    col = b + a @ np.asarray(R, dtype=int)
    return -1 if int(a @ (col // 2)) % 2 else 1


def sign_fixups(problem: CliffordSolveProblem, R) -> list:
    """Residual sign between ``U_R E(a, 0) U_R^dag`` and ``E(a, b)`` per target row."""
    if not problem.check(R):
        raise CliffordInfeasible("R does not satisfy A R = B")
    zero = np.zeros(problem.n, dtype=np.uint8)
    return [conjugation_sign(a, zero, R) for a in problem.A]


def clifford_for(code: StabilizerCode) -> SymmetricBinaryMatrix:
    problem = required_targets(code)
    if problem.A.shape[0] == 0:
        return SymmetricBinaryMatrix(np.zeros((code.n, code.n), dtype=np.uint8))
    return solve(problem)
