"""Signed n-qubit Pauli operators with exact phase tracking.

An operator is stored as ``i**phase * E(x, z)`` where ``E(x, z)`` is the
Hermitian Pauli whose single-qubit factors are ``I, X, Z`` and ``Y = iXZ``.
``x`` and ``z`` are packed bitmasks (bit ``j`` is qubit ``j``, qubit 0 is the
leftmost character of the text form).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2lin as gf2

__all__ = [
    "PauliError",
    "PauliOperator",
    "multiply",
    "commutes",
    "transpose",
    "parse",
    "format_pauli",
    "weight",
]

_LETTERS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


class PauliError(ValueError):
    """Malformed Pauli text or incompatible operands."""


def _popcount(w: int) -> int:
    return w.bit_count()


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.n < 0 or self.x & ~mask or self.z & ~mask:
            raise PauliError(f"components do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_bits(cls, x_bits, z_bits, phase: int = 0) -> "PauliOperator":
        x_bits = np.asarray(x_bits).reshape(-1)
        z_bits = np.asarray(z_bits).reshape(-1)
        if x_bits.shape != z_bits.shape:
            raise PauliError("x and z components differ in length")
        return cls(len(x_bits), gf2.pack(x_bits), gf2.pack(z_bits), phase)

    @classmethod
    def from_sign(cls, n: int, x: int, z: int, sign: int) -> "PauliOperator":
        if sign not in (1, -1):
            raise PauliError(f"sign must be +1 or -1, got {sign}")
        return cls(n, x, z, 0 if sign == 1 else 2)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        xb, zb = _LETTERS[letter]
        return cls(n, xb << qubit, zb << qubit)

    # -- views --------------------------------------------------------------
    @property
    def x_bits(self) -> np.ndarray:
        return gf2.unpack(self.x, self.n)

    @property
    def z_bits(self) -> np.ndarray:
        return gf2.unpack(self.z, self.n)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise PauliError(f"operator with phase i^{self.phase} has no real sign")
        return 1 if self.phase == 0 else -1

    @property
    def packed(self) -> int:
        """Unsigned components as one word: x in the low n bits, z above."""
        return self.x | (self.z << self.n)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, 0)

    def with_sign(self, sign: int) -> "PauliOperator":
        return PauliOperator.from_sign(self.n, self.x, self.z, sign)

    def negate(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)

    # -- algebra ------------------------------------------------------------
    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return self.negate()

    def commutes(self, other: "PauliOperator") -> int:
        return commutes(self, other)

    def transpose(self) -> "PauliOperator":
        return transpose(self)

    def tensor(self, other: "PauliOperator") -> "PauliOperator":
        """``self (x) other`` with ``self`` on the low qubit indices."""
        return PauliOperator(
            self.n + other.n,
            self.x | (other.x << self.n),
            self.z | (other.z << self.n),
            self.phase + other.phase,
        )

    def embed(self, total: int, qubits) -> "PauliOperator":
        """Place this operator on ``qubits`` of a ``total``-qubit register."""
        qubits = list(qubits)
        if len(qubits) != self.n:
            raise PauliError(f"need {self.n} target qubits, got {len(qubits)}")
        x = z = 0
        for j, q in enumerate(qubits):
            x |= ((self.x >> j) & 1) << q
            z |= ((self.z >> j) & 1) << q
        return PauliOperator(total, x, z, self.phase)

    def restrict(self, qubits) -> "PauliOperator":
        """Components on ``qubits`` only; the phase is kept as is."""
        qubits = list(qubits)
        x = z = 0
        for j, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << j
            z |= ((self.z >> q) & 1) << j
        return PauliOperator(len(qubits), x, z, self.phase)

    def __str__(self) -> str:
        return format_pauli(self, allow_complex=True)

    def __repr__(self) -> str:
        return f"PauliOperator({format_pauli(self, allow_complex=True)!r})"


def _check_sizes(P: PauliOperator, Q: PauliOperator):
    if P.n != Q.n:
        raise PauliError(f"size mismatch: {P.n} vs {Q.n} qubits")


def product_phase(a: int, b: int, c: int, d: int) -> int:
    """Exponent of i in ``E(a, b) E(c, d) = i**k E(a^c, b^d)`` (mod 4)."""
    # X^a Z^b X^c Z^d = (-1)^{b.c} X^{a^c} Z^{b^d}; the i^{a.b} normalizations
    # of the three Hermitian operators account for the remaining terms.
    return (
        _popcount(a & b)
        + _popcount(c & d)
        + 2 * _popcount(b & c)
        - _popcount((a ^ c) & (b ^ d))
    ) % 4


def multiply(P: PauliOperator, Q: PauliOperator) -> PauliOperator:
    """Exact operator product ``P Q``."""
    _check_sizes(P, Q)
    k = product_phase(P.x, P.z, Q.x, Q.z)
    return PauliOperator(P.n, P.x ^ Q.x, P.z ^ Q.z, P.phase + Q.phase + k)


def commutes(P: PauliOperator, Q: PauliOperator) -> int:
    """Commutation bit: 0 when ``P`` and ``Q`` commute, 1 when they anticommute."""
    _check_sizes(P, Q)
    return (_popcount(P.x & Q.z) + _popcount(P.z & Q.x)) & 1


def transpose(P: PauliOperator) -> PauliOperator:
    """Matrix transpose; ``E(a, b)^T = (-1)^{a.b} E(a, b)``."""
    return PauliOperator(P.n, P.x, P.z, P.phase + 2 * _popcount(P.x & P.z))


def weight(P: PauliOperator) -> int:
    return P.weight


def parse(text: str) -> PauliOperator:
    """Parse ``[+|-]`` followed by letters from ``IXYZ``."""
    s = text.strip()
    phase = 0
    if s and s[0] in "+-":
        phase = 0 if s[0] == "+" else 2
        s = s[1:]
    if not s:
        raise PauliError(f"empty Pauli string: {text!r}")
    x = z = 0
    for j, ch in enumerate(s):
        try:
            xb, zb = _LETTERS[ch]
        except KeyError:
            raise PauliError(f"invalid character {ch!r} in Pauli string {text!r}") from None
        x |= xb << j
        z |= zb << j
    return PauliOperator(len(s), x, z, phase)


def format_pauli(P: PauliOperator, allow_complex: bool = False) -> str:
    prefix = {0: "+", 2: "-", 1: "+i", 3: "-i"}[P.phase]
    if not P.is_hermitian and not allow_complex:
        raise PauliError(f"operator {prefix}... is not Hermitian; no +/- form")
    letters = []
    for j in range(P.n):
        xb = (P.x >> j) & 1
        zb = (P.z >> j) & 1
        letters.append("IXZY"[xb | (zb << 1)])
    return prefix + "".join(letters)
