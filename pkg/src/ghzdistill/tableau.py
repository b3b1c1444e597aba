"""Stabilizer tableau: an ordered list of commuting, independent, signed Paulis.

Row order is significant and never canonicalized, so step-by-step
transcripts line up with hand-worked tables.  Measurements replace the first
anticommuting row unless an explicit replacement row is requested.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import gf2lin as gf2
from .pauli import PauliError, PauliOperator, commutes, multiply

__all__ = [
    "TableauError",
    "Measurement",
    "StabilizerTableau",
    "new_bell",
    "new_ghz",
    "conjugate_diag",
]


class TableauError(RuntimeError):
    """A tableau invariant was violated."""


@dataclass(frozen=True)
class Measurement:
    outcome: int  # m, the eigenvalue of the measured (signed) operator is (-1)**m
    deterministic: bool
    row: Optional[int] = None  # index of the replaced (or appended) row
    previous: Optional[PauliOperator] = None  # value of that row before replacement


def _symmetric_rows(R) -> list:
    R = gf2.as_bits(R)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError("R must be square")
    if not np.array_equal(R, R.T):
        raise ValueError("R must be symmetric")
    return [gf2.pack(R[i]) for i in range(R.shape[0])]


def conjugate_diag(P: PauliOperator, R, qubits=None) -> PauliOperator:
    """Conjugate ``P`` by the diagonal Clifford ``U_R`` acting on ``qubits``.

    ``U_R E(a, b) U_R^dag = E(a, b + aR)`` with ``b + aR`` evaluated over the
    integers mod 4; reducing it to a binary vector ``c`` costs the sign
    ``(-1)^{a.((b + aR - c) / 2)}``.  When ``aR`` has no carries this is the
    familiar ``(-1)^{a.(b*aR)}``.
    """
    rows = _symmetric_rows(R)
    if qubits is None:
        qubits = range(P.n)
    qubits = list(qubits)
    if len(qubits) != len(rows):
        raise ValueError(f"R is {len(rows)}x{len(rows)} but {len(qubits)} qubits given")
    sub = P.restrict(qubits)
    a, b = sub.x, sub.z
    z = P.z
    flip = 0
    for j, q in enumerate(qubits):
        add = sum((rows[i] >> j) & 1 for i in range(len(rows)) if (a >> i) & 1)
        col = ((b >> j) & 1) + add
        if add & 1:
            z ^= 1 << q
        if (a >> j) & 1:
            flip ^= (col >> 1) & 1
    return PauliOperator(P.n, P.x, z, P.phase + 2 * flip)


class StabilizerTableau:
    def __init__(self, rows: Sequence[PauliOperator], labels=None, check: bool = True):
        rows = list(rows)
        if not rows:
            raise TableauError("a tableau needs at least one row")
        self.n = rows[0].n
        self.rows = rows
        self.labels = list(labels) if labels is not None else [""] * len(rows)
        self._basis = None
        if check:
            self.check_invariants()

    # -- bookkeeping ----------------------------------------------------------
    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n = self.n
        t.rows = list(self.rows)
        t.labels = list(self.labels)
        t._basis = self._basis
        return t

    def __len__(self):
        return len(self.rows)

    def _touch(self):
        self._basis = None

    def _packed_basis(self) -> gf2.PackedBasis:
        if self._basis is None:
            basis = gf2.PackedBasis()
            for r in self.rows:
                basis.add(r.packed)
            self._basis = basis
        return self._basis

    @property
    def signs(self) -> list:
        return [r.sign for r in self.rows]

    def unsigned(self) -> list:
        return [(r.x, r.z) for r in self.rows]

    def check_invariants(self):
        for i, r in enumerate(self.rows):
            if r.n != self.n:
                raise TableauError(f"row {i} has {r.n} qubits, expected {self.n}")
            if not r.is_hermitian:
                raise TableauError(f"row {i} ({r}) is not Hermitian")
        for i in range(len(self.rows)):
            for j in range(i + 1, len(self.rows)):
                if commutes(self.rows[i], self.rows[j]):
                    raise TableauError(f"rows {i} and {j} anticommute")
        basis = gf2.PackedBasis()
        for i, r in enumerate(self.rows):
            if not basis.add(r.packed):
                raise TableauError(f"row {i} ({r}) depends on earlier rows")

    # -- queries --------------------------------------------------------------
    def deterministic_sign(self, P: PauliOperator) -> Optional[int]:
        """+1 if ``P`` is in the group, -1 if ``-P`` is, None if neither."""
        if P.n != self.n:
            raise PauliError(f"size mismatch: {P.n} vs {self.n}")
        combo = self._packed_basis().express(P.packed)
        if combo is None:
            return None
        acc = PauliOperator.identity(self.n)
        i = 0
        while combo:
            if combo & 1:
                acc = multiply(acc, self.rows[i])
            combo >>= 1
            i += 1
        if (acc.x, acc.z) != (P.x, P.z):
            raise TableauError("membership certificate does not reproduce the operator")
        rel = (acc.phase - P.phase) % 4
        if rel % 2:
            raise PauliError(f"{P} is not Hermitian")
        return 1 if rel == 0 else -1

    def contains(self, P: PauliOperator) -> bool:
        return self.deterministic_sign(P) == 1

    # -- updates --------------------------------------------------------------
    def measure(
        self,
        P: PauliOperator,
        outcome: Optional[int] = None,
        rng=None,
        replace_row: Optional[int] = None,
        label: str = "",
    ) -> Measurement:
        """Measure the Hermitian Pauli ``P`` (sign included) in place.

        In the random case the outcome is ``outcome`` when given, otherwise a
        fair bit drawn from ``rng``.  The first anticommuting row is replaced
        by ``(-1)^m P`` and every other anticommuting row is multiplied by
        the replaced row's previous value.
        """
        if P.n != self.n:
            raise PauliError(f"size mismatch: {P.n} vs {self.n}")
        if not P.is_hermitian:
            raise PauliError(f"cannot measure non-Hermitian {P}")
        anti = [i for i, r in enumerate(self.rows) if commutes(r, P)]
        if not anti:
            s = self.deterministic_sign(P)
            if s is not None:
                return Measurement(0 if s == 1 else 1, True)
        m = self._draw(outcome, rng)
        new_row = P if m == 0 else P.negate()
        if not anti:
            # commutes with everything yet outside the group: the group grows
            self.rows.append(new_row)
            self.labels.append(label)
            self._touch()
            return Measurement(m, False, len(self.rows) - 1, None)
        j = anti[0] if replace_row is None else replace_row
        if j not in anti:
            raise TableauError(f"row {j} commutes with {P}; cannot be replaced")
        old = self.rows[j]
        for i in anti:
            if i != j:
                self.rows[i] = multiply(self.rows[i], old)
        self.rows[j] = new_row
        self.labels[j] = label
        self._touch()
        return Measurement(m, False, j, old)

    @staticmethod
    def _draw(outcome, rng) -> int:
        if outcome is not None:
            if outcome not in (0, 1):
                raise ValueError(f"outcome must be 0 or 1, got {outcome}")
            return int(outcome)
        if rng is None:
            rng = np.random.default_rng()
        return int(rng.integers(2))

    def apply_error(self, E: PauliOperator):
        """Apply a Pauli: rows anticommuting with ``E`` flip sign."""
        if E.n != self.n:
            raise PauliError(f"size mismatch: {E.n} vs {self.n}")
        if E.is_identity():
            return
        for i, r in enumerate(self.rows):
            if commutes(r, E):
                self.rows[i] = r.negate()

    apply_pauli = apply_error

    def apply_diag_clifford(self, R, qubits):
        """Conjugate every row by ``U_R`` acting on ``qubits``."""
        self.rows = [conjugate_diag(r, R, qubits) for r in self.rows]
        self._touch()

    def multiply_row(self, target: int, source: int):
        """``rows[target] <- rows[target] * rows[source]`` (group unchanged)."""
        if target == source:
            raise TableauError("cannot multiply a row by itself")
        self.rows[target] = multiply(self.rows[target], self.rows[source])
        self._touch()

    # -- output ---------------------------------------------------------------
    def transcript(self, parts: Sequence[Sequence[int]] = None, marks=()) -> list:
        """One line per row: sign, x bits per part, z bits per part, Pauli."""
        if parts is None:
            parts = [list(range(self.n))]
        marks = set(marks)
        lines = []
        for i, r in enumerate(self.rows):
            xs = " ".join("".join(str((r.x >> q) & 1) for q in part) for part in parts)
            zs = " ".join("".join(str((r.z >> q) & 1) for q in part) for part in parts)
            sign = "+1" if r.sign == 1 else "-1"
            line = f"{sign}\t{xs}\t{zs}\t{r}"
            if i in marks:
                line += "\t<-"
            lines.append(line)
        return lines

    def __repr__(self):
        return "StabilizerTableau([" + ", ".join(str(r) for r in self.rows) + "])"


def new_bell(n: int) -> StabilizerTableau:
    """``n`` Bell pairs, qubits ordered A_1..A_n, B_1..B_n.

    Rows are X_{A_i}X_{B_i} for all i, then Z_{A_i}Z_{B_i} for all i.
    """
    if n < 1:
        raise ValueError("n must be positive")
    total = 2 * n
    rows, labels = [], []
    for i in range(n):
        w = (1 << i) | (1 << (n + i))
        rows.append(PauliOperator(total, w, 0))
        labels.append(f"XA{i+1}XB{i+1}")
    for i in range(n):
        w = (1 << i) | (1 << (n + i))
        rows.append(PauliOperator(total, 0, w))
        labels.append(f"ZA{i+1}ZB{i+1}")
    return StabilizerTableau(rows, labels, check=False)


def new_ghz(n: int, yyx: bool = False) -> StabilizerTableau:
    """``n`` GHZ triples, qubits ordered A..., B..., C....

    Rows: all Z_A Z_B, then all Z_B Z_C, then all X_A X_B X_C.  With
    ``yyx`` the last block is rewritten to the equivalent -Y_A Y_B X_C.
    """
    if n < 1:
        raise ValueError("n must be positive")
    total = 3 * n
    rows, labels = [], []
    for i in range(n):
        rows.append(PauliOperator(total, 0, (1 << i) | (1 << (n + i))))
        labels.append(f"ZA{i+1}ZB{i+1}")
    for i in range(n):
        rows.append(PauliOperator(total, 0, (1 << (n + i)) | (1 << (2 * n + i))))
        labels.append(f"ZB{i+1}ZC{i+1}")
    for i in range(n):
        xxx = PauliOperator(total, (1 << i) | (1 << (n + i)) | (1 << (2 * n + i)), 0)
        if yyx:
            xxx = multiply(xxx, rows[i])  # XXX * Z_A Z_B = -YYX
        rows.append(xxx)
        labels.append(f"XA{i+1}XB{i+1}XC{i+1}")
    return StabilizerTableau(rows, labels, check=False)
