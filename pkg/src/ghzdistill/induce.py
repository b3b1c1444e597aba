"""Codes induced on the receiving parties.

Conventions used throughout:

* ``eps`` values are the measured eigenvalues of the *unsigned* operators
  ``E(a_i, b_i)`` of the standard-form generators (so a code sign and a
  measurement outcome combine into one ``eps``).
* Joint BC codes act on ``2n`` qubits ordered ``B_1..B_n, C_1..C_n``.
* When a diagonal Clifford ``U_R`` turns ``E(a, 0)`` on C into ``s E(a, b)``,
  the sign ``s`` is folded into the induced generator.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .diagclifford import clifford_for, conjugation_sign
from .pauli import PauliOperator
from .stabcode import StabilizerCode

__all__ = [
    "Placement",
    "Topology",
    "InducedBcCode",
    "bell_partner",
    "ghz_bc_code",
    "charlie_code",
    "transpose_sign",
]


class Placement(str, Enum):
    NO_CLIFFORD = "none"
    ALICE_APPLIES = "alice"
    BOB_APPLIES = "bob"


class Topology(str, Enum):
    CHAIN = "chain"
    SPLIT = "split"


def transpose_sign(P: PauliOperator) -> int:
    """``(-1)^{a.b}``, the sign picked up by ``E(a, b)`` under transposition."""
    return -1 if (P.x & P.z).bit_count() & 1 else 1


def _check_signs(values, r, what):
    values = list(values)
    if len(values) != r:
        raise ValueError(f"{what} has {len(values)} entries, expected {r}")
    for v in values:
        if v not in (1, -1):
            raise ValueError(f"{what} entries must be +1 or -1, got {v}")
    return values


def bell_partner(code: StabilizerCode, outcomes) -> StabilizerCode:
    """Bob's code after Alice measures the standard-form generators.

    ``outcomes[i]`` is the bit ``m_i`` Alice observed for the signed
    generator ``i``; Bob's generator ``i`` carries the extra sign
    ``(-1)^{m_i + a_i.b_i}``.
    """
    gens = code.standard.generators
    outcomes = list(outcomes)
    if len(outcomes) != len(gens):
        raise ValueError(f"expected {len(gens)} outcomes, got {len(outcomes)}")
    out = []
    for g, m in zip(gens, outcomes):
        if m not in (0, 1):
            raise ValueError(f"outcome bits must be 0 or 1, got {m}")
        s = g.sign * transpose_sign(g) * (-1 if m else 1)
        out.append(g.with_sign(s))
    return StabilizerCode(out, f"{code.name}-bob" if code.name else "")


@dataclass(frozen=True)
class InducedBcCode:
    code: StabilizerCode  # 2n qubits, B then C
    joint: int  # number of rows induced from Alice's generators
    placement: Placement

    @property
    def generators(self):
        return self.code.generators


def _fixups(code: StabilizerCode, placement: Placement, R, wanted) -> tuple:
    """Clifford sign per standard-form generator (``+1`` when no Clifford acts)."""
    gens = code.standard.generators
    if placement not in wanted:
        return (1,) * len(gens)
    R = clifford_for(code) if R is None else R
    R = getattr(R, "matrix", R)
    return tuple(1 if g.x == 0 else conjugation_sign(g.x_bits, [0] * code.n, R) for g in gens)


def ghz_bc_code(code: StabilizerCode, eps_a, placement=Placement.NO_CLIFFORD, R=None) -> InducedBcCode:
    """BC code after Alice's measurements (and her Clifford on C for AliceApplies)."""
    placement = Placement(placement)
    n = code.n
    gens = code.standard.generators
    eps_a = _check_signs(eps_a, len(gens), "eps_a")
    B = range(n)
    C = range(n, 2 * n)
    fix = _fixups(code, placement, R, (Placement.ALICE_APPLIES,))
    rows = []
    for g, e, f in zip(gens, eps_a, fix):
        if g.x == 0:
            rows.append(PauliOperator(2 * n, 0, g.z).with_sign(e))  # lives on B only
            continue
        sign = e * f * transpose_sign(g)
        b_part = PauliOperator(n, g.x, g.z).embed(2 * n, B)
        c_z = g.z if placement is Placement.ALICE_APPLIES else 0
        c_part = PauliOperator(n, g.x, c_z).embed(2 * n, C)
        rows.append(PauliOperator(2 * n, b_part.x | c_part.x, b_part.z | c_part.z).with_sign(sign))
    joint = len(rows)
    for i in range(n):
        rows.append(PauliOperator(2 * n, 0, (1 << i) | (1 << (n + i))))
    name = f"{code.name}-bc-{placement.value}" if code.name else ""
    return InducedBcCode(StabilizerCode(rows, name), joint, placement)


def charlie_code(code: StabilizerCode, eps_a, eps_b, placement=Placement.NO_CLIFFORD,
                 R=None) -> StabilizerCode:
    placement = Placement(placement)
    n = code.n
    gens = code.standard.generators
    eps_a = _check_signs(eps_a, len(gens), "eps_a")
    eps_b = _check_signs(eps_b, len(gens), "eps_b")
    fix = _fixups(code, placement, R, (Placement.ALICE_APPLIES, Placement.BOB_APPLIES))
    rows = []
    for g, ea, eb, f in zip(gens, eps_a, eps_b, fix):
        if g.x == 0:
            if eb != 1:
                raise ValueError("eps_b must be +1 for purely Z-type generators")
            rows.append(PauliOperator(n, 0, g.z).with_sign(ea))
            continue
        sign = ea * eb * f * transpose_sign(g)
        z = 0 if placement is Placement.NO_CLIFFORD else g.z
        rows.append(PauliOperator(n, g.x, z).with_sign(sign))
    name = f"{code.name}-charlie-{placement.value}" if code.name else ""
    return StabilizerCode(rows, name)
