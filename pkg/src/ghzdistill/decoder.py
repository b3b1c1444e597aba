"""Minimum-weight syndrome decoding by exhaustive enumeration.

Errors are enumerated by weight.  Within a weight, supports follow
``itertools.combinations`` order over qubit indices and each support cycles
through the single-qubit letters X, Y, Z (first qubit slowest).  The first
error reaching a syndrome becomes its coset leader.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import gf2lin as gf2
from .pauli import PauliOperator

__all__ = [
    "DecoderBudgetError",
    "DecodeMiss",
    "SyndromeTable",
    "build_table",
    "decode",
    "min_distance",
    "enumerate_paulis",
    "syndrome_of",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 5_000_000
_LETTER_BITS = ((1, 0), (1, 1), (0, 1))  # X, Y, Z


class DecoderBudgetError(RuntimeError):
    """Enumeration would exceed the configured budget."""


class DecodeMiss(KeyError):
    """Syndrome has no leader in an incomplete table."""


def syndrome_of(generators, x: int, z: int) -> int:
    """Packed syndrome: bit ``i`` set when the error anticommutes with generator ``i``."""
    word = 0
    for i, g in enumerate(generators):
        word |= (((x & g.z).bit_count() + (z & g.x).bit_count()) & 1) << i
    return word


def enumerate_paulis(n: int, weight: int):
    """Yield ``(x, z)`` for every Pauli of exactly ``weight`` on ``n`` qubits."""
    for support in itertools.combinations(range(n), weight):
        for letters in itertools.product(_LETTER_BITS, repeat=weight):
            x = z = 0
            for q, (xb, zb) in zip(support, letters):
                x |= xb << q
                z |= zb << q
            yield x, z


def _count(n, w):
    from math import comb

    return comb(n, w) * 3**w


@dataclass
class SyndromeTable:
    n: int
    generators: tuple
    leaders: dict = field(default_factory=dict)  # syndrome word -> (x, z)
    complete: bool = False
    max_weight: int = 0

    @property
    def r(self) -> int:
        return len(self.generators)

    def leader(self, syndrome: int) -> PauliOperator:
        try:
            x, z = self.leaders[syndrome]
        except KeyError:
            raise DecodeMiss(f"no leader for syndrome {syndrome:0{self.r}b}") from None
        return PauliOperator(self.n, x, z)

    def arrays(self):
        """Lookup arrays (x, z, present) indexed by syndrome word."""
        size = 1 << self.r
        lx = np.zeros(size, dtype=np.uint64)
        lz = np.zeros(size, dtype=np.uint64)
        ok = np.zeros(size, dtype=bool)
        for s, (x, z) in self.leaders.items():
            lx[s], lz[s], ok[s] = x, z, True
        return lx, lz, ok

    def dump(self) -> list:
        lines = []
        for s in sorted(self.leaders):
            bits = "".join(str((s >> i) & 1) for i in range(self.r))
            lines.append(f"{bits}\t{self.leader(s)}")
        return lines


def build_table(generators, max_weight: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                strict: bool = True) -> SyndromeTable:
    """Breadth-first coset-leader table for the given (unsigned) generators.

    When the next weight class would exceed ``budget`` the build raises
    DecoderBudgetError, or with ``strict=False`` stops and returns an
    incomplete table.
    """
    gens = tuple(getattr(generators, "generators", generators))
    n = gens[0].n
    r = len(gens)
    cap = n if max_weight is None else min(max_weight, n)
    table = SyndromeTable(n, gens)
    target = 1 << r
    spent = 0
    for w in range(cap + 1):
        spent += _count(n, w)
        if spent > budget:
            if not strict:
                break
            raise DecoderBudgetError(
                f"enumerating weight {w} on {n} qubits exceeds the budget of {budget} errors"
            )
        for x, z in enumerate_paulis(n, w):
            s = syndrome_of(gens, x, z)
            if s not in table.leaders:
                table.leaders[s] = (x, z)
        table.max_weight = w
        if len(table.leaders) == target:
            break
    table.complete = len(table.leaders) == target
    return table


def decode(table: SyndromeTable, syndrome) -> PauliOperator:
    if not isinstance(syndrome, (int, np.integer)):
        bits = np.asarray(syndrome).reshape(-1)
        if len(bits) != table.r:
            raise ValueError(f"syndrome has {len(bits)} bits, expected {table.r}")
        syndrome = gf2.pack(bits)
    return table.leader(int(syndrome))


def min_distance(code, budget: int = DEFAULT_BUDGET) -> Optional[int]:
    """Smallest weight of an undetectable error outside the stabilizer group.

    Returns None when no such operator exists (k = 0).
    """
    gens = tuple(getattr(code, "generators", code))
    n = gens[0].n
    basis = gf2.PackedBasis()
    for g in gens:
        basis.add(g.packed)
    spent = 0
    for w in range(1, n + 1):
        spent += _count(n, w)
        if spent > budget:
            raise DecoderBudgetError(f"distance search on {n} qubits exceeds the budget")
        for x, z in enumerate_paulis(n, w):
            if syndrome_of(gens, x, z) == 0 and not basis.contains(x | (z << n)):
                return w
    return None
