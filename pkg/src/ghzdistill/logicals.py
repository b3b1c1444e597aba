"""Logical Pauli generation by simulated stabilizer measurements on GHZ copies.

The code's standard-form generators are measured (outcomes forced to +1) on
subsystem A of ``n`` GHZ triples, tracked by a 2n-row tableau holding the
Z_A Z_B rows and the X_A X_B X_C rows.  Surviving top rows give logical Z
operators; surviving bottom rows give logical X operators with their sign.
"""
from __future__ import annotations

import numpy as np

from . import gf2lin as gf2
from .pauli import PauliOperator, commutes, multiply
from .stabcode import LogicalPaulis, StabilizerCode
from .tableau import StabilizerTableau

__all__ = [
    "LogicalsError",
    "logical_paulis",
    "fix_pairing",
    "commute_xbars",
    "pairing_matrix",
    "check_logicals",
]


class LogicalsError(RuntimeError):
    """Logical operators could not be produced for a code."""


def _ghz_half_tableau(n: int) -> StabilizerTableau:
    total = 3 * n
    rows = [PauliOperator(total, 0, (1 << i) | (1 << (n + i))) for i in range(n)]
    rows += [
        PauliOperator(total, (1 << i) | (1 << (n + i)) | (1 << (2 * n + i)), 0)
        for i in range(n)
    ]
    return StabilizerTableau(rows, check=False)


def pairing_matrix(zbars, xbars) -> np.ndarray:
    """``T[i, j]`` = commutation bit of ``zbars[i]`` with ``xbars[j]``."""
    return np.array([[commutes(z, x) for x in xbars] for z in zbars], dtype=np.uint8).reshape(
        len(zbars), len(xbars)
    )


def fix_pairing(zbars, xbars):
    """Recombine the logical Z operators so that they pair with ``xbars``."""
    zbars = list(zbars)
    k = len(zbars)
    if len(xbars) != k:
        raise LogicalsError(f"{k} logical Z but {len(xbars)} logical X operators")
    if k == 0:
        return zbars
    T = pairing_matrix(zbars, xbars)
    if np.array_equal(T, np.eye(k, dtype=np.uint8)):
        return zbars
    try:
        Tinv = gf2.inverse(T)
    except np.linalg.LinAlgError:
        raise LogicalsError(f"pairing matrix is singular:\n{T}") from None
    n = zbars[0].n
    F = np.array([z.z_bits for z in zbars], dtype=np.uint8)
    newF = gf2.matmul(Tinv, F)
    return [PauliOperator(n, 0, gf2.pack(row)) for row in newF]


def commute_xbars(zbars, xbars):
    """Make the logical X operators mutually commute without disturbing the pairing.

    The A-restrictions of harvested bottom rows may anticommute (their B and C
    parts compensated).  Whenever ``xbars[i]`` and ``xbars[j]`` (i < j)
    anticommute, ``xbars[j]`` is multiplied by ``zbars[i]``; this requires the
    pairing to be the identity already.
    """
    xbars = list(xbars)
    for j in range(len(xbars)):
        for i in range(j):
            if commutes(xbars[i], xbars[j]):
                xbars[j] = multiply(xbars[j], zbars[i])
    return xbars


def logical_paulis(code: StabilizerCode) -> LogicalPaulis:
    n, k = code.n, code.k
    gens = code.standard.generators
    t = _ghz_half_tableau(n)
    A = range(n)
    replaced = set()
    for g in gens:
        res = t.measure(g.embed(3 * n, A), outcome=0)
        if res.deterministic:
            raise LogicalsError(f"generator {g} was already fixed by the GHZ rows")
        if res.previous is None:
            raise LogicalsError(f"generator {g} commutes with every GHZ row")
        replaced.add(res.row)

    H = gf2.PackedBasis()
    for g in gens:
        H.add(g.packed)
    zbars, xbars = [], []
    for q in range(n):
        if q in replaced:
            continue
        part = t.rows[q].restrict(A)
        if part.x:
            raise LogicalsError(f"top row {q} acquired an X component on A")
        if H.add(part.packed):
            zbars.append(PauliOperator(n, 0, part.z))
    for q in range(n, 2 * n):
        if q in replaced:
            continue
        part = t.rows[q].restrict(A)
        if H.add(part.packed):
            xbars.append(part)
    if len(zbars) != k or len(xbars) != k:
        raise LogicalsError(
            f"harvested {len(zbars)} logical Z and {len(xbars)} logical X, expected {k} each"
        )
    zbars = fix_pairing(zbars, xbars)
    xbars = commute_xbars(zbars, xbars)
    result = LogicalPaulis(tuple(zbars), tuple(xbars))
    problems = check_logicals(code, result)
    if problems:
        raise LogicalsError("; ".join(problems))
    return result


def check_logicals(code: StabilizerCode, L: LogicalPaulis) -> list:
    """List of violated logical-operator invariants (empty when valid)."""
    problems = []
    k = code.k
    if L.k != k or len(L.xbar) != k:
        return [f"expected {k} pairs"]
    for z in L.zbar:
        if z.x or z.phase != 0:
            problems.append(f"{z} is not a +1 purely Z-type operator")
    for P in L.zbar + L.xbar:
        if not P.is_hermitian:
            problems.append(f"{P} is not Hermitian")
        for g in code.generators:
            if commutes(g, P):
                problems.append(f"{P} anticommutes with generator {g}")
    T = pairing_matrix(L.zbar, L.xbar)
    if k and not np.array_equal(T, np.eye(k, dtype=np.uint8)):
        problems.append("logical Z and X do not pair up")
    for i, a in enumerate(L.zbar):
        for b in L.zbar[i + 1:]:
            if commutes(a, b):
                problems.append(f"{a} and {b} anticommute")
    for i, a in enumerate(L.xbar):
        for b in L.xbar[i + 1:]:
            if commutes(a, b):
                problems.append(f"{a} and {b} anticommute")
    basis = gf2.PackedBasis()
    for g in code.generators:
        basis.add(g.packed)
    for P in L.zbar + L.xbar:
        if not basis.add(P.packed):
            problems.append(f"{P} depends on the stabilizers or earlier logicals")
    return problems
