"""Step-by-step replays of the worked five-qubit Bell and yy3 GHZ examples.

All measurement outcomes are forced to +1.  The Bell replay uses explicit
replacement rows; the GHZ replay uses the first-anticommuting-row rule plus
explicit row rewrites that expose the induced BC stabilizers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliOperator, parse
from .stabcode import five_qubit, yy3
from .tableau import StabilizerTableau, new_bell, new_ghz

__all__ = ["ReplayStep", "Replay", "table1", "table2", "TABLE1_REPLACEMENTS"]

# row order X_A1X_B1..X_A5X_B5, Z_A1Z_B1..Z_A5Z_B5
TABLE1_REPLACEMENTS = (8, 9, 4, 0)


@dataclass(frozen=True)
class ReplayStep:
    label: str
    rows: tuple
    marks: tuple


@dataclass
class Replay:
    name: str
    parts: tuple
    steps: list
    final: StabilizerTableau

    def lines(self) -> list:
        out = []
        for step in self.steps:
            out.append(f"# {step.label}")
            t = StabilizerTableau(list(step.rows), check=False)
            out.extend(t.transcript(self.parts, step.marks))
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _snap(t: StabilizerTableau, label: str, marks=()) -> ReplayStep:
    return ReplayStep(label, tuple(t.rows), tuple(marks))


def table1() -> Replay:
    code = five_qubit()
    n = code.n
    t = new_bell(n)
    steps = [_snap(t, "(0) five Bell pairs")]
    for p, (g, row) in enumerate(zip(code.generators, TABLE1_REPLACEMENTS), start=1):
        res = t.measure(g.embed(2 * n, range(n)), outcome=0, replace_row=row)
        t.check_invariants()
        steps.append(_snap(t, f"({p}) Alice measures {g} on A", [res.row]))
    return Replay("table1", (tuple(range(n)), tuple(range(n, 2 * n))), steps, t)


def table2() -> Replay:
    code = yy3()
    n = code.n
    A, C = range(n), range(2 * n, 3 * n)
    t = new_ghz(n, yyx=True)
    steps = [_snap(t, "(0) three GHZ triples with -YYX rows")]
    gens = code.generators

    res = t.measure(gens[0].embed(3 * n, A), outcome=0)
    t.multiply_row(6, 7)
    t.multiply_row(6, res.row)
    steps.append(_snap(t, f"(1) Alice measures {gens[0]} on A", [res.row]))

    res = t.measure(gens[1].embed(3 * n, A), outcome=0)
    t.multiply_row(7, 8)
    t.multiply_row(7, res.row)
    steps.append(_snap(t, f"(2) Alice measures {gens[1]} on A", [res.row]))

    # P^dag on every C qubit: the diagonal Clifford with R = I followed by Z
    t.apply_diag_clifford(np.eye(n, dtype=np.uint8), C)
    t.apply_error(PauliOperator(3 * n, 0, sum(1 << q for q in C)))
    steps.append(_snap(t, "(3) P^dag on C"))

    marks = []
    for g, target in zip(gens, (6, 7)):
        res = t.measure(g.embed(3 * n, range(n, 2 * n)), outcome=0)
        t.multiply_row(target, res.row)
        marks.append(res.row)
    t.check_invariants()
    steps.append(_snap(t, "(4) Bob measures the code on B", marks))
    parts = (tuple(A), tuple(range(n, 2 * n)), tuple(C))
    return Replay("table2", parts, steps, t)


def table1_logical_rows():
    """The two logical Bell stabilizers expected in the final five-qubit group."""
    return parse("+XIZIXXIZIX"), parse("-XIIXYXIIXY")


def table2_logical_rows():
    """Logical GHZ stabilizers expected after Bob's step of the yy3 example."""
    return parse("+ZZZZZZIII"), parse("+IIIZZZZZZ"), parse("+IIYIIYIIY")
