"""Stabilizer codes: validation, syndromes, standard form and built-in codes."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import gf2lin as gf2
from .pauli import PauliError, PauliOperator, commutes, format_pauli, multiply, parse

__all__ = [
    "CodeError",
    "LogicalPaulis",
    "StandardForm",
    "StabilizerCode",
    "five_qubit",
    "bitflip3",
    "yy3",
    "steane",
    "BUILTIN_CODES",
    "from_file",
    "load_code",
]


class CodeError(ValueError):
    """Invalid generator set or malformed code file."""


@dataclass(frozen=True)
class LogicalPaulis:
    zbar: tuple  # k operators E(0, f_j), sign +1
    xbar: tuple  # k operators nu_j E(c_j, d_j)

    @property
    def k(self) -> int:
        return len(self.zbar)

    def as_strings(self):
        return [str(z) for z in self.zbar], [str(x) for x in self.xbar]


@dataclass(frozen=True)
class StandardForm:
    """Generators rearranged as pure-Z rows followed by rows with full-rank X part."""

    zrows: tuple
    xrows: tuple

    @property
    def generators(self) -> tuple:
        return self.zrows + self.xrows

    @property
    def r_z(self) -> int:
        return len(self.zrows)

    @property
    def r_x(self) -> int:
        return len(self.xrows)

    def _mat(self, rows, attr):
        n = (self.zrows + self.xrows)[0].n
        if not rows:
            return np.zeros((0, n), dtype=np.uint8)
        return np.array([getattr(r, attr) for r in rows], dtype=np.uint8)

    @property
    def H_Z(self) -> np.ndarray:
        return self._mat(self.zrows, "z_bits")

    @property
    def H1(self) -> np.ndarray:
        return self._mat(self.xrows, "x_bits")

    @property
    def H2(self) -> np.ndarray:
        return self._mat(self.xrows, "z_bits")


def _standard_form(generators) -> StandardForm:
    # Generators whose X parts are independent of the earlier ones are kept
    # verbatim; each remaining generator is multiplied by kept rows until its
    # X part vanishes, which yields the pure-Z block with exact signs.
    basis = gf2.PackedBasis()
    kept, pending = [], []
    for g in generators:
        if g.x and basis.add(g.x):
            kept.append(g)
        else:
            pending.append(g)
    xbasis = gf2.PackedBasis()
    for g in kept:
        xbasis.add(g.x)
    zrows = []
    for g in pending:
        combo = xbasis.express(g.x)
        row = g
        i = 0
        while combo:
            if combo & 1:
                row = multiply(row, kept[i])
            combo >>= 1
            i += 1
        if row.x:
            raise CodeError("standard form reduction left a nonzero X part")
        zrows.append(row)
    return StandardForm(tuple(zrows), tuple(kept))


class StabilizerCode:
    """An [[n, k]] stabilizer code given by signed generators."""

    def __init__(self, generators: Sequence[PauliOperator], name: str = ""):
        gens = tuple(generators)
        if not gens:
            raise CodeError("a code needs at least one generator")
        n = gens[0].n
        for i, g in enumerate(gens):
            if g.n != n:
                raise CodeError(f"generator {i} acts on {g.n} qubits, expected {n}")
            if not g.is_hermitian:
                raise CodeError(f"generator {i} has a non-real phase")
            if g.is_identity():
                raise CodeError(f"generator {i} is {'-' if g.phase else '+'}identity")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if commutes(gens[i], gens[j]):
                    raise CodeError(f"generators {i} and {j} anticommute")
        basis = gf2.PackedBasis()
        for i, g in enumerate(gens):
            if not basis.add(g.packed):
                raise CodeError(f"generator {i} ({g}) depends on earlier generators")
        self.n = n
        self.k = n - len(gens)
        self.generators = gens
        self.name = name
        self.standard = _standard_form(gens)
        self._logicals: Optional[LogicalPaulis] = None

    @classmethod
    def from_generators(cls, generators, name: str = "") -> "StabilizerCode":
        gens = [parse(g) if isinstance(g, str) else g for g in generators]
        return cls(gens, name)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def logicals(self) -> LogicalPaulis:
        if self._logicals is None:
            from .logicals import logical_paulis

            self._logicals = logical_paulis(self)
        return self._logicals

    def syndrome(self, E: PauliOperator) -> np.ndarray:
        if E.n != self.n:
            raise PauliError(f"error acts on {E.n} qubits, code has {self.n}")
        return np.array([commutes(g, E) for g in self.generators], dtype=np.uint8)

    def syndrome_word(self, E: PauliOperator, generators=None) -> int:
        gens = self.generators if generators is None else generators
        word = 0
        for i, g in enumerate(gens):
            word |= commutes(g, E) << i
        return word

    def is_css(self) -> bool:
        # pure-X subgroup dimension = size of the kernel of the Z-part map
        sf = self.standard
        M = np.array([g.z_bits for g in sf.generators], dtype=np.uint8)
        pure_x = len(gf2.kernel(M.T))
        return pure_x + sf.r_z == self.r

    def in_group(self, P: PauliOperator) -> Optional[int]:
        """Sign s with s*P in the stabilizer group, or None if neither is."""
        from .tableau import StabilizerTableau

        return StabilizerTableau(self.generators, check=False).deterministic_sign(P)

    def to_dict(self) -> dict:
        sf = self.standard
        out = {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "r_x": sf.r_x,
            "r_z": sf.r_z,
            "generators": [format_pauli(g) for g in self.generators],
            "standard_form": [format_pauli(g) for g in sf.generators],
        }
        if self.k > 0:
            zs, xs = self.logicals.as_strings()
            out["logicals"] = {"z": zs, "x": xs}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<StabilizerCode{label} [[{self.n},{self.k}]]>"


def five_qubit() -> StabilizerCode:
    return StabilizerCode.from_generators(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], "five_qubit")


def bitflip3() -> StabilizerCode:
    return StabilizerCode.from_generators(["ZZI", "IZZ"], "bitflip3")


def yy3() -> StabilizerCode:
    return StabilizerCode.from_generators(["YYI", "IYY"], "yy3")


def steane() -> StabilizerCode:
    rows = ["1010101", "0110011", "0001111"]
    gens = [r.replace("1", "X").replace("0", "I") for r in rows]
    gens += [r.replace("1", "Z").replace("0", "I") for r in rows]
    return StabilizerCode.from_generators(gens, "steane")


BUILTIN_CODES = {
    "five_qubit": five_qubit,
    "bitflip3": bitflip3,
    "yy3": yy3,
    "steane": steane,
}


def from_file(path) -> StabilizerCode:
    """Read one signed Pauli string per line; ``#`` starts a comment."""
    path = Path(path)
    gens = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                gens.append(parse(text))
            except PauliError as exc:
                raise CodeError(f"{path}:{lineno}: {exc}") from None
            if len(gens) > 1 and gens[-1].n != gens[0].n:
                raise CodeError(
                    f"{path}:{lineno}: generator has {gens[-1].n} qubits, expected {gens[0].n}"
                )
    if not gens:
        raise CodeError(f"{path}: no generators found")
    return StabilizerCode(gens, path.stem)


def load_code(source: str) -> StabilizerCode:
    """Built-in code name or path to a code file."""
    if source in BUILTIN_CODES:
        return BUILTIN_CODES[source]()
    if not Path(source).exists():
        raise FileNotFoundError(f"no built-in code or file named {source!r}")
    return from_file(source)
