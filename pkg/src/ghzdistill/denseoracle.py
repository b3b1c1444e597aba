"""Dense complex reference computations for small systems.

Used only by the test suite and the ``verify`` command; nothing on the
simulation hot path depends on this module.

Ordering convention: qubit 0 is the leftmost Kronecker factor, so in a
state vector qubit ``j`` of ``m`` is bit ``m - 1 - j`` of the basis index.
Multipartite registers are laid out A, then B, then C.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import gf2lin as gf2
from . import pauli as pl
from .pauli import PauliOperator
from .stabcode import StabilizerCode
from .tableau import StabilizerTableau

__all__ = [
    "DenseSizeError",
    "MAX_QUBITS",
    "dense_pauli",
    "dense_pauli_z4",
    "apply_pauli",
    "apply_diag_clifford",
    "project",
    "code_projector",
    "ghz_state",
    "bell_state",
    "ghz_map",
    "diag_clifford",
    "overlap",
    "tableau_state",
    "check_transpose_sign",
    "check_pauli_product",
    "check_multiply",
    "check_ghz_identity",
    "check_ghz_map_homomorphism",
    "check_induced_bc",
    "check_bc_exchange",
    "check_conjugation",
    "CssCodePair",
    "check_css_bell",
    "bitflip_state_deviation",
    "replay_log",
    "CheckResult",
    "run_suite",
]

MAX_QUBITS = 14
MAX_MATRIX_QUBITS = 7

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DenseSizeError(ValueError):
    """Requested dense object exceeds the qubit guard."""


def _guard(m: int, limit: int, what: str):
    if m > limit:
        raise DenseSizeError(f"{what} on {m} qubits exceeds the dense limit of {limit}")


def _index_mask(mask: int, m: int) -> int:
    """Convert a packed qubit mask (qubit j = bit j) to a basis-index mask."""
    out = 0
    for j in range(m):
        if (mask >> j) & 1:
            out |= 1 << (m - 1 - j)
    return out


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v >>= 1
    return out


# ---------------------------------------------------------------------------
# matrices


def dense_pauli(P: PauliOperator) -> np.ndarray:
    """Dense matrix of ``i^phase E(x, z)``."""
    _guard(P.n, MAX_MATRIX_QUBITS, "dense Pauli")
    M = np.ones((1, 1), dtype=complex)
    for j in range(P.n):
        a, b = (P.x >> j) & 1, (P.z >> j) & 1
        f = (1j ** (a * b)) * np.linalg.matrix_power(_X, a) @ np.linalg.matrix_power(_Z, b)
        M = np.kron(M, f)
    return (1j ** P.phase) * M


def dense_pauli_z4(a, b) -> np.ndarray:
    """``i^{a.b} (X^a1 Z^b1 (x) ...)`` for integer vectors ``a, b`` taken mod 4."""
    a = np.asarray(a, dtype=int) % 4
    b = np.asarray(b, dtype=int) % 4
    _guard(len(a), MAX_MATRIX_QUBITS, "dense Pauli")
    M = np.ones((1, 1), dtype=complex)
    for ai, bi in zip(a, b):
        M = np.kron(M, np.linalg.matrix_power(_X, int(ai)) @ np.linalg.matrix_power(_Z, int(bi)))
    return (1j ** (int(a @ b) % 4)) * M


def code_projector(code) -> np.ndarray:
    """Product of ``(I + g) / 2`` over the signed generators."""
    gens = list(getattr(code, "generators", code))
    n = gens[0].n
    _guard(n, MAX_MATRIX_QUBITS, "code projector")
    Pi = np.eye(2**n, dtype=complex)
    for g in gens:
        Pi = Pi @ (np.eye(2**n) + dense_pauli(g)) / 2
    return Pi


def ghz_map(M: np.ndarray) -> np.ndarray:
    """``sum_xy M_xy |x,x><y,y|`` on the doubled register."""
    M = np.asarray(M, dtype=complex)
    N = M.shape[0]
    n = N.bit_length() - 1
    if M.shape != (N, N) or 2**n != N:
        raise ValueError(f"expected a 2^n square matrix, got shape {M.shape}")
    _guard(n, 3, "GHZ map")
    out = np.zeros((N * N, N * N), dtype=complex)
    diag = np.arange(N) * N + np.arange(N)
    out[np.ix_(diag, diag)] = M
    return out


def diag_clifford(R) -> np.ndarray:
    """Diagonal of ``U_R = diag(i^{v R v^T mod 4})`` in basis-index order."""
    R = gf2.as_bits(R).astype(int)
    n = R.shape[0]
    _guard(n, MAX_QUBITS, "diagonal Clifford")
    idx = np.arange(2**n)
    V = (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    q = np.einsum("vi,ij,vj->v", V, R, V) % 4
    return 1j ** q


def _swap_bc(n: int) -> np.ndarray:
    """Permutation matrix exchanging the B and C registers of an ABC system."""
    N = 2**n
    perm = np.arange(N**3).reshape(N, N, N).transpose(0, 2, 1).reshape(-1)
    S = np.zeros((N**3, N**3))
    S[np.arange(N**3), perm] = 1
    return S


# ---------------------------------------------------------------------------
# states


def ghz_state(n: int) -> np.ndarray:
    _guard(3 * n, MAX_QUBITS, "GHZ state")
    N = 2**n
    psi = np.zeros(N**3, dtype=complex)
    z = np.arange(N)
    psi[z * N * N + z * N + z] = 1 / np.sqrt(N)
    return psi


def bell_state(n: int) -> np.ndarray:
    _guard(2 * n, MAX_QUBITS, "Bell state")
    N = 2**n
    psi = np.zeros(N * N, dtype=complex)
    z = np.arange(N)
    psi[z * N + z] = 1 / np.sqrt(N)
    return psi


def _num_qubits(psi: np.ndarray) -> int:
    m = len(psi).bit_length() - 1
    if 2**m != len(psi):
        raise ValueError("state length is not a power of two")
    _guard(m, MAX_QUBITS, "state")
    return m


def apply_pauli(P: PauliOperator, psi: np.ndarray) -> np.ndarray:
    """``P |psi>`` without building the matrix."""
    m = _num_qubits(psi)
    if P.n != m:
        raise ValueError(f"Pauli on {P.n} qubits applied to a {m}-qubit state")
    xm, zm = _index_mask(P.x, m), _index_mask(P.z, m)
    v = np.arange(2**m)
    phase = (P.phase + (P.x & P.z).bit_count() + 2 * _parity(v & zm)) % 4
    out = np.empty_like(psi)
    out[v ^ xm] = (1j ** phase) * psi
    return out


def apply_diag_clifford(R, qubits, psi: np.ndarray) -> np.ndarray:
    """Apply ``U_R`` to the listed qubits of ``psi``."""
    m = _num_qubits(psi)
    qubits = list(qubits)
    R = gf2.as_bits(R).astype(int)
    v = np.arange(2**m)
    V = np.stack([(v >> (m - 1 - q)) & 1 for q in qubits], axis=1)
    q = np.einsum("vi,ij,vj->v", V, R, V) % 4
    return (1j ** q) * psi


def project(P: PauliOperator, psi: np.ndarray, outcome: int = 0) -> np.ndarray:
    """Unnormalized ``(I + (-1)^outcome P) / 2 |psi>``."""
    s = -1 if outcome else 1
    return (psi + s * apply_pauli(P, psi)) / 2


def overlap(psi: np.ndarray, phi: np.ndarray) -> float:
    """``|<psi|phi>|`` after normalizing both vectors."""
    return float(abs(np.vdot(psi / np.linalg.norm(psi), phi / np.linalg.norm(phi))))


def tableau_state(t: StabilizerTableau, seed: int = 0) -> np.ndarray:
    """Normalized state fixed by a full-rank tableau (defined up to global phase)."""
    m = t.n
    _guard(m, MAX_QUBITS, "tableau state")
    if len(t.rows) != m:
        raise ValueError("tableau does not describe a unique state")
    rng = np.random.default_rng(seed)
    starts = [np.eye(1, 2**m, 0, dtype=complex)[0]]
    starts.append(rng.normal(size=2**m) + 1j * rng.normal(size=2**m))
    for psi in starts:
        for g in t.rows:
            psi = project(g, psi)
        norm = np.linalg.norm(psi)
        if norm > 1e-6:
            return psi / norm
    raise RuntimeError("could not project onto the tableau state")


# ---------------------------------------------------------------------------
# identity checks (each returns a maximum deviation)


def check_transpose_sign(a: int, b: int, n: int) -> float:
    E = dense_pauli(PauliOperator(n, a, b))
    s = -1 if (a & b).bit_count() & 1 else 1
    return float(np.max(np.abs(E.T - s * E)))


def _bits(v: int, n: int) -> np.ndarray:
    return np.array([(v >> j) & 1 for j in range(n)], dtype=int)


def check_pauli_product(a: int, b: int, c: int, d: int, n: int) -> float:
    """Product rule with the mod-4 extension of ``E`` (exponents from the bit vectors)."""
    A, Bv, Cv, D = (_bits(v, n) for v in (a, b, c, d))
    lhs = dense_pauli(PauliOperator(n, a, b)) @ dense_pauli(PauliOperator(n, c, d))
    rhs = (1j ** (int(Bv @ Cv - A @ D) % 4)) * dense_pauli_z4(A + Cv, Bv + D)
    return float(np.max(np.abs(lhs - rhs)))


def check_multiply(P: PauliOperator, Q: PauliOperator) -> float:
    """Bit-level product against dense matrix multiplication."""
    return float(np.max(np.abs(dense_pauli(pl.multiply(P, Q)) - dense_pauli(P) @ dense_pauli(Q))))


def check_ghz_identity(M: np.ndarray, n: int) -> float:
    N = 2**n
    psi = ghz_state(n)
    lhs = np.kron(M, np.eye(N * N)) @ psi
    rhs = np.kron(np.eye(N), ghz_map(np.asarray(M).T)) @ psi
    return float(np.linalg.norm(lhs - rhs))


def check_ghz_map_homomorphism(A: np.ndarray, B: np.ndarray, P: np.ndarray) -> float:
    """Multiplicativity on ``(A, B)`` and projector preservation on ``P``."""
    mult = np.max(np.abs(ghz_map(A @ B) - ghz_map(A) @ ghz_map(B)))
    Ph = ghz_map(P)
    proj = np.max(np.abs(Ph @ Ph - Ph))
    return float(max(mult, proj))


def _ihat_product(n: int) -> np.ndarray:
    N = 2**n
    out = np.eye(N * N, dtype=complex)
    for i in range(n):
        zz = PauliOperator(2 * n, 0, (1 << i) | (1 << (n + i)))
        out = out @ (np.eye(N * N) + dense_pauli(zz)) / 2
    return out


def check_induced_bc(a: int, b: int, eps: int, n: int) -> float:
    """Compare the GHZ map of ``E(a, b)`` and of the measured projector with
    the induced BC operators."""
    _guard(n, 3, "GHZ map")
    N = 2**n
    Ihat = ghz_map(np.eye(N))
    ihat_dev = np.max(np.abs(Ihat - _ihat_product(n)))
    E = dense_pauli(PauliOperator(n, a, b))
    Ea0 = dense_pauli(PauliOperator(n, a, 0))
    op_dev = np.max(np.abs(ghz_map(E) - np.kron(E, Ea0) @ Ihat))
    s = -1 if (a & b).bit_count() & 1 else 1
    M = (np.eye(N) + eps * E) / 2
    induced = (np.eye(N * N) + eps * s * np.kron(E, Ea0)) / 2 @ _ihat_product(n)
    proj_dev = np.max(np.abs(ghz_map(M.T) - induced))
    return float(max(ihat_dev, op_dev, proj_dev))


def check_bc_exchange(M: np.ndarray, W: np.ndarray, n: int) -> float:
    _guard(n, 2, "Bob/Charlie exchange check")
    N = 2**n
    I = np.eye(N)
    psi = np.kron(M, np.eye(N * N)) @ ghz_state(n)
    lhs = np.kron(np.kron(I, W), I) @ psi
    rhs = _swap_bc(n) @ np.kron(np.kron(I, I), W) @ psi
    return float(np.linalg.norm(lhs - rhs))


def check_conjugation(a: int, b: int, R, n: int) -> float:
    """Bit-level diagonal Clifford conjugation against ``U_R E U_R^dag``."""
    from .tableau import conjugate_diag

    U = np.diag(diag_clifford(R))
    P = PauliOperator(n, a, b)
    lhs = U @ dense_pauli(P) @ U.conj().T
    rhs = dense_pauli(conjugate_diag(P, gf2.as_bits(R), range(n)))
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# CSS Bell states


@dataclass(frozen=True)
class CssCodePair:
    """CSS code from nested classical codes.

    ``g2`` generates the X-stabilizer code, ``h1`` generates the dual of the
    larger code (Z stabilizers) and ``quotient`` generates the larger code
    modulo the smaller one.
    """

    n: int
    g2: np.ndarray
    h1: np.ndarray
    quotient: np.ndarray

    def __post_init__(self):
        for name in ("g2", "h1", "quotient"):
            object.__setattr__(self, name, gf2.as_bits(getattr(self, name)).reshape(-1, self.n))
        if self.g2.size and self.h1.size and np.any(gf2.matmul(self.g2, self.h1.T)):
            raise ValueError("X-stabilizer code is not contained in the larger code")
        if self.quotient.size and self.h1.size and np.any(gf2.matmul(self.quotient, self.h1.T)):
            raise ValueError("quotient generators lie outside the larger code")

    @property
    def k(self) -> int:
        return self.quotient.shape[0]

    def stabilizers(self) -> list:
        out = [PauliOperator(self.n, _pack(r), 0) for r in self.g2]
        out += [PauliOperator(self.n, 0, _pack(r)) for r in self.h1]
        return out

    def small_code(self) -> list:
        words = {0}
        for r in self.g2:
            v = _pack(r)
            words |= {w ^ v for w in words}
        return sorted(words)


def _pack(row) -> int:
    return sum(int(b) << j for j, b in enumerate(row))


def check_css_bell(pair: CssCodePair) -> float:
    """Projected and renormalized Bell pairs against the encoded logical Bell state."""
    n, k = pair.n, pair.k
    _guard(2 * n, MAX_QUBITS, "CSS Bell check")
    N = 2**n
    gens = pair.stabilizers()
    Pi = code_projector(gens) if gens else np.eye(N, dtype=complex)
    Psi = bell_state(n).reshape(N, N)
    projected = (Pi @ Psi @ Pi.T).reshape(-1) * np.sqrt(2 ** (n - k))

    small = pair.small_code()
    target = np.zeros(N * N, dtype=complex)
    for x in range(2**k):
        word = 0
        for i in range(k):
            if (x >> i) & 1:
                word ^= _pack(pair.quotient[i])
        coset = [_index_mask(word ^ y, n) for y in small]
        amp = 1 / np.sqrt(2**k) / len(small)
        for u in coset:
            for v in coset:
                target[u * N + v] += amp
    return float(np.linalg.norm(projected - target))


def bitflip_state_deviation() -> float:
    """Bit-flip projection followed by inverse encoding on both sides, compared
    with one Bell pair between the first qubits and ancillas in ``|0>``."""
    n = 3
    code = StabilizerCode.from_generators(["ZZI", "IZZ"])
    Pi = code_projector(code)
    N = 2**n
    Psi = bell_state(n).reshape(N, N)
    state = Pi @ Psi @ Pi.T
    # CNOT 1->2 then 1->3 is its own inverse as a product of commuting CNOTs
    U = np.zeros((N, N))
    for v in range(N):
        w = v ^ (0b011 if v & 0b100 else 0)
        U[w, v] = 1
    state = (U @ state @ U.T).reshape(-1)
    target = np.zeros(N * N, dtype=complex)
    target[0] = target[0b100 * N + 0b100] = 1
    return float(np.linalg.norm(state / np.linalg.norm(state) - target / np.linalg.norm(target)))


# ---------------------------------------------------------------------------
# protocol replay


def replay_log(log, start: np.ndarray) -> np.ndarray:
    """Apply a protocol operation log to a dense state, renormalizing after
    each projective measurement."""
    psi = start.astype(complex)
    for entry in log:
        kind = entry[0]
        if kind == "measure":
            _, P, outcome = entry[:3]
            psi = project(P, psi, outcome)
            norm = np.linalg.norm(psi)
            if norm < 1e-9:
                raise RuntimeError(f"outcome {outcome} for {P} has zero probability")
            psi = psi / norm
        elif kind == "pauli":
            psi = apply_pauli(entry[1], psi)
        elif kind == "clifford":
            psi = apply_diag_clifford(entry[1], entry[2], psi)
        else:
            raise ValueError(f"unknown log entry {kind!r}")
    return psi


# ---------------------------------------------------------------------------
# suite


@dataclass
class CheckResult:
    name: str
    cases: int
    deviation: float
    tolerance: float
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.deviation < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.name}: {self.cases} cases, max deviation {self.deviation:.3e} (tol {self.tolerance:.0e})"


def _random_complex(rng, N):
    return rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))


def _random_projector(rng, N):
    Q, _ = np.linalg.qr(_random_complex(rng, N))
    rank = int(rng.integers(1, N + 1))
    V = Q[:, :rank]
    return V @ V.conj().T


def _random_symmetric(rng, n):
    U = np.triu(rng.integers(0, 2, size=(n, n)))
    return (U | U.T).astype(np.uint8)


def _timed(name, tol, body: Callable[[], tuple]) -> CheckResult:
    t0 = time.perf_counter()
    cases, dev = body()
    return CheckResult(name, cases, dev, tol, time.perf_counter() - t0)


def steane_pair() -> CssCodePair:
    H = [[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]]
    return CssCodePair(7, H, H, [[1] * 7])


def bitflip_pair() -> CssCodePair:
    return CssCodePair(3, np.zeros((0, 3)), [[1, 1, 0], [0, 1, 1]], [[1, 1, 1]])


def run_suite(seed: int = 2024, random_n: int = 3) -> list:
    """Run every dense identity check; returns a list of CheckResult."""
    _guard(random_n, MAX_MATRIX_QUBITS, "random Pauli pairs")
    rng = np.random.default_rng(seed)
    out = []

    def pauli_product():
        dev, cases = 0.0, 0
        for a, b, c, d in np.ndindex(2, 2, 2, 2):
            dev = max(dev, check_pauli_product(a, b, c, d, 1))
            P = PauliOperator(1, a, b, 0)
            dev = max(dev, check_multiply(P, PauliOperator(1, c, d, 0)))
            cases += 1
        for _ in range(500):
            n = int(rng.integers(1, random_n + 1))
            a, b, c, d = (int(v) for v in rng.integers(0, 2**n, size=4))
            p1, p2 = (int(v) for v in rng.integers(0, 4, size=2))
            dev = max(dev, check_pauli_product(a, b, c, d, n))
            dev = max(dev, check_multiply(PauliOperator(n, a, b, p1), PauliOperator(n, c, d, p2)))
            cases += 1
        return cases, dev

    def transpose_signs():
        dev, cases = 0.0, 0
        for n in (1, 2, 3):
            for a in range(2**n):
                for b in range(2**n):
                    dev = max(dev, check_transpose_sign(a, b, n))
                    P = PauliOperator(n, a, b)
                    dev = max(dev, float(np.max(np.abs(dense_pauli(pl.transpose(P)) - dense_pauli(P).T))))
                    cases += 1
        return cases, dev

    def ghz_identity():
        dev = 0.0
        for _ in range(20):
            n = int(rng.integers(1, 4))
            dev = max(dev, check_ghz_identity(_random_complex(rng, 2**n), n))
        return 20, dev

    def homomorphism():
        dev = 0.0
        for _ in range(20):
            n = int(rng.integers(1, 4))
            N = 2**n
            dev = max(dev, check_ghz_map_homomorphism(_random_complex(rng, N), _random_complex(rng, N), _random_projector(rng, N)))
        return 20, dev

    def induced_bc():
        dev, cases = 0.0, 0
        for a, b, eps in np.ndindex(2, 2, 2):
            dev = max(dev, check_induced_bc(a, b, 1 - 2 * eps, 1))
            cases += 1
        for _ in range(20):
            a, b = (int(v) for v in rng.integers(0, 4, size=2))
            dev = max(dev, check_induced_bc(a, b, int(rng.choice([-1, 1])), 2))
            cases += 1
        return cases, dev

    def bc_exchange():
        dev = 0.0
        for _ in range(10):
            n = int(rng.integers(1, 3))
            N = 2**n
            dev = max(dev, check_bc_exchange(_random_complex(rng, N), _random_complex(rng, N), n))
        return 10, dev

    def conjugation():
        dev, cases = 0.0, 0
        for n in (1, 2, 3):
            for _ in range(10):
                R = _random_symmetric(rng, n)
                a, b = (int(v) for v in rng.integers(0, 2**n, size=2))
                dev = max(dev, check_conjugation(a, b, R, n))
                cases += 1
        return cases, dev

    out.append(_timed("Pauli product rule (dense)", 1e-10, pauli_product))
    out.append(_timed("transpose signs", 1e-10, transpose_signs))
    out.append(_timed("GHZ matrix identity", 1e-10, ghz_identity))
    out.append(_timed("GHZ map homomorphism", 1e-10, homomorphism))
    out.append(_timed("induced BC operators", 1e-10, induced_bc))
    out.append(_timed("Bob/Charlie exchange", 1e-10, bc_exchange))
    out.append(_timed("diagonal Clifford conjugation", 1e-10, conjugation))
    out.append(_timed("bit-flip logical Bell pair", 1e-10,
                      lambda: (1, max(check_css_bell(bitflip_pair()), bitflip_state_deviation()))))
    out.append(_timed("Steane logical Bell pair", 1e-9, lambda: (1, check_css_bell(steane_pair()))))
    return out
