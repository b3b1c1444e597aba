"""Monte Carlo engines for Bell and GHZ distillation.

Two engines share one error model:

``tableau``
    Exact simulation.  Every trial evolves a signed tableau next to an
    error-free reference tableau that consumes the same measurement outcome
    bits; a trial succeeds when every final sign agrees with the reference.

``frame``
    Pauli-frame propagation of the difference between the trial and the
    reference, vectorized over blocks of trials with packed ``uint64`` masks.
    Its schedule (which measurements are random, which rows they replace) is
    extracted once from a reference tableau run.

Qubits are ordered A (``0..n-1``), B (``n..2n-1``), C (``2n..3n-1``).
Randomness comes from counter-based streams keyed by ``(seed, block)`` with
fixed-size blocks, so a report never depends on how blocks are scheduled.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import decoder as dec
from .diagclifford import SymmetricBinaryMatrix, clifford_for
from .induce import Placement, Topology, bell_partner, charlie_code, ghz_bc_code
from .pauli import PauliOperator
from .stabcode import StabilizerCode
from .tableau import StabilizerTableau, new_bell, new_ghz

__all__ = [
    "Protocol",
    "ChannelModel",
    "ProtocolConfig",
    "ProtocolError",
    "Prepared",
    "TrialResult",
    "DistillationReport",
    "GhzDiagonalState",
    "prepare",
    "run_ghz_trial",
    "run_bell_trial",
    "estimate",
    "qec_baseline",
    "output_state",
    "block_streams",
    "trial_flags",
    "baseline_flags",
    "BLOCK_SIZE",
    "WORKERS_ENV",
]

BLOCK_SIZE = 4096
WORKERS_ENV = "GHZ_DISTILL_WORKERS"
_MASK64 = (1 << 64) - 1


class Protocol(str, Enum):
    GHZ = "ghz"
    BELL = "bell"


class ProtocolError(RuntimeError):
    """An internal consistency check failed during a trial."""


# ---------------------------------------------------------------------------
# channel


@dataclass(frozen=True)
class ChannelModel:
    """Independent single-qubit Pauli channel with probabilities ``(px, py, pz)``."""

    px: float
    py: float
    pz: float

    def __post_init__(self):
        for v in (self.px, self.py, self.pz):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"probabilities must lie in [0, 1], got {v}")
        if self.px + self.py + self.pz > 1.0 + 1e-12:
            raise ValueError("channel probabilities sum to more than 1")

    @classmethod
    def depolarizing(cls, p: float) -> "ChannelModel":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        return cls(p / 3, p / 3, p / 3)

    @property
    def p(self) -> float:
        return self.px + self.py + self.pz

    def masks(self, u: np.ndarray, offset: int = 0):
        """Packed error masks from a ``(trials, qubits)`` array of uniforms."""
        u = np.atleast_2d(u)
        t1, t2, t3 = self.px, self.px + self.py, self.px + self.py + self.pz
        x = np.zeros(u.shape[0], dtype=np.uint64)
        z = np.zeros(u.shape[0], dtype=np.uint64)
        for j in range(u.shape[1]):
            col = u[:, j]
            xb = col < t2
            zb = (col >= t1) & (col < t3)
            shift = np.uint64(offset + j)
            x |= xb.astype(np.uint64) << shift
            z |= zb.astype(np.uint64) << shift
        return x, z

    def pauli(self, u_row, total: int, offset: int) -> PauliOperator:
        x, z = self.masks(np.asarray(u_row, dtype=float)[None, :], offset)
        return PauliOperator(total, int(x[0]), int(z[0]))


def block_streams(seed: int, block: int):
    """(error stream, outcome stream) for one block of trials."""
    key = int(seed) & _MASK64
    gens = []
    for stream in (0, 1):
        ss = np.random.SeedSequence(entropy=key, spawn_key=(int(block), stream))
        gens.append(np.random.Generator(np.random.Philox(ss)))
    return gens[0], gens[1]


# ---------------------------------------------------------------------------
# configuration and setup


@dataclass(frozen=True)
class ProtocolConfig:
    code: StabilizerCode
    protocol: Protocol = Protocol.GHZ
    placement: Placement = Placement.BOB_APPLIES
    topology: Topology = Topology.CHAIN
    channel: ChannelModel = field(default_factory=lambda: ChannelModel.depolarizing(0.0))
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol(self.protocol))
        object.__setattr__(self, "placement", Placement(self.placement))
        object.__setattr__(self, "topology", Topology(self.topology))
        if self.protocol is Protocol.BELL and self.topology is Topology.SPLIT:
            raise ValueError("the split topology only applies to the GHZ protocol")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.code.k < 1:
            raise ValueError("the code must encode at least one qubit")
        if 3 * self.code.n > 64:
            raise ValueError("codes on more than 21 qubits are not supported")


def _global(P: PauliOperator, total: int, start: int) -> PauliOperator:
    return P.embed(total, range(start, start + P.n))


@dataclass
class _Schedule:
    """Unsigned data for the frame engine, read off a reference run."""

    bob_meas: list  # (P, D) pairs for Bob's random B measurements (chain)
    stage_rows: tuple  # reference rows when the first correction is done
    final_rows: tuple


class Prepared:
    """Everything a trial needs that does not depend on randomness."""

    def __init__(self, code: StabilizerCode, protocol=Protocol.GHZ,
                 placement=Placement.BOB_APPLIES, topology=Topology.CHAIN):
        self.code = code
        self.protocol = Protocol(protocol)
        self.placement = Placement(placement)
        self.topology = Topology(topology)
        self.n = n = code.n
        self.gens = code.standard.generators
        self.logicals = code.logicals
        self.R: Optional[SymmetricBinaryMatrix] = None
        if self.protocol is Protocol.GHZ and self.placement is not Placement.NO_CLIFFORD:
            self.R = clifford_for(code)
        ones = [1] * len(self.gens)
        self.code_table = dec.build_table(self.gens, strict=False)
        if self.protocol is Protocol.BELL:
            self.total = 2 * n
            self.error_width = n
        else:
            self.total = 3 * n
            if self.topology is Topology.CHAIN:
                self.bc_gens = ghz_bc_code(code, ones, self.placement, self.R).generators
                self.bc_table = dec.build_table(self.bc_gens, strict=False)
                self.error_width = 3 * n
            else:
                self.error_width = 2 * n
            self.charlie_gens = charlie_code(code, ones, ones, self.placement, self.R).generators
            self.charlie_table = dec.build_table(self.charlie_gens, strict=False)
        self._schedule = None

    @property
    def A(self):
        return range(0, self.n)

    @property
    def B(self):
        return range(self.n, 2 * self.n)

    @property
    def C(self):
        return range(2 * self.n, 3 * self.n)

    def on(self, P: PauliOperator, start: int) -> PauliOperator:
        return _global(P, self.total, start)

    @property
    def schedule(self) -> _Schedule:
        if self._schedule is None:
            self._schedule = _reference_schedule(self)
        return self._schedule


@lru_cache(maxsize=32)
def _prepared_cached(gens: tuple, name: str, protocol, placement, topology) -> Prepared:
    code = StabilizerCode(gens, name)
    return Prepared(code, protocol, placement, topology)


def prepare(config: ProtocolConfig) -> Prepared:
    return _prepared_cached(
        config.code.generators, config.code.name, config.protocol, config.placement, config.topology
    )


# ---------------------------------------------------------------------------
# exact tableau engine


@dataclass
class TrialResult:
    success: bool
    stage_ok: bool  # signs agreed right after the first correction
    eps_a: list = field(default_factory=list)
    eps_b: list = field(default_factory=list)
    syndromes: list = field(default_factory=list)
    corrections: list = field(default_factory=list)
    decode_miss: bool = False
    trial: Optional[StabilizerTableau] = None
    reference: Optional[StabilizerTableau] = None
    log: Optional[list] = None  # operation log for dense replay


def _bit_source(outcomes, rng) -> Callable[[], int]:
    if outcomes is None:
        if rng is None:
            rng = np.random.default_rng()
        return lambda: int(rng.integers(2))
    if callable(outcomes):
        return outcomes
    it = iter(outcomes)
    return lambda: int(next(it))


class _Run:
    """A trial tableau and its error-free reference, stepped in lockstep."""

    def __init__(self, t: StabilizerTableau, bits, log: Optional[list], check: bool):
        self.t = t
        self.ref = t.copy()
        self.bits = bits
        self.log = log
        self.check = check
        self.snapshots = {}

    def shared_measure(self, P: PauliOperator, tag: str):
        o = self.bits()
        r_ref = self.ref.measure(P, outcome=o)
        r_t = self.t.measure(P, outcome=o)
        if r_ref.deterministic != r_t.deterministic or r_ref.row != r_t.row:
            raise ProtocolError(f"trial and reference diverged structurally measuring {P}")
        if self.log is not None:
            self.log.append(("measure", P, r_t.outcome, tag, r_ref))
        self._verify()
        return r_t

    def syndrome_measure(self, P: PauliOperator, tag: str) -> int:
        r_ref = self.ref.measure(P, outcome=0)
        if not r_ref.deterministic or r_ref.outcome != 0:
            raise ProtocolError(f"expected stabilizer {P} is not in the reference group")
        r_t = self.t.measure(P, outcome=0)
        if not r_t.deterministic:
            raise ProtocolError(f"stabilizer {P} is random on the trial tableau")
        if self.log is not None:
            self.log.append(("measure", P, r_t.outcome, tag, r_ref))
        return r_t.outcome

    def pauli(self, E: PauliOperator, tag: str, reference: bool = False):
        self.t.apply_error(E)
        if reference:
            self.ref.apply_error(E)
        if self.log is not None:
            self.log.append(("pauli", E, tag))

    def clifford(self, R, qubits, tag: str):
        self.t.apply_diag_clifford(R, qubits)
        self.ref.apply_diag_clifford(R, qubits)
        if self.log is not None:
            self.log.append(("clifford", R, tuple(qubits), tag))
        self._verify()

    def agree(self) -> bool:
        return self.t.signs == self.ref.signs

    def _verify(self):
        if self.check:
            self.t.check_invariants()
            self.ref.check_invariants()
            if self.t.unsigned() != self.ref.unsigned():
                raise ProtocolError("trial and reference row spaces differ")


def _decode_and_fix(run: _Run, table, generators, start, prep, tag, result):
    """Measure ``generators`` (placed at ``start``), decode, apply the correction."""
    s = 0
    for i, g in enumerate(generators):
        s |= run.syndrome_measure(prep.on(g, start), tag) << i
    result.syndromes.append(s)
    try:
        leader = table.leader(s)
    except dec.DecodeMiss:
        result.decode_miss = True
        return False
    corr = prep.on(leader, start)
    result.corrections.append(corr)
    if not corr.is_identity():
        run.pauli(corr, f"{tag}-correction")
    return True


def _stage_widths(prep: Prepared):
    n = prep.n
    if prep.protocol is Protocol.BELL:
        return ((n, n),)
    if prep.topology is Topology.CHAIN:
        return ((2 * n, n), (n, 2 * n))
    return ((n, n), (n, 2 * n))


def _errors_from(prep: Prepared, channel: ChannelModel, u_row, errors):
    """Stage errors as global Paulis, either scripted or drawn from ``u_row``.

    Each stage is a (width, first global qubit) pair: BC then C for the
    chain, B then C for the split topology, B alone for Bell pairs.
    """
    out = []
    col = 0
    for i, (width, start) in enumerate(_stage_widths(prep)):
        if errors is not None:
            E = errors[i] if i < len(errors) and errors[i] is not None else PauliOperator.identity(width)
            if E.n != width:
                raise ValueError(f"stage {i} error acts on {E.n} qubits, expected {width}")
            out.append(_global(E, prep.total, start))
        else:
            out.append(channel.pauli(np.asarray(u_row, dtype=float)[col: col + width], prep.total, start))
        col += width
    return out + [None] * (2 - len(out))


def run_ghz_trial(prep: Prepared, channel: Optional[ChannelModel] = None, rng=None,
                  errors=None, u_row=None, outcomes=None, record: bool = False,
                  check: bool = False, keep: bool = False) -> TrialResult:
    """One GHZ distillation trial on the exact tableau engine.

    Errors come from ``errors`` (a pair of stage Paulis: BC then C for the
    chain, B then C for the split topology), else from the uniforms
    ``u_row``, else from ``rng``.  Measurement outcomes come from
    ``outcomes`` (iterable of bits or a callable) or ``rng``.
    """
    if prep.protocol is not Protocol.GHZ:
        raise ValueError("prepared setup is not for the GHZ protocol")
    n, code = prep.n, prep.code
    if errors is None:
        if channel is None:
            raise ValueError("need a channel, scripted errors or uniforms")
        if u_row is None:
            if rng is None:
                rng = np.random.default_rng()
            u_row = rng.random(prep.error_width)
    e1, e2 = _errors_from(prep, channel, u_row, errors)
    bits = _bit_source(outcomes, rng)
    run = _Run(new_ghz(n), bits, [] if record else None, check)
    res = TrialResult(False, False)

    # Alice measures her generators on A
    for g in prep.gens:
        m = run.shared_measure(prep.on(g, 0), "alice-A").outcome
        res.eps_a.append(g.sign * (-1 if m else 1))

    split = prep.topology is Topology.SPLIT
    if split:
        for g in prep.gens:
            if g.x == 0:
                res.eps_b.append(1)
                continue
            m = run.shared_measure(prep.on(g, n), "alice-B").outcome
            res.eps_b.append(g.sign * (-1 if m else 1))
        if prep.R is not None:
            run.clifford(prep.R.matrix, prep.C, "source-clifford")
        # Bob's stage: error on B, decode with his copy of the code
        run.pauli(e1, "channel-B")
        bob_gens = [
            g.with_sign(ea if g.x == 0 else eb) for g, ea, eb in zip(prep.gens, res.eps_a, res.eps_b)
        ]
        ok = _decode_and_fix(run, prep.code_table, bob_gens, n, prep, "bob", res)
    else:
        if prep.placement is Placement.ALICE_APPLIES:
            run.clifford(prep.R.matrix, prep.C, "alice-clifford")
        run.pauli(e1, "channel-BC")
        bc = ghz_bc_code(code, res.eps_a, prep.placement, prep.R)
        ok = _decode_and_fix(run, prep.bc_table, bc.generators, n, prep, "bob-BC", res)
    res.stage_ok = ok and run.agree()
    if not ok:
        return _finish(run, res, keep)

    if not split:
        for g in prep.gens:
            if g.x == 0:
                res.eps_b.append(1)
                continue
            m = run.shared_measure(prep.on(g, n), "bob-B").outcome
            res.eps_b.append(g.sign * (-1 if m else 1))
        if prep.placement is Placement.BOB_APPLIES:
            run.clifford(prep.R.matrix, prep.C, "bob-clifford")

    run.pauli(e2, "channel-C")
    ccode = charlie_code(code, res.eps_a, res.eps_b, prep.placement, prep.R)
    ok = _decode_and_fix(run, prep.charlie_table, ccode.generators, 2 * n, prep, "charlie", res)
    if ok:
        res.success = run.agree()
    return _finish(run, res, keep)


def _finish(run: _Run, res: TrialResult, keep: bool) -> TrialResult:
    res.log = run.log
    if keep or run.log is not None:
        res.trial, res.reference = run.t, run.ref
    return res


def run_bell_trial(prep: Prepared, channel: Optional[ChannelModel] = None, rng=None,
                   errors=None, u_row=None, outcomes=None, record: bool = False,
                   check: bool = False, keep: bool = False) -> TrialResult:
    """One Bell distillation trial; ``errors`` is a one-element tuple (error on B)."""
    if prep.protocol is not Protocol.BELL:
        raise ValueError("prepared setup is not for the Bell protocol")
    n = prep.n
    if errors is None and u_row is None:
        if channel is None:
            raise ValueError("need a channel, scripted errors or uniforms")
        if rng is None:
            rng = np.random.default_rng()
        u_row = rng.random(prep.error_width)
    e1, _ = _errors_from(prep, channel, u_row, errors)
    run = _Run(new_bell(n), _bit_source(outcomes, rng), [] if record else None, check)
    res = TrialResult(False, False)
    ms = []
    for g in prep.gens:
        m = run.shared_measure(prep.on(g, 0), "alice-A").outcome
        ms.append(m)
        res.eps_a.append(g.sign * (-1 if m else 1))
    run.pauli(e1, "channel-B")
    partner = bell_partner(prep.code, ms)
    ok = _decode_and_fix(run, prep.code_table, partner.generators, n, prep, "bob", res)
    res.success = res.stage_ok = ok and run.agree()
    return _finish(run, res, keep)


# ---------------------------------------------------------------------------
# frame engine


def _reference_schedule(prep: Prepared) -> _Schedule:
    zero = lambda: 0  # noqa: E731
    if prep.protocol is Protocol.BELL:
        res = run_bell_trial(prep, errors=(), outcomes=zero, keep=True)
        rows = tuple(res.reference.rows)
        return _Schedule([], rows, rows)
    res = run_ghz_trial(prep, errors=(), outcomes=zero, record=True)
    bob = []
    stage = new_ghz(prep.n)
    stage_rows = None
    for entry in res.log:
        if entry[0] == "measure":
            _, P, _, tag, r_ref = entry
            if stage_rows is None and tag in ("bob-B", "charlie"):
                stage_rows = tuple(stage.rows)
            if tag == "bob-B" and not r_ref.deterministic:
                bob.append((P, r_ref.previous))
            stage.measure(P, outcome=0)
        elif entry[0] == "clifford":
            if stage_rows is None and entry[3] == "bob-clifford":
                stage_rows = tuple(stage.rows)
            stage.apply_diag_clifford(entry[1], entry[2])
    if stage.unsigned() != res.reference.unsigned():
        raise ProtocolError("schedule replay does not reproduce the reference run")
    return _Schedule(bob, stage_rows, tuple(res.reference.rows))


def _parity(v: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(v) & np.uint8(1)).astype(np.uint64)


def _anti(fx, fz, P: PauliOperator) -> np.ndarray:
    return _parity((fx & np.uint64(P.z)) ^ (fz & np.uint64(P.x)))


def _syndromes(fx, fz, gens, start: int) -> np.ndarray:
    s = np.zeros(fx.shape[0], dtype=np.uint64)
    for i, g in enumerate(gens):
        s |= _anti(fx, fz, g.embed(64, range(start, start + g.n))) << np.uint64(i)
    return s


def _commutes_all(fx, fz, rows) -> np.ndarray:
    bad = np.zeros(fx.shape[0], dtype=np.uint64)
    for r in rows:
        bad |= _anti(fx, fz, r)
    return bad == 0


def _correct(fx, fz, table, s, start: int):
    lx, lz, present = _table_arrays(table)
    idx = s.astype(np.int64)
    shift = np.uint64(start)
    return fx ^ (lx[idx] << shift), fz ^ (lz[idx] << shift), present[idx]


_ARRAY_CACHE = {}


def _table_arrays(table):
    key = id(table)
    hit = _ARRAY_CACHE.get(key)
    if hit is None or hit[0] is not table:
        hit = (table, table.arrays())
        _ARRAY_CACHE[key] = hit
    return hit[1]


def _clifford_frame(fx, fz, R, start: int):
    """``z_C ^= x_C R`` on the frame (sign bookkeeping is irrelevant here)."""
    R = np.asarray(R)
    n = R.shape[0]
    for i in range(n):
        word = 0
        for j in range(n):
            if R[i, j]:
                word |= 1 << (start + j)
        if word:
            bit = (fx >> np.uint64(start + i)) & np.uint64(1)
            fz = fz ^ (bit * np.uint64(word))
    return fz


def _frame_block(prep: Prepared, channel: ChannelModel, u: np.ndarray):
    """Success flags and first-stage flags for a block of uniforms."""
    n = prep.n
    if prep.protocol is Protocol.BELL:
        fx, fz = channel.masks(u[:, :n], n)
        s = _syndromes(fx, fz, prep.gens, n)
        fx, fz, present = _correct(fx, fz, prep.code_table, s, n)
        ok = present & _commutes_all(fx, fz, prep.schedule.final_rows)
        return ok, ok
    sched = prep.schedule
    if prep.topology is Topology.CHAIN:
        fx, fz = channel.masks(u[:, : 2 * n], n)
        s = _syndromes(fx, fz, prep.bc_gens, n)
        fx, fz, present = _correct(fx, fz, prep.bc_table, s, n)
        stage_ok = present & _commutes_all(fx, fz, sched.stage_rows)
        for P, D in sched.bob_meas:
            flip = _anti(fx, fz, P)
            fx = fx ^ (flip * np.uint64(D.x))
            fz = fz ^ (flip * np.uint64(D.z))
        if prep.placement is Placement.BOB_APPLIES:
            fz = _clifford_frame(fx, fz, prep.R.matrix, 2 * n)
        cx, cz = channel.masks(u[:, 2 * n: 3 * n], 2 * n)
    else:
        fx, fz = channel.masks(u[:, :n], n)
        s = _syndromes(fx, fz, prep.gens, n)
        fx, fz, present = _correct(fx, fz, prep.code_table, s, n)
        stage_ok = present & _commutes_all(fx, fz, sched.stage_rows)
        cx, cz = channel.masks(u[:, n: 2 * n], 2 * n)
    fx, fz = fx ^ cx, fz ^ cz
    s = _syndromes(fx, fz, prep.charlie_gens, 2 * n)
    fx, fz, present2 = _correct(fx, fz, prep.charlie_table, s, 2 * n)
    ok = present & present2 & _commutes_all(fx, fz, sched.final_rows)
    return ok, stage_ok


# ---------------------------------------------------------------------------
# estimation


@dataclass(frozen=True)
class DistillationReport:
    protocol: str
    code: str
    placement: str
    topology: str
    p: float
    trials: int
    failures: int
    stage_failures: dict
    seed: int
    k: int = 1

    @property
    def p_f(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        q = self.p_f
        return math.sqrt(q * (1 - q) / self.trials)

    @property
    def fidelity(self) -> float:
        return 1.0 - self.p_f

    def interval(self, sigmas: float = 3.0):
        return self.p_f - sigmas * self.stderr, self.p_f + sigmas * self.stderr


def _block_counts(config: ProtocolConfig, block: int, engine: str):
    prep = prepare(config)
    start = block * BLOCK_SIZE
    size = min(BLOCK_SIZE, config.trials - start)
    err_rng, out_rng = block_streams(config.seed, block)
    u = err_rng.random((size, prep.error_width))
    if engine == "frame":
        ok, stage_ok = _frame_block(prep, config.channel, u)
        fails = int(np.count_nonzero(~ok))
        first = int(np.count_nonzero(~ok & ~stage_ok))
        return fails, first
    if engine != "tableau":
        raise ValueError(f"unknown engine {engine!r}")
    runner = run_bell_trial if prep.protocol is Protocol.BELL else run_ghz_trial
    fails = first = 0
    for i in range(size):
        r = runner(prep, config.channel, rng=out_rng, u_row=u[i])
        if not r.success:
            fails += 1
            first += not r.stage_ok
    return fails, first


def trial_flags(config: ProtocolConfig, engine: str = "frame", block: int = 0) -> np.ndarray:
    """Per-trial success flags of one block (used for engine cross-checks)."""
    prep = prepare(config)
    start = block * BLOCK_SIZE
    size = min(BLOCK_SIZE, config.trials - start)
    err_rng, out_rng = block_streams(config.seed, block)
    u = err_rng.random((size, prep.error_width))
    if engine == "frame":
        return _frame_block(prep, config.channel, u)[0]
    runner = run_bell_trial if prep.protocol is Protocol.BELL else run_ghz_trial
    return np.array([runner(prep, config.channel, rng=out_rng, u_row=u[i]).success for i in range(size)])


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def estimate(config: ProtocolConfig, engine: str = "frame", workers: Optional[int] = None) -> DistillationReport:
    """Failure-rate estimate; identical for any ``workers`` value."""
    workers = default_workers() if workers is None else max(1, int(workers))
    blocks = range((config.trials + BLOCK_SIZE - 1) // BLOCK_SIZE)
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_block_counts, [config] * len(blocks), blocks, [engine] * len(blocks)))
    else:
        counts = [_block_counts(config, b, engine) for b in blocks]
    failures = sum(c[0] for c in counts)
    first = sum(c[1] for c in counts)
    if config.protocol is Protocol.BELL:
        stages = {"bob": failures}
    else:
        stages = {"first": first, "charlie": failures - first}
    return DistillationReport(
        protocol=config.protocol.value,
        code=config.code.name or "custom",
        placement=config.placement.value if config.protocol is Protocol.GHZ else "none",
        topology=config.topology.value,
        p=config.channel.p,
        trials=config.trials,
        failures=failures,
        stage_failures=stages,
        seed=config.seed,
        k=config.code.k,
    )


def baseline_flags(code: StabilizerCode, channel: ChannelModel, u: np.ndarray, table=None) -> np.ndarray:
    """Success flags of plain syndrome decoding on ``n`` qubits."""
    gens = code.standard.generators
    table = table or dec.build_table(gens)
    fx, fz = channel.masks(u, 0)
    s = _syndromes(fx, fz, gens, 0)
    fx, fz, present = _correct(fx, fz, table, s, 0)
    L = code.logicals
    return present & _commutes_all(fx, fz, list(L.zbar) + list(L.xbar))


def qec_baseline(code: StabilizerCode, channel: ChannelModel, trials: int, seed: int = 0) -> DistillationReport:
    table = dec.build_table(code.standard.generators)
    failures = 0
    for block in range((trials + BLOCK_SIZE - 1) // BLOCK_SIZE):
        size = min(BLOCK_SIZE, trials - block * BLOCK_SIZE)
        err_rng, _ = block_streams(seed, block)
        u = err_rng.random((size, code.n))
        failures += int(np.count_nonzero(~baseline_flags(code, channel, u, table)))
    return DistillationReport(
        protocol="baseline",
        code=code.name or "custom",
        placement="none",
        topology="none",
        p=channel.p,
        trials=trials,
        failures=failures,
        stage_failures={"decode": failures},
        seed=seed,
        k=code.k,
    )


def residual_in_group(code: StabilizerCode, residual: PauliOperator) -> bool:
    """True when a zero-syndrome residual acts trivially (exact membership test)."""
    return code.in_group(residual.unsigned()) is not None


# ---------------------------------------------------------------------------
# output state


@dataclass(frozen=True)
class GhzDiagonalState:
    """GHZ-diagonal output: weight ``fidelity`` on index 0, ``tail`` on each other index."""

    k: int
    fidelity: object
    tail: object
    size: int
    entries: Optional[tuple]  # (index, weight) pairs, None when too large to list

    def weight(self, index: int):
        if not 0 <= index < self.size:
            raise IndexError(index)
        return self.fidelity if index == 0 else self.tail


def output_state(p_f, k: int, max_k: int = 4) -> GhzDiagonalState:
    """Failure mass spread evenly over the ``8^k - 1`` non-ideal GHZ-diagonal terms.

    Exact rationals are used when ``p_f`` is a ``Fraction`` or an ``int``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    exact = isinstance(p_f, (Fraction, int))
    q = Fraction(p_f) if exact else float(p_f)
    if not 0 <= q <= 1:
        raise ValueError(f"p_f must lie in [0, 1], got {p_f}")
    size = 8**k
    head = 1 - q
    tail = q / (size - 1)
    entries = None
    if k <= max_k:
        entries = tuple([(0, head)] + [(i, tail) for i in range(1, size)])
    return GhzDiagonalState(k, head, tail, size, entries)
