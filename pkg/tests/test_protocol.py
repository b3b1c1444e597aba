import numpy as np
import pytest
from fractions import Fraction

from ghzdistill import denseoracle as dense
from ghzdistill.decoder import build_table, enumerate_paulis
from ghzdistill.induce import Placement, Topology
from ghzdistill.pauli import PauliOperator, multiply, parse
from ghzdistill.protocol import (
    BLOCK_SIZE,
    WORKERS_ENV,
    ChannelModel,
    Prepared,
    ProtocolConfig,
    block_streams,
    default_workers,
    estimate,
    output_state,
    qec_baseline,
    residual_in_group,
    run_bell_trial,
    run_ghz_trial,
    trial_flags,
)
from ghzdistill.stabcode import BUILTIN_CODES, StabilizerCode

GHZ_VARIANTS = [(pl, Topology.CHAIN) for pl in Placement] + [
    (Placement.BOB_APPLIES, Topology.SPLIT),
    (Placement.NO_CLIFFORD, Topology.SPLIT),
]


def single(n, q, letter):
    x = 1 << q if letter in "XY" else 0
    z = 1 << q if letter in "YZ" else 0
    return PauliOperator(n, x, z)


class TestChannel:
    def test_depolarizing(self):
        ch = ChannelModel.depolarizing(0.3)
        assert ch.px == ch.py == ch.pz == pytest.approx(0.1)
        assert ch.p == pytest.approx(0.3)

    @pytest.mark.parametrize("args", [(-0.1, 0, 0), (0.5, 0.5, 0.5), (1.2, 0, 0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            ChannelModel(*args)

    def test_masks(self):
        ch = ChannelModel(0.25, 0.25, 0.25)
        x, z = ch.masks(np.array([[0.1, 0.3, 0.6, 0.9]]))
        assert int(x[0]) == 0b0011 and int(z[0]) == 0b0110
        assert str(ch.pauli([0.1, 0.3, 0.6, 0.9], 4, 0)) == "+XYZI"

    def test_rates(self, rng):
        ch = ChannelModel(0.1, 0.2, 0.3)
        x, z = ch.masks(rng.random((200_000, 1)))
        x, z = x.astype(bool), z.astype(bool)
        assert np.mean(x & ~z) == pytest.approx(0.1, abs=0.005)
        assert np.mean(x & z) == pytest.approx(0.2, abs=0.005)
        assert np.mean(~x & z) == pytest.approx(0.3, abs=0.005)


class TestConfig:
    def test_split_bell_rejected(self):
        with pytest.raises(ValueError):
            ProtocolConfig(BUILTIN_CODES["yy3"](), "bell", topology="split")

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            ProtocolConfig(BUILTIN_CODES["yy3"](), trials=0)

    def test_no_logicals(self):
        with pytest.raises(ValueError):
            ProtocolConfig(StabilizerCode.from_generators(["XX", "ZZ"]))

    def test_strings_coerced(self):
        cfg = ProtocolConfig(BUILTIN_CODES["yy3"](), "ghz", "alice", "chain")
        assert cfg.placement is Placement.ALICE_APPLIES


class TestStreams:
    def test_reproducible(self):
        a1, b1 = block_streams(7, 3)
        a2, b2 = block_streams(7, 3)
        assert np.array_equal(a1.random(10), a2.random(10))
        assert np.array_equal(b1.integers(2, size=10), b2.integers(2, size=10))

    def test_distinct_blocks(self):
        assert not np.array_equal(block_streams(7, 0)[0].random(10), block_streams(7, 1)[0].random(10))
        assert not np.array_equal(block_streams(7, 0)[0].random(10), block_streams(7, 0)[1].random(10))

    def test_workers_env(self, monkeypatch):
        monkeypatch.setenv(WORKERS_ENV, "3")
        assert default_workers() == 3
        monkeypatch.setenv(WORKERS_ENV, "lots")
        with pytest.raises(ValueError):
            default_workers()
        monkeypatch.delenv(WORKERS_ENV)
        assert default_workers() == 1


class TestGhzTrial:
    @pytest.mark.parametrize("placement,topology", GHZ_VARIANTS)
    def test_noiseless(self, builtin_code, placement, topology, rng):
        if builtin_code.name == "steane" and topology is Topology.CHAIN:
            pytest.skip("Steane chain tables are large; covered by the frame engine")
        prep = Prepared(builtin_code, "ghz", placement, topology)
        for _ in range(5):
            res = run_ghz_trial(prep, ChannelModel.depolarizing(0.0), rng=rng, check=True, keep=True)
            assert res.success
            assert res.trial.signs == res.reference.signs

    def test_five_qubit_bob_single_b_error(self):
        code = BUILTIN_CODES["five_qubit"]()
        prep = Prepared(code, "ghz", "bob", "chain")
        err = single(10, 2, "X")
        res = run_ghz_trial(prep, errors=(err, None), outcomes=lambda: 0, check=True)
        assert res.success

    def test_five_qubit_bob_all_single_errors(self):
        code = BUILTIN_CODES["five_qubit"]()
        prep = Prepared(code, "ghz", "bob", "chain")
        for q in range(10):
            for letter in "XYZ":
                res = run_ghz_trial(prep, errors=(single(10, q, letter), None), outcomes=lambda: 1)
                assert res.success, (q, letter)
        for q in range(5):
            for letter in "XYZ":
                res = run_ghz_trial(prep, errors=(None, single(5, q, letter)), outcomes=lambda: 0)
                assert res.success, (q, letter)

    def test_alice_miscorrection(self):
        code = BUILTIN_CODES["five_qubit"]()
        prep = Prepared(code, "ghz", "alice", "chain")
        err = single(10, 5, "X")  # X on C_1
        res = run_ghz_trial(prep, errors=(err, None), outcomes=lambda: 0, keep=True)
        assert not res.success
        assert str(res.corrections[0]) == str(single(15, 5, "X"))  # X on B_1

    def test_coupling_soundness(self, rng):
        code = BUILTIN_CODES["five_qubit"]()
        for placement, topology in GHZ_VARIANTS:
            prep = Prepared(code, "ghz", placement, topology)
            for _ in range(10):
                res = run_ghz_trial(prep, ChannelModel.depolarizing(0.2), rng=rng, check=True, keep=True)
                assert res.trial.unsigned() == res.reference.unsigned()

    def test_decode_miss_counts_as_failure(self):
        code = BUILTIN_CODES["yy3"]()
        prep = Prepared(code, "ghz", "bob", "chain")
        prep.bc_table = build_table(prep.bc_gens, max_weight=0)
        res = run_ghz_trial(prep, errors=(single(6, 0, "X"), None), outcomes=lambda: 0)
        assert res.decode_miss and not res.success

    def test_wrong_protocol(self):
        prep = Prepared(BUILTIN_CODES["yy3"](), "bell")
        with pytest.raises(ValueError):
            run_ghz_trial(prep, ChannelModel.depolarizing(0.0))


class TestDenseCrossCheck:
    @pytest.mark.parametrize("placement", list(Placement))
    def test_yy3_chain(self, placement, rng):
        code = BUILTIN_CODES["yy3"]()
        prep = Prepared(code, "ghz", placement, "chain")
        for _ in range(3):
            bits = iter(rng.integers(0, 2, size=50).tolist())
            res = run_ghz_trial(prep, ChannelModel.depolarizing(0.3), rng=rng,
                                outcomes=lambda: next(bits), record=True)
            psi = dense.replay_log(res.log, dense.ghz_state(3))
            assert dense.overlap(psi, dense.tableau_state(res.trial)) > 1 - 1e-9

    def test_yy3_split(self, rng):
        prep = Prepared(BUILTIN_CODES["yy3"](), "ghz", "bob", "split")
        res = run_ghz_trial(prep, errors=(single(3, 1, "Y"), single(3, 2, "Z")), outcomes=lambda: 1, record=True)
        psi = dense.replay_log(res.log, dense.ghz_state(3))
        assert dense.overlap(psi, dense.tableau_state(res.trial)) > 1 - 1e-9


class TestBellTrial:
    def test_single_errors(self):
        code = BUILTIN_CODES["five_qubit"]()
        prep = Prepared(code, "bell")
        for x, z in enumerate_paulis(5, 1):
            res = run_bell_trial(prep, errors=(PauliOperator(5, x, z),), outcomes=lambda: 0, check=True)
            assert res.success

    def test_logical_error_fails(self):
        code = BUILTIN_CODES["five_qubit"]()
        prep = Prepared(code, "bell")
        xbar = code.logicals.xbar[0].unsigned()
        res = run_bell_trial(prep, errors=(xbar,), outcomes=lambda: 0, keep=True)
        assert res.syndromes == [0]
        assert not res.success

    def test_dense(self, rng):
        prep = Prepared(BUILTIN_CODES["five_qubit"](), "bell")
        res = run_bell_trial(prep, ChannelModel.depolarizing(0.2), rng=rng, record=True)
        psi = dense.replay_log(res.log, dense.bell_state(5))
        assert dense.overlap(psi, dense.tableau_state(res.trial)) > 1 - 1e-9


class TestEngines:
    @pytest.mark.parametrize("placement,topology", GHZ_VARIANTS)
    def test_trial_by_trial(self, placement, topology):
        cfg = ProtocolConfig(BUILTIN_CODES["five_qubit"](), "ghz", placement, topology,
                             ChannelModel.depolarizing(0.08), trials=300, seed=11)
        assert np.array_equal(trial_flags(cfg, "frame"), trial_flags(cfg, "tableau"))

    def test_bell_trial_by_trial(self):
        cfg = ProtocolConfig(BUILTIN_CODES["five_qubit"](), "bell",
                             channel=ChannelModel.depolarizing(0.1), trials=300, seed=5)
        assert np.array_equal(trial_flags(cfg, "frame"), trial_flags(cfg, "tableau"))

    def test_custom_code_with_sign_fixup(self):
        code = StabilizerCode.from_generators(["ZZI", "XYZ"], "custom")
        for placement in Placement:
            cfg = ProtocolConfig(code, "ghz", placement, channel=ChannelModel.depolarizing(0.1),
                                 trials=200, seed=3)
            assert np.array_equal(trial_flags(cfg, "frame"), trial_flags(cfg, "tableau"))
            zero = ProtocolConfig(code, "ghz", placement, trials=200)
            assert trial_flags(zero, "tableau").all()


class TestEstimate:
    def test_zero_noise(self):
        cfg = ProtocolConfig(BUILTIN_CODES["five_qubit"](), trials=2000)
        rep = estimate(cfg)
        assert rep.failures == 0 and rep.fidelity == 1.0 and rep.stderr == 0.0

    def test_deterministic_and_worker_independent(self):
        cfg = ProtocolConfig(BUILTIN_CODES["five_qubit"](), channel=ChannelModel.depolarizing(0.05),
                             trials=2 * BLOCK_SIZE + 17, seed=99)
        one = estimate(cfg, workers=1)
        assert one == estimate(cfg, workers=1)
        assert one == estimate(cfg, workers=2)

    def test_stage_counts(self):
        cfg = ProtocolConfig(BUILTIN_CODES["five_qubit"](), placement="alice",
                             channel=ChannelModel.depolarizing(0.05), trials=3000, seed=1)
        rep = estimate(cfg)
        assert sum(rep.stage_failures.values()) == rep.failures
        assert rep.p_f == rep.failures / rep.trials
        lo, hi = rep.interval()
        assert lo <= rep.p_f <= hi

    def test_monotone_in_p(self):
        rates = [estimate(ProtocolConfig(BUILTIN_CODES["five_qubit"](), channel=ChannelModel.depolarizing(p),
                                         trials=20_000, seed=4)).p_f for p in (0.01, 0.05, 0.15)]
        assert rates[0] < rates[1] < rates[2]

    def test_unknown_engine(self):
        with pytest.raises(ValueError):
            estimate(ProtocolConfig(BUILTIN_CODES["yy3"](), trials=5), engine="magic")


class TestBaseline:
    def test_zero_noise(self):
        assert qec_baseline(BUILTIN_CODES["five_qubit"](), ChannelModel.depolarizing(0.0), 1000).failures == 0

    def test_weight_one_residuals(self):
        code = BUILTIN_CODES["five_qubit"]()
        table = build_table(code.standard.generators)
        for x, z in enumerate_paulis(5, 1):
            E = PauliOperator(5, x, z)
            corr = table.leader(code.syndrome_word(E, code.standard.generators))
            assert residual_in_group(code, multiply(corr, E))

    def test_logical_residual(self):
        code = BUILTIN_CODES["five_qubit"]()
        assert not residual_in_group(code, parse("ZZZZZ"))

    def test_rate_matches_enumeration(self):
        code = BUILTIN_CODES["five_qubit"]()
        gens = code.standard.generators
        table = build_table(gens)
        p = 0.1
        exact = 0.0
        for w in range(6):
            for x, z in enumerate_paulis(5, w):
                E = PauliOperator(5, x, z)
                if not residual_in_group(code, multiply(table.leader(code.syndrome_word(E, gens)), E)):
                    exact += (p / 3) ** w * (1 - p) ** (5 - w)
        rep = qec_baseline(code, ChannelModel.depolarizing(p), 40_000, seed=2)
        assert abs(rep.p_f - exact) < 4 * rep.stderr


class TestOutputState:
    def test_exact_sum(self):
        for k in range(1, 5):
            st = output_state(Fraction(1, 10), k)
            assert sum(w for _, w in st.entries) == 1
            assert st.weight(0) == Fraction(9, 10)
            assert all(w == Fraction(1, 10) / (8**k - 1) for _, w in st.entries[1:])

    def test_edges(self):
        assert output_state(0, 1).fidelity == 1
        assert output_state(1, 1).tail == Fraction(1, 7)
        assert output_state(0.2, 1).fidelity == pytest.approx(0.8)

    def test_large_k_symbolic(self):
        st = output_state(Fraction(1, 2), 6)
        assert st.entries is None and st.size == 8**6
        assert st.weight(8**6 - 1) == Fraction(1, 2) / (8**6 - 1)

    def test_invalid(self):
        with pytest.raises(ValueError):
            output_state(1.5, 1)
        with pytest.raises(ValueError):
            output_state(0.1, 0)
