import numpy as np
import pytest

from ghzdistill import denseoracle as dense
from ghzdistill import pauli as pl
from ghzdistill.pauli import PauliOperator, parse
from ghzdistill.stabcode import BUILTIN_CODES
from ghzdistill.tableau import StabilizerTableau, new_bell, new_ghz

X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1])


class TestMatrices:
    @pytest.mark.parametrize("s,M", [("X", X), ("Y", Y), ("Z", Z), ("-Y", -Y)])
    def test_single_qubit(self, s, M):
        assert np.allclose(dense.dense_pauli(parse(s)), M)

    def test_ordering_leftmost_is_qubit_zero(self):
        assert np.allclose(dense.dense_pauli(parse("XZ")), np.kron(X, Z))

    def test_z4_matches_binary(self):
        assert np.allclose(dense.dense_pauli_z4([1, 0], [1, 1]), dense.dense_pauli(parse("YZ")))

    def test_projector(self):
        Pi = dense.code_projector(BUILTIN_CODES["bitflip3"]())
        assert np.allclose(Pi @ Pi, Pi)
        assert np.isclose(np.trace(Pi).real, 2)

    def test_ghz_map_shape(self):
        M = np.arange(4).reshape(2, 2)
        out = dense.ghz_map(M)
        assert out[0, 3] == 1 and out[3, 0] == 2 and out[3, 3] == 3
        with pytest.raises(ValueError):
            dense.ghz_map(np.ones((3, 3)))

    def test_phase_gate(self):
        assert np.allclose(dense.diag_clifford([[1]]), [1, 1j])
        assert np.allclose(dense.diag_clifford([[0, 1], [1, 0]]), [1, 1, 1, -1])

    def test_guard(self):
        with pytest.raises(dense.DenseSizeError):
            dense.dense_pauli(PauliOperator(8, 0, 0))
        with pytest.raises(dense.DenseSizeError):
            dense.ghz_state(5)


class TestStates:
    def test_tableau_state_bell(self):
        assert dense.overlap(dense.tableau_state(new_bell(2)), dense.bell_state(2)) == pytest.approx(1.0)

    def test_tableau_state_ghz(self):
        assert dense.overlap(dense.tableau_state(new_ghz(2)), dense.ghz_state(2)) == pytest.approx(1.0)
        assert dense.overlap(dense.tableau_state(new_ghz(1, yyx=True)), dense.ghz_state(1)) == pytest.approx(1.0)

    def test_apply_pauli_matches_matrix(self, rng):
        for _ in range(20):
            P = PauliOperator(3, int(rng.integers(8)), int(rng.integers(8)), int(rng.integers(4)))
            psi = rng.normal(size=8) + 1j * rng.normal(size=8)
            assert np.allclose(dense.apply_pauli(P, psi), dense.dense_pauli(P) @ psi)

    def test_apply_diag_clifford_subset(self, rng):
        psi = rng.normal(size=8) + 0j
        out = dense.apply_diag_clifford([[1]], [1], psi)
        expected = np.kron(np.kron(np.eye(2), np.diag([1, 1j])), np.eye(2)) @ psi
        assert np.allclose(out, expected)

    def test_underdetermined_tableau(self):
        with pytest.raises(ValueError):
            dense.tableau_state(StabilizerTableau([parse("ZI")]))


class TestChecks:
    def test_transpose_exhaustive(self):
        assert max(dense.check_transpose_sign(a, b, 2) for a in range(4) for b in range(4)) < 1e-12

    def test_pauli_product_exhaustive(self):
        for a, b, c, d in np.ndindex(4, 4, 4, 4):
            assert dense.check_pauli_product(a, b, c, d, 2) < 1e-12

    def test_multiply_exhaustive(self):
        for a, b, c, d in np.ndindex(4, 4, 4, 4):
            assert dense.check_multiply(PauliOperator(2, a, b, 1), PauliOperator(2, c, d, 2)) < 1e-12

    def test_ghz_identity(self, rng):
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert dense.check_ghz_identity(M, 2) < 1e-10

    def test_homomorphism(self, rng):
        A, B = (rng.normal(size=(2, 2)) for _ in range(2))
        P = np.array([[1, 0], [0, 0]])
        assert dense.check_ghz_map_homomorphism(A, B, P) < 1e-12

    def test_induced_bc_all_single_qubit(self):
        for a, b in np.ndindex(2, 2):
            for eps in (1, -1):
                assert dense.check_induced_bc(a, b, eps, 1) < 1e-12

    def test_bc_exchange(self, rng):
        M, W = (rng.normal(size=(4, 4)) for _ in range(2))
        assert dense.check_bc_exchange(M, W, 2) < 1e-10

    def test_css_bell(self):
        assert dense.check_css_bell(dense.bitflip_pair()) < 1e-10
        assert dense.check_css_bell(dense.steane_pair()) < 1e-9
        assert dense.bitflip_state_deviation() < 1e-10

    def test_css_pair_validation(self):
        with pytest.raises(ValueError):
            dense.CssCodePair(2, [[1, 0]], [[1, 0]], [[0, 1]])

    def test_wrong_product_detected(self, monkeypatch):
        real = pl.multiply

        def broken(P, Q):
            R = real(P, Q)
            return PauliOperator(R.n, R.x, R.z, R.phase + 1)

        monkeypatch.setattr(pl, "multiply", broken)
        assert dense.check_multiply(parse("X"), parse("Z")) > 0.5


class TestSuite:
    def test_all_pass(self):
        results = dense.run_suite()
        assert len(results) == 9
        assert all(r.ok for r in results), [r.line() for r in results if not r.ok]
        assert all(r.line().startswith("PASS") for r in results)

    def test_other_seed(self):
        assert all(r.ok for r in dense.run_suite(seed=7, random_n=2))

    def test_guarded(self):
        with pytest.raises(dense.DenseSizeError):
            dense.run_suite(random_n=9)


class TestReplayLog:
    def test_measure_and_pauli(self):
        log = [("measure", parse("ZI"), 1, "t", None), ("pauli", parse("XI"), "t")]
        psi = dense.replay_log(log, dense.bell_state(1))
        expected = np.array([0, 1, 0, 0], dtype=complex)  # |11> then X on qubit 0 gives |01>
        assert dense.overlap(psi, expected) == pytest.approx(1.0)

    def test_impossible_outcome(self):
        with pytest.raises(RuntimeError):
            dense.replay_log([("measure", parse("ZZ"), 1, "t", None)], dense.bell_state(1))

    def test_unknown_entry(self):
        with pytest.raises(ValueError):
            dense.replay_log([("teleport",)], dense.bell_state(1))
