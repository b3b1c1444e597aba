import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzdistill.denseoracle import dense_pauli
from ghzdistill.pauli import (
    PauliError,
    PauliOperator,
    commutes,
    format_pauli,
    multiply,
    parse,
    transpose,
    weight,
)


def paulis(n_max=4, hermitian=False):
    return st.integers(1, n_max).flatmap(
        lambda n: st.builds(
            PauliOperator,
            st.just(n),
            st.integers(0, 2**n - 1),
            st.integers(0, 2**n - 1),
            st.sampled_from([0, 2]) if hermitian else st.integers(0, 3),
        )
    )


def same_size_pair(n_max=3):
    return st.integers(1, n_max).flatmap(lambda n: st.tuples(*[
        st.builds(PauliOperator, st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1), st.integers(0, 3))
        for _ in range(3)
    ]))


class TestParseFormat:
    def test_five_qubit_generator(self):
        P = parse("+XZZXI")
        assert P.x_bits.tolist() == [1, 0, 0, 1, 0]
        assert P.z_bits.tolist() == [0, 1, 1, 0, 0]
        assert P.phase == 0

    def test_negative_yyx(self):
        P = parse("-YYX")
        assert P.x_bits.tolist() == [1, 1, 1]
        assert P.z_bits.tolist() == [1, 1, 0]
        assert P.phase == 2

    def test_identity(self):
        assert parse("III").is_identity()

    def test_optional_plus(self):
        assert parse("XZ") == parse("+XZ")
        assert format_pauli(parse("XZ")) == "+XZ"

    @pytest.mark.parametrize("bad", ["", "+", "XQ", "-x"])
    def test_rejects(self, bad):
        with pytest.raises(PauliError):
            parse(bad)

    def test_format_rejects_complex(self):
        with pytest.raises(PauliError):
            format_pauli(PauliOperator(1, 1, 1, 1))
        assert format_pauli(PauliOperator(1, 1, 1, 1), allow_complex=True) == "+iY"

    @given(paulis(hermitian=True))
    def test_round_trip(self, P):
        assert parse(format_pauli(P)) == P

    def test_y_is_hermitian_ixz(self):
        X, Z = dense_pauli(parse("X")), dense_pauli(parse("Z"))
        assert np.allclose(dense_pauli(parse("Y")), 1j * X @ Z)
        assert np.allclose(dense_pauli(parse("Y")), [[0, -1j], [1j, 0]])


class TestMultiply:
    def test_xz(self):
        P = multiply(parse("X"), parse("Z"))
        assert (P.x, P.z, P.phase) == (1, 1, 3)

    def test_zx(self):
        P = multiply(parse("Z"), parse("X"))
        assert (P.x, P.z, P.phase) == (1, 1, 1)

    @given(paulis(hermitian=True))
    def test_square_is_identity(self, P):
        Q = multiply(P, P)
        assert Q.is_identity() and Q.phase == 0

    def test_single_qubit_exhaustive_dense(self):
        for a, b, c, d, p, q in itertools.product(range(2), range(2), range(2), range(2), range(4), range(4)):
            P, Q = PauliOperator(1, a, b, p), PauliOperator(1, c, d, q)
            assert np.allclose(dense_pauli(multiply(P, Q)), dense_pauli(P) @ dense_pauli(Q))

    def test_random_two_qubit_dense(self, rng):
        for _ in range(200):
            P = PauliOperator(2, *map(int, rng.integers(0, 4, size=2)), int(rng.integers(4)))
            Q = PauliOperator(2, *map(int, rng.integers(0, 4, size=2)), int(rng.integers(4)))
            assert np.allclose(dense_pauli(multiply(P, Q)), dense_pauli(P) @ dense_pauli(Q))

    @settings(max_examples=200)
    @given(same_size_pair(8))
    def test_associative(self, triple):
        P, Q, R = triple
        assert multiply(multiply(P, Q), R) == multiply(P, multiply(Q, R))

    def test_size_mismatch(self):
        with pytest.raises(PauliError):
            multiply(parse("X"), parse("XX"))


class TestCommutes:
    def test_x_z(self):
        assert commutes(parse("X"), parse("Z")) == 1

    def test_five_qubit_generators(self):
        gens = [parse(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")]
        for P, Q in itertools.combinations(gens, 2):
            assert commutes(P, Q) == 0

    @given(paulis())
    def test_self(self, P):
        assert commutes(P, P) == 0

    def test_dense_exhaustive_two_qubits(self):
        for a, b, c, d in itertools.product(range(4), repeat=4):
            P, Q = PauliOperator(2, a, b), PauliOperator(2, c, d)
            dP, dQ = dense_pauli(P), dense_pauli(Q)
            anti = np.allclose(dP @ dQ + dQ @ dP, 0)
            assert commutes(P, Q) == int(anti)


class TestTranspose:
    def test_y(self):
        assert transpose(parse("Y")) == parse("-Y")

    def test_x_z(self):
        assert transpose(parse("X")) == parse("X")
        assert transpose(parse("Z")) == parse("Z")

    def test_xy(self):
        assert transpose(parse("XY")) == parse("-XY")

    @given(paulis(3))
    def test_matches_dense(self, P):
        # the scalar i^phase is untouched by transposition
        assert np.allclose(dense_pauli(transpose(P)), dense_pauli(P).T)

    @given(paulis())
    def test_involution(self, P):
        assert transpose(transpose(P)) == P


class TestWeightAndEmbed:
    def test_weights(self):
        assert weight(parse("III")) == 0
        assert weight(parse("XZZXI")) == 4
        assert weight(parse("IIYII")) == 1

    def test_embed_restrict(self):
        P = parse("-XY")
        E = P.embed(5, [3, 1])
        assert format_pauli(E) == "-IYIXI"
        assert E.restrict([3, 1]) == P

    def test_with_sign(self):
        assert parse("-XZ").with_sign(1) == parse("XZ")
        assert parse("XZ").negate() == parse("-XZ")
