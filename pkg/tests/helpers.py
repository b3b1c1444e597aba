"""Shared test helpers."""
import numpy as np

from ghzdistill.pauli import PauliOperator
from ghzdistill.stabcode import CodeError, StabilizerCode


def random_code(seed, n, r, css=False):
    """Random stabilizer code with up to ``r`` generators, grown by rejection sampling."""
    rng = np.random.default_rng(seed)
    gens = []
    for _ in range(50 * n):
        if len(gens) == r:
            break
        x, z = int(rng.integers(2**n)), int(rng.integers(2**n))
        if css:
            if rng.integers(2):
                x = 0
            else:
                z = 0
        # phase 2*|x&z| makes E(x, z) Hermitian, then a random overall sign
        P = PauliOperator(n, x, z, 0)
        P = PauliOperator(n, x, z, P.phase + (0 if P.is_hermitian else 1) + 2 * int(rng.integers(2)))
        if P.is_identity():
            continue
        try:
            StabilizerCode(gens + [P])
        except CodeError:
            continue
        gens.append(P)
    return StabilizerCode(gens) if gens else None
