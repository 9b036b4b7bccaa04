import numpy as np

from bellpair.states import DensityMatrix, validate


def random_pure_ket(rng: np.random.Generator) -> np.ndarray:
    ket = rng.normal(size=4) + 1j * rng.normal(size=4)
    return ket / np.linalg.norm(ket)


def random_density_matrix(rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt-distributed full-rank two-qubit state."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g @ g.conj().T
    return validate(m / np.trace(m).real)


def random_mixture(rng: np.random.Generator, max_terms: int = 4) -> DensityMatrix:
    """Random convex mixture of Haar-random pure states."""
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    m = np.zeros((4, 4), dtype=complex)
    for w in weights:
        ket = random_pure_ket(rng)
        m += w * np.outer(ket, ket.conj())
    return validate(m)


def haar_unitary2(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unit3(rng: np.random.Generator, n: int = 1) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
