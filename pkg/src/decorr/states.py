"""Initial two-qubit states and the system-plus-vacuum-environment state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import DensityMatrix, PositivityError, kron, validate_density

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (I2, SX, SY, SZ)

KET0 = np.array([[1, 0], [0, 0]], dtype=complex)


@dataclass(frozen=True)
class BellDiagonalParams:
    """Correlation coefficients ``c1, c2, c3`` of a Bell-diagonal state."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            v = getattr(self, name)
            if not -1.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [-1, 1]")

    @property
    def c(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def bell_weights(self) -> np.ndarray:
        """Eigenvalues of the state, one per Bell vector."""
        c1, c2, c3 = self.c
        return 0.25 * np.array(
            [
                1 - c1 - c2 - c3,
                1 - c1 + c2 + c3,
                1 + c1 - c2 + c3,
                1 + c1 + c2 - c3,
            ]
        )

    def is_physical(self, tol: float = 1e-12) -> bool:
        return bool(np.all(self.bell_weights() >= -tol))


@dataclass(frozen=True)
class GeneralTwoQubitParams:
    """Pauli expansion coefficients ``c[i, j]`` with ``c[0, 0] == 1``."""

    c: tuple[tuple[float, ...], ...]

    @classmethod
    def from_array(cls, arr) -> "GeneralTwoQubitParams":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (4, 4):
            raise ValueError(f"Pauli coefficient matrix must be 4x4, got {arr.shape}")
        return cls(tuple(tuple(float(x) for x in row) for row in arr))

    def as_array(self) -> np.ndarray:
        return np.array(self.c, dtype=float)


def pauli_operator(i: int, j: int) -> np.ndarray:
    return kron(PAULI[i], PAULI[j])


def pauli_coefficients(rho) -> np.ndarray:
    """Real 4x4 array ``c[i, j] = Tr[rho (sigma_i x sigma_j)]``."""
    m = np.asarray(rho)
    out = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            out[i, j] = np.trace(m @ pauli_operator(i, j)).real
    return out


def general_two_qubit_state(params: GeneralTwoQubitParams) -> DensityMatrix:
    c = params.as_array()
    if abs(c[0, 0] - 1.0) > 1e-12:
        raise ValueError(f"c[0,0] must be 1 for a normalized state, got {c[0, 0]}")
    m = sum(c[i, j] * pauli_operator(i, j) for i in range(4) for j in range(4)) / 4
    return validate_density(m, (2, 2))


def bell_diagonal_matrix(params: BellDiagonalParams) -> np.ndarray:
    """X-shaped matrix of a Bell-diagonal state, without positivity checks."""
    c1, c2, c3 = params.c
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = (1 + c3) / 4
    m[1, 1] = m[2, 2] = (1 - c3) / 4
    m[0, 3] = m[3, 0] = (c1 - c2) / 4
    m[1, 2] = m[2, 1] = (c1 + c2) / 4
    return m


def bell_diagonal_state(params: BellDiagonalParams) -> DensityMatrix:
    if not params.is_physical():
        w = params.bell_weights().min()
        raise PositivityError(-w, f"Bell-diagonal coefficients {params.c} are unphysical")
    return validate_density(bell_diagonal_matrix(params), (2, 2))


def werner_params(alpha: float) -> BellDiagonalParams:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"Werner parameter alpha={alpha} outside [0, 1]")
    return BellDiagonalParams(-alpha, -alpha, -alpha)


def werner_state(alpha: float) -> DensityMatrix:
    return bell_diagonal_state(werner_params(alpha))


def pure_state(psi, dims=(2, 2)) -> DensityMatrix:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()), dims)


def attach_vacuum_environments(rho_ab: DensityMatrix) -> DensityMatrix:
    """``rho_AB x |0><0|_{E_A} x |0><0|_{E_B}`` with dims ordered A, B, E_A, E_B."""
    if rho_ab.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho_ab.dims}")
    return validate_density(kron(kron(rho_ab.matrix, KET0), KET0), (2, 2, 2, 2))


def random_bell_diagonal(rng: np.random.Generator) -> BellDiagonalParams:
    """Uniform draw from the tetrahedron of physical Bell-diagonal states."""
    while True:
        c = rng.uniform(-1, 1, size=3)
        params = BellDiagonalParams(*map(float, c))
        if params.is_physical():
            return params


def random_pure_state(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, dim: int = 4, rank: int | None = None) -> np.ndarray:
    """Random mixed state from a Ginibre matrix (Hilbert-Schmidt measure)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real
