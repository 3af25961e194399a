"""Dense linear algebra for small multi-qubit operators.

Matrices are plain ``numpy`` complex arrays. Subsystem index 0 is the
leftmost tensor factor; four-party states are ordered A, B, E_A, E_B.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10


class InvalidStateError(ValueError):
    """A matrix failed one of the density-matrix invariants."""

    invariant = "state"

    def __init__(self, magnitude: float, detail: str = ""):
        self.magnitude = float(magnitude)
        msg = f"{self.invariant} violation of magnitude {self.magnitude:.3e}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class HermiticityError(InvalidStateError):
    invariant = "hermiticity"


class TraceError(InvalidStateError):
    invariant = "trace"


class PositivityError(InvalidStateError):
    invariant = "positivity"


class BipartitionError(ValueError):
    """Subsystem indices do not describe a valid reduction of the state."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state together with its subsystem dimensions.

    Build instances through :func:`validate_density`; the constructor itself
    performs no checks.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.matrix
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def validate_density(m, dims: Sequence[int]) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; return a ``DensityMatrix``.

    Raises the matching :class:`InvalidStateError` subclass, carrying the size
    of the violation, on the first invariant that fails.
    """
    arr = _as_matrix(m)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != arr.shape[0]:
        raise BipartitionError(f"dims {dims} do not match matrix dimension {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidStateError(float("inf"), "non-finite entries")

    herm_dev = float(np.max(np.abs(arr - arr.conj().T)))
    if herm_dev > HERMITIAN_TOL:
        raise HermiticityError(herm_dev)
    trace_dev = abs(complex(np.trace(arr)) - 1.0)
    if trace_dev > TRACE_TOL:
        raise TraceError(trace_dev)
    lowest = float(hermitian_eigenvalues(arr)[0])
    if lowest < -POSITIVITY_TOL:
        raise PositivityError(-lowest, f"minimum eigenvalue {lowest:.6g}")

    arr = arr.copy()
    arr.setflags(write=False)
    return DensityMatrix(arr, dims)


def hermitian_eigenvalues(m, tol: float = 1e-10) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    Diagonal input is returned as its sorted diagonal without calling the
    eigensolver, so exactly diagonal states keep exact spectra.
    """
    arr = _as_matrix(m)
    dev = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    if dev > tol:
        raise HermiticityError(dev, "eigenvalues requested for non-Hermitian matrix")
    off = arr - np.diag(np.diag(arr))
    if not np.any(off):
        return np.sort(np.diag(arr).real)
    return np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))


def jacobi_eigenvalues(m, tol: float = 1e-13, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic complex Jacobi eigensolver for small Hermitian matrices.

    Independent of LAPACK; used to cross-check :func:`hermitian_eigenvalues`.
    Iterates until the off-diagonal Frobenius norm drops below ``tol``.
    """
    a = np.array(_as_matrix(m), dtype=complex)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off < tol:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                aij = a[i, j]
                if abs(aij) < 1e-300:
                    continue
                # Phase-rotate so the pivot is real, then apply a real Givens rotation.
                phase = aij / abs(aij)
                theta = 0.5 * np.arctan2(2 * abs(aij), (a[j, j] - a[i, i]).real)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n, dtype=complex)
                rot[i, i] = c
                rot[j, j] = c
                rot[i, j] = s * phase
                rot[j, i] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
    return np.sort(np.diag(a).real)


def psd_sqrt(m, cutoff: float = 0.0) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-1e-10, cutoff]`` are treated as zero; anything more
    negative is a :class:`PositivityError`.
    """
    arr = _as_matrix(m)
    dev = float(np.max(np.abs(arr - arr.conj().T)))
    if dev > 1e-10:
        raise HermiticityError(dev)
    vals, vecs = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    if vals[0] < -POSITIVITY_TOL:
        raise PositivityError(-vals[0])
    vals = np.where(vals <= cutoff, 0.0, vals)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def _check_indices(indices: Iterable[int], n: int) -> list[int]:
    idx = list(indices)
    if not idx:
        raise BipartitionError("at least one subsystem must be kept")
    if len(set(idx)) != len(idx) or any(i < 0 or i >= n for i in idx):
        raise BipartitionError(f"invalid subsystem indices {idx} for {n} subsystems")
    return sorted(idx)


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Partial trace of a raw matrix, keeping ``keep`` in their original order."""
    dims = tuple(dims)
    n = len(dims)
    keep = _check_indices(keep, n)
    traced = [i for i in range(n) if i not in keep]
    t = np.asarray(m).reshape(dims + dims)
    # Contract traced axes pairwise, highest index first so positions stay valid.
    for k, ax in enumerate(sorted(traced, reverse=True)):
        nleft = n - k
        t = np.trace(t, axis1=ax, axis2=ax + nleft)
    d = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d, d)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    keep = _check_indices(keep, rho.n_subsystems)
    out = partial_trace_matrix(rho.matrix, rho.dims, keep)
    out.setflags(write=False)
    return DensityMatrix(out, tuple(rho.dims[i] for i in keep))


def partial_transpose_matrix(m: np.ndarray, dims: Sequence[int], subsystem: int) -> np.ndarray:
    dims = tuple(dims)
    n = len(dims)
    if not 0 <= subsystem < n:
        raise BipartitionError(f"subsystem {subsystem} out of range for {n} subsystems")
    t = np.asarray(m).reshape(dims + dims)
    t = np.swapaxes(t, subsystem, subsystem + n)
    return t.reshape(m.shape).copy()


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose the chosen factor of a bipartite state."""
    if rho.n_subsystems != 2:
        raise BipartitionError(
            f"partial transpose needs a bipartite state, got {rho.n_subsystems} subsystems"
        )
    return partial_transpose_matrix(rho.matrix, rho.dims, subsystem)


def trace_distance(a, b) -> float:
    diff = _as_matrix(a) - _as_matrix(b)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
