"""Correlation quantifiers for two-qubit states.

Entropies are in bits. One-side quantities measure subsystem B unless
``measured_side="A"`` is given. Optimizations over projective measurements
use a deterministic grid over Bloch directions followed by Nelder-Mead
refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Iterable

import numpy as np
from scipy.optimize import minimize

from .states import I2, SX, SY, SZ, pauli_coefficients
from .tensor import (
    DensityMatrix,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_trace_matrix,
    partial_transpose_matrix,
    psd_sqrt,
)

ROUNDOFF_CLAMP = 1e-6
EIG_CLAMP = 1e-10
PROB_FLOOR = 1e-12


class NegativeCorrelationError(ArithmeticError):
    """A correlation came out negative beyond optimizer noise."""


class NotXStateError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-one projective qubit measurement along a Bloch direction."""

    theta: float
    phi: float

    @classmethod
    def from_direction(cls, n) -> "MeasurementBasis":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        theta = float(np.arccos(np.clip(n[2], -1.0, 1.0)))
        phi = float(np.arctan2(n[1], n[0]) % (2 * np.pi))
        if theta < 1e-12 or np.pi - theta < 1e-12:
            phi = 0.0
        return cls(theta, phi)

    @property
    def direction(self) -> np.ndarray:
        return _direction(self.theta, self.phi)

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        nx, ny, nz = self.direction
        ns = nx * SX + ny * SY + nz * SZ
        return (I2 + ns) / 2, (I2 - ns) / 2


Z_BASIS = MeasurementBasis(0.0, 0.0)


@dataclass(frozen=True)
class OptimizerSettings:
    grid_phi: int = 64
    grid_theta: int = 32
    two_side_grid_phi: int = 32
    two_side_grid_theta: int = 16
    maxiter: int = 200
    fatol: float = 1e-8
    xatol: float = 1e-6


DEFAULT_SETTINGS = OptimizerSettings()


def _direction(theta, phi) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) * np.ones_like(st)], axis=-1)


def _xlogx(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def shannon_entropy(dist) -> float:
    p = np.asarray(dist, dtype=float)
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"not a probability distribution: {p}")
    return float(-np.sum(_xlogx(np.clip(p, 0.0, None))))


def _entropy_from_eigenvalues(vals: np.ndarray) -> float:
    if vals.size and vals.min() < -EIG_CLAMP:
        raise ValueError(f"eigenvalue {vals.min():.3e} below clamp threshold")
    return float(-np.sum(_xlogx(np.clip(vals, 0.0, None))))


def von_neumann_entropy(rho) -> float:
    return _entropy_from_eigenvalues(hermitian_eigenvalues(np.asarray(rho)))


def _binary_bloch_entropy(r: np.ndarray) -> np.ndarray:
    """Entropy of a qubit state with Bloch vector length ``r``."""
    r = np.clip(r, 0.0, 1.0)
    return -(_xlogx((1 + r) / 2) + _xlogx((1 - r) / 2))


def _check_two_qubit(rho: DensityMatrix) -> None:
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho.dims}")


def mutual_information(rho_ab: DensityMatrix) -> float:
    _check_two_qubit(rho_ab)
    s_a = von_neumann_entropy(partial_trace(rho_ab, [0]))
    s_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    return s_a + s_b - von_neumann_entropy(rho_ab)


def _side(measured_side: str) -> str:
    side = str(measured_side).upper()
    if side not in ("A", "B"):
        raise ValueError(f"measured_side must be 'A' or 'B', got {measured_side!r}")
    return side


def classical_mutual_information(rho_ab: DensityMatrix, basis_a: MeasurementBasis, basis_b: MeasurementBasis) -> float:
    """Shannon mutual information of the local measurement outcomes."""
    _check_two_qubit(rho_ab)
    joint = np.array(
        [
            [np.trace(kron(pa, pb) @ rho_ab.matrix).real for pb in basis_b.projectors()]
            for pa in basis_a.projectors()
        ]
    )
    joint = np.clip(joint, 0.0, None)
    joint /= joint.sum()
    return (
        shannon_entropy(joint.sum(axis=1))
        + shannon_entropy(joint.sum(axis=0))
        - shannon_entropy(joint.ravel())
    )


def measured_conditional_entropy(rho_ab: DensityMatrix, basis: MeasurementBasis, measured_side: str = "B") -> float:
    """Average entropy of the unmeasured qubit after measuring the other."""
    _check_two_qubit(rho_ab)
    side = _side(measured_side)
    total = 0.0
    for proj in basis.projectors():
        op = kron(I2, proj) if side == "B" else kron(proj, I2)
        post = op @ rho_ab.matrix @ op
        prob = float(np.trace(post).real)
        if prob < PROB_FLOOR:
            continue
        keep = [0] if side == "B" else [1]
        cond = partial_trace_matrix(post, (2, 2), keep) / prob
        total += prob * von_neumann_entropy(cond)
    return total


# -- vectorized objectives -------------------------------------------------


def _bloch_data(rho_ab: DensityMatrix):
    c = pauli_coefficients(rho_ab.matrix)
    return c[1:, 0], c[0, 1:], c[1:, 1:]


def _conditional_entropy_many(a, b, t, n: np.ndarray) -> np.ndarray:
    """Measured conditional entropy of A for B-measurements along rows of ``n``."""
    bn = n @ b
    tn = n @ t.T
    out = np.zeros(n.shape[0])
    for s in (1.0, -1.0):
        prob = (1 + s * bn) / 2
        vec = a + s * tn
        ok = prob > PROB_FLOOR
        r = np.where(ok, np.linalg.norm(vec, axis=-1) / np.where(ok, 2 * prob, 1.0), 0.0)
        out += np.where(ok, prob * _binary_bloch_entropy(r), 0.0)
    return out


def _classical_mi_many(a, b, t, m: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Classical mutual information for every pair (m_i, n_j); returns len(m) x len(n)."""
    am = m @ a
    bn = n @ b
    mtn = m @ t @ n.T
    h_a = -(_xlogx((1 + am) / 2) + _xlogx((1 - am) / 2))
    h_b = -(_xlogx((1 + bn) / 2) + _xlogx((1 - bn) / 2))
    h_ab = np.zeros(mtn.shape)
    for s in (1.0, -1.0):
        for u in (1.0, -1.0):
            pr = (1 + s * am[:, None] + u * bn[None, :] + s * u * mtn) / 4
            h_ab -= _xlogx(np.clip(pr, 0.0, None))
    return h_a[:, None] + h_b[None, :] - h_ab


def _angle_grid(n_phi: int, n_theta: int):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    # theta-major so argmax picks the smallest theta, then smallest phi, on ties
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    return tt.ravel(), pp.ravel(), theta[1] - theta[0] if n_theta > 1 else np.pi, phi[1] - phi[0] if n_phi > 1 else np.pi


def _simplex(x0: np.ndarray, steps: np.ndarray) -> np.ndarray:
    pts = [x0]
    for i, s in enumerate(steps):
        e = x0.copy()
        e[i] += s
        pts.append(e)
    return np.array(pts)


def _refine(objective, x0: np.ndarray, steps: np.ndarray, settings: OptimizerSettings):
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": _simplex(x0, steps),
            "maxiter": settings.maxiter,
            "fatol": settings.fatol,
            "xatol": settings.xatol,
        },
    )
    return res.x, float(res.fun)


def classical_correlation_hv(
    rho_ab: DensityMatrix, measured_side: str = "B", settings: OptimizerSettings = DEFAULT_SETTINGS
) -> tuple[float, MeasurementBasis]:
    """Henderson-Vedral classical correlation and the maximizing basis."""
    _check_two_qubit(rho_ab)
    a, b, t = _bloch_data(rho_ab)
    if _side(measured_side) == "A":
        a, b, t = b, a, t.T
    s_a = _binary_bloch_entropy(np.linalg.norm(a))

    th, ph, dth, dph = _angle_grid(settings.grid_phi, settings.grid_theta)
    cond = _conditional_entropy_many(a, b, t, _direction(th, ph))
    best = int(np.argmin(cond))
    x_best = np.array([th[best], ph[best]])
    f_best = float(cond[best])

    def objective(x):
        return float(_conditional_entropy_many(a, b, t, _direction(x[0], x[1])[None, :])[0])

    x_ref, f_ref = _refine(objective, x_best.copy(), np.array([dth, dph]), settings)
    if f_ref < f_best:
        x_best, f_best = x_ref, f_ref
    basis = MeasurementBasis.from_direction(_direction(x_best[0], x_best[1]))
    return float(s_a - f_best), basis


def _clamp(value: float, name: str) -> float:
    if value < -ROUNDOFF_CLAMP:
        raise NegativeCorrelationError(f"{name} = {value:.3e} is negative beyond tolerance")
    return max(value, 0.0)


def quantum_discord(
    rho_ab: DensityMatrix, measured_side: str = "B", settings: OptimizerSettings = DEFAULT_SETTINGS
) -> float:
    return discord_and_classical(rho_ab, measured_side, settings)[0]


def discord_and_classical(
    rho_ab: DensityMatrix, measured_side: str = "B", settings: OptimizerSettings = DEFAULT_SETTINGS
) -> tuple[float, float, MeasurementBasis]:
    """(discord, Henderson-Vedral correlation, maximizing basis) in one optimization."""
    mi = mutual_information(rho_ab)
    cc, basis = classical_correlation_hv(rho_ab, measured_side, settings)
    return _clamp(mi - cc, "quantum discord"), cc, basis


def two_side_classical(
    rho_ab: DensityMatrix, settings: OptimizerSettings = DEFAULT_SETTINGS
) -> tuple[float, MeasurementBasis, MeasurementBasis]:
    """Largest classical mutual information over local projective measurements."""
    _check_two_qubit(rho_ab)
    a, b, t = _bloch_data(rho_ab)
    th, ph, dth, dph = _angle_grid(settings.two_side_grid_phi, settings.two_side_grid_theta)
    dirs = _direction(th, ph)
    mi = _classical_mi_many(a, b, t, dirs, dirs)
    # first maximal entry in row-major order: smallest A angles, then smallest B angles
    i, j = np.unravel_index(int(np.argmax(mi)), mi.shape)
    x_best = np.array([th[i], ph[i], th[j], ph[j]])
    f_best = float(mi[i, j])

    def objective(x):
        m = _direction(x[0], x[1])[None, :]
        n = _direction(x[2], x[3])[None, :]
        return -float(_classical_mi_many(a, b, t, m, n)[0, 0])

    x_ref, f_ref = _refine(objective, x_best.copy(), np.array([dth, dph, dth, dph]), settings)
    if -f_ref > f_best:
        x_best, f_best = x_ref, -f_ref
    basis_a = MeasurementBasis.from_direction(_direction(x_best[0], x_best[1]))
    basis_b = MeasurementBasis.from_direction(_direction(x_best[2], x_best[3]))
    return f_best, basis_a, basis_b


def two_side_quantum(rho_ab: DensityMatrix, settings: OptimizerSettings = DEFAULT_SETTINGS) -> float:
    k, _, _ = two_side_classical(rho_ab, settings)
    return _clamp(mutual_information(rho_ab) - k, "two-side quantum correlation")


# -- entanglement ------------------------------------------------------------


def is_x_state(rho, tol: float = 1e-10) -> bool:
    m = np.asarray(rho)
    mask = np.ones((4, 4), dtype=bool)
    idx = np.arange(4)
    mask[idx, idx] = False
    mask[idx, 3 - idx] = False
    return bool(np.all(np.abs(m[mask]) < tol))


def xstate_lambda(rho) -> float:
    """Signed quantity whose positive part is half the X-state concurrence."""
    m = np.asarray(rho)
    if not is_x_state(m):
        raise NotXStateError("state is not X-shaped; use concurrence_general")
    d = np.clip(np.diag(m).real, 0.0, None)
    lam1 = abs(m[0, 3]) - math.sqrt(d[1] * d[2])
    lam2 = abs(m[1, 2]) - math.sqrt(d[0] * d[3])
    return float(max(lam1, lam2))


def xstate_concurrence(rho) -> float:
    return 2.0 * max(0.0, xstate_lambda(rho))


_SYSY = kron(SY, SY)
# Spectra of rho below this are roundoff on a rank-deficient state.
_RANK_CUTOFF = 1e-14


def wootters_lambda(rho) -> float:
    """Unclamped ``l1 - l2 - l3 - l4`` of the Wootters construction."""
    m = np.asarray(rho)
    root = psd_sqrt(m, cutoff=_RANK_CUTOFF)
    tilde = _SYSY @ m.conj() @ _SYSY
    r2 = root @ tilde @ root
    r2 = 0.5 * (r2 + r2.conj().T)
    vals = hermitian_eigenvalues(r2)
    lam = np.sqrt(np.where(vals <= _RANK_CUTOFF, 0.0, vals))[::-1]
    return float(lam[0] - lam[1] - lam[2] - lam[3])


def concurrence_general(rho) -> float:
    return max(0.0, wootters_lambda(rho))


def negativity(rho, subsystem: int = 0) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    m = np.asarray(rho)
    pt = partial_transpose_matrix(m, (2, 2), subsystem)
    vals = hermitian_eigenvalues(pt)
    return float(-np.sum(vals[vals < -1e-14]))


# -- reports -------------------------------------------------------------------

MEASURE_NAMES = (
    "mutual_info",
    "classical_two_side",
    "quantum_two_side",
    "discord",
    "classical_hv",
    "concurrence",
    "negativity",
)


@dataclass(frozen=True)
class CorrelationReport:
    """Every correlation quantifier for one bipartition; NaN marks "not requested"."""

    mutual_info: float = math.nan
    classical_two_side: float = math.nan
    quantum_two_side: float = math.nan
    discord_b_measured: float = math.nan
    classical_hv_b_measured: float = math.nan
    concurrence: float = math.nan
    negativity: float = math.nan
    optimizer_args: dict = field(default_factory=dict, compare=False)

    def as_row(self) -> dict[str, float]:
        return {
            "mutual_info": self.mutual_info,
            "classical_two_side": self.classical_two_side,
            "quantum_two_side": self.quantum_two_side,
            "discord": self.discord_b_measured,
            "classical_hv": self.classical_hv_b_measured,
            "concurrence": self.concurrence,
            "negativity": self.negativity,
        }

    def invariant_violations(self, tol: float = 1e-9) -> list[str]:
        bad = []
        if not math.isnan(self.quantum_two_side):
            gap = abs(self.classical_two_side + self.quantum_two_side - self.mutual_info)
            if gap > tol:
                bad.append(f"K + Q differs from I by {gap:.3e}")
        if not math.isnan(self.discord_b_measured):
            gap = abs(self.classical_hv_b_measured + self.discord_b_measured - self.mutual_info)
            if gap > tol:
                bad.append(f"C + D differs from I by {gap:.3e}")
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isnan(v) and v < -tol:
                bad.append(f"{f.name} = {v:.3e} is negative")
        return bad


def _closure(measures: Iterable[str]) -> set[str]:
    wanted = set(measures)
    unknown = wanted - set(MEASURE_NAMES)
    if unknown:
        raise ValueError(f"unknown measures {sorted(unknown)}; choose from {MEASURE_NAMES}")
    if "quantum_two_side" in wanted:
        wanted.add("classical_two_side")
    if "discord" in wanted:
        wanted.add("classical_hv")
    if wanted & {"classical_two_side", "classical_hv"}:
        wanted.add("mutual_info")
    return wanted


def correlation_report(
    rho_ab: DensityMatrix,
    measures: Iterable[str] = MEASURE_NAMES,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
) -> CorrelationReport:
    wanted = _closure(measures)
    values: dict = {}
    args: dict = {}
    mi = mutual_information(rho_ab) if "mutual_info" in wanted else math.nan
    values["mutual_info"] = mi
    if wanted & {"classical_two_side", "quantum_two_side"}:
        k, ba, bb = two_side_classical(rho_ab, settings)
        values["classical_two_side"] = k
        values["quantum_two_side"] = _clamp(mi - k, "two-side quantum correlation")
        args["two_side"] = (ba, bb)
    if wanted & {"classical_hv", "discord"}:
        cc, basis = classical_correlation_hv(rho_ab, "B", settings)
        values["classical_hv_b_measured"] = cc
        values["discord_b_measured"] = _clamp(mi - cc, "quantum discord")
        args["hv_b"] = basis
    if "concurrence" in wanted:
        values["concurrence"] = concurrence_general(rho_ab.matrix)
    if "negativity" in wanted:
        values["negativity"] = negativity(rho_ab.matrix)
    return CorrelationReport(**values, optimizer_args=args)
