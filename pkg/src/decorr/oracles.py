"""Closed-form reduced states and Bell-diagonal correlation formulas.

These are independent of the numerical evolution in :mod:`decorr.channels`
and serve as reference values for it.
"""

from __future__ import annotations

import enum

import numpy as np

from .channels import ChannelKind
from .states import BellDiagonalParams
from .tensor import DensityMatrix, hermitian_eigenvalues, validate_density


class BipartitionLabel(enum.Enum):
    AB = "AB"
    AEa = "AEa"
    AEb = "AEb"
    BEa = "BEa"
    BEb = "BEb"
    EaEb = "EaEb"

    @classmethod
    def parse(cls, name) -> "BipartitionLabel":
        if isinstance(name, cls):
            return name
        key = str(name).strip().replace("_", "").lower()
        for label in cls:
            if label.value.lower() == key:
                return label
        raise ValueError(f"unknown bipartition {name!r}; choose one of {[l.value for l in cls]}")

    @property
    def indices(self) -> tuple[int, int]:
        """Positions in the A, B, E_A, E_B ordered global state."""
        return _INDICES[self]


_INDICES = {
    BipartitionLabel.AB: (0, 1),
    BipartitionLabel.AEa: (0, 2),
    BipartitionLabel.AEb: (0, 3),
    BipartitionLabel.BEa: (1, 2),
    BipartitionLabel.BEb: (1, 3),
    BipartitionLabel.EaEb: (2, 3),
}

# Bell-diagonal inputs are symmetric under A <-> B.
_MIRROR = {
    BipartitionLabel.BEb: BipartitionLabel.AEa,
    BipartitionLabel.BEa: BipartitionLabel.AEb,
}


class UnsupportedChannelError(ValueError):
    pass


def _x(d, ad) -> np.ndarray:
    """X-shaped matrix from its diagonal and anti-diagonal (top to bottom)."""
    m = np.diag(np.asarray(d, dtype=complex))
    for i, v in enumerate(ad):
        m[i, 3 - i] = v
    return m


def _amplitude_damping(part, c1, c2, c3, p, q):
    cm, cp = c1 - c2, c1 + c2
    if part is BipartitionLabel.AB:
        mid = (1 - c3) * q + (1 + c3) * p * q
        return _x(
            [(1 + p) ** 2 + (1 - p) ** 2 * c3, mid, mid, q**2 * (1 + c3)],
            [q * cm, q * cp, q * cp, q * cm],
        ) / 4
    if part is BipartitionLabel.AEa:
        s = np.sqrt(p * q)
        return np.array(
            [[1, 0, 0, 0], [0, p, s, 0], [0, s, q, 0], [0, 0, 0, 0]], dtype=complex
        ) / 2
    if part is BipartitionLabel.AEb:
        s = np.sqrt(p * q)
        return _x(
            [
                (1 + c3) * (1 + p * q) + 1 - c3,
                (1 - c3) * p + (1 + c3) * p**2,
                (1 - c3) * q + (1 + c3) * q**2,
                (1 + c3) * p * q,
            ],
            # Printed form omits the middle anti-diagonal; the dilation gives (c1 + c2) sqrt(pq).
            [cm * s, cp * s, cp * s, cm * s],
        ) / 4
    mid = (1 - c3) * p + (1 + c3) * p * q
    return _x(
        [(1 + q) ** 2 + (1 - q) ** 2 * c3, mid, mid, (1 + c3) * p**2],
        [cm * p, cp * p, cp * p, cm * p],
    ) / 4


def _phase_damping(part, c1, c2, c3, p, q):
    s = np.sqrt(p * q)
    if part is BipartitionLabel.AB:
        cm, cp = c1 - c2, c1 + c2
        return _x([1 + c3, 1 - c3, 1 - c3, 1 + c3], [cm * q, cp * q, cp * q, cm * q]) / 4
    if part is BipartitionLabel.AEa:
        return np.array(
            [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1 - p, s], [0, 0, s, p]], dtype=complex
        ) / 2
    if part is BipartitionLabel.AEb:
        return np.array(
            [
                [1 + q + p * c3, (1 - c3) * s, 0, 0],
                [(1 - c3) * s, (1 - c3) * p, 0, 0],
                [0, 0, 1 + q - p * c3, (1 + c3) * s],
                [0, 0, (1 + c3) * s, (1 + c3) * p],
            ],
            dtype=complex,
        ) / 4
    g = 2 - (1 + c3) * p
    e = 1 + c3
    return np.array(
        [
            [4 * q + e * p**2, g * s, g * s, e * p * q],
            [g * s, g * p, e * p * q, e * p * s],
            [g * s, e * p * q, g * p, e * p * s],
            [e * p * q, e * p * s, e * p * s, e * p**2],
        ],
        dtype=complex,
    ) / 4


def _flip(kind, part, c1, c2, c3, p, q):
    qp = 1 - p / 2  # q'
    r = np.sqrt(p * qp / 2)
    q2 = q**2
    if part is BipartitionLabel.AB:
        # Two axes shrink by q^2; the channel's own axis is untouched.
        k1, k2, k3 = {
            ChannelKind.BIT_FLIP: (c1, c2 * q2, c3 * q2),
            ChannelKind.BIT_PHASE_FLIP: (c1 * q2, c2, c3 * q2),
            ChannelKind.PHASE_FLIP: (c1 * q2, c2 * q2, c3),
        }[kind]
        return _x(
            [1 + k3, 1 - k3, 1 - k3, 1 + k3], [k1 - k2, k1 + k2, k1 + k2, k1 - k2]
        ) / 4
    if part is BipartitionLabel.EaEb:
        c = {ChannelKind.BIT_FLIP: c1, ChannelKind.BIT_PHASE_FLIP: c2, ChannelKind.PHASE_FLIP: c3}[kind]
        h = p * qp / 2
        # The printed (3,3) entry "pq'2" is pq'/2; unit trace fixes the reading.
        return _x([qp**2, h, h, p**2 / 4], [c * h, c * h, c * h, c * h])
    # A with E_A uses coefficient 1; A with E_B carries the protected c_i.
    if kind is ChannelKind.BIT_FLIP:
        w = 1.0 if part is BipartitionLabel.AEa else c1
        return _x([qp, p / 2, qp, p / 2], [w * r, w * r, w * r, w * r]) / 2
    if kind is ChannelKind.BIT_PHASE_FLIP:
        w = 1.0 if part is BipartitionLabel.AEa else c2
        return _x([qp, p / 2, qp, p / 2], [-1j * w * r, -1j * w * r, 1j * w * r, 1j * w * r]) / 2
    w = 1.0 if part is BipartitionLabel.AEa else c3
    return np.array(
        [
            [qp, w * r, 0, 0],
            [w * r, p / 2, 0, 0],
            [0, 0, qp, -w * r],
            [0, 0, -w * r, p / 2],
        ],
        dtype=complex,
    ) / 2


def closed_form_matrix(kind, part, c: BellDiagonalParams, p: float) -> np.ndarray:
    """Raw closed-form reduced matrix, without validation."""
    kind = ChannelKind.parse(kind)
    part = BipartitionLabel.parse(part)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    part = _MIRROR.get(part, part)
    q = 1.0 - p
    c1, c2, c3 = c.c
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return _amplitude_damping(part, c1, c2, c3, p, q)
    if kind is ChannelKind.PHASE_DAMPING:
        return _phase_damping(part, c1, c2, c3, p, q)
    return _flip(kind, part, c1, c2, c3, p, q)


def closed_form_reduced(kind, part, c: BellDiagonalParams, p: float) -> DensityMatrix:
    return validate_density(closed_form_matrix(kind, part, c, p), (2, 2))


# Factors multiplying |c1|, |c2|, |c3| in the evolved Bell-diagonal AB state.
def _axis_factors(kind: ChannelKind, p: float) -> tuple[float, float, float]:
    q = 1.0 - p
    if kind is ChannelKind.PHASE_DAMPING:
        return (q, q, 1.0)
    if kind is ChannelKind.BIT_FLIP:
        return (1.0, q**2, q**2)
    if kind is ChannelKind.BIT_PHASE_FLIP:
        return (q**2, 1.0, q**2)
    if kind is ChannelKind.PHASE_FLIP:
        return (q**2, q**2, 1.0)
    raise UnsupportedChannelError(f"no closed-form chi for {kind.value}")


def chi(kind, c: BellDiagonalParams, p: float) -> float:
    """Largest evolved correlation magnitude of a Bell-diagonal state."""
    kind = ChannelKind.parse(kind)
    f = _axis_factors(kind, p)
    return max(fi * abs(ci) for fi, ci in zip(f, c.c))


def _xlog2x(x: float) -> float:
    return x * np.log2(x) if x > 0 else 0.0


def analytic_classical_correlation(c: BellDiagonalParams | None, chi_value: float) -> float:
    """Classical correlation of a Bell-diagonal state with largest correlation ``chi_value``.

    ``c`` is accepted for call-site symmetry with :func:`analytic_discord`; the
    value depends on ``chi_value`` alone.
    """
    if not 0.0 <= chi_value <= 1.0 + 1e-15:
        raise ValueError(f"chi={chi_value} outside [0, 1]")
    chi_value = min(chi_value, 1.0)
    return sum(0.5 * _xlog2x(1 + s * chi_value) for s in (-1.0, 1.0))


def analytic_discord(c: BellDiagonalParams, p: float, kind) -> float:
    kind = ChannelKind.parse(kind)
    x = chi(kind, c, p)
    rho = closed_form_matrix(kind, BipartitionLabel.AB, c, p)
    lam = np.clip(hermitian_eigenvalues(rho), 0.0, None)
    return 2.0 + sum(_xlog2x(float(v)) for v in lam) - analytic_classical_correlation(c, x)


GHZ_VECTOR = np.zeros(16, dtype=complex)
GHZ_VECTOR[0b0101] = 1 / np.sqrt(2)
GHZ_VECTOR[0b1010] = -1 / np.sqrt(2)


def ghz_asymptote_fidelity(evolved: DensityMatrix) -> float:
    """Overlap with (|0101> - |1010>)/sqrt(2), qubits ordered A, B, E_A, E_B."""
    if evolved.dims != (2, 2, 2, 2):
        raise ValueError(f"expected a four-qubit state, got dims {evolved.dims}")
    v = GHZ_VECTOR
    return float((v.conj() @ evolved.matrix @ v).real)
