"""Single-qubit noise channels, their local action, and their dilation.

Each channel has two Kraus operators, so one environment qubit suffices
for the isometric dilation ``|psi>|0> -> sum_k G_k|psi>|k>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .states import I2, SX, SY, SZ, attach_vacuum_environments
from .tensor import DensityMatrix, kron, validate_density


class ChannelKind(enum.Enum):
    AMPLITUDE_DAMPING = "amplitude-damping"
    PHASE_DAMPING = "phase-damping"
    BIT_FLIP = "bit-flip"
    BIT_PHASE_FLIP = "bit-phase-flip"
    PHASE_FLIP = "phase-flip"

    @classmethod
    def parse(cls, name) -> "ChannelKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower().replace("_", "-"))
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown channel {name!r}; choose one of {choices}") from None

    @property
    def is_unital(self) -> bool:
        return self is not ChannelKind.AMPLITUDE_DAMPING


FLIP_AXIS = {
    ChannelKind.BIT_FLIP: SX,
    ChannelKind.BIT_PHASE_FLIP: SY,
    ChannelKind.PHASE_FLIP: SZ,
}


class ChannelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kind: ChannelKind | None
    p: float
    operators: tuple[np.ndarray, ...]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        return sum(g @ rho @ g.conj().T for g in self.operators)


def make_channel(kind, p: float) -> KrausChannel:
    kind = ChannelKind.parse(kind)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"parametrized time p={p} outside [0, 1]")
    q = 1.0 - p
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        ops = (
            np.array([[1, 0], [0, np.sqrt(q)]], dtype=complex),
            np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex),
        )
    elif kind is ChannelKind.PHASE_DAMPING:
        ops = (
            np.array([[1, 0], [0, np.sqrt(q)]], dtype=complex),
            np.array([[0, 0], [0, np.sqrt(p)]], dtype=complex),
        )
    else:
        # sqrt(p/2), not sqrt(p): the latter breaks completeness with q' = 1 - p/2.
        ops = (np.sqrt(1.0 - p / 2) * I2, np.sqrt(p / 2) * FLIP_AXIS[kind])
    for g in ops:
        g.setflags(write=False)
    return KrausChannel(kind, p, ops)


def completeness_check(ch: KrausChannel) -> float:
    total = sum(g.conj().T @ g for g in ch.operators)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def apply_local_channels(rho_ab: DensityMatrix, ch_a: KrausChannel, ch_b: KrausChannel) -> DensityMatrix:
    """Operator-sum action of independent channels on qubits A and B."""
    out = np.zeros((4, 4), dtype=complex)
    for ga in ch_a.operators:
        for gb in ch_b.operators:
            g = kron(ga, gb)
            out += g @ rho_ab.matrix @ g.conj().T
    return validate_density(out, rho_ab.dims)


def isometry(ch: KrausChannel) -> np.ndarray:
    """4x2 isometry from system to (system, environment), environment |k> per Kraus index."""
    if len(ch.operators) > 2:
        raise ChannelError(
            f"{len(ch.operators)} Kraus operators need more than one environment qubit"
        )
    v = np.zeros((4, 2), dtype=complex)
    for k, g in enumerate(ch.operators):
        v += kron(g, np.array([[1.0], [0.0]] if k == 0 else [[0.0], [1.0]]))
    return v


# (A, E_A, B, E_B) -> (A, B, E_A, E_B)
_REORDER = (0, 2, 1, 3)


def global_isometry(ch_a: KrausChannel, ch_b: KrausChannel) -> np.ndarray:
    """16x4 map from rho_AB to the A, B, E_A, E_B ordered global state."""
    w = kron(isometry(ch_a), isometry(ch_b))  # rows ordered A, E_A, B, E_B
    w = w.reshape((2, 2, 2, 2, 4)).transpose(_REORDER + (4,)).reshape(16, 4)
    return w


def dilate_and_evolve_global(rho_ab: DensityMatrix, ch_a: KrausChannel, ch_b: KrausChannel) -> DensityMatrix:
    """Joint system-environment state after both qubits meet vacuum reservoirs.

    Equivalent to applying ``V_A x V_B`` to ``rho_AB x |00><00|``; the mixed
    input is handled by conjugation rather than by purification.
    """
    if rho_ab.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho_ab.dims}")
    w = global_isometry(ch_a, ch_b)
    return validate_density(w @ rho_ab.matrix @ w.conj().T, (2, 2, 2, 2))


def global_unitary_check(rho_ab: DensityMatrix, ch_a: KrausChannel, ch_b: KrausChannel) -> np.ndarray:
    """Same global state built from the explicit vacuum-padded input.

    Kept separate from :func:`dilate_and_evolve_global` so tests can compare
    the isometry path with the ``rho_AB x |00><00|`` starting point.
    """
    start = attach_vacuum_environments(rho_ab).matrix
    w = global_isometry(ch_a, ch_b)
    # Columns of w act on AB; embed them into the vacuum sector of the 16-dim space.
    vac = np.zeros((16, 4), dtype=complex)
    for col in range(4):
        vac[col * 4, col] = 1.0
    lift = w @ vac.conj().T
    return lift @ start @ lift.conj().T
