"""Correlation trajectories over the parametrized time ``p``."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .channels import ChannelKind, apply_local_channels, dilate_and_evolve_global, make_channel
from .measures import (
    DEFAULT_SETTINGS,
    MEASURE_NAMES,
    CorrelationReport,
    OptimizerSettings,
    correlation_report,
    is_x_state,
    mutual_information,
    wootters_lambda,
    xstate_lambda,
)
from .oracles import BipartitionLabel
from .states import (
    BellDiagonalParams,
    GeneralTwoQubitParams,
    bell_diagonal_state,
    general_two_qubit_state,
)
from .tensor import DensityMatrix, InvalidStateError, partial_trace

log = logging.getLogger(__name__)

DEFAULT_P_POINTS = 101


class SweepError(RuntimeError):
    """Evolution failed at a specific grid point."""

    def __init__(self, p: float, cause: Exception):
        self.p = p
        self.cause = cause
        super().__init__(f"at p={p:.12g}: {cause}")


def initial_state(initial) -> DensityMatrix:
    if isinstance(initial, DensityMatrix):
        return initial
    if isinstance(initial, BellDiagonalParams):
        return bell_diagonal_state(initial)
    if isinstance(initial, GeneralTwoQubitParams):
        return general_two_qubit_state(initial)
    raise TypeError(f"unsupported initial state description {type(initial).__name__}")


def uniform_p_grid(points: int = DEFAULT_P_POINTS) -> tuple[float, ...]:
    if points < 1:
        raise ValueError("need at least one p value")
    if points == 1:
        return (0.0,)
    return tuple(float(p) for p in np.linspace(0.0, 1.0, points))


@dataclass(frozen=True)
class SweepConfig:
    channel_kind: ChannelKind
    initial: BellDiagonalParams | GeneralTwoQubitParams
    p_grid: tuple[float, ...] = field(default_factory=uniform_p_grid)
    partitions: tuple[BipartitionLabel, ...] = tuple(BipartitionLabel)
    measures: tuple[str, ...] = MEASURE_NAMES
    optimizer: OptimizerSettings = DEFAULT_SETTINGS

    def __post_init__(self):
        object.__setattr__(self, "channel_kind", ChannelKind.parse(self.channel_kind))
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        object.__setattr__(
            self, "partitions", tuple(BipartitionLabel.parse(x) for x in self.partitions)
        )
        object.__setattr__(self, "measures", tuple(self.measures))
        grid = np.asarray(self.p_grid)
        if grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("p_grid must be non-empty and strictly increasing")
        if grid[0] < 0 or grid[-1] > 1:
            raise ValueError("p_grid values must lie in [0, 1]")
        if not self.partitions:
            raise ValueError("at least one partition is required")
        if not self.measures:
            raise ValueError("at least one measure is required")
        unknown = set(self.measures) - set(MEASURE_NAMES)
        if unknown:
            raise ValueError(f"unknown measures {sorted(unknown)}")


@dataclass(frozen=True)
class Trajectory:
    partition: BipartitionLabel
    rows: tuple[tuple[float, CorrelationReport], ...]

    @property
    def p(self) -> np.ndarray:
        return np.array([r[0] for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([r[1].as_row()[name] for r in self.rows])


def extract_bipartition(global_state: DensityMatrix, part) -> DensityMatrix:
    """Two-qubit reduced state of a named pair, first letter as first factor."""
    if global_state.dims != (2, 2, 2, 2):
        raise ValueError(f"expected a four-qubit global state, got dims {global_state.dims}")
    part = BipartitionLabel.parse(part)
    return partial_trace(global_state, part.indices)


def evolve_global(rho_ab: DensityMatrix, kind, p: float) -> DensityMatrix:
    ch = make_channel(kind, p)
    return dilate_and_evolve_global(rho_ab, ch, ch)


def sweep(config: SweepConfig) -> list[Trajectory]:
    rho0 = initial_state(config.initial)
    rows: dict[BipartitionLabel, list] = {part: [] for part in config.partitions}
    for p in config.p_grid:
        try:
            global_state = evolve_global(rho0, config.channel_kind, p)
            for part in config.partitions:
                reduced = extract_bipartition(global_state, part)
                rows[part].append((p, correlation_report(reduced, config.measures, config.optimizer)))
        except (InvalidStateError, ArithmeticError) as exc:
            raise SweepError(p, exc) from exc
        log.debug("p=%.4f done", p)
    return [Trajectory(part, tuple(rows[part])) for part in config.partitions]


def entanglement_witness(reduced: DensityMatrix) -> float:
    """Signed pre-clamp concurrence quantity (positive iff entangled)."""
    m = reduced.matrix
    if is_x_state(m):
        return xstate_lambda(m)
    return wootters_lambda(m)


def _bisect(f: Callable[[float], float], lo: float, hi: float, f_lo_positive: bool, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == f_lo_positive:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_transition(
    kind,
    initial,
    partition,
    direction: str,
    scan_points: int = 1001,
    tol: float = 1e-12,
    zero_tol: float = 1e-12,
) -> float | None:
    """Sudden death or birth point of entanglement in one bipartition.

    ``death``: the first p where concurrence drops from positive to zero.
    ``birth``: the first p after which a vanishing concurrence turns positive.
    Crossings that only touch the endpoints p=0 or p=1 are asymptotic, not
    sudden, and give ``None`` (as does the absence of any crossing).
    """
    if direction not in ("death", "birth"):
        raise ValueError(f"direction must be 'death' or 'birth', got {direction!r}")
    kind = ChannelKind.parse(kind)
    part = BipartitionLabel.parse(partition)
    rho0 = initial_state(initial)

    def f(p: float) -> float:
        return entanglement_witness(extract_bipartition(evolve_global(rho0, kind, p), part))

    grid = np.linspace(0.0, 1.0, scan_points)
    vals = np.array([f(p) for p in grid])
    want_positive_left = direction == "death"
    for k in range(len(grid) - 1):
        left, right = vals[k], vals[k + 1]
        if want_positive_left and left > 0 and right <= 0:
            if k + 1 == len(grid) - 1 and right > -zero_tol:
                return None
            return _bisect(f, grid[k], grid[k + 1], True, tol)
        if not want_positive_left and left <= 0 and right > 0:
            if k == 0 and left > -zero_tol:
                return None
            return _bisect(f, grid[k], grid[k + 1], False, tol)
    return None


def operational_measures(rho_ab: DensityMatrix, kind) -> tuple[float, float]:
    """(quantum, classical) correlation from the fully decohered mutual information."""
    ch = make_channel(kind, 1.0)
    c_op = mutual_information(apply_local_channels(rho_ab, ch, ch))
    return mutual_information(rho_ab) - c_op, c_op
