"""Correlation dynamics of two qubits coupled to independent reservoirs."""

__version__ = "0.1.0"

from .channels import ChannelKind, KrausChannel, make_channel
from .oracles import BipartitionLabel
from .states import BellDiagonalParams, GeneralTwoQubitParams
from .tensor import DensityMatrix, validate_density

__all__ = [
    "BellDiagonalParams",
    "BipartitionLabel",
    "ChannelKind",
    "DensityMatrix",
    "GeneralTwoQubitParams",
    "KrausChannel",
    "make_channel",
    "validate_density",
]
