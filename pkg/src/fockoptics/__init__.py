"""Truncated Fock-space quantum optics: states, operators, phase, beam splitters and detection."""
from . import detect, fock, network, ops, phase
from .errors import (
    ConvergenceError,
    DimensionMismatch,
    DomainError,
    FockError,
    NonHermitianError,
    SplitterError,
    TruncationError,
)
from .fock import FockState, ModeScale, TwoModeState, coherent_state, number_state, phase_state
from .kernels import BACKEND
from .network import MZConfig, SplitterCoeffs

__version__ = "0.1.0"
