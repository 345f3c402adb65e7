"""Truncated single- and two-mode Fock-space states.

States are immutable: amplitude arrays are copied on construction and marked
read-only. All constructors return unit-norm states except the raw phase
state, whose norm follows the (2pi)^(-1/2) amplitude convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants
from scipy.special import gammainc

from .errors import DimensionMismatch, DomainError, TruncationError

UNIT = "unit"
RAW = "raw"

NORM_TOL = 1e-12
TAIL_TOL = 1e-10


def _frozen(array, dtype=np.complex128):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def principal_phase(z) -> float:
    """Polar angle of ``z`` in (-pi, pi]."""
    theta = math.atan2(complex(z).imag, complex(z).real)
    return math.pi if theta == -math.pi else theta


def wrap_phase(theta: float) -> float:
    """Map a real angle to (-pi, pi]."""
    wrapped = math.remainder(theta, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class FockState:
    """Pure state ``sum_n c_n |n>`` of one mode, truncated at ``n_max``.

    ``tail_mass`` records probability discarded by truncation before
    renormalization (only coherent states set it).
    """

    amps: np.ndarray
    norm_convention: str = UNIT
    tail_mass: float = 0.0

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("amplitudes must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        if self.norm_convention not in (UNIT, RAW):
            raise DomainError(f"unknown norm convention {self.norm_convention!r}")
        if self.norm_convention == UNIT and abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise DomainError("unit-convention state is not normalized")
        object.__setattr__(self, "amps", amps)

    @property
    def n_max(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def phases(self) -> np.ndarray:
        """Principal-value phases of the stored amplitudes."""
        return np.array([principal_phase(c) for c in self.amps])

    @classmethod
    def from_amplitudes(cls, amps, normalize=True) -> "FockState":
        amps = np.asarray(amps, dtype=np.complex128)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise DomainError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps)

    def padded(self, n_max: int) -> "FockState":
        """Same state on a larger basis (zero amplitudes appended)."""
        if n_max < self.n_max:
            raise DomainError("padding cannot shrink the basis")
        amps = np.zeros(n_max + 1, dtype=np.complex128)
        amps[: self.n_max + 1] = self.amps
        return FockState(amps, self.norm_convention, self.tail_mass)

    def upper_mass(self, start: int) -> float:
        """Probability (relative to the norm) carried by indices >= ``start``."""
        return float(np.sum(np.abs(self.amps[start:]) ** 2) / self.norm_sq)


@dataclass(frozen=True)
class TwoModeState:
    """Joint amplitudes ``c[m, n]`` over ``|m>_3 |n>_4`` with shared truncation."""

    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise DomainError("two-mode amplitudes must form a square matrix")
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        object.__setattr__(self, "amps", amps)

    @property
    def n_max(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def photon_distribution(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def marginal(self, which: str = "left") -> np.ndarray:
        """Photon-number distribution of one port."""
        probs = self.photon_distribution()
        if which == "left":
            return probs.sum(axis=1)
        if which == "right":
            return probs.sum(axis=0)
        raise DomainError(f"which must be 'left' or 'right', got {which!r}")

    def mean_numbers(self):
        """(<n_left>, <n_right>, <n_left n_right>) normalized by the state norm."""
        probs = self.photon_distribution()
        idx = np.arange(self.n_max + 1)
        norm = float(probs.sum())
        left = float(idx @ probs.sum(axis=1)) / norm
        right = float(probs.sum(axis=0) @ idx) / norm
        joint = float(idx @ probs @ idx) / norm
        return left, right, joint


@dataclass(frozen=True)
class ModeScale:
    """Field prefactor ``s = hbar*omega / (2*eps0*V)``.

    With only ``scale`` given the engine works in mode units (default s = 1).
    Giving ``omega`` and ``volume`` fixes ``scale`` from CODATA constants.
    """

    scale: float | None = None
    omega: float | None = None
    volume: float | None = None
    _physical: bool = field(default=False, init=False, repr=False)

    def __post_init__(self):
        has_phys = self.omega is not None and self.volume is not None
        if (self.omega is None) != (self.volume is None) and self.scale is None:
            raise DomainError("omega and volume must be given together")
        if has_phys:
            if self.omega <= 0 or self.volume <= 0:
                raise DomainError("omega and volume must be positive")
            computed = constants.hbar * self.omega / (2.0 * constants.epsilon_0 * self.volume)
            if self.scale is not None and abs(self.scale - computed) > 1e-12 * computed:
                raise DomainError(
                    f"scale {self.scale!r} inconsistent with omega/volume ({computed!r})"
                )
            object.__setattr__(self, "scale", computed)
            object.__setattr__(self, "_physical", True)
        elif self.scale is None:
            object.__setattr__(self, "scale", 1.0)
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError("scale must be positive and finite")

    @property
    def physical(self) -> bool:
        return self._physical

    @property
    def hbar_omega(self) -> float:
        if self.omega is None:
            raise DomainError("hbar*omega requires omega")
        return constants.hbar * self.omega

    @property
    def energy_flux_unit(self) -> float:
        """``hbar*omega*c/V``, the coefficient of the photon-counting flux."""
        if not self.physical:
            raise DomainError("energy flux requires omega and volume")
        return constants.hbar * self.omega * constants.c / self.volume


def auto_truncation(gamma) -> int:
    """Basis size that keeps a coherent state's Poisson tail far below 1e-12."""
    r = abs(complex(gamma))
    return int(math.ceil(r * r + 10.0 * r + 20.0))


def coherent_tail_mass(gamma, n_max: int) -> float:
    """Probability ``P(N > n_max)`` for the Poisson law with mean ``|gamma|^2``."""
    mean = abs(complex(gamma)) ** 2
    if mean == 0.0:
        return 0.0
    return float(gammainc(n_max + 1, mean))


def number_state(n: int, n_max: int) -> FockState:
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    if not 0 <= n <= n_max:
        raise DomainError(f"number state |{n}> outside basis 0..{n_max}")
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = 1.0
    return FockState(amps)


def coherent_amplitudes(gamma, n_max: int) -> np.ndarray:
    """Unnormalized-by-truncation amplitudes ``exp(-|g|^2/2) g^n / sqrt(n!)``."""
    gamma = complex(gamma)
    r = abs(gamma)
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    if r == 0.0:
        amps[0] = 1.0
        return amps
    n = np.arange(n_max + 1)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * np.array([math.lgamma(k + 1.0) for k in n])
    return np.exp(log_mag) * np.exp(1j * n * principal_phase(gamma))


def coherent_state(gamma, n_max: int | None = None, allow_truncation: bool = False) -> FockState:
    """Glauber state ``|gamma>``, renormalized after truncation.

    Raises TruncationError when the discarded tail exceeds 1e-10 unless
    ``allow_truncation`` is set.
    """
    if n_max is None:
        n_max = auto_truncation(gamma)
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    tail = coherent_tail_mass(gamma, n_max)
    if tail > TAIL_TOL and not allow_truncation:
        raise TruncationError(
            f"n_max={n_max} drops tail mass {tail:.3e} of |{complex(gamma)}>; "
            f"use n_max >= {auto_truncation(gamma)}"
        )
    amps = coherent_amplitudes(gamma, n_max)
    amps = amps / np.linalg.norm(amps)
    return FockState(amps, UNIT, tail)


def phase_state(phi: float, n_max: int, convention: str = "unit") -> FockState:
    """Truncated phase state with amplitudes proportional to ``exp(i n phi)``.

    ``convention="paper_raw"`` keeps the ``[2pi(n_max+1)]^(-1/2)`` amplitudes,
    whose total norm is 1/(2pi); ``"unit"`` normalizes to one.
    """
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    n = np.arange(n_max + 1)
    ramp = np.exp(1j * n * phi)
    if convention == "unit":
        return FockState(ramp / math.sqrt(n_max + 1.0))
    if convention == "paper_raw":
        return FockState(ramp / math.sqrt(2.0 * math.pi * (n_max + 1.0)), RAW)
    raise DomainError(f"unknown phase-state convention {convention!r}")


def inner(a: FockState, b: FockState) -> complex:
    """``<a|b>``."""
    if a.n_max != b.n_max:
        raise DimensionMismatch(f"n_max {a.n_max} != {b.n_max}")
    return complex(np.vdot(a.amps, b.amps))


def tensor(a: FockState, b: FockState) -> TwoModeState:
    if a.n_max != b.n_max:
        raise DimensionMismatch(f"n_max {a.n_max} != {b.n_max}")
    return TwoModeState(np.outer(a.amps, b.amps))


def reduced_density(s: TwoModeState, which: str = "left") -> np.ndarray:
    c = s.amps / math.sqrt(s.norm_sq)
    if which == "left":
        return c @ c.conj().T
    if which == "right":
        return c.T @ c.conj()
    raise DomainError(f"which must be 'left' or 'right', got {which!r}")


def reduced_purity(s: TwoModeState, which: str = "left") -> float:
    """``Tr(rho_A^2)``: 1 for product states, below 1 for entangled ones."""
    rho = reduced_density(s, which)
    return float(np.real(np.sum(rho * rho.T)))
