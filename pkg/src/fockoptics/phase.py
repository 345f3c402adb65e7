"""Phase states, phase distributions and the hypothetical phase operator.

Covers the phase probability density of an arbitrary state, its moments,
the cos/sin estimator operators, and numerical demonstrations of why no
Hermitian phase operator reproduces the phase eigenstates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError
from .fock import RAW, FockState, ModeScale, phase_state
from .ops import apply_annihilation, number

TWO_PI = 2.0 * math.pi
PHASE_RANGES = ("zero_2pi", "pm_pi")


@dataclass(frozen=True)
class PhaseGrid:
    """``M`` uniform points on ``[lo, lo + 2pi)``."""

    M: int = 2048
    lo: float = 0.0

    def __post_init__(self):
        if self.M < 16:
            raise DomainError("a phase grid needs at least 16 points")

    @property
    def spacing(self) -> float:
        return TWO_PI / self.M

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.spacing * np.arange(self.M)

    def integrate(self, values) -> float:
        """Trapezoid rule for a 2pi-periodic integrand (exact for low-degree trig polynomials)."""
        return float(self.spacing * np.sum(values))


@dataclass(frozen=True)
class PhaseDistribution:
    grid: PhaseGrid
    density: np.ndarray

    def total(self) -> float:
        return self.grid.integrate(self.density)


def phase_distribution(s: FockState, grid: PhaseGrid | None = None) -> PhaseDistribution:
    """``P(phi) = |<phi|s>|^2 = |sum_n c_n e^{-i n phi}|^2 / 2pi`` on the grid."""
    grid = grid or PhaseGrid()
    density = kernels.phase_density(s.amps, grid.points) / s.norm_sq
    density.setflags(write=False)
    return PhaseDistribution(grid, density)


def phase_moments(s: FockState, center: float = 0.0, nodes: int | None = None):
    """Mean and variance of phi over the window ``(center - pi, center + pi]``.

    The moment integrands carry a polynomial factor and are not periodic, so
    they are integrated with Gauss-Legendre rather than the periodic grid.
    """
    if nodes is None:
        nodes = 4 * s.n_max + 256
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = math.pi * x
    w = math.pi * w
    density = kernels.phase_density(s.amps, center + u) / s.norm_sq
    first = float(np.sum(w * u * density))
    second = float(np.sum(w * u * u * density))
    return center + first, second - first * first


def phase_variance_series(absgamma: float, k_max: int = 4000, term_tol: float = 1e-12) -> float:
    """Phase variance of a coherent state from the reindexed (k, n) double series.

    ``pi^2/3 + 4 e^{-|g|^2} sum_k sum_{n<=(k-1)/2} (-|g|)^k / ((k-2n)^2 sqrt((k-n)! n!))``
    """
    if absgamma < 0:
        raise DomainError("absgamma must be non-negative")
    value, k, last, converged = kernels.phase_variance_series(absgamma, k_max, term_tol)
    if not converged:
        raise ConvergenceError(
            f"phase variance series for |gamma|={absgamma} not converged at k_max={k_max} "
            f"(last term {last:.3e})"
        )
    return value


def coherent_phase_density(absgamma: float, theta: float, phis, n_terms: int | None = None):
    """Direct double-sum evaluation of the coherent-state phase density.

    Used as an independent check on :func:`phase_distribution`; it sums
    ``|g|^{m+n} e^{i(m-n)(theta-phi)} / sqrt(m! n!)`` over a square block.
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if n_terms is None:
        n_terms = int(math.ceil(absgamma**2 + 12 * absgamma + 30))
    n = np.arange(n_terms)
    if absgamma == 0:
        weights = np.zeros(n_terms)
        weights[0] = 1.0
    else:
        log_w = n * math.log(absgamma) - 0.5 * np.array([math.lgamma(k + 1.0) for k in n])
        weights = np.exp(log_w - 0.5 * absgamma**2)
    diff = n[:, None] - n[None, :]
    pair = np.outer(weights, weights)
    out = np.empty(phis.shape[0])
    for j, phi in enumerate(phis):
        out[j] = np.real(np.sum(pair * np.exp(1j * diff * (theta - phi))))
    return out / TWO_PI


class TrigEstimates(NamedTuple):
    cos: float
    sin: float
    cos2: float
    sin2: float
    mean_n: float


def trig_estimators(s: FockState) -> TrigEstimates:
    """Expectations of ``(a^+ + a)/2<n>^1/2``, ``i(a^+ - a)/2<n>^1/2`` and their squares.

    The squares use the normal-ordered forms ``a^+a^+ + aa + 2a^+a + 1``, so
    the top of the truncated ladder does not leak in. Raw-convention states
    are not renormalized: every expectation, including ``<n>``, is taken with
    the stored amplitudes.
    """
    c = s.amps
    weight = 1.0 if s.norm_convention == RAW else 1.0 / s.norm_sq
    ac = apply_annihilation(c)
    q_a = complex(np.vdot(c, ac)) * weight
    q_aa = complex(np.vdot(c, apply_annihilation(ac))) * weight
    q_n = float(np.vdot(ac, ac).real) * weight
    q_1 = s.norm_sq * weight
    if q_n <= 0.0:
        raise DomainError("cos/sin estimators are undefined for the vacuum (<n> = 0)")
    root = math.sqrt(q_n)
    cos = q_a.real / root
    sin = q_a.imag / root
    cos2 = (2.0 * q_aa.real + 2.0 * q_n + q_1) / (4.0 * q_n)
    sin2 = (-2.0 * q_aa.real + 2.0 * q_n + q_1) / (4.0 * q_n)
    return TrigEstimates(cos, sin, cos2, sin2, q_n)


def raw_phase_state_estimates(phi: float, n_max: int) -> TrigEstimates:
    """Finite-``n_max`` closed forms for the raw truncated phase state."""
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    n = np.arange(n_max + 1, dtype=float)
    root_sum = float(np.sum(np.sqrt(n[1:])))
    pair_sum = float(np.sum(np.sqrt(n[2:] * (n[2:] - 1.0))))
    half_sum = float(np.sum(n + 0.5))
    ratio = root_sum / (math.sqrt(math.pi) * (n_max + 1) * math.sqrt(n_max))
    lead = pair_sum / (n_max * (n_max + 1.0))
    spread = half_sum / pair_sum if pair_sum else math.inf
    cos2 = lead * ((2.0 * math.cos(phi) ** 2 - 1.0) + spread)
    sin2 = lead * ((2.0 * math.sin(phi) ** 2 - 1.0) + spread)
    return TrigEstimates(ratio * math.cos(phi), ratio * math.sin(phi), cos2, sin2, n_max / (4 * math.pi))


def cos_estimator_ratio(n_max: int, convention: str = "paper_raw") -> float:
    """``<cos phi> / cos phi`` for the truncated phase state (independent of phi)."""
    return trig_estimators(phase_state(0.0, n_max, convention)).cos


def phase_operator(n_max: int, range: str = "zero_2pi") -> np.ndarray:
    """Matrix of the would-be phase operator in the number basis.

    ``zero_2pi``: diagonal pi, off-diagonal ``i/(n-m)``.
    ``pm_pi``: diagonal 0, off-diagonal ``i(-1)^(n-m)/(n-m)``.
    """
    if range not in PHASE_RANGES:
        raise DomainError(f"range must be one of {PHASE_RANGES}")
    idx = np.arange(n_max + 1)
    diff = idx[None, :] - idx[:, None]
    off = diff != 0
    mat = np.zeros((n_max + 1, n_max + 1), dtype=np.complex128)
    if range == "zero_2pi":
        mat[off] = 1j / diff[off]
        mat[~off] = math.pi
    else:
        mat[off] = 1j * np.where(diff[off] % 2, -1.0, 1.0) / diff[off]
    return mat


class CommutatorResidual(NamedTuple):
    applied: np.ndarray
    closed_form: np.ndarray


def number_phase_residual(s: FockState, range: str = "zero_2pi") -> CommutatorResidual:
    """``[n, phi]|s> - i|s>`` from the matrices, next to its closed form.

    For ``zero_2pi`` the closed form is ``-i (sum_n c_n) sum_m |m>``; for
    ``pm_pi`` the alternating analogue ``-i sum_n (-1)^(n-m) c_n``.
    """
    c = s.amps
    num = number(s.n_max)
    ph = phase_operator(s.n_max, range)
    applied = (num @ ph - ph @ num) @ c - 1j * c
    if range == "zero_2pi":
        closed = -1j * np.sum(c) * np.ones_like(c)
    else:
        sign = np.where(np.arange(s.n_max + 1) % 2, -1.0, 1.0)
        closed = -1j * sign * np.sum(sign * c)
    return CommutatorResidual(applied, closed)


class EigenDefect(NamedTuple):
    applied: np.ndarray
    closed_form: np.ndarray
    expected: np.ndarray

    @property
    def defect(self) -> np.ndarray:
        return self.applied - self.expected


def phase_eigen_defect(phi: float, n_max: int, range: str = "zero_2pi") -> EigenDefect:
    """Apply the phase-operator matrix to ``(2pi)^(-1/2) sum_n e^{i n phi}|n>``.

    ``closed_form`` is the finite partial sum
    ``(2pi)^(-1/2) e^{i m phi} [pi + i sum_{k=-m, k!=0}^{n_max-m} e^{i k phi}/k]``
    (without the pi and with alternating signs for ``pm_pi``); ``expected``
    is what an eigenvalue equation would demand, ``phi |phi>``.
    """
    amps = np.exp(1j * np.arange(n_max + 1) * phi) / math.sqrt(TWO_PI)
    applied = phase_operator(n_max, range) @ amps
    closed = np.empty(n_max + 1, dtype=np.complex128)
    for m in np.arange(n_max + 1):
        k = np.arange(-m, n_max - m + 1)
        k = k[k != 0]
        terms = np.exp(1j * k * phi) / k
        if range == "zero_2pi":
            bracket = math.pi + 1j * np.sum(terms)
        else:
            bracket = 1j * np.sum(np.where(k % 2, -1.0, 1.0) * terms)
        closed[m] = amps[m] * bracket
    return EigenDefect(applied, closed, phi * amps)


def shift_ops(n_max: int):
    """``(E_plus, E_minus)`` = matrices of ``sum |n><n+1|`` and ``sum |n+1><n|``."""
    e_plus = np.eye(n_max + 1, k=1, dtype=np.complex128)
    return e_plus, e_plus.T.copy()


def number_shift_phase(s: FockState, phi0: float) -> FockState:
    """Apply ``exp(i phi0 n)``, which shifts a phase state by ``phi0``."""
    ramp = np.exp(1j * phi0 * np.arange(s.n_max + 1))
    return FockState(s.amps * ramp, s.norm_convention, s.tail_mass)


def dirichlet_kernel(dphi, N: int):
    """Partial sum ``(2pi)^-1 sum_{n=0}^N e^{i n dphi}`` (finite-N ``<phi'|phi>``)."""
    if N < 1:
        raise DomainError("N must be at least 1")
    dphi = np.asarray(dphi, dtype=float)
    step = np.exp(1j * dphi)
    term = np.ones_like(step)
    total = np.ones_like(step)
    for _ in range(N):
        term = term * step
        total = total + term
    out = total / TWO_PI
    return complex(out) if out.ndim == 0 else out


class EFieldExpectation(NamedTuple):
    coefficient: float
    sqrt_sum: float
    asymptotic: float
    growth_ratio: float


def efield_expect_phase_state(n_max: int, ms: ModeScale | None = None) -> EFieldExpectation:
    """Amplitude of the field expectation in the raw truncated phase state.

    ``<E> = -(sqrt(s)/pi) (sum_{m=1}^{n_max} sqrt(m)) [e' sin(x+phi) + e'' cos(x+phi)]``;
    the sum grows like ``(2/3) n_max^{3/2}``, so the amplitude diverges.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    ms = ms or ModeScale()
    sqrt_sum = float(np.sum(np.sqrt(np.arange(1, n_max + 1, dtype=float))))
    asymptotic = 2.0 * n_max**1.5 / 3.0
    coefficient = math.sqrt(ms.scale) / math.pi * sqrt_sum
    return EFieldExpectation(coefficient, sqrt_sum, asymptotic, sqrt_sum / asymptotic)
