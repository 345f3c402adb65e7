"""Lossless beam splitters and Mach-Zehnder interferometers acting on Fock states.

Port convention: inputs 1 and 2, outputs 3 and 4, with
``a3 = rho a1 + tau a2`` and ``a4 = tau a1 + rho a2`` for a symmetric
splitter. An asymmetric splitter carries a second pair ``(rho_p, tau_p)``
for light entering port 2: ``rho_p`` sends it to port 4, ``tau_p`` to port 3.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DomainError, SplitterError, TruncationError
from .fock import FockState, TwoModeState, number_state

COEFF_TOL = 1e-12


def _quarter_wave_residual(rho: complex, tau: complex) -> float:
    """``|rho||tau| |cos(phi_rho - phi_tau)|``: zero iff the phases differ by +-pi/2.

    Weighting by the magnitudes keeps the test well conditioned when a
    coefficient is tiny and its phase is dominated by round-off.
    """
    return abs((rho * tau.conjugate()).real)


def _anti_phase_residual(rho: complex, rho_p: complex, tau: complex, tau_p: complex) -> float:
    """Distance of ``rho rho' conj(tau tau')`` from the negative real axis.

    Zero iff ``phi_rho + phi_rho' - phi_tau - phi_tau' = +-pi`` (or a factor vanishes).
    """
    z = rho * rho_p * (tau * tau_p).conjugate()
    return abs(z + abs(z))


@dataclass(frozen=True)
class SplitterCoeffs:
    """Fresnel coefficients of a lossless splitter.

    ``symmetric=True`` asserts front-to-back symmetry, which forces
    ``phase(rho) - phase(tau) = +-pi/2``.
    """

    rho: complex
    tau: complex
    rho_p: complex | None = None
    tau_p: complex | None = None
    symmetric: bool = False

    def __post_init__(self):
        for name in ("rho", "tau", "rho_p", "tau_p"):
            value = getattr(self, name)
            if value is not None:
                value = complex(value)
                if not cmath.isfinite(value):
                    raise SplitterError(f"{name} must be finite")
                object.__setattr__(self, name, value)
        if (self.rho_p is None) != (self.tau_p is None):
            raise SplitterError("rho_p and tau_p must be given together")
        if abs(abs(self.rho) ** 2 + abs(self.tau) ** 2 - 1.0) > COEFF_TOL:
            raise SplitterError("|rho|^2 + |tau|^2 must equal 1")
        if self.symmetric and not _quarter_wave(self.rho, self.tau):
            raise SplitterError("symmetric splitter needs phase(rho) - phase(tau) = +-pi/2")
        if self.rho_p is not None:
            if abs(abs(self.rho_p) ** 2 + abs(self.tau_p) ** 2 - 1.0) > COEFF_TOL:
                raise SplitterError("|rho'|^2 + |tau'|^2 must equal 1")
            if abs(abs(self.rho) - abs(self.rho_p)) > COEFF_TOL or abs(abs(self.tau) - abs(self.tau_p)) > COEFF_TOL:
                raise SplitterError("asymmetric pair needs |rho| = |rho'| and |tau| = |tau'|")
            if _anti_phase_residual(self.rho, self.rho_p, self.tau, self.tau_p) > COEFF_TOL:
                raise SplitterError("asymmetric pair needs phi_rho + phi_rho' = phi_tau + phi_tau' +- pi")

    @classmethod
    def fifty_fifty(cls) -> "SplitterCoeffs":
        """The ``(1/sqrt2, i/sqrt2)`` splitter used throughout as the default."""
        return cls(1 / math.sqrt(2), 1j / math.sqrt(2), symmetric=True)

    @classmethod
    def from_reflectance(cls, reflectance: float, phase: float = 0.0, sign: int = 1) -> "SplitterCoeffs":
        """Symmetric splitter with ``|rho|^2 = reflectance`` and ``phase(tau) = phase +- pi/2``."""
        if not 0.0 <= reflectance <= 1.0:
            raise SplitterError("reflectance must lie in [0, 1]")
        rho = math.sqrt(reflectance) * cmath.exp(1j * phase)
        tau = math.sqrt(1.0 - reflectance) * cmath.exp(1j * (phase + math.copysign(math.pi / 2, sign)))
        return cls(rho, tau, symmetric=True)

    @property
    def port2(self) -> tuple[complex, complex]:
        """``(rho', tau')`` for light entering port 2."""
        if self.rho_p is None:
            return self.rho, self.tau
        return self.rho_p, self.tau_p

    @property
    def reflectance(self) -> float:
        return abs(self.rho) ** 2


def _quarter_wave(rho: complex, tau: complex) -> bool:
    return _quarter_wave_residual(rho, tau) <= COEFF_TOL


def split_joint_number(n1: int, n2: int, sc: SplitterCoeffs, n_max: int | None = None) -> TwoModeState:
    """Output of ``|n1>_1 |n2>_2``: amplitudes on ``|m>_3 |n1+n2-m>_4``."""
    if n1 < 0 or n2 < 0:
        raise DomainError("photon numbers must be non-negative")
    total = n1 + n2
    if n_max is None:
        n_max = total
    if total > n_max:
        raise TruncationError(f"{total} photons do not fit in n_max={n_max}")
    if n2 > 0 and sc.rho_p is None and not _quarter_wave(sc.rho, sc.tau):
        raise SplitterError("two-port input needs a symmetric splitter or an explicit (rho', tau') pair")
    rho_p, tau_p = sc.port2
    line = kernels.split_number_amplitudes(n1, n2, sc.rho, sc.tau, rho_p, tau_p)
    amps = np.zeros((n_max + 1, n_max + 1), dtype=np.complex128)
    m = np.arange(total + 1)
    amps[m, total - m] = line
    return TwoModeState(amps)


def split_state(s: FockState, sc: SplitterCoeffs) -> TwoModeState:
    """Send ``s`` into port 1 with vacuum in port 2.

    ``sum_n c_n sum_m C(n,m)^(1/2) rho^m tau^(n-m) |m>_3 |n-m>_4``; the output
    keeps the input truncation since photon number is conserved.
    """
    return TwoModeState(kernels.split_fock(s.amps, sc.rho, sc.tau))


class EntanglementReport(NamedTuple):
    mean3: float
    mean4: float
    correlation: float
    product_gap: float


def entanglement_check(n: int, sc: SplitterCoeffs) -> EntanglementReport:
    """Port means and the coincidence moment ``<m(n-m)>`` for ``|n>_1 |0>_2``.

    ``product_gap = <m>_3 <n-m>_4 - <m(n-m)>``; positive whenever the output
    is entangled.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    mean3, mean4, joint = split_joint_number(n, 0, sc).mean_numbers()
    return EntanglementReport(mean3, mean4, joint, mean3 * mean4 - joint)


def entanglement_closed_form(n: int, sc: SplitterCoeffs) -> EntanglementReport:
    r2, t2 = abs(sc.rho) ** 2, abs(sc.tau) ** 2
    return EntanglementReport(n * r2, n * t2, n * (n - 1) * r2 * t2, n * r2 * t2)


class BinomialMoment(NamedTuple):
    closed_form: float
    brute_force: float


def binomial_moment(n: int, x: float, y: float, power: int = 1) -> BinomialMoment:
    """``sum_m m^power C(n,m) x^m y^(n-m)`` in closed form and by direct summation."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if power not in (1, 2):
        raise DomainError("power must be 1 or 2")
    brute = math.fsum(m**power * math.comb(n, m) * x**m * y ** (n - m) for m in range(n + 1))
    s = x + y
    first = n * x * s ** (n - 1) if n >= 1 else 0.0
    if power == 1:
        return BinomialMoment(first, brute)
    second = n * (n - 1) * x * x * s ** (n - 2) if n >= 2 else 0.0
    return BinomialMoment(first + second, brute)


@dataclass(frozen=True)
class MZConfig:
    """Two splitters and the internal arm phase ``phi`` (added to the transmitted arm)."""

    s1: SplitterCoeffs
    s2: SplitterCoeffs
    phi: float = 0.0

    @classmethod
    def fifty_fifty(cls, phi: float = 0.0) -> "MZConfig":
        bs = SplitterCoeffs.fifty_fifty()
        return cls(bs, bs, phi)


def mz_effective(cfg: MZConfig) -> SplitterCoeffs:
    """Compound splitter: ``rho = rho1 rho2 + tau1 tau2 e^{i phi}``, ``tau = rho1 tau2 + tau1 rho2 e^{i phi}``.

    The port-2 pair ``(rho_24, tau_23)`` is attached, making the result an
    asymmetric lossless splitter.
    """
    t = MZTable.from_config(cfg)
    return SplitterCoeffs(t.rho13, t.tau14, t.rho24, t.tau23)


@dataclass(frozen=True)
class MZTable:
    """All eight compound coefficients; ``rho_ij`` / ``tau_ij`` map port i to port j."""

    rho13: complex
    rho24: complex
    rho31: complex
    rho42: complex
    tau14: complex
    tau23: complex
    tau32: complex
    tau41: complex

    @classmethod
    def from_config(cls, cfg: MZConfig) -> "MZTable":
        r1, t1 = cfg.s1.rho, cfg.s1.tau
        r2, t2 = cfg.s2.rho, cfg.s2.tau
        e = cmath.exp(1j * cfg.phi)
        return cls(
            rho13=r1 * r2 + t1 * t2 * e,
            rho24=r1 * r2 * e + t1 * t2,
            rho31=r2 * r1 + t2 * t1 * e,
            rho42=r2 * r1 * e + t2 * t1,
            tau14=r1 * t2 + t1 * r2 * e,
            tau23=r1 * t2 * e + t1 * r2,
            tau32=r2 * t1 + t2 * r1 * e,
            tau41=r2 * t1 * e + t2 * r1,
        )

    def residuals(self) -> dict[str, float]:
        """Deviations of every reciprocity, magnitude and phase identity (all should vanish)."""
        out = {
            "rho13-rho31": abs(self.rho13 - self.rho31),
            "rho24-rho42": abs(self.rho24 - self.rho42),
            "tau14-tau41": abs(self.tau14 - self.tau41),
            "tau23-tau32": abs(self.tau23 - self.tau32),
            "|rho13|-|rho24|": abs(abs(self.rho13) - abs(self.rho24)),
            "|tau14|-|tau23|": abs(abs(self.tau14) - abs(self.tau23)),
            "rho13*conj(tau14)+conj(rho24)*tau23": abs(
                self.rho13 * self.tau14.conjugate() + self.rho24.conjugate() * self.tau23
            ),
        }
        out["phase-sum-minus-pi"] = _anti_phase_residual(self.rho13, self.rho24, self.tau14, self.tau23)
        return out


def mz_compound_table(cfg: MZConfig) -> MZTable:
    """Compound coefficients for every entry port; both splitters must be symmetric."""
    for name, sc in (("s1", cfg.s1), ("s2", cfg.s2)):
        if not _quarter_wave(sc.rho, sc.tau):
            raise SplitterError(f"{name} is not a symmetric splitter")
    return MZTable.from_config(cfg)


def mz_split_number(n: int, cfg: MZConfig, n_max: int | None = None) -> TwoModeState:
    """``|n>_1 |0>_2`` through the interferometer, via the effective splitter."""
    return split_state(number_state(n, n if n_max is None else n_max), mz_effective(cfg))


def mz_triple_sum(n: int, cfg: MZConfig, n_max: int | None = None) -> TwoModeState:
    """Same output as :func:`mz_split_number`, from the explicit triple sum over
    the first splitter's photon division and the second splitter's two inputs."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n_max is None:
        n_max = n
    if n > n_max:
        raise TruncationError(f"{n} photons do not fit in n_max={n_max}")
    line = kernels.mz_triple_sum(n, cfg.s1.rho, cfg.s1.tau, cfg.s2.rho, cfg.s2.tau, cfg.phi)
    amps = np.zeros((n_max + 1, n_max + 1), dtype=np.complex128)
    k = np.arange(n + 1)
    amps[k, n - k] = line
    return TwoModeState(amps)
