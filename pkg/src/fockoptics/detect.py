"""Homodyne detection, quadrature noise, photon counting and coherence functions.

Quantum outputs are in powers of the mode scale ``s = hbar*omega/(2 eps0 V)``
(1 in mode units). Two-mode operators act on amplitude matrices ``C[i, j]``
over ``|i>_1 |j>_2``: an operator ``A`` on mode 1 is ``A @ C`` and on mode 2
is ``C @ A.T``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, TruncationError
from .fock import FockState, ModeScale, auto_truncation, coherent_state, principal_phase
from .network import MZConfig, SplitterCoeffs, mz_effective, split_state
from .ops import annihilation, apply_annihilation, creation, expect, identity, number, quadrature_p, quadrature_q, variance

# the 2/Z0 prefactor of the intensity operators, with |E| = 2 sqrt(s) |gamma|
CALIBRATION = 2.0
QUARTER_MASS_TOL = 1e-8


@dataclass(frozen=True)
class ClassicalField:
    """``E(t) = amp * cos(omega t - phase)``."""

    amp: float
    phase: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if not self.amp >= 0:
            raise DomainError("field amplitude must be non-negative")


class ClassicalSignal(NamedTuple):
    s1: float
    s2: float
    s: float
    s_filtered: float


def classical_signal(f1: ClassicalField, f2: ClassicalField, t: float = 0.0) -> ClassicalSignal:
    """Detector intensities behind a 50/50 splitter and their balanced difference.

    ``s_filtered`` keeps only the difference-frequency term
    ``|E1||E2| sin[(w2 - w1) t - phi2 + phi1]``.
    """
    x1 = f1.omega * t - f1.phase
    x2 = f2.omega * t - f2.phase
    s1 = 0.5 * (f1.amp * math.cos(x1) + f2.amp * math.sin(x2)) ** 2
    s2 = 0.5 * (f1.amp * math.sin(x1) + f2.amp * math.cos(x2)) ** 2
    beat = f1.amp * f2.amp * math.sin((f2.omega - f1.omega) * t - f2.phase + f1.phase)
    return ClassicalSignal(s1, s2, s1 - s2, beat)


def local_oscillator(gamma2, phi2: float) -> complex:
    """Coherent amplitude ``gamma2 e^{i phi2}`` of the local oscillator."""
    return complex(gamma2) * complex(math.cos(phi2), math.sin(phi2))


def _moments(s: FockState):
    """``<a>, <aa>, <a^+a>`` normalized by the state norm."""
    c = s.amps
    ac = apply_annihilation(c)
    norm = s.norm_sq
    return (
        complex(np.vdot(c, ac)) / norm,
        complex(np.vdot(c, apply_annihilation(ac))) / norm,
        float(np.vdot(ac, ac).real) / norm,
    )


def homodyne_mean(s: FockState, gamma2, phi2: float, ms: ModeScale | None = None) -> float:
    """Single-mode closed form ``-s|g2|[sin phi2 <a + a^+> + cos phi2 <i(a - a^+)>]``.

    Written for a general complex ``gamma2``: ``s * 2 Im(<a> conj(g))`` with
    ``g = gamma2 e^{i phi2}``, which reduces to the bracket above for real ``gamma2``.
    """
    ms = ms or ModeScale()
    g = local_oscillator(gamma2, phi2)
    a1, _, _ = _moments(s)
    return ms.scale * (1j * g * a1.conjugate() - 1j * g.conjugate() * a1).real


def homodyne_mean_coherent(gamma1, gamma2, phi2: float, ms: ModeScale | None = None) -> float:
    """Closed form for a coherent signal, no matrices: ``2 s Im(gamma1 conj(g))``."""
    ms = ms or ModeScale()
    g = local_oscillator(gamma2, phi2)
    return 2.0 * ms.scale * (complex(gamma1) * g.conjugate()).imag


def classical_quantum_ratio(gamma1, gamma2, phi2: float = 0.0, ms: ModeScale | None = None) -> float:
    """``CALIBRATION * <s>`` over the filtered classical homodyne signal.

    The classical fields are ``|E| = 2 sqrt(s)|gamma|`` with the phases of
    ``gamma1`` and the local oscillator.
    """
    ms = ms or ModeScale()
    g = local_oscillator(gamma2, phi2)
    root = math.sqrt(ms.scale)
    f1 = ClassicalField(2 * root * abs(complex(gamma1)), principal_phase(gamma1))
    f2 = ClassicalField(2 * root * abs(g), principal_phase(g) if g != 0 else 0.0)
    classical = classical_signal(f1, f2, 0.0).s_filtered
    if classical == 0.0:
        raise DomainError("classical signal vanishes; ratio undefined")
    return CALIBRATION * homodyne_mean_coherent(gamma1, gamma2, phi2, ms) / classical


def _joint(s: FockState, g: complex):
    """Signal padded by two levels and the oscillator on a shared basis."""
    n_max = max(s.n_max + 2, auto_truncation(g) + 10)
    lo = coherent_state(g, n_max)
    c = np.outer(s.padded(n_max).amps, lo.amps) / math.sqrt(s.norm_sq)
    return c, n_max


def _apply_difference(c: np.ndarray, scale: float) -> np.ndarray:
    """``s * i(a1^+ a2 - a2^+ a1)`` on an amplitude matrix."""
    n_max = c.shape[0] - 1
    a = annihilation(n_max)
    ad = creation(n_max)
    return 1j * scale * (ad @ c @ a.T - a @ c @ ad.T)


def homodyne_mean_two_mode(s: FockState, gamma2, phi2: float, ms: ModeScale | None = None) -> float:
    """``<s1 - s2>`` from the full two-mode port operators on ``s (x) |g>``."""
    ms = ms or ModeScale()
    c, _ = _joint(s, local_oscillator(gamma2, phi2))
    return float(np.vdot(c, _apply_difference(c, ms.scale)).real)


@dataclass(frozen=True)
class HomodyneReport:
    mean: float
    second_moment: float
    variance: float
    closed_mean: float
    closed_second_moment: float
    closed_final: float
    units: int = 2

    @property
    def max_deviation(self) -> float:
        return max(
            abs(self.mean - self.closed_mean),
            abs(self.second_moment - self.closed_second_moment),
            abs(self.second_moment - self.closed_final),
        )


def homodyne_closed_second_moment(s: FockState, gamma2, phi2: float, ms: ModeScale | None = None):
    """Both closed forms of ``<s^2>``: the ladder-moment line and the quadrature line.

    Ladder line: ``s^2[-g^2<a^+a^+> + (1+|g|^2)<a^+a> + |g|^2<aa^+> - g*^2<aa>]``.
    Quadrature line: ``s^2<a^+a> + s|g|^2[sin^2 phi2 <Eq^2> + cos^2 phi2 <Ep^2>
    + s sin(2 phi2) <i(aa - a^+a^+)>]``.
    """
    ms = ms or ModeScale()
    sc = ms.scale
    g = local_oscillator(gamma2, phi2)
    _, aa, n = _moments(s)
    g2 = abs(g) ** 2
    ladder = sc * sc * (-(g * g) * aa.conjugate() + (1 + g2) * n + g2 * (n + 1) - (g.conjugate() ** 2) * aa).real
    # the quadrature line assumes g = |g| e^{i phi2}; use the oscillator's own phase
    theta = principal_phase(g) if g != 0 else phi2
    eq2 = sc * (2 * aa.real + 2 * n + 1)
    ep2 = sc * (-2 * aa.real + 2 * n + 1)
    cross = (1j * (aa - aa.conjugate())).real
    final = sc * sc * n + sc * g2 * (
        math.sin(theta) ** 2 * eq2 + math.cos(theta) ** 2 * ep2 + sc * math.sin(2 * theta) * cross
    )
    return float(ladder), float(final)


def homodyne_noise(s: FockState, gamma2, phi2: float, ms: ModeScale | None = None) -> HomodyneReport:
    """Mean, second moment and variance of the balanced difference signal.

    The numeric values come from the two-mode difference operator applied to
    ``s (x) |g>``; ``<s^2> = ||D psi||^2`` since ``D`` is Hermitian.
    """
    ms = ms or ModeScale()
    c, _ = _joint(s, local_oscillator(gamma2, phi2))
    dc = _apply_difference(c, ms.scale)
    mean = float(np.vdot(c, dc).real)
    second = float(np.vdot(dc, dc).real)
    ladder, final = homodyne_closed_second_moment(s, gamma2, phi2, ms)
    return HomodyneReport(
        mean=mean,
        second_moment=second,
        variance=max(0.0, second - mean * mean),
        closed_mean=homodyne_mean(s, gamma2, phi2, ms),
        closed_second_moment=ladder,
        closed_final=final,
    )


def port_operators(n_max: int, ms: ModeScale | None = None):
    """Dense ``E^(-)E^(+)`` at detectors D1 and D2 on the ``kron`` basis of both modes.

    D1: ``(s/2)(n1 + n2 + i a1^+a2 - i a2^+a1)``; D2 flips the sign of the cross terms.
    """
    ms = ms or ModeScale()
    a = annihilation(n_max)
    ad = creation(n_max)
    one = identity(n_max)
    n_sum = np.kron(number(n_max), one) + np.kron(one, number(n_max))
    cross = 1j * np.kron(ad, a) - 1j * np.kron(a, ad)
    half = 0.5 * ms.scale
    return half * (n_sum + cross), half * (n_sum - cross)


class QuadratureStats(NamedTuple):
    mean_q: float
    mean_p: float
    delta_q: float
    delta_p: float
    product: float


def quadrature_stats(s: FockState, ms: ModeScale | None = None) -> QuadratureStats:
    """Means and spreads of ``E_q``, ``E_p`` and the uncertainty product."""
    ms = ms or ModeScale()
    if s.upper_mass(s.n_max + 1 - (s.n_max + 1) // 4) > QUARTER_MASS_TOL:
        raise TruncationError("state occupies the top quarter of the basis; enlarge n_max")
    q = quadrature_q(s.n_max, ms)
    p = quadrature_p(s.n_max, ms)
    dq = math.sqrt(max(0.0, variance(q, s)))
    dp = math.sqrt(max(0.0, variance(p, s)))
    return QuadratureStats(expect(q, s).real, expect(p, s).real, dq, dp, dq * dp)


COUNTING_UNITS = ("mode", "energy", "photons")


def counting_rate(s: FockState, ms: ModeScale | None = None, units: str = "mode") -> float:
    """Photodetection rate ``<a^+a>``; ``energy`` scales by ``hbar w c/V``, ``photons`` by ``c/V``."""
    if units not in COUNTING_UNITS:
        raise DomainError(f"units must be one of {COUNTING_UNITS}")
    _, _, n = _moments(s)
    if units == "mode":
        return n
    ms = ms or ModeScale()
    flux = ms.energy_flux_unit
    return flux * n if units == "energy" else flux / ms.hbar_omega * n


class G1Report(NamedTuple):
    port3: float
    port4: float
    difference: float
    closed_port3: float
    closed_port4: float
    closed_difference: float


def g1_mz(s: FockState, phi: float, ms: ModeScale | None = None, cfg: MZConfig | None = None) -> G1Report:
    """Mach-Zehnder exit-port intensities for ``s`` entering port 1.

    Numeric values are ``s<n3>``, ``s<n4>`` on the split two-mode state. The
    closed forms are ``s<n> sin^2(phi/2)`` and ``s<n> cos^2(phi/2)`` for the
    default 50/50 pair; for a custom ``cfg`` they use ``|rho|^2`` of the
    compound splitter.
    """
    ms = ms or ModeScale()
    cfg = MZConfig.fifty_fifty(phi) if cfg is None else MZConfig(cfg.s1, cfg.s2, phi)
    eff = mz_effective(cfg)
    n3, n4, _ = split_state(s, eff).mean_numbers()
    _, _, n = _moments(s)
    default = cfg == MZConfig.fifty_fifty(phi)
    r2 = math.sin(phi / 2) ** 2 if default else abs(eff.rho) ** 2
    t2 = math.cos(phi / 2) ** 2 if default else abs(eff.tau) ** 2
    sc = ms.scale
    return G1Report(sc * n3, sc * n4, sc * (n4 - n3), sc * n * r2, sc * n * t2, sc * n * (t2 - r2))


class G2Report(NamedTuple):
    correlation: float
    closed_form: float
    g2: float


def g2_splitter(s: FockState, sc: SplitterCoeffs | None = None, ms: ModeScale | None = None) -> G2Report:
    """Coincidence rate ``s^2 <n3 n4>`` behind a splitter and the normalized ``g2``.

    ``g2 = <n(n-1)>/<n>^2`` of the input (nan for the vacuum).
    """
    sc = sc or SplitterCoeffs.fifty_fifty()
    ms = ms or ModeScale()
    _, _, joint = split_state(s, sc).mean_numbers()
    c = s.amps
    ac = apply_annihilation(c)
    aac = apply_annihilation(ac)
    nn1 = float(np.vdot(aac, aac).real) / s.norm_sq
    n = float(np.vdot(ac, ac).real) / s.norm_sq
    u2 = ms.scale**2
    closed = u2 * abs(sc.rho) ** 2 * abs(sc.tau) ** 2 * nn1
    g2 = nn1 / (n * n) if n > 0 else math.nan
    return G2Report(u2 * joint, closed, g2)

