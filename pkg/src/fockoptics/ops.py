"""Dense operator matrices on the truncated number basis.

Operators are plain complex ``numpy`` arrays of shape ``(n_max+1, n_max+1)``
with the row index as the output number state. Truncation corrupts the top
of every ladder; identities are therefore checked on the "lower half" of the
basis, indices ``0..n_max//2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatch, DomainError, NonHermitianError, TruncationError
from .fock import FockState, ModeScale, auto_truncation


def annihilation(n_max: int) -> np.ndarray:
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(np.complex128)


def creation(n_max: int) -> np.ndarray:
    """Exact adjoint of :func:`annihilation`; maps ``|n_max>`` to zero."""
    return annihilation(n_max).conj().T.copy()


def number(n_max: int) -> np.ndarray:
    return np.diag(np.arange(n_max + 1, dtype=float)).astype(np.complex128)


def identity(n_max: int) -> np.ndarray:
    return np.eye(n_max + 1, dtype=np.complex128)


def hamiltonian(n_max: int, ms: ModeScale) -> np.ndarray:
    """``hbar*omega (n + 1/2)`` in joules; needs ``ms.omega``."""
    if ms.omega is None:
        raise DomainError("hamiltonian requires ModeScale.omega")
    return ms.hbar_omega * (number(n_max) + 0.5 * identity(n_max))


def quadrature_q(n_max: int, ms: ModeScale | None = None) -> np.ndarray:
    ms = ms or ModeScale()
    return math.sqrt(ms.scale) * (creation(n_max) + annihilation(n_max))


def quadrature_p(n_max: int, ms: ModeScale | None = None) -> np.ndarray:
    ms = ms or ModeScale()
    return 1j * math.sqrt(ms.scale) * (creation(n_max) - annihilation(n_max))


def apply_annihilation(amps: np.ndarray) -> np.ndarray:
    """Vector form of ``a|psi>`` without building a matrix."""
    amps = np.asarray(amps, dtype=np.complex128)
    out = np.zeros_like(amps)
    out[:-1] = np.sqrt(np.arange(1, amps.shape[0])) * amps[1:]
    return out


def apply_creation(amps: np.ndarray) -> np.ndarray:
    """Vector form of ``a^dagger|psi>``; the top component is dropped."""
    amps = np.asarray(amps, dtype=np.complex128)
    out = np.zeros_like(amps)
    out[1:] = np.sqrt(np.arange(1, amps.shape[0])) * amps[:-1]
    return out


def _check_square(*mats):
    shape = mats[0].shape
    for m in mats:
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("operator must be a square matrix")
        if m.shape != shape:
            raise DimensionMismatch(f"shapes {shape} and {m.shape} differ")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    _check_square(a, b)
    return a @ b - b @ a


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return float(np.max(np.abs(m - m.conj().T))) <= tol * scale


def mat_exp(a: np.ndarray, tol: float = 1e-12, max_terms: int = 80) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor core.

    The matrix is scaled by ``2^-s`` until its 1-norm is at most 1/2, the
    series is summed until the last term drops below ``tol * 2^-s`` of the
    partial sum, and the result is squared ``s`` times.
    """
    a = np.asarray(a, dtype=np.complex128)
    _check_square(a)
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix exponential needs finite entries")
    dim = a.shape[0]
    norm = float(np.linalg.norm(a, 1)) if dim else 0.0
    squarings = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    x = a / (2.0**squarings)
    threshold = tol / (2.0**squarings)
    result = np.eye(dim, dtype=np.complex128)
    term = np.eye(dim, dtype=np.complex128)
    for k in range(1, max_terms + 1):
        term = term @ x / k
        result += term
        if np.linalg.norm(term, 1) <= threshold * np.linalg.norm(result, 1):
            break
    else:
        raise ConvergenceError(f"Taylor core did not reach tol={tol} in {max_terms} terms")
    for _ in range(squarings):
        result = result @ result
    return result


def lower_half(n_max: int) -> slice:
    return slice(0, n_max // 2 + 1)


def _check_translation_basis(gamma, n_max):
    if auto_truncation(gamma) > n_max:
        raise TruncationError(
            f"translation by {complex(gamma)} needs n_max >= {auto_truncation(gamma)}, got {n_max}"
        )


def translation(gamma, n_max: int, tol: float = 1e-12) -> np.ndarray:
    """Displacement ``T(gamma) = exp(gamma a^dagger - gamma* a)``."""
    gamma = complex(gamma)
    _check_translation_basis(gamma, n_max)
    gen = gamma * creation(n_max) - gamma.conjugate() * annihilation(n_max)
    return mat_exp(gen, tol)


def glauber_generator(gamma, n_max: int, tol: float = 1e-12) -> np.ndarray:
    """``exp(-|gamma|^2/2) exp(gamma a^dagger)``, the non-unitary generator of ``|gamma>``."""
    gamma = complex(gamma)
    return math.exp(-0.5 * abs(gamma) ** 2) * mat_exp(gamma * creation(n_max), tol)


@dataclass(frozen=True)
class CBHReport:
    gamma: complex
    n_max: int
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def cbh_check(gamma, n_max: int, tol: float = 1e-7) -> CBHReport:
    """Compare ``e^A e^B`` with ``e^(A+B+[A,B]/2)`` for ``A = gamma a^dagger``, ``B = -gamma* a``.

    Both sides are evaluated independently with :func:`mat_exp`; the
    deviation is taken on the lower half of the basis.
    """
    gamma = complex(gamma)
    _check_translation_basis(gamma, n_max)
    a_op = gamma * creation(n_max)
    b_op = -gamma.conjugate() * annihilation(n_max)
    left = mat_exp(a_op) @ mat_exp(b_op)
    right = mat_exp(a_op + b_op + 0.5 * commutator(a_op, b_op))
    low = lower_half(n_max)
    dev = float(np.max(np.abs(left[low, low] - right[low, low])))
    return CBHReport(gamma, n_max, dev, tol)


def _amps(s):
    return s.amps if isinstance(s, FockState) else np.asarray(s, dtype=np.complex128)


def expect(op: np.ndarray, s) -> complex:
    """``<s|op|s> / <s|s>``; the division makes raw-norm states usable."""
    c = _amps(s)
    op = np.asarray(op)
    if op.shape != (c.shape[0], c.shape[0]):
        raise DimensionMismatch(f"operator {op.shape} vs state of length {c.shape[0]}")
    return complex(np.vdot(c, op @ c) / np.vdot(c, c).real)


def variance(op: np.ndarray, s) -> float:
    """``<op^2> - <op>^2`` for a Hermitian ``op``."""
    if not is_hermitian(op):
        raise NonHermitianError("variance needs a Hermitian operator")
    c = _amps(s)
    op = np.asarray(op)
    if op.shape != (c.shape[0], c.shape[0]):
        raise DimensionMismatch(f"operator {op.shape} vs state of length {c.shape[0]}")
    norm = np.vdot(c, c).real
    v = op @ c
    mean = np.vdot(c, v).real / norm
    return float(np.vdot(v, v).real / norm - mean * mean)
