"""Pure-Python kernels, used when the compiled extension is unavailable.

Every function here has a twin with the same signature in ``_kernels.pyx``.
"""
import cmath
import math

import numpy as np


def phase_density(amps, phis):
    amps = np.asarray(amps, dtype=np.complex128)
    phis = np.asarray(phis, dtype=np.float64)
    n = np.arange(amps.shape[0])
    field = np.exp(-1j * np.outer(phis, n)) @ amps
    return (field.real**2 + field.imag**2) / (2.0 * math.pi)


def _powers(x, n):
    out = [1.0 + 0j] * (n + 1)
    for k in range(1, n + 1):
        out[k] = out[k - 1] * x
    return out


def split_number_amplitudes(n1, n2, rho, tau, rho_p, tau_p, binom):
    total = n1 + n2
    pr, pt = _powers(rho, total), _powers(tau, total)
    prp, ptp = _powers(rho_p, total), _powers(tau_p, total)
    out = np.zeros(total + 1, dtype=np.complex128)
    for m1 in range(n1 + 1):
        for m2 in range(n2 + 1):
            m = m1 + m2
            coeff = binom[n1, m1] * binom[n2, m2] * math.sqrt(binom[total, n1] / binom[total, m])
            out[m] += coeff * pr[m1] * prp[n2 - m2] * pt[n1 - m1] * ptp[m2]
    return out


def split_fock(amps, rho, tau, binom):
    amps = np.asarray(amps, dtype=np.complex128)
    dim = amps.shape[0]
    pr, pt = _powers(rho, dim - 1), _powers(tau, dim - 1)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(dim):
        c = amps[n]
        if c == 0:
            continue
        for m in range(n + 1):
            out[m, n - m] = c * math.sqrt(binom[n, m]) * pr[m] * pt[n - m]
    return out


def mz_triple_sum(n, rho1, tau1, rho2, tau2, phi, binom):
    t1 = tau1 * cmath.exp(1j * phi)
    pr1, pt1 = _powers(rho1, n), _powers(t1, n)
    pr2, pt2 = _powers(rho2, n), _powers(tau2, n)
    out = np.zeros(n + 1, dtype=np.complex128)
    for m in range(n + 1):
        for k1 in range(m + 1):
            for k2 in range(n - m + 1):
                k = k1 + k2
                coeff = binom[m, k1] * binom[n - m, k2] * binom[n, m] / math.sqrt(binom[n, k])
                out[k] += coeff * pr1[m] * pt1[n - m] * pr2[n - m + k1 - k2] * pt2[m - k1 + k2]
    return out


def phase_variance_series(absgamma, k_max, term_tol):
    if absgamma == 0.0:
        return math.pi**2 / 3.0, 0, 0.0, True
    g2 = absgamma * absgamma
    la = math.log(absgamma)
    total = 0.0
    term = 0.0
    for k in range(1, k_max + 1):
        inner = 0.0
        for n in range((k - 1) // 2 + 1):
            inner += math.exp(
                -g2 + k * la - 0.5 * (math.lgamma(k - n + 1.0) + math.lgamma(n + 1.0))
            ) / (k - 2.0 * n) ** 2
        term = -4.0 * inner if k % 2 else 4.0 * inner
        total += term
        if k > g2 + 1.0 and abs(term) < term_tol:
            return math.pi**2 / 3.0 + total, k, term, True
    return math.pi**2 / 3.0 + total, k_max, term, False
