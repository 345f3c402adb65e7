# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Mirrors ``_kernels_py`` function for function."""

import numpy as np

from libc.math cimport exp, log, lgamma, sqrt, cos, sin, M_PI


def phase_density(const double complex[::1] amps, const double[::1] phis):
    cdef Py_ssize_t n_amp = amps.shape[0]
    cdef Py_ssize_t n_phi = phis.shape[0]
    cdef Py_ssize_t j, n
    cdef double complex z, acc
    out = np.empty(n_phi, dtype=np.float64)
    cdef double[::1] res = out
    for j in range(n_phi):
        z = cos(phis[j]) - 1j * sin(phis[j])
        acc = amps[n_amp - 1]
        for n in range(n_amp - 2, -1, -1):
            acc = acc * z + amps[n]
        res[j] = (acc.real * acc.real + acc.imag * acc.imag) / (2.0 * M_PI)
    return out


cdef void _powers(double complex x, Py_ssize_t n, double complex[::1] out):
    cdef Py_ssize_t k
    out[0] = 1.0
    for k in range(1, n + 1):
        out[k] = out[k - 1] * x


def split_number_amplitudes(int n1, int n2, double complex rho, double complex tau,
                            double complex rho_p, double complex tau_p,
                            const double[:, ::1] binom):
    cdef int total = n1 + n2
    cdef int m1, m2, m
    cdef double coeff
    cdef double complex[::1] pr = np.empty(total + 1, dtype=np.complex128)
    cdef double complex[::1] pt = np.empty(total + 1, dtype=np.complex128)
    cdef double complex[::1] prp = np.empty(total + 1, dtype=np.complex128)
    cdef double complex[::1] ptp = np.empty(total + 1, dtype=np.complex128)
    _powers(rho, total, pr)
    _powers(tau, total, pt)
    _powers(rho_p, total, prp)
    _powers(tau_p, total, ptp)
    out = np.zeros(total + 1, dtype=np.complex128)
    cdef double complex[::1] res = out
    for m1 in range(n1 + 1):
        for m2 in range(n2 + 1):
            m = m1 + m2
            coeff = binom[n1, m1] * binom[n2, m2] * sqrt(binom[total, n1] / binom[total, m])
            res[m] = res[m] + coeff * pr[m1] * prp[n2 - m2] * pt[n1 - m1] * ptp[m2]
    return out


def split_fock(const double complex[::1] amps, double complex rho, double complex tau,
               const double[:, ::1] binom):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t n, m
    cdef double complex[::1] pr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] pt = np.empty(dim, dtype=np.complex128)
    _powers(rho, dim - 1, pr)
    _powers(tau, dim - 1, pt)
    out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] res = out
    for n in range(dim):
        if amps[n] == 0:
            continue
        for m in range(n + 1):
            res[m, n - m] = amps[n] * sqrt(binom[n, m]) * pr[m] * pt[n - m]
    return out


def mz_triple_sum(int n, double complex rho1, double complex tau1, double complex rho2,
                  double complex tau2, double phi, const double[:, ::1] binom):
    cdef int m, k1, k2, k
    cdef double coeff
    cdef double complex t1 = tau1 * (cos(phi) + 1j * sin(phi))
    cdef double complex[::1] pr1 = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] pt1 = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] pr2 = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] pt2 = np.empty(n + 1, dtype=np.complex128)
    _powers(rho1, n, pr1)
    _powers(t1, n, pt1)
    _powers(rho2, n, pr2)
    _powers(tau2, n, pt2)
    out = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[::1] res = out
    for m in range(n + 1):
        for k1 in range(m + 1):
            for k2 in range(n - m + 1):
                k = k1 + k2
                coeff = binom[m, k1] * binom[n - m, k2] * binom[n, m] / sqrt(binom[n, k])
                res[k] = res[k] + (coeff * pr1[m] * pt1[n - m]
                                   * pr2[n - m + k1 - k2] * pt2[m - k1 + k2])
    return out


def phase_variance_series(double absgamma, int k_max, double term_tol):
    cdef int k, n
    cdef double inner, term, total = 0.0
    cdef double la, g2 = absgamma * absgamma
    if absgamma == 0.0:
        return M_PI * M_PI / 3.0, 0, 0.0, True
    la = log(absgamma)
    for k in range(1, k_max + 1):
        inner = 0.0
        for n in range((k - 1) // 2 + 1):
            inner += exp(-g2 + k * la - 0.5 * (lgamma(k - n + 1.0) + lgamma(n + 1.0))) / (
                (k - 2.0 * n) * (k - 2.0 * n))
        term = 4.0 * inner
        if k % 2 == 1:
            term = -term
        total += term
        if k > g2 + 1.0 and abs(term) < term_tol:
            return M_PI * M_PI / 3.0 + total, k, term, True
    return M_PI * M_PI / 3.0 + total, k_max, term, False
