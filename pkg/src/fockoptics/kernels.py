"""Backend selection for the inner loops.

The compiled extension ``fockoptics._kernels`` is used when it imports;
otherwise the pure-Python twins in ``fockoptics._kernels_py`` take over.
Setting ``FOCKOPTICS_PURE_PYTHON=1`` forces the fallback.
"""
import os
from functools import lru_cache

import numpy as np

from . import _kernels_py
from .errors import DomainError

MAX_BINOMIAL_N = 170

if os.environ.get("FOCKOPTICS_PURE_PYTHON") == "1":
    _backend = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _backend = _kernels_py
        BACKEND = "python"


@lru_cache(maxsize=8)
def _binomial_table(n_max):
    table = np.zeros((n_max + 1, n_max + 1))
    for n in range(n_max + 1):
        table[n, 0] = 1.0
        for k in range(1, n + 1):
            table[n, k] = table[n, k - 1] * (n - k + 1) / k
    table.setflags(write=False)
    return table


def binomial_table(n_max):
    """Pascal table ``C[n, k]`` for ``0 <= k <= n <= n_max`` built by accumulated ratios."""
    if n_max > MAX_BINOMIAL_N:
        raise DomainError(f"binomial table limited to n <= {MAX_BINOMIAL_N}, got {n_max}")
    # the cached table is shared, so round up to limit distinct entries
    size = max(16, 1 << max(0, int(n_max)).bit_length())
    return _binomial_table(min(size, MAX_BINOMIAL_N))


def phase_density(amps, phis):
    return _backend.phase_density(
        np.ascontiguousarray(amps, dtype=np.complex128),
        np.ascontiguousarray(phis, dtype=np.float64),
    )


def split_number_amplitudes(n1, n2, rho, tau, rho_p, tau_p):
    binom = binomial_table(n1 + n2)
    return _backend.split_number_amplitudes(
        int(n1), int(n2), complex(rho), complex(tau), complex(rho_p), complex(tau_p), binom
    )


def split_fock(amps, rho, tau):
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    binom = binomial_table(amps.shape[0] - 1)
    return _backend.split_fock(amps, complex(rho), complex(tau), binom)


def mz_triple_sum(n, rho1, tau1, rho2, tau2, phi):
    binom = binomial_table(n)
    return _backend.mz_triple_sum(
        int(n), complex(rho1), complex(tau1), complex(rho2), complex(tau2), float(phi), binom
    )


def phase_variance_series(absgamma, k_max, term_tol):
    return _backend.phase_variance_series(float(absgamma), int(k_max), float(term_tol))
