import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockoptics import _kernels_py as py
from fockoptics import kernels
from fockoptics.errors import DomainError

cy = pytest.importorskip("fockoptics._kernels")

BINOM = kernels.binomial_table(170)
unit_complex = st.floats(-math.pi, math.pi).map(lambda t: complex(math.cos(t), math.sin(t)))


def test_binomial_table_exact_small():
    table = kernels.binomial_table(60)
    for n in range(61):
        for k in range(n + 1):
            assert table[n, k] == pytest.approx(math.comb(n, k), rel=1e-14)


def test_binomial_table_guard_and_read_only():
    with pytest.raises(DomainError):
        kernels.binomial_table(171)
    assert kernels.binomial_table(170)[170, 85] == pytest.approx(math.comb(170, 85), rel=1e-12)
    assert not kernels.binomial_table(10).flags.writeable


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch():
    env = dict(os.environ, FOCKOPTICS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from fockoptics.kernels import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@given(st.integers(0, 40), st.integers(0, 200))
@settings(max_examples=30, deadline=None)
def test_phase_density_parity(n_max, seed):
    gen = np.random.default_rng(seed)
    amps = gen.normal(size=n_max + 1) + 1j * gen.normal(size=n_max + 1)
    phis = gen.uniform(-7, 7, size=33)
    assert np.allclose(cy.phase_density(amps, phis), py.phase_density(amps, phis), rtol=1e-12, atol=1e-13)


@given(st.integers(0, 30), st.integers(0, 30), unit_complex, unit_complex, st.floats(0, 1))
@settings(max_examples=40, deadline=None)
def test_split_number_parity(n1, n2, pr, pt, r2):
    rho = math.sqrt(r2) * pr
    tau = math.sqrt(1 - r2) * pt
    a = cy.split_number_amplitudes(n1, n2, rho, tau, -rho.conjugate(), tau.conjugate(), BINOM)
    b = py.split_number_amplitudes(n1, n2, rho, tau, -rho.conjugate(), tau.conjugate(), BINOM)
    assert np.allclose(a, b, atol=1e-13)


@given(st.integers(0, 60), st.floats(0, 1), st.integers(0, 100))
@settings(max_examples=30, deadline=None)
def test_split_fock_parity(n_max, r2, seed):
    gen = np.random.default_rng(seed)
    amps = gen.normal(size=n_max + 1) + 1j * gen.normal(size=n_max + 1)
    rho, tau = math.sqrt(r2), 1j * math.sqrt(1 - r2)
    assert np.allclose(cy.split_fock(amps, rho, tau, BINOM), py.split_fock(amps, rho, tau, BINOM), atol=1e-12)


@given(st.integers(0, 25), st.floats(-7, 7), unit_complex)
@settings(max_examples=30, deadline=None)
def test_mz_triple_sum_parity(n, phi, p):
    r1, t1 = 0.6 * p, 0.8j * p
    r2, t2 = 1 / math.sqrt(2), 1j / math.sqrt(2)
    a = cy.mz_triple_sum(n, r1, t1, r2, t2, phi, BINOM)
    b = py.mz_triple_sum(n, r1, t1, r2, t2, phi, BINOM)
    assert np.allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("absgamma", [0.0, 0.3, 1.0, 2.2, 4.0])
def test_phase_series_parity(absgamma):
    a = cy.phase_variance_series(absgamma, 4000, 1e-12)
    b = py.phase_variance_series(absgamma, 4000, 1e-12)
    assert a[0] == pytest.approx(b[0], abs=1e-13)
    assert a[1] == b[1]
    assert a[3] and b[3]


def test_phase_series_nonconvergence_flag():
    for mod in (cy, py):
        _, k, _, converged = mod.phase_variance_series(3.0, 4, 1e-12)
        assert not converged and k == 4
