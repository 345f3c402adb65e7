import cmath
import math

import numpy as np
import pytest
from conftest import two_mode_ladders
from hypothesis import given, settings
from hypothesis import strategies as st

from fockoptics.errors import DomainError, SplitterError, TruncationError
from fockoptics.fock import FockState, coherent_state, number_state, reduced_purity, tensor
from fockoptics.network import (
    MZConfig,
    SplitterCoeffs,
    binomial_moment,
    entanglement_check,
    entanglement_closed_form,
    mz_compound_table,
    mz_effective,
    mz_split_number,
    mz_triple_sum,
    split_joint_number,
    split_state,
)

BS = SplitterCoeffs.fifty_fifty()

splitters = st.builds(
    SplitterCoeffs.from_reflectance,
    st.floats(0.0, 1.0),
    st.floats(-math.pi, math.pi),
    st.sampled_from([1, -1]),
)
phis = st.floats(-2 * math.pi, 2 * math.pi)


def operator_oracle(n1, n2, sc, n_max):
    """Output amplitudes from a1^+ -> rho a3^+ + tau a4^+, a2^+ -> tau' a3^+ + rho' a4^+."""
    b3, b4 = two_mode_ladders(n_max)
    rho_p, tau_p = sc.port2
    c1 = sc.rho * b3.conj().T + sc.tau * b4.conj().T
    c2 = tau_p * b3.conj().T + rho_p * b4.conj().T
    v = np.zeros((n_max + 1) ** 2, dtype=complex)
    v[0] = 1.0
    for _ in range(n1):
        v = c1 @ v
    for _ in range(n2):
        v = c2 @ v
    return (v / math.sqrt(math.factorial(n1) * math.factorial(n2))).reshape(n_max + 1, n_max + 1)


def test_fifty_fifty_defaults():
    assert BS.rho == pytest.approx(1 / math.sqrt(2))
    assert BS.tau == pytest.approx(1j / math.sqrt(2))
    assert BS.symmetric and BS.port2 == (BS.rho, BS.tau)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(rho=0.9, tau=0.9),
        dict(rho=0.6, tau=0.8, symmetric=True),
        dict(rho=0.6, tau=0.8j, rho_p=0.6),
        dict(rho=0.6, tau=0.8j, rho_p=0.8, tau_p=0.6j),
        dict(rho=0.6, tau=0.8j, rho_p=-0.6, tau_p=0.8j),
        dict(rho=complex("nan"), tau=0.0),
    ],
)
def test_invalid_splitters(kwargs):
    with pytest.raises(SplitterError):
        SplitterCoeffs(**kwargs)


def test_valid_asymmetric_pair():
    sc = SplitterCoeffs(0.6, 0.8, 0.6, -0.8)
    assert sc.port2 == (0.6, -0.8)


def test_reflectance_bounds():
    with pytest.raises(SplitterError):
        SplitterCoeffs.from_reflectance(1.5)


@given(splitters)
@settings(max_examples=40, deadline=None)
def test_from_reflectance_is_symmetric(sc):
    assert abs(sc.rho) ** 2 + abs(sc.tau) ** 2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n1, n2", [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 1), (3, 2)])
@pytest.mark.parametrize("sc", [BS, SplitterCoeffs.from_reflectance(0.3, 0.4, -1), SplitterCoeffs(0.6, 0.8, 0.6, -0.8)])
def test_joint_number_matches_mode_operators(n1, n2, sc):
    n_max = n1 + n2 + 1
    got = split_joint_number(n1, n2, sc, n_max).amps
    assert np.allclose(got, operator_oracle(n1, n2, sc, n_max), atol=1e-12)


def test_hong_ou_mandel_null():
    out = split_joint_number(1, 1, BS)
    assert abs(out.amps[1, 1]) < 1e-14
    assert abs(out.amps[2, 0]) ** 2 == pytest.approx(0.5)


@pytest.mark.parametrize("total", range(0, 13))
def test_joint_number_norm_and_conservation(total):
    for sc in (BS, SplitterCoeffs.from_reflectance(0.2, 1.0)):
        for n1 in range(total + 1):
            out = split_joint_number(n1, total - n1, sc)
            assert out.norm_sq == pytest.approx(1.0, abs=1e-12)
            m = np.arange(total + 1)
            mask = np.ones_like(out.amps, dtype=bool)
            mask[m, total - m] = False
            assert np.all(out.amps[mask] == 0)


def test_joint_number_reduces_to_binomial():
    sc = SplitterCoeffs.from_reflectance(0.35, 0.2)
    out = split_joint_number(5, 0, sc).amps
    for m in range(6):
        assert out[m, 5 - m] == pytest.approx(math.sqrt(math.comb(5, m)) * sc.rho**m * sc.tau ** (5 - m))


def test_joint_number_guards():
    with pytest.raises(TruncationError):
        split_joint_number(3, 2, BS, n_max=4)
    with pytest.raises(DomainError):
        split_joint_number(-1, 0, BS)
    with pytest.raises(SplitterError):
        split_joint_number(1, 1, SplitterCoeffs(0.6, 0.8))
    split_joint_number(2, 0, SplitterCoeffs(0.6, 0.8))


def test_single_photon_split():
    out = split_state(number_state(1, 1), BS).amps
    assert out[1, 0] == pytest.approx(BS.rho) and out[0, 1] == pytest.approx(BS.tau)


@given(st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False), splitters)
@settings(max_examples=25, deadline=None)
def test_coherent_input_factorizes(gamma, sc):
    s = coherent_state(gamma)
    out = split_state(s, sc)
    expected = tensor(
        coherent_state(sc.rho * gamma, s.n_max, allow_truncation=True),
        coherent_state(sc.tau * gamma, s.n_max, allow_truncation=True),
    )
    assert np.allclose(out.amps, expected.amps, atol=1e-9)
    assert reduced_purity(out) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 8])
def test_number_input_is_entangled(n):
    assert reduced_purity(split_state(number_state(n, n), SplitterCoeffs.from_reflectance(0.3))) < 1 - 1e-3


def test_split_state_preserves_norm_and_number():
    gen = np.random.default_rng(5)
    for _ in range(10):
        amps = gen.normal(size=10) + 1j * gen.normal(size=10)
        s = FockState.from_amplitudes(amps)
        out = split_state(s, SplitterCoeffs.from_reflectance(gen.uniform(), gen.uniform(-3, 3)))
        assert out.norm_sq == pytest.approx(1.0, abs=1e-10)
        n3, n4, _ = out.mean_numbers()
        assert n3 + n4 == pytest.approx(float(np.sum(np.arange(10) * np.abs(s.amps) ** 2)), abs=1e-10)


@pytest.mark.parametrize("n", range(0, 31))
@pytest.mark.parametrize("r2", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_entanglement_closed_forms(n, r2):
    sc = SplitterCoeffs.from_reflectance(r2)
    got = entanglement_check(n, sc)
    want = entanglement_closed_form(n, sc)
    assert got == pytest.approx(want, abs=1e-10 * max(1, n * n))
    brute = math.fsum(m * (n - m) * math.comb(n, m) * r2**m * (1 - r2) ** (n - m) for m in range(n + 1))
    assert got.correlation == pytest.approx(brute, abs=1e-10 * max(1, n * n))


def test_entanglement_small_cases():
    assert entanglement_check(0, BS).correlation == 0
    assert entanglement_check(1, BS).correlation == pytest.approx(0.0, abs=1e-15)
    assert entanglement_check(2, BS).correlation == pytest.approx(0.5)
    assert entanglement_check(2, BS).product_gap == pytest.approx(0.5)


@pytest.mark.parametrize("n", range(0, 31))
def test_binomial_moments(n):
    for power in (1, 2):
        for x, y in ((1.0, 1.0), (0.3, 0.7), (0.25, 2.0)):
            bm = binomial_moment(n, x, y, power)
            assert bm.closed_form == pytest.approx(bm.brute_force, rel=1e-10, abs=1e-12)
    if n >= 1:
        assert binomial_moment(n, 1, 1, 1).closed_form == 2 ** (n - 1) * n
    if n >= 2:
        assert binomial_moment(n, 1, 1, 2).closed_form == 2 ** (n - 2) * n * (n + 1)


def test_binomial_moment_edge_cases():
    assert binomial_moment(0, 0.4, 0.6, 1) == (0.0, 0.0)
    assert binomial_moment(0, 0.4, 0.6, 2) == (0.0, 0.0)
    with pytest.raises(DomainError):
        binomial_moment(3, 1, 1, 3)


@given(phis)
@settings(max_examples=40, deadline=None)
def test_mz_fifty_fifty_closed_form(phi):
    eff = mz_effective(MZConfig.fifty_fifty(phi))
    assert eff.rho == pytest.approx(math.sin(phi / 2) * cmath.exp(0.5j * (phi - math.pi)), abs=1e-14)
    assert eff.tau == pytest.approx(math.cos(phi / 2) * cmath.exp(0.5j * (phi + math.pi)), abs=1e-14)


def test_mz_dark_and_bright_port():
    assert abs(mz_effective(MZConfig.fifty_fifty(0.0)).rho) < 1e-15
    assert abs(mz_effective(MZConfig.fifty_fifty(math.pi)).rho) == pytest.approx(1.0)


@given(splitters, splitters, phis)
@settings(max_examples=60, deadline=None)
def test_mz_unitarity_and_appendix_c(s1, s2, phi):
    cfg = MZConfig(s1, s2, phi)
    eff = mz_effective(cfg)
    assert abs(eff.rho) ** 2 + abs(eff.tau) ** 2 == pytest.approx(1.0, abs=1e-12)
    res = mz_compound_table(cfg).residuals()
    assert max(res.values()) < 1e-12, res


def test_mz_table_matches_effective():
    cfg = MZConfig.fifty_fifty(0.0)
    table = mz_compound_table(cfg)
    eff = mz_effective(cfg)
    assert (table.rho13, table.tau14, table.rho24, table.tau23) == (eff.rho, eff.tau, eff.rho_p, eff.tau_p)


def test_mz_table_rejects_non_symmetric():
    with pytest.raises(SplitterError):
        mz_compound_table(MZConfig(SplitterCoeffs(0.6, 0.8), BS, 0.3))


@pytest.mark.parametrize("n", range(0, 7))
@pytest.mark.parametrize("phi", [0.0, 0.4, math.pi / 2, 2.0, math.pi])
def test_mz_triple_sum_oracle(n, phi):
    cfg = MZConfig(SplitterCoeffs.from_reflectance(0.4, 0.3), BS, phi)
    assert np.allclose(mz_triple_sum(n, cfg).amps, mz_split_number(n, cfg).amps, atol=1e-10)


def test_mz_three_photons_binomial():
    cfg = MZConfig.fifty_fifty(math.pi / 2)
    eff = mz_effective(cfg)
    out = mz_triple_sum(3, cfg).amps
    for m in range(4):
        assert out[m, 3 - m] == pytest.approx(math.sqrt(math.comb(3, m)) * eff.rho**m * eff.tau ** (3 - m), abs=1e-14)
    assert abs(eff.rho) == pytest.approx(1 / math.sqrt(2))


@given(phis, st.integers(0, 8))
@settings(max_examples=30, deadline=None)
def test_mz_port3_mean(phi, n):
    n3, _, _ = mz_split_number(n, MZConfig.fifty_fifty(phi)).mean_numbers()
    assert n3 == pytest.approx(n * math.sin(phi / 2) ** 2, abs=1e-10)


def test_mz_single_photon():
    cfg = MZConfig.fifty_fifty(1.0)
    eff = mz_effective(cfg)
    out = mz_split_number(1, cfg).amps
    assert out[1, 0] == pytest.approx(eff.rho) and out[0, 1] == pytest.approx(eff.tau)


@pytest.mark.parametrize("phi", [1e-6, -1e-9, 2 * math.pi - 1e-7, math.pi + 1e-8])
def test_mz_near_dark_and_bright_ports(phi):
    # a tiny coefficient has a round-off dominated phase; validation must not trip on it
    cfg = MZConfig.fifty_fifty(phi)
    eff = mz_effective(cfg)
    assert abs(eff.rho) ** 2 + abs(eff.tau) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert max(mz_compound_table(cfg).residuals().values()) < 1e-12
