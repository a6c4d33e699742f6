"""Piecewise-constant propagation and the instantaneous-speed identity."""

import numpy as np
import pytest

from coherence_speed.dynamics import (
    HamiltonianPath,
    energy_uncertainty,
    evolve,
    finite_difference_speed,
    gap_squared_matrix,
    instantaneous_speed,
    qubit_closed_form,
)
from coherence_speed.errors import GridTooCoarse, InvalidState
from coherence_speed.linalg import (
    SpectralHamiltonian,
    haar_random_state,
    pure_density,
    random_hermitian,
    unitary_exp,
)
from coherence_speed.metrics import hellinger


def test_constant_path_matches_exact_propagator():
    rng = np.random.default_rng(61)
    h = random_hermitian(3, rng)
    ham = SpectralHamiltonian.from_matrix(h)
    psi0 = haar_random_state(3, rng)
    traj = evolve(psi0, HamiltonianPath.constant(h, 2.0, steps=400))
    for k in (100, 250, 400):
        t = traj.times[k]
        exact = unitary_exp(ham, float(t)) @ psi0
        # piecewise-constant steps of a constant H compose exactly
        assert np.max(np.abs(traj.states[k] - exact)) < 1e-10
        assert abs(np.linalg.norm(traj.states[k]) - 1.0) < 1e-10


def test_speed_identity_sqrt2_delta_h():
    rng = np.random.default_rng(62)
    for trial in range(60):
        d = int(rng.integers(2, 8))
        if trial % 3 == 0:
            lam = np.sort(rng.uniform(0.0, 4.0, d))
            lam[d // 2:] = lam[d // 2]          # force a degenerate level
            ham = SpectralHamiltonian.from_spectrum(lam)
        else:
            ham = SpectralHamiltonian.from_matrix(random_hermitian(d, rng))
        psi = haar_random_state(d, rng)
        v = instantaneous_speed(psi, ham)
        dh = energy_uncertainty(psi, ham)
        assert abs(v - np.sqrt(2.0) * dh) < 1e-10


def test_gap_squared_matrix_symmetric_zero_diagonal():
    a = gap_squared_matrix([0.0, 1.0, 2.5])
    assert np.max(np.abs(a - a.T)) == 0.0
    assert np.max(np.abs(np.diag(a))) == 0.0
    assert abs(a[0, 2] - 6.25) < 1e-15


def test_finite_difference_speed_approaches_closed_form():
    rng = np.random.default_rng(63)
    h = random_hermitian(4, rng, scale=1.0)
    psi0 = haar_random_state(4, rng)
    errs = []
    for steps in (2000, 4000, 8000):
        traj = evolve(psi0, HamiltonianPath.constant(h, 1.0, steps=steps))
        k = steps // 2
        fd = finite_difference_speed(traj, k)
        errs.append(abs(fd - traj.speeds[k]))
    assert errs[0] < 1e-4
    assert errs[2] < errs[0]   # error shrinks with the step


def test_finite_difference_needs_a_successor():
    h = np.diag([0.0, 1.0]).astype(complex)
    traj = evolve(np.array([1, 0], dtype=complex),
                  HamiltonianPath.constant(h, 1.0, steps=20))
    with pytest.raises(IndexError):
        finite_difference_speed(traj, 20)


def test_grid_too_coarse_rejected():
    h = 50.0 * np.diag([-1.0, 1.0]).astype(complex)
    psi = np.array([1, 0], dtype=complex)
    with pytest.raises(GridTooCoarse):
        evolve(psi, HamiltonianPath(times=np.array([0.0, 0.5, 1.0]),
                                    sampler=lambda t: h))


def test_qubit_closed_form_matches_hellinger():
    rng = np.random.default_rng(64)
    for _ in range(40):
        alpha = rng.normal() + 1j * rng.normal()
        beta = rng.normal() + 1j * rng.normal()
        norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        alpha, beta = alpha / norm, beta / norm
        lam, gam = rng.uniform(0.0, 3.0, 2)
        t = float(rng.uniform(0.0, 9.0))
        psi0 = np.array([alpha, beta])
        psit = psi0 * np.exp(-1j * np.array([lam, gam]) * t)
        want = hellinger(pure_density(psi0), pure_density(psit))
        assert abs(qubit_closed_form(alpha, beta, lam, gam, t) - want) < 1e-12


def test_qubit_closed_form_validates_normalization():
    with pytest.raises(InvalidState):
        qubit_closed_form(1.0, 1.0, 0.0, 1.0, 0.5)


def test_linear_path_interpolates_endpoints():
    h0 = np.diag([0.0, 1.0]).astype(complex)
    h1 = np.diag([1.0, 0.0]).astype(complex)
    path = HamiltonianPath.linear(h0, h1, 2.0, steps=20)
    assert np.max(np.abs(path.sampler(0.0) - h0)) < 1e-15
    assert np.max(np.abs(path.sampler(2.0) - h1)) < 1e-15
    assert np.max(np.abs(path.sampler(1.0) - (h0 + h1) / 2.0)) < 1e-15


def test_trajectory_records_speeds_and_uncertainties():
    h = np.diag([0.0, 1.0]).astype(complex)
    psi = np.full(2, 1.0 / np.sqrt(2.0), dtype=complex)
    traj = evolve(psi, HamiltonianPath.constant(h, 1.0, steps=50))
    assert len(traj) == 51
    # equal superposition under a gap-1 qubit: Delta H = 1/2 throughout
    np.testing.assert_allclose(traj.uncertainties, 0.5, atol=1e-12)
    np.testing.assert_allclose(traj.speeds, np.sqrt(2.0) / 2.0, atol=1e-12)
