"""Distance functions and speed-limit bounds."""

import numpy as np
import pytest

from coherence_speed.errors import DimensionMismatch
from coherence_speed.linalg import (
    OrthogonalDecomposition,
    SpectralHamiltonian,
    haar_random_state,
    pure_density,
    random_density,
    unitary_exp,
)
from coherence_speed.metrics import (
    affinity,
    bures_angle,
    d_affinity_half,
    fidelity,
    hellinger,
    qsl_bounds,
)


def test_hellinger_range_symmetry_identity():
    rng = np.random.default_rng(21)
    for _ in range(30):
        d = int(rng.integers(2, 7))
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        sig = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        val = hellinger(rho, sig)
        assert 0.0 <= val <= 2.0
        assert abs(val - hellinger(sig, rho)) < 1e-12
        assert hellinger(rho, rho) < 1e-12


def test_hellinger_two_for_orthogonal_pure_states():
    e = np.eye(3, dtype=complex)
    assert abs(hellinger(pure_density(e[0]), pure_density(e[1])) - 2.0) < 1e-12


def test_affinity_pure_states_is_squared_overlap():
    # sqrt(rho) = rho for pure states, so Tr sqrt(rho) sqrt(sigma) = |<a|b>|^2
    rng = np.random.default_rng(22)
    for _ in range(20):
        a = haar_random_state(4, rng)
        b = haar_random_state(4, rng)
        want = abs(np.vdot(a, b)) ** 2
        assert abs(affinity(pure_density(a), pure_density(b)) - want) < 1e-10


def test_affinity_accepts_precomputed_roots():
    rng = np.random.default_rng(23)
    rho = random_density(4, rank=3, seed=rng)
    sig = random_density(4, rank=2, seed=rng)
    from coherence_speed.linalg import matrix_sqrt_psd
    direct = affinity(rho, sig)
    cached = affinity(rho, sig, sqrt_rho=matrix_sqrt_psd(rho),
                      sqrt_sigma=matrix_sqrt_psd(sig))
    assert abs(direct - cached) < 1e-14


def test_hellinger_contracts_under_dephasing():
    rng = np.random.default_rng(24)
    dec = OrthogonalDecomposition.computational(5, [[0, 1], [2], [3, 4]])
    for _ in range(20):
        rho = random_density(5, rank=2, seed=rng)
        sig = random_density(5, rank=3, seed=rng)
        assert (hellinger(dec.dephase(rho), dec.dephase(sig))
                <= hellinger(rho, sig) + 1e-10)


def test_d_affinity_half_follows_affinity():
    rng = np.random.default_rng(25)
    rho = random_density(3, rank=2, seed=rng)
    sig = random_density(3, rank=3, seed=rng)
    a = affinity(rho, sig)
    assert abs(d_affinity_half(rho, sig) - (1.0 - a * a)) < 1e-14


def test_fidelity_and_bures_angle_pure():
    rng = np.random.default_rng(26)
    a = haar_random_state(3, rng)
    b = haar_random_state(3, rng)
    ov = abs(np.vdot(a, b))
    assert abs(fidelity(pure_density(a), pure_density(b)) - ov ** 2) < 1e-10
    assert abs(fidelity(pure_density(a), pure_density(a)) - 1.0) < 1e-12
    ang = bures_angle(pure_density(a), pure_density(b))
    assert abs(ang - np.arccos(ov)) < 1e-7


def test_shape_mismatch_raises():
    with pytest.raises(DimensionMismatch):
        hellinger(np.eye(2) / 2.0, np.eye(3) / 3.0)


def test_qsl_zero_elapsed_time_reads_as_zero_angle():
    # regression: one ulp of rounding in the evolved state must not turn
    # into a ~2e-8 angle through arccos at its singular endpoint
    ham = SpectralHamiltonian.from_spectrum(np.array([0.0, 1.0]))
    psi = np.full(2, 1.0 / np.sqrt(2.0), dtype=complex)
    b = qsl_bounds(psi, ham, unitary_exp(ham, 0.0) @ psi)
    assert b.bures_angle < 1e-12
    assert b.mt_time is not None and b.mt_time < 1e-12


def test_qsl_qubit_saturates_spread_bound():
    ham = SpectralHamiltonian.from_spectrum(np.array([0.0, 1.0]))
    psi = np.full(2, 1.0 / np.sqrt(2.0), dtype=complex)
    for t in np.linspace(0.1, np.pi, 16):
        b = qsl_bounds(psi, ham, unitary_exp(ham, float(t)) @ psi)
        assert b.mt_time <= t + 1e-9
        assert abs(b.mt_time - t) < 1e-7   # equal superposition is geodesic
    b = qsl_bounds(psi, ham, unitary_exp(ham, float(np.pi)) @ psi)
    assert abs(b.bures_angle - np.pi / 2.0) < 1e-9
    assert abs(b.ml_time - np.pi) < 1e-9   # mean-energy bound tight here too


def test_qsl_floor_on_random_evolutions():
    rng = np.random.default_rng(27)
    for _ in range(50):
        d = int(rng.integers(2, 6))
        lam = np.sort(rng.uniform(0.0, 4.0, d))
        lam[1:] += 1e-3 * np.arange(1, d)
        ham = SpectralHamiltonian.from_spectrum(lam)
        psi = haar_random_state(d, rng)
        t = float(rng.uniform(0.05, 6.0))
        b = qsl_bounds(psi, ham, unitary_exp(ham, t) @ psi)
        if b.mt_time is not None:
            assert b.mt_time <= t + 1e-9


def test_qsl_degenerate_denominators_give_none():
    ham = SpectralHamiltonian.from_spectrum(np.array([0.0, 1.0, 3.0]))
    excited = np.array([0.0, 1.0, 0.0], dtype=complex)
    b = qsl_bounds(excited, ham, excited)
    assert b.mt_time is None          # eigenstate: zero energy spread
    assert b.ml_time is not None      # mean above ground is 1
    ground = np.array([1.0, 0.0, 0.0], dtype=complex)
    g = qsl_bounds(ground, ham, ground)
    assert g.mt_time is None and g.ml_time is None
