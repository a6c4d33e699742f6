"""Properties of the affinity-based coherence measure."""

import numpy as np
import pytest
from scipy.linalg import block_diag

from coherence_speed.coherence import (
    c_half,
    c_l1,
    closest_incoherent,
    coherence_vector,
    is_maximally_coherent,
    is_refinement,
)
from coherence_speed.errors import DimensionMismatch
from coherence_speed.linalg import (
    OrthogonalDecomposition,
    SpectralHamiltonian,
    haar_random_state,
    pure_density,
    random_density,
    random_unitary,
)
from coherence_speed.metrics import affinity


def rank1(d):
    return OrthogonalDecomposition.computational(d)


def test_range_and_faithfulness():
    rng = np.random.default_rng(31)
    for _ in range(40):
        d = int(rng.integers(2, 7))
        dec = rank1(d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        c = c_half(rho, dec)
        assert -1e-12 <= c <= 1.0
        assert c_half(dec.dephase(rho), dec) < 1e-12


def test_uniform_superposition_hits_maximum():
    for d in (2, 3, 5):
        psi = np.full(d, 1.0 / np.sqrt(d), dtype=complex)
        c = c_half(pure_density(psi), rank1(d))
        assert abs(c - (1.0 - 1.0 / d)) < 1e-12
        assert is_maximally_coherent(psi, rank1(d))
    assert not is_maximally_coherent(np.array([1.0, 0.0], dtype=complex), rank1(2))


def test_closest_incoherent_is_the_variational_minimizer():
    rng = np.random.default_rng(32)
    for _ in range(30):
        d = int(rng.integers(2, 6))
        dec = rank1(d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        sigma = closest_incoherent(rho, dec)
        assert abs(np.trace(sigma).real - 1.0) < 1e-10
        assert np.max(np.abs(sigma - dec.dephase(sigma))) < 1e-10
        a = affinity(rho, sigma)
        assert abs(c_half(rho, dec) - (1.0 - a * a)) < 1e-10
        # every other dephased candidate does worse
        for _ in range(5):
            other = dec.dephase(random_density(d, rank=d, seed=rng))
            other /= np.trace(other).real
            b = affinity(rho, other)
            assert 1.0 - b * b >= c_half(rho, dec) - 1e-10


def test_block_unitary_invariance():
    rng = np.random.default_rng(33)
    dec = OrthogonalDecomposition.computational(5, [[0, 1], [2], [3, 4]])
    for _ in range(20):
        rho = random_density(5, rank=3, seed=rng)
        u = block_diag(random_unitary(2, rng), random_unitary(1, rng),
                       random_unitary(2, rng))
        assert abs(c_half(u @ rho @ u.conj().T, dec) - c_half(rho, dec)) < 1e-10


def test_direct_sum_additivity():
    rng = np.random.default_rng(34)
    for _ in range(15):
        p = float(rng.uniform(0.05, 0.95))
        rho_a = random_density(2, rank=2, seed=rng)
        rho_b = random_density(3, rank=2, seed=rng)
        joint = block_diag(p * rho_a, (1.0 - p) * rho_b)
        c = c_half(joint, rank1(5))
        want = p * c_half(rho_a, rank1(2)) + (1.0 - p) * c_half(rho_b, rank1(3))
        assert abs(c - want) < 1e-10


def test_refinement_only_raises_coherence():
    rng = np.random.default_rng(35)
    fine = OrthogonalDecomposition.computational(6)
    coarse = OrthogonalDecomposition.computational(6, [[0, 1, 2], [3, 4, 5]])
    assert is_refinement(fine, coarse)
    assert not is_refinement(coarse, fine)
    for _ in range(20):
        rho = random_density(6, rank=3, seed=rng)
        assert c_half(rho, coarse) <= c_half(rho, fine) + 1e-10


def test_l1_bound():
    rng = np.random.default_rng(36)
    for _ in range(30):
        d = int(rng.integers(2, 7))
        rho = random_density(d, rank=d, seed=rng)
        assert c_half(rho, rank1(d)) <= 2.0 / (d - 1.0) * c_l1(rho) + 1e-10


def test_coherence_vector_block_weights():
    rng = np.random.default_rng(37)
    ham = SpectralHamiltonian.from_spectrum(np.array([0.0, 1.0, 1.0, 2.5]))
    psi = haar_random_state(4, rng)
    r = coherence_vector(psi, ham)
    assert len(r) == ham.level_count
    assert abs(np.sum(r) - 1.0) < 1e-10
    assert np.all(r >= -1e-12)
    # weights are the squared block norms
    for m, p in enumerate(ham.decomposition.projectors):
        assert abs(r[m] - np.linalg.norm(p @ psi) ** 2) < 1e-10


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        c_half(np.eye(3) / 3.0, rank1(2))
