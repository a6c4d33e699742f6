"""Permutation-averaged evolution distance: brute force and closed form.

Fix a Hamiltonian with distinct levels lambda_0 < ... < lambda_{M-1}
and eigenprojectors P_0..P_{M-1}.  Reassigning the level values to the
projector blocks in every possible order gives M! isospectral
Hamiltonians H_s = sum_m lambda_m P_{s(m)}.  The quantity of interest
is the average squared-Hellinger distance between a state and its
time-t evolutions across that family:

    sbar(t) = (1/M!) sum_s D(rho, exp(-i H_s t) rho exp(i H_s t)).

The closed form factorizes the average into a state-independent
oscillatory coefficient and the affinity coherence of the state with
respect to the eigenprojector decomposition:

    sbar(t) = 2 (1 - B(t)) c_half(rho),
    B(t)    = 2 / (M (M - 1)) * sum_{m<n} cos((lambda_m - lambda_n) t).

``avg_distance_bruteforce`` evaluates the sum literally (one fresh
diagonalization per permutation) and is kept as an independent oracle
for the closed form.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass

import numpy as np

from .coherence import c_half, c_l1
from .errors import DegenerateSpectrum, DimensionMismatch, SingleLevel, TooManyLevels
from .linalg import (
    TOL_DEGEN,
    SpectralHamiltonian,
    kahan_mean,
    matrix_sqrt_psd,
    validate_density,
)
from .metrics import hellinger

BRUTE_FORCE_CAP = 8  # 8! = 40320 permutations


def permuted_hamiltonian(ham: SpectralHamiltonian, assignment) -> SpectralHamiltonian:
    """Member H_s of the isospectral family: level m goes to block assignment[m]."""
    return ham.permute_levels(assignment)


def _permuted_unitary(levels: np.ndarray, projectors, assignment, t: float) -> np.ndarray:
    """exp(-i H_s t) assembled directly from phases and projectors."""
    u = np.zeros_like(projectors[0])
    for m, block in enumerate(assignment):
        u = u + np.exp(-1j * levels[m] * t) * projectors[block]
    return u


def avg_distance_bruteforce(rho, ham: SpectralHamiltonian, t: float,
                            *, cap: int = BRUTE_FORCE_CAP) -> float:
    """Literal permutation average of D(rho, U_s rho U_s†) (compensated sum).

    Permutations are enumerated in lexicographic order.  Raises
    TooManyLevels when the distinct level count exceeds ``cap``.
    """
    rho = validate_density(rho)
    m_count = ham.level_count
    if m_count > cap:
        raise TooManyLevels(f"{m_count} levels exceed brute-force cap {cap}")
    sqrt_rho = matrix_sqrt_psd(rho)
    projs = ham.decomposition.projectors

    def terms():
        for s in itertools.permutations(range(m_count)):
            u = _permuted_unitary(ham.levels, projs, s, t)
            sigma = u @ rho @ u.conj().T
            yield hellinger(rho, sigma, sqrt_rho=sqrt_rho)

    return kahan_mean(terms())


def a_coefficient(eigenvalues, t: float, *, tol_degen: float = TOL_DEGEN) -> float:
    """Oscillatory coefficient for a nondegenerate spectrum.

    A(t) = 2 / (d (d - 1)) * sum_{m<n} cos((lambda_m - lambda_n) t);
    requires pairwise-distinct eigenvalues.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float).reshape(-1))
    d = len(lam)
    if d < 2:
        raise SingleLevel("need at least two eigenvalues")
    if np.min(np.diff(lam)) <= tol_degen:
        raise DegenerateSpectrum("eigenvalues are not pairwise distinct; "
                                 "group levels and use b_coefficient")
    return _pair_cos_mean(lam, t)


def b_coefficient(levels, t: float) -> float:
    """Oscillatory coefficient over the distinct levels of a degenerate spectrum."""
    lam = np.sort(np.asarray(levels, dtype=float).reshape(-1))
    if len(lam) < 2:
        raise SingleLevel("one distinct level: the averaged distance is identically 0")
    return _pair_cos_mean(lam, t)


def _pair_cos_mean(lam: np.ndarray, t: float) -> float:
    d = len(lam)
    diffs = lam[:, None] - lam[None, :]
    iu = np.triu_indices(d, k=1)
    return float(2.0 * np.sum(np.cos(diffs[iu] * t)) / (d * (d - 1)))


@dataclass(frozen=True)
class AvgDistanceResult:
    """One grid point of the averaged-distance identity.

    brute_force is None when the permutation count was over the cap or
    the caller skipped it.
    """

    t: float
    brute_force: float | None
    closed_form: float
    coefficient: float
    coherence: float

    @property
    def gap(self) -> float | None:
        if self.brute_force is None:
            return None
        return abs(self.brute_force - self.closed_form)


def avg_distance_closed(rho, ham: SpectralHamiltonian, t: float,
                        *, include_brute: bool | None = None,
                        cap: int = BRUTE_FORCE_CAP) -> AvgDistanceResult:
    """Closed form 2 (1 - B(t)) c_half(rho), optionally with the brute-force value.

    include_brute defaults to "when the level count is within the cap".
    A single-level Hamiltonian gives coefficient 1 and distance 0.
    """
    rho = validate_density(rho)
    coh = c_half(rho, ham.decomposition)
    if ham.level_count == 1:
        coef = 1.0
    else:
        coef = b_coefficient(ham.levels, t)
    closed = 2.0 * (1.0 - coef) * coh
    if include_brute is None:
        include_brute = ham.level_count <= cap
    brute = avg_distance_bruteforce(rho, ham, t, cap=cap) if include_brute else None
    return AvgDistanceResult(t=float(t), brute_force=brute, closed_form=closed,
                             coefficient=coef, coherence=coh)


def benchmark_overlap_check(eigenvalues, phases, t: float) -> tuple[float, float]:
    """Two routes to the oscillatory coefficient for a nondegenerate spectrum.

    Left: A(t) from the pairwise-cosine sum.  Right: the survival
    probability of the uniform superposition with arbitrary fixed
    phases, rescaled as d/(d-1) * (|<phi_0|phi_t>|^2 - 1/d).  The result
    does not depend on the phases.
    """
    lam = np.asarray(eigenvalues, dtype=float).reshape(-1)
    th = np.asarray(phases, dtype=float).reshape(-1)
    d = len(lam)
    if len(th) != d:
        raise DimensionMismatch("one phase per eigenvalue required")
    lhs = a_coefficient(lam, t)
    amp0 = np.exp(1j * th) / np.sqrt(d)
    ampt = amp0 * np.exp(-1j * lam * t)
    overlap = abs(np.vdot(amp0, ampt)) ** 2
    rhs = d / (d - 1.0) * (overlap - 1.0 / d)
    return lhs, float(rhs)


def l1_upper_bound_check(rho, ham: SpectralHamiltonian, t: float) -> tuple[float, float]:
    """Averaged distance vs its off-diagonal-sum ceiling for nondegenerate spectra.

    Returns (sbar, bound) with bound = 4 (1 - A(t)) / (d - 1) * c_l1(rho)
    in the Hamiltonian eigenbasis; sbar <= bound.
    """
    rho = validate_density(rho)
    lam = ham.levels
    d = ham.dim
    if ham.level_count != d:
        raise DegenerateSpectrum("bound stated for nondegenerate spectra only")
    coef = a_coefficient(lam, t)
    sbar = 2.0 * (1.0 - coef) * c_half(rho, ham.decomposition)
    bound = 4.0 * (1.0 - coef) / (d - 1.0) * c_l1(rho, ham.eigenvectors)
    return sbar, bound
