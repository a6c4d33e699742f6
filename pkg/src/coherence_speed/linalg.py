"""Dense complex linear algebra for small Hilbert spaces.

Everything assumes square complex128 operators on spaces of dimension
d <= 16, where exact eigendecompositions are cheap and dense storage is
the right call.  Tensor products follow the convention that the first
factor is the outer (slow) index: ``kron(A, B)`` acts on basis vectors
``|a> x |b>`` ordered as ``a * dim_B + b``.  Units are hbar = 1
throughout the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadPermutation,
    BadRank,
    DimensionMismatch,
    InvalidState,
    NotHermitian,
    NotPSD,
)

# Absolute tolerances sized for d <= 16 dense double precision.
TOL_HERM = 1e-9
TOL_ORTH = 1e-9
TOL_TRACE = 1e-9
TOL_NORM = 1e-9
TOL_RECON = 1e-10
TOL_PSD = 1e-10
TOL_DEGEN = 1e-9


def hermitianize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (A + A†)/2."""
    return (a + a.conj().T) / 2.0


def is_hermitian(a: np.ndarray, tol: float = TOL_HERM) -> bool:
    """True when max|A - A†| <= tol."""
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian_eig(h, *, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    h = _square(h)
    if not is_hermitian(h, tol):
        dev = float(np.max(np.abs(h - h.conj().T)))
        raise NotHermitian(f"max |H - H†| = {dev:.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh(h)
    return w, v


def matrix_sqrt_psd(rho, *, tol_psd: float = TOL_PSD) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues within tol_psd of zero are treated as exact zeros
    (sqrt amplifies eigensolver noise on a singular matrix from 1e-16
    to 1e-8 otherwise); anything below -tol_psd raises NotPSD.
    """
    w, v = hermitian_eig(rho)
    if w[0] < -tol_psd:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol_psd:.1e}")
    w = np.where(w < tol_psd, 0.0, w)
    return hermitianize((v * np.sqrt(w)) @ v.conj().T)


def validate_density(rho, *, tol_herm: float = TOL_HERM, tol_psd: float = TOL_PSD,
                     tol_trace: float = TOL_TRACE) -> np.ndarray:
    """Check Hermiticity, positivity, and unit trace; return the array."""
    rho = _square(rho)
    if not is_hermitian(rho, tol_herm):
        raise NotHermitian("density matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(hermitianize(rho))
    if w[0] < -tol_psd:
        raise NotPSD(f"density matrix has eigenvalue {w[0]:.3e}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > tol_trace:
        raise InvalidState(f"trace {tr!r} differs from 1 beyond {tol_trace:.1e}")
    return rho


def validate_state_vector(psi, *, tol_norm: float = TOL_NORM) -> np.ndarray:
    """Check unit norm; return the vector as complex128."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    nrm = float(np.linalg.norm(psi))
    if abs(nrm - 1.0) > tol_norm:
        raise InvalidState(f"state norm {nrm!r} differs from 1 beyond {tol_norm:.1e}")
    return psi


def pure_density(psi) -> np.ndarray:
    """Projector |psi><psi| for a unit vector."""
    psi = validate_state_vector(psi)
    return np.outer(psi, psi.conj())


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the outer (slow) index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims: tuple[int, int], over: int) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    dims = (d_first, d_second) under the outer-first convention;
    over = 0 removes the first factor, over = 1 the second.
    """
    d0, d1 = int(dims[0]), int(dims[1])
    rho = _square(rho)
    if rho.shape[0] != d0 * d1:
        raise DimensionMismatch(f"shape {rho.shape} incompatible with dims {dims}")
    if over not in (0, 1):
        raise ValueError("over must be 0 (first factor) or 1 (second factor)")
    r = rho.reshape(d0, d1, d0, d1)
    if over == 1:
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def haar_random_state(dim: int, seed) -> np.ndarray:
    """Haar-distributed unit vector; deterministic given an integer seed."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rank: int, seed) -> np.ndarray:
    """Random density matrix of the requested rank (Ginibre construction)."""
    if not 1 <= rank <= dim:
        raise BadRank(f"rank {rank} outside 1..{dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    a = g @ g.conj().T
    return hermitianize(a / np.trace(a).real)


def random_hermitian(dim: int, seed, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix with O(scale) entries (GUE-like)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitianize(g) * (scale / np.sqrt(2.0))


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase fix)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass
class OrthogonalDecomposition:
    """Complete family of orthogonal projectors P_0..P_{M-1}.

    Invariants (checked on construction): each P_m is Hermitian and
    idempotent, distinct projectors annihilate each other, and the
    family sums to the identity.
    """

    projectors: tuple[np.ndarray, ...]

    _CHECK_TOL = 1e-8

    def __post_init__(self) -> None:
        projs = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        if not projs:
            raise ValueError("decomposition needs at least one projector")
        d = projs[0].shape[0]
        for p in projs:
            if p.shape != (d, d):
                raise DimensionMismatch("projectors must share one square shape")
            if np.max(np.abs(p - p.conj().T)) > self._CHECK_TOL:
                raise ValueError("projector is not Hermitian")
            if np.max(np.abs(p @ p - p)) > self._CHECK_TOL:
                raise ValueError("projector is not idempotent")
        for pa, pb in itertools.combinations(projs, 2):
            if np.max(np.abs(pa @ pb)) > self._CHECK_TOL:
                raise ValueError("projectors are not mutually orthogonal")
        total = sum(projs)
        if np.max(np.abs(total - np.eye(d))) > self._CHECK_TOL:
            raise ValueError("projectors do not sum to the identity")
        self.projectors = projs

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def size(self) -> int:
        """Number of blocks M."""
        return len(self.projectors)

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    @classmethod
    def from_basis(cls, vectors: np.ndarray,
                   groups: Sequence[Sequence[int]] | None = None) -> "OrthogonalDecomposition":
        """Build projectors from orthonormal columns, optionally grouped into blocks."""
        v = np.asarray(vectors, dtype=complex)
        d = v.shape[0]
        if groups is None:
            groups = [[i] for i in range(v.shape[1])]
        projs = []
        for g in groups:
            cols = v[:, list(g)]
            projs.append(cols @ cols.conj().T)
        return cls(tuple(projs))

    @classmethod
    def computational(cls, dim: int,
                      groups: Sequence[Sequence[int]] | None = None) -> "OrthogonalDecomposition":
        """Rank-1 projectors onto the computational basis (or grouped blocks of it)."""
        return cls.from_basis(np.eye(dim, dtype=complex), groups)

    def dephase(self, rho: np.ndarray) -> np.ndarray:
        """Block-diagonal part sum_m P_m rho P_m."""
        rho = _square(rho)
        if rho.shape[0] != self.dim:
            raise DimensionMismatch("state dimension does not match decomposition")
        out = np.zeros_like(rho)
        for p in self.projectors:
            out += p @ rho @ p
        return out


def _cluster_levels(eigvals: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Group ascending eigenvalues into distinct levels by consecutive gap > tol."""
    splits = np.flatnonzero(np.diff(eigvals) > tol)
    starts = np.concatenate(([0], splits + 1))
    ends = np.concatenate((splits + 1, [len(eigvals)]))
    level_of = np.zeros(len(eigvals), dtype=int)
    levels = np.empty(len(starts))
    for m, (a, b) in enumerate(zip(starts, ends)):
        level_of[a:b] = m
        levels[m] = float(np.mean(eigvals[a:b]))
    return levels, level_of


@dataclass
class SpectralHamiltonian:
    """Hermitian operator carried as its full spectral data.

    eigenvalues   -- ascending, length d
    eigenvectors  -- orthonormal columns matching eigenvalues
    levels        -- distinct eigenvalues after degeneracy grouping, ascending
    level_of      -- level index of each eigenvector column
    decomposition -- eigenspace projectors, one per distinct level
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    levels: np.ndarray
    level_of: np.ndarray
    decomposition: OrthogonalDecomposition

    @classmethod
    def from_matrix(cls, h, tol_degen: float = TOL_DEGEN) -> "SpectralHamiltonian":
        """Diagonalize a Hermitian matrix and group near-degenerate eigenvalues."""
        w, v = hermitian_eig(h)
        return cls._build(w, v, tol_degen)

    @classmethod
    def from_spectrum(cls, eigenvalues, basis: np.ndarray | None = None,
                      tol_degen: float = TOL_DEGEN) -> "SpectralHamiltonian":
        """Assemble from eigenvalues and an optional orthonormal eigenbasis.

        Defaults to the computational basis.  Eigenvalues are sorted
        ascending with the basis columns carried along.
        """
        w = np.asarray(eigenvalues, dtype=float).reshape(-1)
        d = len(w)
        if basis is None:
            v = np.eye(d, dtype=complex)
        else:
            v = np.asarray(basis, dtype=complex)
            if v.shape != (d, d):
                raise DimensionMismatch("basis shape does not match eigenvalue count")
            if np.max(np.abs(v.conj().T @ v - np.eye(d))) > 1e-8:
                raise ValueError("basis columns are not orthonormal")
        order = np.argsort(w, kind="stable")
        return cls._build(w[order], v[:, order], tol_degen)

    @classmethod
    def _build(cls, w: np.ndarray, v: np.ndarray, tol_degen: float) -> "SpectralHamiltonian":
        levels, level_of = _cluster_levels(w, tol_degen)
        groups = [np.flatnonzero(level_of == m) for m in range(len(levels))]
        decomp = OrthogonalDecomposition.from_basis(v, groups)
        return cls(eigenvalues=np.asarray(w, dtype=float), eigenvectors=v,
                   levels=levels, level_of=level_of, decomposition=decomp)

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def level_count(self) -> int:
        return len(self.levels)

    def matrix(self) -> np.ndarray:
        """Reconstruct the dense Hermitian matrix."""
        v = self.eigenvectors
        return hermitianize((v * self.eigenvalues) @ v.conj().T)

    def permute_levels(self, assignment: Sequence[int]) -> "SpectralHamiltonian":
        """New operator with level value m attached to projector block assignment[m].

        assignment must be a permutation of 0..M-1.  Level values keep
        their ascending order; eigenvector columns are regrouped to the
        assigned blocks (block dimensions travel with the blocks).
        """
        s = tuple(int(i) for i in assignment)
        m_count = self.level_count
        if sorted(s) != list(range(m_count)):
            raise BadPermutation(f"{assignment!r} is not a permutation of 0..{m_count - 1}")
        cols, vals, lev_of = [], [], []
        projs = []
        for i in range(m_count):
            block = np.flatnonzero(self.level_of == s[i])
            cols.append(self.eigenvectors[:, block])
            vals.extend([self.levels[i]] * len(block))
            lev_of.extend([i] * len(block))
            projs.append(self.decomposition.projectors[s[i]])
        return SpectralHamiltonian(
            eigenvalues=np.asarray(vals, dtype=float),
            eigenvectors=np.hstack(cols),
            levels=self.levels.copy(),
            level_of=np.asarray(lev_of, dtype=int),
            decomposition=OrthogonalDecomposition(tuple(projs)),
        )


def spectral_projectors(h, tol_degen: float = TOL_DEGEN) -> SpectralHamiltonian:
    """Eigenlevel grouping of a Hermitian matrix (see SpectralHamiltonian)."""
    return SpectralHamiltonian.from_matrix(h, tol_degen)


def unitary_exp(ham: SpectralHamiltonian, t: float) -> np.ndarray:
    """Evolution operator exp(-i H t) from spectral data (hbar = 1)."""
    v = ham.eigenvectors
    phases = np.exp(-1j * ham.eigenvalues * t)
    return (v * phases) @ v.conj().T


def kahan_mean(values) -> float:
    """Compensated (Kahan) running mean of an iterable of floats."""
    total = 0.0
    comp = 0.0
    count = 0
    for v in values:
        count += 1
        y = float(v) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    if count == 0:
        raise ValueError("mean of empty iterable")
    return total / count
