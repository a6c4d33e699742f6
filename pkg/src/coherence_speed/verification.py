"""Seeded verification suites shared by the CLI and the acceptance tests.

Every check draws its own ensemble from a named seed, measures a worst
figure (an identity gap or an inequality violation), and compares it to
the check's tolerance.  Checks are grouped into the suites the command
line exposes; the acceptance tests call the same functions with the
same defaults, so a green CLI run and a green test run mean the same
thing.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .avgdist import (
    a_coefficient,
    avg_distance_closed,
    benchmark_overlap_check,
    l1_upper_bound_check,
)
from .battery import (
    BatteryConfig,
    avg_extracted_work,
    constant_axis,
    parabola_pulse,
    qudit_battery_bound,
    rotating_axis,
    simulate_battery,
    sin2_pulse,
    sin4_pulse,
    spin_operator,
)
from .channels import (
    StinespringDilation,
    apply_kraus,
    dilate,
    equality_gap_analysis,
    permuted_channel_apply,
    qutrit_equality_channel,
    random_channel,
    theorem3_bound,
)
from .coherence import c_half, c_l1, closest_incoherent, is_refinement
from .dynamics import (
    HamiltonianPath,
    Trajectory,
    energy_uncertainty,
    evolve,
    finite_difference_speed,
    instantaneous_speed,
    qubit_closed_form,
)
from .errors import UnknownSuite
from .linalg import (
    OrthogonalDecomposition,
    SpectralHamiltonian,
    haar_random_state,
    pure_density,
    random_density,
    random_unitary,
    spectral_projectors,
    unitary_exp,
)
from .metrics import hellinger, affinity, qsl_bounds


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check: worst observed figure vs tolerance."""

    name: str
    passed: bool
    worst: float
    tol: float
    trials: int
    elapsed: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (f"{status} {self.name}: worst {self.worst:.3e} "
                f"(tol {self.tol:.1e}, {self.trials} trials, {self.elapsed:.2f}s)")
        if self.detail:
            text += f" - {self.detail}"
        return text


def _entropy(seed, salt: int) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence([int(seed), salt])


def _map_trials(fn, trials: int, ss: np.random.SeedSequence, jobs: int = 1) -> list:
    """fn(i, rng) per trial with an independent child generator each.

    Results keep trial order, so the reduction is deterministic for any
    job count.
    """
    children = ss.spawn(trials)
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda pair: fn(pair[0], np.random.default_rng(pair[1])),
                                 enumerate(children)))
    return [fn(i, np.random.default_rng(child)) for i, child in enumerate(children)]


def _spectrum(rng, m: int, *, lo: float = 0.0, hi: float = 4.0,
              min_gap: float = 1e-3) -> np.ndarray:
    while True:
        vals = np.sort(rng.uniform(lo, hi, m))
        if m == 1 or float(np.min(np.diff(vals))) >= min_gap:
            return vals


def _nondegenerate_ham(rng, d: int) -> SpectralHamiltonian:
    return SpectralHamiltonian.from_spectrum(_spectrum(rng, d), random_unitary(d, rng))


def _random_groups(rng, d: int, m: int | None = None) -> list[list[int]]:
    """Partition of range(d) into m nonempty contiguous index groups, shuffled."""
    if m is None:
        m = int(rng.integers(2, d + 1)) if d > 2 else 2
    idx = rng.permutation(d)
    cuts = np.sort(rng.choice(np.arange(1, d), size=m - 1, replace=False))
    return [list(g) for g in np.split(idx, cuts)]


def _random_decomposition(rng, d: int, m: int | None = None):
    basis = random_unitary(d, rng)
    groups = _random_groups(rng, d, m)
    return basis, groups, OrthogonalDecomposition.from_basis(basis, groups)


# ---------------------------------------------------------------------------
# thm1 suite
# ---------------------------------------------------------------------------

def check_thm1_equality(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Brute-force permutation average vs closed form, nondegenerate spectra."""
    trials = 300 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    dims = (dim,) * 5 if dim else (2, 3, 4, 5, 6)
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dims[i % len(dims)]
        ham = _nondegenerate_ham(rng, d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        res = avg_distance_closed(rho, ham, float(rng.uniform(0.05, 8.0)),
                                  include_brute=True)
        return res.gap

    worst = max(_map_trials(trial, trials, _entropy(seed, 11), jobs))
    return CheckResult("thm1-equality", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_benchmark_identity(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Cosine-average coefficient vs the rescaled survival probability."""
    trials = 100 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        lam = _spectrum(rng, d)
        phases = rng.uniform(0.0, 2.0 * np.pi, d)
        lhs, rhs = benchmark_overlap_check(lam, phases, float(rng.uniform(0.05, 8.0)))
        return abs(lhs - rhs)

    worst = max(_map_trials(trial, trials, _entropy(seed, 12), jobs))
    return CheckResult("benchmark-identity", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_coefficient_independence(*, seed=0, trials=None, dim=None, tol=None,
                                   jobs=1) -> CheckResult:
    """The coefficient recovered from brute-force averages is state-independent."""
    trials = 200 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()

    def recovered(rho, ham, t):
        res = avg_distance_closed(rho, ham, t, include_brute=True)
        return 1.0 - res.brute_force / (2.0 * res.coherence)

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        ham = _nondegenerate_ham(rng, d)
        t = float(rng.uniform(0.3, 6.0))
        states = []
        while len(states) < 2:
            rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
            if c_half(rho, ham.decomposition) > 1e-3:
                states.append(rho)
        return abs(recovered(states[0], ham, t) - recovered(states[1], ham, t))

    worst = max(_map_trials(trial, trials, _entropy(seed, 13), jobs))
    return CheckResult("coefficient-independence", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_max_coherent_dominance(*, seed=0, trials=None, dim=None, tol=None,
                                 jobs=1) -> CheckResult:
    """Uniform-weight superpositions maximize the averaged distance."""
    trials = 1000 if trials is None else trials
    tol = 1e-12 if tol is None else tol
    outer = 5
    inner = max(1, trials // outer)
    t0 = time.perf_counter()
    rng = np.random.default_rng(_entropy(seed, 14))
    worst = -np.inf
    for j in range(outer):
        d = dim if dim else 2 + j % 5
        ham = _nondegenerate_ham(rng, d)
        t = float(rng.uniform(0.3, 6.0))
        while 1.0 - a_coefficient(ham.levels, t) <= 1e-3:
            t = float(rng.uniform(0.3, 6.0))
        phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, d))
        phi = (ham.eigenvectors * phases).sum(axis=1) / np.sqrt(d)
        s_max = avg_distance_closed(pure_density(phi), ham, t,
                                    include_brute=False).closed_form
        for _ in range(inner):
            rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
            s = avg_distance_closed(rho, ham, t, include_brute=False).closed_form
            worst = max(worst, s - s_max)
    return CheckResult("max-coherent-dominance", worst <= tol, worst, tol,
                       outer * inner, time.perf_counter() - t0)


def check_coefficient_grid(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """The coefficient never exceeds 1 and stays below it on a dense grid.

    An incommensurate four-level spectrum is scanned over 10^4 points in
    (0, 20 pi]; no point may come within 1e-12 of the t = 0 value 1.
    """
    trials = 10_000 if trials is None else trials
    tol = 0.0 if tol is None else tol
    t0 = time.perf_counter()
    lam = np.array([0.0, 1.0, np.sqrt(2.0), np.sqrt(5.0)])
    ts = np.linspace(20.0 * np.pi / trials, 20.0 * np.pi, trials)
    grid_vals = np.array([a_coefficient(lam, t) for t in ts])
    worst = float(np.max(grid_vals) - (1.0 - 1e-12))

    rng = np.random.default_rng(_entropy(seed, 15))
    cap = -np.inf
    for _ in range(50):
        d = dim if dim else int(rng.integers(2, 7))
        lam_r = _spectrum(rng, d)
        for t in rng.uniform(0.0, 20.0, 20):
            cap = max(cap, a_coefficient(lam_r, float(t)) - 1.0)
    passed = worst <= tol and cap <= 1e-15
    return CheckResult("coefficient-grid", passed, worst, tol, trials,
                       time.perf_counter() - t0,
                       detail=f"random-spectrum excess over 1: {cap:.1e}")


# ---------------------------------------------------------------------------
# thm2 suite
# ---------------------------------------------------------------------------

def check_thm2_equality(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Brute force vs closed form with forced-degenerate spectra."""
    trials = 300 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        m = 2 + i % 4
        mult = rng.integers(1, 3, m)
        if not np.any(mult > 1):
            mult[int(rng.integers(m))] = 2
        if dim:
            # stretch multiplicities until the total dimension matches
            while int(mult.sum()) < dim:
                mult[int(rng.integers(m))] += 1
        levels = _spectrum(rng, m)
        vals = np.repeat(levels, mult)
        d = len(vals)
        ham = SpectralHamiltonian.from_spectrum(vals, random_unitary(d, rng))
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        res = avg_distance_closed(rho, ham, float(rng.uniform(0.05, 8.0)),
                                  include_brute=True)
        return res.gap

    worst = max(_map_trials(trial, trials, _entropy(seed, 21), jobs))
    return CheckResult("thm2-equality", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# thm3 suite
# ---------------------------------------------------------------------------

def _qubit_env_case(rng):
    channel = random_channel(2, 2, rng)
    dilation = dilate(channel)
    rho = random_density(2, rank=int(rng.integers(1, 3)), seed=rng)
    return channel, dilation, rho


def check_thm3_inequality(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Channel-average distance never exceeds the dilated coherence ceiling."""
    trials = 100 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        _, dilation, rho = _qubit_env_case(rng)
        lhs, rhs = theorem3_bound(dilation, rho)
        return lhs - rhs

    worst = max(_map_trials(trial, trials, _entropy(seed, 31), jobs))
    return CheckResult("thm3-inequality", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_thm3_dpi(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Per-permutation contraction: system distance <= dilated distance."""
    trials = 50 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        _, dilation, rho = _qubit_env_case(rng)
        joint = dilation.joint_input(rho)
        m = len(dilation.levels)
        worst_s = -np.inf
        for s in itertools.permutations(range(m)):
            sys_dist = hellinger(permuted_channel_apply(dilation, s, rho), rho)
            ham_s = dilation.hamiltonian.permute_levels(s)
            u = unitary_exp(ham_s, dilation.duration)
            joint_dist = hellinger(u @ joint @ u.conj().T, joint)
            worst_s = max(worst_s, sys_dist - joint_dist)
        return worst_s

    worst = max(_map_trials(trial, trials, _entropy(seed, 32), jobs))
    return CheckResult("thm3-dpi-per-permutation", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_thm3_dilation_consistency(*, seed=0, trials=None, dim=None, tol=None,
                                    jobs=1) -> CheckResult:
    """Kraus action and identity-permutation dilation action agree in distance."""
    trials = 100 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        channel, dilation, rho = _qubit_env_case(rng)
        direct = hellinger(apply_kraus(channel, rho), rho)
        identity = tuple(range(len(dilation.levels)))
        via_dilation = hellinger(permuted_channel_apply(dilation, identity, rho), rho)
        return abs(direct - via_dilation)

    worst = max(_map_trials(trial, trials, _entropy(seed, 33), jobs))
    return CheckResult("thm3-dilation-consistency", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_thm3_product_equality(*, seed=0, trials=None, dim=None, tol=None,
                                jobs=1) -> CheckResult:
    """Non-interacting dilations with the environment in a stationary state
    saturate the bound: the permutation-averaged channel distance equals the
    dilated closed form exactly."""
    trials = 100 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()
    eye2 = np.eye(2)

    def trial(i, rng):
        while True:
            ham_a = SpectralHamiltonian.from_spectrum(
                _spectrum(rng, 2, min_gap=1e-2), random_unitary(2, rng))
            h_env = (np.zeros((2, 2)) if i % 4 == 0
                     else np.diag(_spectrum(rng, 2, min_gap=1e-2)))
            h_joint = np.kron(ham_a.matrix(), eye2) + np.kron(eye2, h_env)
            gaps = np.diff(np.sort(np.linalg.eigvalsh(h_joint)))
            # keep only exactly-degenerate or safely-separated joint spectra
            if not np.any((gaps > 1e-12) & (gaps < 1e-6)):
                break
        dilation = StinespringDilation(
            hamiltonian=SpectralHamiltonian.from_matrix(h_joint),
            sys_dim=2, env_dim=2,
            env_state=np.array([1.0, 0.0], dtype=complex),
            duration=float(rng.uniform(0.2, 2.0)))
        rho = random_density(2, rank=int(rng.integers(1, 3)), seed=rng)
        lhs, rhs = theorem3_bound(dilation, rho)
        return abs(lhs - rhs)

    worst = max(_map_trials(trial, trials, _entropy(seed, 34), jobs))
    return CheckResult("thm3-product-equality", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_qutrit_equality_construction(*, seed=0, trials=None, dim=None, tol=None,
                                       jobs=1) -> CheckResult:
    """The hand-built qutrit channel: complete, correct output, zero witness."""
    tol = 1e-14 if tol is None else tol
    t0 = time.perf_counter()
    channel = qutrit_equality_channel()
    total = sum(k.conj().T @ k for k in channel.operators)
    completeness = float(np.max(np.abs(total - np.eye(3))))
    rho0 = pure_density(np.array([1.0, 0.0, 0.0], dtype=complex))
    out = apply_kraus(channel, rho0)
    target = np.diag([0.0, 0.5, 0.5]).astype(complex)
    output_err = float(np.max(np.abs(out - target)))
    report = equality_gap_analysis(channel, rho0)
    worst = max(completeness, output_err, abs(report.witness))
    passed = worst < tol and report.witness_is_zero
    detail = (f"completeness {completeness:.1e}, output {output_err:.1e}, "
              f"witness {report.witness:.1e}")
    return CheckResult("qutrit-equality-construction", passed, worst, tol, 1,
                       time.perf_counter() - t0, detail=detail)


# ---------------------------------------------------------------------------
# coherence-lemmas suite
# ---------------------------------------------------------------------------

def check_faithfulness(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Coherence vanishes exactly on block-diagonal states and only there."""
    trials = 500 if trials is None else trials
    tol = 1e-12 if tol is None else tol
    t0 = time.perf_counter()
    worst_zero = -np.inf
    min_coherent = np.inf
    rng = np.random.default_rng(_entropy(seed, 41))
    n = 0
    while n < trials:
        d = dim if dim else 2 + n % 5
        _, _, decomp = _random_decomposition(rng, d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        off = float(np.linalg.norm(rho - decomp.dephase(rho)))
        if n % 2 == 0:
            rho = decomp.dephase(rho)
            worst_zero = max(worst_zero, c_half(rho, decomp))
        else:
            if off < 1e-6:
                continue    # ambiguous draw; replace it
            min_coherent = min(min_coherent, c_half(rho, decomp))
        n += 1
    passed = worst_zero < tol and min_coherent > 1e-12
    return CheckResult("faithfulness", passed, worst_zero, tol, trials,
                       time.perf_counter() - t0,
                       detail=f"min coherent-side value {min_coherent:.1e}")


def check_variational_identity(*, seed=0, trials=None, dim=None, tol=None,
                               jobs=1) -> CheckResult:
    """c_half equals the affinity distance to its closest incoherent state."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        _, _, decomp = _random_decomposition(rng, d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        sigma = closest_incoherent(rho, decomp)
        return abs(c_half(rho, decomp) - (1.0 - affinity(rho, sigma) ** 2))

    worst = max(_map_trials(trial, trials, _entropy(seed, 42), jobs))
    return CheckResult("variational-identity", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_block_unitary_invariance(*, seed=0, trials=None, dim=None, tol=None,
                                   jobs=1) -> CheckResult:
    """Unitaries acting inside blocks leave the coherence value unchanged."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        basis, groups, decomp = _random_decomposition(rng, d)
        blocks = [random_unitary(len(g), rng) for g in groups]
        perm = [j for g in groups for j in g]
        u_grouped = basis[:, perm] @ block_diag(*blocks) @ basis[:, perm].conj().T
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        rotated = u_grouped @ rho @ u_grouped.conj().T
        return abs(c_half(rotated, decomp) - c_half(rho, decomp))

    worst = max(_map_trials(trial, trials, _entropy(seed, 43), jobs))
    return CheckResult("block-unitary-invariance", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_additivity(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Coherence of a weighted direct sum is the weighted sum of coherences."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d1 = dim if dim else int(rng.integers(2, 5))
        d2 = dim if dim else int(rng.integers(2, 5))
        _, _, dec1 = _random_decomposition(rng, d1)
        _, _, dec2 = _random_decomposition(rng, d2)
        rho = random_density(d1, rank=int(rng.integers(1, d1 + 1)), seed=rng)
        sig = random_density(d2, rank=int(rng.integers(1, d2 + 1)), seed=rng)
        p = float(rng.uniform(0.05, 0.95))
        combined = block_diag(p * rho, (1.0 - p) * sig)
        projs = ([block_diag(q, np.zeros((d2, d2))) for q in dec1.projectors]
                 + [block_diag(np.zeros((d1, d1)), q) for q in dec2.projectors])
        dec = OrthogonalDecomposition(tuple(projs))
        expected = p * c_half(rho, dec1) + (1.0 - p) * c_half(sig, dec2)
        return abs(c_half(combined, dec) - expected)

    worst = max(_map_trials(trial, trials, _entropy(seed, 44), jobs))
    return CheckResult("additivity", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def _refining_pair(rng, d: int):
    """A fine decomposition plus a coarse one built by merging its groups."""
    basis = random_unitary(d, rng)
    fine_groups = _random_groups(rng, d)
    k = len(fine_groups)
    n_coarse = int(rng.integers(1, k + 1))
    labels = np.sort(rng.integers(0, n_coarse, k))
    coarse_groups = [
        [j for g, lab in zip(fine_groups, labels) if lab == c for j in g]
        for c in range(n_coarse)]
    coarse_groups = [g for g in coarse_groups if g]
    fine = OrthogonalDecomposition.from_basis(basis, fine_groups)
    coarse = OrthogonalDecomposition.from_basis(basis, coarse_groups)
    return fine, coarse


def check_refinement_order(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Finer decompositions see at least as much coherence, and the
    refinement predicate itself classifies built pairs correctly."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        fine, coarse = _refining_pair(rng, d)
        if not is_refinement(fine, coarse):
            return np.inf
        if i % 10 == 0 and d >= 2:
            other = OrthogonalDecomposition.from_basis(random_unitary(d, rng))
            fine_r1 = OrthogonalDecomposition.from_basis(random_unitary(d, rng))
            if is_refinement(fine_r1, other):
                return np.inf
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        return c_half(rho, coarse) - c_half(rho, fine)

    worst = max(_map_trials(trial, trials, _entropy(seed, 45), jobs))
    return CheckResult("refinement-order", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_l1_comparison(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """c_half never exceeds 2/(d-1) times the off-diagonal absolute sum."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        decomp = OrthogonalDecomposition.computational(d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        return c_half(rho, decomp) - 2.0 / (d - 1.0) * c_l1(rho)

    worst = max(_map_trials(trial, trials, _entropy(seed, 46), jobs))
    return CheckResult("l1-comparison", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_dephasing_monotonicity(*, seed=0, trials=None, dim=None, tol=None,
                                 jobs=1) -> CheckResult:
    """Dephasing in any refining decomposition cannot raise the coherence."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        fine, coarse = _refining_pair(rng, d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        return c_half(fine.dephase(rho), coarse) - c_half(rho, coarse)

    worst = max(_map_trials(trial, trials, _entropy(seed, 47), jobs))
    return CheckResult("dephasing-monotonicity", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_incoherent_mixture_monotonicity(*, seed=0, trials=None, dim=None, tol=None,
                                          jobs=1) -> CheckResult:
    """Sampled strong monotonicity: random convex mixtures of block unitaries
    (an incoherent Kraus set) never raise the coherence."""
    trials = 200 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        basis, groups, decomp = _random_decomposition(rng, d)
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        n_terms = int(rng.integers(2, 5))
        weights = rng.uniform(0.05, 1.0, n_terms)
        weights /= weights.sum()
        perm = [j for g in groups for j in g]
        out = np.zeros_like(rho)
        for w in weights:
            blocks = [random_unitary(len(g), rng) for g in groups]
            u = basis[:, perm] @ block_diag(*blocks) @ basis[:, perm].conj().T
            out = out + w * (u @ rho @ u.conj().T)
        return c_half(out, decomp) - c_half(rho, decomp)

    worst = max(_map_trials(trial, trials, _entropy(seed, 48), jobs))
    return CheckResult("incoherent-mixture-monotonicity", worst <= tol, worst, tol,
                       trials, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# speed-identity suite
# ---------------------------------------------------------------------------

def check_speed_identity(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Gap-weighted speed equals sqrt(2) times the energy spread."""
    trials = 500 if trials is None else trials
    tol = 1e-10 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 7
        if i % 3 == 0 and d >= 3:
            m = int(rng.integers(2, d))
            mult = np.ones(m, dtype=int)
            for _ in range(d - m):
                mult[int(rng.integers(m))] += 1
            vals = np.repeat(_spectrum(rng, m), mult)
        else:
            vals = _spectrum(rng, d)
        ham = SpectralHamiltonian.from_spectrum(vals, random_unitary(d, rng))
        psi = haar_random_state(d, rng)
        v = instantaneous_speed(psi, ham)
        return abs(v - np.sqrt(2.0) * energy_uncertainty(psi, ham.matrix()))

    worst = max(_map_trials(trial, trials, _entropy(seed, 51), jobs))
    return CheckResult("speed-identity", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_fd_convergence(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Difference-quotient speeds approach the closed form linearly in the
    sampling interval.

    The trajectory is integrated on a much finer grid (midpoint-sampled,
    so the integration error is negligible) and then subsampled at each
    candidate interval: a chord whose endpoints are one integrator step
    apart is exactly a constant-Hamiltonian arc and would show the
    constant-H second order instead of the path's first order.
    """
    trials = 5 if trials is None else trials
    t0 = time.perf_counter()
    rng = np.random.default_rng(_entropy(seed, 52))
    window = (1.3, 3.2)
    # dt_fine must divide every sampling interval so subsampled grids
    # pass through t_mid exactly
    t_final, t_mid, dt_fine = 0.2, 0.1, 2.5e-5
    dts = (1e-3, 5e-4, 2.5e-4)
    ratios = []
    for _ in range(trials):
        for _ in range(20):
            d = dim if dim else int(rng.integers(2, 5))
            h0 = np.asarray(_nondegenerate_ham(rng, d).matrix())
            h1 = np.asarray(_nondegenerate_ham(rng, d).matrix())
            steps = int(round(t_final / dt_fine))
            base = HamiltonianPath.linear(h0, h1, t_final, steps=steps)
            shifted = HamiltonianPath(
                times=base.times, sampler=lambda t: base.sampler(t + dt_fine / 2.0))
            traj = evolve(haar_random_state(d, rng), shifted)
            k_fine = int(round(t_mid / dt_fine))
            ref = instantaneous_speed(
                traj.states[k_fine],
                SpectralHamiltonian.from_matrix(base.sampler(t_mid)))
            errs = []
            for dt in dts:
                stride = int(round(dt / dt_fine))
                view = Trajectory(times=traj.times[::stride],
                                  states=traj.states[::stride],
                                  speeds=traj.speeds[::stride],
                                  uncertainties=traj.uncertainties[::stride])
                errs.append(abs(finite_difference_speed(view, int(round(t_mid / dt)))
                                - ref))
            if errs[0] >= 1e-8:
                break
        ratios.extend((errs[0] / errs[1], errs[1] / errs[2]))
    worst = max(abs(r - 2.0) for r in ratios)
    passed = all(window[0] <= r <= window[1] for r in ratios)
    detail = "ratios " + ", ".join(f"{r:.2f}" for r in ratios)
    return CheckResult("fd-convergence", passed, worst, 1.2, trials,
                       time.perf_counter() - t0, detail=detail)


def check_qubit_closed_form(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Two-level closed form vs direct distance between evolved pure states."""
    trials = 1000 if trials is None else trials
    tol = 1e-12 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        psi = haar_random_state(2, rng)
        lam, gam = rng.uniform(-3.0, 3.0, 2)
        t = float(rng.uniform(0.0, 8.0))
        closed = qubit_closed_form(psi[0], psi[1], lam, gam, t)
        psi_t = psi * np.exp(-1j * np.array([lam, gam]) * t)
        return abs(closed - hellinger(pure_density(psi), pure_density(psi_t)))

    worst = max(_map_trials(trial, trials, _entropy(seed, 53), jobs))
    return CheckResult("qubit-closed-form", worst < tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_orthogonality_time(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """First distance maximum lands at pi over the level gap, within one step."""
    trials = 10 if trials is None else trials
    tol = 1e-12 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        lam0 = float(rng.uniform(-2.0, 2.0))
        gap = float(rng.uniform(0.3, 3.0))
        t_true = np.pi / gap
        plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
        rho0 = pure_density(plus)
        ts = np.linspace(0.0, 1.5 * t_true, 301)
        dists = [hellinger(rho0, pure_density(
            plus * np.exp(-1j * np.array([lam0, lam0 + gap]) * t))) for t in ts]
        t_hat = ts[int(np.argmax(dists))]
        return abs(t_hat - t_true) - (ts[1] - ts[0])

    worst = max(_map_trials(trial, trials, _entropy(seed, 54), jobs))
    return CheckResult("orthogonality-time", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# battery-bound suite
# ---------------------------------------------------------------------------

def _battery_grid():
    tau = 1.0
    pulses = (("sin2", sin2_pulse(1.0, tau)), ("sin4", sin4_pulse(1.0, tau)),
              ("parabola", parabola_pulse(1.0, tau)))
    states = (("ground", np.array([1.0, 0.0], dtype=complex)),
              ("plus", np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)),
              ("circular", np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0)))
    axes = (("x", constant_axis((1.0, 0.0, 0.0))), ("rotating-xy", rotating_axis(tau)))
    return tau, pulses, states, axes


def check_battery_trajectories(*, seed=0, trials=None, dim=None, tol=None,
                               jobs=1) -> CheckResult:
    """Every step of every scenario respects the work ceiling; steps with no
    drive-basis coherence extract nothing."""
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()
    tau, pulses, states, axes = _battery_grid()
    worst = -np.inf
    worst_zero = 0.0
    combos = 0
    for (_, pulse), (_, psi), (_, axis) in itertools.product(pulses, states, axes):
        config = BatteryConfig(epsilon=1.0, tau=tau, dt=1e-3, pulse=pulse,
                               drive_axis=axis)
        for rec in simulate_battery(config, psi):
            worst = max(worst, abs(rec.avg_work) - rec.bound)
            if rec.coherence < 1e-14:
                worst_zero = max(worst_zero, abs(rec.avg_work))
        combos += 1
    passed = worst <= tol and worst_zero < 1e-10
    return CheckResult("battery-trajectories", passed, worst, tol, combos,
                       time.perf_counter() - t0,
                       detail=f"zero-coherence worst work {worst_zero:.1e}")


def check_battery_interaction_invariance(*, seed=0, trials=None, dim=None, tol=None,
                                         jobs=1) -> CheckResult:
    """Rotating state and drive together preserves the drive-basis coherence."""
    trials = 200 if trials is None else trials
    tol = 1e-12 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        n = rng.normal(size=3)
        v = spin_operator(n / np.linalg.norm(n))
        rho = random_density(2, rank=int(rng.integers(1, 3)), seed=rng)
        w = random_unitary(2, rng)
        c_lab = c_half(rho, spectral_projectors(v).decomposition)
        c_rot = c_half(w @ rho @ w.conj().T,
                       spectral_projectors(w @ v @ w.conj().T).decomposition)
        return abs(c_lab - c_rot)

    worst = max(_map_trials(trial, trials, _entropy(seed, 61), jobs))
    return CheckResult("battery-interaction-invariance", worst < tol, worst, tol,
                       trials, time.perf_counter() - t0)


def check_qudit_battery(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """d-level generalization: reduces to the two-branch form, obeys its
    ceiling, and extracts nothing from drive-diagonal states."""
    trials = 100 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()
    rng = np.random.default_rng(_entropy(seed, 62))
    dt = 1e-3
    p1 = np.diag([0.0, 1.0]).astype(complex)

    worst_reduction = -np.inf
    for _ in range(trials):
        eps = float(rng.uniform(0.2, 2.0))
        eta = float(rng.uniform(0.1, 1.0))
        n = rng.normal(size=3)
        v = spin_operator(n / np.linalg.norm(n))
        rho = pure_density(haar_random_state(2, rng))
        avg, _ = qudit_battery_bound(rho, eps * p1, eta * v, dt)
        two_branch = avg_extracted_work(rho, eps, eta, v, dt)
        worst_reduction = max(worst_reduction, abs(avg - two_branch))

    d = dim if dim else 3
    worst_bound = -np.inf
    worst_diag = 0.0
    for _ in range(trials):
        h0 = np.diag(np.sort(rng.uniform(0.0, 2.0, d))).astype(complex)
        eta = float(rng.uniform(0.1, 1.0))
        w = random_unitary(d, rng)
        v = eta * (w @ np.diag(np.linspace(-1.0, 1.0, d)).astype(complex) @ w.conj().T)
        rho = pure_density(haar_random_state(d, rng))
        avg, bound = qudit_battery_bound(rho, h0, v, dt)
        worst_bound = max(worst_bound, abs(avg) - bound)
        probs = rng.uniform(0.1, 1.0, d)
        diag_rho = w @ np.diag(probs / probs.sum()).astype(complex) @ w.conj().T
        avg0, _ = qudit_battery_bound(diag_rho, h0, v, dt)
        worst_diag = max(worst_diag, abs(avg0))

    worst = max(worst_reduction - 1e-12, worst_bound, worst_diag - 1e-10)
    passed = (worst_reduction < 1e-12 and worst_bound <= tol and worst_diag < 1e-10)
    detail = (f"reduction {worst_reduction:.1e}, bound margin {worst_bound:.1e}, "
              f"diagonal work {worst_diag:.1e}")
    return CheckResult("qudit-battery", passed, worst_bound, tol, 2 * trials,
                       time.perf_counter() - t0, detail=detail)


# ---------------------------------------------------------------------------
# qsl suite
# ---------------------------------------------------------------------------

def check_qsl_mt_floor(*, seed=0, trials=None, dim=None, tol=None, jobs=1) -> CheckResult:
    """Elapsed time never beats the spread-based minimum time."""
    trials = 300 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        ham = _nondegenerate_ham(rng, d)
        psi0 = haar_random_state(d, rng)
        t = float(rng.uniform(0.05, 3.0))
        psi_t = unitary_exp(ham, t) @ psi0
        bounds = qsl_bounds(psi0, ham, psi_t)
        if bounds.mt_time is None:
            return -np.inf
        return bounds.mt_time - t

    worst = max(_map_trials(trial, trials, _entropy(seed, 71), jobs))
    return CheckResult("qsl-mt-floor", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


def check_qsl_ml_orthogonality(*, seed=0, trials=None, dim=None, tol=None,
                               jobs=1) -> CheckResult:
    """At first orthogonality both minimum times hold, the mean-energy one
    tightly for equally spaced two-level spectra."""
    trials = 100 if trials is None else trials
    tol = 1e-9 if tol is None else tol
    t0 = time.perf_counter()

    def trial(i, rng):
        d = dim if dim else 2 + i % 5
        g = float(rng.uniform(0.3, 3.0))
        basis = random_unitary(d, rng)
        ham = SpectralHamiltonian.from_spectrum(g * np.arange(d), basis)
        psi0 = basis.sum(axis=1) / np.sqrt(d)
        t_orth = 2.0 * np.pi / (d * g)
        psi_t = unitary_exp(ham, t_orth) @ psi0
        bounds = qsl_bounds(psi0, ham, psi_t)
        if abs(bounds.bures_angle - np.pi / 2.0) > 1e-9:
            return np.inf
        return max(bounds.mt_time - t_orth, bounds.ml_time - t_orth)

    worst = max(_map_trials(trial, trials, _entropy(seed, 72), jobs))
    return CheckResult("qsl-ml-orthogonality", worst <= tol, worst, tol, trials,
                       time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# suite registry
# ---------------------------------------------------------------------------

SUITES: dict[str, tuple] = {
    "thm1": (check_thm1_equality, check_benchmark_identity,
             check_coefficient_independence, check_max_coherent_dominance,
             check_coefficient_grid),
    "thm2": (check_thm2_equality,),
    "thm3": (check_thm3_inequality, check_thm3_dpi,
             check_thm3_dilation_consistency, check_thm3_product_equality,
             check_qutrit_equality_construction),
    "coherence-lemmas": (check_faithfulness, check_variational_identity,
                         check_block_unitary_invariance, check_additivity,
                         check_refinement_order, check_l1_comparison,
                         check_dephasing_monotonicity,
                         check_incoherent_mixture_monotonicity),
    "speed-identity": (check_speed_identity, check_fd_convergence,
                       check_qubit_closed_form, check_orthogonality_time),
    "battery-bound": (check_battery_trajectories,
                      check_battery_interaction_invariance, check_qudit_battery),
    "qsl": (check_qsl_mt_floor, check_qsl_ml_orthogonality),
}


def run_suite(suite: str, *, seed: int = 0, trials: int | None = None,
              dim: int | None = None, tol: float | None = None,
              jobs: int = 1) -> list[CheckResult]:
    """Run every check of a named suite; overrides apply to all its checks."""
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from "
                           + ", ".join(sorted(SUITES)))
    return [fn(seed=seed, trials=trials, dim=dim, tol=tol, jobs=jobs)
            for fn in SUITES[suite]]


def failures_as_dicts(results) -> list[dict]:
    """Machine-readable failure list for the CLI's stderr channel."""
    return [{"check": r.name, "worst": r.worst, "tol": r.tol,
             "trials": r.trials, "detail": r.detail}
            for r in results if not r.passed]
