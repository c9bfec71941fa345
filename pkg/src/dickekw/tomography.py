"""Photon-counting tomography: settings, Born statistics, Poisson counts,
linear inversion, maximum-likelihood reconstruction, and bootstrap errors.

A measurement setting is a string over {X, Y, Z}, one letter per qubit
(leftmost = qubit a).  Outcomes are bit strings in the same order; bit 0
denotes the +1 eigenvalue of that qubit's operator.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import sqrt

import numpy as np

from . import qmat
from .correlations import CorrelatorRecord
from .qmat import tensor

# rows of each matrix are the outcome bras (outcome 0 first = +1 eigenvalue)
_BASIS_BRAS = {
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2),
    "Y": np.array([[1, -1j], [1, 1j]], dtype=complex) / sqrt(2),
    "Z": np.eye(2, dtype=complex),
}


@dataclass
class CountRecord:
    """Registered events for one outcome of one setting.

    ``count`` is a nonnegative number; integral for real data, fractional
    only for exact-probability pseudo-counts.
    """

    setting: str
    outcome: str
    count: float


@dataclass
class TomographyResult:
    """Maximum-likelihood reconstruction output."""

    rho: np.ndarray
    log_likelihood: float
    iterations: int
    converged: bool
    log_likelihood_trace: np.ndarray


def settings_full(n: int) -> list[str]:
    """All 3**n local Pauli settings in lexicographic order (X < Y < Z)."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return ["".join(p) for p in product("XYZ", repeat=n)]


def _check_setting(setting: str) -> str:
    if not setting or any(l not in _BASIS_BRAS for l in setting):
        raise ValueError(f"bad measurement setting {setting!r}")
    return setting


def setting_basis(setting: str) -> np.ndarray:
    """Matrix whose rows are the outcome bras of a setting."""
    _check_setting(setting)
    return tensor(*(_BASIS_BRAS[l] for l in setting))


def setting_projectors(setting: str) -> np.ndarray:
    """Stack of rank-1 projectors, indexed by outcome."""
    b = setting_basis(setting)
    return np.einsum("oi,oj->oij", b.conj(), b)


def born_probabilities(rho, setting: str) -> np.ndarray:
    """Outcome probabilities of a setting; nonnegative, summing to one."""
    rho = np.asarray(rho, dtype=complex)
    b = setting_basis(setting)
    if rho.ndim == 1:
        qmat.check_state_vector(rho)
        probs = np.abs(b @ rho) ** 2
    else:
        qmat.check_density_matrix(rho)
        probs = np.real(np.einsum("oi,ij,oj->o", b, rho, b.conj()))
    return np.clip(probs, 0.0, None)


def _outcome_strings(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(2**n)]


def simulate_counts(rho, settings, mean_counts: float, seed: int) -> list[CountRecord]:
    """Poissonian photon-counting simulation.

    Each outcome of each setting registers Poisson(mean_counts * probability)
    events; draws follow the given setting order, so a fixed seed reproduces
    the records bit-identically.
    """
    if mean_counts <= 0:
        raise ValueError("mean_counts must be positive")
    rng = np.random.default_rng(seed)
    records = []
    for setting in settings:
        probs = born_probabilities(rho, setting)
        counts = rng.poisson(mean_counts * probs)
        for outcome, count in zip(_outcome_strings(len(setting)), counts):
            records.append(CountRecord(setting, outcome, int(count)))
    return records


def exact_counts(rho, settings, mean_counts: float = 1.0) -> list[CountRecord]:
    """Noiseless pseudo-counts: mean_counts times the exact probabilities."""
    records = []
    for setting in settings:
        probs = born_probabilities(rho, setting)
        for outcome, p in zip(_outcome_strings(len(setting)), probs):
            records.append(CountRecord(setting, outcome, mean_counts * float(p)))
    return records


def _gather(counts):
    """Group records into {setting: outcome-count vector}; infer qubit count."""
    table: dict[str, np.ndarray] = {}
    n = None
    for r in counts:
        setting = _check_setting(r.setting)
        if n is None:
            n = len(setting)
        if len(setting) != n or len(r.outcome) != n:
            raise ValueError("inconsistent setting/outcome lengths in counts")
        if float(r.count) < 0:
            raise ValueError("counts must be nonnegative")
        vec = table.setdefault(setting, np.zeros(2**n))
        vec[int(r.outcome, 2)] += float(r.count)
    if not table:
        raise ValueError("no count records given")
    return n, table


def _sign_vector(pauli: str) -> np.ndarray:
    """Outcome-indexed eigenvalue signs of a Pauli string within any
    setting that refines it."""
    single = {True: np.array([1.0, 1.0]), False: np.array([1.0, -1.0])}
    out = np.array([1.0])
    for letter in pauli:
        out = np.kron(out, single[letter == "I"])
    return out


def _refining_settings(pauli: str, available) -> list[str]:
    return [s for s in available
            if all(p == "I" or p == s[i] for i, p in enumerate(pauli))]


def linear_inversion(counts) -> np.ndarray:
    """Direct inversion rho = 2**-n sum_P <P> P from observed frequencies.

    Pauli expectations average over every available refining setting.  The
    output is Hermitian with unit trace but can fail positivity on noisy
    data; consumers decide whether that matters.
    """
    n, table = _gather(counts)
    freqs = {}
    for setting, vec in table.items():
        total = vec.sum()
        if total > 0:
            freqs[setting] = vec / total
    if not freqs:
        raise ValueError("all settings have zero total counts")
    rho = np.zeros((2**n, 2**n), dtype=complex)
    from .correlations import pauli_matrix
    for pauli in ("".join(p) for p in product("IXYZ", repeat=n)):
        refining = _refining_settings(pauli, freqs)
        if not refining:
            raise ValueError(f"no setting with data covers {pauli}")
        signs = _sign_vector(pauli)
        est = float(np.mean([signs @ freqs[s] for s in refining]))
        rho += est * pauli_matrix(pauli)
    return rho / 2**n


def _psd_project(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    if vals.sum() <= 0:
        return np.eye(rho.shape[0], dtype=complex) / rho.shape[0]
    vals /= vals.sum()
    return (vecs * vals) @ vecs.conj().T


def mle_reconstruct(counts, max_iter: int = 5000, tol: float = 1e-10) -> TomographyResult:
    """Maximum-likelihood state reconstruction from count records.

    Iterates the R rho R fixed point of the Poisson/multinomial
    log-likelihood, falling back to diluted steps whenever a full step would
    lower the likelihood, so the likelihood trace is monotone.  Starts from
    the positivity-projected linear inversion and stops once the
    log-likelihood gain drops below ``tol`` (or at ``max_iter``).
    """
    n, table = _gather(counts)
    dim = 2**n
    projs = []
    weights = []
    for setting, vec in table.items():
        live = vec > 0
        if not live.any():
            continue
        projs.append(setting_projectors(setting)[live])
        weights.append(vec[live])
    if not projs:
        raise ValueError("all settings have zero total counts")
    projs = np.concatenate(projs, axis=0)
    weights = np.concatenate(weights)
    total = weights.sum()

    def probs_of(rho):
        return np.clip(np.real(np.einsum("kij,ji->k", projs, rho)), 1e-12, None)

    def loglike(p):
        return float(weights @ np.log(p))

    rho = _psd_project(linear_inversion(counts))
    ll = loglike(probs_of(rho))
    trace = [ll]
    iterations = 0
    converged = False
    eye = np.eye(dim)
    for iterations in range(1, max_iter + 1):
        p = probs_of(rho)
        r_op = np.einsum("k,kij->ij", weights / (total * p), projs)
        candidate = r_op @ rho @ r_op
        candidate /= np.trace(candidate).real
        ll_new = loglike(probs_of(candidate))
        if ll_new < ll - 1e-11 * (1 + abs(ll)):
            accepted = False
            eps = 0.5
            while eps > 1e-10:
                damped = eye + eps * r_op
                candidate = damped @ rho @ damped
                candidate /= np.trace(candidate).real
                ll_new = loglike(probs_of(candidate))
                if ll_new >= ll - 1e-11 * (1 + abs(ll)):
                    accepted = True
                    break
                eps /= 2
            if not accepted:
                converged = True
                break
        gain = ll_new - ll
        rho = candidate
        ll = ll_new
        trace.append(ll)
        if gain < tol:
            converged = True
            break
    rho = (rho + rho.conj().T) / 2
    return TomographyResult(
        rho=rho, log_likelihood=ll, iterations=iterations,
        converged=converged, log_likelihood_trace=np.array(trace))


def bootstrap_fidelity(counts, target, n_boot: int = 100, seed: int = 0,
                       threads: int = 1):
    """Bootstrap mean and standard deviation of the fidelity to a pure target.

    Each replica resamples every count from Poisson(observed value),
    re-runs the maximum-likelihood reconstruction, and scores
    ``fidelity_pure(target, rho)``.  Replicas draw from independent
    seed-derived streams, so results do not depend on scheduling.
    """
    if n_boot < 50:
        raise ValueError("at least 50 bootstrap replicas are required")
    counts = list(counts)
    target = qmat.check_state_vector(target)
    streams = np.random.SeedSequence(seed).spawn(n_boot)

    def one(stream):
        rng = np.random.default_rng(stream)
        resampled = [CountRecord(r.setting, r.outcome,
                                 int(rng.poisson(float(r.count))))
                     for r in counts]
        result = mle_reconstruct(resampled)
        return qmat.fidelity_pure(target, result.rho)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fids = list(pool.map(one, streams))
    else:
        fids = [one(s) for s in streams]
    fids = np.array(fids)
    return float(fids.mean()), float(fids.std(ddof=1))


def correlators_from_counts(counts, paulis=None) -> list[CorrelatorRecord]:
    """Pauli expectations with counting uncertainties from count records.

    Each requested Pauli string averages the signed frequencies over every
    refining setting with data; sigma propagates the binomial variance of a
    signed frequency, (1 - <P>_s^2) / N_s, across the settings used.
    ``paulis=None`` evaluates the full table of 4**n strings.
    """
    n, table = _gather(counts)
    freqs = {}
    totals = {}
    for setting, vec in table.items():
        tot = vec.sum()
        if tot > 0:
            freqs[setting] = vec / tot
            totals[setting] = tot
    if paulis is None:
        paulis = ["".join(p) for p in product("IXYZ", repeat=n)]
    records = []
    for pauli in paulis:
        if len(pauli) != n:
            raise ValueError(f"Pauli string {pauli!r} does not match {n} qubits")
        refining = _refining_settings(pauli, freqs)
        if not refining:
            raise ValueError(f"no setting with data covers {pauli}")
        signs = _sign_vector(pauli)
        ests = np.array([signs @ freqs[s] for s in refining])
        variances = np.array([max(0.0, 1 - e * e) / totals[s]
                              for e, s in zip(ests, refining)])
        records.append(CorrelatorRecord(
            pauli, float(ests.mean()),
            float(np.sqrt(variances.sum()) / len(refining))))
    return records
