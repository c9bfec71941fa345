"""Correlation analysis: entropies, concurrence, classical correlations, and
the monogamy balance S(beta) = J(beta|alpha) + E(beta, gamma).

The residual KW = S - J - E is zero for pure tripartite states (projective
measurements are optimal on the rank-2 reductions involved) and nonnegative
for mixed ones.  J maximizes the entropy reduction of beta over projective
measurements on alpha, parametrized by

    |theta_1> = cos(theta)|0> + e^{i phi} sin(theta)|1>
    |theta_2> = e^{-i phi} sin(theta)|0> - cos(theta)|1>

with theta in [0, pi/2] and phi in [0, 2 pi).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import pi

import numpy as np
from scipy.optimize import minimize

from . import qmat
from .qmat import PAULI, partial_trace, tensor

QUBIT_NAMES = "abcd"


# ---------------------------------------------------------------------------
# Pauli expectations and two-qubit entanglement
# ---------------------------------------------------------------------------

def pauli_matrix(labels: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, e.g. "ZZI" (leftmost = qubit a)."""
    if not labels or any(l not in PAULI for l in labels):
        raise ValueError(f"bad Pauli string {labels!r}")
    return tensor(*(PAULI[l] for l in labels))


def pauli_expectation(rho, labels: str) -> float:
    """<P> = Tr[rho P] for a Pauli string; real within 1e-9 by construction."""
    rho = qmat.check_density_matrix(rho)
    if qmat.num_qubits(rho) != len(labels):
        raise ValueError("Pauli string length does not match qubit count")
    val = np.trace(rho @ pauli_matrix(labels))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def concurrence(rho) -> float:
    """Two-qubit concurrence C = max(0, l1 - l2 - l3 - l4).

    The l_i are the descending square roots of the eigenvalues of
    rho (Y x Y) rho* (Y x Y).
    """
    rho = qmat.check_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined for two-qubit states")
    yy = tensor(PAULI["Y"], PAULI["Y"])
    m = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.real(np.linalg.eigvals(m)), 0.0, None))
    lam[::-1].sort()
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation in bits from a concurrence value."""
    if not -1e-9 <= c <= 1 + 1e-9:
        raise ValueError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    x = (1 + np.sqrt(1 - c * c)) / 2
    return qmat.entropy_bits([x, 1 - x])


def entanglement_of_formation(rho) -> float:
    """Entanglement of formation of a two-qubit state."""
    return eof_from_concurrence(concurrence(rho))


# ---------------------------------------------------------------------------
# Classical correlations J(beta|alpha)
# ---------------------------------------------------------------------------

@dataclass
class MeasurementDirection:
    """Projective measurement direction on the Bloch sphere."""

    theta: float
    phi: float

    def kets(self):
        v1 = np.array([np.cos(self.theta),
                       np.exp(1j * self.phi) * np.sin(self.theta)])
        v2 = np.array([np.exp(-1j * self.phi) * np.sin(self.theta),
                       -np.cos(self.theta)])
        return v1, v2


def _canonical_direction(theta: float, phi: float) -> MeasurementDirection:
    theta = theta % pi
    if theta > pi / 2:
        theta = pi - theta
        phi = phi + pi
    return MeasurementDirection(theta=float(theta), phi=float(phi % (2 * pi)))


@lru_cache(maxsize=8)
def _direction_grid(grid: int):
    thetas = np.linspace(0.0, pi / 2, grid)
    phis = np.linspace(0.0, 2 * pi, grid, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt = tt.ravel()
    pp = pp.ravel()
    v1 = np.stack([np.cos(tt), np.exp(1j * pp) * np.sin(tt)], axis=1)
    v2 = np.stack([np.exp(-1j * pp) * np.sin(tt), -np.cos(tt)], axis=1)
    return tt, pp, v1, v2


def _entropy_2x2(m: np.ndarray) -> np.ndarray:
    """Unnormalized branch entropy sum(-lam log2(lam/q)) of 2x2 blocks.

    ``m`` has shape (..., 2, 2); returns q * S(m/q) elementwise, with
    zero-probability branches contributing zero.
    """
    q = np.real(m[..., 0, 0] + m[..., 1, 1])
    half_delta = 0.5 * np.real(m[..., 0, 0] - m[..., 1, 1])
    disc = np.sqrt(half_delta**2 + np.abs(m[..., 0, 1]) ** 2)
    lam_hi = np.clip(q / 2 + disc, 0.0, None)
    lam_lo = np.clip(q / 2 - disc, 0.0, None)
    out = np.zeros_like(q)
    live = q > 1e-12
    for lam in (lam_hi, lam_lo):
        ratio = np.ones_like(q)
        np.divide(lam, q, out=ratio, where=live)
        mask = live & (ratio > 1e-15)
        out[mask] -= lam[mask] * np.log2(ratio[mask])
    return out


def _conditional_entropy(blocks: np.ndarray, v1: np.ndarray, v2: np.ndarray):
    """sum_k q_k S(rho_beta|k) for measurement kets v1, v2 on qubit alpha.

    ``blocks[i, j]`` is the 2x2 beta-block <i|_alpha rho |j>_alpha; the kets
    may carry a leading batch dimension.
    """
    total = 0.0
    for v in (v1, v2):
        m = np.einsum("...i,...j,ijab->...ab", v.conj(), v, blocks)
        total = total + _entropy_2x2(m)
    return total


def classical_correlations(rho, measured: int = 0, grid: int = 64,
                           angle_tol: float = 1e-6):
    """Classical correlations of a two-qubit state.

    J = S(beta) - min over projective measurements on alpha of the average
    conditional entropy of beta.  The minimum is located on a grid x grid
    sweep of (theta, phi) (ties toward smaller theta, then smaller phi) and
    polished with Nelder-Mead simplex descent.

    Parameters
    ----------
    rho : array, shape (4, 4)
    measured : int
        Index of the measured qubit alpha (0 or 1).
    grid : int
        Points per angle axis for the initial sweep.
    angle_tol : float
        Simplex termination tolerance on the angles.

    Returns
    -------
    (J, MeasurementDirection)
    """
    rho = qmat.check_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("classical correlations are defined for two qubits")
    if measured not in (0, 1):
        raise ValueError("measured qubit must be 0 or 1")
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    if measured == 1:
        rho = qmat.permute_qubits(rho, [1, 0])
    s_beta = qmat.von_neumann_entropy(partial_trace(rho, [1]))
    blocks = rho.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)

    tt, pp, v1, v2 = _direction_grid(grid)
    values = _conditional_entropy(blocks, v1, v2)
    best = int(np.argmin(values))

    def objective(angles):
        d = MeasurementDirection(angles[0], angles[1])
        w1, w2 = d.kets()
        return float(_conditional_entropy(blocks, w1, w2))

    # polish from the few best distinct grid cells to avoid local basins
    order = np.argsort(values, kind="stable")
    starts = [best]
    for idx in order:
        idx = int(idx)
        if all(abs(tt[idx] - tt[s]) + abs(pp[idx] - pp[s]) > 0.3 for s in starts):
            starts.append(idx)
        if len(starts) == 3:
            break
    best_val = values[best]
    best_angles = (tt[best], pp[best])
    for idx in starts:
        res = minimize(objective, x0=[tt[idx], pp[idx]], method="Nelder-Mead",
                       options=dict(xatol=angle_tol, fatol=1e-10, maxiter=400))
        if res.fun < best_val:
            best_val = res.fun
            best_angles = (res.x[0], res.x[1])
    j = s_beta - float(best_val)
    return j, _canonical_direction(*best_angles)


# ---------------------------------------------------------------------------
# Exact monogamy evaluation
# ---------------------------------------------------------------------------

@dataclass
class KWReport:
    """One monogamy evaluation: KW = S - J - E for a (beta|alpha, gamma) split."""

    assignment: str
    S: float
    J: float
    E: float
    KW: float
    method: str
    sigma: float | None = None
    theta_opt: float | None = None
    phi_opt: float | None = None


def parse_assignment(text: str):
    """Parse "b|a,c" into qubit indices (alpha, beta, gamma)."""
    try:
        beta_part, rest = text.split("|")
        alpha_part, gamma_part = rest.split(",")
        idx = tuple(QUBIT_NAMES.index(s.strip()) for s in
                    (alpha_part, beta_part, gamma_part))
    except (ValueError, IndexError):
        raise ValueError(f"bad assignment {text!r}; expected e.g. b|a,c")
    if len(set(idx)) != 3:
        raise ValueError(f"assignment {text!r} must name three distinct qubits")
    return idx


def format_assignment(alpha: int, beta: int, gamma: int) -> str:
    return f"{QUBIT_NAMES[beta]}|{QUBIT_NAMES[alpha]},{QUBIT_NAMES[gamma]}"


def kw_exact(rho, assignment=(0, 1, 2), grid: int = 64,
             angle_tol: float = 1e-6) -> KWReport:
    """Exact monogamy residual of a three-qubit state.

    Parameters
    ----------
    rho : array, shape (8, 8)
        Three-qubit density matrix.
    assignment : str or (alpha, beta, gamma)
        Either "b|a,c" style or a tuple of distinct qubit indices: J is
        computed for measurements on alpha, the entropy and the
        entanglement of formation belong to beta and (beta, gamma).
    """
    rho = qmat.check_density_matrix(rho)
    if rho.shape != (8, 8):
        raise ValueError("exact evaluation expects a three-qubit state")
    if isinstance(assignment, str):
        alpha, beta, gamma = parse_assignment(assignment)
    else:
        alpha, beta, gamma = assignment
        if sorted((alpha, beta, gamma)) != [0, 1, 2]:
            raise ValueError(f"assignment {assignment} must cover qubits 0, 1, 2")
    s = qmat.von_neumann_entropy(partial_trace(rho, [beta]))
    j, direction = classical_correlations(
        partial_trace(rho, [alpha, beta]), measured=0,
        grid=grid, angle_tol=angle_tol)
    e = entanglement_of_formation(partial_trace(rho, [beta, gamma]))
    return KWReport(
        assignment=format_assignment(alpha, beta, gamma),
        S=s, J=j, E=e, KW=s - j - e, method="exact",
        theta_opt=direction.theta, phi_opt=direction.phi)


def kw_all_permutations(rho, grid: int = 64, angle_tol: float = 1e-6):
    """Exact reports for all six (alpha, beta, gamma) splits plus the mean KW."""
    reports = [kw_exact(rho, perm, grid=grid, angle_tol=angle_tol)
               for perm in permutations(range(3))]
    return reports, float(np.mean([r.KW for r in reports]))


# ---------------------------------------------------------------------------
# Symmetric single-excitation model: closed forms
# ---------------------------------------------------------------------------

@dataclass
class SymmetricModel:
    """Symmetric single-excitation parametrization (population p, coherence c).

    The model matrix carries population p on each of |001>, |010>, |100> and
    real coherence c between every pair of them.  Physical domain: p >= 0,
    -p/2 <= c <= p (positivity), 3p <= 1 (trace).
    """

    p: float
    c: float

    def validate(self, atol: float = 1e-9):
        if self.p < -atol:
            raise ValueError(f"population p={self.p} is negative")
        if not -self.p / 2 - atol <= self.c <= self.p + atol:
            raise ValueError(f"coherence c={self.c} outside [-p/2, p] for p={self.p}")
        if 3 * self.p > 1 + atol:
            raise ValueError(f"populations 3p={3 * self.p} exceed 1")
        return self


def clip_to_domain(p: float, c: float) -> SymmetricModel:
    """Clip raw (p, c) estimates into the physical model domain."""
    p = float(min(max(p, 1e-9), 1 / 3))
    c = float(min(max(c, -p / 2), p))
    return SymmetricModel(p=p, c=c)


def kw_symmetric(model, c: float | None = None, strict: bool = False) -> KWReport:
    """Closed-form monogamy quantities of the symmetric model.

    Accepts a :class:`SymmetricModel` or a plain ``(p, c)`` pair.  The three
    closed forms are evaluated exactly as written, treating (p, c) as free
    parameters; ``strict=True`` additionally requires 3p = 1 within 1e-6
    (the pure-model normalization).  The optimal measurement sits at
    theta = pi/4, independent of phi.
    """
    if isinstance(model, SymmetricModel):
        p, c = model.p, model.c
    else:
        if c is None:
            raise ValueError("pass a SymmetricModel or both p and c")
        p, c = float(model), float(c)
    if p <= 0:
        raise ValueError(f"population p={p} must be positive")
    if strict and abs(3 * p - 1) > 1e-6:
        raise ValueError(f"strict mode requires 3p = 1, got 3p = {3 * p}")
    root = np.sqrt(4 * c * c * p * p + p**4)
    args = ((1 - root / (3 * p * p)) / 2, (1 + root / (3 * p * p)) / 2)
    if args[0] <= 0:
        raise ValueError(f"coherence c={c} outside the closed forms' domain for p={p}")

    s = -p * (2 + 3 * np.log2(p))
    r = np.sqrt(max(0.0, 1 - 4 * p * p))
    e = qmat.entropy_bits([(1 + r) / 2, (1 - r) / 2])
    j = -p * np.log2(p) - 2 * p * np.log2(2 * p)
    j += ((3 * p * p - root) * np.log2(args[0])
          + (3 * p * p + root) * np.log2(args[1])) / (2 * p)
    return KWReport(
        assignment=format_assignment(0, 1, 2),
        S=float(s), J=float(j), E=float(e), KW=float(s - j - e),
        method="symmetric-formula", theta_opt=pi / 4, phi_opt=0.0)


# ---------------------------------------------------------------------------
# Correlator tables and extraction
# ---------------------------------------------------------------------------

@dataclass
class CorrelatorRecord:
    """One measured Pauli expectation with its uncertainty."""

    pauli: str
    value: float
    sigma: float = 0.0


# representative members of the seven nontrivial correlator classes that
# determine the symmetric model, plus the identity
KW_CLASS_REPS = ("ZZZ", "ZZI", "ZII", "XXZ", "YYZ", "XXI", "YYI")

# published correlator magnitudes for the engineered single-excitation state,
# with one-sigma counting uncertainties
REFERENCE_CORRELATOR_TABLE = (
    CorrelatorRecord("ZZZ", 0.87, 0.02),
    CorrelatorRecord("ZZI", 0.35, 0.04),
    CorrelatorRecord("ZII", 0.26, 0.04),
    CorrelatorRecord("XXZ", 0.55, 0.04),
    CorrelatorRecord("YYZ", 0.70, 0.03),
    CorrelatorRecord("XXI", 0.66, 0.03),
    CorrelatorRecord("YYI", 0.52, 0.04),
)


def pauli_class(pauli: str) -> tuple[str, ...]:
    """Distinct qubit permutations of a Pauli string, descending lexicographic."""
    return tuple(sorted({"".join(p) for p in permutations(pauli)}, reverse=True))


def class_of(pauli: str) -> str | None:
    """Representative class of a three-qubit Pauli string, if it has one."""
    if pauli == "III":
        return "III"
    for rep in KW_CLASS_REPS:
        if pauli in pauli_class(rep):
            return rep
    return None


def kw_correlator_paulis() -> tuple[str, ...]:
    """All Pauli strings entering the extraction: III plus the seven classes."""
    out = ["III"]
    for rep in KW_CLASS_REPS:
        out.extend(pauli_class(rep))
    return tuple(out)


def canonical_setting(pauli: str) -> str:
    """Measurement setting that covers a Pauli string (I slots filled with Z)."""
    return pauli.replace("I", "Z")


def correlator_table(rho) -> list[CorrelatorRecord]:
    """Exact correlator table of a three-qubit state (sigma = 0)."""
    rho = qmat.check_density_matrix(rho)
    if rho.shape != (8, 8):
        raise ValueError("correlator table expects a three-qubit state")
    return [CorrelatorRecord(p, pauli_expectation(rho, p), 0.0)
            for p in kw_correlator_paulis()]


def ideal_sign(pauli: str) -> int:
    """Sign of the correlator on the ideal single-excitation state."""
    signs = {"III": 1, "ZZZ": -1, "ZZI": -1, "ZII": 1,
             "XXZ": 1, "YYZ": 1, "XXI": 1, "YYI": 1}
    rep = class_of(pauli)
    if rep is None:
        raise ValueError(f"no ideal sign for Pauli string {pauli!r}")
    return signs[rep]


def apply_sign_map(records, mode: str = "ideal-w1") -> list[CorrelatorRecord]:
    """Resolve correlator signs before extraction.

    mode "ideal-w1": |value| times the ideal single-excitation-state sign
    (tables quoting magnitudes); mode "raw": records pass through as given.
    """
    if mode == "raw":
        return [CorrelatorRecord(r.pauli, float(r.value), float(r.sigma))
                for r in records]
    if mode != "ideal-w1":
        raise ValueError(f"unknown sign map {mode!r}; use raw or ideal-w1")
    return [CorrelatorRecord(r.pauli, ideal_sign(r.pauli) * abs(float(r.value)),
                             float(r.sigma))
            for r in records]


def _class_sums(records):
    """Permutation-class sums with symmetric fill for missing members."""
    by_class: dict[str, list[float]] = {}
    for r in records:
        rep = class_of(r.pauli)
        if rep is None:
            continue
        by_class.setdefault(rep, []).append(float(r.value))
    if "III" not in by_class:
        by_class["III"] = [1.0]
    missing = [rep for rep in KW_CLASS_REPS if rep not in by_class]
    if missing:
        raise ValueError(f"correlator classes missing from table: {missing}")
    sums = {}
    for rep, vals in by_class.items():
        size = 1 if rep in ("III", "ZZZ") else 3
        sums[rep] = size * float(np.mean(vals))
    return sums


def extract_pc(records, printed_form: bool = False) -> SymmetricModel:
    """Symmetric-model parameters from a correlator table.

    The derived expansion of the three single-excitation populations and
    coherences gives

        p = (1/8) [ <III> + P(<ZII>)/3 - P(<ZZI>)/3 - <ZZZ> ]
        c = (1/24)[ P(<XXZ>) + P(<YYZ>) + P(<XXI>) + P(<YYI>) ]

    where P(.) sums a class over its three qubit permutations (missing
    members fill symmetrically).  ``printed_form=True`` switches p to the
    variant with P(<ZII>) unscaled; on the ideal single-excitation state it
    returns 5/12 instead of 1/3 and exists only so that difference can be
    demonstrated.
    """
    sums = _class_sums(records)
    if printed_form:
        p = (-sums["ZZZ"] + sums["III"] - sums["ZZI"] / 3 + sums["ZII"]) / 8
    else:
        p = (sums["III"] + sums["ZII"] / 3 - sums["ZZI"] / 3 - sums["ZZZ"]) / 8
    c = (sums["XXZ"] + sums["YYZ"] + sums["XXI"] + sums["YYI"]) / 24
    return SymmetricModel(p=float(p), c=float(c))


def kw_from_correlators(records, samples: int = 2000, seed: int = 0) -> KWReport:
    """Monogamy estimate from a measured correlator table with uncertainty.

    The central value evaluates the closed forms at the extracted (p, c);
    the uncertainty resamples every record from a normal distribution with
    its sigma (values clipped to [-1, 1]), re-extracts, clips (p, c) to the
    physical domain, and takes the sample standard deviation.
    """
    records = list(records)
    if samples < 100:
        raise ValueError("at least 100 Monte-Carlo samples are required")
    central_pc = extract_pc(records)
    central = kw_symmetric(clip_to_domain(central_pc.p, central_pc.c))
    rng = np.random.default_rng(seed)
    draws = np.empty(samples)
    for i in range(samples):
        perturbed = [
            CorrelatorRecord(
                r.pauli,
                float(np.clip(rng.normal(r.value, r.sigma), -1.0, 1.0))
                if r.sigma > 0 else float(r.value),
                r.sigma)
            for r in records
        ]
        model = extract_pc(perturbed)
        draws[i] = kw_symmetric(clip_to_domain(model.p, model.c)).KW
    return KWReport(
        assignment=central.assignment, S=central.S, J=central.J, E=central.E,
        KW=central.KW, method="correlator-estimate",
        sigma=float(np.std(draws, ddof=1)),
        theta_opt=central.theta_opt, phi_opt=central.phi_opt)
