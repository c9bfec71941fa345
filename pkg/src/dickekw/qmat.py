"""Dense linear algebra for few-qubit states.

All states live in the computational basis with qubit ``a`` as the most
significant bit: the four-qubit basis ket ``|abcd>`` has index
``8a + 4b + 2c + d``.  ``Z|0> = +|0>``, and ``|0>`` encodes the physical
``H`` / ``r`` carriers.  Entropies are in bits.

State vectors are 1-D complex arrays of length ``2**n``; density matrices
are 2-D complex arrays of shape ``(2**n, 2**n)``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

# entropy conventions: eigenvalues below EIG_ZERO contribute nothing,
# anything more negative than EIG_FLOOR signals an invalid state
EIG_ZERO = 1e-12
EIG_FLOOR = -1e-8


def num_qubits(obj) -> int:
    """Number of qubits of a ket, density matrix, or plain dimension.

    Raises ValueError if the dimension is not a power of two.
    """
    if isinstance(obj, (int, np.integer)):
        dim = int(obj)
    else:
        arr = np.asarray(obj)
        dim = arr.shape[0]
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def basis_ket(n: int, index: int) -> np.ndarray:
    """Computational basis ket |index> on n qubits (qubit a = MSB)."""
    if not 0 <= index < 2**n:
        raise ValueError(f"basis index {index} out of range for {n} qubits")
    psi = np.zeros(2**n, dtype=complex)
    psi[index] = 1.0
    return psi


def ket_from_bits(bits) -> np.ndarray:
    """Basis ket from a bit string such as "0011" (leftmost bit = qubit a)."""
    bits = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bit string must contain only 0 and 1")
    index = 0
    for b in bits:
        index = (index << 1) | b
    return basis_ket(len(bits), index)


def check_state_vector(psi, atol: float = 1e-9) -> np.ndarray:
    """Validate a ket: 1-D, power-of-two length, unit norm within atol."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("state vector must be one-dimensional")
    num_qubits(psi)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state vector norm {norm} differs from 1 beyond {atol}")
    return psi


def check_density_matrix(rho, atol: float = 1e-9) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, spectrum >= -1e-8."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    num_qubits(rho)
    if not np.allclose(rho, rho.conj().T, atol=atol, rtol=0):
        raise ValueError("density matrix is not Hermitian within tolerance")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density matrix trace {tr} differs from 1 beyond {atol}")
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < EIG_FLOOR:
        raise ValueError(f"density matrix has eigenvalue {lo} below {EIG_FLOOR}")
    return rho


def dm(psi) -> np.ndarray:
    """Outer product |psi><psi| of a ket."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def is_ket(state) -> bool:
    return np.asarray(state).ndim == 1


def fix_global_phase(psi, tol: float = 1e-12) -> np.ndarray:
    """Rescale a ket so its first nonzero amplitude is real and positive."""
    psi = np.asarray(psi, dtype=complex)
    for amp in psi:
        if abs(amp) > tol:
            return psi * (amp.conjugate() / abs(amp))
    return psi.copy()


def tensor(*factors) -> np.ndarray:
    """Kronecker product of the given vectors or matrices, left to right.

    The leftmost factor owns the most significant qubits, matching the
    ``|abcd>`` index convention.
    """
    if not factors:
        raise ValueError("tensor needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def permute_qubits(state, perm) -> np.ndarray:
    """Reorder qubits so that output qubit i is input qubit perm[i]."""
    state = np.asarray(state, dtype=complex)
    n = num_qubits(state)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of range({n})")
    if state.ndim == 1:
        return state.reshape((2,) * n).transpose(perm).reshape(-1)
    axes = perm + [n + p for p in perm]
    return state.reshape((2,) * (2 * n)).transpose(axes).reshape(2**n, 2**n)


def partial_trace(rho, keep) -> np.ndarray:
    """Trace out all qubits not listed in ``keep``.

    Parameters
    ----------
    rho : array, shape (2**n, 2**n)
        Density matrix.
    keep : sequence of int
        Qubit indices to retain; the output qubit order follows the order
        given here, so ``keep=[2, 0]`` both reduces and reorders.

    Returns
    -------
    array, shape (2**k, 2**k)
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    keep = list(keep)
    if len(set(keep)) != len(keep) or not keep:
        raise ValueError("keep must be a nonempty set of distinct qubit indices")
    if any(q < 0 or q >= n for q in keep):
        raise ValueError(f"qubit index out of range for {n} qubits: {keep}")
    letters = string.ascii_lowercase
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for q in range(n):
        if q not in keep:
            col[q] = row[q]
    out = [row[q] for q in keep] + [col[q] for q in keep]
    sub = "".join(row) + "".join(col) + "->" + "".join(out)
    k = len(keep)
    return np.einsum(sub, rho.reshape((2,) * (2 * n))).reshape(2**k, 2**k)


@dataclass
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are sorted descending; eigenvectors[:, i] belongs to
    eigenvalues[i] and has its first nonzero component real-positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(h, atol: float = 1e-9) -> Spectrum:
    """Deterministically ordered eigendecomposition of a Hermitian matrix.

    Eigenvalues descend; each eigenvector's global phase is fixed by making
    its first component of magnitude above 1e-12 real and positive, which
    pins the output for non-degenerate spectra.

    Raises ValueError if ``h`` is not Hermitian within ``atol``.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(h, h.conj().T, atol=atol, rtol=0):
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(h)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for i in range(vecs.shape[1]):
        v = vecs[:, i]
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        if nz.size:
            amp = v[nz[0]]
            vecs[:, i] = v * (amp.conjugate() / abs(amp))
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def entropy_bits(probs) -> float:
    """Shannon entropy in bits of a probability vector.

    Values in [-1e-8, 0) clamp to zero, values below 1e-12 contribute
    nothing, and anything under -1e-8 raises (invalid state).
    """
    total = 0.0
    for x in np.real(np.asarray(probs)):
        if x < EIG_FLOOR:
            raise ValueError(f"probability {x} below {EIG_FLOOR}")
        if x < EIG_ZERO:
            continue
        total -= x * np.log2(x)
    return float(total)


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits of a density matrix."""
    rho = check_density_matrix(rho)
    return entropy_bits(np.linalg.eigvalsh(rho))


def fidelity_pure(target, rho) -> float:
    """Fidelity <psi|rho|psi> of a state against a pure target.

    ``rho`` may be a density matrix or a ket (in which case the squared
    overlap is returned).  The result is real within 1e-9 by construction;
    the imaginary residue is checked and discarded.
    """
    psi = check_state_vector(target)
    other = np.asarray(rho, dtype=complex)
    if other.ndim == 1:
        val = abs(np.vdot(psi, other)) ** 2 + 0j
    else:
        if other.shape[0] != psi.shape[0]:
            raise ValueError("target and state dimensions differ")
        val = np.vdot(psi, other @ psi)
    if abs(val.imag) > 1e-9:
        raise ValueError(f"fidelity has imaginary part {val.imag}")
    return float(min(max(val.real, 0.0), 1.0))


def _outcome_ket(outcome) -> np.ndarray:
    if isinstance(outcome, (int, np.integer)):
        if outcome not in (0, 1):
            raise ValueError("integer outcome must be 0 or 1")
        return KET0 if outcome == 0 else KET1
    v = np.asarray(outcome, dtype=complex)
    if v.shape != (2,):
        raise ValueError("outcome ket must have shape (2,)")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("outcome ket must be normalized")
    return v


def project(state, assignments, min_prob: float = 1e-12):
    """Project chosen qubits onto single-qubit outcomes and renormalize.

    Parameters
    ----------
    state : ket or density matrix
    assignments : iterable of (qubit, outcome)
        ``outcome`` is 0, 1, or a normalized single-qubit ket.  Qubits must
        be distinct.  The surviving qubits keep their relative order.
    min_prob : float
        Outcomes with probability at or below this raise ValueError.

    Returns
    -------
    (post_state, probability)
        A ket for ket input, a density matrix for matrix input.
    """
    state = np.asarray(state, dtype=complex)
    n = num_qubits(state)
    assignments = list(assignments)
    qubits = [q for q, _ in assignments]
    if len(set(qubits)) != len(qubits):
        raise ValueError("projection qubits must be distinct")
    if any(q < 0 or q >= n for q in qubits):
        raise ValueError(f"qubit index out of range for {n} qubits: {qubits}")
    bras = {q: _outcome_ket(v).conj()[None, :] for q, v in assignments}
    factors = [bras.get(q, I2) for q in range(n)]
    B = tensor(*factors)
    if state.ndim == 1:
        post = B @ state
        prob = float(np.real(np.vdot(post, post)))
        if prob <= min_prob:
            raise ValueError(f"projection outcome has probability {prob}")
        return post / np.sqrt(prob), prob
    post = B @ state @ B.conj().T
    prob = float(np.trace(post).real)
    if prob <= min_prob:
        raise ValueError(f"projection outcome has probability {prob}")
    return post / prob, prob


def random_state_vector(n: int, rng) -> np.ndarray:
    """Haar-random pure state on n qubits."""
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def random_density_matrix(n: int, rng, rank: int | None = None) -> np.ndarray:
    """Random mixed state: normalized G G+ with Ginibre G of given rank."""
    d = 2**n
    r = d if rank is None else rank
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
