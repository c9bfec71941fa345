"""File formats shared by the library and the command line.

Density matrices and monogamy reports are JSON documents; correlator tables
and count tables are bare CSV rows.  All writes go through a temp file and
an atomic rename.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile

import numpy as np

from . import qmat
from .correlations import CorrelatorRecord, KWReport
from .tomography import CountRecord

QUBIT_ORDER_TAG = "abcd-msb"


def atomic_write_text(path: str, text: str) -> None:
    """Write text to ``path`` via a temporary file and os.replace."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def density_matrix_document(rho) -> str:
    """JSON document for a density matrix (kets are converted first)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = qmat.dm(qmat.check_state_vector(rho))
    n = qmat.num_qubits(rho)
    doc = {
        "n_qubits": n,
        "qubit_order": QUBIT_ORDER_TAG,
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }
    return json.dumps(doc, indent=1)


def save_density_matrix(path: str, rho) -> None:
    atomic_write_text(path, density_matrix_document(rho) + "\n")


def load_density_matrix(path: str) -> np.ndarray:
    """Read a density-matrix document; validates shape, hermiticity, trace."""
    with open(path) as handle:
        doc = json.load(handle)
    for field in ("n_qubits", "qubit_order", "re", "im"):
        if field not in doc:
            raise ValueError(f"density-matrix file missing field {field!r}")
    if doc["qubit_order"] != QUBIT_ORDER_TAG:
        raise ValueError(f"unsupported qubit order {doc['qubit_order']!r}")
    rho = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
    n = int(doc["n_qubits"])
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"matrix shape {rho.shape} does not match {n} qubits")
    if not np.allclose(rho, rho.conj().T, atol=1e-9, rtol=0):
        raise ValueError("file does not contain a Hermitian matrix")
    if abs(np.trace(rho).real - 1.0) > 1e-6:
        raise ValueError("matrix trace differs from 1")
    return rho


def _fmt_count(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def save_counts(path: str, records) -> None:
    lines = [f"{r.setting},{r.outcome},{_fmt_count(r.count)}" for r in records]
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_counts(path: str) -> list[CountRecord]:
    records = []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("setting,"):
                continue
            setting, outcome, count = line.split(",")
            records.append(CountRecord(setting.strip(), outcome.strip(),
                                       float(count)))
    if not records:
        raise ValueError(f"no count records in {path}")
    return records


def save_correlators(path: str, records) -> None:
    lines = [f"{r.pauli},{r.value!r},{r.sigma!r}" for r in records]
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_correlators(path: str) -> list[CorrelatorRecord]:
    records = []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("pauli,"):
                continue
            parts = line.split(",")
            if len(parts) == 2:
                parts.append("0")
            pauli, value, sigma = parts
            records.append(CorrelatorRecord(pauli.strip(), float(value),
                                            float(sigma)))
    if not records:
        raise ValueError(f"no correlator records in {path}")
    return records


def kw_report_document(report: KWReport) -> str:
    return json.dumps(dataclasses.asdict(report), indent=1)


def save_kw_report(path: str, report: KWReport) -> None:
    atomic_write_text(path, kw_report_document(report) + "\n")


def load_kw_report(path: str) -> KWReport:
    with open(path) as handle:
        doc = json.load(handle)
    return KWReport(**doc)
