"""Alice-Bob two-qubit state, PPT separability test and CHSH witness.

Note on the separability condition: the printed statement "entangled iff
D > F c_psi and F > D c_phi" cannot be right as written, since it calls the
nearly noiseless state separable. The partial-transpose eigenvalues
``(D +- F c_psi)/2`` and ``(F +- D c_phi)/2`` give entanglement iff
``D < F c_psi`` or ``F < D c_phi``, which is what this module reports and
which reproduces the QBER limits 1/4 and 1/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack_model import AttackParams, AttackVariant, attack_from_qber
from .errors import DomainError
from .info_theory import bisect_flip

PT_CUTOFF = -1e-10
THRESHOLD_TOL = 1e-10

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class TwoQubitState:
    """Density matrix in the basis |00>, |01>, |10>, |11>."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise DomainError("matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise DomainError("trace differs from 1")
        if np.linalg.eigvalsh(m).min() < PT_CUTOFF:
            raise DomainError("matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


@dataclass(frozen=True)
class PtReport:
    min_pt_eigenvalue: float
    entangled: bool
    eigenvalues: tuple[float, float, float, float]


@dataclass(frozen=True)
class ChshReport:
    M: float
    max_chsh: float

    @property
    def violates(self) -> bool:
        return self.M > 1.0


def build_rho_ab(params: AttackParams) -> TwoQubitState:
    D, F = params.D, params.F
    m = np.diag([D, F, F, D]).astype(complex)
    m[1, 2] = m[2, 1] = -F * params.c_psi
    m[0, 3] = m[3, 0] = -D * params.c_phi
    return TwoQubitState(0.5 * m)


def singlet() -> TwoQubitState:
    v = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    return TwoQubitState(np.outer(v, v.conj()))


def partial_transpose(state: TwoQubitState | np.ndarray) -> np.ndarray:
    """Transpose over the second qubit."""
    m = state.m if isinstance(state, TwoQubitState) else np.asarray(state)
    # indices (i, a, j, b) -> (i, b, j, a)
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (LAPACK ``heevd``)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > 1e-10:
        raise DomainError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)


def block_pt_eigenvalues(params: AttackParams) -> np.ndarray:
    """Closed-form partial-transpose spectrum of the Alice-Bob state, ascending.

    The partial transpose of that state splits into two 2x2 blocks, giving
    ``(D +- F c_psi)/2`` and ``(F +- D c_phi)/2``.
    """
    D, F = params.D, params.F
    return np.sort(0.5 * np.array([
        D - F * params.c_psi,
        D + F * params.c_psi,
        F - D * params.c_phi,
        F + D * params.c_phi,
    ]))


def is_entangled(params: AttackParams) -> PtReport:
    eig = hermitian_eigenvalues(partial_transpose(build_rho_ab(params)))
    lowest = float(eig[0])
    return PtReport(lowest, lowest < PT_CUTOFF, tuple(float(e) for e in eig))


def entangled_closed_form(params: AttackParams) -> bool:
    return params.D < params.F * params.c_psi or params.F < params.D * params.c_phi


def entanglement_threshold(variant: AttackVariant) -> float:
    """Largest QBER up to which the variant's Alice-Bob state stays entangled."""
    return bisect_flip(
        lambda q: is_entangled(attack_from_qber(variant, q)).entangled,
        0.0,
        variant.max_qber,
        tol=THRESHOLD_TOL,
    )


def correlation_matrix(state: TwoQubitState) -> np.ndarray:
    """T_ij = tr(rho sigma_i (x) sigma_j)."""
    return np.array([
        [np.trace(state.m @ np.kron(si, sj)).real for sj in PAULI] for si in PAULI
    ])


def chsh_horodecki(state: TwoQubitState) -> ChshReport:
    """Maximal CHSH value via the Horodecki criterion (violation iff M > 1)."""
    T = correlation_matrix(state)
    top = np.sort(np.linalg.eigvalsh(T.T @ T))[-2:]
    M = float(top.sum())
    return ChshReport(M, 2.0 * math.sqrt(max(M, 0.0)))


def chsh_threshold(variant: AttackVariant) -> float:
    """QBER above which the variant's state no longer violates CHSH."""
    return bisect_flip(
        lambda q: chsh_horodecki(build_rho_ab(attack_from_qber(variant, q))).violates,
        0.0,
        variant.max_qber,
        tol=THRESHOLD_TOL,
    )
