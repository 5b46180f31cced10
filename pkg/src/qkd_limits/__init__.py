"""Quantum versus classical limits of key agreement on noisy channels."""

from .advantage_distillation import (
    AdEstimate,
    AdExact,
    Theorem1Report,
    bob_decode,
    encode_block,
    exact_beta,
    exact_figures,
    exact_gamma,
    exact_gamma_full,
    min_block_length,
    simulate,
    stirling_lower_bound,
    theorem1,
    theorem1_boundary,
)
from .attack_model import (
    AttackParams,
    AttackVariant,
    JointDistribution,
    Protocol,
    attack_from_qber,
    fidelity_from_overlaps,
    helstrom_guess_probability,
    joint_distribution,
    overlap_from_fidelity,
)
from .entanglement import (
    PtReport,
    TwoQubitState,
    build_rho_ab,
    chsh_horodecki,
    entanglement_threshold,
    hermitian_eigenvalues,
    is_entangled,
    partial_transpose,
)
from .errors import DomainError
from .info_theory import binary_entropy, ck_bound, i_bob, i_eve, mutual_information, qber0

__version__ = "0.1.0"
