"""Symmetric incoherent eavesdropping on the 4-state and 6-state protocols.

An attack is described only through the quantities it induces: the fidelity
F, the disturbance D = 1 - F (the QBER), the overlaps of Eve's ancilla states
for undisturbed (``c_psi``) and disturbed (``c_phi``) qubits, and the
probabilities ``delta0``/``delta1`` that Eve's guess matches Bob's bit in the
two cases. The ancilla states themselves are never represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

_TOL = 1e-12


class Protocol(Enum):
    FOUR_STATE = "4-state"
    SIX_STATE = "6-state"


class AttackVariant(Enum):
    """Attack closures within the symmetric family.

    ``SHANNON4`` maximises Eve's Shannon information on the 4-state protocol.
    ``EXTREMAL4`` (``c_phi = 1``) is the 4-state attack that disentangles at the
    lowest QBER. ``SIXSTATE`` is the 6-state attack, where ``c_phi = 0``.
    """

    SHANNON4 = "shannon4"
    EXTREMAL4 = "extremal4"
    SIXSTATE = "sixstate"

    @property
    def protocol(self) -> Protocol:
        if self is AttackVariant.SIXSTATE:
            return Protocol.SIX_STATE
        return Protocol.FOUR_STATE

    @property
    def max_qber(self) -> float:
        """Largest QBER for which the closure is defined."""
        if self is AttackVariant.EXTREMAL4:
            return 1.0 / 3.0
        return math.nextafter(0.5, 0.0)

    @classmethod
    def parse(cls, name: str) -> "AttackVariant":
        try:
            return cls(name.lower())
        except ValueError:
            choices = ", ".join(v.value for v in cls)
            raise DomainError(f"unknown variant {name!r} (choose from {choices})") from None


def _check_unit_interval(name: str, value: float, lo: float = -1.0, hi: float = 1.0) -> None:
    if not (lo <= value <= hi):
        raise DomainError(f"{name}={value!r} outside [{lo}, {hi}]")


def fidelity_from_overlaps(c_psi: float, c_phi: float) -> float:
    """Fidelity forced by the symmetry condition on the ancilla overlaps.

    >>> fidelity_from_overlaps(0.5, 0.0)
    0.6666666666666666
    """
    _check_unit_interval("c_psi", c_psi)
    _check_unit_interval("c_phi", c_phi)
    denom = 2.0 - c_psi + c_phi
    if denom <= 0.0:
        raise DomainError(f"non-positive denominator {denom!r}")
    return (1.0 + c_phi) / denom


def overlap_from_fidelity(F: float, c_phi: float) -> float:
    """Invert :func:`fidelity_from_overlaps` for ``c_psi`` at fixed ``c_phi``."""
    if not (0.5 < F <= 1.0):
        raise DomainError(f"F={F!r} outside (1/2, 1]")
    _check_unit_interval("c_phi", c_phi)
    c_psi = (2.0 * F - 1.0 - (1.0 - F) * c_phi) / F
    if not (-1.0 - _TOL <= c_psi <= 1.0 + _TOL):
        raise DomainError(f"c_psi={c_psi!r} outside [-1, 1] for F={F!r}, c_phi={c_phi!r}")
    return min(1.0, max(-1.0, c_psi))


def helstrom_guess_probability(c: float) -> float:
    """Optimal probability of telling apart two pure states with overlap ``c``."""
    _check_unit_interval("c", c)
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c)))


@dataclass(frozen=True)
class AttackParams:
    variant: AttackVariant
    F: float
    D: float
    c_psi: float
    c_phi: float
    delta0: float
    delta1: float

    def __post_init__(self):
        if self.F + self.D != 1.0:
            raise DomainError(f"F + D = {self.F + self.D!r}, expected exactly 1")
        for name in ("c_psi", "c_phi"):
            _check_unit_interval(name, getattr(self, name))
        for name in ("delta0", "delta1"):
            _check_unit_interval(name, getattr(self, name), 0.5, 1.0)
        if abs(fidelity_from_overlaps(self.c_psi, self.c_phi) - self.F) > _TOL:
            raise DomainError("fidelity does not match the overlaps")
        if self.variant is AttackVariant.SIXSTATE and (self.c_phi != 0.0 or self.delta1 != 1.0):
            raise DomainError("six-state attacks need c_phi = 0 and delta1 = 1")

    @property
    def qber(self) -> float:
        return self.D

    @property
    def protocol(self) -> Protocol:
        return self.variant.protocol


def attack_from_qber(variant: AttackVariant, qber: float) -> AttackParams:
    """Build the attack of the given variant that produces error rate ``qber``.

    Raises:
        DomainError: if ``qber`` is outside ``[0, 1/2)`` or the closure would
            need an overlap outside ``[-1, 1]`` (Extremal4 beyond QBER 1/3).
    """
    if not (0.0 <= qber < 0.5):
        raise DomainError(f"qber={qber!r} outside [0, 1/2)")
    D = float(qber)
    F = 1.0 - D
    if variant is AttackVariant.SHANNON4:
        c_psi = c_phi = 2.0 * F - 1.0
        delta0 = delta1 = 0.5 + math.sqrt(F * D)
    elif variant is AttackVariant.EXTREMAL4:
        c_phi = 1.0
        c_psi = (3.0 * F - 2.0) / F
        if c_psi < -_TOL:
            raise DomainError(f"extremal4 attack needs qber <= 1/3, got {qber!r}")
        c_psi = max(0.0, c_psi)
        delta0 = helstrom_guess_probability(c_psi)
        delta1 = helstrom_guess_probability(c_phi)
    elif variant is AttackVariant.SIXSTATE:
        c_phi = 0.0
        c_psi = (2.0 * F - 1.0) / F
        delta0 = helstrom_guess_probability(c_psi)
        delta1 = 1.0
    else:
        raise DomainError(f"unsupported variant {variant!r}")
    return AttackParams(variant, F, D, c_psi, c_phi, delta0, delta1)


@dataclass(frozen=True)
class JointDistribution:
    """Distribution of (X, Y, Z1, Z2); ``p[x, y, z1, z2]`` is a 2x2x2x2 array."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.shape != (2, 2, 2, 2):
            raise DomainError(f"expected a 2x2x2x2 table, got shape {p.shape}")
        if (p < 0).any() or abs(p.sum() - 1.0) > _TOL:
            raise DomainError("table is not a probability distribution")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def __getitem__(self, key):
        return self.p[key]


def joint_distribution(params: AttackParams) -> JointDistribution:
    p = np.zeros((2, 2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            z1 = x ^ y
            channel = params.F if z1 == 0 else params.D
            delta = params.delta0 if z1 == 0 else params.delta1
            p[x, y, z1, y] = 0.5 * channel * delta
            p[x, y, z1, 1 - y] = 0.5 * channel * (1.0 - delta)
    return JointDistribution(p)
