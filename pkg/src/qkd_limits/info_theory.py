"""Shannon informations of Bob and Eve and the one-way secret-key bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .attack_model import AttackVariant, JointDistribution, attack_from_qber, joint_distribution
from .errors import DomainError

# axis of each variable in the (X, Y, Z1, Z2) table
_AXES = {"X": (0,), "Y": (1,), "Z1": (2,), "Z2": (3,), "Z": (2, 3)}

BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200


def binary_entropy(p: float) -> float:
    """Entropy in bits of a biased coin, with ``0 log 0 = 0``."""
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"p={p!r} outside [0, 1]")
    # evaluate on the smaller argument so that h(p) == h(1 - p) bit for bit
    q = min(p, 1.0 - p)
    if q == 0.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def i_bob(F: float) -> float:
    """Alice-Bob mutual information per raw key bit."""
    return 1.0 - binary_entropy(F)


def i_eve(F: float, delta0: float, delta1: float) -> float:
    """Eve's information on Bob's bit, averaged over undisturbed/disturbed qubits."""
    if not (0.0 <= F <= 1.0):
        raise DomainError(f"F={F!r} outside [0, 1]")
    return F * (1.0 - binary_entropy(delta0)) + (1.0 - F) * (1.0 - binary_entropy(delta1))


def _axes(selector: str) -> tuple[int, ...]:
    try:
        return _AXES[selector]
    except KeyError:
        raise DomainError(f"unknown variable {selector!r}; use one of {sorted(_AXES)}") from None


def mutual_information(joint: JointDistribution, left: str, right: str) -> float:
    """I(left; right) in bits, for selectors among X, Y, Z, Z1, Z2."""
    a, b = _axes(left), _axes(right)
    if set(a) & set(b):
        raise DomainError(f"selectors {left!r} and {right!r} overlap")
    pab = _select(joint.p, a, b)
    pa = pab.sum(axis=1, keepdims=True)
    pb = pab.sum(axis=0, keepdims=True)
    mask = pab > 0
    ratio = pab[mask] / (pa * pb)[mask]
    return max(0.0, float(np.sum(pab[mask] * np.log2(ratio))))


def _select(p: np.ndarray, a: tuple[int, ...], b: tuple[int, ...]) -> np.ndarray:
    """Marginal over ``a + b`` reshaped to a (|A|, |B|) matrix."""
    keep = a + b
    drop = tuple(ax for ax in range(4) if ax not in keep)
    m = p.sum(axis=drop)
    remaining = [ax for ax in range(4) if ax in keep]
    m = m.transpose([remaining.index(ax) for ax in keep])
    return m.reshape(2 ** len(a), 2 ** len(b))


def ck_bound(joint: JointDistribution) -> float:
    """max(I(X;Y) - I(X;Z), I(Y;X) - I(Y;Z)); positive means one-way key agreement works."""
    ixy = mutual_information(joint, "X", "Y")
    return max(ixy - mutual_information(joint, "X", "Z"), ixy - mutual_information(joint, "Y", "Z"))


@dataclass(frozen=True)
class InfoCurvePoint:
    qber: float
    i_bob: float
    i_eve: float
    ck_bound: float


def info_point(variant: AttackVariant, qber: float) -> InfoCurvePoint:
    params = attack_from_qber(variant, qber)
    return InfoCurvePoint(
        qber=qber,
        i_bob=i_bob(params.F),
        i_eve=i_eve(params.F, params.delta0, params.delta1),
        ck_bound=ck_bound(joint_distribution(params)),
    )


def bisect_flip(
    pred: Callable[[float], bool],
    lo: float,
    hi: float,
    tol: float = BISECT_TOL,
    max_iter: int = BISECT_MAX_ITER,
) -> float:
    """Locate where ``pred`` switches from True (at ``lo``) to False (at ``hi``)."""
    if not pred(lo) or pred(hi):
        raise DomainError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def qber0(variant: AttackVariant = AttackVariant.SHANNON4) -> float:
    """QBER at which Bob's and Eve's information curves cross."""

    def bob_ahead(q: float) -> bool:
        params = attack_from_qber(variant, q)
        return i_bob(params.F) > i_eve(params.F, params.delta0, params.delta1)

    return bisect_flip(bob_ahead, 0.0, variant.max_qber)
