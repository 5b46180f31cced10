"""Repeat-code advantage distillation.

Alice publishes ``X^N xor C`` for a random bit ``C``; Bob accepts only if the
block xor his ``Y^N`` is constant. Bob's error given acceptance (beta) shrinks
like ``(D/F)^N`` while Eve, who must take a majority vote, errs (gamma) at
rate ``2 sqrt(delta0 (1 - delta0))``. All probabilities are evaluated in log
space so block lengths in the thousands neither underflow nor overflow.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp, xlog1py, xlogy

from .attack_model import AttackParams, AttackVariant, attack_from_qber
from .errors import DomainError
from .info_theory import bisect_flip

LOG_HALF = math.log(0.5)
# exponents closer than this count as equal: both sides carry ~1e-16 rounding,
# and at the boundary they are equal in exact arithmetic
THEOREM1_MARGIN = 1e-12
# blocks per independently seeded simulation chunk; fixed so that results do
# not depend on how chunks are spread over workers
CHUNK_BLOCKS = 1 << 14


def encode_block(x: Sequence[int], c: int) -> np.ndarray:
    return np.asarray(x, dtype=np.uint8) ^ np.uint8(c)


class BobDecision(NamedTuple):
    accept: bool
    c_hat: int | None


def bob_decode(received: Sequence[int], y: Sequence[int]) -> BobDecision:
    received = np.asarray(received, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    if received.shape != y.shape:
        raise DomainError(f"block lengths differ: {received.shape} vs {y.shape}")
    t = received ^ y
    if not t.any():
        return BobDecision(True, 0)
    if t.all():
        return BobDecision(True, 1)
    return BobDecision(False, None)


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"block length must be a positive integer, got {n!r}")


def _check_d(d: float) -> None:
    if not (0.0 <= d < 0.5):
        raise DomainError(f"disturbance {d!r} outside [0, 1/2)")


def _check_delta(delta: float) -> None:
    if not (0.5 <= delta <= 1.0):
        raise DomainError(f"guessing probability {delta!r} outside [1/2, 1]")


def log_binom_pmf(n: int, k: np.ndarray | int, p: float) -> np.ndarray:
    """log P[Binomial(n, p) = k], exact at p = 0 and p = 1."""
    k = np.asarray(k, dtype=float)
    log_coef = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return log_coef + xlogy(k, p) + xlog1py(n - k, -p)


def log_majority_error(delta: float, n: int) -> float:
    """log of the error of a majority vote over ``n`` guesses, each right w.p. ``delta``.

    Ties (even ``n``) are broken by a fair coin.
    """
    _check_delta(delta)
    _check_n(n)
    err = 1.0 - delta
    k = np.arange(n // 2 + 1, n + 1)
    terms = list(log_binom_pmf(n, k, err))
    if n % 2 == 0:
        terms.append(LOG_HALF + float(log_binom_pmf(n, n // 2, err)))
    with np.errstate(divide="ignore"):
        return float(logsumexp(terms))


def log_accept_probability(d: float, n: int) -> float:
    with np.errstate(divide="ignore"):
        return float(np.logaddexp(xlogy(n, d), xlog1py(n, -d)))


class BetaFigures(NamedTuple):
    p_accept: float
    beta: float


def log_exact_beta(d: float, n: int) -> float:
    _check_d(d)
    _check_n(n)
    return float(xlogy(n, d)) - log_accept_probability(d, n)


def exact_beta(d: float, n: int) -> BetaFigures:
    """Bob's acceptance probability and his error probability given acceptance."""
    log_beta = log_exact_beta(d, n)
    return BetaFigures(math.exp(log_accept_probability(d, n)), math.exp(log_beta))


def log_exact_gamma(delta0: float, n: int) -> float:
    return log_majority_error(delta0, n)


def exact_gamma(delta0: float, n: int) -> float:
    """Eve's majority-vote error on C given that Bob accepted correctly."""
    return math.exp(log_exact_gamma(delta0, n))


def log_exact_gamma_full(params: AttackParams, n: int) -> float:
    _check_n(n)
    undisturbed = xlog1py(n, -params.D) + log_majority_error(params.delta0, n)
    disturbed = xlogy(n, params.D) + log_majority_error(params.delta1, n)
    with np.errstate(divide="ignore"):
        return float(np.logaddexp(undisturbed, disturbed)) - log_accept_probability(params.D, n)


def exact_gamma_full(params: AttackParams, n: int) -> float:
    """Eve's error on C given that Bob accepted, right or wrong.

    On a block Bob accepts wrongly every qubit was disturbed; Eve sees this in
    Z1 and votes with her ``delta1`` guesses there.
    """
    return math.exp(log_exact_gamma_full(params, n))


def log_stirling_lower_bound(delta0: float, n: int) -> float:
    _check_delta(delta0)
    _check_n(n)
    if n % 2:
        raise DomainError(f"the tie bound needs an even block length, got {n}")
    half = n // 2
    log_coef = gammaln(n + 1) - 2.0 * gammaln(half + 1)
    return float(LOG_HALF + log_coef + xlog1py(half, -delta0) + xlogy(half, delta0))


def stirling_lower_bound(delta0: float, n: int) -> float:
    """Tie-only lower bound 1/2 C(n, n/2) (delta0 (1 - delta0))^(n/2) on gamma."""
    return math.exp(log_stirling_lower_bound(delta0, n))


@dataclass(frozen=True)
class AdExact:
    n: int
    p_accept: float
    beta: float
    gamma: float
    gamma_full: float


def exact_figures(params: AttackParams, n: int) -> AdExact:
    p_accept, beta = exact_beta(params.D, n)
    return AdExact(n, p_accept, beta, exact_gamma(params.delta0, n), exact_gamma_full(params, n))


@dataclass(frozen=True)
class Theorem1Report:
    lhs: float
    rhs: float
    holds: bool


def theorem1(params: AttackParams) -> Theorem1Report:
    """Decide whether advantage distillation can beat the attack.

    Compares Bob's per-bit error exponent ``D/F`` with Eve's
    ``2 sqrt(delta0 (1 - delta0))``. Bob wins only if his is smaller by more
    than ``THEOREM1_MARGIN``.
    """
    _check_d(params.D)
    lhs = params.D / params.F
    rhs = 2.0 * math.sqrt((1.0 - params.delta0) * params.delta0)
    return Theorem1Report(lhs, rhs, lhs < rhs - THEOREM1_MARGIN)


def theorem1_boundary(variant: AttackVariant) -> float:
    return bisect_flip(
        lambda q: theorem1(attack_from_qber(variant, q)).holds,
        0.0,
        variant.max_qber,
        tol=1e-10,
    )


def min_block_length(params: AttackParams, n_max: int) -> int | None:
    """Shortest block length from which Bob stays ahead of Eve.

    Returns the smallest ``n`` such that ``beta_m < gamma_m`` for every
    ``m`` in ``[n, n_max]``, or ``None`` if Bob is behind at ``n_max``. The
    advantage can appear and vanish again at small even ``n`` (where Eve's
    ties cost her), so the first isolated win is not reported.
    """
    _check_n(n_max)
    behind = 0
    for n in range(n_max, 0, -1):
        if not log_exact_beta(params.D, n) < log_exact_gamma(params.delta0, n):
            behind = n
            break
    return None if behind == n_max else behind + 1


@dataclass(frozen=True)
class AdEstimate:
    n: int
    trials: int
    accepted: int
    bob_errors: int
    eve_errors: int
    seed: int
    correct_accepts: int = 0
    eve_errors_correct: int = 0

    @property
    def accept_rate(self) -> float:
        return self.accepted / self.trials

    @property
    def beta(self) -> float:
        return self.bob_errors / self.accepted if self.accepted else math.nan

    @property
    def gamma(self) -> float:
        return self.eve_errors / self.accepted if self.accepted else math.nan

    @staticmethod
    def _stderr(p: float, count: int) -> float:
        return math.sqrt(p * (1.0 - p) / count) if count else math.nan

    def accept_stderr(self, p: float | None = None) -> float:
        return self._stderr(self.accept_rate if p is None else p, self.trials)

    def beta_stderr(self, p: float | None = None) -> float:
        return self._stderr(self.beta if p is None else p, self.accepted)

    def gamma_stderr(self, p: float | None = None) -> float:
        return self._stderr(self.gamma if p is None else p, self.accepted)


def _simulate_chunk(params: AttackParams, n: int, blocks: int, seed: int, index: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    shape = (blocks, n)
    x = rng.integers(0, 2, size=shape, dtype=np.uint8)
    z1 = (rng.random(shape) < params.D).astype(np.uint8)
    y = x ^ z1
    delta = np.where(z1 == 1, params.delta1, params.delta0)
    z2 = y ^ (rng.random(shape) >= delta).astype(np.uint8)
    c = rng.integers(0, 2, size=blocks, dtype=np.uint8)
    coin = rng.integers(0, 2, size=blocks, dtype=np.uint8)

    public = x ^ c[:, None]
    t = public ^ y
    ones = t.sum(axis=1)
    accepted = (ones == 0) | (ones == n)
    c_bob = (t[:, 0] == 1).astype(np.uint8)
    bob_wrong = accepted & (c_bob != c)

    # Eve's guess of x_i is z2 xor z1, hence of C it is public xor z2 xor z1
    votes = (public ^ z2 ^ z1).sum(axis=1, dtype=np.int64)
    c_eve = np.where(2 * votes > n, 1, np.where(2 * votes < n, 0, coin)).astype(np.uint8)
    eve_wrong = accepted & (c_eve != c)
    correct = accepted & ~bob_wrong
    return np.array([
        accepted.sum(), bob_wrong.sum(), eve_wrong.sum(), correct.sum(), (eve_wrong & correct).sum()
    ], dtype=np.int64)


def simulate(params: AttackParams, n: int, blocks: int, seed: int, workers: int = 1) -> AdEstimate:
    """Monte Carlo run of the repeat-code protocol against the attack.

    Blocks are split into fixed-size chunks, each seeded from ``(seed, chunk
    index)``, so the counts depend only on the arguments and not on
    ``workers``.
    """
    _check_n(n)
    if blocks < 1:
        raise DomainError(f"need at least one block, got {blocks}")
    if not (0 <= seed < 2**64):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    sizes = [min(CHUNK_BLOCKS, blocks - start) for start in range(0, blocks, CHUNK_BLOCKS)]

    def run(i: int) -> np.ndarray:
        return _simulate_chunk(params, n, sizes[i], seed, i)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = sum(pool.map(run, range(len(sizes))))
    else:
        counts = sum(map(run, range(len(sizes))))
    accepted, bob_errors, eve_errors, correct, eve_correct = (int(v) for v in counts)
    return AdEstimate(n, blocks, accepted, bob_errors, eve_errors, seed, correct, eve_correct)
