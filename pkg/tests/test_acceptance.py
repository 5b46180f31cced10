"""Exit criteria of the build, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from oracles import bisect, enumerate_repeat_code
from qkd_limits import cli
from qkd_limits.advantage_distillation import (
    exact_beta,
    exact_figures,
    exact_gamma,
    log_exact_beta,
    log_exact_gamma,
    log_stirling_lower_bound,
    min_block_length,
    simulate,
    theorem1,
    theorem1_boundary,
)
from qkd_limits.attack_model import AttackVariant, attack_from_qber
from qkd_limits.entanglement import build_rho_ab, chsh_horodecki, entanglement_threshold
from qkd_limits.info_theory import i_bob, i_eve, qber0

V = AttackVariant
QBER0_PAPER = 0.146446609
QBER0_EXACT = (1 - 1 / math.sqrt(2)) / 2
MC_SEED = 20_240_917


def grid(variant, step):
    return [float(q) for q in np.arange(0.0, variant.max_qber, step)] + [variant.max_qber]


def test_1_entanglement_thresholds(criterion):
    start = time.perf_counter()
    ext = entanglement_threshold(V.EXTREMAL4)
    six = entanglement_threshold(V.SIXSTATE)
    elapsed = time.perf_counter() - start
    ok = abs(ext - 0.25) <= 1e-9 and abs(six - 1 / 3) <= 1e-9 and elapsed < 1.0
    criterion(1, ok, f"extremal4={ext:.12f} sixstate={six:.12f} ({elapsed:.3f}s)")


def test_2_crossing_point(criterion):
    q0 = qber0(V.SHANNON4)
    p = attack_from_qber(V.SHANNON4, q0)
    gap = abs(i_bob(p.F) - i_eve(p.F, p.delta0, p.delta1))
    ok = abs(q0 - QBER0_PAPER) <= 1e-9 and abs(q0 - QBER0_EXACT) <= 1e-9 and gap < 1e-9
    criterion(2, ok, f"qber0={q0:.12f} |i_bob-i_eve|={gap:.2e}")


def test_3_quantum_equals_classical(criterion):
    flips = {}
    for variant in (V.EXTREMAL4, V.SIXSTATE):
        flips[variant] = (theorem1_boundary(variant), entanglement_threshold(variant))
    boundary_ok = all(abs(a - b) <= 1e-9 for a, b in flips.values())

    worst = 0.0
    for variant in V:
        for q in grid(variant, 0.001):
            p = attack_from_qber(variant, q)
            worst = max(worst, abs(theorem1(p).rhs - p.c_psi))
    detail = ", ".join(f"{v.value}: th1={a:.12f} ppt={b:.12f}" for v, (a, b) in flips.items())
    criterion(3, boundary_ok and worst <= 1e-12, f"{detail}; max|rhs-c_psi|={worst:.1e}")


def test_4_bell_limit(criterion):
    q0 = qber0(V.SHANNON4)

    def M(q):
        return chsh_horodecki(build_rho_ab(attack_from_qber(V.SHANNON4, q))).M

    at, below, above = M(q0), M(q0 - 0.01), M(q0 + 0.01)
    ok = abs(at - 1) <= 1e-9 and below > 1 and above < 1
    criterion(4, ok, f"M(qber0)={at:.12f} M(-0.01)={below:.6f} M(+0.01)={above:.6f}")


def test_5_beta_bound(criterion):
    violations = 0
    for d in (0.05, 0.10, 0.15, 0.20, 0.25, 0.30):
        for n in range(1, 65):
            if log_exact_beta(d, n) > n * math.log(d / (1 - d)) + 1e-12:
                violations += 1
    criterion(5, violations == 0, f"{violations} violations over 6 x 64 points")


def test_6_stirling_bound(criterion):
    violations = checked = 0
    for variant in V:
        for q in grid(variant, 0.01):
            delta0 = attack_from_qber(variant, q).delta0
            for n in range(2, 65, 2):
                checked += 1
                bound, gamma = log_stirling_lower_bound(delta0, n), log_exact_gamma(delta0, n)
                if bound > gamma + math.log1p(1e-15):
                    violations += 1
    criterion(6, violations == 0, f"{violations} violations over {checked} points")


def test_7_exponential_rates(criterion):
    start = time.perf_counter()
    n = 400
    worst = 0.0
    parts = []
    for variant, d in ((V.EXTREMAL4, 0.2), (V.SIXSTATE, 0.25)):
        p = attack_from_qber(variant, d)
        beta_gap = abs(log_exact_beta(d, n) / n - math.log(d / (1 - d)))
        gamma_gap = abs(log_exact_gamma(p.delta0, n) / n - math.log(2 * math.sqrt(p.delta0 * (1 - p.delta0))))
        worst = max(worst, beta_gap, gamma_gap)
        parts.append(f"{variant.value}: beta {beta_gap:.2e} gamma {gamma_gap:.2e}")
    elapsed = time.perf_counter() - start
    criterion(7, worst <= 0.02 and elapsed < 1.0, "; ".join(parts) + f" ({elapsed:.3f}s)")


def test_8_enumeration_oracle(criterion):
    cases = [(v, d) for v in V for d in (0.1, 0.2)] + [(V.SIXSTATE, 0.3)]
    worst = 0.0
    for variant, d in cases:
        params = attack_from_qber(variant, d)
        for n in range(1, 5):
            want = enumerate_repeat_code(params, n)
            exact = exact_figures(params, n)
            got = (exact.p_accept, exact.beta, exact.gamma, exact.gamma_full)
            worst = max(worst, max(abs(g - w) for g, w in zip(got, want)))
    criterion(8, worst <= 1e-12, f"max deviation {worst:.1e} over {len(cases)} attacks x N=1..4")


def test_9_monte_carlo(criterion):
    params = attack_from_qber(V.EXTREMAL4, 0.2)
    n, blocks = 8, 1_000_000
    start = time.perf_counter()
    est = simulate(params, n, blocks, MC_SEED, workers=1)
    elapsed = time.perf_counter() - start
    again = simulate(params, n, blocks, MC_SEED, workers=1)
    parallel = simulate(params, n, blocks, MC_SEED, workers=4)
    exact = exact_figures(params, n)

    z_accept = abs(est.accept_rate - exact.p_accept) / est.accept_stderr(exact.p_accept)
    z_beta = abs(est.beta - exact.beta) / est.beta_stderr(exact.beta)
    z_gamma = abs(est.gamma - exact.gamma_full) / est.gamma_stderr(exact.gamma_full)
    gamma_correct = est.eve_errors_correct / est.correct_accepts
    z_gamma_correct = abs(gamma_correct - exact.gamma) / math.sqrt(
        exact.gamma * (1 - exact.gamma) / est.correct_accepts
    )
    reproducible = est == again == parallel
    ok = max(z_accept, z_beta, z_gamma, z_gamma_correct) < 4 and elapsed < 60 and reproducible
    criterion(9, ok, (
        f"z: accept {z_accept:.2f} beta {z_beta:.2f} gamma_full {z_gamma:.2f} gamma {z_gamma_correct:.2f}; "
        f"reproducible={reproducible} ({elapsed:.2f}s)"
    ))


def test_10_distillation_beyond_qber0(criterion):
    p = attack_from_qber(V.EXTREMAL4, 0.2)
    inverted = i_bob(p.F) < i_eve(p.F, p.delta0, p.delta1)
    n = min_block_length(p, 200)
    wins = n is not None and exact_beta(p.D, n).beta < exact_gamma(p.delta0, n)
    beyond = min_block_length(attack_from_qber(V.EXTREMAL4, 0.26), 200)
    ok = inverted and wins and beyond is None
    criterion(10, ok, f"qber 0.2: i_bob<i_eve={inverted}, min N={n}; qber 0.26: min N={beyond}")


def test_11_fig1_shape(criterion, tmp_path):
    out = tmp_path / "fig1.csv"
    assert cli.main(["fig1", "--out", str(out)]) == 0
    lines = out.read_text().split("\n")
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        if not line:
            break
        rows.append(dict(zip(header, map(float, line.split(",")))))
    q = np.array([r["qber"] for r in rows])
    bob = np.array([r["i_bob"] for r in rows])
    eve = np.array([r["i_eve"] for r in rows])
    sign = np.sign(bob - eve)
    changes = np.flatnonzero(sign[1:] != sign[:-1])
    located = [round(float(0.5 * (q[i] + q[i + 1])), 6) for i in changes]
    ok = (
        q[0] == 0 and q[-1] == pytest.approx(0.30)
        and (np.diff(bob) < 0).all() and (np.diff(eve) > 0).all()
        and len(changes) == 1 and abs(located[0] - QBER0_EXACT) <= 0.001
    )
    criterion(11, ok, f"{len(rows)} rows, sign changes at {located}")


def test_closed_form_boundaries():
    # the same limits from D < F c_psi alone, without any matrix or guessing model
    ext = bisect(lambda q: q < (3 * (1 - q) - 2), 0.0, 1 / 3)
    six = bisect(lambda q: q < (1 - q) * (2 * (1 - q) - 1) / (1 - q), 0.0, 0.5)
    assert ext == pytest.approx(0.25, abs=1e-12)
    assert six == pytest.approx(1 / 3, abs=1e-12)
