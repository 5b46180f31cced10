"""Command-line front end.

Exit codes: 0 on success, 2 on usage or domain errors, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from typing import Sequence

from . import advantage_distillation as ad
from .attack_model import AttackVariant, attack_from_qber, joint_distribution
from .entanglement import build_rho_ab, chsh_horodecki, chsh_threshold, entanglement_threshold, is_entangled
from .errors import DomainError
from .info_theory import ck_bound, i_bob, i_eve, qber0

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

SWEEP_HEADER = "qber,f,i_bob,i_eve,ck_bound,min_pt_eig,entangled,th1_lhs,th1_rhs,th1_holds,chsh_m"
FIG1_STEP = 0.001
FIG1_TO = 0.30
MIN_BLOCK_N_MAX = 200


def _g(value: float) -> str:
    return f"{value:.12g}"


def _f9(value: float) -> str:
    return f"{value:.9f}"


def sweep_row(variant: AttackVariant, qber: float) -> list[str]:
    params = attack_from_qber(variant, qber)
    pt = is_entangled(params)
    th1 = ad.theorem1(params)
    return [
        _g(qber),
        _g(params.F),
        _g(i_bob(params.F)),
        _g(i_eve(params.F, params.delta0, params.delta1)),
        _g(ck_bound(joint_distribution(params))),
        _g(pt.min_pt_eigenvalue),
        str(int(pt.entangled)),
        _g(th1.lhs),
        _g(th1.rhs),
        str(int(th1.holds)),
        _g(chsh_horodecki(build_rho_ab(params)).M),
    ]


def qber_grid(start: float, stop: float, step: float) -> list[float]:
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sweep_text(variant: AttackVariant, start: float, stop: float, step: float) -> str:
    if not (0.0 <= start < stop < 0.5) or not step > 0.0:
        raise DomainError(f"need 0 <= from < to < 1/2 and step > 0, got {start}, {stop}, {step}")
    if stop > variant.max_qber:
        raise DomainError(f"{variant.value} is defined only up to qber {variant.max_qber:.9f}")
    lines = [SWEEP_HEADER]
    lines += [",".join(sweep_row(variant, q)) for q in qber_grid(start, stop, step)]
    return "\n".join(lines) + "\n"


def thresholds_text(variant: AttackVariant) -> str:
    lines = [f"variant,{variant.value}"]
    if variant is AttackVariant.SHANNON4:
        lines.append(f"qber0,{_f9(qber0(variant))}")
    lines.append(f"entanglement_threshold,{_f9(entanglement_threshold(variant))}")
    lines.append(f"theorem1_boundary,{_f9(ad.theorem1_boundary(variant))}")
    lines.append(f"chsh_boundary,{_f9(chsh_threshold(variant))}")
    return "\n".join(lines) + "\n"


def ad_text(variant: AttackVariant, qber: float, n: int, trials: int, seed: int, workers: int = 1) -> str:
    if trials < 0:
        raise DomainError(f"trials must be non-negative, got {trials}")
    params = attack_from_qber(variant, qber)
    exact = ad.exact_figures(params, n)
    th1 = ad.theorem1(params)
    n_min = ad.min_block_length(params, MIN_BLOCK_N_MAX)
    out = io.StringIO()
    for key, value in [
        ("variant", variant.value),
        ("qber", _g(qber)),
        ("n", n),
        ("p_accept", _g(exact.p_accept)),
        ("beta", _g(exact.beta)),
        ("gamma", _g(exact.gamma)),
        ("gamma_full", _g(exact.gamma_full)),
        ("th1_lhs", _g(th1.lhs)),
        ("th1_rhs", _g(th1.rhs)),
        ("th1_holds", str(th1.holds).lower()),
        ("min_block_length", "none" if n_min is None else n_min),
    ]:
        print(f"{key},{value}", file=out)
    if trials > 0:
        est = ad.simulate(params, n, trials, seed, workers=workers)
        for key, value in [
            ("seed", seed),
            ("trials", est.trials),
            ("accepted", est.accepted),
            ("empirical_p_accept", _g(est.accept_rate)),
            ("empirical_p_accept_se", _g(est.accept_stderr())),
            ("empirical_beta", _g(est.beta)),
            ("empirical_beta_se", _g(est.beta_stderr())),
            ("empirical_gamma_full", _g(est.gamma)),
            ("empirical_gamma_full_se", _g(est.gamma_stderr())),
        ]:
            print(f"{key},{value}", file=out)
    return out.getvalue()


def fig1_text() -> str:
    text = sweep_text(AttackVariant.SHANNON4, 0.0, FIG1_TO, FIG1_STEP)
    markers = [
        "marker,value",
        f"qber0,{_f9(qber0(AttackVariant.SHANNON4))}",
        "IR_4,0.25",
        f"IR_6,{_f9(1.0 / 3.0)}",
    ]
    return text + "\n" + "\n".join(markers) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _seed(value: str) -> int:
    seed = int(value, 10)
    if not (0 <= seed < 2**64):
        raise argparse.ArgumentTypeError(f"seed {value} is not a 64-bit unsigned integer")
    return seed


def build_parser() -> argparse.ArgumentParser:
    variants = [v.value for v in AttackVariant]
    parser = argparse.ArgumentParser(
        prog="qkd-limits",
        description="Error-rate limits for key agreement under incoherent eavesdropping.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="QBER thresholds of one attack variant (all if omitted)")
    p.add_argument("--variant", choices=variants)

    p = sub.add_parser("sweep", help="write information / entanglement curves as CSV")
    p.add_argument("--variant", choices=variants, required=True)
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ad", help="advantage distillation figures, exact and simulated")
    p.add_argument("--variant", choices=variants, required=True)
    p.add_argument("--qber", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("fig1", help="write the 4-state information curves and markers as CSV")
    p.add_argument("--out", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "thresholds":
            chosen = [AttackVariant(args.variant)] if args.variant else list(AttackVariant)
            sys.stdout.write("\n".join(thresholds_text(v) for v in chosen))
        elif args.command == "sweep":
            _write(args.out, sweep_text(AttackVariant(args.variant), args.start, args.stop, args.step))
        elif args.command == "ad":
            sys.stdout.write(
                ad_text(AttackVariant(args.variant), args.qber, args.n, args.trials, args.seed, args.workers)
            )
        elif args.command == "fig1":
            _write(args.out, fig1_text())
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
