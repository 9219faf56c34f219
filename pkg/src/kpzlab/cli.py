"""Command-line front end.

Subcommands:
  identity-check            exact q-moment identity at small sizes
  fredholm-eval             six-vertex Fredholm identity (exact lhs vs det)
  baik-rains-table          tabulate F_{BR;c} to CSV
  simulate-vertex           dump height samples to CSV
  simulate-asep             dump current samples to CSV
  scaling-experiment        vertex T^{1/3} fluctuation exponent
  asep-scaling-experiment   ASEP T^{2/3} variance exponent
  distribution-experiment   rescaled heights vs Baik-Rains (KS)
  degeneration-check        six-vertex -> ASEP two-sample KS
  mapping-check             symmetric-model mapping round trip
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=str, default=None, help="JSON config file")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", type=str, default=None, help="output directory")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--threads", type=int, default=None)


def _config(args, kind: str):
    from .harness import ExperimentConfig

    overrides = {"seed": args.seed, "samples": args.samples, "out": args.out}
    if args.config:
        cfg = ExperimentConfig.from_json(args.config, kind=kind, **overrides)
    else:
        cfg = ExperimentConfig(kind=kind, **{k: v for k, v in overrides.items() if v is not None})
    if args.threads:
        import numba

        numba.set_num_threads(args.threads)
    return cfg


def _emit(report, cfg) -> int:
    text = report.to_json()
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        path = os.path.join(cfg.out, f"{report.experiment}-report.json")
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    print(text)
    return 0 if report.passed else 1


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="kpzlab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in (
        "identity-check",
        "fredholm-eval",
        "baik-rains-table",
        "simulate-vertex",
        "simulate-asep",
        "scaling-experiment",
        "asep-scaling-experiment",
        "distribution-experiment",
        "degeneration-check",
        "mapping-check",
    ):
        _add_common(sub.add_parser(name))
    args = ap.parse_args(argv)
    cfg = _config(args, args.command)

    if args.command == "identity-check":
        from .fredholm import q_moment_integral
        from .harness import Report
        from .vertex import weighted_height_qmoment
        import time

        if cfg.b2 is None:
            # nested contours need kappa*beta2 well below q^{k+2}
            beta2 = 0.04 * (1 - cfg.delta1) ** -1 * (1 - cfg.delta2)
            cfg.b2 = beta2 / (1 + beta2)
        p = cfg.vertex_params()
        report = Report(experiment="identity-check")
        for (x, t, k, J) in [(2, 2, 1, 1), (3, 3, 1, 2), (3, 3, 2, 1), (4, 4, 2, 2)]:
            t0 = time.time()
            lhs = q_moment_integral(p, x, t, k, J)
            rhs = weighted_height_qmoment(p, x, t, k, J)
            err = abs(lhs - rhs)
            report.add(
                name=f"x={x},t={t},k={k},J={J}",
                inputs={"x": x, "t": t, "k": k, "J": J},
                computed={"integral": [lhs.real, lhs.imag]},
                reference={"enumeration": [rhs.real, rhs.imag]},
                tolerance={"abs": 1e-8},
                passed=bool(err < 1e-8),
                wall_clock_s=time.time() - t0,
            )
        return _emit(report, cfg)

    if args.command == "fredholm-eval":
        import time

        from .contours import place_contours_vertex
        from .fredholm import fredholm_det_nystrom, kernel_V_matrix
        from .harness import Report
        from .vertex import exact_fredholm_lhs

        if cfg.b2 is None:
            cfg.b2 = 0.3  # identity needs kappa*beta2 strictly below beta1
        p = cfg.vertex_params()
        gamma, cv = place_contours_vertex(p, n=384)
        contours = {
            "Gamma": [gamma.center.real, gamma.radius, gamma.n],
            "C": [cv.center.real, cv.radius, cv.n],
        }
        report = Report(experiment="fredholm-eval")
        for (x, t) in [(3, 3), (4, 5)]:
            for pe in (1, 3, 5):
                t0 = time.time()
                zeta = -p.q**pe
                lhs = exact_fredholm_lhs(p, x, t, zeta)
                det = fredholm_det_nystrom(kernel_V_matrix(p, x, t, pe, cv, gamma), cv)
                report.add(
                    name=f"x={x},t={t},p={pe}",
                    inputs={"x": x, "t": t, "p": pe, "contours": contours},
                    computed={"det": [det.real, det.imag]},
                    reference={"lhs": lhs},
                    tolerance={"abs": 1e-6},
                    passed=bool(abs(lhs - det) < 1e-6),
                    wall_clock_s=time.time() - t0,
                )
        return _emit(report, cfg)

    if args.command == "baik-rains-table":
        from .airy import AiryGrid, baik_rains_cdf, g_of_cs, tw_like_det
        from .harness import write_samples_csv

        c = cfg.c
        s_vals = np.arange(-6.0, 5.001, 0.1)
        grid = AiryGrid.build(float(s_vals.min()), c)
        rows = []
        for s in s_vals:
            rows.append(
                (c, round(float(s), 6), g_of_cs(c, s, grid), tw_like_det(c, s, grid),
                 baik_rains_cdf(c, float(s), grid=grid))
            )
        out = cfg.out or "."
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "baik_rains_table.csv")
        write_samples_csv(path, ["c", "s", "g", "det", "F_BR"], rows)
        print(f"wrote {path}")
        return 0

    if args.command == "simulate-vertex":
        from .harness import write_samples_csv
        from .vertex import BoundarySpec, simulate_height_batch

        p = cfg.vertex_params()
        T = cfg.T_list[0]
        from .params import scaling_constants

        sc = scaling_constants(p)
        X, Y = int(sc.x_dir * T), int(sc.y_dir * T)
        h = simulate_height_batch(
            p.delta1, p.delta2, X, Y, BoundarySpec.double_bernoulli(p.b1, p.b2),
            cfg.seed, cfg.samples,
        )
        from .rng import derive_key

        out = cfg.out or "."
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "vertex_samples.csv")
        write_samples_csv(
            path, ["seed", "X", "Y", "height"],
            [(derive_key(cfg.seed, i), X, Y, int(v)) for i, v in enumerate(h)],
        )
        print(f"wrote {path}")
        return 0

    if args.command == "simulate-asep":
        from .asep import simulate_current_batch
        from .harness import write_samples_csv

        params = cfg.asep_params(stationary=cfg.b2 is None)
        T = cfg.T_list[0]
        s = simulate_current_batch(params, cfg.x, T, cfg.samples, cfg.seed)
        from .rng import derive_key

        out = cfg.out or "."
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "asep_samples.csv")
        write_samples_csv(
            path, ["seed", "T", "x", "J"],
            [(derive_key(cfg.seed, i), T, cfg.x, int(v)) for i, v in enumerate(s.J)],
        )
        print(f"wrote {path}")
        return 0

    from .harness import EXPERIMENTS

    report = EXPERIMENTS[args.command](cfg)
    return _emit(report, cfg)


if __name__ == "__main__":
    sys.exit(main())
