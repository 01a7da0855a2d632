"""Command-line entry points.

Subcommands:
  verify {invariance,clark,correlations,variance}  run a property suite
  clt simulate --config cfg.json --out dir         sample T_N, write outputs
  clark dump --map map.json --alpha theta          print a Clark measure
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .blaschke import BlaschkeProduct, CirclePoint, monomial
from .clark import check_first_moment, check_second_moment, clark_measure, desintegrate
from .clt import Tolerances, gauss_report, simulate, tails_run
from .correlations import (BlockSum, CorrelationSpec, block_product_factorization,
                           decay_check, four_factor, higher_correlation,
                           pair_correlation, phi_exponent)
from .quadrature import check_invariance
from .variance import (CoefficientSequence, asymptotic_sigma_squared,
                       growth_condition, l2_identity_check, quasiorthogonality,
                       sigma_N_squared, split_plan, toeplitz_sandwich)


def _test_maps():
    return {
        "z2": monomial(2),
        "z3": monomial(3),
        "deg2-half": BlaschkeProduct(zeros=(0.0, 0.5)),
    }


def coefficients_from_config(data: dict, default_length: int) -> CoefficientSequence:
    kind = data.get("kind", "ones")
    length = int(data.get("length", default_length))
    if kind == "ones":
        return CoefficientSequence.ones(length)
    if kind == "explicit":
        values = [complex(re, im) for re, im in data["values"]]
        return CoefficientSequence.explicit(values)
    if kind == "random_signs":
        return CoefficientSequence.random_signs(length, int(data["seed"]))
    if kind == "geometric":
        return CoefficientSequence.geometric(float(data["ratio"]), length)
    raise ValueError(f"unknown coefficient kind {kind!r}")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# -- verify suites ----------------------------------------------------------


def _suite_invariance():
    rows = []
    observables = [lambda z, p=p: z ** p + np.conj(z) ** (p + 1) for p in range(1, 6)]
    for name, f in _test_maps().items():
        for i, g in enumerate(observables):
            check = check_invariance(f, g)
            rows.append((f"invariance[{name},G{i}]", check.passed,
                         f"residual={check.residual:.2e}"))
    return rows


def _suite_clark():
    rows = []
    for name, f in _test_maps().items():
        for theta in np.linspace(0.3, 5.9, 5):
            alpha = CirclePoint(float(theta))
            mu = clark_measure(f, alpha)
            rows.append((f"clark-atoms[{name},{theta:.2f}]",
                         len(mu.atoms) == f.degree
                         and abs(float(np.sum(mu.weights)) - 1.0) <= 1e-10,
                         f"atoms={len(mu.atoms)}"))
            r1 = check_first_moment(f, alpha)
            r2 = check_second_moment(f, alpha)
            rows.append((f"clark-moments[{name},{theta:.2f}]",
                         r1 <= 1e-8 and r2 <= 1e-8,
                         f"res1={r1:.2e} res2={r2:.2e}"))
        _, res = desintegrate(f, lambda z: np.real(z) ** 2, k_alpha=128)
        rows.append((f"clark-desintegration[{name}]", res <= 1e-8,
                     f"residual={res:.2e}"))
    return rows


def _suite_correlations():
    f = BlaschkeProduct(zeros=(0.0, 0.5))
    rows = []
    for k in range(1, 4):
        for j in range(k + 1, 6):
            pc = pair_correlation(f, k, j)
            rows.append((f"pair[{k},{j}]", pc.residual <= 1e-9,
                         f"residual={pc.residual:.2e}"))
    fact = block_product_factorization(
        monomial(2), [BlockSum.ones((1, 2)), BlockSum.ones((3, 4))])
    rows.append(("factorization[z2,{1,2},{3,4}]",
                 fact.residual <= 1e-8 and abs(fact.lhs - 4.0) <= 1e-8,
                 f"lhs={fact.lhs:.6f}"))
    ff = four_factor(f, (1, -1, 1, -1), (1, 2, 3, 4))
    rows.append(("four-factor-IV", ff.residual is not None and ff.residual <= 1e-8,
                 f"|value|={abs(ff.value):.6f}"))
    spec = CorrelationSpec((1, -1, 1, -1), (1, 3, 5, 7))
    val = higher_correlation(f, spec)
    rep = phi_exponent(spec)
    rows.append(("higher-alternating", abs(abs(val) - 0.5 ** rep.phi) <= 1e-8,
                 f"phi={rep.phi}"))
    family = [CorrelationSpec(s, n) for s, n in [
        ((1, -1, 1), (1, 3, 6)), ((1, 1, -1), (2, 4, 7)),
        ((1, -1, 1, -1), (1, 3, 5, 8)), ((1, 1, -1, -1), (1, 4, 6, 9))]]
    dc = decay_check(f, family)
    rows.append(("decay-family", dc.passed, f"fitted_C={dc.fitted_c:.3f}"))
    return rows, [(s.k, s.min_gap, phi_exponent(s).phi, abs(higher_correlation(f, s)),
                   math.factorial(s.k) * 0.5 ** phi_exponent(s).phi, True)
                  for s in family]


def _suite_variance():
    rows = []
    ones = CoefficientSequence.ones(2000)
    rows.append(("sigma-example", abs(sigma_N_squared(ones, 0.5, 3) - 5.5) <= 1e-12,
                 "sigma_3^2(1,0.5)"))
    rows.append(("asymptotic", abs(asymptotic_sigma_squared(0.5) - 3.0) <= 1e-12,
                 "Re((1.5)/(0.5))"))
    ok = True
    for seed in range(20):
        a = CoefficientSequence.random_signs(64, seed)
        try:
            toeplitz_sandwich(a, 0.7j, 64)
        except Exception:
            ok = False
    rows.append(("sandwich-sweep", ok, "20 random-sign sequences"))
    f = BlaschkeProduct(zeros=(0.0, 0.5))
    res = l2_identity_check(f, ones, 6)
    rows.append(("l2-identity", res <= 1e-8, f"residual={res:.2e}"))
    growth = growth_condition(ones, 0.5, [100, 400, 1600])
    rows.append(("growth-ones", growth.holds, f"last={growth.ratios[-1]:.4f}"))
    quasi = quasiorthogonality(CoefficientSequence.random_signs(1600, 7),
                               [100, 400, 1600])
    rows.append(("quasi-random-signs", quasi.holds, f"last={quasi.ratios[-1]:.4f}"))
    csv_rows = []
    for n in (100, 400, 1600):
        plan = split_plan(ones, n)
        rows.append((f"split-plan[{n}]",
                     plan.mass_bounds_ok and plan.length_bounds_ok,
                     f"ratio={plan.partial_ratio:.4f}"))
        csv_rows.append((n, ones.s2(n), sigma_N_squared(ones, 0.0, n),
                         plan.partial_ratio,
                         growth_condition(ones, 0.5, [n]).ratios[0],
                         quasiorthogonality(ones, [n]).ratios[0], plan.q_count))
    return rows, csv_rows


def run_verify(args) -> int:
    suite = args.suite
    csv_rows, csv_header = None, None
    if suite == "invariance":
        rows = _suite_invariance()
    elif suite == "clark":
        rows = _suite_clark()
    elif suite == "correlations":
        rows, csv_rows = _suite_correlations()
        csv_header = ("k", "q", "phi", "abs_I", "bound", "pass")
    elif suite == "variance":
        rows, csv_rows = _suite_variance()
        csv_header = ("N", "S2", "sigma2", "ratio", "growth_ratio",
                      "quasi_ratio", "Q_N")
    else:
        raise ValueError(suite)
    all_pass = True
    for name, passed, detail in rows:
        all_pass &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'} {name} ({detail})")
    if args.csv and csv_rows is not None:
        _write_csv(args.csv, csv_header, csv_rows)
    return 0 if all_pass else 1


# -- clt simulate -----------------------------------------------------------


def run_simulate(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    f = BlaschkeProduct.from_dict(config["map"])
    n = int(config["N"])
    m = int(config["samples"])
    seed = int(config["seed"])
    mode = config.get("mode", "main")
    a = coefficients_from_config(config.get("coefficients", {}),
                                 default_length=n if mode != "tail" else 4 * n)
    tol = Tolerances.from_dict(config.get("tolerances", {}))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if mode == "tail":
        report = tails_run(f, a, n, m, seed, tolerances=tol)
        samples = None
    else:
        dist = simulate(f, a, n, m, seed, mode=mode)
        report = gauss_report(dist, tol)
        samples = dist.array()
    if samples is not None:
        _write_csv(out / "samples.csv", ("re", "im"),
                   ((float(v.real), float(v.imag)) for v in samples))
    payload = report.to_dict()
    payload["config"] = config
    with open(out / "report.json", "w") as fh:
        json.dump(payload, fh, indent=2)
    print(f"{'PASS' if report.passed else 'FAIL'} clt-{mode} "
          f"(ks_re={report.ks_re:.4f} ks_im={report.ks_im:.4f} "
          f"e_abs2={report.e_abs2:.4f})")
    return 0 if report.passed else 1


# -- clark dump -------------------------------------------------------------


def run_clark_dump(args) -> int:
    with open(args.map) as fh:
        f = BlaschkeProduct.from_dict(json.load(fh))
    mu = clark_measure(f, CirclePoint(args.alpha), power=args.power)
    json.dump(mu.to_dict(), sys.stdout, indent=2)
    print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="innerclt",
        description="Boundary dynamics of Blaschke products: correlation "
                    "identities, Clark measures and CLT sampling.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("suite",
                        choices=["invariance", "clark", "correlations", "variance"])
    verify.add_argument("--csv", help="optional CSV output path")
    verify.set_defaults(func=run_verify)

    clt = sub.add_parser("clt", help="sampling runs")
    clt_sub = clt.add_subparsers(dest="clt_command", required=True)
    sim = clt_sub.add_parser("simulate", help="sample T_N and write a report")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=run_simulate)

    clark = sub.add_parser("clark", help="Clark measure tools")
    clark_sub = clark.add_subparsers(dest="clark_command", required=True)
    dump = clark_sub.add_parser("dump", help="print atoms and weights as JSON")
    dump.add_argument("--map", required=True)
    dump.add_argument("--alpha", type=float, required=True)
    dump.add_argument("--power", type=int, default=1)
    dump.set_defaults(func=run_clark_dump)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
