"""Command line front end.

    fracbvp check      --config run.json
    fracbvp solve      --config run.json [--csv out.csv] [--oracle]
    fracbvp identities [--config run.json]
    fracbvp example41

Exit codes: 0 success / certified, 1 malformed configuration or usage,
2 certificate not satisfied or unreliable, 3 hypothesis violated,
4 solver did not converge.
"""

from __future__ import annotations

import argparse
import csv
import sys
import warnings

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig
from .errors import DivergenceError, FracBVPError, HypothesisError, UnsupportedError
from .green import make_kernel
from .identities import run_all
from .problem import HypothesisWarning, check_H1, check_H3, compute_M, estimate_B_delta
from .solver import linear_oracle_solve, picard_solve, residual_report
from .special import gamma

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CERTIFIED = 2
EXIT_HYPOTHESIS = 3
EXIT_NOT_CONVERGED = 4

CSV_HEADER = ("t", "u", "uprime", "u_weighted", "uprime_weighted")


def exit_code(hypotheses_ok: bool, certified: bool | None = None,
              converged: bool | None = None) -> int:
    """Exit status as a function of hypothesis, certificate and convergence status.

    ``None`` means the stage was not run.
    """
    if not hypotheses_ok:
        return EXIT_HYPOTHESIS
    if converged is False:
        return EXIT_NOT_CONVERGED
    if certified is False:
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


class Report:
    def __init__(self):
        self.lines = []

    def __call__(self, text=""):
        self.lines.append(text)

    def text(self):
        return "\n".join(self.lines) + "\n"


def _fmt(x):
    return f"{x:.10g}"


def _certificate_section(cfg: RunConfig, spec, grid, out: Report):
    """Print the hypothesis/certificate block; return (hypotheses_ok, certified)."""
    total, ok = check_H1(spec)
    gab = gamma(spec.alpha + spec.beta - 1.0)
    out(f"H1: sum eta_i xi_i^(alpha+beta-2) = {_fmt(total)} vs Gamma(alpha+beta-1) = {_fmt(gab)}"
        f" -> {'holds' if ok else 'VIOLATED'}")
    if not ok:
        out(f"hypothesis failure: the multi-point sum {_fmt(total)} must lie in (0, {_fmt(gab)})")
        return False, None
    kernel = spec.kernel()
    out(f"L = {_fmt(kernel.L)}")

    pinned = cfg.problem.J is not None
    if pinned:
        J, tail_flag = float(cfg.problem.J), False
        out(f"J = {_fmt(J)} (pinned by configuration)")
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", HypothesisWarning)
            J, tail_flag = check_H3(spec, grid)
        if caught:
            out(f"H3: {caught[0].message}")
            return False, None
        out(f"J = {_fmt(J)} on [0, {grid.S_max:g}]"
            + ("  [tail_flag: integrand has not decayed, J is probably divergent]" if tail_flag else ""))

    delta = float(cfg.delta)
    attested = spec.f_weighted_bound is not None
    B = estimate_B_delta(spec, delta, cfg.sampler.t_horizon, cfg.sampler.samples)
    M = compute_M(kernel, spec, B, J)
    satisfied = delta >= M
    out(f"B_delta = {_fmt(B)} ({'attested' if attested else 'sampled lower estimate'})")
    out(f"M = L (alpha-1) phi_q(B_delta) J = {_fmt(M)}")
    if spec.p == 2.0 and J > 0:
        out(f"M / (B_delta J) = {_fmt(M / (B * J))}" if B > 0 else "B_delta = 0")
    out(f"delta = {_fmt(delta)}, delta / M = {_fmt(delta / M) if M > 0 else 'inf'}")
    reliable = not tail_flag and attested
    if not reliable:
        why = []
        if tail_flag:
            why.append("J looked divergent (tail_flag)")
        if not attested:
            why.append("B_delta is only a sampled lower estimate")
        out(f"certificate UNRELIABLE: {'; '.join(why)}")
    if satisfied and reliable:
        out("verdict: CERTIFIED, a solution exists with 0 <= u/(1+t^(alpha-1)) <= delta "
            "and 0 <= u'/(1+t^(alpha-1)) <= delta")
    elif satisfied:
        out("verdict: NOT CERTIFIED (delta >= M holds numerically but the inputs are unreliable)")
    else:
        out("verdict: NOT CERTIFIED (delta < M)")
    return True, bool(satisfied and reliable)


def cmd_check(cfg: RunConfig, out: Report) -> int:
    if cfg.delta is None:
        raise ConfigError("check needs a 'delta' entry")
    spec = cfg.problem.build()
    grid = cfg.grid.build()
    ok, certified = _certificate_section(cfg, spec, grid, out)
    return exit_code(ok, certified)


def write_csv(path, w, alpha):
    uw, upw = w.weighted(alpha)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in zip(w.grid.nodes, w.u, w.uprime, uw, upw):
            writer.writerow([f"{x:.17g}" for x in row])


def cmd_solve(cfg: RunConfig, out: Report, csv_path=None, oracle=False) -> int:
    spec = cfg.problem.build()
    grid = cfg.grid.build()
    total, ok = check_H1(spec)
    if not ok:
        out(f"H1 violated: sum eta_i xi_i^(alpha+beta-2) = {_fmt(total)}")
        return exit_code(False)
    kernel = spec.kernel()
    try:
        sol = picard_solve(spec, kernel, cfg.solver.build(grid))
    except DivergenceError as exc:
        out(f"Picard iteration diverged: {exc}")
        return EXIT_NOT_CONVERGED

    path = csv_path or cfg.outputs.csv_path or "solution.csv"
    write_csv(path, sol.w, spec.alpha)
    rep = residual_report(spec, kernel, sol.w)
    out(f"grid: N = {grid.N}, S_max = {grid.S_max:g}, grading = {grid.grading:g}")
    out(f"converged = {str(sol.converged).lower()}, iterations = {sol.iterations}, "
        f"final step = {sol.final_step_norm:.3e}")
    out(f"fixed-point residual ||T w - w|| = {rep.fixed_point_residual:.3e}")
    out(f"boundary gaps: |u(0)| = {rep.bc_u0:.3e}, |u'(0)| = {rep.bc_up0:.3e}")
    out(f"multi-point gap at t = S_max: {rep.multipoint_gap:.3e}")
    out(f"|phi_p(D^alpha u)(t_1)| = {rep.dalpha0_gap:.3e} (proxy for D^alpha u(0) = 0)")
    uw, upw = sol.w.weighted(spec.alpha)
    out(f"max u/(1+t^(alpha-1)) = {uw.max():.6g}, max u'/(1+t^(alpha-1)) = {upw.max():.6g}, "
        f"||w|| = {sol.w.norm(spec.alpha):.6g}")
    if cfg.delta is not None:
        d = float(cfg.delta)
        holds = bool(np.all(uw >= 0) and np.all(upw >= 0) and uw.max() <= d and upw.max() <= d)
        out(f"pointwise bounds 0 <= u/(1+t^(alpha-1)), u'/(1+t^(alpha-1)) <= delta = {d:g}: "
            f"{'hold' if holds else 'VIOLATED'}")
    if oracle:
        try:
            direct = linear_oracle_solve(spec, kernel, grid)
        except UnsupportedError as exc:
            out(f"oracle unavailable: {exc}")
            return EXIT_CONFIG
        out(f"Picard vs direct dense solve: ||difference|| = {(sol.w - direct.w).norm(spec.alpha):.3e}")
    out(f"CSV written to {path}")
    return exit_code(True, converged=sol.converged)


def cmd_identities(cfg: RunConfig | None, out: Report) -> int:
    grid = cfg.grid.build() if cfg is not None else None
    results = run_all(grid)
    for r in results:
        out(r.line())
    passed = all(r.passed for r in results)
    out(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if passed else EXIT_NOT_CERTIFIED


def example41_values():
    """Constants of the worked example (alpha = 5/2, beta = 1/2, p = 2, J = 1)."""
    k = make_kernel(2.5, 0.5, [1 / 3, 1 / 3], [1 / 3, 2 / 3])
    coeff = k.L * (k.alpha - 1.0)
    # delta = M with B = (3 delta + 1)/9 and M = coeff * B
    delta_star = coeff / (9.0 - 3.0 * coeff)
    B_star = (3.0 * delta_star + 1.0) / 9.0
    return {
        "h1_sum": k.multipoint_sum, "gamma_ab": k.gamma_ab, "delta": k.delta, "L": k.L,
        "M_over_B": coeff, "delta_star": delta_star, "B_star": B_star,
        "one_over_B_star": 1.0 / B_star,
    }


def cmd_example41(out: Report) -> int:
    v = example41_values()
    out("worked example: alpha = 5/2, beta = 1/2, eta = (1/3, 1/3), xi = (1/3, 2/3), "
        "p = 2, gamma = 1")
    out("f(t,u,v) = (2u/(1+t^(3/2)) + v/(1+t^(3/2)) + 1)/9,  B_delta = (3 delta + 1)/9")
    out(f"sum eta_i xi_i^(alpha+beta-2) = {v['h1_sum']:.15g} (= 1/3) < Gamma(2) = {v['gamma_ab']:.15g}")
    out(f"Delta = {v['delta']:.15g}")
    out(f"L = 2/sqrt(pi) = {v['L']:.10f}")
    out(f"M = (3/sqrt(pi)) B_delta J, coefficient = {v['M_over_B']:.10f}  (J = 1 as stated)")
    out(f"minimal delta* = 1/(3(sqrt(pi)-1)) = {v['delta_star']:.10f}")
    out(f"B_delta* = {v['B_star']:.10f} = 1/{v['one_over_B_star']:.4f}")
    out("note: with gamma = 1, J = int_0^inf int_0^s a(tau) dtau ds diverges for every "
        "nonnegative a that is not identically zero, so J = 1 cannot hold; the constants above "
        "take J = 1 as given. Use gamma < 1 with compactly supported a, e.g. "
        "gamma = 1/5, p = 3/2, a = 1{t <= 1}, for an instance where J is finite.")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="fracbvp", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs in (("check", True), ("solve", True), ("identities", False)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=needs, metavar="PATH")
        if name == "solve":
            p.add_argument("--csv", metavar="PATH")
            p.add_argument("--oracle", action="store_true",
                           help="cross-check against the direct dense solve (p = 2, affine f)")
    sub.add_parser("example41")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Report()
    cfg = None
    try:
        if getattr(args, "config", None):
            cfg = RunConfig.load(args.config)
            if args.command in ("check", "solve") and cfg.problem is None:
                raise ConfigError("configuration has no 'problem' section")
        if args.command == "check":
            code = cmd_check(cfg, out)
        elif args.command == "solve":
            code = cmd_solve(cfg, out, csv_path=args.csv, oracle=args.oracle)
        elif args.command == "identities":
            code = cmd_identities(cfg, out)
        else:
            code = cmd_example41(out)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HypothesisError as exc:
        out(str(exc))
        code = EXIT_HYPOTHESIS
    except FracBVPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = out.text()
    sys.stdout.write(text)
    if cfg is not None and cfg.outputs.report_path:
        with open(cfg.outputs.report_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
