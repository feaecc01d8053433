"""Command-line front end.

Each subcommand runs a pipeline, writes its numeric artifacts (CSV), and
prints a machine-readable JSON run report: inputs, one verdict per check
(with its tolerance), artifact paths, and the seed when randomness is
involved.  The exit code is 0 iff every verdict passed.  Reports contain
no timestamps, so identical inputs reproduce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cascade as casc
from . import filterbank as fb
from . import ifs as ifsmod
from . import shiftalgebra as sa
from . import transfer as tr
from .errors import CheckError
from .isometries import cuntz_relations_report
from .trigpoly import TrigPoly


def _number(text: str) -> float:
    """Parse '1/256' or '-8' or '0.25'."""
    return float(Fraction(text))


def _parse_grid(text: str):
    """'lo:hi:step' with fraction-friendly numbers."""
    lo, hi, step = (_number(p) for p in text.split(":"))
    return lo, hi, step


def _out_dir(args) -> Path:
    base = Path(getattr(args, "out_dir", None) or
                os.environ.get("ISOWAVE_OUT_DIR", "."))
    base.mkdir(parents=True, exist_ok=True)
    return base


class Report:
    def __init__(self, command: str, inputs: dict, seed: int = 0):
        self.data = {"command": command, "inputs": inputs, "verdicts": [],
                     "artifacts": [], "seed": seed}

    def verdict(self, name: str, passed: bool, residual: float, tol: float):
        self.data["verdicts"].append({
            "name": name, "passed": bool(passed),
            "residual": float(residual), "tol": float(tol)})

    def artifact(self, path) -> None:
        self.data["artifacts"].append(str(path))

    def error(self, code: str, message: str) -> None:
        self.data["verdicts"].append({
            "name": f"error:{code}", "passed": False,
            "residual": float("nan"), "tol": 0.0, "message": message})

    def finish(self, args) -> int:
        text = json.dumps(self.data, indent=2, sort_keys=True)
        print(text)
        if getattr(args, "report", None):
            Path(args.report).write_text(text + "\n")
        return 0 if all(v["passed"] for v in self.data["verdicts"]) else 1


# ------------------------------------------------------------- subcommands

def cmd_check_filter(args) -> int:
    rep = Report("check-filter", {"filter": args.filter, "tol": args.tol})
    loaded = fb.load_filter(args.filter)
    n = args.branch_count or loaded.branch_count
    unit = fb.is_unit_filter(loaded.poly, n, args.tol)
    rep.verdict("unit_filter", unit.passed, unit.residual, args.tol)
    if n == 2 and unit.passed:
        bank = fb.FilterBank(2, [loaded.poly, fb.quadrature_mirror(loaded.poly)],
                             tol=args.tol)
        bank_rep = fb.is_filter_bank(bank)
        rep.verdict("mirror_completion_bank", bank_rep.passed,
                    max(bank_rep.gram_residuals.max(),
                        bank_rep.reconstruction_residual), args.tol)
        hyp = casc.lowpass_hypotheses(loaded.poly)
        rep.verdict("lowpass_peak", hyp.peak_residual <= hyp.tol,
                    hyp.peak_residual, hyp.tol)
        rep.verdict("lowpass_nonvanishing", hyp.min_modulus_ok,
                    -(hyp.min_modulus - hyp.margin), hyp.margin)
    return rep.finish(args)


def cmd_complete(args) -> int:
    rep = Report("complete", {"filter": args.filter})
    loaded = fb.load_filter(args.filter)
    try:
        m2 = fb.quadrature_mirror(loaded.poly)
    except CheckError as exc:
        rep.error(exc.code, str(exc))
        return rep.finish(args)
    out = _out_dir(args) / (args.out or "highpass.json")
    fb.save_filter(out, m2, 2)
    rep.artifact(out)
    bank_rep = fb.is_filter_bank(fb.FilterBank(2, [loaded.poly, m2]))
    rep.verdict("bank", bank_rep.passed,
                max(bank_rep.gram_residuals.max(),
                    bank_rep.reconstruction_residual), 1e-12)
    return rep.finish(args)


def cmd_cascade(args) -> int:
    lo, hi, step = _parse_grid(args.grid)
    rep = Report("cascade", {"filter": args.filter, "factors": args.factors,
                             "grid": args.grid})
    loaded = fb.load_filter(args.filter)
    cfg = casc.CascadeConfig(factors=args.factors, t_max=max(abs(lo), hi), step=step)
    try:
        phi = casc.scaling_freq(loaded.poly, cfg)
    except CheckError as exc:
        rep.error(exc.code, str(exc))
        return rep.finish(args)
    out = _out_dir(args) / (args.out or "phi.csv")
    phi.save_csv(out)
    rep.artifact(out)
    ts = casc.two_scale_residual(loaded.poly, cfg)
    rep.verdict("two_scale", ts <= 1e-12, ts, 1e-12)
    return rep.finish(args)


def cmd_wavelet(args) -> int:
    rep = Report("wavelet", {"filter": args.filter, "factors": args.factors})
    loaded = fb.load_filter(args.filter)
    hyp = casc.lowpass_hypotheses(loaded.poly)
    if hyp.peak_residual > 1e-9:
        rep.error("HYPOTHESIS_FAIL",
                  f"|m'(1)| off by {hyp.peak_residual:.3g}; not a low pass")
        return rep.finish(args)
    rep.verdict("hypotheses", hyp.passed, hyp.peak_residual, hyp.tol)
    m2 = fb.quadrature_mirror(loaded.poly)
    lo, hi, step = _parse_grid(args.grid)
    cfg = casc.CascadeConfig(factors=args.factors, t_max=max(abs(lo), hi), step=step)
    phi = casc.scaling_freq(loaded.poly, cfg)
    zeta = casc.wavelet_freq(m2, phi)
    xlo, xhi, xstep = _parse_grid(args.x_grid)
    psi = casc.wavelet_time(zeta, xlo, xhi, xstep)
    out = _out_dir(args)
    for name, fn in (("phi.csv", phi), ("zeta.csv", zeta), ("psi.csv", psi)):
        fn.save_csv(out / name)
        rep.artifact(out / name)
    norm = psi.norm_l2()
    rep.verdict("psi_unit_norm", abs(norm - 1.0) <= 1e-2, abs(norm - 1.0), 1e-2)
    _, gram_res = casc.orthonormality_gram(psi, range(-2, 3), range(-2, 3))
    rep.verdict("gram_identity", gram_res <= 5e-2, gram_res, 5e-2)
    return rep.finish(args)


def cmd_gram(args) -> int:
    rep = Report("gram", {"psi": args.psi, "jmax": args.jmax, "kmax": args.kmax,
                          "tol": args.tol})
    psi = casc.SampledFn.load_csv(args.psi)
    _, residual = casc.orthonormality_gram(
        psi, range(-args.jmax, args.jmax + 1), range(-args.kmax, args.kmax + 1))
    rep.verdict("gram_identity", residual <= args.tol, residual, args.tol)
    return rep.finish(args)


def cmd_groupoid_demo(args) -> int:
    n, level = args.alphabet, args.level
    rep = Report("groupoid-demo", {"alphabet": n, "level": level})
    s = sa.shift_isometry(n)
    print(f"S        = {s}")
    print(f"S*S      = {sa.multiply(sa.adjoint(s), s)}")
    print(f"SS*      = {sa.multiply(s, sa.adjoint(s))}")
    f = sa.term(n, (1,), (1,))
    print(f"alpha(s1 s1*) = {sa.shift_endomorphism(f)}")
    print(f"L(s1 s1*)     = {sa.transfer_expectation(f)}")
    try:
        nf = sa.normal_form(f, level)
        print(f"normal_form(s1 s1*, {level}) = {nf}")
    except CheckError as exc:
        rep.error(exc.code, str(exc))
        return rep.finish(args)
    iso = sa.op_distance(sa.multiply(sa.adjoint(s), s), sa.unit(n))
    rep.verdict("isometry", iso <= 1e-12, iso, 1e-12)
    cp = sa.expectation_relations_report(f)
    rep.verdict("intertwine", cp.intertwine_residual <= cp.tol,
                cp.intertwine_residual, cp.tol)
    rep.verdict("transfer", cp.transfer_residual <= cp.tol,
                cp.transfer_residual, cp.tol)
    return rep.finish(args)


def _builtin_weight(name: str, branches: int) -> TrigPoly:
    if name == "lebesgue":
        return TrigPoly(0, [1.0 / branches])
    if name == "haar":
        m1 = fb.haar_lowpass()
        return (m1.star() * m1) / 2.0
    raise CheckError("BAD_WEIGHT", f"unknown builtin weight {name!r}")


def cmd_transfer(args) -> int:
    rep = Report("transfer", {"weight": args.weight, "filter": args.filter,
                              "branches": args.branches, "modes": args.modes})
    n = args.branches
    if args.filter:
        loaded = fb.load_filter(args.filter)
        n = loaded.branch_count
        weight = (loaded.poly.star() * loaded.poly) / n
    else:
        weight = _builtin_weight(args.weight, n)
    try:
        result = tr.fixed_measure(weight, n, args.modes)
    except CheckError as exc:
        rep.error(exc.code, str(exc))
        return rep.finish(args)
    out = _out_dir(args) / (args.out or "moments.csv")
    with open(out, "w") as fh:
        fh.write("mode,re,im\n")
        for k in range(-args.modes, args.modes + 1):
            v = result.measure.moments[k + args.modes]
            fh.write(f"{k},{v.real!r},{v.imag!r}\n")
    rep.artifact(out)
    if args.matrix_out:
        mpath = _out_dir(args) / args.matrix_out
        tr.build_transfer_matrix(weight, n, args.modes).to_csv(mpath)
        rep.artifact(mpath)
    rep.verdict("converged", result.converged, 0.0 if result.converged else 1.0,
                0.5)
    rep.verdict("eigenvalue_one", abs(result.eigenvalue - 1.0) <= 1e-8,
                abs(result.eigenvalue - 1.0), 1e-8)
    rep.verdict("fixed_point", result.residual <= 1e-10, result.residual, 1e-10)
    return rep.finish(args)


def cmd_ifs(args) -> int:
    rep = Report("ifs-attractor", {"file": args.file, "builtin": args.builtin,
                                   "iters": args.iters, "snap": args.snap})
    if args.file:
        system = ifsmod.load_ifs(args.file)
    elif args.builtin == "sierpinski":
        system = ifsmod.sierpinski()
    elif args.builtin == "cantor":
        system = ifsmod.cantor()
    else:
        rep.error("BAD_INPUT", "need --file or --builtin")
        return rep.finish(args)
    result = ifsmod.attractor(system, args.iters, args.snap)
    out = _out_dir(args) / (args.out or "attractor.csv")
    ifsmod.save_points_csv(out, result.cloud)
    rep.artifact(out)
    slack = 2.0 * (args.snap or 0.0)
    ratios = [b / a for a, b in zip(result.steps, result.steps[1:]) if a > 0]
    worst = max(ratios) if ratios else 0.0
    rep.verdict("hausdorff_decay", worst <= system.c2 + slack + 1e-9,
                worst, system.c2 + slack)
    return rep.finish(args)


def cmd_frame(args) -> int:
    rep = Report("frame", {"branches": args.branches, "overlap": args.overlap})
    try:
        frame = fb.partition_frame(args.branches, args.overlap)
    except CheckError as exc:
        rep.error(exc.code, str(exc))
        return rep.finish(args)
    worst = max(frame.reconstruction_residual(TrigPoly.monomial(k))
                for k in range(-args.test_degree, args.test_degree + 1))
    rep.verdict("reconstruction", worst <= frame.tol, worst, frame.tol)
    rep.data["inputs"]["degree"] = frame.report["degree"]
    return rep.finish(args)


def cmd_cuntz(args) -> int:
    rep = Report("cuntz", {"filter": args.filter, "trials": args.trials},
                 seed=args.seed)
    loaded = fb.load_filter(args.filter)
    bank = fb.FilterBank(2, [loaded.poly, fb.quadrature_mirror(loaded.poly)])
    report = cuntz_relations_report(bank, trials=args.trials, seed=args.seed)
    rep.verdict("isometry_relations", report.isometry_residual <= report.tol,
                report.isometry_residual, report.tol)
    rep.verdict("completeness", report.completeness_residual <= report.tol,
                report.completeness_residual, report.tol)
    return rep.finish(args)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isowave",
                                description="filter banks, isometries and wavelets "
                                            "on the circle")
    p.add_argument("--out-dir", help="output directory "
                                     "(default $ISOWAVE_OUT_DIR or '.')")
    p.add_argument("--report", help="also write the JSON report to this path")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("check-filter", help="unit-filter, bank and low-pass checks")
    q.add_argument("--filter", required=True)
    q.add_argument("--branch-count", type=int, default=None)
    q.add_argument("--tol", type=float, default=1e-12)
    q.set_defaults(func=cmd_check_filter)

    q = sub.add_parser("complete", help="build the mirror high pass")
    q.add_argument("--filter", required=True)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_complete)

    q = sub.add_parser("cascade", help="truncated infinite product phi")
    q.add_argument("--filter", required=True)
    q.add_argument("--factors", type=int, default=25)
    q.add_argument("--grid", default="-8:8:1/256")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_cascade)

    q = sub.add_parser("wavelet", help="full filter -> psi pipeline")
    q.add_argument("--filter", required=True)
    q.add_argument("--factors", type=int, default=25)
    q.add_argument("--grid", default="-256:256:1/32",
                   help="frequency grid for phi")
    q.add_argument("--x-grid", default="-8:8:1/64", help="time grid for psi")
    q.set_defaults(func=cmd_wavelet)

    q = sub.add_parser("gram", help="orthonormality of dilates/translates")
    q.add_argument("--psi", required=True)
    q.add_argument("--jmax", type=int, default=2)
    q.add_argument("--kmax", type=int, default=2)
    q.add_argument("--tol", type=float, default=5e-2)
    q.set_defaults(func=cmd_gram)

    q = sub.add_parser("groupoid-demo", help="symbolic shift-algebra relations")
    q.add_argument("--alphabet", type=int, default=2)
    q.add_argument("--level", type=int, default=2)
    q.set_defaults(func=cmd_groupoid_demo)

    q = sub.add_parser("transfer", help="fixed measure of the dual operator")
    q.add_argument("--weight", default="lebesgue",
                   choices=["lebesgue", "haar"])
    q.add_argument("--filter", default=None,
                   help="use |m|^2/N of this filter as the weight")
    q.add_argument("--branches", type=int, default=2)
    q.add_argument("--modes", type=int, default=16)
    q.add_argument("--out", default=None)
    q.add_argument("--matrix-out", default=None)
    q.set_defaults(func=cmd_transfer)

    q = sub.add_parser("ifs", help="iterated function systems")
    ifs_sub = q.add_subparsers(dest="ifs_command", required=True)
    qa = ifs_sub.add_parser("attractor", help="iterate the set map")
    qa.add_argument("--file", default=None)
    qa.add_argument("--builtin", default=None, choices=["sierpinski", "cantor"])
    qa.add_argument("--iters", type=int, default=12)
    qa.add_argument("--snap", type=float, default=None)
    qa.add_argument("--out", default=None)
    qa.set_defaults(func=cmd_ifs)

    q = sub.add_parser("frame", help="partition-of-unity tight frame")
    q.add_argument("--branches", type=int, default=2)
    q.add_argument("--overlap", type=float, default=0.1)
    q.add_argument("--test-degree", type=int, default=8)
    q.set_defaults(func=cmd_frame)

    q = sub.add_parser("cuntz", help="Cuntz relations for a mirror bank")
    q.add_argument("--filter", required=True)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_cuntz)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CheckError as exc:
        print(json.dumps({"command": args.command, "verdicts": [
            {"name": f"error:{exc.code}", "passed": False,
             "message": str(exc)}]}, indent=2, sort_keys=True))
        return 2


if __name__ == "__main__":
    sys.exit(main())
