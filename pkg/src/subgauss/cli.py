"""Command-line entry point: ``subgauss {dist,moments,norms,extrema,sample,verify}``.

Exit codes: 0 success, 1 failed verify check, 2 invalid parameters, 3 enumeration
over budget, 4 closed-form check requested for an inapplicable case without --force.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import extremal, moments, norms, sampler
from .core import DEFAULT_EPS, Params, Pmf, RangeError
from .exact_dist import BudgetExceeded, EnumerationBudget, bernoulli_pmf, subset_pmf
from .verify import ALL_CHECKS, run_verify

EXIT_FAIL, EXIT_PARAMS, EXIT_BUDGET, EXIT_INAPPLICABLE = 1, 2, 3, 4
TOL = 1e-9


class Inapplicable(Exception):
    pass


def _clean(obj):
    """Make an object JSON-safe: complex -> [re, im], NaN/inf -> None, big ints -> strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if hasattr(obj, "item"):
        return _clean(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(_clean(obj), sort_keys=True, indent=1, allow_nan=False) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def pmf_rows(x: Pmf) -> list[dict]:
    return [
        {"re": a.re, "im": a.im, "count": str(a.count), "total": str(x.total), "probability": a.count / x.total}
        for a in x.atoms
    ]


def pmf_csv(x: Pmf) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "count", "total", "probability"])
    for r in pmf_rows(x):
        w.writerow([repr(r["re"]), repr(r["im"]), r["count"], r["total"], repr(r["probability"])])
    return buf.getvalue()


def _params(args) -> Params:
    return Params(args.N, args.l, args.m)


def _budget() -> EnumerationBudget:
    return EnumerationBudget.from_env()


def _pmf(args, p: Params) -> Pmf:
    eps = getattr(args, "epsilon", DEFAULT_EPS)
    if getattr(args, "model", "subset") == "bernoulli":
        return bernoulli_pmf(p, eps, _budget())
    return subset_pmf(p, eps, _budget())


def cmd_dist(args) -> int:
    p = _params(args)
    x = _pmf(args, p)
    if args.format == "csv":
        _emit(pmf_csv(x), args.out)
    else:
        doc = {
            "params": p.as_dict(),
            "model": args.model,
            "epsilon": x.grouping_epsilon,
            "total": str(x.total),
            "atoms": pmf_rows(x),
        }
        _emit(dumps(doc), args.out)
    return 0


def cmd_moments(args) -> int:
    p = _params(args)
    if p.l == 0 and not args.force:
        raise Inapplicable("closed forms need l >= 1 (use --force to report raw moments)")
    x = _pmf(args, p)
    rep = moments.moment_report(x, args.kmax)
    bern = args.model == "bernoulli"
    var_closed = moments.bernoulli_variance_closed(p) if bern else moments.subset_variance_closed(p)
    part_closed = var_closed / 2
    doc = {
        "params": p.as_dict(),
        "model": args.model,
        "mean": rep.mean,
        "var": rep.var,
        "second_abs_moment": rep.second_abs_moment,
        "u_second": rep.u_second,
        "v_second": rep.v_second,
        "kth": [{"k": k, "mu": mu} for k, mu in rep.kth],
    }
    mean_id, var_id, part_id = ("eq7", "eq8", "eq9") if bern else ("eq4", "eq5", "eq6")
    if p.l >= 1:
        doc[f"{mean_id}_pass"] = abs(rep.mean) <= TOL
        doc[f"{var_id}_closed"] = var_closed
        doc[f"{var_id}_pass"] = abs(rep.var - var_closed) <= TOL
        if p.halfN:
            doc[f"{part_id}_skip"] = "N=2l"
        else:
            doc[f"{part_id}_closed"] = part_closed
            doc[f"{part_id}_pass"] = abs(rep.u_second - part_closed) <= TOL and abs(rep.v_second - part_closed) <= TOL
    _emit(dumps(doc), args.out)
    return 0


def _bracket_dict(br) -> dict:
    return {
        "check_id": br.check_id,
        "value": br.value,
        "lower": br.lower,
        "upper": br.upper,
        "lower_ref": br.lower_ref,
        "upper_ref": br.upper_ref,
        "satisfied": None if br.skipped else br.satisfied,
        "skip": br.skip,
    }


def cmd_norms(args) -> int:
    p = _params(args)
    if args.mode == "imag" and p.l == 0 and not args.force:
        raise Inapplicable("imaginary-part bounds need l >= 1 (use --force)")
    x = _pmf(args, p)
    value = norms.psi2_norm(x, args.mode)
    doc = {
        "params": p.as_dict(),
        "mode": args.mode,
        "psi2": value,
        "psi2_residual": norms.psi2_residual(x, value, args.mode) if value > 0 else 0.0,
        "psi2_prime": norms.psi2_prime_norm(x, args.mode, args.p_max),
        "sup_norm": float(norms._magnitudes(x.values, args.mode).max()),
        "exp_moment_brackets": [_bracket_dict(b) for b in norms.check_exp_moment_bounds(p, x)],
        "psi2_brackets": [_bracket_dict(b) for b in norms.check_psi2_brackets(p, x)],
    }
    _emit(dumps(doc), args.out)
    return 0


def _extrema_dict(r) -> dict:
    return {"m1": r.m1, "m2": r.m2, "sup_norm": r.sup_norm, "case": r.case_tag}


def cmd_extrema(args) -> int:
    p = _params(args)
    x = subset_pmf(p, args.epsilon, _budget())
    doc = {
        "params": p.as_dict(),
        "u_brute": _extrema_dict(extremal.brute_force_extrema(x, "real")),
        "v_brute": _extrema_dict(extremal.brute_force_extrema(x, "imag")),
    }
    try:
        u = extremal.u_extrema_closed_form(p)
        v = extremal.v_extrema_closed_form(p)
    except extremal.NotCoprime as exc:
        if not args.force:
            raise Inapplicable(str(exc)) from exc
        doc["closed_form_skip"] = "gcd!=1" if p.l else "l=0"
    else:
        ub, vb = doc["u_brute"], doc["v_brute"]
        doc["u"] = _extrema_dict(u)
        doc["v"] = _extrema_dict(v)
        doc["oracle_match"] = all(
            abs(a - b) <= TOL for a, b in ((u.m1, ub["m1"]), (u.m2, ub["m2"]), (v.m1, vb["m1"]), (v.m2, vb["m2"]))
        )
        doc["refined_upper"] = {t: extremal.refined_psi2_upper(p, t) for t in ("U", "V", "X")}
    _emit(dumps(doc), args.out)
    return 0


def cmd_sample(args) -> int:
    p = _params(args)
    cfg = sampler.McConfig(args.samples, args.seed, args.ci_level)
    est = (sampler.sample_bernoulli_model if args.model == "bernoulli" else sampler.sample_subset_model)(p, cfg)
    doc = {
        "params": p.as_dict(),
        "model": args.model,
        "generator": est.generator,
        "seed": args.seed,
        "n_samples": est.n_samples,
        "ci_level": args.ci_level,
        "mean": est.mean,
        "second_abs": est.second_abs,
        "u_second": est.u_second,
        "v_second": est.v_second,
        "half_widths": est.half_widths,
    }
    if p.l >= 1:
        closed = moments.bernoulli_variance_closed(p) if args.model == "bernoulli" else moments.subset_variance_closed(p)
        key = "eq8" if args.model == "bernoulli" else "eq5"
        doc[f"{key}_closed"] = closed
        doc[f"{key}_pass"] = abs(est.second_abs - closed) <= est.half_widths["second_abs"]
    _emit(dumps(doc), args.out)
    return 0


def report_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "l", "m", "check_id", "paper_eq", "lhs", "rhs", "tolerance", "pass", "skip"])
    for c in report.cases:
        d = c.to_dict()
        prm = d["params"] or {}
        w.writerow([
            prm.get("N", ""), prm.get("l", ""), prm.get("m", ""),
            d["check_id"], d["paper_eq"],
            json.dumps(_clean(d["lhs"]), sort_keys=True), json.dumps(_clean(d["rhs"]), sort_keys=True),
            repr(d["tolerance"]), "" if d["pass"] is None else str(d["pass"]).lower(), d["skip"] or "",
        ])
    return buf.getvalue()


def cmd_verify(args) -> int:
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    report = run_verify(args.Nmax, checks, _budget())
    text = report_csv(report) if args.format == "csv" else dumps(report.to_dict())
    _emit(text, args.out)
    for check_id, s in sorted(report.summary.items()):
        print(f"{check_id:14s} pass={s['pass']:5d} fail={s['fail']:3d} skip={s['skip']:4d}", file=sys.stderr)
    for c in report.findings:
        print(f"finding: {c.check_id} at {c.params}: {c.lhs} vs {c.rhs}", file=sys.stderr)
    return 0 if report.ok else EXIT_FAIL


def _add_params(sp):
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subgauss", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("dist", help="exact distribution of X_l(m,N)")
    _add_params(sp)
    sp.add_argument("--model", choices=("subset", "bernoulli"), default="subset")
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPS)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("moments", help="moments with closed-form comparisons")
    _add_params(sp)
    sp.add_argument("--model", choices=("subset", "bernoulli"), default="subset")
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPS)
    sp.add_argument("--kmax", type=int, default=8)
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("norms", help="sub-Gaussian norms and their brackets")
    _add_params(sp)
    sp.add_argument("--model", choices=("subset", "bernoulli"), default="subset")
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPS)
    sp.add_argument("--mode", choices=norms.MODES, default="abs")
    sp.add_argument("--p-max", type=int, default=256)
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_norms)

    sp = sub.add_parser("extrema", help="closed-form extremes of U and V against enumeration")
    _add_params(sp)
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPS)
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_extrema)

    sp = sub.add_parser("sample", help="Monte-Carlo moment estimates")
    _add_params(sp)
    sp.add_argument("--model", choices=("subset", "bernoulli"), default="subset")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ci-level", type=float, default=0.99)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="sweep every check over the (N, l, m) grid")
    sp.add_argument("--Nmax", type=int, default=12)
    sp.add_argument("--checks", default=None, help=f"comma-separated subset of: {','.join(ALL_CHECKS)}")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RangeError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except BudgetExceeded as exc:
        print(f"{exc}; try `subgauss sample` instead", file=sys.stderr)
        return EXIT_BUDGET
    except Inapplicable as exc:
        print(f"inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
