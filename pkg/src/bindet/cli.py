"""Command-line interface: ``bindet <command> ...``."""

from __future__ import annotations

import argparse
import re
import sys

from . import ansatz, closed_forms, epsilon, tilings, verify
from .arith import MU, AffineMu, parse_rational
from .families import FamilySpec, build_matrix, determinant


_TERM = re.compile(r"([+-]?)([^+-]*)")


def _mu(text: str | None):
    """Parse "mu", "mu+3", "1-mu-12", "2*mu+1/2" style affine substitutions."""
    if text is None:
        return MU
    slope, const = 0, 0
    for sign, body in _TERM.findall(text.replace(" ", "")):
        if not body:
            continue
        k = -1 if sign == "-" else 1
        if body.endswith("mu"):
            coef = body[:-2].rstrip("*")
            slope += k * (parse_rational(coef) if coef else 1)
        else:
            const += k * parse_rational(body)
    return AffineMu(const, slope)


def _cmd_det(a) -> int:
    spec = FamilySpec(a.family, a.s, a.t, a.n, _mu(a.mu))
    if a.matrix:
        print(build_matrix(spec))
    val = determinant(spec)
    if a.at is not None:
        print(val.evaluate(parse_rational(a.at)))
    else:
        print(val.canonical() if a.canonical else val)
    return 0


def _cmd_closed_form(a) -> int:
    params = {k: v for k, v in (("m", a.m), ("r", a.r), ("s", a.s), ("t", a.t), ("n", a.n)) if v is not None}
    if a.list:
        for fid, f in closed_forms.REGISTRY.items():
            print(f"{fid}({', '.join(f.params)})  [{f.condition_text}]")
        return 0
    formula = closed_forms.REGISTRY.get(a.id)
    if formula is None:
        print(f"unknown formula id {a.id!r}; try --list", file=sys.stderr)
        return 2
    if formula.expr is not None and not a.expand:
        print(formula.expr(**formula.check_params(**params)))
    else:
        print(closed_forms.closed_form(a.id, **params))
    if a.check:
        ok = closed_forms.closed_form(a.id, **params) == closed_forms.target_value(a.id, **params)
        print("equal" if ok else "MISMATCH")
        return 0 if ok else 1
    return 0


def _cmd_verify(a) -> int:
    cfg = verify.SuiteConfig(a.suite, max_m=a.max_m, max_r=a.max_r, max_n=a.max_n,
                             jobs=a.jobs, output=a.report, seed=a.seed)
    records = verify.run_suite(cfg)
    failed = [r for r in records if not r.equal]
    for r in failed:
        print(f"FAIL {r.check_id} {r.params} {r.error or ''}".rstrip())
    print(f"{len(records) - len(failed)}/{len(records)} checks passed")
    return 1 if failed else 0


def _cmd_ansatz(a) -> int:
    if a.action == "solve":
        c = ansatz.solve_cofactor_system(a.system, a.s, a.n)
        for i, v in enumerate(c.values, start=c.offset):
            print(f"c[{a.n},{i}] = {v}")
        return 0
    if a.action == "verify":
        res = ansatz.verify_ansatz_identity(a.identity, a.s, a.n)
        print(f"{a.identity} s={a.s} n={a.n}: {'holds' if res.holds else 'FAILS'}")
        if not res.holds:
            print(f"residual {res.residual}")
        return 0 if res.holds else 1
    mu = parse_rational(a.mu)
    table = ansatz.sys1_numeric_table(a.s, mu, max([a.max_n, *a.holdout]))
    train = {key: v for key, v in table.items() if key[0] <= a.max_n}
    held = {key: v for key, v in table.items() if key[0] in a.holdout}
    parity = {"even": 0, "odd": 1, "all": None}[a.parity]
    if parity is not None:
        held = {key: v for key, v in held.items() if key[0] % 2 == parity}
    support = None
    if a.support:
        na, kb = (int(x) for x in a.support.lower().split("x"))
        support = tuple((x, y) for x in range(na) for y in range(kb))
    degrees = None
    if a.degree:
        parts = [int(x) for x in a.degree.split(",")]
        degrees = ansatz.DegreeBounds(*parts) if len(parts) > 1 else ansatz.DegreeBounds(parts[0], parts[0], parts[0])
    rec = ansatz.guess_recurrence(train, held or None, support=support, degrees=degrees, parity=parity)
    if rec is None:
        print("no recurrence found")
        return 1
    print(f"support {list(rec.support)} step {rec.step} degrees {rec.degrees}")
    print(f"training equations {rec.training_points}, held-out equations {rec.validated_points}")
    print(rec)
    return 0


def _cmd_eps(a) -> int:
    spec = epsilon.EpsLimitSpec.from_mr(a.target, a.m, a.r)
    val = epsilon.eps_limit_ratio(spec)
    print(val)
    if a.check:
        ok = val == epsilon.expected_limit(spec)
        print("equal" if ok else "MISMATCH")
        return 0 if ok else 1
    return 0


def _cmd_tilings(a) -> int:
    if a.action == "count":
        c = tilings.cyclic_tiling_count(a.family, a.s, a.t, a.n, a.mu)
        print(f"{c.value} ({'signed' if c.weighted else 'unweighted'})")
        return 0
    if a.action == "enumerate":
        p = tilings.PathProblem.minor(a.mu, a.s, a.t, a.n, tuple(a.rows), tuple(a.cols))
        found = tilings.enumerate_paths(p, a.cap)
        for tup in found:
            print(" | ".join("->".join(f"({x},{y})" for x, y in path) for path in tup))
        print(f"{len(found)} path tuples (LGV {tilings.lgv_count(p).value})")
        return 0
    region = tilings.build_region(a.s, a.t, a.n, a.mu)
    overlay = None
    if a.with_paths:
        p = tilings.PathProblem(a.mu, max(a.s, a.t), min(a.s, a.t), a.n)
        overlay = next(tilings.iter_paths(p), None)
    with open(a.out, "w", encoding="utf-8") as fh:
        fh.write(tilings.render_svg(region, overlay))
    print(f"wrote {a.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bindet", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("det", help="determinant of a family matrix")
    p.add_argument("--family", choices="DEB", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", help='affine substitution for mu, e.g. "mu+3"')
    p.add_argument("--at", help="evaluate at this rational mu")
    p.add_argument("--matrix", action="store_true", help="print the matrix too")
    p.add_argument("--canonical", action="store_true", help="ascending coefficient list")
    p.set_defaults(fn=_cmd_det)

    p = sub.add_parser("closed-form", help="evaluate a registered closed form")
    p.add_argument("--id")
    p.add_argument("--list", action="store_true")
    for name in ("m", "r", "s", "t", "n"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--expand", action="store_true", help="print as a rational function")
    p.add_argument("--check", action="store_true", help="compare with the direct determinant side")
    p.set_defaults(fn=_cmd_closed_form)

    p = sub.add_parser("verify", help="run check suites")
    p.add_argument("--suite", nargs="*", default=["all"], choices=list(verify.SUITES) + ["all"])
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--max-r", type=int)
    p.add_argument("--max-n", type=int, default=9)
    p.add_argument("--report")
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("ansatz", help="cofactor systems, identities, guessing")
    asub = p.add_subparsers(dest="action", required=True)
    q = asub.add_parser("solve")
    q.add_argument("--system", choices=ansatz.SYSTEMS, default="sys1")
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q = asub.add_parser("verify")
    q.add_argument("--identity", choices=sorted(ansatz.IDENTITIES), required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q = asub.add_parser("guess")
    q.add_argument("--system", choices=["sys1"], default="sys1")
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--mu", default="7")
    q.add_argument("--max-n", type=int, default=20)
    q.add_argument("--holdout", type=int, nargs="*", default=[])
    q.add_argument("--parity", choices=["even", "odd", "all"], default="even")
    q.add_argument("--support", help="AxB: n-shifts 0..A-1 times k-shifts 0..B-1")
    q.add_argument("--degree", help='"D" or "DN,DK[,TOTAL]"')
    p.set_defaults(fn=_cmd_ansatz)

    p = sub.add_parser("eps-limit", help="exact eps-limit ratios")
    p.add_argument("--target", choices=epsilon.TARGETS, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_eps)

    p = sub.add_parser("tilings", help="lattice paths and regions")
    tsub = p.add_subparsers(dest="action", required=True)
    for action in ("count", "enumerate", "svg"):
        q = tsub.add_parser(action)
        if action == "count":
            q.add_argument("--family", choices="DE", required=True)
        q.add_argument("--s", type=int, required=True)
        q.add_argument("--t", type=int, required=True)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--mu", type=int, required=True)
        if action == "enumerate":
            q.add_argument("--rows", type=int, nargs="*", default=[], help="deleted rows")
            q.add_argument("--cols", type=int, nargs="*", default=[], help="deleted columns")
            q.add_argument("--cap", type=int, default=5000)
        if action == "svg":
            q.add_argument("--out", required=True)
            q.add_argument("--with-paths", action="store_true")
    p.set_defaults(fn=_cmd_tilings)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
