"""Check catalog, grid expansion, parallel execution and JSON reports."""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import ansatz, closed_forms as cf, epsilon, families as fam, tilings
from .arith import MU, AffineMu, RatFuncMu, gbinom, pascal_step, pascal_sum, poch

SUITES = ("pochhammer", "figures", "switch", "djd", "famA", "closed-forms", "theorems",
          "triangles", "ansatz", "eps", "tilings")

SCHEMA = 1


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    params: dict
    lhs: str
    rhs: str
    equal: bool
    elapsed_ms: int = 0
    error: str | None = None

    def key(self) -> tuple:
        return (self.check_id, json.dumps(self.params, sort_keys=True))


@dataclass
class SuiteConfig:
    suites: list[str] = field(default_factory=list)
    max_m: int = 4
    max_r: int | None = None
    max_n: int = 9
    jobs: int | None = None
    output: str | None = None
    seed: int = 0
    cases: int = 200

    def __post_init__(self):
        if "all" in self.suites:
            self.suites = list(SUITES)
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ValueError(f"unknown suite(s): {', '.join(bad)}")
        if self.max_r is None:
            self.max_r = self.max_m
        if min(self.max_m, self.max_r, self.max_n, self.cases) < 1:
            raise ValueError("grid bounds must be >= 1")


# --------------------------------------------------------------------------
# individual checks: each returns (lhs, rhs)

CHECKS: dict[str, Callable[..., tuple]] = {}


def check(name: str):
    def deco(fn):
        CHECKS[name] = fn
        return fn
    return deco


def _affine(slope, const) -> AffineMu:
    return AffineMu(Fraction(const), Fraction(slope))


@check("pochhammer.P1")
def _p1(slope, const, b):
    # Gamma(a+b+1)/Gamma(a+b) = a+b, so (a)_{b+1} / (a)_b must be a+b
    a = _affine(slope, const)
    return poch(a, b + 1) / poch(a, b), RatFuncMu.coerce((a + b).to_poly())


@check("pochhammer.P2")
def _p2(slope, const, b):
    a = _affine(slope, const)
    return poch(a, -b), poch(a - b, b).inverse()


@check("pochhammer.P3")
def _p3(slope, const, b):
    a = _affine(slope, const)
    return poch(a, b) * poch(a + Fraction(1, 2), b) * (4 ** b), poch(a * 2, 2 * b)


@check("pochhammer.P4")
def _p4(slope, const, b, c):
    a = _affine(slope, const)
    return poch(a, b) * poch(a + b, c), poch(a, b + c)


@check("pochhammer.P5")
def _p5(slope, const, b, k):
    a = _affine(slope, const)
    return poch(a, b) / poch(a, k), poch(a + k, b - k)


@check("pochhammer.P6")
def _p6(slope, const, b):
    a = _affine(slope, const)
    return poch(-a, b), poch(a - b + 1, b) * (-1) ** b


@check("pochhammer.P7")
def _p7(slope, const, b, k):
    a = _affine(slope, const)
    lhs = rhs = RatFuncMu.coerce(1)
    for i in range(b):
        lhs = lhs * poch(a + i, k)
    for i in range(k):
        rhs = rhs * poch(a + i, b)
    return lhs, rhs


@check("pochhammer.P8")
def _p8(slope, const, b, k):
    a = _affine(slope, const)
    lhs = RatFuncMu.coerce(1)
    for i in range(k):
        lhs = lhs * poch(a + i * b, b)
    return lhs, poch(a, k * b)


@check("pochhammer.pascal")
def _pascal(const, y):
    up, same, down = pascal_step(MU + Fraction(const), y)
    return up - same, down


@check("pochhammer.pascalsum")
def _pascalsum(const, y, j):
    x = MU + Fraction(const)
    return pascal_sum(x, y, j), gbinom(x + j, y + j - 1) - gbinom(x, y - 1)


@check("pochhammer.CancelPoch")
def _cancel(m):
    return cf.cancel_poch_sides(m)


@check("figures.determinant")
def _fig_det():
    return fam.determinant(fam.FamilySpec("E", 2, 1, 2)).evaluate(2), 10


@check("figures.sum_of_minors")
def _fig_som():
    return fam.sum_of_minors(fam.FamilySpec("E", 2, 1, 2)), fam.determinant(fam.FamilySpec("E", 2, 1, 2))


@check("figures.cyclic_count")
def _fig_cyc():
    return tilings.cyclic_tiling_count("E", 2, 1, 2, 2).value, 10


@check("figures.lgv")
def _fig_lgv(rows, cols, expected):
    p = tilings.PathProblem.minor(2, 2, 1, 2, tuple(rows), tuple(cols))
    return tilings.lgv_count(p).value, expected


@check("figures.enumerate")
def _fig_enum(rows, cols, expected):
    p = tilings.PathProblem.minor(2, 2, 1, 2, tuple(rows), tuple(cols))
    return len(tilings.enumerate_paths(p)), expected


@check("switch.determinant")
def _switch_det(family, s, t, n):
    return fam.determinant(fam.FamilySpec(family, s, t, n)), fam.switched_determinant(family, s, t, n)


@check("switch.factor_diag")
def _switch_fd(family, s, t, n):
    return fam.factor_diag_mismatches(family, s, t, n), 0


@check("switch.uv")
def _switch_uv(s, t, n):
    sv = fam.switch_vectors(s, t, n)
    return int(fam.uv1_holds(sv)) + int(fam.uv2_holds(sv)), 2


@check("djd.window")
def _djd(family, s, t, n):
    return fam.djd_sides(family, s, t, n)


@check("famA.E")
def _fama_e(s, n):
    return (fam.determinant(fam.FamilySpec("E", s, 0, n)),
            fam.determinant(fam.FamilySpec("D", s - 1, 0, n - 1, MU + 3)))


@check("famA.D")
def _fama_d(s, n):
    return (fam.determinant(fam.FamilySpec("D", s, 0, n)),
            fam.determinant(fam.FamilySpec("E", s - 1, 0, n - 1, MU + 3)))


@check("famA.zero_E00")
def _zero_e00(m):
    return fam.determinant(fam.FamilySpec("E", 0, 0, 2 * m - 1)), 0


@check("famA.zero_Es0")
def _zero_es0(m, r):
    return fam.determinant(fam.FamilySpec("E", 2 * r, 0, 2 * m - 1)), 0


@check("formula")
def _formula(fid, **p):
    return cf.closed_form(fid, **p), cf.target_value(fid, **p)


@check("theorems.Krat37ugly_switch")
def _ugly(m, r):
    return cf.cf_Krat37ugly(m, r), cf.krat37_switch_prefactor(m, r) * cf.cf_Krat37nice(m, r)


@check("triangles.nonzero")
def _nonzero(family, s, t, n):
    return int(bool(fam.determinant(fam.FamilySpec(family, s, t, n)))), 1


@check("ansatz.identity")
def _ansatz_identity(identity, s, n):
    res = ansatz.verify_ansatz_identity(identity, s, n)
    return res.lhs, res.rhs


@check("ansatz.guess")
def _ansatz_guess(s, mu, max_n, holdout):
    rec = ansatz.guess_sys1_recurrence(s, Fraction(mu), max_n, tuple(holdout))
    return int(rec is not None), 1


@check("eps.limit")
def _eps_limit(target, m, r=0):
    spec = epsilon.EpsLimitSpec.from_mr(target, m, r)
    return epsilon.eps_limit_ratio(spec), epsilon.expected_limit(spec)


@check("eps.structural")
def _eps_struct(s, n):
    return int(epsilon.eps_leading_coefficient_check(s, n)), 1


@check("eps.chain")
def _eps_chain(m, r):
    return epsilon.chained_eneg1_ratio(m, r), epsilon.direct_eneg1_ratio(m, r)


@check("tilings.lgv_vs_enumeration")
def _til_enum(mu, s, t, n, rows, cols):
    p = tilings.PathProblem.minor(mu, s, t, n, tuple(rows), tuple(cols))
    c = tilings.lgv_count(p).value
    if c > 5000:
        return c, c
    return len(tilings.enumerate_paths(p, 5000)), c


@check("tilings.cyclic_vs_det")
def _til_cyc(family, s, t, n, mu):
    return (tilings.cyclic_tiling_count(family, s, t, n, mu).value,
            fam.determinant(fam.FamilySpec(family, s, t, n)).evaluate(mu))


@check("tilings.positive")
def _til_pos(family, s, t, n, mu):
    return int(tilings.cyclic_tiling_count(family, s, t, n, mu).value > 0), 1


@check("tilings.famA_region")
def _til_region(s, n, mu):
    a = tilings.build_region(s, 0, n, mu).reduced
    b = tilings.build_region(s - 1, 0, n - 1, mu + 3).reduced
    return int(a == b), 1


# --------------------------------------------------------------------------
# suites: expand a config into (check_name, params) tasks


def _random_poch_cases(rng: random.Random, count: int):
    slopes = [1, -1, 2, Fraction(1, 2), -2, Fraction(-1, 2), 3]
    for _ in range(count):
        slope = rng.choice(slopes)
        const = Fraction(rng.randint(-24, 24), rng.choice([1, 1, 2, 3]))
        yield str(slope), str(const)


def _tasks_pochhammer(cfg: SuiteConfig):
    rng = random.Random(cfg.seed)
    out = []
    for pid in ("P1", "P2", "P3", "P6"):
        for slope, const in _random_poch_cases(rng, cfg.cases):
            out.append((f"pochhammer.{pid}", dict(slope=slope, const=const, b=rng.randint(0, 12))))
    for pid in ("P4", "P5"):
        for slope, const in _random_poch_cases(rng, cfg.cases):
            key = "c" if pid == "P4" else "k"
            out.append((f"pochhammer.{pid}", dict(slope=slope, const=const, b=rng.randint(-12, 12),
                                                  **{key: rng.randint(-12, 12)})))
    for pid in ("P7", "P8"):
        for slope, const in _random_poch_cases(rng, cfg.cases):
            out.append((f"pochhammer.{pid}", dict(slope=slope, const=const, b=rng.randint(0, 6),
                                                  k=rng.randint(0, 6))))
    for y in range(-10, 11):
        for const in range(-5, 5):
            out.append(("pochhammer.pascal", dict(const=str(const), y=y)))
    for y in range(-10, 11):
        for j in range(1, 11):
            out.append(("pochhammer.pascalsum", dict(const=str(j - 5), y=y, j=j)))
    out += [("pochhammer.CancelPoch", dict(m=m)) for m in range(1, max(cfg.max_m, 10) + 1)]
    return out


def _tasks_figures(cfg):
    return [("figures.determinant", {}), ("figures.sum_of_minors", {}), ("figures.cyclic_count", {}),
            ("figures.lgv", dict(rows=[], cols=[], expected=6)),
            ("figures.lgv", dict(rows=[1], cols=[2], expected=4)),
            ("figures.enumerate", dict(rows=[], cols=[], expected=6)),
            ("figures.enumerate", dict(rows=[1], cols=[2], expected=4))]


def _tasks_switch(cfg):
    out = []
    for family in ("D", "E"):
        for t in range(1, 5):
            for s in range(0, t):
                for n in range(1, min(cfg.max_n, 7) + 1):
                    out.append(("switch.determinant", dict(family=family, s=s, t=t, n=n)))
                for n in range(1, min(cfg.max_n, 5) + 1):
                    out.append(("switch.factor_diag", dict(family=family, s=s, t=t, n=n)))
    for t in range(0, 5):
        for s in range(0, t + 1):
            for n in range(1, 6):
                out.append(("switch.uv", dict(s=s, t=t, n=n)))
    return out


def _tasks_djd(cfg):
    rng = random.Random(cfg.seed + 1)
    out = []
    for _ in range(50):
        out.append(("djd.window", dict(family=rng.choice("DEB"), s=rng.randint(-2, 4),
                                       t=rng.randint(-2, 4), n=rng.randint(2, 6))))
    return out


def _tasks_famA(cfg):
    out = []
    for n in range(2, min(cfg.max_n, 8) + 1):
        for s in range(1, n + 1):
            out.append(("famA.E", dict(s=s, n=n)))
            out.append(("famA.D", dict(s=s, n=n)))
    for m in range(1, cfg.max_m + 1):
        out.append(("famA.zero_E00", dict(m=m)))
        for r in range(0, m):
            out.append(("famA.zero_Es0", dict(m=m, r=r)))
    return out


def _formula_tasks(fids, cfg, max_m=None):
    out = []
    for fid in fids:
        for p in cf.REGISTRY[fid].grid(max_m or cfg.max_m, cfg.max_r, min(cfg.max_n, 6)):
            out.append(("formula", dict(fid=fid, **p)))
    return out


def _tasks_closed_forms(cfg):
    fids = ["detwithnoKD", "E11", "Es0_2r_even_zero", "Es0_2r_even", "Es0_2r+1_odd", "Es0_2r+1_even"]
    return _formula_tasks(fids, cfg)


def _tasks_theorems(cfg):
    fids = ["Krat37nice", "KTConj20", "Eneg1CF", "ktconj21", "biglemma1_a", "biglemma1_b",
            "KTConj24_map_D", "KTConj24_map_E"]
    out = _formula_tasks(fids, cfg)
    out += _formula_tasks(["EDCor1", "EDCor2"], cfg, max_m=max(cfg.max_m, 6))
    for p in cf.REGISTRY["Krat37ugly"].grid(cfg.max_m, cfg.max_r):
        out.append(("theorems.Krat37ugly_switch", p))
    return out


def _tasks_triangles(cfg):
    fids = [k for k in cf.REGISTRY if k.startswith("triangle")]
    out = _formula_tasks(fids, cfg)
    for m in range(1, cfg.max_m + 1):
        for r in range(1, min(m, cfg.max_r) + 1):
            for n in range(2 * r - 1, 2 * m + 2):
                if n >= 1:
                    out.append(("triangles.nonzero", dict(family="E", s=2 * r, t=1, n=n)))
                    out.append(("triangles.nonzero", dict(family="D", s=2 * r - 1, t=1, n=n)))
            for n in range(2 * r + 1, 2 * m + 2):
                out.append(("triangles.nonzero", dict(family="E", s=-1, t=2 * r, n=n)))
                out.append(("triangles.nonzero", dict(family="D", s=-1, t=2 * r + 1, n=n)))
    return out


def _tasks_ansatz(cfg):
    out = []
    top = 2 * cfg.max_m + 1
    for s in range(2, top + 1):
        for n in range(s, top + 1, 2):
            out.append(("ansatz.identity", dict(identity="biglemma1", s=s, n=n)))
            if n > s:
                out.append(("ansatz.identity", dict(identity="biglemma2", s=s, n=n)))
                out.append(("ansatz.identity", dict(identity="appendix", s=s, n=n)))
    out.append(("ansatz.identity", dict(identity="biglemma2", s=1, n=3)))
    for m in range(1, cfg.max_m + 1):
        out.append(("ansatz.identity", dict(identity="quoED1", s=1, n=2 * m + 1)))
    out.append(("ansatz.guess", dict(s=2, mu="7", max_n=20, holdout=[21, 22])))
    return out


def _tasks_eps(cfg):
    out = []
    for m in range(1, cfg.max_m + 1):
        for r in range(0, min(m, cfg.max_r + 1)):
            if r >= 1:
                out.append(("eps.limit", dict(target="biglemma2_a", m=m, r=r)))
            out.append(("eps.limit", dict(target="biglemma2_b", m=m, r=r)))
            if r >= 1:
                out.append(("eps.chain", dict(m=m, r=r)))
        out.append(("eps.limit", dict(target="quoED1", m=m)))
    for s in range(1, 2 * cfg.max_m):
        for n in range(s + 2, 2 * cfg.max_m + 1, 2):
            out.append(("eps.structural", dict(s=s, n=n)))
    return out


def _tasks_tilings(cfg):
    from itertools import combinations
    out = []
    for s in range(0, 4):
        for t in range(0, 4):
            for n in range(1, 4):
                for mu in range(max(2 - s, 0), 6):
                    for k in range(0, n + 1):
                        for rows in combinations(range(1, n + 1), k):
                            for cols in combinations(range(1, n + 1), k):
                                out.append(("tilings.lgv_vs_enumeration",
                                            dict(mu=mu, s=s, t=t, n=n, rows=list(rows), cols=list(cols))))
    for family in ("D", "E"):
        for s in range(0, 4):
            for t in range(0, s + 1):
                for n in range(1, min(cfg.max_n, 6) + 1):
                    for mu in range(2 - s, 7):
                        out.append(("tilings.cyclic_vs_det", dict(family=family, s=s, t=t, n=n, mu=mu)))
    for r in range(1, 3):
        for n in range(2 * r - 1, 7):
            for mu in range(2, 5):
                out.append(("tilings.positive", dict(family="E", s=2 * r, t=1, n=n, mu=mu)))
                out.append(("tilings.positive", dict(family="D", s=2 * r - 1, t=1, n=n, mu=mu)))
    for s in range(1, 7):
        for n in range(max(s, 2), 7):
            for mu in range(2 - s, 6):
                out.append(("tilings.famA_region", dict(s=s, n=n, mu=mu)))
    return out


SUITE_TASKS = {
    "pochhammer": _tasks_pochhammer, "figures": _tasks_figures, "switch": _tasks_switch,
    "djd": _tasks_djd, "famA": _tasks_famA, "closed-forms": _tasks_closed_forms,
    "theorems": _tasks_theorems, "triangles": _tasks_triangles, "ansatz": _tasks_ansatz,
    "eps": _tasks_eps, "tilings": _tasks_tilings,
}


def suite_tasks(cfg: SuiteConfig) -> list[tuple[str, dict]]:
    out = []
    for name in cfg.suites:
        out.extend(SUITE_TASKS[name](cfg))
    return out


# --------------------------------------------------------------------------
# execution


def serialize(x) -> str:
    if isinstance(x, (RatFuncMu,)):
        return x.canonical()
    return RatFuncMu.coerce(x).canonical()


def _equal(lhs, rhs) -> bool:
    return RatFuncMu.coerce(lhs) == RatFuncMu.coerce(rhs)


def run_check(task: tuple[str, dict]) -> CheckRecord:
    name, params = task
    check_id = f"formula.{params['fid']}" if name == "formula" else name
    t0 = time.perf_counter()
    try:
        lhs, rhs = CHECKS[name](**params)
        rec = dict(lhs=serialize(lhs), rhs=serialize(rhs), equal=_equal(lhs, rhs), error=None)
    except Exception as exc:  # continue-on-failure: the report carries the error
        rec = dict(lhs="", rhs="", equal=False, error=f"{type(exc).__name__}: {exc}")
    ms = int((time.perf_counter() - t0) * 1000)
    return CheckRecord(check_id, params, elapsed_ms=ms, **rec)


def default_jobs() -> int:
    env = os.environ.get("BINDET_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_suite(cfg: SuiteConfig) -> list[CheckRecord]:
    tasks = suite_tasks(cfg)
    jobs = cfg.jobs or default_jobs()
    if jobs <= 1 or len(tasks) <= 1:
        records = [run_check(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_check, tasks, chunksize=4))
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(emit_report(records))
    return records


def emit_report(records) -> str:
    checks = []
    for r in records:
        d = asdict(r)
        if d["error"] is None:
            del d["error"]
        checks.append(d)
    return json.dumps({"schema": SCHEMA, "checks": checks}, sort_keys=True, indent=1) + "\n"


def parse_report(text: str) -> list[CheckRecord]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
    return [CheckRecord(**c) for c in doc["checks"]]


def all_passed(records) -> bool:
    return all(r.equal for r in records)
