import json
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from bindet import verify
from bindet.verify import CheckRecord, SuiteConfig


def strip_time(records):
    return [replace(r, elapsed_ms=0) for r in records]


def test_config_expands_all():
    cfg = SuiteConfig(["all"])
    assert cfg.suites == list(verify.SUITES) and cfg.max_r == cfg.max_m


def test_config_rejects_unknown_and_bad_bounds():
    with pytest.raises(ValueError):
        SuiteConfig(["nope"])
    with pytest.raises(ValueError):
        SuiteConfig(["figures"], max_m=0)


def test_every_suite_has_tasks_with_known_checks():
    cfg = SuiteConfig(["all"], max_m=2, max_n=4)
    names = {name for name, _ in verify.suite_tasks(cfg)}
    assert names <= set(verify.CHECKS)
    for suite in verify.SUITES:
        assert verify.suite_tasks(SuiteConfig([suite], max_m=2, max_n=4)), suite


def test_empty_suite_list():
    records = verify.run_suite(SuiteConfig([], jobs=1))
    assert records == []
    assert json.loads(verify.emit_report(records)) == {"schema": 1, "checks": []}
    assert verify.all_passed(records)


def test_figures_suite_contains_the_ten():
    records = verify.run_suite(SuiteConfig(["figures"], jobs=1))
    assert verify.all_passed(records)
    det = next(r for r in records if r.check_id == "figures.determinant")
    assert det.lhs == "[10]" and det.rhs == "[10]"


def test_theorems_small_grid():
    records = verify.run_suite(SuiteConfig(["theorems"], max_m=2, jobs=1))
    ids = {r.check_id for r in records}
    assert {"formula.Krat37nice", "formula.KTConj20", "formula.Eneg1CF", "formula.ktconj21"} <= ids
    assert verify.all_passed(records)


def test_single_passing_record_report():
    rec = verify.run_check(("figures.determinant", {}))
    doc = json.loads(verify.emit_report([rec]))
    assert doc["schema"] == 1
    (c,) = doc["checks"]
    assert c["check_id"] == "figures.determinant" and c["equal"] is True and "error" not in c


def test_errors_are_captured_not_raised():
    rec = verify.run_check(("famA.zero_Es0", {"m": 1, "r": "x"}))
    assert not rec.equal and rec.error.startswith("TypeError")
    doc = json.loads(verify.emit_report([rec]))
    assert doc["checks"][0]["error"] == rec.error


def test_failing_record_fails_the_run():
    good = verify.run_check(("figures.determinant", {}))
    bad = replace(good, equal=False)
    assert not verify.all_passed([good, bad])


@given(st.lists(st.builds(
    CheckRecord,
    check_id=st.sampled_from(["a.b", "formula.E11", "x"]),
    params=st.dictionaries(st.sampled_from("mrstn"), st.integers(-5, 5)),
    lhs=st.text(max_size=12), rhs=st.text(max_size=12), equal=st.booleans(),
    elapsed_ms=st.integers(0, 10 ** 6), error=st.none() | st.text(max_size=20)), max_size=6))
def test_report_round_trip(records):
    assert verify.parse_report(verify.emit_report(records)) == records


def test_parse_rejects_other_schema():
    with pytest.raises(ValueError):
        verify.parse_report('{"schema": 2, "checks": []}')


def test_runs_are_deterministic_and_parallel_matches_sequential(tmp_path):
    cfg = dict(suites=["djd", "famA"], max_m=2, max_n=4)
    seq = verify.run_suite(SuiteConfig(**cfg, jobs=1))
    again = verify.run_suite(SuiteConfig(**cfg, jobs=1))
    par = verify.run_suite(SuiteConfig(**cfg, jobs=2, output=str(tmp_path / "r.json")))
    assert strip_time(seq) == strip_time(again) == strip_time(par)
    assert strip_time(verify.parse_report((tmp_path / "r.json").read_text())) == strip_time(par)


def test_seed_changes_random_windows():
    a = verify.suite_tasks(SuiteConfig(["djd"], seed=0))
    b = verify.suite_tasks(SuiteConfig(["djd"], seed=5))
    assert len(a) == len(b) == 50 and a != b


def test_jobs_env_override(monkeypatch):
    monkeypatch.setenv("BINDET_JOBS", "3")
    assert verify.default_jobs() == 3


@pytest.mark.parametrize("suite", ["pochhammer", "switch", "closed-forms", "triangles", "eps", "tilings"])
def test_suites_pass_on_small_grid(suite):
    records = verify.run_suite(SuiteConfig([suite], max_m=2, max_n=5, cases=20, jobs=1))
    failed = [r for r in records if not r.equal]
    assert not failed, failed[:3]
