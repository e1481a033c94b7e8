import pytest

from fundlog.suites import SUITES, RunConfig, run_suite

SMALL = RunConfig(max_frame_size=2, max_lattice_size=3, samples=10)


def _stable(report):
    return {k: v for k, v in report.items() if k != "timings"}


def test_report_shape():
    rep = run_suite("facts24", SMALL)
    assert list(rep) == ["suite", "description", "ok", "bounds", "config", "checks", "timings"]
    assert rep["bounds"] == {"max_frame_size": 2}
    for check in rep["checks"].values():
        assert list(check) == ["ok", "instances", "failures", "witnesses"]
    assert list(rep["checks"]) == sorted(rep["checks"])


@pytest.mark.parametrize("name", [n for n in SUITES if n != "lemma58"])
def test_small_runs_pass(name):
    rep = run_suite(name, SMALL)
    assert rep["ok"], rep["checks"]
    assert all(c["instances"] > 0 for c in rep["checks"].values()) or name == "soundness"


def test_modal_canonical_suite_is_red_at_small_bounds():
    rep = run_suite("lemma58", SMALL)
    assert not rep["ok"]
    assert rep["checks"]["box_pi"]["witnesses"]


def test_runs_are_deterministic_across_workers():
    for name in ("facts24", "lemma39", "soundness"):
        one = run_suite(name, SMALL)
        again = run_suite(name, SMALL)
        two = run_suite(name, RunConfig(max_frame_size=2, max_lattice_size=3, samples=10, workers=2))
        assert _stable(one) == _stable(again) == _stable(two)


def test_bad_bounds():
    with pytest.raises(ValueError):
        RunConfig(max_frame_size=0)
    with pytest.raises(KeyError):
        run_suite("nosuch")
