import pytest

from waybelow import codec
from waybelow.properties import RunConfig, run_properties


def test_defaults():
    assert RunConfig() == RunConfig(seed=0, case_count=200, depth=8, oracle_budget=50)


def test_zero_cases_is_a_vacuous_pass():
    report = run_properties(RunConfig(case_count=0))
    assert report["all_passed"]
    assert all(e["cases"] == 0 and e["note"].startswith("zero cases") for e in report["laws"])


def test_every_law_is_reported():
    report = run_properties(RunConfig(case_count=4, depth=3))
    names = {(e["module"], e["law"]) for e in report["laws"]}
    assert len(names) == 16
    assert {m for m, _ in names} == {"waybelow", "interpolation", "colimit"}
    assert report["all_passed"], [e for e in report["laws"] if not e["passed"]]


def test_several_seeds_pass():
    for seed in (1, 2, 3, 4, 5):
        report = run_properties(RunConfig(seed=seed, case_count=12, depth=4))
        assert report["all_passed"], (seed, [e for e in report["laws"] if not e["passed"]])


@pytest.mark.slow
def test_default_config_passes_every_law():
    report = run_properties(RunConfig())
    assert report["all_passed"], [e for e in report["laws"] if not e["passed"]]


def test_failures_carry_a_counterexample(monkeypatch):
    from waybelow import properties

    def broken(rng, cfg):
        raise properties.LawViolation("forced", {"why": "test"})

    monkeypatch.setattr(properties, "RNG_LAWS", (("waybelow", "forced", broken),))
    report = run_properties(RunConfig(case_count=3), modules=("waybelow",))
    forced = report["laws"][0]
    assert not report["all_passed"]
    assert forced["counterexample"] == {"case": 0, "reason": "forced", "instance": {"why": "test"}}


def test_same_seed_same_bytes():
    cfg = RunConfig(seed=42, case_count=5, depth=3)
    assert codec.dumps(run_properties(cfg)) == codec.dumps(run_properties(cfg))
