import random

from wdbound.check import (
    OracleResult,
    _timed,
    oracle_euler,
    oracle_ratio,
    oracle_volume,
    random_config,
    run_check,
    trial_division_irreducible,
    volume_config_grid,
)
from wdbound.ff_poly import parse_poly


def test_volume_grid_spans_the_required_range():
    specs = volume_config_grid()
    assert len(specs) >= 20
    assert {s.q for s in specs} == {2, 3, 4}
    assert {s.d for s in specs} == {2, 3, 4}
    assert all(1 <= len(s.support) <= 4 for s in specs)
    assert any({x.deg for x in s.support} == {1, 2} for s in specs)
    assert any(all(x.deg == 2 for x in s.support) for s in specs)


def test_random_configs_are_seeded_and_valid():
    a = [random_config(random.Random(7)) for _ in range(3)]
    b = [random_config(random.Random(7)) for _ in range(3)]
    assert a == b
    assert {c.d for c in [random_config(random.Random(s)) for s in range(30)]} == {2, 3, 4}


def test_trial_division_agrees_on_examples():
    assert trial_division_irreducible(parse_poly("T^2+T+1", 2))
    assert not trial_division_irreducible(parse_poly("T^4+T^2+1", 2))


def test_inject_fault_is_detected():
    specs = volume_config_grid()[:5]
    assert oracle_volume(specs).passed
    bad = oracle_volume(specs, inject_fault=True)
    assert not bad.passed and bad.counterexample["closed_form"] != bad.counterexample["residue"]


def test_euler_oracle_payload():
    res = oracle_euler((2, 3), 10)
    assert res.passed and res.cases == 3


def test_crash_is_reported_as_data():
    def boom():
        raise RuntimeError("kaput")

    res = _timed("boom", boom, ())
    assert isinstance(res, OracleResult) and not res.passed
    assert "kaput" in res.counterexample["exception"]


def test_ratio_oracle_catches_wrong_limit(monkeypatch):
    import wdbound.check as chk

    monkeypatch.setattr(chk, "limit_ratio", lambda d, q_o: 0)
    res = oracle_ratio([random_config(random.Random(1))])
    assert not res.passed and "limit" in res.counterexample


def test_quick_check_passes_and_is_ordered():
    seq = run_check("quick", seed=3, jobs=1)
    par = run_check("quick", seed=3, jobs=2)
    assert seq.passed and par.passed
    assert [r.name for r in seq.results] == [r.name for r in par.results]
    assert [r.cases for r in seq.results] == [r.cases for r in par.results]
    doc = seq.to_json()
    assert doc["scale"] == "quick" and all("seconds" in o for o in doc["oracles"])
