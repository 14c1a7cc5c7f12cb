import csv
import io
import json
from decimal import ROUND_HALF_EVEN, Context
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wdbound.algebra import InvalidAlgebraError
from wdbound.report import (
    NONE_ADMISSIBLE,
    CurveRow,
    NoAdmissibleLevelsError,
    RunConfig,
    TableRow,
    build_convergence_table,
    decimal6,
    fmt_rational,
    optimal_curves_report,
    render,
)
from wdbound.zeta import Place

BASE = {"q": 3, "d": 2, "ramification": ["T", "T+1"], "o": "T+2"}


def cfg(**kw):
    return RunConfig.from_json({**BASE, **kw})


def test_table_example_q3():
    rows = build_convergence_table(cfg(level_degrees=[3, 5]))
    assert [r.degree for r in rows] == [3, 3, 3, 5, 5, 5]
    assert {r.supersingular_count for r in rows if r.degree == 3} == {"19656"}
    assert {r.supersingular_count for r in rows if r.degree == 5} == {"14348664"}
    assert all(r.ratio == r.limit_ratio == "1" for r in rows)
    assert rows[0].genus_estimate == "9827" and rows[0].wd_ratio == "3.00020"
    levels = [r.level for r in rows[:3]]
    assert levels == ["T^3+2*T+1", "T^3+2*T+2", "T^3+T^2+2"]


def test_table_error_when_nothing_admissible():
    with pytest.raises(NoAdmissibleLevelsError):
        build_convergence_table(cfg(level_degrees=[2]))


def test_table_marks_inadmissible_degrees():
    rows = build_convergence_table(cfg(level_degrees=[2, 3], max_per_degree=1))
    assert rows[0] == TableRow(level=NONE_ADMISSIBLE, degree=2)
    assert rows[1].degree == 3


D3_F2 = {"q": 2, "d": 3, "ramification": [{"place": "T", "inv": "1/3"}, {"place": "T+1", "inv": "2/3"}], "o": "T^2+T+1"}


def test_table_d3_over_F2():
    rows = build_convergence_table(RunConfig.from_json({**D3_F2, "level_degrees": [5]}))
    assert rows and all(r.ratio == r.limit_ratio == "15" for r in rows)
    assert all(r.genus_estimate == "" and r.dv_limit == "" for r in rows)
    # degree 4 has quotient order 15, divisible by 3
    with pytest.raises(NoAdmissibleLevelsError):
        build_convergence_table(RunConfig.from_json({**D3_F2, "level_degrees": [4]}))


def test_run_config_validation():
    with pytest.raises(InvalidAlgebraError):
        cfg(ramification=["T"], level_degrees=[3]).algebra()
    with pytest.raises(ValueError):
        cfg(level_degrees=[3], format="xml")
    with pytest.raises(InvalidAlgebraError):
        cfg(o="inf", level_degrees=[3]).place_o()


def test_optimal_curves_q3():
    R = [Place.parse("T", 3), Place.parse("T+1", 3)]
    rows = optimal_curves_report(3, R, Place.parse("T+2", 3), [3, 5, 7], max_per_degree=1)
    assert (rows[0].genus_estimate, rows[0].points) == ("9827", "19656")
    assert rows[0].points_per_genus_exact == "19656/9827" and rows[0].points_per_genus == "2.00020"
    errs = [abs(Fraction(r.points_per_genus_exact) - 2) for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert all(r.dv_limit == "2" for r in rows)


def test_optimal_curves_preconditions():
    R = [Place.parse("T", 3), Place.parse("T+1", 3)]
    with pytest.raises(InvalidAlgebraError):
        optimal_curves_report(3, R, Place.parse("T^2+1", 3), [3])
    with pytest.raises(ValueError):
        Place.parse("T+2", 2)
    with pytest.raises(InvalidAlgebraError):
        optimal_curves_report(3, R[:1], Place.parse("T+2", 3), [3])


def test_render_csv_and_json():
    rows = build_convergence_table(cfg(level_degrees=[3], max_per_degree=1))
    text = render(rows, "csv")
    header = next(csv.reader(io.StringIO(text)))
    assert header == [
        "level",
        "degree",
        "supersingular_count",
        "asymptotic_h",
        "ratio",
        "limit_ratio",
        "wd_ratio",
        "wd_ratio_exact",
        "wd_limit",
        "genus_estimate",
        "dv_limit",
    ]
    data = json.loads(render(rows, "json"))
    assert list(data[0]) == header
    assert render(rows, "csv") == text
    with pytest.raises(ValueError):
        render(rows, "xml")
    curve = render([CurveRow(level="x", degree=1)], "csv").splitlines()[0]
    assert curve.startswith("level,degree,points,genus_estimate")


def test_fmt_rational():
    assert fmt_rational(Fraction(6, 4)) == "3/2"
    assert fmt_rational(Fraction(-4, 2)) == "-2"


@pytest.mark.parametrize(
    "x,expected",
    [
        (Fraction(14743, 4914), "3.00020"),
        (Fraction(1), "1.00000"),
        (Fraction(1234565, 10), "123456"),  # half-even rounds the tie down
        (Fraction(1234575, 10), "123458"),
        (Fraction(-1, 3), "-0.333333"),
        (Fraction(9999995, 10**7), "1.00000"),
        (Fraction(0), "0"),
        (Fraction(10**20, 3), "3.33333e+19"),
    ],
)
def test_decimal6_examples(x, expected):
    assert decimal6(x) == expected


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=Fraction(-10**12), max_value=Fraction(10**12), max_denominator=10**6))
def test_decimal6_matches_stdlib(x):
    # stdlib decimal at 6 digits, half-even, from an exact-enough quotient
    ctx = Context(prec=6, rounding=ROUND_HALF_EVEN)
    exact = Context(prec=60).divide(Context(prec=60).create_decimal(x.numerator), x.denominator)
    ref = ctx.plus(exact)
    if x == 0:
        assert decimal6(x) == "0"
    else:
        assert Fraction(decimal6(x)) == Fraction(ref)
