import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import count_invertible_matrices, direct_zeta_partial, sympy_residue_volume
from wdbound.algebra import DivisionAlgebraSpec, InvalidAlgebraError
from wdbound.check import random_config
from wdbound.counts import (
    BettiVector,
    ModuliConfig,
    PositivityError,
    QuadExact,
    asymptotic_h,
    betti_vector,
    component_count,
    dv_bound,
    gl_order,
    half_power,
    limit_ratio,
    pgl_order,
    ratio_exact,
    supersingular_count,
    volume_g1,
    wd_bound,
    wd_limit,
)
from wdbound.ff_poly import parse_poly
from wdbound.zeta import Place


def pl(s, q):
    return Place.parse(s, q)


def spec(d, q, items):
    return DivisionAlgebraSpec.from_map(d, q, [(pl(x, q), Fraction(a)) for x, a in items])


SPEC_32 = spec(2, 3, [("T", "1/2"), ("T+1", "1/2")])
SPEC_23 = spec(3, 2, [("T", "1/3"), ("T+1", "2/3")])


def cfg_32(level="T^3+2*T+1"):
    return ModuliConfig.build(SPEC_32, pl("T+2", 3), parse_poly(level, 3))


# --- group orders ---------------------------------------------------------


def test_group_orders_against_matrix_enumeration():
    for d, p in ((1, 2), (1, 5), (2, 2), (2, 3), (3, 2)):
        assert gl_order(d, p) == count_invertible_matrices(d, p)
    assert gl_order(2, 2) == 6 and pgl_order(2, 2) == 6
    assert gl_order(1, 7) == 6


def test_pgl_27():
    assert pgl_order(2, 27) == 27 * (27**2 - 1) == 19656


def test_component_count():
    assert component_count(3, parse_poly("T", 3)) == 1
    assert component_count(3, parse_poly("T^3+2*T+1", 3)) == 13
    assert component_count(2, parse_poly("T^4+T+1", 2)) == 15


# --- volume ----------------------------------------------------------------


def test_volume_examples():
    assert volume_g1(SPEC_32) == Fraction(1, 8)
    # three degree-1 places with invariant 1/3: the F_4 analogue of the hand computation
    s4 = spec(3, 4, [("T", "1/3"), ("T+1", "1/3"), ("T+[0,1]", "1/3")])
    by_hand = Fraction(1, 3) * direct_zeta_partial(4, [1, 1, 1], 1) * direct_zeta_partial(4, [1, 1, 1], 2)
    assert volume_g1(s4) == by_hand == sympy_residue_volume(4, 3, s4.validate())
    assert volume_g1(SPEC_23) == Fraction(1, 7) == sympy_residue_volume(2, 3, SPEC_23.validate())


def test_volume_rejects_split_algebra():
    with pytest.raises(InvalidAlgebraError):
        volume_g1(DivisionAlgebraSpec(2, 3, ()))


# --- the worked instance and friends --------------------------------------


def test_supersingular_examples():
    assert supersingular_count(cfg_32()).count == 19656
    big = supersingular_count(cfg_32("T^5+2*T+1"))
    assert big.count == 243 * (243**2 - 1) == 14348664 and big.exact


def test_supersingular_d3_over_F2():
    cfg = ModuliConfig.build(SPEC_23, pl("T^3+T+1", 2), parse_poly("T^3+T^2+1", 2))
    res = supersingular_count(cfg)
    S_degrees = [1, 1, 1, 3]
    by_hand = pgl_order(3, 8) * direct_zeta_partial(2, S_degrees, 1) * direct_zeta_partial(2, S_degrees, 2)
    assert res.value == by_hand == 16482816 * 189
    assert res.exact and isinstance(res.count, int)


def test_asymptotic_h_examples():
    cfg = cfg_32()
    assert asymptotic_h(cfg, barred=True) == 19656
    assert asymptotic_h(cfg, barred=False) == 255528 == 19656 * 13


def test_moduli_config_rejects():
    with pytest.raises(InvalidAlgebraError):
        ModuliConfig.build(DivisionAlgebraSpec(1, 2, ()), pl("T", 2), parse_poly("T+1", 2))
    with pytest.raises(InvalidAlgebraError):
        ModuliConfig.build(SPEC_32, pl("T", 3), parse_poly("T^3+2*T+1", 3))
    with pytest.raises(ValueError):
        ModuliConfig.build(SPEC_32, pl("T+2", 3), parse_poly("T^2+1", 3))


def test_limits():
    assert limit_ratio(2, 3) == 1
    assert limit_ratio(3, 4) == 15
    assert wd_limit(3, 2) == 8
    assert dv_bound(9, 1) == QuadExact(Fraction(1), Fraction(0), 9)
    assert str(dv_bound(3, 1)) == "-1/2+1/2*sqrt(3)"


def test_ratio_examples():
    assert ratio_exact(cfg_32()) == 1 == limit_ratio(2, 3)
    cfg = ModuliConfig.build(SPEC_23, pl("T^2+T+1", 2), parse_poly("T^5+T^2+1", 2))
    assert ratio_exact(cfg) == 15


@pytest.mark.parametrize("seed", range(6))
def test_random_config_identities(seed):
    rng = random.Random(seed)
    for _ in range(15):
        cfg = random_config(rng)
        count = supersingular_count(cfg)
        h = asymptotic_h(cfg)
        assert count.value > 0 and h > 0
        assert ratio_exact(cfg) == limit_ratio(cfg.d, cfg.q_o)
        assert asymptotic_h(cfg, barred=False) == h * component_count(cfg.q, cfg.level.prime)
        # h-bar/d and the supersingular count are integers for every valid configuration
        assert h.denominator == 1 and h.numerator % cfg.d == 0
        assert count.exact
        bv = betti_vector(cfg.d, h)
        assert bv.total == h and bv.dims[0] == 1 and bv.dims == bv.dims[::-1]


# --- Betti vectors and bounds ---------------------------------------------


def test_betti_examples():
    assert betti_vector(2, 4) == BettiVector((1, 2, 1), 1)
    assert betti_vector(3, 6) == BettiVector((1, 0, 4, 0, 1), 1)
    assert betti_vector(2, 19656).dims == (1, 19654, 1)
    assert betti_vector(3, 6).d == 3


@pytest.mark.parametrize("d,h", [(2, 5), (3, 2), (2, Fraction(9, 2))])
def test_betti_errors(d, h):
    with pytest.raises(ValueError):
        betti_vector(d, h)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.integers(1, 10**6))
def test_betti_structure(d, mu_plus_1):
    h = d * mu_plus_1
    bv = betti_vector(d, h)
    top = 2 * (d - 1)
    assert len(bv.dims) == top + 1
    assert bv.total == h
    assert bv.dims == bv.dims[::-1]
    for i, x in enumerate(bv.dims):
        if i != d - 1:
            assert x == (0 if i % 2 else 1)


def test_wd_examples():
    assert wd_bound(betti_vector(2, 4), 3, 2).to_fraction() == 16
    assert wd_bound(betti_vector(1, 1), 5, 3).to_fraction() == 1
    wd = wd_bound(betti_vector(2, 19656), 3, 2)
    assert wd.to_fraction() == 58972
    assert abs(wd.to_fraction() / 19656 - 3) < Fraction(3, 10**4)


def test_wd_odd_exponent_is_irrational():
    wd = wd_bound(betti_vector(2, 4), 3, 1)
    assert not wd.is_rational
    assert wd == QuadExact(Fraction(4), Fraction(2), 3)


def test_wd_convergence_strictly_decreasing():
    errs = []
    for level in ("T^3+2*T+1", "T^5+2*T+1", "T^7+T^2+2"):
        cfg = cfg_32(level)
        h = asymptotic_h(cfg)
        ratio = wd_bound(betti_vector(2, h), 3, 2).to_fraction() / h
        errs.append(abs(ratio - 3) / 3)
    assert errs[0] > errs[1] > errs[2]


# --- exact quadratic ring -------------------------------------------------


def test_half_power_folds_squares():
    assert half_power(9, 1).is_rational and half_power(9, 1).a == 3
    assert half_power(3, 3) == QuadExact(Fraction(0), Fraction(3), 3)


@settings(max_examples=150, deadline=None)
@given(
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
    st.integers(1, 30),
)
def test_quad_sign_matches_sympy(a, b, n):
    x = QuadExact(a, b, n)
    ref = sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(n)
    expected = 0 if ref == 0 else (1 if ref > 0 else -1)
    assert x.sign() == expected


def test_quad_errors():
    with pytest.raises(ValueError):
        QuadExact(Fraction(1), Fraction(1), 0)
    with pytest.raises(ValueError):
        half_power(3, 1).to_fraction()
    with pytest.raises(ValueError):
        QuadExact(Fraction(1), Fraction(1), 2) + QuadExact(Fraction(1), Fraction(1), 3)


def test_positivity_error_is_arithmetic():
    assert issubclass(PositivityError, ArithmeticError)
