"""Series construction, classification, evaluation, and limits."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from hypint.jets import Jet, as_jet, eps, extract
from hypint.hypseries import (
    AsymptoticTerm,
    DivergentError,
    Kind,
    LimitConditionError,
    PFQSpec,
    SeriesError,
    _accelerated_sum,
    cancel_parameters,
    classify,
    eval_at_one,
    eval_series,
    limit_at_minus_infinity,
    value_at_zero,
)

CATALAN = 0.915965594177219
ZETA3 = 1.2020569031595943


# -- construction -----------------------------------------------------------


def test_power_zero_rejected():
    with pytest.raises(ValueError, match="power"):
        PFQSpec((1.0,), (2.0,), power=0)


def test_too_many_upper_rejected():
    with pytest.raises(ValueError, match="p <= q"):
        PFQSpec((1.0, 1.0, 1.0), (2.0,))


@pytest.mark.parametrize("bad", [0.0, -1.0, -7.0])
def test_lower_pole_rejected(bad):
    with pytest.raises(ValueError, match="pole"):
        PFQSpec((0.5,), (bad,))


def test_jet_order_inferred_from_parameters():
    spec = PFQSpec((0.5 + eps(2),), (1.5,))
    assert spec.order == 2
    assert all(p.order == 2 for p in spec.upper + spec.lower)


def test_mixed_jet_orders_rejected():
    with pytest.raises(ValueError):
        PFQSpec((0.5 + eps(2), eps(3)), (1.5,))


def test_argument_applies_scale_and_power():
    spec = PFQSpec((0.5,), (1.5,), scale=-1.0, power=2)
    assert spec.argument(0.5) == -0.25


def test_argument_fractional_power_uses_principal_branch():
    from fractions import Fraction

    spec = PFQSpec((0.5,), (1.5,), power=Fraction(1, 2))
    got = spec.argument(-4.0)
    assert got == pytest.approx(2.0j)


# -- classification ---------------------------------------------------------


def test_polynomial_takes_precedence_over_disk():
    spec = PFQSpec((-3.0, 2.0), (4.0,))
    assert classify(spec).kind is Kind.POLYNOMIAL
    assert spec.terminating_degree() == 3


def test_entire_when_p_at_most_q():
    assert classify(PFQSpec((1.0,), (2.0, 3.0))).kind is Kind.ENTIRE


def test_unit_disk_when_p_exceeds_q_by_one():
    cls = classify(PFQSpec((1.0, 1.0), (2.0,)))
    assert cls.kind is Kind.UNIT_DISK
    assert cls.sigma == pytest.approx(0.0)


def test_jet_upper_with_nonpositive_integer_base_does_not_terminate():
    # a genuine perturbation keeps every Pochhammer factor nonzero
    spec = PFQSpec((-2.0 + eps(1), 1.0), (2.0,))
    assert classify(spec).kind is Kind.UNIT_DISK


def test_value_at_zero_is_one():
    assert value_at_zero(PFQSpec((0.5,), (1.5,))).value == 1.0
    j = value_at_zero(PFQSpec((0.5 + eps(2),), (1.5,)))
    assert j.coeffs == (1.0, 0.0, 0.0)


# -- evaluation: closed-form anchors ---------------------------------------


def test_geometric_series():
    spec = PFQSpec((1.0,), ())
    assert eval_series(spec, 0.5).value == pytest.approx(2.0, abs=1e-12)


def test_exponential_negative_argument():
    spec = PFQSpec((), ())
    got = eval_series(spec, -5.0).value
    assert got == pytest.approx(math.exp(-5.0), abs=1e-12)


def test_kummer_ratio_function_deep_cancellation():
    # 1F1(1;2;-20): terms reach ~2e6 while the sum is 0.05, so about
    # eight digits are gone before summation; the rest must survive
    spec = PFQSpec((1.0,), (2.0,))
    got = eval_series(spec, -20.0).value
    want = (math.exp(-20.0) - 1.0) / -20.0
    assert got == pytest.approx(want, rel=1e-7)


def test_cosine_route():
    spec = PFQSpec((), (0.5,), scale=-0.25, power=2)
    assert eval_series(spec, math.pi).value == pytest.approx(-1.0, abs=1e-12)


def test_arcsin_route():
    spec = PFQSpec((0.5, 0.5), (1.5,), power=2)
    got = 0.5 * eval_series(spec, 0.5).value
    assert got == pytest.approx(math.asin(0.5), abs=1e-13)


@given(
    n=st.integers(min_value=0, max_value=8),
    b=st.floats(min_value=0.1, max_value=3.0),
    c=st.floats(min_value=0.3, max_value=3.0),
    z=st.floats(min_value=-8.0, max_value=8.0),
)
def test_terminating_sum_is_exact(n, b, c, z):
    spec = PFQSpec((-float(n), b), (c,))
    got = eval_series(spec, z).value
    term, total = 1.0, 1.0
    for k in range(n):
        term *= (-n + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
    assert got == pytest.approx(total, rel=1e-12, abs=1e-12)


def test_divergent_outside_disk():
    with pytest.raises(DivergentError):
        eval_series(PFQSpec((1.0, 1.0), (2.0,)), 1.5)


def test_boundary_needs_positive_excess():
    # 3F2 with sigma = -1/2 on the unit circle
    with pytest.raises(DivergentError):
        eval_series(PFQSpec((1.0, 1.0, 1.0), (1.25, 1.25)), -1.0)


def test_boundary_alternating_sum():
    # eta(2) through the 3F2 of ones at -1
    got = eval_series(PFQSpec((1.0, 1.0, 1.0), (2.0, 2.0)), -1.0).value
    assert got == pytest.approx(math.pi**2 / 12.0, abs=1e-12)


def test_boundary_complex_argument():
    got = eval_series(PFQSpec((1.0, 1.0, 1.0), (2.0, 2.0)), 1j).value
    assert got.real == pytest.approx(CATALAN, abs=1e-12)


def test_pfaff_reroute_deep_negative():
    # 2F1(1/2,1;3/2;-t^2) = arctan(t)/t survives far outside |x|<1
    spec = PFQSpec((0.5, 1.0), (1.5,))
    got = eval_series(spec, -1.0e6).value
    want = math.atan(1.0e3) / 1.0e3
    assert got == pytest.approx(want, rel=1e-9)


def test_pfaff_reroute_at_minus_one():
    got = eval_series(PFQSpec((1.0, 0.5), (1.5,)), -1.0).value
    assert got == pytest.approx(math.pi / 4.0, abs=1e-12)


def test_near_one_connection_matches_acceleration():
    spec = PFQSpec((0.3, 0.4), (1.9,))
    via_connection = eval_series(spec, 0.99).value
    via_wynn = _accelerated_sum(spec, 0.99 + 0j, 1e-12, 100_000).value
    assert via_connection == pytest.approx(via_wynn, abs=1e-9)


# -- evaluation: argument one ----------------------------------------------


def test_lemniscate_constant():
    spec = PFQSpec((0.5, 0.25), (1.25,))
    got = 4.0 * math.sqrt(2.0) * eval_at_one(spec).value
    want = math.gamma(0.25) ** 2 / math.sqrt(math.pi)
    assert got == pytest.approx(want, rel=1e-13)


def test_zeta_two():
    got = eval_at_one(PFQSpec((1.0, 1.0, 1.0), (2.0, 2.0))).value
    assert got == pytest.approx(math.pi**2 / 6.0, abs=1e-12)


def test_zeta_three():
    got = eval_at_one(PFQSpec((1.0,) * 4, (2.0,) * 3)).value
    assert got == pytest.approx(ZETA3, abs=1e-12)


def test_at_one_requires_saturated_shape():
    with pytest.raises(SeriesError):
        eval_at_one(PFQSpec((1.0,), (2.0, 3.0)))


def test_at_one_requires_positive_excess():
    with pytest.raises(DivergentError, match="1"):
        eval_at_one(PFQSpec((1.0, 1.0), (2.0,)))


def test_at_one_terminating_shortcut():
    spec = PFQSpec((-2.0, 0.7), (1.9,))
    want = 1.0 + (-2.0 * 0.7) / 1.9 + ((-2.0) * (-1.0) * 0.7 * 1.7) / (1.9 * 2.9 * 2.0)
    assert eval_at_one(spec).value == pytest.approx(want, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(min_value=0.05, max_value=1.2),
    b=st.floats(min_value=0.05, max_value=1.2),
    excess=st.floats(min_value=0.35, max_value=1.5),
)
def test_gauss_form_matches_acceleration(a, b, excess):
    spec = PFQSpec((a, b), (a + b + excess,))
    gamma_form = eval_at_one(spec).value
    wynn = _accelerated_sum(spec, 1.0 + 0j, 1e-12, 100_000).value
    assert gamma_form == pytest.approx(wynn, abs=1e-9)


def test_gelfond_constant():
    first = eval_at_one(PFQSpec((1j, -1j), (0.5,))).value
    second = eval_at_one(PFQSpec((0.5 + 1j, 0.5 - 1j), (1.5,))).value
    assert first + 2.0 * second == pytest.approx(math.exp(math.pi), rel=1e-9)


# -- jets -------------------------------------------------------------------


def test_jet_eval_matches_parameter_finite_difference():
    h = 1e-5
    for a, b, c, x in [(0.7, 1.1, 1.9, 0.45), (0.3, 0.6, 1.4, -0.8)]:
        jet = eval_series(PFQSpec((a + eps(1), b), (c,)), x)
        up = eval_series(PFQSpec((a + h, b), (c,), order=0), x).value
        dn = eval_series(PFQSpec((a - h, b), (c,), order=0), x).value
        fd = (up - dn) / (2.0 * h)
        assert extract(1, jet) == pytest.approx(fd, abs=1e-6)


def test_zeta_two_by_second_derivative():
    # [eps^2] of 2F1(eps,-eps;1;1) is -zeta(2)
    e = eps(2)
    got = extract(2, eval_at_one(PFQSpec((e, -e), (1.0,))))
    assert got == pytest.approx(-math.pi**2 / 6.0, abs=1e-12)


def test_cancel_parameters_strips_equal_pairs():
    spec = cancel_parameters(PFQSpec((0.5, 1.0), (0.5, 1.5)))
    assert spec.p == 1 and spec.q == 1
    assert spec.lower[0].value == 1.5


# -- limits -----------------------------------------------------------------


def test_limit_arctan_family():
    term = limit_at_minus_infinity(PFQSpec((1.0, 0.5), (1.5,)))
    assert isinstance(term, AsymptoticTerm)
    assert term.exponent.value == pytest.approx(0.5)
    assert term.coefficient.value == pytest.approx(math.pi / 2.0, abs=1e-12)
    # empirical trend: the finite-t gap closes like 1/t
    t = 1.0e6
    seen = (t**2) ** 0.5 * eval_series(PFQSpec((1.0, 0.5), (1.5,)), -(t**2)).value
    assert seen == pytest.approx(math.pi / 2.0, abs=2.0 / t)


def test_limit_gamma_product():
    term = limit_at_minus_infinity(PFQSpec((1.0, 1.0 / 3.0), (4.0 / 3.0,)))
    want = math.gamma(2.0 / 3.0) * math.gamma(4.0 / 3.0)
    assert term.exponent.value == pytest.approx(1.0 / 3.0)
    assert term.coefficient.value == pytest.approx(want, rel=1e-13)


def test_limit_polynomial_case():
    b, c = 0.8, 1.7
    term = limit_at_minus_infinity(PFQSpec((-2.0, b), (c,)))
    assert term.exponent.value == -2.0
    want = (b * (b + 1.0)) / (c * (c + 1.0))
    assert term.coefficient.value == pytest.approx(want, rel=1e-14)


def test_limit_rejects_too_few_upper():
    with pytest.raises(LimitConditionError) as err:
        limit_at_minus_infinity(PFQSpec((), (0.5, 1.5)))
    assert err.value.clause == "width"


def test_limit_rejects_congruent_parameters():
    with pytest.raises(LimitConditionError) as err:
        limit_at_minus_infinity(PFQSpec((0.5, 1.5), (2.5,)))
    assert err.value.clause == "congruence"


def test_limit_rejects_two_terminating_uppers():
    with pytest.raises(LimitConditionError):
        limit_at_minus_infinity(PFQSpec((-1.0, -3.0), (1.5,)))


def test_limit_sigma_gate_for_narrow_shape():
    # p = q-1 demands min(a) < Re(sigma) - 1/2
    with pytest.raises(LimitConditionError) as err:
        limit_at_minus_infinity(PFQSpec((1.0,), (1.2, 1.3)))
    assert err.value.clause == "excess"
    term = limit_at_minus_infinity(PFQSpec((0.3,), (1.2, 1.3)))
    assert term.exponent.value == pytest.approx(0.3)
