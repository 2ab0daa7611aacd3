import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bidiexp.expansion import (
    MIN_EXPONENT,
    MIN_RHO_GAP,
    Classification,
    InfeasibleAlpha,
    alpha_breakpoints,
    as_fraction,
    budget_ceiling,
    check_cheap_length,
    check_distance_bound,
    check_distance_bound_shifted,
    check_last_step_fraction,
    compute_cheap,
    compute_expan,
    compute_params,
    corollary6_exponent,
    delta_rho,
    dichotomy_classify,
    fits_budget,
    highest_expansion,
    optimize_alpha,
    predicted_exponent_thm5,
    rho_max,
    theorem4_bound,
    thm5_exponents,
)
from bidiexp.search import LayerCostProfile, layer_cost_profile

from helpers import cycle_graph, naive_b_plus, naive_cheap, naive_expan, naive_rho, path_graph, star_graph

P5 = LayerCostProfile.from_costs([1, 2, 2, 2], [2, 2, 2, 1], 4)


def star_profile(n):
    return LayerCostProfile.from_costs([1, n], [n, 1], n)


# --- landmarks ------------------------------------------------------------


def test_cheap_path_alpha_zero():
    assert compute_cheap(P5, 0.0) == (1, 4)


def test_cheap_star_whole_prefix():
    # with m = n the whole prefix needs alpha > 1, so host the star profile in a bigger graph
    n = 9
    p = LayerCostProfile.from_costs([1, n], [n, 1], n * n)
    assert compute_cheap(p, 0.6) == (2, 1)
    assert compute_cheap(star_profile(n), 0.99) == (1, 2)


def test_cheap_undefined_when_first_step_too_expensive():
    p = LayerCostProfile.from_costs([3, 3], [3, 3], 9)
    assert compute_cheap(p, 0.0) == (None, None)
    assert compute_cheap(p, 0.5) == (1, 2)


def test_cheap_rejects_alpha_out_of_range():
    with pytest.raises(ValueError):
        compute_cheap(P5, 1.0)
    with pytest.raises(ValueError):
        compute_cheap(P5, -0.1)


def test_expan_examples():
    assert compute_expan(P5, 2) == (2, 3)
    assert compute_expan(star_profile(5), 2) == (2, 1)
    flat = LayerCostProfile.from_costs([4] * 5, [4] * 5, 20)
    assert compute_expan(flat, 1.5) == (1, 5)
    # on a cycle only the very first step from each end doubles
    cyc = layer_cost_profile(cycle_graph(10), 0, 5)
    assert compute_expan(cyc, 2) == (2, 4)


def test_expan_b_one_accepts_flat_growth():
    assert compute_expan(P5, 1) == (4, 1)
    with pytest.raises(ValueError):
        compute_expan(P5, 0.5)


def test_highest_expansion_examples():
    assert highest_expansion(star_profile(10), 2) == 10
    assert highest_expansion(P5, 2) == 2
    assert highest_expansion(LayerCostProfile.from_costs([4, 5, 6], [6, 5, 4], 20), 2) == 2
    assert highest_expansion(LayerCostProfile.from_costs([3], [3], 3), 2) == 2


def test_as_fraction_keeps_decimal_spelling():
    assert as_fraction(1.1) == Fraction(11, 10)
    assert as_fraction(2) == Fraction(2)


# --- params ---------------------------------------------------------------


def test_params_path():
    p = compute_params(P5, 0.0, 2)
    assert (p.S1, p.S2, p.T1, p.T2) == (2, 1, 2, 1)
    assert p.rho == 0.5
    assert p.overlap == 0
    assert p.d_alpha == 2 and p.c_rel == 0.0
    assert p.rho_max == 1.0
    assert p.delta_rho == pytest.approx(1 / 1.5 - 0.5)


def test_params_star_covered():
    n = 6
    a = math.log(2) / math.log(n)
    p = compute_params(star_profile(n), a, 2)
    assert (p.cheap_s, p.cheap_t) == (1, 2)
    assert p.d_alpha == 0 and p.covered and p.c_rel is None
    assert p.predicted_exponent_thm == pytest.approx(a)


def test_params_infeasible_and_empty_cheap():
    p = LayerCostProfile.from_costs([3, 3], [3, 3], 9)
    with pytest.raises(InfeasibleAlpha):
        compute_params(p, 0.0, 2)
    q = compute_params(p, 0.0, 2, empty_cheap=True)
    assert (q.cheap_s, q.cheap_t, q.d_alpha) == (0, 3, 2)


def test_params_json_names_every_field():
    data = compute_params(P5, 0.0, 2).to_json()
    for key in ("alpha", "b", "b_plus", "cheap_s", "cheap_t", "expan_s", "expan_t", "overlap", "d_alpha", "S1", "S2",
                "T1", "T2", "rho", "rho_max", "delta_rho", "c_rel", "eps_thm5", "predicted_exponent_exp"):
        assert key in data


# --- closed forms ---------------------------------------------------------


def test_rho_max_examples():
    assert rho_max(0.0, 2, 7) == 1.0
    assert rho_max(0.5, 2, 2) == pytest.approx(0.5)
    assert rho_max(0.1, 2, 8) == pytest.approx(0.75)
    assert math.isnan(rho_max(0.1, 1, 8))


def test_delta_rho_sign():
    assert delta_rho(0.2, 0.5) > 0
    assert delta_rho(0.5, 0.5) == 0
    assert delta_rho(-3.0, 0.5) == pytest.approx(1 - 1 / 1.5)


def test_theorem4_examples():
    assert theorem4_bound(2, 1, 2) == pytest.approx(64 * math.sqrt(2))
    assert theorem4_bound(2, 1, 100) < theorem4_bound(2, 1, 1000)
    assert theorem4_bound(2, 2, 1000) == pytest.approx(8 * math.log2(2000) * 4)
    with pytest.raises(ValueError):
        theorem4_bound(2, 0, 10)


def test_thm5_exponents():
    assert thm5_exponents(1.0, 0.0, 2, 2) == pytest.approx((0.5, 0.75))
    thm, exp = thm5_exponents(1e-12, 0.0, 2, 2)
    assert thm == pytest.approx(1) and exp == pytest.approx(1)
    assert thm5_exponents(1.0, 1 - 1e-12, 2, 2)[0] == pytest.approx(1)


def test_predicted_exponent_requires_positive_c():
    with pytest.raises(ValueError):
        predicted_exponent_thm5(compute_params(P5, 0.0, 2))
    p = compute_params(LayerCostProfile.from_costs([1, 2, 4], [4, 2, 1], 7), 0.0, 2)
    out = predicted_exponent_thm5(p)
    assert out["experimental"] == pytest.approx(1 - (1 - out["theorem"]) / 2)


def test_corollary6_examples():
    m = 10_000
    assert corollary6_exponent(1, 1, m, 0.5, 2, 4) == pytest.approx(thm5_exponents(0.5, 0.0, 2, 4)[0])
    assert corollary6_exponent(m, 1, m, 0.5, 2, 4) == pytest.approx(1.0)
    assert corollary6_exponent(100, 5, m, 1.0, 2, 2) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        corollary6_exponent(m + 1, 1, m, 0.5, 2, 2)


# --- breakpoints and optimiser --------------------------------------------


def test_breakpoints_examples():
    assert alpha_breakpoints(star_profile(8)) == [0.0]
    bp = alpha_breakpoints(P5)
    assert bp == pytest.approx([0.0, math.log(3) / math.log(4)])


def test_optimizer_single_breakpoint():
    alpha, _ = optimize_alpha(star_profile(8), 2)
    assert alpha == 0.0


def test_optimizer_does_not_just_take_largest_alpha():
    # big cheap regions shrink d_alpha but also raise the exponent floor
    p = LayerCostProfile.from_costs([1, 2, 4, 8, 8, 8, 8, 8], [8, 8, 8, 8, 8, 4, 2, 1], 60)
    alpha, params = optimize_alpha(p, 2, MIN_EXPONENT)
    bps = alpha_breakpoints(p)
    assert alpha < bps[-1]
    scores = [compute_params(p, a, 2).predicted_exponent_exp for a in bps]
    assert params.predicted_exponent_exp == min(scores)


def test_optimizer_rho_gap_minimises_rho_minus_rho_max():
    p = layer_cost_profile(path_graph(9), 0, 8)
    alpha, params = optimize_alpha(p, 2, MIN_RHO_GAP)
    gaps = [compute_params(p, a, 2).rho - compute_params(p, a, 2).rho_max for a in alpha_breakpoints(p)]
    assert params.rho - params.rho_max == min(gaps)


def test_optimizer_errors():
    with pytest.raises(ValueError):
        optimize_alpha(P5, 2, "fastest")
    with pytest.raises(InfeasibleAlpha):
        optimize_alpha(LayerCostProfile.from_costs([50, 50], [50, 50], 60), 2, candidates=[0.1])


def test_dichotomy_boundaries():
    p = compute_params(LayerCostProfile.from_costs([1, 2, 4], [4, 2, 1], 7), 0.0, 2)
    assert p.rho < 0 and dichotomy_classify(p) is Classification.SUBLINEAR_GUARANTEED
    from dataclasses import replace

    assert dichotomy_classify(replace(p, rho=0.0)) is Classification.SUBLINEAR_GUARANTEED
    assert dichotomy_classify(replace(p, rho=p.rho_max)) is Classification.NO_GUARANTEE


def test_path_classification_matches_formula():
    a = math.log(3) / math.log(4)
    p = compute_params(P5, a, 2)
    expected = Fraction(max(p.S2, p.T2), min(p.S1, p.T1))
    assert p.rho == float(expected)
    assert (dichotomy_classify(p) is Classification.SUBLINEAR_GUARANTEED) == (p.rho < p.rho_max)


# --- lemma checks ---------------------------------------------------------


def test_distance_bound_counterexample_for_large_base():
    # leaf - hub of degree 4 - ... : the t side grows 1, 4, 17, 73 with m = 101
    p = LayerCostProfile.from_costs([3, 21, 58, 93], [73, 17, 4, 1], 101)
    assert compute_expan(p, 4)[1] == 1
    assert not check_distance_bound(p, 4)
    assert check_distance_bound_shifted(p, 4)


def test_last_step_and_cheap_length_examples():
    p = LayerCostProfile.from_costs([1, 2, 4, 8], [8, 4, 2, 1], 15)
    assert check_last_step_fraction(p, 2)
    assert check_cheap_length(p, 0.5, 2)
    assert check_distance_bound(p, 2)


# --- properties -----------------------------------------------------------

costs = st.lists(st.integers(1, 60), min_size=1, max_size=9)


@st.composite
def profiles(draw):
    cs = draw(costs)
    ct = draw(st.lists(st.integers(1, 60), min_size=len(cs), max_size=len(cs)))
    m = draw(st.integers(max(sum(cs), sum(ct), max(cs + ct)) // 2 + 1, 400))
    return LayerCostProfile.from_costs(cs, ct, m)


bases = st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(4), Fraction(11, 10)])


@settings(max_examples=300, deadline=None)
@given(p=profiles(), b=bases, data=st.data())
def test_landmarks_match_naive_definitions(p, b, data):
    cs, ct = p.cs.tolist(), p.ct.tolist()
    assert compute_expan(p, b) == naive_expan(cs, ct, b)
    assert highest_expansion(p, b) == float(naive_b_plus(cs, ct, b))
    for a in alpha_breakpoints(p):
        assert compute_cheap(p, a) == naive_cheap(cs, ct, p.m, a)
        want = naive_rho(cs, ct, p.m, a, b)
        if want is None:
            with pytest.raises(InfeasibleAlpha):
                compute_params(p, a, b)
        else:
            assert compute_params(p, a, b).rho == float(want)
    a = data.draw(st.floats(0, 0.99))
    assert compute_cheap(p, a) == naive_cheap(cs, ct, p.m, a) or _near_breakpoint(p, a)


def _near_breakpoint(p, a):
    return any(abs(a - bp) < 1e-9 for bp in alpha_breakpoints(p))


@settings(max_examples=300, deadline=None)
@given(p=profiles(), b=bases, a=st.floats(0, 0.99))
def test_param_identities(p, b, a):
    try:
        params = compute_params(p, a, b)
    except InfeasibleAlpha:
        return
    assert params.expan_s >= 1 and params.expan_t <= p.d
    assert params.S1 == params.expan_s
    assert params.overlap == params.S1 - params.T2 - params.cheap_s
    assert 0 < params.rho_max <= 1
    assert (params.delta_rho > 0) == (max(params.rho, 0) < params.rho_max)
    if p.cs.tolist() == p.ct.tolist()[::-1]:
        assert params.S1 == params.T1 and params.S2 == params.T2


@settings(max_examples=200, deadline=None)
@given(p=profiles(), a1=st.floats(0, 0.99), a2=st.floats(0, 0.99), b1=bases, b2=bases)
def test_monotonicity(p, a1, a2, b1, b2):
    lo, hi = sorted((a1, a2))
    cs_lo, ct_lo = compute_cheap(p, lo)
    cs_hi, ct_hi = compute_cheap(p, hi)
    assert (cs_lo or 0) <= (cs_hi or 0)
    assert (ct_lo or p.d + 1) >= (ct_hi or p.d + 1)
    blo, bhi = sorted((b1, b2))
    assert compute_expan(p, blo)[0] >= compute_expan(p, bhi)[0]
    assert compute_expan(p, blo)[1] <= compute_expan(p, bhi)[1]


@settings(max_examples=200, deadline=None)
@given(p=profiles(), b=bases)
def test_breakpoints_change_landmarks(p, b):
    for bp in alpha_breakpoints(p):
        if bp == 0.0:
            continue
        assert compute_cheap(p, bp) != compute_cheap(p, bp * (1 - 1e-6))


@settings(max_examples=200, deadline=None)
@given(p=profiles(), b=bases)
def test_optimizer_picks_best_breakpoint(p, b):
    for objective in (MIN_EXPONENT, MIN_RHO_GAP):
        try:
            alpha, params = optimize_alpha(p, b, objective)
        except InfeasibleAlpha:
            assert all(None in compute_cheap(p, a) for a in alpha_breakpoints(p))
            continue
        assert alpha in alpha_breakpoints(p)
        again = optimize_alpha(p, b, objective)
        assert again[0] == alpha


@settings(max_examples=300, deadline=None)
@given(p=profiles(), b=bases, a=st.floats(0, 0.99))
def test_last_step_fraction_and_cheap_length_always_hold(p, b, a):
    # both follow from the geometric growth alone, for any base
    assert check_last_step_fraction(p, b)
    assert check_cheap_length(p, a, b)
    assert check_distance_bound_shifted(p, b)


def test_star_profile_classified_covered_or_sublinear():
    p = layer_cost_profile(star_graph(30), 1, 2)
    alpha, params = optimize_alpha(p, 2, MIN_RHO_GAP)
    assert dichotomy_classify(params) is Classification.SUBLINEAR_GUARANTEED


@settings(max_examples=300, deadline=None)
@given(m=st.integers(1, 10**7), a=st.floats(0, 0.99))
def test_budget_ceiling_is_the_last_fitting_cost(m, a):
    c = budget_ceiling(m, a)
    assert fits_budget(c, m, a)
    assert not fits_budget(c + 1, m, a)
