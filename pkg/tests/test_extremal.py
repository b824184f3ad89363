import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subgauss.core import make_params, point_mass
from subgauss.exact_dist import subset_pmf
from subgauss.extremal import (
    NotCoprime,
    brute_force_extrema,
    refined_psi2_upper,
    sine_sum,
    sine_sum_direct,
    u_extrema_closed_form,
    v_extrema_closed_form,
)
from subgauss.norms import SQRT_LN2, psi2_norm


def test_u_examples():
    r = u_extrema_closed_form(make_params(4, 1, 2))
    assert (r.m1, r.m2) == pytest.approx((1.0, -1.0))
    r = u_extrema_closed_form(make_params(5, 1, 1))
    assert r.m1 == pytest.approx(1.0)
    assert r.m2 == pytest.approx(-math.cos(math.pi / 5))
    assert r.m2 == pytest.approx(-0.80902, abs=5e-6)
    r = u_extrema_closed_form(make_params(6, 1, 3))
    assert r.m1 == pytest.approx(2.0) and r.sup_norm == pytest.approx(2.0)


def test_v_examples():
    assert v_extrema_closed_form(make_params(4, 1, 2)).m1 == pytest.approx(1.0)
    r = v_extrema_closed_form(make_params(5, 1, 1))
    assert r.m1 == pytest.approx(math.sin(2 * math.pi / 5))
    assert r.m2 == pytest.approx(-r.m1)
    assert v_extrema_closed_form(make_params(4, 1, 1)).m1 == pytest.approx(1.0)


def test_case_tags_name_the_branch():
    assert u_extrema_closed_form(make_params(5, 1, 1)).case_tag.startswith("U-odd/N-odd")
    assert v_extrema_closed_form(make_params(9, 2, 4)).case_tag.startswith("V-even/N%4=1")
    assert "reflect" in u_extrema_closed_form(make_params(7, 3, 5)).case_tag


def test_brute_force_examples():
    r = brute_force_extrema(subset_pmf(make_params(4, 1, 2)), "real")
    assert (r.m1, r.m2) == pytest.approx((1.0, -1.0))
    r = brute_force_extrema(point_mass(0), "imag")
    assert (r.m1, r.m2) == (0.0, 0.0)
    r = brute_force_extrema(subset_pmf(make_params(6, 1, 3)), "real")
    assert (r.m1, r.m2) == pytest.approx((2.0, -2.0))
    with pytest.raises(ValueError):
        brute_force_extrema(point_mass(0), "abs")


@pytest.mark.parametrize("N,l,m", [(6, 2, 3), (5, 0, 2), (8, 4, 1)])
def test_not_coprime(N, l, m):
    p = make_params(N, l, m)
    for fn in (u_extrema_closed_form, v_extrema_closed_form):
        with pytest.raises(NotCoprime):
            fn(p)
    with pytest.raises(NotCoprime):
        refined_psi2_upper(p, "U")


def test_closed_forms_match_enumeration_grid():
    for N in range(2, 15):
        for l in range(1, N):
            if math.gcd(N, l) != 1:
                continue
            for m in range(1, N + 1):
                p = make_params(N, l, m)
                x = subset_pmf(p)
                for fn, mode in ((u_extrema_closed_form, "real"), (v_extrema_closed_form, "imag")):
                    c, b = fn(p), brute_force_extrema(x, mode)
                    assert c.m1 == pytest.approx(b.m1, abs=1e-9), (p, mode)
                    assert c.m2 == pytest.approx(b.m2, abs=1e-9), (p, mode)


def test_refined_upper_examples():
    p = make_params(4, 1, 2)
    assert refined_psi2_upper(p, "U") == pytest.approx(math.sqrt(2) / SQRT_LN2)
    assert refined_psi2_upper(p, "X") == pytest.approx(2 / SQRT_LN2)
    for t in "UVX":
        assert refined_psi2_upper(make_params(7, 3, 7), t) == 0.0
    with pytest.raises(ValueError):
        refined_psi2_upper(p, "W")


def test_refined_upper_symmetric_in_m():
    for N in (7, 9, 12):
        for m in range(1, N):
            a = make_params(N, 1, m)
            b = make_params(N, 1, N - m)
            assert refined_psi2_upper(a, "U") == pytest.approx(refined_psi2_upper(b, "U"))
            assert refined_psi2_upper(a, "X") == pytest.approx(refined_psi2_upper(b, "X"))


def test_refined_upper_dominates_norm():
    for N in range(2, 13):
        for m in range(1, N + 1):
            p = make_params(N, 1, m)
            x = subset_pmf(p)
            for t, mode in (("U", "real"), ("V", "imag"), ("X", "abs")):
                assert psi2_norm(x, mode) <= refined_psi2_upper(p, t) * (1 + 1e-9) + 1e-12


def test_sine_sum_examples():
    assert sine_sum(1, 0, 4) == pytest.approx(1.0)
    assert sine_sum(1, 3, 4) == pytest.approx(0.0, abs=1e-15)
    direct = math.sin(4 * math.pi / 8) + math.sin(6 * math.pi / 8) + math.sin(8 * math.pi / 8)
    assert sine_sum(2, 2, 8) == pytest.approx(direct, abs=1e-14)
    for bad in ((0, 1, 4), (1, -1, 4), (1, 1, 1)):
        with pytest.raises(ValueError):
            sine_sum(*bad)


def test_sine_sum_grid():
    worst = 0.0
    for N in range(2, 65):
        for t in range(1, N + 1):
            for q in range(N + 1):
                worst = max(worst, abs(sine_sum(t, q, N) - sine_sum_direct(t, q, N)))
    assert worst <= 1e-10


coprime = st.integers(2, 40).flatmap(
    lambda N: st.tuples(
        st.just(N),
        st.sampled_from([l for l in range(1, N) if math.gcd(N, l) == 1]),
        st.integers(1, N),
    )
)


@settings(max_examples=200, deadline=None)
@given(coprime)
def test_complement_reflection(nlm):
    N, l, m = nlm
    if m == N:
        return
    a = u_extrema_closed_form(make_params(N, l, m))
    b = u_extrema_closed_form(make_params(N, l, N - m))
    assert a.m1 == pytest.approx(-b.m2, abs=1e-12)
    c = v_extrema_closed_form(make_params(N, l, m))
    assert c.m2 == pytest.approx(-c.m1)
    # closed forms do not depend on which coprime l is used
    assert (a.m1, a.m2) == pytest.approx(
        (u_extrema_closed_form(make_params(N, 1, m)).m1, u_extrema_closed_form(make_params(N, 1, m)).m2)
    )


@settings(max_examples=60, deadline=None)
@given(coprime)
def test_extrema_bound_every_atom(nlm):
    N, l, m = nlm
    if N > 16:
        return
    p = make_params(N, l, m)
    x = subset_pmf(p)
    u, v = u_extrema_closed_form(p), v_extrema_closed_form(p)
    assert np.all(x.values.real <= u.m1 + 1e-9) and np.all(x.values.real >= u.m2 - 1e-9)
    assert np.all(np.abs(x.values.imag) <= v.m1 + 1e-9)
