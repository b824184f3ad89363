import math

import numpy as np
import pytest

from subgauss.core import make_params
from subgauss.exact_dist import subset_pmf
from subgauss.moments import subset_variance_closed
from subgauss.norms import psi2_norm
from subgauss.sampler import (
    McConfig,
    Welford,
    psi2_norm_mc,
    sample_bernoulli_model,
    sample_subset_model,
    variance_ratio_mc,
)


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(n_samples=0)
    with pytest.raises(ValueError):
        McConfig(ci_level=1.0)
    with pytest.raises(ValueError):
        McConfig(seed=-1)
    assert McConfig(ci_level=0.95).z == pytest.approx(1.959964, abs=1e-6)


def test_welford_matches_numpy():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(1000, 3))
    acc = Welford(3)
    for block in np.array_split(x, 7):
        acc.push_batch(block)
    acc.push_batch(x[:0])
    assert np.allclose(acc.mean, x.mean(axis=0))
    assert np.allclose(acc.var, x.var(axis=0, ddof=1))


def test_deterministic_for_seed():
    p = make_params(30, 7, 11)
    cfg = McConfig(n_samples=20_000, seed=42)
    a, b = sample_subset_model(p, cfg), sample_subset_model(p, cfg)
    assert a == b
    c = sample_subset_model(p, McConfig(n_samples=20_000, seed=43))
    assert c.second_abs != a.second_abs


def test_constant_and_full_cases():
    est = sample_subset_model(make_params(10, 0, 4), McConfig(n_samples=5000))
    assert est.mean == 4 and est.second_abs == 16 and est.variance == 0
    est = sample_subset_model(make_params(9, 2, 9), McConfig(n_samples=5000))
    assert est.mean == 0 and est.second_abs == 0
    assert est.stderr["second_abs"] == 0


def test_subset_samples_match_exact_distribution():
    p = make_params(8, 3, 3)
    x = subset_pmf(p)
    est = sample_subset_model(p, McConfig(n_samples=200_000, seed=1))
    assert est.within("second_abs", subset_variance_closed(p), 5)
    assert est.within("mean_re", 0.0, 5) and est.within("mean_im", 0.0, 5)
    u = float(np.dot(x.probs, x.values.real**2))
    assert est.within("u_second", u, 5)


def test_bernoulli_model_variance():
    p = make_params(40, 9, 13)
    est = sample_bernoulli_model(p, McConfig(n_samples=200_000, seed=5))
    assert est.model == "bernoulli"
    assert est.within("second_abs", 13 * 27 / 40, 5)


def test_variance_ratio_mc():
    p = make_params(20, 3, 8)
    r, se = variance_ratio_mc(p, McConfig(n_samples=200_000, seed=9))
    assert abs(r - 20 / 19) <= 5 * se
    assert se > 0


def test_half_width_shrinks_with_n():
    p = make_params(25, 4, 10)
    a = sample_subset_model(p, McConfig(n_samples=20_000, seed=2))
    b = sample_subset_model(p, McConfig(n_samples=80_000, seed=2))
    ratio = b.half_widths["second_abs"] / a.half_widths["second_abs"]
    assert ratio == pytest.approx(0.5, rel=0.1)


def test_psi2_mc_close_to_exact():
    p = make_params(4, 1, 2)
    exact = psi2_norm(subset_pmf(p))
    est = psi2_norm_mc(p, McConfig(n_samples=100_000, seed=0))
    assert est == pytest.approx(exact, rel=0.02)


def test_psi2_mc_exact_for_constant():
    p = make_params(6, 0, 2)
    assert psi2_norm_mc(p, McConfig(n_samples=1000)) == pytest.approx(2 / math.sqrt(math.log(2)))


@pytest.mark.slow
def test_ci_coverage():
    # 99% intervals should cover the closed-form value in nearly every run
    cases = [(12, 1, 5), (15, 4, 7), (20, 3, 10), (9, 2, 1), (30, 7, 29)]
    misses = 0
    for N, l, m in cases:
        p = make_params(N, l, m)
        target = subset_variance_closed(p)
        for seed in range(50):
            est = sample_subset_model(p, McConfig(n_samples=5_000, seed=seed))
            if abs(est.second_abs - target) > est.half_widths["second_abs"]:
                misses += 1
    assert misses <= 8
