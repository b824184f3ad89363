import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subgauss.core import ComplexAtom, Pmf, RangeError, make_params, pmf_from_samples, point_mass, roots_table


def test_make_params_flags():
    p = make_params(4, 1, 2)
    assert p.coprime and not p.halfN
    q = make_params(4, 2, 1)
    assert not q.coprime and q.halfN


@pytest.mark.parametrize("args", [(4, 4, 1), (0, 0, 1), (4, -1, 1), (4, 1, 0), (4, 1, 5), (4.0, 1, 1)])
def test_make_params_rejects(args):
    with pytest.raises(RangeError):
        make_params(*args)


def test_roots_quarter_turns():
    r = roots_table(make_params(4, 1, 1)).n_roots
    assert np.allclose(r, [-1j, -1, 1j, 1], atol=1e-15)


def test_roots_l_zero_all_ones():
    assert np.array_equal(roots_table(make_params(3, 0, 1)).n_roots, np.ones(3))


def test_roots_gcd_collapse():
    a = np.sort_complex(roots_table(make_params(6, 2, 1)).n_roots.round(12))
    b = np.sort_complex(np.repeat(roots_table(make_params(3, 1, 1)).n_roots, 2).round(12))
    assert np.allclose(a, b)


params = st.integers(1, 40).flatmap(
    lambda N: st.tuples(st.just(N), st.integers(0, N - 1), st.integers(1, N))
)


@given(params)
def test_roots_invariants(nlm):
    p = make_params(*nlm)
    r = roots_table(p).n_roots
    assert np.all(np.abs(np.abs(r) - 1) < 1e-12)
    if p.l >= 1:
        assert abs(r.sum()) < p.N * 1e-12
    if p.coprime:
        full = np.exp(-2j * np.pi * np.arange(p.N) / p.N)
        key = lambda z: np.lexsort((z.imag.round(9), z.real.round(9)))
        assert np.allclose(r[key(r)], full[key(full)], atol=1e-12)


def test_pmf_sum_to_total_enforced():
    with pytest.raises(ValueError):
        Pmf((ComplexAtom(0.0, 0.0, 2),), 3)
    with pytest.raises(ValueError):
        Pmf((ComplexAtom(0.0, 0.0, 0), ComplexAtom(1.0, 0.0, 3)), 3)


def test_pmf_grouping_and_order():
    x = pmf_from_samples([1 + 1e-13j, 1.0, -1.0, 2j], [1, 2, 3, 4])
    assert x.total == 10
    assert [a.count for a in x.atoms] == [3, 4, 3]
    assert [(round(a.re), round(a.im)) for a in x.atoms] == [(-1, 0), (0, 2), (1, 0)]


def test_big_integer_total():
    big = 2**80 + 1
    x = Pmf((ComplexAtom(0.0, 0.0, big - 1), ComplexAtom(1.0, 0.0, 1)), big)
    assert x.probs.sum() == pytest.approx(1.0)


def test_point_mass():
    x = point_mass(3)
    assert x.total == 1 and x.atoms[0].value == 3
