import numpy as np
import pytest

from poisdep.distributions import DomainError, RngStream
from poisdep.moments import empirical_acf, type_a_acf
from poisdep.simulate import simulate_inar1, simulate_type_a, simulate_type_b
from poisdep.structures import (Inar1Params, TypeAParams, TypeBParams, build_order_p,
                                build_periodic, build_seasonal, build_spatial)

N = 200_000


def _window(v, s):
    padded = np.append(v, 0)
    return padded[s.index_matrix()].sum(axis=1)


@pytest.fixture(scope="module")
def sim_a():
    return simulate_type_a(TypeAParams.stationary(5.0, 0.2, N), build_order_p(N, 1),
                           rng=RngStream(101))


@pytest.fixture(scope="module")
def sim_b():
    return simulate_type_b(TypeBParams.stationary(8.0, 0.5, N), build_order_p(N, 1),
                           rng=RngStream(102))


def test_type_a_moments(sim_a):
    x = sim_a.x.x
    assert x.mean() == pytest.approx(5.0, abs=0.015)
    assert x.var() / x.mean() == pytest.approx(1.0, abs=0.02)
    assert empirical_acf(x, 2)[1] == pytest.approx(0.2, abs=0.01)
    assert empirical_acf(x, 2)[2] == pytest.approx(0.0, abs=0.01)


def test_type_a_independent_case():
    s = build_order_p(N, 0)
    out = simulate_type_a(TypeAParams.stationary(3.0, 0.5, N), s, rng=RngStream(103))
    assert abs(empirical_acf(out.x.x, 1)[1]) < 0.007


def test_type_b_moments(sim_b):
    x = sim_b.x.x
    assert x.mean() == pytest.approx(8.0, abs=0.019)
    e = empirical_acf(x, 2)
    assert e[1] == pytest.approx(0.125, abs=0.01)
    assert e[2] == pytest.approx(0.0, abs=0.01)


def test_inar1_moments():
    out = simulate_inar1(Inar1Params(4.0, 0.8), N, rng=RngStream(104))
    assert out.x.x.mean() == pytest.approx(4.0, abs=0.013 * 3)
    assert empirical_acf(out.x.x, 2)[2] == pytest.approx(0.64, abs=0.01)
    out = simulate_inar1(Inar1Params(4.0, 1e-9), N, rng=RngStream(105))
    assert abs(empirical_acf(out.x.x, 1)[1]) < 0.01
    assert out.y[0] == 0 and out.w.size == 0


def test_latent_invariants():
    g = RngStream(106)
    for s in (build_order_p(300, 3), build_seasonal(300, 2, 4),
              build_periodic(300, 3, (0, 2, 1))):
        a = simulate_type_a(TypeAParams.stationary(6.0, 0.2, 300), s, rng=g)
        assert np.all(a.x.x >= _window(a.y, s))
        assert np.all(a.y <= a.w)
        b = simulate_type_b(TypeBParams.stationary(6.0, 0.6, 300, w_divisor=3.0), s, rng=g)
        assert np.all(b.y <= np.minimum(b.x.x, _window(b.w, s)))


def test_zero_alpha_is_iid():
    s = build_order_p(N, 3)
    out = simulate_type_a(TypeAParams.stationary(2.0, 0.0, N), s, rng=RngStream(107))
    assert out.y.sum() == 0
    assert abs(empirical_acf(out.x.x, 1)[1]) < 0.007
    assert out.x.x.var() / out.x.x.mean() == pytest.approx(1, abs=0.02)


def test_spatial_simulation_runs():
    s = build_spatial([[2, 3], [1, 3], [1, 2]])
    out = simulate_type_a(TypeAParams(2.0, [0.2, 0.2, 0.2]), s, rng=RngStream(108))
    assert out.x.T == 3


def test_domain_errors():
    s = build_order_p(10, 1)
    with pytest.raises(DomainError):
        simulate_type_a(TypeAParams.stationary(2.0, 0.6, 10), s, rng=RngStream(1))
    with pytest.raises(DomainError):
        simulate_type_b(TypeBParams.stationary(2.0, 1.2, 10), s, rng=RngStream(1))
    with pytest.raises(DomainError):
        simulate_inar1(Inar1Params(2.0, 1.0), 10, rng=RngStream(1))
    with pytest.raises(DomainError):
        simulate_type_a(TypeAParams.stationary(2.0, 0.2, 10), s, T=11, rng=RngStream(1))


def test_determinism():
    s = build_order_p(50, 2)
    a = simulate_type_b(TypeBParams.stationary(4.0, 0.3, 50), s, rng=RngStream(9))
    b = simulate_type_b(TypeBParams.stationary(4.0, 0.3, 50), s, rng=RngStream(9))
    np.testing.assert_array_equal(a.x.x, b.x.x)
    np.testing.assert_array_equal(a.w, b.w)


def test_nonstationary_ensemble_acf():
    """Ensemble check of the time-indexed Type A correlation formula."""
    T, R, p = 6, 60_000, 2
    alpha = np.array([0.1, 0.3, 0.2, 0.25, 0.15, 0.3])
    s = build_order_p(T, p)
    g = RngStream(110).generator
    X = np.array([simulate_type_a(TypeAParams(4.0, alpha), s, rng=g).x.x for _ in range(R)])
    for t, lag in [(3, 1), (3, 2), (4, 1)]:
        r = np.corrcoef(X[:, t - 1], X[:, t - 1 + lag])[0, 1]
        assert r == pytest.approx(type_a_acf(alpha, p, t, lag), abs=4 / np.sqrt(R))
