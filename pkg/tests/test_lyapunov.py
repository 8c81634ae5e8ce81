import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from qdlie import InvalidInputError
from qdlie.lyapunov import (
    classify_vector,
    growth_rate,
    log_norm_trajectory,
    lyapunov_decomposition,
)


def span_contains(Q, v, tol=1e-8):
    r = v - Q @ np.linalg.lstsq(Q, v, rcond=None)[0]
    return np.linalg.norm(r) <= tol * np.linalg.norm(v)


def test_diagonal_example():
    dec = lyapunov_decomposition(np.diag([3.0, 1.0, -2.0]))
    assert dec.lambdas == (3.0, 1.0, -2.0)
    for j, axis in enumerate(np.eye(3)):
        assert dec.dims()[j] == 1
        assert span_contains(dec.spaces[j], axis)


def test_rotating_dilation_single_space():
    sigma = -0.4
    dec = lyapunov_decomposition([[sigma, 1.0], [-1.0, sigma]])
    assert dec.lambdas == pytest.approx((sigma,))
    assert dec.dims() == [2]


def test_jordan_block_generalized_eigenspace():
    D = 5 * np.eye(3) + np.diag([1.0, 1.0], 1)
    assert np.allclose(np.linalg.matrix_power(D - 5 * np.eye(3), 3), 0)
    dec = lyapunov_decomposition(D)
    assert dec.lambdas == pytest.approx((5.0,))
    assert dec.dims() == [3]


def test_filtrations_nested_and_intersections(rng):
    P = rng.standard_normal((4, 4))
    D = P @ np.diag([2.0, 2.0, 0.5, -1.0]) @ np.linalg.inv(P)
    D[:, :] = D  # keep float
    dec = lyapunov_decomposition(D)
    assert dec.lambdas == pytest.approx((2.0, 0.5, -1.0), abs=1e-6)
    assert dec.dims() == [2, 1, 1]
    ell = dec.n_spaces
    for j in range(ell - 1):
        assert all(span_contains(dec.slow_filtration[j], x) for x in dec.slow_filtration[j + 1].T)
        assert all(span_contains(dec.fast_filtration[j + 1], x) for x in dec.fast_filtration[j].T)
    for j in range(ell):
        # V(lambda_j) lies in V_j and in W_j
        for x in dec.spaces[j].T:
            assert span_contains(dec.slow_filtration[j], x, 1e-6)
            assert span_contains(dec.fast_filtration[j], x, 1e-6)
        # D-invariance
        Pj = dec.projectors[j]
        assert np.linalg.norm((np.eye(4) - Pj) @ D @ Pj) <= 1e-6 * np.linalg.norm(D) * np.linalg.cond(P)
    B = np.hstack(dec.spaces)
    assert np.linalg.matrix_rank(B) == 4


def test_classify_vector_examples():
    D = np.diag([3.0, 1.0, -2.0])
    assert classify_vector(D, [0, 1, 0]) == (2, 2)
    assert classify_vector(D, [1, 0, 1]) == (1, 3)
    assert classify_vector([[5.0]], [2.0]) == (1, 1)
    with pytest.raises(InvalidInputError):
        classify_vector(D, [0, 0, 0])


def test_classify_vector_matches_growth_rates():
    D = np.diag([3.0, 1.0, -2.0])
    v = np.array([1.0, 0.0, 1.0])
    j, k = classify_vector(D, v)
    lam = lyapunov_decomposition(D).lambdas
    assert growth_rate(D, v, "+inf", 50) == pytest.approx(lam[j - 1], abs=1e-2)
    assert growth_rate(D, v, "-inf", 50) == pytest.approx(-lam[k - 1], abs=1e-2)


def test_growth_rate_examples():
    D = np.diag([2.0, -1.0])
    assert growth_rate(D, [1, 0], 1, 50) == pytest.approx(2.0, abs=1e-12)
    assert growth_rate(D, [1, 1], -1, 50) == pytest.approx(1.0, abs=1e-2)
    rot = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert growth_rate(rot, [0.3, -2.0], 1, 50) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(InvalidInputError):
        growth_rate(D, [1, 0], 1, 5)


def test_growth_rate_never_overflows():
    D = 10 * np.eye(2) / np.sqrt(2)
    rate = growth_rate(D, [1, 1], 1, 100)
    assert np.isfinite(rate)
    assert rate == pytest.approx(10 / np.sqrt(2))
    ts, logs = log_norm_trajectory(D, [1, 1], 1, 100, 1)
    assert np.all(np.isfinite(logs)) and logs[-1] > 700


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4, unique=True), st.integers(0, 2**32 - 1))
def test_growth_rate_bounded_by_extreme_real_parts(reals, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    Q = scipy.linalg.qr(rng.standard_normal((len(reals), len(reals))))[0]
    D = Q @ np.diag(reals) @ Q.T
    v = rng.standard_normal(len(reals))
    r = growth_rate(D, v, 1, 20)
    assert min(reals) - 0.2 <= r <= max(reals) + 1e-9


def test_growth_rate_roundoff_limit():
    # v misses the slow space; backward, its rounding residue there grows
    # like e^(gap T) and overtakes once gap T exceeds log(1/eps)
    D = np.diag([2.0, 1.0, 0.0])
    Q = scipy.linalg.qr(np.random.default_rng(0).standard_normal((3, 3)))[0]
    A = Q @ D @ Q.T
    v = Q @ np.array([1.0, 1.0, 0.0])
    # log(1/sqrt 2) / 20 normalisation bias at the short horizon
    assert growth_rate(A, v, -1, horizon=20.0) == pytest.approx(-1.0 - np.log(2) / 40, abs=1e-3)
    assert growth_rate(A, v, -1, horizon=50.0) > -0.9
