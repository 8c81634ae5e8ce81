import math
import warnings

import numpy as np
import pytest
import scipy.linalg
import sympy
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from qdlie import ConditioningWarning, InvalidInputError, MatrixExpOverflowError
from qdlie.spectra import compute_spectrum, jordan_chevalley, matrix_exp, spectral_tolerance


def sorted_values(spec):
    return sorted(
        (z for z, m in spec.eigenvalues for _ in range(m)), key=lambda z: (z.real, z.imag)
    )


def test_zero_matrix_double_eigenvalue():
    spec = compute_spectrum(np.zeros((2, 2)))
    assert spec.eigenvalues == ((0j, 2),)


def test_rotating_dilation_spectrum():
    sigma = 0.7
    spec = compute_spectrum([[sigma, 1.0], [-1.0, sigma]])
    assert spec.eigenvalues == ((complex(sigma, 1.0), 1), (complex(sigma, -1.0), 1))


def test_companion_matrix_against_polynomial_roots():
    # t^3 - 2t^2 - t + 2 = (t - 1)(t + 1)(t - 2)
    C = np.array([[2.0, 1.0, -2.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    got = sorted(z.real for z in compute_spectrum(C).values)
    ref = sorted(np.roots([1, -2, -1, 2]).real)
    assert np.allclose(got, ref, atol=1e-12)
    assert np.allclose(got, [-1, 1, 2])


def test_ordering_real_then_imaginary_descending():
    D = scipy.linalg.block_diag(np.diag([1.0, 3.0, -2.0]), [[3.0, 2.0], [-2.0, 3.0]])
    vals = compute_spectrum(D).values
    assert list(vals) == [3 + 2j, 3 + 0j, 3 - 2j, 1 + 0j, -2 + 0j]


def test_invalid_inputs():
    with pytest.raises(InvalidInputError):
        compute_spectrum(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        compute_spectrum([[np.nan]])
    with pytest.raises(InvalidInputError):
        jordan_chevalley(np.eye(2), tol=0)


square = st.integers(1, 6).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-5, 5, allow_nan=False, width=32))
)


@given(square)
def test_multiplicities_sum_and_exact_conjugate_symmetry(D):
    spec = compute_spectrum(D)
    assert spec.multiplicities.sum() == D.shape[0]
    table = {z: m for z, m in spec.eigenvalues}
    for z, m in spec.eigenvalues:
        assert table.get(z.conjugate()) == m


@given(square)
def test_trace_and_determinant_oracle(D):
    spec = compute_spectrum(D)
    vals = np.repeat(spec.values, spec.multiplicities)
    scale = max(1.0, np.linalg.norm(D))
    assert abs(vals.sum().real - np.trace(D)) <= 1e-6 * scale


def test_jc_symmetric_is_semisimple(rng):
    A = rng.standard_normal((5, 5))
    D = A + A.T
    jc = jordan_chevalley(D)
    assert jc.is_semisimple
    assert np.allclose(jc.S, D, atol=1e-10)
    assert np.allclose(jc.N, 0, atol=1e-10)


def test_jc_nilpotent_block():
    D = np.array([[0.0, 1.0], [0.0, 0.0]])
    jc = jordan_chevalley(D)
    assert np.array_equal(jc.S, np.zeros((2, 2)))
    assert np.array_equal(jc.N, D)
    assert not jc.is_semisimple


def test_jc_distinct_eigenvalues_are_semisimple():
    # distinct eigenvalues 1, 2: D is diagonalisable, so S = D and N = 0
    D = np.array([[1.0, 1.0], [0.0, 2.0]])
    jc = jordan_chevalley(D)
    assert np.allclose(jc.S + jc.N, D, atol=1e-12)
    assert np.allclose(jc.N, 0, atol=1e-12)
    assert jc.is_semisimple


def _sympy_jc(D):
    M = sympy.Matrix(D)
    P, J = M.jordan_form()
    Jd = sympy.diag(*[J[i, i] for i in range(J.shape[0])])
    S = P * Jd * P.inv()
    return np.array(S.evalf(), dtype=complex).real


@pytest.mark.parametrize(
    "D",
    [
        [[2, 1, 0], [0, 2, 0], [0, 0, 3]],
        [[0, 1, 0, 0], [-1, 0, 1, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        [[1, 1, 0], [0, 1, 1], [0, 0, 1]],
        [[3, 1, 2], [0, 3, 4], [0, 0, -1]],
    ],
)
def test_jc_against_exact_jordan_form(D):
    D = np.array(D, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        jc = jordan_chevalley(D)
    assert np.allclose(jc.S, _sympy_jc(D), atol=1e-7)
    n = D.shape[0]
    tol = 1e-6
    nd = np.linalg.norm(D)
    assert np.linalg.norm(jc.S + jc.N - D) <= tol * nd
    assert np.linalg.norm(jc.S @ jc.N - jc.N @ jc.S) <= tol * nd**2
    assert np.linalg.norm(np.linalg.matrix_power(jc.N, n)) <= tol * nd**n


def test_perturbed_jordan_block_merges_with_warning():
    D = np.array([[5.0, 1.0, 0.0], [0.0, 5.0, 1.0], [1e-14, 0.0, 5.0]])
    with pytest.warns(ConditioningWarning):
        jc = jordan_chevalley(D)
    assert len(jc.clusters) == 1
    assert jc.clusters[0].multiplicity == 3
    assert jc.warnings
    assert np.linalg.norm(np.linalg.matrix_power(jc.N, 3)) < 1e-9
    spec = compute_spectrum(D)
    assert spec.eigenvalues[0][1] == 3 and spec.warnings


def test_nilpotency_index_of_jordan_block():
    D = np.diag([2.0] * 3) + np.diag([1.0, 1.0], 1)
    jc = jordan_chevalley(D)
    assert jc.nilpotency_index(jc.clusters[0], 1e-9) == 3


@given(square)
def test_jc_invariants(D):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        jc = jordan_chevalley(D)
    nd = max(1.0, np.linalg.norm(D))
    assert np.linalg.norm(jc.S + jc.N - D) <= 1e-8 * nd
    if not jc.warnings:
        assert np.linalg.norm(jc.S @ jc.N - jc.N @ jc.S) <= 1e-6 * nd**2


def test_matrix_exp_examples():
    D = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert np.array_equal(matrix_exp(D, 0.0), np.eye(2))
    assert np.allclose(matrix_exp(D, math.pi / 2), [[0, 1], [-1, 0]], atol=1e-14)
    assert np.allclose(matrix_exp(np.diag([1.0, -2.0]), 0.5), np.diag([math.exp(0.5), math.exp(-1.0)]),
                       rtol=1e-14)


def test_matrix_exp_overflow_reports_threshold():
    with pytest.raises(MatrixExpOverflowError) as info:
        matrix_exp([[1.0]], 1000.0)
    assert info.value.threshold == pytest.approx(math.log(np.finfo(float).max))
    assert info.value.growth == pytest.approx(1000.0)


small = arrays(np.float64, (3, 3), elements=st.floats(-3, 3, allow_nan=False, width=32))


@given(small, st.floats(-10, 10), st.floats(-10, 10))
def test_exp_group_law_and_determinant(D, s, t):
    # rounding in exp(sD) exp(tD) is relative to the factor norms, and
    # det(exp(tD)) inherits the condition number of exp(tD)
    if np.linalg.norm(D, 2) > 10:
        D = D * 10 / np.linalg.norm(D, 2)
    Es, Et = matrix_exp(D, s), matrix_exp(D, t)
    A = matrix_exp(D, s + t)
    scale = max(1.0, np.linalg.norm(Es) * np.linalg.norm(Et))
    assert np.linalg.norm(A - Es @ Et) <= 1e-9 * scale
    ref = math.exp(t * np.trace(D))
    assert abs(np.linalg.det(Et) - ref) <= 1e-9 * ref * np.linalg.cond(Et)


@pytest.mark.parametrize("t", [-10.0, -1.5, 0.3, 4.0, 10.0])
def test_exp_determinant_normal_generator(t):
    D = np.array([[0.2, 1.0, 0.0], [-1.0, 0.2, 0.0], [0.0, 0.0, -0.3]])
    ref = math.exp(t * np.trace(D))
    assert abs(np.linalg.det(matrix_exp(D, t)) - ref) <= 1e-9 * ref
    assert np.allclose(matrix_exp(D, t) @ matrix_exp(D, -t), np.eye(3), atol=1e-9)


def test_spectral_tolerance_scale():
    assert spectral_tolerance(np.zeros((2, 2))) == 1e-9
    assert spectral_tolerance(np.eye(4) * 10) == pytest.approx(2e-8)
