import numpy as np
import pytest

from qdlie import InvalidInputError
from qdlie import lie
from qdlie.catalog import euclid_scaled_constants, heisenberg_constants, s4_constants


def brute_bracket(c, x, y):
    n = c.shape[0]
    return sum(x[i] * y[j] * c[i, j] for i in range(n) for j in range(n))


def test_matrix_algebra_brackets():
    D = np.array([[1.0, 2.0], [3.0, 4.0]])
    c = lie.lie_algebra_from_matrix(D)
    t, v1, v2 = np.eye(3)
    # [t, v] = D v
    assert np.allclose(lie.bracket(c, t, v1)[1:], D @ [1, 0])
    assert np.allclose(lie.bracket(c, t, v2)[1:], D @ [0, 1])
    assert np.allclose(lie.bracket(c, v1, v2), 0)
    lie.check_structure_constants(c)


def test_ad_columns_are_images(rng):
    c = s4_constants()
    x = rng.standard_normal(4)
    A = lie.ad(c, x)
    for j, e in enumerate(np.eye(4)):
        assert np.allclose(A[:, j], brute_bracket(c, x, e))


def test_semidirect_form_recovers_generator(rng):
    D = rng.standard_normal((3, 3))
    idx, D2 = lie.semidirect_form(lie.lie_algebra_from_matrix(D))
    assert idx == 0
    assert np.allclose(D2, D)


def test_semidirect_form_rejects_nonabelian_complement():
    assert lie.semidirect_form(s4_constants()) is None


def test_series():
    h = heisenberg_constants()
    assert lie.lower_central_series(h) == [3, 1, 0]
    assert lie.is_nilpotent(h) and lie.is_solvable(h)
    s4 = s4_constants()
    assert lie.is_solvable(s4) and not lie.is_nilpotent(s4)
    assert lie.derived_series(s4) == [4, 2, 0]


def test_so3_is_not_solvable():
    c = euclid_scaled_constants(3)
    lie.check_structure_constants(c)
    assert not lie.is_solvable(c)
    assert lie.is_solvable(euclid_scaled_constants(2))


def test_validation():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0
    with pytest.raises(InvalidInputError, match="antisymmetric"):
        lie.check_structure_constants(c)
    with pytest.raises(InvalidInputError):
        lie.check_structure_constants(np.zeros((2, 3, 2)))
    bad = np.zeros((3, 3, 3))
    # [e0, e1] = e1, [e0, e2] = e0, [e1, e2] = e2 breaks Jacobi
    for i, j, k in [(0, 1, 1), (0, 2, 0), (1, 2, 2)]:
        bad[i, j, k], bad[j, i, k] = 1.0, -1.0
    assert lie.jacobi_defect(bad) > 0
    with pytest.raises(InvalidInputError, match="Jacobi"):
        lie.check_structure_constants(bad)
