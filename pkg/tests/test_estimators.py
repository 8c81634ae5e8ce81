import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qdlie.estimators import FlowClassifier, LyapunovDecomposer, ProductConvolution, RegularityClassifier
from qdlie.operators import Grid, SymbolFunction, product_conv_operator


def test_lyapunov_decomposer():
    D = np.diag([-1.0, 2.0])
    est = LyapunovDecomposer().fit(D)
    assert est.lambdas_.tolist() == [2.0, -1.0]
    jk = est.transform([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    # exponents are listed in decreasing order; rows are (slow index, fast index)
    assert jk.tolist() == [[2, 2], [1, 1], [1, 2]]
    rates = est.growth_rates([[0.0, 3.0]])
    assert rates[0] == pytest.approx(2.0, abs=1e-2)


def test_params_and_clone():
    est = LyapunovDecomposer(tol=1e-6)
    assert est.get_params() == {"tol": 1e-6}
    c = clone(est.set_params(tol=1e-7))
    assert c.tol == 1e-7
    with pytest.raises(NotFittedError):
        c.transform([[1.0]])
    pc = ProductConvolution(symbol="radial:2", N=512)
    assert clone(pc).get_params()["symbol"] == "radial:2"


def test_flow_and_regularity_classifiers():
    Ds = [np.array([[1.0]]), np.diag([1.0, -1.0]), np.array([[-2.0]])]
    assert FlowClassifier().fit().predict(Ds).tolist() == ["ATTRACTOR_INFINITY", "CHAIN_RECURRENT", "ATTRACTOR_ZERO"]
    assert RegularityClassifier().fit().predict(Ds).tolist() == ["NO", "YES", "NO"]
    with pytest.raises(ValueError):
        FlowClassifier(method="magic").fit()
    with pytest.raises(ValueError):
        RegularityClassifier(flag="nuclear").fit()


def test_product_convolution_matches_dense(rng):
    est = ProductConvolution(symbol="logistic", L=20.0, N=256).fit()
    X = rng.standard_normal((4, 256))
    dense = product_conv_operator(SymbolFunction.logistic(), Grid(20.0, 256)).matrix
    assert np.allclose(est.transform(X), X @ dense.T, atol=1e-12)
    with pytest.raises(ValueError):
        est.transform(X[:, :100])
