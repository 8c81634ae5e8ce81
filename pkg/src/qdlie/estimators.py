"""scikit-learn style wrappers around the functional core.

``fit`` validates and stores the generator ``D`` (or the symbol and grid);
fitted attributes end with an underscore as usual, so the objects work
with ``get_params``/``set_params``, ``clone`` and pipelines.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .classifier import classify
from .flows import classify_flow, oracle_classify_flow
from .lyapunov import classify_vector, growth_rate, lyapunov_decomposition
from .operators import DEFAULT_JUMP_WEIGHT, Grid, SymbolFunction, apply_T
from .validation import check_endomorphism


class LyapunovDecomposer(TransformerMixin, BaseEstimator):
    """Fit on a generator ``D``; transform vectors into ``(j, k)``
    filtration indices (slow, fast)."""

    def __init__(self, tol=1e-8):
        self.tol = tol

    def fit(self, D, y=None):
        D = check_endomorphism(D)
        self.decomposition_ = lyapunov_decomposition(D, self.tol)
        self.lambdas_ = np.array(self.decomposition_.lambdas)
        self.generator_ = D
        self.n_features_in_ = D.shape[0]
        return self

    def transform(self, X):
        check_is_fitted(self, "decomposition_")
        X = check_array(X)
        return np.array([classify_vector(self.generator_, x, self.tol, self.decomposition_) for x in X])

    def growth_rates(self, X, direction=1, horizon=50.0):
        """Empirical exponents, one per row of ``X``."""
        check_is_fitted(self, "decomposition_")
        X = check_array(X)
        return np.array([growth_rate(self.generator_, x, direction, horizon) for x in X])


def _matrices(X):
    return [check_endomorphism(D) for D in X]


class FlowClassifier(ClassifierMixin, BaseEstimator):
    """Predict the attractor-repeller kind of ``exp(tD)`` for each ``D``.

    There is nothing to learn; ``fit`` records the label set.  With
    ``method="oracle"`` the trajectory-only verdict is used.
    """

    def __init__(self, method="spectral"):
        self.method = method

    def fit(self, X=None, y=None):
        if self.method not in ("spectral", "oracle"):
            raise ValueError(f"method must be 'spectral' or 'oracle', got {self.method!r}")
        self.classes_ = np.array(["ATTRACTOR_INFINITY", "ATTRACTOR_ZERO", "CHAIN_RECURRENT", "INCONCLUSIVE"])
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        fn = classify_flow if self.method == "spectral" else oracle_classify_flow
        return np.array([fn(D).kind.value for D in _matrices(X)])


class RegularityClassifier(ClassifierMixin, BaseEstimator):
    """Predict one flag (YES/NO/UNKNOWN) of the regularity report of
    ``C*(G_D)`` for each matrix ``D``."""

    def __init__(self, flag="quasidiagonal"):
        self.flag = flag

    def fit(self, X=None, y=None):
        from .classifier import QDReport

        if self.flag not in QDReport.FLAGS:
            raise ValueError(f"flag must be one of {QDReport.FLAGS}, got {self.flag!r}")
        self.classes_ = np.array(["NO", "UNKNOWN", "YES"])
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        return np.array([getattr(classify(D), self.flag).value.value for D in _matrices(X)])


class ProductConvolution(TransformerMixin, BaseEstimator):
    """Apply ``1 - 2 M_g T`` to grid samples (rows of ``X``) by FFT."""

    def __init__(self, symbol="logistic", L=30.0, N=2048, jump_weight=DEFAULT_JUMP_WEIGHT):
        self.symbol = symbol
        self.L = L
        self.N = N
        self.jump_weight = jump_weight

    def fit(self, X=None, y=None):
        sym = self.symbol if isinstance(self.symbol, SymbolFunction) else SymbolFunction.parse(self.symbol)
        self.grid_ = Grid(float(self.L), int(self.N))
        self.symbol_ = sym
        self.g_ = sym(self.grid_.t)
        self.n_features_in_ = self.grid_.N
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = check_array(X)
        if X.shape[1] != self.grid_.N:
            raise ValueError(f"expected {self.grid_.N} grid samples per row, got {X.shape[1]}")
        return X - 2.0 * self.g_ * apply_T(self.grid_, X, self.jump_weight)
