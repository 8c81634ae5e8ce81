"""Lyapunov spaces of a linear flow and their growth-rate characterisation.

For the flow ``v -> exp(tD) v`` the distinct real parts
``lambda_1 > ... > lambda_l`` of the spectrum split ``V`` into Lyapunov
spaces ``V(lambda_j)``.  The slow filtration ``V_j = V(lambda_j) + ... +
V(lambda_l)`` governs forward growth, the fast filtration
``W_j = V(lambda_1) + ... + V(lambda_j)`` backward growth.
"""

from dataclasses import dataclass
import math

import numpy as np

from .exceptions import InvalidInputError
from .spectra import CLUSTER_FACTOR, _decompose, matrix_exp, spectral_tolerance
from .validation import check_direction, check_endomorphism, check_positive, check_vector

MEMBERSHIP_TOL = 1e-8


def _orth(A):
    if A.shape[1] == 0:
        return A
    q, r = np.linalg.qr(A)
    return q


@dataclass(frozen=True)
class LyapunovDecomposition:
    lambdas: tuple
    spaces: tuple
    projectors: tuple
    slow_filtration: tuple
    fast_filtration: tuple
    dim: int

    @property
    def n_spaces(self):
        return len(self.lambdas)

    def dims(self):
        return [s.shape[1] for s in self.spaces]

    def to_dict(self):
        return {
            "lambdas": [float(x) for x in self.lambdas],
            "spaces": [s.tolist() for s in self.spaces],
            "dims": self.dims(),
        }


def _group_real_parts(clusters, radius):
    order = sorted(range(len(clusters)), key=lambda i: -clusters[i].center.real)
    groups = []
    for i in order:
        re = clusters[i].center.real
        if groups and abs(groups[-1][-1][1] - re) <= radius:
            groups[-1].append((i, re))
        else:
            groups.append([(i, re)])
    return [[i for i, _ in g] for g in groups]


def lyapunov_decomposition(D, tol=MEMBERSHIP_TOL):
    """Lyapunov spaces from spectral projectors of clusters sharing a real part.

    Real generalized eigenspaces of a conjugate pair ``mu, conj(mu)`` are
    spanned by the real and imaginary parts of the complex generalized
    eigenvectors for ``mu``.
    """
    D = check_endomorphism(D)
    check_positive(tol, "tol")
    eps = spectral_tolerance(D)
    clusters, _, _ = _decompose(D, eps, CLUSTER_FACTOR * eps)
    groups = _group_real_parts(clusters, CLUSTER_FACTOR * eps)

    lambdas, spaces, projectors = [], [], []
    for g in groups:
        mult = sum(clusters[i].multiplicity for i in g)
        lam = sum(clusters[i].center.real * clusters[i].multiplicity for i in g) / mult
        cols = []
        for i in g:
            c = clusters[i]
            if c.center.imag == 0.0:
                cols.append(c.basis.real)
            elif c.center.imag > 0:
                cols.extend([c.basis.real, c.basis.imag])
        basis = _orth(np.hstack(cols))
        P = np.real(sum(clusters[i].projector for i in g))
        lambdas.append(float(lam))
        spaces.append(basis)
        projectors.append(P)

    ell = len(lambdas)
    slow = tuple(_orth(np.hstack(spaces[j:])) for j in range(ell))
    fast = tuple(_orth(np.hstack(spaces[: j + 1])) for j in range(ell))
    return LyapunovDecomposition(
        lambdas=tuple(lambdas),
        spaces=tuple(spaces),
        projectors=tuple(projectors),
        slow_filtration=slow,
        fast_filtration=fast,
        dim=D.shape[0],
    )


def log_norm_trajectory(D, v, direction=1, horizon=50.0, step=1.0):
    """Samples ``(t, log ||exp(+-tD) v||)`` for ``t`` in ``[0, horizon]``.

    The state is renormalised after every step, so the log-norm is
    accumulated without overflow whatever the horizon.
    """
    D = check_endomorphism(D)
    v = check_vector(v, D.shape[0], allow_zero=False)
    sign = check_direction(direction)
    check_positive(horizon, "horizon")
    check_positive(step, "step")
    n_steps = max(1, int(math.ceil(horizon / step - 1e-12)))
    dt = horizon / n_steps
    M = matrix_exp(D, sign * dt)
    ts = dt * np.arange(n_steps + 1)
    logs = np.empty(n_steps + 1)
    norm = np.linalg.norm(v)
    x = v / norm
    acc = math.log(norm)
    logs[0] = acc
    for k in range(1, n_steps + 1):
        x = M @ x
        r = np.linalg.norm(x)
        if r == 0.0:
            logs[k:] = -np.inf
            break
        acc += math.log(r)
        x /= r
        logs[k] = acc
    return ts, logs


def growth_rate(D, v, direction=1, horizon=50.0, step=1.0):
    """Empirical Lyapunov exponent ``(1/T) log(||exp(+-T D) v|| / ||v||)``.

    Normalising by ``||v||`` makes the estimate scale invariant.

    Forward it approaches ``lambda_j`` for ``v`` in ``V_j \\ V_{j+1}``;
    backward it approaches ``-lambda_k`` for ``v`` in ``W_k \\ W_{k-1}``.
    """
    if horizon < 10:
        raise InvalidInputError(f"horizon must be >= 10, got {horizon}")
    ts, logs = log_norm_trajectory(D, v, direction, horizon, step)
    return float((logs[-1] - logs[0]) / ts[-1])


def _member(Q, v, tol):
    r = v - Q @ (Q.T @ v)
    return np.linalg.norm(r) <= tol * np.linalg.norm(v)


def classify_vector(D, v, tol=MEMBERSHIP_TOL, decomposition=None):
    """1-based ``(j, k)`` with ``v in V_j \\ V_{j+1}`` and ``v in W_k \\ W_{k-1}``.

    Membership is an orthogonal-projection residual test at ``tol * ||v||``.
    """
    D = check_endomorphism(D)
    v = check_vector(v, D.shape[0], allow_zero=False)
    dec = decomposition or lyapunov_decomposition(D)
    ell = dec.n_spaces
    j = max(i + 1 for i in range(ell) if i == 0 or _member(dec.slow_filtration[i], v, tol))
    k = min(i + 1 for i in range(ell) if i == ell - 1 or _member(dec.fast_filtration[i], v, tol))
    return j, k
