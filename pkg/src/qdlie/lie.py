"""Finite-dimensional real Lie algebras given by structure constants.

``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
"""

import numpy as np

from .exceptions import InvalidInputError

JACOBI_TOL = 1e-10


def check_structure_constants(c):
    c = np.array(c, dtype=float)
    if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] == 0:
        raise InvalidInputError(f"structure constants must have shape (n, n, n), got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InvalidInputError("structure constants have non-finite entries")
    if not np.array_equal(c, -c.transpose(1, 0, 2)):
        raise InvalidInputError("structure constants are not antisymmetric in (i, j)")
    defect = jacobi_defect(c)
    if defect > JACOBI_TOL * max(1.0, np.abs(c).max() ** 2):
        raise InvalidInputError(f"Jacobi identity fails (defect {defect:.3g})")
    return c


def jacobi_defect(c):
    # [e_i,[e_j,e_k]] + cyclic
    t = np.einsum("jkm,iml->ijkl", c, c)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.abs(cyc).max())


def bracket(c, x, y):
    return np.einsum("i,j,ijk->k", x, y, c)


def ad(c, x):
    """Matrix of ``y -> [x, y]`` (columns are images of basis vectors)."""
    return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), c)


def _span(vectors, tol):
    if len(vectors) == 0:
        return np.zeros((0, 0))
    A = np.array(vectors, dtype=float)
    if A.size == 0:
        return np.zeros((0, A.shape[-1]))
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return vh[:rank]


def _bracket_span(c, A, B, tol):
    n = c.shape[0]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, n))
    vecs = [bracket(c, a, b) for a in A for b in B]
    S = _span(vecs, tol)
    return S if S.size else np.zeros((0, n))


def derived_series(c, tol=1e-10):
    """Dimensions of ``g, [g,g], [[g,g],[g,g]], ...`` until stable."""
    n = c.shape[0]
    cur = np.eye(n)
    dims = [n]
    while True:
        nxt = _bracket_span(c, cur, cur, tol)
        dims.append(nxt.shape[0])
        if nxt.shape[0] == cur.shape[0] or nxt.shape[0] == 0:
            return dims
        cur = nxt


def lower_central_series(c, tol=1e-10):
    """Dimensions of ``g, [g,g], [g,[g,g]], ...`` until stable."""
    n = c.shape[0]
    g = np.eye(n)
    cur = g
    dims = [n]
    while True:
        nxt = _bracket_span(c, g, cur, tol)
        dims.append(nxt.shape[0])
        if nxt.shape[0] == cur.shape[0] or nxt.shape[0] == 0:
            return dims
        cur = nxt


def is_solvable(c, tol=1e-10):
    return derived_series(c, tol)[-1] == 0


def is_nilpotent(c, tol=1e-10):
    return lower_central_series(c, tol)[-1] == 0


def semidirect_form(c, tol=1e-12):
    """Detect ``g = R x_D V`` with ``V`` an abelian ideal spanned by all basis
    vectors but one.  Returns ``(index, D)`` or ``None``."""
    n = c.shape[0]
    if n < 2:
        return None
    scale = max(1.0, np.abs(c).max())
    for i in range(n):
        rest = [j for j in range(n) if j != i]
        sub = c[np.ix_(rest, rest)]
        if np.abs(sub).max() > tol * scale:
            continue
        if np.abs(c[i, rest, i]).max() > tol * scale:
            continue
        D = c[i][np.ix_(rest, rest)].T
        return i, np.ascontiguousarray(D)
    return None


def lie_algebra_from_matrix(D):
    """Structure constants of ``g_D = R x_D V`` with basis ``(t, v_1..v_n)``."""
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    c = np.zeros((n + 1, n + 1, n + 1))
    c[0, 1:, 1:] = D.T
    c[1:, 0, 1:] = -D.T
    return c
