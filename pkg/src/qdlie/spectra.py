"""Real spectral toolkit: eigenvalues with multiplicity, Jordan-Chevalley
splitting and the matrix exponential.

Every "is zero / is purely imaginary" decision in the package is made
relative to the spectral tolerance

    eps_spec(D) = 1e-9 * max(1, ||D||_F)

and eigenvalues closer than ``CLUSTER_FACTOR * eps_spec`` are treated as
one eigenvalue with summed multiplicity.  Clusters are merged further when
the joint eigenbasis is numerically singular (perturbed Jordan blocks
split at order eps**(1/m)); such merges are reported, not hidden.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
import scipy.linalg

from .exceptions import ConditioningWarning, InvalidInputError, MatrixExpOverflowError
from .validation import check_endomorphism

SPEC_REL_TOL = 1e-9
CLUSTER_FACTOR = 1e2
BOUNDARY_FACTOR = 10.0
# cond(eigenbasis) beyond this means clusters must be merged
COND_LIMIT = 1e8
EXP_LOG_THRESHOLD = math.log(np.finfo(float).max)


def spectral_tolerance(D, rel=SPEC_REL_TOL):
    """``rel * max(1, ||D||_F)``."""
    return rel * max(1.0, float(np.linalg.norm(D)))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of the complexification of D, clustered.

    ``eigenvalues`` is a tuple of ``(value, multiplicity)`` sorted by real
    part descending, then imaginary part descending.  Conjugate clusters
    carry exactly conjugate values.
    """

    eigenvalues: tuple
    frobenius_norm: float
    dim: int
    eps: float
    warnings: tuple = ()

    @property
    def values(self):
        return np.array([z for z, _ in self.eigenvalues], dtype=complex)

    @property
    def multiplicities(self):
        return np.array([m for _, m in self.eigenvalues], dtype=int)

    @property
    def real_parts(self):
        return self.values.real

    def max_real(self):
        return float(self.real_parts.max())

    def min_real(self):
        return float(self.real_parts.min())

    def to_dict(self):
        return {
            "eigenvalues": [
                {"re": float(z.real), "im": float(z.imag), "multiplicity": int(m)}
                for z, m in self.eigenvalues
            ],
            "frobenius_norm": self.frobenius_norm,
            "dim": self.dim,
            "eps_spec": self.eps,
            "warnings": list(self.warnings),
        }


def _schur_eigenvalues(D):
    """Eigenvalues read off the real Schur form; pairs are exact conjugates."""
    T = scipy.linalg.schur(D, output="real")[0]
    n = T.shape[0]
    eigs = []
    i = 0
    while i < n:
        if i + 1 < n and T[i + 1, i] != 0.0:
            a, b, c, d = T[i, i], T[i, i + 1], T[i + 1, i], T[i + 1, i + 1]
            p = 0.5 * (a + d)
            disc = (0.5 * (a - d)) ** 2 + b * c
            if disc < 0:
                q = math.sqrt(-disc)
                eigs.extend([complex(p, q), complex(p, -q)])
            else:
                q = math.sqrt(disc)
                eigs.extend([complex(p + q, 0.0), complex(p - q, 0.0)])
            i += 2
        else:
            eigs.append(complex(T[i, i], 0.0))
            i += 1
    return np.array(eigs, dtype=complex)


def _cluster(eigs, radius):
    """Single-linkage clusters of ``eigs`` at ``radius``.

    Returns a list of ``(center, member_values)``.  Because distances are
    conjugation invariant, each cluster is either self-conjugate (its
    center is made exactly real) or paired with a mirror cluster (centers
    made exactly conjugate).
    """
    n = len(eigs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    clusters = []
    for idx in groups.values():
        members = eigs[idx]
        center = members.mean()
        clusters.append([center, members])

    # enforce exact conjugate symmetry of the reported centers
    used = set()
    for a, (ca, ma) in enumerate(clusters):
        if a in used:
            continue
        if np.array_equal(np.sort_complex(ma), np.sort_complex(ma.conj())):
            clusters[a][0] = complex(ca.real, 0.0)
            used.add(a)
            continue
        best, dist = None, np.inf
        for b, (cb, _) in enumerate(clusters):
            if b != a and b not in used and abs(cb - ca.conjugate()) < dist:
                best, dist = b, abs(cb - ca.conjugate())
        up = complex(ca.real, abs(ca.imag))
        clusters[a][0] = up if ca.imag >= 0 else up.conjugate()
        if best is not None:
            clusters[best][0] = clusters[a][0].conjugate()
            used.add(best)
        used.add(a)
    return [(complex(c), m) for c, m in clusters]


def _sort_key(z):
    return (-round(z.real, 12), -round(z.imag, 12))


def compute_spectrum(D):
    """Clustered eigenvalues of ``D`` with algebraic multiplicities.

    >>> compute_spectrum([[0.0, 1.0], [-1.0, 0.0]]).eigenvalues
    ((1j, 1), (-1j, 1))
    """
    D = check_endomorphism(D)
    eps = spectral_tolerance(D)
    clusters, _, notes = _decompose(D, eps, CLUSTER_FACTOR * eps)
    pairs = sorted(((c.center, c.multiplicity) for c in clusters), key=lambda p: _sort_key(p[0]))
    return Spectrum(
        eigenvalues=tuple(pairs),
        frobenius_norm=float(np.linalg.norm(D)),
        dim=D.shape[0],
        eps=eps,
        warnings=notes,
    )


@dataclass(frozen=True)
class SpectralCluster:
    center: complex
    multiplicity: int
    basis: np.ndarray  # complex n x m, columns span the generalized eigenspace
    projector: np.ndarray  # complex n x n spectral projector


@dataclass(frozen=True)
class JordanChevalley:
    """D = S + N with S semisimple, N nilpotent, SN = NS."""

    semisimple_part: np.ndarray
    nilpotent_part: np.ndarray
    is_semisimple: bool
    clusters: tuple = field(repr=False)
    condition_number: float = 1.0
    warnings: tuple = ()

    @property
    def S(self):
        return self.semisimple_part

    @property
    def N(self):
        return self.nilpotent_part

    def nilpotency_index(self, cluster, tol):
        """Largest Jordan block size for ``cluster``: first k with
        ``||N^k P|| <= tol`` (rank plateau of the nilpotent part)."""
        P = cluster.projector
        Nk = P.copy()
        scale = max(1.0, np.linalg.norm(self.nilpotent_part, 2))
        for k in range(1, cluster.multiplicity + 1):
            Nk = self.nilpotent_part @ Nk
            if np.linalg.norm(Nk, 2) <= tol * scale**k * max(1.0, np.linalg.norm(P, 2)):
                return k
        return cluster.multiplicity


def _cluster_basis(D, members, scale, real_cluster):
    n = D.shape[0]
    m = len(members)
    if m == n:
        return np.eye(n, dtype=complex)
    prod = np.eye(n, dtype=complex)
    I = np.eye(n)
    for lam in members:
        prod = ((D - lam * I) / scale) @ prod
    if real_cluster:
        prod = prod.real
    vh = np.linalg.svd(prod)[2]
    basis = vh[n - m:].conj().T
    if real_cluster:
        basis = basis.real.astype(complex)
    return basis


def _decompose(D, eps, radius):
    """Spectral clusters with bases and projectors; merges clusters while
    the joint eigenbasis is ill-conditioned."""
    eigs = _schur_eigenvalues(D)
    w, V = np.linalg.eig(D)
    scale = max(1.0, float(np.linalg.norm(D, 2)))
    notes = []
    while True:
        clusters = _cluster(eigs, radius)
        clusters.sort(key=lambda p: _sort_key(p[0]))
        bases = []
        done = {}
        for i, (c, members) in enumerate(clusters):
            if i in done:
                bases.append(done[i])
                continue
            if len(members) == 1:
                v = V[:, np.argmin(np.abs(w - members[0]))]
                basis = (v.real if c.imag == 0.0 else v).astype(complex).reshape(-1, 1)
                basis /= np.linalg.norm(basis)
            else:
                basis = _cluster_basis(D, members, scale, c.imag == 0.0)
            bases.append(basis)
            if abs(c.imag) > 0:
                for j in range(i + 1, len(clusters)):
                    if clusters[j][0] == c.conjugate() and j not in done:
                        done[j] = basis.conj()
                        break
        B = np.hstack(bases)
        cond = np.linalg.cond(B) if B.shape[0] == B.shape[1] else np.inf
        if cond <= COND_LIMIT or len(clusters) == 1:
            break
        centers = np.array([c for c, _ in clusters])
        dists = np.abs(centers[:, None] - centers[None, :])
        dists[np.diag_indices_from(dists)] = np.inf
        new_radius = float(dists.min()) * (1 + 1e-9)
        notes.append(
            f"eigenbasis condition {cond:.3g} exceeds {COND_LIMIT:.0e}; "
            f"merged eigenvalue clusters at radius {new_radius:.3g}"
        )
        radius = new_radius
    Binv = np.linalg.inv(B)
    out = []
    col = 0
    for (c, members), basis in zip(clusters, bases):
        m = len(members)
        E = np.zeros(B.shape[0])
        E[col:col + m] = 1.0
        P = (B * E) @ Binv
        out.append(SpectralCluster(center=c, multiplicity=m, basis=basis, projector=P))
        col += m
    return out, float(cond), tuple(notes)


def jordan_chevalley(D, tol=1e-8):
    """Additive Jordan-Chevalley decomposition by spectral projectors.

    ``S = sum_c mu_c P_c`` over eigenvalue clusters ``c``; ``N = D - S``.
    ``is_semisimple`` is ``||N|| <= tol * ||D||``.  Ill-conditioned
    eigenstructure is reported through :class:`ConditioningWarning` and
    the ``warnings`` field, never silently.
    """
    D = check_endomorphism(D)
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    eps = spectral_tolerance(D)
    clusters, cond, notes = _decompose(D, eps, CLUSTER_FACTOR * eps)
    S = sum(c.center * c.projector for c in clusters)
    # conjugate clusters use conjugate bases, so the imaginary part is rounding
    S = np.asarray(np.real(S), dtype=float)
    N = D - S
    normD = float(np.linalg.norm(D))
    is_ss = bool(np.linalg.norm(N) <= tol * max(normD, np.finfo(float).tiny)) or not np.any(N)
    for note in notes:
        warnings.warn(note, ConditioningWarning, stacklevel=2)
    return JordanChevalley(
        semisimple_part=S,
        nilpotent_part=N,
        is_semisimple=is_ss,
        clusters=tuple(clusters),
        condition_number=cond,
        warnings=notes,
    )


def matrix_exp(D, t=1.0):
    """``exp(tD)`` by scaling and squaring (scipy's Pade implementation).

    Raises :class:`MatrixExpOverflowError` when the spectral abscissa of
    ``tD`` exceeds ``log(float max)`` or the result is not finite.
    """
    D = check_endomorphism(D)
    t = float(t)
    if not np.isfinite(t):
        raise InvalidInputError("t must be finite")
    if t == 0.0:
        return np.eye(D.shape[0])
    re = np.linalg.eigvals(D).real
    growth = t * (re.max() if t > 0 else re.min())
    if growth > EXP_LOG_THRESHOLD:
        raise MatrixExpOverflowError(growth, EXP_LOG_THRESHOLD)
    with np.errstate(over="ignore", invalid="ignore"):
        E = scipy.linalg.expm(t * D)
    if not np.all(np.isfinite(E)):
        raise MatrixExpOverflowError(growth, EXP_LOG_THRESHOLD)
    return E
