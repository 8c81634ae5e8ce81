"""Linear flows ``alpha_D(v, t) = exp(tD) v`` on the one-point
compactification ``V u {inf}``.

:func:`classify_flow` decides the attractor-repeller structure exactly from
the signs of the real parts of the spectrum.  :func:`oracle_classify_flow`
reaches a verdict from trajectories alone and is kept independent of the
spectral route so the two can be compared.
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import InvalidInputError, PreconditionError
from .spectra import BOUNDARY_FACTOR, compute_spectrum, jordan_chevalley, matrix_exp
from .validation import (
    check_direction,
    check_endomorphism,
    check_positive,
    check_random_state,
    check_vector,
)

INFINITY_FACTOR = 1e6
RESOLUTION_FACTOR = 1e-3


class FlowKind(str, enum.Enum):
    ATTRACTOR_ZERO = "ATTRACTOR_ZERO"  # pair ({0}, {inf})
    ATTRACTOR_INFINITY = "ATTRACTOR_INFINITY"  # pair ({inf}, {0})
    CHAIN_RECURRENT = "CHAIN_RECURRENT"  # no nontrivial pair
    INCONCLUSIVE = "INCONCLUSIVE"  # oracle only

    def swapped(self):
        if self is FlowKind.ATTRACTOR_ZERO:
            return FlowKind.ATTRACTOR_INFINITY
        if self is FlowKind.ATTRACTOR_INFINITY:
            return FlowKind.ATTRACTOR_ZERO
        return self


class _Infinity:
    """The point at infinity of the compactification."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


@dataclass(frozen=True)
class FlowClassification:
    kind: FlowKind
    witness: dict
    boundary_flag: bool = False
    source: str = "spectral"

    @property
    def attractor(self):
        return {FlowKind.ATTRACTOR_ZERO: "{0}", FlowKind.ATTRACTOR_INFINITY: "{inf}"}.get(self.kind)

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "attractor_repeller_pair": {
                FlowKind.ATTRACTOR_ZERO: ["{0}", "{inf}"],
                FlowKind.ATTRACTOR_INFINITY: ["{inf}", "{0}"],
            }.get(self.kind),
            "witness": self.witness,
            "boundary_flag": self.boundary_flag,
            "source": self.source,
        }


def classify_flow(D):
    """Attractor-repeller structure of ``alpha_D`` from the spectrum.

    A nontrivial pair exists iff every eigenvalue has ``Re > 0`` (pair
    ``({inf}, {0})``) or every eigenvalue has ``Re < 0`` (pair
    ``({0}, {inf})``); otherwise the flow is chain recurrent.  Real parts
    within ``10 * eps_spec`` of zero count as zero and set ``boundary_flag``.
    """
    D = check_endomorphism(D)
    spec = compute_spectrum(D)
    thr = BOUNDARY_FACTOR * spec.eps
    hi, lo = spec.max_real(), spec.min_real()
    if hi < -thr:
        kind = FlowKind.ATTRACTOR_ZERO
    elif lo > thr:
        kind = FlowKind.ATTRACTOR_INFINITY
    else:
        kind = FlowKind.CHAIN_RECURRENT
    boundary = bool(np.any(np.abs(spec.real_parts) <= thr))
    witness = {"max_re": hi, "min_re": lo, "threshold": thr}
    return FlowClassification(kind=kind, witness=witness, boundary_flag=boundary)


@dataclass(frozen=True)
class OmegaSetEstimate:
    """Late-time sample of a trajectory, clustered.

    ``points`` holds finite cluster representatives (rows); ``INFINITY``
    membership is carried by ``contains_infinity``.
    """

    points: np.ndarray
    contains_infinity: bool
    params: dict
    low_confidence: bool = False

    def as_points(self):
        out = [p for p in self.points]
        if self.contains_infinity:
            out.append(INFINITY)
        return out


def _powers(D, step, block):
    return np.stack([matrix_exp(D, step * k) for k in range(1, block + 1)])


def trajectory(D, v, direction=1, t_end=10.0, step=0.01, t_start=0.0, block=128):
    """Samples of ``exp(+-tD) v`` for ``t`` on ``[t_start, t_end]``.

    Returns ``(ts, unit, log_norm)`` where the state is ``exp(log_norm) *
    unit``; nothing overflows however large the growth.
    """
    D = check_endomorphism(D)
    n = D.shape[0]
    v = check_vector(v, n)
    sign = check_direction(direction)
    check_positive(step, "step")
    if not t_end > t_start >= 0:
        raise InvalidInputError("need t_end > t_start >= 0")
    n_total = int(math.floor(t_end / step + 1e-9))
    k0 = int(math.ceil(t_start / step - 1e-9))
    ts = step * np.arange(k0, n_total + 1)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return ts, np.zeros((len(ts), n)), np.full(len(ts), -np.inf)
    # keep every precomputed power far from overflow
    nrm = float(np.linalg.norm(D, 2))
    if nrm > 0:
        block = min(block, int(300.0 / (step * nrm)))
    block = max(1, min(block, n_total))
    P = _powers(D, sign * step, block)
    x = v / norm
    acc = math.log(norm)
    units, logs = [], []
    if k0 == 0:
        units.append(x.copy())
        logs.append(acc)
    k = 0
    while k < n_total:
        b = min(block, n_total - k)
        Y = P[:b] @ x
        r = np.linalg.norm(Y, axis=1)
        with np.errstate(divide="ignore"):
            lr = np.log(r)
        keep = np.arange(k + 1, k + b + 1) >= k0
        if np.any(keep):
            units.append(Y[keep] / r[keep, None])
            logs.append(acc + lr[keep])
        if r[-1] == 0.0:
            break
        x = Y[-1] / r[-1]
        acc += lr[-1]
        k += b
    U = np.vstack([np.atleast_2d(u) for u in units])
    L = np.concatenate([np.atleast_1d(l) for l in logs])
    m = min(len(ts), len(L))
    return ts[:m], U[:m], L[:m]


def _default_step(D):
    nrm = np.linalg.norm(D, 2)
    return 0.1 if nrm == 0 else min(0.1, 0.02 / nrm)


def omega_limit(D, v, direction=1, burn_in=100.0, horizon=2000.0, step=None, radius=None):
    """Numerical surrogate of the omega-limit set ``omega(v)`` (direction
    ``+1``) or ``omega*(v)`` (direction ``-1``).

    Samples on ``[burn_in, horizon]`` beyond ``radius`` (default
    ``1e6 * max(1, ||v||)``) count as ``INFINITY``; finite samples are merged
    at resolution ``1e-3`` times the trajectory scale.
    """
    D = check_endomorphism(D)
    n = D.shape[0]
    v = check_vector(v, n)
    sign = check_direction(direction)
    check_positive(burn_in, "burn_in", strict=False)
    if not horizon > burn_in:
        raise InvalidInputError("horizon must exceed burn_in")
    vnorm = float(np.linalg.norm(v))
    R = float(radius) if radius is not None else INFINITY_FACTOR * max(1.0, vnorm)
    if not R > vnorm:
        raise InvalidInputError("radius must exceed ||v||")
    step = float(step) if step is not None else _default_step(D)
    params = {"burn_in": float(burn_in), "horizon": float(horizon), "step": step, "radius": R,
              "direction": sign}
    if vnorm == 0.0:
        return OmegaSetEstimate(points=np.zeros((1, n)), contains_infinity=False, params=params)

    _, U, L = trajectory(D, v, sign, horizon, step, t_start=burn_in)
    logR = math.log(R)
    far = L > logR
    finite = ~far
    pts = np.exp(L[finite])[:, None] * U[finite]
    scale = max(vnorm, float(np.exp(L[finite]).max()) if finite.any() else 0.0)
    res = RESOLUTION_FACTOR * scale
    params["resolution"] = res
    if pts.shape[0]:
        keys = np.round(pts / res).astype(np.int64)
        _, first = np.unique(keys, axis=0, return_index=True)
        pts = pts[np.sort(first)]

    spec = compute_spectrum(D)
    thr = BOUNDARY_FACTOR * spec.eps
    vals = spec.values
    rot = np.abs(vals.imag[(np.abs(vals.real) <= thr) & (np.abs(vals.imag) > thr)])
    low = bool(far.any() and finite.any())
    if rot.size:
        low = low or (horizon - burn_in) < 10 * 2 * math.pi / rot.min()
    return OmegaSetEstimate(points=pts, contains_infinity=bool(far.any()), params=params,
                            low_confidence=low)


def omega_distance(a, b):
    """Hausdorff distance between omega estimates; ``INFINITY`` is a
    separate symbolic point (any mismatch in it gives ``inf``)."""
    if a.contains_infinity != b.contains_infinity:
        return math.inf
    pa, pb = a.points, b.points
    if len(pa) == 0 and len(pb) == 0:
        return 0.0
    if len(pa) == 0 or len(pb) == 0:
        return math.inf
    da = cKDTree(pb).query(pa)[0].max()
    db = cKDTree(pa).query(pb)[0].max()
    return float(max(da, db))


@dataclass(frozen=True)
class OmegaSymmetryReport:
    passed: bool
    worst_distance: float
    worst_vector: np.ndarray
    distances: tuple = field(repr=False)
    tol: float = 0.05

    def to_dict(self):
        return {
            "passed": self.passed,
            "worst_distance": self.worst_distance,
            "worst_vector": self.worst_vector.tolist(),
            "distances": list(self.distances),
            "tol": self.tol,
        }


def check_omega_symmetry(D, samples=10, tol=0.05, seed=0, burn_in=100.0, horizon=2000.0,
                         step=None):
    """Check ``omega(v) = omega*(v)`` for random unit ``v``.

    Requires ``D`` semisimple with purely imaginary spectrum; otherwise a
    :class:`PreconditionError` names the failing hypothesis.
    """
    D = check_endomorphism(D)
    jc = jordan_chevalley(D)
    spec = compute_spectrum(D)
    if not jc.is_semisimple:
        raise PreconditionError("D semisimple", "omega symmetry needs D semisimple")
    if np.any(np.abs(spec.real_parts) > BOUNDARY_FACTOR * spec.eps):
        raise PreconditionError("sigma(D) in iR", "omega symmetry needs a purely imaginary spectrum")
    rng = check_random_state(seed)
    dists, vecs = [], []
    for _ in range(int(samples)):
        v = rng.standard_normal(D.shape[0])
        v /= np.linalg.norm(v)
        fwd = omega_limit(D, v, 1, burn_in, horizon, step)
        bwd = omega_limit(D, v, -1, burn_in, horizon, step)
        dists.append(omega_distance(fwd, bwd))
        vecs.append(v)
    worst = int(np.argmax(dists))
    return OmegaSymmetryReport(
        passed=bool(max(dists) <= tol),
        worst_distance=float(dists[worst]),
        worst_vector=vecs[worst],
        distances=tuple(float(d) for d in dists),
        tol=tol,
    )


class Fate(str, enum.Enum):
    ZERO = "ZERO"
    INFINITY = "INFINITY"
    RECURRENT = "RECURRENT"
    UNDECIDED = "UNDECIDED"


def _fates(D, X, sign, burn_in, horizon, step, slope_tol):
    """Fate of every column of ``X`` under the flow in direction ``sign``."""
    norms = np.linalg.norm(X, axis=0)
    M = matrix_exp(D, sign * step)
    Y = X / norms
    acc = np.log(norms)
    n_steps = int(round(horizon / step))
    k0 = int(round(burn_in / step))
    late = np.empty((n_steps - k0 + 1, X.shape[1]))
    for k in range(1, n_steps + 1):
        Y = M @ Y
        r = np.linalg.norm(Y, axis=0)
        with np.errstate(divide="ignore"):
            acc = acc + np.log(r)
        Y = Y / np.where(r > 0, r, 1.0)
        if k >= k0:
            late[k - k0] = acc
    logR = math.log(INFINITY_FACTOR) + np.log(np.maximum(1.0, norms))
    logr0 = -math.log(INFINITY_FACTOR) + np.log(np.minimum(1.0, norms))
    slope = (late[-1] - late[0]) / (horizon - burn_in)
    out = []
    for i in range(X.shape[1]):
        col = late[:, i]
        if np.all(col > logR[i]):
            out.append(Fate.INFINITY)
        elif np.all(col < logr0[i]):
            out.append(Fate.ZERO)
        elif np.all((col >= logr0[i]) & (col <= logR[i])) and abs(slope[i]) <= slope_tol:
            out.append(Fate.RECURRENT)
        else:
            out.append(Fate.UNDECIDED)
    return out


def default_grid(dim, points_per_axis=5):
    axis = np.linspace(-1.0, 1.0, points_per_axis)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def oracle_classify_flow(D, grid=None, burn_in=800.0, horizon=1000.0, step=1.0, slope_tol=1e-3):
    """Trajectory-statistics verdict, blind to the spectrum.

    For each nonzero grid point the forward and backward fates are
    estimated (``ZERO``, ``INFINITY``, bounded ``RECURRENT`` or
    ``UNDECIDED``).  Any point escaping to infinity in both time
    directions, any recurrent point, or mixed forward fates witness chain
    recurrence; uniform fates give an attractor; anything else is
    ``INCONCLUSIVE``.
    """
    D = check_endomorphism(D)
    n = D.shape[0]
    if n > 3:
        raise PreconditionError("dim <= 3", "oracle_classify_flow is limited to dim <= 3")
    G = default_grid(n) if grid is None else np.atleast_2d(np.asarray(grid, dtype=float))
    if G.shape[1] != n:
        raise InvalidInputError(f"grid points must have dimension {n}")
    G = G[np.linalg.norm(G, axis=1) > 0]
    if G.shape[0] == 0:
        raise InvalidInputError("grid has no nonzero point")
    fwd = _fates(D, G.T, 1, burn_in, horizon, step, slope_tol)
    bwd = _fates(D, G.T, -1, burn_in, horizon, step, slope_tol)
    counts = {f"forward_{f.value}": fwd.count(f) for f in Fate}
    counts.update({f"backward_{f.value}": bwd.count(f) for f in Fate})
    witness = {"grid_points": int(G.shape[0]), **counts}

    both_inf = any(a is Fate.INFINITY and b is Fate.INFINITY for a, b in zip(fwd, bwd))
    recurrent = Fate.RECURRENT in fwd or Fate.RECURRENT in bwd
    mixed = Fate.ZERO in fwd and Fate.INFINITY in fwd
    undecided = Fate.UNDECIDED in fwd or Fate.UNDECIDED in bwd
    if both_inf or recurrent or mixed:
        kind = FlowKind.CHAIN_RECURRENT
    elif undecided:
        kind = FlowKind.INCONCLUSIVE
    elif all(f is Fate.ZERO for f in fwd) and all(b is Fate.INFINITY for b in bwd):
        kind = FlowKind.ATTRACTOR_ZERO
    elif all(f is Fate.INFINITY for f in fwd) and all(b is Fate.ZERO for b in bwd):
        kind = FlowKind.ATTRACTOR_INFINITY
    else:
        kind = FlowKind.INCONCLUSIVE
    return FlowClassification(kind=kind, witness=witness, source="oracle")
