"""Discretised convolution and multiplication operators on L^2(R).

The causal kernel ``beta(t) = e^{-t} 1_{t >= 0}`` defines ``T eta = beta * eta``,
i.e. ``(T eta)(t) = e^{-t} int_{-inf}^t e^s eta(s) ds``.  Its Fourier
multiplier is ``i / (i + xi)`` (convention ``e^{i xi t}``), of modulus
``1 / sqrt(1 + xi^2)``, and ``1 - 2T`` is unitary.  Product-convolution
operators ``1 - 2 M_g T`` with ``g`` rising from 0 to 1 are injective with
closed, proper range; their discretisations show this as one isolated
near-zero singular value whose left singular vector matches the
continuous cokernel element.

Discretisation: the grid ``t_j = -L + j h`` (``h = 2L/N``), quadrature
weight ``h``, causal lower-triangular Toeplitz matrices (no periodic wrap).
The kernel jump at ``t = 0`` is weighted by ``jump_weight`` (default 1/2,
the trapezoid value).
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np
import scipy.integrate
import scipy.interpolate
import scipy.linalg
import scipy.special
from scipy.signal import fftconvolve

from .exceptions import InvalidInputError, PreconditionError
from .validation import check_positive, check_random_state

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
DEFAULT_JUMP_WEIGHT = 0.5
GAP_TOL = 1e-2
# Gauss-Legendre nodes per grid cell for the continuous residuals
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``t_j = -L + j h`` on ``[-L, L)`` with ``N`` points."""

    L: float
    N: int

    def __post_init__(self):
        check_positive(self.L, "L")
        N = self.N
        if not isinstance(N, (int, np.integer)) or N < 16 or N & (N - 1):
            raise InvalidInputError(f"N must be a power of two >= 16, got {N!r}")
        if self.h > 1.0:
            raise InvalidInputError(f"grid spacing h = 2L/N = {self.h:g} exceeds 1")

    @classmethod
    def from_spacing(cls, h, N):
        return cls(L=N * h / 2.0, N=N)

    @property
    def h(self):
        return 2.0 * self.L / self.N

    @property
    def t(self):
        return -self.L + self.h * np.arange(self.N)

    def index_of(self, t):
        return int(round((t + self.L) / self.h))

    def inner(self, a, b):
        return self.h * np.vdot(a, b)

    def norm(self, a):
        return math.sqrt(self.h) * float(np.linalg.norm(a))

    def to_dict(self):
        return {"L": float(self.L), "N": int(self.N), "h": self.h}


class SymbolKind(str, enum.Enum):
    LOGISTIC = "LOGISTIC"
    PAPER_RADIAL = "PAPER_RADIAL"
    CONSTANT = "CONSTANT"
    SECH = "SECH"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True)
class SymbolFunction:
    """Scalar symbol ``g: R -> [0, 1]``.

    ``LOGISTIC`` is ``1/(1+e^{-(t-shift)})``; ``PAPER_RADIAL(y)`` is
    ``a(e^t y)`` with ``a(x) = 1 - e^{-|x|}``.  ``CUSTOM`` interpolates
    samples monotonically (PCHIP) and holds the end values outside.
    """

    kind: SymbolKind
    y: float = 1.0
    shift: float = 0.0
    value: float = 0.0
    samples: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind is SymbolKind.PAPER_RADIAL and (self.y == 0 or not np.isfinite(self.y)):
            raise InvalidInputError("PAPER_RADIAL needs a finite nonzero y")
        if self.kind is SymbolKind.CONSTANT and not 0.0 <= self.value <= 1.0:
            raise InvalidInputError("constant symbol must lie in [0, 1]")
        if self.kind is SymbolKind.CUSTOM:
            if self.samples is None:
                raise InvalidInputError("CUSTOM symbol needs samples (t, g)")
            t, g = (np.asarray(a, dtype=float) for a in self.samples)
            if t.ndim != 1 or t.shape != g.shape or t.size < 2 or np.any(np.diff(t) <= 0):
                raise InvalidInputError("CUSTOM samples need increasing t and matching g")
            if np.any(g < 0) or np.any(g > 1) or not np.all(np.isfinite(g)):
                raise InvalidInputError("CUSTOM symbol values must lie in [0, 1]")

    @classmethod
    def logistic(cls, shift=0.0):
        return cls(SymbolKind.LOGISTIC, shift=float(shift))

    @classmethod
    def paper_radial(cls, y=1.0):
        return cls(SymbolKind.PAPER_RADIAL, y=float(y))

    @classmethod
    def constant(cls, value):
        return cls(SymbolKind.CONSTANT, value=float(value))

    @classmethod
    def sech(cls):
        return cls(SymbolKind.SECH)

    @classmethod
    def custom(cls, t, g):
        return cls(SymbolKind.CUSTOM, samples=(tuple(map(float, t)), tuple(map(float, g))))

    @classmethod
    def parse(cls, text):
        """``logistic``, ``logistic:shift``, ``radial:y``, ``sech`` or ``const:c``."""
        name, _, arg = text.partition(":")
        try:
            if name == "logistic":
                return cls.logistic(float(arg) if arg else 0.0)
            if name == "radial":
                return cls.paper_radial(float(arg) if arg else 1.0)
            if name == "sech":
                return cls.sech()
            if name == "const":
                return cls.constant(float(arg))
        except ValueError:
            pass
        raise InvalidInputError(f"bad symbol {text!r}; use logistic[:shift], radial:y, sech or const:c")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = self.kind
        if k is SymbolKind.LOGISTIC:
            return scipy.special.expit(t - self.shift)
        if k is SymbolKind.PAPER_RADIAL:
            with np.errstate(over="ignore"):
                return -np.expm1(-np.exp(t) * abs(self.y))
        if k is SymbolKind.CONSTANT:
            return np.full_like(t, self.value)
        if k is SymbolKind.SECH:
            return 1.0 / np.cosh(np.clip(t, -700, 700))
        ts, gs = self.samples
        f = scipy.interpolate.PchipInterpolator(ts, gs, extrapolate=False)
        out = f(np.clip(t, ts[0], ts[-1]))
        return np.clip(out, 0.0, 1.0)

    def check_limits(self, L):
        """Require ``g(-L) ~ 0`` and ``g(L) ~ 1`` within ``e^{-L/2}``."""
        bound = math.exp(-L / 2.0)
        lo, hi = float(self(-L)), float(self(L))
        if lo > bound:
            raise PreconditionError("g(-inf) = 0", f"g(-L) = {lo:.3g} exceeds e^(-L/2) = {bound:.3g}")
        if 1.0 - hi > bound:
            raise PreconditionError("g(+inf) = 1", f"1 - g(L) = {1 - hi:.3g} exceeds e^(-L/2) = {bound:.3g}")

    def label(self):
        k = self.kind
        if k is SymbolKind.LOGISTIC:
            return "logistic" if self.shift == 0 else f"logistic:{self.shift!r}"
        if k is SymbolKind.PAPER_RADIAL:
            return f"radial:{self.y!r}"
        if k is SymbolKind.CONSTANT:
            return f"const:{self.value!r}"
        return k.value.lower()


@dataclass(frozen=True)
class DiscretizedOp:
    grid: Grid
    matrix: np.ndarray = field(repr=False)
    label: str
    symbol: SymbolFunction = None

    def __post_init__(self):
        if self.matrix.shape != (self.grid.N, self.grid.N):
            raise InvalidInputError("matrix does not match the grid")
        if not np.all(np.isfinite(self.matrix)):
            raise InvalidInputError("operator has non-finite entries")

    def __matmul__(self, x):
        return self.matrix @ x


@dataclass(frozen=True)
class Experiment:
    """Outcome of a numerical check: status, metrics and exportable data."""

    name: str
    status: str
    metrics: dict
    params: dict
    columns: tuple = ()
    rows: np.ndarray = field(default=None, repr=False)

    @property
    def passed(self):
        return self.status == PASS

    def to_dict(self):
        return {"experiment": self.name, "status": self.status, "params": self.params,
                "metrics": self.metrics}


def kernel_taps(grid, jump_weight=DEFAULT_JUMP_WEIGHT):
    """First column of T: ``h * beta(j h)`` with the jump weighted."""
    taps = grid.h * np.exp(-grid.h * np.arange(grid.N))
    taps[0] *= jump_weight
    return taps


def conv_operator_T(grid, jump_weight=DEFAULT_JUMP_WEIGHT):
    """Dense causal Toeplitz matrix ``T_{jk} = h beta(t_j - t_k)``."""
    col = kernel_taps(grid, jump_weight)
    T = scipy.linalg.toeplitz(col, np.zeros(grid.N))
    return DiscretizedOp(grid, T, f"T(jump_weight={jump_weight!r})")


def apply_T(grid, eta, jump_weight=DEFAULT_JUMP_WEIGHT):
    """``T eta`` by FFT convolution (linear, not circular); ``eta`` may be
    a vector or have grid samples along the last axis."""
    eta = np.asarray(eta)
    taps = kernel_taps(grid, jump_weight)
    if eta.ndim == 1:
        return fftconvolve(taps, eta)[: grid.N]
    return fftconvolve(taps[None, :], eta, axes=-1)[..., : grid.N]


def product_conv_operator(g, grid, jump_weight=DEFAULT_JUMP_WEIGHT):
    """``I - 2 diag(g(t_j)) T``."""
    T = conv_operator_T(grid, jump_weight).matrix
    gv = g(grid.t)
    M = np.eye(grid.N) - 2.0 * gv[:, None] * T
    return DiscretizedOp(grid, M, f"I - 2 M_g T, g = {g.label()}", symbol=g)


def exact_symbol(xi):
    return 1j / (1j + np.asarray(xi))


def fourier_symbol_check(grid, jump_weight=DEFAULT_JUMP_WEIGHT, rtol=1e-2):
    """Compare the discrete multiplier of T with ``i / (i + xi)`` for
    ``|xi| <= N / (8 L)``."""
    taps = kernel_taps(grid, jump_weight)
    M = 2 * grid.N
    # sum_m taps_m e^{+i xi m h}
    disc = M * np.fft.ifft(taps, M)
    xi = 2 * np.pi * np.fft.fftfreq(M, d=grid.h)
    band = np.abs(xi) <= grid.N / (8.0 * grid.L)
    exact = exact_symbol(xi[band])
    rel = np.abs(disc[band] - exact) / np.abs(exact)
    worst = float(rel.max())
    order = np.argsort(xi[band])
    return Experiment(
        name="fourier_symbol",
        status=PASS if worst <= rtol else FAIL,
        metrics={"max_relative_error": worst, "frequencies": int(band.sum()),
                 "xi_max": float(grid.N / (8.0 * grid.L))},
        params={**grid.to_dict(), "jump_weight": jump_weight, "rtol": rtol},
        columns=("xi", "re_discrete", "im_discrete", "re_exact", "im_exact"),
        rows=np.column_stack([xi[band][order], disc[band][order].real, disc[band][order].imag,
                              exact[order].real, exact[order].imag]),
    )


def beta_identity_defect(grid, points=257, tol=1e-6):
    """``2 beta + 2 beta* = (2 beta) * (2 beta)* = (2 beta)* * (2 beta)``.

    The left side is ``2 e^{-|t|}`` (jump value 1/2 at 0); both
    convolutions are evaluated by adaptive quadrature at up to ``points``
    grid nodes.
    """
    idx = np.unique(np.linspace(0, grid.N - 1, min(points, grid.N)).round().astype(int))
    ts = grid.t[idx]

    def beta(s):
        return math.exp(-s) if s > 0 else (0.5 if s == 0 else 0.0)

    def beta_star(s):
        return beta(-s)

    lhs = 2.0 * np.array([beta(t) + beta_star(t) for t in ts])
    conv1 = np.empty_like(ts)
    conv2 = np.empty_like(ts)
    for i, t in enumerate(ts):
        # (2b)*(2b)^*(t) = 4 int_{s >= max(0, t)} e^{-s} e^{t - s} ds
        a = max(0.0, t)
        conv1[i] = 4.0 * scipy.integrate.quad(lambda s: math.exp(-s) * math.exp(t - s), a, np.inf,
                                              epsabs=1e-13, epsrel=1e-12)[0]
        # (2b)^*(2b)(t) = 4 int_{s <= min(0, t)} e^{s} e^{-(t - s)} ds
        b = min(0.0, t)
        conv2[i] = 4.0 * scipy.integrate.quad(lambda s: math.exp(s) * math.exp(s - t), -np.inf, b,
                                              epsabs=1e-13, epsrel=1e-12)[0]
    err = float(max(np.abs(lhs - conv1).max(), np.abs(lhs - conv2).max()))
    return Experiment(
        name="beta_identity",
        status=PASS if err <= tol else FAIL,
        metrics={"sup_error": err, "points": int(len(ts))},
        params={**grid.to_dict(), "tol": tol},
        columns=("t", "lhs", "beta_conv_beta_star", "beta_star_conv_beta"),
        rows=np.column_stack([ts, lhs, conv1, conv2]),
    )


def padded_unit_vectors(grid, trials, seed=0, pad=None):
    """White-noise vectors supported on ``|t| <= L - pad`` (default pad
    ``L/4``), normalised in discrete ``L^2``."""
    pad = grid.L / 4.0 if pad is None else float(pad)
    if not 0 < pad < grid.L:
        raise InvalidInputError("pad must lie in (0, L)")
    rng = check_random_state(seed)
    X = rng.standard_normal((int(trials), grid.N))
    X[:, np.abs(grid.t) > grid.L - pad] = 0.0
    X /= math.sqrt(grid.h) * np.linalg.norm(X, axis=1, keepdims=True)
    return X


def unitary_defects(grid, vectors, jump_weight=DEFAULT_JUMP_WEIGHT):
    """``| ||(I - 2T) phi|| - 1 |`` for each row of ``vectors``."""
    out = vectors - 2.0 * apply_T(grid, vectors, jump_weight)
    norms = math.sqrt(grid.h) * np.linalg.norm(out, axis=-1)
    in_norms = math.sqrt(grid.h) * np.linalg.norm(vectors, axis=-1)
    return np.abs(norms - in_norms)


def check_unitary(grid, trials=100, tol=1e-3, seed=0, jump_weight=DEFAULT_JUMP_WEIGHT, pad=None):
    """Max isometry defect of ``I - 2T`` over padded random unit vectors.

    Needs ``L >= 20`` so that the truncation ``e^{-L/4}`` of the padding
    is negligible.
    """
    if grid.L < 20:
        raise PreconditionError("L >= 20", f"unitarity check needs L >= 20, got L = {grid.L:g}")
    X = padded_unit_vectors(grid, trials, seed, pad)
    d = unitary_defects(grid, X, jump_weight)
    worst = float(d.max())
    return Experiment(
        name="unitary",
        status=PASS if worst <= tol else FAIL,
        metrics={"max_defect": worst, "mean_defect": float(d.mean()), "trials": int(trials)},
        params={**grid.to_dict(), "tol": tol, "seed": seed, "jump_weight": jump_weight},
        columns=("trial", "defect"),
        rows=np.column_stack([np.arange(len(d)), d]),
    )


def unitary_refinement(L=30.0, Ns=(4096, 8192), trials=100, seed=0, jump_weight=DEFAULT_JUMP_WEIGHT):
    """Max defects along a refinement ladder and successive ratios."""
    defects = [check_unitary(Grid(L, N), trials, np.inf, seed, jump_weight).metrics["max_defect"]
               for N in Ns]
    ratios = [b / a for a, b in zip(defects, defects[1:])]
    return {"N": list(Ns), "max_defect": defects, "ratio": ratios}


def _cell_nodes(grid):
    """Gauss-Legendre nodes and weights on every cell ``[t_j, t_j + h]``."""
    h = grid.h
    nodes = grid.t[:, None] + 0.5 * h * (1.0 + _GL_NODES[None, :])
    weights = 0.5 * h * _GL_WEIGHTS
    return nodes, weights


def _log_zeta(c, grid):
    """``F(t) = int_0^t (1 - 2c)`` at the grid nodes and at the in-cell
    Gauss nodes (nested Gauss rule), anchored at ``t = 0``."""
    h = grid.h
    nodes, w = _cell_nodes(grid)
    cell = (w * (1.0 - 2.0 * c(nodes))).sum(axis=1)
    F = np.concatenate([[0.0], np.cumsum(cell)])
    F -= F[grid.index_of(0.0)]
    # partial integrals from t_j to each node
    frac = 0.5 * (1.0 + _GL_NODES)
    sub = grid.t[:, None, None] + (frac[None, :, None] * 0.5 * h) * (1.0 + _GL_NODES[None, None, :])
    partial = (0.5 * h * frac[None, :, None] * _GL_WEIGHTS[None, None, :] * (1.0 - 2.0 * c(sub))).sum(axis=2)
    return F[:-1], F[-1], F[:-1, None] + partial


@dataclass(frozen=True)
class CokernelWitness:
    t: np.ndarray = field(repr=False)
    zeta: np.ndarray = field(repr=False)  # unit Euclidean norm on the grid
    adjoint_residual: float
    forward_residual: float
    grid: Grid = None

    def to_dict(self):
        return {"adjoint_residual": self.adjoint_residual,
                "forward_residual": self.forward_residual}


def cokernel_witness(c, grid, analytic_tail=True):
    """Cokernel element of ``1 - 2 M_c T``: ``zeta' = (1 - 2c) zeta``,
    ``zeta(0) = 1``, i.e. ``zeta = exp(int_0^t (1 - 2c))``.

    Residuals are relative ``L^2`` norms of the continuous operators
    ``(1 - 2 M_c T)^* zeta = zeta - 2 int_t^inf e^{t-s} c zeta ds`` and
    ``(1 - 2 M_c T) zeta`` evaluated by Gauss-Legendre quadrature on each
    grid cell, independently of any matrix.  Beyond ``L`` the tail uses
    ``c = 1``, ``zeta(s) = zeta(L) e^{L - s}``; below ``-L``, ``c = 0``.
    """
    c.check_limits(grid.L)
    h = grid.h
    F, F_end, F_nodes = _log_zeta(c, grid)
    zeta = np.exp(F)
    nodes, w = _cell_nodes(grid)
    zeta_nodes = np.exp(F_nodes)
    zeta_end = math.exp(F_end)
    cz = c(nodes) * zeta_nodes

    # adjoint: I_j = int_{t_j}^inf e^{t_j - s} c zeta ds, backward recurrence
    local_back = (w * np.exp(grid.t[:, None] - nodes) * cz).sum(axis=1)
    back = np.empty(grid.N)
    acc = zeta_end * 0.5 if analytic_tail else 0.0  # int_L^inf e^{L-s} zeta(L) e^{L-s} ds
    decay = math.exp(-h)
    for j in range(grid.N - 1, -1, -1):
        acc = local_back[j] + decay * acc
        back[j] = acc
    adj = zeta - 2.0 * back

    # forward: J_j = int_{-inf}^{t_j} e^{s - t_j} zeta ds
    t_right = grid.t + h
    local_fwd = (w * np.exp(nodes - t_right[:, None]) * zeta_nodes).sum(axis=1)
    fwd_int = np.empty(grid.N)
    acc = 0.5 * zeta[0]  # c = 0 below -L, zeta(s) = zeta(-L) e^{s + L}
    fwd_int[0] = acc
    for j in range(1, grid.N):
        acc = decay * acc + local_fwd[j - 1]
        fwd_int[j] = acc
    fwd = zeta - 2.0 * c(grid.t) * fwd_int

    nz = np.linalg.norm(zeta)
    return CokernelWitness(
        t=grid.t.copy(),
        zeta=zeta / nz,
        adjoint_residual=float(np.linalg.norm(adj) / nz),
        forward_residual=float(np.linalg.norm(fwd) / nz),
        grid=grid,
    )


def index_signature(op, gap_tol=GAP_TOL, witness=None, corr_tol=0.99, small_tol=1e-3):
    """Singular-value signature of a one-dimensional cokernel.

    PASS: exactly one ``sigma`` is below ``gap_tol`` times the next one,
    and the corresponding left singular vector correlates at least
    ``corr_tol`` with the normalised cokernel witness.  No isolated small
    singular value gives INCONCLUSIVE; a gap with the wrong vector, FAIL.
    """
    A = op.matrix
    U, s, _ = scipy.linalg.svd(A, lapack_driver="gesdd", check_finite=False)
    ratios = s[1:] / np.where(s[:-1] > 0, s[:-1], 1.0)
    isolated = int(np.sum(ratios < gap_tol))
    gap = bool(ratios[-1] < gap_tol) if s.size > 1 else False
    metrics = {
        "sigma_1": float(s[0]),
        "sigma_N": float(s[-1]),
        "sigma_N_minus_1": float(s[-2]),
        "gap_ratio": float(ratios[-1]),
        "count_below_small_tol": int(np.sum(s <= small_tol * s[0])),
        "next_over_sigma_1": float(s[-2] / s[0]),
        "bottom_five": [float(x) for x in s[-5:][::-1]],
        "max_abs_sigma_minus_1": float(np.abs(s - 1.0).max()),
    }
    if witness is None and op.symbol is not None and gap:
        try:
            witness = cokernel_witness(op.symbol, op.grid)
        except PreconditionError:
            witness = None
    if witness is not None:
        corr = float(abs(np.vdot(U[:, -1], witness.zeta)))
        metrics["witness_correlation"] = corr
        metrics["witness_adjoint_residual"] = witness.adjoint_residual
        metrics["witness_forward_residual"] = witness.forward_residual
    if not gap or isolated != 1:
        status = INCONCLUSIVE
    elif witness is None:
        status = INCONCLUSIVE
    else:
        status = PASS if metrics["witness_correlation"] >= corr_tol else FAIL
    rows = np.column_stack([np.arange(1, s.size + 1), s])
    return Experiment(
        name="index",
        status=status,
        metrics=metrics,
        params={**op.grid.to_dict(), "operator": op.label, "gap_tol": gap_tol, "corr_tol": corr_tol},
        columns=("k", "sigma_k"),
        rows=rows,
    ), U[:, -1]


def beta_kernel(t):
    t = np.asarray(t, dtype=float)
    return np.where(t > 0, np.exp(-np.clip(t, 0, None)), np.where(t == 0, 0.5, 0.0))


def compactness_profile(hfun, grid, f=beta_kernel, rel=0.01):
    """Singular values of ``diag(h(t_j)) T_f`` with ``(T_f)_{jk} = h f(t_j - t_k)``.

    ``K`` counts singular values above ``rel * sigma_1``.
    """
    t = grid.t
    col = grid.h * f(t - t[0])
    row = grid.h * f(t[0] - t)
    Tf = scipy.linalg.toeplitz(col, row)
    A = hfun(t)[:, None] * Tf
    s = scipy.linalg.svd(A, compute_uv=False, check_finite=False)
    K = int(np.sum(s > rel * s[0])) if s[0] > 0 else 0
    return s, K


def compactness_ladder(hfun, Ns=(512, 1024, 2048), spacing=0.1, f=beta_kernel, rel=0.01,
                       plateau=0.3):
    """``K`` along a ladder with fixed spacing and growing window.

    For a compact ``M_h T_f`` the count of singular values above
    ``rel * sigma_1`` converges as the window grows; for a symbol that does
    not vanish at infinity it grows with ``L``.  PASS iff
    ``max K - min K <= max(1, 0.05 min K)``.
    """
    Ks, plateaus, profiles = [], [], []
    for N in Ns:
        grid = Grid.from_spacing(spacing, N)
        s, K = compactness_profile(hfun, grid, f, rel)
        Ks.append(K)
        plateaus.append(int(np.sum(s >= plateau * s[0])) if s[0] > 0 else 0)
        profiles.append(s)
    stable = (max(Ks) - min(Ks)) <= max(1, 0.05 * min(Ks))
    width = max(len(p) for p in profiles)
    rows = np.full((width, len(Ns) + 1), np.nan)
    rows[:, 0] = np.arange(1, width + 1)
    for i, p in enumerate(profiles):
        rows[: len(p), i + 1] = p
    return Experiment(
        name="compactness",
        status=PASS if stable else FAIL,
        metrics={"K": Ks, "count_above_plateau": plateaus,
                 "sigma_1": [float(p[0]) for p in profiles]},
        params={"N": list(Ns), "spacing": spacing, "L": [N * spacing / 2 for N in Ns],
                "rel": rel, "plateau": plateau},
        columns=("k",) + tuple(f"sigma_N{N}" for N in Ns),
        rows=rows,
    )


def gaussian_bump(width):
    return lambda t: np.exp(-0.5 * (np.asarray(t) / width) ** 2)


def regular_rep_matrix(d, chi, grid, r=0.0):
    """``(Pi_r(f))_{jk} = h d(t_j - r) chi(t_j - t_k)`` for ``f = chi (x) d``."""
    t = grid.t
    return grid.h * d(t - r)[:, None] * chi(t[:, None] - t[None, :])


def covariance_check(d, r, grid, chi=None, tol=1e-6):
    """Defect ``||Pi_r(f) - S_r Pi(f) S_r^{-1}||`` on the index block
    where the grid shift ``S_r`` by ``round(r/h)`` steps is defined.

    The Frobenius norm is used: it bounds the operator norm and avoids a
    dense SVD.

    ``chi`` defaults to a Gaussian bump negligible outside ``[-L/4, L/4]``.
    """
    L = grid.L
    if abs(r) > L / 4:
        raise PreconditionError("|r| <= L/4", f"shift {r:g} exceeds L/4 = {L / 4:g}")
    if chi is None:
        chi = gaussian_bump(L / 40.0)
    m = int(round(r / grid.h))
    snapped = m * grid.h
    P = regular_rep_matrix(d, chi, grid, 0.0)
    Pr = regular_rep_matrix(d, chi, grid, snapped)
    N = grid.N
    lo, hi = max(0, m), min(N, N + m)
    block_r = Pr[lo:hi, lo:hi]
    block = P[lo - m:hi - m, lo - m:hi - m]  # (S P S^{-1})_{jk} = P_{j-m, k-m}
    defect = float(np.linalg.norm(block_r - block))
    scale = float(np.linalg.norm(P))
    return Experiment(
        name="covariance",
        status=PASS if defect <= tol else FAIL,
        metrics={"defect": defect, "norm_Pi_frobenius": scale, "shift_steps": m, "snap_distance": abs(r - snapped),
                 "block_size": hi - lo},
        params={**grid.to_dict(), "r": float(r), "tol": tol},
    )


def injectivity_profile(g, L=30.0, delta=0.1, t_large=None):
    """ODE oracle for injectivity: ``y' = 2 g y``, ``y(0) = 1`` on ``[0, L]``.

    A kernel element of ``1 - 2 M_g T`` would satisfy ``eta = 2 e^{-t} g y``;
    once ``log y(t) >= (2 - delta) t`` this grows like ``e^{(1 - delta) t}``
    and cannot be square integrable.
    """
    t_large = L / 2 if t_large is None else t_large
    sol = scipy.integrate.solve_ivp(lambda t, z: 2.0 * g(t), (0.0, L), [0.0], rtol=1e-10, atol=1e-12,
                                    dense_output=True)
    ts = np.linspace(0.0, L, 301)
    logy = sol.sol(ts)[0]
    log_eta = math.log(2.0) - ts + np.log(np.maximum(g(ts), 1e-300)) + logy
    late = ts >= t_large
    bound_ok = bool(np.all(logy[late] >= (2.0 - delta) * ts[late] - 1e-9))
    slope = float(np.polyfit(ts[late], log_eta[late], 1)[0])
    return Experiment(
        name="injectivity",
        status=PASS if bound_ok and slope >= 1.0 - delta else FAIL,
        metrics={"log_eta_slope": slope, "log_y_over_t_at_L": float(logy[-1] / L),
                 "bound_holds_after": float(t_large)},
        params={"L": L, "delta": delta, "symbol": g.label()},
        columns=("t", "log_y", "log_eta"),
        rows=np.column_stack([ts, logy, log_eta]),
    )
