"""Regularity report for C*(G) of simply connected solvable Lie groups.

For ``G_D = R x_D V`` every verdict is spectral:

* ``C*(G_D)`` is *not* quasidiagonal (equivalently not AF-embeddable)
  exactly when all eigenvalues of ``D`` have positive real part, or all
  have negative real part.
* For type-I groups, strong quasidiagonality, CCR and the ad-spectrum
  condition coincide; on ``g_D`` the eigenvalues of ``ad(t, v)`` are
  ``t * sigma(D)`` together with ``0``, so the condition reads
  ``sigma(D) in iR``.
* ``G_D`` is exponential iff ``sigma(D)`` has no nonzero purely imaginary
  value, and nilpotent iff ``D`` is.
"""

from dataclasses import dataclass, field
import enum
from fractions import Fraction

import numpy as np

from . import lie
from .exceptions import InvalidInputError, NotInEnd0Error, UnsupportedInputError
from .flows import FlowKind, classify_flow
from .spectra import BOUNDARY_FACTOR, compute_spectrum, jordan_chevalley, spectral_tolerance
from .validation import check_endomorphism, check_random_state

# ratios of elliptic frequencies are "rational" if p/q with q <= this
RATIONAL_MAX_DENOMINATOR = 1000
RATIONAL_TOL = 1e-9
AD_SAMPLES = 1000


class Tri(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class TriState:
    value: Tri
    justification: str

    def __post_init__(self):
        if not self.justification:
            raise ValueError("every verdict carries a justification")

    def to_dict(self):
        return {"value": self.value.value, "justification": self.justification}


def yes(why):
    return TriState(Tri.YES, why)


def no(why):
    return TriState(Tri.NO, why)


def unknown(why):
    return TriState(Tri.UNKNOWN, why)


class Variant(str, enum.Enum):
    SEMIDIRECT_BY_MATRIX = "SEMIDIRECT_BY_MATRIX"
    STRUCTURE_CONSTANTS = "STRUCTURE_CONSTANTS"
    CATALOG = "CATALOG"


@dataclass(frozen=True)
class GroupSpec:
    variant: Variant
    matrix: np.ndarray = None
    structure_constants: np.ndarray = None
    name: str = None
    params: dict = field(default_factory=dict)

    @classmethod
    def from_matrix(cls, D):
        return cls(Variant.SEMIDIRECT_BY_MATRIX, matrix=check_endomorphism(D))

    @classmethod
    def from_structure_constants(cls, c):
        return cls(Variant.STRUCTURE_CONSTANTS, structure_constants=lie.check_structure_constants(c))

    @classmethod
    def from_catalog(cls, name, **params):
        return cls(Variant.CATALOG, name=name, params=dict(params))

    def to_dict(self):
        out = {"variant": self.variant.value}
        if self.matrix is not None:
            out["matrix"] = {"dim": int(self.matrix.shape[0]), "rows": self.matrix.tolist()}
        if self.structure_constants is not None:
            out["structure_constants"] = self.structure_constants.tolist()
        if self.name is not None:
            out["name"] = self.name
            out["params"] = self.params
        return out


@dataclass(frozen=True)
class QDReport:
    nilpotent: TriState
    exponential: TriState
    type_i_assumed: bool
    strongly_quasidiagonal: TriState
    quasidiagonal: TriState
    af_embeddable: TriState
    ccr_liminal: TriState
    flow: object = None
    spectrum: object = None
    notes: tuple = ()

    FLAGS = ("nilpotent", "exponential", "strongly_quasidiagonal", "quasidiagonal",
             "af_embeddable", "ccr_liminal")

    def to_dict(self):
        out = {name: getattr(self, name).to_dict() for name in self.FLAGS}
        out["type_i_assumed"] = self.type_i_assumed
        out["flow"] = self.flow.to_dict() if self.flow is not None else None
        out["spectrum"] = self.spectrum.to_dict() if self.spectrum is not None else None
        out["notes"] = list(self.notes)
        return out


def _is_rational(x):
    f = Fraction(x).limit_denominator(RATIONAL_MAX_DENOMINATOR)
    return abs(x - f.numerator / f.denominator) <= RATIONAL_TOL * max(1.0, abs(x))


def elliptic_obstruction(D, tol=1e-8):
    """Rationally independent rotation speeds on a semisimple elliptic block.

    Such a block (the Mautner phenomenon) produces non-locally-closed
    orbits, so the group is not of type I.  Returns the offending pair of
    speeds or ``None``.
    """
    jc = jordan_chevalley(D)
    eps = spectral_tolerance(D)
    thr = BOUNDARY_FACTOR * eps
    scale = max(1.0, float(np.linalg.norm(D)))
    speeds = []
    for c in jc.clusters:
        if abs(c.center.real) <= thr and c.center.imag > thr:
            if np.linalg.norm(jc.nilpotent_part @ c.projector) <= tol * scale:
                speeds.append(float(c.center.imag))
    for i in range(len(speeds)):
        for j in range(i + 1, len(speeds)):
            if not _is_rational(speeds[j] / speeds[i]):
                return speeds[i], speeds[j]
    return None


def _classify_matrix(D, type_i_override=None):
    spec = compute_spectrum(D)
    thr = BOUNDARY_FACTOR * spec.eps
    vals = spec.values
    re, im = vals.real, vals.imag
    notes = list(spec.warnings)

    if np.all(np.abs(vals) <= thr):
        nilpotent = yes("D is nilpotent (sigma(D) = {0}), hence g_D is nilpotent")
    else:
        nilpotent = no("D has a nonzero eigenvalue, so ad on g_D is not nilpotent")

    pure_imag = (np.abs(re) <= thr) & (np.abs(im) > thr)
    if pure_imag.any():
        exponential = no("sigma(D) contains a nonzero purely imaginary eigenvalue")
    else:
        exponential = yes("sigma(D) contains no nonzero purely imaginary eigenvalue")

    # the C*-algebra is a crossed product by the dual flow of D^T
    flow = classify_flow(D.T)
    if flow.kind is FlowKind.ATTRACTOR_INFINITY:
        why = "ax+b criterion: every eigenvalue of D has positive real part"
        qd = no(why)
        af = no(why + "; no AF embedding")
    elif flow.kind is FlowKind.ATTRACTOR_ZERO:
        why = "ax+b criterion: every eigenvalue of D has negative real part"
        qd = no(why)
        af = no(why + "; no AF embedding")
    else:
        why = ("ax+b criterion: the real parts of sigma(D) are not all of one strict sign "
               "(dual flow chain recurrent)")
        qd = yes(why)
        af = yes(why + "; AF-embeddable")
    if flow.boundary_flag:
        notes.append("an eigenvalue real part lies within 10*eps_spec of 0 and was treated as 0")

    obstruction = elliptic_obstruction(D)
    if type_i_override is not None:
        type_i = bool(type_i_override)
    else:
        type_i = obstruction is None
    if obstruction is not None:
        notes.append(
            "rotation speeds %.12g and %.12g are rationally independent: orbits are not "
            "locally closed, the group is not of type I" % obstruction
        )

    imaginary_spectrum = bool(np.all(np.abs(re) <= thr))
    if not type_i:
        gap = "type-I hypothesis fails or is not assumed; the ad-spectrum criterion does not apply"
        sqd = unknown(gap)
        ccr = unknown(gap)
    elif imaginary_spectrum:
        why = "type I and sigma(ad A) = t*sigma(D) u {0} is purely imaginary or zero for all A"
        sqd = yes(why)
        ccr = yes(why + "; CCR")
    else:
        why = "type I and D has an eigenvalue off the imaginary axis, so some ad A has a non-imaginary eigenvalue"
        sqd = no(why)
        ccr = no(why + "; not CCR")
    return QDReport(
        nilpotent=nilpotent,
        exponential=exponential,
        type_i_assumed=type_i,
        strongly_quasidiagonal=sqd,
        quasidiagonal=qd,
        af_embeddable=af,
        ccr_liminal=ccr,
        flow=flow,
        spectrum=spec,
        notes=tuple(notes),
    )


def ad_condition(c, samples=AD_SAMPLES, seed=0):
    """Heuristic check that every ``ad A`` has purely imaginary or zero
    spectrum: basis vectors plus ``samples`` random unit vectors.

    Returns ``(Tri, worst_real_part)``: ``NO`` on a clear violation,
    ``YES`` when every sample sits within ``10 * eps`` of the imaginary
    axis, ``UNKNOWN`` in between.
    """
    n = c.shape[0]
    eps = spectral_tolerance(c.reshape(n, -1))
    rng = check_random_state(seed)
    X = np.vstack([np.eye(n), rng.standard_normal((samples, n))])
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    worst = 0.0
    for x in X:
        worst = max(worst, float(np.abs(np.linalg.eigvals(lie.ad(c, x)).real).max()))
    if worst <= BOUNDARY_FACTOR * eps:
        return Tri.YES, worst
    if worst > 1e3 * eps:
        return Tri.NO, worst
    return Tri.UNKNOWN, worst


def _classify_structure_constants(c, type_i_override=None, seed=0):
    if not lie.is_solvable(c):
        raise UnsupportedInputError("Lie algebra is not solvable; only solvable groups are supported")
    found = lie.semidirect_form(c)
    if found is not None:
        index, D = found
        rep = _classify_matrix(D, type_i_override)
        nil = lie.is_nilpotent(c)
        nilpotent = (yes("lower central series reaches 0") if nil
                     else no("lower central series stabilises at a nonzero ideal"))
        return QDReport(
            nilpotent=nilpotent,
            exponential=rep.exponential,
            type_i_assumed=rep.type_i_assumed,
            strongly_quasidiagonal=rep.strongly_quasidiagonal,
            quasidiagonal=rep.quasidiagonal,
            af_embeddable=rep.af_embeddable,
            ccr_liminal=rep.ccr_liminal,
            flow=rep.flow,
            spectrum=rep.spectrum,
            notes=rep.notes + (f"recognised as R x_D V with R spanned by basis vector {index}",),
        )

    nil = lie.is_nilpotent(c)
    if nil:
        nilpotent = yes("lower central series reaches 0")
        exponential = yes("nilpotent simply connected groups are exponential")
    else:
        nilpotent = no("lower central series stabilises at a nonzero ideal")
        exponential = unknown("exponentiality is only decided for nilpotent or R x_D V algebras")
    type_i = True if type_i_override is None else bool(type_i_override)
    tri, worst = ad_condition(c, seed=seed)
    sampled = f"ad-spectrum sampled on the basis and {AD_SAMPLES} random directions (max |Re| = {worst:.3g})"
    if not type_i:
        sqd = unknown("type-I hypothesis not assumed; " + sampled)
    elif nil:
        sqd = yes("type I and nilpotent: every ad A is nilpotent")
    elif tri is Tri.YES:
        sqd = yes("type I and " + sampled + ", all purely imaginary or zero (heuristic)")
    elif tri is Tri.NO:
        sqd = no("type I and " + sampled + ": a non-imaginary eigenvalue occurs")
    else:
        sqd = unknown("near-boundary ad-spectrum; " + sampled)
    ccr = TriState(sqd.value, sqd.justification + "; CCR coincides with strong quasidiagonality")
    if sqd.value is Tri.YES:
        qd = yes("strongly quasidiagonal implies quasidiagonal")
    else:
        qd = unknown("the quasidiagonality criterion needs the form R x_D V")
    af = unknown("AF-embeddability is only decided for R x_D V")
    return QDReport(
        nilpotent=nilpotent,
        exponential=exponential,
        type_i_assumed=type_i,
        strongly_quasidiagonal=sqd,
        quasidiagonal=qd,
        af_embeddable=af,
        ccr_liminal=ccr,
        notes=("type I assumed for user-supplied structure constants",) if type_i_override is None else (),
    )


def classify(spec, tol=None, type_i_assumed=None, seed=0):
    """Regularity report for the group described by ``spec``.

    ``spec`` may be a :class:`GroupSpec` or a bare matrix.  ``tol`` is
    accepted for interface symmetry; all decisions use ``eps_spec``.
    """
    if not isinstance(spec, GroupSpec):
        spec = GroupSpec.from_matrix(spec)
    if spec.variant is Variant.SEMIDIRECT_BY_MATRIX:
        return _classify_matrix(spec.matrix, type_i_assumed)
    if spec.variant is Variant.STRUCTURE_CONSTANTS:
        return _classify_structure_constants(spec.structure_constants, type_i_assumed, seed)
    from .catalog import catalog

    return catalog(spec.name, **spec.params).report


@dataclass(frozen=True, eq=False)
class IsoInvariant:
    """``(n0, {n_plus, n_minus})``; the pair is unordered."""

    n0: int
    pair: tuple

    def __post_init__(self):
        object.__setattr__(self, "pair", tuple(sorted(self.pair, reverse=True)))

    @property
    def dim(self):
        return self.n0 + sum(self.pair)

    @property
    def non_quasidiagonal(self):
        return self.dim > 0 and self.n0 == 0 and self.pair[0] * self.pair[1] == 0

    def __eq__(self, other):
        return isinstance(other, IsoInvariant) and (self.n0, self.pair) == (other.n0, other.pair)

    def __hash__(self):
        return hash((self.n0, self.pair))

    def to_dict(self):
        return {"n0": self.n0, "pair": list(self.pair), "non_quasidiagonal": self.non_quasidiagonal}


def iso_invariant(D, tol=1e-8):
    """``(dim Ker D, {n_+, n_-})`` for ``D`` semisimple without nonzero
    purely imaginary eigenvalues."""
    D = check_endomorphism(D)
    jc = jordan_chevalley(D, tol)
    if not jc.is_semisimple:
        raise NotInEnd0Error("D semisimple", "D is not semisimple")
    spec = compute_spectrum(D)
    thr = BOUNDARY_FACTOR * spec.eps
    vals, mult = spec.values, spec.multiplicities
    if np.any((np.abs(vals.real) <= thr) & (np.abs(vals.imag) > thr)):
        raise NotInEnd0Error("no nonzero purely imaginary eigenvalue",
                             "D has a nonzero purely imaginary eigenvalue")
    n0 = int(mult[np.abs(vals) <= thr].sum())
    npos = int(mult[vals.real > thr].sum())
    nneg = int(mult[vals.real < -thr].sum())
    return IsoInvariant(n0, (npos, nneg))


def count_classes(m):
    """Number of isomorphism classes ``sum_{n0=0}^{m} (1 + floor((m - n0)/2))``."""
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise InvalidInputError(f"m must be a nonnegative integer, got {m!r}")
    return sum(1 + (m - n0) // 2 for n0 in range(m + 1))


def enumerate_classes(m):
    """All invariants with ``n0 + a + b = m``, ``n0`` descending then ``a``
    descending.  Exactly one entry is non-quasidiagonal when ``m >= 1``."""
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise InvalidInputError(f"m must be a nonnegative integer, got {m!r}")
    if m > 64:
        raise InvalidInputError("enumerate_classes supports m <= 64")
    out = []
    for n0 in range(m, -1, -1):
        r = m - n0
        for b in range(0, r // 2 + 1):
            out.append(IsoInvariant(n0, (r - b, b)))
    return out
