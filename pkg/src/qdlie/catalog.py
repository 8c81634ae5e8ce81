"""Built-in groups with their defining data and stored regularity flags."""

from dataclasses import dataclass, replace
import math
import re

import numpy as np

from . import lie
from .classifier import (
    GroupSpec,
    QDReport,
    _classify_matrix,
    _classify_structure_constants,
    no,
    unknown,
    yes,
)
from .exceptions import InvalidInputError

CATALOG_NAMES = ("S2", "S3", "S4", "mautner", "heisenberg", "euclid_scaled")
DEFAULTS = {"S3": {"sigma": 1.0}, "mautner": {"theta": math.sqrt(2.0)}, "euclid_scaled": {"n": 2}}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict
    spec: GroupSpec
    report: QDReport
    description: str

    def to_dict(self):
        return {
            "name": self.name,
            "params": self.params,
            "description": self.description,
            "spec": self.spec.to_dict(),
            "report": self.report.to_dict(),
        }


def rotation_generator(speed=1.0):
    return np.array([[0.0, speed], [-speed, 0.0]])


def _sc(n, brackets):
    c = np.zeros((n, n, n))
    for (i, j), image in brackets.items():
        for k, coef in image.items():
            c[i, j, k] += coef
            c[j, i, k] -= coef
    return c


def heisenberg_constants():
    # basis (X, Y, Z), [X, Y] = Z
    return _sc(3, {(0, 1): {2: 1.0}})


def s4_constants():
    # basis (T, S, X, Y): T scales, S rotates the plane (X, Y)
    return _sc(4, {(0, 2): {2: 1.0}, (0, 3): {3: 1.0}, (1, 2): {3: -1.0}, (1, 3): {2: 1.0}})


def euclid_scaled_constants(n):
    """``(R x so(n)) x R^n``: basis ``T``, ``E_ab`` (a < b), ``X_1..X_n``."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    dim = 1 + len(pairs) + n
    x0 = 1 + len(pairs)
    E = {p: 1 + i for i, p in enumerate(pairs)}
    br = {}

    def add(i, j, k, coef):
        br.setdefault((i, j), {})
        br[(i, j)][k] = br[(i, j)].get(k, 0.0) + coef

    for a in range(n):
        add(0, x0 + a, x0 + a, 1.0)
    # E_ab acts as e_b e_a^T - e_a e_b^T on R^n
    for (a, b), idx in E.items():
        add(idx, x0 + a, x0 + b, 1.0)
        add(idx, x0 + b, x0 + a, -1.0)

    def gen(p):
        M = np.zeros((n, n))
        M[p[1], p[0]], M[p[0], p[1]] = 1.0, -1.0
        return M

    for p in pairs:
        for q in pairs:
            if E[p] >= E[q]:
                continue
            C = gen(p) @ gen(q) - gen(q) @ gen(p)
            for r in pairs:
                coef = C[r[1], r[0]]
                if coef != 0.0:
                    add(E[p], E[q], E[r], coef)
    return _sc(dim, br)


def _cited(report, source, **overrides):
    fields = {}
    for flag in QDReport.FLAGS:
        ts = overrides.get(flag, getattr(report, flag))
        fields[flag] = replace(ts, justification=f"{ts.justification} [{source}]")
    return replace(report, **fields)


def _s2():
    D = np.array([[1.0]])
    rep = _classify_matrix(D, type_i_override=True)
    return GroupSpec.from_matrix(D), _cited(rep, "real ax+b group"), "connected real ax+b group R x_{e^t} R"


def _s3(sigma):
    sigma = float(sigma)
    if sigma == 0.0:
        raise InvalidInputError("S3 needs sigma != 0")
    D = np.array([[sigma, 1.0], [-1.0, sigma]])
    rep = _classify_matrix(D, type_i_override=True)
    return GroupSpec.from_matrix(D), _cited(rep, "S3 rotating dilation"), (
        f"R x R^2 acting by e^(sigma t) rotation(t), sigma = {sigma!r}")


def _s4():
    c = s4_constants()
    base = _classify_structure_constants(c, type_i_override=True)
    src = "S4 maps onto (R x SO(2)) x R^2 whose C*-algebra is not quasidiagonal"
    rep = _cited(
        base,
        "S4",
        strongly_quasidiagonal=no("the quotient (R x SO(2)) x R^2 has a non-quasidiagonal C*-algebra, "
                                  "so C*(S4) is not strongly quasidiagonal; " + src),
        quasidiagonal=unknown("only failure of strong quasidiagonality is known for C*(S4)"),
        af_embeddable=unknown("undecided, as for quasidiagonality"),
        ccr_liminal=no("type I and not strongly quasidiagonal, hence not CCR"),
        exponential=no("ad(S) has eigenvalues +-i, so the exponential map is not injective"),
    )
    return GroupSpec.from_structure_constants(c), rep, "R^2 x R^2 acting by e^t rotation(s)"


def _mautner(theta):
    theta = float(theta)
    D = np.zeros((4, 4))
    D[:2, :2] = rotation_generator(1.0)
    D[2:, 2:] = rotation_generator(theta)
    rep = _classify_matrix(D, type_i_override=False)
    rep = replace(rep, notes=rep.notes + ("the Mautner group is solvable but not of type I",))
    return GroupSpec.from_matrix(D), _cited(rep, "Mautner group"), (
        f"R x R^4 rotating the two planes at speeds 1 and {theta!r}")


def _heisenberg():
    c = heisenberg_constants()
    rep = _classify_structure_constants(c, type_i_override=True)
    return GroupSpec.from_structure_constants(c), _cited(rep, "nilpotent groups"), "3-dimensional Heisenberg group"


def _euclid(n):
    if int(n) != n or n < 1:
        raise InvalidInputError("euclid_scaled needs an integer n >= 1")
    n = int(n)
    c = euclid_scaled_constants(n)
    why = "R x C*(E(n)) is not quasidiagonal (nonunitary isometry from a(x) = 1 - e^{-|x|})"
    solvable = lie.is_solvable(c)
    rep = QDReport(
        nilpotent=no("T acts on R^n by the identity, so ad T is not nilpotent"),
        exponential=(yes("n = 1 gives the real ax+b group") if n == 1
                     else no("contains the compact torus SO(2), so the group is not exponential")),
        type_i_assumed=True,
        strongly_quasidiagonal=no("not quasidiagonal, hence not strongly quasidiagonal"),
        quasidiagonal=no(why),
        af_embeddable=no(why + "; no AF embedding"),
        ccr_liminal=(no("type I solvable and not strongly quasidiagonal, hence not CCR") if solvable
                     else unknown("not solvable; the CCR criterion does not apply")),
        notes=("stored flags; dual of (R x SO(n)) x R^n with R acting by dilations",),
    )
    return GroupSpec.from_structure_constants(c), _cited(rep, "Euclidean motion group scaled by R"), (
        f"(R x so({n})) x R^{n}")


_BUILDERS = {
    "S2": (_s2, ()),
    "S3": (_s3, ("sigma",)),
    "S4": (_s4, ()),
    "mautner": (_mautner, ("theta",)),
    "heisenberg": (_heisenberg, ()),
    "euclid_scaled": (_euclid, ("n",)),
}

_NAME_RE = re.compile(r"^\s*([A-Za-z_0-9]+?)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def parse_name(text):
    """``"S3(2)"`` -> ``("S3", {"sigma": 2.0})``."""
    m = _NAME_RE.match(text)
    if not m or m.group(1) not in _BUILDERS:
        raise InvalidInputError(f"unknown catalog entry {text!r}; valid names: {', '.join(CATALOG_NAMES)}")
    name, arg = m.group(1), m.group(2)
    keys = _BUILDERS[name][1]
    if arg is None or arg == "":
        return name, {}
    if not keys:
        raise InvalidInputError(f"{name} takes no parameters")
    try:
        value = float(arg)
    except ValueError:
        raise InvalidInputError(f"bad parameter {arg!r} for {name}") from None
    if name == "euclid_scaled":
        if value != int(value):
            raise InvalidInputError("euclid_scaled needs an integer n")
        value = int(value)
    return name, {keys[0]: value}


def catalog(name, **params):
    """Defining data and stored report of a built-in group.

    >>> catalog("S2").report.quasidiagonal.value.value
    'NO'
    """
    if "(" in name:
        name, parsed = parse_name(name)
        params = {**parsed, **params}
    if name not in _BUILDERS:
        raise InvalidInputError(f"unknown catalog entry {name!r}; valid names: {', '.join(CATALOG_NAMES)}")
    builder, keys = _BUILDERS[name]
    extra = set(params) - set(keys)
    if extra:
        raise InvalidInputError(f"{name} does not take {sorted(extra)}")
    full = {**DEFAULTS.get(name, {}), **params}
    spec, report, description = builder(*(full[k] for k in keys))
    spec = replace(spec, name=name, params=full)
    return CatalogEntry(name=name, params=full, spec=spec, report=report, description=description)


def all_entries():
    return [catalog(n) for n in CATALOG_NAMES]
