"""Homogeneous nondegenerate Legendrian curves in P^3.

A homogeneous curve is the projectivized orbit gamma(t) = exp(tA) z of a
matrix A in csp(4) through a base point z.  Up to projective equivalence
the curves with minpoly(A) = charpoly(A) fall into the one-parameter
family L_{r^2} (with L_{r^2} = L_{1/r^2}), the Jordan-type classes L_1 and
L_0, and the rational normal curve (r^2 = 9 or 1/9).  The label used here
is the class invariant

    I_cls = c2^2 / (9 c2^2 - 100 c0),   charpoly(A) = s^4 + c2 s^2 + c0,

which for diag(r, 1, -1, -r) equals (r^2+1)^2 / ((r^2-9)(9r^2-1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .errors import DomainError
from .exact import RatFunc
from .exppoly import ExpPoly, ep_linear_system, exp_orbit, wedge3
from .linalg import MatF, PolyInS, charpoly, minpoly
from .ode4 import class_invariant_from_charpoly

RNC_LABELS = (Fraction(9), Fraction(1, 9))


@dataclass(frozen=True)
class CurveSpec:
    """A pair (A, z): the curve t -> [exp(tA) z]."""

    A: MatF
    z: tuple[RatFunc, ...]

    def __init__(self, A, z: Sequence):
        if not isinstance(A, MatF):
            A = MatF.from_rows(A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "z", tuple(RatFunc.coerce(x) for x in z))
        if A.shape != (4, 4) or len(self.z) != 4:
            raise DomainError("a curve spec needs a 4x4 matrix and a 4-vector")

    def orbit(self):
        return exp_orbit(self.A, self.z)

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "z": [str(x) for x in self.z]}


@dataclass(frozen=True)
class Representative:
    name: str
    A: MatF
    sigma: MatF
    z: tuple[RatFunc, ...]

    def to_json(self) -> dict:
        return {"name": self.name, "A": self.A.to_json(), "sigma": self.sigma.to_json(),
                "z": [str(x) for x in self.z]}


@dataclass(frozen=True)
class CurveClass:
    kind: str  # "RationalNormal" or "Lclass"
    invariant_cls: RatFunc | None = None
    r_squared: Fraction | None = None
    representative: Representative | None = None
    fA: PolyInS | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.invariant_cls is not None:
            out["I"] = str(self.invariant_cls)
        if self.r_squared is not None:
            out["r_squared"] = str(self.r_squared)
        if self.fA is not None:
            out["fA"] = str(self.fA)
        if self.representative is not None:
            out["representative"] = self.representative.to_json()
        return out


# ---------------------------------------------------------------------------
# catalog of normal forms
# ---------------------------------------------------------------------------

def antidiag(a, b, c, d) -> MatF:
    return MatF.from_rows([[0, 0, 0, a], [0, 0, b, 0], [0, c, 0, 0], [d, 0, 0, 0]])


def matrix_L(r) -> MatF:
    r = RatFunc.coerce(r)
    return MatF.diag([r, 1, -1, -r])


MATRIX_L1 = MatF.from_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, -1, 1], [0, 0, 0, -1]])
MATRIX_L0 = MatF.from_rows([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, -1]])
MATRIX_NILPOTENT = MatF.from_rows([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
ONES = tuple(RatFunc(1) for _ in range(4))
E1 = (RatFunc(1), RatFunc(0), RatFunc(0), RatFunc(0))


def sigma_L(r) -> MatF:
    r = RatFunc.coerce(r)
    return antidiag(1, -r, r, -1)


SIGMA_L1 = MatF.from_rows([[0, 0, 0, 1], [0, 0, -1, -1], [0, 1, 0, 0], [-1, 1, 0, 0]])
SIGMA_L0 = antidiag(1, -2, 2, -1)
SIGMA_NILPOTENT = antidiag(1, -1, 1, -1)

CATALOG_NAMES = ("L", "L1", "L0", "RNC-diag", "RNC-nilpotent")


def representative(name: str, r=None) -> Representative:
    """Normal form with its compatible sigma and normalized base point."""
    if name == "L":
        if r is None:
            r = RatFunc.var("r")
        return Representative("L", matrix_L(r), sigma_L(r), ONES)
    if name == "L1":
        return Representative("L1", MATRIX_L1, SIGMA_L1, ONES)
    if name == "L0":
        return Representative("L0", MATRIX_L0, SIGMA_L0, ONES)
    if name == "RNC-diag":
        return Representative("RNC-diag", matrix_L(3), sigma_L(3), ONES)
    if name == "RNC-nilpotent":
        return Representative("RNC-nilpotent", MATRIX_NILPOTENT, SIGMA_NILPOTENT, E1)
    raise DomainError(f"unknown catalog representative {name!r}")


def catalog_spec(name: str, r=None) -> CurveSpec:
    rep = representative(name, r)
    return CurveSpec(rep.A, rep.z)


# ---------------------------------------------------------------------------
# basic tests
# ---------------------------------------------------------------------------

def check_star(A: MatF) -> bool:
    """minpoly(A) == charpoly(A)."""
    if not A.is_square():
        raise DomainError("check_star needs a square matrix")
    return minpoly(A) == charpoly(A)


def osculating_matrix(spec: CurveSpec) -> MatF:
    cols = [list(spec.z)]
    for _ in range(3):
        cols.append(spec.A.apply(cols[-1]))
    return MatF.from_columns(cols)


def admissible(spec: CurveSpec) -> bool:
    return osculating_matrix(spec).rank() == 4


def even_charpoly(A: MatF) -> tuple[PolyInS, RatFunc, RatFunc]:
    """charpoly = s^4 + c2 s^2 + c0, or raise when odd coefficients appear."""
    f = charpoly(A)
    if not f.coeff(3).is_zero() or not f.coeff(1).is_zero():
        raise DomainError("spectrum not symmetric - not conjugate into sp(4)")
    return f, f.coeff(2), f.coeff(0)


# ---------------------------------------------------------------------------
# compatible symplectic form
# ---------------------------------------------------------------------------

_SIGMA_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _skew_unknown():
    names = [f"_s{i + 1}{j + 1}" for i, j in _SIGMA_PAIRS]
    S = [[RatFunc(0)] * 4 for _ in range(4)]
    for (i, j), n in zip(_SIGMA_PAIRS, names):
        v = RatFunc.var(n)
        S[i][j], S[j][i] = v, -v
    return names, MatF.from_rows(S)


def _sigma_from_vector(v: Sequence[RatFunc]) -> MatF:
    S = [[RatFunc(0)] * 4 for _ in range(4)]
    for (i, j), x in zip(_SIGMA_PAIRS, v):
        S[i][j], S[j][i] = x, -x
    return MatF.from_rows(S)


def sigma_space(spec: CurveSpec) -> list[MatF]:
    """Basis of skew forms with A^T S + S A = 0 and S(gamma, gamma') = 0."""
    names, S = _skew_unknown()
    A = spec.A
    conds: list = [ExpPoly.const(x) for x in (A.T @ S + S @ A).entries]
    g = spec.orbit()
    gp = g.derivative()
    Sgp = gp.act(S)
    acc = ExpPoly()
    for a, b in zip(g, Sgp):
        acc = acc + a * b
    conds.append(acc)
    sol = ep_linear_system(conds, names)
    return [_sigma_from_vector(v) for v in sol.basis]


def compatible_sigma(spec: CurveSpec) -> MatF:
    """The compatible skew form, normalized to have entry (1,4) equal to 1."""
    if not admissible(spec):
        raise DomainError("base point is not admissible")
    basis = sigma_space(spec)
    if len(basis) != 1:
        raise DomainError(f"compatible sigma space has dimension {len(basis)}, expected 1")
    S = basis[0]
    pivot = S[0, 3]
    if pivot.is_zero():
        pivot = next(x for x in S.entries if not x.is_zero())
    return S.scale(1 / pivot)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def invariant_of_r2(x) -> RatFunc:
    x = RatFunc.coerce(x)
    return (x + 1) ** 2 / ((x - 9) * (9 * x - 1))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def r_squared_from_invariant(I: Fraction) -> Fraction | None:
    """Rational root x of (x+1)^2 = I (x-9)(9x-1), the one with |x| >= 1.

    I = 1/9 gives x = 0 (the L_0 class); returns None if no rational root.
    """
    I = Fraction(I)
    a = 9 * I - 1
    b = -(82 * I + 2)
    if a == 0:
        return Fraction(0)
    root = _rational_sqrt(400 * I * (16 * I + 1))
    if root is None:
        return None
    x1, x2 = (-b + root) / (2 * a), (-b - root) / (2 * a)
    return x1 if abs(x1) >= 1 else x2


def _representative_for_r2(x: Fraction | None) -> Representative | None:
    if x is None:
        return None
    if x == 0:
        return representative("L0")
    if x == 1:
        return representative("L1")
    if x in RNC_LABELS:
        return representative("RNC-diag")
    r = _rational_sqrt(x if abs(x) >= 1 else 1 / x)
    return representative("L", r) if r is not None else None


def class_from_r2(x: Fraction) -> CurveClass:
    """Class with label r^2 = x (x = 1 is the Jordan class L_1, x = 0 is L_0)."""
    x = Fraction(x)
    if x in RNC_LABELS:
        return CurveClass("RationalNormal", representative=representative("RNC-diag"))
    if x != 0:
        x = x if abs(x) >= 1 else 1 / x
    I = invariant_of_r2(x)
    return CurveClass("Lclass", I, x, _representative_for_r2(x))


def classify(spec: CurveSpec) -> CurveClass:
    f, c2, c0 = even_charpoly(spec.A)
    if not check_star(spec.A):
        raise DomainError("minimal and characteristic polynomials differ")
    if not admissible(spec):
        raise DomainError("base point is not admissible")
    ci = class_invariant_from_charpoly(c2, c0)
    if ci.q0_is_zero:
        return CurveClass("RationalNormal", representative=representative("RNC-diag"), fA=f)
    I = ci.I_cls
    x = r_squared_from_invariant(I.constant_value()) if I.is_constant() else None
    return CurveClass("Lclass", I, x, _representative_for_r2(x), f)


def equivalent(a, b) -> bool:
    """Whether the labels r^2 = a and r^2 = b name the same class."""
    a, b = _label(a), _label(b)
    if a in RNC_LABELS or b in RNC_LABELS:
        return a in RNC_LABELS and b in RNC_LABELS
    return a == b or a * b == 1


def _label(x) -> Fraction:
    if isinstance(x, RatFunc):
        if not x.is_constant():
            raise DomainError(f"label {x} is not a number")
        return x.constant_value()
    return Fraction(x)


# ---------------------------------------------------------------------------
# base point normalization
# ---------------------------------------------------------------------------

def normalize_basepoint(name: str, z: Sequence, r=None) -> MatF:
    """P commuting with the representative's A and sending its base point to z."""
    rep = representative(name, r)
    z1, z2, z3, z4 = (RatFunc.coerce(x) for x in z)
    if not admissible(CurveSpec(rep.A, (z1, z2, z3, z4))):
        raise DomainError("base point is not admissible")
    if name in ("L", "RNC-diag"):
        P = MatF.diag([z1, z2, z3, z4])
    elif name == "RNC-nilpotent":
        P = MatF.from_rows([[z1, 0, 0, 0], [z2, z1, 0, 0], [z3, z2, z1, 0], [z4, z3, z2, z1]])
    elif name == "L1":
        P = MatF.from_rows([[z2, z1 - z2, 0, 0], [0, z2, 0, 0], [0, 0, z4, z3 - z4], [0, 0, 0, z4]])
    else:
        P = MatF.from_rows([[z1, 0, 0, 0], [0, z3, z2 - z3, 0], [0, 0, z3, 0], [0, 0, 0, z4]])
    assert (P @ rep.A - rep.A @ P).is_zero()
    assert P.apply(rep.z) == [z1, z2, z3, z4]
    return P


# ---------------------------------------------------------------------------
# infinitesimal symmetries
# ---------------------------------------------------------------------------

def aut_algebra(spec: CurveSpec, sigma: MatF | None = None) -> list[MatF]:
    """Basis of {u in csp(sigma) : u gamma ^ gamma ^ gamma' = 0}."""
    if sigma is None:
        sigma = compatible_sigma(spec)
    names = [f"_u{i + 1}{j + 1}" for i in range(4) for j in range(4)]
    U = MatF.from_rows([[RatFunc.var(names[4 * i + j]) for j in range(4)] for i in range(4)])
    k = RatFunc.var("_k")
    g = spec.orbit()
    gp = g.derivative()
    conds: list = list(wedge3(list(g.act(U)), list(g), list(gp)))
    conds += [ExpPoly.const(x) for x in (U.T @ sigma + sigma @ U - sigma.scale(k)).entries]
    sol = ep_linear_system(conds, names + ["_k"])
    if sol.kind == "none":
        return []
    return [MatF.from_rows([v[4 * i:4 * i + 4] for i in range(4)]) for v in sol.basis]


def aut_dimension(spec: CurveSpec) -> int:
    classify(spec)
    return len(aut_algebra(spec))


# ---------------------------------------------------------------------------
# rolling spheres
# ---------------------------------------------------------------------------

def rolling_class(rho) -> CurveClass:
    """Class of the curve attached to two spheres with radius ratio rho."""
    rho = Fraction(rho)
    if rho == 0:
        raise DomainError("radius ratio must be nonzero")
    return class_from_r2(rho * rho)
