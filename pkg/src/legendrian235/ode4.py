"""Fourth-order linear ODEs  u'''' + p3 u''' + p2 u'' + p1 u' + p0 u = 0.

Point transformations (t, u) -> (lambda(t), mu(t) u) act on these ODEs.  In
Laguerre-Forsyth form (p3 = p2 = 0) with p1 = 0 the remaining coefficient
q0 is a relative invariant of weight 4, and

    R = 8 q0 q0'' - 9 q0'^2          (weight 10)
    I = R^2 / (4096 q0^5)            (absolute)

Two sign conventions for the absolute invariant are reported: ``I_lit`` is
the formula above; ``I_cls = -I_lit`` is the convention in which the
constant-coefficient ODE with characteristic polynomial s^4 + c2 s^2 + c0
has invariant c2^2 / (9 c2^2 - 100 c0).  All classification code uses
``I_cls``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Sequence

from .errors import DomainError
from .exact import RatFunc
from .jets import Jet, jet_pow, jet_tanh

# ---------------------------------------------------------------------------
# relative and absolute invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantReport:
    q0: RatFunc
    R: RatFunc
    I_lit: RatFunc | None  # None means undefined (q0 = 0)
    I_cls: RatFunc | None

    @property
    def rational_normal(self) -> bool:
        return self.q0.is_zero()

    @property
    def constant_invariant(self) -> bool:
        return self.I_lit is not None and not self.I_lit.depends_on("t")

    def to_json(self) -> dict:
        def s(x):
            return "undefined" if x is None else str(x)
        return {"q0": str(self.q0), "R": str(self.R), "I_lit": s(self.I_lit),
                "I_cls": s(self.I_cls), "rational_normal": self.rational_normal,
                "I_constant": self.constant_invariant}


def relative_invariant_R(q0) -> RatFunc:
    q0 = RatFunc.coerce(q0)
    d1 = q0.derivative("t")
    return 8 * q0 * d1.derivative("t") - 9 * d1 * d1


def legendrian_invariants(q0) -> InvariantReport:
    q0 = RatFunc.coerce(q0)
    R = relative_invariant_R(q0)
    if q0.is_zero():
        return InvariantReport(q0, R, None, None)
    I_lit = R * R / (4096 * q0 ** 5)
    return InvariantReport(q0, R, I_lit, -I_lit)


def exponential_family_q0(c2, c0) -> RatFunc:
    """q0 reached from u'''' + c2 u'' + c0 u = 0 by the tanh reduction."""
    c2, c0 = RatFunc.coerce(c2), RatFunc.coerce(c0)
    t = RatFunc.var("t")
    return -1600 * (9 * c2 ** 2 - 100 * c0) / (t ** 2 + 40 * c2) ** 4


@dataclass(frozen=True)
class ClassInvariant:
    q0_is_zero: bool
    I_cls: RatFunc | None


def class_invariant_from_charpoly(c2, c0) -> ClassInvariant:
    """Invariant of u'''' + c2 u'' + c0 u = 0 (char. poly s^4 + c2 s^2 + c0)."""
    c2, c0 = RatFunc.coerce(c2), RatFunc.coerce(c0)
    disc = 9 * c2 ** 2 - 100 * c0
    if disc.is_zero():
        return ClassInvariant(True, None)
    return ClassInvariant(False, c2 ** 2 / disc)


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mobius:
    a: RatFunc
    b: RatFunc
    c: RatFunc
    d: RatFunc

    def __init__(self, a, b, c, d):
        vals = [RatFunc.coerce(x) for x in (a, b, c, d)]
        if any(v.depends_on("t") for v in vals):
            raise DomainError("Moebius coefficients must not depend on t")
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)
        if self.det.is_zero():
            raise DomainError("singular Moebius map (ad - bc = 0)")

    @property
    def det(self) -> RatFunc:
        return self.a * self.d - self.b * self.c

    def as_ratfunc(self) -> RatFunc:
        t = RatFunc.var("t")
        return (self.a * t + self.b) / (self.c * t + self.d)

    def derivative(self) -> RatFunc:
        t = RatFunc.var("t")
        return self.det / (self.c * t + self.d) ** 2

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose(self, inner: "Mobius") -> "Mobius":
        """self o inner."""
        return Mobius(self.a * inner.a + self.b * inner.c, self.a * inner.b + self.b * inner.d,
                      self.c * inner.a + self.d * inner.c, self.c * inner.b + self.d * inner.d)

    @classmethod
    def from_ratfunc(cls, lam) -> "Mobius":
        """Recognize (a t + b)/(c t + d); raise if lam is not of that shape."""
        lam = RatFunc.coerce(lam)
        num = lam.numerator
        den = lam.denominator
        if num.degree("t") > 1 or den.degree("t") > 1:
            raise DomainError(f"{lam} is not a Moebius map")
        n = lam.numerator_ratfunc().coeffs_in("t")
        d = lam.denominator_ratfunc().coeffs_in("t")
        return cls(n.get(1, 0), n.get(0, 0), d.get(1, 0), d.get(0, 0))


def mobius_transform_q0(q0, a, b, c, d) -> RatFunc:
    """q~0 with q~0(lambda(t)) = q0(t) / lambda'(t)^4, lambda = (at+b)/(ct+d)."""
    m = Mobius(a, b, c, d)
    q0 = RatFunc.coerce(q0)
    inv = m.inverse().as_ratfunc()
    pulled = q0 / m.derivative() ** 4
    return pulled.substitute("t", inv)


# ---------------------------------------------------------------------------
# general point transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ODE4:
    """u'''' + p3 u''' + p2 u'' + p1 u' + p0 u = 0 with RatFunc coefficients."""

    p3: RatFunc = field(default_factory=lambda: RatFunc(0))
    p2: RatFunc = field(default_factory=lambda: RatFunc(0))
    p1: RatFunc = field(default_factory=lambda: RatFunc(0))
    p0: RatFunc = field(default_factory=lambda: RatFunc(0))

    def __post_init__(self):
        for name in ("p3", "p2", "p1", "p0"):
            object.__setattr__(self, name, RatFunc.coerce(getattr(self, name)))

    @classmethod
    def laguerre_forsyth(cls, q0, q1=0) -> "ODE4":
        return cls(0, 0, q1, q0)

    @property
    def coefficients(self) -> list[RatFunc]:
        """[p0, p1, p2, p3]."""
        return [self.p0, self.p1, self.p2, self.p3]

    @property
    def is_LF(self) -> bool:
        return self.p3.is_zero() and self.p2.is_zero()

    @property
    def is_legendrian_class(self) -> bool | None:
        """In LF form Theta_3 is a nonzero multiple of p1; None outside LF form."""
        if not self.is_LF:
            return None
        return self.p1.is_zero()

    def apply(self, u) -> RatFunc:
        """Left-hand side evaluated on a rational function u(t)."""
        u = RatFunc.coerce(u)
        ds = [u]
        for _ in range(4):
            ds.append(ds[-1].derivative("t"))
        return ds[4] + sum((p * d for p, d in zip(self.coefficients, ds)), RatFunc(0))

    def to_json(self) -> dict:
        return {"p3": str(self.p3), "p2": str(self.p2), "p1": str(self.p1), "p0": str(self.p0)}


def pulled_back_coefficients(p: Sequence, lam, mu, deriv: Callable, one) -> list:
    """Coefficients of the transformed ODE, composed with lambda.

    With u~(lambda(t)) = mu(t) u(t) and p = [p0, p1, p2, p3] (leading 1
    implied), returns [p~0 o lambda, ..., p~3 o lambda].  Works for any
    field-like type given its ``deriv`` and unit ``one`` (RatFunc or Jet).
    """
    coeffs = list(p) + [one]
    lp = deriv(lam)
    # w = u~ o lambda,  w^(i) = sum_j B[i][j] (u~^(j) o lambda)
    B = [[one]]
    for i in range(4):
        prev = B[-1]
        row = []
        for j in range(i + 2):
            term = deriv(prev[j]) if j <= i else None
            if j >= 1:
                shifted = prev[j - 1] * lp
                term = shifted if term is None else term + shifted
            row.append(term)
        B.append(row)
    # u = w / mu,  u^(k) = sum_i C(k, i) m^(k-i) w^(i)
    m = [one / mu]
    for _ in range(4):
        m.append(deriv(m[-1]))
    E = []
    for j in range(5):
        acc = None
        for k in range(j, 5):
            if _is_zero(coeffs[k]):
                continue
            inner = None
            for i in range(j, k + 1):
                term = m[k - i] * B[i][j] * comb(k, i)
                inner = term if inner is None else inner + term
            term = coeffs[k] * inner
            acc = term if acc is None else acc + term
        E.append(acc if acc is not None else one * 0)
    return [E[j] / E[4] for j in range(4)]


def _is_zero(x) -> bool:
    if isinstance(x, RatFunc):
        return x.is_zero()
    if isinstance(x, Jet):
        return all(c == 0 for c in x.coeffs)
    return x == 0


def _ratfunc_deriv(x: RatFunc) -> RatFunc:
    return x.derivative("t")


def pullback_transform_ode(e: ODE4, lam, mu) -> list[RatFunc]:
    """[p~0 o lambda, ..., p~3 o lambda] for any rational lambda, mu."""
    lam, mu = RatFunc.coerce(lam), RatFunc.coerce(mu)
    if lam.derivative("t").is_zero():
        raise DomainError("degenerate transformation: lambda' = 0")
    if mu.is_zero():
        raise DomainError("degenerate transformation: mu = 0")
    return pulled_back_coefficients(e.coefficients, lam, mu, _ratfunc_deriv, RatFunc(1))


def general_transform_ode(e: ODE4, lam, mu) -> ODE4:
    """Transformed ODE in the new variable; lambda must be a Moebius map.

    For other lambda the inverse is not rational; use
    ``pullback_transform_ode`` to get the coefficients composed with lambda.
    """
    m = Mobius.from_ratfunc(lam)
    pulled = pullback_transform_ode(e, m.as_ratfunc(), mu)
    inv = m.inverse().as_ratfunc()
    p0, p1, p2, p3 = (x.substitute("t", inv) for x in pulled)
    return ODE4(p3, p2, p1, p0)


# ---------------------------------------------------------------------------
# numeric Laguerre-Forsyth reduction of u'''' + c2 u'' + c0 u = 0
# ---------------------------------------------------------------------------


@dataclass
class LFReport:
    c2: complex
    c0: complex
    ts: list[float]
    max_p3: float
    max_p2: float
    max_p1: float
    max_q0_err: float
    samples: list[dict] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.max_p3, self.max_p2, self.max_p1, self.max_q0_err)

    def to_json(self) -> dict:
        return {"c2": _cstr(self.c2), "c0": _cstr(self.c0), "ts": self.ts,
                "max_p3": self.max_p3, "max_p2": self.max_p2, "max_p1": self.max_p1,
                "max_q0_err": self.max_q0_err, "max_residual": self.max_residual}


def _cstr(z: complex) -> str:
    return repr(complex(z))


def lf_lambda_jet(c2: complex, t0: float, order: int = 6) -> Jet:
    """Jet of lambda(t) = -2 sqrt(-10 c2) tanh(t sqrt(-c2/10)) at t0."""
    k = cmath.sqrt(-c2 / 10)
    scale = -2 * cmath.sqrt(-10 * c2)
    return jet_tanh(Jet.variable(t0, order) * k) * scale


def lf_target_q0(c2: complex, c0: complex, T: complex) -> complex:
    return -1600 * (9 * c2 ** 2 - 100 * c0) / (T ** 2 + 40 * c2) ** 4


def numeric_lf_reduce(c2: complex, c0: complex, sample_ts: Sequence[float],
                      order: int = 6, branch: int = 1) -> LFReport:
    """Transform u'''' + c2 u'' + c0 u = 0 by the tanh map and mu = lambda'^(3/2).

    ``branch`` = -1 takes the other square-root branch for mu.
    """
    if c2 == 0:
        raise DomainError("already in Laguerre-Forsyth form (c2 = 0)")
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    c2, c0 = complex(c2), complex(c0)
    rep = LFReport(c2, c0, [float(t) for t in sample_ts], 0.0, 0.0, 0.0, 0.0)
    for t0 in sample_ts:
        lam = lf_lambda_jet(c2, t0, order)
        lp = lam.derivative()
        if lp.value == 0:
            raise DomainError(f"lambda' vanishes at t = {t0}")
        mu = jet_pow(lp, 1.5) * branch
        one = Jet.constant(1, order)
        p = [one * c0, one * 0, one * c2, one * 0]
        q0, q1, q2, q3 = (x.value for x in
                          pulled_back_coefficients(p, lam, mu, Jet.derivative, one))
        target = lf_target_q0(c2, c0, lam.value)
        sample = {"t": t0, "p3": abs(q3), "p2": abs(q2), "p1": abs(q1),
                  "q0_err": abs(q0 - target)}
        rep.samples.append(sample)
        rep.max_p3 = max(rep.max_p3, sample["p3"])
        rep.max_p2 = max(rep.max_p2, sample["p2"])
        rep.max_p1 = max(rep.max_p1, sample["p1"])
        rep.max_q0_err = max(rep.max_q0_err, sample["q0_err"])
    return rep


__all__ = [
    "InvariantReport", "legendrian_invariants", "relative_invariant_R", "exponential_family_q0",
    "ClassInvariant", "class_invariant_from_charpoly", "Mobius", "mobius_transform_q0",
    "ODE4", "pulled_back_coefficients", "pullback_transform_ode", "general_transform_ode",
    "LFReport", "numeric_lf_reduce", "lf_lambda_jet", "lf_target_q0",
]
