"""Exponential polynomials  sum_j p_j(t) e^{a_j t}.

Each exponent ``a_j`` is a t-free element of the field (for instance ``r``,
``-r``, ``1`` or ``3``) and each ``p_j`` is a polynomial in t whose
coefficients may involve parameters.  Exponents that differ as field
elements are treated as distinct, which is the right thing for a generic
parameter; substituting a value for the parameter merges terms whose
exponents collide.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .exact import RatFunc
from .linalg import LinearSolution, MatF, solve_linear


def _exponent(a) -> RatFunc:
    a = RatFunc.coerce(a)
    if a.depends_on("t"):
        raise DomainError(f"exponent {a} depends on t")
    return a


class ExpPoly:
    """Immutable map exponent -> polynomial coefficient; zero terms dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        out: dict[RatFunc, RatFunc] = {}
        for a, p in (terms or {}).items():
            a, p = _exponent(a), RatFunc.coerce(p)
            q = out.get(a, RatFunc(0)) + p
            if q.is_zero():
                out.pop(a, None)
            else:
                out[a] = q
        self.terms = out

    @classmethod
    def exp(cls, a, coeff=1) -> "ExpPoly":
        return cls({a: coeff})

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls({0: c})

    @staticmethod
    def coerce(x) -> "ExpPoly":
        if isinstance(x, ExpPoly):
            return x
        return ExpPoly.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = ExpPoly.coerce(other)
        merged = dict(self.terms)
        for a, p in other.terms.items():
            merged[a] = merged[a] + p if a in merged else p
        return ExpPoly(merged)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({a: -p for a, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-ExpPoly.coerce(other))

    def __rsub__(self, other):
        return ExpPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            c = RatFunc.coerce(other)
            return ExpPoly({a: c * p for a, p in self.terms.items()})
        out: dict[RatFunc, RatFunc] = {}
        for a, p in self.terms.items():
            for b, q in other.terms.items():
                k = a + b
                out[k] = out[k] + p * q if k in out else p * q
        return ExpPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = ExpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def derivative(self) -> "ExpPoly":
        """d/dt (p e^{at}) = (p' + a p) e^{at}."""
        return ExpPoly({a: p.derivative("t") + a * p for a, p in self.terms.items()})

    def subs(self, mapping: Mapping[str, object]) -> "ExpPoly":
        """Substitute parameters in exponents and coefficients (not t)."""
        if "t" in mapping:
            raise DomainError("cannot substitute for t in an exponential polynomial")
        return ExpPoly({a.subs(mapping): p.subs(mapping) for a, p in self.terms.items()})

    def coefficients(self, names: Sequence[str] = ()) -> dict[tuple, RatFunc]:
        """Scalar coefficients keyed by (exponent, t-power, monomial in names)."""
        out: dict[tuple, RatFunc] = {}
        for a, p in self.terms.items():
            for key, c in p.collect(("t",) + tuple(names)).items():
                out[(a,) + key] = c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a in sorted(self.terms, key=str):
            p = self.terms[a]
            e = "" if a.is_zero() else ("e^t" if a == 1 else f"e^(({a})*t)")
            c = str(p)
            if not e:
                parts.append(c)
            elif c == "1":
                parts.append(e)
            else:
                parts.append(f"({c})*{e}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExpPoly({str(self)})"


@dataclass(frozen=True)
class ExpPolyVec:
    entries: tuple[ExpPoly, ...]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def derivative(self) -> "ExpPolyVec":
        return ExpPolyVec(tuple(e.derivative() for e in self.entries))

    def subs(self, mapping) -> "ExpPolyVec":
        return ExpPolyVec(tuple(e.subs(mapping) for e in self.entries))

    def act(self, M: MatF | Sequence[Sequence]) -> "ExpPolyVec":
        """Left multiplication by a matrix with field (or symbolic) entries."""
        rows = M.tolist() if isinstance(M, MatF) else [[RatFunc.coerce(x) for x in r] for r in M]
        out = []
        for r in rows:
            acc = ExpPoly()
            for m, e in zip(r, self.entries):
                if m:
                    acc = acc + e * m
            out.append(acc)
        return ExpPolyVec(tuple(out))

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


# ---------------------------------------------------------------------------
# orbits exp(tA) z
# ---------------------------------------------------------------------------

def split_catalog(A: MatF) -> tuple[list[RatFunc], MatF] | None:
    """Write A = D + N with D diagonal (t-free), N nilpotent, [D, N] = 0.

    Returns None unless N only couples equal diagonal entries, which is the
    shape shared by all normal forms used here.
    """
    if not A.is_square():
        return None
    n = A.rows
    d = [A[i, i] for i in range(n)]
    if any(x.depends_on("t") for x in A.entries):
        return None
    N = MatF.from_rows([[0 if i == j else A[i, j] for j in range(n)] for i in range(n)])
    for i in range(n):
        for j in range(n):
            if i != j and not N[i, j].is_zero() and d[i] != d[j]:
                return None
    if not (N ** n).is_zero():
        return None
    return d, N


def exp_orbit(A: MatF, z: Sequence, P: MatF | None = None) -> ExpPolyVec:
    """exp(tA) z for catalog A = D + N, or for A = P B P^{-1} with B catalog."""
    z = [RatFunc.coerce(x) for x in z]
    if len(z) != A.rows:
        raise DomainError("vector length does not match")
    if P is not None:
        Pinv = P.inverse()
        B = Pinv @ A @ P
        inner = exp_orbit(B, Pinv.apply(z))
        return inner.act(P)
    split = split_catalog(A)
    if split is None:
        raise DomainError("non-catalog matrix")
    d, N = split
    n = A.rows
    t = RatFunc.var("t")
    # exp(tN) z as polynomial vectors
    poly = [RatFunc(0)] * n
    v = list(z)
    k = 0
    while any(not x.is_zero() for x in v):
        c = t ** k / factorial(k)
        poly = [p + c * x for p, x in zip(poly, v)]
        v = N.apply(v)
        k += 1
    return ExpPolyVec(tuple(ExpPoly({d[i]: poly[i]}) for i in range(n)))


def ep_derivative(v: ExpPolyVec | ExpPoly):
    return v.derivative()


def ode_residual(e: ExpPoly, coeffs: Sequence) -> ExpPoly:
    """sum_k coeffs[k] * e^{(k)} for constant coefficients (low to high)."""
    acc = ExpPoly()
    d = e
    for c in coeffs:
        if RatFunc.coerce(c):
            acc = acc + d * c
        d = d.derivative()
    return acc


# ---------------------------------------------------------------------------
# linear systems
# ---------------------------------------------------------------------------

def ep_linear_system(conditions: Iterable[ExpPoly], unknowns: Sequence[str]) -> LinearSolution:
    """Solve sum = 0 for every condition, coefficient by coefficient.

    Each scalar equation comes from one (exponent, t-power) pair.  Conditions
    must be affine in the unknowns.
    """
    unknowns = list(unknowns)
    rows: list[list[RatFunc]] = []
    rhs: list[RatFunc] = []
    n = len(unknowns)
    for cond in conditions:
        eqs: dict[tuple, list] = {}
        for a, p in ExpPoly.coerce(cond).terms.items():
            try:
                parts = p.collect(("t",) + tuple(unknowns))
            except ValueError as exc:
                raise DomainError("condition is not linear in the unknowns") from exc
            for key, c in parts.items():
                tpow, mon = key[0], key[1:]
                deg = sum(mon)
                if deg > 1:
                    raise DomainError("condition is not linear in the unknowns")
                row = eqs.setdefault((a, tpow), [[RatFunc(0)] * n, RatFunc(0)])
                if deg == 0:
                    row[1] = row[1] - c
                else:
                    row[0][mon.index(1)] = row[0][mon.index(1)] + c
        for row, b in eqs.values():
            rows.append(row)
            rhs.append(b)
    if not rows:
        basis = [[RatFunc(int(i == j)) for j in range(n)] for i in range(n)]
        return LinearSolution("family" if n else "unique", [RatFunc(0)] * n, basis)
    return solve_linear(MatF.from_rows(rows), rhs)


# ---------------------------------------------------------------------------
# exterior algebra
# ---------------------------------------------------------------------------

def det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def wedge3(a: Sequence, b: Sequence, c: Sequence) -> list:
    """Coordinates of a ^ b ^ c in Lambda^3 of a 4-space.

    Component k is the signed 3x3 minor of [a|b|c] with row k deleted; the
    wedge vanishes iff all four do.
    """
    if not (len(a) == len(b) == len(c) == 4):
        raise DomainError("wedge3 expects vectors of length 4")
    out = []
    for k in range(4):
        idx = [i for i in range(4) if i != k]
        m = [[a[i], b[i], c[i]] for i in idx]
        minor = det3(m)
        out.append(minor if k % 2 == 0 else -minor)
    return out
