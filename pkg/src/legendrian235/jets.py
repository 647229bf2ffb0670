"""Truncated Taylor series with complex floating coefficients.

``Jet([c0, c1, ..., cN])`` stands for c0 + c1 h + ... + cN h^N, the
expansion of some function at a base point.  Elementary functions are
applied through the usual power-series recurrences, so composite
expressions are exact up to rounding through order N.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DomainError

Number = Union[int, float, complex]


@dataclass(frozen=True)
class Jet:
    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Sequence[Number]):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))
        if not self.coeffs:
            raise DomainError("a jet needs at least one coefficient")

    @classmethod
    def variable(cls, x0: Number, order: int) -> "Jet":
        """The identity function expanded at x0."""
        return cls([x0, 1] + [0] * (order - 1)) if order >= 1 else cls([x0])

    @classmethod
    def constant(cls, c: Number, order: int) -> "Jet":
        return cls([c] + [0] * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> complex:
        return self.coeffs[0]

    def derivatives(self) -> list[complex]:
        """f(x0), f'(x0), ..., f^(N)(x0)."""
        out, fact = [], 1
        for k, c in enumerate(self.coeffs):
            if k:
                fact *= k
            out.append(c * fact)
        return out

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order)

    def _pair(self, other):
        other = self._lift(other)
        n = min(self.order, other.order) + 1
        return self.coeffs[:n], other.coeffs[:n]

    def __add__(self, other):
        a, b = self._pair(other)
        return Jet([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([x * other for x in self.coeffs])
        a, b = self._pair(other)
        return Jet([sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(len(a))])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([x / other for x in self.coeffs])
        a, b = self._pair(other)
        if b[0] == 0:
            raise DomainError("division by a jet with zero constant term")
        q: list[complex] = []
        for k in range(len(a)):
            q.append((a[k] - sum(q[i] * b[k - i] for i in range(k))) / b[0])
        return Jet(q)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(1, self.order)
            for _ in range(p):
                out = out * self
            return out
        return jet_pow(self, p)

    def derivative(self) -> "Jet":
        """Jet of f' (one order lower)."""
        if self.order == 0:
            raise DomainError("cannot differentiate an order-0 jet")
        return Jet([k * c for k, c in enumerate(self.coeffs) if k])


def jet_exp(f: Jet) -> Jet:
    # e' = f' e  =>  k e_k = sum_{j=1..k} j f_j e_{k-j}
    a = f.coeffs
    e = [cmath.exp(a[0])]
    for k in range(1, len(a)):
        e.append(sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k)
    return Jet(e)


def jet_log(f: Jet) -> Jet:
    """Principal-branch logarithm."""
    a = f.coeffs
    if a[0] == 0:
        raise DomainError("log of a jet with zero constant term")
    # l' = f'/f  =>  k l_k a_0 = k a_k - sum_{j=1..k-1} j l_j a_{k-j}
    l = [cmath.log(a[0])]
    for k in range(1, len(a)):
        s = k * a[k] - sum(j * l[j] * a[k - j] for j in range(1, k))
        l.append(s / (k * a[0]))
    return Jet(l)


def jet_pow(f: Jet, p: Number) -> Jet:
    """f^p on the principal branch, f(x0)^p = exp(p log f(x0))."""
    a = f.coeffs
    if a[0] == 0:
        raise DomainError("branch point: power of a jet with zero constant term")
    g = [cmath.exp(p * cmath.log(a[0]))]
    # f g' = p f' g  =>  k a_0 g_k = sum_{j=1..k} (p j - (k - j)) a_j g_{k-j}
    for k in range(1, len(a)):
        s = sum((p * j - (k - j)) * a[j] * g[k - j] for j in range(1, k + 1))
        g.append(s / (k * a[0]))
    return Jet(g)


def jet_sqrt(f: Jet) -> Jet:
    return jet_pow(f, 0.5)


def jet_tanh(f: Jet) -> Jet:
    # T' = (1 - T^2) f'  =>  k T_k = sum_{j=1..k} j f_j (delta_{k-j} - (T^2)_{k-j})
    a = f.coeffs
    T = [cmath.tanh(a[0])]
    sq = [T[0] * T[0]]
    for k in range(1, len(a)):
        s = 0j
        for j in range(1, k + 1):
            one = 1 if k - j == 0 else 0
            s += j * a[j] * (one - sq[k - j])
        T.append(s / k)
        sq.append(sum(T[i] * T[k - i] for i in range(k + 1)))
    return Jet(T)
