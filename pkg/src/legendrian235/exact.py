"""Exact rational numbers, multivariate polynomials and rational functions.

Everything symbolic in the package lives in the field Q(t, params).  A
``RatFunc`` is a reduced fraction num/den of polynomials over Q whose
denominator has leading coefficient 1 in graded-lex order (variable order:
``t`` first, then alphabetical).  With that normalization equality is a
structural comparison.

Polynomial arithmetic and gcds are delegated to sympy's sparse polynomial
rings; the canonical form, variable bookkeeping, substitution, parsing and
serialization are handled here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .errors import ExactDivisionError, ParseError, UnknownVariableError

Scalar = Union[int, Fraction]

_DECLARED: set[str] = {"t", "s"}


def declare(*names: str) -> None:
    """Register variable names so that ``derivative`` accepts them."""
    for n in names:
        if not isinstance(n, str) or not n:
            raise UnknownVariableError(f"invalid variable name {n!r}")
        _DECLARED.add(n)


def _var_key(name: str):
    return (name != "t", name)


@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]) -> PolyRing:
    return PolyRing(names, QQ, grlex)


def _mpq(x) -> object:
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, int):
        return QQ(x)
    return QQ.convert(x)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def parse_rat(s: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction."""
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {s!r}") from exc


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _convert(p, src: tuple[str, ...], dst: tuple[str, ...]):
    """Move polynomial ``p`` from the ring on ``src`` to the ring on ``dst``.

    Variables of ``src`` missing from ``dst`` must not occur in ``p``.
    """
    if src == dst:
        return p
    R = _ring(dst)
    pos = {n: i for i, n in enumerate(dst)}
    idx = [pos.get(n) for n in src]
    n = len(dst)
    out = {}
    for mon, c in p.items():
        e = [0] * n
        for i, k in zip(idx, mon):
            if k:
                e[i] = k
        out[tuple(e)] = c
    return R.from_dict(out)


def _used(p, nvars: int) -> set[int]:
    used: set[int] = set()
    for mon in p.keys():
        for i in range(nvars):
            if mon[i]:
                used.add(i)
    return used


class MPoly:
    """Polynomial over Q in named variables: exponent vector -> coefficient."""

    __slots__ = ("vars", "_p")

    def __init__(self, vars: tuple[str, ...], p):
        self.vars = vars
        self._p = p

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {m: to_fraction(c) for m, c in self._p.items()}

    def is_zero(self) -> bool:
        return not self._p

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self._p else -1
        return self._p.degree(self.vars.index(var))

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self._p == other._p

    def __hash__(self):
        return hash((self.vars, self._p))

    def __str__(self):
        return _format_poly(self._p, self.vars)

    def to_json(self) -> list[dict]:
        return [
            {"exps": list(m), "coef": format_rat(to_fraction(c))}
            for m, c in self._p.terms()
        ]


def _format_monomial(mon, names) -> str:
    parts = []
    for n, e in zip(names, mon):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def _format_poly(p, names) -> str:
    if not p:
        return "0"
    out = []
    for mon, c in p.terms():
        c = to_fraction(c)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        m = _format_monomial(mon, names)
        if not m:
            body = str(c)
        elif c == 1:
            body = m
        elif c.denominator == 1:
            body = f"{c}{m}"
        else:
            body = f"{c}*{m}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += sign + body
    return s


class RatFunc:
    """Element of Q(t, params) in canonical reduced form.  Immutable."""

    __slots__ = ("_vars", "_num", "_den", "_hash")

    def __init__(self, value: Union[int, Fraction, str, "RatFunc"] = 0):
        if isinstance(value, RatFunc):
            self._vars, self._num, self._den = value._vars, value._num, value._den
        elif isinstance(value, str):
            x = parse(value)
            self._vars, self._num, self._den = x._vars, x._num, x._den
        elif isinstance(value, (int, Fraction)):
            R = _ring(())
            self._vars, self._num, self._den = (), R(_mpq(value)), R.one
        else:
            raise TypeError(f"cannot build RatFunc from {type(value).__name__}")
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def _raw(cls, vars, num, den) -> "RatFunc":
        obj = object.__new__(cls)
        obj._vars, obj._num, obj._den, obj._hash = vars, num, den, None
        return obj

    @classmethod
    def _make(cls, vars, num, den, reduce: bool = True) -> "RatFunc":
        if not den:
            raise ExactDivisionError("division by zero")
        R = _ring(vars)
        if not num:
            return cls._raw((), _ring(()).zero, _ring(()).one)
        if reduce and den != R.one:
            _, num, den = num.cofactors(den)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        n = len(vars)
        if n:
            used = _used(num, n) | _used(den, n)
            if len(used) < n:
                small = tuple(v for i, v in enumerate(vars) if i in used)
                num = _convert(num, vars, small)
                den = _convert(den, vars, small)
                vars = small
        return cls._raw(vars, num, den)

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        declare(name)
        R = _ring((name,))
        return cls._raw((name,), R.gens[0], R.one)

    @classmethod
    def from_poly_dict(cls, vars: Sequence[str], terms: Mapping[tuple, Scalar],
                       den_terms: Mapping[tuple, Scalar] | None = None) -> "RatFunc":
        vs = tuple(vars)
        order = tuple(sorted(vs, key=_var_key))
        if len(set(order)) != len(order):
            raise ParseError("duplicate variable names")
        perm = [vs.index(n) for n in order]
        R = _ring(order)

        def build(d):
            return R.from_dict({tuple(m[i] for i in perm): _mpq(Fraction(c))
                                for m, c in d.items() if Fraction(c) != 0})

        num = build(terms)
        den = build(den_terms) if den_terms is not None else R.one
        declare(*order)
        return cls._make(order, num, den)

    # -- coercion helpers ---------------------------------------------
    @staticmethod
    def coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction, str)):
            return RatFunc(x)
        if hasattr(x, "numerator") and hasattr(x, "denominator"):
            return RatFunc(Fraction(int(x.numerator), int(x.denominator)))
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    def _unify(self, other: "RatFunc"):
        if self._vars == other._vars:
            return self._vars, self._num, self._den, other._num, other._den
        vars = tuple(sorted(set(self._vars) | set(other._vars), key=_var_key))
        return (vars,
                _convert(self._num, self._vars, vars), _convert(self._den, self._vars, vars),
                _convert(other._num, other._vars, vars), _convert(other._den, other._vars, vars))

    # -- field operations ----------------------------------------------
    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._num:
            return self
        if not self._num:
            return other
        vars, a, b, c, d = self._unify(other)
        if b == d:
            return RatFunc._make(vars, a + c, b)
        return RatFunc._make(vars, a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(self._vars, -self._num, self._den)

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not self._num or not other._num:
            return RatFunc(0)
        vars, a, b, c, d = self._unify(other)
        R = _ring(vars)
        if b == R.one and d == R.one:
            return RatFunc._make(vars, a * c, R.one, reduce=False)
        # cross-cancel before multiplying to keep gcds small
        _, a1, d1 = a.cofactors(d)
        _, c1, b1 = c.cofactors(b)
        return RatFunc._make(vars, a1 * c1, b1 * d1, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self._num:
            raise ExactDivisionError("division by zero")
        return RatFunc._make(self._vars, self._den, self._num, reduce=False)

    def __truediv__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._make(self._vars, self._num ** k, self._den ** k, reduce=False)

    # -- comparison / hashing ----------------------------------------
    def __eq__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return (self._vars == other._vars and self._num == other._num
                and self._den == other._den)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            if not self._vars:
                # agree with hash(Fraction) / hash(int) for constants
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self._vars, self._num, self._den))
        return self._hash

    def __bool__(self):
        return bool(self._num)

    # -- inspection ----------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def numerator(self) -> MPoly:
        return MPoly(self._vars, self._num)

    @property
    def denominator(self) -> MPoly:
        return MPoly(self._vars, self._den)

    def numerator_ratfunc(self) -> "RatFunc":
        return RatFunc._make(self._vars, self._num, _ring(self._vars).one, reduce=False)

    def denominator_ratfunc(self) -> "RatFunc":
        return RatFunc._make(self._vars, self._den, _ring(self._vars).one, reduce=False)

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return not self._vars

    def constant_value(self) -> Fraction:
        if self._vars:
            raise ValueError(f"{self} is not a constant")
        c = self._num.LC if self._num else 0
        return to_fraction(QQ.convert(c)) if self._num else Fraction(0)

    def depends_on(self, var: str) -> bool:
        return var in self._vars

    def is_polynomial(self) -> bool:
        return self._den == _ring(self._vars).one

    def degree(self, var: str) -> int:
        """Degree in ``var`` of the numerator (polynomial case)."""
        if var not in self._vars:
            return 0 if self._num else -1
        return self._num.degree(self._vars.index(var))

    # -- calculus / substitution --------------------------------------
    def derivative(self, var: str = "t") -> "RatFunc":
        if var not in _DECLARED:
            raise UnknownVariableError(f"unknown variable {var!r}")
        if var not in self._vars:
            return RatFunc(0)
        i = self._vars.index(var)
        x = self._vars
        R = _ring(x)
        g = R.gens[i]
        dn = self._num.diff(g)
        if self._den == R.one:
            return RatFunc._make(x, dn, R.one, reduce=False)
        dd = self._den.diff(g)
        return RatFunc._make(x, dn * self._den - self._num * dd, self._den ** 2)

    def collect(self, names: Sequence[str]) -> dict[tuple[int, ...], "RatFunc"]:
        """Group by monomials in ``names``: self = sum_m coeff[m] * prod names^m.

        The denominator must not involve any of ``names``.
        """
        names = tuple(names)
        idx = [self._vars.index(n) if n in self._vars else None for n in names]
        for i in idx:
            if i is not None and self._den.degree(i) > 0:
                raise ValueError(f"denominator of {self} depends on {names[idx.index(i)]}")
        rest = tuple(v for v in self._vars if v not in names)
        keep = [self._vars.index(v) for v in rest]
        Rr = _ring(rest)
        groups: dict[tuple[int, ...], dict] = {}
        for mon, c in self._num.items():
            key = tuple(mon[i] if i is not None else 0 for i in idx)
            sub = tuple(mon[i] for i in keep)
            groups.setdefault(key, {})[sub] = c
        den = _convert(self._den, self._vars, rest)
        return {k: RatFunc._make(rest, Rr.from_dict(d), den) for k, d in groups.items()}

    def coeffs_in(self, var: str) -> dict[int, "RatFunc"]:
        """Coefficients of a polynomial in ``var`` (other variables allowed)."""
        return {k[0]: v for k, v in self.collect((var,)).items()}

    def substitute(self, var: str, val) -> "RatFunc":
        """Exact composition x(var -> val)."""
        val = RatFunc.coerce(val)
        if var not in self._vars:
            return self
        allv = tuple(sorted(set(self._vars) | set(val._vars), key=_var_key))
        R = _ring(allv)
        i = allv.index(var)
        P = _convert(val._num, val._vars, allv)
        Q = _convert(val._den, val._vars, allv)

        def by_degree(p):
            coeffs: dict[int, dict] = {}
            for mon, c in _convert(p, self._vars, allv).items():
                m = list(mon)
                k, m[i] = m[i], 0
                coeffs.setdefault(k, {})[tuple(m)] = c
            return {k: R.from_dict(d) for k, d in coeffs.items()}

        cn, cd = by_degree(self._num), by_degree(self._den)
        n = max(max(cn), max(cd))
        ppow, qpow = [R.one], [R.one]
        for _ in range(n):
            ppow.append(ppow[-1] * P)
            qpow.append(qpow[-1] * Q)

        # both numerator and denominator homogenized by Q^n, which cancels
        def homog(c):
            acc = R.zero
            for k, ck in c.items():
                acc += ck * ppow[k] * qpow[n - k]
            return acc

        nn, dd = homog(cn), homog(cd)
        if not dd:
            raise ExactDivisionError(f"substituting {var} = {val} makes the denominator vanish")
        return RatFunc._make(allv, nn, dd)

    def subs(self, mapping: Mapping[str, object]) -> "RatFunc":
        """Simultaneous substitution of several variables."""
        mapping = {k: RatFunc.coerce(v) for k, v in mapping.items() if k in self._vars}
        if not mapping:
            return self
        if len(mapping) == 1:
            (k, v), = mapping.items()
            return self.substitute(k, v)
        vals = [mapping.get(n) for n in self._vars]
        gens = [RatFunc.var(n) if v is None else v for n, v in zip(self._vars, vals)]

        def ev(p):
            acc = RatFunc(0)
            cache: dict[tuple[int, int], RatFunc] = {}
            for mon, c in p.items():
                term = RatFunc(to_fraction(c))
                for i, e in enumerate(mon):
                    if e:
                        key = (i, e)
                        if key not in cache:
                            cache[key] = gens[i] ** e
                        term = term * cache[key]
                acc = acc + term
            return acc

        return ev(self._num) / ev(self._den)

    # -- output ------------------------------------------------------------
    def __str__(self):
        # print with integer coefficients: clear denominators, drop the
        # common content, keep the denominator's leading coefficient positive
        R = _ring(self._vars)
        coefs = [to_fraction(c) for c in self._num.values()] + \
                [to_fraction(c) for c in self._den.values()]
        L = lcm(*(c.denominator for c in coefs))
        g = gcd(*(c.numerator * (L // c.denominator) for c in coefs))
        k = QQ(L, g)
        num, den = self._num.mul_ground(k), self._den.mul_ground(k)
        num_s = _format_poly(num, self._vars)
        if den == R.one:
            return num_s
        den_s = _format_poly(den, self._vars)
        if len(num) > 1:
            num_s = f"({num_s})"
        if not re.fullmatch(r"\d+|[A-Za-z_]\w*(\^\d+)?", den_s):
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def to_json(self) -> dict:
        return {"vars": list(self._vars), "num": self.numerator.to_json(),
                "den": self.denominator.to_json()}

    @classmethod
    def from_json(cls, obj) -> "RatFunc":
        if isinstance(obj, (str, int)):
            return RatFunc(obj)
        vars = obj["vars"]

        def terms(lst):
            return {tuple(d["exps"]): parse_rat(d["coef"]) for d in lst}

        return cls.from_poly_dict(vars, terms(obj["num"]), terms(obj["den"]))


def var(name: str) -> RatFunc:
    return RatFunc.var(name)


def vars_(*names: str) -> tuple[RatFunc, ...]:
    return tuple(RatFunc.var(n) for n in names)


def canonicalize(x) -> RatFunc:
    """Return the canonical form (idempotent)."""
    x = RatFunc.coerce(x)
    return RatFunc._make(x._vars, x._num, x._den)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(s: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos} in {s!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> RatFunc:
        if not self.toks:
            raise ParseError("empty expression")
        x = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return x

    def expr(self):
        x = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self):
        x = self.unary()
        while True:
            kind, val = self.peek()
            if val in ("*", "/"):
                self.take()
                y = self.unary()
                x = x * y if val == "*" else x / y
            elif kind == "name" or val == "(":
                x = x * self.power()
            else:
                return x

    def unary(self):
        kind, val = self.peek()
        if val == "-":
            self.take()
            return -self.unary()
        if val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        x = self.atom()
        if self.peek()[1] == "^":
            self.take()
            e = self.unary()
            if not e.is_constant() or e.constant_value().denominator != 1:
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            x = x ** int(e.constant_value())
        return x

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return RatFunc(int(val))
        if kind == "name":
            return RatFunc.var(val)
        if val == "(":
            x = self.expr()
            self.expect(")")
            return x
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


GRAMMAR = """\
Rational functions are written with integers, variable names
(letters/digits/underscore, starting with a letter), t, and the operators
+ - * / ^ (or **) with parentheses.  A number directly followed by a name
or parenthesis multiplies it: 3c^2 = 3*c^2.  Exponents are integers.
Examples: "280000/(t^2-200)^4", "-1/6*c^2", "(a*t+b)/(c*t+d)"."""


def parse(text: str) -> RatFunc:
    """Parse a rational function; see ``GRAMMAR``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text).parse()


def as_ratfuncs(values: Iterable) -> list[RatFunc]:
    return [RatFunc.coerce(v) for v in values]
