"""Dense matrices over Q(t, params): rank, nullspace, solve, char/min polys.

Elimination is plain Gauss-Jordan with the first nonzero pivot in each
column, which is exact over any field.  When every entry is a rational
constant the work is done on ``Fraction`` values, which is much faster
than going through the rational-function machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError
from .exact import RatFunc

Entry = Union[int, Fraction, str, RatFunc]


# ---------------------------------------------------------------------------
# generic elimination (works on Fraction or RatFunc rows)
# ---------------------------------------------------------------------------

def _rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        inv = 1 / piv
        pr = [x * inv if x else x for x in rows[r]]
        rows[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in nz:
                        ri[j] = ri[j] - f * pr[j]
        pivots.append(c)
        r += 1
    return rows, pivots


def _all_const(rows) -> bool:
    for row in rows:
        for x in row:
            if isinstance(x, RatFunc) and not x.is_constant():
                return False
    return True


def _to_frac(x) -> Fraction:
    if isinstance(x, RatFunc):
        return x.constant_value()
    return Fraction(x)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """RREF over the field; entries come back as RatFunc."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if _all_const(rows):
        red, piv = _rref([[_to_frac(x) for x in r] for r in rows], ncols)
    else:
        red, piv = _rref([[RatFunc.coerce(x) for x in r] for r in rows], ncols)
    return [[RatFunc.coerce(x) for x in r] for r in red], piv


def _nullspace_from_rref(red, piv, ncols):
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [RatFunc(0)] * ncols
        v[f] = RatFunc(1)
        for i, pc in enumerate(piv):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatF:
    """Row-major matrix with RatFunc entries."""

    rows: int
    cols: int
    entries: tuple[RatFunc, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DomainError("entry count does not match shape")

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Entry]]) -> "MatF":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise DomainError("ragged rows")
        return cls(n, m, tuple(RatFunc.coerce(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "MatF":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "MatF":
        m = n if m is None else m
        return cls(n, m, tuple(RatFunc(0) for _ in range(n * m)))

    @classmethod
    def diag(cls, values: Sequence[Entry]) -> "MatF":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Entry]]) -> "MatF":
        return cls.from_rows(cols).T

    # -- access --------------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> RatFunc:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[RatFunc]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list[RatFunc]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list[RatFunc]]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def is_constant(self) -> bool:
        return all(x.is_constant() for x in self.entries)

    # -- arithmetic --------------------------------------------------------
    def _check_same(self, other: "MatF"):
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "MatF") -> "MatF":
        self._check_same(other)
        return MatF(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatF") -> "MatF":
        self._check_same(other)
        return MatF(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "MatF":
        return MatF(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: Entry) -> "MatF":
        c = RatFunc.coerce(c)
        return MatF(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __mul__(self, c):
        if isinstance(c, MatF):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "MatF") -> "MatF":
        if self.cols != other.rows:
            raise DomainError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.tolist(), other.tolist()
        out = []
        for i in range(self.rows):
            ai = a[i]
            for j in range(other.cols):
                acc = RatFunc(0)
                for k in range(self.cols):
                    if ai[k] and b[k][j]:
                        acc = acc + ai[k] * b[k][j]
                out.append(acc)
        return MatF(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[Entry]) -> list[RatFunc]:
        if len(v) != self.cols:
            raise DomainError("vector length does not match")
        v = [RatFunc.coerce(x) for x in v]
        return [sum((self[i, k] * v[k] for k in range(self.cols) if v[k]), RatFunc(0))
                for i in range(self.rows)]

    def __pow__(self, k: int) -> "MatF":
        if not self.is_square():
            raise DomainError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out, base = MatF.identity(self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "MatF":
        return MatF.from_rows([self.col(j) for j in range(self.cols)])

    def trace(self) -> RatFunc:
        if not self.is_square():
            raise DomainError("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), RatFunc(0))

    def map(self, f) -> "MatF":
        return MatF(self.rows, self.cols, tuple(f(x) for x in self.entries))

    def derivative(self, var: str = "t") -> "MatF":
        return self.map(lambda x: x.derivative(var))

    def subs(self, mapping) -> "MatF":
        return self.map(lambda x: x.subs(mapping))

    def hstack(self, other: "MatF") -> "MatF":
        if self.rows != other.rows:
            raise DomainError("row count mismatch")
        return MatF.from_rows([self.row(i) + other.row(i) for i in range(self.rows)])

    def vstack(self, other: "MatF") -> "MatF":
        if self.cols != other.cols:
            raise DomainError("column count mismatch")
        return MatF.from_rows(self.tolist() + other.tolist())

    # -- linear algebra ----------------------------------------------------
    def rref(self):
        return rref(self.tolist(), self.cols)

    def rank(self) -> int:
        return rank_nullspace(self)[0]

    def nullspace(self) -> list[list[RatFunc]]:
        return rank_nullspace(self)[1]

    def det(self) -> RatFunc:
        if not self.is_square():
            raise DomainError("determinant of a non-square matrix")
        n = self.rows
        if _all_const(self.tolist()):
            a = [[_to_frac(x) for x in r] for r in self.tolist()]
            det = Fraction(1)
        else:
            a = self.tolist()
            det = RatFunc(1)
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c]), None)
            if p is None:
                return RatFunc(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            piv = a[c][c]
            det = det * piv
            for i in range(c + 1, n):
                f = a[i][c]
                if f:
                    f = f / piv
                    a[i] = [x - f * y if y else x for x, y in zip(a[i], a[c])]
        return RatFunc.coerce(det)

    def inverse(self) -> "MatF":
        if not self.is_square():
            raise DomainError("inverse of a non-square matrix")
        n = self.rows
        aug = [self.row(i) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise DomainError("matrix is singular")
        return MatF.from_rows([r[n:] for r in red])

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in self.row(i)) + "]"
                               for i in range(self.rows)) + "]"

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in self.row(i)] for i in range(self.rows)]


def rank_nullspace(M: MatF | Sequence[Sequence[Entry]]) -> tuple[int, list[list[RatFunc]]]:
    """Rank and a nullspace basis (each basis vector v has M v = 0 exactly)."""
    if not isinstance(M, MatF):
        M = MatF.from_rows(M)
    if M.rows == 0:
        return 0, [[RatFunc(int(i == j)) for j in range(M.cols)] for i in range(M.cols)]
    red, piv = M.rref()
    return len(piv), _nullspace_from_rref(red, piv, M.cols)


@dataclass
class LinearSolution:
    """Solution set of M x = b: ``kind`` is "none", "unique" or "family"."""

    kind: str
    particular: list[RatFunc] | None = None
    basis: list[list[RatFunc]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return -1 if self.kind == "none" else len(self.basis)


def solve_linear(M: MatF | Sequence[Sequence[Entry]], b: Sequence[Entry]) -> LinearSolution:
    if not isinstance(M, MatF):
        M = MatF.from_rows(M) if len(M) else MatF(0, 0, ())
    if len(b) != M.rows:
        raise DomainError("right-hand side length does not match")
    n = M.cols
    aug = [M.row(i) + [b[i]] for i in range(M.rows)]
    if not aug:
        basis = [[RatFunc(int(i == j)) for j in range(n)] for i in range(n)]
        return LinearSolution("family" if n else "unique", [RatFunc(0)] * n, basis)
    red, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return LinearSolution("none")
    x = [RatFunc(0)] * n
    for i, pc in enumerate(piv):
        x[pc] = red[i][n]
    basis = _nullspace_from_rref([r[:n] for r in red], piv, n)
    return LinearSolution("unique" if not basis else "family", x, basis)


# ---------------------------------------------------------------------------
# polynomials in s
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyInS:
    """Univariate polynomial in the formal symbol s; coefficients low to high."""

    coeffs: tuple[RatFunc, ...]

    def __post_init__(self):
        cs = [RatFunc.coerce(c) for c in self.coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise DomainError("the zero polynomial is not a PolyInS")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Entry]) -> "PolyInS":
        return cls(tuple(RatFunc.coerce(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> RatFunc:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RatFunc(0)

    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def as_ratfunc(self) -> RatFunc:
        s = RatFunc.var("s")
        return sum((c * s ** k for k, c in enumerate(self.coeffs)), RatFunc(0))

    def __call__(self, x):
        acc = RatFunc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def at_matrix(self, A: MatF) -> MatF:
        n = A.rows
        acc = MatF.zeros(n)
        eye = MatF.identity(n)
        for c in reversed(self.coeffs):
            acc = acc @ A + eye.scale(c)
        return acc

    def divmod(self, other: "PolyInS") -> tuple[list[RatFunc], list[RatFunc]]:
        r = list(self.coeffs)
        d = other.coeffs
        q = [RatFunc(0)] * max(len(r) - len(d) + 1, 1)
        while len(r) >= len(d) and any(not x.is_zero() for x in r):
            k = len(r) - len(d)
            f = r[-1] / d[-1]
            q[k] = f
            for i, c in enumerate(d):
                r[i + k] = r[i + k] - f * c
            r.pop()
            while r and r[-1].is_zero():
                r.pop()
        return q, r

    def divides(self, other: "PolyInS") -> bool:
        _, r = other.divmod(self)
        return not r

    def __eq__(self, other):
        if not isinstance(other, PolyInS):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        """Descending powers of s, e.g. ``s^4+(-r^2-1)*s^2+r^2``."""
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            cs = str(c)
            if k == 0:
                parts.append(cs)
                continue
            sp = "s" if k == 1 else f"s^{k}"
            if cs in ("1", "-1"):
                parts.append(cs[:-1] + sp)
            elif c.is_constant() and c.constant_value().denominator == 1:
                parts.append(cs + sp)
            elif "+" in cs[1:] or "-" in cs[1:]:
                parts.append(f"({cs})*{sp}")
            else:
                parts.append(f"{cs}*{sp}")
        return parts[0] + "".join(p if p.startswith("-") else "+" + p for p in parts[1:])

    def __repr__(self):
        return f"PolyInS({str(self)!r})"

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "text": str(self)}


def charpoly(A: MatF) -> PolyInS:
    """Monic characteristic polynomial det(sI - A) by Faddeev-LeVerrier."""
    if not A.is_square():
        raise DomainError("characteristic polynomial of a non-square matrix")
    n = A.rows
    coeffs = [RatFunc(0)] * (n + 1)
    coeffs[n] = RatFunc(1)
    M = MatF.zeros(n)
    eye = MatF.identity(n)
    c_prev = RatFunc(1)
    for k in range(1, n + 1):
        M = A @ M + eye.scale(c_prev) if k > 1 else eye
        AM = A @ M
        c = -AM.trace() / k
        coeffs[n - k] = c
        c_prev = c
    return PolyInS(tuple(coeffs))


def minpoly(A: MatF) -> PolyInS:
    """Monic minimal polynomial: first power of A dependent on lower ones."""
    if not A.is_square():
        raise DomainError("minimal polynomial of a non-square matrix")
    n = A.rows
    powers = [MatF.identity(n)]
    for k in range(1, n + 1):
        powers.append(powers[-1] @ A)
        # columns: flattened I, A, ..., A^{k-1}; rhs: A^k
        cols = [list(P.entries) for P in powers[:-1]]
        M = MatF.from_rows([[c[i] for c in cols] for i in range(n * n)])
        sol = solve_linear(M, list(powers[-1].entries))
        if sol.kind != "none":
            return PolyInS(tuple([-x for x in sol.particular] + [RatFunc(1)]))
    raise AssertionError("unreachable: Cayley-Hamilton bounds the degree")


def charpoly_minpoly(A: MatF) -> tuple[PolyInS, PolyInS]:
    return charpoly(A), minpoly(A)


def mat(rows: Sequence[Sequence[Entry]]) -> MatF:
    """Shorthand constructor; entries may be ints, Fractions or strings."""
    return MatF.from_rows(rows)
