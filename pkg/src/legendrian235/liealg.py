"""Lie algebras given by structure constants over Q(params).

Also: the Heisenberg algebra of a symplectic form and its group model,
graded derivations, Tanaka prolongation of depth-2 symbols, the contact
prolongation map delta, and the Sym^3 representation of gl(2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import DomainError
from .exact import RatFunc, parse
from .exppoly import ExpPoly, ep_linear_system
from .linalg import MatF, rank_nullspace

Vec = list  # list of RatFunc coordinates


def _zero(n: int) -> Vec:
    return [RatFunc(0)] * n


@dataclass(frozen=True)
class JacobiResult:
    ok: bool
    witness: tuple[int, int, int] | None = None
    defect: tuple[RatFunc, ...] | None = None

    def __bool__(self):
        return self.ok


@dataclass
class FiltLieAlg:
    """Basis names, a degree (or filtration index) per basis element, and
    structure constants ``brackets[(i, j)] = {k: c}`` for i < j."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    brackets: dict[tuple[int, int], dict[int, RatFunc]] = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        self.degrees = tuple(int(d) for d in self.degrees)
        if len(self.names) != len(self.degrees):
            raise DomainError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise DomainError("duplicate basis names")
        clean: dict[tuple[int, int], dict[int, RatFunc]] = {}
        for (i, j), coeffs in self.brackets.items():
            coeffs = {int(k): RatFunc.coerce(c) for k, c in coeffs.items()}
            coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}
            if i == j:
                if coeffs:
                    raise DomainError(f"[{self.names[i]},{self.names[i]}] must vanish")
                continue
            if i > j:
                i, j = j, i
                coeffs = {k: -c for k, c in coeffs.items()}
            if (i, j) in clean:
                raise DomainError(f"bracket ({self.names[i]},{self.names[j]}) given twice")
            if coeffs:
                clean[(i, j)] = coeffs
        self.brackets = clean

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"unknown basis element {name!r}") from None

    def basis_vector(self, i: int | str) -> Vec:
        if isinstance(i, str):
            i = self.index(i)
        v = _zero(self.dim)
        v[i] = RatFunc(1)
        return v

    def bracket_basis(self, i: int, j: int) -> Vec:
        out = _zero(self.dim)
        if i == j:
            return out
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self.brackets.get((i, j), {}).items():
            out[k] = c if sign == 1 else -c
        return out

    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        x = [RatFunc.coerce(a) for a in x]
        y = [RatFunc.coerce(b) for b in y]
        out = _zero(self.dim)
        for (i, j), coeffs in self.brackets.items():
            f = x[i] * y[j] - x[j] * y[i]
            if f:
                for k, c in coeffs.items():
                    out[k] = out[k] + f * c
        return out

    def ad(self, x: Sequence) -> MatF:
        """Matrix of ad(x); column j is [x, e_j]."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return MatF.from_columns(cols)

    def element(self, text: str) -> Vec:
        """Parse a linear combination such as ``"X1+X2"`` or ``"-3c*N-2X3"``."""
        return linear_combination(text, self.names)

    def format(self, v: Sequence) -> str:
        return format_combination(v, self.names)

    def subs(self, mapping: Mapping[str, object]) -> "FiltLieAlg":
        return FiltLieAlg(self.names, self.degrees,
                          {ij: {k: c.subs(mapping) for k, c in cs.items()}
                           for ij, cs in self.brackets.items()})

    # -- checks ----------------------------------------------------------
    def jacobi_check(self) -> JacobiResult:
        n = self.dim
        for i, j, k in itertools.combinations(range(n), 3):
            ei, ej, ek = (self.basis_vector(a) for a in (i, j, k))
            total = _zero(n)
            for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                inner = self.bracket(a, b)
                total = [s + u for s, u in zip(total, self.bracket(inner, c))]
            if any(not x.is_zero() for x in total):
                return JacobiResult(False, (i, j, k), tuple(total))
        return JacobiResult(True)

    def filtration_compatible(self, clamp: tuple[int, int] | None = None) -> bool:
        """[f^i, f^j] in f^{i+j}, where f^i is spanned by elements of index >= i.

        ``clamp`` = (lo, hi) treats indices below lo as lo and above hi as hi.
        """
        def cl(d):
            if clamp is None:
                return d
            return max(clamp[0], min(clamp[1], d))
        for (i, j), coeffs in self.brackets.items():
            target = cl(self.degrees[i] + self.degrees[j])
            if any(self.degrees[k] < target for k in coeffs):
                return False
        return True

    def graded_compatible(self) -> bool:
        for (i, j), coeffs in self.brackets.items():
            if any(self.degrees[k] != self.degrees[i] + self.degrees[j] for k in coeffs):
                return False
        return True

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "names": list(self.names),
            "degrees": list(self.degrees),
            "brackets": [{"i": i, "j": j, "coeffs": {str(k): str(c) for k, c in sorted(cs.items())}}
                         for (i, j), cs in sorted(self.brackets.items())],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "FiltLieAlg":
        try:
            names = obj["names"]
            degrees = obj.get("degrees", [0] * len(names))
            if "dim" in obj and obj["dim"] != len(names):
                raise DomainError("dim does not match the number of names")
            br = {}
            for entry in obj.get("brackets", []):
                i, j = int(entry["i"]), int(entry["j"])
                br[(i, j)] = {int(k): RatFunc.coerce(v) for k, v in entry["coeffs"].items()}
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed algebra JSON: {exc}") from exc
        return cls(tuple(names), tuple(degrees), br)


def linear_combination(text: str, names: Sequence[str]) -> Vec:
    """Coordinates of a linear combination of basis names (coefficients may
    involve parameters)."""
    expr = parse(text)
    names = tuple(names)
    out = _zero(len(names))
    for mon, c in expr.collect(names).items():
        deg = sum(mon)
        if deg == 0:
            if not c.is_zero():
                raise DomainError(f"{text!r} has a term without a basis element")
            continue
        if deg != 1:
            raise DomainError(f"{text!r} is not linear in the basis")
        out[mon.index(1)] = c
    return out


def format_combination(v: Sequence, names: Sequence[str]) -> str:
    parts = []
    for c, n in zip(v, names):
        c = RatFunc.coerce(c)
        if c.is_zero():
            continue
        s = str(c)
        if s == "1":
            term = n
        elif s == "-1":
            term = "-" + n
        elif c.is_constant() and c.constant_value().denominator == 1:
            term = f"{s}{n}"
        else:
            term = f"({s})*{n}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def algebra_from_table(names: Sequence[str], degrees: Sequence[int],
                       table: Mapping[str, str]) -> FiltLieAlg:
    """Build from entries like ``{"X1,X2": "-3c*N-2X3"}``."""
    names = tuple(names)
    br: dict[tuple[int, int], dict[int, RatFunc]] = {}
    for key, val in table.items():
        a, b = (s.strip() for s in key.split(","))
        if a not in names or b not in names:
            raise DomainError(f"unknown basis element in bracket {key!r}")
        i, j = names.index(a), names.index(b)
        coords = linear_combination(val, names)
        br[(i, j)] = {k: c for k, c in enumerate(coords) if not c.is_zero()}
    return FiltLieAlg(names, tuple(degrees), br)


def abelian(n: int, degree: int = -1) -> FiltLieAlg:
    return FiltLieAlg(tuple(f"e{i + 1}" for i in range(n)), (degree,) * n, {})


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

def span_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return rank_nullspace(MatF.from_rows(vectors))[0]


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    return span_rank(list(vectors) + [list(v)]) == span_rank(vectors)


# ---------------------------------------------------------------------------
# Heisenberg algebra and group
# ---------------------------------------------------------------------------

def heis_build(sigma: MatF) -> FiltLieAlg:
    """V + C Z0 with [v, w] = sigma(v, w) Z0; V in degree -1, Z0 in degree -2."""
    n = sigma.rows
    if not sigma.is_square() or not (sigma + sigma.T).is_zero():
        raise DomainError("sigma must be a skew-symmetric square matrix")
    if sigma.det().is_zero():
        raise DomainError("sigma is degenerate")
    names = tuple(f"e{i + 1}" for i in range(n)) + ("Z0",)
    br = {(i, j): {n: sigma[i, j]} for i in range(n) for j in range(i + 1, n)}
    return FiltLieAlg(names, (-1,) * n + (-2,), br)


def heis3() -> FiltLieAlg:
    return heis_build(MatF.from_rows([[0, 1], [-1, 0]]))


def _pt(p) -> list[RatFunc]:
    p = [RatFunc.coerce(x) for x in p]
    if len(p) != 5:
        raise DomainError("Heisenberg points have 5 coordinates")
    return p


def heis_group(p: Sequence, q: Sequence) -> list[RatFunc]:
    """Product in coordinates where the center is x5."""
    x, y = _pt(p), _pt(q)
    corr = (x[0] * y[2] - x[2] * y[0] + x[1] * y[3] - x[3] * y[1]) / 2
    return [x[i] + y[i] for i in range(4)] + [x[4] + y[4] + corr]


def heis_inverse(p: Sequence) -> list[RatFunc]:
    return [-x for x in _pt(p)]


def contact_form_at(p: Sequence) -> list[RatFunc]:
    """Coefficients of x1 dx3 - x3 dx1 + x2 dx4 - x4 dx2 - 2 dx5 on dx1..dx5."""
    x = _pt(p)
    return [-x[2], -x[3], x[0], x[1], RatFunc(-2)]


def left_translation_jacobian(p: Sequence) -> MatF:
    """d/dq of p * q (independent of q)."""
    x = _pt(p)
    rows = [[1 if i == j else 0 for j in range(5)] for i in range(4)]
    rows.append([-x[2] / 2, -x[3] / 2, x[0] / 2, x[1] / 2, 1])
    return MatF.from_rows(rows)


# ---------------------------------------------------------------------------
# graded derivations and Tanaka prolongation (depth <= 2)
# ---------------------------------------------------------------------------

@dataclass
class _Symbol:
    alg: FiltLieAlg
    m1: list[int]  # indices of degree -1
    m2: list[int]  # indices of degree -2


def _symbol(m: FiltLieAlg) -> _Symbol:
    if any(d not in (-1, -2) for d in m.degrees):
        raise DomainError("unsupported depth: degrees must be -1 or -2")
    if not m.graded_compatible():
        raise DomainError("algebra is not graded")
    m1 = [i for i, d in enumerate(m.degrees) if d == -1]
    m2 = [i for i, d in enumerate(m.degrees) if d == -2]
    if m2:
        gens = [m.bracket_basis(i, j) for i, j in itertools.combinations(m1, 2)]
        if span_rank([[v[k] for k in m2] for v in gens]) != len(m2):
            raise DomainError("degree -1 part does not generate the algebra")
    return _Symbol(m, m1, m2)


class _Prolongation:
    """Spaces G[k]: G[-2], G[-1] from the symbol, G[0] from matrices on m,
    G[k >= 1] as value tables."""

    def __init__(self, sym: _Symbol, g0: list[MatF] | None):
        self.sym = sym
        self.part = {-1: sym.m1, -2: sym.m2}
        self.dims = {-2: len(sym.m2), -1: len(sym.m1)}
        self.g0 = g0
        self.tables: dict[int, list[dict[int, Vec]]] = {}
        if g0 is not None:
            self.dims[0] = len(g0)

    def dim(self, k: int) -> int:
        if k < -2:
            return 0
        return self.dims[k]

    def act(self, j: int, b: int, y: int) -> Vec:
        """[u_b, e_y] for basis element b of G[j] and basis index y of m,
        as coordinates in G[j + deg y]."""
        m = self.sym.alg
        d = m.degrees[y]
        target = j + d
        if target < -2:
            return []
        if j < 0:
            x = self.part[j][b]
            v = m.bracket_basis(x, y)
            return [v[k] for k in self.part[target]]
        if j == 0:
            col = self.g0[b].col(y)
            return [col[k] for k in self.part[target]]
        return self.tables[j][b][y]

    def step(self, k: int) -> list[dict[int, Vec]]:
        """Basis of G[k] (k >= 0) as value tables {y: coords in G[k + deg y]}."""
        m = self.sym.alg
        blocks = []  # (basis index y of m, offset, size)
        off = 0
        for y in self.sym.m1 + self.sym.m2:
            size = self.dim(k + m.degrees[y])
            blocks.append((y, off, size))
            off += size
        n_unknown = off
        where = {y: (o, s) for y, o, s in blocks}
        rows: list[list[RatFunc]] = []
        basis_m = self.sym.m1 + self.sym.m2
        for a_i, a in enumerate(basis_m):
            for b in basis_m[a_i + 1:]:
                # phi([a,b]) - [phi(a), b] + [phi(b), a] = 0
                da, db = m.degrees[a], m.degrees[b]
                tdim = self.dim(k + da + db)
                if tdim == 0:
                    continue
                eqs = [[RatFunc(0)] * n_unknown for _ in range(tdim)]
                ab = m.bracket_basis(a, b)
                for z in self.sym.m2:
                    c = ab[z]
                    if c:
                        oz, sz = where[z]
                        for o in range(tdim):
                            eqs[o][oz + o] = eqs[o][oz + o] + c
                for src, other, sign in ((a, b, -1), (b, a, 1)):
                    osrc, ssrc = where[src]
                    j = k + m.degrees[src]
                    for bb in range(ssrc):
                        vals = self.act(j, bb, other)
                        for o, v in enumerate(vals):
                            if v:
                                eqs[o][osrc + bb] = eqs[o][osrc + bb] + sign * v
                rows.extend(e for e in eqs if any(x for x in e))
        if n_unknown == 0:
            return []
        if rows:
            _, null = rank_nullspace(MatF.from_rows(rows))
        else:
            null = [[RatFunc(int(i == j)) for j in range(n_unknown)] for i in range(n_unknown)]
        out = []
        for v in null:
            out.append({y: v[o:o + s] for y, o, s in blocks})
        return out


def _matrix_of_table(sym: _Symbol, table: dict[int, Vec]) -> MatF:
    n = sym.alg.dim
    M = [[RatFunc(0)] * n for _ in range(n)]
    for y, vals in table.items():
        part = sym.m1 if sym.alg.degrees[y] == -1 else sym.m2
        for k, v in zip(part, vals):
            M[k][y] = v
    return MatF.from_rows(M)


def graded_derivations(m: FiltLieAlg) -> list[MatF]:
    """Basis of degree-preserving derivations, as matrices on m."""
    sym = _symbol(m)
    pr = _Prolongation(sym, None)
    return [_matrix_of_table(sym, tab) for tab in pr.step(0)]


def extend_to_symbol(m: FiltLieAlg, X: MatF) -> MatF:
    """Extend a map on the degree -1 part to a derivation of m."""
    sym = _symbol(m)
    n1 = len(sym.m1)
    if X.shape == (m.dim, m.dim):
        M = X
    elif X.shape == (n1, n1):
        M = None
    else:
        raise DomainError(f"g0 element has shape {X.shape}, expected {n1}x{n1} or {m.dim}x{m.dim}")
    if M is None:
        # unknown action on the degree -2 part, fixed by the derivation rule
        n2 = len(sym.m2)
        unknown_names = [f"_d{i}_{j}" for i in range(n2) for j in range(n2)]
        full = [[RatFunc(0)] * m.dim for _ in range(m.dim)]
        for a, ia in enumerate(sym.m1):
            for b, ib in enumerate(sym.m1):
                full[ia][ib] = X[a, b]
        for a, ia in enumerate(sym.m2):
            for b, ib in enumerate(sym.m2):
                full[ia][ib] = RatFunc.var(unknown_names[a * n2 + b])
        M = MatF.from_rows(full)
        conds = _derivation_defects(m, M)
        sol = ep_linear_system([ExpPoly.const(c) for c in conds], unknown_names)
        if sol.kind == "none":
            raise DomainError("map does not extend to a derivation")
        vals = dict(zip(unknown_names, sol.particular))
        M = M.subs(vals)
    if any(not c.is_zero() for c in _derivation_defects(m, M)):
        raise DomainError("g0 element is not a derivation")
    for i in range(m.dim):
        for j in range(m.dim):
            if m.degrees[i] != m.degrees[j] and not M[i, j].is_zero():
                raise DomainError("g0 element does not preserve the grading")
    return M


def _derivation_defects(m: FiltLieAlg, M: MatF) -> list[RatFunc]:
    out = []
    cols = [M.col(j) for j in range(m.dim)]
    for i, j in itertools.combinations(range(m.dim), 2):
        lhs = M.apply(m.bracket_basis(i, j))
        rhs1 = m.bracket(cols[i], m.basis_vector(j))
        rhs2 = m.bracket(m.basis_vector(i), cols[j])
        out.extend(l - r1 - r2 for l, r1, r2 in zip(lhs, rhs1, rhs2))
    return out


def _commutator(A: MatF, B: MatF) -> MatF:
    return A @ B - B @ A


@dataclass
class ProlongResult:
    dims: list[int]
    total: int
    bases: list[list[dict[int, Vec]]] = field(repr=False, default_factory=list)
    dim_m: int = 0
    dim_g0: int = 0

    def to_json(self) -> dict:
        return {"dims": self.dims, "total": self.total, "dim_m": self.dim_m,
                "dim_g0": self.dim_g0}


def tanaka_prolong(m: FiltLieAlg, g0: Sequence[MatF], max_deg: int) -> ProlongResult:
    """Degrees 1..max_deg of pr(m, g0), stopping after the first zero."""
    sym = _symbol(m)
    mats = [extend_to_symbol(m, X if isinstance(X, MatF) else MatF.from_rows(X)) for X in g0]
    flat = [list(X.entries) for X in mats]
    if span_rank(flat) != len(flat):
        raise DomainError("g0 elements are linearly dependent")
    for A, B in itertools.combinations(mats, 2):
        if not in_span(_commutator(A, B).entries, flat):
            raise DomainError("g0 is not closed under the bracket")
    pr = _Prolongation(sym, mats)
    dims: list[int] = []
    bases = []
    for k in range(1, max_deg + 1):
        basis = pr.step(k)
        pr.tables[k] = basis
        pr.dims[k] = len(basis)
        dims.append(len(basis))
        bases.append(basis)
        if not basis:
            break
    return ProlongResult(dims, m.dim + len(mats) + sum(dims), bases, m.dim, len(mats))


def prolong_degree(m: FiltLieAlg, g0: Sequence[MatF], k: int) -> int:
    """Dimension of degree k computed without stopping at zero degrees."""
    sym = _symbol(m)
    mats = [extend_to_symbol(m, X) for X in g0]
    pr = _Prolongation(sym, mats)
    for j in range(1, k + 1):
        pr.tables[j] = pr.step(j)
        pr.dims[j] = len(pr.tables[j])
    return pr.dims[k]


# ---------------------------------------------------------------------------
# contact prolongation via delta
# ---------------------------------------------------------------------------

def delta_kernel(g0: Sequence[MatF], sigma: MatF) -> tuple[int, list[list[MatF]]]:
    """Kernel of delta on Hom(V, g0).

    delta(A)(u, v) = A_u v - A_v u - sigma(u, v) Abar, with Abar defined by
    sigma(Abar, u) = (2 / dim V) tr(A_u).
    """
    n = sigma.rows
    if sigma.det().is_zero():
        raise DomainError("sigma is degenerate")
    g0 = [X if isinstance(X, MatF) else MatF.from_rows(X) for X in g0]
    p = len(g0)
    names = [f"_a{u}_{b}" for u in range(n) for b in range(p)]
    coeff = [[RatFunc.var(names[u * p + b]) for b in range(p)] for u in range(n)]
    A = [sum((g0[b].scale(coeff[u][b]) for b in range(p)), MatF.zeros(n)) for u in range(n)]
    w = [A[u].trace() * Fraction(2, n) for u in range(n)]
    Abar = sigma.T.inverse().apply(w)
    conds = []
    for u in range(n):
        for v in range(u + 1, n):
            Au_v = A[u].col(v)
            Av_u = A[v].col(u)
            s = sigma[u, v]
            conds.extend(x - y - s * z for x, y, z in zip(Au_v, Av_u, Abar))
    sol = ep_linear_system([ExpPoly.const(c) for c in conds], names)
    basis = []
    for vec in sol.basis:
        basis.append([sum((g0[b].scale(vec[u * p + b]) for b in range(p)), MatF.zeros(n))
                      for u in range(n)])
    return len(basis), basis


# ---------------------------------------------------------------------------
# Sym^3 of gl(2)
# ---------------------------------------------------------------------------

def sym3_embed(X) -> MatF:
    """Action of X in gl(2) on cubics in the basis x^3, 3x^2y, 3xy^2, y^3.

    X acts by x -> X11 x + X21 y, y -> X12 x + X22 y, extended as a derivation.
    """
    X = X if isinstance(X, MatF) else MatF.from_rows(X)
    if X.shape != (2, 2):
        raise DomainError("sym3_embed expects a 2x2 matrix")
    dx = (X[0, 0], X[1, 0])  # image of x in (x, y) coefficients
    dy = (X[0, 1], X[1, 1])
    cols = []
    for j in range(4):
        # basis element C(3,j) x^(3-j) y^j; monomial coefficients by y-power
        a, b = 3 - j, j
        scale = comb(3, j)
        out = [RatFunc(0)] * 4
        if a:
            # a x^(a-1) y^b (dx0 x + dx1 y)
            out[b] = out[b] + scale * a * dx[0]
            out[b + 1] = out[b + 1] + scale * a * dx[1]
        if b:
            out[b - 1] = out[b - 1] + scale * b * dy[0]
            out[b] = out[b] + scale * b * dy[1]
        cols.append([out[k] / comb(3, k) for k in range(4)])
    return MatF.from_columns(cols)


def gl2_basis() -> list[MatF]:
    return [MatF.from_rows(r) for r in ([[1, 0], [0, 0]], [[0, 1], [0, 0]],
                                        [[0, 0], [1, 0]], [[0, 0], [0, 1]])]


SIGMA_SYM3 = MatF.from_rows([[0, 0, 0, 1], [0, 0, -3, 0], [0, 3, 0, 0], [-1, 0, 0, 0]])


def csp_basis(sigma: MatF) -> list[MatF]:
    """Basis of {X : X^T sigma + sigma X = c sigma}."""
    n = sigma.rows
    names = [f"_x{i}_{j}" for i in range(n) for j in range(n)] + ["_c"]
    X = MatF.from_rows([[RatFunc.var(names[i * n + j]) for j in range(n)] for i in range(n)])
    c = RatFunc.var("_c")
    conds = (X.T @ sigma + sigma @ X - sigma.scale(c)).entries
    sol = ep_linear_system([ExpPoly.const(e) for e in conds], names)
    return [MatF.from_rows([v[i * n:(i + 1) * n] for i in range(n)]) for v in sol.basis]
