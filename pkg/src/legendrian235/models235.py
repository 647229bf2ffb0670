"""Symmetry algebras of the multiply-transitive (2,3,5)-distributions.

The bracket tables live in ``data/models235.json`` (one string per nonzero
bracket) and are checked against the Jacobi identity on load.  From each
table we rebuild the lift to the projectivized distribution, the matrix of
ad(E) on the contact quotient, its characteristic polynomial, and the
class invariant of the associated Legendrian curve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .errors import DomainError
from .exact import RatFunc
from .legcurve import CurveSpec, classify
from .liealg import FiltLieAlg, algebra_from_table, in_span, span_rank
from .linalg import MatF, PolyInS, charpoly, minpoly, solve_linear
from .ode4 import class_invariant_from_charpoly

MODEL_NAMES = ("N7c", "N6", "D6a")


@lru_cache(maxsize=None)
def _data() -> dict:
    text = resources.files("legendrian235").joinpath("data/models235.json").read_text()
    return json.loads(text)


def model_data(name: str) -> dict:
    """Raw tabulated data (basis, filtration, brackets, lift) of a model."""
    data = _data()
    if name not in data:
        raise DomainError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")
    return data[name]


@dataclass
class Model235:
    name: str
    param_name: str | None
    param: RatFunc | None
    algebra: FiltLieAlg

    @property
    def f0(self) -> list[list[RatFunc]]:
        """Isotropy: basis elements of filtration index 0."""
        return [self.algebra.basis_vector(i) for i, d in enumerate(self.algebra.degrees) if d == 0]

    def element(self, text: str) -> list[RatFunc]:
        return self.algebra.element(text)


def build_model(name: str, param=None) -> Model235:
    """Model with its parameter symbolic (default) or specialized."""
    spec = model_data(name)
    alg = algebra_from_table(spec["basis"], spec["filtration"], spec["brackets"])
    pname = spec["param"]
    pval = None
    if pname is not None:
        pval = RatFunc.var(pname) if param is None else RatFunc.coerce(param)
        if param is not None:
            alg = alg.subs({pname: pval})
    elif param is not None:
        raise DomainError(f"model {name} has no parameter")
    jac = alg.jacobi_check()
    if not jac.ok:
        i, j, k = jac.witness
        raise DomainError(f"Jacobi identity fails for {name} on "
                          f"({alg.names[i]}, {alg.names[j]}, {alg.names[k]})")
    return Model235(name, pname, pval, alg)


# ---------------------------------------------------------------------------
# derived flags
# ---------------------------------------------------------------------------

def _basis_of(vectors: Sequence[Sequence]) -> list[list[RatFunc]]:
    """Independent subset spanning the same space (greedy)."""
    out: list[list[RatFunc]] = []
    for v in vectors:
        v = list(v)
        if any(not x.is_zero() for x in v) and not in_span(v, out):
            out.append(v)
    return out


def weak_derived_flag(alg: FiltLieAlg, start: Sequence[Sequence], steps: int) -> list[list]:
    """D^1 = start, D^{k+1} = D^k + [D^1, D^k]."""
    D1 = _basis_of(start)
    flag = [D1]
    for _ in range(steps - 1):
        cur = flag[-1]
        new = list(cur)
        for x in D1:
            for y in cur:
                new.append(alg.bracket(x, y))
        flag.append(_basis_of(new))
    return flag


def growth_vector(m: Model235) -> tuple[int, ...]:
    """Dimensions of D, D^2, D^3 modulo f^0 with D = f^{-1}."""
    alg = m.algebra
    f0 = m.f0
    D = [alg.basis_vector(i) for i, d in enumerate(alg.degrees) if d >= -1]
    flag = weak_derived_flag(alg, D, 3)
    return tuple(len(level) - len(f0) for level in flag)


# ---------------------------------------------------------------------------
# lift to the projectivized distribution
# ---------------------------------------------------------------------------

@dataclass
class LiftedModel:
    base: Model235
    ell: list[RatFunc]
    E: list[RatFunc]
    V: list[RatFunc]
    f0_lift: list[list[RatFunc]]
    flag: list[list[list[RatFunc]]]  # flag[i] spans f~^{-(i+1)}
    quotient_basis: list[list[RatFunc]]
    quotient_labels: list[str] = field(default_factory=list)

    def level(self, i: int) -> list[list[RatFunc]]:
        """Spanning set of f~^{-i} (f~^0 for i = 0)."""
        return self.f0_lift if i == 0 else self.flag[i - 1]

    def quotient_dims(self) -> tuple[int, ...]:
        return tuple(len(level) - len(self.f0_lift) for level in self.flag)


def stabilizer_of_line(m: Model235, ell: Sequence) -> list[list[RatFunc]]:
    """{v in f^0 : [v, ell] in <ell> + f^0}."""
    alg = m.algebra
    f0 = m.f0
    if not f0:
        return []
    target = [list(ell)] + f0
    # unknown combination sum x_i f0_i; [sum x_i f0_i, ell] = sum x_i w_i must
    # lie in span(target): solve sum x_i w_i - sum y_j target_j = 0
    w = [alg.bracket(v, ell) for v in f0]
    cols = w + [[-x for x in tvec] for tvec in target]
    M = MatF.from_columns(cols)
    null = M.nullspace()
    vecs = []
    for sol in null:
        coeffs = sol[:len(f0)]
        v = [sum((c * f[k] for c, f in zip(coeffs, f0)), RatFunc(0)) for k in range(alg.dim)]
        vecs.append(v)
    return _basis_of(vecs)


def lift_model(name: str, param=None) -> LiftedModel:
    m = build_model(name, param)
    spec = model_data(name)["lift"]
    alg = m.algebra
    ell, E, V = (alg.element(spec[k]) for k in ("ell", "E", "V"))
    f0_lift = stabilizer_of_line(m, ell)
    listed = [alg.element(s) for s in spec["f0"]]
    if span_rank(listed + f0_lift) != len(f0_lift) or len(listed) != len(f0_lift):
        raise DomainError(f"lifted isotropy of {name} does not match the tabulated one")
    if not in_span(V, m.f0) or (f0_lift and in_span(V, f0_lift)) or not any(V):
        raise DomainError(f"V of {name} must be vertical (in f^0 but not in f~^0)")
    start = f0_lift + [E, V]
    steps = 5
    flag = weak_derived_flag(alg, start, steps)
    # the tabulated layer i+2 element must enter at step i+2 exactly
    for i, text in enumerate(spec["layers"]):
        v = alg.element(text)
        if not in_span(v, flag[i + 1]) or in_span(v, flag[i]):
            raise DomainError(f"{text} is not a new element of level {-(i + 2)} for {name}")
    qb = [alg.element(s) for s in spec["quotient_basis"]]
    return LiftedModel(m, ell, E, V, f0_lift, flag, qb, list(spec["quotient_basis"]))


def e_action_matrix(lm: LiftedModel) -> tuple[MatF, PolyInS]:
    """ad(E) on f~^{-4} / (f~^0 + <E>) in the tabulated quotient basis."""
    alg = lm.base.algebra
    modulo = lm.f0_lift + [lm.E]
    f4 = lm.level(4)
    inside = all(in_span(v, f4) for v in lm.quotient_basis)
    if not inside or len(f4) - len(modulo) != 4 or span_rank(lm.quotient_basis + modulo) != len(f4):
        raise DomainError("quotient f~^{-4}/(f~^0 + E) is not 4-dimensional in the given basis")
    cols = lm.quotient_basis + modulo
    M = MatF.from_columns(cols)
    A = []
    for b in lm.quotient_basis:
        sol = solve_linear(M, alg.bracket(lm.E, b))
        if sol.kind != "unique":
            raise DomainError("ad(E) does not preserve f~^{-4}")
        A.append(sol.particular[:4])
    Am = MatF.from_columns(A)
    return Am, charpoly(Am)


def base_point(lm: LiftedModel) -> list[RatFunc]:
    """Coordinates of V modulo f~^0 + E in the quotient basis."""
    M = MatF.from_columns(lm.quotient_basis + lm.f0_lift + [lm.E])
    sol = solve_linear(M, lm.V)
    if sol.kind != "unique":
        raise DomainError("V does not lie in f~^{-4}")
    return sol.particular[:4]


@dataclass
class ModelInvariants:
    name: str
    A: MatF
    fA: PolyInS
    star: bool
    q0_nonzero: bool
    I_cls: RatFunc | None

    def to_json(self) -> dict:
        return {"model": self.name, "A": self.A.to_json(), "fA": str(self.fA),
                "star": self.star, "q0_nonzero": self.q0_nonzero,
                "I": "undefined" if self.I_cls is None else str(self.I_cls)}


def model_invariants(name: str, param=None) -> ModelInvariants:
    lm = lift_model(name, param)
    A, f = e_action_matrix(lm)
    if not f.coeff(3).is_zero() or not f.coeff(1).is_zero():
        raise DomainError("characteristic polynomial has odd terms")
    ci = class_invariant_from_charpoly(f.coeff(2), f.coeff(0))
    return ModelInvariants(name, A, f, minpoly(A) == f, not ci.q0_is_zero, ci.I_cls)


def model_curve_class(name: str, param=None):
    """Classify (A, V mod f~^0 + E) through the curve classifier."""
    lm = lift_model(name, param)
    A, _ = e_action_matrix(lm)
    return classify(CurveSpec(A, base_point(lm)))


# ---------------------------------------------------------------------------
# Cauchy characteristics
# ---------------------------------------------------------------------------

@dataclass
class Containment:
    holds: bool
    witness: str | None = None  # basis element whose bracket leaves the target

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness}


@dataclass
class CauchyReport:
    V_preserves_D2: Containment
    E_preserves_D4: Containment
    E_preserves_D2: Containment
    V_preserves_D4: Containment
    generation_depth: int

    @property
    def ok(self) -> bool:
        return (self.V_preserves_D2.holds and self.E_preserves_D4.holds
                and not self.E_preserves_D2.holds and self.E_preserves_D2.witness is not None
                and not self.V_preserves_D4.holds and self.V_preserves_D4.witness is not None
                and self.generation_depth == 5)

    def to_json(self) -> dict:
        return {"V_preserves_D2": self.V_preserves_D2.to_json(),
                "E_preserves_D4": self.E_preserves_D4.to_json(),
                "E_preserves_D2": self.E_preserves_D2.to_json(),
                "V_preserves_D4": self.V_preserves_D4.to_json(),
                "generation_depth": self.generation_depth, "ok": self.ok}


def _containment(alg: FiltLieAlg, x, space) -> Containment:
    for v in space:
        if not in_span(alg.bracket(x, v), space):
            return Containment(False, alg.format(v))
    return Containment(True)


def cauchy_char_check(lm: LiftedModel) -> CauchyReport:
    alg = lm.base.algebra
    D2, D4 = lm.level(2), lm.level(4)
    depth = next((i + 1 for i, lev in enumerate(lm.flag) if len(lev) == alg.dim), -1)
    return CauchyReport(
        _containment(alg, lm.V, D2),
        _containment(alg, lm.E, D4),
        _containment(alg, lm.E, D2),
        _containment(alg, lm.V, D4),
        depth,
    )


def flatness_dimensions(name: str) -> tuple[int, int]:
    """(dim f, 5 + dim aut(Z)) for the comparison in the flatness criterion.

    Only the dimension count is computed; dim aut(Z) is 2 when q0 != 0 and 4
    for the rational normal curve.
    """
    inv = model_invariants(name)
    aut_Z = 2 if inv.q0_nonzero else 4
    return build_model(name).algebra.dim, 5 + aut_Z


# ---------------------------------------------------------------------------
# relations between the families
# ---------------------------------------------------------------------------

def substitute_square(expr, var: str, value) -> RatFunc:
    """Replace var^2 by value in an expression even in var."""
    expr = RatFunc.coerce(expr)
    value = RatFunc.coerce(value)

    def part(p: RatFunc) -> RatFunc:
        acc = RatFunc(0)
        for k, c in p.coeffs_in(var).items():
            if k % 2:
                raise DomainError(f"{expr} is not even in {var}")
            acc = acc + c * value ** (k // 2)
        return acc

    return part(expr.numerator_ratfunc()) / part(expr.denominator_ratfunc())


@dataclass
class CrossReport:
    n7_invariant: RatFunc
    d6_invariant: RatFunc
    d6_under_a2: RatFunc
    n7_at_c2: RatFunc
    d6_at_a2: RatFunc
    n6_invariant: RatFunc

    @property
    def ok(self) -> bool:
        return (self.d6_under_a2 == self.n7_invariant
                and self.n7_at_c2 == self.n6_invariant == self.d6_at_a2)

    def to_json(self) -> dict:
        return {"I_N7c": str(self.n7_invariant), "I_D6a": str(self.d6_invariant),
                "I_D6a_at_a2=-6c2": str(self.d6_under_a2),
                "I_N7c_at_c2=6/7": str(self.n7_at_c2),
                "I_D6a_at_a2=-36/7": str(self.d6_at_a2),
                "I_N6": str(self.n6_invariant), "ok": self.ok}


def cross_equivalences() -> CrossReport:
    n7 = model_invariants("N7c").I_cls
    d6 = model_invariants("D6a").I_cls
    n6 = model_invariants("N6").I_cls
    c = RatFunc.var("c")
    return CrossReport(
        n7, d6,
        substitute_square(d6, "a", -6 * c ** 2),
        substitute_square(n7, "c", RatFunc("6/7")),
        substitute_square(d6, "a", RatFunc("-36/7")),
        n6,
    )
