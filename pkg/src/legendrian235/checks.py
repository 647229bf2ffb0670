"""Reproduction checks shared by ``legendrian235 verify`` and the test suite.

Each ``check_*`` function recomputes one published table or identity and
compares it with independently transcribed expected values.  They return
a ``CheckResult`` instead of raising so that a verification run reports
every item.
"""

from __future__ import annotations

import cmath
import io
import json
import random
import time
from contextlib import redirect_stdout
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .exact import RatFunc, parse
from .exppoly import exp_orbit, ode_residual
from .legcurve import (CATALOG_NAMES, CurveSpec, aut_dimension, catalog_spec, classify,
                       compatible_sigma, equivalent, invariant_of_r2, matrix_L, representative,
                       rolling_class, sigma_space)
from .liealg import (SIGMA_SYM3, delta_kernel, gl2_basis, heis_build, sym3_embed,
                     tanaka_prolong)
from .linalg import MatF, charpoly, rank_nullspace
from .models235 import (MODEL_NAMES, build_model, cauchy_char_check, cross_equivalences,
                        e_action_matrix, growth_vector, lift_model, model_invariants)
from .ode4 import (Mobius, class_invariant_from_charpoly, exponential_family_q0,
                   legendrian_invariants, mobius_transform_q0, numeric_lf_reduce)


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f}s) {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(number: int, title: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported with its message
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(number, title, ok, detail, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# expected values, transcribed independently of data/models235.json
# ---------------------------------------------------------------------------

EXPECTED_MODEL_ROWS = {
    "N7c": ([["0", "-3c", "0", "-1"], ["-1", "0", "-2c", "0"], ["0", "-2", "0", "c"],
             ["0", "0", "3", "0"]], "s^4-10c*s^2+9c^2+6", "-c^2/6"),
    "N6": ([["0", "-18", "0", "-42"], ["-1", "0", "-12", "0"], ["0", "-2", "0", "6"],
            ["0", "0", "3", "0"]], "s^4-60s^2+576", "-1/7"),
    "D6a": ([["0", "-3a", "0", "-12"], ["-2", "0", "4a", "0"], ["0", "2", "0", "2a"],
             ["0", "0", "3", "0"]], "s^4-20a*s^2+36a^2-144", "a^2/36"),
}

EXPECTED_SIGMA = {
    "L": [[0, 0, 0, 1], [0, 0, "-r", 0], [0, "r", 0, 0], [-1, 0, 0, 0]],
    "L1": [[0, 0, 0, 1], [0, 0, -1, -1], [0, 1, 0, 0], [-1, 1, 0, 0]],
    "L0": [[0, 0, 0, 1], [0, 0, -2, 0], [0, 2, 0, 0], [-1, 0, 0, 0]],
    "RNC-diag": [[0, 0, 0, 1], [0, 0, -3, 0], [0, 3, 0, 0], [-1, 0, 0, 0]],
    "RNC-nilpotent": [[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]],
}

EXPECTED_AUT_DIMS = {"L": 2, "L1": 2, "L0": 2, "RNC-diag": 4, "RNC-nilpotent": 4}


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_model_table() -> CheckResult:
    def run():
        bad = []
        for name, (A_exp, f_exp, _) in EXPECTED_MODEL_ROWS.items():
            A, f = e_action_matrix(lift_model(name))
            if A != MatF.from_rows([[parse(x) for x in row] for row in A_exp]):
                bad.append(f"{name}: A")
            if f.as_ratfunc() != parse(f_exp) or str(f) != f_exp:
                bad.append(f"{name}: f_A = {f}")
        return not bad, "; ".join(bad) or "A and f_A match for N7c, N6, D6a"

    res = _timed(1, "model matrices A and f_A", run)
    if res.passed and res.seconds >= 1.0:
        res.passed, res.detail = False, f"too slow: {res.seconds:.2f}s >= 1s"
    return res


def check_model_invariants() -> CheckResult:
    def run():
        bad = []
        for name, (_, _, I_exp) in EXPECTED_MODEL_ROWS.items():
            inv = model_invariants(name)
            if not inv.q0_nonzero or inv.I_cls != parse(I_exp):
                bad.append(f"{name}: I = {inv.I_cls}")
        rnc = class_invariant_from_charpoly(-10, 9)
        if not rnc.q0_is_zero or rnc.I_cls is not None:
            bad.append("r = 3: q0 should vanish")
        if classify(CurveSpec(matrix_L(3), [1, 1, 1, 1])).kind != "RationalNormal":
            bad.append("r = 3 not classified as rational normal")
        return not bad, "; ".join(bad) or "I = -c^2/6, -1/7, a^2/36; r = 3 has q0 = 0"

    return _timed(2, "model curve invariants", run)


def check_homogeneous_table(n_pairs: int = 50, seed: int = 2024) -> CheckResult:
    def run():
        bad = []
        I = {n: classify(catalog_spec(n)).invariant_cls for n in ("L", "L1", "L0")}
        r = RatFunc.var("r")
        if I["L1"] != RatFunc(Fraction(-1, 16)):
            bad.append(f"L1: {I['L1']}")
        if I["L0"] != RatFunc(Fraction(1, 9)):
            bad.append(f"L0: {I['L0']}")
        formula = (r ** 2 + 1) ** 2 / ((r ** 2 - 9) * (9 * r ** 2 - 1))
        if I["L"] != formula:
            bad.append(f"L: {I['L']}")
        x = RatFunc.var("x")
        if invariant_of_r2(x) != invariant_of_r2(1 / x):
            bad.append("I(x) != I(1/x)")
        rng = random.Random(seed)
        checked = 0
        while checked < n_pairs:
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            kind = rng.random()
            if kind < 0.15:
                b = a
            elif kind < 0.3 and a != 0:
                b = 1 / a
            else:
                b = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            labels = {Fraction(9), Fraction(1, 9)}
            if a in labels or b in labels or a == 0 or b == 0:
                continue
            same = invariant_of_r2(a) == invariant_of_r2(b)
            if same != (a == b or a * b == 1) or same != equivalent(a, b) or invariant_of_r2(a) != invariant_of_r2(1 / a):
                bad.append(f"pair ({a}, {b})")
            checked += 1
        return not bad, "; ".join(bad) or f"catalog values and {n_pairs} random pairs agree"

    return _timed(3, "homogeneous curve invariant table", run)


def _random_q0(rng: random.Random) -> RatFunc:
    t = RatFunc.var("t")
    num = sum((rng.randint(-5, 5) * t ** k for k in range(rng.randint(0, 2) + 1)), RatFunc(0))
    if num.is_zero():
        num = RatFunc(1)
    den = sum((rng.randint(-5, 5) * t ** k for k in range(3)), RatFunc(0)) + t ** 3
    return num / den


def check_weight_laws(n_maps: int = 20, seed: int = 7) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad = []
        done = 0
        while done < n_maps:
            a, b, c, d = (rng.randint(-6, 6) for _ in range(4))
            if a * d - b * c == 0:
                continue
            m = Mobius(a, b, c, d)
            lam = m.as_ratfunc()
            lp = m.derivative()
            q0 = _random_q0(rng)
            qt = mobius_transform_q0(q0, a, b, c, d)
            if qt.substitute("t", lam) * lp ** 4 != q0:
                bad.append(f"weight 4 for {(a, b, c, d)}")
            inv, invt = legendrian_invariants(q0), legendrian_invariants(qt)
            t = RatFunc.var("t")
            factor = (c * t + d) ** 20 / RatFunc(a * d - b * c) ** 10
            if invt.R.substitute("t", lam) != inv.R * factor:
                bad.append(f"weight 10 for {(a, b, c, d)}")
            if invt.I_lit.substitute("t", lam) != inv.I_lit:
                bad.append(f"I_lit not invariant for {(a, b, c, d)}")
            done += 1
        return not bad, "; ".join(bad) or f"{n_maps} random Moebius maps: weights 4, 10, 0"

    return _timed(4, "transformation weights of q0, R, I", run)


def check_sign_convention() -> CheckResult:
    def run():
        c2, c0 = RatFunc.var("c2"), RatFunc.var("c0")
        t = RatFunc.var("t")
        q0 = exponential_family_q0(c2, c0)
        rep = legendrian_invariants(q0)
        N = -1600 * (9 * c2 ** 2 - 100 * c0)
        ok_R = rep.R == -2560 * c2 * N ** 2 / (t ** 2 + 40 * c2) ** 10
        I_cls = class_invariant_from_charpoly(c2, c0).I_cls
        ok_sign = rep.I_lit == -I_cls
        detail = (f"I_lit = {rep.I_lit}, charpoly convention I_cls = {I_cls}; "
                  "the two conventions differ by sign")
        return ok_R and ok_sign, detail

    return _timed(5, "R on the exponential family and sign of I", run)


def check_prolongation() -> CheckResult:
    def run():
        bad = []
        h = heis_build(SIGMA_SYM3)
        g0 = [sym3_embed(X) for X in gl2_basis()]
        res = tanaka_prolong(h, g0, 5)
        if res.dims != [4, 1, 0] or res.total != 14:
            bad.append(f"gl(2): dims {res.dims}, total {res.total}")
        r = RatFunc.var("r")
        sig = MatF.from_rows([[0, 0, 0, 1], [0, 0, -r, 0], [0, r, 0, 0], [-1, 0, 0, 0]])
        g0r = [MatF.identity(4), matrix_L(r)]
        res_r = tanaka_prolong(heis_build(sig), g0r, 5)
        if res_r.dims[0] != 0 or res_r.total != 7:
            bad.append(f"<Id, A>: dims {res_r.dims}, total {res_r.total}")
        dk = {
            "gl2": (delta_kernel(g0, SIGMA_SYM3)[0], res.dims[0]),
            "Id,A": (delta_kernel(g0r, sig)[0], res_r.dims[0]),
            "Id": (delta_kernel([MatF.identity(4)], sig)[0],
                   tanaka_prolong(heis_build(sig), [MatF.identity(4)], 1).dims[0]),
        }
        for k, (a, b) in dk.items():
            if a != b:
                bad.append(f"delta kernel {k}: {a} vs prolongation {b}")
        if dk["Id"][0] != 0:
            bad.append("delta kernel for <Id> should vanish")
        return not bad, "; ".join(bad) or "dims (4,1,0) total 14; <Id,A> total 7; delta kernels 4,0,0"

    res = _timed(6, "Tanaka prolongation and delta kernel", run)
    if res.passed and res.seconds >= 5.0:
        res.passed, res.detail = False, f"too slow: {res.seconds:.2f}s >= 5s"
    return res


def check_aut_dims() -> CheckResult:
    def run():
        got = {n: aut_dimension(catalog_spec(n)) for n in CATALOG_NAMES}
        got["L at r=3"] = aut_dimension(CurveSpec(matrix_L(3), [1, 1, 1, 1]))
        expected = dict(EXPECTED_AUT_DIMS, **{"L at r=3": 4})
        bad = [f"{k}: {got[k]} != {v}" for k, v in expected.items() if got[k] != v]
        return not bad, "; ".join(bad) or "dims " + ", ".join(f"{k}={v}" for k, v in got.items())

    return _timed(7, "aut(Z) dimensions", run)


def _proportional(S: MatF, T: MatF) -> bool:
    return rank_nullspace([list(S.entries), list(T.entries)])[0] == 1


def check_sigma() -> CheckResult:
    def run():
        bad = []
        for name in CATALOG_NAMES:
            spec = catalog_spec(name)
            if len(sigma_space(spec)) != 1:
                bad.append(f"{name}: sigma space not 1-dimensional")
                continue
            S = compatible_sigma(spec)
            if not _proportional(S, MatF.from_rows(EXPECTED_SIGMA[name])):
                bad.append(f"{name}: {S}")
        return not bad, "; ".join(bad) or "five representatives match up to scale"

    return _timed(8, "compatible symplectic forms", run)


def check_models_structure() -> CheckResult:
    def run():
        bad = []
        for name in MODEL_NAMES:
            m = build_model(name)
            if not m.algebra.jacobi_check().ok:
                bad.append(f"{name}: Jacobi")
            if not m.algebra.filtration_compatible(clamp=(-3, 0)):
                bad.append(f"{name}: filtration")
            if growth_vector(m) != (2, 3, 5):
                bad.append(f"{name}: growth {growth_vector(m)}")
            lm = lift_model(name)
            if lm.quotient_dims() != (2, 3, 4, 5, m.algebra.dim - len(lm.f0_lift)):
                bad.append(f"{name}: lifted dims {lm.quotient_dims()}")
            if not cauchy_char_check(lm).ok:
                bad.append(f"{name}: Cauchy characteristics")
        return not bad, "; ".join(bad) or "Jacobi, (2,3,5), lifted dims, Cauchy checks pass"

    return _timed(9, "model algebras, growth and lifts", run)


def check_exp_orbits() -> CheckResult:
    def run():
        bad = []
        zs = {"generic": ["z1", "z2", "z3", "z4"]}
        for name in CATALOG_NAMES:
            rep = representative(name)
            f = charpoly(rep.A)
            coeffs = [f.coeff(k) for k in range(5)]
            for z in (rep.z, zs["generic"]):
                for comp in exp_orbit(rep.A, z):
                    if not ode_residual(comp, coeffs).is_zero():
                        bad.append(f"{name}")
        return not bad, "; ".join(bad) or "all components solve u'''' + c2 u'' + c0 u = 0"

    return _timed(10, "exponential orbits solve the ODE", run)


def check_cross_equivalence() -> CheckResult:
    def run():
        rep = cross_equivalences()
        bad = [] if rep.ok else [json.dumps(rep.to_json())]
        if rolling_class(3).kind != "RationalNormal":
            bad.append("rho = 3")
        if rolling_class(2).invariant_cls != RatFunc(Fraction(-1, 7)):
            bad.append("rho = 2")
        return not bad, "; ".join(bad) or "a^2=-6c^2 and c^2=6/7 relations; rolling rho=3, 2"

    return _timed(11, "cross-equivalences and rolling spheres", run)


def check_numeric_lf(n_cases: int = 10, n_points: int = 5, seed: int = 11,
                     tol: float = 1e-9) -> CheckResult:
    def run():
        rng = random.Random(seed)
        worst = 0.0
        for _ in range(n_cases):
            c2 = cmath.rect(rng.uniform(1, 10), rng.uniform(-cmath.pi, cmath.pi))
            c0 = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            ts = [rng.uniform(0.05, 0.9) for _ in range(n_points)]
            worst = max(worst, numeric_lf_reduce(c2, c0, ts).max_residual)
        return worst < tol, f"max residual {worst:.2e} over {n_cases} cases"

    res = _timed(12, "numeric Laguerre-Forsyth reduction", run)
    if res.passed and res.seconds >= 1.0:
        res.passed, res.detail = False, f"too slow: {res.seconds:.2f}s >= 1s"
    return res


CLI_EXAMPLES = [
    (["rolling", "--rho", "3/1"], {"kind": "RationalNormal"}),
    (["models", "--name", "N6"], {"fA": "s^4-60s^2+576", "I": "-1/7"}),
    (["equiv", "--a", "4/1", "--b", "1/4"], {"equivalent": True}),
]


def _run_cli(argv: list[str]) -> tuple[int, str]:
    from .cli import main
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def check_cli_examples() -> CheckResult:
    def run():
        bad = []
        for argv, expected in CLI_EXAMPLES:
            code1, out1 = _run_cli(argv)
            code2, out2 = _run_cli(argv)
            if code1 != 0 or out1 != out2:
                bad.append(f"{' '.join(argv)}: unstable or failed")
                continue
            doc = json.loads(out1)
            for k, v in expected.items():
                if doc.get(k) != v:
                    bad.append(f"{' '.join(argv)}: {k} = {doc.get(k)!r}")
        return not bad, "; ".join(bad) or "three examples stable and as documented"

    return _timed(13, "CLI examples", run)


ALL_CHECKS: list[Callable[[], CheckResult]] = [
    check_model_table, check_model_invariants, check_homogeneous_table, check_weight_laws,
    check_sign_convention, check_prolongation, check_aut_dims, check_sigma,
    check_models_structure, check_exp_orbits, check_cross_equivalence, check_numeric_lf,
    check_cli_examples,
]


def run_all() -> list[CheckResult]:
    return [fn() for fn in ALL_CHECKS]
