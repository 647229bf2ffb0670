import cmath
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from legendrian235.errors import DomainError
from legendrian235.exact import RatFunc, parse, var
from legendrian235.jets import Jet, jet_exp, jet_log, jet_pow, jet_sqrt, jet_tanh
from legendrian235.ode4 import (ODE4, Mobius, class_invariant_from_charpoly,
                                exponential_family_q0, general_transform_ode,
                                legendrian_invariants, lf_lambda_jet, mobius_transform_q0,
                                numeric_lf_reduce, pullback_transform_ode, relative_invariant_R)

from conftest import nonzero_polys, small_ints

t = var("t")
c2, c0 = var("c2"), var("c0")


# -- invariants ----------------------------------------------------------------

def test_constant_q0_has_zero_invariant():
    rep = legendrian_invariants(RatFunc(5))
    assert rep.R == 0 and rep.I_lit == 0


def test_exponential_family_sample():
    # q0 for diag(2, 1, -1, -2): c2 = -5, c0 = 4
    q0 = parse("280000/(t^2-200)^4")
    assert exponential_family_q0(-5, 4) == q0
    rep = legendrian_invariants(q0)
    N = 280000
    assert rep.R == -2560 * (-5) * N ** 2 / (t ** 2 - 200) ** 10
    assert rep.I_lit == Fraction(1, 7)
    assert rep.I_cls == Fraction(-1, 7)


def test_zero_q0_is_rational_normal():
    rep = legendrian_invariants(0)
    assert rep.rational_normal and rep.I_lit is None
    assert rep.to_json()["I_lit"] == "undefined"


def test_symbolic_family_sign_relation():
    q0 = exponential_family_q0(c2, c0)
    N = -1600 * (9 * c2 ** 2 - 100 * c0)
    rep = legendrian_invariants(q0)
    assert rep.R == -2560 * c2 * N ** 2 / (t ** 2 + 40 * c2) ** 10
    assert rep.I_lit == -c2 ** 2 / (9 * c2 ** 2 - 100 * c0)
    assert rep.I_lit == -class_invariant_from_charpoly(c2, c0).I_cls


@pytest.mark.parametrize("cc2, cc0, zero, I", [
    (-10, 9, True, None),
    (-10 * var("c"), 9 * var("c") ** 2 + 6, False, -var("c") ** 2 / 6),
    (-2, 1, False, Fraction(-1, 16)),
])
def test_class_invariant_examples(cc2, cc0, zero, I):
    ci = class_invariant_from_charpoly(cc2, cc0)
    assert ci.q0_is_zero == zero
    if I is not None:
        assert ci.I_cls == I


# -- Moebius maps ---------------------------------------------------------------

mobius_maps = st.tuples(small_ints, small_ints, small_ints, small_ints).filter(
    lambda m: m[0] * m[3] - m[1] * m[2] != 0)

q0s = st.builds(lambda n, d: n / (d + t ** 3), nonzero_polys.filter(lambda p: not p.depends_on("c")),
                st.integers(-4, 4))


def test_mobius_identity_and_translation():
    q0 = parse("1/(t^2+3)")
    assert mobius_transform_q0(q0, 1, 0, 0, 1) == q0
    assert mobius_transform_q0(q0, 1, 1, 0, 1) == q0.substitute("t", t - 1)


def test_symbolic_mobius_weight_of_R():
    a, b, c, d = (var(n) for n in "abcd")
    q0 = 1 / (t ** 2 + 1)
    qt = mobius_transform_q0(q0, a, b, c, d)
    lam = (a * t + b) / (c * t + d)
    R, Rt = relative_invariant_R(q0), relative_invariant_R(qt)
    assert Rt.substitute("t", lam) == R * (c * t + d) ** 20 / (a * d - b * c) ** 10


@given(mobius_maps, q0s)
def test_weight_laws(m, q0):
    a, b, c, d = m
    mob = Mobius(a, b, c, d)
    lam, lp = mob.as_ratfunc(), mob.derivative()
    qt = mobius_transform_q0(q0, a, b, c, d)
    assert qt.substitute("t", lam) == q0 / lp ** 4
    assert relative_invariant_R(qt).substitute("t", lam) == relative_invariant_R(q0) / lp ** 10
    assert legendrian_invariants(qt).I_lit.substitute("t", lam) == legendrian_invariants(q0).I_lit


@given(mobius_maps, mobius_maps)
def test_mobius_composition(m1, m2):
    f, g = Mobius(*m1), Mobius(*m2)
    assert f.compose(g).as_ratfunc() == f.as_ratfunc().substitute("t", g.as_ratfunc())
    assert f.compose(f.inverse()).as_ratfunc() == t


def test_singular_mobius_rejected():
    with pytest.raises(DomainError):
        Mobius(1, 2, 2, 4)


# -- point transformations ---------------------------------------------------

def test_identity_transformation():
    e = ODE4(1, parse("t"), 0, parse("1/(t+1)"))
    assert general_transform_ode(e, t, 1) == e


def test_shift_keeps_trivial_ode():
    assert general_transform_ode(ODE4(), t + 3, 1) == ODE4()


def test_lf_class_preserved_by_mobius():
    q0 = parse("280000/(t^2-200)^4")
    e = ODE4.laguerre_forsyth(q0)
    # lambda = (2t+1)/(t+1) has lambda' = 1/(t+1)^2, so lambda'^(3/2) = 1/(t+1)^3
    out = general_transform_ode(e, (2 * t + 1) / (t + 1), 1 / (t + 1) ** 3)
    assert out.is_LF and out.is_legendrian_class
    assert out.p0 == mobius_transform_q0(q0, 2, 1, 1, 1)


@pytest.mark.parametrize("lam_text, mu_text", [
    ("(2t+1)/(t+1)", "t^2+1"),
    ("3t-2", "1/(t+2)"),
    ("1/t", "t"),
])
def test_transformed_ode_annihilates_transformed_solutions(lam_text, mu_text):
    # u'''' = 0 has solutions 1, t, t^2, t^3; u~(lambda(t)) = mu(t) u(t)
    lam, mu = parse(lam_text), parse(mu_text)
    out = general_transform_ode(ODE4(), lam, mu)
    inv = Mobius.from_ratfunc(lam).inverse().as_ratfunc()
    for k in range(4):
        u_tilde = (mu * t ** k).substitute("t", inv)
        assert out.apply(u_tilde) == 0


@given(st.tuples(small_ints.filter(bool), small_ints), st.tuples(small_ints.filter(bool), small_ints))
def test_affine_composition_law(l1, l2):
    e = ODE4(0, parse("1/(t^2+1)"), 0, parse("t"))
    f = l1[0] * t + l1[1]
    g = l2[0] * t + l2[1]
    once = general_transform_ode(general_transform_ode(e, f, 1), g, 1)
    assert once == general_transform_ode(e, g.substitute("t", f), 1)


def test_pullback_accepts_non_mobius():
    e = ODE4()
    lam = t ** 3 + t
    pulled = pullback_transform_ode(e, lam, 1)
    assert len(pulled) == 4
    with pytest.raises(DomainError):
        general_transform_ode(e, lam, 1)


def test_is_legendrian_class_outside_lf():
    assert ODE4(1, 0, 0, 0).is_legendrian_class is None
    assert ODE4(0, 0, 1, 0).is_legendrian_class is False


# -- jets ---------------------------------------------------------------------

def test_jet_exp_example():
    assert jet_exp(Jet.variable(0, 3)).coeffs == pytest.approx([1, 1, 0.5, 1 / 6])


def test_jet_tanh_example():
    assert jet_tanh(Jet.variable(0, 3)).coeffs == pytest.approx([0, 1, 0, -1 / 3], abs=1e-15)


def test_jet_sqrt_constant_term():
    assert jet_sqrt(Jet.constant(4, 3)).value == pytest.approx(2)
    with pytest.raises(DomainError):
        jet_sqrt(Jet.variable(0, 2))


JET_FUNCS = [
    ("exp", jet_exp, mpmath.exp),
    ("tanh", jet_tanh, mpmath.tanh),
    ("log", jet_log, mpmath.log),
    ("sqrt", jet_sqrt, mpmath.sqrt),
    ("pow_3_2", lambda j: jet_pow(j, 1.5), lambda x: x ** 1.5),
]


@pytest.mark.parametrize("name, jf, mf", JET_FUNCS, ids=[f[0] for f in JET_FUNCS])
def test_jets_match_finite_differences(name, jf, mf):
    rng = random.Random(5)
    for _ in range(10):
        x0 = rng.uniform(0.2, 2.0)
        # compose with a polynomial so that the chain rule is exercised too
        inner = Jet.variable(x0, 4) * Jet.variable(x0, 4) * 0.5 + Jet.variable(x0, 4)
        got = jf(inner).derivatives()
        for k in range(5):
            ref = mpmath.diff(lambda x: mf(0.5 * x * x + x), x0, k)
            assert abs(got[k] - complex(ref)) < 1e-6 * max(1, abs(complex(ref)))


# -- numeric Laguerre-Forsyth ---------------------------------------------------

def test_numeric_lf_example():
    rep = numeric_lf_reduce(-5, 4, [0.1, 0.3, 0.7])
    assert rep.max_residual < 1e-9


def test_numeric_lf_zero_c2():
    with pytest.raises(DomainError, match="already in Laguerre-Forsyth"):
        numeric_lf_reduce(0, -1, [0.1])


def test_numeric_lf_other_branch():
    a = numeric_lf_reduce(3 + 1j, 2, [0.2])
    b = numeric_lf_reduce(3 + 1j, 2, [0.2], branch=-1)
    assert a.max_residual < 1e-9 and b.max_residual < 1e-9


def test_lambda_jet_matches_closed_form():
    c = -5
    jet = lf_lambda_jet(c, 0.3, 3)
    ref = lambda x: -2 * mpmath.sqrt(-10 * c) * mpmath.tanh(x * mpmath.sqrt(-c / 10))
    for k, d in enumerate(jet.derivatives()):
        assert abs(d - complex(mpmath.diff(ref, 0.3, k))) < 1e-8


@given(st.floats(1, 10), st.floats(-3.1, 3.1), st.complex_numbers(max_magnitude=10))
def test_numeric_lf_random(modulus, phase, cc0):
    cc2 = cmath.rect(modulus, phase)
    assert numeric_lf_reduce(cc2, cc0, [0.05, 0.4, 0.9]).max_residual < 1e-9
