from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from legendrian235.errors import DomainError
from legendrian235.exact import RatFunc, parse, var
from legendrian235.legcurve import CurveSpec, check_star, classify
from legendrian235.liealg import in_span
from legendrian235.linalg import MatF
from legendrian235.models235 import (MODEL_NAMES, build_model, cauchy_char_check,
                                     cross_equivalences, e_action_matrix, flatness_dimensions,
                                     growth_vector,
                                     lift_model, model_curve_class, model_invariants,
                                     substitute_square)
from legendrian235.ode4 import class_invariant_from_charpoly

from conftest import nonzero_fractions

c, a = var("c"), var("a")


def combo(model, text):
    return model.algebra.element(text)


def br(model, x, y):
    return model.algebra.bracket(combo(model, x), combo(model, y))


@pytest.mark.parametrize("name, param, x, y, expected", [
    ("N7c", None, "X1", "X2", "-3c*N-2X3"),
    ("N6", None, "X3", "X4", "-60N+6X3"),
    ("D6a", 1, "X4", "X5", "-2X3"),
])
def test_bracket_table_entries(name, param, x, y, expected):
    m = build_model(name, param)
    assert br(m, x, y) == combo(m, expected)


@pytest.mark.parametrize("name, dim", [("N7c", 7), ("N6", 6), ("D6a", 6)])
def test_dimensions_and_jacobi(name, dim):
    m = build_model(name)
    assert m.algebra.dim == dim
    assert m.algebra.jacobi_check().ok


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_filtration_and_growth(name):
    m = build_model(name)
    assert m.algebra.filtration_compatible(clamp=(-3, 0))
    assert growth_vector(m) == (2, 3, 5)


def test_unknown_model():
    with pytest.raises(DomainError):
        build_model("X9")
    with pytest.raises(DomainError):
        build_model("N6", 2)


@pytest.mark.parametrize("name, E, V, f0", [
    ("N7c", "X1", "N", ["T"]),
    ("D6a", "X1+X2", "T", None),
    ("N6", "X1", "N", []),
])
def test_lift_examples(name, E, V, f0):
    lm = lift_model(name)
    m = lm.base
    assert lm.E == combo(m, E) and lm.V == combo(m, V)
    if f0 is not None:
        assert len(lm.f0_lift) == len(f0)
        for s in f0:
            assert in_span(combo(m, s), lm.f0_lift)
    dims = lm.quotient_dims()
    assert dims[:4] == (2, 3, 4, 5)
    assert dims[4] == m.algebra.dim - len(lm.f0_lift)


# transcribed from the published table
TABLE = {
    "N7c": ([[0, -3 * c, 0, -1], [-1, 0, -2 * c, 0], [0, -2, 0, c], [0, 0, 3, 0]],
            "s^4 - 10c s^2 + 9c^2 + 6", -c ** 2 / 6),
    "N6": ([[0, -18, 0, -42], [-1, 0, -12, 0], [0, -2, 0, 6], [0, 0, 3, 0]],
           "s^4 - 60 s^2 + 576", RatFunc(Fraction(-1, 7))),
    "D6a": ([[0, -3 * a, 0, -12], [-2, 0, 4 * a, 0], [0, 2, 0, 2 * a], [0, 0, 3, 0]],
            "s^4 - 20a s^2 + 36a^2 - 144", a ** 2 / 36),
}


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_action_matrix_table(name):
    A_exp, f_exp, _ = TABLE[name]
    A, f = e_action_matrix(lift_model(name))
    assert A == MatF.from_rows(A_exp)
    assert f.as_ratfunc() == parse(f_exp)
    assert check_star(A)
    assert f.coeff(3) == 0 and f.coeff(1) == 0


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_model_invariants_table(name):
    inv = model_invariants(name)
    assert inv.q0_nonzero and inv.star
    assert inv.I_cls == TABLE[name][2]


@pytest.mark.parametrize("name", ["N7c", "D6a"])
def test_q0_nonzero_symbolic_and_specialized(name):
    _, f = e_action_matrix(lift_model(name))
    c2, c0 = f.coeff(2), f.coeff(0)
    disc = 9 * c2 ** 2 - 100 * c0
    assert not disc.is_zero()
    for k in range(1, 11):
        val = Fraction(k, 3) if k % 2 else Fraction(-k, 7)
        inv = model_invariants(name, val)
        assert inv.q0_nonzero == (not disc.subs({"c": val, "a": val}).is_zero())


def test_n6_is_the_class_with_r2_equal_4():
    # roots of s^4-60s^2+576 are +-sqrt(48), +-sqrt(12): ratio 2
    ref = classify(CurveSpec(MatF.diag([2, 1, -1, -2]), [1, 1, 1, 1]))
    assert model_invariants("N6").I_cls == ref.invariant_cls
    assert model_curve_class("N6").r_squared == 4


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_cauchy_characteristics(name):
    rep = cauchy_char_check(lift_model(name))
    assert rep.ok
    assert rep.V_preserves_D2.holds and rep.E_preserves_D4.holds
    assert rep.E_preserves_D2.witness and rep.V_preserves_D4.witness
    assert rep.generation_depth == 5


def test_cross_equivalences():
    rep = cross_equivalences()
    assert rep.ok
    assert rep.d6_under_a2 == -c ** 2 / 6
    assert rep.n7_at_c2 == Fraction(-1, 7) == rep.d6_at_a2


def test_substitute_square():
    assert substitute_square(a ** 2 / 36, "a", -6 * c ** 2) == -c ** 2 / 6
    with pytest.raises(DomainError):
        substitute_square(a ** 3, "a", 2)


@given(nonzero_fractions)
def test_specialization_commutes_with_invariant(val):
    inv = model_invariants("D6a", val)
    if inv.q0_nonzero:
        assert inv.I_cls == TABLE["D6a"][2].subs({"a": val})


@pytest.mark.parametrize("name, equal", [("N7c", True), ("N6", False), ("D6a", False)])
def test_flatness_dimension_count(name, equal):
    dim_f, bound = flatness_dimensions(name)
    assert (dim_f == bound) is equal and dim_f <= bound
