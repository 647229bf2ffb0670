from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from legendrian235.errors import DomainError
from legendrian235.exact import RatFunc, var
from legendrian235.legcurve import (CATALOG_NAMES, MATRIX_L0, MATRIX_L1, MATRIX_NILPOTENT,
                                    CurveSpec, admissible, antidiag, aut_algebra,
                                    aut_dimension, catalog_spec, check_star, classify,
                                    compatible_sigma, equivalent, invariant_of_r2, matrix_L,
                                    normalize_basepoint, r_squared_from_invariant,
                                    representative, rolling_class, sigma_space)
from legendrian235.linalg import MatF, rank_nullspace

from conftest import fractions, nonzero_fractions, small_ints

r = var("r")
ONES = [1, 1, 1, 1]


def same_up_to_scale(S, T) -> bool:
    return rank_nullspace([list(S.entries), list(T.entries)])[0] == 1


# -- basic predicates ----------------------------------------------------------

def test_check_star_examples():
    assert check_star(matrix_L(r))
    assert not check_star(MatF.diag([1, 1, -1, -1]))
    assert check_star(MATRIX_NILPOTENT)


@pytest.mark.parametrize("A, z, expected", [
    (matrix_L(r), ONES, True),
    (matrix_L(r), [1, 1, 1, 0], False),
    (MATRIX_L0, [1, 1, 0, 1], False),
    (MATRIX_L0, ONES, True),
])
def test_admissible(A, z, expected):
    assert admissible(CurveSpec(A, z)) is expected


# -- compatible sigma ------------------------------------------------------------

@pytest.mark.parametrize("spec, expected", [
    (catalog_spec("L"), antidiag(1, -r, r, -1)),
    (CurveSpec(matrix_L(3), ONES), antidiag(1, -3, 3, -1)),
    (catalog_spec("L0"), antidiag(1, -2, 2, -1)),
    (catalog_spec("L1"), MatF.from_rows([[0, 0, 0, 1], [0, 0, -1, -1], [0, 1, 0, 0], [-1, 1, 0, 0]])),
    (catalog_spec("RNC-nilpotent"),
     MatF.from_rows([[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])),
])
def test_compatible_sigma_tables(spec, expected):
    assert same_up_to_scale(compatible_sigma(spec), expected)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_sigma_defining_conditions(name):
    spec = catalog_spec(name)
    assert len(sigma_space(spec)) == 1
    S = compatible_sigma(spec)
    assert S.T == -S
    assert (spec.A.T @ S + S @ spec.A).is_zero()
    assert S.det() != 0
    g = spec.orbit()
    gp = g.derivative()
    total = sum((a * b for a, b in zip(g, gp.act(S))), start=type(g[0])())
    assert total.is_zero()


def test_sigma_not_admissible():
    with pytest.raises(DomainError):
        compatible_sigma(CurveSpec(matrix_L(r), [1, 1, 1, 0]))


# -- classification --------------------------------------------------------------

def test_classify_examples():
    assert classify(CurveSpec(matrix_L(3), ONES)).kind == "RationalNormal"
    assert classify(CurveSpec(MATRIX_NILPOTENT, [1, 0, 0, 0])).kind == "RationalNormal"
    cls = classify(CurveSpec(MatF.diag([2, 1, -1, -2]), ONES))
    assert cls.kind == "Lclass"
    assert cls.invariant_cls == Fraction(-1, 7) and cls.r_squared == 4
    # oracle: the closed formula at r^2 = 4
    assert cls.invariant_cls == Fraction(5 ** 2, (4 - 9) * (36 - 1))


def test_invariant_table_values():
    assert classify(catalog_spec("L1")).invariant_cls == Fraction(-1, 16)
    assert classify(catalog_spec("L0")).invariant_cls == Fraction(1, 9)
    assert classify(catalog_spec("L")).invariant_cls == (r ** 2 + 1) ** 2 / ((r ** 2 - 9) * (9 * r ** 2 - 1))


def test_label_symmetry_symbolic():
    x = var("x")
    assert invariant_of_r2(x) == invariant_of_r2(1 / x)


def test_classify_rejects_bad_input():
    with pytest.raises(DomainError, match="spectrum not symmetric"):
        classify(CurveSpec(MatF.diag([1, 2, 3, 4]), ONES))
    with pytest.raises(DomainError):
        classify(CurveSpec(MatF.diag([1, 1, -1, -1]), ONES))
    with pytest.raises(DomainError):
        classify(CurveSpec(matrix_L(2), [1, 1, 1, 0]))


@pytest.mark.parametrize("a, b, expected", [(4, Fraction(1, 4), True), (4, 4, True), (4, 2, False)])
def test_equivalent_examples(a, b, expected):
    assert equivalent(a, b) is expected


labels = nonzero_fractions.filter(lambda q: q not in (9, Fraction(1, 9)))


@given(labels, labels)
def test_invariant_separates_classes(a, b):
    same_class = a == b or a * b == 1
    assert (invariant_of_r2(a) == invariant_of_r2(b)) == same_class
    assert equivalent(a, b) == same_class
    assert invariant_of_r2(a) == invariant_of_r2(1 / a)


@given(labels)
def test_r_squared_recovered_from_invariant(x):
    got = r_squared_from_invariant(invariant_of_r2(x).constant_value())
    assert got in (x, 1 / x)
    assert abs(got) >= 1


invertible = st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=4, max_size=4).map(
    MatF.from_rows).filter(lambda P: P.det() != 0)


@given(invertible, st.sampled_from(["L1", "L0", "RNC-nilpotent"]) | st.just("L2"))
def test_classify_conjugation_invariant(P, name):
    spec = CurveSpec(matrix_L(2), ONES) if name == "L2" else catalog_spec(name)
    moved = CurveSpec(P @ spec.A @ P.inverse(), P.apply(spec.z))
    a, b = classify(spec), classify(moved)
    assert (a.kind, a.invariant_cls, a.r_squared) == (b.kind, b.invariant_cls, b.r_squared)


@given(nonzero_fractions, st.sampled_from(CATALOG_NAMES[1:]))
def test_classify_rescaling_invariant(k, name):
    spec = catalog_spec(name)
    scaled = CurveSpec(spec.A.scale(k), spec.z)
    assert classify(scaled).invariant_cls == classify(spec).invariant_cls
    assert classify(scaled).kind == classify(spec).kind


# -- base points, symmetries, rolling ---------------------------------------------

def test_normalize_basepoint_examples():
    assert normalize_basepoint("L", [2, 3, 5, 7]) == MatF.diag([2, 3, 5, 7])
    assert normalize_basepoint("RNC-nilpotent", [1, 0, 0, 0]) == MatF.identity(4)
    z = [var(f"z{i}") for i in range(1, 5)]
    P = normalize_basepoint("L1", z)
    assert (P @ MATRIX_L1 - MATRIX_L1 @ P).is_zero()
    assert P.apply([1, 1, 1, 1]) == z
    assert P[1, 0] == 0 and P[2, 0] == 0 and P[2, 1] == 0


def test_normalize_basepoint_not_admissible():
    with pytest.raises(DomainError):
        normalize_basepoint("L0", [1, 1, 0, 1])


@pytest.mark.parametrize("spec, dim", [
    (catalog_spec("L"), 2), (catalog_spec("L1"), 2), (catalog_spec("L0"), 2),
    (CurveSpec(matrix_L(3), ONES), 4), (catalog_spec("RNC-nilpotent"), 4),
    (CurveSpec(matrix_L(5), ONES), 2),
])
def test_aut_dimension(spec, dim):
    assert aut_dimension(spec) == dim


def test_aut_algebra_generic_is_id_and_A():
    spec = catalog_spec("L")
    basis = aut_algebra(spec)
    target = [list(MatF.identity(4).entries), list(spec.A.entries)]
    rows = [list(X.entries) for X in basis]
    assert rank_nullspace(rows + target)[0] == 2


@pytest.mark.parametrize("rho, kind, I", [
    (3, "RationalNormal", None), (Fraction(1, 3), "RationalNormal", None),
    (2, "Lclass", Fraction(-1, 7)), (1, "Lclass", Fraction(-1, 16)),
])
def test_rolling(rho, kind, I):
    cls = rolling_class(rho)
    assert cls.kind == kind
    if I is not None:
        # oracle: the closed formula at r^2 = rho^2
        x = Fraction(rho) ** 2
        assert cls.invariant_cls == I == (x + 1) ** 2 / ((x - 9) * (9 * x - 1))


def test_rolling_zero():
    with pytest.raises(DomainError):
        rolling_class(0)


def test_curve_class_json():
    out = classify(CurveSpec(MatF.diag([2, 1, -1, -2]), ONES)).to_json()
    assert out["kind"] == "Lclass" and out["I"] == "-1/7" and out["r_squared"] == "4"
    assert out["representative"]["name"] == "L"
