from fractions import Fraction

import pytest

from cyclelab import PlanarPoly, ParamPoly, kukles_deg4, kukles_odd, parse_system, parse_expr, cofactor, \
    dulac_divergence, lie_derivative, symmetry_center_check, rif_check
from cyclelab.exception import NonMonicUndividable, ZeroCurve


def test_unit_circle_is_invariant():
    system = kukles_deg4()
    C = parse_expr("x^2 + y^2 - 1", system.params)
    result = cofactor(system, C)
    assert result.invariant
    assert result.strategy == "y"
    assert result.cofactor == parse_expr("2*y^2*(a*x + b*y + c)", system.params)
    assert lie_derivative(system, C) == C * result.cofactor
    assert result.as_dict()["remainder"] is None


@pytest.mark.parametrize("n", [1, 2])
def test_odd_family_circle(n):
    system = kukles_odd(n)
    inner = PlanarPoly(names=system.params)
    for name in system.params:
        i2, j2 = int(name[1]), int(name[2])
        inner = inner + PlanarPoly.monomial(i2, j2, ParamPoly.symbol(name, system.params), system.params)
    result = cofactor(system, parse_expr("1 - x^2 - y^2"))
    y = PlanarPoly.y(system.params)
    assert result.invariant
    assert result.cofactor == -(y ** 2) * inner * 2


@pytest.mark.parametrize("scale", [3, Fraction(-1, 2)])
def test_cofactor_is_scale_invariant(scale):
    system = kukles_deg4()
    C = parse_expr("x^2 + y^2 - 1")
    assert cofactor(system, C.scale(scale)).cofactor == cofactor(system, C).cofactor


@pytest.mark.parametrize("system, curve", [
    (kukles_deg4(), "x^2 + y^2 - 1"),
    (kukles_odd(1), "1 - x^2 - y^2"),
    (kukles_odd(2), "1 - x^2 - y^2"),
])
def test_cofactor_degree_bound(system, curve):
    result = cofactor(system, parse_expr(curve))
    assert result.invariant
    assert result.cofactor.degree() <= system.degree() - 1


def test_not_invariant():
    system = kukles_deg4()
    result = cofactor(system, PlanarPoly.x())
    assert not result.invariant
    assert result.strategy == "graded"
    assert result.cofactor is None
    assert result.remainder == -PlanarPoly.y()


def test_cofactor_errors():
    system = kukles_deg4()
    with pytest.raises(ZeroCurve):
        cofactor(system, PlanarPoly())
    with pytest.raises(ZeroCurve):
        cofactor(system, PlanarPoly.const(3))
    with pytest.raises(NonMonicUndividable):
        cofactor(system, parse_expr("a*x + a*y", system.params))
    with pytest.raises(ZeroCurve):
        dulac_divergence(system, PlanarPoly())


def test_dulac_divergence():
    focus = parse_system("dx = x - y\ndy = x + y\n")
    result = dulac_divergence(focus, parse_expr("x^2 + y^2"))
    assert result.is_constant
    assert result.kappa.is_zero
    logistic = parse_system("dx = x - x^2\ndy = 0\n")
    result = dulac_divergence(logistic, PlanarPoly.x())
    assert result.is_constant
    assert result.kappa == -1
    assert result.as_dict()["constant"] == "-1"
    result = dulac_divergence(parse_system("dx = x\ndy = y\n"), PlanarPoly.x())
    assert not result.is_constant
    assert result.numerator == PlanarPoly.x()


def test_dulac_on_the_unit_circle():
    C = parse_expr("x^2 + y^2 - 1")
    result = dulac_divergence(kukles_deg4(0, 0), C)
    assert result.is_constant
    assert result.kappa == ParamPoly.symbol("c")
    assert result.numerator == C * C * result.kappa
    assert not dulac_divergence(kukles_deg4(), C).is_constant
    assert not dulac_divergence(kukles_deg4(1, 0), C).is_constant
    linear = dulac_divergence(parse_system("dx = -y\ndy = x\n"), C)
    assert linear.is_constant and linear.kappa.is_zero


def test_symmetry_center_check():
    report = symmetry_center_check(kukles_deg4(0, 1, 0))
    assert report.x_axis_reversible and not report.y_axis_reversible
    assert report.center
    report = symmetry_center_check(kukles_deg4(1, 0, 0))
    assert report.y_axis_reversible
    assert not symmetry_center_check(kukles_deg4(1, 1, 0)).center
    assert not symmetry_center_check(kukles_odd(1)).as_dict()["center"]


def test_rif_check():
    linear = parse_system("dx = -y\ndy = x\n")
    assert rif_check(linear, parse_expr("x^2 + y^2")).is_zero
    system = kukles_deg4(1, 1, 0)
    assert not rif_check(system, parse_expr("x^2 + y^2 - 1")).is_zero
    with pytest.raises(ZeroCurve):
        rif_check(linear, PlanarPoly())
