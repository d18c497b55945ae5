from fractions import Fraction

import pytest

from cyclelab import PlanarPoly, ParamPoly, PlanarSystem, eps_rescale, kukles_cubic, kukles_deg4, kukles_odd, \
    kukles_conditions, parse_system
from cyclelab.exception import BadIndex, NonlinearInEps, NotPerturbationOfLinearCenter, UnknownSymbol


def test_planar_system():
    system = kukles_deg4()
    c = ParamPoly.symbol("c")
    assert system.params == ("a", "b", "c")
    assert system.degree() == 4
    (px, py), (qx, qy) = system.linear_part()
    assert px == 0 and py == -1
    assert qx == 1 and qy == -c
    assert system.divergence().coeff(0, 0) == -c
    numeric = system.bind({"a": 1, "b": 1, "c": 0})
    assert numeric.is_numeric
    assert numeric.free_symbols == ()
    assert system.substitute({"c": 0}).free_symbols == ("a", "b")
    with pytest.raises(UnknownSymbol):
        system.bind({"z": 1})


def test_undeclared_param():
    a = ParamPoly.symbol("a")
    with pytest.raises(UnknownSymbol):
        PlanarSystem(-PlanarPoly.y(), PlanarPoly.x() + a, params=())
    with pytest.raises(UnknownSymbol):
        PlanarSystem(-PlanarPoly.y(), PlanarPoly.x(), params=("a",), perturbation_params=("b",))


def test_families_match_their_files(system_file):
    with open(system_file("odd.sys")) as f:
        assert parse_system(f.read()) == kukles_odd(1)
    with open(system_file("cubic.sys")) as f:
        assert parse_system(f.read()) == kukles_cubic()


def test_family_arguments():
    assert kukles_deg4(1, 1, 0).is_numeric
    assert kukles_deg4(c=0).params == ("a", "b")
    assert kukles_cubic(0, 0, 0, 0, 0, 0, 0).Q == PlanarPoly.x()
    with pytest.raises(BadIndex):
        kukles_cubic(1, 2)
    with pytest.raises(BadIndex):
        kukles_odd(0)
    with pytest.raises(BadIndex):
        kukles_odd(1, {(1, 0): 1})
    with pytest.raises(BadIndex):
        kukles_odd(1, {(2, 2): 1})
    assert kukles_odd(3).degree() == 9
    assert kukles_odd(10).params[-1] == "b0_20"


def test_eps_rescale():
    system = kukles_deg4()
    ps = eps_rescale(system)
    x, y = PlanarPoly.x(system.params), PlanarPoly.y(system.params)
    a, b, c = ParamPoly.symbols("a b c")
    assert ps.reverse_time
    assert ps.f1.is_zero
    assert ps.g1 == -y * (x ** 2 + y ** 2 - 1) * (x * a + y * b + c)
    assert ps.vanishes_at_origin
    assert ps.assemble() == system
    forward = eps_rescale(system, reverse_time=False)
    assert forward.g1 == -ps.g1
    assert forward.assemble() == system


def test_eps_rescale_errors():
    with pytest.raises(NotPerturbationOfLinearCenter):
        eps_rescale(kukles_deg4(), ("a", "b"))
    with pytest.raises(NotPerturbationOfLinearCenter):
        eps_rescale(parse_system("dx = -y\ndy = 2*x\n"))
    with pytest.raises(NonlinearInEps):
        eps_rescale(parse_system("params: a\ndx = -y\ndy = x + a^2*y\n"))
    with pytest.raises(UnknownSymbol):
        eps_rescale(kukles_deg4(), ("d",))


def test_perturbation_not_vanishing_at_origin(caplog):
    ps = eps_rescale(parse_system("params: a\ndx = -y + a\ndy = x\n"))
    assert not ps.vanishes_at_origin
    assert "does not vanish" in caplog.text


@pytest.mark.parametrize("coeffs,expected", [
    (("2", "0", "5", "7", "0", "11", "0"), "K2"),
    (("-1", "0", "4", "1", "0", "-2", "0"), "K2"),
    ((0, 1, 0, 1, 0, 1, 0), "K3"),
    (("1", "0", "-2", "-1/3", "-1", "0", "1/3"), "JinWang"),
])
def test_kukles_conditions(coeffs, expected):
    report = kukles_conditions(*coeffs)
    assert report.satisfied[expected]
    assert report.any


def test_jin_wang_branch():
    report = kukles_conditions(1, 0, -2, Fraction(-1, 3), -1, 0, Fraction(1, 3))
    assert report.jin_wang_branch == "a7=-a4"
    assert report.lambda_k == 1
    assert report.k_gamma == 0
    assert not report.satisfied["K1"]
    assert kukles_conditions(0, 0, 0, 0, 0, 0, 0).jin_wang_branch == "a7=a4=0"
    assert kukles_conditions(1, 1, 1, 1, 1, 1, 1).jin_wang_branch is None


def test_symbolic_conditions():
    a = ParamPoly.symbols("a1 a2 a3 a4 a5 a6 a7")
    report = kukles_conditions(*a)
    assert str(report.lambda_k) == "a2*a3 + 3*a7"
    assert not report.any
    as_dict = report.as_dict()
    assert as_dict["lambda"] == "a2*a3 + 3*a7"
    assert set(as_dict["satisfied"]) == {"K1", "K2", "K3", "K4", "JinWang"}
