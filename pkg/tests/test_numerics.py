import io
import math
import pickle

import pytest

import cyclelab
from cyclelab import NumericSystem, kukles_deg4, parse_system, eps_rescale, melnikov1, integrate, first_return, \
    poincare_return, displacement, find_cycles, melnikov_quadrature
from cyclelab.numerics import eps_scaled_point
from cyclelab.exception import BadIndex, BadTolerance, MathDomainError, NoReturn, UnboundSymbol


def linear_center():
    return NumericSystem(parse_system("dx = -y\ndy = x\n"))


def linear_focus():
    return NumericSystem(parse_system("dx = 1/100*x - y\ndy = x + 1/100*y\n"))


def test_global_tolerance(monkeypatch):
    assert cyclelab.get_global_tolerance() == 1e-10
    cyclelab.set_global_tolerance(1e-8)
    assert cyclelab.get_global_tolerance() == 1e-8
    with pytest.raises(BadTolerance):
        cyclelab.set_global_tolerance(1e-2)
    cyclelab.set_global_tolerance(None)
    monkeypatch.setenv("CYCLELAB_TOL", "1e-9")
    assert cyclelab.get_global_tolerance() == 1e-9
    monkeypatch.setenv("CYCLELAB_TOL", "1")
    with pytest.raises(BadTolerance):
        cyclelab.get_global_tolerance()


def test_numeric_system():
    with pytest.raises(UnboundSymbol):
        NumericSystem(kukles_deg4())
    system = NumericSystem(kukles_deg4(), {"a": 1, "b": "1", "c": 0.0})
    assert system.degree == 4
    dx, dy = system.field(1.0, 0.0)
    assert dx == 0.0 and dy == 1.0
    dx, dy = system(0.0, [0.5, 0.5])
    assert dx == -0.5
    assert dy == pytest.approx(0.5 + 0.5 * (0.5 - 1) * 1.0)
    copy = pickle.loads(pickle.dumps(system))
    assert copy.system is None
    assert copy.field(0.5, 0.5) == (dx, dy)


def test_eps_scaled_point():
    point = eps_scaled_point({"a": 1, "b": "2", "c": 0}, "1/20", ("a", "b"))
    assert point == {"a": cyclelab.rat("1/20"), "b": cyclelab.rat("1/10"), "c": 0}


def test_integrate():
    trajectory = integrate(linear_center(), (1.0, 0.0), math.pi)
    x, y = trajectory.end
    assert x == pytest.approx(-1.0, abs=1e-8)
    assert y == pytest.approx(0.0, abs=1e-8)
    samples = trajectory.sample(11)
    assert samples.shape == (11, 3)
    assert samples[0, 0] == 0.0
    stream = io.StringIO()
    trajectory.write_csv(stream, 5)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "t,x,y"
    assert len(lines) == 6
    with pytest.raises(BadIndex):
        integrate(linear_center(), (1.0, 0.0), 1.0, method="Euler")
    with pytest.raises(BadTolerance):
        integrate(linear_center(), (1.0, 0.0), 1.0, tol=1.0)


def test_blowup():
    system = NumericSystem(parse_system("dx = x^2\ndy = 0\n"))
    with pytest.raises(MathDomainError):
        integrate(system, (1.0, 0.0), 2.0)


def test_first_return():
    x1, period = first_return(linear_center(), 1.0)
    assert x1 == pytest.approx(1.0, abs=1e-7)
    assert period == pytest.approx(2 * math.pi, abs=1e-7)
    assert displacement(linear_center(), 0.5) == pytest.approx(0.0, abs=1e-7)
    x1 = poincare_return(linear_focus(), 1.0)
    assert x1 == pytest.approx(math.exp(0.02 * math.pi), rel=1e-7)


def test_first_return_errors():
    with pytest.raises(BadIndex):
        first_return(linear_center(), -1.0)
    clockwise = NumericSystem(parse_system("dx = y\ndy = -x\n"))
    with pytest.raises(NoReturn):
        first_return(clockwise, 1.0)


def test_no_cycles():
    assert find_cycles(linear_focus(), x_range=(0.1, 1.0), grid=8) == []
    assert find_cycles(linear_center(), (0.1, 1.0), grid=8) == []
    assert find_cycles(linear_focus(), (0.1, 1.0), grid=4, use_parallel=True) == []
    with pytest.raises(BadIndex):
        find_cycles(linear_center(), (0.0, 1.0))
    with pytest.raises(BadIndex):
        find_cycles(linear_center(), (1.0, 0.5))
    with pytest.raises(BadIndex):
        find_cycles(linear_center(), (0.1, 1.0), grid=2)


@pytest.mark.slow
def test_hopf_cycle():
    # origin is a repelling focus and L(1) = -ab/8 < 0, so a small attracting cycle is born
    system = NumericSystem(kukles_deg4(), {"a": 1, "b": 1, "c": "-1/50"})
    cycles = find_cycles(system, (0.1, 0.6), grid=24)
    attracting = [c for c in cycles if c.stability == "attracting"]
    assert attracting
    cycle = attracting[0]
    assert 0.15 < cycle.x_cross < 0.45
    assert 5.5 < cycle.period < 7.5
    assert cycle.residual < 1e-6
    assert set(cycle.as_dict()) == {"x", "period", "stability"}


@pytest.mark.slow
def test_semistable_unit_circle():
    point = eps_scaled_point({"a": 1, "b": 1, "c": 0}, "1/20", ("a", "b", "c"))
    system = NumericSystem(kukles_deg4(), point)
    cycles = find_cycles(system, (0.2, 1.8), grid=64)
    assert len(cycles) == 1
    cycle, = cycles
    assert abs(cycle.x_cross - 1.0) < 1e-6
    assert cycle.stability == "semistable"


def test_melnikov_quadrature():
    ps = eps_rescale(kukles_deg4()).bind({"a": 0, "b": 0, "c": 1})
    exact = melnikov1(ps).M
    for h in (0.1, 0.3, 0.7, 1.2):
        value = melnikov_quadrature(ps, h)
        assert value == pytest.approx(float(exact.evaluate({}, h=h, pi_mode="float")), rel=1e-8, abs=1e-12)
    with pytest.raises(BadIndex):
        melnikov_quadrature(ps, 0.0)
    with pytest.raises(BadIndex):
        melnikov_quadrature(ps, 0.3, order=2)
    with pytest.raises(UnboundSymbol):
        melnikov_quadrature(eps_rescale(kukles_deg4()), 0.3)
