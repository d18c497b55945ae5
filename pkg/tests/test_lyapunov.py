from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclelab import ParamPoly, PlanarPoly, kukles_cubic, kukles_deg4, kukles_odd, symmetry_center_check, \
    parse_system, lyapunov_l0, focal_values, lyapunov_chain, weak_focus_order, ChainStep, CenterUpTo, \
    LyapunovQuantity, proportional
from cyclelab.lyapunov import radius_power, rotation_operator, solve_rotation, solve_linear_binding
from cyclelab.exception import BadIndex, NonzeroLinearTrace, NotCenterFocus, SubstitutionDoesNotVanish, \
    UnboundSymbol, UnsolvableStep, WrongLinearPart


def test_rotation_operator():
    x, y = PlanarPoly.x(), PlanarPoly.y()
    assert rotation_operator(x ** 2 + y ** 2).is_zero
    assert rotation_operator(x * y) == x ** 2 - y ** 2
    assert radius_power(4) == x ** 4 + x ** 2 * y ** 2 * 2 + y ** 4


def test_solve_rotation():
    x, y = PlanarPoly.x(), PlanarPoly.y()
    rhs = -(y ** 4)
    V, eta = solve_rotation(4, rhs)
    assert eta == Fraction(3, 8)
    assert rotation_operator(V) - radius_power(4) * eta == rhs
    assert V.coeff(4, 0).is_zero
    V, eta = solve_rotation(3, x ** 2 * y)
    assert eta.is_zero
    assert rotation_operator(V) == x ** 2 * y


def test_l0():
    c = ParamPoly.symbol("c")
    assert lyapunov_l0(kukles_deg4()) == c * Fraction(-1, 2)
    assert lyapunov_l0(kukles_odd(1)) == ParamPoly.symbol("b00") * Fraction(1, 2)
    with pytest.raises(NotCenterFocus):
        lyapunov_l0(parse_system("dx = x\ndy = y\n"))
    with pytest.raises(NotCenterFocus):
        lyapunov_l0(parse_system("dx = -y + 1\ndy = x\n"))


def test_cubic_focus():
    certificate = focal_values(parse_system("dx = -y\ndy = x + y^3\n"), 4)
    assert certificate.quantity(1) == Fraction(3, 8)
    assert certificate.residual_ok()
    assert certificate.eta(2).is_zero
    with pytest.raises(BadIndex):
        certificate.eta(6)


def test_deg4_first_quantity():
    system = kukles_deg4().substitute({"c": 0})
    a, b = ParamPoly.symbols("a b")
    certificate = focal_values(system, 4)
    assert certificate.quantity(1) == a * b * Fraction(-1, 8)
    assert proportional(certificate.quantity(1), -(a * b))


def test_focal_value_errors():
    with pytest.raises(NonzeroLinearTrace):
        focal_values(kukles_deg4(), 4)
    with pytest.raises(WrongLinearPart):
        focal_values(parse_system("dx = -2*y\ndy = x\n"), 4)
    with pytest.raises(BadIndex):
        focal_values(kukles_deg4(c=0), 5)


def test_weak_focus_order():
    assert weak_focus_order(kukles_deg4(1, 1, 0), 3) == 1
    assert weak_focus_order(parse_system("dx = -y\ndy = x\n"), 3) == CenterUpTo(3)
    assert weak_focus_order(kukles_deg4(0, 1, 0), 3) == CenterUpTo(3)
    assert weak_focus_order(kukles_deg4(1, 0, 0), 3) == CenterUpTo(3)
    with pytest.raises(UnboundSymbol):
        weak_focus_order(kukles_deg4(c=0), 3)
    with pytest.raises(BadIndex):
        weak_focus_order(kukles_deg4(1, 1, 0), 0)


def test_quantity_split():
    b02, b04 = ParamPoly.symbols("b02 b04")
    quantity = LyapunovQuantity(4, b02 ** 2 * (b02 * 4 - b04 * 2))
    assert quantity.content == 2
    assert quantity.primitive == b02 ** 2 * (b02 * 2 - b04)
    assert quantity.even_factor == {"b02": 2}
    assert str(LyapunovQuantity(2, ParamPoly.zero())) == "L(2) = 0"


def test_solve_linear_binding():
    b02, b20 = ParamPoly.symbols("b02 b20")
    assert solve_linear_binding((b02 * 3 + b20) * Fraction(1, 8), "b20") == b02 * -3
    assert solve_linear_binding(b02 ** 2 * (b20 * 2 - b02), "b20") == b02 * Fraction(1, 2)
    with pytest.raises(UnsolvableStep):
        solve_linear_binding(b20 ** 2 + b02, "b20")
    with pytest.raises(UnsolvableStep):
        solve_linear_binding(b02 * b20 + 1, "b20")


def test_chain_steps():
    system = kukles_deg4()
    sequence = lyapunov_chain(system, [(0, "c=0"), (1, "a=0")], max_order=4)
    assert [q.k for q in sequence.L] == [0, 1, 2, 3, 4]
    a, b = ParamPoly.symbols("a b")
    assert proportional(sequence.L[1].value, -(a * b))
    assert all(q.is_zero for q in sequence.L[2:])
    assert sequence.residual_ok
    assert sequence.system.free_symbols == ("b",)
    report = sequence.as_dict()
    assert report["substitutions"][0] == {"index": 0, "bindings": {"c": "0"}}


def test_chain_solve_for():
    system = kukles_odd(1)
    sequence = lyapunov_chain(system, [ChainStep(0, "b00=0"), ChainStep(1, solve_for="b20")])
    b02, b20 = ParamPoly.symbols("b02 b20")
    assert proportional(sequence.L[1].value, b02 * 3 + b20)
    assert sequence.substitutions[1] == (1, [("b20", b02 * -3)])
    assert sequence.last.k == 2


def test_chain_plain_specialization():
    sequence = lyapunov_chain(kukles_deg4(), [(0, "c=0"), (None, "b=2")])
    a = ParamPoly.symbol("a")
    assert [q.k for q in sequence.L] == [0, 1, 1]
    assert proportional(sequence.last.value, -a)


def test_chain_rejects_non_vanishing_step():
    with pytest.raises(SubstitutionDoesNotVanish):
        lyapunov_chain(kukles_deg4(), [(0, "a=0")])
    with pytest.raises(SubstitutionDoesNotVanish):
        lyapunov_chain(kukles_odd(1), [(0, "b00=0"), (1, "b02=1")])
    with pytest.raises(BadIndex):
        ChainStep(-1)
    with pytest.raises(BadIndex):
        ChainStep(None, solve_for="a")


def test_odd_chain_first_three_steps():
    steps = [(0, "b00=0"), (1, "b20=-3*b02"), (2, "b22=-5*b04-b40")]
    sequence = lyapunov_chain(kukles_odd(2), steps)
    b02, b20, b04, b22, b40 = ParamPoly.symbols("b02 b20 b04 b22 b40")
    assert [q.k for q in sequence.L] == [0, 1, 2, 3]
    assert proportional(sequence.L[1].value, b02 * 3 + b20)
    assert proportional(sequence.L[2].value, b04 * 5 + b22 + b40)
    assert proportional(sequence.L[3].value, -(b02 ** 3))
    assert sequence.residual_ok


@pytest.mark.slow
def test_odd_chain_leading_steps():
    steps = [(0, "b00=0"), (1, "b20=-3*b02"), (2, "b22=-5*b04-b40")]
    sequence = lyapunov_chain(kukles_odd(3), steps)
    b02, b06, b24, b42, b60 = ParamPoly.symbols("b02 b06 b24 b42 b60")
    assert proportional(sequence.L[3].value, b02 ** 3 * -6 + b06 * 35 + b24 * 5 + b42 * 3 + b60 * 5)
    assert sequence.residual_ok


small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def kukles_samples(draw):
    def c():
        return draw(small_rationals)
    kind = draw(st.sampled_from(["x-axis", "y-axis", "deg4 x-axis", "deg4 y-axis", "generic"]))
    if kind == "x-axis":
        # Q even in y
        return kukles_cubic(c(), 0, c(), c(), 0, c(), 0)
    if kind == "y-axis":
        # Q odd in x
        return kukles_cubic(0, c(), 0, c(), 0, c(), 0)
    if kind == "deg4 x-axis":
        return kukles_deg4(0, c(), 0)
    if kind == "deg4 y-axis":
        return kukles_deg4(c(), 0, 0)
    return kukles_cubic(*[c() for _ in range(7)])


@settings(max_examples=40, deadline=None)
@given(kukles_samples())
def test_reversible_systems_have_vanishing_focal_values(system):
    report = symmetry_center_check(system)
    if not report.center:
        return
    certificate = focal_values(system, 12)
    assert all(certificate.eta(k).is_zero for k in range(2, 13, 2))
