"""Invariant curves, Dulac functions, reversibility and reciprocal integrating factors"""
import logging
from fractions import Fraction
from typing import Optional, Tuple

from sympy.polys.polyerrors import ExactQuotientFailed

from .algebra import ParamPoly, PlanarPoly, _phase_key
from .exception import NonMonicUndividable, ResidualNotZero, ZeroCurve
from .lyapunov import lyapunov_l0
from .sysdef import PlanarSystem

logger = logging.getLogger(__name__)


def lie_derivative(system: PlanarSystem, C: PlanarPoly) -> PlanarPoly:
    """C_x P + C_y Q"""
    return C.diff("x") * system.P + C.diff("y") * system.Q


class CofactorResult:
    def __init__(self, invariant: bool, cofactor: Optional[PlanarPoly], remainder: Optional[PlanarPoly],
                 strategy: str):
        self.invariant = invariant
        self.cofactor = cofactor
        self.remainder = remainder
        self.strategy = strategy

    def as_dict(self):
        return {
            "invariant": self.invariant,
            "cofactor": str(self.cofactor) if self.cofactor is not None else None,
            "remainder": str(self.remainder) if self.remainder is not None else None,
        }


def _y_leading_constant(C: PlanarPoly) -> Optional[Fraction]:
    top = C.degree_in("y")
    if top <= 0:
        return None
    leading = [(m, c) for m, c in C.items() if m[1] == top]
    if len(leading) != 1 or leading[0][0] != (0, top) or not leading[0][1].is_constant:
        return None
    return leading[0][1].constant_value()


def _divide_in_y(F: PlanarPoly, C: PlanarPoly, lead: Fraction) -> Tuple[PlanarPoly, PlanarPoly]:
    top = C.degree_in("y")
    quotient = PlanarPoly(names=F.names)
    remainder = F
    while not remainder.is_zero and remainder.degree_in("y") >= top:
        j = remainder.degree_in("y")
        step = PlanarPoly({(i, jj - top): c for (i, jj), c in remainder.items() if jj == j},
                          remainder.names).scale(1 / lead)
        quotient = quotient + step
        remainder = remainder - step * C
    return quotient, remainder


def _divide_graded(F: PlanarPoly, C: PlanarPoly) -> Tuple[PlanarPoly, PlanarPoly]:
    (li, lj), lc = C.items()[0]
    scale = 1 / lc.constant_value()
    quotient = PlanarPoly(names=F.names)
    remainder = PlanarPoly(names=F.names)
    rest = F
    while not rest.is_zero:
        (i, j), c = rest.items()[0]
        if i >= li and j >= lj:
            step = PlanarPoly.monomial(i - li, j - lj, c.scale(scale), F.names)
            quotient = quotient + step
            rest = rest - step * C
        else:
            lead = PlanarPoly.monomial(i, j, c, F.names)
            remainder = remainder + lead
            rest = rest - lead
    return quotient, remainder


def cofactor(system: PlanarSystem, C: PlanarPoly) -> CofactorResult:
    if C.is_zero:
        raise ZeroCurve("the zero polynomial does not define a curve")
    if C.degree() < 1:
        raise ZeroCurve("a constant does not define a curve")
    C = C.with_names(system.params) if set(C.free_symbols) <= set(system.params) else C
    dC = lie_derivative(system, C)
    lead = _y_leading_constant(C)
    if lead is not None:
        strategy = "y"
        quotient, remainder = _divide_in_y(dC, C, lead)
    elif C.items()[0][1].is_constant:
        strategy = "graded"
        quotient, remainder = _divide_graded(dC, C)
    else:
        raise NonMonicUndividable("leading coefficient of {0} is not a rational constant in y or in "
                                  "graded order".format(C))
    logger.debug("cofactor of %s by %s division: quotient %s, remainder %s", C, strategy, quotient, remainder)
    if not remainder.is_zero:
        return CofactorResult(False, None, remainder, strategy)
    if not (dC - C * quotient).is_zero:
        raise ResidualNotZero("cofactor reconstruction failed for {0}".format(C))
    return CofactorResult(True, quotient, None, strategy)


class DulacResult:
    """div(X / C) = numerator / C^denominator_power"""

    def __init__(self, numerator: PlanarPoly, denominator_power: int, kappa: Optional[ParamPoly]):
        self.numerator = numerator
        self.denominator_power = denominator_power
        self.kappa = kappa

    @property
    def is_constant(self) -> bool:
        return self.kappa is not None

    def as_dict(self):
        return {
            "numerator": str(self.numerator),
            "denominator_power": self.denominator_power,
            "is_constant": self.is_constant,
            "constant": str(self.kappa) if self.kappa is not None else None,
        }


def _constant_ratio(numerator: PlanarPoly, C2: PlanarPoly) -> Optional[ParamPoly]:
    if numerator.is_zero:
        return ParamPoly.zero(numerator.names)
    if numerator.degree() != C2.degree():
        return None
    monom, lead = C2.items()[0]
    top = numerator.coeff(*monom)
    try:
        if lead.is_constant:
            kappa = top.scale(1 / lead.constant_value())
        else:
            kappa = top.exquo(lead)
    except ExactQuotientFailed:
        return None
    if (numerator - C2 * kappa).is_zero:
        return kappa
    return None


def dulac_divergence(system: PlanarSystem, C: PlanarPoly) -> DulacResult:
    if C.is_zero:
        raise ZeroCurve("the zero polynomial cannot be a Dulac denominator")
    numerator = C * system.divergence() - lie_derivative(system, C)
    kappa = _constant_ratio(numerator, C * C)
    return DulacResult(numerator, 2, kappa)


class SymmetryReport:
    def __init__(self, x_axis_reversible: bool, y_axis_reversible: bool):
        self.x_axis_reversible = x_axis_reversible
        self.y_axis_reversible = y_axis_reversible

    @property
    def center(self) -> bool:
        return self.x_axis_reversible or self.y_axis_reversible

    def as_dict(self):
        return {"x_axis_reversible": self.x_axis_reversible,
                "y_axis_reversible": self.y_axis_reversible,
                "center": self.center}


def symmetry_center_check(system: PlanarSystem) -> SymmetryReport:
    lyapunov_l0(system)
    P, Q = system.P, system.Q
    x_axis = P.reflect(1, -1) == -P and Q.reflect(1, -1) == Q
    y_axis = P.reflect(-1, 1) == P and Q.reflect(-1, 1) == -Q
    return SymmetryReport(x_axis, y_axis)


def rif_check(system: PlanarSystem, V: PlanarPoly) -> PlanarPoly:
    """P V_x + Q V_y - (P_x + Q_y) V; zero iff V is a reciprocal integrating factor"""
    if V.is_zero:
        raise ZeroCurve("the zero polynomial is not a reciprocal integrating factor")
    return lie_derivative(system, V) - system.divergence() * V
