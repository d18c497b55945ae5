"""Focal values and Lyapunov quantities.

The Lyapunov series ``V = (x^2 + y^2)/2 + V3 + V4 + ...`` is built degree by
degree so that ``dV/dt`` reduces to ``sum eta_k (x^2 + y^2)^(k/2)``. Every
degree is one rational linear solve against the rotation operator
``-y d/dx + x d/dy``.
"""
import functools
import logging
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .algebra import ParamPoly, PlanarPoly, normalize_bindings
from .exception import BadIndex, NonzeroLinearTrace, NotCenterFocus, ResidualNotZero, \
    SubstitutionDoesNotVanish, UnboundSymbol, UnsolvableStep, WrongLinearPart
from .sysdef import PlanarSystem

logger = logging.getLogger(__name__)


def rotation_operator(V: PlanarPoly) -> PlanarPoly:
    """-y dV/dx + x dV/dy"""
    x, y = PlanarPoly.x(V.names), PlanarPoly.y(V.names)
    return x * V.diff("y") - y * V.diff("x")


def radius_power(k: int, names: Sequence[str] = ()) -> PlanarPoly:
    """(x^2 + y^2)^(k/2) for even k"""
    return PlanarPoly({(k - m, m): comb(k // 2, m // 2) for m in range(0, k + 1, 2)}, names)


@functools.lru_cache(maxsize=None)
def _rotation_inverse(k: int) -> Tuple[Tuple[int, ...], Tuple[Tuple[Fraction, ...], ...]]:
    """inverse rotation on degree k in the gauge where V_k has no x^k term (even k)"""
    # unknowns are the coefficients of x^(k-i) y^i; the pinned x^k column carries eta_k
    n = k + 1
    even = k % 2 == 0
    columns = tuple(range(1, n)) if even else tuple(range(n))
    rows = [[QQ.zero] * n for _ in range(n)]
    for col, i in enumerate(columns):
        if i < k:
            rows[i + 1][col] = QQ(-(k - i))
        if i > 0:
            rows[i - 1][col] = QQ(i)
    if even:
        for m in range(0, n, 2):
            rows[m][n - 1] = QQ(-comb(k // 2, m // 2))
    inverse = DomainMatrix(rows, (n, n), QQ).inv().to_Matrix()
    table = tuple(tuple(Fraction(int(inverse[r, c].p), int(inverse[r, c].q)) for c in range(n))
                  for r in range(n))
    return columns, table


def solve_rotation(k: int, rhs: PlanarPoly) -> Tuple[PlanarPoly, ParamPoly]:
    """solve -y V_x + x V_y - eta (x^2 + y^2)^(k/2) = rhs on degree k.

    eta is zero for odd k.
    """
    if k < 1:
        raise BadIndex("degree must be positive, got {0}".format(k))
    names = rhs.names
    columns, inverse = _rotation_inverse(k)
    b = [rhs.coeff(k - m, m) for m in range(k + 1)]
    unknowns = []
    for row in inverse:
        total = ParamPoly.zero(names)
        for weight, value in zip(row, b):
            if weight and not value.is_zero:
                total = total + value.scale(weight)
        unknowns.append(total)
    V = PlanarPoly({(k - i, i): unknowns[col] for col, i in enumerate(columns)}, names)
    eta = unknowns[-1] if k % 2 == 0 else ParamPoly.zero(names)
    return V, eta


def lyapunov_l0(system: PlanarSystem) -> ParamPoly:
    """half the trace of the linearization at the origin"""
    if not (system.P.coeff(0, 0).is_zero and system.Q.coeff(0, 0).is_zero):
        raise NotCenterFocus("the origin is not a singular point")
    (px, py), (qx, qy) = system.linear_part()
    if not (py == -1 and qx == 1):
        raise NotCenterFocus("linear part is not of center-focus type: off-diagonal entries are {0}, {1}".format(
            py, qx))
    return (px + qy).scale(Fraction(1, 2))


def _nonlinear_parts(system: PlanarSystem) -> Tuple[Dict[int, PlanarPoly], Dict[int, PlanarPoly]]:
    P, Q = system.P, system.Q
    if not (P.coeff(0, 0).is_zero and Q.coeff(0, 0).is_zero):
        raise WrongLinearPart("the origin is not a singular point")
    (px, py), (qx, qy) = system.linear_part()
    trace = px + qy
    if not trace.is_zero:
        raise NonzeroLinearTrace(trace.scale(Fraction(1, 2)))
    if not (px.is_zero and py == -1 and qx == 1):
        raise WrongLinearPart("linear part must be x' = -y, y' = x; got x' = {0}*x + {1}*y, "
                              "y' = {2}*x + {3}*y".format(px, py, qx, qy))
    p_parts, q_parts = {}, {}
    for m in range(2, system.degree() + 1):
        p_parts[m] = P.homogeneous_part(m)
        q_parts[m] = Q.homogeneous_part(m)
    return p_parts, q_parts


class LyapunovCertificate:
    def __init__(self, system: PlanarSystem, V_parts: Dict[int, PlanarPoly], etas: Dict[int, ParamPoly],
                 max_eta: int):
        self.system = system
        self.V_parts = V_parts
        self.etas = etas
        self.max_eta = max_eta

    def eta(self, k: int) -> ParamPoly:
        if k % 2 or k < 2 or k > self.max_eta:
            raise BadIndex("eta_{0} is not part of this certificate".format(k))
        return self.etas[k]

    def quantity(self, k: int) -> ParamPoly:
        """L(k), the focal value eta_(2k+2)"""
        return self.eta(2 * k + 2)

    @property
    def V(self) -> PlanarPoly:
        total = PlanarPoly(names=self.system.params)
        for part in self.V_parts.values():
            total = total + part
        return total

    def residual(self) -> PlanarPoly:
        """dV/dt - sum eta_k r^k, truncated at degree max_eta"""
        N = self.max_eta
        V = self.V
        P, Q = self.system.P, self.system.Q
        dV = V.diff("x").mul_truncated(P, N) + V.diff("y").mul_truncated(Q, N)
        for k, eta in self.etas.items():
            if not eta.is_zero:
                dV = dV - radius_power(k, self.system.params) * eta
        return dV.truncate(N)

    def residual_ok(self) -> bool:
        return self.residual().is_zero


def focal_values(system: PlanarSystem, max_eta: int) -> LyapunovCertificate:
    if max_eta < 2 or max_eta % 2:
        raise BadIndex("max_eta must be an even integer >= 2, got {0}".format(max_eta))
    p_parts, q_parts = _nonlinear_parts(system)
    names = system.params
    V_parts = {2: PlanarPoly({(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)}, names)}
    etas = {2: ParamPoly.zero(names)}
    for k in range(3, max_eta + 1):
        R = PlanarPoly(names=names)
        for j in range(2, k):
            m = k - j + 1
            if m not in p_parts:
                continue
            Vj = V_parts[j]
            if not p_parts[m].is_zero:
                R = R + Vj.diff("x") * p_parts[m]
            if not q_parts[m].is_zero:
                R = R + Vj.diff("y") * q_parts[m]
        V_parts[k], eta = solve_rotation(k, -R)
        if k % 2 == 0:
            etas[k] = eta
            logger.debug("eta_%d = %s", k, eta)
    certificate = LyapunovCertificate(system, V_parts, etas, max_eta)
    residual = certificate.residual()
    if not residual.is_zero:
        raise ResidualNotZero("Lyapunov residual does not vanish up to degree {0}: {1}".format(max_eta, residual))
    return certificate


class LyapunovQuantity:
    """L(k) split into positive rational content and primitive part"""

    def __init__(self, k: int, value: ParamPoly):
        self.k = k
        self.value = value
        if value.is_zero:
            self.content, self.primitive = Fraction(0), value
            self.even_factor = {}
        else:
            self.content, self.primitive = value.content_and_primitive()
            # reported, never divided out
            self.even_factor = {n: e for n, e in self.primitive.monomial_factor().items() if e % 2 == 0}

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero

    def as_dict(self):
        result = {"k": self.k,
                  "content": "{0}".format(self.content),
                  "primitive": str(self.primitive)}
        if self.even_factor:
            result["even_factor"] = dict(self.even_factor)
        return result

    def __str__(self):
        if self.is_zero:
            return "L({0}) = 0".format(self.k)
        return "L({0}) = {1} * ({2})".format(self.k, self.content, self.primitive)


class ChainStep:
    """bindings expected to annihilate L(index).

    ``index=None`` marks a plain specialization, after which the last
    quantity is reported again. ``solve_for`` derives a linear binding for
    that symbol from L(index) instead of taking explicit bindings.
    """

    def __init__(self, index: Optional[int], bindings=(), solve_for: Optional[str] = None):
        if index is not None and index < 0:
            raise BadIndex("chain index must be non-negative, got {0}".format(index))
        if solve_for is not None and index is None:
            raise BadIndex("solve_for needs the index of the quantity to solve")
        self.index = index
        self.bindings = bindings
        self.solve_for = solve_for

    def resolve(self, system: PlanarSystem) -> List[Tuple[str, ParamPoly]]:
        if isinstance(self.bindings, str):
            from .parser import parse_bindings
            return parse_bindings(self.bindings, system.params)
        return normalize_bindings(self.bindings)

    def __repr__(self):
        return "ChainStep({0!r}, {1!r}, solve_for={2!r})".format(self.index, self.bindings, self.solve_for)


def solve_linear_binding(quantity: ParamPoly, name: str) -> ParamPoly:
    """value of ``name`` that annihilates ``quantity``, which must be linear in it
    once monomial factors free of ``name`` are divided out"""
    factor = quantity.monomial_factor()
    factor.pop(name, None)
    reduced = quantity.divide_monomial(factor)
    if reduced.degree_in(name) != 1:
        raise UnsolvableStep("{0} is not linear in {1}".format(quantity, name))
    slope = reduced.coeff_in(name, 1)
    if not slope.is_constant:
        raise UnsolvableStep("coefficient of {0} in {1} is not a rational constant".format(name, quantity))
    return reduced.coeff_in(name, 0).scale(-1 / slope.constant_value())


class FocalSequence:
    def __init__(self, l0: ParamPoly):
        self.l0 = l0
        self.quantities: List[LyapunovQuantity] = [LyapunovQuantity(0, l0)]
        self.substitutions: List[Tuple[Optional[int], List[Tuple[str, ParamPoly]]]] = []
        self.certificate: Optional[LyapunovCertificate] = None
        self.system: Optional[PlanarSystem] = None

    @property
    def L(self) -> List[LyapunovQuantity]:
        return self.quantities

    @property
    def etas(self) -> Dict[int, ParamPoly]:
        return self.certificate.etas if self.certificate else {}

    @property
    def residual_ok(self) -> bool:
        return self.certificate is None or self.certificate.residual_ok()

    @property
    def last(self) -> LyapunovQuantity:
        return self.quantities[-1]

    def as_dict(self):
        return {
            "l0": str(self.l0),
            "quantities": [q.as_dict() for q in self.quantities],
            "substitutions": [{"index": index, "bindings": {n: str(v) for n, v in bindings}}
                              for index, bindings in self.substitutions],
            "residual_ok": self.residual_ok,
        }


def _check_l0(system: PlanarSystem):
    l0 = lyapunov_l0(system)
    if not l0.is_zero:
        raise SubstitutionDoesNotVanish(0, l0)


def _check_vanishing(certificate: LyapunovCertificate, index: int):
    for k in range(1, index + 1):
        value = certificate.quantity(k)
        if not value.is_zero:
            raise SubstitutionDoesNotVanish(k, value)


def _report(system: PlanarSystem, k: int):
    if k == 0:
        return None, LyapunovQuantity(0, lyapunov_l0(system))
    certificate = focal_values(system, 2 * k + 2)
    return certificate, LyapunovQuantity(k, certificate.quantity(k))


def lyapunov_chain(system: PlanarSystem, steps: Sequence[Union[ChainStep, Tuple]] = (),
                   max_order: Optional[int] = None) -> FocalSequence:
    """replay a substitution chain, reporting L(k) after every step.

    With ``max_order`` the sequence keeps going after the last step while the
    reported quantities vanish, up to L(max_order).
    """
    sequence = FocalSequence(lyapunov_l0(system))
    current = system
    k = 0
    for step in steps:
        if not isinstance(step, ChainStep):
            step = ChainStep(*step)
        if step.solve_for is not None:
            if sequence.last.k != step.index:
                _, quantity = _report(current, step.index)
            else:
                quantity = sequence.last
            bindings = [(step.solve_for, solve_linear_binding(quantity.value, step.solve_for))]
        else:
            bindings = step.resolve(current)
        current = current.substitute(bindings)
        sequence.substitutions.append((step.index, bindings))
        logger.debug("chain step %s: %s", step.index, ", ".join("{0} = {1}".format(n, v) for n, v in bindings))
        if step.index is not None:
            _check_l0(current)
            k = step.index + 1
        certificate, quantity = _report(current, k)
        if step.index is not None:
            _check_vanishing(certificate, step.index)
        if certificate is not None:
            sequence.certificate = certificate
        sequence.quantities.append(quantity)
        logger.info("%s", quantity)

    sequence.system = current
    if max_order is not None and max_order > k and sequence.last.is_zero:
        certificate = focal_values(current, 2 * max_order + 2)
        sequence.certificate = certificate
        for j in range(k + 1, max_order + 1):
            quantity = LyapunovQuantity(j, certificate.quantity(j))
            sequence.quantities.append(quantity)
            if not quantity.is_zero:
                break
    return sequence


class CenterUpTo:
    def __init__(self, max_k: int):
        self.max_k = max_k

    def __eq__(self, other):
        return isinstance(other, CenterUpTo) and other.max_k == self.max_k

    def __hash__(self):
        return hash(("CenterUpTo", self.max_k))

    def __repr__(self):
        return "CenterUpTo({0})".format(self.max_k)


def weak_focus_order(system: PlanarSystem, max_k: int) -> Union[int, CenterUpTo]:
    if not system.is_numeric:
        raise UnboundSymbol(system.free_symbols)
    if max_k < 1:
        raise BadIndex("max_k must be positive, got {0}".format(max_k))
    certificate = focal_values(system, 2 * max_k + 2)
    for k in range(1, max_k + 1):
        if not certificate.quantity(k).is_zero:
            return k
    return CenterUpTo(max_k)
