"""Planar systems, the Kukles families and the classical center conditions"""
import logging
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .algebra import ParamPoly, PlanarPoly, _unify_names, rat, normalize_bindings
from .exception import BadIndex, NotPerturbationOfLinearCenter, NonlinearInEps, UnknownSymbol

logger = logging.getLogger(__name__)


class PlanarSystem:
    """x' = P(x, y), y' = Q(x, y) with coefficients in Q[params]"""

    def __init__(self, P: PlanarPoly, Q: PlanarPoly, params: Sequence[str] = None,
                 perturbation_params: Sequence[str] = ()):
        if params is None:
            params = _unify_names(P.names, Q.names)
        params = tuple(params)
        for name in tuple(P.free_symbols) + tuple(Q.free_symbols):
            if name not in params:
                raise UnknownSymbol(name, params)
        for name in perturbation_params:
            if name not in params:
                raise UnknownSymbol(name, params)
        self._P = P.with_names(params)
        self._Q = Q.with_names(params)
        self._params = params
        self._perturbation_params = tuple(perturbation_params)

    @property
    def P(self) -> PlanarPoly:
        return self._P

    @property
    def Q(self) -> PlanarPoly:
        return self._Q

    @property
    def params(self) -> Tuple[str, ...]:
        return self._params

    @property
    def perturbation_params(self) -> Tuple[str, ...]:
        return self._perturbation_params

    @property
    def free_symbols(self) -> Tuple[str, ...]:
        used = set(self._P.free_symbols) | set(self._Q.free_symbols)
        return tuple(n for n in self._params if n in used)

    @property
    def is_numeric(self) -> bool:
        return not self.free_symbols

    def degree(self) -> int:
        return max(self._P.degree(), self._Q.degree())

    def linear_part(self) -> Tuple[Tuple[ParamPoly, ParamPoly], Tuple[ParamPoly, ParamPoly]]:
        """Jacobian at the origin as ((P_x, P_y), (Q_x, Q_y))"""
        return ((self._P.coeff(1, 0), self._P.coeff(0, 1)),
                (self._Q.coeff(1, 0), self._Q.coeff(0, 1)))

    def divergence(self) -> PlanarPoly:
        return self._P.diff("x") + self._Q.diff("y")

    def substitute(self, bindings) -> "PlanarSystem":
        bindings = normalize_bindings(bindings)
        if not bindings:
            return self
        for name, _ in bindings:
            if name not in self._params:
                raise UnknownSymbol(name, self._params)
        P = self._P.substitute(bindings)
        Q = self._Q.substitute(bindings)
        params = _unify_names(self._params, _unify_names(P.names, Q.names))
        return PlanarSystem(P, Q, params, self._perturbation_params)

    def bind(self, point: Mapping[str, object]) -> "PlanarSystem":
        for name in point:
            if name not in self._params:
                raise UnknownSymbol(name, self._params)
        return self.substitute([(n, rat(v)) for n, v in point.items()])

    def render(self) -> str:
        lines = ["params: " + ", ".join(self._params) if self._params else "params:",
                 "dx = " + str(self._P),
                 "dy = " + str(self._Q)]
        if self._perturbation_params:
            lines.append("perturb: " + ", ".join(self._perturbation_params))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, PlanarSystem):
            return NotImplemented
        return self._P == other._P and self._Q == other._Q and \
            self._params == other._params and \
            self._perturbation_params == other._perturbation_params

    def __hash__(self):
        return hash((self._P, self._Q, self._params))

    def __str__(self):
        return "x' = {0}\ny' = {1}".format(self._P, self._Q)


class PerturbedSystem:
    """x' = H_y + eps*f1, y' = -H_x + eps*g1 with H = (x^2 + y^2)/2.

    ``reverse_time`` records whether the stored field is the time reversal of
    the system it was built from.
    """

    def __init__(self, f1: PlanarPoly, g1: PlanarPoly, params: Sequence[str] = (),
                 eps_params: Sequence[str] = (), reverse_time: bool = True):
        params = tuple(params)
        self.f1 = f1.with_names(_unify_names(params, f1.names))
        self.g1 = g1.with_names(_unify_names(params, g1.names))
        self.params = _unify_names(params, _unify_names(self.f1.names, self.g1.names))
        self.f1 = self.f1.with_names(self.params)
        self.g1 = self.g1.with_names(self.params)
        self.eps_params = tuple(eps_params)
        self.reverse_time = reverse_time

    @property
    def H(self) -> PlanarPoly:
        return PlanarPoly({(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)}, self.params)

    @property
    def vanishes_at_origin(self) -> bool:
        return self.f1.coeff(0, 0).is_zero and self.g1.coeff(0, 0).is_zero

    def omega(self) -> Tuple[PlanarPoly, PlanarPoly]:
        """the one-form g1 dx - f1 dy as its (dx, dy) components"""
        return self.g1, -self.f1

    def assemble(self, eps=1) -> PlanarSystem:
        """rebuild the original (not time reversed) system"""
        x = PlanarPoly.x(self.params)
        y = PlanarPoly.y(self.params)
        f1, g1 = self.f1.scale(eps), self.g1.scale(eps)
        if self.reverse_time:
            P, Q = -(y + f1), -(-x + g1)
        else:
            P, Q = -y + f1, x + g1
        return PlanarSystem(P, Q, self.params)

    def substitute(self, bindings) -> "PerturbedSystem":
        return PerturbedSystem(self.f1.substitute(bindings), self.g1.substitute(bindings),
                               self.params, self.eps_params, self.reverse_time)

    def bind(self, point: Mapping[str, object]) -> "PerturbedSystem":
        return PerturbedSystem(self.f1.bind(point), self.g1.bind(point), self.params,
                               self.eps_params, self.reverse_time)

    @property
    def is_numeric(self) -> bool:
        return not (self.f1.free_symbols or self.g1.free_symbols)

    def __str__(self):
        return "H = (x^2 + y^2)/2, f1 = {0}, g1 = {1}, reverse_time = {2}".format(
            self.f1, self.g1, self.reverse_time)


def _split_eps(coeff: ParamPoly, eps_params: Sequence[str]) -> Tuple[ParamPoly, ParamPoly]:
    """split a coefficient into its eps^0 and eps^1 parts"""
    names = coeff.names
    idx = [names.index(n) for n in eps_params if n in names]
    order0, order1 = {}, {}
    for monom, value in coeff.terms():
        weight = sum(monom[i] for i in idx)
        if weight == 0:
            order0[monom] = value
        elif weight == 1:
            order1[monom] = value
        else:
            raise NonlinearInEps("coefficient {0} is of degree {1} in the perturbation parameters".format(
                coeff, weight))
    return ParamPoly.from_terms(order0, names), ParamPoly.from_terms(order1, names)


def eps_rescale(system: PlanarSystem, eps_params: Sequence[str] = None,
                reverse_time: bool = True) -> PerturbedSystem:
    if eps_params is None:
        eps_params = system.perturbation_params or system.params
    eps_params = tuple(eps_params)
    for name in eps_params:
        if name not in system.params:
            raise UnknownSymbol(name, system.params)
    parts = {}
    for label, poly in (("P", system.P), ("Q", system.Q)):
        zero, one = {}, {}
        for monom, coeff in poly.items():
            zero[monom], one[monom] = _split_eps(coeff, eps_params)
        parts[label] = PlanarPoly(zero, system.params), PlanarPoly(one, system.params)
    x = PlanarPoly.x(system.params)
    y = PlanarPoly.y(system.params)
    P0, P1 = parts["P"]
    Q0, Q1 = parts["Q"]
    if P0 != -y or Q0 != x:
        raise NotPerturbationOfLinearCenter(
            "unperturbed part is x' = {0}, y' = {1}, expected x' = -y, y' = x".format(P0, Q0))
    if reverse_time:
        f1, g1 = -P1, -Q1
    else:
        f1, g1 = P1, Q1
    perturbed = PerturbedSystem(f1, g1, system.params, eps_params, reverse_time)
    if not perturbed.vanishes_at_origin:
        logger.warning("perturbation does not vanish at the origin: f1(0,0) = %s, g1(0,0) = %s",
                       perturbed.f1.coeff(0, 0), perturbed.g1.coeff(0, 0))
    return perturbed


def _coefficient(value, default_name: str) -> ParamPoly:
    if value is None:
        return ParamPoly.symbol(default_name)
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.const(rat(value))


def _family(Q: PlanarPoly, coeffs) -> PlanarSystem:
    params = ()
    for coeff in coeffs:
        params = _unify_names(params, coeff.free_symbols)
    return PlanarSystem(-PlanarPoly.y(params), Q, params)


CUBIC_MONOMIALS = ((2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))


def kukles_cubic(*coeffs) -> PlanarSystem:
    """x' = -y, y' = x + a1 x^2 + a2 xy + a3 y^2 + a4 x^3 + a5 x^2 y + a6 xy^2 + a7 y^3"""
    if not coeffs:
        coeffs = (None,) * 7
    if len(coeffs) != 7:
        raise BadIndex("the cubic Kukles family takes 7 coefficients, got {0}".format(len(coeffs)))
    coeffs = [_coefficient(c, "a{0}".format(i + 1)) for i, c in enumerate(coeffs)]
    Q = PlanarPoly.x()
    for (i, j), coeff in zip(CUBIC_MONOMIALS, coeffs):
        Q = Q + PlanarPoly.monomial(i, j, coeff)
    return _family(Q, coeffs)


def kukles_deg4(a=None, b=None, c=None) -> PlanarSystem:
    """x' = -y, y' = x + y (x^2 + y^2 - 1)(a x + b y + c)"""
    a, b, c = _coefficient(a, "a"), _coefficient(b, "b"), _coefficient(c, "c")
    x, y = PlanarPoly.x(), PlanarPoly.y()
    Q = x + y * (x ** 2 + y ** 2 - 1) * (x * a + y * b + c)
    return _family(Q, (a, b, c))


def odd_coeff_name(i2: int, j2: int) -> str:
    if i2 < 10 and j2 < 10:
        return "b{0}{1}".format(i2, j2)
    return "b{0}_{1}".format(i2, j2)


def odd_keys(n: int):
    """(2i, 2j) index pairs of the odd family, b00 first then by total degree"""
    keys = []
    for k in range(n + 1):
        for i in range(k, -1, -1):
            keys.append((2 * i, 2 * (k - i)))
    return keys


def check_odd_keys(n: int, keys) -> None:
    if not isinstance(n, int) or n < 1:
        raise BadIndex("n must be a positive integer, got {0!r}".format(n))
    for key in keys:
        i2, j2 = key
        if i2 < 0 or j2 < 0 or i2 % 2 or j2 % 2:
            raise BadIndex("index {0} must be a pair of even non-negative integers".format(key))
        if (i2 + j2) // 2 > n:
            raise BadIndex("index {0} exceeds i + j <= {1}".format(key, n))


def kukles_odd(n: int, b: Optional[Mapping[Tuple[int, int], object]] = None) -> PlanarSystem:
    """x' = -y, y' = x + y (1 - x^2 - y^2) sum b_{2i,2j} x^{2i} y^{2j}, degree 2n + 3"""
    if b is None:
        check_odd_keys(n, [])
        b = {key: None for key in odd_keys(n)}
    check_odd_keys(n, b.keys())
    coeffs = {key: _coefficient(value, odd_coeff_name(*key)) for key, value in b.items()}
    ordered = [coeffs[key] for key in odd_keys(n) if key in coeffs]
    x, y = PlanarPoly.x(), PlanarPoly.y()
    inner = PlanarPoly()
    for (i2, j2), coeff in coeffs.items():
        inner = inner + PlanarPoly.monomial(i2, j2, coeff)
    Q = x + y * (1 - x ** 2 - y ** 2) * inner
    return _family(Q, ordered)


class KuklesConditionReport:
    def __init__(self, lambda_k, k_alpha, k_beta, k_gamma, k_delta, satisfied: Dict[str, bool],
                 jin_wang_branch: Optional[str]):
        self.lambda_k = lambda_k
        self.k_alpha = k_alpha
        self.k_beta = k_beta
        self.k_gamma = k_gamma
        self.k_delta = k_delta
        self.satisfied = satisfied
        self.jin_wang_branch = jin_wang_branch

    @property
    def any(self) -> bool:
        return any(self.satisfied.values())

    def as_dict(self):
        return {
            "lambda": str(self.lambda_k),
            "k_alpha": str(self.k_alpha),
            "k_beta": str(self.k_beta),
            "k_gamma": str(self.k_gamma),
            "k_delta": str(self.k_delta),
            "satisfied": dict(self.satisfied),
            "jin_wang_branch": self.jin_wang_branch,
        }


def kukles_conditions(a1, a2, a3, a4, a5, a6, a7) -> KuklesConditionReport:
    a1, a2, a3, a4, a5, a6, a7 = [v if isinstance(v, ParamPoly) else ParamPoly.const(rat(v))
                                  for v in (a1, a2, a3, a4, a5, a6, a7)]
    lam = a2 * a3 + a7 * 3
    k_alpha = a4 * a2 ** 2 + a5 * lam
    k_beta = (a7 * lam * 3 + lam ** 2 + a6 * a2 ** 2) * a5 - a7 * lam ** 2 * 3 - a6 * a2 ** 2 * lam
    k_gamma = lam + a1 * a2 + a5
    k_delta = a6 * a2 ** 2 * 9 + a4 ** 2 * 2 + lam ** 2 * 9 + a7 * lam * 27

    def zero(*values):
        return all(v.is_zero for v in values)

    jin_wang = zero(a2, a6, a3 + a1 * 2, a5 + a7 * 3, a7 ** 2 - a4 ** 2, a4 * 3 + a1 ** 2)
    branch = None
    if jin_wang:
        plus, minus = zero(a7 - a4), zero(a7 + a4)
        branch = "a7=a4=0" if plus and minus else ("a7=a4" if plus else "a7=-a4")
    satisfied = {
        "K1": zero(k_alpha, k_beta, k_gamma, a7),
        "K2": zero(a7, a2, a5),
        "K3": zero(a7, a5, a3, a1),
        "K4": zero(k_alpha, k_beta, k_gamma, k_delta),
        "JinWang": jin_wang,
    }
    return KuklesConditionReport(lam, k_alpha, k_beta, k_gamma, k_delta, satisfied, branch)
