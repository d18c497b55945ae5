"""Melnikov functions for perturbations of the harmonic center.

Orbits of ``H = (x^2 + y^2)/2`` are parameterized as
``x = sqrt(2h) cos t, y = -sqrt(2h) sin t``, so every integral reduces to
Wallis integrals and comes out as a polynomial in h times pi.
"""
import functools
import logging
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ, Poly, Rational, Symbol, gamma, pi, simplify
from sympy.polys.matrices import DomainMatrix

from .algebra import HPiPoly, ParamPoly, PlanarPoly, _qq, rat
from .exception import BadIndex, DecompositionNotFound, DimensionMismatch, FirstOrderNotZero, \
    HalfPowerResidue, NonzeroConstantTerm, UnboundSymbol, UnsupportedPoleOrder, ZeroPolynomial
from .sysdef import PerturbedSystem, check_odd_keys, odd_coeff_name, odd_keys

logger = logging.getLogger(__name__)

ORBIT = "x = sqrt(2h)*cos(t), y = -sqrt(2h)*sin(t)"
ANSATZ_EXTRA_DEGREE = 4


@functools.lru_cache(maxsize=None)
def wallis(m: int, n: int) -> Fraction:
    """integral of cos^m(t) sin^n(t) over [0, 2 pi], as a rational multiple of pi"""
    if m < 0 or n < 0:
        raise BadIndex("exponents must be non-negative, got ({0}, {1})".format(m, n))
    if m % 2 or n % 2:
        return Fraction(0)
    value = simplify(2 * gamma(Rational(m + 1, 2)) * gamma(Rational(n + 1, 2)) /
                     gamma(Rational(m + n, 2) + 1) / pi)
    return Fraction(int(value.p), int(value.q))


class TrigPoly:
    """sum of c * cos^m(t) * sin^n(t) * sqrt(2h)^e"""

    def __init__(self, terms: Dict[Tuple[int, int, int], ParamPoly], names: Sequence[str]):
        self.terms = terms
        self.names = tuple(names)

    @classmethod
    def on_orbit(cls, F: PlanarPoly) -> "TrigPoly":
        terms = {}
        for (i, j), coeff in F.items():
            terms[(i, j, i + j)] = -coeff if j % 2 else coeff
        return cls(terms, F.names)

    def integrate(self) -> HPiPoly:
        """integral over one period; half powers of h must cancel"""
        coeffs: Dict[int, ParamPoly] = {}
        for (m, n, e), coeff in self.terms.items():
            weight = wallis(m, n)
            if not weight:
                continue
            if e % 2:
                raise HalfPowerResidue("term cos^{0} sin^{1} carries sqrt(2h)^{2}".format(m, n, e))
            k = e // 2
            value = coeff.scale(weight * 2 ** k)
            coeffs[k] = coeffs[k] + value if k in coeffs else value
        return HPiPoly(coeffs, 1, self.names)


def orbit_integral(F: PlanarPoly) -> HPiPoly:
    """integral of F over [0, 2 pi] along the energy level h"""
    return TrigPoly.on_orbit(F).integrate()


def orbit_flux(ps: PerturbedSystem) -> PlanarPoly:
    """f1 H_x + g1 H_y, the rate of change of H along the perturbation"""
    x, y = PlanarPoly.x(ps.params), PlanarPoly.y(ps.params)
    return x * ps.f1 + y * ps.g1


class MelnikovResult:
    def __init__(self, M: HPiPoly, order: int, reverse_time: bool, decomposition=None):
        if not M.coeff(0).is_zero:
            raise NonzeroConstantTerm("M({0}) has constant term {1}".format(order, M.coeff(0)))
        self.M = M
        self.order = order
        self.reverse_time = reverse_time
        self.decomposition = decomposition

    @property
    def displacement_sign(self) -> int:
        """sign relating M to the energy gained by the original system"""
        return -1 if self.reverse_time else 1

    @property
    def sign_convention(self):
        return {"orbit": ORBIT, "reverse_time": self.reverse_time,
                "displacement_sign": self.displacement_sign}

    def as_dict(self, roots=None):
        result = {"order": self.order, "M": str(self.M),
                  "b": [str(b) for b in b_coeffs(self.M).as_hpi()],
                  "sign_convention": self.sign_convention}
        if roots is not None:
            result["roots"] = [r.as_dict() for r in roots]
        if self.decomposition is not None:
            result["decomposition"] = self.decomposition.as_dict()
        return result

    def __str__(self):
        return "M{0}(h) = {1}".format(self.order, self.M)


def melnikov1(ps: PerturbedSystem) -> MelnikovResult:
    M = orbit_integral(orbit_flux(ps))
    logger.debug("M1 = %s", M)
    return MelnikovResult(M, 1, ps.reverse_time)


def closed_form_coefficient(i: int, j: int) -> Fraction:
    """(2i)! (2j)! (2j+1) / (2^(i+j-1) i! j! (i+j+1)!)"""
    num = factorial(2 * i) * factorial(2 * j) * (2 * j + 1) * 2
    den = 2 ** (i + j) * factorial(i) * factorial(j) * factorial(i + j + 1)
    return Fraction(num, den)


def melnikov1_closed_form(n: int, b: Optional[Mapping[Tuple[int, int], object]] = None) -> HPiPoly:
    """h (2h - 1) (sum c_ij b_(2i,2j) h^(i+j)) pi for the odd Kukles family"""
    if b is None:
        check_odd_keys(n, [])
        b = {key: None for key in odd_keys(n)}
    check_odd_keys(n, b.keys())
    inner: Dict[int, ParamPoly] = {}
    names: Tuple[str, ...] = ()
    for (i2, j2), value in b.items():
        if value is None:
            value = ParamPoly.symbol(odd_coeff_name(i2, j2))
        elif not isinstance(value, ParamPoly):
            value = ParamPoly.const(rat(value))
        names = names + tuple(s for s in value.names if s not in names)
        k = (i2 + j2) // 2
        term = value.scale(closed_form_coefficient(i2 // 2, j2 // 2))
        inner[k] = inner[k] + term if k in inner else term
    return HPiPoly({1: -1, 2: 2}, 1, names) * HPiPoly(inner, 0, names)


class MelnikovCoefficients:
    """b_s, the coefficient of h^(s+1), with the common pi factor kept aside"""

    def __init__(self, values: List[ParamPoly], pi_power: int):
        self.values = values
        self.pi_power = pi_power

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx):
        return self.values[idx]

    def __iter__(self):
        return iter(self.values)

    def as_hpi(self) -> List[HPiPoly]:
        return [HPiPoly({0: v}, self.pi_power if not v.is_zero else 0, v.names) for v in self.values]


def b_coeffs(M: HPiPoly) -> MelnikovCoefficients:
    if not M.coeff(0).is_zero:
        raise NonzeroConstantTerm("M(0) = {0} is not zero".format(M.coeff(0)))
    return MelnikovCoefficients([M.coeff(s + 1) for s in range(M.degree())], M.pi_power)


def han_jacobian(b: Union[MelnikovCoefficients, Sequence[ParamPoly]], delta_subset: Sequence[str],
                 point: Mapping[str, object]) -> Fraction:
    """det d(b_0..b_(k-1))/d(delta_1..delta_k) at point, pi factors divided out"""
    values = list(b)
    k = len(delta_subset)
    if k == 0 or k > len(values):
        raise DimensionMismatch("need 1 <= k <= {0} symbols, got {1}".format(len(values), k))
    rows = []
    for b_s in values[:k]:
        row = []
        for name in delta_subset:
            if name in b_s.names:
                entry = b_s.diff(name).evaluate(point)
            else:
                entry = Fraction(0)
            row.append(_qq(entry))
        rows.append(row)
    det = DomainMatrix(rows, (k, k), QQ).det()
    return Fraction(int(det.numerator), int(det.denominator))


def _exponents(max_degree: int, min_degree: int = 0) -> List[Tuple[int, int]]:
    return [(i, d - i) for d in range(min_degree, max_degree + 1) for i in range(d, -1, -1)]


class FrancoiseDecomposition:
    """omega1 = g1 dx - f1 dy written as dS + R dH"""

    def __init__(self, S: PlanarPoly, R: PlanarPoly, residual: Tuple[PlanarPoly, PlanarPoly], degree: int):
        self.S = S
        self.R = R
        self.residual = residual
        self.degree = degree

    @property
    def exact(self) -> bool:
        return self.residual[0].is_zero and self.residual[1].is_zero

    def as_dict(self):
        return {"S": str(self.S), "R": str(self.R), "ansatz_degree": self.degree,
                "residual": [str(self.residual[0]), str(self.residual[1])]}


def _solve_exact_form(dx_part: PlanarPoly, dy_part: PlanarPoly, degree: int):
    names = dx_part.names
    s_monoms = _exponents(degree + 1, 1)
    r_monoms = _exponents(degree - 1)
    row_keys = [(c, i, j) for c in (0, 1) for (i, j) in _exponents(degree)]
    index = {key: r for r, key in enumerate(row_keys)}
    unknowns = len(s_monoms) + len(r_monoms)

    # right-hand sides, one column per parameter monomial
    param_monoms = set()
    for part in (dx_part, dy_part):
        for _, coeff in part.items():
            param_monoms.update(m for m, _ in coeff.terms())
    param_monoms = sorted(param_monoms, reverse=True)
    width = unknowns + len(param_monoms)

    rows = [[QQ.zero] * width for _ in row_keys]
    for col, (a, b) in enumerate(s_monoms):
        if a:
            rows[index[(0, a - 1, b)]][col] += QQ(a)
        if b:
            rows[index[(1, a, b - 1)]][col] += QQ(b)
    for col, (c, d) in enumerate(r_monoms, len(s_monoms)):
        rows[index[(0, c + 1, d)]][col] += QQ(1)
        rows[index[(1, c, d + 1)]][col] += QQ(1)
    column = {m: unknowns + idx for idx, m in enumerate(param_monoms)}
    for component, part in enumerate((dx_part, dy_part)):
        for (i, j), coeff in part.items():
            for monom, value in coeff.terms():
                rows[index[(component, i, j)]][column[monom]] = _qq(value)

    reduced, pivots = DomainMatrix(rows, (len(row_keys), width), QQ).rref()
    if any(p >= unknowns for p in pivots):
        return None
    table = reduced.to_Matrix()
    values = [ParamPoly.zero(names) for _ in range(unknowns)]
    for r, p in enumerate(pivots):
        terms = {}
        for monom, col in column.items():
            entry = table[r, col]
            if entry:
                terms[monom] = Fraction(int(entry.p), int(entry.q))
        values[p] = ParamPoly.from_terms(terms, names)
    S = PlanarPoly({m: v for m, v in zip(s_monoms, values)}, names)
    R = PlanarPoly({m: v for m, v in zip(r_monoms, values[len(s_monoms):])}, names)
    return S, R


def francoise_decompose(ps: PerturbedSystem) -> FrancoiseDecomposition:
    m1 = melnikov1(ps).M
    if not m1.is_zero:
        raise FirstOrderNotZero(m1)
    names = ps.params
    dx_part, dy_part = ps.omega()
    n = max(dx_part.degree(), dy_part.degree())
    if n < 0:
        zero = PlanarPoly(names=names)
        return FrancoiseDecomposition(zero, zero, (zero, zero), 0)
    x, y = PlanarPoly.x(names), PlanarPoly.y(names)
    for degree in range(max(n, 1), n + ANSATZ_EXTRA_DEGREE + 1):
        solution = _solve_exact_form(dx_part, dy_part, degree)
        if solution is None:
            logger.debug("no exact decomposition with ansatz degree %d", degree)
            continue
        S, R = solution
        residual = (dx_part - S.diff("x") - R * x, dy_part - S.diff("y") - R * y)
        decomposition = FrancoiseDecomposition(S, R, residual, degree)
        if not decomposition.exact:
            raise DecompositionNotFound("decomposition residual does not vanish: {0}, {1}".format(*residual))
        logger.debug("S = %s, R = %s", S, R)
        return decomposition
    raise DecompositionNotFound("no decomposition up to ansatz degree {0}".format(n + ANSATZ_EXTRA_DEGREE))


def melnikov2(ps: PerturbedSystem) -> MelnikovResult:
    """integral of R * omega1 along the orbits of the stored field"""
    decomposition = francoise_decompose(ps)
    # omega1 along the stored flow is sign * (f1 H_x + g1 H_y) dt
    sign = 1 if ps.reverse_time else -1
    M = orbit_integral(decomposition.R * orbit_flux(ps))
    if sign < 0:
        M = -M
    logger.debug("M2 = %s", M)
    return MelnikovResult(M, 2, ps.reverse_time, decomposition)


def line_integral_dx(S: PlanarPoly, y_pole_order: int) -> HPiPoly:
    """closed integral of S / y^k dx over H = h, using dx = y dt"""
    if y_pole_order not in (0, 1):
        raise UnsupportedPoleOrder("only 1/y^0 and 1/y^1 integrands are supported, got 1/y^{0}".format(
            y_pole_order))
    if y_pole_order == 0:
        S = S * PlanarPoly.y(S.names)
    return orbit_integral(S)


class RootInterval:
    """isolating interval (lo, hi] of a real root; lo == hi for exact roots"""

    def __init__(self, lo: Fraction, hi: Fraction, multiplicity: int):
        self.lo = lo
        self.hi = hi
        self.multiplicity = multiplicity

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def as_dict(self):
        return {"interval": ["{0}".format(self.lo), "{0}".format(self.hi)], "mult": self.multiplicity}

    def __eq__(self, other):
        if not isinstance(other, RootInterval):
            return NotImplemented
        return (self.lo, self.hi, self.multiplicity) == (other.lo, other.hi, other.multiplicity)

    def __repr__(self):
        return "RootInterval({0}, {1}, mult={2})".format(self.lo, self.hi, self.multiplicity)


_H = Symbol("h")


def _to_fractions(poly: Poly) -> List[Fraction]:
    # descending
    return [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]


def _horner(coeffs: List[Fraction], value: Fraction) -> Fraction:
    total = Fraction(0)
    for c in coeffs:
        total = total * value + c
    return total


def _sign_variations(chain: List[List[Fraction]], value: Fraction) -> int:
    signs = [v > 0 for v in (_horner(p, value) for p in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _cauchy_bound(coeffs: List[Fraction]) -> Fraction:
    lead = coeffs[0]
    return 1 + max((abs(c / lead) for c in coeffs[1:]), default=Fraction(0))


def _isolate_sqf(poly: Poly, lo: Fraction, hi: Fraction, width: Optional[Fraction]) -> List[Tuple[Fraction, Fraction]]:
    chain = [_to_fractions(p) for p in poly.sturm()]
    result = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        count = _sign_variations(chain, a) - _sign_variations(chain, b)
        if count == 0:
            continue
        if count > 1:
            mid = (a + b) / 2
            stack.extend([(mid, b), (a, mid)])
            continue
        if width is not None:
            while b - a > width:
                mid = (a + b) / 2
                if _sign_variations(chain, a) - _sign_variations(chain, mid) == 1:
                    b = mid
                else:
                    a = mid
        result.append((a, b))
    return result


def isolate_real_roots(M: HPiPoly, interval=(0, None), width=None) -> List[RootInterval]:
    """real roots of M in (lo, hi], with exact multiplicities.

    A common parameter factor of all h coefficients is divided out first, so
    symbolic M whose roots do not depend on the parameters is accepted.
    """
    if M.is_zero:
        raise ZeroPolynomial("M vanishes identically")
    if M.free_symbols:
        _, M = M.param_content()
        if M.free_symbols:
            raise UnboundSymbol(M.free_symbols)
    lo = rat(interval[0]) if interval[0] is not None else None
    hi = rat(interval[1]) if interval[1] is not None else None
    width = rat(width) if width is not None else None
    coeffs = M.univariate()
    poly = Poly([Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _H, domain=QQ)
    if poly.degree() <= 0:
        return []
    _, factors = poly.sqf_list()
    roots = []
    for factor, multiplicity in factors:
        rest = factor
        for value, count in factor.ground_roots().items():
            r = Fraction(int(value.p), int(value.q))
            if (lo is None or r > lo) and (hi is None or r <= hi):
                roots.append(RootInterval(r, r, multiplicity * count))
            rest = rest.exquo(Poly(_H - value, _H, domain=QQ) ** count)
        if rest.degree() <= 0:
            continue
        bound = _cauchy_bound(_to_fractions(rest))
        a = lo if lo is not None else -bound
        b = hi if hi is not None else bound
        if a >= b:
            continue
        for left, right in _isolate_sqf(rest, a, b, width):
            roots.append(RootInterval(left, right, multiplicity))
    roots.sort(key=lambda r: (r.lo, r.hi))
    logger.debug("roots of %s: %s", M, roots)
    return roots
