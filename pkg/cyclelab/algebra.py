"""Exact polynomial arithmetic over the rationals.

:class:`ParamPoly` wraps a sparse polynomial of sympy's ``PolyRing`` over ``QQ``
in the declared parameter symbols (graded lex, declaration order).
:class:`PlanarPoly` and :class:`HPiPoly` are sparse maps from phase monomials
``x^i*y^j`` and energy powers ``h^k`` to ``ParamPoly`` coefficients.
"""
import functools
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from sympy import QQ, Symbol
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .exception import UnknownSymbol, UnboundSymbol, ZeroPolynomial, \
    PiInExactMode, PiPowerMismatch

logger = logging.getLogger(__name__)

Rat = Fraction
PHASE_VARS = ("x", "y")
ENERGY_VAR = "h"


def rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # decimal literal semantics, 0.05 -> 1/20
        return Fraction(repr(value))
    if isinstance(value, ParamPoly):
        return value.constant_value()
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError("cannot convert {0!r} to a rational".format(value))


def _qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@functools.lru_cache(maxsize=None)
def _ring(names: Tuple[str, ...]) -> PolyRing:
    return PolyRing([Symbol(n) for n in names], QQ, grlex)


def _unify_names(lhs: Tuple[str, ...], rhs: Tuple[str, ...]) -> Tuple[str, ...]:
    if lhs == rhs:
        return lhs
    extra = tuple(n for n in rhs if n not in lhs)
    return lhs + extra


def _render_rat(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return "{0}/{1}".format(value.numerator, value.denominator)


def _factor(name: str, exp: int) -> str:
    return name if exp == 1 else "{0}^{1}".format(name, exp)


def _join_terms(terms: Iterable[Tuple[Fraction, List[str]]]) -> str:
    out = []
    for coeff, factors in terms:
        magnitude = abs(coeff)
        if not factors:
            body = _render_rat(magnitude)
        # a leading "-x^2" would read back as (-x)^2
        elif magnitude == 1 and not (coeff < 0 and not out and "^" in factors[0]):
            body = "*".join(factors)
        else:
            body = "*".join([_render_rat(magnitude)] + factors)
        if not out:
            out.append("-" + body if coeff < 0 else body)
        else:
            out.append((" - " if coeff < 0 else " + ") + body)
    return "".join(out) if out else "0"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class ParamPoly:
    """Polynomial in parameter symbols with rational coefficients.

    Values are immutable. Operands over different symbol lists are unified by
    name; the left operand's declaration order wins.
    """
    __slots__ = ("_rep", "_names", "_key")

    def __init__(self, rep, names: Tuple[str, ...]):
        self._rep = rep
        self._names = names
        self._key = None

    @classmethod
    def const(cls, value, names: Sequence[str] = ()) -> "ParamPoly":
        names = tuple(names)
        return cls(_ring(names).ground_new(_qq(rat(value))), names)

    @classmethod
    def zero(cls, names: Sequence[str] = ()) -> "ParamPoly":
        names = tuple(names)
        return cls(_ring(names).zero, names)

    @classmethod
    def symbol(cls, name: str, names: Sequence[str] = None) -> "ParamPoly":
        names = tuple(names) if names is not None else (name,)
        if name not in names:
            raise UnknownSymbol(name, names)
        return cls(_ring(names).gens[names.index(name)], names)

    @classmethod
    def symbols(cls, spec: Union[str, Sequence[str]],
                names: Sequence[str] = None) -> Tuple["ParamPoly", ...]:
        if isinstance(spec, str):
            spec = [s for s in spec.replace(",", " ").split() if s]
        universe = tuple(names) if names is not None else tuple(spec)
        return tuple(cls.symbol(n, universe) for n in spec)

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[int, ...], object],
                   names: Sequence[str]) -> "ParamPoly":
        names = tuple(names)
        ring = _ring(names)
        return cls(ring.from_dict({tuple(m): _qq(rat(c)) for m, c in terms.items()}), names)

    @property
    def names(self) -> Tuple[str, ...]:
        return self._names

    @property
    def free_symbols(self) -> Tuple[str, ...]:
        used = [False] * len(self._names)
        for monom in self._rep.keys():
            for idx, exp in enumerate(monom):
                if exp:
                    used[idx] = True
        return tuple(n for n, u in zip(self._names, used) if u)

    def terms(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """terms in descending graded lex order"""
        return [(m, _from_qq(c)) for m, c in self._rep.terms()]

    def __len__(self):
        return len(self._rep)

    @property
    def is_zero(self) -> bool:
        return not self._rep

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self._rep.keys())

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise UnboundSymbol(self.free_symbols)
        return self.constant_term()

    def constant_term(self) -> Fraction:
        zero = (0,) * len(self._names)
        return _from_qq(self._rep.get(zero, QQ.zero))

    def degree(self) -> int:
        if not self._rep:
            return -1
        return max(sum(m) for m in self._rep.keys())

    def with_names(self, names: Sequence[str]) -> "ParamPoly":
        names = tuple(names)
        if names == self._names:
            return self
        missing = [n for n in self.free_symbols if n not in names]
        if missing:
            raise UnknownSymbol(missing[0], names)
        if not self._rep:
            return ParamPoly.zero(names)
        return ParamPoly(self._rep.set_ring(_ring(names)), names)

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other, self._names)
        return None

    def _binary(self, other, fn):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other._names == self._names:
            return ParamPoly(fn(self._rep, other._rep), self._names)
        names = _unify_names(self._names, other._names)
        return ParamPoly(fn(self.with_names(names)._rep, other.with_names(names)._rep), names)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return ParamPoly(-self._rep, self._names)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer, got {0!r}".format(n))
        if n == 0:
            return ParamPoly.const(1, self._names)
        return ParamPoly(self._rep ** n, self._names)

    def scale(self, value) -> "ParamPoly":
        return ParamPoly(self._rep.mul_ground(_qq(rat(value))), self._names)

    def _canonical(self):
        if self._key is None:
            self._key = frozenset(
                (tuple(sorted((n, e) for n, e in zip(self._names, m) if e)), _from_qq(c))
                for m, c in self._rep.items())
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant and self.constant_term() == other
        if not isinstance(other, ParamPoly):
            return NotImplemented
        if self._names == other._names:
            return self._rep == other._rep
        return self._canonical() == other._canonical()

    def __hash__(self):
        if self.is_constant:
            return hash(self.constant_term())
        return hash(self._canonical())

    def __bool__(self):
        return bool(self._rep)

    def diff(self, name: str) -> "ParamPoly":
        if name not in self._names:
            raise UnknownSymbol(name, self._names)
        gen = _ring(self._names).gens[self._names.index(name)]
        return ParamPoly(self._rep.diff(gen), self._names)

    def substitute(self, bindings) -> "ParamPoly":
        bindings = normalize_bindings(bindings)
        if not bindings:
            return self
        for name, _ in bindings:
            if name not in self._names:
                raise UnknownSymbol(name, self._names)
        names = self._names
        for _, value in bindings:
            names = _unify_names(names, value.names)
        ring = _ring(names)
        replacements = [(ring.gens[names.index(name)], value.with_names(names)._rep)
                        for name, value in bindings]
        return ParamPoly(self.with_names(names)._rep.compose(replacements), names)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        missing = [n for n in self.free_symbols if n not in point]
        if missing:
            raise UnboundSymbol(missing)
        values = [rat(point[n]) if n in point else Fraction(0) for n in self._names]
        total = Fraction(0)
        for monom, coeff in self._rep.items():
            term = _from_qq(coeff)
            for value, exp in zip(values, monom):
                if exp:
                    term *= value ** exp
            total += term
        return total

    def content_and_primitive(self) -> Tuple[Fraction, "ParamPoly"]:
        if not self._rep:
            raise ZeroPolynomial("content of the zero polynomial is undefined")
        num, den = 0, 1
        for coeff in self._rep.values():
            value = _from_qq(coeff)
            num = math.gcd(num, value.numerator)
            den = _lcm(den, value.denominator)
        content = Fraction(num, den)
        return content, self.scale(1 / content)

    def monomial_factor(self) -> Dict[str, int]:
        """largest monomial dividing every term, as symbol -> exponent"""
        if not self._rep:
            return {}
        monoms = list(self._rep.keys())
        low = [min(m[i] for m in monoms) for i in range(len(self._names))]
        return {n: e for n, e in zip(self._names, low) if e}

    def divide_monomial(self, factor: Mapping[str, int]) -> "ParamPoly":
        shift = tuple(factor.get(n, 0) for n in self._names)
        ring = _ring(self._names)
        rep = ring.from_dict({tuple(e - s for e, s in zip(m, shift)): c
                              for m, c in self._rep.items()})
        return ParamPoly(rep, self._names)

    def gcd(self, other: "ParamPoly") -> "ParamPoly":
        names = _unify_names(self._names, other.names)
        a, b = self.with_names(names), other.with_names(names)
        if a.is_zero:
            return b
        if b.is_zero:
            return a
        if a.is_constant or b.is_constant:
            return ParamPoly.const(1, names)
        return ParamPoly(a._rep.gcd(b._rep), names)

    def exquo(self, other: "ParamPoly") -> "ParamPoly":
        names = _unify_names(self._names, other.names)
        return ParamPoly(self.with_names(names)._rep.exquo(other.with_names(names)._rep), names)

    def degree_in(self, name: str) -> int:
        if name not in self._names:
            return 0 if self._rep else -1
        idx = self._names.index(name)
        if not self._rep:
            return -1
        return max(m[idx] for m in self._rep.keys())

    def coeff_in(self, name: str, exp: int) -> "ParamPoly":
        """coefficient of name^exp, as a polynomial in the remaining symbols"""
        idx = self._names.index(name)
        ring = _ring(self._names)
        rep = ring.from_dict({m[:idx] + (0,) + m[idx + 1:]: c for m, c in self._rep.items()
                              if m[idx] == exp})
        return ParamPoly(rep, self._names)

    def factors_of(self, monom: Tuple[int, ...]) -> List[str]:
        return [_factor(n, e) for n, e in zip(self._names, monom) if e]

    def __str__(self):
        return _join_terms((c, self.factors_of(m)) for m, c in self.terms())

    def __repr__(self):
        return "ParamPoly({0})".format(str(self))


def _as_param(value, names: Tuple[str, ...]) -> ParamPoly:
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.const(value, names)


def normalize_bindings(bindings) -> List[Tuple[str, ParamPoly]]:
    if bindings is None:
        return []
    if isinstance(bindings, Mapping):
        bindings = list(bindings.items())
    result = []
    for name, value in bindings:
        result.append((name, _as_param(value, ())))
    return result


def _phase_key(monom: Tuple[int, int]):
    # graded lex with y > x
    return monom[0] + monom[1], monom[1]


class PlanarPoly:
    """Polynomial in the phase variables x, y with ParamPoly coefficients"""
    __slots__ = ("_terms", "_names", "_key")

    def __init__(self, terms: Mapping[Tuple[int, int], object] = None,
                 names: Sequence[str] = ()):
        names = tuple(names)
        raw = {}
        for monom, coeff in (terms or {}).items():
            if isinstance(coeff, ParamPoly):
                names = _unify_names(names, coeff.names)
            raw[(int(monom[0]), int(monom[1]))] = coeff
        normalized = {}
        for monom, coeff in raw.items():
            coeff = _as_param(coeff, names).with_names(names)
            if not coeff.is_zero:
                normalized[monom] = coeff
        self._terms = normalized
        self._names = names
        self._key = None

    @classmethod
    def _make(cls, terms: Dict[Tuple[int, int], ParamPoly], names: Tuple[str, ...]):
        # trusted constructor: coefficients already share `names` and are nonzero
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._names = names
        poly._key = None
        return poly

    @classmethod
    def x(cls, names: Sequence[str] = ()) -> "PlanarPoly":
        return cls({(1, 0): 1}, names)

    @classmethod
    def y(cls, names: Sequence[str] = ()) -> "PlanarPoly":
        return cls({(0, 1): 1}, names)

    @classmethod
    def const(cls, value, names: Sequence[str] = ()) -> "PlanarPoly":
        return cls({(0, 0): value}, names)

    @classmethod
    def monomial(cls, i: int, j: int, coeff=1, names: Sequence[str] = ()) -> "PlanarPoly":
        return cls({(i, j): coeff}, names)

    @property
    def names(self) -> Tuple[str, ...]:
        return self._names

    @property
    def free_symbols(self) -> Tuple[str, ...]:
        used = set()
        for coeff in self._terms.values():
            used.update(coeff.free_symbols)
        return tuple(n for n in self._names if n in used)

    def items(self) -> List[Tuple[Tuple[int, int], ParamPoly]]:
        """terms in descending graded lex order (y > x)"""
        return sorted(self._terms.items(), key=lambda kv: _phase_key(kv[0]), reverse=True)

    def monomials(self):
        return self._terms.keys()

    def coeff(self, i: int, j: int) -> ParamPoly:
        value = self._terms.get((i, j))
        if value is None:
            return ParamPoly.zero(self._names)
        return value

    def __len__(self):
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def degree_in(self, var: str) -> int:
        if not self._terms:
            return -1
        idx = PHASE_VARS.index(var)
        return max(m[idx] for m in self._terms)

    def with_names(self, names: Sequence[str]) -> "PlanarPoly":
        names = tuple(names)
        if names == self._names:
            return self
        return PlanarPoly._make({m: c.with_names(names) for m, c in self._terms.items()}, names)

    def _coerce(self, other):
        if isinstance(other, PlanarPoly):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return PlanarPoly.const(other, self._names)
        return None

    def _aligned(self, other):
        names = _unify_names(self._names, other._names)
        return self.with_names(names), other.with_names(names), names

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        lhs, rhs, names = self._aligned(other)
        terms = dict(lhs._terms)
        for monom, coeff in rhs._terms.items():
            value = terms.get(monom)
            value = coeff if value is None else value + coeff
            if value.is_zero:
                terms.pop(monom, None)
            else:
                terms[monom] = value
        return PlanarPoly._make(terms, names)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return PlanarPoly._make({m: -c for m, c in self._terms.items()}, self._names)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, ParamPoly):
            return self.mul_param(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.mul_truncated(other, None)

    def __rmul__(self, other):
        return self.__mul__(other)

    def mul_truncated(self, other: "PlanarPoly", max_degree=None) -> "PlanarPoly":
        """product keeping only monomials of total degree <= max_degree"""
        lhs, rhs, names = self._aligned(other)
        terms = {}
        for (i1, j1), c1 in lhs._terms.items():
            for (i2, j2), c2 in rhs._terms.items():
                if max_degree is not None and i1 + j1 + i2 + j2 > max_degree:
                    continue
                monom = (i1 + i2, j1 + j2)
                value = terms.get(monom)
                terms[monom] = c1 * c2 if value is None else value + c1 * c2
        return PlanarPoly._make({m: c for m, c in terms.items() if not c.is_zero}, names)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer, got {0!r}".format(n))
        result = PlanarPoly.const(1, self._names)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, value) -> "PlanarPoly":
        value = rat(value)
        if value == 0:
            return PlanarPoly._make({}, self._names)
        return PlanarPoly._make({m: c.scale(value) for m, c in self._terms.items()}, self._names)

    def mul_param(self, value: ParamPoly) -> "PlanarPoly":
        names = _unify_names(self._names, value.names)
        value = value.with_names(names)
        terms = {}
        for monom, coeff in self.with_names(names)._terms.items():
            product = coeff * value
            if not product.is_zero:
                terms[monom] = product
        return PlanarPoly._make(terms, names)

    def map_coeffs(self, fn) -> "PlanarPoly":
        return PlanarPoly({m: fn(c) for m, c in self._terms.items()}, self._names)

    def homogeneous_part(self, k: int) -> "PlanarPoly":
        return PlanarPoly._make({m: c for m, c in self._terms.items() if m[0] + m[1] == k},
                                self._names)

    def truncate(self, max_degree: int) -> "PlanarPoly":
        return PlanarPoly._make({m: c for m, c in self._terms.items() if m[0] + m[1] <= max_degree},
                                self._names)

    def diff(self, var: str) -> "PlanarPoly":
        if var in PHASE_VARS:
            idx = PHASE_VARS.index(var)
            terms = {}
            for monom, coeff in self._terms.items():
                exp = monom[idx]
                if exp:
                    new = (monom[0] - 1, monom[1]) if idx == 0 else (monom[0], monom[1] - 1)
                    terms[new] = coeff.scale(exp)
            return PlanarPoly._make(terms, self._names)
        if var not in self._names:
            raise UnknownSymbol(var, PHASE_VARS + self._names)
        return self.map_coeffs(lambda c: c.diff(var))

    def reflect(self, sx: int = 1, sy: int = 1) -> "PlanarPoly":
        """p(sx*x, sy*y) for sx, sy in {1, -1}"""
        return PlanarPoly._make({(i, j): c if sx ** i * sy ** j > 0 else -c
                                 for (i, j), c in self._terms.items()}, self._names)

    def substitute(self, bindings) -> "PlanarPoly":
        bindings = normalize_bindings(bindings)
        if not bindings:
            return self
        for name, _ in bindings:
            if name not in self._names:
                raise UnknownSymbol(name, self._names)
        names = self._names
        for _, value in bindings:
            names = _unify_names(names, value.names)
        lifted = self.with_names(names)
        return PlanarPoly({m: c.substitute(bindings) for m, c in lifted._terms.items()}, names)

    def evaluate(self, point: Mapping[str, object], x=None, y=None) -> Fraction:
        if self.degree_in("x") > 0 and x is None:
            raise UnboundSymbol("x")
        if self.degree_in("y") > 0 and y is None:
            raise UnboundSymbol("y")
        xv = rat(x) if x is not None else Fraction(0)
        yv = rat(y) if y is not None else Fraction(0)
        total = Fraction(0)
        for (i, j), coeff in self._terms.items():
            total += coeff.evaluate(point) * xv ** i * yv ** j
        return total

    def bind(self, point: Mapping[str, object]) -> "PlanarPoly":
        """substitute rational values for every symbol named in point"""
        bindings = [(n, rat(v)) for n, v in point.items() if n in self._names]
        return self.substitute(bindings)

    def _canonical(self):
        if self._key is None:
            self._key = frozenset((m, c) for m, c in self._terms.items())
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            other = PlanarPoly.const(other, self._names)
        if not isinstance(other, PlanarPoly):
            return NotImplemented
        if self._terms.keys() != other._terms.keys():
            return False
        return all(c == other._terms[m] for m, c in self._terms.items())

    def __hash__(self):
        if self.degree() <= 0:
            return hash(self.coeff(0, 0))
        return hash(self._canonical())

    def __str__(self):
        rendered = []
        for (i, j), coeff in self.items():
            phase = []
            if i:
                phase.append(_factor("x", i))
            if j:
                phase.append(_factor("y", j))
            for monom, value in coeff.terms():
                rendered.append((value, coeff.factors_of(monom) + phase))
        return _join_terms(rendered)

    def __repr__(self):
        return "PlanarPoly({0})".format(str(self))


class HPiPoly:
    """Polynomial in the energy h with ParamPoly coefficients, times pi^pi_power"""
    __slots__ = ("_coeffs", "_pi_power", "_names")

    def __init__(self, coeffs: Mapping[int, object] = None, pi_power: int = 0,
                 names: Sequence[str] = ()):
        if pi_power < 0:
            raise ValueError("pi power must be non-negative")
        names = tuple(names)
        for coeff in (coeffs or {}).values():
            if isinstance(coeff, ParamPoly):
                names = _unify_names(names, coeff.names)
        normalized = {}
        for power, coeff in (coeffs or {}).items():
            coeff = _as_param(coeff, names).with_names(names)
            if not coeff.is_zero:
                normalized[int(power)] = coeff
        self._coeffs = normalized
        self._pi_power = int(pi_power)
        self._names = names

    @classmethod
    def zero(cls, names: Sequence[str] = ()) -> "HPiPoly":
        return cls({}, 0, names)

    @property
    def names(self) -> Tuple[str, ...]:
        return self._names

    @property
    def pi_power(self) -> int:
        return self._pi_power

    @property
    def free_symbols(self) -> Tuple[str, ...]:
        used = set()
        for coeff in self._coeffs.values():
            used.update(coeff.free_symbols)
        return tuple(n for n in self._names if n in used)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else -1

    def coeff(self, k: int) -> ParamPoly:
        value = self._coeffs.get(k)
        if value is None:
            return ParamPoly.zero(self._names)
        return value

    def items(self) -> List[Tuple[int, ParamPoly]]:
        return sorted(self._coeffs.items(), reverse=True)

    def _coerce(self, other):
        if isinstance(other, HPiPoly):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return HPiPoly({0: other}, 0, self._names)
        return None

    def _combine(self, other, sign):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero:
            return other if sign > 0 else -other
        if other.is_zero:
            return self
        if self._pi_power != other._pi_power:
            raise PiPowerMismatch("cannot add pi^{0} and pi^{1} terms".format(
                self._pi_power, other._pi_power))
        names = _unify_names(self._names, other._names)
        coeffs = {k: c.with_names(names) for k, c in self._coeffs.items()}
        for k, c in other._coeffs.items():
            c = c.with_names(names)
            if sign < 0:
                c = -c
            coeffs[k] = coeffs[k] + c if k in coeffs else c
        return HPiPoly(coeffs, self._pi_power, names)

    def __add__(self, other):
        return self._combine(other, 1)

    def __radd__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return HPiPoly({k: -c for k, c in self._coeffs.items()}, self._pi_power, self._names)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        names = _unify_names(self._names, other._names)
        coeffs = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                product = c1.with_names(names) * c2.with_names(names)
                coeffs[k1 + k2] = coeffs[k1 + k2] + product if k1 + k2 in coeffs else product
        return HPiPoly(coeffs, self._pi_power + other._pi_power, names)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer, got {0!r}".format(n))
        result = HPiPoly({0: 1}, 0, self._names)
        for _ in range(n):
            result = result * self
        return result

    def with_pi_power(self, pi_power: int) -> "HPiPoly":
        return HPiPoly(self._coeffs, pi_power, self._names)

    def map_coeffs(self, fn) -> "HPiPoly":
        return HPiPoly({k: fn(c) for k, c in self._coeffs.items()}, self._pi_power, self._names)

    def diff(self, name: str) -> "HPiPoly":
        if name == ENERGY_VAR:
            return HPiPoly({k - 1: c.scale(k) for k, c in self._coeffs.items() if k},
                           self._pi_power, self._names)
        if name not in self._names:
            raise UnknownSymbol(name, (ENERGY_VAR,) + self._names)
        return self.map_coeffs(lambda c: c.diff(name))

    def substitute(self, bindings) -> "HPiPoly":
        bindings = normalize_bindings(bindings)
        for name, _ in bindings:
            if name not in self._names:
                raise UnknownSymbol(name, self._names)
        return self.map_coeffs(lambda c: c.substitute(bindings))

    def bind(self, point: Mapping[str, object]) -> "HPiPoly":
        return self.substitute([(n, rat(v)) for n, v in point.items() if n in self._names])

    def evaluate(self, point: Mapping[str, object], h=None, pi_mode: str = "exact"):
        if pi_mode not in ("exact", "float"):
            raise ValueError("pi_mode must be 'exact' or 'float'")
        if self.degree() > 0 and h is None:
            raise UnboundSymbol(ENERGY_VAR)
        hv = rat(h) if h is not None else Fraction(0)
        total = Fraction(0)
        for k, coeff in self._coeffs.items():
            total += coeff.evaluate(point) * hv ** k
        if pi_mode == "exact":
            if self._pi_power:
                raise PiInExactMode("value carries pi^{0}; use pi_mode='float'".format(self._pi_power))
            return total
        return float(total) * math.pi ** self._pi_power

    def univariate(self) -> List[Fraction]:
        """ascending rational coefficients; every coefficient must be a constant"""
        missing = self.free_symbols
        if missing:
            raise UnboundSymbol(missing)
        degree = self.degree()
        return [self.coeff(k).constant_term() for k in range(degree + 1)]

    def param_content(self) -> Tuple[ParamPoly, "HPiPoly"]:
        """split off the gcd over Q[params] of the h coefficients"""
        if self.is_zero:
            raise ZeroPolynomial("content of the zero polynomial is undefined")
        common = functools.reduce(lambda a, b: a.gcd(b), self._coeffs.values())
        if common.is_constant:
            return ParamPoly.const(1, self._names), self
        _, common = common.content_and_primitive()
        if common.terms()[0][1] < 0:
            common = -common
        return common, self.map_coeffs(lambda c: c.exquo(common))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            other = HPiPoly({0: other}, 0, self._names)
        if not isinstance(other, HPiPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self._pi_power != other._pi_power or self._coeffs.keys() != other._coeffs.keys():
            return False
        return all(c == other._coeffs[k] for k, c in self._coeffs.items())

    def __hash__(self):
        if self.is_zero or (not self._pi_power and self.degree() == 0):
            return hash(self.coeff(0))
        return hash((self._pi_power, frozenset(self._coeffs.items())))

    def __str__(self):
        rendered = []
        for k, coeff in self.items():
            energy = [_factor(ENERGY_VAR, k)] if k else []
            for monom, value in coeff.terms():
                rendered.append((value, coeff.factors_of(monom) + energy))
        if not rendered:
            return "0"
        if not self._pi_power:
            return _join_terms(rendered)
        pi = _factor("pi", self._pi_power)
        if len(rendered) == 1:
            value, factors = rendered[0]
            return _join_terms([(value, factors + [pi])])
        return "({0})*{1}".format(_join_terms(rendered), pi)

    def __repr__(self):
        return "HPiPoly({0})".format(str(self))


AnyPoly = Union[ParamPoly, PlanarPoly, HPiPoly]


def poly_arith(lhs: AnyPoly, op: str, rhs) -> AnyPoly:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "pow":
        return lhs ** rhs
    raise ValueError("unknown operation " + op)


def substitute(p: AnyPoly, bindings) -> AnyPoly:
    return p.substitute(bindings)


def partial_derivative(p: AnyPoly, var: str) -> AnyPoly:
    return p.diff(var)


def content_and_primitive(p: ParamPoly) -> Tuple[Fraction, ParamPoly]:
    return p.content_and_primitive()


def evaluate(p: AnyPoly, point: Mapping[str, object], h=None, x=None, y=None,
             pi_mode: str = "exact"):
    if isinstance(p, HPiPoly):
        return p.evaluate(point, h=h, pi_mode=pi_mode)
    if isinstance(p, PlanarPoly):
        value = p.evaluate(point, x=x, y=y)
    else:
        value = p.evaluate(point)
    return float(value) if pi_mode == "float" else value


def render(p) -> str:
    if isinstance(p, Fraction):
        return _render_rat(p)
    return str(p)


def proportional(lhs: ParamPoly, rhs: ParamPoly) -> bool:
    """equal up to a positive rational factor"""
    if lhs.is_zero or rhs.is_zero:
        return lhs.is_zero and rhs.is_zero
    return lhs.content_and_primitive()[1] == rhs.content_and_primitive()[1]
