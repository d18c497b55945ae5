"""Floating point checks: trajectories, the return map on the positive x-axis
and a displacement based limit cycle finder."""
import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.polynomial import polyval2d
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq, minimize_scalar

from .algebra import PlanarPoly, rat
from .exception import BadIndex, BadTolerance, Blowup, NoReturn, QuadratureError, \
    StepSizeUnderflow, UnboundSymbol
from .melnikov import orbit_flux
from .sysdef import PerturbedSystem, PlanarSystem

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
EVENT_TOL = 1e-12
BISECTION_TOL = 1e-8
BLOWUP_NORM = 1e6
T_MAX = 1e4
MIN_TOL, MAX_TOL = 1e-13, 1e-3
# grid displacements below NOISE_FACTOR * tol carry no sign information
NOISE_FACTOR = 100
TANGENCY_WINDOW = 0.02
TANGENCY_SAMPLES = 21

__GLOBAL_TOL = None


def set_global_tolerance(value: Optional[float]):
    global __GLOBAL_TOL
    if value is not None:
        _check_tol(value)
    __GLOBAL_TOL = value


def get_global_tolerance() -> float:
    if __GLOBAL_TOL is not None:
        return __GLOBAL_TOL
    env = os.environ.get("CYCLELAB_TOL")
    if env:
        value = float(env)
        _check_tol(value)
        return value
    return DEFAULT_TOL


def _check_tol(tol: float):
    if not MIN_TOL <= tol <= MAX_TOL:
        raise BadTolerance("tolerance {0} outside [{1}, {2}]".format(tol, MIN_TOL, MAX_TOL))


def _coefficient_array(poly: PlanarPoly, degree: int) -> np.ndarray:
    array = np.zeros((degree + 1, degree + 1))
    for (i, j), coeff in poly.items():
        array[i, j] = float(coeff.constant_value())
    return array


class NumericSystem:
    """x' = P, y' = Q compiled to dense coefficient arrays at a parameter point"""

    def __init__(self, system: PlanarSystem, point: Optional[Mapping[str, object]] = None):
        point = {n: rat(v) for n, v in (point or {}).items()}
        bound = system.bind(point) if point else system
        if not bound.is_numeric:
            raise UnboundSymbol(bound.free_symbols)
        self.system = bound
        self.point = point
        self.degree = max(bound.degree(), 1)
        self._P = _coefficient_array(bound.P, self.degree)
        self._Q = _coefficient_array(bound.Q, self.degree)

    def __getstate__(self):
        # workers only need the compiled arrays
        return {"system": None, "point": self.point, "degree": self.degree, "_P": self._P, "_Q": self._Q}

    def field(self, x, y):
        return polyval2d(x, y, self._P), polyval2d(x, y, self._Q)

    def __call__(self, t, state):
        return self.field(state[0], state[1])


def eps_scaled_point(point: Mapping[str, object], eps, names: Sequence[str]):
    """multiply the values of the perturbation parameters by eps"""
    eps = rat(eps)
    return {n: rat(v) * eps if n in names else rat(v) for n, v in point.items()}


class Trajectory:
    def __init__(self, solution):
        self.solution = solution

    @property
    def t(self) -> np.ndarray:
        return self.solution.t

    @property
    def x(self) -> np.ndarray:
        return self.solution.y[0]

    @property
    def y(self) -> np.ndarray:
        return self.solution.y[1]

    @property
    def end(self) -> Tuple[float, float]:
        return float(self.x[-1]), float(self.y[-1])

    def sample(self, samples: int = 1000) -> np.ndarray:
        """rows of (t, x, y) evaluated from the dense output"""
        ts = np.linspace(self.t[0], self.t[-1], samples)
        xs, ys = self.solution.sol(ts)
        return np.column_stack([ts, xs, ys])

    def write_csv(self, stream, samples: int = 1000):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["t", "x", "y"])
        for t, x, y in self.sample(samples):
            writer.writerow([repr(float(t)), repr(float(x)), repr(float(y))])


def _blowup_event(max_norm: float):
    def event(t, state):
        return math.hypot(state[0], state[1]) - max_norm
    event.terminal = True
    return event


def _crossing_event(direction: int):
    def event(t, state):
        return state[1]
    event.terminal = True
    event.direction = direction
    return event


def _solve(system: NumericSystem, start, t_span, tol, method, events):
    solution = solve_ivp(system, t_span, start, method=method, rtol=tol, atol=tol, dense_output=True,
                         events=[_blowup_event(BLOWUP_NORM)] + list(events))
    if solution.status == -1:
        raise StepSizeUnderflow("integration failed at t = {0}: {1}".format(solution.t[-1], solution.message))
    if solution.t_events[0].size:
        raise Blowup("|state| exceeded {0} at t = {1}".format(BLOWUP_NORM, solution.t_events[0][0]))
    return solution


def integrate(system: NumericSystem, x0, t_max: float, tol: Optional[float] = None,
              method: str = "DOP853") -> Trajectory:
    tol = get_global_tolerance() if tol is None else tol
    _check_tol(tol)
    if method not in ("DOP853", "RK45"):
        raise BadIndex("unsupported integrator {0}".format(method))
    solution = _solve(system, [float(x0[0]), float(x0[1])], (0.0, float(t_max)), tol, method, [])
    return Trajectory(solution)


def first_return(system: NumericSystem, x0: float, tol: Optional[float] = None,
                 t_max: float = T_MAX) -> Tuple[float, float]:
    """(x1, T) of the first upward crossing of {y = 0, x > 0} from (x0, 0)"""
    tol = get_global_tolerance() if tol is None else tol
    _check_tol(tol)
    if x0 <= 0:
        raise BadIndex("the section starts at x0 > 0, got {0}".format(x0))
    if system.field(float(x0), 0.0)[1] <= 0:
        raise NoReturn("the flow does not cross y = 0 upwards at x0 = {0}".format(x0))
    # leave the section through the lower half plane before watching it again
    t = 0.0
    state = [float(x0), 0.0]
    for direction in (-1, 1):
        solution = _solve(system, state, (t, t_max), tol, "DOP853", [_crossing_event(direction)])
        if not solution.t_events[1].size:
            raise NoReturn("no crossing of y = 0 from x0 = {0} within t = {1}".format(x0, t_max))
        t = float(solution.t_events[1][0])
        state = [float(solution.y_events[1][0][0]), 0.0]
    if state[0] <= 0:
        raise NoReturn("orbit from x0 = {0} crosses y = 0 upwards at x = {1}".format(x0, state[0]))
    return state[0], t


def poincare_return(system: NumericSystem, x0: float, tol: Optional[float] = None) -> float:
    return first_return(system, x0, tol)[0]


def displacement(system: NumericSystem, x0: float, tol: Optional[float] = None) -> float:
    return poincare_return(system, x0, tol) - x0


class CycleEstimate:
    def __init__(self, x_cross: float, period: float, stability: str, residual: float):
        self.x_cross = x_cross
        self.period = period
        self.stability = stability
        self.residual = residual

    def as_dict(self):
        return {"x": self.x_cross, "period": self.period, "stability": self.stability}

    def __repr__(self):
        return "CycleEstimate(x={0:.10g}, period={1:.10g}, {2})".format(self.x_cross, self.period, self.stability)


def _safe_displacement(args) -> float:
    system, x0, tol = args
    try:
        return displacement(system, x0, tol)
    except (NoReturn, Blowup, StepSizeUnderflow) as ex:
        logger.warning("skipping x0 = %.6g: %s", x0, ex)
        return float("nan")


def _scan(system: NumericSystem, xs: np.ndarray, tol: float, use_parallel: bool) -> np.ndarray:
    tasks = [(system, float(x), tol) for x in xs]
    if use_parallel:
        with ProcessPoolExecutor() as pool:
            values = list(pool.map(_safe_displacement, tasks))
    else:
        values = [_safe_displacement(task) for task in tasks]
    return np.array(values)


def _classify(values: np.ndarray, noise: float) -> List[Optional[int]]:
    signs = []
    for d in values:
        if math.isnan(d):
            signs.append(None)
        elif d > noise:
            signs.append(1)
        elif d < -noise:
            signs.append(-1)
        else:
            signs.append(0)
    return signs


def _stability(left: int, right: int) -> str:
    if left > 0 > right:
        return "attracting"
    if left < 0 < right:
        return "repelling"
    return "inconclusive"


def _simple_root(system: NumericSystem, a: float, b: float, tol: float, width: float) -> float:
    return brentq(lambda x: displacement(system, x, tol), a, b, xtol=width)


def _tangential_root(system: NumericSystem, a: float, b: float, tol: float) -> Optional[float]:
    """vertex of a local quartic fit of d around the minimum of |d| in (a, b)"""
    fine = max(min(tol, EVENT_TOL), MIN_TOL)
    rough = minimize_scalar(lambda x: abs(displacement(system, x, fine)), bounds=(a, b), method="bounded",
                            options={"xatol": 1e-9})
    center = float(rough.x)
    half = min(TANGENCY_WINDOW, center / 2)
    xs = np.linspace(center - half, center + half, TANGENCY_SAMPLES)
    ds = np.array([displacement(system, float(x), fine) for x in xs])
    fit = np.polynomial.Polynomial.fit(xs - center, ds, 4).convert()
    stationary = [r.real for r in fit.deriv().roots() if abs(r.imag) < 1e-12 and abs(r.real) <= half]
    if not stationary:
        return None
    u = min(stationary, key=abs)
    # tangency: the fitted minimum must be at the noise level
    if abs(fit(u)) > NOISE_FACTOR * fine * 10:
        logger.debug("local minimum of |d| at %.8g is %.3g, not a zero", center + u, fit(u))
        return None
    return center + u


def find_cycles(system: NumericSystem, x_range=(0.05, 1.5), grid: int = 64, tol: Optional[float] = None,
                width: float = BISECTION_TOL, use_parallel: bool = False) -> List[CycleEstimate]:
    lo, hi = float(x_range[0]), float(x_range[1])
    if not 0 < lo < hi:
        raise BadIndex("need 0 < lo < hi, got ({0}, {1})".format(lo, hi))
    if grid < 3:
        raise BadIndex("grid needs at least 3 points, got {0}".format(grid))
    tol = get_global_tolerance() if tol is None else tol
    _check_tol(tol)
    xs = np.linspace(lo, hi, grid)
    values = _scan(system, xs, tol, use_parallel)
    signs = _classify(values, NOISE_FACTOR * tol)
    logger.debug("displacement scan: %s", ", ".join("{0:.4g}:{1:.3g}".format(x, d) for x, d in zip(xs, values)))

    found = []
    i = 0
    while i < grid - 1:
        if signs[i] is None or signs[i] == 0:
            i += 1
            continue
        j = i + 1
        while j < grid and signs[j] == 0:
            j += 1
        if j == grid or signs[j] is None:
            i = j
            continue
        left, right = signs[i], signs[j]
        a, b = float(xs[i]), float(xs[j])
        if left != right:
            found.append((_simple_root(system, a, b, tol, width), _stability(left, right)))
        elif j > i + 1:
            root = _tangential_root(system, a, b, tol)
            if root is not None:
                found.append((root, "semistable"))
        i = j

    # tangencies between clearly signed grid points show up as local minima of |d|
    for k in range(1, grid - 1):
        s = signs[k - 1:k + 2]
        if None in s or 0 in s or len(set(s)) != 1:
            continue
        if abs(values[k]) < abs(values[k - 1]) and abs(values[k]) < abs(values[k + 1]):
            root = _tangential_root(system, float(xs[k - 1]), float(xs[k + 1]), tol)
            if root is not None:
                found.append((root, "semistable"))

    cycles = []
    for x, stability in sorted(found):
        x1, period = first_return(system, x, tol)
        cycles.append(CycleEstimate(x, period, stability, abs(x1 - x)))
        logger.info("cycle at x = %.10g (%s), period %.6g", x, stability, period)
    return cycles


def melnikov_quadrature(ps: PerturbedSystem, h: float, order: int = 1) -> float:
    """adaptive quadrature of f1 H_x + g1 H_y over the orbit H = h"""
    if order != 1:
        raise BadIndex("quadrature oracle only covers the first order")
    if h <= 0:
        raise BadIndex("energy level must be positive, got {0}".format(h))
    if not ps.is_numeric:
        raise UnboundSymbol(tuple(set(ps.f1.free_symbols) | set(ps.g1.free_symbols)))
    flux = orbit_flux(ps)
    coeffs = _coefficient_array(flux, max(flux.degree(), 1))
    radius = math.sqrt(2 * h)

    def integrand(t):
        return polyval2d(radius * math.cos(t), -radius * math.sin(t), coeffs)

    result = quad(integrand, 0.0, 2 * math.pi, epsabs=1e-12, epsrel=1e-12, limit=200, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3:
        if error > 1e-9 * max(1.0, abs(value)):
            raise QuadratureError("quadrature did not converge at h = {0}: {1}".format(h, result[3]))
        logger.debug("quadrature at h = %g: %s", h, result[3])
    return float(value)
