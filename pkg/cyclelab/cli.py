"""``cyclelab`` command line front end.

Exit codes: 0 on success, 1 on usage errors (bad flags, unknown or unbound
symbols, unreadable or malformed input files) and 2 when an analysis is
mathematically not applicable to the given system.
"""
import argparse
import io
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from .algebra import PlanarPoly
from .exception import BadIndex, ConflictingOptions, CycleLabError, UnboundSymbol, ZeroPolynomial
from .invariants import cofactor, dulac_divergence, symmetry_center_check
from .lyapunov import ChainStep, LyapunovQuantity, focal_values, lyapunov_chain, lyapunov_l0
from .melnikov import isolate_real_roots, melnikov1, melnikov2
from .numerics import NumericSystem, eps_scaled_point, find_cycles, integrate, set_global_tolerance
from .parser import parse_bindings, parse_expr, parse_system
from .report import emit, emit_report
from .sysdef import CUBIC_MONOMIALS, PlanarSystem, eps_rescale, kukles_conditions
from .util import parse_range, print_syntax_error

logger = logging.getLogger(__name__)

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "{0}: error: {1}\n".format(self.prog, message))


class _Source:
    """the text of the system file currently being analysed, for error excerpts"""
    text = ""


def _read_system(path: str) -> PlanarSystem:
    with open(path) as f:
        _Source.text = f.read()
    return parse_system(_Source.text, path)


def _bindings(system: PlanarSystem, text: Optional[str], flag: str):
    if not text:
        return []
    _Source.text = text
    return parse_bindings(text, system.params, filename=flag)


def _apply_subst(system: PlanarSystem, args) -> PlanarSystem:
    bindings = _bindings(system, getattr(args, "subst", None), "--subst")
    return system.substitute(bindings) if bindings else system


def _point(system: PlanarSystem, args) -> Dict:
    bindings = _bindings(system, args.at, "--at")
    substituted = {name for name, _ in _bindings(system, getattr(args, "subst", None), "--subst")}
    clash = substituted.intersection(name for name, _ in bindings)
    if clash:
        raise ConflictingOptions("--subst and --at both bind {0}".format(", ".join(sorted(clash))))
    point = {}
    for name, value in bindings:
        if not value.is_constant:
            raise UnboundSymbol(value.free_symbols)
        point[name] = value.constant_value()
    if args.eps is not None:
        if not system.perturbation_params:
            raise ConflictingOptions("--eps needs a 'perturb:' line naming the perturbation parameters")
        point = eps_scaled_point(point, args.eps, system.perturbation_params)
    return point


def _numeric(args) -> NumericSystem:
    system = _read_system(args.file)
    point = _point(system, args)
    system = _apply_subst(system, args)
    return NumericSystem(system, point)


def _parse_steps(raw: Sequence[str]) -> List[ChainStep]:
    steps = []
    for text in raw or ():
        index, _, binding = text.partition(":")
        index = None if index.strip() in ("", "-") else int(index)
        binding = binding.strip()
        if binding.startswith("solve="):
            steps.append(ChainStep(index, solve_for=binding[len("solve="):].strip()))
        else:
            steps.append(ChainStep(index, binding))
    return steps


def cmd_lyap(args):
    system = _apply_subst(_read_system(args.file), args)
    sequence = lyapunov_chain(system, _parse_steps(args.step), max_order=args.max_order)
    report = sequence.as_dict()
    if not args.json:
        report = {"l0": report["l0"], "quantities": [str(q) for q in sequence.quantities],
                  "residual_ok": report["residual_ok"]}
    emit_report(report, args.json, args.out)


def _roots_or_none(M):
    try:
        return isolate_real_roots(M)
    except UnboundSymbol as ex:
        logger.info("roots depend on the parameters: %s", ex)
    except ZeroPolynomial:
        return []
    return None


def cmd_mel(args):
    system = _apply_subst(_read_system(args.file), args)
    eps_params = args.eps_params.split(",") if args.eps_params else None
    ps = eps_rescale(system, [n.strip() for n in eps_params] if eps_params else None,
                     reverse_time=not args.forward)
    if args.order == 1:
        result = melnikov1(ps)
    elif args.order == 2:
        result = melnikov2(ps)
    else:
        raise BadIndex("Melnikov order must be 1 or 2, got {0}".format(args.order))
    report = result.as_dict(_roots_or_none(result.M))
    emit_report(report, args.json, args.out)


def _curve(system: PlanarSystem, text: str) -> PlanarPoly:
    _Source.text = text
    return parse_expr(text, system.params, filename="--curve")


def cmd_cofactor(args):
    system = _apply_subst(_read_system(args.file), args)
    result = cofactor(system, _curve(system, args.curve))
    emit_report(result.as_dict(), args.json, args.out)


def cmd_dulac(args):
    system = _apply_subst(_read_system(args.file), args)
    result = dulac_divergence(system, _curve(system, args.curve))
    emit_report(result.as_dict(), args.json, args.out)


def cmd_center_check(args):
    system = _apply_subst(_read_system(args.file), args)
    symmetry = symmetry_center_check(system)
    report = {"symmetry": symmetry.as_dict(), "l0": str(lyapunov_l0(system))}
    if lyapunov_l0(system).is_zero:
        certificate = focal_values(system, 2 * args.max_order + 2)
        quantities = [LyapunovQuantity(k, certificate.quantity(k)) for k in range(1, args.max_order + 1)]
        first = next((q for q in quantities if not q.is_zero), None)
        report["focal"] = {"max_order": args.max_order,
                           "all_vanish": first is None,
                           "first_nonzero": first.as_dict() if first is not None else None,
                           "residual_ok": certificate.residual_ok()}
    emit_report(report, args.json, args.out)


def cmd_kukles_conditions(args):
    system = _apply_subst(_read_system(args.file), args)
    x, y = PlanarPoly.x(system.params), PlanarPoly.y(system.params)
    coeffs = [system.Q.coeff(i, j) for i, j in CUBIC_MONOMIALS]
    rest = system.Q - x - sum((PlanarPoly.monomial(i, j, c, system.params)
                               for (i, j), c in zip(CUBIC_MONOMIALS, coeffs)), PlanarPoly(names=system.params))
    if system.P != -y or not rest.is_zero:
        raise BadIndex("not a cubic Kukles system x' = -y, y' = x + (quadratic and cubic terms)")
    report = kukles_conditions(*coeffs)
    emit_report(report.as_dict(), args.json, args.out)


def cmd_simulate(args):
    system = _numeric(args)
    x0 = [float(v) for v in args.start.split(",")]
    if len(x0) != 2:
        raise BadIndex("--from takes 'x,y', got '{0}'".format(args.start))
    trajectory = integrate(system, x0, args.t_max, method=args.method)
    stream = io.StringIO()
    trajectory.write_csv(stream, args.samples)
    emit(stream.getvalue(), args.out)


def cmd_cycles(args):
    if args.portrait and args.out and os.path.abspath(args.portrait) == os.path.abspath(args.out):
        raise ConflictingOptions("--portrait and --out name the same file")
    system = _numeric(args)
    cycles = find_cycles(system, x_range=parse_range(args.range), grid=args.grid, use_parallel=args.parallel)
    emit_report({"cycles": [c.as_dict() for c in cycles]}, args.json, args.out)
    if args.portrait:
        from .portrait import draw_portrait
        draw_portrait(system, args.portrait, cycles=cycles)


def cmd_reproduce(args):
    from .reproduce import format_table, reproduce, succeeded, summary
    results = reproduce(args.filter, jobs=args.jobs, golden=args.golden)
    if args.json:
        emit_report(summary(results), True, args.out)
    else:
        emit(format_table(results), args.out)
    return 0 if succeeded(results) else 1


def _add_common(parser, subst: bool = True):
    parser.add_argument("file", help="system file (params:, perturb:, dx =, dy = lines)")
    if subst:
        parser.add_argument("--subst", help="bindings 'sym=expr;sym=expr' applied before the analysis")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of plain text")
    parser.add_argument("--out", help="write the report to this file instead of stdout")


def _add_numeric(parser):
    parser.add_argument("--at", help="parameter values 'a=1,b=1/2'")
    parser.add_argument("--eps", help="scale the perturbation parameters by this value")
    parser.add_argument("--tol", type=float, help="integrator tolerance (default 1e-10 or $CYCLELAB_TOL)")


def create_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="cyclelab", description="Limit cycle analysis of planar polynomial systems")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("lyap", help="Lyapunov quantities along a substitution chain")
    _add_common(p)
    p.add_argument("--max-order", type=int, default=3, help="keep going while L(k) vanishes, up to L(K)")
    p.add_argument("--step", action="append",
                   help="chain step 'k:sym=expr;...' ('-' for a plain specialization, 'k:solve=sym')")
    p.set_defaults(func=cmd_lyap)

    p = sub.add_parser("mel", help="first or second order Melnikov function and its positive roots")
    _add_common(p)
    p.add_argument("--order", type=int, default=1, choices=(1, 2))
    p.add_argument("--eps-params", help="comma separated perturbation parameters (default: perturb: line)")
    p.add_argument("--forward", action="store_true", help="keep the original time direction")
    p.set_defaults(func=cmd_mel)

    for name, func, helper in (("cofactor", cmd_cofactor, "invariance test and cofactor of a curve"),
                               ("dulac", cmd_dulac, "divergence of the system divided by a curve")):
        p = sub.add_parser(name, help=helper)
        _add_common(p)
        p.add_argument("--curve", required=True, help="polynomial in x, y and the parameters")
        p.set_defaults(func=func)

    p = sub.add_parser("center-check", help="reversibility test with a focal value cross-check")
    _add_common(p)
    p.add_argument("--max-order", type=int, default=5)
    p.set_defaults(func=cmd_center_check)

    p = sub.add_parser("kukles-conditions", help="classical center conditions of the cubic Kukles system")
    _add_common(p)
    p.set_defaults(func=cmd_kukles_conditions)

    p = sub.add_parser("simulate", help="integrate one orbit and write it as CSV")
    _add_common(p)
    _add_numeric(p)
    p.add_argument("--from", dest="start", default="0.5,0", help="initial point 'x,y'")
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--method", choices=("DOP853", "RK45"), default="DOP853")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cycles", help="limit cycles crossing the positive x-axis")
    _add_common(p)
    _add_numeric(p)
    p.add_argument("--range", default="0.05:1.5", help="section interval 'lo:hi'")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--parallel", action="store_true", help="scan the grid in worker processes")
    p.add_argument("--portrait", help="also write an SVG phase portrait")
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("reproduce", help="rerun the reproduction suite")
    p.add_argument("--filter", help="only rows whose name contains this text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--golden", help="expected values (default: the bundled gold/expected.json)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _configure_logging(verbose: int):
    env = os.environ.get("CYCLELAB_LOG")
    level = LOG_LEVELS[min(verbose, 2)]
    if env and not verbose:
        level = getattr(logging, env.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    _Source.text = ""
    try:
        if getattr(args, "tol", None) is not None:
            set_global_tolerance(args.tol)
        status = args.func(args)
    except SyntaxError as ex:
        print_syntax_error(ex, _Source.text)
        return 1
    except OSError as ex:
        print("cyclelab: error: {0}".format(ex), file=sys.stderr)
        return 1
    except ValueError as ex:
        print("cyclelab: error: {0}".format(ex), file=sys.stderr)
        return 1
    except CycleLabError as ex:
        print("cyclelab: error: {0}: {1}".format(type(ex).__name__, ex), file=sys.stderr)
        return ex.exit_code
    finally:
        set_global_tolerance(None)
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
