class CycleLabError(Exception):
    """Base class of every error raised by cyclelab"""


class UsageError(CycleLabError):
    exit_code = 1


class MathDomainError(CycleLabError):
    exit_code = 2


# usage errors
class UnknownSymbol(UsageError):
    def __init__(self, name, universe=()):
        self.name = name
        msg = "unknown symbol '{0}'".format(name)
        if universe:
            msg += " (declared: {0})".format(", ".join(universe))
        super().__init__(msg)


class UnboundSymbol(UsageError):
    def __init__(self, names):
        if isinstance(names, str):
            names = [names]
        self.names = sorted(names)
        super().__init__("unbound symbol(s): {0}".format(", ".join(self.names)))


class ConflictingOptions(UsageError):
    pass


class BadTolerance(UsageError):
    pass


# algebra
class ZeroPolynomial(MathDomainError):
    pass


class PiInExactMode(MathDomainError):
    pass


class PiPowerMismatch(MathDomainError):
    pass


# system definitions
class BadIndex(MathDomainError):
    pass


class NotPerturbationOfLinearCenter(MathDomainError):
    pass


class NonlinearInEps(MathDomainError):
    pass


# lyapunov
class NotCenterFocus(MathDomainError):
    pass


class NonzeroLinearTrace(MathDomainError):
    def __init__(self, trace):
        self.trace = trace
        super().__init__("linear trace is not zero: lambda = {0}; substitute lambda = 0 first".format(trace))


class WrongLinearPart(MathDomainError):
    pass


class SubstitutionDoesNotVanish(MathDomainError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__("bindings do not annihilate L({0}), left with {1}".format(index, value))


class UnsolvableStep(MathDomainError):
    pass


class ResidualNotZero(MathDomainError):
    pass


# melnikov
class HalfPowerResidue(MathDomainError):
    pass


class NonzeroConstantTerm(MathDomainError):
    pass


class DimensionMismatch(MathDomainError):
    pass


class FirstOrderNotZero(MathDomainError):
    def __init__(self, m1):
        self.m1 = m1
        super().__init__("first order Melnikov function does not vanish: M1 = {0}".format(m1))


class DecompositionNotFound(MathDomainError):
    pass


class UnsupportedPoleOrder(MathDomainError):
    pass


# invariant curves
class ZeroCurve(MathDomainError):
    pass


class NonMonicUndividable(MathDomainError):
    pass


# numerics
class StepSizeUnderflow(MathDomainError):
    pass


class Blowup(MathDomainError):
    pass


class NoReturn(MathDomainError):
    pass


class QuadratureError(MathDomainError):
    pass


# parse errors follow the builtin SyntaxError protocol: (msg, (filename, line, col, text))
class UndeclaredIdentifier(SyntaxError):
    pass


class DuplicateDefinition(SyntaxError):
    pass
