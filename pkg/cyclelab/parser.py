import ast
import re
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import astor

from .algebra import PlanarPoly, ParamPoly, PHASE_VARS
from .exception import UndeclaredIdentifier, DuplicateDefinition

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
RESERVED = PHASE_VARS + ("h", "pi")
_LINE = re.compile(r"^\s*(?:(?P<key>params|perturb)\s*:(?P<names>.*)|(?P<lhs>dx|dy)\s*=(?P<expr>.*))$")


def _source_column(text: str, col: int) -> int:
    # map a column of the ^ -> ** rewritten text back onto the original
    shifted = 0
    for idx, ch in enumerate(text):
        if shifted >= col:
            return idx
        shifted += 2 if ch == "^" else 1
    return len(text)


class ExpressionBuilder(ast.NodeVisitor):
    """Evaluates a parsed expression into a PlanarPoly.

    Only integer literals, declared identifiers, + - * and powers with
    non-negative integer literal exponents are accepted; division is only
    allowed by a positive integer literal, which covers the rational literals
    ``p/q`` of the grammar.
    """
    def __init__(self, names: Sequence[str], filename: str, line_no: int, text: str,
                 offset: int = 0, phase_vars: bool = True):
        self.names = tuple(names)
        self.filename = filename
        self.line_no = line_no
        self.text = text
        self.offset = offset
        self.phase_vars = phase_vars

    def error(self, msg, node, cls=SyntaxError):
        col = _source_column(self.text, getattr(node, "col_offset", 0))
        return cls(msg, (self.filename, self.line_no, self.offset + col + 1, self.text))

    def visit_Expression(self, node):
        return self.visit(node.body)

    def power(self, base, exp):
        if not isinstance(exp, ast.Constant) or type(exp.value) is not int or exp.value < 0:
            raise self.error("exponent must be a non-negative integer literal, got '{0}'".format(
                astor.to_source(exp).strip()), exp)
        return base ** exp.value

    def visit_BinOp(self, node):
        if isinstance(node.op, ast.Pow):
            return self.power(self.visit(node.left), node.right)
        if isinstance(node.op, ast.Div):
            den = node.right
            if not isinstance(den, ast.Constant) or type(den.value) is not int:
                raise self.error("only division by an integer literal is allowed, got '{0}'".format(
                    astor.to_source(den).strip()), den)
            if den.value == 0:
                raise self.error("division by zero", den)
            return self.visit(node.left).scale(Fraction(1, den.value))
        lhs = self.visit(node.left)
        rhs = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        raise self.error("unsupported operator in '{0}'".format(astor.to_source(node).strip()), node)

    def visit_UnaryOp(self, node):
        operand = node.operand
        if isinstance(operand, ast.BinOp) and isinstance(operand.op, ast.Pow):
            # a sign is part of the base: -x^2 is (-x)^2
            signed = ast.copy_location(ast.UnaryOp(op=node.op, operand=operand.left), node)
            return self.power(self.visit(signed), operand.right)
        if isinstance(node.op, ast.USub):
            return -self.visit(node.operand)
        if isinstance(node.op, ast.UAdd):
            return self.visit(node.operand)
        raise self.error("unsupported unary operator", node)

    def visit_Constant(self, node):
        if type(node.value) is not int:
            raise self.error("expected an integer literal, got {0!r}".format(node.value), node)
        return PlanarPoly.const(node.value, self.names)

    def visit_Name(self, node):
        name = node.id
        if name in PHASE_VARS and self.phase_vars:
            return PlanarPoly.x(self.names) if name == "x" else PlanarPoly.y(self.names)
        if name not in self.names:
            raise self.error("undeclared identifier '{0}'".format(name), node, UndeclaredIdentifier)
        return PlanarPoly.const(ParamPoly.symbol(name, self.names), self.names)

    def generic_visit(self, node):
        raise self.error("unsupported syntax '{0}'".format(astor.to_source(node).strip()), node)


def parse_expr(text: str, names: Sequence[str] = (), filename: str = "<expr>", line_no: int = 1,
               offset: int = 0, phase_vars: bool = True) -> PlanarPoly:
    if "\n" in text.strip():
        raise SyntaxError("expression must fit on one line", (filename, line_no, offset + 1, text))
    if not text.strip():
        raise SyntaxError("empty expression", (filename, line_no, offset + 1, text))
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as ex:
        col = _source_column(text.strip(), (ex.offset or 1) - 1) + len(text) - len(text.lstrip())
        raise SyntaxError("malformed expression", (filename, line_no, offset + col + 1, text)) from None
    lead = len(text) - len(text.lstrip())
    builder = ExpressionBuilder(names, filename, line_no, text.strip(), offset + lead, phase_vars)
    return builder.visit(tree)


def parse_param_expr(text: str, names: Sequence[str], filename: str = "<expr>") -> ParamPoly:
    return parse_expr(text, names, filename, phase_vars=False).coeff(0, 0)


def _parse_names(value: str, filename: str, line_no: int, line: str, start: int) -> List[str]:
    result = []
    if not value.strip():
        return result
    cursor = start
    for token in value.split(","):
        col = cursor + len(token) - len(token.lstrip()) + 1
        cursor += len(token) + 1
        name = token.strip()
        if not IDENTIFIER.match(name):
            raise SyntaxError("invalid identifier '{0}'".format(name), (filename, line_no, col, line))
        if name in RESERVED:
            raise SyntaxError("'{0}' is reserved".format(name), (filename, line_no, col, line))
        if name in result:
            raise DuplicateDefinition("'{0}' declared twice".format(name), (filename, line_no, col, line))
        result.append(name)
    return result


def parse_bindings(text: str, names: Sequence[str], filename: str = "<subst>") -> List[Tuple[str, ParamPoly]]:
    """parse 'sym=expr;sym=expr' (',' also separates when no ';' is present)"""
    separator = ";" if ";" in text else ","
    bindings = []
    for chunk in text.split(separator):
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise SyntaxError("expected 'symbol=expression'", (filename, 1, 1, chunk))
        lhs, rhs = chunk.split("=", 1)
        lhs = lhs.strip()
        if lhs not in names:
            raise UndeclaredIdentifier("undeclared identifier '{0}'".format(lhs), (filename, 1, 1, chunk))
        bindings.append((lhs, parse_param_expr(rhs, names, filename)))
    return bindings


def parse_system(text: str, filename: str = "<system>"):
    from .sysdef import PlanarSystem
    found: Dict[str, Tuple[int, str, int, str]] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        match = _LINE.match(line)
        if match is None:
            raise SyntaxError("expected 'params:', 'perturb:', 'dx =' or 'dy ='",
                              (filename, line_no, len(line) - len(line.lstrip()) + 1, raw))
        key = match.group("key") or match.group("lhs")
        group = "names" if match.group("key") else "expr"
        if key in found:
            raise DuplicateDefinition("'{0}' defined twice (first on line {1})".format(key, found[key][0]),
                                      (filename, line_no, match.start(0) + 1, raw))
        found[key] = (line_no, match.group(group), match.start(group), raw)

    for key in ("dx", "dy"):
        if key not in found:
            last = len(text.splitlines())
            raise SyntaxError("missing '{0} = ...' definition".format(key), (filename, max(last, 1), 1, ""))

    params = []
    if "params" in found:
        line_no, value, start, raw = found["params"]
        params = _parse_names(value, filename, line_no, raw, start)
    perturb = []
    if "perturb" in found:
        line_no, value, start, raw = found["perturb"]
        perturb = _parse_names(value, filename, line_no, raw, start)
        for name in perturb:
            if name not in params:
                raise UndeclaredIdentifier("'{0}' is not a declared parameter".format(name),
                                           (filename, line_no, raw.find(name) + 1, raw))

    polys = {}
    for key in ("dx", "dy"):
        line_no, value, start, raw = found[key]
        polys[key] = parse_expr(value, params, filename, line_no, start)
    return PlanarSystem(polys["dx"], polys["dy"], params, perturb)
