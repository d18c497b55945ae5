import os
import sys
from typing import List, Union


class CLIColors:
    HEADER = '\033[95m'
    OKBLUE = '\033[94m'
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def _color(code: str, text: str, stream) -> str:
    if getattr(stream, "isatty", lambda: False)() and "NO_COLOR" not in os.environ:
        return code + text + CLIColors.ENDC
    return text


def print_src(src: str, line_no: Union[List[int], int], column: int = 0, offset: int = 1,
              code_range: int = 2, stream=None):
    """print the lines around line_no of a file (or of a source string), marking
    the offending ones and, when column is given, the offending column"""
    stream = sys.stderr if stream is None else stream
    if os.path.isfile(src):
        with open(src) as f:
            lines = f.read().split("\n")
    else:
        lines = src.split("\n")
    if isinstance(line_no, int):
        line_no = [line_no]
    line_start = max(0, min(line_no) - offset - code_range)
    line_end = min(len(lines) - 1, max(line_no) - offset + code_range)
    print(_color(CLIColors.OKBLUE, "-" * 80, stream), file=stream)
    for idx in range(line_start, line_end + 1):
        if idx + offset in line_no:
            print(_color(CLIColors.FAIL, "> " + lines[idx], stream), file=stream)
            if column > 0:
                print(_color(CLIColors.FAIL, " " * (column + 1) + "^", stream), file=stream)
        else:
            print(_color(CLIColors.OKGREEN, "  " + lines[idx], stream), file=stream)
    print(_color(CLIColors.OKBLUE, "-" * 80, stream), file=stream)


def print_syntax_error(ex: SyntaxError, source: str, stream=None):
    """report a parse failure with an excerpt of the source text"""
    stream = sys.stderr if stream is None else stream
    print(_color(CLIColors.FAIL, "{0}:{1}:{2}: {3}".format(ex.filename, ex.lineno, ex.offset, ex.msg), stream),
          file=stream)
    if source and ex.lineno:
        print_src(source, ex.lineno, column=ex.offset or 0, stream=stream)
    elif ex.text:
        print_src(ex.text, 1, column=ex.offset or 0, stream=stream)


def parse_range(text: str):
    """'lo:hi' into a pair of floats"""
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError("expected lo:hi, got '{0}'".format(text))
    return float(parts[0]), float(parts[1])
