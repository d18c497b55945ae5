"""Deterministic report rendering: JSON, plain text and CSV outputs"""
import json
import logging
import os
import sys
from typing import Optional

logger = logging.getLogger(__name__)

SIZE_WARNING = 1 << 20


def to_json(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_text(report, indent: int = 0) -> str:
    """indented key: value listing of a (nested) report"""
    pad = " " * indent
    lines = []
    if isinstance(report, dict):
        for key in sorted(report):
            value = report[key]
            if isinstance(value, (dict, list)) and value:
                lines.append("{0}{1}:".format(pad, key))
                lines.append(to_text(value, indent + 2).rstrip("\n"))
            else:
                lines.append("{0}{1}: {2}".format(pad, key, _scalar(value)))
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, (dict, list)):
                lines.append("{0}-".format(pad))
                lines.append(to_text(item, indent + 2).rstrip("\n"))
            else:
                lines.append("{0}- {1}".format(pad, _scalar(item)))
    else:
        lines.append(pad + _scalar(report))
    return "\n".join(lines) + "\n"


def _scalar(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "{0:.12g}".format(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def emit(content: str, path: Optional[str] = None, stream=None):
    """write content to path, or to stream (stdout) when no path is given"""
    if len(content.encode()) > SIZE_WARNING:
        logger.warning("report is %.1f MB", len(content.encode()) / SIZE_WARNING)
    if path is None:
        (stream or sys.stdout).write(content)
        return
    dirname = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(dirname):
        os.makedirs(dirname)
    with open(path, "w") as f:
        f.write(content)
    logger.info("wrote %s", path)


def emit_report(report, as_json: bool, path: Optional[str] = None, stream=None):
    emit(to_json(report) if as_json else to_text(report), path, stream)
