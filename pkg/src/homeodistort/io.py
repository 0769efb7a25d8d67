"""Text formats shared by the command line and the tests.

A sequence document is a JSON array of maps, one map per line::

    [
    {"breakpoints": [["0/1", "0/1"], ["1/2", "3/4"], ["1/1", "1/1"]], "slope_left": "1/1", "slope_right": "1/1"},
    {"breakpoints": [], "slope_left": "1/1", "slope_right": "1/1"}
    ]

:func:`serialize_sequence` writes exactly this layout, so parsing and
serializing a canonical document reproduces it byte for byte.
"""

from __future__ import annotations

import json
from importlib import resources

from .pl import PLError, PLMap

__all__ = ["ParseError", "parse_sequence", "serialize_sequence", "dumps", "fixture_text", "load_fixture"]


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def parse_sequence(text: str) -> list:
    """Strict parse of a sequence document into PLMaps."""
    dec = json.JSONDecoder()
    pos = 0
    n = len(text)

    def skip(p):
        while p < n and text[p] in " \t\r\n":
            p += 1
        return p

    pos = skip(pos)
    if pos >= n or text[pos] != "[":
        raise ParseError(_line_of(text, pos), "expected '[' opening the map list")
    pos = skip(pos + 1)
    maps = []
    if pos < n and text[pos] == "]":
        pos += 1
    else:
        while True:
            start = pos
            try:
                obj, pos = dec.raw_decode(text, pos)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.lineno, exc.msg) from None
            try:
                maps.append(PLMap.from_dict(obj))
            except (PLError, TypeError) as exc:
                raise ParseError(_line_of(text, start), f"map {len(maps)}: {exc}") from None
            pos = skip(pos)
            if pos < n and text[pos] == ",":
                pos = skip(pos + 1)
                continue
            if pos < n and text[pos] == "]":
                pos += 1
                break
            raise ParseError(_line_of(text, pos), "expected ',' or ']' after a map")
    if skip(pos) != n:
        raise ParseError(_line_of(text, skip(pos)), "trailing data after the map list")
    return maps


def dumps(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def serialize_sequence(maps) -> str:
    if not maps:
        return "[\n]\n"
    return "[\n" + ",\n".join(dumps(m.to_dict()) for m in maps) + "\n]\n"


def fixture_text(name: str) -> str:
    """Bundled sequence documents: ``four`` and ``eight``."""
    return resources.files("homeodistort").joinpath("data").joinpath(f"{name}.json").read_text()


def load_fixture(name: str) -> list:
    return parse_sequence(fixture_text(name))
