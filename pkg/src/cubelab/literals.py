"""Text literals for vertex sets and cube functions.

Set literals::

    subcube:d              free coordinates 0..d-1, the rest fixed to 0
    subcube:d@i=b,j=b,...  the listed n-d coordinates fixed, the others free
    ball:r@center          Hamming ball (center decimal or 0x-hex)
    hex:<hex digits>       bitmask; bit v set means vertex v is a member
    indices:[i, ...]       JSON array inline, or indices:<path to a JSON array>
    random:<size>,<seed>   uniformly random subset of the given size

Function literals are a JSON array of 2^n reals (inline or a file path) or
``indicator:<set literal>``.
"""
from __future__ import annotations

import json
import os

import numpy as np

from .cube import CubeFunction, VertexSet, make_ball, make_subcube


class LiteralError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def _int(text: str, token: str, position: int) -> int:
    try:
        return int(token, 0)
    except ValueError:
        raise LiteralError(f"expected an integer, got {token!r}", text, position) from None


def _json_array(text: str, payload: str, position: int):
    source = payload
    if not payload.lstrip().startswith("["):
        if not os.path.isfile(payload):
            raise LiteralError(f"expected a JSON array or a file path, got {payload!r}",
                               text, position)
        with open(payload) as fh:
            source = fh.read()
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise LiteralError(f"bad JSON ({exc.msg})", text, position + exc.pos) from None
    if not isinstance(data, list):
        raise LiteralError("expected a JSON array", text, position)
    return data


def parse_set(text: str, n: int) -> VertexSet:
    kind, sep, payload = text.partition(":")
    if not sep:
        raise LiteralError("missing ':' after the literal kind", text, len(text))
    start = len(kind) + 1
    try:
        if kind == "subcube":
            head, at, fixed = payload.partition("@")
            d = _int(text, head, start)
            if not 0 <= d <= n:
                raise LiteralError(f"subcube dimension {d} outside [0, {n}]", text, start)
            if not at:
                return make_subcube(n, range(d))
            assign = {}
            pos = start + len(head) + 1
            for item in fixed.split(","):
                coord, eq, bit = item.partition("=")
                if not eq:
                    raise LiteralError(f"expected coord=bit, got {item!r}", text, pos)
                assign[_int(text, coord, pos)] = _int(text, bit, pos + len(coord) + 1)
                pos += len(item) + 1
            if len(assign) != n - d:
                raise LiteralError(f"need exactly {n - d} fixed coordinates, got {len(assign)}",
                                   text, start + len(head) + 1)
            free = [i for i in range(n) if i not in assign]
            return make_subcube(n, free, assign)
        if kind == "ball":
            head, at, center = payload.partition("@")
            if not at:
                raise LiteralError("expected ball:r@center", text, start + len(head))
            return make_ball(n, _int(text, center, start + len(head) + 1), _int(text, head, start))
        if kind == "hex":
            digits = payload.lower().removeprefix("0x")
            try:
                bits = int(digits, 16)
            except ValueError:
                raise LiteralError(f"expected hex digits, got {payload!r}", text, start) from None
            return VertexSet.from_int(n, bits)
        if kind == "indices":
            data = _json_array(text, payload, start)
            if not all(isinstance(v, int) for v in data):
                raise LiteralError("indices must be integers", text, start)
            return VertexSet(n, data)
        if kind == "random":
            size_s, comma, seed_s = payload.partition(",")
            if not comma:
                raise LiteralError("expected random:<size>,<seed>", text, start + len(size_s))
            size = _int(text, size_s, start)
            seed = _int(text, seed_s, start + len(size_s) + 1)
            if not 0 <= size <= 2 ** n:
                raise LiteralError(f"size {size} outside [0, 2^{n}]", text, start)
            rng = np.random.default_rng(seed)
            return VertexSet(n, rng.choice(2 ** n, size=size, replace=False))
    except LiteralError:
        raise
    except ValueError as exc:
        raise LiteralError(str(exc), text, start) from None
    raise LiteralError(f"unknown set literal kind {kind!r}", text, 0)


def parse_function(text: str, n: int) -> CubeFunction:
    if text.startswith("indicator:"):
        return CubeFunction.indicator(parse_set(text[len("indicator:"):], n))
    data = _json_array(text, text, 0)
    if len(data) != 2 ** n:
        raise LiteralError(f"expected {2 ** n} values, got {len(data)}", text, 0)
    try:
        return CubeFunction([float(x) for x in data])
    except (TypeError, ValueError):
        raise LiteralError("function values must be numbers", text, 0) from None
