"""Serialisation helpers for CLI output."""
from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Mapping, Sequence

import numpy as np


def _plain(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    return obj


def dumps(obj) -> str:
    """Compact JSON with reals at 17 significant digits and infinities as strings."""
    obj = _plain(obj)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return '"nan"'
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Mapping):
        return "{" + ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, Sequence):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _flat(record: Mapping, prefix: str = "") -> dict:
    out = {}
    for k, v in record.items():
        key = f"{prefix}{k}"
        v = _plain(v)
        if isinstance(v, Mapping):
            out.update(_flat(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = dumps(v)
        elif isinstance(v, float):
            out[key] = dumps(v).strip('"')
        else:
            out[key] = v
    return out


def to_csv(records: Sequence[Mapping]) -> str:
    rows = [_flat(r) for r in records]
    fields = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def to_pretty(record: Mapping) -> str:
    flat = _flat(record)
    width = max((len(k) for k in flat), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in flat.items())
