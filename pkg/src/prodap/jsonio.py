"""JSON wire formats.

Big integers travel as decimal strings, rationals as "p/q" (or a bare decimal
string when integral), quadratic elements as {"a": ..., "b": ...} with the
field discriminant m carried once at instance level (standalone element
encodings include it).  All report dumps are canonical: sorted keys, compact
separators, trailing newline, so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .apcore import APDescriptor
from .errors import InputError
from .exactnum import QuadElem
from .prodset import Edge, RepGraph


def enc_int(x: int) -> str:
    return str(int(x))


def dec_int(s) -> int:
    try:
        return int(s)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad integer literal {s!r}") from exc


def enc_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dec_rat(s) -> Fraction:
    try:
        if isinstance(s, str) and "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {s!r}") from exc


def enc_quad(x: QuadElem, with_m: bool = True) -> dict:
    out = {"a": enc_rat(x.a), "b": enc_rat(x.b)}
    if with_m:
        out["m"] = enc_int(x.m)
    return out


def dec_quad(obj, m: int | None = None) -> QuadElem:
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise InputError(f"bad quadratic element {obj!r}")
    mm = dec_int(obj["m"]) if "m" in obj else m
    if mm is None:
        raise InputError("quadratic element without a field discriminant")
    if m is not None and "m" in obj and dec_int(obj["m"]) != m:
        raise InputError(f"element field {obj['m']} conflicts with instance field {m}")
    return QuadElem(dec_rat(obj["a"]), dec_rat(obj["b"]), mm)


def enc_value(x, with_m: bool = True):
    if isinstance(x, QuadElem):
        return enc_quad(x, with_m)
    if isinstance(x, Fraction):
        return enc_rat(x)
    return enc_int(x)


def descriptor_to_json(desc: APDescriptor) -> dict:
    return {"D": enc_int(desc.D), "r": enc_int(desc.r), "d": enc_int(desc.d), "L": desc.L}


def descriptor_from_json(obj) -> APDescriptor:
    if not isinstance(obj, dict):
        raise InputError(f"bad descriptor {obj!r}")
    try:
        return APDescriptor(
            dec_int(obj["D"]), dec_int(obj["r"]), dec_int(obj["d"]), int(obj["L"])
        )
    except KeyError as exc:
        raise InputError(f"descriptor missing field {exc}") from exc


def graph_to_json(graph: RepGraph, field: str = "integer", m: int | None = None) -> dict:
    return {
        "field": field,
        "m": enc_int(m) if m is not None else None,
        "elements": [enc_value(x, with_m=False) for x in graph.elements],
        "edges": [
            {"u": e.u, "v": e.v, "index": e.index, "value": enc_value(e.value, with_m=False)}
            for e in graph.edges
        ],
    }


def _dec_element(obj, field: str, m: int | None):
    if field == "integer":
        return dec_int(obj)
    if field == "rational":
        return dec_rat(obj)
    if field == "quadratic":
        return dec_quad(obj, m)
    raise InputError(f"unknown field tag {field!r}")


def graph_from_json(obj) -> tuple[RepGraph, str, int | None]:
    try:
        field = obj["field"]
        m = dec_int(obj["m"]) if obj.get("m") is not None else None
        elements = tuple(_dec_element(e, field, m) for e in obj["elements"])
        edges = tuple(
            Edge(
                int(e["u"]),
                int(e["v"]),
                int(e["index"]),
                _dec_element(e["value"], field, m),
            )
            for e in obj["edges"]
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad graph object: {exc}") from exc
    n = len(elements)
    for e in edges:
        if not (0 <= e.u < n and 0 <= e.v < n):
            raise InputError(f"edge endpoint out of range: {e}")
    return RepGraph(elements, edges), field, m


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(obj))
