"""JSON encoders/decoders for every value type.

Rationals are always strings ``"p/q"``; output is deterministic (sorted keys
and sorted term lists) so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .numeric import Cyclo, as_rat, rat_str


class InputError(ValueError):
    """Malformed JSON input (carries a human-readable location)."""


def parse_rat(x: Any) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"expected a rational string 'p/q', got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational {x!r}: {e}") from None
    raise InputError(f"expected a rational string 'p/q', got {x!r}")


def cyclo_to_json(x: Cyclo) -> dict:
    x = Cyclo.coerce(x).simplify()
    return {"order": x.order, "coeffs": [rat_str(c) for c in x.coeffs]}


def cyclo_from_json(obj: Any) -> Cyclo:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return Cyclo.rational(parse_rat(obj))
    try:
        return Cyclo(int(obj["order"]), [parse_rat(c) for c in obj["coeffs"]])
    except (KeyError, TypeError) as e:
        raise InputError(f"bad Cyclo object {obj!r}: {e}") from None


def qseries_from_json(obj: Any):
    from .qseries import QSeries

    try:
        return QSeries(parse_rat(obj["truncation"]),
                       {parse_rat(e): cyclo_from_json(c) for e, c in obj["terms"]})
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad QSeries object: {e}") from None


def point_to_json(p) -> list:
    return [rat_str(t) for t in p]


def point_from_json(obj) -> tuple:
    if not isinstance(obj, list):
        raise InputError(f"expected a point list, got {obj!r}")
    return tuple(parse_rat(t) for t in obj)


def lattice_from_json(obj: Any):
    from .lattice import Lattice

    try:
        return Lattice([point_from_json(b) for b in obj["basis"]])
    except (KeyError, TypeError) as e:
        raise InputError(f"bad lattice object {obj!r}: {e}") from None
    except ValueError as e:
        raise InputError(f"bad lattice basis: {e}") from None


def arithprog_from_json(obj: Any):
    from .lattice import ArithProg

    if obj is None:
        return ArithProg.empty()
    return ArithProg.make(parse_rat(obj["step"]), parse_rat(obj["offset"]))


def degrees_from_json(obj: Any):
    from .geometry import DegreeTriple

    try:
        return DegreeTriple.of(parse_rat(obj["d1"]), parse_rat(obj["d2"]), parse_rat(obj["d"]))
    except (KeyError, TypeError) as e:
        raise InputError(f"bad degree triple {obj!r}: {e}") from None
    except ValueError as e:
        raise InputError(str(e)) from None


def quadform_from_json(obj: Any):
    from .geometry import QuadForm

    try:
        return QuadForm.of(parse_rat(obj["a"]), parse_rat(obj["b"]), parse_rat(obj["c"]))
    except (KeyError, TypeError) as e:
        raise InputError(f"bad quadratic form {obj!r}: {e}") from None
    except ValueError as e:
        raise InputError(f"bad quadratic form: {e}") from None


def params_from_json(obj: Any):
    from .geometry import ModuliParams

    obj = obj or {}
    return ModuliParams.of(*(parse_rat(obj.get(k, "0")) for k in ("v1", "v2", "w1", "w2")))


def cosetfn_from_json(obj: Any):
    from .indeftheta import CosetFunction2

    try:
        support = lattice_from_json(obj["support"])
        period = lattice_from_json(obj["period"])
        values = {point_from_json(p): cyclo_from_json(v) for p, v in obj["values"]}
    except (KeyError, TypeError) as e:
        raise InputError(f"bad coset function: missing or malformed {e}") from None
    try:
        return CosetFunction2(support, period, values)
    except ValueError as e:
        raise InputError(f"bad coset function: {e}") from None


def tensor_from_json(obj: Any):
    from .massey import MasseyTensor

    try:
        degrees = degrees_from_json(obj["degrees"])
        entries = {tuple(int(t) for t in idx): cyclo_from_json(v) for idx, v in obj["entries"]}
    except (KeyError, TypeError) as e:
        raise InputError(f"bad Massey tensor: {e}") from None
    return MasseyTensor(degrees, entries)


def _default(o):
    if isinstance(o, Fraction):
        return rat_str(o)
    if isinstance(o, Cyclo):
        return cyclo_to_json(o)
    if hasattr(o, "to_json"):
        return o.to_json()
    raise TypeError(f"cannot encode {type(o).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return json.dumps(obj, default=_default, sort_keys=True, indent=indent)


def to_plain(obj: Any) -> Any:
    """Round-trip through the encoder, giving plain dict/list/str/int data."""
    return json.loads(dumps(obj, indent=None))


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}") from None


__all__ = [
    "InputError", "parse_rat", "cyclo_to_json", "cyclo_from_json", "qseries_from_json",
    "lattice_from_json", "arithprog_from_json", "degrees_from_json", "quadform_from_json",
    "params_from_json", "cosetfn_from_json", "tensor_from_json", "dumps", "loads", "to_plain",
    "as_rat",
]
