"""Named parameter sets and the complex-literal grammar used on the command line."""

from __future__ import annotations

import re

from .operator import OperatorParams, validate_params


def _float(text: str, orig: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not a complex literal: {orig!r}") from None


def _signed_unit(text: str, orig: str) -> float:
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return _float(text, orig)


def parse_complex(text: str) -> complex:
    """Parse literals such as ``1``, ``-2.5``, ``i``, ``-i``, ``1+i``, ``3-0.5i``, ``2i``."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s[-1] not in "ij":
        return complex(_float(s, text), 0.0)
    body = s[:-1]
    # split at the last sign that is not a leading sign or an exponent sign
    cut = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    if cut < 0:
        return complex(0.0, _signed_unit(body, text))
    return complex(_float(body[:cut], text), _signed_unit(body[cut:], text))


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    if z.real == 0:
        return f"{z.imag:g}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:g}{sign}{abs(z.imag):g}i"


def parse_params(text: str) -> OperatorParams:
    parts = [p for p in text.split(",")]
    if len(parts) != 6:
        raise ValueError("--params needs six comma-separated values r1,r2,s1,s2,t1,t2")
    return validate_params(*(parse_complex(p) for p in parts))


def example_one() -> OperatorParams:
    return validate_params(1, 1j, 2, 1, -1j, 1)


def example_two() -> OperatorParams:
    return validate_params(1j, 2, 1 + 1j, 1, 0, 0)


def brs(r, s) -> OperatorParams:
    return validate_params(r, r, s, s, 0, 0)


def brst(r, s, t) -> OperatorParams:
    return validate_params(r, r, s, s, t, t)


def delta() -> OperatorParams:
    return validate_params(1, 1, -1, -1, 0, 0)


def zweier(s: float) -> OperatorParams:
    s = float(s)
    if s in (0.0, 1.0):
        raise ValueError("Zweier parameter must differ from 0 and 1")
    return validate_params(s, s, 1 - s, 1 - s, 0, 0)


_FIXED = {"paper-ex1": example_one, "paper-ex2": example_two, "delta": delta}
_ARGS = {"brs": (brs, 2), "brst": (brst, 3), "zweier": (zweier, 1)}
_CALL_RE = re.compile(r"^(?P<name>[a-z]+)\((?P<args>[^()]*)\)$")

PRESET_NAMES = tuple(_FIXED) + ("brs(r,s)", "brst(r,s,t)", "zweier(s)")


def preset(name: str) -> OperatorParams:
    """Look up a preset: ``paper-ex1``, ``paper-ex2``, ``delta``, ``brs(r,s)``,
    ``brst(r,s,t)`` or ``zweier(s)``."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    m = _CALL_RE.match(key.replace(" ", ""))
    if m and m.group("name") in _ARGS:
        fn, arity = _ARGS[m.group("name")]
        args = [a for a in m.group("args").split(",") if a]
        if len(args) != arity:
            raise ValueError(f"preset {m.group('name')} takes {arity} argument(s)")
        if fn is zweier:
            z = parse_complex(args[0])
            if z.imag != 0:
                raise ValueError("Zweier parameter must be real")
            return zweier(z.real)
        return fn(*(parse_complex(a) for a in args))
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
