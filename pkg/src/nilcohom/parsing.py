"""Salamon notation and form expressions.

Grammar (whitespace is ignored)::

    salamon  := ["("] slot ("," slot)* [")"]          one slot per coframe element
    slot     := form                                  a 2-form, or "0"
    form     := "0" | ["+"|"-"] term (("+"|"-") term)*
    term     := [coeff "*"] word | "const(" rational ")"
    coeff    := integer | integer "/" integer
    word     := digit+            (dimension <= 9: each digit is one index)
              | index ("." index)+  (any dimension; required for degree >= 2 when dimension >= 10)

A polynomial family uses the same grammar with extra ``t`` factors::

    pterm    := (factor "*")* word,  factor := coeff | "t" | "t^" integer

Examples: ``"0,0,0,12,14,15+23+24"``, ``"16+25-34"``, ``"1/2*12"``, ``"1+t*2"``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .exterior import Form, PolyForm
from .operators import LieAlgebra

__all__ = [
    "ParseError",
    "parse_form",
    "parse_polyform",
    "parse_salamon",
    "parse_rational",
    "format_form",
    "format_polyform",
    "format_salamon",
    "format_rational",
]


class ParseError(ValueError):
    """Malformed input string."""


_TERM = re.compile(r"([+-]?)([^+-]+)")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_CONST = re.compile(r"^const\((.+)\)$")


def parse_rational(s: str) -> Fraction:
    s = str(s).strip()
    if not _RATIONAL.match(s):
        raise ParseError(f"bad rational {s!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {s!r}") from None


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _split_terms(s: str) -> list[tuple[int, str]]:
    s = re.sub(r"\s+", "", s)
    # keep the sign of rationals like const(-1/2) out of the term splitter
    if not s:
        raise ParseError("empty expression")
    pos = 0
    out = []
    while pos < len(s):
        if s.startswith("const(", pos) or s.startswith("+const(", pos) or s.startswith("-const(", pos):
            sign = -1 if s[pos] == "-" else 1
            start = pos + (1 if s[pos] in "+-" else 0)
            end = s.index(")", start) + 1 if ")" in s[start:] else -1
            if end < 0:
                raise ParseError(f"unclosed const( in {s!r}")
            out.append((sign, s[start:end]))
            pos = end
            continue
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse {s[pos:]!r}")
        if pos > 0 and not m.group(1):
            raise ParseError(f"missing operator before {m.group(2)!r}")
        out.append((-1 if m.group(1) == "-" else 1, m.group(2)))
        pos = m.end()
    return out


def _parse_word(word: str, dim: int) -> tuple[int, ...]:
    if not word:
        raise ParseError("missing index word")
    if "." in word:
        parts = word.split(".")
        if not all(p.isdigit() for p in parts):
            raise ParseError(f"bad index word {word!r}")
        idx = tuple(int(p) for p in parts)
    elif word.isdigit():
        idx = (int(word),) if dim >= 10 else tuple(int(c) for c in word)
    else:
        raise ParseError(f"bad index word {word!r}")
    for i in idx:
        if not 1 <= i <= dim:
            raise ParseError(f"index {i} in {word!r} out of range 1..{dim}")
    if len(set(idx)) != len(idx):
        raise ParseError(f"repeated index in {word!r}")
    return idx


def parse_form(s: str, dim: int, degree: int | None = None) -> Form:
    """Parse a form expression such as ``"16+25-34"`` on a ``dim``-dimensional coframe."""
    compact = re.sub(r"\s+", "", str(s))
    if compact in ("0", "+0", "-0"):
        if degree is None:
            raise ParseError("the zero form needs an explicit degree")
        return Form(dim, degree)
    terms: dict[tuple[int, ...], Fraction] = {}
    deg = degree
    for sign, body in _split_terms(compact):
        m = _CONST.match(body)
        if m:
            idx, coeff = (), parse_rational(m.group(1))
        else:
            if "*" in body:
                c, _, word = body.rpartition("*")
                coeff = parse_rational(c)
            else:
                coeff, word = Fraction(1), body
            idx = _parse_word(word, dim)
        if deg is None:
            deg = len(idx)
        elif len(idx) != deg:
            raise ParseError(f"mixed degrees in {s!r}: term {body!r} has degree {len(idx)}, expected {deg}")
        f = Form(dim, deg, {idx: sign * coeff})
        for k, v in f.items():
            terms[k] = terms.get(k, Fraction(0)) + v
    return Form(dim, deg, terms)


def parse_polyform(s: str, dim: int, degree: int | None = None) -> PolyForm:
    """Parse an expression with polynomial coefficients in t, e.g. ``"2-t*4"``."""
    compact = re.sub(r"\s+", "", str(s))
    if compact == "0":
        if degree is None:
            raise ParseError("the zero form needs an explicit degree")
        return PolyForm(dim, degree)
    total = None
    for sign, body in _split_terms(compact):
        *factors, word = body.split("*")
        coeff, power = Fraction(sign), 0
        for fac in factors:
            if fac == "t":
                power += 1
            elif fac.startswith("t^"):
                if not fac[2:].isdigit():
                    raise ParseError(f"bad power {fac!r}")
                power += int(fac[2:])
            else:
                coeff *= parse_rational(fac)
        idx = _parse_word(word, dim)
        if degree is None:
            degree = len(idx)
        elif len(idx) != degree:
            raise ParseError(f"mixed degrees in {s!r}")
        term = PolyForm.from_form(Form(dim, degree, {idx: coeff}), power)
        total = term if total is None else total + term
    return total


def parse_salamon(s: str, dim: int | None = None, name: str | None = None) -> LieAlgebra:
    """Parse structure equations like ``"0,0,0,12,14,15+23+24"``.

    Raises :class:`ParseError` for syntax errors and
    :class:`~nilcohom.operators.JacobiError` if d o d != 0.
    """
    body = re.sub(r"\s+", "", str(s))
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    slots = body.split(",")
    if dim is None:
        dim = len(slots)
    if len(slots) != dim:
        raise ParseError(f"expected {dim} slots, got {len(slots)} in {s!r}")
    diffs = []
    for i, slot in enumerate(slots, 1):
        try:
            diffs.append(parse_form(slot, dim, 2))
        except ParseError as exc:
            raise ParseError(f"slot {i} ({slot!r}): {exc}") from None
    return LieAlgebra(diffs, name=name)


def _word(idx: Sequence[int], dim: int) -> str:
    if dim >= 10 and len(idx) > 1:
        return ".".join(map(str, idx))
    return "".join(map(str, idx))


def _join(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def format_form(f: Form) -> str:
    """Canonical printer; ``parse_form(format_form(f), f.dim, f.degree) == f``."""
    if not f:
        return "0"
    parts = []
    for idx, c in f.items():
        if not idx:
            parts.append(f"const({c})")
            continue
        w = _word(idx, f.dim)
        parts.append(w if c == 1 else "-" + w if c == -1 else f"{c}*{w}")
    return _join(parts)


def format_polyform(p: PolyForm) -> str:
    if not p.terms:
        return "0"
    parts = []
    for idx, poly in p.terms.items():
        w = _word(idx, p.dim)
        for power, c in enumerate(poly):
            if not c:
                continue
            tpart = "" if power == 0 else "t*" if power == 1 else f"t^{power}*"
            if c == 1:
                parts.append(tpart + w)
            elif c == -1:
                parts.append("-" + tpart + w)
            else:
                parts.append(f"{c}*{tpart}{w}")
    return _join(parts)


def format_salamon(algebra: LieAlgebra) -> str:
    return ",".join(format_form(f) for f in algebra.differentials)
