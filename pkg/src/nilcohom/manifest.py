"""JSON manifests (schema 1).

A manifest is a single JSON object::

    {
      "schema": 1,
      "name": "kodaira",
      "dimension": 4,
      "structure": "0,0,0,23",
      "symplectic": "12+34",
      "J": {"pairing": [[1, 2], [3, 4]]},
      "metric": {"gram": [["1", "0", ...], ...]},
      "deformations": [
        {"theta": "26-45", "t_samples": ["0", "1", "1/2"],
         "coframe_family": {"coframe": ["1+t*2", ...], "pairing": [[1, 2], ...]}}
      ],
      "outputs": ["betti", "hlc"]
    }

``J`` may be ``{"pairing": ...}``, ``{"matrix": ...}`` (rows act on the
coframe: J e^i = sum_j M[i][j] e^j) or ``{"coframe": [...], "pairing": ...}``.
``theta`` may be a list; entry i is the coefficient of t^(i+1).
Only ``schema``, ``dimension``, ``structure`` and ``symplectic`` are required.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .deformation import DEFAULT_SAMPLES, DeformationFamily
from .exterior import Form
from .operators import (
    AlmostComplexStructure,
    LieAlgebra,
    MetricData,
    StructureError,
    SymplecticContext,
    SymplecticStructure,
)
from .parsing import ParseError, parse_form, parse_polyform, parse_rational, parse_salamon

__all__ = ["SCHEMA_VERSION", "ManifestError", "Manifest", "load_manifest", "fixture_path", "list_fixtures"]

SCHEMA_VERSION = 1
_KNOWN = {"schema", "name", "dimension", "structure", "symplectic", "J", "metric", "deformations", "outputs", "notes"}


class ManifestError(ValueError):
    """Invalid manifest.  ``kind`` is "parse" (syntax/schema) or "validation" (mathematics)."""

    def __init__(self, field_name: str, message: str, kind: str = "parse"):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name
        self.kind = kind


@dataclass
class Manifest:
    name: str
    algebra: LieAlgebra
    symplectic: SymplecticStructure
    J: AlmostComplexStructure | None = None
    metric: MetricData | None = None
    deformations: list[DeformationFamily] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def context(self) -> SymplecticContext:
        return SymplecticContext(self.algebra, self.symplectic, self.J, self.metric, self.name)


def _guard(field_name: str, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except ParseError as exc:
        raise ManifestError(field_name, str(exc), "parse") from None
    except StructureError as exc:
        raise ManifestError(field_name, str(exc), "validation") from None


def _rational(field_name: str, x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ManifestError(field_name, f"rationals must be integers or 'p/q' strings, got {x!r}")
    return _guard(field_name, parse_rational, str(x))


def _pairing(field_name: str, raw) -> tuple[tuple[int, int], ...]:
    if not isinstance(raw, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(i, int) and not isinstance(i, bool) for i in p)
        for p in raw
    ):
        raise ManifestError(field_name, "pairing must be a list of [i, j] integer pairs")
    return tuple((p[0], p[1]) for p in raw)


def _matrix(field_name: str, raw, n: int) -> list[list[Fraction]]:
    if not isinstance(raw, list) or len(raw) != n or not all(isinstance(r, list) and len(r) == n for r in raw):
        raise ManifestError(field_name, f"expected a {n}x{n} matrix")
    return [[_rational(f"{field_name}[{i}][{j}]", x) for j, x in enumerate(r)] for i, r in enumerate(raw)]


def _coframe(field_name: str, raw, n: int) -> list[Form]:
    if not isinstance(raw, list) or len(raw) != n:
        raise ManifestError(field_name, f"expected {n} coframe 1-forms")
    return [_guard(f"{field_name}[{i}]", parse_form, str(s), n, 1) for i, s in enumerate(raw)]


def _load_J(raw, n: int, sym: SymplecticStructure) -> AlmostComplexStructure:
    if isinstance(raw, list):
        raw = {"pairing": raw}
    if not isinstance(raw, dict):
        raise ManifestError("J", "expected an object with 'pairing', 'matrix' or 'coframe'")
    if "matrix" in raw:
        m = _matrix("J.matrix", raw["matrix"], n)
        return _guard("J.matrix", AlmostComplexStructure, m, sym)
    if "pairing" not in raw:
        raise ManifestError("J", "expected 'pairing', 'matrix' or 'coframe' + 'pairing'")
    pairs = _pairing("J.pairing", raw["pairing"])
    if "coframe" in raw:
        coframe = _coframe("J.coframe", raw["coframe"], n)
        return _guard("J", AlmostComplexStructure.from_coframe, coframe, pairs, sym)
    return _guard("J.pairing", AlmostComplexStructure.from_pairing, n, pairs, sym)


def _load_deformation(i: int, raw, algebra: LieAlgebra, sym: SymplecticStructure, name: str) -> DeformationFamily:
    where = f"deformations[{i}]"
    n = algebra.dim
    if not isinstance(raw, dict) or "theta" not in raw:
        raise ManifestError(where, "expected an object with a 'theta' field")
    thetas_raw = raw["theta"] if isinstance(raw["theta"], list) else [raw["theta"]]
    thetas = [_guard(f"{where}.theta", parse_form, str(s), n, 2) for s in thetas_raw]
    samples = DEFAULT_SAMPLES
    if "t_samples" in raw:
        if not isinstance(raw["t_samples"], list) or not raw["t_samples"]:
            raise ManifestError(f"{where}.t_samples", "expected a non-empty list of rationals")
        samples = tuple(_rational(f"{where}.t_samples", x) for x in raw["t_samples"])
    coframe_family = pairing = None
    if "coframe_family" in raw:
        cf = raw["coframe_family"]
        if not isinstance(cf, dict) or "coframe" not in cf or "pairing" not in cf:
            raise ManifestError(f"{where}.coframe_family", "expected {'coframe': [...], 'pairing': [...]}")
        if not isinstance(cf["coframe"], list) or len(cf["coframe"]) != n:
            raise ManifestError(f"{where}.coframe_family.coframe", f"expected {n} entries")
        coframe_family = tuple(
            _guard(f"{where}.coframe_family.coframe[{j}]", parse_polyform, str(s), n, 1)
            for j, s in enumerate(cf["coframe"])
        )
        pairing = _pairing(f"{where}.coframe_family.pairing", cf["pairing"])
    try:
        return DeformationFamily(algebra, sym.omega, tuple(thetas), samples, coframe_family, pairing,
                                 raw.get("name", f"{name}[{i}]"))
    except StructureError as exc:
        raise ManifestError(f"{where}.theta", str(exc), "validation") from None
    except ValueError as exc:
        raise ManifestError(where, str(exc)) from None


def load_manifest(source: str | Path | dict[str, Any]) -> Manifest:
    """Load and validate a manifest from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        raw = source
    else:
        text = None
        if isinstance(source, Path) or not str(source).lstrip().startswith("{"):
            try:
                text = Path(source).read_text(encoding="utf-8")
            except OSError as exc:
                raise ManifestError("input", f"cannot read {source}: {exc.strerror}") from None
        else:
            text = str(source)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ManifestError("input", f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ManifestError("input", "manifest must be a JSON object")
    unknown = sorted(set(raw) - _KNOWN)
    if unknown:
        raise ManifestError(unknown[0], "unknown field")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ManifestError("schema", f"expected schema {SCHEMA_VERSION}, got {raw.get('schema')!r}")
    for key in ("dimension", "structure", "symplectic"):
        if key not in raw:
            raise ManifestError(key, "missing required field")
    n = raw["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2 or n % 2:
        raise ManifestError("dimension", f"must be a positive even integer, got {n!r}")
    name = raw.get("name", "manifest")
    if not isinstance(raw["structure"], str):
        raise ManifestError("structure", "must be a Salamon string")
    algebra = _guard("structure", parse_salamon, raw["structure"], n, name)
    omega = _guard("symplectic", parse_form, str(raw["symplectic"]), n, 2)
    sym = _guard("symplectic", SymplecticStructure, algebra, omega)
    J = _load_J(raw["J"], n, sym) if raw.get("J") is not None else None
    metric = None
    if raw.get("metric") is not None:
        m = raw["metric"]
        if not isinstance(m, dict) or "gram" not in m:
            raise ManifestError("metric", "expected {'gram': [[...]]}")
        gram = _matrix("metric.gram", m["gram"], n)
        metric = _guard("metric.gram", MetricData.from_gram, gram, sym.volume)
    defs = raw.get("deformations", [])
    if not isinstance(defs, list):
        raise ManifestError("deformations", "expected a list")
    families = [_load_deformation(i, d, algebra, sym, name) for i, d in enumerate(defs)]
    outputs = raw.get("outputs", [])
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise ManifestError("outputs", "expected a list of strings")
    return Manifest(name, algebra, sym, J, metric, families, list(outputs), raw)


_FIXTURES = Path(__file__).parent / "fixtures"


def list_fixtures() -> list[str]:
    return sorted(p.stem for p in _FIXTURES.glob("*.json"))


def fixture_path(name: str) -> Path:
    p = _FIXTURES / f"{name}.json"
    if not p.exists():
        raise ManifestError("fixture", f"unknown fixture {name!r}; available: {', '.join(list_fixtures())}")
    return p
