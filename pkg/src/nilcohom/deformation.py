"""Families omega_t = omega + sum_i t^i theta_i sampled at rational t."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .cohomology import Cohomology
from .exterior import Form, PolyForm, substitute
from .parsing import format_form
from .operators import (
    AlmostComplexStructure,
    DegenerateFormError,
    IncompatibleStructureError,
    LieAlgebra,
    NotClosedError,
    SymplecticContext,
    SymplecticStructure,
)

__all__ = [
    "DEFAULT_SAMPLES",
    "DeformationFamily",
    "SweepError",
    "SweepReport",
    "evaluate_family",
    "sweep",
    "jump_summary",
    "coframe_structure_equations",
]

DEFAULT_SAMPLES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 3))


class SweepError(ValueError):
    """A sweep cannot be carried out."""


def coframe_structure_equations(algebra: LieAlgebra, coframe: Sequence[Form]) -> list[Form]:
    """dE^i written in the coframe E^1..E^n (E^i = sum_j P[i][j] e^j)."""
    n = algebra.dim
    p = la.as_matrix([f.to_vector() for f in coframe])
    if la.det(p) == 0:
        raise IncompatibleStructureError("coframe is not invertible")
    q = la.inverse(p)
    back = [Form(n, 1, {(j + 1,): q[i][j] for j in range(n)}) for i in range(n)]
    return [substitute(algebra.d(f), back) for f in coframe]


@dataclass(frozen=True)
class DeformationFamily:
    """omega_t = omega + t theta_1 + t^2 theta_2 + ...

    ``coframe_family`` (degree-1 PolyForms E^i_t) together with ``pairing``
    defines J_t; without it the sweep is metric-free.
    """

    algebra: LieAlgebra
    omega: Form
    thetas: tuple[Form, ...]
    t_samples: tuple[Fraction, ...] = DEFAULT_SAMPLES
    coframe_family: tuple[PolyForm, ...] | None = None
    pairing: tuple[tuple[int, int], ...] | None = None
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(self.thetas))
        object.__setattr__(self, "t_samples", tuple(Fraction(t) for t in self.t_samples))
        for i, th in enumerate(self.thetas, 1):
            if th.degree != 2:
                raise ValueError(f"theta_{i} must be a 2-form, got degree {th.degree}")
            if self.algebra.d(th):
                raise NotClosedError(f"theta_{i} is not closed: d theta_{i} = {format_form(self.algebra.d(th))}")
        if self.coframe_family is not None:
            object.__setattr__(self, "coframe_family", tuple(self.coframe_family))
            if len(self.coframe_family) != self.algebra.dim:
                raise ValueError("coframe_family needs one 1-form per coframe element")
            if self.pairing is None:
                raise ValueError("coframe_family requires a pairing")

    @property
    def theta(self) -> Form:
        return self.thetas[0] if self.thetas else Form(self.algebra.dim, 2)

    def omega_at(self, t) -> Form:
        t = Fraction(t)
        out = self.omega
        for i, th in enumerate(self.thetas, 1):
            out = out + th * t**i
        return out

    def coframe_at(self, t) -> list[Form] | None:
        if self.coframe_family is None:
            return None
        return [p.evaluate(Fraction(t)) for p in self.coframe_family]


def evaluate_family(f: DeformationFamily, t) -> SymplecticContext:
    """Context at parameter t; raises DegenerateFormError if omega_t^n = 0."""
    t = Fraction(t)
    sym = SymplecticStructure(f.algebra, f.omega_at(t))
    J = None
    coframe = f.coframe_at(t)
    if coframe is not None:
        J = AlmostComplexStructure.from_coframe(coframe, f.pairing, sym)
    return SymplecticContext(f.algebra, sym, J, name=f"{f.name or f.algebra.name}@t={t}")


def _row(f: DeformationFamily, t: Fraction, ctx: SymplecticContext) -> dict:
    coh = Cohomology(ctx)
    diag = coh.diagnostics()
    dims: dict[str, int] = {}
    for r in diag["table"]:
        k = r["k"]
        for key in ("b", "h_bc", "h_aeppli", "h_dlambda", "delta_bc", "delta_full"):
            dims[f"{key}[{k}]"] = r[key]
    lefschetz = {}
    for k in ctx.degrees:
        chk = coh.lefschetz_decomposition_check(k)
        for (r, s), dim in chk["subgroup_dims"].items():
            dims[f"h({r},{s})"] = dim
        lefschetz[k] = {"direct_sum": chk["direct_sum"], "spans": chk["spans"], "sum_dim": chk["sum_dim"]}
    row = {"t": t, "dims": dims, "lefschetz": lefschetz, "hlc": diag["hlc"]["hlc"]}
    if ctx.metric is not None:
        for k in ctx.degrees:
            dims[f"harmonic_bc[{k}]"] = coh.harmonic_bc(k).dim
        dims["dim_v"] = diag["dim_v"]
        dims["dim_J+"] = diag["j"]["dim_plus"]
        dims["dim_J-"] = diag["j"]["dim_minus"]
        row["inclusion"] = diag["inclusion"]
        row["structure_equations"] = coframe_structure_equations(f.algebra, f.coframe_at(t))
    return row


@dataclass
class SweepReport:
    family: DeformationFamily
    rows: list[dict]
    excluded: list[tuple[Fraction, str]] = field(default_factory=list)
    small_t: Fraction = Fraction(1)
    semicontinuity_violations: list[tuple[Fraction, str]] = field(default_factory=list)

    @property
    def t_values(self) -> list[Fraction]:
        return [r["t"] for r in self.rows]

    def row(self, t) -> dict:
        t = Fraction(t)
        for r in self.rows:
            if r["t"] == t:
                return r
        raise KeyError(f"t = {t} is not a retained sample")

    def column(self, quantity: str) -> list[int]:
        return [r["dims"][quantity] for r in self.rows]

    @property
    def semicontinuous(self) -> bool:
        return not self.semicontinuity_violations


# quantities that upper-semicontinuity forbids from jumping up near t = 0
_SEMICONTINUOUS = ("h_bc", "h_aeppli", "h_dlambda")


def sweep(f: DeformationFamily, small_t=1, samples: Sequence | None = None) -> SweepReport:
    """Evaluate every sample; degenerate samples are excluded and reported."""
    ts = sorted(set(Fraction(t) for t in (samples if samples is not None else f.t_samples)), key=lambda x: (abs(x), x))
    if Fraction(0) not in ts or len(ts) < 2:
        raise SweepError("a sweep needs at least two samples including t = 0")
    rows, excluded = [], []
    for t in ts:
        try:
            ctx = evaluate_family(f, t)
        except (DegenerateFormError, IncompatibleStructureError) as exc:
            excluded.append((t, str(exc)))
            continue
        rows.append(_row(f, t, ctx))
    if not rows or rows[0]["t"] != 0:
        raise SweepError("omega_0 is not usable, so there is nothing to compare against")
    small_t = Fraction(small_t)
    base = rows[0]["dims"]
    violations = []
    for r in rows[1:]:
        if abs(r["t"]) > small_t:
            continue
        for q, v in r["dims"].items():
            if q.split("[")[0] in _SEMICONTINUOUS and v > base[q]:
                violations.append((r["t"], q))
    return SweepReport(f, rows, excluded, small_t, violations)


def jump_summary(r: SweepReport) -> list[tuple[str, list[Fraction], str]]:
    """(quantity, t values where it differs from t=0, "drop" | "jump" | "mixed")."""
    base = r.rows[0]["dims"]
    out = []
    for q in base:
        diffs = [(row["t"], row["dims"][q] - base[q]) for row in r.rows[1:] if row["dims"][q] != base[q]]
        if not diffs:
            continue
        if all(d < 0 for _, d in diffs):
            direction = "drop"
        elif all(d > 0 for _, d in diffs):
            direction = "jump"
        else:
            direction = "mixed"
        out.append((q, [t for t, _ in diffs], direction))
    return out
