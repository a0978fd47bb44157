"""Cohomologies, harmonic spaces and Lefschetz-type diagnostics of a symplectic context.

Every cohomology class space is represented by a *lift*: a subspace of forms
containing the coboundaries.  Sums and intersections of subgroups of a
quotient Z/B are then ordinary sums and intersections of lifts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import linalg as la
from .exterior import Form, basis
from .linalg import Subspace, complement_basis, coordinates, intersect, kernel, image, member, quotient_dim
from .operators import MetricError, SymplecticContext

__all__ = [
    "kernel",
    "image",
    "intersect",
    "member",
    "quotient_dim",
    "CohomologyGroup",
    "HarmonicSpace",
    "Subgroup",
    "THEORIES",
    "Cohomology",
]

THEORIES = ("dr", "dlambda", "bc", "aeppli")

# kernel conditions defining each harmonic space, as operators on degree k
HARMONIC_CONDITIONS = {
    "dr": ("d", "d*"),
    "dlambda": ("dlambda", "dlambda*"),
    "bc": ("d", "dlambda", "ddlambda*"),
    "aeppli": ("ddlambda", "d*", "dlambda*"),
}


@dataclass(frozen=True)
class CohomologyGroup:
    theory: str
    degree: int
    cocycles: Subspace
    coboundaries: Subspace
    representatives: la.Matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.cocycles.dim - self.coboundaries.dim

    def representative_forms(self) -> list[Form]:
        n2 = self.cocycles.tag[0]
        return [Form.from_vector(n2, self.degree, r) for r in self.representatives]

    def class_coordinates(self, form: Form) -> la.Vector:
        """Coordinates of [form] in the representative basis."""
        v = form.to_vector()
        if not self.cocycles.contains_vector(v):
            raise ValueError("form is not a cocycle for this theory")
        return coordinates(v, self.representatives, self.coboundaries)


@dataclass(frozen=True)
class HarmonicSpace:
    theory: str
    degree: int
    space: Subspace
    conditions: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.space.dim

    def forms(self) -> list[Form]:
        return [Form.from_vector(self.space.tag[0], self.degree, r) for r in self.space.rows]

    def contains(self, form: Form) -> bool:
        return self.space.contains_vector(form.to_vector())


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a de Rham group H^k, stored as its lift (always contains B^k)."""

    name: str
    degree: int
    lift: Subspace
    coboundaries: Subspace

    @property
    def dim(self) -> int:
        return self.lift.dim - self.coboundaries.dim

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(f"{self.name}+{other.name}", self.degree, self.lift + other.lift, self.coboundaries)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(f"{self.name}&{other.name}", self.degree, intersect(self.lift, other.lift),
                        self.coboundaries)

    def contains(self, other: "Subgroup") -> bool:
        return self.lift.contains(other.lift)

    def coordinates(self, group: CohomologyGroup) -> Subspace:
        """This subgroup as a subspace of Q^{dim H} in the group's representative basis."""
        coords = [coordinates(r, group.representatives, group.coboundaries) for r in self.lift.rows]
        return Subspace.span(coords, group.dim)

    def class_forms(self) -> list[Form]:
        """Lift rows that are independent modulo coboundaries (one per class)."""
        n2 = self.lift.tag[0]
        return [Form.from_vector(n2, self.degree, r) for r in complement_basis(self.lift, self.coboundaries)]


class Cohomology:
    """Exact cohomological computations for one :class:`SymplecticContext`."""

    def __init__(self, ctx: SymplecticContext):
        self.ctx = ctx
        self.dim = ctx.dim
        self.n = ctx.n
        self._groups: dict[tuple[str, int], CohomologyGroup] = {}
        self._harmonic: dict[tuple[str, int, str], HarmonicSpace] = {}

    # -- helpers --------------------------------------------------------------
    def _ker(self, name: str, k: int) -> Subspace:
        return self.ctx.matrix(name, k).kernel(self.ctx.tag(k))

    def _im(self, name: str, source: int, k: int) -> Subspace:
        if not basis(self.dim, k):
            return Subspace.zero(0, self.ctx.tag(k))
        if not basis(self.dim, source):
            return Subspace.zero(len(basis(self.dim, k)), self.ctx.tag(k))
        return self.ctx.matrix(name, source).image(self.ctx.tag(k))

    def _ambient(self, k: int) -> int:
        return len(basis(self.dim, k))

    def _group(self, theory: str, k: int, z: Subspace, b: Subspace) -> CohomologyGroup:
        if not z.contains(b):
            raise AssertionError(f"{theory}: coboundaries not contained in cocycles in degree {k}")
        return CohomologyGroup(theory, k, z, b, complement_basis(z, b))

    # -- the four theories ------------------------------------------------------
    def de_rham(self, k: int) -> CohomologyGroup:
        key = ("dr", k)
        if key not in self._groups:
            self._groups[key] = self._group("dr", k, self._ker("d", k), self._im("d", k - 1, k))
        return self._groups[key]

    def dlambda_cohomology(self, k: int) -> CohomologyGroup:
        key = ("dlambda", k)
        if key not in self._groups:
            self._groups[key] = self._group(
                "dlambda", k, self._ker("dlambda", k), self._im("dlambda", k + 1, k)
            )
        return self._groups[key]

    def bott_chern(self, k: int) -> CohomologyGroup:
        key = ("bc", k)
        if key not in self._groups:
            z = intersect(self._ker("d", k), self._ker("dlambda", k))
            self._groups[key] = self._group("bc", k, z, self._im("ddlambda", k, k))
        return self._groups[key]

    def aeppli(self, k: int) -> CohomologyGroup:
        key = ("aeppli", k)
        if key not in self._groups:
            b = self._im("d", k - 1, k) + self._im("dlambda", k + 1, k)
            self._groups[key] = self._group("aeppli", k, self._ker("ddlambda", k), b)
        return self._groups[key]

    def group(self, theory: str, k: int) -> CohomologyGroup:
        try:
            fn = {"dr": self.de_rham, "dlambda": self.dlambda_cohomology,
                  "bc": self.bott_chern, "aeppli": self.aeppli}[theory]
        except KeyError:
            raise KeyError(f"unknown theory {theory!r}; expected one of {THEORIES}") from None
        return fn(k)

    def betti(self) -> list[int]:
        return [self.de_rham(k).dim for k in self.ctx.degrees]

    def dims(self, theory: str) -> list[int]:
        return [self.group(theory, k).dim for k in self.ctx.degrees]

    # -- harmonic spaces --------------------------------------------------------
    def harmonic(self, theory: str, k: int, method: str = "intersection") -> HarmonicSpace:
        """Harmonic k-forms for a theory, via kernel intersection or the assembled Laplacian."""
        if self.ctx.metric is None:
            raise MetricError("harmonic spaces need a metric (supply J or a metric override)")
        key = (theory, k, method)
        if key in self._harmonic:
            return self._harmonic[key]
        conds = HARMONIC_CONDITIONS[theory]
        if method == "intersection":
            space = Subspace.full(self._ambient(k), self.ctx.tag(k))
            for name in conds:
                space = intersect(space, self._ker(name, k))
        elif method == "laplacian":
            space = self.laplacian(theory, k).kernel(self.ctx.tag(k))
            conds = (f"laplacian_{theory}",)
        else:
            raise ValueError(f"unknown method {method!r}")
        h = HarmonicSpace(theory, k, space, conds)
        self._harmonic[key] = h
        return h

    def harmonic_dr(self, k: int, **kw) -> HarmonicSpace:
        return self.harmonic("dr", k, **kw)

    def harmonic_dlambda(self, k: int, **kw) -> HarmonicSpace:
        return self.harmonic("dlambda", k, **kw)

    def harmonic_bc(self, k: int, **kw) -> HarmonicSpace:
        return self.harmonic("bc", k, **kw)

    def harmonic_aeppli(self, k: int, **kw) -> HarmonicSpace:
        return self.harmonic("aeppli", k, **kw)

    def laplacian(self, theory: str, k: int):
        """Matrix of the Laplacian of a theory on degree k, assembled from the generators."""
        m = self.ctx.matrix

        def chain(*steps):
            # steps applied right to left; each (name, degree it acts on)
            out = None
            for name, deg in reversed(steps):
                op = m(name, deg)
                out = op if out is None else op @ out
            return out

        if theory == "dr":
            terms = [chain(("d", k - 1), ("d*", k)), chain(("d*", k + 1), ("d", k))]
        elif theory == "dlambda":
            terms = [chain(("dlambda*", k - 1), ("dlambda", k)), chain(("dlambda", k + 1), ("dlambda*", k))]
        elif theory == "bc":
            terms = [
                chain(("ddlambda", k), ("ddlambda*", k)),
                chain(("ddlambda*", k), ("ddlambda", k)),
                chain(("d*", k + 1), ("dlambda", k + 2), ("dlambda*", k + 1), ("d", k)),
                chain(("dlambda*", k - 1), ("d", k - 2), ("d*", k - 1), ("dlambda", k)),
                chain(("d*", k + 1), ("d", k)),
                chain(("dlambda*", k - 1), ("dlambda", k)),
            ]
        elif theory == "aeppli":
            terms = [
                chain(("ddlambda", k), ("ddlambda*", k)),
                chain(("ddlambda*", k), ("ddlambda", k)),
                chain(("d", k - 1), ("dlambda*", k - 2), ("dlambda", k - 1), ("d*", k)),
                chain(("dlambda", k + 1), ("d*", k + 2), ("d", k + 1), ("dlambda*", k)),
                chain(("d", k - 1), ("d*", k)),
                chain(("dlambda", k + 1), ("dlambda*", k)),
            ]
        else:
            raise KeyError(f"unknown theory {theory!r}")
        total = terms[0]
        for t in terms[1:]:
            total = total + t
        return total

    # -- Hard Lefschetz ---------------------------------------------------------
    def lefschetz_map_rank(self, k: int) -> int:
        """Rank of [omega^k]: H^{n-k} -> H^{n+k}."""
        src = self.de_rham(self.n - k)
        tgt = self.de_rham(self.n + k)
        wk = self.ctx.symplectic.power(k)
        images = [(wk ^ f).to_vector() for f in src.representative_forms()]
        lift = Subspace.span(list(tgt.coboundaries.rows) + images, tgt.cocycles.ambient, tgt.cocycles.tag)
        return lift.dim - tgt.coboundaries.dim

    def hlc_check(self) -> dict:
        per_k = {}
        for k in range(self.n + 1):
            b_src = self.de_rham(self.n - k).dim
            b_tgt = self.de_rham(self.n + k).dim
            per_k[k] = b_src == b_tgt == self.lefschetz_map_rank(k)
        return {"per_degree": per_k, "hlc": all(per_k.values())}

    def delta_s(self, k: int) -> tuple[int, int]:
        """(h_BC + h_A - 2 b_k, h_BC - b_k)."""
        b = self.de_rham(k).dim
        bc = self.bott_chern(k).dim
        a = self.aeppli(k).dim
        return bc + a - 2 * b, bc - b

    # -- Lefschetz subgroups ----------------------------------------------------
    def primitive(self, s: int) -> Subspace:
        return self._ker("Lambda", s)

    def lefschetz_subgroup(self, r: int, s: int) -> Subgroup:
        """H^{(r,s)}: classes [L^r beta] with beta primitive of degree s and L^r beta closed."""
        k = 2 * r + s
        dr = self.de_rham(k)
        name = f"H^({r},{s})"
        if k > self.dim or s < 0 or r < 0:
            return Subgroup(name, k, dr.coboundaries, dr.coboundaries)
        lr = self.ctx.identity(s)
        for i in range(r):
            lr = self.ctx.matrix("L", s + 2 * i) @ lr
        closed_after = (self.ctx.matrix("d", k) @ lr).kernel(self.ctx.tag(s))
        betas = intersect(self.primitive(s), closed_after)
        images = [lr.apply(v) for v in betas.rows]
        lift = Subspace.span(list(dr.coboundaries.rows) + images, dr.cocycles.ambient, dr.cocycles.tag)
        return Subgroup(name, k, lift, dr.coboundaries)

    def lefschetz_decomposition_check(self, k: int) -> dict:
        dr = self.de_rham(k)
        groups = [self.lefschetz_subgroup(r, k - 2 * r) for r in range(k // 2 + 1)]
        total = groups[0]
        for g in groups[1:]:
            total = total + g
        intersections = []
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                intersections.append(((i, k - 2 * i), (j, k - 2 * j), (groups[i] & groups[j]).dim))
        return {
            "degree": k,
            "subgroup_dims": {(r, k - 2 * r): g.dim for r, g in enumerate(groups)},
            "sum_dim": total.dim,
            "b": dr.dim,
            "direct_sum": total.dim == sum(g.dim for g in groups),
            "spans": total.dim == dr.dim,
            "intersections": intersections,
        }

    # -- J-invariant / anti-invariant subgroups ---------------------------------
    def j_eigenspace(self, sign: int) -> Subspace:
        """Omega_J^+ (sign=+1) or Omega_J^- (sign=-1) in degree 2."""
        jm = self.ctx.matrix("J", 2)
        shifted = jm - self.ctx.identity(2).scaled(sign)
        return shifted.kernel(self.ctx.tag(2))

    def j_subgroups(self) -> dict:
        dr = self.de_rham(2)
        out = {}
        for label, sign in (("plus", 1), ("minus", -1)):
            closed = intersect(dr.cocycles, self.j_eigenspace(sign))
            out[label] = Subgroup(f"H_J^{'+' if sign > 0 else '-'}", 2, closed + dr.coboundaries,
                                  dr.coboundaries)
        both = out["plus"] & out["minus"]
        total = out["plus"] + out["minus"]
        return {
            "Hplus": out["plus"],
            "Hminus": out["minus"],
            "pure": both.dim == 0,
            "full": total.dim == dr.dim,
            "level": "invariant",
        }

    # -- dimension 4: selfdual split --------------------------------------------
    def selfdual_split(self) -> dict:
        if self.dim != 4:
            raise ValueError("selfdual/anti-selfdual split is only defined in dimension 4")
        h = self.harmonic_dr(2).space
        star = self.ctx.matrix("hstar", 2)
        ident = self.ctx.identity(2)
        sd = (star - ident).kernel(self.ctx.tag(2))
        asd = (star + ident).kernel(self.ctx.tag(2))
        span_w = Subspace.span([self.ctx.omega.to_vector()], self._ambient(2), self.ctx.tag(2))
        return {
            "Hg_plus": intersect(h, sd),
            "Hg_minus": intersect(h, asd),
            "selfdual_is_omega_plus_J_minus": sd == span_w + self.j_eigenspace(-1),
            "J_plus_is_omega_plus_antiselfdual": self.j_eigenspace(1) == span_w + asd,
        }

    # -- V-space and inclusion ---------------------------------------------------
    def v_space(self) -> Subspace:
        """Bott-Chern harmonic 2-forms that are d-exact."""
        return intersect(self.harmonic_bc(2).space, self._im("d", 1, 2))

    def inclusion_check(self, k: int) -> dict:
        """Is every de Rham harmonic k-form also Bott-Chern harmonic?"""
        hdr = self.harmonic_dr(k)
        hbc = self.harmonic_bc(k)
        included = hbc.space.contains(hdr.space)
        witness = None
        if not included:
            witness = self._inclusion_witness(hdr, hbc)
        return {"degree": k, "included": included, "witness": witness}

    def _inclusion_witness(self, hdr: HarmonicSpace, hbc: HarmonicSpace) -> Form:
        # prefer a single basis monomial; fall back to an RREF basis row
        for idx in basis(self.dim, hdr.degree):
            f = Form.monomial(self.dim, idx)
            if hdr.contains(f) and not hbc.contains(f):
                return f
        for f in hdr.forms():
            if not hbc.contains(f):
                return f
        raise AssertionError("no witness found although inclusion fails")

    # -- report -----------------------------------------------------------------
    def diagnostics(self) -> dict:
        degrees = list(self.ctx.degrees)
        table = []
        for k in degrees:
            full, bc = self.delta_s(k)
            table.append({
                "k": k,
                "b": self.de_rham(k).dim,
                "h_dlambda": self.dlambda_cohomology(k).dim,
                "h_bc": self.bott_chern(k).dim,
                "h_aeppli": self.aeppli(k).dim,
                "delta_full": full,
                "delta_bc": bc,
            })
        out = {"table": table, "hlc": self.hlc_check()}
        if self.ctx.J is not None:
            j = self.j_subgroups()
            out["j"] = {"dim_plus": j["Hplus"].dim, "dim_minus": j["Hminus"].dim,
                        "pure": j["pure"], "full": j["full"], "level": j["level"]}
        if self.ctx.metric is not None:
            out["dim_v"] = self.v_space().dim
            out["inclusion"] = {k: self.inclusion_check(k)["included"] for k in degrees}
        return out


def torus_betti(n2: int) -> list[int]:
    return [comb(n2, k) for k in range(n2 + 1)]
