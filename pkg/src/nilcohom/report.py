"""Report assembly and rendering (canonical JSON and aligned text)."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .cohomology import THEORIES, Cohomology
from .deformation import DeformationFamily, jump_summary, sweep
from .exterior import Form, PolyForm
from .linalg import Subspace
from .manifest import Manifest
from .parsing import format_form, format_polyform, format_salamon

__all__ = [
    "jsonable",
    "dumps",
    "render_text",
    "SECTIONS",
    "validate_report",
    "betti_report",
    "cohomology_report",
    "harmonic_report",
    "hlc_report",
    "delta_report",
    "lefschetz_groups_report",
    "lefschetz_check_report",
    "jdecomp_report",
    "vspace_report",
    "inclusion_report",
    "deform_report",
    "full_report",
]

THEORY_LABELS = {"dr": "de Rham", "dlambda": "d^Lambda", "bc": "Bott-Chern", "aeppli": "Aeppli"}


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def jsonable(obj: Any) -> Any:
    """Rationals become "p/q" strings, forms their canonical expression, subspaces their basis."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Form):
        return format_form(obj)
    if isinstance(obj, PolyForm):
        return format_polyform(obj)
    if isinstance(obj, Subspace):
        n2, k = obj.tag
        return [format_form(Form.from_vector(n2, k, r)) for r in obj.rows]
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- text rendering -------------------------------------------------------------
def _scalar(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "-"
    return str(v)


def _is_table(v) -> bool:
    return (
        isinstance(v, list) and len(v) > 0 and all(isinstance(r, dict) for r in v)
        and all(list(r) == list(v[0]) for r in v)
        and all(not isinstance(x, (dict, list)) for r in v for x in r.values())
    )


def _table(rows: list[dict], indent: str) -> list[str]:
    cols = list(rows[0])
    cells = [[_scalar(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = [indent + "  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    for row in cells:
        out.append(indent + "  ".join(x.rjust(w) for x, w in zip(row, widths)))
    return out


def _render(obj, indent: str) -> list[str]:
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.extend(_render(v, indent + "  ") if v else [indent + "  (none)"])
        elif _is_table(v):
            lines.append(f"{indent}{k}:")
            lines.extend(_table(v, indent + "  "))
        elif isinstance(v, list):
            if all(not isinstance(x, (dict, list)) for x in v):
                lines.append(f"{indent}{k}: [{', '.join(_scalar(x) for x in v)}]")
            else:
                lines.append(f"{indent}{k}:")
                for i, x in enumerate(v):
                    if isinstance(x, dict):
                        lines.append(f"{indent}  - [{i}]")
                        lines.extend(_render(x, indent + "    "))
                    else:
                        lines.append(f"{indent}  - {jsonable(x)}")
        else:
            lines.append(f"{indent}{k}: {_scalar(v)}")
    return lines


def render_text(report: dict) -> str:
    return "\n".join(_render(jsonable(report), "")) + "\n"


# -- report sections ------------------------------------------------------------
def _header(m: Manifest) -> dict:
    return {
        "name": m.name,
        "dimension": m.dim,
        "structure": format_salamon(m.algebra),
        "omega": format_form(m.symplectic.omega),
    }


def validate_report(m: Manifest) -> dict:
    ctx = m.context()
    out = _header(m)
    out["checks"] = {
        "d_squared_zero": True,
        "omega_closed": True,
        "omega_nondegenerate": True,
        "J": "compatible" if m.J is not None else "absent",
        "metric": "override" if m.raw.get("metric") is not None else ("from J" if ctx.metric else "absent"),
        "deformations": len(m.deformations),
    }
    out["volume_coefficient"] = m.symplectic.volume.coefficient(tuple(range(1, m.dim + 1)))
    out["valid"] = True
    return out


def betti_report(coh: Cohomology) -> dict:
    return {"betti": coh.betti()}


def _degrees(coh: Cohomology, degrees: Sequence[int] | None) -> list[int]:
    return list(coh.ctx.degrees) if degrees is None else list(degrees)


def cohomology_report(coh: Cohomology, theory: str, degrees: Sequence[int] | None = None) -> dict:
    per = {}
    for k in _degrees(coh, degrees):
        g = coh.group(theory, k)
        per[k] = {"dim": g.dim, "representatives": g.representative_forms()}
    return {"theory": theory, "label": THEORY_LABELS[theory], "degrees": per}


def harmonic_report(coh: Cohomology, theory: str, degrees: Sequence[int] | None = None) -> dict:
    per = {}
    for k in _degrees(coh, degrees):
        h = coh.harmonic(theory, k)
        per[k] = {
            "dim": h.dim,
            "dim_laplacian": coh.harmonic(theory, k, method="laplacian").dim,
            "dim_quotient": coh.group(theory, k).dim,
            "basis": h.forms(),
        }
    return {"theory": theory, "label": THEORY_LABELS[theory], "degrees": per}


def hlc_report(coh: Cohomology) -> dict:
    chk = coh.hlc_check()
    rows = [
        {"k": k, "b_n-k": coh.de_rham(coh.n - k).dim, "b_n+k": coh.de_rham(coh.n + k).dim,
         "rank": coh.lefschetz_map_rank(k), "iso": ok}
        for k, ok in chk["per_degree"].items()
    ]
    return {"hlc": chk["hlc"], "lefschetz_maps": rows}


def delta_report(coh: Cohomology) -> dict:
    rows = []
    for k in coh.ctx.degrees:
        full, bc = coh.delta_s(k)
        rows.append({"k": k, "b": coh.de_rham(k).dim, "h_bc": coh.bott_chern(k).dim,
                     "h_aeppli": coh.aeppli(k).dim, "delta_full": full, "delta_bc": bc})
    return {"delta": rows}


def lefschetz_groups_report(coh: Cohomology) -> dict:
    groups = {}
    for k in coh.ctx.degrees:
        for r in range(k // 2 + 1):
            g = coh.lefschetz_subgroup(r, k - 2 * r)
            groups[f"H^({r},{k - 2 * r})"] = {"degree": k, "dim": g.dim, "classes": g.class_forms()}
    return {"groups": groups}


def lefschetz_check_report(coh: Cohomology) -> dict:
    per = {}
    for k in coh.ctx.degrees:
        c = coh.lefschetz_decomposition_check(k)
        per[k] = {
            "b": c["b"],
            "subgroup_dims": {f"({r},{s})": d for (r, s), d in c["subgroup_dims"].items()},
            "sum_dim": c["sum_dim"],
            "direct_sum": c["direct_sum"],
            "spans": c["spans"],
            "intersections": {f"({a[0]},{a[1]})&({b[0]},{b[1]})": d for a, b, d in c["intersections"]},
        }
    return {"degrees": per}


def jdecomp_report(coh: Cohomology) -> dict:
    j = coh.j_subgroups()
    out = {
        "level": j["level"],
        "H_J+": {"dim": j["Hplus"].dim, "classes": j["Hplus"].class_forms()},
        "H_J-": {"dim": j["Hminus"].dim, "classes": j["Hminus"].class_forms()},
        "b2": coh.de_rham(2).dim,
        "pure": j["pure"],
        "full": j["full"],
    }
    if coh.dim == 4:
        sd = coh.selfdual_split()
        out["selfdual"] = {
            "Hg+": sd["Hg_plus"],
            "Hg-": sd["Hg_minus"],
            "selfdual_is_omega_plus_J-": sd["selfdual_is_omega_plus_J_minus"],
            "J+_is_omega_plus_antiselfdual": sd["J_plus_is_omega_plus_antiselfdual"],
        }
    return out


def vspace_report(coh: Cohomology) -> dict:
    v = coh.v_space()
    return {
        "basis": v,
        "dim": v.dim,
        "delta_bc_2": coh.delta_s(2)[1],
        "inclusion_2": coh.inclusion_check(2)["included"],
    }


def inclusion_report(coh: Cohomology, degrees: Sequence[int] | None = None) -> dict:
    per = {}
    for k in _degrees(coh, degrees):
        c = coh.inclusion_check(k)
        w = c["witness"]
        entry = {"included": c["included"], "witness": w}
        if w is not None:
            entry["dlambda_witness"] = coh.ctx.dlambda(w)
        per[k] = entry
    return {"degrees": per}


def deform_report(family: DeformationFamily, samples: Sequence | None = None, small_t=1) -> dict:
    r = sweep(family, small_t=small_t, samples=samples)
    rows = r.rows
    quantities = list(rows[0]["dims"])
    table = []
    for q in quantities:
        entry = {"quantity": q}
        for row in rows:
            entry[f"t={row['t']}"] = row["dims"][q]
        table.append(entry)
    decomposition = {}
    for row in rows:
        decomposition[f"t={row['t']}"] = {
            k: ("direct+spans" if v["direct_sum"] and v["spans"] else
                "direct" if v["direct_sum"] else "spans" if v["spans"] else "neither") + f" (sum {v['sum_dim']})"
            for k, v in row["lefschetz"].items()
        }
    out = {
        "family": family.name,
        "omega_t": {f"t^{i}": th for i, th in enumerate((family.omega,) + family.thetas)},
        "samples": r.t_values,
        "excluded": [{"t": t, "reason": why} for t, why in r.excluded],
        "table": table,
        "hlc": {f"t={row['t']}": row["hlc"] for row in rows},
        "lefschetz_decomposition": decomposition,
        "jumps": [{"quantity": q, "t": ", ".join(str(t) for t in ts), "direction": d} for q, ts, d in jump_summary(r)],
        "small_t": r.small_t,
        "semicontinuity_violations": [{"t": t, "quantity": q} for t, q in r.semicontinuity_violations],
        "semicontinuous": r.semicontinuous,
    }
    if family.coframe_family is not None:
        out["coframe_family"] = list(family.coframe_family)
        out["structure_equations"] = {f"t={row['t']}": row["structure_equations"] for row in rows}
        out["inclusion"] = {f"t={row['t']}": row["inclusion"] for row in rows}
    return out


SECTIONS = ("validate", "betti", "cohomology", "harmonic", "hlc", "delta", "lefschetz", "jdecomp", "vspace",
            "inclusion", "deform")


def full_report(m: Manifest, samples: Sequence | None = None, sections: Sequence[str] | None = None) -> dict:
    """Every section that the manifest's data supports, in a fixed order."""
    coh = Cohomology(m.context())
    want = list(sections) if sections else list(SECTIONS)
    has_metric = coh.ctx.metric is not None
    out: dict = {}
    if "validate" in want:
        out["validate"] = validate_report(m)
    if "betti" in want:
        out["betti"] = coh.betti()
    if "cohomology" in want:
        out["cohomology"] = {t: {k: coh.group(t, k).dim for k in coh.ctx.degrees} for t in THEORIES}
    if "harmonic" in want and has_metric:
        out["harmonic"] = {t: harmonic_report(coh, t)["degrees"] for t in THEORIES}
    if "hlc" in want:
        out["hlc"] = hlc_report(coh)
    if "delta" in want:
        out["delta"] = delta_report(coh)["delta"]
    if "lefschetz" in want:
        out["lefschetz"] = {"groups": lefschetz_groups_report(coh)["groups"],
                            "check": lefschetz_check_report(coh)["degrees"]}
    if "jdecomp" in want and coh.ctx.J is not None:
        out["jdecomp"] = jdecomp_report(coh)
    if "vspace" in want and has_metric:
        out["vspace"] = vspace_report(coh)
    if "inclusion" in want and has_metric:
        out["inclusion"] = inclusion_report(coh)["degrees"]
    if "deform" in want and m.deformations:
        out["deform"] = [deform_report(f, samples) for f in m.deformations]
    return out
