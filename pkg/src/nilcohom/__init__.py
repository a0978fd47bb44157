"""Exact symplectic cohomologies (de Rham, d^Lambda, Bott-Chern, Aeppli) of nilmanifolds from invariant forms."""
from .cohomology import THEORIES, Cohomology
from .deformation import DeformationFamily, evaluate_family, jump_summary, sweep
from .exterior import Form, PolyForm, wedge
from .manifest import Manifest, ManifestError, load_manifest
from .operators import AlmostComplexStructure, LieAlgebra, MetricData, SymplecticContext, SymplecticStructure
from .parsing import format_form, format_salamon, parse_form, parse_salamon

__version__ = "0.1.0"

__all__ = [
    "THEORIES",
    "Cohomology",
    "DeformationFamily",
    "evaluate_family",
    "jump_summary",
    "sweep",
    "Form",
    "PolyForm",
    "wedge",
    "Manifest",
    "ManifestError",
    "load_manifest",
    "AlmostComplexStructure",
    "LieAlgebra",
    "MetricData",
    "SymplecticContext",
    "SymplecticStructure",
    "format_form",
    "format_salamon",
    "parse_form",
    "parse_salamon",
]
