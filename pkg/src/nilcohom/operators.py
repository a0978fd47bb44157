"""Differential, symplectic and metric operators on invariant forms.

Conventions
-----------
* ``omega = sum_{i<j} w_ij e^{ij}`` has Gram matrix ``Omega[i][j] = omega(e_i, e_j)``
  (``w_ij`` above the diagonal, ``-w_ij`` below).  The Poisson bivector is
  ``pi = Omega^{-1}`` and ``Lambda = (1/2) sum_{i,j} pi[i][j] iota_i iota_j``,
  normalised so that ``Lambda(omega) = n``.
* An almost-complex structure is a matrix ``J`` acting on the coframe by
  ``J^* e^i = sum_j J[i][j] e^j``; on frame vectors ``J e_j = sum_i J[i][j] e_i``.
  On k-forms it acts by pullback, ``(J a)(v_1..v_k) = a(J v_1, .., J v_k)``.
  Compatibility reads ``J^T Omega J = Omega`` and the Riemannian metric
  ``g(u, v) = omega(u, J v)`` has Gram matrix ``Omega @ J`` on frame vectors.
* The volume form is ``omega^n / n!`` for both the symplectic and the Hodge star.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from . import linalg as la
from .exterior import Form, basis, basis_index, complement, interior_product, substitute, wedge

__all__ = [
    "StructureError",
    "JacobiError",
    "DegenerateFormError",
    "NotClosedError",
    "IncompatibleStructureError",
    "MetricError",
    "LieAlgebra",
    "SymplecticStructure",
    "AlmostComplexStructure",
    "MetricData",
    "OperatorMatrix",
    "SymplecticContext",
    "OPERATOR_NAMES",
]

OPERATOR_NAMES = ("d", "dlambda", "L", "Lambda", "ddlambda", "d*", "dlambda*", "ddlambda*")


class StructureError(ValueError):
    """Input data does not define a valid structure."""


def _fmt(f: Form) -> str:
    from .parsing import format_form  # parsing depends on this module

    return format_form(f)


class JacobiError(StructureError):
    def __init__(self, index: int, value: Form):
        self.index = index
        self.value = value
        super().__init__(f"d(d e^{index}) = {_fmt(value)} is nonzero, so d^2 != 0 (Jacobi identity fails at e^{index})")


class DegenerateFormError(StructureError):
    pass


class NotClosedError(StructureError):
    pass


class IncompatibleStructureError(StructureError):
    pass


class MetricError(StructureError):
    pass


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of a linear operator Omega^source -> Omega^target in the canonical bases.

    ``rows[i][j]`` is the coefficient of the i-th target basis form in the image
    of the j-th source basis form.
    """

    name: str
    source: int
    target: int
    nrows: int
    ncols: int
    rows: la.Matrix = field(repr=False)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.target != self.source:
            raise la.DimensionError(
                f"cannot compose {self.name} (from degree {self.source}) after "
                f"{other.name} (into degree {other.target})"
            )
        return OperatorMatrix(
            f"{self.name}.{other.name}", other.source, self.target, self.nrows, other.ncols,
            la.matmul(self.rows, other.rows, other.ncols),
        )

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if (self.source, self.target) != (other.source, other.target):
            raise la.DimensionError("cannot add operators between different degrees")
        return OperatorMatrix(
            f"{self.name}+{other.name}", self.source, self.target, self.nrows, self.ncols,
            la.madd(self.rows, other.rows),
        )

    def __neg__(self) -> "OperatorMatrix":
        return self.scaled(-1)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + (-other)

    def scaled(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.name, self.source, self.target, self.nrows, self.ncols,
                              la.mscale(c, self.rows))

    def transpose(self) -> la.Matrix:
        return la.transpose(self.rows, self.ncols)

    def apply(self, v: Sequence) -> la.Vector:
        return la.matvec(self.rows, v)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def rank(self) -> int:
        return la.rank(self.rows, self.ncols)

    def kernel(self, tag=None) -> la.Subspace:
        return la.kernel(self.rows, self.ncols, tag)

    def image(self, tag=None) -> la.Subspace:
        return la.image(self.rows, self.nrows, tag)


def matrix_of(name: str, func: Callable[[Form], Form], dim: int, source: int, target: int) -> OperatorMatrix:
    """Realise a linear map on forms as a matrix: columns are images of basis forms."""
    src, tgt = basis(dim, source), basis(dim, target)
    cols = []
    for idx in src:
        img = func(Form.monomial(dim, idx))
        if img.degree != target and img:
            raise la.DimensionError(f"{name} produced degree {img.degree}, expected {target}")
        cols.append(tuple(img.to_vector()) if 0 <= target <= dim else ())
    return OperatorMatrix(name, source, target, len(tgt), len(src), la.transpose(cols, len(tgt)))


class LieAlgebra:
    """Nilpotent Lie algebra given by the differentials ``d e^i`` of its dual coframe.

    The Chevalley-Eilenberg differential is the Leibniz extension of these
    values; construction fails with :class:`JacobiError` unless d o d = 0.
    """

    def __init__(self, differentials: Sequence[Form], name: str | None = None):
        dim = len(differentials)
        for i, f in enumerate(differentials, 1):
            if f.dim != dim or f.degree != 2:
                raise StructureError(f"d e^{i} must be a 2-form on a {dim}-dimensional coframe")
        self.dim = dim
        self.name = name
        self.differentials = tuple(differentials)
        self._mono: dict[tuple[int, ...], Form] = {}
        self._matrices: dict[int, OperatorMatrix] = {}
        # d^2 is a derivation, so vanishing on the coframe is enough
        for i in range(1, dim + 1):
            dd = self.d(self.differentials[i - 1])
            if dd:
                raise JacobiError(i, dd)

    def _d_monomial(self, idx: tuple[int, ...]) -> Form:
        cached = self._mono.get(idx)
        if cached is not None:
            return cached
        dim = self.dim
        result = Form(dim, len(idx) + 1)
        for p, i in enumerate(idx):
            term = wedge(
                wedge(Form.monomial(dim, idx[:p]), self.differentials[i - 1]),
                Form.monomial(dim, idx[p + 1 :]),
            )
            result = result - term if p % 2 else result + term
        self._mono[idx] = result
        return result

    def d(self, a: Form) -> Form:
        if a.dim != self.dim:
            raise la.DimensionError("form lives on a different coframe")
        result = Form(self.dim, a.degree + 1)
        for idx, c in a.items():
            result = result + c * self._d_monomial(idx)
        return result

    def d_matrix(self, k: int) -> OperatorMatrix:
        if k not in self._matrices:
            self._matrices[k] = matrix_of("d", self.d, self.dim, k, k + 1)
        return self._matrices[k]

    def is_abelian(self) -> bool:
        return not any(self.differentials)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, name={self.name!r})"


def form_matrix_2(omega: Form) -> la.Matrix:
    """Antisymmetric Gram matrix Omega[i][j] = omega(e_i, e_j)."""
    n = omega.dim
    m = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in omega.items():
        m[i - 1][j - 1] = c
        m[j - 1][i - 1] = -c
    return la.as_matrix(m)


class SymplecticStructure:
    """Closed nondegenerate invariant 2-form with its Poisson bivector."""

    def __init__(self, algebra: LieAlgebra, omega: Form):
        if omega.degree != 2 or omega.dim != algebra.dim:
            raise StructureError("omega must be a 2-form on the algebra's coframe")
        if algebra.dim % 2:
            raise DegenerateFormError(f"odd dimension {algebra.dim} carries no symplectic form")
        self.algebra = algebra
        self.omega = omega
        self.dim = algebra.dim
        self.n = algebra.dim // 2
        self.matrix = form_matrix_2(omega)
        if la.det(self.matrix) == 0:
            raise DegenerateFormError("omega is degenerate (omega^n = 0)")
        self.pi = la.inverse(self.matrix)
        dw = algebra.d(omega)
        if dw:
            raise NotClosedError(f"omega is not closed: d omega = {_fmt(dw)}")
        self._powers = [Form.constant(self.dim)]

    def power(self, k: int) -> Form:
        while len(self._powers) <= k:
            self._powers.append(wedge(self._powers[-1], self.omega))
        return self._powers[k]

    @property
    def volume(self) -> Form:
        return self.power(self.n) / factorial(self.n)

    def pairing_gram(self, k: int) -> la.Matrix:
        """Gram matrix of the pairing induced by omega^{-1} on k-forms (minors of pi)."""
        b = basis(self.dim, k)
        return la.as_matrix([[la.minor(self.pi, [i - 1 for i in I], [j - 1 for j in J]) for J in b] for I in b])

    def __repr__(self) -> str:
        return f"SymplecticStructure({self.omega!r})"


class AlmostComplexStructure:
    """Rational almost-complex structure, optionally checked against a symplectic form."""

    def __init__(self, matrix: Sequence[Sequence], symplectic: SymplecticStructure | None = None):
        m = la.as_matrix(matrix)
        n = len(m)
        if any(len(r) != n for r in m):
            raise IncompatibleStructureError("J must be a square matrix")
        if la.matmul(m, m, n) != la.mscale(-1, la.identity(n)):
            raise IncompatibleStructureError("J^2 != -Id")
        self.matrix = m
        self.dim = n
        self.symplectic = symplectic
        self._images = [Form(n, 1, {(j + 1,): m[i][j] for j in range(n)}) for i in range(n)]
        if symplectic is not None:
            self.check_compatible(symplectic)

    @classmethod
    def from_pairing(cls, dim: int, pairs: Sequence[Sequence[int]], symplectic=None) -> "AlmostComplexStructure":
        """Each pair (i, j) means J e^i = -e^j and J e^j = e^i."""
        m = [[0] * dim for _ in range(dim)]
        seen: list[int] = []
        for i, j in pairs:
            for x in (i, j):
                if not 1 <= x <= dim:
                    raise IncompatibleStructureError(f"pairing index {x} out of range 1..{dim}")
            seen += [i, j]
            m[i - 1][j - 1] = -1
            m[j - 1][i - 1] = 1
        if sorted(seen) != list(range(1, dim + 1)):
            raise IncompatibleStructureError("pairing must use every coframe index exactly once")
        return cls(m, symplectic)

    @classmethod
    def from_coframe(cls, coframe: Sequence[Form], pairs: Sequence[Sequence[int]], symplectic=None) -> "AlmostComplexStructure":
        """J given by a pairing on a new coframe E^i = sum_j P[i][j] e^j."""
        dim = len(coframe)
        p = la.as_matrix([f.to_vector() for f in coframe])
        if la.det(p) == 0:
            raise IncompatibleStructureError("coframe is not invertible")
        on_new = cls.from_pairing(dim, pairs).matrix
        return cls(la.matmul(la.matmul(la.inverse(p), on_new, dim), p, dim), symplectic)

    def act(self, a: Form) -> Form:
        return substitute(a, self._images)

    def check_compatible(self, symplectic: SymplecticStructure) -> None:
        n = self.dim
        om = symplectic.matrix
        if la.matmul(la.matmul(la.transpose(self.matrix), om, n), self.matrix, n) != om:
            raise IncompatibleStructureError("J does not preserve omega (J^T Omega J != Omega)")
        if not la.is_positive_definite(self.metric_gram(symplectic)):
            raise IncompatibleStructureError("omega(., J.) is not positive definite")

    def metric_gram(self, symplectic: SymplecticStructure) -> la.Matrix:
        """Gram matrix of g(u, v) = omega(u, Jv) on frame vectors."""
        return la.matmul(symplectic.matrix, self.matrix, self.dim)


class MetricData:
    """Inner products on invariant forms induced by a Gram matrix on 1-forms."""

    def __init__(self, gram1: Sequence[Sequence], volume: Form):
        g = la.as_matrix(gram1)
        if not la.is_positive_definite(g):
            raise MetricError("metric on 1-forms is not symmetric positive definite")
        self.gram1 = g
        self.dim = len(g)
        self.volume = volume
        self._grams: dict[int, la.Matrix] = {}
        self._inverses: dict[int, la.Matrix] = {}
        if self.inner(volume, volume) != 1:
            raise MetricError("volume form does not have unit length")

    @classmethod
    def from_compatible(cls, symplectic: SymplecticStructure, J: AlmostComplexStructure) -> "MetricData":
        return cls(la.inverse(J.metric_gram(symplectic)), symplectic.volume)

    @classmethod
    def from_gram(cls, gram1: Sequence[Sequence], orientation: Form) -> "MetricData":
        """Metric override; the unit volume form is oriented like ``orientation``."""
        g = la.as_matrix(gram1)
        dim = len(g)
        top = tuple(range(1, dim + 1))
        root = la.sqrt_exact(la.det(g))
        if root is None:
            raise MetricError("det of the metric is not a rational square; unit volume form is irrational")
        sign = 1 if orientation.coefficient(top) > 0 else -1
        return cls(g, Form.monomial(dim, top, sign / root))

    def gram(self, k: int) -> la.Matrix:
        if k not in self._grams:
            b = basis(self.dim, k)
            self._grams[k] = la.as_matrix(
                [[la.minor(self.gram1, [i - 1 for i in I], [j - 1 for j in J]) for J in b] for I in b]
            )
        return self._grams[k]

    def gram_inverse(self, k: int) -> la.Matrix:
        if k not in self._inverses:
            self._inverses[k] = la.inverse(self.gram(k)) if basis(self.dim, k) else ()
        return self._inverses[k]

    def inner(self, a: Form, b: Form) -> Fraction:
        if a.degree != b.degree:
            return Fraction(0)
        va, vb = a.to_vector(), b.to_vector()
        return sum((x * y for x, y in zip(va, la.matvec(self.gram(a.degree), vb))), Fraction(0))

    def adjoint(self, m: OperatorMatrix) -> OperatorMatrix:
        """Metric adjoint M* = G_source^{-1} M^T G_target."""
        gs_inv = self.gram_inverse(m.source)
        gt = self.gram(m.target)
        mt = m.transpose()
        rows = la.matmul(la.matmul(gs_inv, mt, m.nrows), gt, m.nrows)
        name = m.name[:-1] if m.name.endswith("*") else m.name + "*"
        return OperatorMatrix(name, m.target, m.source, m.ncols, m.nrows, rows)


def _star(dim: int, gram: la.Matrix, vol_coeff: Fraction, a: Form) -> Form:
    """Solve e^I ^ (star a) = <e^I, a> vol for every basis e^I."""
    k = a.degree
    ga = la.matvec(gram, a.to_vector())
    out = {}
    for I, val in zip(basis(dim, k), ga):
        if val:
            comp, sign = complement(dim, I)
            out[comp] = sign * vol_coeff * val
    return Form(dim, dim - k, out)


class SymplecticContext:
    """An algebra with symplectic form and (optionally) a compatible J and metric.

    All operators are pure; matrices are built lazily and memoised.
    """

    def __init__(
        self,
        algebra: LieAlgebra,
        symplectic: SymplecticStructure | Form,
        J: AlmostComplexStructure | None = None,
        metric: MetricData | None = None,
        name: str | None = None,
    ):
        if isinstance(symplectic, Form):
            symplectic = SymplecticStructure(algebra, symplectic)
        self.algebra = algebra
        self.symplectic = symplectic
        self.dim = algebra.dim
        self.n = algebra.dim // 2
        self.name = name or algebra.name
        if J is not None:
            J.check_compatible(symplectic)
        self.J = J
        if metric is None and J is not None:
            metric = MetricData.from_compatible(symplectic, J)
        self.metric = metric
        self._top = tuple(range(1, self.dim + 1))
        self._vol_coeff = symplectic.volume.coefficient(self._top)
        self._pairings: dict[int, la.Matrix] = {}
        self._cache: dict[tuple[str, int], OperatorMatrix] = {}

    @property
    def omega(self) -> Form:
        return self.symplectic.omega

    @property
    def degrees(self) -> range:
        return range(self.dim + 1)

    # -- operators on forms ---------------------------------------------------
    def d(self, a: Form) -> Form:
        return self.algebra.d(a)

    def L(self, a: Form) -> Form:
        return wedge(self.omega, a)

    def lam(self, a: Form) -> Form:
        pi = self.symplectic.pi
        result = Form(self.dim, a.degree - 2)
        if a.degree < 2:
            return result
        # pi antisymmetric and iota_i iota_j = -iota_j iota_i: only i < j needed
        for i in range(1, self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                c = pi[i - 1][j - 1]
                if c:
                    result = result + c * interior_product(i, interior_product(j, a))
        return result

    def sstar(self, a: Form) -> Form:
        """Symplectic star: a' ^ star(a) = (omega^{-1})^k(a', a) omega^n/n!."""
        k = a.degree
        if k not in self._pairings:
            self._pairings[k] = self.symplectic.pairing_gram(k)
        return _star(self.dim, self._pairings[k], self._vol_coeff, a)

    def dlambda(self, a: Form) -> Form:
        """Symplectic co-differential [d, Lambda] = d Lambda - Lambda d."""
        return self.d(self.lam(a)) - self.lam(self.d(a)) if a.degree >= 1 else Form(self.dim, a.degree - 1)

    def dlambda_via_star(self, a: Form) -> Form:
        """(-1)^{k+1} star d star, the second route to d^Lambda."""
        k = a.degree
        out = self.sstar(self.d(self.sstar(a)))
        return -out if k % 2 == 0 else out

    def ddlambda(self, a: Form) -> Form:
        return self.d(self.dlambda(a))

    def hstar(self, a: Form) -> Form:
        """Riemannian Hodge star: a' ^ *a = <a', a>_g vol."""
        m = self._require_metric()
        return _star(self.dim, m.gram(a.degree), m.volume.coefficient(self._top), a)

    def j_action(self, a: Form) -> Form:
        if self.J is None:
            raise IncompatibleStructureError("no almost-complex structure in this context")
        return self.J.act(a)

    def _require_metric(self) -> MetricData:
        if self.metric is None:
            raise MetricError("this operation needs a metric (supply J or a metric override)")
        return self.metric

    # -- matrices ---------------------------------------------------------------
    _SHIFT = {"d": 1, "dlambda": -1, "L": 2, "Lambda": -2, "ddlambda": 0}

    def matrix(self, name: str, k: int) -> OperatorMatrix:
        """Matrix of a named operator on degree-k forms (see OPERATOR_NAMES)."""
        key = (name, k)
        if key in self._cache:
            return self._cache[key]
        if name in self._SHIFT:
            funcs = {"d": self.d, "dlambda": self.dlambda, "L": self.L, "Lambda": self.lam,
                     "ddlambda": self.ddlambda}
            if name == "d":
                m = self.algebra.d_matrix(k)
            else:
                m = matrix_of(name, funcs[name], self.dim, k, k + self._SHIFT[name])
        elif name.endswith("*") and name[:-1] in self._SHIFT:
            base = name[:-1]
            # adjoint on degree k of an operator landing in degree k
            m = self._require_metric().adjoint(self.matrix(base, k - self._SHIFT[base]))
        elif name == "sstar":
            m = matrix_of(name, self.sstar, self.dim, k, self.dim - k)
        elif name == "hstar":
            m = matrix_of(name, self.hstar, self.dim, k, self.dim - k)
        elif name == "J":
            m = matrix_of(name, self.j_action, self.dim, k, k)
        else:
            raise KeyError(f"unknown operator {name!r}; expected one of {OPERATOR_NAMES}")
        self._cache[key] = m
        return m

    def build_operator_matrix(self, name: str, k: int) -> OperatorMatrix:
        return self.matrix(name, k)

    def adjoint(self, m: OperatorMatrix) -> OperatorMatrix:
        return self._require_metric().adjoint(m)

    def identity(self, k: int) -> OperatorMatrix:
        nb = len(basis(self.dim, k))
        return OperatorMatrix("id", k, k, nb, nb, la.identity(nb))

    def tag(self, k: int) -> tuple[int, int]:
        return (self.dim, k)

    def with_structures(self, J: AlmostComplexStructure | None = None, metric: MetricData | None = None) -> "SymplecticContext":
        return SymplecticContext(self.algebra, self.symplectic, J, metric, self.name)

    def __repr__(self) -> str:
        return f"SymplecticContext({self.name!r}, omega={self.omega!r}, J={'yes' if self.J else 'no'})"


def darboux_compatible_structure(symplectic: SymplecticStructure) -> AlmostComplexStructure:
    """A rational omega-compatible J, built from a symplectic Gram-Schmidt basis.

    Works over Q: no square roots are needed because only the pairing
    omega(u, v) = 1 is normalised.
    """
    n2 = symplectic.dim
    om = symplectic.matrix

    def w(u, v):
        return sum((u[i] * om[i][j] * v[j] for i in range(n2) for j in range(n2) if u[i] and v[j]), Fraction(0))

    remaining = [tuple(Fraction(int(i == j)) for j in range(n2)) for i in range(n2)]
    us, vs = [], []
    while remaining:
        u = remaining.pop(0)
        partner = next((v for v in remaining if w(u, v) != 0), None)
        if partner is None:
            raise DegenerateFormError("omega is degenerate")
        remaining.remove(partner)
        v = tuple(x / w(u, partner) for x in partner)
        us.append(u)
        vs.append(v)
        new = []
        for x in remaining:
            # project out the span of (u, v) symplectically
            a, b = w(x, v), w(u, x)
            new.append(tuple(xi - a * ui - b * vi for xi, ui, vi in zip(x, u, v)))
        remaining = new
    # frame vectors (columns): J u_i = v_i, J v_i = -u_i
    frame = [c for pair in zip(us, vs) for c in pair]
    fmat = la.transpose(frame)  # columns are frame vectors
    block = [[0] * n2 for _ in range(n2)]
    for i in range(0, n2, 2):
        block[i + 1][i] = 1
        block[i][i + 1] = -1
    jvec = la.matmul(la.matmul(fmat, la.as_matrix(block), n2), la.inverse(fmat), n2)
    return AlmostComplexStructure(jvec, symplectic)
