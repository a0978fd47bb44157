"""Sparse exterior algebra over a fixed coframe e^1, ..., e^N with exact coefficients.

A basis monomial e^{i_1} ^ ... ^ e^{i_k} is keyed by the strictly increasing
tuple ``(i_1, ..., i_k)``.  Coefficients are :class:`fractions.Fraction`.
Forms are immutable values; every operation returns a new form.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "CoframeIndexError",
    "canonicalize",
    "basis",
    "basis_index",
    "complement",
    "Form",
    "PolyForm",
    "wedge",
    "interior_product",
    "eval_polyform",
    "substitute",
    "to_fraction",
]


class CoframeIndexError(ValueError):
    """A coframe index lies outside 1..N."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not accepted; use Fraction or str")
    return Fraction(x)


def canonicalize(indices: Sequence[int], dim: int | None = None) -> tuple[tuple[int, ...], int]:
    """Sort a multi-index, returning ``(sorted_tuple, sign)``.

    ``sign`` is the parity of the sorting permutation, or 0 when an index is
    repeated (in which case the empty tuple is returned).

    >>> canonicalize((2, 1))
    ((1, 2), -1)
    >>> canonicalize((1, 1))
    ((), 0)
    """
    idx = list(indices)
    if dim is not None:
        for i in idx:
            if not 1 <= i <= dim:
                raise CoframeIndexError(f"index {i} out of range 1..{dim}")
    if len(set(idx)) != len(idx):
        return (), 0
    # count inversions; k <= N is tiny
    inversions = 0
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                inversions += 1
    return tuple(sorted(idx)), -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def basis(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Canonical (lexicographic) basis of degree-``degree`` monomials."""
    if degree < 0 or degree > dim:
        return ()
    return tuple(combinations(range(1, dim + 1), degree))


@lru_cache(maxsize=None)
def basis_index(dim: int, degree: int) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(basis(dim, degree))}


@lru_cache(maxsize=None)
def complement(dim: int, idx: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Complementary multi-index J and the sign with e^I ^ e^J = sign * e^{1..N}."""
    rest = tuple(i for i in range(1, dim + 1) if i not in idx)
    _, sign = canonicalize(idx + rest)
    return rest, sign


class Form:
    """Homogeneous invariant form of fixed degree on an N-dimensional coframe."""

    __slots__ = ("dim", "degree", "_terms", "_hash")

    def __init__(self, dim: int, degree: int, terms: Mapping[Sequence[int], object] | None = None):
        if dim < 0:
            raise ValueError(f"invalid dimension {dim}")
        self.dim = dim
        self.degree = degree
        acc: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                key = tuple(key)
                if len(key) != degree:
                    raise ValueError(f"term {key} does not have degree {degree}")
                c = to_fraction(coeff)
                if c == 0:
                    continue
                k, s = canonicalize(key, dim)
                if s == 0:
                    continue
                acc[k] = acc.get(k, Fraction(0)) + s * c
        self._terms = {k: v for k, v in sorted(acc.items()) if v != 0}
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls(dim, degree)

    @classmethod
    def constant(cls, dim: int, value=1) -> "Form":
        return cls(dim, 0, {(): value})

    @classmethod
    def monomial(cls, dim: int, indices: Sequence[int], coeff=1) -> "Form":
        return cls(dim, len(indices), {tuple(indices): coeff})

    @classmethod
    def coframe(cls, dim: int) -> list["Form"]:
        return [cls.monomial(dim, (i,)) for i in range(1, dim + 1)]

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: Sequence) -> "Form":
        b = basis(dim, degree)
        if len(vec) != len(b):
            raise ValueError(f"vector length {len(vec)} != {len(b)} basis forms")
        return cls(dim, degree, {b[i]: c for i, c in enumerate(vec) if c})

    # -- access -------------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, indices: Sequence[int]) -> Fraction:
        k, s = canonicalize(indices, self.dim)
        return s * self._terms.get(k, Fraction(0))

    def to_vector(self) -> list[Fraction]:
        return [self._terms.get(idx, Fraction(0)) for idx in basis(self.dim, self.degree)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------------
    def _check_compatible(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch {self.dim} vs {other.dim}")

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        if other.degree != self.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + v
        return Form(self.dim, self.degree, acc)

    def __neg__(self) -> "Form":
        return Form(self.dim, self.degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, scalar) -> "Form":
        if isinstance(scalar, Form):
            return NotImplemented
        c = to_fraction(scalar)
        return Form(self.dim, self.degree, {k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Form":
        return self * (1 / to_fraction(scalar))

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.dim, self.degree, self._terms) == (other.dim, other.degree, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self.degree, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return f"Form(dim={self.dim}, degree={self.degree}, 0)"
        parts = []
        for k, v in self._terms.items():
            name = "e" + "".join(map(str, k)) if k else "1"
            parts.append(f"{v}*{name}")
        return f"Form(dim={self.dim}, degree={self.degree}, {' + '.join(parts)})"


def wedge(a: Form, b: Form) -> Form:
    a._check_compatible(b)
    deg = a.degree + b.degree
    if deg > a.dim:
        return Form(a.dim, deg)
    acc: dict[tuple[int, ...], Fraction] = {}
    for ka, va in a._terms.items():
        for kb, vb in b._terms.items():
            k, s = canonicalize(ka + kb)
            if s == 0:
                continue
            acc[k] = acc.get(k, Fraction(0)) + s * va * vb
    return Form(a.dim, deg, acc)


def interior_product(i: int, a: Form) -> Form:
    """Contraction with the frame vector dual to e^i (antiderivation of degree -1)."""
    if not 1 <= i <= a.dim:
        raise CoframeIndexError(f"frame index {i} out of range 1..{a.dim}")
    if a.degree <= 0:
        return Form(a.dim, a.degree - 1)
    acc = {}
    for k, v in a._terms.items():
        if i in k:
            pos = k.index(i)
            acc[k[:pos] + k[pos + 1 :]] = -v if pos % 2 else v
    return Form(a.dim, a.degree - 1, acc)


def substitute(a: Form, images: Sequence[Form]) -> Form:
    """Algebra homomorphism sending e^j to ``images[j-1]`` (1-forms).

    Used for pullbacks and changes of coframe.
    """
    if len(images) != a.dim:
        raise ValueError("need one image per coframe element")
    dim = images[0].dim
    result = Form(dim, a.degree)
    for k, v in a._terms.items():
        term = Form.constant(dim, v)
        for j in k:
            term = wedge(term, images[j - 1])
        result = result + term
    return result


# -- polynomial coefficients ------------------------------------------------
# A polynomial in t is a tuple of Fractions, lowest power first, no trailing zeros.

def _poly_trim(p: Iterable[Fraction]) -> tuple[Fraction, ...]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _poly_add(p, q):
    n = max(len(p), len(q))
    return _poly_trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def _poly_mul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _poly_trim(out)


def _poly_eval(p, t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


class PolyForm:
    """Form whose coefficients are polynomials in a real parameter t."""

    __slots__ = ("dim", "degree", "_terms")

    def __init__(self, dim: int, degree: int, terms: Mapping[Sequence[int], Sequence] | None = None):
        self.dim = dim
        self.degree = degree
        acc: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
        for key, poly in (terms or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"term {key} does not have degree {degree}")
            k, s = canonicalize(key, dim)
            if s == 0:
                continue
            p = _poly_trim(s * to_fraction(c) for c in poly)
            acc[k] = _poly_add(acc.get(k, ()), p)
        self._terms = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def from_form(cls, form: Form, power: int = 0) -> "PolyForm":
        pad = (Fraction(0),) * power
        return cls(form.dim, form.degree, {k: pad + (v,) for k, v in form.items()})

    @classmethod
    def from_components(cls, components: Sequence[Form]) -> "PolyForm":
        """Build sum_i t^i * components[i]."""
        if not components:
            raise ValueError("need at least one component")
        total = cls(components[0].dim, components[0].degree)
        for power, comp in enumerate(components):
            total = total + cls.from_form(comp, power)
        return total

    @property
    def terms(self) -> dict[tuple[int, ...], tuple[Fraction, ...]]:
        return dict(self._terms)

    def max_power(self) -> int:
        return max((len(p) - 1 for p in self._terms.values()), default=0)

    def components(self) -> list[Form]:
        """Forms F_i with self = sum_i t^i F_i."""
        return [
            Form(self.dim, self.degree, {k: p[i] for k, p in self._terms.items() if i < len(p)})
            for i in range(self.max_power() + 1)
        ]

    def evaluate(self, t) -> Form:
        t = to_fraction(t)
        return Form(self.dim, self.degree, {k: _poly_eval(p, t) for k, p in self._terms.items()})

    def map_linear(self, op) -> "PolyForm":
        """Apply a t-independent linear form operator coefficientwise."""
        return PolyForm.from_components([op(c) for c in self.components()])

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if isinstance(other, Form):
            other = PolyForm.from_form(other)
        if (other.dim, other.degree) != (self.dim, self.degree):
            raise ValueError("polyform dimension/degree mismatch")
        acc = dict(self._terms)
        for k, p in other._terms.items():
            acc[k] = _poly_add(acc.get(k, ()), p)
        return PolyForm(self.dim, self.degree, acc)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.dim, self.degree, {k: tuple(-c for c in p) for k, p in self._terms.items()})

    def __sub__(self, other) -> "PolyForm":
        return self + (-other)

    def __xor__(self, other: "PolyForm") -> "PolyForm":
        if isinstance(other, Form):
            other = PolyForm.from_form(other)
        acc: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
        for ka, pa in self._terms.items():
            for kb, pb in other._terms.items():
                k, s = canonicalize(ka + kb)
                if s == 0:
                    continue
                acc[k] = _poly_add(acc.get(k, ()), tuple(s * c for c in _poly_mul(pa, pb)))
        return PolyForm(self.dim, self.degree + other.degree, acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.dim, self.degree, self._terms) == (other.dim, other.degree, other._terms)

    def __hash__(self) -> int:
        return hash((self.dim, self.degree, tuple(self._terms.items())))

    def __repr__(self) -> str:
        return f"PolyForm(dim={self.dim}, degree={self.degree}, {self._terms})"


def eval_polyform(p: PolyForm, t) -> Form:
    return p.evaluate(t)
