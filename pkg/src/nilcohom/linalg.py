"""Exact dense linear algebra over the rationals.

Matrices are tuples of row tuples of :class:`~fractions.Fraction`.  Vectors are
tuples.  Nothing here ever rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Operands live in different ambient spaces."""


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(m: int, n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    """Transpose; ``ncols`` is required to keep the shape when ``a`` has no rows."""
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix, ncols: int) -> Matrix:
    """Product of an m x k and a k x ``ncols`` matrix."""
    cols = [tuple(row[j] for row in b) for j in range(ncols)]
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols) for row in a
    )


def matvec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a)


def madd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mscale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def rref(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise DimensionError(f"row of length {len(r)} in a space of dimension {ncols}")
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        sel = next((i for i in range(prow, len(m)) if m[i][col] != 0), None)
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        piv = m[prow][col]
        if piv != 1:
            m[prow] = [x / piv for x in m[prow]]
        prow_vals = m[prow]
        for i in range(len(m)):
            if i != prow and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], prow_vals)]
        pivots.append(col)
        prow += 1
        if prow == len(m):
            break
    return tuple(tuple(r) for r in m[:prow]), tuple(pivots)


def rank(a: Matrix, ncols: int | None = None) -> int:
    if not a:
        return 0
    return len(rref(a, len(a[0]) if ncols is None else ncols)[0])


def nullspace(a: Matrix, ncols: int) -> Matrix:
    """Basis of {x : a x = 0}, one vector per free column."""
    red, pivots = rref(a, ncols) if a else ((), ())
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return tuple(basis)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if tuple(pivots[:n]) != tuple(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def det(a: Matrix) -> Fraction:
    n = len(a)
    if n == 0:
        return ONE
    m = [list(r) for r in a]
    result = ONE
    for col in range(n):
        sel = next((i for i in range(col, n) if m[i][col] != 0), None)
        if sel is None:
            return ZERO
        if sel != col:
            m[col], m[sel] = m[sel], m[col]
            result = -result
        piv = m[col][col]
        result *= piv
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return result


def minor(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    return det(tuple(tuple(a[i][j] for j in cols) for i in rows))


def is_symmetric(a: Matrix) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def is_antisymmetric(a: Matrix) -> bool:
    return all(a[i][j] == -a[j][i] for i in range(len(a)) for j in range(i + 1))


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion on leading principal minors (a must be symmetric)."""
    if not is_symmetric(a):
        return False
    return all(minor(a, range(k), range(k)) > 0 for k in range(1, len(a) + 1))


def sqrt_exact(x: Fraction) -> Fraction | None:
    """Exact rational square root, or None when x is not a rational square."""
    from math import isqrt

    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient stored as a canonical RREF basis.

    Two subspaces are equal iff their ``rows`` are equal.  ``tag`` records what
    the coordinates mean (e.g. ``(dim, degree)`` for a space of forms).
    """

    ambient: int
    rows: Matrix
    tag: tuple | None = None

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int, tag: tuple | None = None) -> "Subspace":
        red, _ = rref(as_matrix(vectors), ambient)
        return cls(ambient, red, tag)

    @classmethod
    def zero(cls, ambient: int, tag: tuple | None = None) -> "Subspace":
        return cls(ambient, (), tag)

    @classmethod
    def full(cls, ambient: int, tag: tuple | None = None) -> "Subspace":
        return cls(ambient, identity(ambient), tag)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.rows)

    def _check(self, other: "Subspace") -> None:
        if other.ambient != self.ambient or (
            self.tag is not None and other.tag is not None and self.tag != other.tag
        ):
            raise DimensionError(
                f"subspaces of different ambient spaces ({self.ambient}, {self.tag}) vs "
                f"({other.ambient}, {other.tag})"
            )

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.rows + other.rows, self.ambient, self.tag or other.tag)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise DimensionError(f"vector of length {len(v)} in ambient {self.ambient}")
        v = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return not any(v)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(r) for r in other.rows)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def reduce(self, v: Sequence) -> Vector:
        """Remainder of v after eliminating this subspace's pivot coordinates."""
        v = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return tuple(v)


def kernel(a: Matrix, ncols: int, tag: tuple | None = None) -> Subspace:
    return Subspace.span(nullspace(a, ncols), ncols, tag)


def image(a: Matrix, nrows: int, tag: tuple | None = None) -> Subspace:
    """Column space of a (nrows x ncols) matrix."""
    if not a:
        return Subspace.zero(nrows, tag)
    return Subspace.span(transpose(a), nrows, tag)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: reduce [[a, a], [b, 0]]; rows with vanishing left half span a & b."""
    a._check(b)
    n = a.ambient
    block = [tuple(r) + tuple(r) for r in a.rows] + [tuple(r) + (ZERO,) * n for r in b.rows]
    red, _ = rref(block, 2 * n)
    inter = [row[n:] for row in red if not any(row[:n])]
    return Subspace.span(inter, n, a.tag or b.tag)


def member(v: Sequence, a: Subspace) -> bool:
    return a.contains_vector(v)


def quotient_dim(z: Subspace, b: Subspace) -> int:
    if not z.contains(b):
        raise ValueError("quotient Z/B requires B to be a subspace of Z")
    return z.dim - b.dim


def complement_basis(z: Subspace, b: Subspace) -> Matrix:
    """Rows of Z's RREF basis, chosen greedily, that project to a basis of Z/B."""
    chosen: list[Vector] = []
    acc = b
    for row in z.rows:
        if not acc.contains_vector(row):
            chosen.append(row)
            acc = Subspace.span(acc.rows + (row,), z.ambient, z.tag)
    return tuple(chosen)


def coordinates(v: Sequence, reps: Matrix, b: Subspace) -> Vector:
    """Coefficients c with v = sum c_i reps_i (mod b); raises if v is outside span(reps) + b."""
    n = b.ambient
    k = len(reps)
    # solve [reps; b.rows]^T x = v
    cols = list(reps) + list(b.rows)
    system = [tuple(col[i] for col in cols) + (Fraction(v[i]),) for i in range(n)]
    red, pivots = rref(system, len(cols) + 1)
    if len(cols) in pivots:
        raise ValueError("vector does not lie in span(representatives) + coboundaries")
    sol = [ZERO] * len(cols)
    for row, p in zip(red, pivots):
        sol[p] = row[-1]
    return tuple(sol[:k])
