"""Shared helpers for the test suite."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from oracle import Oracle

from nilcohom import linalg as la
from nilcohom.cohomology import THEORIES, Cohomology
from nilcohom.deformation import coframe_structure_equations
from nilcohom.exterior import Form, basis
from nilcohom.manifest import fixture_path, list_fixtures, load_manifest
from nilcohom.operators import (
    DegenerateFormError,
    LieAlgebra,
    SymplecticContext,
    SymplecticStructure,
    darboux_compatible_structure,
)
from nilcohom.parsing import parse_form, parse_salamon

# nilpotent algebras that carry symplectic forms
CATALOGUE = {
    4: ["0,0,0,0", "0,0,0,12", "0,0,12,13", "0,0,0,23"],
    6: [
        "0,0,0,0,0,12",
        "0,0,0,0,12,13",
        "0,0,0,0,12,34",
        "0,0,0,12,13,23",
        "0,0,0,12,13,14",
        "0,0,0,0,12,14+23",
        "0,0,0,12,14,15+23+24",
        "0,0,12,13,23,14+25",
        "0,0,0,12,13,14+23",
        "0,0,0,12,14,15+23",
        "0,16+35,0,15-36,0,0",
    ],
}

FIXTURES = list_fixtures()


@lru_cache(maxsize=None)
def fixture(name: str):
    return load_manifest(fixture_path(name))


@lru_cache(maxsize=None)
def fixture_cohomology(name: str) -> Cohomology:
    return Cohomology(fixture(name).context())


def form(s: str, dim: int, degree: int | None = None) -> Form:
    return parse_form(s, dim, degree)


def forms(strings, dim: int, degree: int) -> list[Form]:
    return [parse_form(s, dim, degree) for s in strings]


def span(strings, dim: int, degree: int) -> la.Subspace:
    vecs = [f.to_vector() for f in forms(strings, dim, degree)]
    return la.Subspace.span(vecs, len(basis(dim, degree)), (dim, degree))


def random_coframe_change(algebra: LieAlgebra, rng: random.Random) -> LieAlgebra:
    n = algebra.dim
    while True:
        p = [[rng.choice([0, 0, 0, 1, -1]) if i != j else rng.choice([1, -1, 2]) for j in range(n)] for i in range(n)]
        if la.det(la.as_matrix(p)) != 0:
            break
    coframe = [Form(n, 1, {(j + 1,): p[i][j] for j in range(n)}) for i in range(n)]
    return LieAlgebra(coframe_structure_equations(algebra, coframe), name="random")


def random_symplectic(algebra: LieAlgebra, rng: random.Random, tries: int = 50) -> SymplecticStructure:
    z = algebra.d_matrix(2).kernel((algebra.dim, 2))
    for _ in range(tries):
        cs = [rng.randint(-2, 2) for _ in z.rows]
        w = Form.from_vector(algebra.dim, 2, [sum(c * r[i] for c, r in zip(cs, z.rows)) for i in range(z.ambient)])
        try:
            return SymplecticStructure(algebra, w)
        except DegenerateFormError:
            continue
    raise RuntimeError("no nondegenerate closed 2-form found")


@lru_cache(maxsize=None)
def random_context(seed: int, dim: int) -> SymplecticContext:
    """Random coframe of a catalogue algebra, random closed omega, Darboux-compatible J."""
    rng = random.Random(seed)
    base = parse_salamon(rng.choice(CATALOGUE[dim]))
    algebra = random_coframe_change(base, rng)
    sym = random_symplectic(algebra, rng)
    return SymplecticContext(algebra, sym, darboux_compatible_structure(sym), name=f"random-{dim}-{seed}")


@lru_cache(maxsize=None)
def random_cohomology(seed: int, dim: int) -> Cohomology:
    return Cohomology(random_context(seed, dim))


@lru_cache(maxsize=None)
def random_oracle(seed: int, dim: int) -> Oracle:
    return oracle_for(random_context(seed, dim))


def oracle_for(ctx: SymplecticContext) -> Oracle:
    J = [list(r) for r in ctx.J.matrix] if ctx.J is not None else None
    return Oracle(ctx.dim, [dict(f.terms) for f in ctx.algebra.differentials], dict(ctx.omega.terms), J)


def j_from_coframe(p, pairs):
    """J = P^{-1} A P computed with the oracle's own arithmetic."""
    from oracle import inv, mul

    n = len(p)
    a = [[Fraction(0)] * n for _ in range(n)]
    for i, j in pairs:
        a[i - 1][j - 1], a[j - 1][i - 1] = Fraction(-1), Fraction(1)
    return mul(mul(inv(p), a), p)


def check_operators(ctx: SymplecticContext) -> None:
    """Operator identities on every basis form."""
    for k in ctx.degrees:
        for idx in basis(ctx.dim, k):
            f = Form.monomial(ctx.dim, idx)
            dl = ctx.dlambda(f)
            assert not ctx.d(ctx.d(f))
            assert not ctx.dlambda(dl)
            assert not (ctx.d(dl) + ctx.dlambda(ctx.d(f)))
            assert ctx.sstar(ctx.sstar(f)) == f
            assert dl == ctx.dlambda_via_star(f)
    for k in range(2, ctx.dim + 1):
        assert ctx.matrix("Lambda", k).rows == ctx.adjoint(ctx.matrix("L", k - 2)).rows


def check_cohomology(c: Cohomology) -> None:
    n2 = c.dim
    for k in c.ctx.degrees:
        full, bc = c.delta_s(k)
        assert full == 2 * bc
        assert c.de_rham(k).dim <= c.bott_chern(k).dim
        assert c.bott_chern(k).dim == c.aeppli(n2 - k).dim
        for theory in THEORIES:
            h = c.harmonic(theory, k)
            assert h.dim == c.group(theory, k).dim
            assert h.space == c.harmonic(theory, k, method="laplacian").space
    assert c.delta_s(1) == (0, 0)
    two = c.lefschetz_decomposition_check(2)
    assert two["direct_sum"] and two["spans"]


def check_against_oracle(c: Cohomology, o: Oracle) -> None:
    for k in c.ctx.degrees:
        want = o.dims(k)
        for theory in THEORIES:
            assert c.group(theory, k).dim == want[theory]
            assert c.harmonic(theory, k).dim == len(o.harmonic(k)[theory])
    assert c.v_space().dim == o.v_dim()
    j = c.j_subgroups()
    plus, minus, total = o.j_dims()
    assert (j["Hplus"].dim, j["Hminus"].dim) == (plus, minus)
    assert j["full"] == (total == c.de_rham(2).dim)
