import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baergeom.gf import FieldSpec
from baergeom.projgeom import (
    PG,
    GeometryDomainError,
    GeometryError,
    Projectivity,
    Subspace,
    contains,
    cross_ratio,
    enumerate_hyperplanes,
    enumerate_points,
    enumerate_subspaces,
    fit_projectivity_line,
    meet,
    normalize,
    proj_dim,
    project_from,
    projective_points,
    span,
)

F3 = FieldSpec.of_order(3)


def random_projectivity(F, n, rng):
    while True:
        M = tuple(tuple(rng.randrange(F.q) for _ in range(n + 1)) for _ in range(n + 1))
        try:
            return Projectivity(F, M)
        except GeometryError:
            continue


@pytest.mark.parametrize("n,q,count", [(4, 3, 121), (2, 9, 91), (1, 4, 5), (3, 3, 40)])
def test_point_counts(n, q, count):
    F = FieldSpec.of_order(q)
    pts = enumerate_points(n, F)
    assert len(pts) == count == len(set(pts))
    assert pts == sorted(pts)
    assert all(normalize(F, P) == P for P in pts)


def test_hyperplanes_of_pg43():
    hs = enumerate_hyperplanes(4, F3)
    assert len(hs) == 121
    assert all(H.dim == 3 for H in hs)
    # each point lies on (q^4-1)/(q-1) hyperplanes
    P = (1, 2, 0, 1, 1)
    assert sum(H.contains(P) for H in hs) == 40


def test_span_meet_examples():
    A, B = (1, 0, 0, 0, 0), (0, 1, 0, 0, 0)
    assert proj_dim(span([A, B], F3)) == 1
    H1, H2 = Subspace.from_covector(F3, (1, 0, 0, 0, 0)), Subspace.from_covector(F3, (0, 0, 1, 0, 0))
    assert meet(H1, H2).dim == 2
    plane = Subspace.from_covectors(F3, 4, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)])
    ell = span([(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)], F3)
    assert meet(plane, ell).is_empty
    assert contains(ell, (1, 2, 0, 0, 0))
    with pytest.raises(GeometryError):
        span([])


def test_modular_law_pg33():
    subs = [S for d in range(3) for S in enumerate_subspaces(F3, 3, d)]
    rng = random.Random(0)
    for A, B in (rng.sample(subs, 2) for _ in range(3000)):
        assert span([A, B]).dim + meet(A, B).dim == A.dim + B.dim


def test_line_count_pg33():
    assert len(enumerate_subspaces(F3, 3, 1)) == 130


def test_span_idempotent_and_monotone():
    L = span([(1, 0, 0, 1), (0, 1, 1, 0)], F3)
    assert span([L]) == L
    assert span([L, (1, 1, 1, 1)]) == L
    assert span([L, (0, 0, 1, 0)]).contains(L)


def test_subspace_points_and_coordinates():
    L = span([(1, 0, 2, 0, 0), (0, 1, 0, 0, 1)], F3)
    assert len(L.points) == 4
    for P in L.points:
        assert L.point_at(L.coordinates(P)) == P
    with pytest.raises(GeometryError):
        L.coordinates((0, 0, 0, 0, 1))


def test_project_from():
    Pi = Subspace.from_covector(F3, (0, 0, 0, 0, 1))
    P = (0, 0, 0, 0, 1)
    proj = project_from(P, Pi)
    for X in Pi.points[:10]:
        assert proj(X) == X
    X = (1, 1, 0, 0, 1)
    Y = normalize(F3, [1, 1, 0, 0, 2])  # on the line PX
    assert proj(X) == proj(Y)
    with pytest.raises(GeometryDomainError):
        proj(P)
    with pytest.raises(GeometryError):
        project_from((1, 0, 0, 0, 0), Pi)


def test_projection_of_lines_is_a_line_exhaustive():
    Pi = Subspace.from_covector(F3, (1, 1, 0, 2, 1))
    P = next(X for X in projective_points(F3, 4) if not Pi.contains(X))
    proj = project_from(P, Pi)
    pts = [X for X in projective_points(F3, 4) if X != P]
    checked = 0
    for A, B in itertools.combinations(pts[:40], 2):
        L = span([A, B], F3)
        if L.contains(P):
            continue
        image = span([proj(X) for X in L.points], F3)
        assert image.dim == 1 and Pi.contains(image)
        checked += 1
    assert checked > 500


def test_cross_ratio_normalization():
    F = FieldSpec.of_order(7)
    A, B, C = (1, 0), (1, 1), (0, 1)
    for lam in range(2, 7):
        assert cross_ratio(F, A, B, C, (1, lam)) == lam
    with pytest.raises(GeometryError):
        cross_ratio(F, A, B, C, C)
    with pytest.raises(GeometryError):
        cross_ratio(F, (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def test_cross_ratio_invariance():
    F = FieldSpec.of_order(5)
    rng = random.Random(3)
    pts = projective_points(F, 1)
    for _ in range(20):
        g = random_projectivity(F, 1, rng)
        A, B, C, D = rng.sample(pts, 4)
        assert cross_ratio(F, A, B, C, D) == cross_ratio(F, g(A), g(B), g(C), g(D))


def test_fit_projectivity_line():
    F = FieldSpec.of_order(7)
    pts = projective_points(F, 1)
    src = pts[:3]
    assert fit_projectivity_line(F, src, src) == Projectivity.identity(F, 1)
    with pytest.raises(GeometryError):
        fit_projectivity_line(F, [pts[0], pts[0], pts[1]], src)
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rng.sample(pts, 3) for _ in range(3))
        g = fit_projectivity_line(F, a, b)
        h = fit_projectivity_line(F, b, c)
        assert h @ g == fit_projectivity_line(F, a, c)
        D = next(X for X in pts if X not in a)
        assert cross_ratio(F, *a, D) == cross_ratio(F, *(g(X) for X in a), g(D))


def test_projectivity_canonical_and_inverse():
    F = FieldSpec.of_order(5)
    g = Projectivity(F, ((2, 1), (0, 3)))
    assert g.matrix[0][0] == 1
    assert Projectivity(F, ((4, 2), (0, 1))) == g
    assert (g @ g.inverse()) == Projectivity.identity(F, 1)
    with pytest.raises(GeometryError):
        Projectivity(F, ((1, 2), (2, 4)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 120), min_size=1, max_size=4), st.lists(st.integers(0, 120), min_size=1, max_size=4))
def test_modular_law_property(a, b):
    pts = projective_points(F3, 4)
    A = span([pts[i] for i in a], F3)
    B = span([pts[i] for i in b], F3)
    assert span([A, B]).dim + meet(A, B).dim == A.dim + B.dim


def test_pg_wrapper():
    pg = PG(4, F3)
    assert pg.num_points() == 121
    assert len(pg.hyperplanes()) == 121
    assert pg.line((1, 0, 0, 0, 0), (0, 1, 0, 0, 0)).dim == 1
