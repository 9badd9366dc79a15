import itertools
import random

import pytest

from baergeom.baer import line_profile, make_tangent_baer_subplane, on_line
from baergeom.bruckbose import (
    BruckBoseMap,
    check_spread,
    contains_transversals,
    extend_surface,
    from_bb,
    is_regular,
    make_regular_spread,
    pencil_to_3space,
    reverse_regulus,
    spread_from_surface,
    threespace_to_pencil,
    to_bb,
    transversal_check,
)
from baergeom.linalg import rank
from baergeom.projgeom import GeometryDomainError, GeometryError, Projectivity, Subspace, meet, normalize, projective_points, span
from baergeom.varieties import (
    RuledCubicSurface,
    SectionClassifier,
    SectionKind,
    hyperplanes_through,
    make_ruled_cubic_surface,
    recover_ruling,
)


def extended(emb, L):
    return Subspace.from_vectors(emb.ext, L.n, [emb.embed_vector(b) for b in L.basis])


def frobenius_point(emb, P):
    return normalize(emb.ext, tuple(emb.frobenius(x) for x in P))


def subfield_points(emb, L):
    """Points of a PG(4,q^2) subspace with a representative over GF(q), restricted to GF(q)."""
    return {tuple(emb.restrict(x) for x in P) for P in L.points if all(emb.in_subfield(x) for x in P)}


def random_frame(F, rng):
    while True:
        M = [[rng.randrange(F.q) for _ in range(5)] for _ in range(5)]
        if rank(F, M) == 5:
            return tuple(map(tuple, M))


def tangent_surface(emb, seed=0):
    bb = BruckBoseMap.standard(emb)
    B = make_tangent_baer_subplane(emb, bb.linf_points[0], seed)
    K = bb.point_set_image(B.points)
    return bb, B, K


# --------------------------------------------------------------------------
# spreads


def test_spread_partitions_pg3_q3(embeddings):
    emb = embeddings[3]
    sp = make_regular_spread(emb)
    assert len(sp.lines) == 10
    pts = [P for L in sp.lines for P in L.points]
    assert len(pts) == len(set(pts)) == 40
    assert check_spread(sp.lines) == sp.space
    assert is_regular(sp.lines)


@pytest.mark.parametrize("q", [3, 4])
def test_spread_regular(embeddings, q):
    assert is_regular(make_regular_spread(embeddings[q]).lines)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_reversed_regulus_not_regular(embeddings, q):
    sp = make_regular_spread(embeddings[q])
    bad = reverse_regulus(sp.lines)
    check_spread(bad)
    assert set(bad) != set(sp.lines)
    assert not is_regular(bad)


def test_check_spread_rejects_non_spread(embeddings):
    sp = make_regular_spread(embeddings[3])
    with pytest.raises(GeometryError):
        check_spread(sp.lines[:-1])
    L = sp.lines[0]
    M = span([L.basis[0], sp.lines[1].basis[0]], L.field)
    with pytest.raises(GeometryError):
        is_regular(list(sp.lines[1:]) + [M])


@pytest.mark.parametrize("q", [3, 4, 5])
def test_transversals(embeddings, q):
    emb = embeddings[q]
    E = emb.ext
    sp = make_regular_spread(emb)
    g, gq = sp.transversals
    assert {frobenius_point(emb, P) for P in g.points} == set(gq.points)
    assert meet(g, gq).is_empty
    for L in sp.lines:
        Lx = extended(emb, L)
        assert meet(Lx, g).dim == 0 and meet(Lx, gq).dim == 0
    lines = set(sp.lines)
    for X in g.points:
        XXq = span([X, frobenius_point(emb, X)], E)
        real = subfield_points(emb, XXq)
        assert len(real) == q + 1
        assert span(list(real), emb.base) in lines


def test_transversal_pair_unique_q3(embeddings):
    emb = embeddings[3]
    E = emb.ext
    sp = make_regular_spread(emb)
    ext = [extended(emb, L) for L in sp.lines]
    found = set()
    for A in ext[0].points:
        for B in ext[1].points:
            cand = span([A, B], E)
            if all(meet(cand, L).dim >= 0 for L in ext[2:]):
                found.add(cand)
    assert found == set(sp.transversals)


# --------------------------------------------------------------------------
# the correspondence


def test_origin_maps_to_last_basis_point(embeddings):
    bb = BruckBoseMap.standard(embeddings[3])
    assert to_bb((0, 0, 1), bb) == (0, 0, 0, 0, 1)


def test_round_trip_pg2_9(embeddings):
    emb = embeddings[3]
    bb = BruckBoseMap.standard(emb)
    pts = projective_points(emb.ext, 2)
    assert len(pts) == 91
    images = set()
    for P in pts:
        obj = to_bb(P, bb)
        assert from_bb(obj, bb) == P
        images.add(obj)
    assert len(images) == 91
    assert set(bb.point_set_image(pts)) == set(projective_points(emb.base, 4))


def test_lines_map_to_planes_about_spread_lines(embeddings):
    emb = embeddings[3]
    E = emb.ext
    bb = BruckBoseMap.standard(emb)
    spread = set(bb.spread.lines)
    for ell in projective_points(E, 2):
        if ell == (0, 0, 1):
            continue
        pts = [P for P in projective_points(E, 2) if on_line(E, ell, P)]
        img = bb.point_set_image(pts)
        plane = span(list(img), emb.base)
        assert plane.dim == 2 and len(img) == len(plane.points)
        assert sum(1 for L in spread if plane.contains(L)) == 1


def test_from_bb_rejects_non_spread_lines(embeddings):
    emb = embeddings[3]
    bb = BruckBoseMap.standard(emb)
    a, b = bb.spread.lines[0].basis[0], bb.spread.lines[1].basis[0]
    with pytest.raises(GeometryError):
        from_bb(span([a, b]), bb)
    with pytest.raises(GeometryError):
        from_bb(a, bb)


def test_pencil_round_trip_q3(embeddings):
    emb = embeddings[3]
    q = 3
    bb = BruckBoseMap.standard(emb)
    F = emb.base
    hyperplanes = [Subspace.from_covector(F, h) for h in projective_points(F, 4)]
    hyperplanes = [H for H in hyperplanes if H != bb.sigma_inf]
    assert len(hyperplanes) == 120
    for H in hyperplanes:
        D = threespace_to_pencil(H, bb)
        assert len(D.points) == q * q * (q + 1) + 1
        assert D.vertex[2] == 0
        assert pencil_to_3space(D, bb) == H
        affine = {bb.to_bb(P) for P in D.points if P[2] != 0}
        assert affine == {P for P in H.points if bb.is_affine(P)}
    with pytest.raises(GeometryDomainError):
        threespace_to_pencil(bb.sigma_inf, bb)


def test_for_spread_matches_changed_frame(embeddings):
    emb = embeddings[4]
    F = emb.base
    M = random_frame(F, random.Random(5))
    moved = BruckBoseMap(emb, M)
    bb = BruckBoseMap.for_spread(emb, moved.sigma_inf, moved.spread.lines)
    assert bb.sigma_inf == moved.sigma_inf
    assert set(bb.spread.lines) == set(moved.spread.lines)
    for P in projective_points(emb.ext, 2)[:40]:
        assert from_bb(to_bb(P, bb), bb) == P
    # transversals of the derived frame meet every extended spread line
    for L in bb.spread.lines:
        for g in bb.spread.transversals:
            assert meet(extended(emb, L), g).dim == 0


def test_for_spread_rejects_irregular(embeddings):
    emb = embeddings[3]
    bb = BruckBoseMap.standard(emb)
    with pytest.raises(GeometryError):
        BruckBoseMap.for_spread(emb, bb.sigma_inf, reverse_regulus(bb.spread.lines))


# --------------------------------------------------------------------------
# surfaces and transversals


@pytest.mark.parametrize("q", [3, 4, 5])
def test_tangent_subplane_surface_contains_transversals(embeddings, q):
    emb = embeddings[q]
    bb, B, K = tangent_surface(emb, seed=q)
    assert len(K) == (q + 1) ** 2
    r = recover_ruling(emb.base, K)
    assert r.baseline in set(bb.spread.lines)
    assert contains_transversals(r.surface, bb.spread)
    g, gq = bb.spread.transversals
    ext = extend_surface(r.surface, emb)
    assert len(ext) == (q * q + 1) ** 2
    assert set(g.points) <= ext and set(gq.points) <= ext


def test_directrix_not_spread_line(embeddings):
    emb = embeddings[3]
    bb = BruckBoseMap.standard(emb)
    D = ((1, 0), (0, 0), (0, 1), (0, 0), (0, 0))
    C = ((0, 0, 0), (1, 0, 0), (0, 0, 0), (0, 1, 0), (0, 0, 1))
    S = RuledCubicSurface(emb.base, D, C, Projectivity.identity(emb.base, 1))
    ok, reason = transversal_check(S, bb.spread)
    assert S.directrix not in set(bb.spread.lines)
    assert not ok and reason == "directrix is not a spread line"


def _all_sigmas(F):
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        if F.sub[F.mul[a][d]][F.mul[b][c]] != 0:
            yield ((a, b), (c, d))


def _is_tangent_baer_image(bb, K):
    q = bb.field.q
    pre = bb.preimage(K)
    if len(pre) != q * q + q + 1 or bb.point_set_image(pre) != frozenset(K):
        return False
    if sum(1 for P in pre if P[2] == 0) != 1:
        return False
    return set(line_profile(bb.ext, pre)) <= {1, q + 1}


def test_transversal_condition_equivalent_to_baer_image_q3(embeddings):
    emb = embeddings[3]
    bb, _, K = tangent_surface(emb, seed=1)
    r = recover_ruling(emb.base, K)
    S0 = r.surface
    outcomes = set()
    for M in _all_sigmas(emb.base):
        S = RuledCubicSurface(emb.base, S0.directrix_map, S0.conic_map, Projectivity(emb.base, M))
        has = contains_transversals(S, bb.spread)
        assert has == _is_tangent_baer_image(bb, S.points)
        outcomes.add(has)
    assert outcomes == {True, False}


@pytest.mark.parametrize("q", [3, 4])
def test_spread_from_surface(embeddings, q):
    emb = embeddings[q]
    F = emb.base
    S = make_ruled_cubic_surface(F)
    clf = SectionClassifier(F, S.points)
    sigma_inf = next(H for H in hyperplanes_through(S.directrix) if clf.classify(H).kind is SectionKind.T1)
    lines = spread_from_surface(S, sigma_inf)
    assert len(lines) == q * q + 1
    assert S.directrix in lines
    assert is_regular(lines)
    bb = BruckBoseMap.for_spread(emb, sigma_inf, lines)
    image = bb.preimage(S.points)
    assert len(image) == q * q + q + 1
    assert sum(1 for P in image if P[2] == 0) == 1
    assert set(line_profile(emb.ext, image)) == {1, q + 1}
