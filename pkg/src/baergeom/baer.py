"""Baer sublines, tangent Baer subplanes and Baer pencils of PG(2, q^2).

Points are normalized triples over GF(q^2); the line at infinity is z = 0.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np

from .gf import ExtensionEmbedding, FieldSpec
from .linalg import mat_inv, mat_vec, rank, solve
from .projgeom import GeometryError, Point, Subspace, frame_map, normalize, projective_points
from .varieties import is_nondegenerate_conic


def cross(F: FieldSpec, a, b) -> Point:
    """Cross product; joins two points or meets two lines of PG(2, q)."""
    m, s = F.mul, F.sub
    return (
        s[m[a[1]][b[2]]][m[a[2]][b[1]]],
        s[m[a[2]][b[0]]][m[a[0]][b[2]]],
        s[m[a[0]][b[1]]][m[a[1]][b[0]]],
    )


def line_through(F: FieldSpec, P, Q) -> Point:
    """Line coordinates of PQ (normalized)."""
    c = cross(F, P, Q)
    if not any(c):
        raise GeometryError("points coincide")
    return normalize(F, c)


def on_line(F: FieldSpec, line, P) -> bool:
    return F.dot(line, P) == 0


def collinear(F: FieldSpec, pts) -> bool:
    return rank(F, list(pts)) <= 2


# --------------------------------------------------------------------------
# sublines


@dataclass(frozen=True, eq=False)
class BaerSubline:
    carrier: Subspace
    points: frozenset

    def __eq__(self, other):
        return isinstance(other, BaerSubline) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __contains__(self, P):
        return P in self.points

    def __len__(self):
        return len(self.points)

    @cached_property
    def covector(self) -> Point:
        return self.carrier.covector


def baer_subline_through(emb: ExtensionEmbedding, A, B, C) -> BaerSubline:
    """The unique Baer subline through three distinct collinear points."""
    E = emb.ext
    A, B, C = (normalize(E, X) for X in (A, B, C))
    if len({A, B, C}) != 3:
        raise GeometryError("points must be distinct")
    if rank(E, [A, B, C]) != 2:
        raise GeometryError("points are not collinear")
    alpha, beta = solve(E, [A, B], C)
    a = [E.mul[alpha][x] for x in A]
    b = [E.mul[beta][x] for x in B]
    sub = emb.subfield()
    pts = {normalize(E, [E.add[E.mul[sub[s]][x]][E.mul[sub[t]][y]] for x, y in zip(a, b)]) for s, t in projective_points(emb.base, 1)}
    return BaerSubline(Subspace.from_vectors(E, 2, [A, B]), frozenset(pts))


def is_baer_subline(emb: ExtensionEmbedding, pts) -> Optional[BaerSubline]:
    pts = frozenset(normalize(emb.ext, P) for P in pts)
    if len(pts) != emb.q + 1:
        return None
    A, B, C = sorted(pts)[:3]
    if rank(emb.ext, [A, B, C]) != 2:
        return None
    sl = baer_subline_through(emb, A, B, C)
    return sl if sl.points == pts else None


# --------------------------------------------------------------------------
# subplanes


def _first_quadrangle(F: FieldSpec, pts):
    """Lexicographically least ordered quadrangle (no three collinear) among ``pts``."""
    pts = sorted(pts)
    for A, B in itertools.combinations(pts, 2):
        AB = line_through(F, A, B)
        for C in pts:
            if C in (A, B) or on_line(F, AB, C):
                continue
            AC, BC = line_through(F, A, C), line_through(F, B, C)
            for D in pts:
                if D in (A, B, C) or on_line(F, AB, D) or on_line(F, AC, D) or on_line(F, BC, D):
                    continue
                return [A, B, C, D]
    return None


STD_FRAME = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]


@dataclass(frozen=True, eq=False)
class BaerSubplane:
    """Image of the subfield plane PG(2,q) under ``matrix`` (3x3 over GF(q^2))."""

    embedding: ExtensionEmbedding
    matrix: tuple

    @cached_property
    def points(self) -> frozenset:
        E, emb = self.embedding.ext, self.embedding
        return frozenset(normalize(E, mat_vec(E, self.matrix, emb.embed_vector(P))) for P in projective_points(emb.base, 2))

    def __contains__(self, P):
        return P in self.points

    def __len__(self):
        return len(self.points)

    @cached_property
    def linf_points(self) -> frozenset:
        return frozenset(P for P in self.points if P[2] == 0)

    @property
    def is_tangent(self) -> bool:
        return len(self.linf_points) == 1

    @cached_property
    def tangent_point(self) -> Point:
        if not self.is_tangent:
            raise GeometryError("subplane is not tangent to l_inf")
        return next(iter(self.linf_points))

    @cached_property
    def frame(self) -> list:
        return _first_quadrangle(self.embedding.ext, self.points)

    @cached_property
    def internal_inverse(self) -> tuple:
        """Matrix taking B to the standard subfield plane via the canonical quadrangle."""
        E = self.embedding.ext
        std = [self.embedding.embed_vector(v) for v in STD_FRAME]
        M = frame_map(E, std, self.frame)
        return tuple(map(tuple, mat_inv(E, M)))

    def internal_coordinates(self, P) -> Point:
        """Coordinates of a point of B in the standard PG(2,q) (base-field indices)."""
        if P not in self.points:
            raise GeometryError(f"{P} is not a point of the subplane")
        E, emb = self.embedding.ext, self.embedding
        v = normalize(E, mat_vec(E, self.internal_inverse, P))
        return tuple(emb.restrict(x) for x in v)

    def line_profile(self) -> dict:
        return line_profile(self.embedding.ext, self.points)


def line_profile(E: FieldSpec, pts) -> dict:
    """Histogram of |line ∩ pts| over all lines of PG(2,q^2)."""
    lines = projective_points(E, 2)
    counts = (E.dots(lines, sorted(pts)) == 0).sum(axis=1)
    vals, freq = np.unique(counts, return_counts=True)
    return {int(v): int(f) for v, f in zip(vals, freq)}


def subfield_plane(emb: ExtensionEmbedding) -> BaerSubplane:
    ident = tuple(tuple(1 if i == j else 0 for j in range(3)) for i in range(3))
    return BaerSubplane(emb, ident)


def make_tangent_baer_subplane(emb: ExtensionEmbedding, T, seed: int = 0) -> BaerSubplane:
    """A Baer subplane meeting l_inf exactly in T.

    A seeded choice of subfield point X and tangent line through it is moved
    onto (T, l_inf) by a projectivity.
    """
    E = emb.ext
    T = normalize(E, T)
    if T[2] != 0:
        raise GeometryError("T must lie on l_inf")
    rng = random.Random(seed)
    B0 = sorted(subfield_plane(emb).points)
    B0set = set(B0)
    X = rng.choice(B0)
    others = [Z for Z in projective_points(E, 2) if Z not in B0set]
    while True:
        Z = rng.choice(others)
        L = line_through(E, X, Z)
        if sum(1 for P in B0 if on_line(E, L, P)) == 1:
            break
    Y1 = next(P for P in B0 if P != X)
    XY1 = line_through(E, X, Y1)
    ZY1 = line_through(E, Z, Y1)
    Y2 = next(P for P in B0 if not on_line(E, L, P) and not on_line(E, XY1, P) and not on_line(E, ZY1, P))
    T2 = next(P for P in projective_points(E, 2) if P[2] == 0 and P != T)
    W = tuple(E.add[E.add[a][b]][c] for a, b, c in zip(T, T2, (0, 0, 1)))
    M = frame_map(E, [X, Z, Y1, Y2], [T, T2, (0, 0, 1), W])
    B = BaerSubplane(emb, tuple(map(tuple, M)))
    if B.linf_points != {T}:
        raise GeometryError("construction failed to be tangent at T")  # unreachable
    return B


def fq_conic_in_frame(emb: ExtensionEmbedding, pts) -> bool:
    """Whether ``pts`` is a non-degenerate conic of the Baer subplane spanned by its first quadrangle.

    Needs no ambient subplane, so it also applies to arbitrary point sets.
    """
    E = emb.ext
    pts = sorted(set(normalize(E, P) for P in pts))
    if len(pts) != emb.q + 1:
        return False
    quad = _first_quadrangle(E, pts)
    if quad is None:
        return False
    std = [emb.embed_vector(v) for v in STD_FRAME]
    Minv = mat_inv(E, frame_map(E, std, quad))
    image = []
    for P in pts:
        v = normalize(E, mat_vec(E, Minv, P))
        if not all(emb.in_subfield(x) for x in v):
            return False
        image.append(tuple(emb.restrict(x) for x in v))
    return is_nondegenerate_conic(emb.base, image) is not None


def is_fq_conic(pts, B: BaerSubplane) -> bool:
    """Whether ``pts`` (inside B) is a non-degenerate conic in B's internal coordinates."""
    pts = [normalize(B.embedding.ext, P) for P in pts]
    if any(P not in B.points for P in pts):
        raise GeometryError("points are not all in the subplane")
    image = [B.internal_coordinates(P) for P in pts]
    return is_nondegenerate_conic(B.embedding.base, image) is not None


# --------------------------------------------------------------------------
# pencils


@dataclass(frozen=True, eq=False)
class BaerPencil:
    """Cone of the q+1 lines joining ``vertex`` to the points of ``base``."""

    vertex: Point
    base: BaerSubline

    @property
    def field(self) -> FieldSpec:
        return self.base.carrier.field

    def __eq__(self, other):
        return isinstance(other, BaerPencil) and self.vertex == other.vertex and self.points == other.points

    def __hash__(self):
        return hash((self.vertex, self.base.points))

    @cached_property
    def cone_lines(self) -> tuple:
        E = self.field
        return tuple(sorted(line_through(E, self.vertex, X) for X in self.base.points))

    def contains(self, P) -> bool:
        """P is on the pencil iff P is the vertex or the line to the vertex meets the base."""
        E = self.field
        P = normalize(E, P)
        if P == self.vertex:
            return True
        X = cross(E, cross(E, self.vertex, P), self.base.covector)
        return normalize(E, X) in self.base.points

    __contains__ = contains

    @cached_property
    def points(self) -> frozenset:
        E = self.field
        out = {self.vertex}
        for X in self.base.points:
            out.update(Subspace.from_vectors(E, 2, [self.vertex, X]).points)
        return frozenset(out)

    @property
    def is_linf_pencil(self) -> bool:
        return self.vertex[2] == 0 and any(P[2] == 0 for P in self.base.points)

    def to_json(self) -> dict:
        return {"vertex": list(self.vertex), "base": sorted(map(list, self.base.points))}


def make_baer_pencil(vertex, base: BaerSubline) -> BaerPencil:
    E = base.carrier.field
    vertex = normalize(E, vertex)
    if base.carrier.contains(vertex):
        raise GeometryError("vertex lies on the carrier of the base")
    return BaerPencil(vertex, base)


def enumerate_linf_pencils(bb) -> list:
    """All l_inf-pencils, one per 3-space other than the hyperplane at infinity.

    ``bb`` is a BruckBoseMap; the order is the covector order of the 3-spaces.
    """
    out = []
    for h in projective_points(bb.field, 4):
        H = Subspace.from_covector(bb.field, h)
        if H == bb.sigma_inf:
            continue
        out.append(bb.threespace_to_pencil(H))
    return out


# --------------------------------------------------------------------------
# classification


class PencilKind(str, Enum):
    POINT = "Point"
    ONE_SUBLINE = "OneSubline"
    TWO_SUBLINES = "TwoSublines"
    FQ_CONIC = "FqConic"
    OTHER = "Other"


BOTH_THROUGH_T = "both_through_T"
ONE_ON_VERTEX_LINE = "one_through_T_other_on_vertex_line"
ONE_THROUGH_T = "one_through_T"


@dataclass(frozen=True)
class PencilIntersectionClass:
    kind: PencilKind
    points: frozenset
    sublines: tuple = ()
    conic: frozenset = frozenset()
    tag: str = ""
    diagnostic: str = ""

    @property
    def label(self) -> str:
        if self.kind is PencilKind.TWO_SUBLINES:
            return f"TwoSublines({self.tag})"
        return self.kind.value

    def witness_points(self) -> frozenset:
        out = set(self.conic)
        for s in self.sublines:
            out |= s.points
        if self.kind is PencilKind.POINT:
            out |= self.points
        return frozenset(out)

    def to_json(self) -> dict:
        d = {"kind": self.kind.value, "size": len(self.points)}
        if self.tag:
            d["tag"] = self.tag
        if self.sublines:
            d["sublines"] = [sorted(map(list, s.points)) for s in self.sublines]
        if self.conic:
            d["conic"] = sorted(map(list, self.conic))
        if self.diagnostic:
            d["diagnostic"] = self.diagnostic
        return d


def _two_sublines(emb, I: frozenset):
    """Split I into two Baer sublines, or return None."""
    E = emb.ext
    q = emb.q
    pts = sorted(I)
    carriers = {}
    for A, B in itertools.combinations(pts, 2):
        L = line_through(E, A, B)
        if L in carriers:
            continue
        on = frozenset(P for P in pts if on_line(E, L, P))
        carriers[L] = on
    subs = []
    for L, on in carriers.items():
        if len(on) == q + 1:
            sl = is_baer_subline(emb, on)
            if sl is not None:
                subs.append(sl)
    for s1, s2 in itertools.combinations(subs, 2):
        if s1.points | s2.points == I:
            return s1, s2
    return None


def classify_pencil_intersection(B, D: BaerPencil, emb: ExtensionEmbedding, T=None) -> PencilIntersectionClass:
    """Classify B ∩ D for an l_inf-pencil D.

    ``B`` may be a BaerSubplane or any point set (for falsification runs);
    ``T`` defaults to the unique point of B on l_inf.
    """
    E = emb.ext
    q = emb.q
    pts = B.points if isinstance(B, BaerSubplane) else frozenset(B)
    if T is None:
        linf = [P for P in pts if P[2] == 0]
        if len(linf) != 1:
            raise GeometryError("point set is not tangent to l_inf")
        T = linf[0]
    I = frozenset(P for P in pts if D.contains(P))
    n = len(I)

    def other(msg):
        return PencilIntersectionClass(PencilKind.OTHER, I, diagnostic=msg)

    if I == {T}:
        return PencilIntersectionClass(PencilKind.POINT, I)
    if T not in I:
        return other("intersection misses T")
    if n == q + 1:
        if collinear(E, I):
            sl = is_baer_subline(emb, I)
            if sl is None:
                return other(f"{n} collinear points not forming a Baer subline")
            return PencilIntersectionClass(PencilKind.ONE_SUBLINE, I, sublines=(sl,))
        if fq_conic_in_frame(emb, I):
            return PencilIntersectionClass(PencilKind.FQ_CONIC, I, conic=I)
        return other(f"{n} non-collinear points not forming an F_q-conic")
    if n in (2 * q + 1, 2 * q + 2):
        pair = _two_sublines(emb, I)
        if pair is None:
            return other(f"{n} points not splitting into two Baer sublines")
        s1, s2 = sorted(pair, key=lambda s: (T not in s, sorted(s.points)))
        if T in s1 and T in s2:
            tag = BOTH_THROUGH_T
        elif T in s1 and s2.carrier.contains(D.vertex):
            tag = ONE_ON_VERTEX_LINE
        elif T in s1:
            tag = ONE_THROUGH_T
        else:
            return other("neither subline contains T")
        return PencilIntersectionClass(PencilKind.TWO_SUBLINES, I, sublines=(s1, s2), tag=tag)
    return other(f"{n} points")
