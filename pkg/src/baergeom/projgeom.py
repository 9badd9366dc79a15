"""Projective spaces PG(n, q) over a FieldSpec.

Points are plain tuples of element indices, normalized so that the first
nonzero coordinate is 1; that makes equality, hashing and sorting canonical.
Subspaces keep a reduced row-echelon basis.  A ``Subspace`` with an empty
basis is the empty subspace (projective dimension -1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Union

from .gf import FieldError, FieldSpec
from .linalg import mat_inv, mat_mul, mat_vec, nullspace, rank, rref, solve

Point = tuple


class GeometryError(ValueError):
    """Usage error: degenerate or mismatched input."""


class GeometryDomainError(ArithmeticError):
    """Operation undefined at this input (e.g. projecting the centre)."""


def normalize(F: FieldSpec, v) -> Point:
    for x in v:
        if x:
            if x == 1:
                return tuple(v)
            s = F.inv[x]
            mul = F.mul[s]
            return tuple(mul[a] for a in v)
    raise GeometryError("the zero vector is not a projective point")


def scale(F: FieldSpec, c: int, v) -> list[int]:
    mul = F.mul[c]
    return [mul[a] for a in v]


def vadd(F: FieldSpec, u, v) -> list[int]:
    add = F.add
    return [add[a][b] for a, b in zip(u, v)]


def combine(F: FieldSpec, a: int, u, b: int, v) -> list[int]:
    """a*u + b*v."""
    add, ma, mb = F.add, F.mul[a], F.mul[b]
    return [add[ma[x]][mb[y]] for x, y in zip(u, v)]


def projective_points(F: FieldSpec, n: int) -> list[Point]:
    """All points of PG(n, q), sorted lexicographically."""
    return list(_points(F, n))


@lru_cache(maxsize=64)
def _points(F: FieldSpec, n: int) -> tuple[Point, ...]:
    out = []
    q = F.q
    for lead in range(n + 1):
        head = (0,) * lead + (1,)
        for tail in itertools.product(range(q), repeat=n - lead):
            out.append(head + tail)
    out.sort()
    return tuple(out)


def line_points(F: FieldSpec, P, Q) -> list[Point]:
    """The q+1 points of the line PQ (P, Q distinct points)."""
    out = [normalize(F, Q)]
    for x in range(F.q):
        out.append(normalize(F, combine(F, 1, P, x, Q)))
    return out


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    n: int
    basis: tuple

    @classmethod
    def from_vectors(cls, F: FieldSpec, n: int, vectors) -> Subspace:
        vectors = [v for v in vectors if any(v)]
        for v in vectors:
            if len(v) != n + 1:
                raise GeometryError(f"vector {v} does not live in PG({n},{F.q})")
        R, _ = rref(F, vectors)
        return cls(F, n, tuple(tuple(r) for r in R))

    @classmethod
    def from_covectors(cls, F: FieldSpec, n: int, covectors) -> Subspace:
        return cls.from_vectors(F, n, nullspace(F, covectors, n + 1))

    @classmethod
    def from_covector(cls, F: FieldSpec, covector) -> Subspace:
        """The hyperplane ``covector . x = 0``."""
        covector = normalize(F, covector)
        sub = cls.from_covectors(F, len(covector) - 1, [covector])
        sub.__dict__["covector"] = covector
        return sub

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def is_empty(self) -> bool:
        return not self.basis

    @cached_property
    def annihilator(self) -> tuple:
        """Covectors cutting out the subspace, in row-echelon form."""
        if self.basis:
            rows = nullspace(self.field, self.basis, self.n + 1)
        else:
            rows = _identity_rows(self.n + 1)
        R, _ = rref(self.field, rows)
        return tuple(tuple(r) for r in R)

    @cached_property
    def covector(self) -> Point:
        if self.dim != self.n - 1:
            raise GeometryError("only hyperplanes have a single covector")
        return normalize(self.field, self.annihilator[0])

    @cached_property
    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)

    def contains(self, P) -> bool:
        if isinstance(P, Subspace):
            return all(self.contains(v) for v in P.basis)
        dot = self.field.dot
        return all(dot(h, P) == 0 for h in self.annihilator)

    __contains__ = contains

    def coordinates(self, P) -> tuple:
        """Coordinates of a vector of this subspace with respect to the echelon basis."""
        c = tuple(P[i] for i in self.pivots)
        if not self.contains(P):
            raise GeometryError(f"{P} is not in the subspace")
        return c

    def point_at(self, coords) -> Point:
        v = [0] * (self.n + 1)
        F = self.field
        for c, b in zip(coords, self.basis):
            if c:
                v = combine(F, 1, v, c, b)
        return normalize(F, v)

    @cached_property
    def points(self) -> tuple:
        if not self.basis:
            return ()
        F = self.field
        pts = [self.point_at(c) for c in _points(F, self.dim)]
        pts.sort()
        return tuple(pts)

    def __len__(self):
        return len(self.points)

    def to_json(self) -> list:
        return [list(r) for r in self.basis]


def _identity_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


Obj = Union[Point, Subspace]


def _vectors(objs: Iterable[Obj]):
    for o in objs:
        if isinstance(o, Subspace):
            yield from o.basis
        else:
            yield o


def span(objects, field: FieldSpec | None = None) -> Subspace:
    """Smallest subspace containing the given points and subspaces."""
    objects = list(objects)
    if not objects:
        raise GeometryError("span of nothing")
    subs = [o for o in objects if isinstance(o, Subspace)]
    F = field or (subs[0].field if subs else None)
    if F is None:
        raise GeometryError("span of bare points needs the field")
    n = subs[0].n if subs else len(objects[0]) - 1
    if any(s.n != n or s.field != F for s in subs):
        raise GeometryError("span of objects from different spaces")
    return Subspace.from_vectors(F, n, list(_vectors(objects)))


def meet(A: Subspace, B: Subspace) -> Subspace:
    if A.n != B.n or A.field != B.field:
        raise GeometryError("meet of subspaces from different spaces")
    return Subspace.from_covectors(A.field, A.n, list(A.annihilator) + list(B.annihilator))


def contains(A: Subspace, P) -> bool:
    return A.contains(P)


def proj_dim(A: Subspace) -> int:
    return A.dim


class PG:
    """The ambient space PG(n, q); a thin convenience wrapper."""

    def __init__(self, n: int, field: FieldSpec):
        if n < 1:
            raise GeometryError("PG(n,q) needs n >= 1")
        self.n = n
        self.field = field

    def __repr__(self):
        return f"PG({self.n},{self.field.q})"

    def points(self) -> list[Point]:
        return projective_points(self.field, self.n)

    def num_points(self) -> int:
        q = self.field.q
        return (q ** (self.n + 1) - 1) // (q - 1)

    def hyperplane(self, covector) -> Subspace:
        return Subspace.from_covector(self.field, covector)

    def hyperplanes(self) -> list[Subspace]:
        return [self.hyperplane(c) for c in self.points()]

    def span(self, *objs) -> Subspace:
        return span(objs, self.field)

    def line(self, P, Q) -> Subspace:
        return span((P, Q), self.field)

    def meet(self, A, B) -> Subspace:
        return meet(A, B)

    def whole(self) -> Subspace:
        return Subspace.from_vectors(self.field, self.n, _identity_rows(self.n + 1))

    def subspaces(self, dim: int) -> list[Subspace]:
        return enumerate_subspaces(self.field, self.n, dim)


def enumerate_points(n: int, field: FieldSpec) -> list[Point]:
    return projective_points(field, n)


def enumerate_hyperplanes(n: int, field: FieldSpec) -> list[Subspace]:
    return PG(n, field).hyperplanes()


def enumerate_subspaces(F: FieldSpec, n: int, dim: int) -> list[Subspace]:
    """Every subspace of projective dimension ``dim``, via echelon patterns."""
    r = dim + 1
    out = []
    for pivots in itertools.combinations(range(n + 1), r):
        free = [(i, c) for i in range(r) for c in range(pivots[i] + 1, n + 1) if c not in pivots]
        for vals in itertools.product(range(F.q), repeat=len(free)):
            rows = [[0] * (n + 1) for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            out.append(Subspace(F, n, tuple(tuple(row) for row in rows)))
    return out


@dataclass(frozen=True)
class Projectivity:
    """An element of PGL(n+1, q), stored up to scalar (first nonzero entry 1)."""

    field: FieldSpec
    matrix: tuple

    def __post_init__(self):
        M = [list(r) for r in self.matrix]
        if len(M) != len(M[0]) or rank(self.field, M) != len(M):
            raise GeometryError("projectivity matrix must be square and invertible")
        flat = [x for r in M for x in r]
        lead = next(x for x in flat if x)
        if lead != 1:
            s = self.field.inv[lead]
            M = [[self.field.mul[s][x] for x in r] for r in M]
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in M))

    @classmethod
    def identity(cls, F: FieldSpec, n: int) -> Projectivity:
        return cls(F, tuple(tuple(r) for r in _identity_rows(n + 1)))

    @property
    def n(self) -> int:
        return len(self.matrix) - 1

    def __call__(self, P) -> Point:
        return normalize(self.field, mat_vec(self.field, self.matrix, P))

    def image(self, S: Subspace) -> Subspace:
        vecs = [mat_vec(self.field, self.matrix, b) for b in S.basis]
        return Subspace.from_vectors(self.field, S.n, vecs)

    def __matmul__(self, other: Projectivity) -> Projectivity:
        return Projectivity(self.field, tuple(map(tuple, mat_mul(self.field, self.matrix, other.matrix))))

    def inverse(self) -> Projectivity:
        return Projectivity(self.field, tuple(map(tuple, mat_inv(self.field, self.matrix))))

    def to_json(self) -> list:
        return [list(r) for r in self.matrix]


def frame_map(F: FieldSpec, src, dst):
    """Matrix sending src[i] to dst[i] projectively.

    ``src`` is a frame of PG(n,q) (n+2 points in general position); ``dst``
    is n+2 points in general position inside an n-dimensional subspace of a
    possibly larger space.  Returns the (m+1) x (n+1) matrix, or None when
    either side is not a frame.
    """
    n = len(src) - 2
    if len(dst) != n + 2:
        raise GeometryError("frame sizes differ")
    c = solve(F, src[: n + 1], src[n + 1])
    d = solve(F, dst[: n + 1], dst[n + 1])
    if c is None or d is None or 0 in c or 0 in d:
        return None
    S = [[F.mul[c[j]][src[j][i]] for j in range(n + 1)] for i in range(n + 1)]
    D = [[F.mul[d[j]][dst[j][i]] for j in range(n + 1)] for i in range(len(dst[0]))]
    return mat_mul(F, D, mat_inv(F, S))


def fit_projectivity_line(F: FieldSpec, src, dst) -> Projectivity:
    """The unique element of PGL(2,q) mapping three points of PG(1,q) to three others."""
    if len(src) != 3 or len(dst) != 3:
        raise GeometryError("need exactly three source and three target points")
    M = frame_map(F, [tuple(p) for p in src], [tuple(p) for p in dst])
    if M is None:
        raise GeometryError("source or target triple is degenerate")
    return Projectivity(F, tuple(map(tuple, M)))


def project_from(P, hyperplane: Subspace) -> Callable[[Point], Point]:
    """Projection from the point P onto a hyperplane not containing it."""
    F = hyperplane.field
    h = hyperplane.covector
    hP = F.dot(h, P)
    if hP == 0:
        raise GeometryError("centre of projection lies in the target hyperplane")
    P = normalize(F, P)

    def _project(X):
        X = normalize(F, X)
        if X == P:
            raise GeometryDomainError("cannot project the centre of projection")
        # hP*X - h(X)*P lies on the line PX and in the hyperplane
        return normalize(F, combine(F, hP, X, F.neg[F.dot(h, X)], P))

    return _project


def cross_ratio(F: FieldSpec, A, B, C, D) -> int:
    """Cross-ratio normalized so that points with parameters 0, 1, inf, t give t.

    Returns a field element index; the four points must be distinct, so the
    value never equals 0, 1 or infinity.
    """
    pts = [normalize(F, X) for X in (A, B, C, D)]
    if len(set(pts)) != 4:
        raise GeometryError("cross-ratio needs four distinct points")
    if rank(F, pts) != 2:
        raise GeometryError("cross-ratio needs collinear points")
    R, piv = rref(F, pts[:2])
    a, b, c, d = ((X[piv[0]], X[piv[1]]) for X in pts)

    def br(x, y):
        return F.sub[F.mul[x[0]][y[1]]][F.mul[x[1]][y[0]]]

    num = F.mul[br(d, a)][br(b, c)]
    den = F.mul[br(d, c)][br(b, a)]
    return F.mul[num][F.inv[den]]


def line_parameter(F: FieldSpec, P) -> int | None:
    """Affine parameter t of a point (1, t) of PG(1,q); None for (0, 1)."""
    P = normalize(F, P)
    return None if P[0] == 0 else P[1]


def check_field(F: FieldSpec, P) -> None:
    if any(not 0 <= x < F.q for x in P):
        raise FieldError(f"{P} has coordinates outside GF({F.q})")
