"""Conics, twisted cubics, reguli and ruled cubic surfaces of PG(4, q).

Besides constructors and recognizers this module holds the hyperplane
section classifier (types T1..T8) and the reconstruction pipeline that
recovers a ruled cubic surface from a bare point set:

    extract_sticks -> extract_baseline -> unique_conic_through -> recover_ruling

Each reconstruction step raises :class:`ReconstructionError` tagged with the
name of the step whose postcondition failed.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .gf import FieldSpec
from .linalg import mat_inv, mat_mul, mat_vec, nullspace, rank, rref, transpose
from .projgeom import (
    GeometryError,
    Point,
    Projectivity,
    Subspace,
    combine,
    fit_projectivity_line,
    frame_map,
    meet,
    normalize,
    project_from,
    projective_points,
    span,
)


class ReconstructionError(Exception):
    """A reconstruction step found the point set inconsistent.

    ``step`` names the violated step: conic-seed, sticks, baseline,
    unique-conic, ruling-projectivity, round-trip, projection-regulus.
    """

    def __init__(self, step: str, message: str, witness=None):
        super().__init__(f"[{step}] {message}")
        self.step = step
        self.message = message
        self.witness = witness


# --------------------------------------------------------------------------
# conics


def _conic_monomials(F: FieldSpec, c) -> list[int]:
    x, y, z = c
    m = F.mul
    return [m[x][x], m[y][y], m[z][z], m[y][z], m[z][x], m[x][y]]


def _eval_form(F: FieldSpec, form, c) -> int:
    return F.dot(form, _conic_monomials(F, c))


def conic_discriminant(F: FieldSpec, form) -> int:
    """4abc + fgh - af^2 - bg^2 - ch^2 for a x^2+b y^2+c z^2+f yz+g zx+h xy.

    Nonzero exactly when the ternary form is non-degenerate, in every
    characteristic (it is half the determinant of the Hessian).
    """
    a, b, c, f, g, h = form
    m, ad, sb = F.mul, F.add, F.sub
    four = F.from_int(4)
    t = m[four][m[m[a][b]][c]]
    t = ad[t][m[m[f][g]][h]]
    t = sb[t][m[a][m[f][f]]]
    t = sb[t][m[b][m[g][g]]]
    return sb[t][m[c][m[h][h]]]


@dataclass(frozen=True, eq=False)
class Conic:
    """Non-degenerate conic; ``form`` is in the plane's echelon coordinates."""

    plane: Subspace
    form: tuple
    points: frozenset

    def __eq__(self, other):
        return isinstance(other, Conic) and self.plane == other.plane and self.points == other.points

    def __hash__(self):
        return hash((self.plane, self.points))

    def __contains__(self, P):
        return P in self.points

    def __len__(self):
        return len(self.points)

    @property
    def field(self) -> FieldSpec:
        return self.plane.field

    @cached_property
    def param_matrix(self) -> tuple:
        """Matrix M with t=(s:t) -> M (s^2, st, t^2) running over the conic."""
        F = self.field
        pts = sorted(self.points)
        A, B, D, E = pts[:4]
        for lam in range(2, F.q):
            std = [(1, 0, 0), (0, 0, 1), (1, 1, 1), (1, lam, F.mul[lam][lam])]
            M = frame_map(F, std, [A, B, D, E])
            if M is None:
                continue
            imgs = {normalize(F, mat_vec(F, M, v)) for v in _std_conic(F)}
            if imgs == self.points:
                return tuple(map(tuple, M))
        raise GeometryError("conic admits no quadratic parametrization")  # unreachable for real conics

    @cached_property
    def parameters(self) -> dict:
        """Point -> PG(1,q) parameter under ``param_matrix``."""
        F = self.field
        M = self.param_matrix
        return {normalize(F, mat_vec(F, M, _veronese2(F, st))): st for st in projective_points(F, 1)}

    def to_json(self) -> dict:
        return {"plane": self.plane.to_json(), "points": sorted(map(list, self.points))}


def _veronese2(F, st):
    s, t = st
    return (F.mul[s][s], F.mul[s][t], F.mul[t][t])


def _std_conic(F):
    return [_veronese2(F, st) for st in projective_points(F, 1)]


def is_nondegenerate_conic(F: FieldSpec, pts) -> Optional[Conic]:
    """Return the conic if ``pts`` is exactly the zero set of a non-degenerate form in a plane."""
    pts = frozenset(normalize(F, P) for P in pts)
    if len(pts) != F.q + 1:
        return None
    ordered = sorted(pts)
    n = len(ordered[0]) - 1
    plane = Subspace.from_vectors(F, n, ordered)
    if plane.dim != 2:
        return None
    local = [plane.coordinates(P) for P in ordered]
    null = nullspace(F, [_conic_monomials(F, c) for c in local], 6)
    if not null or len(null) > 2:
        return None
    plane_pts = projective_points(F, 2)
    local_set = set(local)
    for coeffs in projective_points(F, len(null) - 1):
        form = [0] * 6
        for c, v in zip(coeffs, null):
            form = combine(F, 1, form, c, v)
        if conic_discriminant(F, form) == 0:
            continue
        zeros = {c for c in plane_pts if _eval_form(F, form, c) == 0}
        if zeros == {normalize(F, c) for c in local_set}:
            return Conic(plane, tuple(normalize(F, form)), pts)
    return None


# --------------------------------------------------------------------------
# twisted cubics


def _veronese3(F, st):
    s, t = st
    m = F.mul
    s2, t2 = m[s][s], m[t][t]
    return (m[s2][s], m[s2][t], m[s][t2], m[t2][t])


@dataclass(frozen=True, eq=False)
class TwistedCubic:
    space: Subspace
    points: frozenset
    frame: tuple  # five points of the curve, images of parameters 0, 1, a2, a3, inf
    params: tuple  # (a2, a3), or () when q + 1 == 4

    def __eq__(self, other):
        return isinstance(other, TwistedCubic) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __contains__(self, P):
        return P in self.points

    def __len__(self):
        return len(self.points)

    @cached_property
    def param_matrix(self) -> tuple:
        """Matrix M with (s:t) -> M (s^3, s^2 t, s t^2, t^3) running over the curve."""
        F = self.space.field
        if not self.params:
            std = [_veronese3(F, st) for st in [(1, 0), (1, 1), (1, 2), (0, 1)]]
            cols = [list(P) for P in self.frame]
            M = mat_mul(F, transpose(cols), mat_inv(F, transpose(std)))
        else:
            a2, a3 = self.params
            std = [_veronese3(F, st) for st in [(1, 0), (1, 1), (1, a2), (1, a3), (0, 1)]]
            M = frame_map(F, std, list(self.frame))
        return tuple(map(tuple, M))

    def image_points(self) -> frozenset:
        F = self.space.field
        M = self.param_matrix
        return frozenset(normalize(F, mat_vec(F, M, _veronese3(F, st))) for st in projective_points(F, 1))

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "points": sorted(map(list, self.points))}


def is_twisted_cubic(F: FieldSpec, pts) -> Optional[TwistedCubic]:
    """Recognize q+1 points of a 3-space as a twisted cubic.

    Four points serve as a basis and a fifth as the unit point; in those
    coordinates every twisted cubic through them is t -> (e_i / (t - a_i))
    with a_0 = 0, a_1 = 1 after fixing the parameter of the unit point to
    infinity.  Each further point then pins (a_2, a_3) directly, so the test is
    a single pass.
    """
    pts = frozenset(normalize(F, P) for P in pts)
    q = F.q
    if len(pts) != q + 1:
        return None
    ordered = sorted(pts)
    n = len(ordered[0]) - 1
    space = Subspace.from_vectors(F, n, ordered)
    if space.dim != 3:
        return None
    basis = ordered[:4]
    if rank(F, basis) != 4:
        return None
    if q + 1 == 4:
        return TwistedCubic(space, pts, tuple(basis), ())
    rest = ordered[4:]
    aug = [[P[i] for P in basis + rest] for i in range(n + 1)]
    R, piv = rref(F, aug)
    if piv != [0, 1, 2, 3]:
        return None
    coords = [[R[r][4 + j] for r in range(4)] for j in range(len(rest))]
    e = coords[0]
    if 0 in e:
        return None
    m, sub, inv = F.mul, F.sub, F.inv
    params = None
    for y in coords[1:]:
        if 0 in y:
            return None
        r = [m[ei][inv[yi]] for ei, yi in zip(e, y)]
        d = sub[r[0]][r[1]]
        if d == 0:
            return None
        k = inv[d]
        a = (m[k][sub[r[0]][r[2]]], m[k][sub[r[0]][r[3]]])
        if params is None:
            if a[0] in (0, 1) or a[1] in (0, 1) or a[0] == a[1]:
                return None
            params = a
        elif a != params:
            return None
    if params is None:
        # q == 4: five points in general position; the unique admissible pair
        free = [x for x in range(q) if x not in (0, 1)]
        params = (free[0], free[1])
    frame = tuple(basis) + (rest[0],)
    return TwistedCubic(space, pts, frame, params)


# --------------------------------------------------------------------------
# lines


def lines_fully_contained(F: FieldSpec, pts) -> list[Subspace]:
    """Every line all of whose q+1 points lie in ``pts``, sorted by basis."""
    pset = set(normalize(F, P) for P in pts)
    ordered = sorted(pset)
    n = len(ordered[0]) - 1 if ordered else 0
    q = F.q
    found: list[Subspace] = []
    partners: dict[Point, set] = defaultdict(set)
    for i, P in enumerate(ordered):
        done = partners[P]
        for Q in ordered[i + 1 :]:
            if Q in done:
                continue
            line = [P, Q]  # P + xQ for x != 0 completes the line
            ok = True
            for x in range(1, q):
                R = normalize(F, combine(F, 1, P, x, Q))
                if R not in pset:
                    ok = False
                    break
                line.append(R)
            if ok:
                line_set = set(line)
                for R in line_set:
                    partners[R] |= line_set
                found.append(Subspace.from_vectors(F, n, [P, Q]))
    found.sort(key=lambda L: L.basis)
    return found


# --------------------------------------------------------------------------
# reguli


def transversals(l1: Subspace, l2: Subspace, l3: Subspace) -> list[Subspace]:
    """Lines meeting three pairwise skew lines of a 3-space."""
    for a, b in ((l1, l2), (l1, l3), (l2, l3)):
        if not meet(a, b).is_empty:
            raise GeometryError("lines are not pairwise skew")
    if span([l1, l2, l3]).dim != 3:
        raise GeometryError("lines do not lie in a common 3-space")
    F = l1.field
    out = []
    for X in l1.points:
        Y = meet(span([X, l2], F), l3)
        if Y.dim != 0:
            raise GeometryError("no unique transversal through a point")
        t = span([X, Y], F)
        if meet(t, l2).is_empty:
            raise GeometryError("transversal misses the second line")
        out.append(t)
    out.sort(key=lambda L: L.basis)
    return out


def _quadric_monomials(F, c):
    m = F.mul
    return [m[c[i]][c[j]] for i in range(4) for j in range(i, 4)]


@dataclass(frozen=True, eq=False)
class Regulus:
    lines: tuple
    space: Subspace

    def __eq__(self, other):
        return isinstance(other, Regulus) and set(self.lines) == set(other.lines)

    def __hash__(self):
        return hash(frozenset(self.lines))

    @cached_property
    def points(self) -> frozenset:
        return frozenset(P for L in self.lines for P in L.points)

    @cached_property
    def form(self) -> tuple:
        """Coefficients of the quadric through the cover, in the 3-space's echelon coordinates."""
        F = self.space.field
        rows = [_quadric_monomials(F, self.space.coordinates(P)) for P in sorted(self.points)]
        null = nullspace(F, rows, 10)
        if len(null) != 1:
            raise GeometryError("cover does not determine a unique quadric")
        return tuple(normalize(F, null[0]))

    def quadric_rank(self) -> int:
        """Rank of the associated symmetric/polar matrix (4 for a hyperbolic quadric)."""
        F = self.space.field
        f = self.form
        idx = {(i, j): k for k, (i, j) in enumerate((i, j) for i in range(4) for j in range(i, 4))}
        two = F.from_int(2)
        B = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(4):
                a, b = min(i, j), max(i, j)
                c = f[idx[(a, b)]]
                B[i][j] = F.mul[two][c] if i == j else c
        return rank(F, B) if F.p != 2 else _char2_quadric_rank(F, f, B)

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)


def _char2_quadric_rank(F, f, polar):
    # in characteristic two the polar form is alternating; a non-degenerate
    # quadric in 4 variables has a non-singular polar matrix
    return rank(F, polar)


def regulus_through(l1: Subspace, l2: Subspace, l3: Subspace) -> Regulus:
    opp = transversals(l1, l2, l3)
    lines = transversals(opp[0], opp[1], opp[2])
    return Regulus(tuple(lines), span([l1, l2, l3]))


def opposite_regulus(R: Regulus) -> Regulus:
    lines = transversals(*R.lines[:3])
    return Regulus(tuple(lines), R.space)


# --------------------------------------------------------------------------
# ruled cubic surfaces


@dataclass(frozen=True, eq=False)
class RuledCubicSurface:
    """Scroll joining a line to a conic along a projectivity of PG(1,q).

    ``directrix_map`` (5x2) and ``conic_map`` (5x3) are parametrizations:
    (s:t) -> D (s,t) on the line directrix and (u:v) -> C (u^2, uv, v^2) on
    the conic; the generator at (s:t) joins D(s,t) to C(sigma(s,t)).
    """

    field: FieldSpec
    directrix_map: tuple
    conic_map: tuple
    sigma: Projectivity

    @classmethod
    def standard(cls, F: FieldSpec, sigma: Projectivity | None = None) -> RuledCubicSurface:
        sigma = sigma or Projectivity.identity(F, 1)
        D = ((1, 0), (0, 1), (0, 0), (0, 0), (0, 0))
        C = ((0, 0, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
        return cls(F, D, C, sigma)

    def directrix_point(self, st) -> Point:
        return normalize(self.field, mat_vec(self.field, self.directrix_map, st))

    def conic_point(self, uv) -> Point:
        return normalize(self.field, mat_vec(self.field, self.conic_map, _veronese2(self.field, uv)))

    @cached_property
    def generators(self) -> tuple:
        F = self.field
        out = []
        for st in projective_points(F, 1):
            uv = mat_vec(F, self.sigma.matrix, st)
            out.append(span([self.directrix_point(st), self.conic_point(uv)], F))
        return tuple(out)

    @cached_property
    def directrix(self) -> Subspace:
        return Subspace.from_vectors(self.field, 4, [list(c) for c in zip(*self.directrix_map)])

    @cached_property
    def conic(self) -> Conic:
        F = self.field
        pts = {self.conic_point(uv) for uv in projective_points(F, 1)}
        C = is_nondegenerate_conic(F, pts)
        if C is None:
            raise GeometryError("conic map does not describe a non-degenerate conic")
        return C

    @cached_property
    def points(self) -> frozenset:
        return frozenset(P for g in self.generators for P in g.points)

    def sorted_points(self) -> list:
        return sorted(self.points)

    def describe(self) -> dict:
        return {
            "directrix_map": [list(r) for r in self.directrix_map],
            "conic_map": [list(r) for r in self.conic_map],
            "sigma": self.sigma.to_json(),
        }


def make_ruled_cubic_surface(F: FieldSpec, sigma: Projectivity | None = None) -> RuledCubicSurface:
    """Standard scroll: line {(1,t,0,0,0)}, conic {(0,0,1,u,u^2)}, joined along sigma."""
    return RuledCubicSurface.standard(F, sigma)


def conic_planes(F: FieldSpec, pts, lines=None) -> list[Conic]:
    """Every plane whose intersection with ``pts`` is exactly a non-degenerate conic.

    Planes are found by grouping, for each pair of points, the remaining
    points by the plane they span with that pair.
    """
    ordered = sorted(set(pts))
    N = len(ordered)
    if N < 3:
        return []
    arr = np.array(ordered, dtype=np.int64)
    q = F.q
    if lines is None:
        lines = lines_fully_contained(F, ordered)
    index = {P: i for i, P in enumerate(ordered)}
    on_line = [set() for _ in range(N)]
    for L in lines:
        ids = [index[P] for P in L.points]
        for i in ids:
            on_line[i].update(ids)
    seen: set = set()
    found: dict = {}
    for i in range(N):
        for j in range(i + 1, N):
            if j in on_line[i]:
                continue
            ann = Subspace.from_vectors(F, len(ordered[0]) - 1, [ordered[i], ordered[j]]).annihilator
            vals = F.dots(ann, arr).T
            groups: dict = defaultdict(list)
            base = [i, j]
            for k in range(N):
                if k == i or k == j:
                    continue
                v = tuple(int(x) for x in vals[k])
                if not any(v):
                    base.append(k)
                else:
                    groups[normalize(F, v)].append(k)
            if len(base) > 2:
                continue  # a third collinear point: no conic through this pair
            for g in groups.values():
                if len(g) + 2 != q + 1:
                    continue
                key = frozenset(base + g)
                if key in seen:
                    continue
                seen.add(key)
                C = is_nondegenerate_conic(F, [ordered[k] for k in key])
                if C is not None:
                    found[key] = C
    return sorted(found.values(), key=lambda C: C.plane.basis)


def conic_directrices(S: RuledCubicSurface) -> list[Conic]:
    return conic_planes(S.field, S.points)


# --------------------------------------------------------------------------
# section classification


class SectionKind(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    T7 = "T7"
    T8 = "T8"
    OTHER = "Other"


SURFACE_KINDS = frozenset({SectionKind.T1, SectionKind.T2, SectionKind.T3, SectionKind.T4, SectionKind.T5})
ALL_KINDS = tuple(SectionKind)


@dataclass(frozen=True)
class SectionType:
    kind: SectionKind
    points: frozenset
    lines: tuple = ()
    conic: Optional[Conic] = None
    cubic: Optional[TwistedCubic] = None
    diagnostic: str = ""

    def witness_points(self) -> frozenset:
        if self.kind is SectionKind.T6:
            return frozenset(self.points)
        out = set()
        for L in self.lines:
            out.update(L.points)
        if self.conic is not None:
            out.update(self.conic.points)
        if self.cubic is not None:
            out.update(self.cubic.points)
        return frozenset(out)

    def to_json(self) -> dict:
        d = {"kind": self.kind.value, "size": len(self.points), "lines": [L.to_json() for L in self.lines]}
        if self.conic is not None:
            d["conic"] = self.conic.to_json()
        if self.cubic is not None:
            d["cubic"] = self.cubic.to_json()
        if self.diagnostic:
            d["diagnostic"] = self.diagnostic
        return d


def _decompose(F: FieldSpec, S: frozenset, lines: list) -> SectionType:
    q = F.q
    union = set()
    for L in lines:
        union.update(L.points)
    residue = S - union
    nl = len(lines)

    if nl == 0 and len(S) == 1:
        return SectionType(SectionKind.T6, S)
    if 1 <= nl <= 3 and not residue:
        return SectionType(SectionKind(f"T{nl}"), S, tuple(lines))
    if nl == 0:
        if len(S) == q + 1:
            cubic = is_twisted_cubic(F, S)
            if cubic is not None:
                return SectionType(SectionKind.T5, S, cubic=cubic)
        return SectionType(SectionKind.OTHER, S, diagnostic=f"{len(S)} points, no lines, not a twisted cubic")
    if nl in (1, 2) and residue:
        need = q + 1 - len(residue)
        if 0 <= need <= 2:
            rest = sorted(residue)
            line_pts = sorted(union)
            if nl == 1 or len(rest) >= 3:
                carrier = span(rest, F) if len(rest) >= 2 else None
                cands = [P for P in line_pts if carrier is None or carrier.dim != 2 or P in carrier]
                for Y in itertools.combinations(cands, need):
                    C = is_nondegenerate_conic(F, rest + list(Y))
                    if C is not None:
                        kind = SectionKind.T4 if nl == 1 else SectionKind.T7
                        return SectionType(kind, S, tuple(lines), conic=C)
            if nl == 1:
                for Y in itertools.combinations(line_pts, need):
                    cubic = is_twisted_cubic(F, rest + list(Y))
                    if cubic is not None:
                        return SectionType(SectionKind.T8, S, tuple(lines), cubic=cubic)
        return SectionType(
            SectionKind.OTHER,
            S,
            tuple(lines),
            diagnostic=f"{nl} line(s) plus {len(residue)} residual points forming no conic or cubic",
        )
    return SectionType(SectionKind.OTHER, S, tuple(lines), diagnostic=f"{nl} lines, {len(residue)} residual points")


class SectionClassifier:
    """Classifies hyperplane sections of a fixed point set of PG(n, q).

    The lines contained in the point set are computed once; a line inside a
    section is necessarily one of them.
    """

    def __init__(self, F: FieldSpec, points: Iterable[Point]):
        self.field = F
        self.points = sorted(set(normalize(F, P) for P in points))
        self.n = len(self.points[0]) - 1
        self.index = {P: i for i, P in enumerate(self.points)}
        self.array = np.array(self.points, dtype=np.int64)
        self.lines = lines_fully_contained(F, self.points)
        self._line_ids = [frozenset(self.index[P] for P in L.points) for L in self.lines]

    def section_ids(self, hyperplane: Subspace) -> frozenset:
        h = hyperplane.covector
        dot = self.field.dot
        return frozenset(i for i, P in enumerate(self.points) if dot(h, P) == 0)

    def section(self, hyperplane: Subspace) -> frozenset:
        return frozenset(self.points[i] for i in self.section_ids(hyperplane))

    def _classify_ids(self, ids: frozenset) -> SectionType:
        S = frozenset(self.points[i] for i in ids)
        lines = [L for L, lid in zip(self.lines, self._line_ids) if lid <= ids]
        st = _decompose(self.field, S, lines)
        if st.kind is not SectionKind.OTHER and st.witness_points() != S:
            return SectionType(SectionKind.OTHER, S, st.lines, diagnostic="witness does not reproduce the section")
        return st

    def classify(self, hyperplane: Subspace) -> SectionType:
        return self._classify_ids(self.section_ids(hyperplane))

    def classify_covectors(self, covectors) -> list[SectionType]:
        covectors = list(covectors)
        if not covectors:
            return []
        zero = self.field.dots(covectors, self.array) == 0
        return [self._classify_ids(frozenset(np.flatnonzero(row).tolist())) for row in zero]

    def sections(self, covectors) -> list[frozenset]:
        zero = self.field.dots(list(covectors), self.array) == 0
        return [frozenset(self.points[i] for i in np.flatnonzero(row)) for row in zero]


def classify_section(F: FieldSpec, K, hyperplane: Subspace) -> SectionType:
    return SectionClassifier(F, K).classify(hyperplane)


def section_histogram(types: Iterable[SectionType]) -> dict:
    hist = {k.value: 0 for k in ALL_KINDS}
    for t in types:
        hist[t.kind.value] += 1
    return hist


def hyperplanes_through(S: Subspace) -> list[Subspace]:
    """All hyperplanes containing the subspace S, in covector order."""
    F = S.field
    ann = S.annihilator
    covs = set()
    for c in projective_points(F, len(ann) - 1):
        v = [0] * (S.n + 1)
        for ci, h in zip(c, ann):
            v = combine(F, 1, v, ci, h)
        covs.add(normalize(F, v))
    return [Subspace.from_covector(F, h) for h in sorted(covs)]


def check_hypothesis(F: FieldSpec, K, classifier: SectionClassifier | None = None) -> list:
    """Hyperplanes whose section with K is not of type T1..T5 (empty when K qualifies)."""
    clf = classifier or SectionClassifier(F, K)
    covs = projective_points(F, clf.n)
    return [(h, t) for h, t in zip(covs, clf.classify_covectors(covs)) if t.kind not in SURFACE_KINDS]


# --------------------------------------------------------------------------
# reconstruction


def _points_of(lines):
    out = set()
    for L in lines:
        out.update(L.points)
    return out


def extract_sticks(
    F: FieldSpec,
    K,
    *,
    check: bool = False,
    lines: list | None = None,
    conics: list | None = None,
) -> list[Subspace]:
    """Partition K into q+1 pairwise skew lines, seeded from a conic of K.

    The seed is the conic plane with lexicographically least echelon basis.
    With ``check=True`` the section hypothesis is verified first.
    """
    K = frozenset(normalize(F, P) for P in K)
    q = F.q
    if len(K) != (q + 1) ** 2:
        raise ReconstructionError("sticks", f"|K| = {len(K)}, expected {(q + 1) ** 2}")
    if check:
        bad = check_hypothesis(F, K)
        if bad:
            h, t = bad[0]
            raise ReconstructionError("sticks", f"hyperplane {list(h)} has section type {t.kind.value}", list(h))
    if lines is None:
        lines = lines_fully_contained(F, K)
    if conics is None:
        conics = conic_planes(F, K, lines)
    if not conics:
        raise ReconstructionError("conic-seed", "K contains no conic plane")
    C = conics[0]
    sticks = []
    for H in hyperplanes_through(C.plane):
        inside = [L for L in lines if H.contains(L) and not C.plane.contains(L)]
        S = frozenset(P for P in K if H.contains(P))
        if len(inside) != 1:
            raise ReconstructionError(
                "sticks", f"3-space {list(H.covector)} through the conic plane holds {len(inside)} lines off it", list(H.covector)
            )
        L = inside[0]
        touch = [P for P in L.points if P in C.points]
        if len(touch) != 1 or S != C.points | set(L.points):
            raise ReconstructionError(
                "sticks", f"3-space {list(H.covector)} is not a line through one conic point plus the conic", list(H.covector)
            )
        sticks.append(L)
    for a, b in itertools.combinations(sticks, 2):
        if not meet(a, b).is_empty:
            raise ReconstructionError("sticks", "two sticks meet", [a.to_json(), b.to_json()])
    if _points_of(sticks) != K:
        raise ReconstructionError("sticks", "sticks do not cover K")
    for trio in itertools.combinations(sticks, 3):
        if span(list(trio)).dim < 4:
            raise ReconstructionError("sticks", "three sticks lie in a 3-space", [s.to_json() for s in trio])
    sticks.sort(key=lambda L: L.basis)
    return sticks


def extract_baseline(F: FieldSpec, K, sticks, *, lines: list | None = None) -> Subspace:
    """The unique contained line that is not a stick; it meets every stick."""
    q = F.q
    if lines is None:
        lines = lines_fully_contained(F, K)
    stick_set = set(sticks)
    others = [L for L in lines if L not in stick_set]
    if len(lines) != q + 2 or len(others) != 1:
        raise ReconstructionError("baseline", f"K holds {len(lines)} lines ({len(others)} non-sticks), expected q+2 = {q + 2}")
    b = others[0]
    for m in sticks:
        if meet(b, m).dim != 0:
            raise ReconstructionError("baseline", "baseline misses a stick", m.to_json())
    return b


def conics_through(F: FieldSpec, K, P, Q) -> list[Conic]:
    """Conic planes of K containing both P and Q."""
    K = sorted(set(K))
    arr = np.array(K, dtype=np.int64)
    ann = Subspace.from_vectors(F, len(P) - 1, [P, Q]).annihilator
    vals = F.dots(ann, arr).T
    groups: dict = defaultdict(list)
    for X, v in zip(K, vals):
        v = tuple(int(x) for x in v)
        if any(v):
            groups[normalize(F, v)].append(X)
        elif X not in (P, Q):
            return []  # a third point on PQ
    out = []
    for g in groups.values():
        if len(g) == F.q - 1:
            C = is_nondegenerate_conic(F, [P, Q] + g)
            if C is not None:
                out.append(C)
    return sorted(out, key=lambda C: C.plane.basis)


def unique_conic_through(F: FieldSpec, K, P, Q, sticks, baseline: Subspace, *, conics=None) -> Conic:
    """The single conic of K through P and Q (points of distinct sticks, off the baseline)."""
    sp = [i for i, m in enumerate(sticks) if m.contains(P)]
    sq = [i for i, m in enumerate(sticks) if m.contains(Q)]
    if not sp or not sq or sp == sq:
        raise GeometryError("P and Q must lie on distinct sticks")
    if baseline.contains(P) or baseline.contains(Q):
        raise GeometryError("P and Q must be off the baseline")
    if conics is None:
        cands = conics_through(F, K, P, Q)
    else:
        cands = [C for C in conics if P in C.points and Q in C.points]
    if len(cands) != 1:
        raise ReconstructionError("unique-conic", f"{len(cands)} conics through {list(P)} and {list(Q)}", [list(P), list(Q)])
    C = cands[0]
    for m in sticks:
        if len([X for X in m.points if X in C.points]) != 1:
            raise ReconstructionError("unique-conic", "conic does not meet every stick exactly once", m.to_json())
    if any(X in C.points for X in baseline.points):
        raise ReconstructionError("unique-conic", "conic meets the baseline", baseline.to_json())
    return C


@dataclass(frozen=True, eq=False)
class Ruling:
    baseline: Subspace
    conic: Conic
    sigma: Projectivity
    sticks: tuple
    surface: RuledCubicSurface


def recover_ruling(F: FieldSpec, K, *, lines=None, conics=None) -> Ruling:
    """Rebuild (baseline, conic, ruling projectivity) from the bare point set K."""
    K = frozenset(normalize(F, P) for P in K)
    if lines is None:
        lines = lines_fully_contained(F, K)
    if conics is None:
        conics = conic_planes(F, K, lines)
    sticks = extract_sticks(F, K, lines=lines, conics=conics)
    b = extract_baseline(F, K, sticks, lines=lines)
    P = next(X for X in sticks[0].points if not b.contains(X))
    Q = next(X for X in sticks[1].points if not b.contains(X))
    C = unique_conic_through(F, K, P, Q, sticks, b, conics=conics)
    params = C.parameters
    src, dst = [], []
    for m in sticks:
        X = meet(m, b).basis[0]
        Y = next(Z for Z in m.points if Z in C.points)
        src.append(normalize(F, b.coordinates(X)))
        dst.append(params[Y])
    try:
        sigma = fit_projectivity_line(F, src[:3], dst[:3])
    except GeometryError as exc:
        raise ReconstructionError("ruling-projectivity", str(exc)) from None
    for s, d in zip(src, dst):
        if sigma(s) != d:
            raise ReconstructionError("ruling-projectivity", f"stick pairing {list(s)} -> {list(d)} breaks the projectivity")
    D = tuple(zip(*b.basis))
    surface = RuledCubicSurface(F, D, C.param_matrix, sigma)
    if surface.points != K:
        raise ReconstructionError("round-trip", "regenerated scroll differs from K")
    return Ruling(b, C, sigma, tuple(sticks), surface)


def projection_regulus_check(F: FieldSpec, K, sticks, baseline: Subspace, conics) -> dict:
    """Project K from a point of a stick onto a 3-space through the baseline.

    The images of the baseline and of the conic planes through the centre must
    form a regulus whose opposite regulus holds the images of the other
    sticks.  Returns a summary dict; raises ReconstructionError otherwise.
    """
    q = F.q
    b = baseline
    m0 = sticks[0]
    P = next(X for X in m0.points if not b.contains(X))
    through = [C for C in conics if P in C.points]
    if len(through) != q:
        raise ReconstructionError("projection-regulus", f"{len(through)} conics through the centre, expected q")
    covered = [X for C in through for X in C.points if X != P]
    if sorted(covered) != sorted(set(K) - set(m0.points) - set(b.points)):
        raise ReconstructionError("projection-regulus", "conics through the centre do not partition the rest of K")
    pi1 = through[0].plane
    others = [X for X in pi1.points if X != P]
    t1 = None
    for X, Y in itertools.combinations(others, 2):
        L = span([X, Y], F)
        if not L.contains(P):
            t1 = L
            break
    target = span([b, t1])
    if target.dim != 3 or target.contains(P):
        raise ReconstructionError("projection-regulus", "baseline and chosen line do not span a 3-space avoiding the centre")
    phi = project_from(P, target)
    images = []
    for m in sticks[1:]:
        images.append(span([phi(X) for X in m.points], F))
    t_lines = [meet(C.plane, target) for C in through]
    if any(t.dim != 1 for t in t_lines) or any(s.dim != 1 for s in images):
        raise ReconstructionError("projection-regulus", "projected sticks or conic planes are not lines")
    R = regulus_through(b, t_lines[0], t_lines[1])
    if set(R.lines) != {b, *t_lines}:
        raise ReconstructionError("projection-regulus", "baseline and conic-plane traces are not a regulus")
    opp = opposite_regulus(R)
    if not set(images) <= set(opp.lines):
        raise ReconstructionError("projection-regulus", "projected sticks are not in the opposite regulus")
    return {"regulus_lines": len(R.lines), "opposite_hits": len(images)}
