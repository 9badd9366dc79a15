"""Regular spreads and the Bruck-Bose model of PG(2, q^2) inside PG(4, q).

Standard conventions: the hyperplane at infinity is x4 = 0 and the affine
point (x, y, 1) of PG(2, q^2) becomes (x0, x1, y0, y1, 1) where
x = x0 + x1*omega.  Any other hyperplane with a regular spread is handled by
a change of frame (:meth:`BruckBoseMap.for_spread`), so every map in this
module is the standard one conjugated by a 5x5 matrix over GF(q).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from .baer import BaerPencil, BaerSubline, make_baer_pencil
from .gf import ExtensionEmbedding, FieldSpec
from .linalg import mat_inv, mat_vec, nullspace, rank
from .projgeom import (
    GeometryDomainError,
    GeometryError,
    Point,
    Subspace,
    combine,
    meet,
    normalize,
    projective_points,
    span,
)
from .varieties import (
    ReconstructionError,
    RuledCubicSurface,
    conic_directrices,
    opposite_regulus,
    regulus_through,
)

LINF_COVECTOR = (0, 0, 1)


@dataclass(frozen=True, eq=False)
class RegularSpread:
    """q^2+1 lines partitioning a 3-space of PG(4,q), with its transversal pair.

    ``transversals`` are lines of PG(4,q^2) (inside the extended 3-space).
    """

    embedding: ExtensionEmbedding
    space: Subspace
    lines: tuple
    transversals: tuple

    @cached_property
    def line_index(self) -> dict:
        return {P: i for i, L in enumerate(self.lines) for P in L.points}

    def line_through(self, P) -> Subspace:
        return self.lines[self.line_index[P]]

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)


def _dec(emb: ExtensionEmbedding, x: int) -> tuple[int, int]:
    return emb.decompose(x)


def _std_vector(emb: ExtensionEmbedding, x: int, y: int, z: int) -> list[int]:
    return [*_dec(emb, x), *_dec(emb, y), z]


def _embed_matrix(emb: ExtensionEmbedding, M):
    return [[emb.embed(a) for a in row] for row in M]


@dataclass(frozen=True, eq=False)
class BruckBoseMap:
    """Point/line dictionary between PG(2,q^2) and PG(4,q).

    ``frame`` is the 5x5 matrix over GF(q) carrying standard coordinates to
    the actual ones; the identity gives the textbook model.
    """

    embedding: ExtensionEmbedding
    frame: tuple

    @classmethod
    def standard(cls, emb: ExtensionEmbedding) -> BruckBoseMap:
        return cls(emb, tuple(tuple(1 if i == j else 0 for j in range(5)) for i in range(5)))

    @classmethod
    def for_spread(cls, emb: ExtensionEmbedding, sigma_inf: Subspace, lines) -> BruckBoseMap:
        """Coordinatize a regular spread of an arbitrary hyperplane.

        The linear maps of the hyperplane fixing every spread line form a
        copy of GF(q^2); an element with the same minimal polynomial as omega
        plays the role of multiplication by omega.
        """
        F = emb.base
        if sigma_inf.dim != 3:
            raise GeometryError("the spread must live in a hyperplane")
        basis = [list(b) for b in sigma_inf.basis]
        local = [[list(sigma_inf.coordinates(v)) for v in L.basis] for L in lines]
        # equations h . (J v) = 0 for v in the line, h in its annihilator (inside the 3-space)
        rows = []
        for vecs in local:
            ann = nullspace(F, vecs, 4)
            for h in ann:
                for v in vecs:
                    rows.append([F.mul[h[i]][v[j]] for i in range(4) for j in range(4)])
        sol = nullspace(F, rows, 16)
        if len(sol) != 2:
            raise GeometryError(f"spread stabilizer has dimension {len(sol)}, a regular spread gives 2")
        ident = [1 if i == j else 0 for i in range(4) for j in range(4)]
        J0 = next(s for s in sol if rank(F, [s, ident]) == 2)
        n, t = emb.min_poly
        J = None
        for beta in range(1, F.q):
            for alpha in range(F.q):
                cand = combine(F, alpha, ident, beta, J0)
                Jm = [cand[4 * i : 4 * i + 4] for i in range(4)]
                sq = _mat_mul_sq(F, Jm)
                if all(
                    sq[i][j] == F.add[F.mul[t][Jm[i][j]]][n if i == j else 0] for i in range(4) for j in range(4)
                ):
                    J = Jm
                    break
            if J is not None:
                break
        if J is None:
            raise GeometryError("no element of the spread stabilizer acts as omega")
        e1 = [1, 0, 0, 0]
        Je1 = mat_vec(F, J, e1)
        e2 = next(
            [1 if i == k else 0 for i in range(4)]
            for k in range(4)
            if rank(F, [e1, Je1, [1 if i == k else 0 for i in range(4)]]) == 3
        )
        Je2 = mat_vec(F, J, e2)

        def lift(c):
            v = [0] * 5
            for ci, b in zip(c, basis):
                v = combine(F, 1, v, ci, b)
            return v

        O = next(P for P in projective_points(F, 4) if not sigma_inf.contains(P))
        cols = [lift(e1), lift(Je1), lift(e2), lift(Je2), list(O)]
        frame = tuple(tuple(cols[j][i] for j in range(5)) for i in range(5))
        bb = cls(emb, frame)
        if set(bb.spread.lines) != set(lines):
            raise GeometryError("recovered frame does not reproduce the spread")
        return bb

    # -- frame helpers ---------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.embedding.base

    @property
    def ext(self) -> FieldSpec:
        return self.embedding.ext

    @cached_property
    def frame_inverse(self) -> tuple:
        return tuple(map(tuple, mat_inv(self.field, self.frame)))

    def _out(self, std) -> list[int]:
        return mat_vec(self.field, self.frame, std)

    def _in(self, v) -> list[int]:
        return mat_vec(self.field, self.frame_inverse, v)

    @cached_property
    def sigma_inf(self) -> Subspace:
        return Subspace.from_vectors(self.field, 4, [self._out([1 if i == k else 0 for i in range(5)]) for k in range(4)])

    @cached_property
    def spread(self) -> RegularSpread:
        emb, E = self.embedding, self.ext
        lines = tuple(self._spread_line(P) for P in self.linf_points)
        w = E.neg[emb.frobenius(emb.omega)]
        g_std = [[w, 1, 0, 0, 0], [0, 0, w, 1, 0]]
        w = E.neg[emb.omega]
        gq_std = [[w, 1, 0, 0, 0], [0, 0, w, 1, 0]]
        Mx = _embed_matrix(emb, self.frame)
        g = Subspace.from_vectors(E, 4, [mat_vec(E, Mx, v) for v in g_std])
        gq = Subspace.from_vectors(E, 4, [mat_vec(E, Mx, v) for v in gq_std])
        return RegularSpread(emb, self.sigma_inf, lines, (g, gq))

    @cached_property
    def linf_points(self) -> list:
        return [P for P in projective_points(self.ext, 2) if P[2] == 0]

    def _spread_line(self, P) -> Subspace:
        x, y, _ = P
        E, om = self.ext, self.embedding.omega
        v1 = self._out(_std_vector(self.embedding, x, y, 0))
        v2 = self._out(_std_vector(self.embedding, E.mul[om][x], E.mul[om][y], 0))
        return Subspace.from_vectors(self.field, 4, [v1, v2])

    # -- the correspondence ------------------------------------------------------

    def to_bb(self, P) -> Union[Point, Subspace]:
        """Affine point -> point of PG(4,q) off the hyperplane; point of l_inf -> spread line."""
        E = self.ext
        P = normalize(E, P)
        if P[2] == 0:
            return self._spread_line(P)
        s = E.inv[P[2]]
        x, y = E.mul[s][P[0]], E.mul[s][P[1]]
        return normalize(self.field, self._out(_std_vector(self.embedding, x, y, 1)))

    def from_bb(self, obj) -> Point:
        emb = self.embedding
        if isinstance(obj, Subspace):
            if obj.dim != 1 or not self.sigma_inf.contains(obj):
                raise GeometryError("only spread lines correspond to points of l_inf")
            w = self._in(obj.basis[0])
            P = normalize(self.ext, (emb.compose(w[0], w[1]), emb.compose(w[2], w[3]), 0))
            if self._spread_line(P) != obj:
                raise GeometryError("line is not a spread line")
            return P
        w = self._in(obj)
        if w[4] == 0:
            raise GeometryError(f"{obj} lies in the hyperplane at infinity")
        F = self.field
        s = F.inv[w[4]]
        w = [F.mul[s][a] for a in w]
        return normalize(self.ext, (emb.compose(w[0], w[1]), emb.compose(w[2], w[3]), 1))

    def is_affine(self, P) -> bool:
        return not self.sigma_inf.contains(P)

    def point_set_image(self, pts) -> frozenset:
        """Points of PG(4,q) forming [X] for a point set X of PG(2,q^2)."""
        out = set()
        for P in pts:
            obj = self.to_bb(P)
            if isinstance(obj, Subspace):
                out.update(obj.points)
            else:
                out.add(obj)
        return frozenset(out)

    def preimage(self, K) -> frozenset:
        """Points of PG(2,q^2) whose representatives lie in K.

        Spread lines count only when entirely inside K.
        """
        K = set(K)
        out = set()
        for P in K:
            if self.is_affine(P):
                out.add(self.from_bb(P))
        for L, X in zip(self.spread.lines, self.linf_points):
            if all(P in K for P in L.points):
                out.add(X)
        return frozenset(out)

    # -- pencils and 3-spaces ------------------------------------------------------

    def pencil_to_3space(self, D: BaerPencil) -> Subspace:
        if D.vertex[2] != 0:
            raise GeometryError("pencil vertex must lie on l_inf")
        parts = [self.to_bb(D.vertex)]
        parts += [self.to_bb(P) for P in D.base.points if P[2] != 0]
        H = span(parts, self.field)
        if H.dim != 3:
            raise GeometryError("pencil does not span a 3-space")
        return H

    def threespace_to_pencil(self, H: Subspace) -> BaerPencil:
        F = self.field
        if H.dim != 3:
            raise GeometryError("expected a 3-space")
        if H == self.sigma_inf:
            raise GeometryDomainError("the hyperplane at infinity corresponds to no pencil")
        plane = meet(H, self.sigma_inf)
        inside = [L for L in self.spread.lines if plane.contains(L)]
        if len(inside) != 1:
            raise GeometryError(f"3-space contains {len(inside)} spread lines")
        vline = inside[0]
        h = self.sigma_inf.covector
        A = next(normalize(F, r) for r in H.basis if F.dot(h, r) != 0)
        X = next(normalize(F, r) for r in plane.basis if not vline.contains(r))
        affine = [normalize(F, combine(F, 1, A, lam, X)) for lam in range(F.q)]
        base_pts = [self.from_bb(P) for P in affine] + [self.from_bb(self.spread.line_through(X))]
        E = self.ext
        base = BaerSubline(Subspace.from_vectors(E, 2, base_pts[:2]), frozenset(base_pts))
        return make_baer_pencil(self.from_bb(vline), base)

    def describe(self) -> dict:
        return {"embedding": self.embedding.describe(), "frame": [list(r) for r in self.frame]}


def _mat_mul_sq(F, A):
    n = len(A)
    return [[F.dot(A[i], [A[k][j] for k in range(n)]) for j in range(n)] for i in range(n)]


def make_regular_spread(emb: ExtensionEmbedding) -> RegularSpread:
    """The field-reduction spread of x4 = 0 with transversals computed symbolically."""
    return BruckBoseMap.standard(emb).spread


def to_bb(P, bb: BruckBoseMap):
    return bb.to_bb(P)


def from_bb(obj, bb: BruckBoseMap):
    return bb.from_bb(obj)


def pencil_to_3space(D: BaerPencil, bb: BruckBoseMap) -> Subspace:
    return bb.pencil_to_3space(D)


def threespace_to_pencil(H: Subspace, bb: BruckBoseMap) -> BaerPencil:
    return bb.threespace_to_pencil(H)


def check_spread(lines) -> Subspace:
    """Raise GeometryError unless ``lines`` is a line spread of a 3-space; return that 3-space."""
    lines = list(lines)
    if not lines:
        raise GeometryError("empty spread")
    F = lines[0].field
    q = F.q
    if any(L.dim != 1 for L in lines):
        raise GeometryError("spread elements must be lines")
    if len(lines) != q * q + 1:
        raise GeometryError(f"{len(lines)} lines, a spread has {q * q + 1}")
    space = span(lines)
    if space.dim != 3:
        raise GeometryError("lines do not lie in a 3-space")
    seen = set()
    for L in lines:
        pts = set(L.points)
        if pts & seen:
            raise GeometryError("spread lines are not pairwise skew")
        seen |= pts
    return space


def is_regular(lines) -> bool:
    """True iff the regulus through every three spread lines lies in the spread.

    Triples inside an already verified regulus are skipped.
    """
    lines = list(lines)
    check_spread(lines)
    index = {L: i for i, L in enumerate(lines)}
    covered = set()
    for trio in itertools.combinations(range(len(lines)), 3):
        if trio in covered:
            continue
        R = regulus_through(*(lines[i] for i in trio))
        ids = []
        for L in R.lines:
            if L not in index:
                return False
            ids.append(index[L])
        covered.update(itertools.combinations(sorted(ids), 3))
    return True


def extend_surface(S: RuledCubicSurface, emb: ExtensionEmbedding) -> frozenset:
    """Points of the scroll's parametrization evaluated over GF(q^2)."""
    E = emb.ext
    D = _embed_matrix(emb, S.directrix_map)
    C = _embed_matrix(emb, S.conic_map)
    sig = _embed_matrix(emb, S.sigma.matrix)
    out = set()
    m = E.mul
    for st in projective_points(E, 1):
        X = mat_vec(E, D, st)
        u, v = mat_vec(E, sig, st)
        Y = mat_vec(E, C, (m[u][u], m[u][v], m[v][v]))
        g = Subspace.from_vectors(E, 4, [X, Y])
        out.update(g.points)
    return frozenset(out)


def transversal_check(S: RuledCubicSurface, spread: RegularSpread) -> tuple[bool, str]:
    if S.directrix not in set(spread.lines):
        return False, "directrix is not a spread line"
    ext = extend_surface(S, spread.embedding)
    for name, g in zip(("g", "g^q"), spread.transversals):
        missing = [P for P in g.points if P not in ext]
        if missing:
            return False, f"transversal {name} leaves the extended surface at {list(missing[0])}"
    return True, ""


def contains_transversals(S: RuledCubicSurface, spread: RegularSpread) -> bool:
    """Whether the extension of S to GF(q^2) contains both transversal lines of the spread."""
    return transversal_check(S, spread)[0]


def spread_from_surface(S: RuledCubicSurface, sigma_inf: Subspace, conics=None) -> tuple:
    """Directrix plus the traces of all conic planes on a hyperplane meeting S only in its directrix."""
    b = S.directrix
    section = {P for P in S.points if sigma_inf.contains(P)}
    if section != set(b.points):
        raise ReconstructionError("spread-from-surface", "hyperplane does not meet the surface exactly in its directrix")
    if conics is None:
        conics = conic_directrices(S)
    lines = [b]
    for C in conics:
        t = meet(C.plane, sigma_inf)
        if t.dim != 1:
            raise ReconstructionError("spread-from-surface", "a conic plane lies in the hyperplane", C.plane.to_json())
        lines.append(t)
    if len(set(lines)) != len(lines):
        raise ReconstructionError("spread-from-surface", "two conic planes share their trace")
    return tuple(lines)


def reverse_regulus(lines, trio=(0, 1, 2)) -> tuple:
    """Swap the regulus through three spread lines for its opposite regulus."""
    lines = list(lines)
    R = regulus_through(*(lines[i] for i in trio))
    opp = opposite_regulus(R)
    members = set(R.lines)
    if not members <= set(lines):
        raise GeometryError("regulus is not contained in the spread")
    return tuple([L for L in lines if L not in members] + list(opp.lines))
