"""Verification suites with JSON reports.

Every suite returns a :class:`SuiteReport`.  Reports are deterministic: all
enumerations are in a fixed order, randomness comes from one seeded
``random.Random``, parallel work is merged in submission order, and the
wall-clock field is left null unless timing is requested explicitly.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .baer import (
    BaerSubplane,
    PencilKind,
    classify_pencil_intersection,
    enumerate_linf_pencils,
    line_profile,
    make_tangent_baer_subplane,
)
from .bruckbose import (
    BruckBoseMap,
    contains_transversals,
    is_regular,
    spread_from_surface,
)
from .gf import SUPPORTED_Q, ExtensionEmbedding, FieldError, FieldSpec, prime_power
from .projgeom import Projectivity, Subspace, projective_points
from .varieties import (
    SURFACE_KINDS,
    ReconstructionError,
    SectionClassifier,
    SectionKind,
    conic_planes,
    extract_baseline,
    extract_sticks,
    hyperplanes_through,
    lines_fully_contained,
    make_ruled_cubic_surface,
    projection_regulus_check,
    recover_ruling,
    unique_conic_through,
)

SUITES = ("char1-forward", "lemma-chain", "corollary-bb", "inter1-forward", "mutation")
CONVERSE_MIN_Q = 5


class UsageError(ValueError):
    """Bad suite parameters; the CLI maps this to exit code 2."""


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class Setup:
    """Field, embedding and ruling projectivity for one run."""

    q: int
    base_modulus: tuple
    sigma_kind: str
    sigma_matrix: tuple
    seed: int

    @property
    def field(self) -> FieldSpec:
        return _field(self.q, self.base_modulus)

    @property
    def embedding(self) -> ExtensionEmbedding:
        return _embedding(self.q, self.base_modulus)

    @property
    def sigma(self) -> Projectivity:
        return Projectivity(self.field, self.sigma_matrix)

    def sigma_json(self) -> dict:
        return {"kind": self.sigma_kind, "matrix": [list(r) for r in self.sigma_matrix]}


@lru_cache(maxsize=None)
def _field(q: int, modulus: tuple) -> FieldSpec:
    return FieldSpec.of_order(q, modulus)


@lru_cache(maxsize=None)
def _embedding(q: int, modulus: tuple) -> ExtensionEmbedding:
    p, k = prime_power(q)
    return ExtensionEmbedding(_field(q, modulus), FieldSpec(p, 2 * k))


def random_sigma(F: FieldSpec, seed: int) -> tuple:
    """First invertible 2x2 matrix drawn from random.Random(seed)."""
    rng = random.Random(seed)
    while True:
        M = tuple(tuple(rng.randrange(F.q) for _ in range(2)) for _ in range(2))
        if F.sub[F.mul[M[0][0]][M[1][1]]][F.mul[M[0][1]][M[1][0]]]:
            return M


def make_setup(q: int, modulus=None, sigma: str = "identity", seed: int = 0) -> Setup:
    if q not in SUPPORTED_Q:
        raise UsageError(f"q = {q} is not supported (choose from {', '.join(map(str, SUPPORTED_Q))})")
    try:
        F = FieldSpec.of_order(q, modulus)
    except FieldError as exc:
        raise UsageError(str(exc)) from None
    if sigma == "identity":
        M = ((1, 0), (0, 1))
    elif sigma == "random":
        M = random_sigma(F, seed)
    else:
        raise UsageError(f"unknown sigma kind {sigma!r}")
    return Setup(q, F.modulus, sigma, M, seed)


# --------------------------------------------------------------------------
# reports


@dataclass
class Violation:
    check: str
    message: str
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    suite: str
    q: int
    modulus: dict
    omega: list
    sigma: Optional[dict]
    seed: int
    histograms: dict
    violations: list
    passed: bool
    report_only: dict
    elapsed_ms: Optional[int] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["violations"] = [v.to_json() if isinstance(v, Violation) else v for v in self.violations]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _report(suite: str, setup: Setup, histograms, violations, report_only=None, with_sigma=True) -> SuiteReport:
    emb = setup.embedding
    return SuiteReport(
        suite=suite,
        q=setup.q,
        modulus={"base": list(emb.base.modulus), "extension": list(emb.ext.modulus)},
        omega=list(emb.ext.to_coeffs(emb.omega)),
        sigma=setup.sigma_json() if with_sigma else None,
        seed=setup.seed,
        histograms=histograms,
        violations=violations,
        passed=not violations,
        report_only=report_only or {},
    )


def _field_json(setup: Setup) -> dict:
    return {"q": setup.q, "modulus": list(setup.base_modulus)}


def _pmap(fn: Callable, items: list, jobs: int) -> list:
    """Ordered map, optionally across processes."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _chunks(seq: list, n: int) -> list:
    n = max(1, n)
    size = max(1, -(-len(seq) // n))
    return [seq[i : i + size] for i in range(0, len(seq), size)]


# --------------------------------------------------------------------------
# char1-forward


@lru_cache(maxsize=8)
def _surface_classifier(q, modulus, sigma_matrix):
    F = _field(q, modulus)
    S = make_ruled_cubic_surface(F, Projectivity(F, sigma_matrix))
    return S, SectionClassifier(F, S.points)


def _classify_chunk(args):
    q, modulus, sigma_matrix, covs = args
    _, clf = _surface_classifier(q, modulus, sigma_matrix)
    return [(t.kind.value, t.diagnostic) for t in clf.classify_covectors(covs)]


def suite_char1_forward(setup: Setup, jobs: int = 1) -> SuiteReport:
    F = setup.field
    S, _ = _surface_classifier(setup.q, setup.base_modulus, setup.sigma_matrix)
    covs = projective_points(F, 4)
    chunks = _chunks(covs, jobs * 4 if jobs > 1 else 1)
    parts = _pmap(_classify_chunk, [(setup.q, setup.base_modulus, setup.sigma_matrix, c) for c in chunks], jobs)
    results = [r for part in parts for r in part]
    hist = {k.value: 0 for k in SectionKind}
    violations = []
    for h, (kind, diag) in zip(covs, results):
        hist[kind] += 1
        if SectionKind(kind) not in SURFACE_KINDS:
            violations.append(
                Violation(
                    "section-type",
                    f"hyperplane {list(h)} has section type {kind} {diag}".strip(),
                    {
                        "kind": "section-type",
                        **_field_json(setup),
                        "points": sorted(map(list, S.points)),
                        "hyperplane": list(h),
                        "allowed": sorted(k.value for k in SURFACE_KINDS),
                    },
                )
            )
    expected = (setup.q**5 - 1) // (setup.q - 1)
    if sum(hist.values()) != expected:
        violations.append(Violation("hyperplane-count", f"classified {sum(hist.values())} of {expected} hyperplanes"))
    return _report("char1-forward", setup, {"section_types": hist, "hyperplanes": expected}, violations)


# --------------------------------------------------------------------------
# lemma-chain


def suite_lemma_chain(setup: Setup, jobs: int = 1) -> SuiteReport:
    F, q = setup.field, setup.q
    S = make_ruled_cubic_surface(F, setup.sigma)
    K = S.points
    violations: list = []
    counts: dict = {}

    def fail(check, msg, witness=None):
        violations.append(Violation(check, msg, witness or {"kind": "reconstruction", **_field_json(setup), "points": sorted(map(list, K))}))

    lines = lines_fully_contained(F, K)
    counts["contained_lines"] = len(lines)
    if len(lines) != q + 2:
        fail("line-count", f"{len(lines)} contained lines, expected {q + 2}")
    conics = conic_planes(F, K, lines)
    counts["conics"] = len(conics)
    if len(conics) != q * q:
        fail("conic-count", f"{len(conics)} conics, expected {q * q}")
    bad_pairs = sum(1 for a, b in itertools.combinations(conics, 2) if len(a.points & b.points) != 1)
    counts["conic_pairs_not_meeting_once"] = bad_pairs
    if bad_pairs:
        fail("conic-pairs", f"{bad_pairs} pairs of conics do not meet in exactly one point")

    try:
        sticks = extract_sticks(F, K, lines=lines, conics=conics)
        counts["sticks"] = len(sticks)
        if set(sticks) != set(S.generators):
            fail("sticks", "sticks differ from the generators")
        b = extract_baseline(F, K, sticks, lines=lines)
        if b != S.directrix:
            fail("baseline", "baseline differs from the line directrix")
        missing = [C for C in conics if any(P in C.points for P in b.points)]
        counts["conics_meeting_baseline"] = len(missing)
        if missing:
            fail("conic-baseline", f"{len(missing)} conics meet the baseline")

        found = set()
        pairs = 0
        for (i, m), (j, n) in itertools.combinations(enumerate(sticks), 2):
            for P in m.points:
                if b.contains(P):
                    continue
                for Qp in n.points:
                    if b.contains(Qp):
                        continue
                    found.add(unique_conic_through(F, K, P, Qp, sticks, b, conics=conics))
                    pairs += 1
        counts["unique_conic_pairs"] = pairs
        counts["conics_from_pairs"] = len(found)
        if len(found) != q * q:
            fail("unique-conic", f"pairs produced {len(found)} conics, expected {q * q}")

        _, clf = _surface_classifier(q, setup.base_modulus, setup.sigma_matrix)
        covs = projective_points(F, 4)
        t4 = 0
        for h, t in zip(covs, clf.classify_covectors(covs)):
            if t.kind is SectionKind.T4:
                t4 += 1
                L = t.lines[0]
                touch = [P for P in L.points if P in t.conic.points]
                if len(touch) != 1 or t.conic.plane.contains(L):
                    fail("line-conic-section", f"T4 hyperplane {list(h)}: line meets conic in {len(touch)} points")
        counts["t4_hyperplanes"] = t4

        ruling = recover_ruling(F, K, lines=lines, conics=conics)
        counts["round_trip"] = int(ruling.surface.points == K)
        pr = projection_regulus_check(F, K, list(ruling.sticks), ruling.baseline, conics)
        counts["projected_regulus_lines"] = pr["regulus_lines"]
        counts["projected_sticks_in_opposite"] = pr["opposite_hits"]
    except ReconstructionError as exc:
        fail(exc.step, exc.message)
    return _report("lemma-chain", setup, {"counts": counts}, violations)


# --------------------------------------------------------------------------
# corollary-bb


def suite_corollary_bb(setup: Setup, jobs: int = 1) -> SuiteReport:
    F, q = setup.field, setup.q
    emb = setup.embedding
    S = make_ruled_cubic_surface(F, setup.sigma)
    violations: list = []
    counts: dict = {}
    witness = {"kind": "suite", "suite": "corollary-bb", **_field_json(setup), "sigma": setup.sigma_json(), "seed": setup.seed}

    clf = SectionClassifier(F, S.points)
    sigma_inf = None
    for H in hyperplanes_through(S.directrix):
        if clf.classify(H).kind is SectionKind.T1:
            sigma_inf = H
            break
    if sigma_inf is None:
        violations.append(Violation("hyperplane-search", "no hyperplane meets the surface exactly in its directrix", witness))
        return _report("corollary-bb", setup, {"counts": counts}, violations)
    counts["sigma_inf"] = list(sigma_inf.covector)
    try:
        lines = spread_from_surface(S, sigma_inf)
    except ReconstructionError as exc:
        violations.append(Violation(exc.step, exc.message, witness))
        return _report("corollary-bb", setup, {"counts": counts}, violations)
    counts["spread_lines"] = len(lines)
    regular = is_regular(lines)
    counts["regular"] = int(regular)
    if len(lines) != q * q + 1 or not regular:
        violations.append(Violation("regular-spread", "derived spread is not a regular spread", witness))
        return _report("corollary-bb", setup, {"counts": counts}, violations)
    bb = BruckBoseMap.for_spread(emb, sigma_inf, lines)
    has_t = contains_transversals(S, bb.spread)
    counts["contains_transversals"] = int(has_t)
    if not has_t:
        violations.append(Violation("transversals", "extended surface misses a transversal line", witness))
    image = bb.preimage(S.points)
    counts["image_points"] = len(image)
    counts["image_on_linf"] = sum(1 for P in image if P[2] == 0)
    profile = line_profile(emb.ext, image)
    if len(image) != q * q + q + 1:
        violations.append(Violation("image-size", f"image has {len(image)} points", witness))
    if counts["image_on_linf"] != 1:
        violations.append(Violation("tangency", f"image meets l_inf in {counts['image_on_linf']} points", witness))
    if set(profile) - {1, q + 1} or sum(profile.values()) != q**4 + q * q + 1:
        violations.append(Violation("line-profile", f"line profile {profile}", witness))
    hist = {"counts": counts, "line_profile": {str(k): v for k, v in sorted(profile.items())}}
    return _report("corollary-bb", setup, hist, violations)


# --------------------------------------------------------------------------
# inter1-forward

# pencil class -> expected section type, by whether the vertex is T
CASE_TABLE = {
    ("Point", True): {"T1"},
    ("Point", False): {"T6"},
    ("OneSubline", True): {"T2"},
    ("OneSubline", False): {"T1"},
    ("TwoSublines", True): {"T3", "T7"},
    ("TwoSublines", False): {"T2", "T4"},
    ("FqConic", True): {"T8"},
    ("FqConic", False): {"T5"},
}


@lru_cache(maxsize=4)
def _baer_context(q, modulus, seed):
    emb = _embedding(q, modulus)
    bb = BruckBoseMap.standard(emb)
    T = bb.linf_points[0]
    B = make_tangent_baer_subplane(emb, T, seed)
    K = bb.point_set_image(B.points)
    return emb, bb, B, K, SectionClassifier(emb.base, K)


def _inter1_chunk(args):
    q, modulus, seed, covs = args
    emb, bb, B, K, clf = _baer_context(q, modulus, seed)
    out = []
    for h in covs:
        H = Subspace.from_covector(emb.base, h)
        D = bb.threespace_to_pencil(H)
        c = classify_pencil_intersection(B, D, emb)
        t = clf.classify(H)
        out.append((h, c.kind.value, c.label, c.diagnostic, D.vertex == B.tangent_point, t.kind.value, D.to_json()))
    return out


def suite_inter1_forward(setup: Setup, jobs: int = 1) -> SuiteReport:
    q = setup.q
    emb, bb, B, K, _ = _baer_context(q, setup.base_modulus, setup.seed)
    covs = [h for h in projective_points(emb.base, 4) if Subspace.from_covector(emb.base, h) != bb.sigma_inf]
    chunks = _chunks(covs, jobs * 4 if jobs > 1 else 1)
    parts = _pmap(_inter1_chunk, [(q, setup.base_modulus, setup.seed, c) for c in chunks], jobs)
    rows = [r for part in parts for r in part]

    classes: Counter = Counter()
    table: dict = {}
    violations: list = []
    table_violations: list = []
    for h, kind, label, diag, at_t, stype, djson in rows:
        classes[label] += 1
        key = f"{kind}|{'vertex=T' if at_t else 'vertex!=T'}"
        table.setdefault(key, Counter())[stype] += 1
        witness = {
            "kind": "pencil-class",
            **_field_json(setup),
            "seed": setup.seed,
            "subplane": sorted(map(list, B.points)),
            "pencil": djson,
            "hyperplane": list(h),
        }
        if kind == PencilKind.OTHER.value:
            violations.append(Violation("pencil-class", f"pencil of 3-space {list(h)}: {diag}", witness))
            continue
        allowed = CASE_TABLE[(kind, at_t)]
        if stype not in allowed:
            table_violations.append(
                Violation("case-table", f"{label} with vertex {'=' if at_t else '!='} T has section type {stype}", witness).to_json()
            )
    hist = {
        "pencil_classes": dict(sorted(classes.items())),
        "case_table": {k: dict(sorted(v.items())) for k, v in sorted(table.items())},
        "pencils": len(rows),
    }
    if len(rows) != (q**5 - 1) // (q - 1) - 1:
        violations.append(Violation("pencil-count", f"{len(rows)} pencils enumerated"))
    report_only = {}
    if q >= CONVERSE_MIN_Q:
        violations += [Violation(**v) for v in table_violations]
    else:
        report_only["case-table"] = {"violations": table_violations}
    return _report("inter1-forward", setup, hist, violations, report_only, with_sigma=False)


# --------------------------------------------------------------------------
# mutation


def surface_mutant_detection(F: FieldSpec, K) -> dict:
    """Both falsification signals for a candidate point set K of PG(4,q)."""
    try:
        recover_ruling(F, K)
        step = None
    except ReconstructionError as exc:
        step = exc.step
    clf = SectionClassifier(F, K)
    witness = None
    for h in projective_points(F, 4):
        t = clf.classify(Subspace.from_covector(F, h))
        if t.kind not in SURFACE_KINDS:
            witness = (list(h), t.kind.value)
            break
    return {"reconstruction_step": step, "section_witness": witness}


def pencil_mutant_detection(emb: ExtensionEmbedding, bb: BruckBoseMap, pts, pencils) -> dict:
    """Both falsification signals for a tangent point set of PG(2,q^2)."""
    K = bb.point_set_image(pts)
    try:
        recover_ruling(emb.base, K)
        step = None
    except ReconstructionError as exc:
        step = exc.step
    witness = None
    for D in pencils:
        c = classify_pencil_intersection(pts, D, emb)
        if c.kind is PencilKind.OTHER:
            witness = (D.to_json(), c.diagnostic)
            break
    return {"reconstruction_step": step, "pencil_witness": witness}


def _surface_trial(args):
    q, modulus, sigma_matrix, removed, added = args
    F = _field(q, modulus)
    S, _ = _surface_classifier(q, modulus, sigma_matrix)
    K = (S.points - {removed}) | {added}
    return surface_mutant_detection(F, K)


def _pencil_trial(args):
    q, modulus, seed, removed, added = args
    emb, bb, B, _, _ = _baer_context(q, modulus, seed)
    pencils = _pencils(q, modulus)
    pts = (B.points - {removed}) | {added}
    return pencil_mutant_detection(emb, bb, pts, pencils)


@lru_cache(maxsize=4)
def _pencils(q, modulus):
    emb = _embedding(q, modulus)
    return tuple(enumerate_linf_pencils(BruckBoseMap.standard(emb)))


def draw_surface_mutations(F: FieldSpec, K, trials: int, rng: random.Random):
    """Remove a uniform point of K, add a uniform affine point; redraw when it lands on K."""
    ordered = sorted(K)
    affine = [P for P in projective_points(F, 4) if P[4] != 0]
    out, redraws = [], 0
    for _ in range(trials):
        removed = rng.choice(ordered)
        while True:
            added = rng.choice(affine)
            if added == removed or added in K:
                redraws += 1
                continue
            break
        out.append((removed, added))
    return out, redraws


def draw_pencil_mutations(B: BaerSubplane, trials: int, rng: random.Random):
    E = B.embedding.ext
    affine_b = sorted(P for P in B.points if P[2] != 0)
    affine = [P for P in projective_points(E, 2) if P[2] != 0]
    out, redraws = [], 0
    for _ in range(trials):
        removed = rng.choice(affine_b)
        while True:
            added = rng.choice(affine)
            if added == removed or added in B.points:
                redraws += 1
                continue
            break
        out.append((removed, added))
    return out, redraws


def suite_mutation_falsify(setup: Setup, trials: int = 100, jobs: int = 1) -> SuiteReport:
    if trials < 1:
        raise UsageError("trials must be >= 1")
    q = setup.q
    F = setup.field
    rng = random.Random(setup.seed)
    S, _ = _surface_classifier(q, setup.base_modulus, setup.sigma_matrix)
    draws, redraws = draw_surface_mutations(F, S.points, trials, rng)
    results = _pmap(_surface_trial, [(q, setup.base_modulus, setup.sigma_matrix, r, a) for r, a in draws], jobs)
    violations: list = []
    steps: Counter = Counter()
    types: Counter = Counter()
    both = 0
    for (removed, added), res in zip(draws, results):
        steps[res["reconstruction_step"] or "none"] += 1
        types[res["section_witness"][1] if res["section_witness"] else "none"] += 1
        if res["reconstruction_step"] and res["section_witness"]:
            both += 1
        else:
            K = (S.points - {removed}) | {added}
            violations.append(
                Violation(
                    "surface-mutant-undetected",
                    f"mutant replacing {list(removed)} by {list(added)} escaped detection: {res}",
                    {"kind": "surface-mutant", **_field_json(setup), "points": sorted(map(list, K))},
                )
            )
    hist = {
        "surface": {
            "trials": trials,
            "detected_both": both,
            "redraws": redraws,
            "reconstruction_steps": dict(sorted(steps.items())),
            "first_witness_types": dict(sorted(types.items())),
        }
    }

    emb, bb, B, _, _ = _baer_context(q, setup.base_modulus, setup.seed)
    pdraws, predraws = draw_pencil_mutations(B, trials, rng)
    presults = _pmap(_pencil_trial, [(q, setup.base_modulus, setup.seed, r, a) for r, a in pdraws], jobs)
    psteps: Counter = Counter()
    pboth = 0
    pviol = []
    for (removed, added), res in zip(pdraws, presults):
        psteps[res["reconstruction_step"] or "none"] += 1
        if res["reconstruction_step"] and res["pencil_witness"]:
            pboth += 1
        else:
            pts = (B.points - {removed}) | {added}
            pviol.append(
                Violation(
                    "pencil-mutant-undetected",
                    f"subplane mutant replacing {list(removed)} by {list(added)} escaped detection: {res}",
                    {"kind": "pencil-mutant", **_field_json(setup), "points": sorted(map(list, pts))},
                ).to_json()
            )
    hist["pencil"] = {
        "trials": trials,
        "detected_both": pboth,
        "redraws": predraws,
        "reconstruction_steps": dict(sorted(psteps.items())),
    }
    report_only = {}
    if q >= CONVERSE_MIN_Q:
        violations += [Violation(**v) for v in pviol]
    else:
        report_only["pencil-mutation"] = {"violations": pviol, "detected_both": pboth, "trials": trials}
    return _report("mutation", setup, hist, violations, report_only)


# --------------------------------------------------------------------------
# driver and replay


def run_suite(name: str, setup: Setup, *, trials: int = 100, jobs: int = 1, timing: bool = False) -> SuiteReport:
    start = time.perf_counter()
    if name == "char1-forward":
        rep = suite_char1_forward(setup, jobs)
    elif name == "lemma-chain":
        rep = suite_lemma_chain(setup, jobs)
    elif name == "corollary-bb":
        rep = suite_corollary_bb(setup, jobs)
    elif name == "inter1-forward":
        rep = suite_inter1_forward(setup, jobs)
    elif name == "mutation":
        rep = suite_mutation_falsify(setup, trials, jobs)
    else:
        raise UsageError(f"unknown suite {name!r}")
    if timing:
        rep.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return rep


def _pts(raw) -> frozenset:
    return frozenset(tuple(P) for P in raw)


def replay_witness(w: dict) -> dict:
    """Re-evaluate a witness; ``failed`` is True when the recorded failure reproduces."""
    kind = w.get("kind")
    if kind == "suite":
        setup = Setup(w["q"], tuple(w["modulus"]), w["sigma"]["kind"], tuple(map(tuple, w["sigma"]["matrix"])), w.get("seed", 0))
        rep = run_suite(w["suite"], setup)
        return {"kind": kind, "failed": not rep.passed, "violations": len(rep.violations)}
    F = _field(w["q"], tuple(w["modulus"]))
    if kind == "section-type":
        t = SectionClassifier(F, _pts(w["points"])).classify(Subspace.from_covector(F, w["hyperplane"]))
        return {"kind": kind, "failed": t.kind.value not in w["allowed"], "section_type": t.kind.value}
    if kind == "reconstruction":
        try:
            recover_ruling(F, _pts(w["points"]))
            return {"kind": kind, "failed": False}
        except ReconstructionError as exc:
            return {"kind": kind, "failed": True, "step": exc.step, "message": exc.message}
    if kind == "surface-mutant":
        res = surface_mutant_detection(F, _pts(w["points"]))
        return {"kind": kind, "failed": not (res["reconstruction_step"] and res["section_witness"]), **res}
    emb = _embedding(w["q"], tuple(w["modulus"]))
    if kind == "pencil-mutant":
        res = pencil_mutant_detection(emb, BruckBoseMap.standard(emb), _pts(w["points"]), _pencils(w["q"], tuple(w["modulus"])))
        return {"kind": kind, "failed": not (res["reconstruction_step"] and res["pencil_witness"]), **res}
    if kind == "pencil-class":
        bb = BruckBoseMap.standard(emb)
        D = bb.threespace_to_pencil(Subspace.from_covector(emb.base, w["hyperplane"]))
        c = classify_pencil_intersection(_pts(w["subplane"]), D, emb)
        return {"kind": kind, "failed": c.kind is PencilKind.OTHER, "class": c.label}
    raise UsageError(f"unknown witness kind {kind!r}")


def replay(doc: dict) -> list[dict]:
    """Replay one witness, or every violation witness of a report."""
    if "violations" in doc:
        return [replay_witness(v["witness"]) for v in doc["violations"] if v.get("witness")]
    return [replay_witness(doc)]
