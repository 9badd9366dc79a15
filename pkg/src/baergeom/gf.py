"""Exact arithmetic in GF(p^k) and its quadratic extension.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c`` is the
coefficient vector (low-to-high) of the residue polynomial.  With this
encoding 0 and 1 are the field's zero and one, and the prime subfield is
``range(p)``.  The geometry code works on these integer indices through the
lookup tables on :class:`FieldSpec`; :class:`FieldElement` is the checked,
operator-overloaded wrapper for callers that want real objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class FieldError(ValueError):
    """Usage error: mismatched fields, bad moduli, malformed input."""


class FieldDomainError(ArithmeticError):
    """Domain error such as inverting zero."""


# low-to-high coefficient lists, all validated at construction
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}

SUPPORTED_Q = (3, 4, 5, 7, 8, 9)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise if q is not a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                break
            return p, k
    raise FieldError(f"{q} is not a prime power")


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = [c % p for c in a]
    d = len(m) - 1
    lead_inv = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] * lead_inv % p
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * m[j]) % p
    return a[:d]


def _divides(f: tuple[int, ...], m: tuple[int, ...], p: int) -> bool:
    return not any(_poly_mod(list(m), f, p))


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(modulus) - 1
    if d < 1 or modulus[-1] % p == 0:
        return False
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _divides(tuple(low) + (1,), modulus, p):
                return False
    return True


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k, scanning low coefficients lexicographically."""
    for low in itertools.product(range(p), repeat=k):
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


def parse_modulus(text: str) -> tuple[int, ...]:
    """Parse a comma-separated low-to-high coefficient list such as ``"1,1,1"``."""
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise FieldError(f"malformed modulus {text!r}") from exc


class FieldSpec:
    """The field GF(p)[x]/(modulus).

    Carries dense add/mul tables indexed by element encoding; build cost is
    O(q^2) which is negligible for the q^2 <= 81 used here.
    """

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("degree must be >= 1")
        if modulus is None:
            modulus = DEFAULT_MODULI.get((p, k)) or (
                (0, 1) if k == 1 else find_irreducible(p, k)
            )
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus {modulus} is not monic of degree {k}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._build_tables()

    @classmethod
    def of_order(cls, q: int, modulus=None) -> FieldSpec:
        p, k = prime_power(q)
        return cls(p, k, modulus)

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        coeffs = [self.to_coeffs(i) for i in range(q)]
        self.add = [[0] * q for _ in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = coeffs[a]
            for b in range(a, q):
                cb = coeffs[b]
                s = self.from_coeffs([(x + y) % p for x, y in zip(ca, cb)])
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] += x * y
                m = self.from_coeffs(_poly_mod(prod, self.modulus, p)) if k > 1 else (ca[0] * cb[0]) % p
                self.add[a][b] = self.add[b][a] = s
                self.mul[a][b] = self.mul[b][a] = m
        self.neg = [self.add[a].index(0) for a in range(q)]
        self.sub = [[self.add[a][self.neg[b]] for b in range(q)] for a in range(q)]
        self.inv = [None] + [self.mul[a].index(1) for a in range(1, q)]
        self.add_np = np.array(self.add, dtype=np.int64)
        self.mul_np = np.array(self.mul, dtype=np.int64)

    # -- encoding -----------------------------------------------------------

    def to_coeffs(self, i: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            i, r = divmod(i, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + (c % self.p)
        return idx

    def element(self, value) -> FieldElement:
        """Wrap an index, or a coefficient list/tuple, as a FieldElement."""
        if isinstance(value, (list, tuple)):
            value = self.from_coeffs(value)
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element index of GF({self.q})")
        return FieldElement(self, value)

    def elements(self) -> list[FieldElement]:
        return enumerate_field(self)

    # -- scalar helpers on indices ---------------------------------------------

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            if a == 0:
                raise FieldDomainError("0 has no inverse")
            a, e = self.inv[a], -e
        r = 1
        while e:
            if e & 1:
                r = self.mul[r][a]
            a = self.mul[a][a]
            e >>= 1
        return r

    def dot(self, u, v) -> int:
        s = 0
        add, mul = self.add, self.mul
        for a, b in zip(u, v):
            if a and b:
                s = add[s][mul[a][b]]
        return s

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    @cached_property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def dots(self, covectors, points) -> np.ndarray:
        """Matrix of ``covector . point`` values (as indices) for two int arrays."""
        H = np.asarray(covectors, dtype=np.int64)
        P = np.asarray(points, dtype=np.int64)
        if self.k == 1:
            return (H @ P.T) % self.p
        prods = self.mul_np[H[:, None, :], P[None, :, :]]
        acc = prods[:, :, 0]
        for i in range(1, prods.shape[2]):
            acc = self.add_np[acc, prods[:, :, i]]
        return acc

    # -- identity ---------------------------------------------------------------

    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldSpec(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.k, self.modulus))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    index: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.to_coeffs(self.index)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError(f"cannot combine elements of {self.spec} and {other.spec}")
            return other.index
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.add[self.index][b])

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub[self.index][b])

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub[b][self.index])

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.mul[self.index][b])

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg[self.index])

    def inverse(self) -> FieldElement:
        if self.index == 0:
            raise FieldDomainError("0 has no multiplicative inverse")
        return FieldElement(self.spec, self.spec.inv[self.index])

    def __truediv__(self, other):
        b = self._other(other)
        return self * FieldElement(self.spec, b).inverse()

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.index, e))

    def __bool__(self):
        return self.index != 0

    def __int__(self):
        return self.index

    def __repr__(self):
        if self.spec.k == 1:
            return f"{self.index}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(f"{c if (c != 1 or i == 0) else ''}{mono}")
        return " + ".join(terms) if terms else "0"


# module-level operation names for callers preferring functions
def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a**e


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    """All q elements, in increasing encoding order.

    The encoding order is lexicographic on the coefficient vector read from the
    highest-degree coefficient down, so GF(p) comes out as 0, 1, ..., p-1.
    """
    return [FieldElement(spec, i) for i in range(spec.q)]


@dataclass(frozen=True, eq=False)
class ExtensionEmbedding:
    """GF(q) inside GF(q^2), with GF(q^2) = GF(q)[omega]."""

    base: FieldSpec
    ext: FieldSpec
    omega: int = field(default=-1)

    def __post_init__(self):
        if self.base.p != self.ext.p or self.ext.k != 2 * self.base.k:
            raise FieldError(f"{self.ext} is not a quadratic extension of {self.base}")
        p, q = self.base.p, self.base.q
        # image of the base generator x: least root of the base modulus in the extension
        gen = None
        for y in range(self.ext.q):
            acc = 0
            for c in reversed(self.base.modulus):
                acc = self.ext.add[self.ext.mul[acc][y]][c % p]
            if acc == 0:
                gen = y
                break
        if gen is None:
            raise FieldError("base modulus has no root in the extension")
        image = []
        for a in range(q):
            acc, xp = 0, 1
            for c in self.base.to_coeffs(a):
                acc = self.ext.add[acc][self.ext.mul[c][xp]]
                xp = self.ext.mul[xp][gen]
            image.append(acc)
        omega = self.omega if self.omega >= 0 else (p if self.ext.k > 1 else 0)
        if omega in set(image):
            raise FieldError("omega must lie outside the embedded subfield")
        decomp: dict[int, tuple[int, int]] = {}
        compose = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                x = self.ext.add[image[a]][self.ext.mul[image[b]][omega]]
                decomp[x] = (a, b)
                compose[a][b] = x
        if len(decomp) != self.ext.q:
            raise FieldError("omega does not generate the extension")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "_image", tuple(image))
        object.__setattr__(self, "_restrict", {v: i for i, v in enumerate(image)})
        object.__setattr__(self, "_decomp", decomp)
        object.__setattr__(self, "_compose", compose)
        frob = tuple(self.ext.pow(x, q) for x in range(self.ext.q))
        object.__setattr__(self, "_frob", frob)
        # omega^2 = trace * omega + norm_term with trace, norm_term in GF(q)
        t, n = decomp[self.ext.mul[omega][omega]][::-1]
        object.__setattr__(self, "min_poly", (n, t))

    @classmethod
    def default(cls, q: int, base_modulus=None, ext_modulus=None) -> ExtensionEmbedding:
        p, k = prime_power(q)
        return cls(FieldSpec(p, k, base_modulus), FieldSpec(p, 2 * k, ext_modulus))

    @property
    def q(self) -> int:
        return self.base.q

    def embed(self, a: int) -> int:
        return self._image[a]

    def restrict(self, x: int) -> int:
        """Inverse of ``embed``; raises if x is not in the embedded subfield."""
        try:
            return self._restrict[x]
        except KeyError:
            raise FieldError(f"{x} is not in the embedded subfield") from None

    def in_subfield(self, x: int) -> bool:
        return x in self._restrict

    def decompose(self, x: int) -> tuple[int, int]:
        """``x = embed(a) + embed(b) * omega`` -> ``(a, b)`` as base indices."""
        return self._decomp[x]

    def compose(self, a: int, b: int) -> int:
        return self._compose[a][b]

    def frobenius(self, x: int) -> int:
        return self._frob[x]

    def embed_vector(self, v):
        return tuple(self._image[a] for a in v)

    def subfield(self) -> list[int]:
        return list(self._image)

    def describe(self) -> dict:
        return {
            "q": self.q,
            "base_modulus": list(self.base.modulus),
            "ext_modulus": list(self.ext.modulus),
            "omega": list(self.ext.to_coeffs(self.omega)),
        }


def frobenius(a: FieldElement, embedding: ExtensionEmbedding) -> FieldElement:
    """a -> a^q for a in GF(q^2)."""
    if a.spec != embedding.ext:
        raise FieldError("frobenius expects an element of the extension field")
    return FieldElement(a.spec, embedding.frobenius(a.index))


def decompose(x: FieldElement, embedding: ExtensionEmbedding) -> tuple[FieldElement, FieldElement]:
    if x.spec != embedding.ext:
        raise FieldError("decompose expects an element of the extension field")
    a, b = embedding.decompose(x.index)
    return FieldElement(embedding.base, a), FieldElement(embedding.base, b)
