"""Houghton groups H_n and their automorphisms.

Elements of H_n are bijections of M_n that act as a translation on each ray
far out.  The translation vector lives in Z = {t in Z^n : sum t = 0}, which
we coordinatize by the basis b_p = e_p - e_n (1 <= p < n); the coordinates
of t are just its first n-1 entries.

Automorphisms are realized as conjugation by normalizer elements: eventual
translations that may also permute the rays.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .perm_core import (NotATailedPermutation, Point, Tail, TailedPermutation,
                        cycle_decomposition, random_finitary)

Perm = tuple[int, ...]


# -- permutations of the rays ---------------------------------------------------

def perm_compose(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def perm_inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a, start=1):
        out[x - 1] = i
    return tuple(out)


def perm_identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def perm_order(a: Perm) -> int:
    k, p = 1, a
    ident = perm_identity(len(a))
    while p != ident:
        p = perm_compose(a, p)
        k += 1
    return k


def is_full_cycle(a: Perm) -> bool:
    n, j, seen = len(a), 1, 0
    while True:
        j = a[j - 1]
        seen += 1
        if j == 1:
            return seen == n


def parse_perm(text: str, n: int) -> Perm:
    """Accept one-line notation "2,3,1" or cycle notation "(1 2 3)(4 5)"."""
    text = text.strip()
    if not text or text in ("id", "()"):
        return perm_identity(n)
    if text.startswith("("):
        img = list(range(1, n + 1))
        for chunk in text.replace(")", " ").split("("):
            pts = [int(x) for x in chunk.replace(",", " ").split()]
            for i, x in enumerate(pts):
                if not 1 <= x <= n:
                    raise ValueError(f"point {x} outside 1..{n}")
                img[x - 1] = pts[(i + 1) % len(pts)]
        out = tuple(img)
    else:
        out = tuple(int(x) for x in text.replace(" ", "").split(","))
    if sorted(out) != list(range(1, n + 1)):
        raise ValueError(f"{text!r} is not a permutation of 1..{n}")
    return out


def act_on_vector(sigma: Perm, t: Sequence[int]) -> tuple[int, ...]:
    """(sigma t)_{sigma(j)} = t_j."""
    out = [0] * len(t)
    for j, x in enumerate(t, start=1):
        out[sigma[j - 1] - 1] = x
    return tuple(out)


def ray_map(sigma: Perm) -> TailedPermutation:
    """(j, s) -> (sigma(j), s)."""
    n = len(sigma)
    return TailedPermutation(n, 1, {}, [Tail(sigma[j], 1, (0,)) for j in range(n)])


# -- elements -------------------------------------------------------------------

def _check_pure_translation(f: TailedPermutation) -> tuple[int, ...]:
    if any(t.period != 1 for t in f.tails):
        raise NotATailedPermutation("tails are not eventual translations")
    return tuple(t.offsets[0] for t in f.tails)


@dataclass(frozen=True)
class HoughtonElement:
    underlying: TailedPermutation

    def __post_init__(self):
        f = self.underlying
        t = _check_pure_translation(f)
        if f.ray_permutation != perm_identity(f.n):
            raise NotATailedPermutation("element permutes the rays; not in H_n")
        if sum(t) != 0:
            raise NotATailedPermutation("translation sum nonzero")

    @property
    def n(self) -> int:
        return self.underlying.n

    @property
    def translation(self) -> tuple[int, ...]:
        return tuple(t.offsets[0] for t in self.underlying.tails)

    def __call__(self, x: Point) -> Point:
        return self.underlying(x)

    def __mul__(self, other: "HoughtonElement") -> "HoughtonElement":
        return HoughtonElement(self.underlying * other.underlying)

    def inverse(self) -> "HoughtonElement":
        return HoughtonElement(self.underlying.inverse())

    def __pow__(self, m: int) -> "HoughtonElement":
        return HoughtonElement(self.underlying ** m)

    def is_identity(self) -> bool:
        return self.underlying == TailedPermutation.identity(self.n)

    def to_json(self) -> dict:
        d = self.underlying.to_json()
        d["translation"] = list(self.translation)
        return d

    @classmethod
    def from_json(cls, data) -> "HoughtonElement":
        el = cls(TailedPermutation.from_json(data))
        if "translation" in data and tuple(data["translation"]) != el.translation:
            raise NotATailedPermutation("translation field disagrees with the tails")
        return el


def make_houghton(n: int, table, t: Sequence[int]) -> HoughtonElement:
    """Element acting by ``table`` on listed points and by (j,s) -> (j, s+t_j) elsewhere."""
    t = tuple(int(x) for x in t)
    if len(t) != n:
        raise ValueError(f"translation vector needs {n} entries")
    if sum(t) != 0:
        raise NotATailedPermutation("translation sum nonzero")
    table = {Point(*k): Point(*v) for k, v in dict(table).items()}
    B = max([k.height + 1 for k in table] + [1 - min(t), 1])
    f = TailedPermutation(n, B, table, [Tail(j, 1, (t[j - 1],)) for j in range(1, n + 1)])
    return HoughtonElement(f)


def tau(f: HoughtonElement) -> tuple[int, ...]:
    return f.translation


def tau_coordinates(t: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of t in the basis e_p - e_n."""
    if sum(t) != 0:
        raise ValueError("vector does not lie in the translation lattice")
    return tuple(t[:-1])


def make_h_p(n: int, p: int) -> HoughtonElement:
    """Shift ray p up and ray n down, with (n,1) feeding (p,1)."""
    if n < 2 or not 1 <= p < n:
        raise ValueError(f"need 1 <= p < n, got p={p}, n={n}")
    t = [0] * n
    t[p - 1], t[n - 1] = 1, -1
    return make_houghton(n, {Point(n, 1): Point(p, 1)}, t)


def make_xi_k(n: int, k: int) -> HoughtonElement:
    """n disjoint k-cycles ((i,1), ..., (i,k))."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    table = {Point(i, s): Point(i, s % k + 1) for i in range(1, n + 1) for s in range(1, k + 1)}
    return make_houghton(n, table, [0] * n)


def element_order(f: HoughtonElement, cap: int = 10_000) -> int:
    g = f
    for k in range(1, cap + 1):
        if g.is_identity():
            return k
        g = g * f
    raise ArithmeticError(f"order exceeds cap {cap}")


def psi_action(sigma: Perm, h: HoughtonElement) -> HoughtonElement:
    """Relabel the rays of h by sigma."""
    s = ray_map(tuple(sigma))
    return HoughtonElement(s * h.underlying * s.inverse())


# -- normalizer and automorphisms --------------------------------------------------

@dataclass(frozen=True)
class NormalizerElement:
    """Eventual translation that may permute rays: f(q,k) = (pi(q), k + t_q) far out."""

    underlying: TailedPermutation

    def __post_init__(self):
        t = _check_pure_translation(self.underlying)
        if sum(t) != 0:
            raise NotATailedPermutation("translation sum nonzero")

    @property
    def n(self) -> int:
        return self.underlying.n

    @property
    def ray_permutation(self) -> Perm:
        return self.underlying.ray_permutation

    @property
    def translation(self) -> tuple[int, ...]:
        return tuple(t.offsets[0] for t in self.underlying.tails)

    def __mul__(self, other: "NormalizerElement") -> "NormalizerElement":
        return NormalizerElement(self.underlying * other.underlying)

    def inverse(self) -> "NormalizerElement":
        return NormalizerElement(self.underlying.inverse())

    def conjugate(self, h: HoughtonElement) -> HoughtonElement:
        return HoughtonElement(self.underlying * h.underlying * self.underlying.inverse())

    def to_json(self) -> dict:
        d = self.underlying.to_json()
        d["translation"] = list(self.translation)
        d["ray_permutation"] = list(self.ray_permutation)
        return d

    @classmethod
    def from_json(cls, data) -> "NormalizerElement":
        el = cls(TailedPermutation.from_json(data))
        if "ray_permutation" in data and tuple(data["ray_permutation"]) != el.ray_permutation:
            raise NotATailedPermutation("ray_permutation field disagrees with the tails")
        return el


def extract_pi(f: NormalizerElement) -> Perm:
    return f.ray_permutation


@dataclass(frozen=True)
class AutHn:
    """The automorphism h -> psi_sigma(g h g^-1)."""

    sigma: Perm
    inner: HoughtonElement

    def __call__(self, h: HoughtonElement) -> HoughtonElement:
        g = self.inner
        return psi_action(self.sigma, g * h * g.inverse())

    def __mul__(self, other: "AutHn") -> "AutHn":
        # psi_a i_g psi_b i_h = psi_ab i_{psi_b^-1(g) h}
        moved = psi_action(perm_inverse(other.sigma), self.inner)
        return AutHn(perm_compose(self.sigma, other.sigma), moved * other.inner)

    def realizer(self) -> NormalizerElement:
        return NormalizerElement(ray_map(self.sigma) * self.inner.underlying)

    @classmethod
    def psi(cls, sigma: Perm) -> "AutHn":
        return cls(tuple(sigma), HoughtonElement(TailedPermutation.identity(len(sigma))))


def decompose_automorphism(f: NormalizerElement) -> AutHn:
    sigma = extract_pi(f)
    g = HoughtonElement(ray_map(perm_inverse(sigma)) * f.underlying)
    return AutHn(sigma, g)


def translation_matrix(phi: AutHn) -> list[list[int]]:
    """Matrix of the induced map on Z; column p is the image of tau(h_p)."""
    n = len(phi.sigma)
    cols = [tau_coordinates(tau(phi(make_h_p(n, p)))) for p in range(1, n)]
    return [[cols[c][r] for c in range(n - 1)] for r in range(n - 1)]


def permutation_translation_matrix(sigma: Perm) -> list[list[int]]:
    """sigma acting on e_p - e_n, written in the same basis."""
    n = len(sigma)
    cols = []
    for p in range(1, n):
        t = [0] * n
        t[p - 1], t[n - 1] = 1, -1
        cols.append(tau_coordinates(act_on_vector(sigma, t)))
    return [[cols[c][r] for c in range(n - 1)] for r in range(n - 1)]


def fixed_subgroup_rank(matrix: Sequence[Sequence[int]]) -> int:
    if not matrix:
        return 0
    return len(matrix) - linalg.rank(linalg.subtract_identity(matrix))


# -- characters ---------------------------------------------------------------------

@dataclass(frozen=True)
class HnCharacter:
    """Integer combination of the ray characters chi_1..chi_n (sum chi_j = 0)."""

    coefficients: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def functional(self) -> tuple[int, ...]:
        """Values on the basis e_p - e_n of Z; chi_j(t) = -t_j."""
        c = self.coefficients
        return tuple(-c[p] + c[-1] for p in range(self.n - 1))

    def is_zero(self) -> bool:
        return not any(self.functional())

    def __call__(self, h: HoughtonElement) -> int:
        return -sum(c * t for c, t in zip(self.coefficients, tau(h)))

    def pullback(self, sigma: Perm) -> "HnCharacter":
        """chi o psi_sigma; chi_j goes to chi_{sigma^-1(j)}."""
        inv = perm_inverse(sigma)
        out = [0] * self.n
        for j, c in enumerate(self.coefficients, start=1):
            out[inv[j - 1] - 1] += c
        return HnCharacter(tuple(out))

    def same_functional(self, other: "HnCharacter") -> bool:
        return self.functional() == other.functional()


def ray_character(n: int, j: int) -> HnCharacter:
    c = [0] * n
    c[j - 1] = 1
    return HnCharacter(tuple(c))


def character_orbit_sum(sigma: Perm) -> HnCharacter:
    """Sum of chi_1 over its orbit under sigma."""
    n = len(sigma)
    c, j = [0] * n, 1
    while True:
        c[j - 1] = 1
        j = sigma[j - 1]
        if j == 1:
            return HnCharacter(tuple(c))


# -- witnesses --------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionWitness:
    k: int
    element: HoughtonElement
    certificate: int   # order of element**ord(sigma)


def torsion_witnesses(sigma: Perm, count: int) -> list[TorsionWitness]:
    """xi_k fixed by psi_sigma whose ord(sigma)-th powers have distinct orders.

    Since psi_sigma^m is the identity for m = ord(sigma), twisted-conjugate
    fixed points have conjugate m-th powers; distinct orders rule that out.
    """
    n = len(sigma)
    m = perm_order(sigma)
    out = []
    for j in range(count):
        k = j * m + 1
        xi = make_xi_k(n, k)
        if psi_action(sigma, xi) != xi:
            raise AssertionError("xi_k is not fixed by psi_sigma")
        out.append(TorsionWitness(k, xi, element_order(xi ** m)))
    return out


# -- random sampling ------------------------------------------------------------

def random_houghton(rng: random.Random, n: int, length: int = 4, height: int = 6) -> HoughtonElement:
    g = HoughtonElement(TailedPermutation.identity(n))
    for _ in range(length):
        if rng.random() < 0.5:
            step = make_h_p(n, rng.randint(1, n - 1)) ** rng.choice((1, -1))
        else:
            step = HoughtonElement(random_finitary(rng, n, rng.randint(2, 4), height))
        g = g * step
    return g


def random_perm(rng: random.Random, n: int) -> Perm:
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return tuple(p)


def random_normalizer(rng: random.Random, n: int, length: int = 4) -> NormalizerElement:
    f = NormalizerElement(ray_map(random_perm(rng, n)))
    for _ in range(length):
        if rng.random() < 0.3:
            step = NormalizerElement(ray_map(random_perm(rng, n)))
        else:
            step = NormalizerElement(random_houghton(rng, n, 2).underlying)
        f = step * f
    return f


def generator_sample(rng: random.Random, n: int, count: int = 20, height: int = 6
                     ) -> list[HoughtonElement]:
    """h_p for all p plus transpositions and a few random finitary elements."""
    out = [make_h_p(n, p) for p in range(1, n)]
    for _ in range(count):
        a = Point(rng.randint(1, n), rng.randint(1, height))
        b = Point(rng.randint(1, n), rng.randint(1, height))
        if a != b:
            out.append(HoughtonElement(TailedPermutation.transposition(n, a, b)))
        else:
            out.append(HoughtonElement(random_finitary(rng, n, 3, height)))
    return out


def all_perms(n: int) -> Iterable[Perm]:
    return itertools.permutations(range(1, n + 1))
