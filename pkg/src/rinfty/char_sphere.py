"""Exact linear algebra on character lattices.

Characters of the pure symmetric automorphism group G_n are vectors over the
basis chi_(i,j), i != j, ordered lexicographically.  Automorphisms act on this
lattice by signed permutations (monomial matrices).  The second half of the
module handles finite sets of rational character classes on product spheres
and invariant orbit sums.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg

Pair = tuple[int, int]


class NotRealizable(ValueError):
    """Matrix data incompatible with the block structure of automorphisms."""


class OrbitSumError(ValueError):
    pass


# -- index bookkeeping ---------------------------------------------------------------

_PAIR_CACHE: dict[int, tuple[list[Pair], dict[Pair, int]]] = {}


def pairs(n: int) -> list[Pair]:
    return _pair_data(n)[0]


def pair_index(n: int) -> dict[Pair, int]:
    return _pair_data(n)[1]


def _pair_data(n: int):
    if n not in _PAIR_CACHE:
        ps = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        _PAIR_CACHE[n] = (ps, {p: k for k, p in enumerate(ps)})
    return _PAIR_CACHE[n]


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class RationalCharacter:
    n: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.n * (self.n - 1):
            raise ValueError("coordinate count must be n^2 - n")
        object.__setattr__(self, "coords", tuple(_frac(c) for c in self.coords))

    @classmethod
    def zero(cls, n: int) -> "RationalCharacter":
        return cls(n, (Fraction(0),) * (n * (n - 1)))

    @classmethod
    def basis(cls, n: int, i: int, j: int) -> "RationalCharacter":
        return cls.from_terms(n, {(i, j): 1})

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Pair, object]) -> "RationalCharacter":
        idx = pair_index(n)
        c = [Fraction(0)] * (n * (n - 1))
        for p, v in terms.items():
            if tuple(p) not in idx:
                raise ValueError(f"pair {p} is not an index for n={n}")
            c[idx[tuple(p)]] += _frac(v)
        return cls(n, tuple(c))

    def __getitem__(self, p: Pair) -> Fraction:
        return self.coords[pair_index(self.n)[tuple(p)]]

    def __add__(self, other: "RationalCharacter") -> "RationalCharacter":
        return RationalCharacter(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RationalCharacter") -> "RationalCharacter":
        return RationalCharacter(self.n, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RationalCharacter":
        return RationalCharacter(self.n, tuple(-a for a in self.coords))

    def scale(self, k) -> "RationalCharacter":
        k = _frac(k)
        return RationalCharacter(self.n, tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def terms(self) -> dict[Pair, Fraction]:
        return {p: c for p, c in zip(pairs(self.n), self.coords) if c}

    def primitive(self) -> "RationalCharacter":
        return RationalCharacter(self.n, linalg.primitive(self.coords))

    def to_json(self) -> dict:
        return {"n": self.n, "coords": {f"{i},{j}": str(c) for (i, j), c in self.terms().items()}}

    @classmethod
    def from_json(cls, data) -> "RationalCharacter":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        terms = {}
        for key, val in data.get("coords", {}).items():
            i, j = (int(x) for x in key.split(","))
            terms[(i, j)] = _frac(val)
        return cls.from_terms(n, terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*chi{i}{j}" for (i, j), c in self.terms().items()) or "0"
        return f"RationalCharacter({body})"


# -- monomial matrices --------------------------------------------------------------

@dataclass(frozen=True)
class MonomialMatrix:
    """T e_a = signs[a] * e_{perm[a]}; as a matrix, D P with D[perm[a]] = signs[a]."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        m = len(self.perm)
        if sorted(self.perm) != list(range(m)) or len(self.signs) != m:
            raise ValueError("perm must be a permutation of 0..m-1 with one sign each")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @property
    def size(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, m: int) -> "MonomialMatrix":
        return cls(tuple(range(m)), (1,) * m)

    def apply(self, vec: Sequence) -> tuple:
        out = [0] * self.size
        for a, x in enumerate(vec):
            if x:
                out[self.perm[a]] = self.signs[a] * x
        return tuple(out)

    def __call__(self, chi: RationalCharacter) -> RationalCharacter:
        return RationalCharacter(chi.n, self.apply(chi.coords))

    def __mul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        perm = tuple(self.perm[other.perm[a]] for a in range(self.size))
        signs = tuple(other.signs[a] * self.signs[other.perm[a]] for a in range(self.size))
        return MonomialMatrix(perm, signs)

    def inverse(self) -> "MonomialMatrix":
        perm = [0] * self.size
        signs = [0] * self.size
        for a in range(self.size):
            perm[self.perm[a]] = a
            signs[self.perm[a]] = self.signs[a]
        return MonomialMatrix(tuple(perm), tuple(signs))

    def matrix(self) -> list[list[int]]:
        m = [[0] * self.size for _ in range(self.size)]
        for a in range(self.size):
            m[self.perm[a]][a] = self.signs[a]
        return m

    def diagonal(self) -> tuple[int, ...]:
        """Entries of D in M = D P."""
        d = [0] * self.size
        for a in range(self.size):
            d[self.perm[a]] = self.signs[a]
        return tuple(d)

    def cycles(self) -> list[list[int]]:
        seen, out = set(), []
        for a in range(self.size):
            if a in seen:
                continue
            cyc = [a]
            seen.add(a)
            b = self.perm[a]
            while b != a:
                cyc.append(b)
                seen.add(b)
                b = self.perm[b]
            out.append(cyc)
        return out

    def cycle_sign(self, cycle: Sequence[int]) -> int:
        s = 1
        for a in cycle:
            s *= self.signs[a]
        return s

    def to_json(self, n: int | None = None) -> dict:
        if n is None:
            return {"perm": list(self.perm), "signs": list(self.signs)}
        ps = pairs(n)
        return {"n": n, "map": {f"{i},{j}": [f"{ps[self.perm[k]][0]},{ps[self.perm[k]][1]}", self.signs[k]]
                                for k, (i, j) in enumerate(ps)}}

    @classmethod
    def from_json(cls, data) -> tuple["MonomialMatrix", int | None]:
        if isinstance(data, str):
            data = json.loads(data)
        if "matrix" in data:
            return dp_decompose(data["matrix"]), data.get("n")
        if "map" in data:
            n = int(data["n"])
            idx = pair_index(n)
            perm, signs = [0] * len(idx), [0] * len(idx)
            for key, (img, sign) in data["map"].items():
                a = idx[tuple(int(x) for x in key.split(","))]
                perm[a] = idx[tuple(int(x) for x in img.split(","))]
                signs[a] = int(sign)
            return cls(tuple(perm), tuple(signs)), n
        if "sigma" in data:
            n = int(data["n"])
            sigma = tuple(int(x) for x in data["sigma"])
            eps = {tuple(int(x) for x in k.split(",")): int(v) for k, v in data.get("signs", {}).items()}
            return from_signed_pairs(sigma, eps), n
        return cls(tuple(data["perm"]), tuple(data["signs"])), data.get("n")


def dp_decompose(matrix: Sequence[Sequence]) -> MonomialMatrix:
    """Read a square matrix with one entry +-1 per row and column as D P."""
    m = len(matrix)
    perm, signs = [None] * m, [None] * m
    used_rows = set()
    for a in range(m):
        if len(matrix[a]) != m:
            raise NotRealizable("matrix is not square")
    for col in range(m):
        nz = [(r, matrix[r][col]) for r in range(m) if matrix[r][col] != 0]
        if len(nz) != 1 or nz[0][1] not in (1, -1) or nz[0][0] in used_rows:
            raise NotRealizable("not a signed permutation matrix, so not induced by an automorphism")
        r, v = nz[0]
        used_rows.add(r)
        perm[col], signs[col] = r, int(v)
    return MonomialMatrix(tuple(perm), tuple(signs))


def pi_star(pi: Sequence[int]) -> MonomialMatrix:
    """chi_(i,j) -> chi_(pi i, pi j)."""
    pi = tuple(pi)
    n = len(pi)
    idx = pair_index(n)
    return MonomialMatrix(tuple(idx[(pi[i - 1], pi[j - 1])] for i, j in pairs(n)),
                          (1,) * len(idx))


def t_star(t: Sequence[int]) -> MonomialMatrix:
    """chi_(i,j) -> t_i t_j chi_(i,j)."""
    n = len(t)
    return MonomialMatrix(tuple(range(n * (n - 1))),
                          tuple(t[i - 1] * t[j - 1] for i, j in pairs(n)))


def from_signed_pairs(sigma: Sequence[int], eps: Mapping[Pair, int] | Sequence[int] = ()) -> MonomialMatrix:
    """chi_(i,j) -> eps_(i,j) chi_(sigma i, sigma j); missing signs default to +1."""
    sigma = tuple(sigma)
    n = len(sigma)
    idx = pair_index(n)
    if isinstance(eps, Mapping):
        signs = tuple(int(eps.get(p, 1)) for p in pairs(n))
    else:
        signs = tuple(eps) if eps else (1,) * len(idx)
    return MonomialMatrix(tuple(idx[(sigma[i - 1], sigma[j - 1])] for i, j in pairs(n)), signs)


def eta_extraction(M: MonomialMatrix, n: int) -> tuple[tuple[int, ...], dict[Pair, int]]:
    """The sigma with (i,j) -> (sigma i, sigma j) for every pair, and the signs."""
    ps = pairs(n)
    if M.size != len(ps):
        raise NotRealizable(f"matrix size {M.size} does not match n^2 - n for n={n}")
    sigma = [0] * n
    for a, (i, j) in enumerate(ps):
        p, q = ps[M.perm[a]]
        for src, dst in ((i, p), (j, q)):
            if sigma[src - 1] in (0, dst):
                sigma[src - 1] = dst
            else:
                raise NotRealizable("pair images are not induced by one permutation of 1..n")
    eps = {ps[a]: M.signs[a] for a in range(len(ps))}
    return tuple(sigma), eps


# -- the Sigma^c description ----------------------------------------------------------

@dataclass(frozen=True)
class SubspaceBasis:
    label: str
    indices: tuple[int, ...]
    vectors: tuple[RationalCharacter, ...]

    def rank(self) -> int:
        return linalg.rank([v.coords for v in self.vectors])

    def contains(self, chi: RationalCharacter) -> bool:
        rows = [v.coords for v in self.vectors]
        return linalg.rank(rows + [chi.coords]) == linalg.rank(rows)


def subspace_A(n: int, p: int, q: int) -> SubspaceBasis:
    a, b = sorted((p, q))
    return SubspaceBasis("A", (a, b), (RationalCharacter.basis(n, a, b), RationalCharacter.basis(n, b, a)))


def subspace_B(n: int, i: int, j: int, k: int) -> SubspaceBasis:
    e = lambda x, y: RationalCharacter.basis(n, x, y)
    return SubspaceBasis("B", (i, j, k), (e(i, j) - e(k, j), e(j, k) - e(i, k), e(k, i) - e(j, i)))


@dataclass(frozen=True)
class Membership:
    kind: str                      # "A", "B" or "outside"
    indices: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.kind == "outside":
            return "Outside"
        return f"In{self.kind}({','.join(map(str, self.indices))})"


def sigma_c_membership(n: int, chi: RationalCharacter) -> Membership:
    """First A_(p,q), then B_(i,j,k), in lexicographic order, that contains chi."""
    if n < 3:
        raise ValueError("the character-sphere description needs n >= 3")
    if chi.n != n:
        raise ValueError("character lives in a different rank")
    if chi.is_zero():
        raise ValueError("the zero character has no class on the sphere")
    support = {p for p, c in chi.terms().items()}
    for p, q in itertools.combinations(range(1, n + 1), 2):
        if support <= {(p, q), (q, p)}:
            return Membership("A", (p, q))
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        allowed = {(x, y) for x in (i, j, k) for y in (i, j, k) if x != y}
        if support <= allowed and subspace_B(n, i, j, k).contains(chi):
            return Membership("B", (i, j, k))
    return Membership("outside")


def pullback_membership(m: Membership, pi: Sequence[int]) -> Membership:
    """Relabel a membership class by pi, sorting as the classifier does."""
    if m.kind == "outside":
        return m
    return Membership(m.kind, tuple(sorted(pi[x - 1] for x in m.indices)))


# -- eigenvectors of monomial matrices ------------------------------------------------

def orbit_sum(T: MonomialMatrix, start: int) -> tuple[list[int], tuple[int, ...], int]:
    """Sum of the T-orbit of e_start (e + d e' + d d' e'' + ...).

    Returns (cycle, vector, product of signs along the cycle).
    """
    vec = [0] * T.size
    cyc, a, coeff = [], start, 1
    while True:
        cyc.append(a)
        vec[a] = coeff
        coeff *= T.signs[a]
        a = T.perm[a]
        if a == start:
            return cyc, tuple(vec), coeff


@dataclass(frozen=True)
class CycleEigenpair:
    cycle: tuple[int, ...]
    vector: tuple[int, ...]
    eigenvalue: int


def cycle_eigenvectors(T: MonomialMatrix) -> tuple[list[CycleEigenpair], list[tuple[int, ...]]]:
    """Real eigenvectors supported on single cycles of the index permutation.

    A cycle of length k with sign product s acts as x^k = s on its span.  It
    carries eigenvalue +1 when s = 1 (the orbit sum) and eigenvalue -1 when
    s = (-1)^k (the alternating orbit sum).  Cycles with s = -1 and k even have
    no real eigenvalue; they are returned separately.
    """
    found, none = [], []
    for cyc in T.cycles():
        k = len(cyc)
        cyc_t, vec, s = orbit_sum(T, cyc[0])
        if s == 1:
            found.append(CycleEigenpair(tuple(cyc_t), vec, 1))
        if s == (-1) ** k:
            alt = list(vec)
            for r, a in enumerate(cyc_t):
                alt[a] *= (-1) ** r
            found.append(CycleEigenpair(tuple(cyc_t), tuple(alt), -1))
        if s == -1 and k % 2 == 0:
            none.append(tuple(cyc_t))
    return found, none


def fixed_space(T: MonomialMatrix) -> list[tuple[int, ...]]:
    """Basis of ker(T - I): one orbit sum per cycle with sign product +1."""
    return [p.vector for p in cycle_eigenvectors(T)[0] if p.eigenvalue == 1]


def negated_space(T: MonomialMatrix) -> list[tuple[int, ...]]:
    """Basis of ker(T + I)."""
    return [p.vector for p in cycle_eigenvectors(T)[0] if p.eigenvalue == -1]


# -- the u / v construction ----------------------------------------------------------

@dataclass(frozen=True)
class UVPair:
    u: RationalCharacter
    v: RationalCharacter
    eigenvalue: int
    pair: Pair                     # the pair playing the role of (1,2)
    relabeling: dict = field(default_factory=dict)
    case: str = ""
    u_is_eigen: bool = True
    v_is_eigen: bool = True

    @property
    def valid(self) -> bool:
        return self.u_is_eigen and self.v_is_eigen


def _perm_cycles(sigma: Sequence[int]) -> list[list[int]]:
    seen, out = set(), []
    for i in range(1, len(sigma) + 1):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = sigma[j - 1]
        out.append(cyc)
    return out


def build_uv(M: MonomialMatrix, n: int) -> UVPair:
    """The orbit-sum pair u (through chi_(i,j)) and v (through chi_(j,i)).

    Cases follow the cycle shape of sigma: a cycle of length > 2, a product of
    transpositions with a fixed point, or at least two transpositions.  The
    eigenvector flags record whether T u = e u and T v = e v actually hold.
    """
    sigma, eps = eta_extraction(M, n)
    if sigma == tuple(range(1, n + 1)):
        raise ValueError("sigma is the identity; use the fixed-character route")
    idx = pair_index(n)
    cycles = _perm_cycles(sigma)
    long = [c for c in cycles if len(c) > 2]
    e = lambda x, y: RationalCharacter.basis(n, x, y)
    if long:
        i = long[0][0]
        j = sigma[i - 1]
        relabel = {i: 1, j: 2}
        _, uvec, su = orbit_sum(M, idx[(i, j)])
        _, vvec, sv = orbit_sum(M, idx[(j, i)])
        u, v = RationalCharacter(n, uvec), RationalCharacter(n, vvec)
        case, lam = "long cycle", su
    else:
        swaps = [c for c in cycles if len(c) == 2]
        fixed = [c[0] for c in cycles if len(c) == 1]
        a, c = swaps[0]
        if fixed:
            b = fixed[0]
            u = e(a, b) + e(c, b).scale(eps[(a, b)])
            v = e(b, a) + e(b, c).scale(eps[(b, a)])
            relabel = {a: 1, b: 2, c: 3}
            case = "transpositions with a fixed point"
        else:
            b, d = swaps[1]
            u = e(a, b) + e(c, d).scale(eps[(a, b)])
            v = e(b, a) + e(d, c).scale(eps[(b, a)])
            relabel = {a: 1, b: 2, c: 3, d: 4}
            case = "two transpositions"
        i, j = a, b
        lam = eps[(a, b)] * eps[idx_pair(n, M.perm[idx[(a, b)]])]
    ok_u = M(u) == u.scale(lam)
    ok_v = M(v) == v.scale(lam)
    return UVPair(u, v, lam, (i, j), relabel, case, ok_u, ok_v)


def idx_pair(n: int, a: int) -> Pair:
    return pairs(n)[a]


def commutator_index(b: Sequence | RationalCharacter, c: Sequence | RationalCharacter,
                     pair: Pair = (1, 2), n: int | None = None) -> int:
    """Image of [beta, gamma] in the rank-one quotient seen by the pair (i,j):
    p s - q r with (p, q), (r, s) the (i,j), (j,i) coefficients of b and c."""
    if isinstance(b, RationalCharacter):
        n = b.n
        b = b.coords
    if isinstance(c, RationalCharacter):
        n = c.n
        c = c.coords
    if n is None:
        m = len(b)
        n = next(k for k in range(2, m + 2) if k * (k - 1) == m)
    idx = pair_index(n)
    i, j = pair
    p, q = Fraction(b[idx[(i, j)]]), Fraction(b[idx[(j, i)]])
    r, s = Fraction(c[idx[(i, j)]]), Fraction(c[idx[(j, i)]])
    val = p * s - q * r
    if val.denominator != 1:
        raise ValueError("exponent vectors must be integral")
    return int(val)


# -- witnesses -------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantCharacter:
    character: RationalCharacter
    kind: str = "invariant"


@dataclass(frozen=True)
class CommutatorWitness:
    """beta, gamma spanning a T-invariant plane on which T has determinant 1."""

    u: RationalCharacter
    v: RationalCharacter
    pair: Pair
    index: int
    route: str                   # "negated" (both eigenvalue -1) or "plane"
    kind: str = "commutator"


@dataclass(frozen=True)
class NoWitness:
    reason: str
    kind: str = "none"


def _unit_on(vec: Sequence[int], a: int) -> tuple[int, ...]:
    s = vec[a]
    return tuple(x * s for x in vec)          # entries are +-1 on the cycle


def gn_witness(M: MonomialMatrix, n: int, *, plane_fallback: bool = True):
    """An invariant character if 1 is an eigenvalue; otherwise two eigenvalue -1
    vectors through chi_(i,j) and chi_(j,i) with nonzero commutator index.

    With ``plane_fallback`` the search continues to invariant planes of
    determinant 1 (still giving a fixed commutator class) when no such pair of
    eigenvectors exists.
    """
    if n < 3:
        raise ValueError("the pipeline needs n >= 3")
    eta_extraction(M, n)
    fixed = fixed_space(M)
    if fixed:
        return InvariantCharacter(RationalCharacter(n, linalg.primitive(fixed[0])))
    idx = pair_index(n)
    neg = negated_space(M)
    home = {}
    for vec in neg:
        for a, x in enumerate(vec):
            if x:
                home[a] = vec
    for i, j in pairs(n):
        a, b = idx[(i, j)], idx[(j, i)]
        if a in home and b in home and home[a] is not home[b]:
            u = RationalCharacter(n, _unit_on(home[a], a))
            v = RationalCharacter(n, _unit_on(home[b], b))
            return CommutatorWitness(u, v, (i, j), commutator_index(u, v, (i, j)), "negated")
    if plane_fallback:
        w = _plane_witness(M, n)
        if w is not None:
            return w
    return NoWitness("no eigenvalue 1 and no usable eigenvalue -1 pair")


def _plane_witness(M: MonomialMatrix, n: int):
    mat = M.matrix()
    sq = [[sum(mat[r][k] * mat[k][c] for k in range(M.size)) for c in range(M.size)]
          for r in range(M.size)]
    for r in range(M.size):
        sq[r][r] += 1
    basis = [linalg.primitive(v) for v in linalg.nullspace(sq, M.size)]
    candidates = list(basis) + [tuple(x + y for x, y in zip(p, q))
                                for p, q in itertools.combinations(basis, 2)]
    for w in candidates:
        mw = M.apply(w)
        for i, j in pairs(n):
            if i > j:
                continue
            u, v = RationalCharacter(n, w), RationalCharacter(n, mw)
            k = commutator_index(u, v, (i, j))
            if k:
                return CommutatorWitness(u, v, (i, j), k, "plane")
    return None


def check_witness(M: MonomialMatrix, w, *, allow_plane: bool = True) -> bool:
    """Independent check of a gn_witness result against the matrix."""
    if isinstance(w, InvariantCharacter):
        chi = w.character
        return not chi.is_zero() and M(chi) == chi
    if isinstance(w, CommutatorWitness):
        if w.index == 0 or w.index != commutator_index(w.u, w.v, w.pair):
            return False
        if w.route == "negated":
            return M(w.u) == -w.u and M(w.v) == -w.v
        if not allow_plane:
            return False
        # M maps span(u, v) to itself with determinant 1
        mu, mv = M(w.u), M(w.v)
        rows = [w.u.coords, w.v.coords]
        sol_u = linalg.solve([list(col) for col in zip(*rows)], list(mu.coords))
        sol_v = linalg.solve([list(col) for col in zip(*rows)], list(mv.coords))
        if sol_u is None or sol_v is None:
            return False
        return sol_u[0] * sol_v[1] - sol_u[1] * sol_v[0] == 1
    return False


def random_monomial(rng: random.Random, n: int, sigma: Sequence[int] | None = None) -> MonomialMatrix:
    if sigma is None:
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
    signs = tuple(rng.choice((1, -1)) for _ in range(n * (n - 1)))
    return from_signed_pairs(tuple(sigma), signs)


# -- product spheres ----------------------------------------------------------------

TAGS = ("D_Q", "L_Q", "L")


@dataclass(frozen=True)
class SpherePoint:
    coords: tuple[int, ...]
    factor: str
    tag: str = "D_Q"


@dataclass(frozen=True)
class SpherePointSet:
    """Rational rays on a product sphere; each point sits in one factor."""

    labels: tuple[str, ...]
    factors: dict                     # factor name -> tuple of coordinate indices
    points: tuple[SpherePoint, ...]
    certificates: dict = field(default_factory=dict)    # factor -> strict functional

    def __post_init__(self):
        dim = len(self.labels)
        norm = []
        for p in self.points:
            if p.factor not in self.factors:
                raise ValueError(f"unknown factor {p.factor!r}")
            if p.tag not in TAGS:
                raise ValueError(f"unknown tag {p.tag!r}")
            if len(p.coords) != dim:
                raise ValueError("point has the wrong dimension")
            coords = linalg.primitive(p.coords)
            own = set(self.factors[p.factor])
            if any(c and k not in own for k, c in enumerate(coords)):
                raise ValueError("point leaves its factor's coordinate subspace")
            norm.append(SpherePoint(coords, p.factor, p.tag))
        object.__setattr__(self, "points", tuple(norm))
        certs = {}
        for name, f in self.certificates.items():
            if name not in self.factors:
                raise ValueError(f"certificate for unknown factor {name!r}")
            idx = self.factors[name]
            if len(f) == len(idx) and len(f) != dim:
                full = [Fraction(0)] * dim      # given on the factor's own coordinates
                for k, x in zip(idx, f):
                    full[k] = Fraction(x)
                f = full
            if len(f) != dim:
                raise ValueError("certificate has the wrong dimension")
            certs[name] = tuple(Fraction(x) for x in f)
        object.__setattr__(self, "certificates", certs)

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def tagged(self, tag: str, factor: str | None = None) -> list[SpherePoint]:
        return [p for p in self.points if p.tag == tag and (factor is None or p.factor == factor)]

    def certified(self, factor: str, tag: str) -> bool:
        f = self.certificates.get(factor)
        if f is None:
            return False
        return all(_dot(f, p.coords) > 0 for p in self.tagged(tag, factor))

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "factors": {k: list(v) for k, v in self.factors.items()},
            "points": [{"coords": list(p.coords), "factor": p.factor, "tag": p.tag} for p in self.points],
            "certificates": {k: [str(x) for x in v] for k, v in self.certificates.items()},
        }

    @classmethod
    def from_json(cls, data) -> "SpherePointSet":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            labels=tuple(data["labels"]),
            factors={k: tuple(v) for k, v in data["factors"].items()},
            points=tuple(SpherePoint(tuple(_frac(x) for x in p["coords"]), p["factor"], p.get("tag", "D_Q"))
                         for p in data["points"]),
            certificates={k: tuple(_frac(x) for x in v) for k, v in data.get("certificates", {}).items()},
        )


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def product_point_set(factors: Sequence[SpherePointSet]) -> SpherePointSet:
    """Disjoint union of factor point sets inside the product sphere."""
    if not factors:
        raise ValueError("need at least one factor")
    labels: list[str] = []
    for f in factors:
        clash = set(labels) & set(f.labels)
        if clash:
            raise ValueError(f"overlapping coordinates {sorted(clash)}")
        names = set(f.factors)
        for g in factors:
            if g is not f and names & set(g.factors):
                raise ValueError("overlapping factor names")
        labels += f.labels
    dim = len(labels)
    out_factors, points, certs = {}, [], {}
    offset = 0
    for f in factors:
        pad = lambda v: (0,) * offset + tuple(v) + (0,) * (dim - offset - f.dimension)
        for name, idx in f.factors.items():
            out_factors[name] = tuple(offset + k for k in idx)
        points += [SpherePoint(pad(p.coords), p.factor, p.tag) for p in f.points]
        certs.update({name: pad(c) for name, c in f.certificates.items()})
        offset += f.dimension
    return SpherePointSet(tuple(labels), out_factors, tuple(points), certs)


def _same_ray(a: Sequence, b: Sequence) -> bool:
    return linalg.primitive(a) == linalg.primitive(b)


def invariant_discrete_character(points: SpherePointSet, action: Sequence[Sequence],
                                 factor: str | None = None, tag: str = "D_Q",
                                 max_orbit: int = 10_000) -> tuple[Fraction, ...]:
    """Orbit sum of a certified point under the action, as a primitive integer vector.

    ``action`` is the rational matrix of chi -> chi o phi.  The orbit must close
    exactly and every orbit member in the certified factor must be positive on
    that factor's functional; otherwise the sum could vanish.
    """
    if not points.points:
        raise OrbitSumError("empty point set")
    if factor is None:
        factor = next((p.factor for p in points.points if p.tag == tag), None)
        if factor is None:
            raise OrbitSumError(f"no point tagged {tag}")
    start = points.tagged(tag, factor)
    if not start:
        raise OrbitSumError(f"no point tagged {tag} in factor {factor!r}")
    cert = points.certificates.get(factor)
    if cert is None:
        raise OrbitSumError("orbit sum may vanish: no hemisphere certificate for the factor")
    A = [[_frac(x) for x in row] for row in action]
    members = points.tagged(tag)
    own = set(points.factors[factor])
    chi = tuple(Fraction(x) for x in start[0].coords)
    orbit = [chi]
    while True:
        nxt = tuple(linalg.matvec(A, orbit[-1]))
        if not any(_same_ray(nxt, p.coords) for p in members):
            raise OrbitSumError("action does not preserve the tagged point set")
        if nxt == chi:
            break
        if _same_ray(nxt, chi):
            raise OrbitSumError("orbit returns to the ray with a different scale")
        orbit.append(nxt)
        if len(orbit) > max_orbit:
            raise OrbitSumError("orbit did not close")
    for x in orbit:
        in_factor = tuple(c if k in own else 0 for k, c in enumerate(x))
        if any(in_factor) and _dot(cert, in_factor) <= 0:
            raise OrbitSumError("orbit sum may vanish: certificate fails on an orbit member")
    lam = tuple(sum(col) for col in zip(*orbit))
    if not any(lam):
        raise OrbitSumError("orbit sum may vanish")
    if tuple(linalg.matvec(A, lam)) != lam:
        raise OrbitSumError("orbit sum is not invariant")
    return linalg.primitive(lam)
