"""Finite descriptions of permutations of M_n = {1..n} x N.

A :class:`TailedPermutation` is given by a finite table below a threshold B
plus, on each ray j, a rule ``(j, s) -> (target_j, s + offsets_j[s % period_j])``
for every ``s >= B``.  This class is closed under composition and inverse and
contains the finitary permutations, the Houghton groups, their normalizers in
the full symmetric group and products of infinitely many bounded cycles laid
out periodically along a ray.

Composition follows the usual right-to-left convention: ``(f * g)(x) == f(g(x))``.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from math import gcd, lcm
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

INF = math.inf


class Point(NamedTuple):
    ray: int
    height: int

    def raised(self, delta: int) -> "Point":
        return Point(self.ray, self.height + delta)

    def __repr__(self) -> str:
        return f"({self.ray},{self.height})"


class NotATailedPermutation(ValueError):
    """Raised when data does not describe a bijection of M_n."""


class IncomparableError(ValueError):
    """Raised when an invariant is undefined for the given pair."""


@dataclass(frozen=True)
class Tail:
    target: int
    period: int
    offsets: tuple[int, ...]

    def offset(self, s: int) -> int:
        return self.offsets[s % self.period]


def _least_at_least(bound: int, residue: int, modulus: int) -> int:
    """Least s >= bound with s = residue (mod modulus)."""
    return bound + (residue - bound) % modulus


class TailedPermutation:
    """Eventually periodic permutation of M_n; immutable and hashable.

    Points below ``threshold`` missing from ``table`` follow the tail rule.
    The stored form is normalized (least periods, then least threshold), so
    ``==`` decides equality of the underlying maps.
    """

    __slots__ = ("n", "threshold", "table", "tails", "_hash")

    def __init__(self, n: int, threshold: int, table: Mapping[Point, Point],
                 tails: Sequence[Tail], *, _trusted: bool = False):
        if n < 1:
            raise NotATailedPermutation("need at least one ray")
        if len(tails) != n:
            raise NotATailedPermutation(f"expected {n} tails, got {len(tails)}")
        threshold = max(int(threshold), 1)
        for t in tails:
            if int(t.period) < 1 or len(t.offsets) != int(t.period):
                raise NotATailedPermutation("period must be >= 1 and match the offsets")
        tails = tuple(Tail(int(t.target), int(t.period), tuple(int(d) for d in t.offsets))
                      for t in tails)
        full: dict[Point, Point] = {}
        for j in range(1, n + 1):
            t = tails[j - 1]
            for s in range(1, threshold):
                full[Point(j, s)] = Point(t.target, s + t.offsets[s % t.period])
        for k, v in table.items():
            k, v = Point(*k), Point(*v)
            if not (1 <= k.ray <= n and 1 <= k.height < threshold):
                raise NotATailedPermutation(f"table key {k} outside the finite part")
            full[k] = v
        self.n = n
        self.threshold = threshold
        self.table = full
        self.tails = tails
        if not _trusted:
            self._validate()
        self._normalize()
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "TailedPermutation":
        return cls(n, 1, {}, [Tail(j, 1, (0,)) for j in range(1, n + 1)], _trusted=True)

    @classmethod
    def from_rule(cls, n: int, tails: Sequence[Tail],
                  exceptions: Mapping[Point, Point] = ()) -> "TailedPermutation":
        """Tail rule wherever it can hold, ``exceptions`` where given.

        Low points whose rule image would leave M_n or collide are matched to
        the remaining unreached points in sorted order.
        """
        exceptions = {Point(*k): Point(*v) for k, v in dict(exceptions).items()}
        tails = [Tail(int(t.target), int(t.period), tuple(int(d) for d in t.offsets))
                 for t in tails]
        low = max((k.height for k in exceptions), default=0) + 1
        for t in tails:
            if t.period < 1 or len(t.offsets) != t.period:
                raise NotATailedPermutation("period must be >= 1 and match the offsets")
            # the rule must land at height >= 1 from the threshold on
            low = max(low, 1 - min(t.offsets))
        holes = set()
        for j, t in enumerate(tails, start=1):
            p = t.period
            for r in range(p):
                start = _least_at_least(low, r, p) + t.offsets[r]
                r2 = (r + t.offsets[r]) % p
                holes.update(Point(t.target, h) for h in range(_least_at_least(1, r2, p), start, p))
        table = dict(exceptions)
        used = set(table.values())
        pending = []
        for j, t in enumerate(tails, start=1):
            for s in range(1, low):
                x = Point(j, s)
                if x in table:
                    continue
                y = Point(t.target, s + t.offset(s))
                if y in holes and y not in used:
                    table[x] = y
                    used.add(y)
                else:
                    pending.append(x)
        rest = sorted(holes - used)
        if len(rest) != len(pending):
            raise NotATailedPermutation("not a bijection: exceptions do not fit the tail rule")
        table.update(zip(pending, rest))
        return cls(n, low, table, tails)

    @classmethod
    def finitary(cls, n: int, mapping: Mapping[Point, Point]) -> "TailedPermutation":
        return cls.from_rule(n, [Tail(j, 1, (0,)) for j in range(1, n + 1)], mapping)

    @classmethod
    def transposition(cls, n: int, a: Point, b: Point) -> "TailedPermutation":
        a, b = Point(*a), Point(*b)
        if a == b:
            raise ValueError("transposition needs two distinct points")
        return cls.finitary(n, {a: b, b: a})

    @classmethod
    def cycle(cls, n: int, points: Sequence[Point]) -> "TailedPermutation":
        pts = [Point(*p) for p in points]
        if len(set(pts)) != len(pts):
            raise ValueError("cycle points must be distinct")
        return cls.finitary(n, {pts[i]: pts[(i + 1) % len(pts)] for i in range(len(pts))})

    # -- validation and normal form ------------------------------------------

    def _validate(self) -> None:
        n, B = self.n, self.threshold
        targets = [t.target for t in self.tails]
        if sorted(targets) != list(range(1, n + 1)):
            raise NotATailedPermutation(f"ray targets {targets} are not a permutation")
        holes: set[Point] = set()
        for t in self.tails:
            p = t.period
            images = sorted((r + t.offsets[r]) % p for r in range(p))
            if images != list(range(p)):
                raise NotATailedPermutation("tail is not eventually bijective")
            for r in range(p):
                start = _least_at_least(B, r, p) + t.offsets[r]
                if start < 1:
                    raise NotATailedPermutation("tail rule leaves M_n")
                r2 = (r + t.offsets[r]) % p
                for h in range(_least_at_least(1, r2, p), start, p):
                    holes.add(Point(t.target, h))
        values = list(self.table.values())
        for v in values:
            if not (1 <= v.ray <= n and v.height >= 1):
                raise NotATailedPermutation(f"table value {v} outside M_n")
        if len(set(values)) != len(values):
            raise NotATailedPermutation("not a bijection: table is not injective")
        if set(values) != holes:
            raise NotATailedPermutation("not a bijection: table does not fill the tail gaps")

    def _normalize(self) -> None:
        tails = []
        for t in self.tails:
            p = t.period
            for q in sorted(d for d in range(1, p + 1) if p % d == 0):
                if all(t.offsets[r] == t.offsets[r % q] for r in range(p)):
                    tails.append(Tail(t.target, q, t.offsets[:q]))
                    break
        self.tails = tuple(tails)
        B = self.threshold
        while B > 1:
            s = B - 1
            if all(self.table[Point(j, s)] == self._rule(j, s) for j in range(1, self.n + 1)):
                for j in range(1, self.n + 1):
                    del self.table[Point(j, s)]
                B -= 1
            else:
                break
        self.threshold = B

    def _rule(self, j: int, s: int) -> Point:
        t = self.tails[j - 1]
        return Point(t.target, s + t.offsets[s % t.period])

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x: Point) -> Point:
        if x.height < self.threshold:
            return self.table[x]
        return self._rule(x.ray, x.height)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TailedPermutation):
            return NotImplemented
        return (self.n == other.n and self.threshold == other.threshold
                and self.tails == other.tails and self.table == other.table)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.threshold, self.tails,
                               frozenset(self.table.items())))
        return self._hash

    def __repr__(self) -> str:
        moved = {k: v for k, v in self.table.items() if k != v}
        return (f"TailedPermutation(n={self.n}, threshold={self.threshold}, "
                f"moved={moved}, tails={list(self.tails)})")

    @property
    def ray_permutation(self) -> tuple[int, ...]:
        return tuple(t.target for t in self.tails)

    def is_finitary(self) -> bool:
        return all(t.target == j and t.period == 1 and t.offsets == (0,)
                   for j, t in enumerate(self.tails, start=1))

    def support(self) -> list[Point]:
        """Moved points; only meaningful for finitary elements."""
        if not self.is_finitary():
            raise ValueError("support of a non-finitary element is infinite")
        return sorted(k for k, v in self.table.items() if k != v)

    def max_offset(self) -> int:
        return max(abs(d) for t in self.tails for d in t.offsets)

    # -- group operations -------------------------------------------------------

    def __mul__(self, g: "TailedPermutation") -> "TailedPermutation":
        f = self
        if f.n != g.n:
            raise ValueError("rank mismatch")
        low = min(d for t in g.tails for d in t.offsets)
        B = max(g.threshold, f.threshold - low, 1)
        tails = []
        for j in range(1, g.n + 1):
            gt = g.tails[j - 1]
            ft = f.tails[gt.target - 1]
            P = lcm(gt.period, ft.period)
            offs = []
            for r in range(P):
                s = _least_at_least(B, r, P)
                offs.append(f(g(Point(j, s))).height - s)
            tails.append(Tail(ft.target, P, tuple(offs)))
        table = {Point(j, s): f(g(Point(j, s)))
                 for j in range(1, g.n + 1) for s in range(1, B)}
        return TailedPermutation(g.n, B, table, tails, _trusted=True)

    def inverse(self) -> "TailedPermutation":
        n, B = self.n, self.threshold
        inv_tails: list[Tail | None] = [None] * n
        top = 1
        for j, t in enumerate(self.tails, start=1):
            p = t.period
            e = [0] * p
            for r in range(p):
                e[(r + t.offsets[r]) % p] = -t.offsets[r]
                top = max(top, _least_at_least(B, r, p) + t.offsets[r])
            inv_tails[t.target - 1] = Tail(j, p, tuple(e))
        rev = {v: k for k, v in self.table.items()}
        table = {}
        for i in range(1, n + 1):
            for h in range(1, top):
                y = Point(i, h)
                if y in rev:
                    table[y] = rev[y]
                else:
                    it = inv_tails[i - 1]
                    table[y] = Point(it.target, h + it.offsets[h % it.period])
        return TailedPermutation(n, top, table, inv_tails, _trusted=True)

    def __pow__(self, m: int) -> "TailedPermutation":
        base = self if m >= 0 else self.inverse()
        m = abs(m)
        result = TailedPermutation.identity(self.n)
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def conjugate(self, z: "TailedPermutation") -> "TailedPermutation":
        """z * self * z^-1."""
        return z * self * z.inverse()

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "threshold": self.threshold,
            "table": [[list(k), list(v)] for k, v in sorted(self.table.items())],
            "tails": [{"target": t.target, "period": t.period, "offsets": list(t.offsets)}
                      for t in self.tails],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TailedPermutation":
        try:
            n = int(data["n"])
            tails = [Tail(int(t["target"]), int(t["period"]), tuple(int(d) for d in t["offsets"]))
                     for t in data["tails"]]
            table = {Point(*map(int, k)): Point(*map(int, v)) for k, v in data.get("table", [])}
            threshold = int(data.get("threshold", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise NotATailedPermutation(f"malformed permutation data: {exc}") from exc
        return cls(n, threshold, table, tails)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# cycle structure


@dataclass(frozen=True)
class InfiniteCycleDescriptor:
    """A Z-indexed cycle x with x(x_k) = x_{k+1}.

    ``middle`` holds x_0 .. x_{M-1}.  For k >= M the forward block repeats:
    x_{M + q*L + i} = fwd_block[i] raised by q*fwd_shift.  For k < 0 the
    backward block (x_{-Lb} .. x_{-1}) repeats while climbing by back_shift.
    The stored form is canonical: blocks are minimal and absorb as much as
    possible, and index 0 sits right after the backward block.
    """

    back_block: tuple[Point, ...]
    back_shift: int
    middle: tuple[Point, ...]
    fwd_block: tuple[Point, ...]
    fwd_shift: int

    def at(self, k: int) -> Point:
        M = len(self.middle)
        if 0 <= k < M:
            return self.middle[k]
        if k >= M:
            q, i = divmod(k - M, len(self.fwd_block))
            return self.fwd_block[i].raised(q * self.fwd_shift)
        Lb = len(self.back_block)
        q, i = divmod(k + Lb, Lb)
        return self.back_block[i].raised(-q * self.back_shift)

    def index_of(self, x: Point) -> int | None:
        for k, p in enumerate(self.middle):
            if p == x:
                return k
        M = len(self.middle)
        for i, b in enumerate(self.fwd_block):
            dh = x.height - b.height
            if b.ray == x.ray and dh >= 0 and dh % self.fwd_shift == 0:
                return M + i + (dh // self.fwd_shift) * len(self.fwd_block)
        Lb = len(self.back_block)
        for i, b in enumerate(self.back_block):
            dh = x.height - b.height
            if b.ray == x.ray and dh >= 0 and dh % self.back_shift == 0:
                return -Lb + i - (dh // self.back_shift) * Lb
        return None

    def __contains__(self, x: Point) -> bool:
        return self.index_of(x) is not None

    def image(self, x: Point) -> Point | None:
        k = self.index_of(x)
        return None if k is None else self.at(k + 1)

    def window(self, lo: int, hi: int) -> list[Point]:
        return [self.at(k) for k in range(lo, hi)]

    def _progressions(self) -> Iterator[tuple[Point, int]]:
        for b in self.fwd_block:
            yield b, self.fwd_shift
        for b in self.back_block:
            yield b, self.back_shift

    def meets(self, other: "InfiniteCycleDescriptor") -> bool:
        if any(p in other for p in self.middle) or any(p in self for p in other.middle):
            return True
        for (a, da), (b, db) in itertools.product(self._progressions(), other._progressions()):
            if a.ray == b.ray and (a.height - b.height) % gcd(da, db) == 0:
                return True
        return False

    def reindexed(self, origin: int) -> Callable[[int], Point]:
        return lambda k: self.at(k + origin)

    def to_json(self) -> dict:
        return {
            "backward": {"block": [list(p) for p in self.back_block], "shift": self.back_shift},
            "middle": [list(p) for p in self.middle],
            "forward": {"block": [list(p) for p in self.fwd_block], "shift": self.fwd_shift},
        }


def _pattern_holds(at: Callable[[int], Point], k: int, step: int, shift: int) -> bool:
    return at(k + step) == at(k).raised(shift)


def _minimal_block(at: Callable[[int], Point], k0: int, L: int, shift: int,
                   direction: int) -> tuple[int, int]:
    """Shortest period of an eventually block-periodic sequence already known
    to satisfy x_{k + d*L} = x_k + shift for all k beyond k0 (d = direction)."""
    for l in range(1, L + 1):
        if L % l or (shift * l) % L:
            continue
        delta = shift * l // L
        if all(_pattern_holds(at, k0 + direction * i, direction * l, delta) for i in range(L)):
            return l, delta
    return L, shift


def build_descriptor(at: Callable[[int], Point], lo: int, hi: int,
                     back: tuple[int, int], fwd: tuple[int, int]) -> InfiniteCycleDescriptor:
    """Canonical descriptor of the cycle k -> at(k).

    Requires x_{k-Lb} = x_k + back_shift for all k <= lo and
    x_{k+Lf} = x_k + fwd_shift for all k >= hi, where back=(Lb, back_shift)
    and fwd=(Lf, fwd_shift); both shifts positive.
    """
    Lf, df = _minimal_block(at, hi, fwd[0], fwd[1], +1)
    Lb, db = _minimal_block(at, lo, back[0], back[1], -1)
    kf = hi
    while _pattern_holds(at, kf - 1, Lf, df):
        kf -= 1
    kb = lo
    while kb + 1 < kf and _pattern_holds(at, kb + 1, -Lb, db):
        kb += 1
    kb = min(kb, kf - 1)
    origin = kb + 1
    return InfiniteCycleDescriptor(
        back_block=tuple(at(k) for k in range(kb - Lb + 1, kb + 1)),
        back_shift=db,
        middle=tuple(at(k) for k in range(origin, kf)),
        fwd_block=tuple(at(k) for k in range(kf, kf + Lf)),
        fwd_shift=df,
    )


@dataclass(frozen=True)
class PeriodicFamily:
    """Infinitely many disjoint finite cycles: template raised by q*shift, q >= 0."""

    template: tuple[Point, ...]
    shift: int

    @property
    def length(self) -> int:
        return len(self.template)

    def member(self, q: int) -> tuple[Point, ...]:
        return tuple(p.raised(q * self.shift) for p in self.template)

    def locate(self, x: Point) -> tuple[int, int] | None:
        for i, p in enumerate(self.template):
            dh = x.height - p.height
            if p.ray == x.ray and dh >= 0 and dh % self.shift == 0:
                return dh // self.shift, i
        return None

    def image(self, x: Point) -> Point | None:
        loc = self.locate(x)
        if loc is None:
            return None
        q, i = loc
        return self.template[(i + 1) % self.length].raised(q * self.shift)


def _canonical_cycle(points: Sequence[Point]) -> tuple[Point, ...]:
    i = min(range(len(points)), key=lambda k: points[k])
    return tuple(points[i:]) + tuple(points[:i])


@dataclass(frozen=True)
class CycleStructure:
    finite_cycles: tuple[tuple[Point, ...], ...]
    infinite_cycles: tuple[InfiniteCycleDescriptor, ...]
    periodic_families: tuple[PeriodicFamily, ...]

    def image(self, x: Point) -> Point:
        for c in self.infinite_cycles:
            y = c.image(x)
            if y is not None:
                return y
        for fam in self.periodic_families:
            y = fam.image(x)
            if y is not None:
                return y
        for cyc in self.finite_cycles:
            if x in cyc:
                return cyc[(cyc.index(x) + 1) % len(cyc)]
        return x

    def covers(self, x: Point) -> int:
        """How many pieces of the structure contain x (0 or 1 when well formed)."""
        return (sum(x in c for c in self.infinite_cycles)
                + sum(fam.locate(x) is not None for fam in self.periodic_families)
                + sum(x in cyc for cyc in self.finite_cycles))

    def is_empty(self) -> bool:
        return not (self.finite_cycles or self.infinite_cycles or self.periodic_families)


def _ray_cycles(rho: Sequence[int]) -> list[list[int]]:
    seen, out = set(), []
    for j in range(1, len(rho) + 1):
        if j in seen:
            continue
        cyc = [j]
        seen.add(j)
        k = rho[j - 1]
        while k != j:
            cyc.append(k)
            seen.add(k)
            k = rho[k - 1]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class _Lane:
    ray: int
    residue: int
    modulus: int
    steps: int
    shift: int


def _lanes(f: TailedPermutation) -> tuple[list[_Lane], dict[int, int]]:
    """Far-out dynamics: one lane per (ray cycle, residue cycle of the return map)."""
    lanes = []
    modulus_of_ray = {}
    for rays in _ray_cycles(f.ray_permutation):
        P = lcm(*(f.tails[j - 1].period for j in rays))
        for j in rays:
            modulus_of_ray[j] = P
        j1, m = rays[0], len(rays)

        def ret(r: int) -> int:
            total, j, s = 0, j1, r
            for _ in range(m):
                d = f.tails[j - 1].offset(s)
                total += d
                s += d
                j = f.tails[j - 1].target
            return total

        D = {r: ret(r) for r in range(P)}
        seen = set()
        for r in range(P):
            if r in seen:
                continue
            cyc, shift, x = [], 0, r
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                shift += D[x]
                x = (x + D[x]) % P
            lanes.append(_Lane(j1, r, P, m * len(cyc), shift))
    return lanes, modulus_of_ray


def _lane_step(f: TailedPermutation, modulus_of_ray: Mapping[int, int],
               x: Point) -> tuple[int, int, list[Point]] | None:
    """Follow f from x under the tail rule until the first return to the same
    ray and residue.  Returns (steps, height gain, visited) or None if the
    orbit drops below the threshold first."""
    P = modulus_of_ray[x.ray]
    y, path = x, []
    while True:
        if y.height < f.threshold:
            return None
        path.append(y)
        y = f._rule(y.ray, y.height)
        if y.ray == x.ray and (y.height - x.height) % P == 0:
            return len(path), y.height - x.height, path


def cycle_decomposition(f: TailedPermutation, max_steps: int = 1_000_000) -> CycleStructure:
    """Disjoint cycle decomposition; fixed points are left implicit."""
    finv = f.inverse()
    lanes, mod_f = _lanes(f)
    _, mod_inv = _lanes(finv)
    start = max(f.threshold, finv.threshold)

    infinite: list[InfiniteCycleDescriptor] = []
    families: list[PeriodicFamily] = []
    far = start
    for lane in lanes:
        if lane.shift == 0:
            if lane.steps == 1:
                continue
            s = _least_at_least(1, lane.residue, lane.modulus)
            while True:
                step = _lane_step(f, mod_f, Point(lane.ray, s))
                if step is not None:
                    break
                s += lane.modulus
            families.append(PeriodicFamily(tuple(step[2]), lane.modulus))
            far = max(far, s + lane.modulus)
            continue
        if lane.shift < 0:
            continue
        s = _least_at_least(start, lane.residue, lane.modulus)
        while _lane_step(f, mod_f, Point(lane.ray, s)) is None:
            s += lane.modulus
        for i in range(lane.shift // lane.modulus):
            anchor = Point(lane.ray, s + i * lane.modulus)
            far = max(far, anchor.height + lane.shift)
            seq = [anchor]
            while True:
                back = _lane_step(finv, mod_inv, seq[-1])
                if back is not None and back[1] > 0:
                    break
                seq.append(finv(seq[-1]))
                if len(seq) > max_steps:
                    raise RuntimeError("backward orbit did not settle")
            far = max(far, seq[-1].height + back[1])
            seq.reverse()
            lo = 0
            hi = len(seq) - 1
            known = {k: p for k, p in enumerate(seq)}

            def at(k: int, known=known, hi=hi) -> Point:
                if k in known:
                    return known[k]
                if k > hi:
                    p = at(k - 1)
                    known[k] = f(p)
                else:
                    p = at(k + 1)
                    known[k] = finv(p)
                return known[k]

            # prime the cache in order so recursion stays shallow
            for k in range(hi, hi + 4 * lane.steps + 2):
                at(k)
            for k in range(lo, lo - 4 * back[0] - 2, -1):
                at(k)
            desc = build_descriptor(at, lo, hi, (back[0], back[1]), (lane.steps, lane.shift))
            infinite.append(desc)

    partial = CycleStructure((), tuple(infinite), tuple(families))
    far += f.max_offset() * max((ln.steps for ln in lanes), default=1) + 1
    finite: list[tuple[Point, ...]] = []
    done: set[Point] = set()
    for j in range(1, f.n + 1):
        for h in range(1, far):
            x = Point(j, h)
            if x in done or f(x) == x or partial.covers(x):
                continue
            cyc = [x]
            y = f(x)
            while y != x:
                cyc.append(y)
                y = f(y)
                if len(cyc) > max_steps:
                    raise RuntimeError(f"orbit of {x} is not a finite cycle")
            done.update(cyc)
            finite.append(_canonical_cycle(cyc))
    infinite.sort(key=lambda c: (c.middle, c.fwd_block, c.back_block))
    families.sort(key=lambda fam: fam.template)
    finite.sort()
    return CycleStructure(tuple(finite), tuple(infinite), tuple(families))


def cycle_type(f: TailedPermutation | CycleStructure) -> dict[float, float]:
    """Counts of cycles by length (lengths >= 2 and ``INF``); absent lengths are 0."""
    cs = f if isinstance(f, CycleStructure) else cycle_decomposition(f)
    out: dict[float, float] = {}
    for c in cs.finite_cycles:
        out[len(c)] = out.get(len(c), 0) + 1
    for fam in cs.periodic_families:
        out[fam.length] = INF
    if cs.infinite_cycles:
        out[INF] = len(cs.infinite_cycles)
    return out


# ---------------------------------------------------------------------------
# splicing with a transposition


def splice_same_cycle(x: InfiniteCycleDescriptor, k: int, origin: int = 0
                      ) -> tuple[InfiniteCycleDescriptor, tuple[Point, ...]]:
    """(a,b) x for a = x_origin, b = x_{origin+k}: an infinite cycle u and the
    finite cycle v = (x_origin, ..., x_{origin+k-1})."""
    if k <= 0:
        raise ValueError("k must be positive")
    base = x.reindexed(origin)

    def u_at(j: int) -> Point:
        return base(j) if j < 0 else base(j + k)

    M = len(x.middle)
    lo = min(-1, -origin - 1)
    hi = max(0, M - origin - k)
    u = build_descriptor(u_at, lo, hi, (len(x.back_block), x.back_shift),
                         (len(x.fwd_block), x.fwd_shift))
    return u, tuple(base(i) for i in range(k))


def splice_two_cycles(x: InfiniteCycleDescriptor, y: InfiniteCycleDescriptor,
                      x_origin: int = 0, y_origin: int = 0
                      ) -> tuple[InfiniteCycleDescriptor, InfiniteCycleDescriptor]:
    """(a,b) x y for a = x_0, b = y_0 with x, y disjoint: two crossed infinite cycles."""
    if x.meets(y):
        raise ValueError("cycles are not disjoint")
    xa, ya = x.reindexed(x_origin), y.reindexed(y_origin)

    def u_at(j: int) -> Point:
        return xa(j) if j < 0 else ya(j)

    def v_at(j: int) -> Point:
        return ya(j) if j < 0 else xa(j)

    u = build_descriptor(u_at, min(-1, -x_origin - 1), max(0, len(y.middle) - y_origin),
                         (len(x.back_block), x.back_shift), (len(y.fwd_block), y.fwd_shift))
    v = build_descriptor(v_at, min(-1, -y_origin - 1), max(0, len(x.middle) - x_origin),
                         (len(y.back_block), y.back_shift), (len(x.fwd_block), x.fwd_shift))
    return u, v


# ---------------------------------------------------------------------------
# finitary-conjugacy invariants


def _fixed_below(f: TailedPermutation, bound: int) -> set[Point]:
    return {Point(j, s) for j in range(1, f.n + 1) for s in range(1, bound)
            if f(Point(j, s)) == Point(j, s)}


def relative_fixed_index(g: TailedPermutation, f: TailedPermutation) -> int:
    """|Fix(g) - Fix(f)| - |Fix(f) - Fix(g)|; needs a finite symmetric difference."""
    if g.n != f.n:
        raise ValueError("rank mismatch")
    H = max(g.threshold, f.threshold)
    for j in range(1, f.n + 1):
        P = lcm(g.tails[j - 1].period, f.tails[j - 1].period)
        for s in range(H, H + P):
            x = Point(j, s)
            if (g(x) == x) != (f(x) == x):
                raise IncomparableError("fixed-point sets differ on infinitely many points")
    fg, ff = _fixed_below(g, H), _fixed_below(f, H)
    return len(fg - ff) - len(ff - fg)


def _alignment(c: InfiniteCycleDescriptor, ref: InfiniteCycleDescriptor,
               forward: bool) -> int:
    if forward:
        if (len(c.fwd_block), c.fwd_shift) != (len(ref.fwd_block), ref.fwd_shift):
            raise IncomparableError("forward tails have different shapes")
        L = len(c.fwd_block)
        K = len(c.middle)
    else:
        if (len(c.back_block), c.back_shift) != (len(ref.back_block), ref.back_shift):
            raise IncomparableError("backward tails have different shapes")
        L = len(c.back_block)
        K = -L
    step = 1 if forward else -1
    heights = [p.height for d in (c, ref)
               for p in d.middle + d.fwd_block + d.back_block]
    # walk until c is above everything listed in either descriptor
    for _ in range(len(ref.middle) + len(c.middle) + max(heights) + L + 4):
        idx = ref.index_of(c.at(K))
        inside = idx is not None and (idx >= len(ref.middle) if forward else idx < 0)
        if inside:
            beta = idx - K
            if all(c.at(K + step * i) == ref.at(K + step * i + beta) for i in range(L)):
                return beta
            raise IncomparableError("tails do not agree cofinitely")
        K += step * L
    raise IncomparableError("tails are disjoint")


def cofinite_shift_index(c: InfiniteCycleDescriptor, ref: InfiniteCycleDescriptor) -> int:
    """Shift of the forward alignment of ``c`` against ``ref`` relative to the
    backward alignment; 0 for equal cycles."""
    return _alignment(c, ref, True) - _alignment(c, ref, False)


def comparable_cycle(f: TailedPermutation | CycleStructure,
                     ref: InfiniteCycleDescriptor) -> InfiniteCycleDescriptor:
    """The infinite cycle of ``f`` that agrees with ``ref`` cofinitely in both directions."""
    cs = f if isinstance(f, CycleStructure) else cycle_decomposition(f)
    for c in cs.infinite_cycles:
        try:
            cofinite_shift_index(c, ref)
        except IncomparableError:
            continue
        return c
    raise IncomparableError("no infinite cycle aligns with the reference")


def finitary_conjugate(f: TailedPermutation, z: TailedPermutation) -> TailedPermutation:
    if not z.is_finitary():
        raise ValueError("conjugator must be finitary")
    return f.conjugate(z)


@dataclass(frozen=True)
class Witness:
    tau: TailedPermutation
    certificate: int
    kind: str


def witness_family(f: TailedPermutation, K: int) -> list[Witness]:
    """K finitary tau_j with the tau_j f pairwise non-conjugate under finitary z.

    Each certificate is a finitary-conjugacy invariant of tau_j f, and the
    certificates are pairwise distinct.
    """
    if K < 1:
        raise ValueError("K must be positive")
    n = f.n
    cs = cycle_decomposition(f)
    out: list[Witness] = []
    if cs.infinite_cycles:
        u = cs.infinite_cycles[0]
        for alpha in range(1, K + 1):
            tau = TailedPermutation.transposition(n, u.at(0), u.at(alpha))
            c = comparable_cycle(tau * f, u)
            out.append(Witness(tau, cofinite_shift_index(c, u), "shift"))
        return out
    long = [fam for fam in cs.periodic_families if fam.length >= 3]
    if long or cs.periodic_families:
        fam = long[0] if long else cs.periodic_families[0]
        tau = TailedPermutation.identity(n)
        for k in range(K):
            cyc = fam.member(k)
            if long:
                step = TailedPermutation.transposition(n, cyc[0], cyc[1])
            else:
                step = TailedPermutation.cycle(n, cyc)
            tau = tau * step
            out.append(Witness(tau, relative_fixed_index(tau * f, f), "fixed"))
        return out
    # finitary f: attach cycles of growing length on fresh points
    top = max(f.threshold, max((k.height for k, v in f.table.items() if k != v), default=0) + 1)
    for k in range(1, K + 1):
        tau = TailedPermutation.cycle(n, [Point(1, top + i) for i in range(k + 1)])
        out.append(Witness(tau, relative_fixed_index(tau * f, f), "fixed"))
    return out


def bounded_conjugator_search(g: TailedPermutation, h: TailedPermutation,
                              candidates: Sequence[Point], max_support: int = 6
                              ) -> TailedPermutation | None:
    """Exhaustive search for finitary z supported in ``candidates`` with z g z^-1 = h."""
    pts = list(candidates)[:max_support]
    for perm in itertools.permutations(pts):
        z = TailedPermutation.finitary(g.n, dict(zip(pts, perm)))
        if g.conjugate(z) == h:
            return z
    return None


# ---------------------------------------------------------------------------
# recovering a conjugator from its action on transpositions


def enumerate_points(n: int) -> Iterator[Point]:
    """M_n listed height by height: (1,1), ..., (n,1), (1,2), ..."""
    for s in itertools.count(1):
        for j in range(1, n + 1):
            yield Point(j, s)


def conjugation_oracle(g: TailedPermutation) -> Callable[[Point, Point], TailedPermutation]:
    ginv = g.inverse()
    return lambda a, b: g * TailedPermutation.transposition(g.n, a, b) * ginv


def _as_transposition(t: TailedPermutation) -> frozenset[Point]:
    if not t.is_finitary():
        raise ValueError("not induced by conjugation: image is not finitary")
    moved = t.support()
    if len(moved) != 2 or t(moved[0]) != moved[1]:
        raise ValueError("not induced by conjugation: image is not a transposition")
    return frozenset(moved)


def recover_conjugator(theta: Callable[[Point, Point], TailedPermutation], n: int,
                       window: int) -> dict[Point, Point]:
    """The map f with theta = iota_f on the first ``window`` points: f(k) is the
    point shared by theta((k, k+1)) and theta((k, k+2))."""
    pts = list(itertools.islice(enumerate_points(n), window + 2))
    out = {}
    for k in range(window):
        s1 = _as_transposition(theta(pts[k], pts[k + 1]))
        s2 = _as_transposition(theta(pts[k], pts[k + 2]))
        common = s1 & s2
        if len(common) != 1:
            raise ValueError("not induced by conjugation: images do not share one point")
        out[pts[k]] = next(iter(common))
    return out


# ---------------------------------------------------------------------------
# random elements


def shift_pair(n: int, up: int, down: int) -> TailedPermutation:
    """Ray ``up`` climbs by one, ray ``down`` descends and feeds (up, 1)."""
    tails = [Tail(j, 1, (0,)) for j in range(1, n + 1)]
    tails[up - 1] = Tail(up, 1, (1,))
    tails[down - 1] = Tail(down, 1, (-1,))
    return TailedPermutation(n, 2, {Point(down, 1): Point(up, 1)}, tails)


def ray_swap(n: int, i: int, j: int) -> TailedPermutation:
    tails = [Tail(k, 1, (0,)) for k in range(1, n + 1)]
    tails[i - 1] = Tail(j, 1, (0,))
    tails[j - 1] = Tail(i, 1, (0,))
    return TailedPermutation(n, 1, {}, tails)


def block_cycles(n: int, ray: int, length: int) -> TailedPermutation:
    """Infinitely many consecutive length-cycles ((ray,1) .. (ray,length)) (...) on one ray."""
    tails = [Tail(k, 1, (0,)) for k in range(1, n + 1)]
    offs = [1] * length
    offs[0] = -(length - 1)  # heights = 0 mod length close their block
    tails[ray - 1] = Tail(ray, length, tuple(offs))
    return TailedPermutation(n, 1, {}, tails)


def random_finitary(rng: random.Random, n: int, points: int = 4,
                    height: int = 8) -> TailedPermutation:
    pts = list({Point(rng.randint(1, n), rng.randint(1, height)) for _ in range(points)})
    img = pts[:]
    rng.shuffle(img)
    return TailedPermutation.finitary(n, dict(zip(pts, img)))


def random_element(rng: random.Random, n: int, length: int = 5, *, height: int = 8,
                   kinds: Sequence[str] = ("finitary", "shift", "swap", "blocks")
                   ) -> TailedPermutation:
    """Random word in simple generators of the tailed class."""
    f = TailedPermutation.identity(n)
    for _ in range(length):
        kind = rng.choice(list(kinds))
        if kind == "shift" and n >= 2:
            up, down = rng.sample(range(1, n + 1), 2)
            g = shift_pair(n, up, down) ** rng.choice((1, -1))
        elif kind == "swap" and n >= 2:
            g = ray_swap(n, *rng.sample(range(1, n + 1), 2))
        elif kind == "blocks":
            g = block_cycles(n, rng.randint(1, n), rng.choice((2, 3)))
        else:
            g = random_finitary(rng, n, rng.randint(2, 5), height)
        f = f * g
    return f
