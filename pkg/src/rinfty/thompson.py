"""Thompson's group T as dyadic PL homeomorphisms of the circle [0,1]/{0,1}.

An element is stored through a lift F: [0,1] -> R with F(0) in [0,1),
F(1) = F(0) + 1, increasing and affine between consecutive breakpoints.
Breakpoints always include 0 so the lift is pinned down.
"""
from __future__ import annotations

import bisect
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Iterable, Sequence


class NotInT(ValueError):
    """Data does not describe an element of T."""


def _is_pow2(q: Fraction) -> bool:
    if q <= 0:
        return False
    n, d = q.numerator, q.denominator
    return (n & (n - 1)) == 0 and (d & (d - 1)) == 0


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@total_ordering
class Dyadic:
    """numerator / 2**exponent in lowest terms."""

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator, exponent = numerator << -exponent, 0
        while exponent and numerator % 2 == 0:
            numerator //= 2
            exponent -= 1
        self.numerator = numerator
        self.exponent = exponent

    @classmethod
    def of(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, str):
            value = parse_dyadic(value)
        q = Fraction(value)
        if not _is_dyadic(q):
            raise NotInT(f"{value} is not a dyadic rational")
        return cls(q.numerator, q.denominator.bit_length() - 1)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __add__(self, other):
        return Dyadic.of(self.fraction + Dyadic.of(other).fraction)

    def __sub__(self, other):
        return Dyadic.of(self.fraction - Dyadic.of(other).fraction)

    def __mul__(self, other):
        return Dyadic.of(self.fraction * Dyadic.of(other).fraction)

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __eq__(self, other):
        try:
            return self.fraction == Fraction(other.fraction if isinstance(other, Dyadic) else other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.fraction < (other.fraction if isinstance(other, Dyadic) else Fraction(other))

    def __hash__(self):
        return hash(self.fraction)

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"

    __repr__ = __str__


def parse_dyadic(text: str) -> Fraction:
    """Accept "p/2^k", "p/q", "2^e" or a plain integer."""
    t = text.strip().replace(" ", "")
    if "/" in t:
        num, den = t.split("/", 1)
        return Fraction(int(num)) / parse_dyadic(den)
    if t.startswith("2^"):
        e = int(t[2:].strip("()"))
        return Fraction(2) ** e
    return Fraction(t)


def _slope_str(s: Fraction) -> str:
    e = s.numerator.bit_length() - 1 if s >= 1 else -(s.denominator.bit_length() - 1)
    return f"2^{e}"


@dataclass(frozen=True)
class Arc:
    """Open arc from start to end, counterclockwise (wrapping past 0 if start >= end)."""

    start: Fraction
    end: Fraction
    full: bool = False

    def wraps(self) -> bool:
        return not self.full and self.start >= self.end

    def __contains__(self, x) -> bool:
        x = Fraction(x) % 1
        if self.full:
            return True
        if self.wraps():
            return x > self.start or x < self.end
        return self.start < x < self.end

    def image(self, fn: Callable[[Fraction], Fraction]) -> "Arc":
        return Arc(fn(self.start), fn(self.end), self.full)

    def __str__(self):
        if self.full:
            return "S^1"
        return f"({Dyadic.of(self.start)}, {Dyadic.of(self.end)})"


class PLCircleMap:
    __slots__ = ("points", "lift_values", "slopes", "_hash")

    def __init__(self, points: Sequence[Fraction], lift_values: Sequence[Fraction],
                 slopes: Sequence[Fraction], *, _checked: bool = False):
        self.points = tuple(points)
        self.lift_values = tuple(lift_values)
        self.slopes = tuple(slopes)
        if not _checked:
            self._check()
        self._hash = None

    # -- construction ------------------------------------------------------------

    def _check(self) -> None:
        pts, vals, sl = self.points, self.lift_values, self.slopes
        if not pts or pts[0] != 0 or len(vals) != len(pts) or len(sl) != len(pts):
            raise NotInT("malformed breakpoint data")
        if any(b <= a for a, b in zip(pts, pts[1:])) or pts[-1] >= 1:
            raise NotInT("breakpoints must increase inside [0,1)")
        for q in pts + vals:
            if not _is_dyadic(q):
                raise NotInT(f"non-dyadic breakpoint {q}")
        for s in sl:
            if not _is_pow2(s):
                raise NotInT(f"slope {s} is not a power of 2")
        if not 0 <= vals[0] < 1:
            raise NotInT("lift must start in [0,1)")
        ends = list(pts[1:]) + [Fraction(1)]
        for i in range(len(pts)):
            nxt = vals[i + 1] if i + 1 < len(pts) else vals[0] + 1
            if vals[i] + sl[i] * (ends[i] - pts[i]) != nxt:
                raise NotInT("segments do not join up continuously")

    @classmethod
    def validate(cls, breakpoints: Sequence, values: Sequence, slopes: Sequence) -> "PLCircleMap":
        """Build from cyclic breakpoint data: x_i -> y_i with slope s_i until x_(i+1).

        Breakpoints may start anywhere on the circle; values are images mod 1.
        Empty lists with a single slope 1 mean the identity.
        """
        xs = [Fraction(parse_dyadic(b) if isinstance(b, str) else b) for b in breakpoints]
        ys = [Fraction(parse_dyadic(v) if isinstance(v, str) else v) for v in values]
        ss = [Fraction(parse_dyadic(s) if isinstance(s, str) else s) for s in slopes]
        for q in xs + ys:
            if not _is_dyadic(q):
                raise NotInT(f"non-dyadic breakpoint {q}")
        for s in ss:
            if not _is_pow2(s):
                raise NotInT(f"slope {s} is not a power of 2")
        if not xs:
            if ss and ss != [1]:
                raise NotInT("a map without breakpoints has slope 1")
            return identity()
        if len(ys) != len(xs) or len(ss) != len(xs):
            raise NotInT("breakpoints, values and slopes must have equal length")
        if any(not 0 <= x < 1 for x in xs):
            raise NotInT("breakpoints must lie in [0,1)")
        m = len(xs)
        r = min(range(m), key=lambda i: xs[i])
        order = [(r + i) % m for i in range(m)]
        xs = [xs[i] for i in order]
        ys = [ys[i] % 1 for i in order]
        ss = [ss[i] for i in order]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise NotInT("breakpoints are not cyclically ordered")
        lengths = [b - a for a, b in zip(xs, xs[1:] + [xs[0] + 1])]
        if sum(s * l for s, l in zip(ss, lengths)) != 1:
            raise NotInT("map is not monotone of degree one")
        lift = [ys[0]]
        for i in range(m - 1):
            lift.append(lift[-1] + ss[i] * lengths[i])
            if lift[-1] % 1 != ys[i + 1]:
                raise NotInT("segments do not join up continuously")
        if xs[0] != 0:
            # pin the lift at 0, inside the last segment (which wraps)
            s = ss[-1]
            v0 = lift[-1] + s * (1 - xs[-1])
            shift = math.floor(v0)
            pts = [Fraction(0)] + xs
            vals = [v0 - shift] + [v + 1 - shift for v in lift]
            sl = [s] + ss
        else:
            shift = math.floor(lift[0])
            pts, vals, sl = xs, [v - shift for v in lift], ss
        f = cls(pts, vals, sl)
        return f._canonical()

    def _canonical(self) -> "PLCircleMap":
        pts, vals, sl = [self.points[0]], [self.lift_values[0]], [self.slopes[0]]
        for p, v, s in zip(self.points[1:], self.lift_values[1:], self.slopes[1:]):
            if s == sl[-1]:
                continue
            pts.append(p)
            vals.append(v)
            sl.append(s)
        return PLCircleMap(pts, vals, sl, _checked=True)

    @classmethod
    def _from_lift(cls, points: Iterable[Fraction], lift: Callable[[Fraction], Fraction]) -> "PLCircleMap":
        """Sample a lift that is affine between consecutive sorted points."""
        pts = sorted({Fraction(p) % 1 for p in points} | {Fraction(0)})
        v0 = lift(Fraction(0))
        shift = math.floor(v0)
        vals = [lift(p) - shift for p in pts]
        ends = pts[1:] + [Fraction(1)]
        nxt = vals[1:] + [vals[0] + 1]
        slopes = [(b - a) / (e - p) for a, b, p, e in zip(vals, nxt, pts, ends)]
        return cls(pts, vals, slopes)._canonical()

    # -- evaluation ----------------------------------------------------------------

    def _segment(self, x: Fraction) -> int:
        return bisect.bisect_right(self.points, x) - 1

    def lift(self, x) -> Fraction:
        """Continuous lift on all of R: F(x + k) = F(x) + k."""
        x = Fraction(x)
        k = math.floor(x)
        r = x - k
        i = self._segment(r)
        return self.lift_values[i] + self.slopes[i] * (r - self.points[i]) + k

    def __call__(self, x) -> Fraction:
        return self.lift(Fraction(x) % 1) % 1

    def lift_inverse(self, y) -> Fraction:
        y = Fraction(y)
        k = math.floor(y - self.lift_values[0])
        r = y - k
        i = bisect.bisect_right(self.lift_values, r) - 1
        return self.points[i] + (r - self.lift_values[i]) / self.slopes[i] + k

    def slope_at(self, x) -> Fraction:
        """Right derivative at x."""
        return self.slopes[self._segment(Fraction(x) % 1)]

    # -- group structure --------------------------------------------------------------

    def __mul__(self, other: "PLCircleMap") -> "PLCircleMap":
        """(self * other)(x) = self(other(x))."""
        pts = list(other.points) + [other.lift_inverse(p) for p in self.points] + \
            [other.lift_inverse(p + 1) for p in self.points]
        return PLCircleMap._from_lift([p for p in pts], lambda x: self.lift(other.lift(x)))

    def inverse(self) -> "PLCircleMap":
        pts = [v % 1 for v in self.lift_values]
        return PLCircleMap._from_lift(pts, self.lift_inverse)

    def __pow__(self, m: int) -> "PLCircleMap":
        if m < 0:
            return self.inverse() ** (-m)
        out, base = identity(), self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def conjugate(self, z: "PLCircleMap") -> "PLCircleMap":
        return z * self * z.inverse()

    def __eq__(self, other):
        return (isinstance(other, PLCircleMap) and self.points == other.points
                and self.lift_values == other.lift_values and self.slopes == other.slopes)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.points, self.lift_values, self.slopes))
        return self._hash

    def is_identity(self) -> bool:
        return self.points == (0,) and self.lift_values == (0,) and self.slopes == (1,)

    def in_F(self) -> bool:
        return self.lift_values[0] == 0

    def breakpoints(self) -> list[Fraction]:
        """Points where the slope actually changes, 0 included when it does."""
        out = list(self.points[1:])
        if self.slopes[0] != self.slopes[-1]:
            out.insert(0, self.points[0])
        return out

    # -- support ----------------------------------------------------------------------

    def fixed_components(self) -> list[tuple[Fraction, Fraction]]:
        """Fixed set as sorted closed intervals [a, b] in [0, 1] (a == b for points)."""
        comps: list[tuple[Fraction, Fraction]] = []
        ends = list(self.points[1:]) + [Fraction(1)]
        for p, q, v, s in zip(self.points, ends, self.lift_values, self.slopes):
            for c in (0, 1):
                if s == 1:
                    if v - p == c:
                        comps.append((p, q))
                    continue
                x = (c - v + s * p) / (s - 1)
                if p <= x <= q:
                    comps.append((x, x))
        comps.sort()
        merged: list[list[Fraction]] = []
        for a, b in comps:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        out = [(a, b) for a, b in merged]
        # 1 and 0 are the same point
        if out and out[-1][1] == 1:
            if out[-1][0] == 1:
                out.pop()
                if not out or out[0][0] != 0:
                    out.insert(0, (Fraction(0), Fraction(0)))
        return out

    def has_fixed_point(self) -> bool:
        return bool(self.fixed_components())

    def support_components(self) -> list[Arc]:
        fixed = self.fixed_components()
        if not fixed:
            return [] if self.is_identity() else [Arc(Fraction(0), Fraction(0), full=True)]
        arcs = []
        for (a0, b0), (a1, b1) in zip(fixed, fixed[1:]):
            if b0 < a1:
                arcs.append(Arc(b0, a1))
        last_end = fixed[-1][1]
        first_start = fixed[0][0] + 1
        if last_end < first_start and not (len(fixed) == 1 and fixed[0] == (0, 1)):
            arcs.append(Arc(last_end % 1, first_start % 1))
        # present arcs starting from the least start point
        return sorted(arcs, key=lambda a: (a.start, a.end))

    def sigma(self) -> int:
        return len(self.support_components())

    # -- serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        return {"breakpoints": [str(Dyadic.of(p)) for p in self.points],
                "values": [str(Dyadic.of(v % 1)) for v in self.lift_values],
                "slopes": [_slope_str(s) for s in self.slopes]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "PLCircleMap":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.validate(data.get("breakpoints", []), data.get("values", []), data.get("slopes", ["2^0"]))

    def __repr__(self):
        segs = ", ".join(f"{Dyadic.of(p)}->{Dyadic.of(v % 1)}:{_slope_str(s)}"
                         for p, v, s in zip(self.points, self.lift_values, self.slopes))
        return f"PLCircleMap({segs})"


_IDENTITY = PLCircleMap((Fraction(0),), (Fraction(0),), (Fraction(1),), _checked=True)


def identity() -> PLCircleMap:
    return _IDENTITY


def sigma_count(f: PLCircleMap) -> int:
    return f.sigma()


def support_components(f: PLCircleMap) -> list[Arc]:
    return f.support_components()


def compose(f: PLCircleMap, g: PLCircleMap) -> PLCircleMap:
    return f * g


def power(f: PLCircleMap, m: int) -> PLCircleMap:
    if m == 0:
        raise ValueError("power 0 is excluded")
    return f ** m


def reflect(x) -> Fraction:
    return (1 - Fraction(x)) % 1


def reflect_conjugate(f: PLCircleMap) -> PLCircleMap:
    """r f r with r(x) = 1 - x."""
    return PLCircleMap._from_lift([1 - p for p in f.points], lambda x: 1 - f.lift(1 - x))


# -- standard generators and the witness family ------------------------------------

def _pw(points, values, slopes) -> PLCircleMap:
    return PLCircleMap([Fraction(p) for p in points], [Fraction(v) for v in values],
                       [Fraction(s) for s in slopes])._canonical()


def generator_A() -> PLCircleMap:
    return _pw([0, Fraction(1, 2), Fraction(3, 4)], [0, Fraction(1, 4), Fraction(1, 2)],
               [Fraction(1, 2), 1, 2])


def generator_B() -> PLCircleMap:
    return _pw([0, Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)],
               [0, Fraction(1, 2), Fraction(5, 8), Fraction(3, 4)],
               [1, Fraction(1, 2), 1, 2])


def generator_C() -> PLCircleMap:
    """Order three: x/2 + 3/4, then 2x - 1, then x - 1/4."""
    return _pw([0, Fraction(1, 2), Fraction(3, 4)], [Fraction(3, 4), 1, Fraction(3, 2)],
               [Fraction(1, 2), 2, 1])


def rotation(a) -> PLCircleMap:
    a = Fraction(a) % 1
    if not _is_dyadic(a):
        raise NotInT("rotation angle must be dyadic")
    return PLCircleMap((Fraction(0),), (a,), (Fraction(1),))


def build_f1() -> PLCircleMap:
    return _pw([0, Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)],
               [0, Fraction(1, 4), Fraction(3, 8), Fraction(1, 2)],
               [2, 1, Fraction(1, 2), 1])


def _copies_exponent(k: int) -> int:
    return math.ceil(math.log2(2 * k)) + 1


def build_f_k(k: int) -> PLCircleMap:
    """k scaled copies of f_1 on ((2i-2)/2^E, (2i-1)/2^E), E = ceil(log2 2k) + 1."""
    if k < 1:
        raise ValueError("k must be positive")
    f1 = build_f1()
    w = Fraction(1, 2 ** _copies_exponent(k))
    starts = [(2 * i - 2) * w for i in range(1, k + 1)]

    def lift(x: Fraction) -> Fraction:
        for a in starts:
            if a <= x <= a + 2 * w:
                return a + 2 * w * f1.lift((x - a) / (2 * w))
        return x

    pts = [a + 2 * w * p for a in starts for p in f1.points] + [starts[-1] + 2 * w]
    return PLCircleMap._from_lift(pts, lift)


def build_h_k(k: int) -> PLCircleMap:
    f = build_f_k(k)
    return f * reflect_conjugate(f)


# -- the iterates check --------------------------------------------------------------

@dataclass(frozen=True)
class PowerSupportReport:
    m: int
    supported: bool
    equal: bool
    support: tuple
    power_support: tuple
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.supported or self.equal


def power_support_check(f: PLCircleMap, m: int) -> PowerSupportReport:
    if m == 0:
        raise ValueError("power 0 is excluded")
    if not f.has_fixed_point():
        return PowerSupportReport(m, False, False, (), (),
                                  "line-case hypothesis unavailable: no fixed point")
    s, t = tuple(f.support_components()), tuple((f ** m).support_components())
    return PowerSupportReport(m, True, s == t, s, t)


# -- random elements --------------------------------------------------------------------

def random_word_element(rng: random.Random, length: int, letters: Sequence[PLCircleMap]) -> PLCircleMap:
    alphabet = list(letters) + [g.inverse() for g in letters]
    out = identity()
    for _ in range(length):
        out = out * rng.choice(alphabet)
    return out


def random_F(rng: random.Random, length: int = 5) -> PLCircleMap:
    return random_word_element(rng, length, [generator_A(), generator_B()])


def random_T(rng: random.Random, length: int = 5) -> PLCircleMap:
    letters = [generator_A(), generator_B(), generator_C(), build_f1(),
               rotation(Fraction(1, 4)), rotation(Fraction(3, 8))]
    return random_word_element(rng, length, letters)


def sample_points(rng: random.Random, count: int, exponent: int = 10) -> list[Fraction]:
    return [Fraction(rng.randrange(2 ** exponent), 2 ** exponent) for _ in range(count)]
