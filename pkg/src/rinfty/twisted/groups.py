"""Small finite groups as Cayley tables, homomorphisms and a catalog."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np


class GroupError(ValueError):
    pass


class FiniteGroupTable:
    """Group on {0..m-1} with ``table[a, b] = a*b``; validated on construction."""

    def __init__(self, table, name: str = "", labels: Sequence | None = None,
                 validate: bool = True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("table must be a non-empty square array")
        m = t.shape[0]
        if t.min() < 0 or t.max() >= m:
            raise GroupError("table entries out of range")
        self.table = t
        self.order = m
        self.name = name or f"G{m}"
        self.labels = list(labels) if labels is not None else list(range(m))
        ident = [e for e in range(m) if (t[e] == np.arange(m)).all() and (t[:, e] == np.arange(m)).all()]
        if not ident:
            raise GroupError("no identity element")
        self.identity = ident[0]
        inv = np.full(m, -1, dtype=np.int64)
        for a in range(m):
            hits = np.nonzero(t[a] == self.identity)[0]
            if len(hits) != 1 or t[hits[0], a] != self.identity:
                raise GroupError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        self.inverse = inv
        if validate:
            self._validate()
        self.table.setflags(write=False)
        self.inverse.setflags(write=False)

    def _validate(self) -> None:
        t = self.table
        m = self.order
        for row in t:
            if len(np.unique(row)) != m:
                raise GroupError("table is not a Latin square")
        # (ab)c == a(bc) for all triples, vectorized over b and c
        for a in range(m):
            if not (t[t[a]][:, :] == t[a][t]).all():
                raise GroupError("multiplication is not associative")

    # -- element helpers ------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, a: int, k: int) -> int:
        r = self.identity
        base = a if k >= 0 else int(self.inverse[a])
        for _ in range(abs(k)):
            r = int(self.table[r, base])
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def powers(self, k: int) -> np.ndarray:
        """x -> x^k as an array."""
        out = np.full(self.order, self.identity, dtype=np.int64)
        for _ in range(k):
            out = self.table[out, np.arange(self.order)]
        return out

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def conjugation(self, g: int) -> np.ndarray:
        """x -> g x g^-1."""
        return self.table[self.table[g], self.inverse[g]]

    def generated(self, gens: Iterable[int]) -> list[int]:
        """Elements of the subgroup generated by ``gens`` (finite, so closure under products)."""
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def generating_set(self) -> list[int]:
        """Greedy irredundant generators: each one lies outside the span of the previous."""
        gens: list[int] = []
        span = {self.identity}
        # prefer high-order elements so the list stays short
        for a in sorted(range(self.order), key=lambda x: (-self.element_order(x), x)):
            if a not in span:
                gens.append(a)
                span = set(self.generated(gens))
                if len(span) == self.order:
                    break
        return gens

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist(), "name": self.name}

    @classmethod
    def from_json(cls, data) -> "FiniteGroupTable":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            m = int(data["order"])
            table = data["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupError(f"malformed group data: {exc}") from exc
        g = cls(table, name=data.get("name", ""))
        if g.order != m:
            raise GroupError("declared order does not match the table")
        return g

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul: Callable, name: str = "") -> "FiniteGroupTable":
        index = {e: i for i, e in enumerate(elements)}
        table = [[index[mul(a, b)] for b in elements] for a in elements]
        return cls(table, name=name, labels=elements)

    def __repr__(self) -> str:
        return f"FiniteGroupTable({self.name}, order={self.order})"


class GroupMap:
    """Homomorphism ``source -> target`` given by its value array."""

    def __init__(self, source: FiniteGroupTable, target: FiniteGroupTable, values,
                 validate: bool = True):
        v = np.asarray(values, dtype=np.int64)
        if v.shape != (source.order,):
            raise GroupError("value table has the wrong length")
        self.source, self.target, self.values = source, target, v
        if validate and not is_homomorphism(source, target, v):
            raise GroupError("map is not a homomorphism")
        self.bijective = source.order == target.order and len(np.unique(v)) == source.order
        v.setflags(write=False)

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self after other."""
        return GroupMap(other.source, self.target, self.values[other.values], validate=False)

    def power(self, k: int) -> "GroupMap":
        if self.source is not self.target:
            raise GroupError("powers need an endomorphism")
        v = np.arange(self.source.order)
        for _ in range(k):
            v = self.values[v]
        return GroupMap(self.source, self.source, v, validate=False)

    def is_automorphism(self) -> bool:
        return self.source is self.target and self.bijective

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupMap) and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"GroupMap({self.source.name}->{self.target.name}, {self.values.tolist()})"


def is_homomorphism(source: FiniteGroupTable, target: FiniteGroupTable, v: np.ndarray) -> bool:
    return bool((v[source.table] == target.table[v[:, None], v[None, :]]).all())


def identity_map(G: FiniteGroupTable) -> GroupMap:
    return GroupMap(G, G, np.arange(G.order), validate=False)


def inner_automorphism(G: FiniteGroupTable, g: int) -> GroupMap:
    return GroupMap(G, G, G.conjugation(g), validate=False)


# -- automorphisms --------------------------------------------------------------

@dataclass
class _Level:
    members: np.ndarray        # elements of <g_1..g_i>
    parent: np.ndarray         # parent[x] for x in members (x = parent * gen)
    via: np.ndarray            # generator index used


def _levels(G: FiniteGroupTable, gens: Sequence[int]) -> list[_Level]:
    """BFS spanning trees of the chain <g_1> < <g_1,g_2> < ... ."""
    out = []
    parent = {G.identity: (-1, -1)}
    order = [G.identity]
    for i in range(len(gens)):
        # regrow from every known element using generators 0..i
        frontier = list(order)
        while frontier:
            nxt = []
            for x in frontier:
                for k in range(i + 1):
                    y = int(G.table[x, gens[k]])
                    if y not in parent:
                        parent[y] = (x, k)
                        order.append(y)
                        nxt.append(y)
            frontier = nxt
        members = np.array(order, dtype=np.int64)
        out.append(_Level(members, np.array([parent[x][0] for x in order]),
                          np.array([parent[x][1] for x in order])))
    return out


def enumerate_automorphisms(G: FiniteGroupTable, max_order: int = 24) -> list[GroupMap]:
    """All automorphisms, by backtracking over images of a generating set."""
    if G.order > max_order:
        raise GroupError(f"group order {G.order} exceeds the bound {max_order}")
    if G.order == 1:
        return [identity_map(G)]
    gens = G.generating_set()
    levels = _levels(G, gens)
    orders = [G.element_order(x) for x in range(G.order)]
    T = G.table
    found: list[np.ndarray] = []

    def extend(depth: int, images: list[int]) -> None:
        lvl = levels[depth]
        img = np.full(G.order, -1, dtype=np.int64)
        img[G.identity] = G.identity
        for x, p, k in zip(lvl.members[1:], lvl.parent[1:], lvl.via[1:]):
            img[x] = T[img[p], images[k]]
        sub = lvl.members
        vals = img[sub]
        if len(np.unique(vals)) != len(sub):
            return
        # homomorphism on the subgroup reached so far
        if not (img[T[sub[:, None], sub[None, :]]] == T[vals[:, None], vals[None, :]]).all():
            return
        if depth + 1 == len(gens):
            found.append(img)
            return
        span = set(vals.tolist())
        g = gens[depth + 1]
        for c in range(G.order):
            if orders[c] == orders[g] and c not in span:
                extend(depth + 1, images + [c])

    for c in range(G.order):
        if orders[c] == orders[gens[0]]:
            extend(0, [c])
    found.sort(key=lambda v: v.tolist())
    return [GroupMap(G, G, v, validate=False) for v in found]


# -- subgroups --------------------------------------------------------------------

def _mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def mask_elements(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def is_subgroup(G: FiniteGroupTable, elements: Sequence[int]) -> bool:
    s = set(int(x) for x in elements)
    if G.identity not in s:
        return False
    arr = np.array(sorted(s))
    return set(G.table[arr[:, None], arr[None, :]].ravel().tolist()) <= s


def is_normal(G: FiniteGroupTable, elements: Sequence[int]) -> bool:
    if not is_subgroup(G, elements):
        return False
    s = set(int(x) for x in elements)
    arr = np.array(sorted(s))
    conj = G.table[G.table[:, arr], G.inverse[:, None]]
    return set(conj.ravel().tolist()) <= s


def normal_closure(G: FiniteGroupTable, g: int) -> list[int]:
    conjugates = set(G.table[G.table[:, g], G.inverse].tolist())
    return G.generated(sorted(conjugates))


def normal_subgroups(G: FiniteGroupTable) -> list[tuple[int, ...]]:
    """All normal subgroups: joins of normal closures of single elements."""
    T = G.table
    ncl = {_mask(normal_closure(G, g)) for g in range(G.order)}
    found = set(ncl) | {_mask([G.identity])}
    frontier = set(found)
    while frontier:
        nxt = set()
        for a in frontier:
            ea = np.array(mask_elements(a))
            for b in ncl:
                if a | b == a:
                    continue
                eb = np.array(mask_elements(b))
                # product of two normal subgroups is their join
                j = _mask(T[ea[:, None], eb[None, :]].ravel().tolist())
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    subs = [tuple(mask_elements(m)) for m in found]
    subs.sort(key=lambda s: (len(s), s))
    return subs


def is_invariant(theta: GroupMap, elements: Sequence[int]) -> bool:
    s = set(int(x) for x in elements)
    return set(theta.values[np.array(sorted(s))].tolist()) == s


@dataclass
class Quotient:
    """G/N with cosets labelled by their least element."""

    group: FiniteGroupTable
    coset_of: np.ndarray               # element -> coset index
    representatives: np.ndarray        # coset index -> least element

    def induced(self, theta: GroupMap) -> GroupMap:
        v = self.coset_of[theta.values[self.representatives]]
        return GroupMap(self.group, self.group, v, validate=False)


def quotient(G: FiniteGroupTable, normal: Sequence[int]) -> Quotient:
    N = np.array(sorted(int(x) for x in normal))
    least = G.table[:, N].min(axis=1)
    reps = np.unique(least)
    index = {int(r): i for i, r in enumerate(reps)}
    coset_of = np.array([index[int(x)] for x in least], dtype=np.int64)
    table = coset_of[G.table[reps[:, None], reps[None, :]]]
    Q = FiniteGroupTable(table, name=f"{G.name}/N{len(N)}", validate=False)
    return Quotient(Q, coset_of, reps)


@dataclass
class Subgroup:
    """N as a group in its own right, with the embedding into G."""

    group: FiniteGroupTable
    elements: np.ndarray               # local index -> element of G
    local: dict = field(default_factory=dict)

    def restrict(self, phi_values: np.ndarray) -> np.ndarray:
        """Local value array of a map of G preserving N."""
        return np.array([self.local[int(x)] for x in phi_values[self.elements]], dtype=np.int64)


def subgroup(G: FiniteGroupTable, elements: Sequence[int]) -> Subgroup:
    el = np.array(sorted(int(x) for x in elements))
    local = {int(x): i for i, x in enumerate(el)}
    table = [[local[int(G.table[a, b])] for b in el] for a in el]
    return Subgroup(FiniteGroupTable(table, name=f"N{len(el)}<{G.name}", validate=False), el, local)


# -- catalog ------------------------------------------------------------------------

def cyclic(m: int) -> FiniteGroupTable:
    a = np.arange(m)
    return FiniteGroupTable((a[:, None] + a[None, :]) % m, name=f"C{m}", validate=False)


def dihedral(m: int) -> FiniteGroupTable:
    """Symmetries of the m-gon, order 2m."""
    els = [(r, s) for s in (0, 1) for r in range(m)]

    def mul(x, y):
        return ((x[0] + (-1) ** x[1] * y[0]) % m, (x[1] + y[1]) % 2)

    return FiniteGroupTable.from_elements(els, mul, name=f"D{m}")


def quaternion() -> FiniteGroupTable:
    """x^a y^b with x^4 = 1, y^2 = x^2, y x = x^-1 y."""
    els = [(a, b) for b in (0, 1) for a in range(4)]

    def mul(p, q):
        a1, b1 = p
        a2, b2 = q
        if b1 == 0:
            return ((a1 + a2) % 4, b2)
        if b2 == 0:
            return ((a1 - a2) % 4, 1)
        return ((a1 - a2 + 2) % 4, 0)

    return FiniteGroupTable.from_elements(els, mul, name="Q8")


def _perm_mul(p, q):
    return tuple(p[i] for i in q)


def symmetric(k: int) -> FiniteGroupTable:
    els = list(itertools.permutations(range(k)))
    return FiniteGroupTable.from_elements(els, _perm_mul, name=f"S{k}")


def _parity(p) -> int:
    s, seen = 0, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, c = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            c += 1
        s += c - 1
    return s % 2


def alternating(k: int) -> FiniteGroupTable:
    els = [p for p in itertools.permutations(range(k)) if _parity(p) == 0]
    return FiniteGroupTable.from_elements(els, _perm_mul, name=f"A{k}")


def direct_product(G: FiniteGroupTable, H: FiniteGroupTable) -> FiniteGroupTable:
    m, k = G.order, H.order
    a = np.arange(m * k)
    g, h = a // k, a % k
    table = G.table[g[:, None], g[None, :]] * k + H.table[h[:, None], h[None, :]]
    return FiniteGroupTable(table, name=f"{G.name}x{H.name}", validate=False)


def catalog(max_order: int = 24) -> list[FiniteGroupTable]:
    """Cyclic, dihedral, symmetric, alternating, Q8, elementary abelian 2-groups
    and pairwise direct products, all of order <= max_order."""
    groups: list[FiniteGroupTable] = [cyclic(m) for m in range(1, max_order + 1)]
    groups += [dihedral(m) for m in range(3, max_order // 2 + 1)]
    for k, build in ((3, symmetric), (4, symmetric), (4, alternating)):
        order = {3: 6, 4: 24}[k] if build is symmetric else 12
        if order <= max_order:
            groups.append(build(k))
    if max_order >= 8:
        groups.append(quaternion())
    base = [g for g in groups if 2 <= g.order <= max_order // 2]
    for i, G in enumerate(base):
        for H in base[i:]:
            if G.order * H.order <= max_order:
                groups.append(direct_product(G, H))
    c2 = cyclic(2)
    if max_order >= 8:
        groups.append(direct_product(direct_product(c2, c2), c2))
        groups[-1].name = "C2^3"
    if max_order >= 16:
        groups.append(direct_product(groups[-1], c2))
        groups[-1].name = "C2^4"
    return groups


def by_name(name: str) -> FiniteGroupTable:
    for g in catalog(24):
        if g.name == name:
            return g
    raise KeyError(f"no catalog group named {name!r}")
