"""Brute-force twisted conjugacy on finite groups.

Classes of x under x ~ g x phi(g)^-1 are labelled by their least element.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .groups import (FiniteGroupTable, GroupError, GroupMap, inner_automorphism,
                     is_invariant, is_normal, quotient, subgroup)


def _check_auto(G: FiniteGroupTable, phi: GroupMap) -> None:
    if phi.source is not G or phi.target is not G or not phi.bijective:
        raise GroupError("twisted classes need an automorphism of G")


def class_labels(G: FiniteGroupTable, phi: GroupMap) -> np.ndarray:
    _check_auto(G, phi)
    return kernels.twisted_labels(G.table, G.inverse, phi.values)


def twisted_classes(G: FiniteGroupTable, phi: GroupMap) -> list[list[int]]:
    labels = class_labels(G, phi)
    out: dict[int, list[int]] = {}
    for x, lab in enumerate(labels.tolist()):
        out.setdefault(lab, []).append(x)
    return [out[k] for k in sorted(out)]


def reidemeister_number(G: FiniteGroupTable, phi: GroupMap) -> int:
    return len(np.unique(class_labels(G, phi)))


def _count(labels: np.ndarray) -> int:
    return len(np.unique(labels))


# -- exact sequence and addition formula --------------------------------------

@dataclass
class ExactnessReport:
    surjective: bool
    kernel_matches: bool
    image_classes: tuple[int, ...]
    fibre_classes: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.surjective and self.kernel_matches


@dataclass
class _Context:
    """Per-(G, N) data reused across automorphisms."""

    G: FiniteGroupTable
    normal: tuple[int, ...]
    N: object = None
    Q: object = None

    def __post_init__(self):
        self.N = subgroup(self.G, self.normal)
        self.Q = quotient(self.G, self.normal)
        self.normal_arr = np.array(self.normal, dtype=np.int64)


def _prepare(G, normal, theta, ctx=None) -> _Context:
    if ctx is None:
        if not is_normal(G, normal):
            raise GroupError("N is not a normal subgroup")
        ctx = _Context(G, tuple(sorted(int(x) for x in normal)))
    if not is_invariant(theta, ctx.normal):
        raise GroupError("theta does not preserve N")
    return ctx


def exact_sequence_check(G: FiniteGroupTable, normal, theta: GroupMap,
                         ctx: _Context | None = None, labels_g=None) -> ExactnessReport:
    """Classes of N -> classes of G -> classes of G/N is exact at the middle.

    p_* is onto, and the classes of G meeting N are exactly those mapped to
    the class of the trivial coset.
    """
    ctx = _prepare(G, normal, theta, ctx)
    Q = ctx.Q
    if labels_g is None:
        labels_g = class_labels(G, theta)
    theta_bar = Q.induced(theta)
    labels_q = kernels.twisted_labels(Q.group.table, Q.group.inverse, theta_bar.values)
    # p_*: class of g -> class of gN, read off each element
    image_q = labels_q[Q.coset_of]
    surjective = set(image_q.tolist()) == set(labels_q.tolist())
    trivial = labels_q[Q.coset_of[G.identity]]
    meets_n = set(labels_g[ctx.normal_arr].tolist())
    fibre = set(labels_g[image_q == trivial].tolist())
    return ExactnessReport(surjective, meets_n == fibre, tuple(sorted(meets_n)), tuple(sorted(fibre)))


@dataclass
class AdditionReport:
    hypothesis_holds: bool
    violating_coset: int | None = None        # least element of an offending coset
    lhs: int | None = None                    # R(theta)
    rhs: int | None = None                    # sum of R(i_alpha theta')
    terms: list[tuple[int, int]] = field(default_factory=list)   # (alpha, R)

    @property
    def verified(self) -> bool:
        return self.hypothesis_holds and self.lhs == self.rhs

    @property
    def status(self) -> str:
        if not self.hypothesis_holds:
            return "hypothesis_violated"
        return "verified" if self.lhs == self.rhs else "discrepancy"


def verify_addition_formula(G: FiniteGroupTable, normal, theta: GroupMap,
                            ctx: _Context | None = None, labels_g=None) -> AdditionReport:
    """Check R(theta) = sum over theta-bar classes [aN] of R(i_a theta') when each
    i_a theta-bar fixes only the trivial coset."""
    ctx = _prepare(G, normal, theta, ctx)
    Q, N = ctx.Q, ctx.N
    theta_bar = Q.induced(theta)
    qt, qi = Q.group.table, Q.group.inverse
    counts = kernels.fixed_counts(qt, qi, theta_bar.values)
    bad = np.nonzero(counts != 1)[0]
    if len(bad):
        return AdditionReport(False, violating_coset=int(Q.representatives[bad[0]]))
    if labels_g is None:
        labels_g = class_labels(G, theta)
    lhs = _count(labels_g)
    labels_q = kernels.twisted_labels(qt, qi, theta_bar.values)
    terms = []
    T, inv = G.table, G.inverse
    for c in np.unique(labels_q):
        alpha = int(Q.representatives[c])     # least element of the least coset
        twist = T[T[alpha, theta.values], inv[alpha]]
        local = N.restrict(twist)
        terms.append((alpha, _count(kernels.twisted_labels(N.group.table, N.group.inverse, local))))
    rhs = sum(r for _, r in terms)
    return AdditionReport(True, lhs=lhs, rhs=rhs, terms=terms)


# -- powers ---------------------------------------------------------------------

@dataclass
class PowerReport:
    n: int
    fixed: int
    related_pairs: int
    counterexample: tuple[int, int] | None = None
    identity_failure: tuple[int, int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None and self.identity_failure is None


def power_trick_check(G: FiniteGroupTable, theta: GroupMap, n: int,
                      labels_theta=None) -> PowerReport:
    """For x, y fixed by theta with y = z^-1 x theta(z): check y^n = z^-1 x^n theta^n(z),
    hence x^n and y^n are theta^n-twisted conjugate."""
    _check_auto(G, theta)
    if n < 1:
        raise ValueError("n must be positive")
    T, inv = G.table, G.inverse
    fix = np.nonzero(theta.values == np.arange(G.order))[0]
    if labels_theta is None:
        labels_theta = class_labels(G, theta)
    theta_n = theta.power(n)
    labels_n = kernels.twisted_labels(T, inv, theta_n.values)
    pw = G.powers(n)
    report = PowerReport(n, len(fix), 0)
    for x in fix.tolist():
        ys = fix[labels_theta[fix] == labels_theta[x]]
        zs = kernels.conjugators(T, inv, theta.values, x, ys)
        for y, z in zip(ys.tolist(), zs.tolist()):
            report.related_pairs += 1
            if z < 0:
                report.identity_failure = (x, y, -1)
                return report
            rhs = T[T[inv[z], pw[x]], theta_n.values[z]]
            if pw[y] != rhs:
                report.identity_failure = (x, y, z)
                return report
            if labels_n[pw[x]] != labels_n[pw[y]]:
                report.counterexample = (x, y)
                return report
    return report


def inner_witness(G: FiniteGroupTable, phi: GroupMap) -> int | None:
    """Least g with phi = conjugation by g, if any."""
    for g in range(G.order):
        if np.array_equal(G.conjugation(g), phi.values):
            return g
    return None


@dataclass
class TorsionfixReport:
    n: int
    gamma: int | None
    agrees: bool


def torsionfix_check(G: FiniteGroupTable, theta: GroupMap, n: int) -> TorsionfixReport:
    """If theta^n is conjugation by gamma, then w ~ w' under theta^n exactly when
    w gamma and w' gamma are conjugate."""
    phi = theta.power(n)
    gamma = inner_witness(G, phi)
    if gamma is None:
        return TorsionfixReport(n, None, True)
    twisted = class_labels(G, phi)
    conj = kernels.twisted_labels(G.table, G.inverse, np.arange(G.order))
    shifted = conj[G.table[:, gamma]]
    same_t = twisted[:, None] == twisted[None, :]
    same_c = shifted[:, None] == shifted[None, :]
    return TorsionfixReport(n, gamma, bool((same_t == same_c).all()))


def inner_twist_invariance(G: FiniteGroupTable, phi: GroupMap) -> bool:
    """R(phi) = R(i_g phi) for every g."""
    r = reidemeister_number(G, phi)
    for g in range(G.order):
        twisted = inner_automorphism(G, g).compose(phi)
        if reidemeister_number(G, twisted) != r:
            return False
    return True
