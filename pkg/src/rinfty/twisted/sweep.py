"""Exhaustive sweep over catalog groups, normal subgroups and automorphisms."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .groups import catalog, enumerate_automorphisms, is_invariant, normal_subgroups
from .oracle import (_Context, class_labels, exact_sequence_check, power_trick_check,
                     verify_addition_formula)


@dataclass
class SweepResult:
    groups: int = 0
    automorphisms: int = 0
    triples: int = 0
    exactness_failures: int = 0
    verified: int = 0
    hypothesis_violated: int = 0
    discrepancies: list = field(default_factory=list)
    power_instances: int = 0
    power_pairs: int = 0
    power_failures: list = field(default_factory=list)
    seconds: float = 0.0

    def merge(self, other: "SweepResult") -> None:
        for name in ("automorphisms", "triples", "exactness_failures", "verified",
                     "hypothesis_violated", "power_instances", "power_pairs"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.discrepancies += other.discrepancies
        self.power_failures += other.power_failures

    @property
    def ok(self) -> bool:
        return (not self.exactness_failures and not self.discrepancies
                and not self.power_failures
                and self.verified + self.hypothesis_violated == self.triples)

    def to_json(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def _group_list(max_order: int):
    return [g for g in catalog(max_order) if g.order <= max_order]


def _run_chunk(args) -> SweepResult:
    max_order, gi, start, stop, powers, do_formula = args
    G = _group_list(max_order)[gi]
    autos = enumerate_automorphisms(G, max_order=max(max_order, G.order))[start:stop]
    out = SweepResult(automorphisms=len(autos))
    contexts = [_Context(G, N) for N in normal_subgroups(G)] if do_formula else []
    for theta in autos:
        labels = class_labels(G, theta)
        for ctx in contexts:
            if not is_invariant(theta, ctx.normal):
                continue
            out.triples += 1
            ex = exact_sequence_check(G, ctx.normal, theta, ctx=ctx, labels_g=labels)
            if not ex.ok:
                out.exactness_failures += 1
            rep = verify_addition_formula(G, ctx.normal, theta, ctx=ctx, labels_g=labels)
            if not rep.hypothesis_holds:
                out.hypothesis_violated += 1
            elif rep.verified:
                out.verified += 1
            else:
                out.discrepancies.append({"group": G.name, "normal": list(ctx.normal),
                                          "theta": theta.values.tolist(),
                                          "lhs": rep.lhs, "rhs": rep.rhs})
        for n in powers:
            pr = power_trick_check(G, theta, n, labels_theta=labels)
            out.power_instances += 1
            out.power_pairs += pr.related_pairs
            if not pr.ok:
                out.power_failures.append({"group": G.name, "theta": theta.values.tolist(),
                                           "n": n, "counterexample": pr.counterexample,
                                           "identity_failure": pr.identity_failure})
    return out


def run_sweep(max_order: int = 16, jobs: int = 1, powers=(2, 3), addition: bool = True,
              chunk: int = 2000) -> SweepResult:
    """Every (G, N, theta) with theta(N) = N for catalog groups up to ``max_order``."""
    t0 = time.perf_counter()
    groups = _group_list(max_order)
    tasks = []
    for gi, G in enumerate(groups):
        count = len(enumerate_automorphisms(G, max_order=max(max_order, G.order)))
        for start in range(0, count, chunk):
            tasks.append((max_order, gi, start, min(start + chunk, count), tuple(powers), addition))
    total = SweepResult(groups=len(groups))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, tasks))
    else:
        parts = [_run_chunk(t) for t in tasks]
    for p in parts:
        total.merge(p)
    total.seconds = round(time.perf_counter() - t0, 3)
    return total
