"""Command line front end.

Exit status: 0 when every certificate checks out, 1 on a certificate failure,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import char_sphere as cs
from . import houghton as hg
from . import perm_core as pc
from . import thompson as th
from .twisted import groups as tg
from .twisted import oracle as tor
from .twisted.sweep import run_sweep


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    columns: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)
    passed: bool = True
    extra: dict = field(default_factory=dict)

    def fail(self, why: str) -> None:
        self.passed = False
        self.summary.append(f"FAIL: {why}")

    def to_json(self) -> dict:
        return {"command": self.command, "rows": self.rows, "summary": self.summary,
                "passed": self.passed, **self.extra}

    def render(self, emit: str) -> str:
        if emit == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True, default=str)
        lines = [f"# {self.command}"]
        if self.rows:
            cols = self.columns or list(self.rows[0])
            cells = [[str(r.get(c, "")) for c in cols] for r in self.rows]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
            lines.append("  ".join("-" * w for w in widths))
            lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
        lines += self.summary
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _distinct(values) -> bool:
    values = list(values)
    return len(set(values)) == len(values)


# -- sinf ----------------------------------------------------------------------

EXAMPLES = {
    "shift": lambda: pc.shift_pair(2, 1, 2),
    "cycles": lambda: pc.block_cycles(1, 1, 3),
    "pairs": lambda: pc.block_cycles(1, 1, 2),
    "finitary": lambda: pc.TailedPermutation.transposition(1, pc.Point(1, 1), pc.Point(1, 2)),
}

ANCHOR_SINF = {
    "shift": "shift index of the spliced infinite cycle",
    "fixed": "relative fixed-point index",
}


def cmd_sinf_witness(args) -> Report:
    if args.input:
        f = pc.TailedPermutation.from_json(_load_json(args.input))
    else:
        f = EXAMPLES[args.example]()
    rep = Report(f"sinf witness --count {args.count}",
                 ["j", "kind", "tau_support", "certificate", "anchor"])
    family = pc.witness_family(f, args.count)
    for j, w in enumerate(family, 1):
        rep.rows.append({"j": j, "kind": w.kind, "tau_support": len(w.tau.support()),
                         "certificate": w.certificate, "anchor": ANCHOR_SINF[w.kind]})
    rep.extra["cycle_type"] = {str(k): v for k, v in pc.cycle_type(f).items()}
    if not _distinct(w.certificate for w in family):
        rep.fail("certificates are not pairwise distinct")
    rep.summary.append(f"{len(family)} witnesses, certificates pairwise distinct: {rep.passed}")
    return rep


# -- houghton --------------------------------------------------------------------

def cmd_houghton_witness(args) -> Report:
    n = args.n
    if n < 2:
        raise InputError("Houghton groups need n >= 2")
    sigma = hg.parse_perm(args.sigma, n) if args.sigma else hg.perm_identity(n)
    rep = Report(f"houghton witness --n {n} --sigma {args.sigma or 'id'} --count {args.count}",
                 ["k", "fixed_by_psi", "certificate", "anchor"])
    ws = hg.torsion_witnesses(sigma, args.count)
    for w in ws:
        fixed = hg.psi_action(sigma, w.element) == w.element
        rep.rows.append({"k": w.k, "fixed_by_psi": fixed, "certificate": w.certificate,
                         "anchor": "order of the ord(sigma)-th power"})
        if not fixed:
            rep.fail(f"xi_{w.k} is not fixed")
    if not _distinct(w.certificate for w in ws):
        rep.fail("certificates are not pairwise distinct")
    lam = hg.character_orbit_sum(sigma)
    rank = hg.fixed_subgroup_rank(hg.translation_matrix(hg.AutHn.psi(sigma)))
    rep.extra["orbit_character"] = list(lam.coefficients)
    rep.extra["fixed_translation_rank"] = rank
    route = "character" if not lam.is_zero() else "torsion only (sigma is an n-cycle)"
    rep.summary.append(f"orbit-sum character {list(lam.coefficients)} nonzero: {not lam.is_zero()}")
    rep.summary.append(f"rank of translations fixed by psi_sigma: {rank}; character route: {route}")
    return rep


def cmd_houghton_aut(args) -> Report:
    rng = random.Random(args.seed)
    if args.input:
        f = hg.NormalizerElement.from_json(_load_json(args.input))
    else:
        f = hg.random_normalizer(rng, args.n)
    n = f.n
    phi = hg.decompose_automorphism(f)
    rep = Report("houghton aut-decompose", ["test_element", "agrees"])
    tests = [(f"h_{p}", hg.make_h_p(n, p)) for p in range(1, n)]
    for t in range(args.trials):
        z = pc.random_finitary(rng, n)
        tests.append((f"finitary_{t}", hg.HoughtonElement(z)))
    for name, h in tests:
        ok = phi(h) == f.conjugate(h)
        rep.rows.append({"test_element": name, "agrees": ok})
        if not ok:
            rep.fail(f"decomposition disagrees on {name}")
    rep.extra["sigma"] = list(phi.sigma)
    rep.extra["inner"] = phi.inner.to_json()
    rep.summary.append(f"sigma = {list(phi.sigma)}, inner translation = {list(phi.inner.translation)}")
    return rep


# -- finite oracle ---------------------------------------------------------------

def cmd_oracle_sweep(args) -> Report:
    res = run_sweep(args.max_order, jobs=args.jobs)
    rep = Report(f"oracle sweep --max-order {args.max_order}")
    data = res.to_json()
    data.pop("seconds", None)
    rep.extra["sweep"] = data
    rep.summary.append(f"groups {res.groups}, automorphisms {res.automorphisms}, "
                       f"invariant normal subgroup triples {res.triples}")
    rep.summary.append(f"addition formula verified on {res.verified} instances, "
                       f"hypothesis violated on {res.hypothesis_violated}")
    rep.summary.append(f"exactness failures {res.exactness_failures}, discrepancies {len(res.discrepancies)}")
    rep.summary.append(f"power trick instances {res.power_instances}, related pairs {res.power_pairs}, "
                       f"failures {len(res.power_failures)}")
    if not res.ok:
        rep.fail("sweep found a discrepancy")
    if args.report:
        Path(args.report).write_text(json.dumps(data, indent=2, sort_keys=True))
    return rep


def _load_group(args) -> tg.FiniteGroupTable:
    if args.input:
        data = _load_json(args.input)
        try:
            table = data["table"]
            if "order" in data and int(data["order"]) != len(table):
                raise InputError("order does not match the table size")
            return tg.FiniteGroupTable(table, name=data.get("name", "input"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed Cayley table: {exc}") from exc
    try:
        return tg.by_name(args.group)
    except KeyError as exc:
        raise InputError(f"unknown group {args.group!r}") from exc


def cmd_oracle_reidemeister(args) -> Report:
    G = _load_group(args)
    autos = tg.enumerate_automorphisms(G, max_order=max(24, G.order))
    rep = Report(f"oracle reidemeister {G.name}", ["automorphism", "R", "inner_twist_invariant"])
    for k, phi in enumerate(autos):
        inv = tor.inner_twist_invariance(G, phi) if args.check_inner else ""
        rep.rows.append({"automorphism": k, "R": tor.reidemeister_number(G, phi),
                         "inner_twist_invariant": inv})
        if inv is False:
            rep.fail(f"R changes under an inner twist of automorphism {k}")
    spectrum = sorted({r["R"] for r in rep.rows})
    rep.summary.append(f"|G| = {G.order}, |Aut(G)| = {len(autos)}, Reidemeister spectrum {spectrum}")
    return rep


# -- character spheres -----------------------------------------------------------

def _witness_row(i, M, w, n) -> dict:
    ok = cs.check_witness(M, w)
    row = {"matrix": i, "kind": w.kind, "valid": ok}
    if isinstance(w, cs.InvariantCharacter):
        row["data"] = repr(w.character)
    elif isinstance(w, cs.CommutatorWitness):
        row["data"] = f"{w.route} pair {w.pair[0]},{w.pair[1]} index {w.index}"
    else:
        row["data"] = w.reason
    return row


def cmd_sigma_witness(args) -> Report:
    rep = Report("sigma witness", ["matrix", "kind", "valid", "data"])
    mats = []
    if args.matrix:
        M, n = cs.MonomialMatrix.from_json(_load_json(args.matrix))
        n = n or args.n
        if n is None:
            raise InputError("give --n or an 'n' field in the matrix file")
        mats.append(M)
    else:
        if args.n is None:
            raise InputError("give --n with --trials, or --matrix")
        n = args.n
        rng = random.Random(args.seed)
        mats = [cs.random_monomial(rng, n) for _ in range(args.trials)]
    for i, M in enumerate(mats):
        w = cs.gn_witness(M, n, plane_fallback=not args.strict)
        row = _witness_row(i, M, w, n)
        rep.rows.append(row)
        if not row["valid"]:
            rep.fail(f"matrix {i}: {row['data']}")
    good = sum(r["valid"] for r in rep.rows)
    rep.summary.append(f"{good} of {len(rep.rows)} matrices have a certified witness")
    return rep


def cmd_sigma_orbit_sum(args) -> Report:
    data = _load_json(args.points)
    try:
        pts = cs.SpherePointSet.from_json(data)
        action = [[Fraction(str(x)) for x in row] for row in data["action"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed point set: {exc}") from exc
    rep = Report("sigma orbit-sum", ["label", "lambda"])
    try:
        lam = cs.invariant_discrete_character(pts, action, factor=data.get("factor"),
                                              tag=data.get("tag", "D_Q"))
    except cs.OrbitSumError as exc:
        rep.fail(str(exc))
        return rep
    for lab, x in zip(pts.labels, lam):
        rep.rows.append({"label": lab, "lambda": str(x)})
    rep.summary.append("orbit sum is nonzero and invariant")
    return rep


# -- Thompson's T --------------------------------------------------------------------

def cmd_thompson_family(args) -> Report:
    rep = Report(f"thompson family --count {args.count}",
                 ["k", "sigma_f", "sigma_h", "h_reflect_fixed", "sigma_h2"])
    for k in range(1, args.count + 1):
        f = th.build_f_k(k)
        h = th.build_h_k(k)
        row = {"k": k, "sigma_f": f.sigma(), "sigma_h": h.sigma(),
               "h_reflect_fixed": th.reflect_conjugate(h) == h, "sigma_h2": (h * h).sigma()}
        rep.rows.append(row)
        if (row["sigma_f"], row["sigma_h"], row["sigma_h2"]) != (k, 2 * k, 2 * k) or not row["h_reflect_fixed"]:
            rep.fail(f"h_{k} does not have the expected invariants")
    if not _distinct(r["sigma_h2"] for r in rep.rows):
        rep.fail("sigma values of the squares repeat")
    rep.summary.append("squares of h_k have pairwise distinct support counts")
    return rep


def cmd_thompson_power(args) -> Report:
    powers = [int(x) for x in args.powers.split(",")]
    if 0 in powers:
        raise InputError("power 0 is excluded")
    rng = random.Random(args.seed)
    if args.input:
        maps = [th.PLCircleMap.from_json(_load_json(args.input))]
    else:
        maps = [th.random_F(rng, args.length) for _ in range(args.trials)]
    rep = Report("thompson power-check", ["element", "m", "sigma", "status"])
    unsupported = 0
    for i, f in enumerate(maps):
        for m in powers:
            r = th.power_support_check(f, m)
            status = "equal" if r.equal else ("unsupported" if not r.supported else "DIFFERENT")
            unsupported += not r.supported
            rep.rows.append({"element": i, "m": m, "sigma": len(r.support), "status": status})
            if not r.ok:
                rep.fail(f"support of power {m} of element {i} differs")
    rep.summary.append(f"{len(rep.rows)} checks, {unsupported} without a fixed point")
    return rep


# -- argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=20)

    p = _Parser(prog="rinfty", description="Certify twisted-conjugacy witness families.")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    s = top.add_parser("sinf").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    w = s.add_parser("witness", parents=[common])
    w.add_argument("--input")
    w.add_argument("--example", choices=sorted(EXAMPLES), default="shift")
    w.add_argument("--count", type=int, default=10)
    w.set_defaults(func=cmd_sinf_witness)

    h = top.add_parser("houghton").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    w = h.add_parser("witness", parents=[common])
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--sigma")
    w.add_argument("--count", type=int, default=5)
    w.set_defaults(func=cmd_houghton_witness)
    w = h.add_parser("aut-decompose", parents=[common])
    w.add_argument("--input")
    w.add_argument("--n", type=int, default=3)
    w.set_defaults(func=cmd_houghton_aut)

    o = top.add_parser("oracle").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    w = o.add_parser("sweep", parents=[common])
    w.add_argument("--max-order", type=int, default=16)
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--report")
    w.set_defaults(func=cmd_oracle_sweep)
    w = o.add_parser("reidemeister", parents=[common])
    src = w.add_mutually_exclusive_group(required=True)
    src.add_argument("--group")
    src.add_argument("--input")
    w.add_argument("--check-inner", action="store_true")
    w.set_defaults(func=cmd_oracle_reidemeister)

    g = top.add_parser("sigma").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    w = g.add_parser("witness", parents=[common])
    w.add_argument("--n", type=int)
    w.add_argument("--matrix")
    w.add_argument("--strict", action="store_true",
                   help="only accept eigenvalue 1 or a pair of eigenvalue -1 vectors")
    w.set_defaults(func=cmd_sigma_witness)
    w = g.add_parser("orbit-sum", parents=[common])
    w.add_argument("--points", required=True)
    w.set_defaults(func=cmd_sigma_orbit_sum)

    t = top.add_parser("thompson").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    w = t.add_parser("family", parents=[common])
    w.add_argument("--count", type=int, default=5)
    w.set_defaults(func=cmd_thompson_family)
    w = t.add_parser("power-check", parents=[common])
    w.add_argument("--input")
    w.add_argument("--powers", default="2,3,5")
    w.add_argument("--length", type=int, default=5)
    w.set_defaults(func=cmd_thompson_power)
    return p


INPUT_ERRORS = (InputError, pc.NotATailedPermutation, pc.IncomparableError, cs.NotRealizable,
                th.NotInT, tg.GroupError, ValueError, KeyError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "count", 1) is not None and getattr(args, "count", 1) < 1:
        print("rinfty: error: --count must be positive", file=sys.stderr)
        return 2
    try:
        rep = args.func(args)
    except INPUT_ERRORS as exc:
        print(f"rinfty: error: {exc}", file=sys.stderr)
        return 2
    print(rep.render(args.emit))
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
