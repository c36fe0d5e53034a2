"""Command-line entry point: build, chi, iso, color, analyze, sample, reproduce.

Exit codes: 0 success, 1 a verification failed, 2 usage or domain error,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from . import cayley as C
from . import colorers as K
from . import groups as G
from . import iso
from . import sampler as Sm
from . import structure as S
from .errors import BudgetExhausted, ContractViolation, DomainError, ResourceError
from .groups import Family, MarkedGroupSpec
from .solver import DEFAULT_BUDGET, chromatic_number, enumerate_colorings, greedy_maximal_discrete, k_colorable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class VerificationFailed(Exception):
    pass


@dataclass
class ExperimentRecord:
    command: str
    parameters: dict
    result: dict = field(default_factory=dict)
    runtime: float = 0.0
    budget_used: int = 0
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, default=str)


# ----------------------------------------------------------------- parsing


def parse_factor(text: str) -> MarkedGroupSpec:
    """``cyclic:3``, ``z`` or ``<family>:<k>`` for a free-product factor."""
    name, _, arg = text.partition(":")
    try:
        if name == "cyclic":
            return G.cyclic(int(arg))
        if name == "z":
            return G.plain_z()
        fam = Family(name)
        return MarkedGroupSpec(fam, k=int(arg) if arg else 3)
    except ValueError as exc:
        raise DomainError(f"bad factor {text!r}: {exc}") from None


def spec_from_args(args) -> MarkedGroupSpec:
    name, _, arg = args.family.partition(":")
    try:
        fam = Family(name)
    except ValueError:
        raise DomainError(f"unknown family {name!r}; choose from {[f.value for f in Family]}") from None
    if fam is Family.FREE_PRODUCT:
        if not (args.left and args.right):
            raise DomainError("free-product needs --left and --right")
        return G.free_product(parse_factor(args.left), parse_factor(args.right))
    if fam is Family.CYCLIC:
        return G.cyclic(int(arg or args.k))
    if fam in (Family.GAMMA_SEC2, Family.DELTA_SEC2, Family.ZXZ, Family.ZSEMIZ, Family.PLAIN_Z):
        return MarkedGroupSpec(fam)
    return MarkedGroupSpec(fam, k=args.k)


def shape_from_args(args):
    given = [(C.Cycle, args.cycle), (C.Segment, args.segment), (C.Ball, args.ball)]
    given = [(cls, v) for cls, v in given if v is not None]
    if len(given) != 1:
        raise DomainError("give exactly one of --cycle, --segment, --ball")
    cls, v = given[0]
    return cls(v)


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None}


def _emit(record: ExperimentRecord, args) -> None:
    text = record.to_json()
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(text)


# ---------------------------------------------------------------- commands


def cmd_build(args) -> int:
    t0 = time.perf_counter()
    g = C.build(spec_from_args(args), shape_from_args(args))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(g.to_dot())
    rec = ExperimentRecord("build", _params(args), {
        "vertices": g.n, "edges": len(g.edges()), "max_degree": g.max_degree(),
    }, time.perf_counter() - t0)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(g.to_json() + "\n")
    print(rec.to_json())
    return EXIT_OK


def cmd_chi(args) -> int:
    t0 = time.perf_counter()
    g = C.build(spec_from_args(args), shape_from_args(args))
    res = chromatic_number(g, budget=args.budget, threads=args.threads)
    result = res.to_json()
    if args.json and res.certificate is not None:
        cert = args.json + ".coloring.json"
        with open(cert, "w") as fh:
            fh.write(json.dumps({"palette": res.chi, "colors": list(res.certificate)}) + "\n")
        result["certificate_path"] = cert
    rec = ExperimentRecord("chi", _params(args), result, time.perf_counter() - t0, res.nodes)
    _emit(rec, args)
    return EXIT_BUDGET if res.budget_hit else EXIT_OK


def _iso_pair(family: Family, k: int, L: int) -> tuple:
    if family in (Family.GAMMA_SEC2, Family.DELTA_SEC2):
        src, dst = G.gamma_sec2(), G.delta_sec2()
        f = iso.phi_sec2
    else:
        src, dst = G.gamma_k(k), G.delta_k(k)

        def f(v):
            return iso.phi_k(v, k)

    gs, gd = C.build(src, C.Segment(L)), C.build(dst, C.Segment(L))
    return iso.verify_isomorphism(gs, gd, f)


def cmd_iso(args) -> int:
    t0 = time.perf_counter()
    fam = Family(args.family.partition(":")[0])
    if fam not in (Family.GAMMA_SEC2, Family.DELTA_SEC2, Family.GAMMA_K, Family.DELTA_K):
        raise DomainError("iso is defined for the fiber families")
    L = args.segment or 40
    bad = _iso_pair(fam, args.k, L)
    rec = ExperimentRecord("iso", _params(args), {
        "violations": [v.to_json() for v in bad], "count": len(bad),
    }, time.perf_counter() - t0)
    _emit(rec, args)
    return EXIT_FAIL if bad else EXIT_OK


COLORERS = {
    Family.GAMMA_SEC2: (K.color_transversal_sec2, lambda k: 1, "graph"),
    Family.GAMMA_K: (K.color_gamma_k, lambda k: k, "graph"),
    Family.DELTA_K: (K.color_delta_k, lambda k: 3 * (k - 1), "graph"),
    Family.GAMMA_PRIME_K: (K.color_gamma_prime_k, lambda k: (2 * k - 1) ** 2, "line"),
    Family.DELTA_PRIME_K: (K.color_delta_prime_k, K.delta_prime_spacing, "line"),
}


def run_colorer(g, N=None, seed=None):
    fam = g.spec.family
    if fam not in COLORERS:
        raise DomainError(f"no colorer for family {fam.value}")
    fn, default_n, metric = COLORERS[fam]
    N = N or default_n(g.spec.k)
    order = None
    if seed is not None:
        order = list(range(g.n))
        random.Random(seed).shuffle(order)
    A = greedy_maximal_discrete(g, N, order=order, metric=metric)
    return A, fn(g, A)


def cmd_color(args) -> int:
    t0 = time.perf_counter()
    g = C.build(spec_from_args(args), shape_from_args(args))
    A, c = run_colorer(g, args.anchors_n, args.seed)
    rec = ExperimentRecord("color", _params(args), {
        "anchors": list(A.anchors), "palette": c.palette, "used": sorted(c.used()),
        "coloring": json.loads(c.to_json()),
    }, time.perf_counter() - t0)
    _emit(rec, args)
    return EXIT_OK


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    spec = spec_from_args(args)
    g = C.build(spec, shape_from_args(args))
    result = {}
    if spec.family in (Family.GAMMA_SEC2, Family.DELTA_SEC2, Family.GAMMA_K, Family.DELTA_K):
        palette = args.palette or spec.fiber_size
        c, nodes = k_colorable(g, palette, budget=args.budget, threads=args.threads)
        if c is None:
            result["colorable"] = False
        else:
            full = [n for n in range(g.meta["levels"]) if S._full_level(g, c, n)]
            result["tau"] = {n: str(S.extract_tau(g, c, n)) for n in full}
            result["law_violations"] = S.audit_tau_law(g, c, skip_partial=True)
    elif spec.family in (Family.GAMMA_PRIME_K, Family.DELTA_PRIME_K):
        palette = args.palette or spec.k
        c, nodes = k_colorable(g, palette, budget=args.budget, threads=args.threads)
        if c is None:
            result["colorable"] = False
        else:
            prof = S.extract_delta(c, palette)
            result["delta_values"] = sorted(prof.distinct())
            result["skipped"] = prof.skipped
    else:
        rep = S.blocks_and_gallai(g)
        result = {"blocks": [[g.label_str(v) for v in b] for b in rep.blocks],
                  "kinds": rep.kinds, "is_gallai_tree": rep.is_gallai_tree}
        nodes = 0
    rec = ExperimentRecord("analyze", _params(args), result, time.perf_counter() - t0, nodes)
    _emit(rec, args)
    return EXIT_OK


def cmd_sample(args) -> int:
    t0 = time.perf_counter()
    spec = spec_from_args(args)
    r = args.ball if args.ball is not None else 3
    x = Sm.sample(spec, Sm.ball_elements(spec, r), args.p, args.seed or 0)
    result = {"configuration": json.loads(x.to_json())}
    if args.radius is not None:
        result["periods"] = [Sm.element_key(g) for g in Sm.window_freeness_check(x, args.radius)]
    rec = ExperimentRecord("sample", _params(args), result, time.perf_counter() - t0)
    _emit(rec, args)
    return EXIT_OK


# --------------------------------------------------------------- reproduce

HEADER = ["table", "k", "check", "instance", "value", "expected", "ok"]


def table_headline(budget: int, threads: int) -> list:
    rows = []
    for k in (3, 4, 5):
        m = 2 * k + 1
        for fam, want in ((Family.GAMMA_K, k), (Family.DELTA_K, k + 1)):
            g = C.build(MarkedGroupSpec(fam, k=k), C.Cycle(m))
            res = chromatic_number(g, budget=budget, threads=threads)
            if res.budget_hit:
                raise BudgetExhausted(f"budget exhausted on {fam.value} k={k} m={m}", res.nodes)
            rows.append(["headline", k, f"chi {fam.value}", f"cycle {m}", res.chi, want])
        bad = _iso_pair(Family.GAMMA_K, k, 40)
        rows.append(["headline", k, "iso violations", "segment 40", len(bad), 0])
    return rows


def table_iso() -> list:
    rows = [["iso", 3, "sec2 violations", "segment 40", len(_iso_pair(Family.GAMMA_SEC2, 3, 40)), 0]]
    for k in range(3, 7):
        rows.append(["iso", k, "violations", "segment 40", len(_iso_pair(Family.GAMMA_K, k, 40)), 0])
    return rows


def table_tau_laws(budget: int) -> list:
    rows = []
    for spec in (G.gamma_k(3), G.delta_k(3)):
        g = C.build(spec, C.Segment(8))
        bad = [0]

        def visit(c, g=g, bad=bad):
            if S.audit_tau_law(g, c):
                bad[0] += 1

        n = enumerate_colorings(g, 3, visit, budget)
        rows.append(["tau-laws", 3, f"{spec.family.value} colorings", "segment 8", n, n])
        rows.append(["tau-laws", 3, f"{spec.family.value} exceptions", "segment 8", bad[0], 0])
    return rows


def table_delta_law(budget: int) -> list:
    g = C.build(G.gamma_prime_k(3), C.Segment(14))
    bad = [0]

    def visit(c):
        if len(S.extract_delta(c, 3).distinct()) != 1:
            bad[0] += 1

    n = enumerate_colorings(g, 3, visit, budget)
    return [["delta-law", 3, "colorings", "segment 14", n, n],
            ["delta-law", 3, "non-constant delta", "segment 14", bad[0], 0]]


def table_gallai() -> list:
    g = C.free_product_ball(G.cyclic(3), G.cyclic(4), 2)
    rep = S.blocks_and_gallai(g)
    kinds = sorted(set(rep.kinds))
    return [["gallai", "", "block kinds", "C3*C4 ball 2", " ".join(kinds), "C4 K2 K3"],
            ["gallai", "", "gallai tree", "C3*C4 ball 2", rep.is_gallai_tree, False]]


def reproduce_rows(table: str, budget: int = DEFAULT_BUDGET, threads: int = 1) -> list:
    if table == "headline":
        rows = table_headline(budget, threads)
    elif table == "iso":
        rows = table_iso()
    elif table == "tau-laws":
        rows = table_tau_laws(budget)
    elif table == "delta-law":
        rows = table_delta_law(budget)
    elif table == "gallai":
        rows = table_gallai()
    else:
        raise DomainError(f"unknown table {table!r}")
    return [r + [r[4] == r[5]] for r in rows]


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cmd_reproduce(args) -> int:
    t0 = time.perf_counter()
    rows = reproduce_rows(args.table, args.budget, args.threads)
    text = rows_to_csv(rows)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if not r[-1]]
    for r in failed:
        print(f"mismatch: {r[2]} on {r[3]}: got {r[4]}, expected {r[5]}", file=sys.stderr)
    rec = ExperimentRecord("reproduce", _params(args), {"rows": len(rows), "failed": len(failed)},
                           time.perf_counter() - t0)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(rec.to_json() + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", default="gamma-k", help="family name, e.g. gamma-k or cyclic:5")
    common.add_argument("--k", type=int, default=3)
    common.add_argument("--cycle", type=int)
    common.add_argument("--segment", type=int)
    common.add_argument("--ball", type=int)
    common.add_argument("--left", help="free-product factor, e.g. cyclic:3")
    common.add_argument("--right")
    common.add_argument("--anchors-n", type=int, dest="anchors_n")
    common.add_argument("--palette", type=int)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--seed", type=int)
    common.add_argument("--p", type=float, default=0.5)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--dot")
    common.add_argument("--json")
    common.add_argument("--csv")

    parser = argparse.ArgumentParser(prog="markedgroups", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("build", cmd_build), ("chi", cmd_chi), ("iso", cmd_iso), ("color", cmd_color),
                     ("analyze", cmd_analyze)):
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(func=fn)
    p = sub.add_parser("sample", parents=[common])
    p.add_argument("--radius", type=int, help="also list window periods within this radius")
    p.set_defaults(func=cmd_sample)
    p = sub.add_parser("reproduce", parents=[common])
    p.add_argument("table", choices=["headline", "tau-laws", "delta-law", "gallai", "iso"])
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ContractViolation, VerificationFailed) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
