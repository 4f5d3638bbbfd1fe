"""Command-line experiment runner with reproducible JSON/TSV reports.

    exactkit ext-table    --p 2 --nilpotency 3
    exactkit verify-core  --p 2 --nilpotency 2 --trials 200 --seed 42
    exactkit enumerate    --p 2 --nilpotency 3 --seed 42
    exactkit subcategory  --p 2 --nilpotency 3 --generators 1,2 --variant cov

Exit codes: 0 all checks pass; 1 property violation (witness in the
report); 2 usage/config error; 3 enumeration guard refusal.  All
randomness flows from the single seed through the xorshift64* generator,
so identical configurations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from .errors import BudgetError, ExactKitError, InputError
from .linalg import is_prime
from .modules import (
    CategoryConfig,
    compose,
    identity_morphism,
    morphism_from_coords,
    zero_morphism,
)
from .prng import PRNG_NAME, Xorshift64Star
from . import ext as ext_mod
from . import ses as ses_mod
from . import subfunctors as sf

SCHEMA_PREFIX = "exactkit"
SCHEMA_VERSION = "v1"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class RunConfig:
    __slots__ = ("p", "N", "D", "trials", "seed", "fmt", "out", "workers")

    def __init__(self, p: int, N: int, D: Optional[int], trials: int,
                 seed: int, fmt: str, out: Optional[str], workers: int):
        if not is_prime(p):
            raise InputError("--p must be prime, got %d" % p)
        if N < 1:
            raise InputError("--nilpotency must be >= 1")
        if D is None:
            D = N + 1
        if D < N:
            raise InputError("--max-dim must be >= the nilpotency bound")
        if trials < 0:
            raise InputError("--trials must be >= 0")
        if fmt not in ("json", "tsv"):
            raise InputError("--format must be json or tsv")
        if workers < 1:
            raise InputError("--workers must be >= 1")
        self.p = p
        self.N = N
        self.D = D
        self.trials = trials
        self.seed = seed
        self.fmt = fmt
        self.out = out
        self.workers = workers

    def category(self) -> CategoryConfig:
        return CategoryConfig(self.p, self.N)

    def to_json_obj(self) -> dict:
        # workers is an execution knob, deliberately not part of the
        # report: content must be independent of parallelism
        return {"p": self.p, "nilpotency": self.N, "max_dim": self.D,
                "trials": self.trials, "seed": self.seed,
                "format": self.fmt, "prng": PRNG_NAME}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _tsv(header: List[str], rows: List[List[str]]) -> str:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


# -- ext-table ---------------------------------------------------------------


def cmd_ext_table(cfg: RunConfig) -> int:
    cat = cfg.category()
    table = ext_mod.ext_dims_table(cat)
    if cfg.fmt == "tsv":
        rows = [[str(i), str(j), str(table[(i, j)])]
                for i in range(1, cfg.N + 1) for j in range(1, cfg.N + 1)]
        _emit(_tsv(["i", "j", "dim_ext"], rows), cfg.out)
    else:
        obj = {"schema": "%s.ext-table.%s" % (SCHEMA_PREFIX, SCHEMA_VERSION),
               "config": cfg.to_json_obj(),
               "table": [{"i": i, "j": j, "dim": table[(i, j)]}
                         for i in range(1, cfg.N + 1)
                         for j in range(1, cfg.N + 1)]}
        _emit(_canonical_json(obj), cfg.out)
    return EXIT_OK


# -- verify-core -------------------------------------------------------------


def _random_partition(rng: Xorshift64Star, max_dim: int, max_part: int) -> tuple:
    parts = sf.partitions_upto(max_dim, max_part)
    return parts[rng.randrange(len(parts))]


def _random_class_seq(rng, skeleton, max_dim):
    c_part = _random_partition(rng, max_dim, skeleton.cfg.N)
    a_part = _random_partition(rng, max_dim, skeleton.cfg.N)
    c_mod = skeleton.canonical(c_part)[0]
    a_mod = skeleton.canonical(a_part)[0]
    basis = ext_mod.ext_basis(c_mod, a_mod)
    coords = tuple(rng.randrange(skeleton.cfg.p) for _ in range(basis.dim))
    return ext_mod.realize(ext_mod.ExtClass(basis, coords)), basis


def _random_hom(rng, src, tgt):
    hb = ext_mod.cached_hom_basis(src, tgt)
    coords = [rng.randrange(src.cfg.p) for _ in hb]
    return morphism_from_coords(src, tgt, hb, coords)


def run_core_suite(cfg: RunConfig, inject_fault: bool = False) -> dict:
    """Randomized verification of the pushout/pullback calculus: identity
    and zero actions, both associativity laws, mixed associativity, Baer
    sum additivity and neutrality, factorization of sequence morphisms,
    and six-term exactness spot checks."""
    cat = cfg.category()
    skeleton = sf.build_skeleton(cat, max(cat.N, 3))
    rng = Xorshift64Star(cfg.seed)
    checks = {name: 0 for name in (
        "identity_action", "zero_action", "cov_assoc", "contra_assoc",
        "mixed_assoc", "baer_additive", "baer_neutral", "factorization",
        "les")}
    failures = []

    def record(name, ok, witness):
        checks[name] += 1
        if not ok:
            failures.append({"check": name, "witness": witness})

    for trial in range(cfg.trials):
        e, basis = _random_class_seq(rng, skeleton, 3)
        coords = ext_mod.classify(e, basis).coords
        # (identity) pushing out or pulling back along identities fixes the class
        pushed, _ = ses_mod.pushout_ses(e, identity_morphism(e.a))
        pulled, _ = ses_mod.pullback_ses(e, identity_morphism(e.c))
        ok = (ext_mod.classify(pushed, basis).coords == coords
              and ext_mod.classify(pulled, basis).coords == coords)
        if inject_fault and trial == 0:
            ok = False
        record("identity_action", ok,
               {"trial": trial, "coords": list(coords)})
        # (zero) zero maps send every class to the split class
        x_part = _random_partition(rng, 3, cat.N)
        x_mod = skeleton.canonical(x_part)[0]
        pushed0, _ = ses_mod.pushout_ses(e, zero_morphism(e.a, x_mod))
        b0 = ext_mod.ext_basis(e.c, x_mod)
        pulled0, _ = ses_mod.pullback_ses(e, zero_morphism(x_mod, e.c))
        b1 = ext_mod.ext_basis(x_mod, e.a)
        record("zero_action",
               ext_mod.classify(pushed0, b0).is_zero()
               and ext_mod.classify(pulled0, b1).is_zero(),
               {"trial": trial, "x": list(x_part)})
        # (cov_assoc) composite pushouts agree with iterated pushouts
        y_mod = skeleton.canonical(_random_partition(rng, 3, cat.N))[0]
        z_mod = skeleton.canonical(_random_partition(rng, 3, cat.N))[0]
        f1 = _random_hom(rng, e.a, y_mod)
        f2 = _random_hom(rng, y_mod, z_mod)
        lhs, _ = ses_mod.pushout_ses(e, compose(f2, f1))
        step, _ = ses_mod.pushout_ses(e, f1)
        rhs, _ = ses_mod.pushout_ses(step, f2)
        bz = ext_mod.ext_basis(e.c, z_mod)
        record("cov_assoc",
               ext_mod.classify(lhs, bz).coords == ext_mod.classify(rhs, bz).coords,
               {"trial": trial})
        # (contra_assoc) composite pullbacks agree with iterated pullbacks
        g1 = _random_hom(rng, y_mod, e.c)
        g2 = _random_hom(rng, z_mod, y_mod)
        lhs2, _ = ses_mod.pullback_ses(e, compose(g1, g2))
        step2, _ = ses_mod.pullback_ses(e, g1)
        rhs2, _ = ses_mod.pullback_ses(step2, g2)
        bz2 = ext_mod.ext_basis(z_mod, e.a)
        record("contra_assoc",
               ext_mod.classify(lhs2, bz2).coords == ext_mod.classify(rhs2, bz2).coords,
               {"trial": trial})
        # (mixed_assoc) pushout and pullback commute on classes
        fmor = _random_hom(rng, e.a, y_mod)
        gmor = _random_hom(rng, z_mod, e.c)
        po_then_pb, _ = ses_mod.pullback_ses(ses_mod.pushout_ses(e, fmor)[0], gmor)
        pb_then_po, _ = ses_mod.pushout_ses(ses_mod.pullback_ses(e, gmor)[0], fmor)
        bmix = ext_mod.ext_basis(z_mod, y_mod)
        record("mixed_assoc",
               ext_mod.classify(po_then_pb, bmix).coords
               == ext_mod.classify(pb_then_po, bmix).coords,
               {"trial": trial})
        # (baer) classify is additive and the split class is neutral
        coords2 = tuple(rng.randrange(cat.p) for _ in range(basis.dim))
        e2 = ext_mod.realize(ext_mod.ExtClass(basis, coords2))
        total = ses_mod.baer_sum(e, e2)
        expected = tuple((x + y) % cat.p for x, y in zip(coords, coords2))
        record("baer_additive",
               ext_mod.classify(total, basis).coords == expected,
               {"trial": trial, "lhs": list(coords), "rhs": list(coords2)})
        neutral = ses_mod.baer_sum(e, ses_mod.split_ses(e.c, e.a))
        record("baer_neutral",
               ext_mod.classify(neutral, basis).coords == coords,
               {"trial": trial})
        # (factorization) a two-sided morphism of sequences factors through
        # its pushout, matching both the pushout and pullback classes
        hmor = _random_hom(rng, z_mod, e.c)
        fmor2 = _random_hom(rng, e.a, y_mod)
        pb, mor_in = ses_mod.pullback_ses(e, hmor)
        push, mor_out = ses_mod.pushout_ses(e, fmor2)
        mor = ses_mod.compose_ses_morphisms(mor_out, mor_in)
        first, second = ses_mod.factor_ses_morphism(mor)
        bmid = ext_mod.ext_basis(pb.c, y_mod)
        mid_coords = ext_mod.classify(first.tgt, bmid).coords
        via_push = ext_mod.classify(ses_mod.pushout_ses(pb, mor.f)[0],
                                    bmid).coords
        via_pull = ext_mod.classify(ses_mod.pullback_ses(push, mor.h)[0],
                                    bmid).coords
        record("factorization",
               mid_coords == via_push == via_pull,
               {"trial": trial, "mid": list(mid_coords)})
        # (les) six-term exactness at a random test object
        if trial % 10 == 0:
            rep = ext_mod.verify_les(e, x_mod)
            record("les", rep.all_pass, {"trial": trial,
                                         "failures": rep.failures()})
    status = "pass" if not failures else "fail"
    if cfg.trials == 0:
        status = "vacuous-pass"
    return {"schema": "%s.verify-core.%s" % (SCHEMA_PREFIX, SCHEMA_VERSION),
            "config": cfg.to_json_obj(),
            "checks": checks,
            "failures": failures[:16],
            "status": status}


def cmd_verify_core(cfg: RunConfig, inject_fault: bool = False) -> int:
    report = run_core_suite(cfg, inject_fault)
    if cfg.fmt == "tsv":
        rows = [[name, str(count),
                 "pass" if not any(f["check"] == name for f in report["failures"])
                 else "fail"]
                for name, count in sorted(report["checks"].items())]
        _emit(_tsv(["check", "instances", "status"], rows), cfg.out)
    else:
        _emit(_canonical_json(report), cfg.out)
    if report["status"] == "vacuous-pass":
        sys.stderr.write("warning: trials=0, suite passed vacuously\n")
    return EXIT_OK if report["status"] != "fail" else EXIT_VIOLATION


# -- enumerate ---------------------------------------------------------------


def _subfunctor_row(args) -> dict:
    idx, F, seed, tbt_budget = args
    closed_rep = sf.is_closed(F, "both")
    verdict = sf.check_fclass(F, sf.FclassBudget(seed=seed))
    tbt = sf.check_3x3(F, budget=tbt_budget, seed=seed)
    projs = sf.relative_projectives(F, verify=True)
    injs = sf.relative_injectives(F, verify=True)
    enough_p = sf.has_enough_projectives(F)
    enough_i = sf.has_enough_injectives(F)
    closed = closed_rep.closed
    agree = closed == verdict.hf_ok == tbt.ok
    return {
        "index": idx,
        "value_dims": F.name(),
        "U": F.to_json_obj(),
        "valid": True,
        "closed_left": closed_rep.left_ok,
        "closed_right": closed_rep.right_ok,
        "closed": closed,
        "hf_axioms": verdict.to_json_obj(),
        "hf": verdict.hf_ok,
        "tbt": tbt.to_json_obj(),
        "tbt_ok": tbt.ok,
        "main_theorem_agree": agree,
        "left_right_agree": closed_rep.left_ok == closed_rep.right_ok,
        "enough_proj": enough_p.verdict,
        "enough_inj": enough_i.verdict,
        "proj": projs,
        "inj": injs,
        "enough_proj_implies_closed": (not enough_p.is_true) or closed,
    }


def run_enumeration(cfg: RunConfig, tbt_budget: int = 200) -> dict:
    cat = cfg.category()
    skeleton = sf.build_skeleton(cat, cfg.D)
    subs = sf.enumerate_subfunctors(skeleton)
    jobs = [(idx, F, cfg.seed, tbt_budget) for idx, F in enumerate(subs)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_subfunctor_row, jobs))
    else:
        rows = [_subfunctor_row(job) for job in jobs]
    rows.sort(key=lambda r: r["index"])
    all_agree = all(r["main_theorem_agree"] for r in rows)
    all_lr = all(r["left_right_agree"] for r in rows)
    all_ep = all(r["enough_proj_implies_closed"] for r in rows)
    return {"schema": "%s.enumerate.%s" % (SCHEMA_PREFIX, SCHEMA_VERSION),
            "config": cfg.to_json_obj(),
            "tbt_budget": tbt_budget,
            "count": len(rows),
            "subfunctors": rows,
            "all_main_theorem_agree": all_agree,
            "all_left_right_agree": all_lr,
            "all_enough_proj_implies_closed": all_ep,
            "status": "pass" if (all_agree and all_lr and all_ep) else "fail"}


def cmd_enumerate(cfg: RunConfig) -> int:
    try:
        report = run_enumeration(cfg)
    except BudgetError as exc:
        sys.stderr.write("refused: %s\n" % exc)
        return EXIT_BUDGET
    if cfg.fmt == "tsv":
        header = ["index", "value_dims", "valid", "closed_left", "closed_right",
                  "closed", "hf", "tbt_ok", "agree", "enough_proj",
                  "enough_inj", "proj", "inj"]
        rows = []
        for r in report["subfunctors"]:
            rows.append([str(r["index"]), r["value_dims"] or "-",
                         str(r["valid"]).lower(),
                         str(r["closed_left"]).lower(),
                         str(r["closed_right"]).lower(),
                         str(r["closed"]).lower(), str(r["hf"]).lower(),
                         str(r["tbt_ok"]).lower(),
                         str(r["main_theorem_agree"]).lower(),
                         r["enough_proj"], r["enough_inj"],
                         ",".join(map(str, r["proj"])) or "-",
                         ",".join(map(str, r["inj"])) or "-"])
        _emit(_tsv(header, rows), cfg.out)
    else:
        _emit(_canonical_json(report), cfg.out)
    return EXIT_OK if report["status"] == "pass" else EXIT_VIOLATION


# -- subcategory -------------------------------------------------------------


def run_subcategory(cfg: RunConfig, generators: List[int], variant: str) -> dict:
    cat = cfg.category()
    skeleton = sf.build_skeleton(cat, cfg.D)
    gens = [skeleton.indec[k] for k in generators]
    F = sf.subfunctor_from_subcategory(
        skeleton, gens, "cov" if variant == "cov" else "contra")
    closed_rep = sf.is_closed(F, "both")
    projs = sf.relative_projectives(F, verify=True)
    injs = sf.relative_injectives(F, verify=True)
    enough_p = sf.has_enough_projectives(F)
    enough_i = sf.has_enough_injectives(F)
    return {"schema": "%s.subcategory.%s" % (SCHEMA_PREFIX, SCHEMA_VERSION),
            "config": cfg.to_json_obj(),
            "generators": list(generators),
            "variant": variant,
            "U": F.to_json_obj(),
            "value_dims": F.name(),
            "closed": closed_rep.closed,
            "closed_left": closed_rep.left_ok,
            "closed_right": closed_rep.right_ok,
            "proj": projs,
            "inj": injs,
            "enough_proj": enough_p.verdict,
            "enough_inj": enough_i.verdict,
            "status": "pass" if closed_rep.closed else "fail"}


def cmd_subcategory(cfg: RunConfig, generators: List[int], variant: str) -> int:
    for k in generators:
        if not 1 <= k <= cfg.N:
            raise InputError("generator index %d outside 1..%d" % (k, cfg.N))
    if not generators:
        raise InputError("--generators must name at least one indecomposable")
    report = run_subcategory(cfg, generators, variant)
    if cfg.fmt == "tsv":
        rows = [[report["value_dims"] or "-", str(report["closed"]).lower(),
                 ",".join(map(str, report["proj"])) or "-",
                 ",".join(map(str, report["inj"])) or "-",
                 report["enough_proj"], report["enough_inj"]]]
        _emit(_tsv(["value_dims", "closed", "proj", "inj", "enough_proj",
                    "enough_inj"], rows), cfg.out)
    else:
        _emit(_canonical_json(report), cfg.out)
    return EXIT_OK if report["status"] == "pass" else EXIT_VIOLATION


# -- argument plumbing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exactkit",
        description="Executable homological algebra over F_p[x]/(x^N).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ext-table", "verify-core", "enumerate", "subcategory"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--p", type=int, default=2)
        cmd.add_argument("--nilpotency", type=int, default=2)
        cmd.add_argument("--max-dim", type=int, default=None)
        cmd.add_argument("--trials", type=int, default=100)
        cmd.add_argument("--seed", type=int, default=42)
        cmd.add_argument("--format", choices=("json", "tsv"), default="json")
        cmd.add_argument("--out", default=None)
        cmd.add_argument("--workers", type=int, default=1)
        if name == "verify-core":
            cmd.add_argument("--inject-fault", action="store_true",
                             help="negative control: corrupt one check to "
                                  "prove failures are reported")
        if name == "subcategory":
            cmd.add_argument("--generators", default="",
                             help="comma-separated indecomposable indices")
            cmd.add_argument("--variant", choices=("cov", "contra"),
                             default="cov")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(ns.p, ns.nilpotency, ns.max_dim, ns.trials, ns.seed,
                        ns.format, ns.out, ns.workers)
        if ns.command == "ext-table":
            return cmd_ext_table(cfg)
        if ns.command == "verify-core":
            return cmd_verify_core(cfg, inject_fault=ns.inject_fault)
        if ns.command == "enumerate":
            return cmd_enumerate(cfg)
        if ns.command == "subcategory":
            gens = [int(tok) for tok in ns.generators.split(",") if tok.strip()]
            return cmd_subcategory(cfg, gens, ns.variant)
        raise InputError("unknown command %r" % ns.command)
    except (InputError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except BudgetError as exc:
        sys.stderr.write("refused: %s\n" % exc)
        return EXIT_BUDGET
    except ExactKitError as exc:
        sys.stderr.write("defect: %s\n" % exc)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
