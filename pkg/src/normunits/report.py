"""Verification runs over a catalog and their deterministic reports."""

from __future__ import annotations

import io
import json
import logging
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, catalog, engine
from . import group_core as gc
from .catalog import CatalogEntry
from .engine import ExponentResult
from .errors import AnomalyError, NormUnitsError, PreconditionError
from .group_core import Group
from .theorem import (
    CheckOutcome,
    PredicateVerdict,
    corollary1_check,
    decomposition_search,
    lemma1_subgroup_classification,
    lemma2_check,
    lemma2_hypotheses,
    lemma3_closure_check,
    lemma4_witness,
    omega_cubed_vanishes,
    proof_case_witnesses,
    theorem_predicate,
)

log = logging.getLogger(__name__)

SUITES = ("structure", "exponent", "theorem", "lemmas", "witnesses")
FORMATS = ("tsv", "jsonl")
COLUMNS = (
    "label", "order", "class", "|G'|", "|Phi|", "Phi_central", "Phi_elem_ab",
    "predicted_exp4", "method", "exponent", "agreement",
)


@dataclass
class RunConfig:
    suites: tuple[str, ...] = SUITES
    max_exhaustive_order: int = 16
    sample_count: int = 10_000
    seed: int = 0
    threads: int = 1
    catalog_paths: tuple[str, ...] = ()
    output_path: str = "-"
    format: str = "tsv"
    builtin_catalog: tuple[str, ...] = catalog.DEFAULT_CATALOG

    def __post_init__(self):
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {', '.join(sorted(unknown))}")
        self.suites = tuple(s for s in SUITES if s in self.suites)
        if self.max_exhaustive_order not in (8, 16, 32):
            raise ValueError("max_exhaustive_order must be 8, 16 or 32")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.sample_count < 1:
            raise ValueError("sample count must be >= 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    def echo(self) -> dict:
        # threads and output path are left out: they must not change the bytes
        return {
            "suites": ",".join(self.suites),
            "max_exhaustive_order": self.max_exhaustive_order,
            "samples": self.sample_count,
            "seed": self.seed,
            "catalog": ",".join(["builtin", *self.catalog_paths]),
        }


@dataclass
class Row:
    name: str
    group: Group
    verdict: PredicateVerdict
    result: ExponentResult | None = None

    def evaluate(self):
        self.verdict = theorem_predicate(self.group, self.result)
        self.verdict.group_label = self.name

    def fields(self) -> dict:
        v, r = self.verdict, self.result
        if r is None:
            method, exp = None, None
        else:
            method = r.method
            exp = str(r.exponent) if r.exact else f">={r.exponent}"
        return {
            "label": v.group_label,
            "order": v.order,
            "class": v.nilpotency_class,
            "|G'|": v.derived_order,
            "|Phi|": v.frattini_order,
            "Phi_central": v.frattini_central,
            "Phi_elem_ab": v.frattini_elem_abelian,
            "predicted_exp4": v.predicted_exp4,
            "method": method,
            "exponent": exp,
            "agreement": v.agreement,
        }


@dataclass
class VerificationReport:
    config: RunConfig
    rows: list[Row] = field(default_factory=list)
    checks: list[tuple[str, CheckOutcome]] = field(default_factory=list)

    def add(self, suite: str, outcome: CheckOutcome):
        self.checks.append((suite, outcome))

    @property
    def failures(self) -> list[CheckOutcome]:
        return [c for _, c in self.checks if c.status == "fail"]

    @property
    def anomalies(self) -> list[CheckOutcome]:
        return [c for _, c in self.checks if c.status == "anomaly"]

    def exit_code(self) -> int:
        if self.anomalies:
            return 3
        if self.failures:
            return 1
        return 0


# --- suites --------------------------------------------------------------------


def _e1_failures(G: Group) -> int:
    """Triples violating (a,bc)=(a,b)(a,c)((a,b),c) or (ab,c)=(a,c)((a,c),b)(b,c)."""
    t, inv, n = G.table, G.inverse, G.order
    bad = 0
    b, c = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")

    def comm(x, y):
        return t[t[inv[x], inv[y]], t[x, y]]

    for a in range(n):
        ab, ac = comm(a, b), comm(a, c)
        lhs1 = comm(np.full_like(b, a), t[b, c])
        rhs1 = t[t[ab, ac], comm(ab, c)]
        lhs2 = comm(t[a, b], c)
        rhs2 = t[t[ac, comm(ac, b)], comm(b, c)]
        bad += int((lhs1 != rhs1).sum() + (lhs2 != rhs2).sum())
    return bad


def _structure_suite(report: VerificationReport, entries: list[CatalogEntry]):
    add = lambda o: report.add("structure", o)  # noqa: E731
    for name, (gens, rels) in catalog.DISPLAYED.items():
        P = catalog.Presentation.from_strings(gens.split(), rels)
        got = catalog.from_presentation(P).order
        want = catalog.DISPLAYED_ORDERS[name]
        status = "pass" if got == want else "flag"
        add(CheckOutcome(f"displayed-presentation:{name}", status, f"order {got}, subscript {want}"))

    iso = [
        ("G16_4", catalog.c4_by_c4(), "C4:C4"),
        ("G16_3", catalog.builtin("CaseA").group, "CaseA"),
        ("G32_2", catalog.builtin("Case2").group, "Case2"),
        ("G16_4", catalog.builtin("Case4").group, "Case4"),
        ("G32_6", catalog.builtin("Case74").group, "Case74"),
    ]
    for name, H, what in iso:
        ok = gc.is_isomorphic(catalog.builtin(name).group, H)
        add(CheckOutcome.of(f"identify:{what}~{name}", ok))
    caseb = catalog.builtin("CaseB").group
    ok = gc.is_isomorphic(caseb, catalog.builtin("G16_3").group)
    add(CheckOutcome("identify:CaseB~G16_3", "pass" if ok else "flag", f"|CaseB|={caseb.order}"))

    for e in entries:
        G = e.group
        if e.expected_order is not None:
            add(CheckOutcome.of(f"expected-order:{e.name}", G.order == e.expected_order))
        if G.order > gc.MAX_SUBGROUP_ORDER:
            continue
        subs = [gc.derived_subgroup(G), gc.frattini(G), gc.center(G)]
        add(CheckOutcome.of(f"lagrange:{e.name}", all(G.order % len(s) == 0 for s in subs)))
        add(CheckOutcome.of(f"derived-in-frattini:{e.name}", subs[0].issubset(subs[1])))
        maxes = gc.maximal_subgroups(G)
        inter = set(range(G.order))
        for M in maxes:
            inter &= set(M.members)
        add(CheckOutcome.of(f"frattini=intersection-of-maximals:{e.name}", tuple(sorted(inter)) == subs[1].members))
        add(CheckOutcome.of(f"commutator-identities:{e.name}", _e1_failures(G) == 0))


def _exponent_for(G: Group, config: RunConfig) -> ExponentResult:
    if G.order <= config.max_exhaustive_order:
        if G.order == 32:
            est = engine.estimate_walk_seconds(G, config.threads)
            print(f"heavy mode: walking 2^31 units of {G.label}, estimated {est:.0f} s", file=sys.stderr)
        return engine.exponent_exhaustive(G, config.threads)
    r = engine.exponent_sampled(G, config.sample_count, config.seed, config.threads)
    if r.exponent <= 4:
        w = engine.find_order_witness(G, 8, random_budget=0, seed=config.seed)
        if w is not None:
            from .algebra import unit_order

            return ExponentResult(G.label, "witness", unit_order(w), w, r.samples, r.seed)
    return r


def _exponent_suite(report: VerificationReport, config: RunConfig):
    for row in report.rows:
        G = row.group
        row.result = _exponent_for(G, config)
        r = row.result
        if r.exact and G.is_abelian:
            report.add("exponent", CheckOutcome.of(
                f"abelian-law:{G.label}", r.exponent == gc.exponent(G), f"exp V={r.exponent}, exp G={gc.exponent(G)}"))
        if r.exact and not G.is_abelian:
            report.add("exponent", CheckOutcome.of(f"nonabelian-at-least-4:{G.label}", r.exponent >= 4))
        if r.exact and G.order <= 16:
            s = engine.exponent_sampled(G, config.sample_count, config.seed, config.threads)
            report.add("exponent", CheckOutcome.of(
                f"sampled-matches-exhaustive:{G.label}", s.exponent == r.exponent, f"sampled {s.exponent}"))


def _theorem_suite(report: VerificationReport, config: RunConfig):
    for row in report.rows:
        G = row.group
        row.evaluate()
        v = row.verdict
        if v.agreement is None:
            report.add("theorem", CheckOutcome(f"agreement:{G.label}", "n/a", "exponent not decisive"))
        else:
            report.add("theorem", CheckOutcome.of(f"agreement:{G.label}", v.agreement))
        if G.order <= gc.MAX_SUBGROUP_ORDER:
            found = decomposition_search(G) is not None
            report.add("theorem", CheckOutcome.of(
                f"decomposition-equivalence:{G.label}", found == v.predicted_exp4, f"decomposition {'found' if found else 'absent'}"))
        if row.result is not None and row.result.exact and row.result.exponent == 4 and not G.is_abelian:
            report.add("theorem", corollary1_check(G))


def _lemmas_suite(report: VerificationReport, config: RunConfig):
    add = lambda o: report.add("lemmas", o)  # noqa: E731
    kw = dict(samples=config.sample_count, seed=config.seed, threads=config.threads)
    for row in report.rows:
        G = row.group
        exact4 = row.result is not None and row.result.exact and row.result.exponent == 4
        if exact4 and not G.is_abelian and G.order <= gc.MAX_SUBGROUP_ORDER:
            add(lemma1_subgroup_classification(G))
        if lemma2_hypotheses(G):
            add(lemma2_check(G, max_exhaustive_order=config.max_exhaustive_order, **kw))
    D8xD8 = catalog.builtin("D8xD8").group
    add(CheckOutcome.of("lemma2:omega(F[C2xC2])^3=0", omega_cubed_vanishes(gc.derived_subgroup(D8xD8))))
    for h in ("D8", "Q8"):
        for k in (2, 4):
            add(lemma3_closure_check(catalog.builtin(h).group, k, max_exhaustive_order=config.max_exhaustive_order, **kw))
    for name in ("E64", "D8xD8xD8"):
        G = catalog.builtin(name).group
        try:
            from .algebra import unit_order

            w = lemma4_witness(G, seed=config.seed)
            add(CheckOutcome("lemma4:" + name, "pass", f"unit of order {unit_order(w)} with support {w.support()}"))
        except PreconditionError as err:
            add(CheckOutcome("lemma4:" + name, "n/a", str(err)))
        except AnomalyError as err:
            add(CheckOutcome("lemma4:" + name, "anomaly", str(err)))


def _witness_suite(report: VerificationReport):
    for o in proof_case_witnesses():
        report.add("witnesses", o)


def load_entries(config: RunConfig) -> list[CatalogEntry]:
    entries = [catalog.builtin(n) for n in config.builtin_catalog]
    for path in config.catalog_paths:
        try:
            entries.append(catalog.load_catalog_file(path))
        except NormUnitsError as err:
            err.path = path
            raise
    entries.sort(key=lambda e: (e.group.order, e.name))
    return entries


def run(config: RunConfig, entries: list[CatalogEntry] | None = None) -> VerificationReport:
    """Execute the selected suites in their fixed order."""
    if entries is None:
        entries = load_entries(config)
    engine.set_threads(config.threads)
    report = VerificationReport(config)
    suites = set(config.suites)
    if suites & {"structure", "exponent", "theorem", "lemmas"}:
        for e in entries:
            row = Row(e.name, e.group, theorem_predicate(e.group))
            row.verdict.group_label = e.name
            report.rows.append(row)
    if "structure" in suites:
        _structure_suite(report, entries)
    if suites & {"exponent", "theorem", "lemmas"}:
        _exponent_suite(report, config)
        for row in report.rows:
            row.evaluate()
    if "theorem" in suites:
        _theorem_suite(report, config)
    if "lemmas" in suites:
        _lemmas_suite(report, config)
    if "witnesses" in suites:
        _witness_suite(report)
    if "exponent" not in suites:
        # exponents computed only as input to later suites are not reported as checks
        report.checks = [(s, c) for s, c in report.checks if s != "exponent"]
    if not suites & {"structure", "exponent", "theorem"}:
        report.rows = []
    return report


# --- output ----------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def format_report(report: VerificationReport) -> str:
    cfg = report.config
    out = io.StringIO()
    echo = cfg.echo()
    if cfg.format == "tsv":
        out.write(f"# normunits {__version__}\n")
        out.write("# " + " ".join(f"{k}={v}" for k, v in echo.items()) + "\n")
        if report.rows:
            out.write("\t".join(COLUMNS) + "\n")
            for row in report.rows:
                f = row.fields()
                out.write("\t".join(_cell(f[c]) for c in COLUMNS) + "\n")
        if report.checks:
            out.write("\n" + "\t".join(("suite", "check", "status", "detail")) + "\n")
            for suite, c in report.checks:
                detail = c.detail if c.exhaustive else f"{c.detail} [non-exhaustive]".strip()
                out.write("\t".join((suite, c.name, c.status, detail or "-")) + "\n")
    else:
        out.write(json.dumps({"type": "header", "tool": "normunits", "version": __version__, **echo}, sort_keys=True) + "\n")
        for row in report.rows:
            out.write(json.dumps({"type": "row", **row.fields()}, sort_keys=True) + "\n")
        for suite, c in report.checks:
            out.write(json.dumps({"type": "check", "suite": suite, "check": c.name, "status": c.status,
                                  "detail": c.detail, "exhaustive": c.exhaustive}, sort_keys=True) + "\n")
    return out.getvalue()


def emit_report(report: VerificationReport, path: str | None = None):
    text = format_report(report)
    path = path if path is not None else report.config.output_path
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
