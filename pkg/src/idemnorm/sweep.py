"""Exhaustive classification of subsets of a small group, up to translation.

For each canonical subset the sweep joins the structural analysis with the
computed norm (character sums on abelian groups, Schur-norm brackets
otherwise) and the structure-predicted norm, then asserts the classification
theorems at the requested tolerance:

  * a norm below (1+sqrt2)/2 only occurs for cosets, whose norm is 1;
  * on abelian groups a norm strictly inside (1, 4/3) only occurs for unions
    of two cosets, whose norm matches the closed form in the relative order.

Any counterexample is reported as a violation; subsets of kind "other" whose
norm sits at 4/3 are collected as extremal examples.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bs import THRESHOLDS, bs_norm, predicted_norm, two_coset_norm, verify_measure_form
from .groups import (
    CosetAnalysis,
    Group,
    analyze_cosets,
    is_subgroup,
    make_abelian_group,
    parse_group,
    subset_elements,
    subset_mask,
    translate_left,
    translate_right,
)
from .multiplier import cb_norm, forbidden_pattern_search, multiplier_matrix
from .schur import check_certificate, forbidden_pattern, gamma2, orthogonal_witness, witness_lower_bound
from .witness import WitnessTriple, find_witness, sup_norm_check, witness_integral, witness_norm_bound

SWEEP_ORDER_CAP = 24
DEFAULT_TOL_EXACT = 1e-9
DEFAULT_TOL_SCHUR = 5e-3


def orbit(group: Group, mask: int) -> set[int]:
    """All translates of S: left translates for abelian groups, two-sided
    translates otherwise (norms are invariant under both)."""
    if group.is_abelian:
        return {translate_left(group, t, mask) for t in group.elements()}
    out = set()
    for t in group.elements():
        left = translate_left(group, t, mask)
        for u in group.elements():
            out.add(translate_right(group, left, u))
    return out


def canonical_form(group: Group, mask: int) -> int:
    """Smallest bitmask in the translation orbit of S; idempotent."""
    return min(orbit(group, mask))


@dataclass(frozen=True)
class ClassificationRecord:
    subset: int
    orbit_size: int
    analysis: CosetAnalysis
    norm_lower: float
    norm_upper: float
    norm_exact: bool
    predicted: Optional[float]
    below_coset_bound: bool
    in_open_interval: bool
    extremal_other: bool
    witness: Optional[WitnessTriple]
    witness_bound: Optional[float]
    pattern: Optional[tuple[tuple[int, int, int], tuple[int, int, int]]]

    def to_dict(self) -> dict:
        return {
            "subset": subset_elements(self.subset),
            "orbit_size": self.orbit_size,
            "analysis": self.analysis.to_dict(),
            "norm_lower": self.norm_lower,
            "norm_upper": self.norm_upper,
            "norm_exact": self.norm_exact,
            "predicted": self.predicted,
            "below_coset_bound": self.below_coset_bound,
            "in_open_interval": self.in_open_interval,
            "extremal_other": self.extremal_other,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "witness_bound": self.witness_bound,
            "pattern": None if self.pattern is None else
                       [list(self.pattern[0]), list(self.pattern[1])],
        }

    @staticmethod
    def from_dict(data: dict) -> "ClassificationRecord":
        witness = data.get("witness")
        pattern = data.get("pattern")
        return ClassificationRecord(
            subset=sum(1 << int(i) for i in data["subset"]),
            orbit_size=int(data["orbit_size"]),
            analysis=CosetAnalysis.from_dict(data["analysis"]),
            norm_lower=float(data["norm_lower"]),
            norm_upper=float(data["norm_upper"]),
            norm_exact=bool(data["norm_exact"]),
            predicted=None if data.get("predicted") is None else float(data["predicted"]),
            below_coset_bound=bool(data["below_coset_bound"]),
            in_open_interval=bool(data["in_open_interval"]),
            extremal_other=bool(data["extremal_other"]),
            witness=None if witness is None else WitnessTriple(**witness),
            witness_bound=(None if data.get("witness_bound") is None
                           else float(data["witness_bound"])),
            pattern=None if pattern is None else
                    (tuple(pattern[0]), tuple(pattern[1])),
        )


def classify(group: Group, mask: int, tol: Optional[float] = None,
             use_cb: Optional[bool] = None) -> ClassificationRecord:
    """Full per-subset report: structure, norm, prediction, witness, pattern."""
    if use_cb is None:
        use_cb = not group.is_abelian
    if tol is None:
        tol = DEFAULT_TOL_SCHUR if use_cb else DEFAULT_TOL_EXACT
    analysis = analyze_cosets(group, mask)
    if use_cb:
        bounds = cb_norm(group, mask)
        lower, upper, exact = bounds.lower, bounds.upper, False
    else:
        value = bs_norm(group, mask)
        lower = upper = value
        exact = True
    predicted = predicted_norm(analysis)
    witness = find_witness(group, mask) if group.is_abelian else None
    bound = witness_norm_bound(group, mask, witness) if witness is not None else None
    pattern = forbidden_pattern_search(group, mask)
    c1, c2 = THRESHOLDS.coset_bound, THRESHOLDS.two_coset_bound
    return ClassificationRecord(
        subset=mask,
        orbit_size=len(orbit(group, mask)),
        analysis=analysis,
        norm_lower=lower,
        norm_upper=upper,
        norm_exact=exact,
        predicted=predicted,
        below_coset_bound=upper < c1 - tol,
        in_open_interval=(lower > 1.0 + tol and upper < c2 - tol),
        extremal_other=(analysis.kind == "other"
                        and lower <= c2 + tol and upper >= c2 - tol),
        witness=witness,
        witness_bound=bound,
        pattern=pattern,
    )


@dataclass(frozen=True)
class SweepViolation:
    rule: str
    subset: int
    detail: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "subset": subset_elements(self.subset), "detail": self.detail}


@dataclass
class SweepReport:
    group_name: str
    order: int
    mode: str  # "character_sum" | "schur"
    tolerance: float
    records: list[ClassificationRecord]
    violations: list[SweepViolation]
    kind_totals: dict
    subset_total: int
    extremal: list[int]
    witness_presence: dict
    wall_time_s: Optional[float] = None

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "group": self.group_name,
            "order": self.order,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "records": [r.to_dict() for r in self.records],
            "violations": [v.to_dict() for v in self.violations],
            "kind_totals": self.kind_totals,
            "subset_total": self.subset_total,
            "extremal": [subset_elements(m) for m in self.extremal],
            "witness_presence": self.witness_presence,
        }
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out

    @staticmethod
    def from_dict(data: dict) -> "SweepReport":
        return SweepReport(
            group_name=data["group"],
            order=int(data["order"]),
            mode=data["mode"],
            tolerance=float(data["tolerance"]),
            records=[ClassificationRecord.from_dict(r) for r in data["records"]],
            violations=[SweepViolation(rule=v["rule"],
                                       subset=sum(1 << int(i) for i in v["subset"]),
                                       detail=v["detail"])
                        for v in data["violations"]],
            kind_totals=data["kind_totals"],
            subset_total=int(data["subset_total"]),
            extremal=[sum(1 << int(i) for i in elems) for elems in data["extremal"]],
            witness_presence=data["witness_presence"],
            wall_time_s=data.get("wall_time_s"),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["subset", "kind", "q", "norm_lower", "norm_upper",
                         "predicted", "orbit_size", "below_coset_bound",
                         "in_open_interval", "extremal_other"])
        for r in self.records:
            writer.writerow([
                " ".join(str(i) for i in subset_elements(r.subset)),
                r.analysis.kind,
                "" if r.analysis.q is None else r.analysis.q,
                repr(r.norm_lower),
                repr(r.norm_upper),
                "" if r.predicted is None else repr(r.predicted),
                r.orbit_size,
                int(r.below_coset_bound),
                int(r.in_open_interval),
                int(r.extremal_other),
            ])
        return buf.getvalue()


def _classify_chunk(group: Group, start: int, stop: int, tol: float,
                    use_cb: bool) -> list[ClassificationRecord]:
    out = []
    for mask in range(start, stop):
        if canonical_form(group, mask) == mask:
            out.append(classify(group, mask, tol, use_cb))
    return out


def _violations_for(group: Group, record: ClassificationRecord, tol: float) -> list[SweepViolation]:
    out = []
    kind = record.analysis.kind
    lower, upper = record.norm_lower, record.norm_upper
    c1, c2 = THRESHOLDS.coset_bound, THRESHOLDS.two_coset_bound
    subset = record.subset
    if kind not in ("coset", "empty") and lower <= c1 - tol:
        out.append(SweepViolation(
            rule="below_coset_threshold",
            subset=subset,
            detail=f"kind={kind} but norm lower bound {lower!r} <= {c1!r} - tol"))
    if group.is_abelian and kind != "two_cosets" and record.in_open_interval:
        out.append(SweepViolation(
            rule="open_interval_not_two_cosets",
            subset=subset,
            detail=f"kind={kind} with norm in ({1 + tol!r}, {c2 - tol!r})"))
    if record.predicted is not None:
        if lower - tol > record.predicted or upper + tol < record.predicted:
            out.append(SweepViolation(
                rule="predicted_norm_mismatch",
                subset=subset,
                detail=f"kind={kind}: bracket [{lower!r}, {upper!r}] "
                       f"misses predicted {record.predicted!r}"))
    return out


def sweep(group: Group, tol: Optional[float] = None, use_cb: Optional[bool] = None,
          workers: int = 1, order_cap: int = SWEEP_ORDER_CAP) -> SweepReport:
    """Classify every subset (one canonical representative per translation
    orbit) and check the classification theorems; see the module docstring for
    the violation rules.  Chunked over bitmask ranges when workers > 1, with a
    deterministic merge, so worker count never changes the report."""
    if group.order > order_cap:
        raise ValueError(f"full sweep capped at order {order_cap}, group has {group.order}")
    if use_cb is None:
        use_cb = not group.is_abelian
    if tol is None:
        tol = DEFAULT_TOL_SCHUR if use_cb else DEFAULT_TOL_EXACT
    started = time.perf_counter()
    total = 1 << group.order
    if workers <= 1:
        records = _classify_chunk(group, 0, total, tol, use_cb)
    else:
        bounds = [total * i // workers for i in range(workers + 1)]
        chunks = [(group, lo, hi, tol, use_cb) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_classify_chunk_star, chunks))
        records = [rec for part in parts for rec in part]

    violations = []
    kind_totals: dict = {}
    witness_presence: dict = {}
    subset_total = 0
    extremal = []
    for record in records:
        kind = record.analysis.kind
        slot = kind_totals.setdefault(kind, {"classes": 0, "subsets": 0})
        slot["classes"] += 1
        slot["subsets"] += record.orbit_size
        subset_total += record.orbit_size
        label = f"two_cosets_q{record.analysis.q}" if kind == "two_cosets" else kind
        wslot = witness_presence.setdefault(label, {"classes": 0, "with_witness": 0})
        wslot["classes"] += 1
        if record.witness is not None:
            wslot["with_witness"] += 1
        violations.extend(_violations_for(group, record, tol))
        if record.extremal_other:
            extremal.append(record.subset)
    return SweepReport(
        group_name=group.name,
        order=group.order,
        mode="schur" if use_cb else "character_sum",
        tolerance=tol,
        records=records,
        violations=violations,
        kind_totals=kind_totals,
        subset_total=subset_total,
        extremal=extremal,
        witness_presence=witness_presence,
        wall_time_s=time.perf_counter() - started,
    )


def _classify_chunk_star(args) -> list[ClassificationRecord]:
    return _classify_chunk(*args)


# -- one-shot verification ------------------------------------------------------

DEFAULT_GROUP_SPECS = ("Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10",
                       "Z2xZ2xZ2", "Z2xZ4", "Z3xZ3", "S3", "D4", "Q8")

AMENABLE_CROSS_CHECK_MAX_ORDER = 6


@dataclass(frozen=True)
class VerificationItem:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}

    @staticmethod
    def from_dict(data: dict) -> "VerificationItem":
        return VerificationItem(name=data["name"], passed=bool(data["passed"]),
                                detail=data["detail"])


@dataclass(frozen=True)
class VerificationSummary:
    items: tuple[VerificationItem, ...]
    passed: bool

    def to_dict(self) -> dict:
        return {"items": [i.to_dict() for i in self.items], "passed": self.passed}

    @staticmethod
    def from_dict(data: dict) -> "VerificationSummary":
        return VerificationSummary(
            items=tuple(VerificationItem.from_dict(i) for i in data["items"]),
            passed=bool(data["passed"]))


def _item(name: str, passed: bool, detail: str) -> VerificationItem:
    return VerificationItem(name=name, passed=bool(passed), detail=detail)


def run_verification(group_specs: Optional[Sequence[str]] = None,
                     tol: float = DEFAULT_TOL_EXACT,
                     schur_tol: float = DEFAULT_TOL_SCHUR,
                     grid_points: int = 1_000_000,
                     workers: int = 1) -> VerificationSummary:
    """Run every headline check: constants, the envelope identity, the pattern
    witness and its Schur norm, closed-form cross checks, the 4/pi limit,
    measure forms, amenable cross checks, and the classification sweeps."""
    specs = DEFAULT_GROUP_SPECS if group_specs is None else tuple(group_specs)
    groups = [parse_group(s) for s in specs]
    items: list[VerificationItem] = []

    t = THRESHOLDS
    ordering = (1.0 < t.prior_coset_bound < t.coset_bound < t.pattern_witness_value
                < t.prior_two_coset_bound < t.two_coset_bound)
    items.append(_item("threshold_ordering", ordering,
                       "1 < 2/sqrt3 < (1+sqrt2)/2 < sqrt26/4 < (sqrt17+1)/4 < 4/3"))

    env = sup_norm_check(grid_points)
    items.append(_item(
        "envelope_constant_9_2",
        abs(env.max_f - 4.5) <= 1e-12 and env.max_identity_error <= 1e-12,
        f"max_f={env.max_f!r} max_identity_error={env.max_identity_error!r}"))

    pattern = forbidden_pattern()
    fixed_value = witness_lower_bound(pattern, orthogonal_witness())
    items.append(_item(
        "pattern_fixed_witness",
        abs(fixed_value - t.pattern_witness_value) <= 1e-12
        and fixed_value > t.coset_bound,
        f"witness value {fixed_value!r} vs sqrt(26)/4 = {t.pattern_witness_value!r}"))

    bounds = gamma2(pattern, 1e-3)
    cert_ok = check_certificate(pattern, bounds.certificate.p, bounds.certificate.q,
                                bounds.certificate.c, tol=1e-8)
    items.append(_item(
        "pattern_schur_norm",
        bounds.lower >= t.pattern_norm - 1e-3 and bounds.upper <= t.pattern_norm + 1e-3
        and cert_ok,
        f"bracket [{bounds.lower!r}, {bounds.upper!r}] around 9/7, certificate ok={cert_ok}"))

    closed_form_ok = True
    details = []
    for q in range(3, 13):
        group = make_abelian_group([q])
        measured = bs_norm(group, subset_mask(group, [0, 1]))
        expected = two_coset_norm(q)
        if abs(measured - expected) > tol:
            closed_form_ok = False
            details.append(f"q={q}: {measured!r} vs {expected!r}")
    items.append(_item("two_coset_closed_form_q3_12", closed_form_ok,
                       "; ".join(details) or "character sums match the closed form"))

    limit_ok = abs(two_coset_norm(501) - t.limit_q_inf) <= 1e-4
    evens = [two_coset_norm(q) for q in range(2, 502, 2)]
    odds = [two_coset_norm(q) for q in range(3, 502, 2)]
    # even values increase towards 4/pi from below; odd values decrease towards
    # it from above (the largest, 4/3, sits at q=3)
    mono_ok = (all(a < b for a, b in zip(evens, evens[1:]))
               and all(a > b for a, b in zip(odds, odds[1:]))
               and evens[-1] < t.limit_q_inf < odds[-1])
    items.append(_item("two_coset_limit_4_over_pi", limit_ok and mono_ok,
                       f"|value(501) - 4/pi| = {abs(two_coset_norm(501) - t.limit_q_inf):.2e}, "
                       f"monotone approach from both sides: {mono_ok}"))

    for group in groups:
        use_cb = not group.is_abelian
        report = sweep(group, tol=schur_tol if use_cb else tol, use_cb=use_cb,
                       workers=workers)
        items.append(_item(
            f"sweep_{group.name}",
            not report.violations and report.subset_total == (1 << group.order),
            f"{len(report.records)} classes, {len(report.violations)} violations"))

        if group.is_abelian:
            measure_ok = True
            measure_details = []
            witness_ok = True
            for record in report.records:
                if record.analysis.kind == "two_cosets":
                    result = verify_measure_form(group, record.subset)
                    if not result.holds:
                        measure_ok = False
                        measure_details.append(
                            f"S={subset_elements(record.subset)}: err={result.max_error:.2e}")
                if record.witness is not None:
                    integral = witness_integral(group, record.subset, record.witness)
                    bound = witness_norm_bound(group, record.subset, record.witness)
                    if abs(integral - 6.0) > 1e-10 and abs(integral - 6.5) > 1e-10:
                        witness_ok = False
                    if bound - 1e-9 > record.norm_lower:
                        witness_ok = False
            items.append(_item(f"measure_form_{group.name}", measure_ok,
                               "; ".join(measure_details) or
                               "two-coset mu matches the annihilator density"))
            items.append(_item(f"witness_integrals_{group.name}", witness_ok,
                               "integrals in {6, 13/2}; bounds below the norm"))

        pattern_ok = True
        pattern_details = []
        target = forbidden_pattern()
        for record in report.records:
            if record.pattern is not None:
                rows, cols = record.pattern
                matrix = multiplier_matrix(group, record.subset)
                exact = bool((matrix[np.ix_(rows, cols)] == target).all())
                if not exact:
                    pattern_ok = False
                    pattern_details.append(f"S={subset_elements(record.subset)}: inexact hit")
                if group.order <= 64:
                    cb = cb_norm(group, record.subset)
                    if cb.lower < t.pattern_norm - schur_tol:
                        pattern_ok = False
                        pattern_details.append(
                            f"S={subset_elements(record.subset)}: lower {cb.lower!r} < 9/7 - tol")
        for sub in range(1 << group.order):
            if is_subgroup(group, sub) and forbidden_pattern_search(group, sub) is not None:
                pattern_ok = False
                pattern_details.append(f"subgroup {subset_elements(sub)} has a pattern hit")
        items.append(_item(f"pattern_soundness_{group.name}", pattern_ok,
                           "; ".join(pattern_details) or
                           "hits exact, bounded below by 9/7; subgroups clean"))

        if group.is_abelian and group.order <= AMENABLE_CROSS_CHECK_MAX_ORDER:
            cross_ok = True
            cross_details = []
            for record in report.records:
                bounds = cb_norm(group, record.subset)
                value = bs_norm(group, record.subset)
                if not (bounds.lower - schur_tol <= value <= bounds.upper + schur_tol):
                    cross_ok = False
                    cross_details.append(
                        f"S={subset_elements(record.subset)}: {value!r} outside "
                        f"[{bounds.lower!r}, {bounds.upper!r}]")
            items.append(_item(f"amenable_cross_check_{group.name}", cross_ok,
                               "; ".join(cross_details) or
                               "character-sum norms inside the Schur brackets"))

    return VerificationSummary(items=tuple(items), passed=all(i.passed for i in items))
