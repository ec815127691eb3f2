"""Combination rules and normalizations.

Every rule returns a FusionReport: the combined mass plus the audit trail
needed to reconstruct the numbers (pairwise product trace, conflict,
normalization divisor). Rules are pure functions over immutable inputs,
and iteration follows ascending bitmask order, so identical inputs yield
bit-identical reports.

Guard summary: conjunctive, dempster, and pcr5 reject negative weights
(only the average rule combines counter-evidence); dempster additionally
requires classical inputs and defined (non-total) conflict.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from math import fsum
from typing import Sequence

from .errors import RuleGuardError, ValidationError
from .frame import FocalSet
from .mass import (
    CLASSICAL_RANGE,
    SUM_EPSILON,
    MassFunction,
    MassRange,
    RangeClass,
    SumClass,
    classify_range,
    classify_sum,
    interval_union,
    union_of_ranges,
)

#: Pipeline stage orders for rules that both redistribute conflict and
#: rescale. The two orders agree in exact arithmetic (both stages scale
#: every weight uniformly); supporting both keeps reports auditable
#: against published tables computed either way.
ORDER_NORMALIZE_FIRST = "normalize-first"
ORDER_REDISTRIBUTE_FIRST = "redistribute-first"
ORDERS = (ORDER_NORMALIZE_FIRST, ORDER_REDISTRIBUTE_FIRST)


class RuleId(Enum):
    """Identifier of a combination rule, as spelled in documents and CLI flags."""

    CONJUNCTIVE = "conjunctive"
    DEMPSTER = "dempster"
    PCR5 = "pcr5"
    TOTAL_PROPORTIONAL = "total-proportional"
    AVERAGE = "average"


@dataclass(frozen=True)
class TraceRecord:
    """One pairwise product: m1(x) * m2(y) landed on x ∩ y."""

    x: FocalSet
    y: FocalSet
    product: float
    assigned_to: FocalSet


@dataclass(frozen=True)
class FusionReport:
    """A combined mass with its audit fields.

    conflict is the weight that fell on the empty set before any
    redistribution; normalization rescales it alongside the weights.
    divisor accumulates every rescaling applied (1 when none was).
    skipped_fractions counts conflicting products discarded because both
    source weights were zero, which makes the proportional split's
    denominator zero; such products are themselves zero, so conservation
    is unaffected.
    """

    result: MassFunction
    conflict: float
    trace: tuple[TraceRecord, ...]
    divisor: float
    rule: RuleId
    skipped_fractions: int = 0


def _check_pair(m1: MassFunction, m2: MassFunction, rule: RuleId) -> None:
    if m1.frame != m2.frame:
        raise ValidationError("cannot combine masses over different frames")
    for m in (m1, m2):
        if m.has_negative:
            raise RuleGuardError(
                "%s rejects negative weights; use the average rule for counter-evidence"
                % rule.value
            )


def _products(
    m1: MassFunction, m2: MassFunction
) -> tuple[dict[FocalSet, float], tuple[TraceRecord, ...], float]:
    """Pairwise products over declared focal sets, bucketed by intersection."""
    buckets: dict[FocalSet, list[float]] = {}
    trace: list[TraceRecord] = []
    for x, w1 in m1.weights.items():
        for y, w2 in m2.weights.items():
            landing = x & y
            p = w1 * w2
            buckets.setdefault(landing, []).append(p)
            trace.append(TraceRecord(x, y, p, landing))
    weights = {fs: fsum(parts) for fs, parts in buckets.items()}
    conflict = weights.get(m1.frame.empty_set(), 0.0)
    return weights, tuple(trace), conflict


def conjunctive(m1: MassFunction, m2: MassFunction) -> FusionReport:
    """Unnormalized conjunctive combination.

    Each pair of focal sets contributes the product of its weights to
    their intersection; disjoint pairs pile up on the empty set, and that
    pile is reported as the conflict. The grand total of the result
    equals the product of the input totals.
    """
    _check_pair(m1, m2, RuleId.CONJUNCTIVE)
    weights, trace, conflict = _products(m1, m2)
    result = MassFunction(m1.frame, weights, interval_union(m1.range, m2.range))
    return FusionReport(result, conflict, trace, 1.0, RuleId.CONJUNCTIVE)


def conflict_mass(m1: MassFunction, m2: MassFunction) -> float:
    """Total product weight falling on the empty set."""
    _check_pair(m1, m2, RuleId.CONJUNCTIVE)
    return _products(m1, m2)[2]


def _dempster_report(m1: MassFunction, m2: MassFunction) -> FusionReport:
    for position, m in (("first", m1), ("second", m2)):
        range_class = classify_range(m)
        sum_class = classify_sum(m)
        if range_class is not RangeClass.CLASSICAL or sum_class is not SumClass.BALANCED:
            raise RuleGuardError(
                "dempster requires classical masses summing to 1, but the %s input "
                "is %s by range and %s by sum; permitted here: pcr5, "
                "total-proportional, conjunctive (average for negative weights)"
                % (position, range_class.value, sum_class.value)
            )
    base = conjunctive(m1, m2)
    k = base.conflict
    if k >= 1.0 - SUM_EPSILON:
        raise RuleGuardError(
            "conflict k=%r leaves nothing to renormalize; dempster is undefined" % k
        )
    scale = 1.0 - k
    weights = {
        fs: w / scale for fs, w in base.result.weights.items() if not fs.is_empty
    }
    result = MassFunction(m1.frame, weights, CLASSICAL_RANGE)
    return FusionReport(result, k, base.trace, scale, RuleId.DEMPSTER)


def dempster(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Dempster's rule: conjunctive combination renormalized by 1 - k."""
    return _dempster_report(m1, m2).result


def pcr5(m1: MassFunction, m2: MassFunction) -> FusionReport:
    """Conjunctive combination with per-product conflict redistribution.

    Every conflicting product m1(x)*m2(y) (x and y disjoint) is split back
    onto x and y in proportion to the source weights that produced it:
    x receives m1(x)*p/(m1(x)+m2(y)) and y the rest. The empty set ends at
    zero and the grand total is conserved. Products whose proportional
    denominator is zero are discarded and counted.
    """
    _check_pair(m1, m2, RuleId.PCR5)
    for m in (m1, m2):
        if m.conflict_weight != 0.0:
            raise RuleGuardError(
                "pcr5 inputs must not carry weight on the empty set; "
                "redistribute or renormalize first"
            )
    weights, trace, conflict = _products(m1, m2)
    empty = m1.frame.empty_set()

    shares: dict[FocalSet, list[float]] = {}
    skipped = 0
    for rec in trace:
        if not rec.assigned_to.is_empty:
            continue
        w1 = m1[rec.x]
        w2 = m2[rec.y]
        denom = w1 + w2
        if denom == 0.0:
            skipped += 1
            continue
        shares.setdefault(rec.x, []).append(w1 * rec.product / denom)
        shares.setdefault(rec.y, []).append(w2 * rec.product / denom)

    keys = sorted(
        (set(weights) | set(shares)) - {empty}, key=lambda fs: fs.bits
    )
    combined = {
        fs: fsum([weights.get(fs, 0.0), *shares.get(fs, [])]) for fs in keys
    }
    result = MassFunction(m1.frame, combined, interval_union(m1.range, m2.range))
    return FusionReport(result, conflict, trace, 1.0, RuleId.PCR5, skipped)


def over_normalize(report: FusionReport, target: MassRange) -> FusionReport:
    """Rescale a report so its grand total becomes target.lo + target.hi.

    The divisor is the current grand total over the target's sum; for two
    strict sources this equals (sum m1)(sum m2)/(lo+hi). Every weight,
    the conflict field, and the empty-set bucket are divided by it; the
    trace keeps the raw products. The result adopts the target range.
    """
    if target.total <= 0.0:
        raise RuleGuardError(
            "target range sums to %r; normalization needs a positive total"
            % target.total
        )
    grand = report.result.total
    divisor = grand / target.total
    if divisor <= 0.0:
        raise RuleGuardError(
            "grand total %r gives nonpositive normalization divisor %r"
            % (grand, divisor)
        )
    weights = {fs: w / divisor for fs, w in report.result.weights.items()}
    result = MassFunction(report.result.frame, weights, target)
    return replace(
        report,
        result=result,
        conflict=report.conflict / divisor,
        divisor=report.divisor * divisor,
    )


def total_proportional(report: FusionReport) -> FusionReport:
    """Redistribute the empty-set weight over all focal sets pro rata.

    Each focal weight w becomes w*(1 + k/S) where k is the empty-set
    weight and S the focal total, so ratios between focal sets and the
    grand total are both preserved. Distinct from pcr5, which splits each
    conflicting product between the two sets that produced it; this rule
    feeds every focal set, conflicting or not.
    """
    result = report.result
    k = result.conflict_weight
    if k == 0.0:
        return replace(report, rule=RuleId.TOTAL_PROPORTIONAL)
    focal_total = result.focal_total
    if focal_total <= 0.0:
        raise RuleGuardError(
            "no positive focal weight to absorb conflict %r onto" % k
        )
    factor = 1.0 + k / focal_total
    weights = {
        fs: w * factor for fs, w in result.weights.items() if not fs.is_empty
    }
    redistributed = MassFunction(result.frame, weights, result.range)
    return replace(report, result=redistributed, rule=RuleId.TOTAL_PROPORTIONAL)


def average(masses: Sequence[MassFunction]) -> FusionReport:
    """Per-focal-set arithmetic mean; the only rule that accepts negative weights.

    Produces no conflict: the empty set stays at zero and the result range
    is the union of the input ranges.
    """
    pool = tuple(masses)
    if len(pool) < 2:
        raise ValidationError("average needs at least two masses, got %d" % len(pool))
    frame = pool[0].frame
    for m in pool[1:]:
        if m.frame != frame:
            raise ValidationError("cannot combine masses over different frames")
    keys = sorted(
        {fs for m in pool for fs in m.focal_sets()}, key=lambda fs: fs.bits
    )
    weights = {fs: fsum(m[fs] for m in pool) / len(pool) for fs in keys}
    result = MassFunction(frame, weights, union_of_ranges(m.range for m in pool))
    return FusionReport(result, 0.0, (), 1.0, RuleId.AVERAGE)


def fuse(
    m1: MassFunction,
    m2: MassFunction,
    rule: RuleId = RuleId.PCR5,
    target: MassRange | None = None,
    *,
    normalize: bool = True,
    order: str = ORDER_REDISTRIBUTE_FIRST,
) -> FusionReport:
    """Dispatch to a combination rule with class guards.

    target defaults to the union of the input ranges and is used only by
    the normalizing stage, which the normalize flag appends to the pcr5
    and total-proportional rules. order picks whether total-proportional
    rescales before or after redistributing; the two agree in exact
    arithmetic and both are accepted so either published layout can be
    reproduced step for step.
    """
    if order not in ORDERS:
        raise ValidationError("unknown stage order %r; expected one of %r" % (order, ORDERS))
    if target is None:
        target = interval_union(m1.range, m2.range)
    if (m1.has_negative or m2.has_negative) and rule is not RuleId.AVERAGE:
        raise RuleGuardError(
            "negative weights present; the average rule is the only one permitted "
            "(requested %s)" % rule.value
        )
    if rule is RuleId.AVERAGE:
        return average((m1, m2))
    if rule is RuleId.CONJUNCTIVE:
        return conjunctive(m1, m2)
    if rule is RuleId.DEMPSTER:
        return _dempster_report(m1, m2)
    if rule is RuleId.PCR5:
        report = pcr5(m1, m2)
        return over_normalize(report, target) if normalize else report
    if rule is RuleId.TOTAL_PROPORTIONAL:
        base = conjunctive(m1, m2)
        if normalize and order == ORDER_NORMALIZE_FIRST:
            return total_proportional(over_normalize(base, target))
        report = total_proportional(base)
        return over_normalize(report, target) if normalize else report
    raise ValidationError("unknown rule %r" % rule)
