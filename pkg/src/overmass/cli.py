"""Scenario documents, pipeline execution, table rendering, and the CLI.

Documents are JSON:

    {
      "frame": ["A", "B"],
      "sources": [
        {"name": "m1", "range": [0, 1.1],
         "masses": {"A": 0.6, "B": 0.3, "A|B": 0.2}}
      ],
      "pipeline": {"rule": "pcr5", "order": "redistribute-first",
                   "strict": true}
    }

The pipeline record is optional, as is each field in it; the optional
"target" field is a [lo, hi] pair and "normalize" (default true) controls
whether the final rescaling stage runs. Exit codes: 0 success,
1 validation error, 2 parse error, 3 rule guard violation, 4 golden
comparison mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Sequence

from .errors import ParseError, RuleGuardError, ValidationError
from .frame import EMPTY_SYMBOL, Frame, make_frame, parse_focal
from .mass import (
    MassFunction,
    MassRange,
    belief_interval,
    classify_range,
    classify_sum,
    make_mass,
    union_of_ranges,
)
from .regime import assess
from .rules import (
    ORDER_REDISTRIBUTE_FIRST,
    ORDERS,
    FusionReport,
    RuleId,
    average,
    fuse,
)


@dataclass(frozen=True)
class Source:
    name: str
    mass: MassFunction


@dataclass(frozen=True)
class PipelineSpec:
    """How a document wants its sources combined."""

    rule: RuleId = RuleId.PCR5
    order: str = ORDER_REDISTRIBUTE_FIRST
    target: MassRange | None = None
    strict: bool = False
    normalize: bool = True


@dataclass(frozen=True)
class ScenarioDocument:
    frame: Frame
    sources: tuple[Source, ...]
    pipeline: PipelineSpec = PipelineSpec()


def _parse_range(value: Any, where: str) -> MassRange:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError('%s: "range" must be a [lo, hi] pair of numbers' % where)
    try:
        return MassRange(float(value[0]), float(value[1]))
    except ValidationError as exc:
        raise ValidationError("%s: %s" % (where, exc)) from exc


def _parse_pipeline(raw: Any) -> PipelineSpec:
    if raw is None:
        return PipelineSpec()
    if not isinstance(raw, dict):
        raise ParseError('"pipeline" must be an object')
    spec = PipelineSpec()
    if "rule" in raw:
        try:
            spec = replace(spec, rule=RuleId(raw["rule"]))
        except ValueError:
            raise ParseError(
                "unknown rule %r; choose from %s"
                % (raw["rule"], ", ".join(r.value for r in RuleId))
            ) from None
    if "order" in raw:
        if raw["order"] not in ORDERS:
            raise ParseError(
                "unknown order %r; choose from %s" % (raw["order"], ", ".join(ORDERS))
            )
        spec = replace(spec, order=raw["order"])
    if raw.get("target") is not None:
        spec = replace(spec, target=_parse_range(raw["target"], "pipeline target"))
    for flag in ("strict", "normalize"):
        if flag in raw:
            if not isinstance(raw[flag], bool):
                raise ParseError('pipeline "%s" must be true or false' % flag)
            spec = replace(spec, **{flag: raw[flag]})
    return spec


def load_document(data: bytes | str) -> ScenarioDocument:
    """Parse and validate a scenario document.

    Structural problems raise ParseError (with line/column for malformed
    JSON); out-of-range weights and similar semantic problems raise
    ValidationError naming the offending source.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            "invalid JSON at line %d column %d: %s" % (exc.lineno, exc.colno, exc.msg)
        ) from exc
    if not isinstance(raw, dict):
        raise ParseError("document root must be an object")
    labels = raw.get("frame")
    if not isinstance(labels, list) or not all(isinstance(v, str) for v in labels):
        raise ParseError('"frame" must be a list of label strings')
    frame = make_frame(labels)
    pipeline = _parse_pipeline(raw.get("pipeline"))

    raw_sources = raw.get("sources")
    if not isinstance(raw_sources, list):
        raise ParseError('"sources" must be a list of source records')
    sources: list[Source] = []
    for i, record in enumerate(raw_sources):
        if not isinstance(record, dict):
            raise ParseError("source #%d must be an object" % (i + 1))
        name = record.get("name", "m%d" % (i + 1))
        if not isinstance(name, str) or not name:
            raise ParseError("source #%d name must be a nonempty string" % (i + 1))
        where = "source %r" % name
        mass_range = _parse_range(record.get("range", [0, 1]), where)
        masses = record.get("masses")
        if not isinstance(masses, dict):
            raise ParseError('%s: "masses" must map focal expressions to numbers' % where)
        for expr, weight in masses.items():
            if not isinstance(weight, (int, float)) or isinstance(weight, bool):
                raise ParseError("%s: weight for %r must be a number" % (where, expr))
        try:
            mass = make_mass(frame, masses, mass_range, strict=pipeline.strict)
        except ParseError as exc:
            raise ParseError("%s: %s" % (where, exc)) from exc
        except ValidationError as exc:
            raise ValidationError("%s: %s" % (where, exc)) from exc
        sources.append(Source(name, mass))
    return ScenarioDocument(frame, tuple(sources), pipeline)


def render_document(doc: ScenarioDocument) -> str:
    """Serialize a document back to JSON; load_document inverts this."""
    pipeline: dict[str, Any] = {
        "rule": doc.pipeline.rule.value,
        "order": doc.pipeline.order,
        "strict": doc.pipeline.strict,
        "normalize": doc.pipeline.normalize,
    }
    if doc.pipeline.target is not None:
        pipeline["target"] = [doc.pipeline.target.lo, doc.pipeline.target.hi]
    payload = {
        "frame": list(doc.frame.labels),
        "sources": [
            {
                "name": s.name,
                "range": [s.mass.range.lo, s.mass.range.hi],
                "masses": {str(fs): w for fs, w in s.mass.weights.items()},
            }
            for s in doc.sources
        ],
        "pipeline": pipeline,
    }
    return json.dumps(payload, ensure_ascii=False, indent=2)


def run_pipeline(doc: ScenarioDocument) -> FusionReport:
    """Combine the document's sources with its declared pipeline.

    Sources are folded left to right. Normalization, when enabled, runs
    once on the final pair so the target range applies to the end result;
    the average rule takes all sources in a single call instead of
    folding, since the mean of means is not the mean.
    """
    if len(doc.sources) < 2:
        raise ValidationError(
            "pipeline needs at least two sources, got %d" % len(doc.sources)
        )
    masses = [s.mass for s in doc.sources]
    spec = doc.pipeline
    if spec.rule is RuleId.AVERAGE:
        return average(masses)
    target = spec.target or union_of_ranges(m.range for m in masses)
    report: FusionReport | None = None
    acc = masses[0]
    final = len(masses) - 1
    for i, m in enumerate(masses[1:], start=1):
        report = fuse(
            acc,
            m,
            spec.rule,
            target=target,
            normalize=spec.normalize and i == final,
            order=spec.order,
        )
        acc = report.result
    assert report is not None
    return report


def _columns(report: FusionReport, precision: int) -> tuple[list[str], list[str]]:
    result = report.result
    headers: list[str] = []
    values: list[float] = []
    for fs in result.focal_sets():
        headers.append(str(fs))
        values.append(result[fs])
    headers.append(EMPTY_SYMBOL)
    values.append(result.conflict_weight)
    headers.append("sum")
    values.append(result.total)
    return headers, ["%.*f" % (precision, v) for v in values]


def render_table(report: FusionReport, precision: int = 3) -> str:
    """Two aligned rows: focal sets in bitmask order, then ∅, then sum."""
    headers, cells = _columns(report, precision)
    widths = [max(len(h), len(c)) for h, c in zip(headers, cells)]
    head = "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()
    body = "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return head + "\n" + body


def render_csv(report: FusionReport, precision: int = 3) -> str:
    headers, cells = _columns(report, precision)
    return ",".join(headers) + "\n" + ",".join(cells)


@dataclass(frozen=True)
class GoldenRow:
    """One published value next to its recomputation."""

    label: str
    expected: float
    computed: float
    tolerance: float

    @property
    def delta(self) -> float:
        return abs(self.computed - self.expected)

    @property
    def ok(self) -> bool:
        return self.delta <= self.tolerance


@dataclass(frozen=True)
class GoldenExample:
    name: str
    rows: tuple[GoldenRow, ...]


def _golden_shared_scale() -> GoldenExample:
    # Two sources on one widened scale; rescale first, then spread the
    # conflict over every focal set pro rata. Published values are rounded
    # at each intermediate step, hence the loose tolerance.
    frame = make_frame(["A", "B"])
    scale = MassRange(0.0, 1.1)
    m1 = make_mass(frame, {"A": 0.6, "B": 0.3, "A|B": 0.2}, scale, strict=True)
    m2 = make_mass(frame, {"A": 0.5, "B": 0.5, "A|B": 0.1}, scale, strict=True)
    report = fuse(
        m1, m2, RuleId.TOTAL_PROPORTIONAL, order="normalize-first", normalize=True
    )
    result = report.result
    return GoldenExample(
        "promotion, shared scale (total-proportional, normalize first)",
        (
            GoldenRow("A", 0.67, result["A"], 0.01),
            GoldenRow("B", 0.40, result["B"], 0.01),
            GoldenRow("A|B", 0.03, result["A|B"], 0.01),
            GoldenRow("total", 1.1, result.total, 1e-9),
        ),
    )


def _golden_mixed_scales() -> GoldenExample:
    # Sources declared on different scales; pairwise redistribution, then
    # rescale to the wider of the two.
    frame = make_frame(["A", "B"])
    m1 = make_mass(frame, {"A": 0.7, "B": 0.3, "A|B": 0.1}, MassRange(0.0, 1.1), strict=True)
    m2 = make_mass(frame, {"A": 0.4, "B": 0.6, "A|B": 0.2}, MassRange(0.0, 1.2), strict=True)
    report = fuse(m1, m2, RuleId.PCR5, target=MassRange(0.0, 1.2))
    result = report.result
    return GoldenExample(
        "promotion, mixed scales (pcr5, rescaled to [0, 1.2])",
        (
            GoldenRow("A", 0.686, result["A"], 0.001),
            GoldenRow("B", 0.496, result["B"], 0.001),
            GoldenRow("A|B", 0.018, result["A|B"], 0.001),
            GoldenRow("total", 1.2, result.total, 1e-9),
        ),
    )


def _golden_counter_evidence() -> GoldenExample:
    # Negative weights: averaging is the only permitted combination.
    frame = make_frame(["A", "B"])
    under = MassRange(-0.2, 1.0)
    m1 = make_mass(frame, {"A": -0.2, "B": 0.7, "A|B": 0.3}, under, strict=True)
    m2 = make_mass(frame, {"A": 0.4, "B": -0.1, "A|B": 0.5}, under, strict=True)
    report = average((m1, m2))
    result = report.result
    return GoldenExample(
        "counter-evidence averaging",
        (
            GoldenRow("A", 0.1, result["A"], 1e-9),
            GoldenRow("B", 0.3, result["B"], 1e-9),
            GoldenRow("A|B", 0.4, result["A|B"], 1e-9),
            GoldenRow("conflict", 0.0, report.conflict, 1e-9),
        ),
    )


def _golden_belief_bounds() -> GoldenExample:
    # Redistribute-then-rescale pipeline, checked through to the belief
    # and plausibility of the fused result.
    frame = make_frame(["A", "B"])
    scale = MassRange(0.0, 1.1)
    m1 = make_mass(frame, {"A": 0.3, "B": 0.6, "A|B": 0.2}, scale, strict=True)
    m2 = make_mass(frame, {"A": 0.5, "B": 0.5, "A|B": 0.1}, scale, strict=True)
    raw = fuse(m1, m2, RuleId.CONJUNCTIVE)
    report = fuse(m1, m2, RuleId.PCR5)
    result = report.result
    interval = belief_interval(result, parse_focal("A", frame))
    full = belief_interval(result, parse_focal("A|B", frame))
    return GoldenExample(
        "belief bounds after redistribution (pcr5, rescaled to [0, 1.1])",
        (
            GoldenRow("raw A", 0.28, raw.result["A"], 1e-9),
            GoldenRow("raw B", 0.46, raw.result["B"], 1e-9),
            GoldenRow("raw A|B", 0.02, raw.result["A|B"], 1e-9),
            GoldenRow("raw conflict", 0.45, raw.conflict, 1e-9),
            GoldenRow("A", 0.44, result["A"], 0.02),
            GoldenRow("B", 0.64, result["B"], 0.02),
            GoldenRow("A|B", 0.02, result["A|B"], 0.02),
            GoldenRow("Bel(A)", 0.44, interval.bel, 0.02),
            GoldenRow("Pl(A)", 0.46, interval.pl, 0.02),
            GoldenRow("Bel(A|B)", 1.1, full.bel, 1e-6),
        ),
    )


def run_golden_examples() -> tuple[str, bool]:
    """Recompute the four bundled worked examples against published values."""
    examples = (
        _golden_shared_scale(),
        _golden_mixed_scales(),
        _golden_counter_evidence(),
        _golden_belief_bounds(),
    )
    lines: list[str] = []
    all_ok = True
    for example in examples:
        lines.append(example.name)
        for row in example.rows:
            all_ok = all_ok and row.ok
            lines.append(
                "  %-14s published %-8s computed %-13s |delta| %.3e (tol %g) %s"
                % (
                    row.label,
                    "%g" % row.expected,
                    "%.9f" % row.computed,
                    row.delta,
                    row.tolerance,
                    "ok" if row.ok else "MISMATCH",
                )
            )
    lines.append(
        "all comparisons within tolerance" if all_ok else "comparison failures above"
    )
    return "\n".join(lines), all_ok


def paper_examples() -> str:
    """Text of the golden comparisons; see run_golden_examples for the verdict."""
    return run_golden_examples()[0]


def _read_document(path: Path) -> ScenarioDocument:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc)) from exc
    return load_document(data)


def _parse_target_flag(text: str) -> MassRange:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("--target expects LO,HI, got %r" % text)
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ParseError("--target expects two numbers, got %r" % text) from None
    return MassRange(lo, hi)


def _effective_document(doc: ScenarioDocument, args: argparse.Namespace) -> ScenarioDocument:
    """Apply CLI overrides on top of the document's own pipeline record."""
    pipeline = doc.pipeline
    if args.rule is not None:
        pipeline = replace(pipeline, rule=RuleId(args.rule))
    if args.order is not None:
        pipeline = replace(pipeline, order=args.order)
    if args.target is not None:
        pipeline = replace(pipeline, target=_parse_target_flag(args.target))
    if args.no_normalize:
        pipeline = replace(pipeline, normalize=False)
    return replace(doc, pipeline=pipeline)


def _cmd_fuse(args: argparse.Namespace) -> int:
    doc = _effective_document(_read_document(args.input), args)
    report = run_pipeline(doc)
    if args.format == "csv":
        print(render_csv(report, args.precision))
        return 0
    print(render_table(report, args.precision))
    print("rule: %s" % report.rule.value)
    print("conflict: %.*f" % (args.precision, report.conflict))
    print("divisor: %.*f" % (args.precision, report.divisor))
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    doc = _read_document(args.input)
    if not doc.sources:
        raise ValidationError("document has no sources to classify")
    for source in doc.sources:
        advisory = assess(source.mass)
        print(
            "%s: range=%s sum=%s advisory=%s"
            % (
                source.name,
                classify_range(source.mass).value,
                classify_sum(source.mass).value,
                advisory.kind.value,
            )
        )
        print("  %s" % advisory.rationale)
    return 0


def _cmd_belpl(args: argparse.Namespace) -> int:
    doc = _read_document(args.input)
    if not doc.sources:
        raise ValidationError("document has no sources")
    if len(doc.sources) == 1:
        mass = doc.sources[0].mass
        origin = doc.sources[0].name
    else:
        mass = run_pipeline(doc).result
        origin = "fused result"
    focal = parse_focal(args.set_expr, doc.frame)
    interval = belief_interval(mass, focal)
    print("source: %s" % origin)
    print("Bel(%s) = %.*f" % (focal, args.precision, interval.bel))
    print("Pl(%s) = %.*f" % (focal, args.precision, interval.pl))
    if not interval.classical:
        print("note: negative weights present; bounds are outside classical semantics")
    return 0


def _cmd_golden(args: argparse.Namespace) -> int:
    text, ok = run_golden_examples()
    print(text)
    return 0 if ok else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overmass",
        description="Combine bodies of evidence whose weights may leave [0, 1].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fuse_p = sub.add_parser("fuse", help="combine a document's sources and print the result")
    fuse_p.add_argument("--input", type=Path, required=True, help="scenario document (JSON)")
    fuse_p.add_argument(
        "--rule", choices=[r.value for r in RuleId], help="override the document's rule"
    )
    fuse_p.add_argument("--order", choices=list(ORDERS), help="override the stage order")
    fuse_p.add_argument("--target", metavar="LO,HI", help="override the normalization range")
    fuse_p.add_argument("--precision", type=int, default=3, help="decimals in tables (default 3)")
    fuse_p.add_argument("--format", choices=["table", "csv"], default="table")
    fuse_p.add_argument(
        "--no-normalize", action="store_true", help="skip the final rescaling stage"
    )
    fuse_p.set_defaults(func=_cmd_fuse)

    classify_p = sub.add_parser(
        "classify", help="print range class, sum class, and advisory per source"
    )
    classify_p.add_argument("--input", type=Path, required=True)
    classify_p.set_defaults(func=_cmd_classify)

    belpl_p = sub.add_parser(
        "belpl", help="belief and plausibility of a set, on the fused result when possible"
    )
    belpl_p.add_argument("--input", type=Path, required=True)
    belpl_p.add_argument("--set", dest="set_expr", required=True, help='focal expression, e.g. "A|B"')
    belpl_p.add_argument("--precision", type=int, default=6)
    belpl_p.set_defaults(func=_cmd_belpl)

    golden_p = sub.add_parser(
        "paper-examples",
        help="recompute the bundled published examples and print per-value deltas",
    )
    golden_p.set_defaults(func=_cmd_golden)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except RuleGuardError as exc:
        print("rule guard: %s" % exc, file=sys.stderr)
        return 3
    except ValidationError as exc:
        print("validation error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
