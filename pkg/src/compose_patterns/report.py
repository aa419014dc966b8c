"""Corpus report model, JSON round-tripping and text rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .classifier import ClassifiedService, Confidence
from .graph import DanglingReference, Edge
from .itemsets import ItemsetResult
from .model import SyntaxMeta
from .parser import RoleAssessment
from .patterns import PatternFinding, PatternId, Strictness
from .taxonomy import ServiceType

FORMATS = ("json", "text")


@dataclass(frozen=True)
class ServiceSummary:
    name: str
    image: str | None
    service_type: ServiceType
    confidence: Confidence
    rule: dict[str, Any] | None = None

    @classmethod
    def of(cls, c: ClassifiedService) -> ServiceSummary:
        return cls(c.name, c.service.image, c.service_type, c.confidence, None if c.matched_rule is None else c.matched_rule.to_dict())

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "image": self.image,
            "type": self.service_type.value,
            "confidence": self.confidence.value,
            "rule": self.rule,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ServiceSummary:
        return cls(d["name"], d["image"], ServiceType(d["type"]), Confidence(d["confidence"]), d["rule"])


@dataclass
class FileRecord:
    path: str
    role: RoleAssessment | None = None
    syntax_meta: SyntaxMeta | None = None
    services: list[ServiceSummary] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    dangling: list[DanglingReference] = field(default_factory=list)
    flags: dict[str, bool] = field(default_factory=dict)
    findings: list[PatternFinding] = field(default_factory=list)
    unresolved_variables: list[str] = field(default_factory=list)
    merged_from: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def analysed(self) -> bool:
        return self.error is None and self.syntax_meta is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "role": None if self.role is None else self.role.to_dict(),
            "syntax_meta": None if self.syntax_meta is None else self.syntax_meta.to_dict(),
            "services": [s.to_dict() for s in self.services],
            "graph": {
                "edges": [e.to_dict() for e in self.edges],
                "dangling": [d.to_dict() for d in self.dangling],
                "flags": dict(sorted(self.flags.items())),
            },
            "findings": [f.to_dict() for f in self.findings],
            "unresolved_variables": list(self.unresolved_variables),
            "merged_from": list(self.merged_from),
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> FileRecord:
        g = d["graph"]
        return cls(
            path=d["path"],
            role=None if d["role"] is None else RoleAssessment.from_dict(d["role"]),
            syntax_meta=None if d["syntax_meta"] is None else SyntaxMeta.from_dict(d["syntax_meta"]),
            services=[ServiceSummary.from_dict(s) for s in d["services"]],
            edges=[Edge.from_dict(e) for e in g["edges"]],
            dangling=[DanglingReference(x["service"], x["missing"], x["via"]) for x in g["dangling"]],
            flags=dict(g["flags"]),
            findings=[PatternFinding.from_dict(f) for f in d["findings"]],
            unresolved_variables=list(d["unresolved_variables"]),
            merged_from=list(d["merged_from"]),
            error=d["error"],
        )


def _count_map(counts: dict[PatternId, int]) -> dict[str, int]:
    return {p.code: counts.get(p, 0) for p in PatternId}


def _parse_count_map(d: dict[str, int]) -> dict[PatternId, int]:
    return {PatternId.parse(k): v for k, v in d.items()}


@dataclass
class CorpusReport:
    root: str
    files: list[FileRecord] = field(default_factory=list)
    # analyses of base+override chains; kept apart from the corpus statistics
    merged: list[FileRecord] = field(default_factory=list)
    histogram: dict[ServiceType, int] = field(default_factory=dict)
    transaction_count: int = 0
    itemsets: list[ItemsetResult] = field(default_factory=list)
    pattern_counts: dict[PatternId, int] = field(default_factory=dict)
    pattern_counts_by_tier: dict[Strictness, dict[PatternId, int]] = field(default_factory=dict)
    orchestration_codes: dict[str, dict[str, int]] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "root": self.root,
            "options": dict(self.options),
            "summary": {
                "files": len(self.files),
                "analysed_files": sum(1 for f in self.files if f.analysed),
                "transactions": self.transaction_count,
            },
            "files": [f.to_dict() for f in self.files],
            "merged": [f.to_dict() for f in self.merged],
            "histogram": {t.value: n for t, n in self.histogram.items()},
            "itemsets": [i.to_dict() for i in self.itemsets],
            "pattern_counts": _count_map(self.pattern_counts),
            "pattern_counts_by_tier": {
                tier.value: _count_map(self.pattern_counts_by_tier.get(tier, {})) for tier in Strictness
            },
            "orchestration_codes": {k: dict(v) for k, v in self.orchestration_codes.items()},
            "warnings": list(self.warnings),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> CorpusReport:
        total = d["summary"]["transactions"]
        return cls(
            root=d["root"],
            files=[FileRecord.from_dict(f) for f in d["files"]],
            merged=[FileRecord.from_dict(f) for f in d["merged"]],
            histogram={ServiceType(k): v for k, v in d["histogram"].items()},
            transaction_count=total,
            itemsets=[ItemsetResult.from_dict(i, total) for i in d["itemsets"]],
            pattern_counts=_parse_count_map(d["pattern_counts"]),
            pattern_counts_by_tier={Strictness(k): _parse_count_map(v) for k, v in d["pattern_counts_by_tier"].items()},
            orchestration_codes={k: dict(v) for k, v in d["orchestration_codes"].items()},
            options=dict(d["options"]),
            warnings=list(d["warnings"]),
            notes=list(d["notes"]),
        )

    @classmethod
    def from_json(cls, text: str) -> CorpusReport:
        return cls.from_dict(json.loads(text))


def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*headers).rstrip(), fmt.format(*("-" * w for w in widths)).rstrip()]
    out += [fmt.format(*r).rstrip() for r in rows]
    return out


def _render_text(report: CorpusReport) -> str:
    lines = [f"Corpus: {report.root}", f"Files: {len(report.files)} ({report.transaction_count} in statistics)", ""]
    lines.append("Files")
    rows = []
    for f in report.files:
        role = f.role.role.value if f.role else "-"
        status = f"error: {f.error}" if f.error else ", ".join(sorted({x.pattern.code for x in f.findings})) or "-"
        rows.append([f.path, role, str(len(f.services)), status])
    lines += _table(["path", "role", "services", "patterns"], rows)
    if report.merged:
        lines += ["", "Merged override chains"]
        rows = [[f.path, str(len(f.services)), ", ".join(sorted({x.pattern.code for x in f.findings})) or "-"] for f in report.merged]
        lines += _table(["files", "services", "patterns"], rows)
    lines += ["", "Service types"]
    lines += _table(["type", "count"], [[t.display_name, str(n)] for t, n in report.histogram.items()])
    lines += ["", "Frequent itemsets"]
    rows = [[i.support_text, "(" + ", ".join(t.display_name.lower() for t in i.sorted_items) + ")"] for i in report.itemsets]
    lines += _table(["support", "itemset"], rows)
    lines += ["", "Patterns"]
    rows = [
        [
            p.code,
            str(report.pattern_counts.get(p, 0)),
            str(report.pattern_counts_by_tier.get(Strictness.CO_OCCURRENCE, {}).get(p, 0)),
            str(report.pattern_counts_by_tier.get(Strictness.STRUCTURAL, {}).get(p, 0)),
        ]
        for p in PatternId
    ]
    lines += _table(["pattern", "files", "co-occurrence", "structural"], rows)
    if report.orchestration_codes:
        lines += ["", "Orchestration codes"]
        rows = [[k, str(v["occurrences"]), str(v["files"])] for k, v in report.orchestration_codes.items()]
        lines += _table(["code", "occurrences", "files"], rows)
    if report.notes:
        lines += ["", "Notes"] + [f"- {n}" for n in report.notes]
    if report.warnings:
        lines += ["", "Warnings"] + [f"- {w}" for w in report.warnings]
    return "\n".join(lines) + "\n"


def render_report(report: CorpusReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        return _render_text(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
