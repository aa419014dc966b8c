"""Static analysis of Docker Compose files: parsing, service classification,
orchestration graphs, pattern detection, itemset mining and statistics."""

from __future__ import annotations

__version__ = "0.1.0"

from .classifier import ClassifiedService, classify_image, classify_service, load_rules, type_histogram
from .graph import Edge, EdgeKind, OrchestrationGraph, build_graph
from .itemsets import ItemsetResult, Transaction, mine_frequent_itemsets, support
from .merge import apply_override, apply_overrides, resolve_extends
from .model import ComposeDocument, ServiceSpec, SyntaxMeta
from .parser import FileRole, classify_file_role, load_compose, parse_document, resolve_document
from .patterns import FileAnalysis, PatternFinding, PatternId, RepoContext, detect_all
from .report import CorpusReport, render_report
from .scanner import ScanOptions, analyse_text, scan_path
from .stats import cliffs_delta, mann_whitney_u, summarize
from .taxonomy import Category, ServiceType

__all__ = [
    "Category",
    "ClassifiedService",
    "ComposeDocument",
    "CorpusReport",
    "Edge",
    "EdgeKind",
    "FileAnalysis",
    "FileRole",
    "ItemsetResult",
    "OrchestrationGraph",
    "PatternFinding",
    "PatternId",
    "RepoContext",
    "ScanOptions",
    "ServiceSpec",
    "ServiceType",
    "SyntaxMeta",
    "Transaction",
    "analyse_text",
    "apply_override",
    "apply_overrides",
    "build_graph",
    "classify_file_role",
    "classify_image",
    "classify_service",
    "cliffs_delta",
    "detect_all",
    "load_compose",
    "load_rules",
    "mann_whitney_u",
    "mine_frequent_itemsets",
    "parse_document",
    "render_report",
    "resolve_document",
    "resolve_extends",
    "scan_path",
    "summarize",
    "support",
    "type_histogram",
]
