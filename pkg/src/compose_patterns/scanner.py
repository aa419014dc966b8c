"""Walk a directory tree, analyse every compose file and assemble a corpus report."""

from __future__ import annotations

import os
import posixpath
import re
import shlex
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .classifier import ClassificationRule, ClassifiedService, classify_service, load_rules, type_histogram
from .errors import ComposePatternsError, ExtendsFileMissing, RootNotFound, YamlSyntaxError
from .graph import build_graph
from .itemsets import DEFAULT_MIN_SUPPORT, as_fraction, format_support, mine_frequent_itemsets, transactions_from
from .merge import apply_overrides, resolve_extends
from .model import ComposeDocument, ServiceSpec
from .parser import FileRole, RoleAssessment, classify_file_role, has_template_markers, parse_document, resolve_document
from .patterns import FileAnalysis, PatternId, RepoContext, Strictness, detect_all, filter_strictness
from .report import CorpusReport, FileRecord, ServiceSummary

STRICTNESS_CHOICES = ("co", "structural", "both")
SKIP_DIRS = frozenset({".git", ".hg", ".svn", "node_modules", "__pycache__", ".venv", "venv"})
YAML_SUFFIXES = (".yml", ".yaml")
STAT_ROLES = frozenset({FileRole.COMPOSE, FileRole.OVERRIDE_CANDIDATE})
SCRIPT_NAMES = re.compile(r"^(makefile|gnumakefile|justfile|.*\.(sh|bash|zsh|mk|ps1|bat|cmd))$", re.I)
README_NAMES = re.compile(r"^readme", re.I)
COMPOSE_INVOCATION = re.compile(r"docker[- ]compose", re.I)
OVERRIDE_FILE = re.compile(r"^docker-compose\.override\.ya?ml$", re.I)
BASE_FILE = re.compile(r"^docker-compose\.ya?ml$", re.I)
MAX_AUX_BYTES = 1 << 20


@dataclass
class ScanOptions:
    root: str
    follow_extends_outside_filter: bool = True
    rules_paths: Sequence[str] = ()
    min_support: Fraction | float = DEFAULT_MIN_SUPPORT
    strictness: str = "co"
    format: str = "json"
    env_overrides: Mapping[str, str] = field(default_factory=dict)
    patterns_filter: frozenset[PatternId] | None = None
    loose: bool = False
    # explicit -f chains, as paths relative to root
    merge_chains: Sequence[Sequence[str]] = ()
    include_unclassified: bool = False

    def __post_init__(self) -> None:
        threshold = as_fraction(self.min_support)
        if not 0 < threshold <= 1:
            raise ValueError(f"min_support must be in (0, 1], got {self.min_support}")
        if self.strictness not in STRICTNESS_CHOICES:
            raise ValueError(f"strictness must be one of {STRICTNESS_CHOICES}")


def is_compose_filename(name: str) -> bool:
    lowered = name.lower()
    return "docker-compose" in lowered and any(s in lowered for s in YAML_SUFFIXES)


def _walk(root: str) -> list[str]:
    out = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d not in SKIP_DIRS)
        rel_dir = os.path.relpath(dirpath, root)
        for name in filenames:
            rel = name if rel_dir == "." else posixpath.join(rel_dir.replace(os.sep, "/"), name)
            out.append(rel)
    return sorted(out)


def _read(root: str, rel: str) -> str:
    with open(os.path.join(root, rel), encoding="utf-8", errors="replace") as fh:
        return fh.read()


def _has_services_mapping(text: str) -> bool:
    try:
        raw = parse_document(text)
    except ComposePatternsError:
        return False
    return isinstance(raw.tree.get("services"), dict)


def select_files(root: str, all_files: Sequence[str], loose: bool = False) -> list[str]:
    selected = []
    for rel in all_files:
        base = posixpath.basename(rel)
        if is_compose_filename(base):
            selected.append(rel)
        elif loose and base.lower().endswith(YAML_SUFFIXES) and _has_services_mapping(_read(root, rel)):
            selected.append(rel)
    return selected


# ---------------------------------------------------------------- Dockerfile bases

_FROM = re.compile(r"^\s*FROM\s+(?:--\S+\s+)*(\S+)(?:\s+AS\s+(\S+))?", re.I | re.M)


def dockerfile_base(text: str) -> str | None:
    """Image of the final build stage, following references to earlier stages."""
    stages: dict[str, str] = {}
    image = None
    for m in _FROM.finditer(text):
        ref = m.group(1)
        image = stages.get(ref.lower(), ref)
        if m.group(2):
            stages[m.group(2).lower()] = image
    if image is None or "$" in image or image.lower() == "scratch":
        return None
    return image


def _base_for(root: str, rel: str, spec: ServiceSpec) -> str | None:
    if spec.build is None:
        return None
    context = spec.build.context or "."
    if "://" in context or context.startswith("git@"):
        return None
    path = posixpath.normpath(posixpath.join(posixpath.dirname(rel), context, spec.build.dockerfile or "Dockerfile"))
    full = os.path.join(root, path)
    if not os.path.isfile(full):
        return None
    try:
        return dockerfile_base(_read(root, path))
    except OSError:
        return None


# ---------------------------------------------------------------- per-file analysis


@dataclass
class _Loaded:
    record: FileRecord
    document: ComposeDocument | None = None
    extended: tuple[str, ...] = ()
    classified: list[ClassifiedService] = field(default_factory=list)
    analysis: FileAnalysis | None = None


def _fail(rel: str, exc: Exception, warnings: list[str], role: RoleAssessment | None = None) -> _Loaded:
    message = f"{type(exc).__name__}: {exc}"
    warnings.append(f"{rel}: {message}")
    return _Loaded(FileRecord(path=rel, role=role, error=message))


def _load_file(root: str, rel: str, opts: ScanOptions, selected: set[str], warnings: list[str]) -> _Loaded:
    try:
        text = _read(root, rel)
    except OSError as exc:
        return _fail(rel, exc, warnings)
    try:
        raw = parse_document(text, rel)
    except YamlSyntaxError as exc:
        if has_template_markers(text):
            role = classify_file_role(None, rel, source_text=text)
            return _Loaded(FileRecord(path=rel, role=role))
        return _fail(rel, exc, warnings)
    except ComposePatternsError as exc:
        return _fail(rel, exc, warnings)
    role = classify_file_role(raw, rel)
    record = FileRecord(path=rel, role=role, syntax_meta=raw.syntax_meta)
    if role.role not in STAT_ROLES:
        return _Loaded(record)
    env = dict(opts.env_overrides)
    try:
        doc = resolve_document(raw, env)
        extended = tuple(sorted(n for n, s in doc.services.items() if s.extends is not None))

        def loader(path: str) -> ComposeDocument:
            if not opts.follow_extends_outside_filter and path not in selected:
                raise ExtendsFileMissing(f"{path} is outside the scanned file set")
            return resolve_document(parse_document(_read(root, path), path), env)

        doc, _ = resolve_extends(doc, loader)
    except (ComposePatternsError, OSError) as exc:
        return _fail(rel, exc, warnings, role)
    record.unresolved_variables = sorted(doc.unresolved_variables)
    return _Loaded(record, doc, extended)


def _classify(root: str, rel: str, doc: ComposeDocument, rules: Sequence[ClassificationRule]) -> list[ClassifiedService]:
    return [classify_service(spec, rules, _base_for(root, rel, spec)) for spec in doc.services.values()]


def _analyse(loaded: _Loaded, rules: Sequence[ClassificationRule], root: str, source: str) -> None:
    doc = loaded.document
    assert doc is not None and loaded.record.role is not None
    loaded.classified = _classify(root, source, doc, rules)
    graph = build_graph(doc, loaded.classified)
    loaded.analysis = FileAnalysis(loaded.record.path, doc, loaded.classified, graph, loaded.record.role, loaded.extended)
    loaded.record.services = [ServiceSummary.of(c) for c in sorted(loaded.classified, key=lambda c: c.name)]
    loaded.record.edges = list(graph.edges)
    loaded.record.dangling = list(graph.dangling)
    loaded.record.flags = dict(graph.flags)


# ---------------------------------------------------------------- repository context


def _aux_lines(root: str, rel: str) -> list[str]:
    full = os.path.join(root, rel)
    try:
        if os.path.getsize(full) > MAX_AUX_BYTES:
            return []
        text = _read(root, rel)
    except OSError:
        return []
    return [line.strip() for line in text.splitlines() if COMPOSE_INVOCATION.search(line)]


def _script_chains(line: str, script_dir: str, selected: set[str]) -> list[list[str]]:
    """``-f`` chains of a compose invocation, as paths relative to the root."""
    try:
        tokens = shlex.split(line, comments=True)
    except ValueError:
        tokens = line.split()
    files = []
    for i, tok in enumerate(tokens):
        if tok in ("-f", "--file") and i + 1 < len(tokens):
            files.append(tokens[i + 1])
        elif tok.startswith("--file="):
            files.append(tok.split("=", 1)[1])
    if len(files) < 2:
        return []
    resolved = [posixpath.normpath(posixpath.join(script_dir, f)) for f in files]
    if all(r in selected for r in resolved):
        return [resolved]
    return []


def build_repo_context(
    root: str, all_files: Sequence[str], loaded: Sequence[_Loaded], selected: set[str], extra_chains: Sequence[Sequence[str]]
) -> tuple[RepoContext, list[list[str]], list[str]]:
    ctx = RepoContext(root=root)
    ctx.compose_files = [(x.record.path, x.record.role.role) for x in loaded if x.record.role is not None]
    chains: list[list[str]] = []
    notes: list[str] = []
    for rel in all_files:
        base = posixpath.basename(rel)
        if README_NAMES.match(base):
            ctx.readme_hits.extend(_aux_lines(root, rel))
        elif SCRIPT_NAMES.match(base):
            for line in _aux_lines(root, rel):
                ctx.script_hits.append(line)
                chains.extend(_script_chains(line, posixpath.dirname(rel), selected))
    by_dir: dict[str, list[str]] = {}
    for rel in sorted(selected):
        by_dir.setdefault(posixpath.dirname(rel), []).append(rel)
    for files in by_dir.values():
        bases = [f for f in files if BASE_FILE.match(posixpath.basename(f))]
        overrides = [f for f in files if OVERRIDE_FILE.match(posixpath.basename(f))]
        for over in overrides:
            if bases:
                chains.append([bases[0], over])
            else:
                notes.append(f"{over}: override file without a docker-compose.yml base in the same directory")
    chains.extend([list(c) for c in extra_chains])
    unique: list[list[str]] = []
    for chain in chains:
        if chain not in unique:
            unique.append(chain)
    for chain in unique:
        for over in chain[1:]:
            pair = (chain[0], over)
            if pair not in ctx.override_pairs:
                ctx.override_pairs.append(pair)
    ctx.readme_hits = sorted(set(ctx.readme_hits))
    ctx.script_hits = sorted(set(ctx.script_hits))
    return ctx, unique, notes


# ---------------------------------------------------------------- corpus assembly


def _keep(findings, opts: ScanOptions):
    kept = filter_strictness(findings, opts.strictness)
    if opts.patterns_filter is not None:
        kept = [f for f in kept if f.pattern in opts.patterns_filter]
    return kept


def _merge_chain(
    chain: list[str], by_path: dict[str, _Loaded], rules, root: str, ctx: RepoContext, opts: ScanOptions, warnings: list[str]
) -> FileRecord | None:
    label = " + ".join(chain)
    parts = [by_path.get(p) for p in chain]
    if any(p is None or p.document is None for p in parts):
        warnings.append(f"{label}: merge skipped, a member file could not be analysed")
        return None
    try:
        merged_doc, _ = apply_overrides([p.document for p in parts])  # type: ignore[union-attr,misc]
    except ComposePatternsError as exc:
        warnings.append(f"{label}: {type(exc).__name__}: {exc}")
        return None
    extended = tuple(sorted({s for p in parts for s in p.extended}))  # type: ignore[union-attr]
    role = RoleAssessment(FileRole.COMPOSE, reason="merged override chain")
    record = FileRecord(path=label, role=role, syntax_meta=merged_doc.syntax_meta, merged_from=list(chain))
    loaded = _Loaded(record, merged_doc, extended)
    _analyse(loaded, rules, root, chain[0])
    assert loaded.analysis is not None
    record.findings = _keep(detect_all(loaded.analysis, ctx), opts)
    record.unresolved_variables = sorted(merged_doc.unresolved_variables)
    return record


def scan_path(opts: ScanOptions) -> CorpusReport:
    root = opts.root
    if not os.path.isdir(root):
        raise RootNotFound(f"root directory not found: {root}")
    rules = load_rules(opts.rules_paths)
    warnings: list[str] = []
    all_files = _walk(root)
    selected_list = select_files(root, all_files, opts.loose)
    selected = set(selected_list)

    loaded = [_load_file(root, rel, opts, selected, warnings) for rel in selected_list]
    for item in loaded:
        if item.document is not None:
            try:
                _analyse(item, rules, root, item.record.path)
            except ComposePatternsError as exc:
                warnings.append(f"{item.record.path}: {type(exc).__name__}: {exc}")
                item.record.error = f"{type(exc).__name__}: {exc}"
                item.analysis = None

    missing = [c for c in opts.merge_chains if any(p not in selected for p in c)]
    for chain in missing:
        warnings.append(f"{' + '.join(chain)}: --merge names a file that was not scanned")
    valid_extra = [c for c in opts.merge_chains if c not in missing]
    ctx, chains, notes = build_repo_context(root, all_files, loaded, selected, valid_extra)

    for item in loaded:
        if item.analysis is not None:
            item.record.findings = _keep(detect_all(item.analysis, ctx), opts)

    by_path = {x.record.path: x for x in loaded}
    merged = [r for chain in chains if (r := _merge_chain(chain, by_path, rules, root, ctx, opts, warnings)) is not None]

    in_stats = [x for x in loaded if x.analysis is not None and x.record.role is not None and x.record.role.role in STAT_ROLES]
    excluded = [x.record.path for x in loaded if x.record.role is not None and x.record.role.role not in STAT_ROLES]
    if excluded:
        notes.append(
            f"{len(excluded)} file(s) classified as ConfigurationNotCompose or TemplateForGenerating are excluded from all statistics"
        )
    if merged:
        notes.append(f"{len(merged)} merged override chain(s) are reported separately and excluded from statistics")

    report = CorpusReport(root=posixpath.basename(os.path.abspath(root)) or root)
    report.files = [x.record for x in loaded]
    report.merged = merged
    report.histogram = type_histogram([x.classified for x in in_stats])
    transactions = transactions_from([(x.record.path, x.classified) for x in in_stats], opts.include_unclassified)
    report.transaction_count = len(transactions)
    report.itemsets = mine_frequent_itemsets(transactions, opts.min_support) if transactions else []

    counts: Counter[PatternId] = Counter()
    tiers: dict[Strictness, Counter[PatternId]] = {t: Counter() for t in Strictness}
    for x in in_stats:
        counts.update({f.pattern for f in x.record.findings})
        for tier in Strictness:
            tiers[tier].update({f.pattern for f in x.record.findings if f.strictness is tier})
    report.pattern_counts = dict(counts)
    report.pattern_counts_by_tier = {t: dict(c) for t, c in tiers.items()}

    occurrences: Counter[str] = Counter()
    file_hits: Counter[str] = Counter()
    for x in in_stats:
        assert x.analysis is not None
        codes = x.analysis.graph.edge_codes()
        codes.update({f"Flag:{k}": 1 for k, v in x.analysis.graph.flags.items() if v})
        occurrences.update(codes)
        file_hits.update(codes.keys())
    report.orchestration_codes = {
        k: {"occurrences": occurrences[k], "files": file_hits[k]}
        for k in sorted(occurrences, key=lambda k: (-occurrences[k], k))
    }
    report.options = {
        "min_support": format_support(as_fraction(opts.min_support)),
        "strictness": opts.strictness,
        "loose": opts.loose,
        "include_unclassified": opts.include_unclassified,
        "follow_extends_outside_filter": opts.follow_extends_outside_filter,
        "patterns_filter": None if opts.patterns_filter is None else sorted(p.code for p in opts.patterns_filter),
    }
    report.warnings = warnings
    report.notes = notes
    return report


def analyse_text(
    text: str,
    path: str = "docker-compose.yml",
    env: Mapping[str, str] | None = None,
    rules: Sequence[ClassificationRule] | None = None,
    loader=None,
) -> FileAnalysis:
    """Analyse one compose file held in memory, without a repository around it."""
    raw = parse_document(text, path)
    role = classify_file_role(raw, path)
    doc = resolve_document(raw, env)
    extended = tuple(sorted(n for n, s in doc.services.items() if s.extends is not None))
    doc, _ = resolve_extends(doc, loader)
    classified = [classify_service(spec, rules) for spec in doc.services.values()]
    return FileAnalysis(path, doc, classified, build_graph(doc, classified), role, extended)
