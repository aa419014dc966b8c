"""Detectors for the fourteen orchestration patterns.

Every finding carries evidence strings in a small machine-readable grammar
so they can be checked again against the analysis they came from:

``type:<Type>=<service>``
    the service was classified as ``<Type>``
``absent:<Type>``
    no service of that type exists in the file
``edge:<Kind>:<from>-><to>``
    the graph has that edge (either orientation for symmetric kinds)
``meta:alias_count=<n>``
    the file used ``n`` YAML aliases
``extends:<service>``
    the service carried an ``extends`` record before resolution
``port:<service>=<host port>`` / ``volume:<service>=<target>``
    the service binds that host port / mounts that container path
``role:<FileRole>`` / ``flag:auto_generated``
    file-level role facts
``pair:<base>+<override>`` / ``script:<line>``
    repository facts from :class:`RepoContext`
``flag:test-oriented=<service>``
    the mail service runs a development mail catcher image
"""

from __future__ import annotations

import enum
import posixpath
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .classifier import ClassifiedService, canonical_image
from .errors import InvalidImageRef, UnknownPattern
from .graph import SYMMETRIC_KINDS, EdgeKind, OrchestrationGraph
from .model import ComposeDocument, SyntaxMeta
from .parser import FileRole, RoleAssessment
from .taxonomy import APPLICATION_TYPES, ServiceType

T = ServiceType


class PatternId(str, enum.Enum):
    AUTO_GENERATION = "AutoGeneration"
    YAML_ANCHOR_ALIAS = "YamlAnchorAlias"
    SERVICE_INHERITANCE = "ServiceInheritance"
    OVERRIDE_USE_CASE = "OverrideUseCase"
    CERTIFICATE_GENERATION_MAPPING = "CertificateGenerationMapping"
    CONTAINER_MANAGEMENT = "ContainerManagement"
    DATABASE_INIT_WITH_DATABASE = "DatabaseInitWithDatabase"
    DATABASE_ADMIN_WITH_DATABASE = "DatabaseAdminWithDatabase"
    LABELS_CONFIGURE_REVERSE_PROXY = "LabelsConfigureReverseProxy"
    MAIL_SERVICE_TESTING = "MailServiceTesting"
    APP_WITH_DATABASE = "AppWithDatabase"
    APP_WITH_DATABASE_AND_CACHING = "AppWithDatabaseAndCaching"
    HTTP_REVERSE_PROXY = "HttpReverseProxy"
    DUPLICATE_SERVICE_REUSE = "DuplicateServiceReuse"

    @property
    def code(self) -> str:
        """Identifier used in reports, e.g. ``HTTP_REVERSE_PROXY``."""
        return self.name

    @classmethod
    def parse(cls, text: str) -> PatternId:
        key = text.strip().replace("-", "_").replace(" ", "_")
        for member in cls:
            if key.upper() == member.name or key.lower() == member.value.lower():
                return member
        valid = ", ".join(m.name for m in cls)
        raise UnknownPattern(f"unknown pattern {text!r}; valid ids: {valid}")


class Strictness(str, enum.Enum):
    CO_OCCURRENCE = "CoOccurrence"
    STRUCTURAL = "Structural"


@dataclass(frozen=True)
class PatternFinding:
    pattern: PatternId
    file: str
    services_involved: tuple[str, ...]
    evidence: tuple[str, ...]
    strictness: Strictness

    def __post_init__(self) -> None:
        if not self.evidence:
            raise ValueError("a finding needs at least one evidence item")

    @property
    def sort_key(self) -> tuple[str, str, str]:
        first = self.services_involved[0] if self.services_involved else ""
        return (self.pattern.code, self.file, first)

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.code,
            "file": self.file,
            "services": list(self.services_involved),
            "evidence": list(self.evidence),
            "strictness": self.strictness.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> PatternFinding:
        return cls(
            PatternId.parse(data["pattern"]),
            data["file"],
            tuple(data["services"]),
            tuple(data["evidence"]),
            Strictness(data["strictness"]),
        )


@dataclass
class RepoContext:
    root: str
    compose_files: list[tuple[str, FileRole]] = field(default_factory=list)
    readme_hits: list[str] = field(default_factory=list)
    script_hits: list[str] = field(default_factory=list)
    # (base, override) path pairs, from naming convention, scripts or --merge
    override_pairs: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class FileAnalysis:
    path: str
    document: ComposeDocument
    classified: list[ClassifiedService]
    graph: OrchestrationGraph
    role: RoleAssessment = field(default_factory=lambda: RoleAssessment(FileRole.COMPOSE))
    # services that used ``extends`` before inheritance was inlined
    extended_services: tuple[str, ...] = ()

    @property
    def syntax_meta(self) -> SyntaxMeta:
        return self.document.syntax_meta

    def of_type(self, *types: ServiceType) -> list[str]:
        return sorted(c.name for c in self.classified if c.service_type in types)


TEST_MAIL_IMAGES = frozenset({"mailhog", "smtp4dev", "mailcatcher", "mailpit", "maildev", "mailtrap", "inbucket", "greenmail"})
GENERATOR_WRITE = re.compile(r"(>>?|\btee\b|-o\b|--output\b|--out\b)\s*['\"]?([^\s'\";|&]*docker-compose[^\s'\";|&]*\.ya?ml)", re.I)


def _finding(pattern: PatternId, a: FileAnalysis, services: Iterable[str], evidence: Iterable[str], structural: bool) -> PatternFinding:
    tier = Strictness.STRUCTURAL if structural else Strictness.CO_OCCURRENCE
    return PatternFinding(pattern, a.path, tuple(sorted(set(services))), tuple(evidence), tier)


def _has_edge(a: FileAnalysis, kind: EdgeKind, src: str, dst: str) -> bool:
    for e in a.graph.edges_of(kind):
        if (e.source, e.target) == (src, dst):
            return True
        if kind in SYMMETRIC_KINDS and (e.source, e.target) == (dst, src):
            return True
    return False


def _image_name(image: str | None) -> str | None:
    if not image:
        return None
    try:
        return canonical_image(image)[1]
    except InvalidImageRef:
        return None


def _host_ports(a: FileAnalysis, service: str) -> list[int]:
    return sorted({p.host_port for p in a.document.services[service].ports if p.host_port is not None})


def _volume_targets(a: FileAnalysis, service: str) -> list[str]:
    return sorted({v.target for v in a.document.services[service].volumes})


# ---------------------------------------------------------------- detectors

Detector = Callable[[FileAnalysis, RepoContext], "PatternFinding | None"]


def detect_auto_generation(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    evidence = []
    if a.role.auto_generated:
        evidence.append("flag:auto_generated")
    base = posixpath.basename(a.path).lower()
    for line in ctx.script_hits:
        if any(posixpath.basename(m.group(2)).lower() == base for m in GENERATOR_WRITE.finditer(line)):
            evidence.append(f"script:{line}")
    if not evidence:
        return None
    return _finding(PatternId.AUTO_GENERATION, a, [], evidence, True)


def detect_yaml_anchor_alias(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    n = a.syntax_meta.alias_count
    if n < 1:
        return None
    return _finding(PatternId.YAML_ANCHOR_ALIAS, a, [], [f"meta:alias_count={n}"], True)


def detect_service_inheritance(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    if not a.extended_services:
        return None
    names = sorted(a.extended_services)
    return _finding(PatternId.SERVICE_INHERITANCE, a, names, [f"extends:{s}" for s in names], True)


def detect_override_use_case(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    evidence = []
    if a.role.role is FileRole.OVERRIDE_CANDIDATE:
        evidence.append(f"role:{FileRole.OVERRIDE_CANDIDATE.value}")
    for base, over in ctx.override_pairs:
        if a.path in (base, over):
            evidence.append(f"pair:{base}+{over}")
    if not evidence:
        return None
    return _finding(PatternId.OVERRIDE_USE_CASE, a, [], evidence, True)


def detect_certificate_generation_mapping(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    certs = a.of_type(T.CERTIFICATE)
    if not certs:
        return None
    proxies = a.of_type(T.REVERSE_PROXY)
    mapped = a.of_type(T.REVERSE_PROXY, *APPLICATION_TYPES)
    shared = [
        (c, p) for c in certs for p in mapped if c != p and _has_edge(a, EdgeKind.SHARED_VOLUME, c, p)
    ]
    if shared:
        evidence = [f"type:{T.CERTIFICATE.value}={c}" for c in sorted({c for c, _ in shared})]
        evidence += [f"edge:{EdgeKind.SHARED_VOLUME.value}:{min(c, p)}->{max(c, p)}" for c, p in shared]
        return _finding(PatternId.CERTIFICATE_GENERATION_MAPPING, a, [x for pair in shared for x in pair], evidence, True)
    if proxies:
        evidence = [f"type:{T.CERTIFICATE.value}={c}" for c in certs]
        evidence += [f"type:{T.REVERSE_PROXY.value}={p}" for p in proxies]
        return _finding(PatternId.CERTIFICATE_GENERATION_MAPPING, a, certs + proxies, evidence, False)
    return None


def detect_container_management(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    found = a.of_type(T.CONTAINER_MANAGEMENT)
    if not found:
        return None
    evidence = [f"type:{T.CONTAINER_MANAGEMENT.value}={s}" for s in found]
    return _finding(PatternId.CONTAINER_MANAGEMENT, a, found, evidence, False)


def _companion_with_database(
    pattern: PatternId, companion: ServiceType, kinds: Sequence[EdgeKind], a: FileAnalysis
) -> PatternFinding | None:
    helpers, dbs = a.of_type(companion), a.of_type(T.DATABASE)
    if not helpers or not dbs:
        return None
    evidence = [f"type:{companion.value}={h}" for h in helpers] + [f"type:{T.DATABASE.value}={d}" for d in dbs]
    links = [
        f"edge:{k.value}:{h}->{d}" for h in helpers for d in dbs for k in kinds if _has_edge(a, k, h, d)
    ]
    return _finding(pattern, a, helpers + dbs, evidence + links, bool(links))


def detect_database_init_with_database(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    return _companion_with_database(PatternId.DATABASE_INIT_WITH_DATABASE, T.DATABASE_INIT, [EdgeKind.ENV_REFERENCE], a)


def detect_database_admin_with_database(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    kinds = [EdgeKind.DEPENDS_ON, EdgeKind.LINK, EdgeKind.ENV_REFERENCE]
    return _companion_with_database(PatternId.DATABASE_ADMIN_WITH_DATABASE, T.DATABASE_ADMINISTRATION, kinds, a)


def detect_labels_configure_reverse_proxy(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    edges = a.graph.edges_of(EdgeKind.LABEL_PROXY_CONFIG)
    if not edges:
        return None
    evidence = sorted({f"edge:{e.kind.value}:{e.source}->{e.target}" for e in edges})
    services = [e.source for e in edges] + [e.target for e in edges if e.target in a.document.services]
    return _finding(PatternId.LABELS_CONFIGURE_REVERSE_PROXY, a, services, evidence, True)


def detect_mail_service_testing(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    mail = a.of_type(T.MAIL)
    if not mail:
        return None
    evidence = [f"type:{T.MAIL.value}={s}" for s in mail]
    evidence += [
        f"flag:test-oriented={s}" for s in mail if _image_name(a.document.services[s].image) in TEST_MAIL_IMAGES
    ]
    return _finding(PatternId.MAIL_SERVICE_TESTING, a, mail, evidence, False)


def _app_data_evidence(a: FileAnalysis, apps: list[str], stores: list[str]) -> list[str]:
    out = []
    for app in apps:
        for store in stores:
            if _has_edge(a, EdgeKind.DEPENDS_ON, app, store):
                out.append(f"edge:{EdgeKind.DEPENDS_ON.value}:{app}->{store}")
    for store in stores:
        out += [f"volume:{store}={t}" for t in _volume_targets(a, store)]
        out += [f"port:{store}={p}" for p in _host_ports(a, store)]
    return out


def _app_with_data(a: FileAnalysis, with_cache: bool) -> PatternFinding | None:
    apps, dbs, caches = a.of_type(*APPLICATION_TYPES), a.of_type(T.DATABASE), a.of_type(T.CACHING)
    if not apps or not dbs or bool(caches) != with_cache:
        return None
    typed = sorted(a.classified, key=lambda c: c.name)
    evidence = [f"type:{c.service_type.value}={c.name}" for c in typed if c.name in set(apps + dbs + caches)]
    if not with_cache:
        evidence.append(f"absent:{T.CACHING.value}")
    structural = _app_data_evidence(a, apps, dbs + caches)
    pattern = PatternId.APP_WITH_DATABASE_AND_CACHING if with_cache else PatternId.APP_WITH_DATABASE
    return _finding(pattern, a, apps + dbs + caches, evidence + structural, bool(structural))


def detect_app_with_database(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    """Application plus database, and deliberately no cache (non-monotone)."""
    return _app_with_data(a, with_cache=False)


def detect_app_with_database_and_caching(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    return _app_with_data(a, with_cache=True)


HTTP_PORTS = (80, 443)


def detect_http_reverse_proxy(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    proxies = a.of_type(T.REVERSE_PROXY)
    if not proxies:
        return None
    evidence = [f"type:{T.REVERSE_PROXY.value}={p}" for p in proxies]
    ports = [f"port:{p}={port}" for p in proxies for port in _host_ports(a, p) if port in HTTP_PORTS]
    return _finding(PatternId.HTTP_REVERSE_PROXY, a, proxies, evidence + ports, bool(ports))


def detect_duplicate_service_reuse(a: FileAnalysis, ctx: RepoContext) -> PatternFinding | None:
    edges = a.graph.edges_of(EdgeKind.DUPLICATE_IMAGE)
    if not edges:
        return None
    evidence = [f"edge:{e.kind.value}:{e.source}->{e.target}" for e in edges]
    # reuse expressed through YAML aliases or extends is worth naming too
    involved = {x for e in edges for x in (e.source, e.target)}
    evidence += [f"extends:{s}" for s in sorted(involved & set(a.extended_services))]
    if a.syntax_meta.alias_count:
        evidence.append(f"meta:alias_count={a.syntax_meta.alias_count}")
    return _finding(PatternId.DUPLICATE_SERVICE_REUSE, a, involved, evidence, True)


DETECTORS: dict[PatternId, Detector] = {
    PatternId.AUTO_GENERATION: detect_auto_generation,
    PatternId.YAML_ANCHOR_ALIAS: detect_yaml_anchor_alias,
    PatternId.SERVICE_INHERITANCE: detect_service_inheritance,
    PatternId.OVERRIDE_USE_CASE: detect_override_use_case,
    PatternId.CERTIFICATE_GENERATION_MAPPING: detect_certificate_generation_mapping,
    PatternId.CONTAINER_MANAGEMENT: detect_container_management,
    PatternId.DATABASE_INIT_WITH_DATABASE: detect_database_init_with_database,
    PatternId.DATABASE_ADMIN_WITH_DATABASE: detect_database_admin_with_database,
    PatternId.LABELS_CONFIGURE_REVERSE_PROXY: detect_labels_configure_reverse_proxy,
    PatternId.MAIL_SERVICE_TESTING: detect_mail_service_testing,
    PatternId.APP_WITH_DATABASE: detect_app_with_database,
    PatternId.APP_WITH_DATABASE_AND_CACHING: detect_app_with_database_and_caching,
    PatternId.HTTP_REVERSE_PROXY: detect_http_reverse_proxy,
    PatternId.DUPLICATE_SERVICE_REUSE: detect_duplicate_service_reuse,
}


def detect_all(analysis: FileAnalysis, ctx: RepoContext | None = None) -> list[PatternFinding]:
    ctx = ctx if ctx is not None else RepoContext(root="")
    found = [f for detector in DETECTORS.values() if (f := detector(analysis, ctx)) is not None]
    return sorted(found, key=lambda f: f.sort_key)


def filter_strictness(findings: Iterable[PatternFinding], strictness: str) -> list[PatternFinding]:
    """``co`` and ``both`` keep everything, ``structural`` keeps graph-backed findings."""
    if strictness == "structural":
        return [f for f in findings if f.strictness is Strictness.STRUCTURAL]
    if strictness in ("co", "both"):
        return list(findings)
    raise ValueError(f"unknown strictness {strictness!r}")


# ---------------------------------------------------------------- evidence replay


def check_evidence(item: str, a: FileAnalysis, ctx: RepoContext | None = None) -> bool:
    """Re-evaluate one evidence string against the analysis it came from."""
    ctx = ctx if ctx is not None else RepoContext(root="")
    kind, _, rest = item.partition(":")
    types = {c.name: c.service_type for c in a.classified}
    if kind == "type":
        type_name, _, service = rest.partition("=")
        return types.get(service) is ServiceType.parse(type_name)
    if kind == "absent":
        return ServiceType.parse(rest) not in types.values()
    if kind == "edge":
        edge_kind, _, ends = rest.partition(":")
        src, _, dst = ends.partition("->")
        return _has_edge(a, EdgeKind(edge_kind), src, dst)
    if kind == "meta":
        key, _, value = rest.partition("=")
        return key == "alias_count" and a.syntax_meta.alias_count == int(value)
    if kind == "extends":
        return rest in a.extended_services
    if kind == "port":
        service, _, port = rest.partition("=")
        return service in a.document.services and int(port) in _host_ports(a, service)
    if kind == "volume":
        service, _, target = rest.partition("=")
        return service in a.document.services and target in _volume_targets(a, service)
    if kind == "role":
        return a.role.role is FileRole(rest)
    if kind == "flag":
        if rest == "auto_generated":
            return a.role.auto_generated
        name, _, service = rest.partition("=")
        if name == "test-oriented" and service in a.document.services:
            return types.get(service) is T.MAIL and _image_name(a.document.services[service].image) in TEST_MAIL_IMAGES
        return False
    if kind == "pair":
        base, _, over = rest.partition("+")
        return (base, over) in ctx.override_pairs and a.path in (base, over)
    if kind == "script":
        return rest in ctx.script_hits
    return False
