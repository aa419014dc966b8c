"""Rule-based mapping of services to service types."""

from __future__ import annotations

import enum
import os
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .errors import InvalidImageRef, RuleTableError
from .model import ServiceSpec
from .taxonomy import ServiceType

RULES_ENV_VAR = "COMPOSE_PATTERNS_RULES"
MATCH_KINDS = ("exact", "prefix", "regex")


class Confidence(str, enum.Enum):
    RULE_MATCH = "RuleMatch"
    NAME_HEURISTIC = "NameHeuristic"
    DOCKERFILE_BASE = "DockerfileBase"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ClassificationRule:
    match_kind: str
    pattern: str
    target: ServiceType
    priority: int
    origin: str = "bundled"

    def __post_init__(self) -> None:
        if self.match_kind not in MATCH_KINDS:
            raise RuleTableError(f"unknown match kind {self.match_kind!r}")
        if self.match_kind == "regex":
            try:
                re.compile(self.pattern)
            except re.error as exc:
                raise RuleTableError(f"bad regex {self.pattern!r}: {exc}") from None

    @property
    def sort_key(self) -> tuple:
        return (self.priority, self.pattern, self.match_kind, self.target.value)

    def matches(self, candidate: str) -> bool:
        if self.match_kind == "exact":
            return candidate == self.pattern
        if self.match_kind == "prefix":
            return candidate.startswith(self.pattern)
        return _compiled(self.pattern).search(candidate) is not None

    def to_dict(self) -> dict:
        return {
            "match_kind": self.match_kind,
            "pattern": self.pattern,
            "type": self.target.value,
            "priority": self.priority,
        }


@lru_cache(maxsize=1024)
def _compiled(pattern: str) -> re.Pattern[str]:
    return re.compile(pattern)


def parse_rules(text: str, origin: str = "<rules>") -> list[ClassificationRule]:
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in re.split(r"\t+", stripped)]
        if len(fields) != 4:
            raise RuleTableError(f"{origin}:{lineno}: expected 4 tab-separated fields, got {len(fields)}")
        kind, pattern, type_name, priority = fields
        try:
            target = ServiceType.parse(type_name)
            prio = int(priority)
        except ValueError as exc:
            raise RuleTableError(f"{origin}:{lineno}: {exc}") from None
        try:
            rules.append(ClassificationRule(kind, pattern.lower(), target, prio, origin))
        except RuleTableError as exc:
            raise RuleTableError(f"{origin}:{lineno}: {exc}") from None
    return rules


def load_rule_file(path: str | os.PathLike[str]) -> list[ClassificationRule]:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read(), origin=str(path))


@lru_cache(maxsize=1)
def bundled_rules() -> tuple[ClassificationRule, ...]:
    text = resources.files("compose_patterns").joinpath("data/default_rules.tsv").read_text(encoding="utf-8")
    return tuple(parse_rules(text, origin="bundled"))


def load_rules(extra_paths: Sequence[str | os.PathLike[str]] = (), use_env: bool = True) -> list[ClassificationRule]:
    """Rule tables from ``$COMPOSE_PATTERNS_RULES``, the bundled table, then ``extra_paths``.

    Load order only matters for provenance; matching is decided by priority
    and then by pattern text.
    """
    rules: list[ClassificationRule] = []
    if use_env:
        for path in filter(None, os.environ.get(RULES_ENV_VAR, "").split(os.pathsep)):
            rules.extend(load_rule_file(path))
    rules.extend(bundled_rules())
    for path in extra_paths:
        rules.extend(load_rule_file(path))
    return rules


def default_rules() -> list[ClassificationRule]:
    return list(bundled_rules())


# ---------------------------------------------------------------- image refs


def canonical_image(image_ref: str) -> tuple[str | None, str]:
    """Split an image reference into ``(namespace, name)``.

    The registry host, tag and digest are dropped and the result is
    lower-cased. Docker Hub's implicit ``library`` namespace becomes ``None``.
    """
    ref = image_ref.strip().lower().split("@", 1)[0]
    segments = ref.split("/")
    if not all(segments):
        raise InvalidImageRef(f"empty path component in image reference {image_ref!r}")
    if len(segments) > 1 and ("." in segments[0] or ":" in segments[0] or segments[0] == "localhost"):
        segments = segments[1:]
    if not segments:
        raise InvalidImageRef(f"empty image reference {image_ref!r}")
    name = segments[-1].split(":", 1)[0]
    if not name:
        raise InvalidImageRef(f"empty image name in {image_ref!r}")
    namespace = segments[-2] if len(segments) > 1 else None
    if namespace == "library":
        namespace = None
    return namespace, name


def match_candidates(image_ref: str) -> list[str]:
    namespace, name = canonical_image(image_ref)
    return [f"{namespace}/{name}", name] if namespace else [name]


@lru_cache(maxsize=32)
def _sorted(rules: tuple[ClassificationRule, ...]) -> list[ClassificationRule]:
    return sorted(rules, key=lambda r: r.sort_key)


def classify_image(
    image_ref: str, rules: Sequence[ClassificationRule] | None = None
) -> tuple[ServiceType, ClassificationRule | None]:
    if not image_ref or not image_ref.strip():
        raise InvalidImageRef("empty image reference")
    candidates = match_candidates(image_ref)
    for rule in _sorted(bundled_rules() if rules is None else tuple(rules)):
        if any(rule.matches(c) for c in candidates):
            return rule.target, rule
    return ServiceType.UNCLASSIFIED, None


# ---------------------------------------------------------------- services

# Runtime base images: a Dockerfile built FROM one of these is application code.
APPLICATION_RUNTIMES = frozenset(
    {
        "node", "python", "ruby", "php", "golang", "openjdk", "eclipse-temurin", "amazoncorretto",
        "maven", "gradle", "aspnet", "sdk", "runtime", "elixir", "erlang", "rust", "perl",
        "tomcat", "jetty", "django", "rails", "composer", "deno", "bun", "oven/bun", "denoland/deno",
    }
)

_BACKEND_NAME = re.compile(r"api|backend|server|worker")

# (regex over the service name, type); first match wins
NAME_HINTS: tuple[tuple[re.Pattern[str], ServiceType], ...] = tuple(
    (re.compile(rx), t)
    for rx, t in [
        (r"(^|[-_])(db-?init|init-?db|migrat\w*|seed)([-_]|$)", ServiceType.DATABASE_INIT),
        (r"(^|[-_])(db|database|postgres|postgresql|pg|mysql|mariadb|mongo|mongodb)([-_]?\d*)($|[-_])", ServiceType.DATABASE),
        (r"(^|[-_])(cache|redis|memcached?)([-_]|$)", ServiceType.CACHING),
        (r"(^|[-_])(proxy|reverse-?proxy|nginx|traefik|caddy|lb|loadbalancer)([-_]|$)", ServiceType.REVERSE_PROXY),
        (r"(^|[-_])(mail|smtp|mailer)([-_]|$)", ServiceType.MAIL),
        (r"(^|[-_])(certbot|letsencrypt|acme|certs?)([-_]|$)", ServiceType.CERTIFICATE),
        (r"(^|[-_])(search|elastic|solr)([-_]|$)", ServiceType.SEARCH),
        (r"(^|[-_])(cron|crond)([-_]|$)", ServiceType.CRON),
        (r"(^|[-_])(scheduler|beat)([-_]|$)", ServiceType.JOB_SCHEDULING),
        (r"(^|[-_])(queue|broker|rabbit|rabbitmq|mq)([-_]|$)", ServiceType.MESSAGE_BROKER),
        (r"(^|[-_])(selenium|e2e|cypress|tests?)([-_]|$)", ServiceType.TESTING),
        (r"(^|[-_])(setup|init)([-_]|$)", ServiceType.SETUP),
    ]
)


@dataclass(frozen=True)
class ClassifiedService:
    service: ServiceSpec
    service_type: ServiceType
    confidence: Confidence
    matched_rule: ClassificationRule | None = None

    def __post_init__(self) -> None:
        if (self.confidence is Confidence.UNKNOWN) != (self.service_type is ServiceType.UNCLASSIFIED):
            raise ValueError("confidence Unknown must coincide with type Unclassified")

    @property
    def name(self) -> str:
        return self.service.name

    def to_dict(self) -> dict:
        return {
            "name": self.service.name,
            "image": self.service.image,
            "type": self.service_type.value,
            "confidence": self.confidence.value,
            "rule": None if self.matched_rule is None else self.matched_rule.to_dict(),
        }


def application_type(name: str) -> ServiceType:
    """Split application services into backend and frontend by name (lossy)."""
    return ServiceType.BACKEND if _BACKEND_NAME.search(name.lower()) else ServiceType.FRONTEND


def _is_runtime(base: str) -> bool:
    try:
        namespace, name = canonical_image(base)
    except InvalidImageRef:
        return False
    return name in APPLICATION_RUNTIMES or f"{namespace}/{name}" in APPLICATION_RUNTIMES


def classify_service(
    service: ServiceSpec,
    rules: Sequence[ClassificationRule] | None = None,
    dockerfile_base: str | None = None,
) -> ClassifiedService:
    """Pick a type from the image, then the Dockerfile base, then the name."""
    rules = default_rules() if rules is None else rules
    if service.image:
        try:
            found, rule = classify_image(service.image, rules)
        except InvalidImageRef:
            found, rule = ServiceType.UNCLASSIFIED, None
        if rule is not None:
            return ClassifiedService(service, found, Confidence.RULE_MATCH, rule)
    if dockerfile_base:
        try:
            found, rule = classify_image(dockerfile_base, rules)
        except InvalidImageRef:
            found, rule = ServiceType.UNCLASSIFIED, None
        if rule is not None:
            return ClassifiedService(service, found, Confidence.DOCKERFILE_BASE, rule)
        if _is_runtime(dockerfile_base):
            return ClassifiedService(service, application_type(service.name), Confidence.DOCKERFILE_BASE)
    name = service.name.lower()
    try:
        found, rule = classify_image(name, rules)
    except InvalidImageRef:
        found, rule = ServiceType.UNCLASSIFIED, None
    if rule is not None:
        return ClassifiedService(service, found, Confidence.NAME_HEURISTIC, rule)
    for pattern, hinted in NAME_HINTS:
        if pattern.search(name):
            return ClassifiedService(service, hinted, Confidence.NAME_HEURISTIC)
    if service.build is not None:
        return ClassifiedService(service, application_type(name), Confidence.NAME_HEURISTIC)
    return ClassifiedService(service, ServiceType.UNCLASSIFIED, Confidence.UNKNOWN)


def type_histogram(classified: Iterable[ClassifiedService | Iterable[ClassifiedService]]) -> dict[ServiceType, int]:
    """Per-service type counts; accepts a flat list or one list per file."""
    counts: Counter[ServiceType] = Counter()
    for item in classified:
        if isinstance(item, ClassifiedService):
            counts[item.service_type] += 1
        else:
            counts.update(c.service_type for c in item)
    return dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].value)))
