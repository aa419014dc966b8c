"""Typed relationships between the services of one compose document."""

from __future__ import annotations

import enum
import posixpath
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Sequence
from urllib.parse import urlsplit

from .classifier import ClassifiedService
from .model import ComposeDocument, ServiceSpec
from .taxonomy import ServiceType

EXTERNAL_PROXY = "external-proxy"


class EdgeKind(str, enum.Enum):
    DEPENDS_ON = "DependsOn"
    LINK = "Link"
    ENV_REFERENCE = "EnvReference"
    SHARED_VOLUME = "SharedVolume"
    SHARED_ENV_FILE = "SharedEnvFile"
    LABEL_PROXY_CONFIG = "LabelProxyConfig"
    DUPLICATE_IMAGE = "DuplicateImage"


# edges emitted once per unordered pair, lexicographically oriented
SYMMETRIC_KINDS = frozenset({EdgeKind.SHARED_VOLUME, EdgeKind.SHARED_ENV_FILE, EdgeKind.DUPLICATE_IMAGE})


@dataclass(frozen=True, order=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind
    attribute: str | None = None

    @property
    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.source, self.target, self.kind.value, self.attribute or "")

    def to_dict(self) -> dict[str, Any]:
        return {"from": self.source, "to": self.target, "kind": self.kind.value, "attribute": self.attribute}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Edge:
        return cls(data["from"], data["to"], EdgeKind(data["kind"]), data["attribute"])

    def describe(self) -> str:
        attr = f"[{self.attribute}]" if self.attribute is not None else ""
        return f"{self.kind.value}:{self.source}->{self.target}{attr}"


@dataclass(frozen=True)
class DanglingReference:
    service: str
    missing: str
    via: str

    def to_dict(self) -> dict[str, str]:
        return {"service": self.service, "missing": self.missing, "via": self.via}


@dataclass
class OrchestrationGraph:
    nodes: list[ClassifiedService]
    edges: list[Edge]
    dangling: list[DanglingReference] = field(default_factory=list)
    external_nodes: list[str] = field(default_factory=list)
    # document-level facts that are not pairwise relations
    flags: dict[str, bool] = field(default_factory=dict)

    def node(self, name: str) -> ClassifiedService | None:
        for n in self.nodes:
            if n.name == name:
                return n
        return None

    def type_of(self, name: str) -> ServiceType | None:
        n = self.node(name)
        return None if n is None else n.service_type

    def edges_of(self, kind: EdgeKind) -> list[Edge]:
        return [e for e in self.edges if e.kind is kind]

    def edge_codes(self) -> Counter[str]:
        """Occurrence counts of ``Kind:FromType->ToType`` codes."""
        codes: Counter[str] = Counter()
        for e in self.edges:
            src = self.type_of(e.source)
            dst = self.type_of(e.target)
            src_name = src.value if src else "External"
            dst_name = dst.value if dst else "External"
            codes[f"{e.kind.value}:{src_name}->{dst_name}"] += 1
        return codes


# ---------------------------------------------------------------- env references

_NAME_CHARS = r"A-Za-z0-9_\-"


def _token_pattern(token: str) -> re.Pattern[str]:
    return re.compile(rf"(?<![{_NAME_CHARS}]){re.escape(token)}(?![{_NAME_CHARS}])")


def _url_hosts(value: str) -> list[str] | None:
    """Hosts named in a URL-like value, or ``None`` if it is not a URL."""
    if "://" not in value:
        return None
    hosts = []
    for chunk in re.findall(r"[A-Za-z][A-Za-z0-9+.\-]*://([^/\s?#]+)", value):
        netloc = chunk.rsplit("@", 1)[-1]
        for part in netloc.split(","):
            try:
                host = urlsplit(f"//{part}").hostname
            except ValueError:
                host = None
            if host:
                hosts.append(host)
    return hosts


def service_aliases(spec: ServiceSpec) -> list[str]:
    names = [spec.name]
    if spec.hostname and spec.hostname != spec.name:
        names.append(spec.hostname)
    return names


def _value_mentions(value: str, alias: str, hosts: list[str] | None) -> bool:
    if hosts is not None:
        # hostnames are case-insensitive in URLs
        if any(h.lower() == alias.lower() for h in hosts):
            return True
        # URL values may still carry the name outside the authority part
        value = re.sub(r"[A-Za-z][A-Za-z0-9+.\-]*://[^/\s?#]+", " ", value)
    return _token_pattern(alias).search(value) is not None


def detect_env_references(doc: ComposeDocument) -> list[Edge]:
    targets = {name: service_aliases(spec) for name, spec in doc.services.items()}
    edges = set()
    for name, spec in doc.services.items():
        for key, value in spec.environment.items():
            if not value:
                continue
            hosts = _url_hosts(value)
            for target, aliases in targets.items():
                if target == name:
                    continue
                if any(_value_mentions(value, alias, hosts) for alias in aliases):
                    edges.add(Edge(name, target, EdgeKind.ENV_REFERENCE, key))
    return sorted(edges, key=lambda e: e.sort_key)


# ---------------------------------------------------------------- shared resources


def _pairwise(groups: dict[str, set[str]], kind: EdgeKind) -> list[Edge]:
    edges = set()
    for attribute, members in groups.items():
        for a, b in combinations(sorted(members), 2):
            edges.add(Edge(a, b, kind, attribute))
    return sorted(edges, key=lambda e: e.sort_key)


def _normalize_host_path(path: str) -> str:
    if path.startswith("~"):
        return path
    normalized = posixpath.normpath(path)
    return normalized


def detect_shared_volumes(doc: ComposeDocument) -> list[Edge]:
    groups: dict[str, set[str]] = defaultdict(set)
    for name, spec in doc.services.items():
        for vol in spec.volumes:
            if vol.source is None or vol.type not in ("volume", "bind"):
                continue
            key = vol.source if vol.type == "volume" else _normalize_host_path(vol.source)
            groups[key].add(name)
    return _pairwise(groups, EdgeKind.SHARED_VOLUME)


def detect_shared_env_files(doc: ComposeDocument) -> list[Edge]:
    groups: dict[str, set[str]] = defaultdict(set)
    for name, spec in doc.services.items():
        for path in spec.env_files:
            groups[posixpath.normpath(path)].add(name)
    return _pairwise(groups, EdgeKind.SHARED_ENV_FILE)


# ---------------------------------------------------------------- proxy labels

# label prefix -> image names of the proxy that reads it
PROXY_LABEL_PREFIXES = {
    "traefik.": ("traefik",),
    "caddy": ("caddy", "caddy-docker-proxy"),
}
PROXY_ENV_KEYS = {"VIRTUAL_HOST": ("nginx-proxy", "nginx")}


def _proxy_hints(spec: ServiceSpec) -> list[tuple[str, tuple[str, ...]]]:
    found = []
    for prefix, images in PROXY_LABEL_PREFIXES.items():
        if any(k.lower().startswith(prefix) for k in spec.labels):
            found.append((prefix, images))
    for key, images in PROXY_ENV_KEYS.items():
        if key in spec.environment or key in {k.upper() for k in spec.labels}:
            found.append((key, images))
    return found


def _image_name(spec: ServiceSpec) -> str:
    if not spec.image:
        return ""
    return spec.image.lower().split("@", 1)[0].rsplit("/", 1)[-1].split(":", 1)[0]


def detect_label_proxy_config(doc: ComposeDocument, classified: Sequence[ClassifiedService]) -> list[Edge]:
    """Edges from services whose labels (or ``VIRTUAL_HOST``) configure a proxy.

    The target is the matching reverse proxy in the same file. When none is
    present the edge points at the synthetic node ``external-proxy``.
    """
    proxies = sorted(c.name for c in classified if c.service_type is ServiceType.REVERSE_PROXY)
    edges = set()
    for name, spec in doc.services.items():
        for prefix, images in _proxy_hints(spec):
            candidates = [p for p in proxies if p != name]
            if not candidates:
                if name in proxies:
                    # the proxy labelling itself (dashboard routing etc.)
                    continue
                edges.add(Edge(name, EXTERNAL_PROXY, EdgeKind.LABEL_PROXY_CONFIG, prefix))
                continue
            preferred = [p for p in candidates if any(i in _image_name(doc.services[p]) for i in images)]
            edges.add(Edge(name, (preferred or candidates)[0], EdgeKind.LABEL_PROXY_CONFIG, prefix))
    return sorted(edges, key=lambda e: e.sort_key)


# ---------------------------------------------------------------- duplicate images


def image_identity(spec: ServiceSpec) -> str | None:
    if spec.image:
        return f"image:{spec.image}"
    if spec.build is not None:
        context, dockerfile = spec.build.identity
        return f"build:{posixpath.normpath(context)}:{dockerfile}"
    return None


def duplicate_groups(doc: ComposeDocument) -> list[list[str]]:
    groups: dict[str, list[str]] = defaultdict(list)
    for name, spec in doc.services.items():
        ident = image_identity(spec)
        if ident is not None:
            groups[ident].append(name)
    return [sorted(members) for _, members in sorted(groups.items()) if len(members) >= 2]


def detect_duplicate_images(doc: ComposeDocument) -> list[Edge]:
    edges = []
    for members in duplicate_groups(doc):
        for a, b in combinations(members, 2):
            sa, sb = doc.services[a], doc.services[b]
            if sa.command != sb.command:
                attribute = "different-commands"
            elif sa.environment != sb.environment:
                attribute = "different-env"
            else:
                attribute = "same-command"
            edges.append(Edge(a, b, EdgeKind.DUPLICATE_IMAGE, attribute))
    return sorted(edges, key=lambda e: e.sort_key)


# ---------------------------------------------------------------- assembly


def build_graph(doc: ComposeDocument, classified: Sequence[ClassifiedService]) -> OrchestrationGraph:
    names = {c.name for c in classified}
    if names != set(doc.services):
        raise ValueError("classified services must cover exactly the document's services")
    edges: set[Edge] = set()
    dangling = []
    for name, spec in doc.services.items():
        for dep in spec.depends_on:
            if dep in doc.services:
                edges.add(Edge(name, dep, EdgeKind.DEPENDS_ON, spec.depends_conditions.get(dep)))
            else:
                dangling.append(DanglingReference(name, dep, "depends_on"))
        for link in spec.links:
            if link in doc.services:
                edges.add(Edge(name, link, EdgeKind.LINK))
            else:
                dangling.append(DanglingReference(name, link, "links"))
    env_edges = detect_env_references(doc)
    dup_edges = detect_duplicate_images(doc)
    proxy_edges = detect_label_proxy_config(doc, classified)
    edges.update(env_edges)
    edges.update(detect_shared_volumes(doc))
    edges.update(detect_shared_env_files(doc))
    edges.update(proxy_edges)
    edges.update(dup_edges)
    external = sorted({e.target for e in proxy_edges if e.target == EXTERNAL_PROXY})
    same_image = {frozenset((e.source, e.target)) for e in dup_edges}
    flags = {
        "swarm_deploy": any(spec.deploy is not None for spec in doc.services.values()),
        "cluster_env": any(frozenset((e.source, e.target)) in same_image for e in env_edges),
        "external_proxy": bool(external),
    }
    ordered_nodes = sorted(classified, key=lambda c: c.name)
    return OrchestrationGraph(
        nodes=ordered_nodes,
        edges=sorted(edges, key=lambda e: e.sort_key),
        dangling=sorted(dangling, key=lambda d: (d.service, d.missing, d.via)),
        external_nodes=external,
        flags=flags,
    )


def edges_between(graph: OrchestrationGraph, kind: EdgeKind, sources: Iterable[str], targets: Iterable[str]) -> list[Edge]:
    src, dst = set(sources), set(targets)
    out = []
    for e in graph.edges_of(kind):
        if (e.source in src and e.target in dst) or (kind in SYMMETRIC_KINDS and e.source in dst and e.target in src):
            out.append(e)
    return out
