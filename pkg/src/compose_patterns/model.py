"""Resolved compose document model and its canonical tree form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class SyntaxMeta:
    """Reuse syntax found in the source text before alias resolution."""

    anchor_count: int = 0
    alias_count: int = 0
    merge_key_count: int = 0
    anchor_names: frozenset[str] = frozenset()

    def to_dict(self) -> dict[str, Any]:
        return {
            "anchor_count": self.anchor_count,
            "alias_count": self.alias_count,
            "merge_key_count": self.merge_key_count,
            "anchor_names": sorted(self.anchor_names),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SyntaxMeta:
        return cls(
            anchor_count=data["anchor_count"],
            alias_count=data["alias_count"],
            merge_key_count=data["merge_key_count"],
            anchor_names=frozenset(data["anchor_names"]),
        )


@dataclass(frozen=True)
class PortBinding:
    container_port: int
    host_port: int | None = None
    host_ip: str | None = None
    protocol: str = "tcp"

    @property
    def identity(self) -> tuple:
        # dedupe key used by override merging
        return (self.host_port, self.container_port, self.protocol)

    def to_text(self) -> str:
        out = str(self.container_port)
        if self.host_port is not None:
            out = f"{self.host_port}:{out}"
            if self.host_ip:
                ip = f"[{self.host_ip}]" if ":" in self.host_ip else self.host_ip
                out = f"{ip}:{out}"
        return f"{out}/{self.protocol}"


@dataclass(frozen=True)
class VolumeMount:
    target: str
    source: str | None = None
    type: str = "volume"
    read_only: bool = False

    def to_tree(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": self.type}
        if self.source is not None:
            out["source"] = self.source
        out["target"] = self.target
        if self.read_only:
            out["read_only"] = True
        return out


@dataclass(frozen=True)
class BuildContext:
    context: str | None = None
    dockerfile: str | None = None
    args: tuple[tuple[str, str], ...] = ()

    @property
    def identity(self) -> tuple[str, str]:
        return (self.context or ".", self.dockerfile or "Dockerfile")

    def to_tree(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.context is not None:
            out["context"] = self.context
        if self.dockerfile is not None:
            out["dockerfile"] = self.dockerfile
        if self.args:
            out["args"] = dict(self.args)
        return out


@dataclass(frozen=True)
class ExtendsRef:
    service: str
    file: str | None = None

    def to_tree(self) -> dict[str, Any]:
        out = {"service": self.service}
        if self.file is not None:
            out["file"] = self.file
        return out


# compose keys modelled by dedicated ServiceSpec fields
KNOWN_SERVICE_KEYS = frozenset(
    {
        "image",
        "build",
        "ports",
        "volumes",
        "environment",
        "env_file",
        "labels",
        "depends_on",
        "links",
        "command",
        "extends",
        "deploy",
        "hostname",
    }
)


@dataclass
class ServiceSpec:
    name: str
    image: str | None = None
    build: BuildContext | None = None
    ports: list[PortBinding] = field(default_factory=list)
    volumes: list[VolumeMount] = field(default_factory=list)
    environment: dict[str, str] = field(default_factory=dict)
    env_files: list[str] = field(default_factory=list)
    labels: dict[str, str] = field(default_factory=dict)
    depends_on: list[str] = field(default_factory=list)
    # depends_on long form: service name -> condition
    depends_conditions: dict[str, str] = field(default_factory=dict)
    links: list[str] = field(default_factory=list)
    command: str | None = None
    extends: ExtendsRef | None = None
    deploy: Any = None
    hostname: str | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def unknown_keys(self) -> set[str]:
        return set(self.extras)

    @property
    def is_self_sufficient(self) -> bool:
        return self.image is not None or self.build is not None or self.extends is not None

    def present_keys(self) -> set[str]:
        """Compose keys this service sets, as they would appear in YAML."""
        keys = set(self.extras)
        simple = {
            "image": self.image,
            "build": self.build,
            "command": self.command,
            "extends": self.extends,
            "deploy": self.deploy,
            "hostname": self.hostname,
        }
        keys.update(k for k, v in simple.items() if v is not None)
        listy = {
            "ports": self.ports,
            "volumes": self.volumes,
            "environment": self.environment,
            "env_file": self.env_files,
            "labels": self.labels,
            "depends_on": self.depends_on,
            "links": self.links,
        }
        keys.update(k for k, v in listy.items() if v)
        return keys

    def to_tree(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.image is not None:
            out["image"] = self.image
        if self.build is not None:
            out["build"] = self.build.to_tree()
        if self.command is not None:
            out["command"] = self.command
        if self.hostname is not None:
            out["hostname"] = self.hostname
        if self.extends is not None:
            out["extends"] = self.extends.to_tree()
        if self.ports:
            out["ports"] = [p.to_text() for p in self.ports]
        if self.volumes:
            out["volumes"] = [v.to_tree() for v in self.volumes]
        if self.environment:
            out["environment"] = dict(sorted(self.environment.items()))
        if self.env_files:
            out["env_file"] = list(self.env_files)
        if self.labels:
            out["labels"] = dict(sorted(self.labels.items()))
        if self.depends_on:
            if self.depends_conditions:
                out["depends_on"] = {
                    d: ({"condition": self.depends_conditions[d]} if d in self.depends_conditions else {})
                    for d in self.depends_on
                }
            else:
                out["depends_on"] = list(self.depends_on)
        if self.links:
            out["links"] = list(self.links)
        if self.deploy is not None:
            out["deploy"] = self.deploy
        for key in sorted(self.extras):
            out[key] = self.extras[key]
        return out


def _escape_dollars(node: Any) -> Any:
    if isinstance(node, str):
        return node.replace("$", "$$")
    if isinstance(node, dict):
        return {_escape_dollars(k): _escape_dollars(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_escape_dollars(v) for v in node]
    return node


@dataclass
class ComposeDocument:
    services: dict[str, ServiceSpec]
    named_volumes: set[str] = field(default_factory=set)
    networks: set[str] = field(default_factory=set)
    syntax_meta: SyntaxMeta = field(default_factory=SyntaxMeta, compare=False)
    source_path: str = field(default="", compare=False)
    version: str | None = None
    unresolved_variables: set[str] = field(default_factory=set, compare=False)

    @property
    def is_self_sufficient(self) -> bool:
        return all(s.is_self_sufficient for s in self.services.values())

    def to_tree(self) -> dict[str, Any]:
        """Compose-shaped mapping that resolves back to an equal document.

        Literal ``$`` signs are written as ``$$`` so a second interpolation
        pass leaves values unchanged.
        """
        out: dict[str, Any] = {}
        if self.version is not None:
            out["version"] = self.version
        out["services"] = {name: self.services[name].to_tree() for name in sorted(self.services)}
        if self.named_volumes:
            out["volumes"] = {name: {} for name in sorted(self.named_volumes)}
        if self.networks:
            out["networks"] = {name: {} for name in sorted(self.networks)}
        return _escape_dollars(out)

    def canonical(self) -> str:
        return json.dumps(self.to_tree(), sort_keys=True, separators=(",", ":"), default=str)
