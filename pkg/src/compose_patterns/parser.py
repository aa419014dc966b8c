"""Compose YAML front end.

Parsing happens in two passes. The first walks the raw event stream to count
anchors, aliases and ``<<`` merge keys, which a normal load throws away. The
second loads the tree with YAML 1.2-style scalar resolution (no sexagesimal
integers, only ``true``/``false`` booleans), the way Compose itself reads
files. :func:`resolve_document` then normalizes the tree into the
:class:`~compose_patterns.model.ComposeDocument` model.
"""

from __future__ import annotations

import datetime as _dt
import enum
import posixpath
import re
import shlex
from dataclasses import dataclass, field
from typing import Any, Mapping

import yaml

from .errors import (
    InvalidPort,
    InvalidVolumeSpec,
    MissingServices,
    NotAMapping,
    UndefinedAlias,
    YamlSyntaxError,
)
from .model import (
    KNOWN_SERVICE_KEYS,
    BuildContext,
    ComposeDocument,
    ExtendsRef,
    PortBinding,
    ServiceSpec,
    SyntaxMeta,
    VolumeMount,
)

_BaseLoader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)


class ComposeLoader(_BaseLoader):  # type: ignore[misc, valid-type]
    """Safe loader with YAML 1.2 core-schema booleans and integers."""


def _core_schema_resolvers() -> dict:
    dropped = {"tag:yaml.org,2002:bool", "tag:yaml.org,2002:int", "tag:yaml.org,2002:float"}
    table = {
        first: [(tag, rx) for tag, rx in entries if tag not in dropped]
        for first, entries in yaml.SafeLoader.yaml_implicit_resolvers.items()
    }
    extra = [
        ("tag:yaml.org,2002:bool", re.compile(r"^(?:true|True|TRUE|false|False|FALSE)$"), "tTfF"),
        ("tag:yaml.org,2002:int", re.compile(r"^(?:[-+]?[0-9]+|0o[0-7]+|0x[0-9a-fA-F]+)$"), "-+0123456789"),
        (
            "tag:yaml.org,2002:float",
            re.compile(
                r"^(?:[-+]?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?)(?:[eE][-+]?[0-9]+)?"
                r"|[-+]?\.(?:inf|Inf|INF)|\.(?:nan|NaN|NAN))$"
            ),
            "-+0123456789.",
        ),
    ]
    for tag, rx, firsts in extra:
        for ch in firsts:
            table.setdefault(ch, []).append((tag, rx))
    return table


ComposeLoader.yaml_implicit_resolvers = _core_schema_resolvers()


def _construct_core_int(loader: yaml.SafeLoader, node: yaml.ScalarNode) -> int:
    value = loader.construct_scalar(node)
    return int(value, 0) if value.lower().startswith(("0o", "0x")) else int(value)


ComposeLoader.add_constructor("tag:yaml.org,2002:int", _construct_core_int)


@dataclass(frozen=True)
class RawDocument:
    source_path: str
    yaml_version_key: str | None
    top_level_keys: tuple[str, ...]
    syntax_meta: SyntaxMeta
    tree: dict[str, Any]
    text: str = field(default="", repr=False, compare=False)


def scan_syntax(text: str) -> SyntaxMeta:
    """Count anchors, aliases and merge keys from the YAML event stream."""
    anchors: list[str] = []
    defined: set[str] = set()
    aliases = 0
    merges = 0
    # one entry per open collection: [is_mapping, expecting_key]
    stack: list[list[bool]] = []

    def node_done() -> None:
        if stack and stack[-1][0]:
            stack[-1][1] = not stack[-1][1]

    try:
        for event in yaml.parse(text, Loader=_BaseLoader):
            anchor = getattr(event, "anchor", None)
            if isinstance(event, yaml.AliasEvent):
                if anchor not in defined:
                    mark = event.start_mark
                    raise UndefinedAlias(f"alias *{anchor} has no anchor", mark.line + 1, mark.column + 1)
                aliases += 1
                node_done()
                continue
            if anchor is not None and isinstance(event, yaml.NodeEvent):
                anchors.append(anchor)
                defined.add(anchor)
            if isinstance(event, yaml.MappingStartEvent):
                stack.append([True, True])
            elif isinstance(event, yaml.SequenceStartEvent):
                stack.append([False, False])
            elif isinstance(event, yaml.CollectionEndEvent):
                stack.pop()
                node_done()
            elif isinstance(event, yaml.ScalarEvent):
                if stack and stack[-1][0] and stack[-1][1] and event.value == "<<" and not event.style:
                    merges += 1
                node_done()
    except yaml.MarkedYAMLError as exc:
        raise _syntax_error(exc) from None
    return SyntaxMeta(
        anchor_count=len(anchors),
        alias_count=aliases,
        merge_key_count=merges,
        anchor_names=frozenset(anchors),
    )


def _syntax_error(exc: yaml.MarkedYAMLError) -> YamlSyntaxError:
    mark = exc.problem_mark or exc.context_mark
    message = exc.problem or str(exc)
    if mark is None:
        return YamlSyntaxError(message)
    return YamlSyntaxError(message, mark.line + 1, mark.column + 1)


def _detach(node: Any) -> Any:
    # aliases load as shared objects; give every position its own copy
    if isinstance(node, dict):
        return {k: _detach(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_detach(v) for v in node]
    return node


def parse_document(text: str, source_path: str = "<string>") -> RawDocument:
    if not text or not text.strip():
        raise NotAMapping(f"{source_path}: empty document")
    meta = scan_syntax(text)
    try:
        tree = yaml.load(text, Loader=ComposeLoader)
    except yaml.MarkedYAMLError as exc:
        raise _syntax_error(exc) from None
    except yaml.YAMLError as exc:
        raise YamlSyntaxError(str(exc)) from None
    if not isinstance(tree, dict):
        raise NotAMapping(f"{source_path}: top level is {type(tree).__name__}, not a mapping")
    tree = _detach(tree)
    version = tree.get("version")
    return RawDocument(
        source_path=source_path,
        yaml_version_key=None if version is None else _text(version),
        top_level_keys=tuple(str(k) for k in tree),
        syntax_meta=meta,
        tree=tree,
        text=text,
    )


def raw_from_tree(tree: Mapping[str, Any], source_path: str = "<tree>") -> RawDocument:
    """Wrap an already-loaded mapping (e.g. ``ComposeDocument.to_tree()``)."""
    version = tree.get("version")
    return RawDocument(
        source_path=source_path,
        yaml_version_key=None if version is None else _text(version),
        top_level_keys=tuple(str(k) for k in tree),
        syntax_meta=SyntaxMeta(),
        tree=_detach(dict(tree)),
    )


# ---------------------------------------------------------------- interpolation

_VAR_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def interpolate(value: str, env: Mapping[str, str], unresolved: set[str]) -> str:
    """Expand ``$VAR`` / ``${VAR...}`` references Compose-style.

    Names that end up empty because they are unset (and have no default) are
    added to ``unresolved``. ``$$`` is a literal dollar.
    """
    if "$" not in value:
        return value
    out: list[str] = []
    i = 0
    n = len(value)
    while i < n:
        ch = value[i]
        if ch != "$":
            out.append(ch)
            i += 1
            continue
        if i + 1 < n and value[i + 1] == "$":
            out.append("$")
            i += 2
            continue
        if i + 1 < n and value[i + 1] == "{":
            end = _closing_brace(value, i + 2)
            if end < 0:
                out.append(value[i:])
                break
            out.append(_expand_braced(value[i + 2 : end], env, unresolved))
            i = end + 1
            continue
        m = _VAR_NAME.match(value, i + 1)
        if m is None:
            out.append(ch)
            i += 1
            continue
        name = m.group(0)
        if name in env:
            out.append(env[name])
        else:
            unresolved.add(name)
        i = m.end()
    return "".join(out)


def _closing_brace(value: str, start: int) -> int:
    depth = 1
    for j in range(start, len(value)):
        if value[j] == "{":
            depth += 1
        elif value[j] == "}":
            depth -= 1
            if depth == 0:
                return j
    return -1


def _expand_braced(body: str, env: Mapping[str, str], unresolved: set[str]) -> str:
    m = _VAR_NAME.match(body)
    if m is None:
        return "${" + body + "}"
    name = m.group(0)
    rest = body[m.end() :]
    current = env.get(name)
    for op in (":-", "-", ":?", "?", ":+", "+"):
        if rest.startswith(op):
            arg = interpolate(rest[len(op) :], env, unresolved)
            empty_counts = op.startswith(":")
            is_set = current is not None and (current != "" or not empty_counts)
            if op in (":-", "-"):
                return current if is_set else arg  # type: ignore[return-value]
            if op in (":+", "+"):
                return arg if is_set else ""
            if is_set:
                return current  # type: ignore[return-value]
            unresolved.add(name)
            return ""
    if current is None:
        unresolved.add(name)
        return ""
    return current


def _interpolate_tree(node: Any, env: Mapping[str, str], unresolved: set[str]) -> Any:
    if isinstance(node, str):
        return interpolate(node, env, unresolved)
    if isinstance(node, dict):
        return {
            (interpolate(k, env, unresolved) if isinstance(k, str) else k): _interpolate_tree(v, env, unresolved)
            for k, v in node.items()
        }
    if isinstance(node, list):
        return [_interpolate_tree(v, env, unresolved) for v in node]
    return node


# ---------------------------------------------------------------- normalization


def _text(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (_dt.date, _dt.datetime)):
        return value.isoformat()
    return str(value)


def _kv_mapping(value: Any, what: str) -> dict[str, str]:
    if value is None:
        return {}
    if isinstance(value, dict):
        return {_text(k): _text(v) for k, v in value.items()}
    if isinstance(value, list):
        out: dict[str, str] = {}
        for item in value:
            key, sep, val = _text(item).partition("=")
            out[key] = val if sep else ""
        return out
    raise NotAMapping(f"{what} must be a mapping or a list of KEY=VALUE entries")


def _port_number(text: str, raw: Any) -> int:
    if not text.isdigit():
        raise InvalidPort(f"invalid port {raw!r}")
    port = int(text)
    if not 1 <= port <= 65535:
        raise InvalidPort(f"port {port} out of range in {raw!r}")
    return port


def _port_range(text: str, raw: Any) -> list[int]:
    start, sep, end = text.partition("-")
    lo = _port_number(start.strip(), raw)
    if not sep:
        return [lo]
    hi = _port_number(end.strip(), raw)
    if hi < lo:
        raise InvalidPort(f"descending port range in {raw!r}")
    return list(range(lo, hi + 1))


def parse_ports(item: Any) -> list[PortBinding]:
    """Normalize one ``ports`` entry (short or long syntax)."""
    if isinstance(item, bool):
        raise InvalidPort(f"invalid port {item!r}")
    if isinstance(item, int):
        return [PortBinding(container_port=_port_number(str(item), item))]
    if isinstance(item, dict):
        if "target" not in item:
            raise InvalidPort(f"long-syntax port without target: {item!r}")
        container = _port_number(_text(item["target"]), item)
        protocol = _text(item.get("protocol") or "tcp").lower()
        host_ip = _text(item["host_ip"]) if item.get("host_ip") else None
        published = _text(item.get("published")).strip()
        host = _port_range(published, item)[0] if published else None
        return [PortBinding(container, host, host_ip, protocol)]
    raw = item
    text = _text(item).strip()
    protocol = "tcp"
    if "/" in text:
        text, _, protocol = text.rpartition("/")
        protocol = protocol.lower() or "tcp"
    host_ip: str | None = None
    if text.startswith("["):
        close = text.find("]")
        if close < 0 or text[close + 1 : close + 2] != ":":
            raise InvalidPort(f"invalid port {raw!r}")
        host_ip = text[1:close]
        parts = [text[close + 2 :]]
        parts = parts[0].split(":")
    else:
        parts = text.split(":")
        if len(parts) == 3:
            host_ip = parts.pop(0) or None
        elif len(parts) > 3:
            raise InvalidPort(f"invalid port {raw!r}")
    if len(parts) == 1:
        hosts: list[int | None] = []
        containers = _port_range(parts[0], raw)
    elif len(parts) == 2:
        containers = _port_range(parts[1], raw)
        hosts = _port_range(parts[0], raw) if parts[0].strip() else []
    else:
        raise InvalidPort(f"invalid port {raw!r}")
    if not hosts:
        return [PortBinding(c, None, host_ip, protocol) for c in containers]
    if len(hosts) == len(containers):
        return [PortBinding(c, h, host_ip, protocol) for h, c in zip(hosts, containers)]
    if len(containers) == 1:
        # host range for a single container port: compose picks one from the range
        return [PortBinding(containers[0], hosts[0], host_ip, protocol)]
    raise InvalidPort(f"host and container port ranges differ in length: {raw!r}")


_WINDOWS_DRIVE = re.compile(r"^[A-Za-z]:[\\/]")


def parse_volume(item: Any) -> VolumeMount:
    """Normalize one service ``volumes`` entry (short or long syntax)."""
    if isinstance(item, dict):
        target = _text(item.get("target")).strip()
        if not target:
            raise InvalidVolumeSpec(f"long-syntax volume without target: {item!r}")
        source = _text(item["source"]) if item.get("source") not in (None, "") else None
        vtype = _text(item.get("type") or ("volume" if source is None else _guess_type(source)))
        return VolumeMount(target=target, source=source, type=vtype, read_only=bool(item.get("read_only")))
    text = _text(item).strip()
    if not text:
        raise InvalidVolumeSpec("empty volume entry")
    drive = ""
    if _WINDOWS_DRIVE.match(text):
        drive, text = text[:2], text[2:]
    parts = text.split(":")
    if drive:
        parts[0] = drive + parts[0]
    if len(parts) == 1:
        source, target, mode = None, parts[0], ""
    elif len(parts) == 2:
        source, target, mode = parts[0], parts[1], ""
    elif len(parts) == 3:
        source, target, mode = parts
    else:
        raise InvalidVolumeSpec(f"invalid volume {item!r}")
    if not target.startswith("/") and not _WINDOWS_DRIVE.match(target):
        raise InvalidVolumeSpec(f"volume target must be an absolute path: {item!r}")
    source = source or None
    read_only = "ro" in mode.split(",")
    vtype = "volume" if source is None else _guess_type(source)
    return VolumeMount(target=target, source=source, type=vtype, read_only=read_only)


def _guess_type(source: str) -> str:
    if source.startswith(("/", ".", "~")) or _WINDOWS_DRIVE.match(source):
        return "bind"
    return "volume"


def _parse_build(value: Any) -> BuildContext:
    if isinstance(value, dict):
        args = _kv_mapping(value.get("args"), "build.args")
        return BuildContext(
            context=_text(value["context"]) if value.get("context") is not None else None,
            dockerfile=_text(value["dockerfile"]) if value.get("dockerfile") is not None else None,
            args=tuple(sorted(args.items())),
        )
    return BuildContext(context=_text(value))


def _parse_extends(value: Any) -> ExtendsRef:
    if isinstance(value, dict):
        if "service" not in value:
            raise NotAMapping("extends requires a service name")
        file = value.get("file")
        return ExtendsRef(service=_text(value["service"]), file=None if file is None else _text(file))
    return ExtendsRef(service=_text(value))


def _parse_depends(value: Any) -> tuple[list[str], dict[str, str]]:
    if value is None:
        return [], {}
    if isinstance(value, dict):
        names = [_text(k) for k in value]
        conditions = {}
        for k, v in value.items():
            if isinstance(v, dict) and v.get("condition") is not None:
                conditions[_text(k)] = _text(v["condition"])
        return names, conditions
    if isinstance(value, list):
        return [_text(v) for v in value], {}
    return [_text(value)], {}


def _parse_env_files(value: Any) -> list[str]:
    if value is None:
        return []
    items = value if isinstance(value, list) else [value]
    out = []
    for item in items:
        if isinstance(item, dict):
            item = item.get("path")
        out.append(_text(item))
    return out


def _parse_command(value: Any) -> str | None:
    if value is None:
        return None
    if isinstance(value, list):
        return shlex.join(_text(v) for v in value)
    return _text(value)


def service_from_mapping(name: str, mapping: Mapping[str, Any] | None) -> ServiceSpec:
    if mapping is None:
        mapping = {}
    if not isinstance(mapping, dict):
        raise NotAMapping(f"service {name!r} is not a mapping")
    spec = ServiceSpec(name=name)
    for key, value in mapping.items():
        key = str(key)
        if key == "image":
            spec.image = None if value is None else _text(value)
        elif key == "build":
            spec.build = None if value is None else _parse_build(value)
        elif key == "ports":
            for item in value or []:
                spec.ports.extend(parse_ports(item))
        elif key == "volumes":
            spec.volumes = [parse_volume(v) for v in value or []]
        elif key == "environment":
            spec.environment = _kv_mapping(value, f"{name}.environment")
        elif key == "env_file":
            spec.env_files = _parse_env_files(value)
        elif key == "labels":
            spec.labels = _kv_mapping(value, f"{name}.labels")
        elif key == "depends_on":
            spec.depends_on, spec.depends_conditions = _parse_depends(value)
        elif key == "links":
            spec.links = [_text(v).split(":", 1)[0] for v in value or []]
        elif key == "command":
            spec.command = _parse_command(value)
        elif key == "extends":
            spec.extends = None if value is None else _parse_extends(value)
        elif key == "deploy":
            spec.deploy = value
        elif key == "hostname":
            spec.hostname = None if value is None else _text(value)
        else:
            spec.extras[key] = value
    return spec


def resolve_document(raw: RawDocument, env: Mapping[str, str] | None = None) -> ComposeDocument:
    """Normalize a parsed tree into a :class:`ComposeDocument`.

    ``env`` supplies values for ``${VAR}`` interpolation; it defaults to an
    empty mapping, so unset names become empty text and are listed in
    ``ComposeDocument.unresolved_variables``.
    """
    unresolved: set[str] = set()
    tree = _interpolate_tree(raw.tree, env or {}, unresolved)
    services = tree.get("services")
    if not isinstance(services, dict) or not services:
        raise MissingServices(f"{raw.source_path}: no services defined")
    specs = {str(name): service_from_mapping(str(name), body) for name, body in services.items()}
    volumes = tree.get("volumes")
    networks = tree.get("networks")
    return ComposeDocument(
        services=specs,
        named_volumes={str(k) for k in volumes} if isinstance(volumes, dict) else set(),
        networks={str(k) for k in networks} if isinstance(networks, dict) else set(),
        syntax_meta=raw.syntax_meta,
        source_path=raw.source_path,
        version=raw.yaml_version_key,
        unresolved_variables=unresolved,
    )


def load_compose(text: str, source_path: str = "<string>", env: Mapping[str, str] | None = None) -> ComposeDocument:
    return resolve_document(parse_document(text, source_path), env)


# ---------------------------------------------------------------- file roles


class FileRole(str, enum.Enum):
    COMPOSE = "Compose"
    OVERRIDE_CANDIDATE = "OverrideCandidate"
    CONFIGURATION_NOT_COMPOSE = "ConfigurationNotCompose"
    TEMPLATE_FOR_GENERATING = "TemplateForGenerating"


@dataclass(frozen=True)
class RoleAssessment:
    role: FileRole
    auto_generated: bool = False
    reason: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"role": self.role.value, "auto_generated": self.auto_generated, "reason": self.reason}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RoleAssessment:
        return cls(FileRole(data["role"]), data["auto_generated"], data["reason"])


TEMPLATE_MARKERS = ("{{", "{%", "<%")
_GENERATED = re.compile(r"generat|do not edit", re.IGNORECASE)
_OVERRIDE_NAME = re.compile(r"override", re.IGNORECASE)

# service-level keywords of the Compose file format (v2, v3 and Compose Spec)
COMPOSE_SERVICE_KEYWORDS = KNOWN_SERVICE_KEYS | {
    "annotations", "attach", "blkio_config", "cap_add", "cap_drop", "cgroup", "cgroup_parent",
    "configs", "container_name", "cpu_count", "cpu_percent", "cpu_period", "cpu_quota",
    "cpu_rt_period", "cpu_rt_runtime", "cpu_shares", "cpus", "cpuset", "credential_spec",
    "develop", "device_cgroup_rules", "devices", "dns", "dns_opt", "dns_search", "domainname",
    "entrypoint", "expose", "external_links", "extra_hosts", "group_add", "healthcheck", "init",
    "ipc", "isolation", "logging", "mac_address", "mem_limit", "mem_reservation", "mem_swappiness",
    "memswap_limit", "network_mode", "networks", "oom_kill_disable", "oom_score_adj", "pid",
    "pids_limit", "platform", "privileged", "profiles", "pull_policy", "read_only", "restart",
    "runtime", "scale", "secrets", "security_opt", "shm_size", "stdin_open", "stop_grace_period",
    "stop_signal", "storage_opt", "sysctls", "tmpfs", "tty", "ulimits", "user", "userns_mode",
    "uts", "volume_driver", "volumes_from", "working_dir", "logging", "log_driver", "log_opt",
    "mem_swappiness", "net",
}


def has_template_markers(text: str) -> bool:
    return any(marker in text for marker in TEMPLATE_MARKERS)


def comment_lines(text: str, limit: int = 10) -> list[str]:
    """First ``limit`` comment lines of a YAML source, without the ``#``."""
    out = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            out.append(stripped.lstrip("#").strip())
            if len(out) >= limit:
                break
    return out


def classify_file_role(
    raw: RawDocument | None,
    filename: str,
    leading_comments: list[str] | None = None,
    source_text: str | None = None,
) -> RoleAssessment:
    """Assign a repository-level role to one compose-like file.

    ``raw`` may be ``None`` when the YAML failed to parse; that is only valid
    if the source text carries template delimiters.
    """
    text = source_text if source_text is not None else (raw.text if raw is not None else "")
    if leading_comments is None:
        leading_comments = comment_lines(text)
    generated = any(_GENERATED.search(c) for c in leading_comments[:10])
    base = posixpath.basename(filename.replace("\\", "/"))

    def result(role: FileRole, reason: str) -> RoleAssessment:
        return RoleAssessment(role, generated, reason)

    if has_template_markers(text):
        return result(FileRole.TEMPLATE_FOR_GENERATING, "template delimiters in source")
    if raw is None:
        raise ValueError(f"{filename}: cannot assign a role to an unparsed file without template markers")
    if _OVERRIDE_NAME.search(base):
        return result(FileRole.OVERRIDE_CANDIDATE, "override file name")
    services = raw.tree.get("services")
    if "services" not in raw.top_level_keys or not isinstance(services, dict) or not services:
        return result(FileRole.CONFIGURATION_NOT_COMPOSE, "no services mapping")
    bodies = list(services.values())
    if not all(isinstance(b, dict) or b is None for b in bodies):
        return result(FileRole.CONFIGURATION_NOT_COMPOSE, "service entries are not mappings")
    sources = [bool(b) and any(k in b for k in ("image", "build", "extends")) for b in bodies]
    if any(sources):
        if all(sources):
            return result(FileRole.COMPOSE, "every service has image, build or extends")
        return result(FileRole.OVERRIDE_CANDIDATE, "some services lack image, build and extends")
    keys = {str(k) for b in bodies if b for k in b}
    if keys and keys <= COMPOSE_SERVICE_KEYWORDS:
        return result(FileRole.OVERRIDE_CANDIDATE, "service fragments only use compose keywords")
    return result(FileRole.CONFIGURATION_NOT_COMPOSE, "no service has image, build or extends")
