"""Configuration reuse: ``extends`` inheritance and ``-f`` override merging.

Both mechanisms share one service-level merge:

* ``image``, ``command``, ``hostname`` and ``extends`` are replaced when the
  overriding side sets them;
* ``environment`` and ``labels`` merge per key, the overriding side winning;
* ``ports`` and ``volumes`` are concatenated and deduplicated (ports by
  host:container:protocol, volumes by container target, later entry wins);
* ``depends_on``, ``links`` and ``env_file`` are unions in first-seen order;
* ``build`` merges field by field, ``deploy`` and unmodelled keys deep-merge.
"""

from __future__ import annotations

import posixpath
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable

from .errors import (
    DepthExceeded,
    ExtendsCycle,
    ExtendsFileMissing,
    ExtendsTargetMissing,
    OverrideShapeConflict,
)
from .model import BuildContext, ComposeDocument, ServiceSpec

DEFAULT_MAX_DEPTH = 10
SELF = "self"


@dataclass(frozen=True)
class MergeStep:
    target_service: str
    source: str
    keys_overridden: frozenset[str] = frozenset()
    keys_inherited: frozenset[str] = frozenset()
    # keys only the overriding side sets
    keys_added: frozenset[str] = frozenset()

    def to_dict(self) -> dict[str, Any]:
        return {
            "target_service": self.target_service,
            "source": self.source,
            "keys_overridden": sorted(self.keys_overridden),
            "keys_inherited": sorted(self.keys_inherited),
            "keys_added": sorted(self.keys_added),
        }


@dataclass
class MergeTrace:
    steps: list[MergeStep] = field(default_factory=list)

    def for_service(self, name: str) -> list[MergeStep]:
        return [s for s in self.steps if s.target_service == name]


def _union(*seqs: Iterable[Any]) -> list[Any]:
    out: list[Any] = []
    for seq in seqs:
        for item in seq:
            if item not in out:
                out.append(item)
    return out


def _dedupe_by(items: list[Any], key: Callable[[Any], Any]) -> list[Any]:
    # first position of each identity, last value
    order: list[Any] = []
    latest: dict[Any, Any] = {}
    for item in items:
        k = key(item)
        if k not in latest:
            order.append(k)
        latest[k] = item
    return [latest[k] for k in order]


def deep_merge(base: Any, over: Any, path: str = "") -> Any:
    """Merge two opaque YAML subtrees with override semantics."""
    if over is None:
        return base
    if base is None:
        return over
    if isinstance(base, dict) and isinstance(over, dict):
        out = dict(base)
        for key, value in over.items():
            out[key] = deep_merge(base[key], value, f"{path}.{key}") if key in base else value
        return out
    if isinstance(base, list) and isinstance(over, list):
        return _union(base, over)
    if isinstance(base, (dict, list)) or isinstance(over, (dict, list)):
        raise OverrideShapeConflict(
            f"{path.lstrip('.') or '<root>'}: cannot merge {type(base).__name__} with {type(over).__name__}"
        )
    return over


def _merge_build(base: BuildContext | None, over: BuildContext | None) -> BuildContext | None:
    if base is None or over is None:
        return over if base is None else base
    args = dict(base.args)
    args.update(over.args)
    return BuildContext(
        context=over.context if over.context is not None else base.context,
        dockerfile=over.dockerfile if over.dockerfile is not None else base.dockerfile,
        args=tuple(sorted(args.items())),
    )


def merge_services(base: ServiceSpec, over: ServiceSpec, source: str = SELF) -> tuple[ServiceSpec, MergeStep]:
    """Overlay ``over`` onto ``base``; the result keeps ``over.name``."""
    extras = dict(base.extras)
    for key, value in over.extras.items():
        extras[key] = deep_merge(base.extras[key], value, f"{over.name}.{key}") if key in base.extras else value
    merged = ServiceSpec(
        name=over.name,
        image=over.image if over.image is not None else base.image,
        build=_merge_build(base.build, over.build),
        ports=_dedupe_by(base.ports + over.ports, lambda p: p.identity),
        volumes=_dedupe_by(base.volumes + over.volumes, lambda v: v.target),
        environment={**base.environment, **over.environment},
        env_files=_union(base.env_files, over.env_files),
        labels={**base.labels, **over.labels},
        depends_on=_union(base.depends_on, over.depends_on),
        depends_conditions={**base.depends_conditions, **over.depends_conditions},
        links=_union(base.links, over.links),
        command=over.command if over.command is not None else base.command,
        extends=over.extends if over.extends is not None else base.extends,
        deploy=deep_merge(base.deploy, over.deploy, f"{over.name}.deploy"),
        hostname=over.hostname if over.hostname is not None else base.hostname,
        extras=extras,
    )
    base_keys = base.present_keys()
    over_keys = over.present_keys()
    step = MergeStep(
        target_service=over.name,
        source=source,
        keys_overridden=frozenset(base_keys & over_keys),
        keys_inherited=frozenset(base_keys - over_keys),
        keys_added=frozenset(over_keys - base_keys),
    )
    return merged, step


def apply_override(base: ComposeDocument, override: ComposeDocument) -> tuple[ComposeDocument, MergeTrace]:
    """Merge ``override`` over ``base`` the way ``docker compose -f base -f override`` does.

    Folding a list of files left to right reproduces a longer ``-f`` chain.
    """
    trace = MergeTrace()
    source = override.source_path or "override"
    services: dict[str, ServiceSpec] = {}
    for name, spec in base.services.items():
        if name in override.services:
            services[name], step = merge_services(spec, override.services[name], source)
            trace.steps.append(step)
        else:
            services[name] = spec
    for name, spec in override.services.items():
        if name not in base.services:
            services[name] = spec
            trace.steps.append(MergeStep(name, source, keys_added=frozenset(spec.present_keys())))
    merged = ComposeDocument(
        services=services,
        named_volumes=base.named_volumes | override.named_volumes,
        networks=base.networks | override.networks,
        syntax_meta=base.syntax_meta,
        source_path=base.source_path,
        version=override.version if override.version is not None else base.version,
        unresolved_variables=base.unresolved_variables | override.unresolved_variables,
    )
    return merged, trace


def apply_overrides(documents: list[ComposeDocument]) -> tuple[ComposeDocument, MergeTrace]:
    """Left-to-right fold of :func:`apply_override` over an ``-f`` list."""
    if not documents:
        raise ValueError("at least one document is required")
    merged = documents[0]
    trace = MergeTrace()
    for doc in documents[1:]:
        merged, step_trace = apply_override(merged, doc)
        trace.steps.extend(step_trace.steps)
    return merged, trace


def is_self_sufficient(doc: ComposeDocument) -> bool:
    """True when every service names an image, a build or an ``extends`` source."""
    return doc.is_self_sufficient


Loader = Callable[[str], ComposeDocument]


def resolve_extends(
    doc: ComposeDocument,
    loader: Loader | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> tuple[ComposeDocument, MergeTrace]:
    """Inline every ``extends`` record of ``doc``.

    ``loader`` maps a path (already joined with the directory of the
    extending file) to a resolved document; it is only called for
    cross-file references.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    trace = MergeTrace()
    here = doc.source_path
    cache: dict[str, ComposeDocument] = {here: doc}

    def load(path: str) -> ComposeDocument:
        if path not in cache:
            if loader is None:
                raise ExtendsFileMissing(f"no loader available for {path}")
            try:
                cache[path] = loader(path)
            except (OSError, ExtendsFileMissing) as exc:
                raise ExtendsFileMissing(f"cannot load extends file {path}: {exc}") from exc
        return cache[path]

    def resolve(path: str, owner: ComposeDocument, name: str, chain: list[tuple[str, str]]) -> ServiceSpec:
        spec = owner.services[name]
        ref = spec.extends
        if ref is None:
            return spec
        if len(chain) > max_depth:
            raise DepthExceeded(f"extends chain deeper than {max_depth}: {' -> '.join(s for _, s in chain)}")
        if ref.file:
            target_path = posixpath.normpath(posixpath.join(posixpath.dirname(path), ref.file))
            target = load(target_path)
        else:
            target_path, target = path, owner
        key = (target_path, ref.service)
        if key in chain:
            raise ExtendsCycle(f"extends cycle through {ref.service!r} in {target_path}")
        if ref.service not in target.services:
            raise ExtendsTargetMissing(f"service {ref.service!r} not found in {target_path}")
        parent = resolve(target_path, target, ref.service, [*chain, key])
        merged, step = merge_services(
            replace(parent, name=name),
            replace(spec, extends=None),
            source=SELF if target_path == path else target_path,
        )
        trace.steps.append(step)
        return replace(merged, extends=None)

    services = {name: resolve(here, doc, name, [(here, name)]) for name in doc.services}
    return replace(doc, services=services), trace
