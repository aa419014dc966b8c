"""Exception hierarchy shared by every stage of the analysis pipeline."""

from __future__ import annotations


class ComposePatternsError(Exception):
    """Base class for all errors raised by this package."""


# parsing


class YamlSyntaxError(ComposePatternsError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UndefinedAlias(YamlSyntaxError):
    pass


class NotAMapping(ComposePatternsError):
    pass


class MissingServices(ComposePatternsError):
    pass


class InvalidPort(ComposePatternsError):
    pass


class InvalidVolumeSpec(ComposePatternsError):
    pass


# merging


class ExtendsError(ComposePatternsError):
    pass


class ExtendsTargetMissing(ExtendsError):
    pass


class ExtendsFileMissing(ExtendsError):
    pass


class ExtendsCycle(ExtendsError):
    pass


class DepthExceeded(ExtendsError):
    pass


class OverrideShapeConflict(ComposePatternsError):
    pass


# classification


class InvalidImageRef(ComposePatternsError):
    pass


class RuleTableError(ComposePatternsError):
    pass


# mining and statistics


class EmptyCorpus(ComposePatternsError):
    pass


class InvalidSupport(ComposePatternsError):
    pass


class EmptySample(ComposePatternsError):
    pass


# reporting


class RootNotFound(ComposePatternsError):
    pass


class UnknownPattern(ComposePatternsError):
    pass
