"""Exception types shared across the toolkit."""


class AtriaError(Exception):
    """Base class for all toolkit errors."""


class MalformedDocument(AtriaError):
    """Input is not a syntactically valid trace document."""


class SchemaViolation(AtriaError):
    """A required field is missing or has the wrong type."""

    def __init__(self, field: str, detail: str = ""):
        self.field = field
        super().__init__(f"field {field!r}: {detail}" if detail else f"field {field!r}")


class InvariantViolation(AtriaError):
    """A structurally well-formed document breaks a run invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownNode(AtriaError):
    """Node id does not exist in the run."""


class HiddenNode(AtriaError):
    """Node exists but is inside a collapsed subtree."""


class NoSource(AtriaError):
    """The run carries no source text."""


class LineOutOfRange(AtriaError):
    """Queried line lies outside the run's source."""


class DuplicateRun(AtriaError):
    """A run with this id is already loaded; stored runs are immutable."""


class EmptyInput(AtriaError):
    """An operation that needs at least one value got none."""


class EmptyView(AtriaError):
    """Layout requested for a view with no visible nodes."""


class BadParams(AtriaError):
    """Generator parameters outside their documented domain."""
