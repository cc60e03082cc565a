"""Exception types shared across the toolchain.

Every error carries a stable machine-readable ``code`` (kebab-case) so that
CLI and HTTP layers can map failures without string matching. ``details``
holds structured context such as JSON paths or scope names.
"""
from __future__ import annotations

from typing import Any


class ProcscopeError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details

    def __str__(self) -> str:
        base = super().__str__()
        return f"{self.code}: {base}" if self.code else base


class NotFoundError(ProcscopeError):
    """An event or object id does not exist in the log."""

    code = "not-found"


class OcelParseError(ProcscopeError):
    """Input is not syntactically valid JSON. ``details['offset']`` is the byte offset."""

    code = "parse-error"


class OcelSchemaError(ProcscopeError):
    """JSON is well-formed but violates the OCEL 2.0 document schema.

    ``details['path']`` locates the offending element, e.g. ``events[3].time``.
    """

    code = "schema-error"


class OcelModelError(ProcscopeError):
    """Data violates the event-log well-formedness rules.

    ``details['report']`` carries the ValidationReport when one is available.
    """

    code = "model-error"


class RulesetSyntaxError(ProcscopeError):
    """Rule text is not in the scope language.

    ``details`` carries ``line``, ``col``, ``expected`` (sorted tuple of token
    descriptions) and ``found``.
    """

    code = "syntax-error"

    @property
    def line(self) -> int:
        return self.details.get("line", 0)

    @property
    def col(self) -> int:
        return self.details.get("col", 0)


class DuplicateScopeError(ProcscopeError):
    """A scope file defines the same scope name twice."""

    code = "duplicate-scope"


class UnresolvedEntityError(ProcscopeError):
    """A filter item references a name that is unknown or ambiguous in the log."""

    code = "unresolved-entity"


class EmptyScopeError(ProcscopeError):
    """A ruleset selected no events; the scope would be unsatisfiable."""

    code = "empty-scope"


class EmptyObjectSetError(ProcscopeError):
    """A ruleset selected events but no related objects."""

    code = "empty-object-set"


class DuplicateScopeNameError(ProcscopeError):
    """The scope name is already taken by an existing object or event id."""

    code = "duplicate-scope-name"


class QualifierCollisionError(ProcscopeError):
    """An enrichment relation would duplicate an already-present triple."""

    code = "qualifier-collision"


class NotPocelError(ProcscopeError):
    """The operation requires a scope-enriched log and the input is not one."""

    code = "not-pocel"
