"""Error types shared across modkit modules.

Every error carries a stable machine-readable ``code`` (echoed in API
bodies and CLI output) and the HTTP status the API layer maps it to.
"""

from __future__ import annotations


class ModerationError(Exception):
    """Base class for all modkit domain errors."""

    code = "ModerationError"
    http_status = 400

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class ValidationError(ModerationError):
    code = "ValidationError"


class BadRequest(ValidationError):
    """Malformed API input (body shape, parameter types)."""

    code = "BadRequest"


class EmptyPhrase(ValidationError):
    code = "EmptyPhrase"


class PhraseTooLong(ValidationError):
    code = "PhraseTooLong"


class InvalidPhrase(ValidationError):
    """Phrase text contains control characters or is otherwise unusable."""

    code = "InvalidPhrase"


class InvalidOptions(ValidationError):
    """Option combination violates an invariant (leet requires spell variants)."""

    code = "InvalidOptions"


class EmptyName(ValidationError):
    code = "EmptyName"


class DuplicateName(ModerationError):
    code = "DuplicateName"
    http_status = 409


class AlreadyInCategory(ModerationError):
    code = "AlreadyInCategory"
    http_status = 409


class CategoryNotFound(ModerationError):
    code = "CategoryNotFound"
    http_status = 404


class PhraseNotFound(ModerationError):
    code = "PhraseNotFound"
    http_status = 404


class NotLinked(ModerationError):
    code = "NotLinked"
    http_status = 404


class BuiltinNotFound(ModerationError):
    code = "BuiltinNotFound"
    http_status = 404


class SourceNotFound(ModerationError):
    code = "SourceNotFound"
    http_status = 404


class NotShared(ModerationError):
    code = "NotShared"


class NotDerived(ModerationError):
    code = "NotDerived"


class UpstreamGone(ModerationError):
    code = "UpstreamGone"
    http_status = 404


class OwnerNotFound(ModerationError):
    code = "OwnerNotFound"
    http_status = 404


class CommentNotFound(ModerationError):
    code = "CommentNotFound"
    http_status = 404


class BadPage(ValidationError):
    code = "BadPage"


class BadInterval(ValidationError):
    code = "BadInterval"


class FormatError(ModerationError):
    """Portable document or corpus file failed validation.

    ``field`` names the offending key path; ``line`` is set when the
    problem is tied to a specific line of the input.
    """

    code = "FormatError"

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        detail = message
        if field is not None:
            detail = f"{detail} (field: {field})"
        if line is not None:
            detail = f"{detail} (line: {line})"
        super().__init__(detail)


class AuthError(ModerationError):
    code = "AuthError"
    http_status = 401


class ConnectorUnavailable(ModerationError):
    code = "ConnectorUnavailable"
    http_status = 503


class StoreError(ModerationError):
    code = "StoreError"
    http_status = 500


class CorruptStore(StoreError):
    code = "CorruptStore"


class VersionTooNew(StoreError):
    code = "VersionTooNew"
