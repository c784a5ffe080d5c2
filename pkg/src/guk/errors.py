"""Exception types shared across the engine.

Every error carries a short stable ``code`` (used in reports and exit-code
mapping) plus a free-form ``data`` payload naming the offending ids.
"""


class EngineError(Exception):
    code = "EngineError"

    def __init__(self, message: str, **data):
        super().__init__(message)
        self.message = message
        self.data = dict(data)


class UnknownId(EngineError):
    code = "UnknownId"


class InvalidPresentation(EngineError):
    code = "InvalidPresentation"


class NotFinitelyClosed(EngineError):
    code = "NotFinitelyClosed"


class NotAPoset(EngineError):
    code = "NotAPoset"


class NotLex(EngineError):
    code = "NotLex"


class MissingPullback(EngineError):
    code = "MissingPullback"


class PreconditionFailed(EngineError):
    code = "PreconditionFailed"


class TriangleDoesNotCommute(EngineError):
    code = "TriangleDoesNotCommute"


class NotATopology(EngineError):
    code = "NotATopology"


class WorkLimitExceeded(EngineError):
    code = "WorkLimit"


class DocumentError(EngineError):
    """Base for DSL/CLI input failures."""
    code = "DocumentError"


class ParseError(DocumentError):
    code = "ParseError"


class NameClash(DocumentError):
    code = "NameClash"


class UnresolvedReference(DocumentError):
    code = "UnresolvedReference"


class ValidationFailed(DocumentError):
    code = "ValidationFailed"


class UnknownCommand(DocumentError):
    code = "UnknownCommand"


class MissingFlag(DocumentError):
    code = "MissingFlag"
