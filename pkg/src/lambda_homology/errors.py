"""Exception types shared across the package."""

from __future__ import annotations


class LambdaHomologyError(Exception):
    """Base error carrying a JSON-friendly payload for CLI reporting."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class ValidationError(LambdaHomologyError):
    """Input data violates a required axiom or format (CLI exit code 1)."""


class ResourceCapError(LambdaHomologyError):
    """A configured resource cap was exceeded (CLI exit code 2)."""


class InternalCheckError(LambdaHomologyError):
    """An invariant that should be unbreakable failed; indicates a bug."""
