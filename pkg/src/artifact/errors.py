"""Error type shared by every module."""

from __future__ import annotations


class ArtifactError(ValueError):
    """A contract violation, tagged with a stable machine-readable code."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)


# codes that mean "the caller handed us bad input" (CLI exit status 2)
INPUT_ERRORS = frozenset(
    {
        "MALFORMED_INTERVAL",
        "OUT_OF_AMBIENT",
        "AMBIENT_MISMATCH",
        "UNBOUNDED_AMBIENT",
        "BAD_AMBIENT",
        "BAD_RATIONAL",
        "BAD_JSON",
        "BAD_CREDENCE",
        "BAD_FUNCTION",
        "BAD_MAP",
        "BAD_RATIO",
        "NOT_A_PARTITION",
        "NOT_IN_ALGEBRA",
        "NOT_A_REFINEMENT",
        "NOT_SUBORDINATE",
        "TARGET_MISMATCH",
        "UNNORMALIZABLE",
        "UNSUPPORTED_RULE",
        "ZERO_MASS_CONDITIONING",
        "EMPTY_SET",
        "CAP_EXCEEDED",
        "CLOSURE_TOO_LARGE",
    }
)
