"""Error type shared across the package.

Every contract violation raises :class:`CheckError` with a stable ``code``
string so callers (and the CLI) can branch on the failure kind without
parsing messages.
"""

from __future__ import annotations


class CheckError(Exception):
    """Precondition or contract violation, tagged with a stable code."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")
