"""Status codes shared by every mikfs service, and the error type that carries them.

The numeric values are part of the wire contract and must never be
renumbered once published.
"""

from __future__ import annotations

from enum import IntEnum


class StatusCode(IntEnum):
    OK = 0
    NOT_AUTHENTICATED = 1
    PERMISSION_DENIED = 2
    NOT_FOUND = 3
    ALREADY_EXISTS = 4
    INVALID_PATH = 5
    INVALID_ARGUMENT = 6
    READ_ONLY_FILESYSTEM = 7
    APPEND_ONLY_VIOLATION = 8
    SIZE_LIMIT_EXCEEDED = 9
    SCHEME_UNSUPPORTED = 10
    AUTH_FAILED = 11
    NOT_A_DIRECTORY = 12
    NOT_A_FILE = 13
    DIRECTORY_NOT_EMPTY = 14
    CYCLE_REJECTED = 15


class MikfsError(Exception):
    """An operation failure with a wire-level status code attached.

    Server handlers convert these into response ``Status`` messages;
    clients raise them again when a response carries a non-OK code.
    """

    def __init__(self, code: StatusCode, message: str = ""):
        self.code = StatusCode(code)
        self.message = message or self.code.name
        super().__init__(f"{self.code.name}: {self.message}" if message else self.code.name)
