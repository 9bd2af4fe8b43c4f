"""Path syntax for the virtual filesystem.

A path is a tuple of name segments; the empty tuple is the root
directory.  Names may contain any Unicode scalar value except NUL and
``'/'`` (so spaces and most "pathological" characters are legal), and
limits are counted in Unicode scalar values, not bytes.
"""

from __future__ import annotations

from ..errors import MikfsError, StatusCode

MAX_NAME_LENGTH = 255
MAX_PATH_LENGTH = 4095

PathName = tuple[str, ...]

ROOT: PathName = ()


def name_violation(name: str) -> str | None:
    """Return the rule a candidate file/directory name breaks, or None."""
    if len(name) < 1:
        return "name is empty (minimum length 1)"
    if len(name) > MAX_NAME_LENGTH:
        return f"name is {len(name)} characters (maximum {MAX_NAME_LENGTH})"
    if "\x00" in name:
        return "name contains forbidden character NUL"
    if "/" in name:
        return "name contains forbidden character '/'"
    if any(0xD800 <= ord(ch) <= 0xDFFF for ch in name):
        return "name contains a surrogate code point (not a Unicode scalar value)"
    return None


def validate_name(name: str) -> None:
    """Raise ``InvalidPath`` unless *name* is a legal node name."""
    reason = name_violation(name)
    if reason is not None:
        raise MikfsError(StatusCode.INVALID_PATH, reason)


def parse_path(raw: str) -> PathName:
    """Parse a '/'-separated path string into a segment tuple.

    The leading '/' is optional; ``""`` and ``"/"`` both denote the
    root.  Empty segments, ``.`` and ``..`` are rejected: paths on the
    wire are always absolute and already resolved.
    """
    if raw in ("", "/"):
        return ROOT
    text = raw[1:] if raw.startswith("/") else raw
    segments = text.split("/")
    for segment in segments:
        if segment == "":
            raise MikfsError(StatusCode.INVALID_PATH, f"empty segment in {raw!r}")
        if segment in (".", ".."):
            raise MikfsError(
                StatusCode.INVALID_PATH, f"relative segment {segment!r} not allowed"
            )
        validate_name(segment)
    path = tuple(segments)
    rendered_length = len(render_path(path))
    if rendered_length > MAX_PATH_LENGTH:
        raise MikfsError(
            StatusCode.INVALID_PATH,
            f"full path is {rendered_length} characters (maximum {MAX_PATH_LENGTH})",
        )
    return path


def render_path(path: PathName) -> str:
    """Render a segment tuple back to its canonical string form."""
    return "/" + "/".join(path)


def rendered_length(path: PathName) -> int:
    if not path:
        return 1
    return len(path) + sum(len(s) for s in path)  # '/' per segment + names


def is_prefix(prefix: PathName, path: PathName) -> bool:
    """Segment-aware prefix test: ``/doc`` is not a prefix of ``/docs/x``."""
    return len(prefix) <= len(path) and path[: len(prefix)] == prefix


__all__ = [
    "MAX_NAME_LENGTH",
    "MAX_PATH_LENGTH",
    "PathName",
    "ROOT",
    "name_violation",
    "validate_name",
    "parse_path",
    "render_path",
    "rendered_length",
    "is_prefix",
]
