"""Filename glob matching used by subscriptions and search.

Patterns support ``*``, ``?`` and ``[...]`` character classes and are
applied case-sensitively to a single name component, never across
``'/'`` boundaries (callers match path prefixes separately).
"""

from __future__ import annotations

import fnmatch


def name_matches(name: str, pattern: str) -> bool:
    """Case-sensitive glob match of one name component."""
    return fnmatch.fnmatchcase(name, pattern)


def path_matches(path_string: str, pattern: str) -> bool:
    """Glob match over a whole rendered path, e.g. ``/docs/*``.

    ``*`` is not '/'-aware here; the pattern is matched against the full
    string, which is the documented behavior for export filters.
    """
    return fnmatch.fnmatchcase(path_string, pattern)
