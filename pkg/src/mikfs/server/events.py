"""Change-event records and subscription filters.

Every committed mutation publishes exactly one event (a move is one
event carrying both paths; a recursive delete is one event for the root
of the deletion).  Filters match a segment-aware path prefix plus a glob
over the final name component.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from ..globs import name_matches
from ..vfs import PathName, is_prefix


class ChangeKind(IntEnum):
    """Mirrors the wire enum's numbering (checked by tests)."""

    FILE_CREATED = 1
    FILE_MODIFIED = 2
    FILE_DELETED = 3
    FILE_MOVED = 4
    DIR_CREATED = 5
    DIR_DELETED = 6
    DIR_MOVED = 7
    PERMISSIONS_CHANGED = 8
    ATTRIBUTES_CHANGED = 9


_MOVES = frozenset({ChangeKind.FILE_MOVED, ChangeKind.DIR_MOVED})
_REMOVALS = frozenset({ChangeKind.FILE_DELETED, ChangeKind.DIR_DELETED})


@dataclass(frozen=True)
class ChangeEvent:
    kind: ChangeKind
    path: PathName
    timestamp: int
    new_path: PathName | None = None  # moves only

    @property
    def is_move(self) -> bool:
        return self.kind in _MOVES

    @property
    def is_removal(self) -> bool:
        return self.kind in _REMOVALS


@dataclass(frozen=True)
class ChangeFilter:
    prefix: PathName
    name_glob: str  # empty string matches everything
    kinds: frozenset[ChangeKind]  # empty set matches all kinds

    def matches(self, event: ChangeEvent) -> bool:
        if self.kinds and event.kind not in self.kinds:
            return False
        if not is_prefix(self.prefix, event.path):
            return False
        if self.name_glob:
            name = event.path[-1] if event.path else ""
            if not name_matches(name, self.name_glob):
                return False
        return True
