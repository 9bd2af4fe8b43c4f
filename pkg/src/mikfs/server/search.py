"""Filesystem search: a permission-aware full scan at desk scale.

A query combines a path prefix, a name glob, a raw byte substring over
file content, and attribute predicates; a result must satisfy every
criterion present.  Results never include nodes the caller could not
read directly (files need read permission, directories list permission,
and the whole ancestor chain must be traversable).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MikfsError, StatusCode
from ..globs import name_matches
from ..vfs import (
    DirectoryNode,
    FileNode,
    Filesystem,
    Node,
    Ownership,
    PathName,
    determine_membership,
    effective_rights,
    parse_path,
    render_path,
)

DEFAULT_MAX_RESULTS = 1000


@dataclass(frozen=True)
class SearchQuery:
    prefix: PathName
    name_glob: str
    content: bytes
    attribute_predicates: tuple[tuple[str, str | None], ...]  # (name, value-or-None)
    max_results: int


def parse_query(request) -> SearchQuery:
    """Build a query from the wire request; at least one criterion required."""
    predicates = tuple(
        (p.name.lower(), p.value if p.check_value else None)
        for p in request.attribute_predicates
    )
    has_criterion = bool(
        request.path_prefix or request.name_glob or request.content_substring or predicates
    )
    if not has_criterion:
        raise MikfsError(StatusCode.INVALID_ARGUMENT, "search query needs at least one criterion")
    return SearchQuery(
        prefix=parse_path(request.path_prefix),
        name_glob=request.name_glob,
        content=bytes(request.content_substring),
        attribute_predicates=predicates,
        max_results=request.max_results or DEFAULT_MAX_RESULTS,
    )


def _rights(caller: Ownership, node: Node):
    return effective_rights(
        node.attrs.permissions, determine_membership(caller, node.attrs.owner)
    )


def matches_criteria(path: PathName, node: Node, query: SearchQuery) -> bool:
    """Criteria only; the permission filter is applied separately."""
    if query.name_glob:
        name = path[-1] if path else ""
        if not name_matches(name, query.name_glob):
            return False
    if query.content:
        if not isinstance(node, FileNode) or query.content not in node.content:
            return False
    attrs = node.attrs.custom_attributes
    for name, value in query.attribute_predicates:
        if name not in attrs:
            return False
        if value is not None and attrs[name] != value:
            return False
    return True


def readable(caller: Ownership, node: Node) -> bool:
    """Read for files, list for directories: what 'surfacing' requires."""
    return _rights(caller, node).read


def is_reachable(fs: Filesystem, caller: Ownership, path: PathName) -> tuple[Node, bool]:
    """Node at *path* plus whether every ancestor grants traverse."""
    node: Node = fs.root
    for segment in path:
        assert isinstance(node, DirectoryNode)
        if not _rights(caller, node).execute:
            return node, False
        node = node.children[segment]
    return node, True


def run_search(fs: Filesystem, caller: Ownership, query: SearchQuery) -> list[tuple[PathName, Node]]:
    """Full scan under the caller's read lock; lexicographic by path."""
    try:
        start = fs.lookup(query.prefix)
    except MikfsError:
        return []
    node: Node = fs.root
    for segment in query.prefix:
        if not _rights(caller, node).execute:
            return []
        node = node.children[segment]  # type: ignore[union-attr]

    matches: list[tuple[PathName, Node]] = []

    def visit(path: PathName, node: Node) -> None:
        if readable(caller, node) and matches_criteria(path, node, query):
            matches.append((path, node))
        if isinstance(node, DirectoryNode):
            rights = _rights(caller, node)
            if rights.read and rights.execute:
                for name in sorted(node.children):
                    visit(tuple(path) + (name,), node.children[name])

    visit(query.prefix, start)
    matches.sort(key=lambda item: render_path(item[0]))
    return matches[: query.max_results]
