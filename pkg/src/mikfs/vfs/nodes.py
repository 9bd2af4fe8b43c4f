"""The in-memory virtual filesystem tree and its authorization rules.

Pure data structure: no locking, no I/O, no networking.  The embedding
layer serializes mutations; every exported mutation here validates its
inputs completely before touching the tree, so each call is
all-or-nothing with respect to observers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from ..errors import MikfsError, StatusCode
from . import paths
from .ownership import Membership, Ownership, determine_membership
from .permissions import effective_rights, is_sticky, validate_mask
from .paths import PathName

MAX_FILE_SIZE = 2**31 - 1
MAX_ATTRIBUTE_NAME_LENGTH = 255
MAX_ATTRIBUTE_VALUE_LENGTH = 65535

# Root: owned by the server host with a wildcard user part, world
# readable/traversable, not writable by Other, never deletable or movable.
ROOT_PERMISSIONS = 0x0FFD


class MutabilityMode(Enum):
    """Instance-wide write policy, fixed at filesystem start."""

    READ_WRITE = "rw"
    READ_ONLY = "ro"
    APPEND_ONLY = "ao"


@dataclass
class NodeAttributes:
    size: int
    last_modified_time: int  # nanoseconds since the Unix epoch, UTC
    permissions: int
    owner: Ownership
    custom_attributes: dict[str, str] = field(default_factory=dict)


class Node:
    __slots__ = ("attrs",)

    def __init__(self, attrs: NodeAttributes):
        self.attrs = attrs

    @property
    def is_directory(self) -> bool:
        return isinstance(self, DirectoryNode)


class FileNode(Node):
    __slots__ = ("content",)

    def __init__(self, attrs: NodeAttributes, content: bytes):
        super().__init__(attrs)
        self.content = content


class DirectoryNode(Node):
    __slots__ = ("children",)

    def __init__(self, attrs: NodeAttributes, children: dict[str, Node] | None = None):
        super().__init__(attrs)
        self.children: dict[str, Node] = children if children is not None else {}


@dataclass(frozen=True)
class DirEntry:
    """One listing row.  Ownership keys are structurally absent: listings
    never reveal them."""

    name: str
    is_directory: bool
    size: int
    last_modified_time: int
    permissions: int
    custom_attributes: tuple[tuple[str, str], ...]


def _entry_for(name: str, node: Node) -> DirEntry:
    return DirEntry(
        name=name,
        is_directory=node.is_directory,
        size=node.attrs.size,
        last_modified_time=node.attrs.last_modified_time,
        permissions=node.attrs.permissions,
        custom_attributes=tuple(sorted(node.attrs.custom_attributes.items())),
    )


# ---------------------------------------------------------------------------
# Authorization
# ---------------------------------------------------------------------------


class Action(Enum):
    READ_FILE = "read-file"
    WRITE_FILE = "write-file"
    CREATE_CHILD = "create-child"
    DELETE_CHILD = "delete-child"
    LIST = "list"
    TRAVERSE = "traverse"
    SET_PERMISSIONS = "set-permissions"
    SET_ATTRIBUTES = "set-attributes"


@dataclass(frozen=True)
class Denial:
    """Names the failed check and the depth (in segments) where it failed."""

    check: str
    depth: int

    def __str__(self) -> str:
        return f"denied: {self.check} check failed at depth {self.depth}"


def _rights(caller: Ownership, node: Node):
    return effective_rights(
        node.attrs.permissions, determine_membership(caller, node.attrs.owner)
    )


def _is_owner(caller: Ownership, node: Node) -> bool:
    return determine_membership(caller, node.attrs.owner) is Membership.OWNER


# ---------------------------------------------------------------------------
# The filesystem
# ---------------------------------------------------------------------------


class Filesystem:
    """A virtual tree rooted at '/'.

    Mutations stamp ``last_modified_time`` from the supplied clock
    (nanosecond Unix time).  The tree is unconstrained by any host
    filesystem's naming rules; only the documented path syntax applies.
    """

    def __init__(self, host_group: bytes, *, clock: Callable[[], int] = time.time_ns):
        self._clock = clock
        self.root: DirectoryNode = DirectoryNode(
            NodeAttributes(
                size=0,
                last_modified_time=clock(),
                permissions=ROOT_PERMISSIONS,
                owner=Ownership(host_group=host_group, user_group=b""),
            )
        )

    @classmethod
    def from_root(
        cls, root: DirectoryNode, *, clock: Callable[[], int] = time.time_ns
    ) -> "Filesystem":
        fs = cls.__new__(cls)
        fs._clock = clock
        fs.root = root
        return fs

    # -- lookup ------------------------------------------------------------

    def lookup(self, path: PathName) -> Node:
        node: Node = self.root
        for depth, segment in enumerate(path):
            if not isinstance(node, DirectoryNode):
                raise MikfsError(
                    StatusCode.NOT_A_DIRECTORY,
                    f"{paths.render_path(path[:depth])} is not a directory",
                )
            child = node.children.get(segment)
            if child is None:
                raise MikfsError(
                    StatusCode.NOT_FOUND, f"{paths.render_path(path[: depth + 1])} not found"
                )
            node = child
        return node

    def lookup_directory(self, path: PathName) -> DirectoryNode:
        node = self.lookup(path)
        if not isinstance(node, DirectoryNode):
            raise MikfsError(
                StatusCode.NOT_A_DIRECTORY, f"{paths.render_path(path)} is not a directory"
            )
        return node

    def lookup_file(self, path: PathName) -> FileNode:
        node = self.lookup(path)
        if not isinstance(node, FileNode):
            raise MikfsError(StatusCode.NOT_A_FILE, f"{paths.render_path(path)} is not a file")
        return node

    def exists(self, path: PathName) -> bool:
        try:
            self.lookup(path)
            return True
        except MikfsError:
            return False

    def _parent_for_new(self, path: PathName) -> tuple[DirectoryNode, str]:
        """Parent directory and final name for a node about to be created."""
        if not path:
            raise MikfsError(StatusCode.ALREADY_EXISTS, "root already exists")
        parent = self.lookup_directory(path[:-1])
        name = path[-1]
        if name in parent.children:
            raise MikfsError(StatusCode.ALREADY_EXISTS, f"{paths.render_path(path)} exists")
        return parent, name

    # -- authorization -----------------------------------------------------

    def authorize(
        self,
        caller: Ownership,
        path: PathName,
        action: Action,
        child_name: str | None = None,
    ) -> Denial | None:
        """Decide whether *caller* may perform *action* at *path*.

        Returns None to allow, a :class:`Denial` for a permission
        failure; raises for structural problems (missing node, kind
        mismatch) discovered along the way.  Pure function of the tree
        snapshot.  Traversal is checked before existence at each level,
        so a caller without execute on a directory cannot probe for
        names beneath it.
        """
        node: Node = self.root
        for depth, segment in enumerate(path):
            if not isinstance(node, DirectoryNode):
                raise MikfsError(
                    StatusCode.NOT_A_DIRECTORY,
                    f"{paths.render_path(path[:depth])} is not a directory",
                )
            if not _rights(caller, node).execute:
                return Denial("traverse", depth)
            child = node.children.get(segment)
            if child is None:
                raise MikfsError(
                    StatusCode.NOT_FOUND, f"{paths.render_path(path[: depth + 1])} not found"
                )
            node = child
        depth = len(path)

        if action is Action.TRAVERSE:
            return None

        if action is Action.READ_FILE:
            if not isinstance(node, FileNode):
                raise MikfsError(StatusCode.NOT_A_FILE, f"{paths.render_path(path)} is not a file")
            return None if _rights(caller, node).read else Denial("read", depth)

        if action is Action.WRITE_FILE:
            if not isinstance(node, FileNode):
                raise MikfsError(StatusCode.NOT_A_FILE, f"{paths.render_path(path)} is not a file")
            return None if _rights(caller, node).write else Denial("write", depth)

        if action is Action.LIST:
            if not isinstance(node, DirectoryNode):
                raise MikfsError(
                    StatusCode.NOT_A_DIRECTORY, f"{paths.render_path(path)} is not a directory"
                )
            return None if _rights(caller, node).read else Denial("list", depth)

        if action is Action.CREATE_CHILD:
            if not isinstance(node, DirectoryNode):
                raise MikfsError(
                    StatusCode.NOT_A_DIRECTORY, f"{paths.render_path(path)} is not a directory"
                )
            rights = _rights(caller, node)
            return None if rights.write and rights.execute else Denial("create", depth)

        if action is Action.DELETE_CHILD:
            if not isinstance(node, DirectoryNode):
                raise MikfsError(
                    StatusCode.NOT_A_DIRECTORY, f"{paths.render_path(path)} is not a directory"
                )
            if child_name is None:
                raise ValueError("delete-child requires a child name")
            rights = _rights(caller, node)
            if not (rights.write and rights.execute):
                return Denial("delete", depth)
            child = node.children.get(child_name)
            if child is None:
                raise MikfsError(
                    StatusCode.NOT_FOUND,
                    f"{paths.render_path(tuple(path) + (child_name,))} not found",
                )
            if is_sticky(node.attrs.permissions):
                if not (_is_owner(caller, child) or _is_owner(caller, node)):
                    return Denial("sticky", depth)
            return None

        if action in (Action.SET_PERMISSIONS, Action.SET_ATTRIBUTES):
            return None if _is_owner(caller, node) else Denial("owner", depth)

        raise ValueError(f"unhandled action {action}")

    # -- mutations ---------------------------------------------------------

    def create_file(
        self, path: PathName, content: bytes, owner: Ownership, permissions: int
    ) -> FileNode:
        validate_mask(permissions)
        check_file_size(len(content))
        parent, name = self._parent_for_new(path)
        node = FileNode(
            NodeAttributes(
                size=len(content),
                last_modified_time=self._clock(),
                permissions=permissions,
                owner=owner,
            ),
            content,
        )
        parent.children[name] = node
        return node

    def create_directory(
        self, path: PathName, owner: Ownership, permissions: int
    ) -> DirectoryNode:
        validate_mask(permissions)
        parent, name = self._parent_for_new(path)
        node = DirectoryNode(
            NodeAttributes(
                size=0,
                last_modified_time=self._clock(),
                permissions=permissions,
                owner=owner,
            )
        )
        parent.children[name] = node
        return node

    def overwrite_file(self, path: PathName, content: bytes) -> FileNode:
        """Replace content; owner, permissions and custom attributes survive."""
        check_file_size(len(content))
        node = self.lookup_file(path)
        node.content = content
        node.attrs.size = len(content)
        node.attrs.last_modified_time = self._clock()
        return node

    def delete_file(self, path: PathName) -> None:
        if not path:
            raise MikfsError(StatusCode.NOT_A_FILE, "/ is not a file")
        parent = self.lookup_directory(path[:-1])
        self.lookup_file(path)
        del parent.children[path[-1]]

    def delete_directory(self, path: PathName, recursive: bool = False) -> None:
        if not path:
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "the root directory cannot be deleted")
        parent = self.lookup_directory(path[:-1])
        node = self.lookup_directory(path)
        if node.children and not recursive:
            raise MikfsError(
                StatusCode.DIRECTORY_NOT_EMPTY, f"{paths.render_path(path)} is not empty"
            )
        del parent.children[path[-1]]

    def move(self, src: PathName, dst: PathName, *, want_directory: bool) -> None:
        """Relocate a node; every attribute, including timestamps, survives."""
        if not src:
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "the root directory cannot be moved")
        node = self._lookup_kind(src, want_directory)
        dst_parent, dst_name = self._parent_for_new(dst)
        if paths.is_prefix(src, dst):
            raise MikfsError(
                StatusCode.CYCLE_REJECTED,
                f"cannot move {paths.render_path(src)} into its own subtree",
            )
        _check_path_bound(dst, node)
        src_parent = self.lookup_directory(src[:-1])
        del src_parent.children[src[-1]]
        dst_parent.children[dst_name] = node

    def copy(
        self,
        src: PathName,
        dst: PathName,
        owner: Ownership,
        permissions: int,
        *,
        want_directory: bool,
    ) -> Node:
        """Duplicate a subtree.  Copies are new content: every copied node
        gets a fresh timestamp and the supplied owner and permissions."""
        validate_mask(permissions)
        node = self._lookup_kind(src, want_directory)
        dst_parent, dst_name = self._parent_for_new(dst)
        _check_path_bound(dst, node)
        clone = clone_subtree(node, owner, permissions, self._clock())
        dst_parent.children[dst_name] = clone
        return clone

    def _lookup_kind(self, path: PathName, want_directory: bool) -> Node:
        return self.lookup_directory(path) if want_directory else self.lookup_file(path)

    # -- reads ---------------------------------------------------------------

    def list_directory(self, path: PathName) -> list[DirEntry]:
        node = self.lookup_directory(path)
        return [_entry_for(name, child) for name, child in sorted(node.children.items())]

    def read_file(self, path: PathName) -> bytes:
        return self.lookup_file(path).content

    # -- permissions & attributes ---------------------------------------------

    def set_permissions(self, path: PathName, permissions: int) -> None:
        validate_mask(permissions)
        self.lookup(path).attrs.permissions = permissions

    def get_permissions(self, path: PathName) -> int:
        return self.lookup(path).attrs.permissions

    def update_attributes(
        self, path: PathName, updates: Sequence[tuple[str, str | None]]
    ) -> dict[str, str]:
        """Apply upserts (value given) and removals (value None) atomically.

        Names are canonicalized to lower case before storage and
        comparison; the returned set is the canonical one.
        """
        node = self.lookup(path)
        canonical: list[tuple[str, str | None]] = []
        for name, value in updates:
            canonical.append((_canonical_attribute_name(name), _checked_value(value)))
        for name, value in canonical:
            if value is None:
                node.attrs.custom_attributes.pop(name, None)
            else:
                node.attrs.custom_attributes[name] = value
        return dict(node.attrs.custom_attributes)

    def get_attributes(self, path: PathName) -> dict[str, str]:
        return dict(self.lookup(path).attrs.custom_attributes)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def check_file_size(size: int) -> None:
    if size > MAX_FILE_SIZE:
        raise MikfsError(
            StatusCode.SIZE_LIMIT_EXCEEDED, f"file of {size} bytes exceeds {MAX_FILE_SIZE}"
        )


def _check_path_bound(dst: PathName, node: Node) -> None:
    """A subtree placed at *dst* must keep every full path within bounds."""
    deepest = paths.rendered_length(dst) + subtree_extra_length(node)
    if deepest > paths.MAX_PATH_LENGTH:
        raise MikfsError(
            StatusCode.INVALID_PATH,
            f"operation would create a path of {deepest} characters "
            f"(maximum {paths.MAX_PATH_LENGTH})",
        )


def subtree_extra_length(node: Node) -> int:
    """Characters the deepest descendant adds to the subtree root's path."""
    if not isinstance(node, DirectoryNode) or not node.children:
        return 0
    return max(1 + len(name) + subtree_extra_length(child) for name, child in node.children.items())


def clone_subtree(node: Node, owner: Ownership, permissions: int, now: int) -> Node:
    attrs = NodeAttributes(
        size=node.attrs.size,
        last_modified_time=now,
        permissions=permissions,
        owner=owner,
        custom_attributes=dict(node.attrs.custom_attributes),
    )
    if isinstance(node, FileNode):
        return FileNode(attrs, node.content)
    assert isinstance(node, DirectoryNode)
    children = {
        name: clone_subtree(child, owner, permissions, now)
        for name, child in node.children.items()
    }
    return DirectoryNode(attrs, children)


def _canonical_attribute_name(name: str) -> str:
    canonical = name.lower()
    if not 1 <= len(canonical) <= MAX_ATTRIBUTE_NAME_LENGTH:
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT,
            f"attribute name length {len(canonical)} outside 1..{MAX_ATTRIBUTE_NAME_LENGTH}",
        )
    if any(0xD800 <= ord(ch) <= 0xDFFF for ch in canonical):
        raise MikfsError(StatusCode.INVALID_ARGUMENT, "attribute name contains a surrogate")
    return canonical


def _checked_value(value: str | None) -> str | None:
    if value is None:
        return None
    if len(value) > MAX_ATTRIBUTE_VALUE_LENGTH:
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT,
            f"attribute value length {len(value)} exceeds {MAX_ATTRIBUTE_VALUE_LENGTH}",
        )
    if any(0xD800 <= ord(ch) <= 0xDFFF for ch in value):
        raise MikfsError(StatusCode.INVALID_ARGUMENT, "attribute value contains a surrogate")
    return value


def walk(node: Node, prefix: PathName = ()) -> Iterable[tuple[PathName, Node]]:
    """Yield (path, node) for *node* and every descendant, children sorted."""
    yield prefix, node
    if isinstance(node, DirectoryNode):
        for name in sorted(node.children):
            yield from walk(node.children[name], tuple(prefix) + (name,))


def trees_equal(a: Node, b: Node) -> bool:
    """Deep structural equality including ownership keys and content."""
    if a.is_directory != b.is_directory:
        return False
    if (
        a.attrs.size != b.attrs.size
        or a.attrs.last_modified_time != b.attrs.last_modified_time
        or a.attrs.permissions != b.attrs.permissions
        or a.attrs.owner != b.attrs.owner
        or a.attrs.custom_attributes != b.attrs.custom_attributes
    ):
        return False
    if isinstance(a, FileNode):
        return a.content == b.content  # type: ignore[union-attr]
    assert isinstance(a, DirectoryNode) and isinstance(b, DirectoryNode)
    if a.children.keys() != b.children.keys():
        return False
    return all(trees_equal(a.children[k], b.children[k]) for k in a.children)
