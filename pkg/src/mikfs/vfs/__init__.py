"""Pure in-memory virtual filesystem: tree, paths, ownership, permissions, zips."""

from .nodes import (
    MAX_FILE_SIZE,
    ROOT_PERMISSIONS,
    Action,
    Denial,
    DirEntry,
    DirectoryNode,
    FileNode,
    Filesystem,
    MutabilityMode,
    Node,
    NodeAttributes,
    clone_subtree,
    trees_equal,
    walk,
)
from .ownership import (
    MAX_GROUP_KEY_LENGTH,
    Membership,
    Ownership,
    WILDCARD,
    determine_membership,
    group_matches,
    validate_group_key,
)
from .paths import (
    MAX_NAME_LENGTH,
    MAX_PATH_LENGTH,
    PathName,
    ROOT,
    is_prefix,
    name_violation,
    parse_path,
    render_path,
    validate_name,
)
from .permissions import (
    MASK_ALL,
    STICKY,
    Rights,
    describe_mask,
    effective_rights,
    is_sticky,
    parse_permission_digits,
    permission_digits,
    validate_mask,
)
from .zips import unzip_into, zip_directory

__all__ = [
    "MAX_FILE_SIZE",
    "ROOT_PERMISSIONS",
    "Action",
    "Denial",
    "DirEntry",
    "DirectoryNode",
    "FileNode",
    "Filesystem",
    "MutabilityMode",
    "Node",
    "NodeAttributes",
    "clone_subtree",
    "trees_equal",
    "walk",
    "MAX_GROUP_KEY_LENGTH",
    "Membership",
    "Ownership",
    "WILDCARD",
    "determine_membership",
    "group_matches",
    "validate_group_key",
    "MAX_NAME_LENGTH",
    "MAX_PATH_LENGTH",
    "PathName",
    "ROOT",
    "is_prefix",
    "name_violation",
    "parse_path",
    "render_path",
    "validate_name",
    "MASK_ALL",
    "STICKY",
    "Rights",
    "describe_mask",
    "effective_rights",
    "is_sticky",
    "parse_permission_digits",
    "permission_digits",
    "validate_mask",
    "unzip_into",
    "zip_directory",
]
