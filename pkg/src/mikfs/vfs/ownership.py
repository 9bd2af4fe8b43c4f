"""Ownership handles and the group-membership algebra.

A node's ownership is a pair of byte-array group keys: one allocated by
the server host, one by the client that originated the content.  A
zero-length key is a "matches all" wildcard.  Comparing a caller's
handle against a node's handle yields one of four membership classes,
which select the permission bits that apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import MikfsError, StatusCode

MAX_GROUP_KEY_LENGTH = 64  # bytes; zero length means wildcard


class Membership(Enum):
    OWNER = "owner"
    USER_GROUP = "usergroup"
    HOST_GROUP = "hostgroup"
    OTHER = "other"


def validate_group_key(key: bytes) -> None:
    if len(key) > MAX_GROUP_KEY_LENGTH:
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT,
            f"group key is {len(key)} bytes (maximum {MAX_GROUP_KEY_LENGTH})",
        )


@dataclass(frozen=True)
class Ownership:
    """Split handle: server-host group key + client-user group key."""

    host_group: bytes = b""
    user_group: bytes = b""

    def __post_init__(self) -> None:
        validate_group_key(self.host_group)
        validate_group_key(self.user_group)


WILDCARD = Ownership(b"", b"")


def group_matches(a: bytes, b: bytes) -> bool:
    """True if either key is the wildcard or both are byte-identical.

    Equal bytes implies equal (non-zero) length, so ``a == b`` covers
    the exact-match half of the rule.
    """
    return not a or not b or a == b


def determine_membership(caller: Ownership, node: Ownership) -> Membership:
    host = group_matches(caller.host_group, node.host_group)
    user = group_matches(caller.user_group, node.user_group)
    if host and user:
        return Membership.OWNER
    if user:
        return Membership.USER_GROUP
    if host:
        return Membership.HOST_GROUP
    return Membership.OTHER


__all__ = [
    "MAX_GROUP_KEY_LENGTH",
    "Membership",
    "Ownership",
    "WILDCARD",
    "validate_group_key",
    "group_matches",
    "determine_membership",
]
