"""The 13-bit permission mask and its per-membership projection.

Bit layout (an octal-like encoding, most significant first):

    bit 12        sticky          0x1000
    bits 11..9    owner    r/w/x  0x0800 / 0x0400 / 0x0200
    bits  8..6    usergroup r/w/x 0x0100 / 0x0080 / 0x0040
    bits  5..3    hostgroup r/w/x 0x0020 / 0x0010 / 0x0008
    bits  2..0    other    r/w/x  0x0004 / 0x0002 / 0x0001

Execute bits are stored for files but never consulted; there is no
concept of an executable file.  The sticky bit applies to directories
and restricts deletion of entries to owners.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MikfsError, StatusCode
from .ownership import Membership

STICKY = 0x1000
MASK_ALL = 0x1FFF

# Shift of the read bit of each class; write = shift-1, execute = shift-2.
_CLASS_SHIFT = {
    Membership.OWNER: 11,
    Membership.USER_GROUP: 8,
    Membership.HOST_GROUP: 5,
    Membership.OTHER: 2,
}


@dataclass(frozen=True)
class Rights:
    read: bool
    write: bool
    execute: bool


def validate_mask(mask: int) -> None:
    if not 0 <= mask <= MASK_ALL:
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT, f"permissions 0x{mask:X} outside 13-bit range"
        )


def effective_rights(mask: int, membership: Membership) -> Rights:
    """Project the r/w/x triple for one membership class out of the mask."""
    shift = _CLASS_SHIFT[membership]
    return Rights(
        read=bool(mask >> shift & 1),
        write=bool(mask >> (shift - 1) & 1),
        execute=bool(mask >> (shift - 2) & 1),
    )


def is_sticky(mask: int) -> bool:
    return bool(mask & STICKY)


def parse_permission_digits(text: str) -> int:
    """Parse the shell's octal permission notation into a mask.

    Up to five octal digits, left-aligned: sticky (0 or 1), owner,
    usergroup, hostgroup, other.  Omitted trailing digits are zero, so
    ``1754`` means sticky + owner rwx + usergroup r-x + hostgroup r--
    and nothing for other.
    """
    if not 1 <= len(text) <= 5 or not all(c in "01234567" for c in text):
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT, f"expected 1-5 octal digits, got {text!r}"
        )
    if text[0] not in "01":
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT,
            f"first digit is the sticky flag and must be 0 or 1, got {text[0]!r}",
        )
    padded = text.ljust(5, "0")
    mask = int(padded[0]) << 12
    for i, shift in enumerate((9, 6, 3, 0)):
        mask |= int(padded[i + 1], 8) << shift
    return mask


def permission_digits(mask: int) -> str:
    """Inverse of :func:`parse_permission_digits`; always five digits."""
    validate_mask(mask)
    sticky = mask >> 12 & 1
    return str(sticky) + "".join(str(mask >> s & 0o7) for s in (9, 6, 3, 0))


def describe_mask(mask: int) -> str:
    """Human-readable rendering, e.g. ``sticky owner=rwx usergroup=r-x ...``."""
    parts = ["sticky"] if is_sticky(mask) else []
    for membership in (
        Membership.OWNER,
        Membership.USER_GROUP,
        Membership.HOST_GROUP,
        Membership.OTHER,
    ):
        r = effective_rights(mask, membership)
        triple = ("r" if r.read else "-") + ("w" if r.write else "-") + ("x" if r.execute else "-")
        parts.append(f"{membership.value}={triple}")
    return " ".join(parts)


__all__ = [
    "STICKY",
    "MASK_ALL",
    "Rights",
    "validate_mask",
    "effective_rights",
    "is_sticky",
    "parse_permission_digits",
    "permission_digits",
    "describe_mask",
]
