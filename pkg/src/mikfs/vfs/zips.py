"""Zip and unzip of directory subtrees, for replication between servers.

Archives are standard PKZIP with deflate compression.  Entry names are
'/'-joined paths relative to the zipped directory; directories are
trailing-'/' entries.  Timestamps are truncated to the ZIP format's
2-second resolution; archives replicate content, not metadata, so
ownership and permissions are deliberately not carried.
"""

from __future__ import annotations

import io
import struct
import time
import zipfile

from ..errors import MikfsError, StatusCode
from . import paths
from .nodes import (
    MAX_FILE_SIZE,
    DirectoryNode,
    FileNode,
    Filesystem,
    Node,
)
from .ownership import Ownership, determine_membership
from .paths import PathName
from .permissions import effective_rights

_DOS_EPOCH_SECONDS = 315532800  # 1980-01-01; ZIP cannot represent earlier times


def _dos_date_time(mtime_ns: int) -> tuple[int, int, int, int, int, int]:
    seconds = max(mtime_ns // 1_000_000_000, _DOS_EPOCH_SECONDS)
    return time.gmtime(seconds)[:6]


def _rights(caller: Ownership, node: Node):
    return effective_rights(
        node.attrs.permissions, determine_membership(caller, node.attrs.owner)
    )


def zip_directory(fs: Filesystem, path: PathName, caller: Ownership) -> tuple[bytes, int]:
    """Archive the subtree at *path*, which the caller can already list.

    Entries the caller may not read (files without read permission, or
    subtrees behind directories that cannot be listed and entered) are
    omitted; the count of omissions is returned alongside the bytes.
    """
    root = fs.lookup_directory(path)
    buffer = io.BytesIO()
    omitted = 0

    def add_children(zf: zipfile.ZipFile, node: DirectoryNode, rel: str) -> None:
        nonlocal omitted
        can_enter = _rights(caller, node).execute
        for name, child in sorted(node.children.items()):
            child_rel = f"{rel}/{name}" if rel else name
            if isinstance(child, FileNode):
                if can_enter and _rights(caller, child).read:
                    info = zipfile.ZipInfo(
                        child_rel, date_time=_dos_date_time(child.attrs.last_modified_time)
                    )
                    zf.writestr(info, child.content, compress_type=zipfile.ZIP_DEFLATED)
                else:
                    omitted += 1
            else:
                assert isinstance(child, DirectoryNode)
                info = zipfile.ZipInfo(
                    child_rel + "/", date_time=_dos_date_time(child.attrs.last_modified_time)
                )
                zf.writestr(info, b"")
                if can_enter and _rights(caller, child).read:
                    add_children(zf, child, child_rel)
                else:
                    omitted += 1

    with zipfile.ZipFile(buffer, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        add_children(zf, root, "")
    return buffer.getvalue(), omitted


def unzip_into(
    fs: Filesystem,
    path: PathName,
    data: bytes,
    owner: Ownership,
    permissions: int,
) -> int:
    """Recreate an archived tree at the (absent) directory *path*.

    Every created node gets the supplied owner and permissions and a
    fresh timestamp.  Entry names are validated against the filesystem's
    naming rules before anything is created; a single bad entry means
    nothing is created at all.  Returns the number of nodes created,
    counting the target directory itself.
    """
    if not path:
        raise MikfsError(StatusCode.ALREADY_EXISTS, "root already exists")
    fs.lookup_directory(path[:-1])  # parent must exist before we parse anything
    if fs.exists(path):
        raise MikfsError(StatusCode.ALREADY_EXISTS, f"{paths.render_path(path)} exists")

    directories, files = _parse_archive(data, path)

    fs.create_directory(path, owner, permissions)
    for rel in sorted(directories, key=len):
        fs.create_directory(tuple(path) + rel, owner, permissions)
    for rel in sorted(files):
        fs.create_file(tuple(path) + rel, files[rel], owner, permissions)
    return 1 + len(directories) + len(files)


def _parse_archive(
    data: bytes, target: PathName
) -> tuple[set[PathName], dict[PathName, bytes]]:
    _reject_nul_entry_names(data)
    try:
        zf = zipfile.ZipFile(io.BytesIO(data))
    except (zipfile.BadZipFile, ValueError) as exc:
        raise MikfsError(StatusCode.INVALID_ARGUMENT, f"malformed archive: {exc}") from None

    directories: set[PathName] = set()
    files: dict[PathName, bytes] = {}
    with zf:
        for info in zf.infolist():
            name = info.filename
            is_dir = name.endswith("/")
            rel = _entry_segments(name[:-1] if is_dir else name)
            if paths.rendered_length(tuple(target) + rel) > paths.MAX_PATH_LENGTH:
                raise MikfsError(
                    StatusCode.INVALID_ARGUMENT,
                    f"archive entry {name!r} would exceed the maximum path length",
                )
            if is_dir:
                directories.add(rel)
            else:
                if rel in files:
                    raise MikfsError(
                        StatusCode.INVALID_ARGUMENT, f"duplicate archive entry {name!r}"
                    )
                if info.file_size > MAX_FILE_SIZE:
                    raise MikfsError(
                        StatusCode.SIZE_LIMIT_EXCEEDED,
                        f"archive entry {name!r} exceeds the file size limit",
                    )
                try:
                    files[rel] = zf.read(info)
                except Exception as exc:  # corrupt member data
                    raise MikfsError(
                        StatusCode.INVALID_ARGUMENT, f"malformed archive entry {name!r}: {exc}"
                    ) from None
            # implicit parents for entries written without directory records
            for i in range(1, len(rel)):
                directories.add(rel[:i])

    overlap = directories & files.keys()
    if overlap:
        sample = paths.render_path(next(iter(overlap)))
        raise MikfsError(
            StatusCode.INVALID_ARGUMENT, f"archive names {sample!r} as both file and directory"
        )
    return directories, files


def _reject_nul_entry_names(data: bytes) -> None:
    """Scan raw central-directory names for NUL bytes.

    The stdlib reader silently truncates names at the first NUL, so a
    crafted entry like ``a\\0b`` would otherwise be created under the
    wrong name instead of being rejected.  Structural oddities are left
    for the zip parser itself to complain about.
    """
    for name in _raw_central_directory_names(data) or []:
        if b"\x00" in name:
            raise MikfsError(
                StatusCode.INVALID_ARGUMENT,
                "archive entry name contains forbidden character NUL",
            )


def _raw_central_directory_names(data: bytes) -> list[bytes] | None:
    tail = data[-(65536 + 22):]
    pos = tail.rfind(b"PK\x05\x06")
    if pos < 0 or len(tail) - pos < 22:
        return None
    eocd = tail[pos : pos + 22]
    total_entries, cd_offset = struct.unpack("<H4xI", eocd[10:20])
    if total_entries == 0xFFFF or cd_offset == 0xFFFFFFFF:
        loc = data.rfind(b"PK\x06\x07")
        if loc < 0 or loc + 20 > len(data):
            return None
        (eocd64_offset,) = struct.unpack("<Q", data[loc + 8 : loc + 16])
        if data[eocd64_offset : eocd64_offset + 4] != b"PK\x06\x06":
            return None
        total_entries, _cd_size, cd_offset = struct.unpack(
            "<QQQ", data[eocd64_offset + 32 : eocd64_offset + 56]
        )
    names: list[bytes] = []
    p = cd_offset
    for _ in range(total_entries):
        if data[p : p + 4] != b"PK\x01\x02":
            return None
        name_len, extra_len, comment_len = struct.unpack("<HHH", data[p + 28 : p + 34])
        names.append(data[p + 46 : p + 46 + name_len])
        p += 46 + name_len + extra_len + comment_len
    return names


def _entry_segments(name: str) -> PathName:
    if not name:
        raise MikfsError(StatusCode.INVALID_ARGUMENT, "archive contains an empty entry name")
    segments = name.split("/")
    for segment in segments:
        if segment == "" or segment in (".", ".."):
            raise MikfsError(
                StatusCode.INVALID_ARGUMENT, f"archive entry {name!r} has an invalid segment"
            )
        violation = paths.name_violation(segment)
        if violation is not None:
            raise MikfsError(
                StatusCode.INVALID_ARGUMENT, f"archive entry {name!r}: {violation}"
            )
    return tuple(segments)
