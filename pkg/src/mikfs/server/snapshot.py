"""Binary snapshot persistence for the whole tree, owner keys included.

Format: the magic ``MIKFS001`` followed by a length-prefixed recursive
node encoding.  Writes go to a temp file in the same directory and are
renamed into place, so a failed save never corrupts the previous
snapshot.  Loads validate everything and rebuild a byte-identical tree;
a corrupt file raises :class:`SnapshotError` with a clear diagnostic.
"""

from __future__ import annotations

import io
import os
import struct
import tempfile

from ..vfs import DirectoryNode, FileNode, Filesystem, Node, NodeAttributes, Ownership
from ..vfs.nodes import MAX_FILE_SIZE

MAGIC = b"MIKFS001"

_FILE_KIND = 0
_DIR_KIND = 1


class SnapshotError(Exception):
    """The snapshot file cannot be read back."""


def save_snapshot(fs: Filesystem, path: str) -> None:
    data = serialize_tree(fs.root)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, temp_path = tempfile.mkstemp(prefix=".mikfs-snapshot-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(temp_path, path)
    except BaseException:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise


def load_snapshot(path: str, *, clock=None) -> Filesystem:
    with open(path, "rb") as fh:
        data = fh.read()
    root = deserialize_tree(data)
    if clock is None:
        return Filesystem.from_root(root)
    return Filesystem.from_root(root, clock=clock)


def serialize_tree(root: DirectoryNode) -> bytes:
    out = io.BytesIO()
    out.write(MAGIC)
    _write_node(out, root)
    return out.getvalue()


def deserialize_tree(data: bytes) -> DirectoryNode:
    reader = _Reader(data)
    magic = reader.take(len(MAGIC))
    if magic != MAGIC:
        raise SnapshotError(f"bad magic {magic!r}; not a mikfs snapshot")
    root = _read_node(reader)
    if not isinstance(root, DirectoryNode):
        raise SnapshotError("snapshot root is not a directory")
    if reader.remaining():
        raise SnapshotError(f"{reader.remaining()} trailing bytes after the tree")
    return root


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _write_node(out: io.BytesIO, node: Node) -> None:
    attrs = node.attrs
    out.write(struct.pack("<BQI", _DIR_KIND if node.is_directory else _FILE_KIND,
                          attrs.last_modified_time, attrs.permissions))
    _write_short_bytes(out, attrs.owner.host_group)
    _write_short_bytes(out, attrs.owner.user_group)
    out.write(struct.pack("<I", len(attrs.custom_attributes)))
    for name in sorted(attrs.custom_attributes):
        _write_sized(out, name.encode("utf-8"), "<H")
        _write_sized(out, attrs.custom_attributes[name].encode("utf-8"), "<I")
    if isinstance(node, FileNode):
        _write_sized(out, node.content, "<I")
    else:
        assert isinstance(node, DirectoryNode)
        out.write(struct.pack("<I", len(node.children)))
        for name in sorted(node.children):
            _write_sized(out, name.encode("utf-8"), "<H")
            _write_node(out, node.children[name])


def _write_short_bytes(out: io.BytesIO, data: bytes) -> None:
    out.write(struct.pack("<B", len(data)))
    out.write(data)


def _write_sized(out: io.BytesIO, data: bytes, fmt: str) -> None:
    out.write(struct.pack(fmt, len(data)))
    out.write(data)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise SnapshotError(
                f"truncated snapshot: wanted {n} bytes at offset {self._pos}, "
                f"file has {len(self._data)}"
            )
        chunk = self._data[self._pos : self._pos + n]
        self._pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def remaining(self) -> int:
        return len(self._data) - self._pos


def _read_node(reader: _Reader) -> Node:
    kind, mtime, permissions = reader.unpack("<BQI")
    if kind not in (_FILE_KIND, _DIR_KIND):
        raise SnapshotError(f"unknown node kind {kind}")
    if permissions > 0x1FFF:
        raise SnapshotError(f"permissions 0x{permissions:X} outside the 13-bit range")
    (host_len,) = reader.unpack("<B")
    host = reader.take(host_len)
    (user_len,) = reader.unpack("<B")
    user = reader.take(user_len)
    (attr_count,) = reader.unpack("<I")
    custom: dict[str, str] = {}
    for _ in range(attr_count):
        (name_len,) = reader.unpack("<H")
        name = _decode(reader.take(name_len), "attribute name")
        (value_len,) = reader.unpack("<I")
        custom[name] = _decode(reader.take(value_len), "attribute value")
    try:
        owner = Ownership(host_group=host, user_group=user)
    except Exception as exc:
        raise SnapshotError(f"bad ownership key: {exc}") from None
    if kind == _FILE_KIND:
        (size,) = reader.unpack("<I")
        if size > MAX_FILE_SIZE:
            raise SnapshotError(f"file of {size} bytes exceeds the size limit")
        content = reader.take(size)
        attrs = NodeAttributes(
            size=size,
            last_modified_time=mtime,
            permissions=permissions,
            owner=owner,
            custom_attributes=custom,
        )
        return FileNode(attrs, content)
    (child_count,) = reader.unpack("<I")
    attrs = NodeAttributes(
        size=0,
        last_modified_time=mtime,
        permissions=permissions,
        owner=owner,
        custom_attributes=custom,
    )
    children: dict[str, Node] = {}
    for _ in range(child_count):
        (name_len,) = reader.unpack("<H")
        name = _decode(reader.take(name_len), "child name")
        if name in children:
            raise SnapshotError(f"duplicate child name {name!r}")
        children[name] = _read_node(reader)
    return DirectoryNode(attrs, children)


def _decode(data: bytes, what: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SnapshotError(f"{what} is not valid UTF-8: {exc}") from None
