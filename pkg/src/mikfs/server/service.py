"""The filesystem service: every published method behind its gates.

Per-call pipeline: session token (GetApiInfo and Authenticate excepted),
path parsing, the mutability gate, authorization, the tree operation,
then event publication — the first failed gate wins.  Mutations hold the
write side of the tree lock for the whole method, so each call is atomic
with respect to every observer, and events are enqueued inside the
critical section, which makes delivery order commit order.
"""

from __future__ import annotations

import itertools
import re
import time
from typing import Callable, Iterator

from .. import API_VERSION, __version__, wire
from ..auth import AuthExchange, AuthScheme, SessionRegistry, Session, issue_host_write_handle
from ..errors import MikfsError, StatusCode
from ..pubsub import Hub
from ..vfs import (
    Action,
    FileNode,
    Filesystem,
    MutabilityMode,
    Ownership,
    PathName,
    determine_membership,
    effective_rights,
    is_prefix,
    parse_path,
    render_path,
    unzip_into,
    validate_group_key,
    walk,
    zip_directory,
)
from ..vfs.nodes import MAX_FILE_SIZE
from ..wire.methods import (
    DEFAULT_CHUNK_BYTES,
    MAX_CHUNK_BYTES,
    MIKFS_METHODS,
    MUTATING_METHODS,
    Pattern,
)
from . import search as searches
from .events import ChangeEvent, ChangeFilter, ChangeKind
from .locks import RWLock

SERVER_NAME = "mikfs-server"

# Mutating methods that create new nodes: permitted on an append-only
# instance as long as the target path is absent.
_AO_CREATE_METHODS = frozenset(
    {
        "PutFile",
        "PutFileInChunks",
        "CreateDirectory",
        "CopyFile",
        "CopyDirectory",
        "CreateDirectoryUnzip",
        "CreateDirectoryUnzipInChunks",
    }
)

_SNAKE = re.compile(r"(?<!^)(?=[A-Z])")


def _snake(name: str) -> str:
    return _SNAKE.sub("_", name).lower()


class MikfsService:
    """All method handlers over one filesystem instance.

    Transport-free: handlers take and return wire messages (plus the
    optional gRPC context), so tests can drive them in-process and the
    gRPC binding stays a thin veneer.
    """

    def __init__(
        self,
        *,
        host_group: bytes,
        mode: MutabilityMode,
        auth_scheme: AuthScheme,
        fs: Filesystem | None = None,
        registry: SessionRegistry | None = None,
        clock: Callable[[], int] = time.time_ns,
    ):
        validate_group_key(host_group)
        if not host_group:
            raise ValueError("the host group key must not be empty")
        self.host_group = host_group
        self.mode = mode
        self.scheme = auth_scheme
        self.clock = clock
        self.fs = fs if fs is not None else Filesystem(host_group, clock=clock)
        self.registry = registry if registry is not None else SessionRegistry(clock=clock)
        self.lock = RWLock()
        self.hub = Hub()

    # -- handler table -------------------------------------------------------

    def handlers(self) -> dict[str, Callable]:
        """Wrapped message-level handlers, one per published method."""
        wrapped: dict[str, Callable] = {}
        for spec in MIKFS_METHODS:
            inner = getattr(self, "_" + _snake(spec.name))
            if spec.pattern in (Pattern.UNARY, Pattern.CLIENT_STREAM):
                wrapped[spec.name] = _wrap_single(spec.response, inner)
            else:
                wrapped[spec.name] = _wrap_stream(spec.response, inner)
        return wrapped

    # -- shared gates ----------------------------------------------------------

    def _session(self, token: bytes) -> Session:
        return self.registry.validate(bytes(token))

    def _caller(self, request) -> Ownership:
        return wire.decode_ownership(request.owner)

    def _authorize(
        self, caller: Ownership, path: PathName, action: Action, child: str | None = None
    ) -> None:
        denial = self.fs.authorize(caller, path, action, child)
        if denial is not None:
            raise MikfsError(StatusCode.PERMISSION_DENIED, str(denial))

    def _require_host_key(self, owner: Ownership) -> None:
        if owner.host_group != self.host_group:
            raise MikfsError(
                StatusCode.PERMISSION_DENIED,
                "new content must carry the host group key issued by GetHostWriteHandle",
            )

    def _gate_mutation(self, method: str, target: PathName | None = None) -> None:
        """The mutability matrix.  Call inside the write lock.

        Read-only refuses every mutating method.  Append-only permits
        creations onto absent paths and refuses anything that would
        touch an existing node (overwrite, create-onto-existing,
        copy-onto-existing, move, delete, permission and attribute
        changes).
        """
        assert method in MUTATING_METHODS
        if self.mode is MutabilityMode.READ_WRITE:
            return
        if self.mode is MutabilityMode.READ_ONLY:
            raise MikfsError(StatusCode.READ_ONLY_FILESYSTEM, f"{method}: filesystem is read-only")
        if method in _AO_CREATE_METHODS:
            if target is not None and self.fs.exists(target):
                raise MikfsError(
                    StatusCode.APPEND_ONLY_VIOLATION,
                    f"{method}: {render_path(target)} exists and this filesystem is append-only",
                )
            return
        raise MikfsError(
            StatusCode.APPEND_ONLY_VIOLATION, f"{method} not permitted on an append-only filesystem"
        )

    def _publish(self, kind: ChangeKind, path: PathName, new_path: PathName | None = None) -> None:
        self.hub.publish(
            ChangeEvent(kind=kind, path=tuple(path), timestamp=self.clock(), new_path=new_path)
        )

    def _attributes_message(self, attrs) -> "wire.NodeAttributes":
        return wire.NodeAttributes(
            size=attrs.size,
            last_modified_time=attrs.last_modified_time,
            permissions=attrs.permissions,
            custom_attributes=[
                wire.CustomAttribute(name=n, value=v)
                for n, v in sorted(attrs.custom_attributes.items())
            ],
        )

    # -- methods 0-3: session ----------------------------------------------------

    def _get_api_info(self, request, context=None):
        return wire.GetApiInfoResponse(
            status=wire.ok_status(),
            server_name=SERVER_NAME,
            server_version=__version__,
            api_version=API_VERSION,
            supported_methods=[spec.number for spec in MIKFS_METHODS],
            mutability_mode=self.mode.value,
            auth_scheme=self.scheme.scheme_id,
        )

    def _authenticate(self, request_iterator, context=None) -> Iterator:
        exchange = AuthExchange(self.scheme, self.registry)
        for request in request_iterator:
            payload = request.WhichOneof("payload")
            if exchange.step == 0:
                if payload != "hello":
                    yield wire.AuthResponse(
                        status=wire.error_status(
                            MikfsError(StatusCode.INVALID_ARGUMENT, "expected a hello message")
                        )
                    )
                    return
                scheme_id, nonce = exchange.begin()
                yield wire.AuthResponse(
                    status=wire.ok_status(),
                    challenge=wire.AuthChallenge(scheme=scheme_id, nonce=nonce),
                )
                continue
            try:
                if payload == "durin":
                    session = exchange.respond_durin(request.durin.watchword)
                elif payload == "user_password":
                    session = exchange.respond_userpassword(
                        request.user_password.username, bytes(request.user_password.proof)
                    )
                else:
                    raise MikfsError(StatusCode.INVALID_ARGUMENT, "expected a proof message")
            except MikfsError as exc:
                yield wire.AuthResponse(status=wire.error_status(exc))
                return
            yield wire.AuthResponse(
                status=wire.ok_status(),
                grant=wire.AuthGrant(session_token=session.token, expires_at=session.expires_at),
            )
            return

    def _logout(self, request, context=None):
        self.registry.logout(bytes(request.session_token))
        return wire.LogoutResponse(status=wire.ok_status())

    def _get_host_write_handle(self, request, context=None):
        key = issue_host_write_handle(
            self.registry, bytes(request.session_token), self.host_group, self.mode
        )
        return wire.GetHostWriteHandleResponse(
            status=wire.ok_status(), host_group=wire.GroupOwner(key=key)
        )

    # -- methods 4-7: file transfer ----------------------------------------------

    def _get_file(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.read():
            self._authorize(caller, path, Action.READ_FILE)
            node = self.fs.lookup_file(path)
            return wire.GetFileResponse(
                status=wire.ok_status(),
                content=node.content,
                attributes=self._attributes_message(node.attrs),
            )

    def _get_file_in_chunks(self, request, context=None) -> Iterator:
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        chunk_size = _clamp_chunk_size(request.chunk_size)
        with self.lock.read():
            self._authorize(caller, path, Action.READ_FILE)
            content = self.fs.read_file(path)
        return _stream_chunks(request.path, content, chunk_size)

    def _put_file(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.write():
            self._commit_put(path, bytes(request.content), caller, request.permissions, "PutFile")
        return wire.PutFileResponse(status=wire.ok_status())

    def _commit_put(
        self, path: PathName, content: bytes, caller: Ownership, permissions: int, method: str
    ) -> None:
        """Shared by whole and chunked puts, so the two are equivalent."""
        self._gate_mutation(method, target=path)
        if self.fs.exists(path):
            self._authorize(caller, path, Action.WRITE_FILE)
            self.fs.overwrite_file(path, content)
            self._publish(ChangeKind.FILE_MODIFIED, path)
        else:
            if not path:
                raise MikfsError(StatusCode.NOT_A_FILE, "/ is not a file")
            self._require_host_key(caller)
            self._authorize(caller, path[:-1], Action.CREATE_CHILD)
            self.fs.create_file(path, content, caller, permissions)
            self._publish(ChangeKind.FILE_CREATED, path)

    def _put_file_in_chunks(self, request_iterator, context=None):
        header, content = self._collect_chunked_upload(request_iterator)
        caller = wire.decode_ownership(header.owner)
        path = parse_path(header.path)
        with self.lock.write():
            self._commit_put(path, content, caller, header.permissions, "PutFileInChunks")
        return wire.ChunkedWriteResponse(status=wire.ok_status(), committed_size=len(content))

    def _collect_chunked_upload(self, request_iterator) -> tuple:
        """Assemble a staged upload; nothing touches the tree here.

        A stream that ends before the last-flagged chunk, or with any
        offset gap, overlap, oversized chunk, or size mismatch, fails
        with nothing committed.
        """
        iterator = iter(request_iterator)
        first = next(iterator, None)
        if first is None:
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "empty upload stream")
        session = self._session(first.session_token)
        if first.WhichOneof("payload") != "header":
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "first message must be the chunk header")
        header = first.header
        total = header.total_size
        if total > MAX_FILE_SIZE:
            raise MikfsError(
                StatusCode.SIZE_LIMIT_EXCEEDED, f"declared size {total} exceeds {MAX_FILE_SIZE}"
            )
        with session.lock:
            if session.staged_bytes + total > MAX_FILE_SIZE:
                raise MikfsError(
                    StatusCode.SIZE_LIMIT_EXCEEDED, "session staging capacity exceeded"
                )
            session.staged_bytes += total
        try:
            buffer = bytearray()
            saw_last = False
            for message in iterator:
                if message.WhichOneof("payload") != "chunk":
                    raise MikfsError(StatusCode.INVALID_ARGUMENT, "expected a chunk message")
                chunk = message.chunk
                if len(chunk.data) > MAX_CHUNK_BYTES:
                    raise MikfsError(
                        StatusCode.INVALID_ARGUMENT,
                        f"chunk of {len(chunk.data)} bytes exceeds the 1 MiB chunk limit",
                    )
                if chunk.offset != len(buffer):
                    raise MikfsError(
                        StatusCode.INVALID_ARGUMENT,
                        f"chunk offset {chunk.offset} does not continue from {len(buffer)}",
                    )
                buffer += chunk.data
                if len(buffer) > total:
                    raise MikfsError(
                        StatusCode.INVALID_ARGUMENT,
                        f"received {len(buffer)} bytes, more than the declared {total}",
                    )
                if chunk.last:
                    saw_last = True
                    break
            if not saw_last:
                raise MikfsError(
                    StatusCode.INVALID_ARGUMENT, "upload ended before the last-flagged chunk"
                )
            if len(buffer) != total:
                raise MikfsError(
                    StatusCode.INVALID_ARGUMENT,
                    f"received {len(buffer)} bytes but the header declared {total}",
                )
            return header, bytes(buffer)
        finally:
            with session.lock:
                session.staged_bytes -= total

    # -- methods 8-9: directories --------------------------------------------------

    def _create_directory(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.write():
            self._gate_mutation("CreateDirectory", target=path)
            if not path:
                raise MikfsError(StatusCode.ALREADY_EXISTS, "root already exists")
            self._require_host_key(caller)
            self._authorize(caller, path[:-1], Action.CREATE_CHILD)
            self.fs.create_directory(path, caller, request.permissions)
            self._publish(ChangeKind.DIR_CREATED, path)
        return wire.CreateDirectoryResponse(status=wire.ok_status())

    def _read_directory_contents(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.read():
            self._authorize(caller, path, Action.LIST)
            entries = self.fs.list_directory(path)
        return wire.ReadDirectoryContentsResponse(
            status=wire.ok_status(),
            entries=[
                wire.DirectoryEntry(
                    name=entry.name,
                    is_directory=entry.is_directory,
                    attributes=wire.NodeAttributes(
                        size=entry.size,
                        last_modified_time=entry.last_modified_time,
                        permissions=entry.permissions,
                        custom_attributes=[
                            wire.CustomAttribute(name=n, value=v)
                            for n, v in entry.custom_attributes
                        ],
                    ),
                )
                for entry in entries
            ],
        )

    # -- methods 10-15: move / copy / delete ------------------------------------------

    def _move_file(self, request, context=None):
        return self._move(request, want_directory=False, method="MoveFile")

    def _move_directory(self, request, context=None):
        return self._move(request, want_directory=True, method="MoveDirectory")

    def _move(self, request, *, want_directory: bool, method: str):
        self._session(request.session_token)
        caller = self._caller(request)
        src = parse_path(request.source_path)
        dst = parse_path(request.destination_path)
        with self.lock.write():
            self._gate_mutation(method)
            if not src:
                raise MikfsError(StatusCode.INVALID_ARGUMENT, "the root directory cannot be moved")
            if not dst:
                raise MikfsError(StatusCode.ALREADY_EXISTS, "root already exists")
            self._authorize(caller, src[:-1], Action.DELETE_CHILD, child=src[-1])
            self._authorize(caller, dst[:-1], Action.CREATE_CHILD)
            self.fs.move(src, dst, want_directory=want_directory)
            kind = ChangeKind.DIR_MOVED if want_directory else ChangeKind.FILE_MOVED
            self._publish(kind, src, new_path=dst)
        return wire.MoveResponse(status=wire.ok_status())

    def _copy_file(self, request, context=None):
        return self._copy(request, want_directory=False, method="CopyFile")

    def _copy_directory(self, request, context=None):
        return self._copy(request, want_directory=True, method="CopyDirectory")

    def _copy(self, request, *, want_directory: bool, method: str):
        self._session(request.session_token)
        caller = self._caller(request)
        src = parse_path(request.source_path)
        dst = parse_path(request.destination_path)
        with self.lock.write():
            self._gate_mutation(method, target=dst)
            if not dst:
                raise MikfsError(StatusCode.ALREADY_EXISTS, "root already exists")
            if want_directory:
                self._authorize(caller, src, Action.LIST)
                self._require_subtree_readable(caller, src)
            else:
                self._authorize(caller, src, Action.READ_FILE)
            self._require_host_key(caller)
            self._authorize(caller, dst[:-1], Action.CREATE_CHILD)
            self.fs.copy(src, dst, caller, request.permissions, want_directory=want_directory)
            kind = ChangeKind.DIR_CREATED if want_directory else ChangeKind.FILE_CREATED
            self._publish(kind, dst)
        return wire.CopyResponse(status=wire.ok_status())

    def _require_subtree_readable(self, caller: Ownership, base: PathName) -> None:
        """Copying a directory means reading all of it: every inner file
        needs read, every inner directory list and traverse."""
        node = self.fs.lookup(base)
        for rel, sub in walk(node, base):
            membership = determine_membership(caller, sub.attrs.owner)
            rights = effective_rights(sub.attrs.permissions, membership)
            if isinstance(sub, FileNode):
                if not rights.read:
                    raise MikfsError(
                        StatusCode.PERMISSION_DENIED,
                        f"copy source {render_path(rel)} is not readable",
                    )
            elif not (rights.read and (rights.execute or not sub.children)):
                raise MikfsError(
                    StatusCode.PERMISSION_DENIED,
                    f"copy source {render_path(rel)} is not listable",
                )

    def _delete_file(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.write():
            self._gate_mutation("DeleteFile")
            if not path:
                raise MikfsError(StatusCode.NOT_A_FILE, "/ is not a file")
            self._authorize(caller, path[:-1], Action.DELETE_CHILD, child=path[-1])
            self.fs.delete_file(path)
            self._publish(ChangeKind.FILE_DELETED, path)
        return wire.DeleteFileResponse(status=wire.ok_status())

    def _delete_directory(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.write():
            self._gate_mutation("DeleteDirectory")
            if not path:
                raise MikfsError(
                    StatusCode.INVALID_ARGUMENT, "the root directory cannot be deleted"
                )
            self._authorize(caller, path[:-1], Action.DELETE_CHILD, child=path[-1])
            self.fs.delete_directory(path, recursive=request.recursive)
            self._publish(ChangeKind.DIR_DELETED, path)
        return wire.DeleteDirectoryResponse(status=wire.ok_status())

    # -- methods 16-19: directory zips ----------------------------------------------

    def _get_directory_zip(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.read():
            self._authorize(caller, path, Action.LIST)
            data, omitted = zip_directory(self.fs, path, caller)
        return wire.GetDirectoryZipResponse(
            status=wire.ok_status(), zip_data=data, omitted_entries=omitted
        )

    def _get_directory_zip_in_chunks(self, request, context=None) -> Iterator:
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        chunk_size = _clamp_chunk_size(request.chunk_size)
        with self.lock.read():
            self._authorize(caller, path, Action.LIST)
            data, omitted = zip_directory(self.fs, path, caller)
        return _stream_chunks(request.path, data, chunk_size, omitted_entries=omitted)

    def _create_directory_unzip(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.write():
            created = self._commit_unzip(
                path, bytes(request.zip_data), caller, request.permissions, "CreateDirectoryUnzip"
            )
        return wire.CreateDirectoryUnzipResponse(status=wire.ok_status(), created_nodes=created)

    def _commit_unzip(
        self, path: PathName, data: bytes, caller: Ownership, permissions: int, method: str
    ) -> int:
        self._gate_mutation(method, target=path)
        if not path:
            raise MikfsError(StatusCode.ALREADY_EXISTS, "root already exists")
        self._require_host_key(caller)
        self._authorize(caller, path[:-1], Action.CREATE_CHILD)
        created = unzip_into(self.fs, path, data, caller, permissions)
        self._publish(ChangeKind.DIR_CREATED, path)
        return created

    def _create_directory_unzip_in_chunks(self, request_iterator, context=None):
        header, data = self._collect_chunked_upload(request_iterator)
        caller = wire.decode_ownership(header.owner)
        path = parse_path(header.path)
        with self.lock.write():
            created = self._commit_unzip(
                path, data, caller, header.permissions, "CreateDirectoryUnzipInChunks"
            )
        return wire.ChunkedWriteResponse(
            status=wire.ok_status(), committed_size=len(data), created_nodes=created
        )

    # -- methods 20-23: permissions & attributes ---------------------------------------

    def _set_permissions(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.write():
            self._gate_mutation("SetPermissions")
            self._authorize(caller, path, Action.SET_PERMISSIONS)
            self.fs.set_permissions(path, request.permissions)
            self._publish(ChangeKind.PERMISSIONS_CHANGED, path)
        return wire.SetPermissionsResponse(status=wire.ok_status())

    def _get_permissions(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.read():
            self._authorize(caller, path, Action.TRAVERSE)
            permissions = self.fs.get_permissions(path)
        return wire.GetPermissionsResponse(status=wire.ok_status(), permissions=permissions)

    def _update_attributes(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        updates = [
            (update.name, None if update.remove else update.value) for update in request.updates
        ]
        with self.lock.write():
            self._gate_mutation("UpdateAttributes")
            self._authorize(caller, path, Action.SET_ATTRIBUTES)
            attributes = self.fs.update_attributes(path, updates)
            self._publish(ChangeKind.ATTRIBUTES_CHANGED, path)
        return wire.UpdateAttributesResponse(
            status=wire.ok_status(),
            attributes=[
                wire.CustomAttribute(name=n, value=v) for n, v in sorted(attributes.items())
            ],
        )

    def _get_attributes(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        path = parse_path(request.path)
        with self.lock.read():
            self._authorize(caller, path, Action.TRAVERSE)
            attributes = self.fs.get_attributes(path)
        return wire.GetAttributesResponse(
            status=wire.ok_status(),
            attributes=[
                wire.CustomAttribute(name=n, value=v) for n, v in sorted(attributes.items())
            ],
        )

    # -- method 24: change notifications ----------------------------------------------

    def _file_system_change_subscribe(self, request, context=None) -> Iterator:
        self._session(request.session_token)
        try:
            kinds = frozenset(ChangeKind(k) for k in request.kinds if k)
        except ValueError:
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "unknown change kind") from None
        change_filter = ChangeFilter(
            prefix=parse_path(request.path_prefix),
            name_glob=request.name_glob,
            kinds=kinds,
        )
        sequence = itertools.count(1)

        def transform(event: ChangeEvent):
            if not change_filter.matches(event):
                return None
            return wire.ChangeEventResponse(
                status=wire.ok_status(),
                event=wire.ChangeEvent(
                    kind=int(event.kind),
                    path=render_path(event.path),
                    new_path=render_path(event.new_path) if event.new_path is not None else "",
                    timestamp=event.timestamp,
                    sequence=next(sequence),
                ),
            )

        sub_id, subscription = self.hub.subscribe(transform)
        if context is not None:
            context.add_callback(subscription.close)

        def stream():
            try:
                yield from subscription
                if subscription.error:
                    yield wire.ChangeEventResponse(
                        status=wire.Status(
                            code=int(StatusCode.SIZE_LIMIT_EXCEEDED), message=subscription.error
                        )
                    )
            finally:
                self.hub.unsubscribe(sub_id)

        return stream()

    # -- methods 25-26: search -----------------------------------------------------

    def _search_result_message(self, path: PathName, node) -> "wire.SearchResult":
        return wire.SearchResult(
            path=render_path(path),
            is_directory=node.is_directory,
            attributes=self._attributes_message(node.attrs),
        )

    def _search(self, request, context=None):
        self._session(request.session_token)
        caller = self._caller(request)
        query = searches.parse_query(request)
        with self.lock.read():
            matches = searches.run_search(self.fs, caller, query)
            results = [self._search_result_message(path, node) for path, node in matches]
        return wire.SearchResponse(status=wire.ok_status(), results=results)

    def _search_subscribe(self, request, context=None) -> Iterator:
        self._session(request.session_token)
        caller = self._caller(request)
        query = searches.parse_query(request)
        emitted: set[str] = set()

        def transform(event: ChangeEvent):
            # runs inside the mutation's critical section: tree is consistent
            if event.is_removal or event.is_move:
                stale = render_path(event.path)
                for known in [p for p in emitted if p == stale or p.startswith(stale + "/")]:
                    emitted.discard(known)
                if event.is_removal:
                    return None
                target = event.new_path or ()
            else:
                target = event.path
            if not is_prefix(query.prefix, target):
                return None
            try:
                node, reachable = searches.is_reachable(self.fs, caller, target)
            except (KeyError, AssertionError):
                return None
            if not reachable or not searches.readable(caller, node):
                return None
            if not searches.matches_criteria(target, node, query):
                return None
            rendered = render_path(target)
            if rendered in emitted:
                return None
            emitted.add(rendered)
            return wire.SearchEventResponse(
                status=wire.ok_status(), result=self._search_result_message(target, node)
            )

        with self.lock.read():
            # snapshot and register under the read lock: no mutation can
            # slip between the initial result set and the delta stream
            matches = searches.run_search(self.fs, caller, query)
            initial = [self._search_result_message(path, node) for path, node in matches]
            emitted.update(render_path(path) for path, _ in matches)
            sub_id, subscription = self.hub.subscribe(transform)
        if context is not None:
            context.add_callback(subscription.close)

        def stream():
            try:
                for result in initial:
                    yield wire.SearchEventResponse(status=wire.ok_status(), result=result)
                yield wire.SearchEventResponse(status=wire.ok_status(), initial_complete=True)
                yield from subscription
                if subscription.error:
                    yield wire.SearchEventResponse(
                        status=wire.Status(
                            code=int(StatusCode.SIZE_LIMIT_EXCEEDED), message=subscription.error
                        )
                    )
            finally:
                self.hub.unsubscribe(sub_id)

        return stream()


# ---------------------------------------------------------------------------
# Wrapping and chunk streaming helpers
# ---------------------------------------------------------------------------


def _wrap_single(response_cls, fn):
    def handler(request_or_iterator, context=None):
        try:
            return fn(request_or_iterator, context)
        except MikfsError as exc:
            return response_cls(status=wire.error_status(exc))

    return handler


def _wrap_stream(response_cls, fn):
    """Streaming handlers run their setup eagerly (so subscriptions are
    registered the moment the call arrives) and return an iterator for
    the streaming phase; failures in either phase become a final status
    message."""

    def handler(request_or_iterator, context=None):
        try:
            inner = fn(request_or_iterator, context)
        except MikfsError as exc:
            return iter([response_cls(status=wire.error_status(exc))])
        return _guarded_stream(inner, response_cls)

    return handler


def _guarded_stream(inner, response_cls):
    try:
        yield from inner
    except MikfsError as exc:
        yield response_cls(status=wire.error_status(exc))


def _clamp_chunk_size(requested: int) -> int:
    if requested <= 0:
        return DEFAULT_CHUNK_BYTES
    return min(requested, MAX_CHUNK_BYTES)


def _stream_chunks(path: str, content: bytes, chunk_size: int, omitted_entries: int = 0):
    yield wire.ChunkedReadResponse(
        status=wire.ok_status(),
        header=wire.ChunkHeader(
            path=path,
            total_size=len(content),
            chunk_size=chunk_size,
            omitted_entries=omitted_entries,
        ),
    )
    if not content:
        yield wire.ChunkedReadResponse(chunk=wire.FileChunk(offset=0, data=b"", last=True))
        return
    for offset in range(0, len(content), chunk_size):
        piece = content[offset : offset + chunk_size]
        yield wire.ChunkedReadResponse(
            chunk=wire.FileChunk(
                offset=offset, data=piece, last=offset + len(piece) >= len(content)
            )
        )
