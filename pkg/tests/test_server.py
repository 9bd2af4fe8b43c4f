"""Service-level behavior, driven in-process through the handler table."""

import random

import pytest

from mikfs import auth, wire
from mikfs.errors import StatusCode
from mikfs.vfs import MutabilityMode, Ownership, parse_path
from mikfs.wire.methods import MIKFS_METHODS, MUTATING_METHODS

from util import (
    HOST_KEY,
    OWNER_A,
    OWNER_B,
    WATCHWORD,
    Client,
    drive_auth,
    durin_token,
    make_service,
)


@pytest.fixture
def service():
    return make_service()


@pytest.fixture
def client(service):
    return Client(service)


def O(owner):  # noqa: E743 - tiny local alias for request building
    return wire.encode_ownership(owner)


class TestTokenGate:
    def test_get_api_info_is_public(self, service):
        response = service.handlers()["GetApiInfo"](wire.GetApiInfoRequest())
        assert response.status.code == 0
        assert list(response.supported_methods) == [m.number for m in MIKFS_METHODS]

    def test_every_other_method_needs_a_token(self, service):
        handlers = service.handlers()
        for spec in MIKFS_METHODS:
            if spec.name in ("GetApiInfo", "Authenticate"):
                continue
            request = spec.request()
            if spec.pattern.value == "unary":
                response = handlers[spec.name](request)
            elif spec.pattern.value == "server-stream":
                response = next(iter(handlers[spec.name](request)))
            elif spec.pattern.value == "client-stream":
                response = handlers[spec.name](iter([request]))
            else:
                continue
            assert response.status.code == StatusCode.NOT_AUTHENTICATED, spec.name

    def test_logout_kills_token(self, client):
        client.call_ok("Logout")
        response = client.call("GetHostWriteHandle")
        assert response.status.code == StatusCode.NOT_AUTHENTICATED


class TestAuthenticateHandler:
    def test_durin_success_and_failure(self, service):
        handlers = service.handlers()
        token = durin_token(handlers)
        assert len(token) == 32
        responses = drive_auth(
            handlers, lambda r: wire.AuthRequest(durin=wire.AuthDurinProof(watchword="wrong"))
        )
        assert responses[-1].status.code == StatusCode.AUTH_FAILED
        assert responses[-1].WhichOneof("payload") is None

    def test_userpassword_success_and_failure(self):
        salt = b"\x01\x02\x03"
        users = {"alice": auth.UserEntry(salt, auth.make_verifier(salt, "pw"))}
        service = make_service(scheme=auth.UserPasswordConfig(users))
        handlers = service.handlers()

        def good(response):
            verifier = auth.make_verifier(salt, "pw")
            proof = auth.make_proof(verifier, response.challenge.nonce)
            return wire.AuthRequest(
                user_password=wire.AuthUserPasswordProof(username="alice", proof=proof)
            )

        responses = drive_auth(handlers, good)
        assert responses[0].challenge.scheme == "userpassword"
        assert responses[-1].status.code == 0
        assert len(responses[-1].grant.session_token) == 32

        def bad(response):
            verifier = auth.make_verifier(salt, "oops")
            proof = auth.make_proof(verifier, response.challenge.nonce)
            return wire.AuthRequest(
                user_password=wire.AuthUserPasswordProof(username="alice", proof=proof)
            )

        responses = drive_auth(handlers, bad)
        assert responses[-1].status.code == StatusCode.AUTH_FAILED

    def test_unknown_user_and_wrong_password_identical(self):
        salt = b"\x01"
        users = {"alice": auth.UserEntry(salt, auth.make_verifier(salt, "pw"))}
        service = make_service(scheme=auth.UserPasswordConfig(users))
        handlers = service.handlers()
        payloads = []
        for username in ("alice", "ghost"):
            responses = drive_auth(
                handlers,
                lambda r, u=username: wire.AuthRequest(
                    user_password=wire.AuthUserPasswordProof(username=u, proof=b"\x00" * 32)
                ),
            )
            payloads.append(responses[-1].SerializeToString(deterministic=True))
        assert payloads[0] == payloads[1]

    def test_malformed_hello(self, service):
        handlers = service.handlers()
        responses = handlers["Authenticate"](
            iter([wire.AuthRequest(durin=wire.AuthDurinProof(watchword=WATCHWORD))]), None
        )
        first = next(responses)
        assert first.status.code == StatusCode.INVALID_ARGUMENT

    def test_wrong_scheme_payload(self, service):
        handlers = service.handlers()
        responses = drive_auth(
            handlers,
            lambda r: wire.AuthRequest(
                user_password=wire.AuthUserPasswordProof(username="x", proof=b"")
            ),
        )
        assert responses[-1].status.code == StatusCode.SCHEME_UNSUPPORTED


class TestHostWriteHandle:
    def test_issues_configured_key(self, client):
        response = client.call_ok("GetHostWriteHandle")
        assert response.host_group.key == HOST_KEY

    def test_creation_requires_issued_host_key(self, client):
        foreign = Ownership(b"\x99\x99", b"\x02" * 4)
        response = client.call(
            "PutFile", path="/f", content=b"x", owner=O(foreign), permissions=0xFFF
        )
        assert response.status.code == StatusCode.PERMISSION_DENIED
        assert "host" in response.status.message

    def test_wildcard_host_rejected_for_creation(self, client):
        response = client.call(
            "PutFile",
            path="/f",
            content=b"x",
            owner=O(Ownership(b"", b"\x02" * 4)),
            permissions=0xFFF,
        )
        assert response.status.code == StatusCode.PERMISSION_DENIED


class TestPutGet:
    def test_round_trip(self, client):
        payload = bytes(random.Random(5).randbytes(4096))
        client.call_ok("PutFile", path="/f", content=payload, owner=O(OWNER_A), permissions=0xFFF)
        response = client.call_ok("GetFile", path="/f", owner=O(OWNER_A))
        assert response.content == payload
        assert response.attributes.size == 4096
        assert response.attributes.permissions == 0xFFF

    def test_overwrite_keeps_owner_and_permissions(self, client):
        client.call_ok("PutFile", path="/f", content=b"1", owner=O(OWNER_A), permissions=0xE00)
        client.call_ok("PutFile", path="/f", content=b"22", owner=O(OWNER_A), permissions=0x1FFF)
        response = client.call_ok("GetPermissions", path="/f", owner=O(OWNER_A))
        assert response.permissions == 0xE00  # unchanged by the overwrite

    def test_overwrite_needs_write_permission(self, client):
        client.call_ok("PutFile", path="/f", content=b"1", owner=O(OWNER_A), permissions=0xD20)
        response = client.call(
            "PutFile", path="/f", content=b"2", owner=O(OWNER_B), permissions=0xFFF
        )
        assert response.status.code == StatusCode.PERMISSION_DENIED

    def test_missing_parent(self, client):
        response = client.call(
            "PutFile", path="/a/b", content=b"", owner=O(OWNER_A), permissions=0xFFF
        )
        assert response.status.code == StatusCode.NOT_FOUND

    def test_invalid_path(self, client):
        response = client.call(
            "PutFile", path="/a//b", content=b"", owner=O(OWNER_A), permissions=0xFFF
        )
        assert response.status.code == StatusCode.INVALID_PATH

    def test_oversized_group_key_rejected(self, client):
        bad = wire.Ownership(
            host_group=wire.GroupOwner(key=b"\x01" * 65), user_group=wire.GroupOwner()
        )
        response = client.call(
            "PutFile", path="/f", content=b"", owner=bad, permissions=0xFFF
        )
        assert response.status.code == StatusCode.INVALID_ARGUMENT


def upload_chunks(client, path, content, chunk_size, *, last_flag=True, total=None, kind="PutFileInChunks"):
    total = len(content) if total is None else total
    requests = [
        wire.ChunkedWriteRequest(
            session_token=client.token,
            header=wire.ChunkHeader(
                path=path,
                total_size=total,
                chunk_size=chunk_size,
                owner=client.owned(),
                permissions=0xFFF,
            ),
        )
    ]
    offset = 0
    pieces = [content[i : i + chunk_size] for i in range(0, len(content), chunk_size)] or [b""]
    for i, piece in enumerate(pieces):
        requests.append(
            wire.ChunkedWriteRequest(
                session_token=client.token,
                chunk=wire.FileChunk(
                    offset=offset, data=piece, last=last_flag and i == len(pieces) - 1
                ),
            )
        )
        offset += len(piece)
    return client.handlers[kind](iter(requests))


class TestChunkedTransfer:
    def test_three_chunk_arithmetic(self, client):
        content = bytes(150_000)
        response = upload_chunks(client, "/f", content, 65536)
        assert response.status.code == 0
        stream = client.handlers["GetFileInChunks"](
            wire.GetFileInChunksRequest(
                session_token=client.token, path="/f", owner=client.owned(), chunk_size=65536
            )
        )
        messages = list(stream)
        header, chunks = messages[0], messages[1:]
        assert header.header.total_size == 150_000
        assert [len(c.chunk.data) for c in chunks] == [65536, 65536, 18928]
        assert [c.chunk.last for c in chunks] == [False, False, True]
        assert b"".join(c.chunk.data for c in chunks) == content

    def test_zero_byte_file(self, client):
        response = upload_chunks(client, "/zero", b"", 65536)
        assert response.status.code == 0
        got = client.call_ok("GetFile", path="/zero", owner=client.owned())
        assert got.content == b"" and got.attributes.size == 0
        stream = list(
            client.handlers["GetFileInChunks"](
                wire.GetFileInChunksRequest(
                    session_token=client.token, path="/zero", owner=client.owned()
                )
            )
        )
        assert len(stream) == 2
        assert stream[1].chunk.last and stream[1].chunk.data == b""

    def test_chunked_equals_whole(self, client):
        rng = random.Random(7)
        for i in range(10):
            content = rng.randbytes(rng.randint(0, 300_000))
            whole_path, chunk_path = f"/w{i}", f"/c{i}"
            client.call_ok(
                "PutFile", path=whole_path, content=content, owner=O(OWNER_A), permissions=0xFFF
            )
            response = upload_chunks(client, chunk_path, content, rng.choice([1024, 65536, 999]))
            assert response.status.code == 0
            a = client.call_ok("GetFile", path=whole_path, owner=O(OWNER_A)).content
            b = client.call_ok("GetFile", path=chunk_path, owner=O(OWNER_A)).content
            assert a == b == content

    def test_missing_last_flag_leaves_prior_content(self, client):
        client.call_ok("PutFile", path="/f", content=b"before", owner=O(OWNER_A), permissions=0xFFF)
        response = upload_chunks(client, "/f", b"after!", 3, last_flag=False)
        assert response.status.code == StatusCode.INVALID_ARGUMENT
        assert client.call_ok("GetFile", path="/f", owner=O(OWNER_A)).content == b"before"

    def test_offset_gap_rejected(self, client):
        requests = [
            wire.ChunkedWriteRequest(
                session_token=client.token,
                header=wire.ChunkHeader(
                    path="/f", total_size=4, owner=client.owned(), permissions=0xFFF
                ),
            ),
            wire.ChunkedWriteRequest(
                session_token=client.token,
                chunk=wire.FileChunk(offset=2, data=b"zz", last=True),
            ),
        ]
        response = client.handlers["PutFileInChunks"](iter(requests))
        assert response.status.code == StatusCode.INVALID_ARGUMENT
        assert "offset" in response.status.message

    def test_declared_size_mismatch_rejected(self, client):
        response = upload_chunks(client, "/f", b"abc", 2, total=99)
        assert response.status.code == StatusCode.INVALID_ARGUMENT
        assert not client.service.fs.exists(parse_path("/f"))

    def test_chunk_over_one_mib_rejected(self, client):
        requests = [
            wire.ChunkedWriteRequest(
                session_token=client.token,
                header=wire.ChunkHeader(
                    path="/f", total_size=2**20 + 1, owner=client.owned(), permissions=0xFFF
                ),
            ),
            wire.ChunkedWriteRequest(
                session_token=client.token,
                chunk=wire.FileChunk(offset=0, data=bytes(2**20 + 1), last=True),
            ),
        ]
        response = client.handlers["PutFileInChunks"](iter(requests))
        assert response.status.code == StatusCode.INVALID_ARGUMENT
        assert "1 MiB" in response.status.message

    def test_header_must_come_first(self, client):
        requests = [
            wire.ChunkedWriteRequest(
                session_token=client.token, chunk=wire.FileChunk(offset=0, data=b"x", last=True)
            )
        ]
        response = client.handlers["PutFileInChunks"](iter(requests))
        assert response.status.code == StatusCode.INVALID_ARGUMENT

    def test_declared_total_over_limit(self, client):
        requests = [
            wire.ChunkedWriteRequest(
                session_token=client.token,
                header=wire.ChunkHeader(
                    path="/f", total_size=2**31, owner=client.owned(), permissions=0xFFF
                ),
            )
        ]
        response = client.handlers["PutFileInChunks"](iter(requests))
        assert response.status.code == StatusCode.SIZE_LIMIT_EXCEEDED


class TestMutabilityGates:
    def put(self, client, path="/f", exists_first=False):
        if exists_first:
            pass
        return client.call(
            "PutFile", path=path, content=b"x", owner=O(OWNER_A), permissions=0xFFF
        )

    def test_read_only_rejects_every_mutator(self):
        rw = make_service(MutabilityMode.READ_WRITE)
        seeded = Client(rw)
        ro = make_service(MutabilityMode.READ_ONLY)
        client = Client(ro)
        for name in sorted(MUTATING_METHODS):
            spec = next(m for m in MIKFS_METHODS if m.name == name)
            if spec.pattern.value == "client-stream":
                response = client.handlers[name](
                    iter(
                        [
                            wire.ChunkedWriteRequest(
                                session_token=client.token,
                                header=wire.ChunkHeader(
                                    path="/x", total_size=0, owner=client.owned()
                                ),
                            ),
                            wire.ChunkedWriteRequest(
                                session_token=client.token,
                                chunk=wire.FileChunk(offset=0, data=b"", last=True),
                            ),
                        ]
                    )
                )
            else:
                response = client.call(name, **_minimal_fields(spec, client))
            assert response.status.code == StatusCode.READ_ONLY_FILESYSTEM, name

    def test_append_only_allows_new_rejects_overwrite(self):
        service = make_service(MutabilityMode.APPEND_ONLY)
        client = Client(service)
        assert self.put(client).status.code == 0
        response = self.put(client)
        assert response.status.code == StatusCode.APPEND_ONLY_VIOLATION

    def test_append_only_move_delete_setperm_attrs_rejected(self):
        service = make_service(MutabilityMode.APPEND_ONLY)
        client = Client(service)
        client.call_ok("PutFile", path="/f", content=b"x", owner=O(OWNER_A), permissions=0xFFF)
        cases = [
            ("MoveFile", dict(source_path="/f", destination_path="/g", owner=O(OWNER_A))),
            ("DeleteFile", dict(path="/f", owner=O(OWNER_A))),
            ("SetPermissions", dict(path="/f", owner=O(OWNER_A), permissions=0xE00)),
            (
                "UpdateAttributes",
                dict(path="/f", owner=O(OWNER_A), updates=[wire.AttributeUpdate(name="a", value="b")]),
            ),
        ]
        for name, fields in cases:
            response = client.call(name, **fields)
            assert response.status.code == StatusCode.APPEND_ONLY_VIOLATION, name

    def test_append_only_copy_onto_absent_ok_existing_rejected(self):
        service = make_service(MutabilityMode.APPEND_ONLY)
        client = Client(service)
        client.call_ok("PutFile", path="/src", content=b"x", owner=O(OWNER_A), permissions=0xFFF)
        ok = client.call(
            "CopyFile",
            source_path="/src",
            destination_path="/dst",
            owner=O(OWNER_A),
            permissions=0xFFF,
        )
        assert ok.status.code == 0
        again = client.call(
            "CopyFile",
            source_path="/src",
            destination_path="/dst",
            owner=O(OWNER_A),
            permissions=0xFFF,
        )
        assert again.status.code == StatusCode.APPEND_ONLY_VIOLATION

    def test_read_only_still_reads(self):
        service = make_service(MutabilityMode.READ_ONLY)
        client = Client(service)
        listing = client.call_ok("ReadDirectoryContents", path="/", owner=O(OWNER_B))
        assert list(listing.entries) == []
        perms = client.call_ok("GetPermissions", path="/", owner=O(OWNER_B))
        assert perms.permissions == 0x0FFD


def _minimal_fields(spec, client):
    name = spec.name
    base = {"owner": O(OWNER_A)}
    if name in ("PutFile",):
        return dict(base, path="/x", content=b"x", permissions=0xFFF)
    if name in ("CreateDirectory",):
        return dict(base, path="/x", permissions=0xFFF)
    if name in ("MoveFile", "CopyFile", "MoveDirectory", "CopyDirectory"):
        fields = dict(base, source_path="/a", destination_path="/b")
        if name.startswith("Copy"):
            fields["permissions"] = 0xFFF
        return fields
    if name in ("DeleteFile", "DeleteDirectory"):
        return dict(base, path="/x")
    if name == "CreateDirectoryUnzip":
        return dict(base, path="/x", zip_data=b"", permissions=0xFFF)
    if name == "SetPermissions":
        return dict(base, path="/x", permissions=0xFFF)
    if name == "UpdateAttributes":
        return dict(base, path="/x", updates=[wire.AttributeUpdate(name="a", value="b")])
    if name == "GetHostWriteHandle":
        return {}
    raise AssertionError(name)


class TestMoveCopyDelete:
    def seed(self, client):
        client.call_ok("CreateDirectory", path="/d", owner=O(OWNER_A), permissions=0xFFF)
        client.call_ok("PutFile", path="/d/f", content=b"data", owner=O(OWNER_A), permissions=0xFFF)

    def test_move_file(self, client):
        self.seed(client)
        client.call_ok("MoveFile", source_path="/d/f", destination_path="/f2", owner=O(OWNER_A))
        assert client.call("GetFile", path="/d/f", owner=O(OWNER_A)).status.code == StatusCode.NOT_FOUND
        assert client.call_ok("GetFile", path="/f2", owner=O(OWNER_A)).content == b"data"

    def test_move_cycle(self, client):
        self.seed(client)
        response = client.call(
            "MoveDirectory", source_path="/d", destination_path="/d/sub", owner=O(OWNER_A)
        )
        assert response.status.code == StatusCode.CYCLE_REJECTED

    def test_copy_directory_requires_readable_subtree(self, client):
        self.seed(client)
        client.call_ok("PutFile", path="/d/secret", content=b"s", owner=O(OWNER_A), permissions=0xE00)
        other = Client(client.service, caller=OWNER_B)
        response = other.call(
            "CopyDirectory",
            source_path="/d",
            destination_path="/copy",
            owner=O(OWNER_B),
            permissions=0xFFF,
        )
        assert response.status.code == StatusCode.PERMISSION_DENIED
        assert "secret" in response.status.message

    def test_copy_file_stamps_callers_ownership(self, client):
        self.seed(client)
        other = Client(client.service, caller=OWNER_B)
        other.call_ok(
            "CopyFile",
            source_path="/d/f",
            destination_path="/mine",
            owner=O(OWNER_B),
            permissions=0xE04,
        )
        node = client.service.fs.lookup_file(parse_path("/mine"))
        assert node.attrs.owner == OWNER_B
        assert node.attrs.permissions == 0xE04

    def test_sticky_delete_via_api(self, client):
        client.call_ok("CreateDirectory", path="/shared", owner=O(OWNER_A), permissions=0x1FFF)
        client.call_ok(
            "PutFile", path="/shared/a", content=b"", owner=O(OWNER_A), permissions=0xFFF
        )
        other = Client(client.service, caller=OWNER_B)
        response = other.call("DeleteFile", path="/shared/a", owner=O(OWNER_B))
        assert response.status.code == StatusCode.PERMISSION_DENIED
        assert "sticky" in response.status.message

    def test_delete_directory_recursive_flag(self, client):
        self.seed(client)
        response = client.call("DeleteDirectory", path="/d", owner=O(OWNER_A))
        assert response.status.code == StatusCode.DIRECTORY_NOT_EMPTY
        client.call_ok("DeleteDirectory", path="/d", owner=O(OWNER_A), recursive=True)
        assert not client.service.fs.exists(parse_path("/d"))


class TestZipMethods:
    def test_zip_and_unzip_round_trip(self, client):
        client.call_ok("CreateDirectory", path="/src", owner=O(OWNER_A), permissions=0xFFF)
        client.call_ok("PutFile", path="/src/a", content=b"1", owner=O(OWNER_A), permissions=0xFFF)
        client.call_ok("CreateDirectory", path="/src/sub", owner=O(OWNER_A), permissions=0xFFF)
        client.call_ok(
            "PutFile", path="/src/sub/b", content=b"22", owner=O(OWNER_A), permissions=0xFFF
        )
        zipped = client.call_ok("GetDirectoryZip", path="/src", owner=O(OWNER_A))
        assert zipped.omitted_entries == 0
        created = client.call_ok(
            "CreateDirectoryUnzip",
            path="/dst",
            zip_data=zipped.zip_data,
            owner=O(OWNER_A),
            permissions=0xFFF,
        )
        assert created.created_nodes == 4
        assert client.call_ok("GetFile", path="/dst/sub/b", owner=O(OWNER_A)).content == b"22"

    def test_zip_in_chunks_matches_whole(self, client):
        client.call_ok("CreateDirectory", path="/src", owner=O(OWNER_A), permissions=0xFFF)
        client.call_ok(
            "PutFile",
            path="/src/big",
            content=bytes(random.Random(3).randbytes(200_000)),
            owner=O(OWNER_A),
            permissions=0xFFF,
        )
        whole = client.call_ok("GetDirectoryZip", path="/src", owner=O(OWNER_A))
        stream = list(
            client.handlers["GetDirectoryZipInChunks"](
                wire.GetDirectoryZipInChunksRequest(
                    session_token=client.token, path="/src", owner=O(OWNER_A), chunk_size=4096
                )
            )
        )
        data = b"".join(m.chunk.data for m in stream[1:])
        assert data == whole.zip_data
        assert stream[0].header.total_size == len(whole.zip_data)

    def test_unzip_in_chunks(self, client):
        client.call_ok("CreateDirectory", path="/src", owner=O(OWNER_A), permissions=0xFFF)
        client.call_ok("PutFile", path="/src/x", content=b"y", owner=O(OWNER_A), permissions=0xFFF)
        zipped = client.call_ok("GetDirectoryZip", path="/src", owner=O(OWNER_A))
        response = upload_chunks(
            client, "/dst", bytes(zipped.zip_data), 1024, kind="CreateDirectoryUnzipInChunks"
        )
        assert response.status.code == 0
        assert response.created_nodes == 2
        assert client.call_ok("GetFile", path="/dst/x", owner=O(OWNER_A)).content == b"y"


class TestPermissionAndAttributeMethods:
    def test_set_permissions_owner_only(self, client):
        client.call_ok("PutFile", path="/f", content=b"", owner=O(OWNER_A), permissions=0x1FFF)
        other = Client(client.service, caller=OWNER_B)
        response = other.call("SetPermissions", path="/f", owner=O(OWNER_B), permissions=0)
        assert response.status.code == StatusCode.PERMISSION_DENIED
        client.call_ok("SetPermissions", path="/f", owner=O(OWNER_A), permissions=0xD20)
        assert client.call_ok("GetPermissions", path="/f", owner=O(OWNER_A)).permissions == 0xD20

    def test_permissions_mask_validated(self, client):
        client.call_ok("PutFile", path="/f", content=b"", owner=O(OWNER_A), permissions=0xFFF)
        response = client.call("SetPermissions", path="/f", owner=O(OWNER_A), permissions=0x2000)
        assert response.status.code == StatusCode.INVALID_ARGUMENT

    def test_update_and_get_attributes(self, client):
        client.call_ok("PutFile", path="/f", content=b"", owner=O(OWNER_A), permissions=0xFFF)
        response = client.call_ok(
            "UpdateAttributes",
            path="/f",
            owner=O(OWNER_A),
            updates=[
                wire.AttributeUpdate(name="Author", value="bob"),
                wire.AttributeUpdate(name="tag", value="x"),
            ],
        )
        assert [(a.name, a.value) for a in response.attributes] == [("author", "bob"), ("tag", "x")]
        removed = client.call_ok(
            "UpdateAttributes",
            path="/f",
            owner=O(OWNER_A),
            updates=[wire.AttributeUpdate(name="TAG", remove=True)],
        )
        assert [(a.name, a.value) for a in removed.attributes] == [("author", "bob")]
        got = client.call_ok("GetAttributes", path="/f", owner=O(OWNER_A))
        assert [(a.name, a.value) for a in got.attributes] == [("author", "bob")]

    def test_update_attributes_owner_only(self, client):
        client.call_ok("PutFile", path="/f", content=b"", owner=O(OWNER_A), permissions=0x1FFF)
        other = Client(client.service, caller=OWNER_B)
        response = other.call(
            "UpdateAttributes",
            path="/f",
            owner=O(OWNER_B),
            updates=[wire.AttributeUpdate(name="a", value="b")],
        )
        assert response.status.code == StatusCode.PERMISSION_DENIED
