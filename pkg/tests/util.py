"""Shared helpers and independent oracles used across the test suite."""

from __future__ import annotations

import queue
import random

from mikfs import auth, wire
from mikfs.vfs import (
    DirectoryNode,
    FileNode,
    Filesystem,
    Membership,
    MutabilityMode,
    Ownership,
    parse_path,
)

HOST_KEY = b"\x07\x07"
OTHER_HOST = b"\x09\x09"
USER_A = b"\x02" * 4
USER_B = b"\x0b" * 4

OWNER_A = Ownership(HOST_KEY, USER_A)
OWNER_B = Ownership(HOST_KEY, USER_B)


def membership_oracle(caller: Ownership, node: Ownership) -> Membership:
    """Literal transcription of the membership table, kept independent of
    the production implementation on purpose."""

    def matches(x: bytes, y: bytes) -> bool:
        # either side zero-length is a wildcard; otherwise equal non-zero
        # length and exact byte-for-byte equality
        if len(x) == 0 or len(y) == 0:
            return True
        if len(x) != len(y):
            return False
        return all(a == b for a, b in zip(x, y))

    host = matches(caller.host_group, node.host_group)
    user = matches(caller.user_group, node.user_group)
    if host and user:
        return Membership.OWNER
    if (not host) and user:
        return Membership.USER_GROUP
    if host and (not user):
        return Membership.HOST_GROUP
    return Membership.OTHER


def make_fs(clock=None) -> Filesystem:
    if clock is None:
        counter = iter(range(1_000_000_000, 2_000_000_000))
        clock = lambda: next(counter) * 1000  # noqa: E731
    return Filesystem(HOST_KEY, clock=clock)


def put(fs: Filesystem, path: str, content: bytes = b"", owner=OWNER_A, mask=0x1FFF):
    return fs.create_file(parse_path(path), content, owner, mask)


def mkdir(fs: Filesystem, path: str, owner=OWNER_A, mask=0x1FFF):
    return fs.create_directory(parse_path(path), owner, mask)


def random_name(rng: random.Random, max_len: int = 12) -> str:
    alphabet = "abcdefghijklmnopqrstuvwxyz0123456789 _-.é世界"
    while True:
        name = "".join(
            rng.choice(alphabet) for _ in range(rng.randint(1, max_len))
        ).strip()
        # avoid names that strip to nothing or collide with special segments
        if name and name not in (".", ".."):
            return name


def random_tree(
    fs: Filesystem,
    rng: random.Random,
    base: str,
    *,
    max_nodes: int = 50,
    max_depth: int = 5,
    owner=OWNER_A,
) -> dict[str, bytes | None]:
    """Populate a random subtree under *base*; returns path -> content map
    (None for directories)."""
    mkdir(fs, base)
    created: dict[str, bytes | None] = {}
    dirs = [base]
    for _ in range(rng.randint(1, max_nodes)):
        parent = rng.choice(dirs)
        depth = parent.count("/")
        name = random_name(rng)
        path = f"{parent}/{name}"
        if path in created:
            continue
        if depth < max_depth and rng.random() < 0.3:
            mkdir(fs, path, owner=owner)
            created[path] = None
            dirs.append(path)
        else:
            content = rng.randbytes(rng.randint(0, 2048))
            put(fs, path, content, owner=owner)
            created[path] = content
    return created


def snapshot_names_and_contents(fs: Filesystem, base: str) -> dict[str, bytes | None]:
    """Map of relative path -> content (None for dirs) under *base*."""
    from mikfs.vfs import walk

    node = fs.lookup(parse_path(base))
    result: dict[str, bytes | None] = {}
    for path, sub in walk(node):
        if not path:
            continue
        rel = "/".join(path)
        result[rel] = sub.content if isinstance(sub, FileNode) else None
    assert isinstance(node, (FileNode, DirectoryNode))
    return result


# ---------------------------------------------------------------------------
# In-process service driving
# ---------------------------------------------------------------------------

WATCHWORD = "mellon"


def make_service(mode=MutabilityMode.READ_WRITE, scheme=None, host_group=HOST_KEY, clock=None):
    from mikfs.server.service import MikfsService

    if scheme is None:
        scheme = auth.DurinConfig(WATCHWORD)
    kwargs = {}
    if clock is not None:
        kwargs["clock"] = clock
    return MikfsService(host_group=host_group, mode=mode, auth_scheme=scheme, **kwargs)


def drive_auth(handlers, *proof_builders):
    """Run one Authenticate exchange in-process.

    Each proof builder maps the latest AuthResponse to the next
    AuthRequest; returns the list of responses received.
    """
    requests: queue.Queue = queue.Queue()

    def request_iterator():
        while True:
            item = requests.get()
            if item is None:
                return
            yield item

    requests.put(wire.AuthRequest(hello=wire.AuthHello(client_name="tests")))
    responses = handlers["Authenticate"](request_iterator(), None)
    received = [next(responses)]
    for build in proof_builders:
        requests.put(build(received[-1]))
        received.append(next(responses))
    requests.put(None)
    for leftover in responses:
        received.append(leftover)
    return received


def durin_token(handlers, watchword=WATCHWORD) -> bytes:
    responses = drive_auth(
        handlers, lambda r: wire.AuthRequest(durin=wire.AuthDurinProof(watchword=watchword))
    )
    grant = responses[-1]
    assert grant.status.code == 0, grant.status
    return grant.grant.session_token


class Client:
    """Thin convenience wrapper over the in-process handler table."""

    def __init__(self, service, token=None, caller: Ownership | None = None):
        self.service = service
        self.handlers = service.handlers()
        self.token = durin_token(self.handlers) if token is None else token
        self.caller = caller if caller is not None else OWNER_A

    def call(self, name: str, **fields):
        spec = next(m for m in _mikfs_table() if m.name == name)
        request = spec.request(session_token=self.token, **fields)
        return self.handlers[name](request)

    def call_ok(self, name: str, **fields):
        response = self.call(name, **fields)
        assert response.status.code == 0, f"{name}: {response.status}"
        return response

    def owned(self, owner: Ownership | None = None):
        return wire.encode_ownership(owner if owner is not None else self.caller)


def _mikfs_table():
    from mikfs.wire.methods import MIKFS_METHODS

    return MIKFS_METHODS
