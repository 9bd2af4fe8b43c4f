"""Challenge-response authentication and the session registry.

Two bootstrap schemes are supported, one active per server instance:

* ``durin`` — the server issues a random nonce, the client answers with
  the watchword; access is granted on an exact (constant-time) match.
* ``userpassword`` — the server issues a random nonce, the client
  answers with a username and ``HMAC-SHA-256(verifier, nonce)`` where
  ``verifier = SHA-256(salt || password)``.  The password itself never
  crosses the API; the server stores only (salt, verifier) pairs.

Denials for an unknown username and for a wrong proof are identical, so
the exchange cannot be used to enumerate accounts.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import MikfsError, StatusCode
from .vfs import MutabilityMode

SCHEME_DURIN = "durin"
SCHEME_USERPASSWORD = "userpassword"

SESSION_TOKEN_BYTES = 32
NONCE_BYTES = 32
DEFAULT_SESSION_TTL_NS = 24 * 3600 * 1_000_000_000  # 24h, sliding on use

# Stand-in verifier so unknown usernames cost the same work as real ones.
_DUMMY_VERIFIER = hashlib.sha256(b"\x00" * 32).digest()


# ---------------------------------------------------------------------------
# Scheme configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DurinConfig:
    watchword: str

    scheme_id = SCHEME_DURIN


@dataclass(frozen=True)
class UserEntry:
    salt: bytes
    verifier: bytes


@dataclass(frozen=True)
class UserPasswordConfig:
    users: Mapping[str, UserEntry]

    scheme_id = SCHEME_USERPASSWORD


AuthScheme = DurinConfig | UserPasswordConfig


def make_verifier(salt: bytes, password: str) -> bytes:
    return hashlib.sha256(salt + password.encode("utf-8")).digest()


def make_proof(verifier: bytes, nonce: bytes) -> bytes:
    return hmac.new(verifier, nonce, hashlib.sha256).digest()


def parse_users(text: str) -> UserPasswordConfig:
    """Parse ``username:salt-hex:verifier-hex`` lines; ``#`` starts a comment."""
    users: dict[str, UserEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(":")
        if len(parts) != 3 or not parts[0]:
            raise ValueError(f"users file line {lineno}: expected username:salt-hex:verifier-hex")
        username, salt_hex, verifier_hex = parts
        try:
            entry = UserEntry(bytes.fromhex(salt_hex), bytes.fromhex(verifier_hex))
        except ValueError:
            raise ValueError(f"users file line {lineno}: invalid hex") from None
        if username in users:
            raise ValueError(f"users file line {lineno}: duplicate user {username!r}")
        users[username] = entry
    return UserPasswordConfig(users)


def load_users_file(path: str) -> UserPasswordConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_users(fh.read())


def format_user_line(username: str, salt: bytes, password: str) -> str:
    """Render one users-file line; handy for provisioning scripts and tests."""
    if ":" in username or not username:
        raise ValueError("username must be non-empty and must not contain ':'")
    return f"{username}:{salt.hex()}:{make_verifier(salt, password).hex()}"


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------


@dataclass
class Session:
    token: bytes
    created_at: int
    expires_at: int
    scheme: str
    principal: str  # username, or "" for watchword sessions
    staged_bytes: int = 0  # chunked uploads in flight, capped per session
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionRegistry:
    """Live sessions keyed by token; validation slides the expiry forward."""

    def __init__(
        self,
        ttl_ns: int = DEFAULT_SESSION_TTL_NS,
        clock: Callable[[], int] = time.time_ns,
    ):
        self._ttl = ttl_ns
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[bytes, Session] = {}

    def grant(self, scheme: str, principal: str = "") -> Session:
        now = self._clock()
        with self._lock:
            self._prune(now)
            while True:
                token = secrets.token_bytes(SESSION_TOKEN_BYTES)
                if token not in self._sessions:
                    break
            session = Session(
                token=token,
                created_at=now,
                expires_at=now + self._ttl,
                scheme=scheme,
                principal=principal,
            )
            self._sessions[token] = session
            return session

    def validate(self, token: bytes) -> Session:
        now = self._clock()
        with self._lock:
            session = self._sessions.get(token)
            if session is None or session.expires_at <= now:
                self._sessions.pop(token, None)
                raise MikfsError(StatusCode.NOT_AUTHENTICATED, "no valid session for token")
            session.expires_at = now + self._ttl
            return session

    def logout(self, token: bytes) -> None:
        with self._lock:
            if self._sessions.pop(token, None) is None:
                raise MikfsError(StatusCode.NOT_AUTHENTICATED, "no valid session for token")

    def _prune(self, now: int) -> None:
        dead = [t for t, s in self._sessions.items() if s.expires_at <= now]
        for t in dead:
            del self._sessions[t]

    def live_count(self) -> int:
        with self._lock:
            return len(self._sessions)


# ---------------------------------------------------------------------------
# The exchange state machine
# ---------------------------------------------------------------------------


class AuthExchange:
    """One client's challenge-response exchange.

    Monotone step progression: new -> challenged -> granted | denied.
    Terminal states are absorbing; responding again raises.
    """

    def __init__(self, scheme: AuthScheme, registry: SessionRegistry):
        self._scheme = scheme
        self._registry = registry
        self.step = 0
        self.nonce: bytes | None = None
        self.outcome: str = "pending"  # pending | granted | denied

    def begin(self) -> tuple[str, bytes]:
        """Announce the configured scheme and a fresh 32-byte nonce."""
        if self.step != 0:
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "auth exchange already started")
        self.step = 1
        self.nonce = secrets.token_bytes(NONCE_BYTES)
        return self._scheme.scheme_id, self.nonce

    def _pre_respond(self, expected_scheme: str) -> None:
        if self.outcome != "pending" or self.step != 1:
            raise MikfsError(StatusCode.INVALID_ARGUMENT, "auth exchange closed")
        self.step = 2
        if self._scheme.scheme_id != expected_scheme:
            self.outcome = "denied"
            raise MikfsError(
                StatusCode.SCHEME_UNSUPPORTED,
                f"server expects the {self._scheme.scheme_id} scheme",
            )

    def _deny(self) -> MikfsError:
        self.outcome = "denied"
        return MikfsError(StatusCode.AUTH_FAILED, "authentication failed")

    def respond_durin(self, watchword: str) -> Session:
        self._pre_respond(SCHEME_DURIN)
        assert isinstance(self._scheme, DurinConfig)
        if not hmac.compare_digest(
            watchword.encode("utf-8"), self._scheme.watchword.encode("utf-8")
        ):
            raise self._deny()
        self.outcome = "granted"
        return self._registry.grant(SCHEME_DURIN)

    def respond_userpassword(self, username: str, proof: bytes) -> Session:
        self._pre_respond(SCHEME_USERPASSWORD)
        assert isinstance(self._scheme, UserPasswordConfig)
        assert self.nonce is not None
        entry = self._scheme.users.get(username)
        verifier = entry.verifier if entry is not None else _DUMMY_VERIFIER
        expected = make_proof(verifier, self.nonce)
        ok = hmac.compare_digest(proof, expected) and entry is not None
        if not ok:
            raise self._deny()
        self.outcome = "granted"
        return self._registry.grant(SCHEME_USERPASSWORD, principal=username)


def issue_host_write_handle(
    registry: SessionRegistry, token: bytes, host_group: bytes, mode: MutabilityMode
) -> bytes:
    """Hand the session the server's host group key for composing ownerships.

    Idempotent; nothing is recorded per issuance.  Refused outright on a
    read-only filesystem, where no write capability exists to hand out.
    """
    registry.validate(token)
    if mode is MutabilityMode.READ_ONLY:
        raise MikfsError(StatusCode.READ_ONLY_FILESYSTEM, "filesystem is read-only")
    return host_group
