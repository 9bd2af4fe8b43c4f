"""Method numbering and streaming-pattern assignments for both services.

The numbers are the published API numbering and are frozen; the tables
here must agree with the service definitions in the ``.proto`` files
(cross-checked by tests).  Client stubs and server handler registrations
are both generated from these tables, so a listed method is by
construction an implemented one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import pool  # noqa: F401  (descriptor pool, used by the cross-check test)
from . import (
    AddPathRequest,
    AddPathResponse,
    AddPathsRequest,
    AddPathsResponse,
    AddSiteRequest,
    AddSiteResponse,
    AddSitesRequest,
    AddSitesResponse,
    AuthRequest,
    AuthResponse,
    ChangeEventResponse,
    ChunkedReadResponse,
    ChunkedWriteRequest,
    ChunkedWriteResponse,
    CopyRequest,
    CopyResponse,
    CreateDirectoryRequest,
    CreateDirectoryResponse,
    CreateDirectoryUnzipRequest,
    CreateDirectoryUnzipResponse,
    DeleteDirectoryRequest,
    DeleteDirectoryResponse,
    DeleteFileRequest,
    DeleteFileResponse,
    FileSystemChangeSubscribeRequest,
    GetApiInfoRequest,
    GetApiInfoResponse,
    GetAttributesRequest,
    GetAttributesResponse,
    GetDirectoryZipInChunksRequest,
    GetDirectoryZipRequest,
    GetDirectoryZipResponse,
    GetFileInChunksRequest,
    GetFileRequest,
    GetFileResponse,
    GetHostWriteHandleRequest,
    GetHostWriteHandleResponse,
    GetPathRequest,
    GetPathResponse,
    GetPathsForAllSitesRequest,
    GetPathsForAllSitesResponse,
    GetPathsForSiteRequest,
    GetPathsForSiteResponse,
    GetPermissionsRequest,
    GetPermissionsResponse,
    GetSitesRequest,
    GetSitesResponse,
    LogoutRequest,
    LogoutResponse,
    MoveRequest,
    MoveResponse,
    PutFileRequest,
    PutFileResponse,
    ReadDirectoryContentsRequest,
    ReadDirectoryContentsResponse,
    RemoveAllSitesRequest,
    RemoveAllSitesResponse,
    RemovePathRequest,
    RemovePathResponse,
    RemovePathsRequest,
    RemovePathsResponse,
    RemoveSiteRequest,
    RemoveSiteResponse,
    RemoveSitesRequest,
    RemoveSitesResponse,
    SearchEventResponse,
    SearchRequest,
    SearchResponse,
    SetPermissionsRequest,
    SetPermissionsResponse,
    SiteEventResponse,
    SitesSubscribeRequest,
    UpdateAttributesRequest,
    UpdateAttributesResponse,
)

MIKFS_SERVICE = "mikfs.v1.MikadoFilesystem"
IMPORTEXPORT_SERVICE = "mikfs.importexport.v1.ImportExport"

DEFAULT_MIKFS_PORT = 9959
DEFAULT_IMPORTEXPORT_PORT = 9961

MAX_CHUNK_BYTES = 1024 * 1024
DEFAULT_CHUNK_BYTES = 64 * 1024


class Pattern(Enum):
    UNARY = "unary"
    SERVER_STREAM = "server-stream"
    CLIENT_STREAM = "client-stream"
    BIDI = "bidi"


@dataclass(frozen=True)
class MethodSpec:
    number: int
    name: str
    pattern: Pattern
    request: type
    response: type


MIKFS_METHODS: tuple[MethodSpec, ...] = (
    MethodSpec(0, "GetApiInfo", Pattern.UNARY, GetApiInfoRequest, GetApiInfoResponse),
    MethodSpec(1, "Authenticate", Pattern.BIDI, AuthRequest, AuthResponse),
    MethodSpec(2, "Logout", Pattern.UNARY, LogoutRequest, LogoutResponse),
    MethodSpec(
        3, "GetHostWriteHandle", Pattern.UNARY, GetHostWriteHandleRequest, GetHostWriteHandleResponse
    ),
    MethodSpec(4, "GetFile", Pattern.UNARY, GetFileRequest, GetFileResponse),
    MethodSpec(
        5, "GetFileInChunks", Pattern.SERVER_STREAM, GetFileInChunksRequest, ChunkedReadResponse
    ),
    MethodSpec(6, "PutFile", Pattern.UNARY, PutFileRequest, PutFileResponse),
    MethodSpec(
        7, "PutFileInChunks", Pattern.CLIENT_STREAM, ChunkedWriteRequest, ChunkedWriteResponse
    ),
    MethodSpec(8, "CreateDirectory", Pattern.UNARY, CreateDirectoryRequest, CreateDirectoryResponse),
    MethodSpec(
        9,
        "ReadDirectoryContents",
        Pattern.UNARY,
        ReadDirectoryContentsRequest,
        ReadDirectoryContentsResponse,
    ),
    MethodSpec(10, "MoveFile", Pattern.UNARY, MoveRequest, MoveResponse),
    MethodSpec(11, "CopyFile", Pattern.UNARY, CopyRequest, CopyResponse),
    MethodSpec(12, "MoveDirectory", Pattern.UNARY, MoveRequest, MoveResponse),
    MethodSpec(13, "CopyDirectory", Pattern.UNARY, CopyRequest, CopyResponse),
    MethodSpec(14, "DeleteFile", Pattern.UNARY, DeleteFileRequest, DeleteFileResponse),
    MethodSpec(15, "DeleteDirectory", Pattern.UNARY, DeleteDirectoryRequest, DeleteDirectoryResponse),
    MethodSpec(16, "GetDirectoryZip", Pattern.UNARY, GetDirectoryZipRequest, GetDirectoryZipResponse),
    MethodSpec(
        17,
        "GetDirectoryZipInChunks",
        Pattern.SERVER_STREAM,
        GetDirectoryZipInChunksRequest,
        ChunkedReadResponse,
    ),
    MethodSpec(
        18,
        "CreateDirectoryUnzip",
        Pattern.UNARY,
        CreateDirectoryUnzipRequest,
        CreateDirectoryUnzipResponse,
    ),
    MethodSpec(
        19,
        "CreateDirectoryUnzipInChunks",
        Pattern.CLIENT_STREAM,
        ChunkedWriteRequest,
        ChunkedWriteResponse,
    ),
    MethodSpec(20, "SetPermissions", Pattern.UNARY, SetPermissionsRequest, SetPermissionsResponse),
    MethodSpec(21, "GetPermissions", Pattern.UNARY, GetPermissionsRequest, GetPermissionsResponse),
    MethodSpec(
        22, "UpdateAttributes", Pattern.UNARY, UpdateAttributesRequest, UpdateAttributesResponse
    ),
    MethodSpec(23, "GetAttributes", Pattern.UNARY, GetAttributesRequest, GetAttributesResponse),
    MethodSpec(
        24,
        "FileSystemChangeSubscribe",
        Pattern.SERVER_STREAM,
        FileSystemChangeSubscribeRequest,
        ChangeEventResponse,
    ),
    MethodSpec(25, "Search", Pattern.UNARY, SearchRequest, SearchResponse),
    MethodSpec(26, "SearchSubscribe", Pattern.SERVER_STREAM, SearchRequest, SearchEventResponse),
)

IMPORTEXPORT_METHODS: tuple[MethodSpec, ...] = (
    MethodSpec(0, "AddSite", Pattern.UNARY, AddSiteRequest, AddSiteResponse),
    MethodSpec(1, "AddSites", Pattern.UNARY, AddSitesRequest, AddSitesResponse),
    MethodSpec(2, "AddPath", Pattern.UNARY, AddPathRequest, AddPathResponse),
    MethodSpec(3, "AddPaths", Pattern.UNARY, AddPathsRequest, AddPathsResponse),
    MethodSpec(4, "GetSites", Pattern.UNARY, GetSitesRequest, GetSitesResponse),
    MethodSpec(5, "GetPath", Pattern.UNARY, GetPathRequest, GetPathResponse),
    MethodSpec(
        6, "GetPathsForSite", Pattern.UNARY, GetPathsForSiteRequest, GetPathsForSiteResponse
    ),
    MethodSpec(
        7,
        "GetPathsForAllSites",
        Pattern.UNARY,
        GetPathsForAllSitesRequest,
        GetPathsForAllSitesResponse,
    ),
    MethodSpec(8, "RemoveSite", Pattern.UNARY, RemoveSiteRequest, RemoveSiteResponse),
    MethodSpec(9, "RemoveSites", Pattern.UNARY, RemoveSitesRequest, RemoveSitesResponse),
    MethodSpec(10, "RemoveAllSites", Pattern.UNARY, RemoveAllSitesRequest, RemoveAllSitesResponse),
    MethodSpec(11, "RemovePath", Pattern.UNARY, RemovePathRequest, RemovePathResponse),
    MethodSpec(12, "RemovePaths", Pattern.UNARY, RemovePathsRequest, RemovePathsResponse),
    MethodSpec(
        13, "SitesSubscribe", Pattern.SERVER_STREAM, SitesSubscribeRequest, SiteEventResponse
    ),
)


def method_path(service: str, method: str) -> str:
    """The HTTP/2 path gRPC routes on, e.g. ``/mikfs.v1.MikadoFilesystem/GetFile``."""
    return f"/{service}/{method}"


def by_name(table: tuple[MethodSpec, ...]) -> dict[str, MethodSpec]:
    return {spec.name: spec for spec in table}


MIKFS_BY_NAME = by_name(MIKFS_METHODS)
IMPORTEXPORT_BY_NAME = by_name(IMPORTEXPORT_METHODS)

# Methods usable without a valid session token.
PUBLIC_METHODS = frozenset({"GetApiInfo", "Authenticate"})

# Methods that mutate the filesystem or hand out write capability,
# refused outright on a read-only instance.
MUTATING_METHODS = frozenset(
    {
        "GetHostWriteHandle",
        "PutFile",
        "PutFileInChunks",
        "CreateDirectory",
        "MoveFile",
        "CopyFile",
        "MoveDirectory",
        "CopyDirectory",
        "DeleteFile",
        "DeleteDirectory",
        "CreateDirectoryUnzip",
        "CreateDirectoryUnzipInChunks",
        "SetPermissions",
        "UpdateAttributes",
    }
)
