"""Message classes for the wire contract.

The ``.proto`` files in this directory are the source of truth; the
checked-in ``descriptors.desc`` is their compiled FileDescriptorSet
(regenerate with ``scripts/regen_descriptors.py`` after editing).
Message classes are built from the descriptor pool at import time, so
no generated Python code needs to be kept in sync with the protobuf
runtime.
"""

from __future__ import annotations

from importlib import resources

from google.protobuf import descriptor_pb2, descriptor_pool, message_factory

from ..errors import MikfsError, StatusCode

_DESCRIPTOR_FILE = "descriptors.desc"

pool = descriptor_pool.DescriptorPool()

_raw = resources.files(__name__).joinpath(_DESCRIPTOR_FILE).read_bytes()
for _file in descriptor_pb2.FileDescriptorSet.FromString(_raw).file:
    pool.Add(_file)


def _message(full_name: str):
    return message_factory.GetMessageClass(pool.FindMessageTypeByName(full_name))


def _enum_values(full_name: str) -> dict[str, int]:
    descriptor = pool.FindEnumTypeByName(full_name)
    return {value.name: value.number for value in descriptor.values}


# -- mikfs.v1 ---------------------------------------------------------------

Status = _message("mikfs.v1.Status")
GroupOwner = _message("mikfs.v1.GroupOwner")
Ownership = _message("mikfs.v1.Ownership")
CustomAttribute = _message("mikfs.v1.CustomAttribute")
NodeAttributes = _message("mikfs.v1.NodeAttributes")
DirectoryEntry = _message("mikfs.v1.DirectoryEntry")

AuthHello = _message("mikfs.v1.AuthHello")
AuthDurinProof = _message("mikfs.v1.AuthDurinProof")
AuthUserPasswordProof = _message("mikfs.v1.AuthUserPasswordProof")
AuthRequest = _message("mikfs.v1.AuthRequest")
AuthChallenge = _message("mikfs.v1.AuthChallenge")
AuthGrant = _message("mikfs.v1.AuthGrant")
AuthResponse = _message("mikfs.v1.AuthResponse")

GetApiInfoRequest = _message("mikfs.v1.GetApiInfoRequest")
GetApiInfoResponse = _message("mikfs.v1.GetApiInfoResponse")
LogoutRequest = _message("mikfs.v1.LogoutRequest")
LogoutResponse = _message("mikfs.v1.LogoutResponse")
GetHostWriteHandleRequest = _message("mikfs.v1.GetHostWriteHandleRequest")
GetHostWriteHandleResponse = _message("mikfs.v1.GetHostWriteHandleResponse")

GetFileRequest = _message("mikfs.v1.GetFileRequest")
GetFileResponse = _message("mikfs.v1.GetFileResponse")
PutFileRequest = _message("mikfs.v1.PutFileRequest")
PutFileResponse = _message("mikfs.v1.PutFileResponse")

ChunkHeader = _message("mikfs.v1.ChunkHeader")
FileChunk = _message("mikfs.v1.FileChunk")
ChunkedReadResponse = _message("mikfs.v1.ChunkedReadResponse")
GetFileInChunksRequest = _message("mikfs.v1.GetFileInChunksRequest")
ChunkedWriteRequest = _message("mikfs.v1.ChunkedWriteRequest")
ChunkedWriteResponse = _message("mikfs.v1.ChunkedWriteResponse")
GetDirectoryZipInChunksRequest = _message("mikfs.v1.GetDirectoryZipInChunksRequest")

CreateDirectoryRequest = _message("mikfs.v1.CreateDirectoryRequest")
CreateDirectoryResponse = _message("mikfs.v1.CreateDirectoryResponse")
ReadDirectoryContentsRequest = _message("mikfs.v1.ReadDirectoryContentsRequest")
ReadDirectoryContentsResponse = _message("mikfs.v1.ReadDirectoryContentsResponse")

MoveRequest = _message("mikfs.v1.MoveRequest")
MoveResponse = _message("mikfs.v1.MoveResponse")
CopyRequest = _message("mikfs.v1.CopyRequest")
CopyResponse = _message("mikfs.v1.CopyResponse")
DeleteFileRequest = _message("mikfs.v1.DeleteFileRequest")
DeleteFileResponse = _message("mikfs.v1.DeleteFileResponse")
DeleteDirectoryRequest = _message("mikfs.v1.DeleteDirectoryRequest")
DeleteDirectoryResponse = _message("mikfs.v1.DeleteDirectoryResponse")

GetDirectoryZipRequest = _message("mikfs.v1.GetDirectoryZipRequest")
GetDirectoryZipResponse = _message("mikfs.v1.GetDirectoryZipResponse")
CreateDirectoryUnzipRequest = _message("mikfs.v1.CreateDirectoryUnzipRequest")
CreateDirectoryUnzipResponse = _message("mikfs.v1.CreateDirectoryUnzipResponse")

SetPermissionsRequest = _message("mikfs.v1.SetPermissionsRequest")
SetPermissionsResponse = _message("mikfs.v1.SetPermissionsResponse")
GetPermissionsRequest = _message("mikfs.v1.GetPermissionsRequest")
GetPermissionsResponse = _message("mikfs.v1.GetPermissionsResponse")
AttributeUpdate = _message("mikfs.v1.AttributeUpdate")
UpdateAttributesRequest = _message("mikfs.v1.UpdateAttributesRequest")
UpdateAttributesResponse = _message("mikfs.v1.UpdateAttributesResponse")
GetAttributesRequest = _message("mikfs.v1.GetAttributesRequest")
GetAttributesResponse = _message("mikfs.v1.GetAttributesResponse")

FileSystemChangeSubscribeRequest = _message("mikfs.v1.FileSystemChangeSubscribeRequest")
ChangeEvent = _message("mikfs.v1.ChangeEvent")
ChangeEventResponse = _message("mikfs.v1.ChangeEventResponse")

AttributePredicate = _message("mikfs.v1.AttributePredicate")
SearchRequest = _message("mikfs.v1.SearchRequest")
SearchResult = _message("mikfs.v1.SearchResult")
SearchResponse = _message("mikfs.v1.SearchResponse")
SearchEventResponse = _message("mikfs.v1.SearchEventResponse")

CHANGE_KIND = _enum_values("mikfs.v1.ChangeKind")
WIRE_STATUS_CODES = _enum_values("mikfs.v1.StatusCode")

# -- mikfs.importexport.v1 --------------------------------------------------

Site = _message("mikfs.importexport.v1.Site")
PathRecord = _message("mikfs.importexport.v1.PathRecord")
AddSiteRequest = _message("mikfs.importexport.v1.AddSiteRequest")
AddSiteResponse = _message("mikfs.importexport.v1.AddSiteResponse")
AddSitesRequest = _message("mikfs.importexport.v1.AddSitesRequest")
AddSitesResponse = _message("mikfs.importexport.v1.AddSitesResponse")
AddPathRequest = _message("mikfs.importexport.v1.AddPathRequest")
AddPathResponse = _message("mikfs.importexport.v1.AddPathResponse")
AddPathsRequest = _message("mikfs.importexport.v1.AddPathsRequest")
AddPathsResponse = _message("mikfs.importexport.v1.AddPathsResponse")
GetSitesRequest = _message("mikfs.importexport.v1.GetSitesRequest")
GetSitesResponse = _message("mikfs.importexport.v1.GetSitesResponse")
GetPathRequest = _message("mikfs.importexport.v1.GetPathRequest")
GetPathResponse = _message("mikfs.importexport.v1.GetPathResponse")
GetPathsForSiteRequest = _message("mikfs.importexport.v1.GetPathsForSiteRequest")
GetPathsForSiteResponse = _message("mikfs.importexport.v1.GetPathsForSiteResponse")
GetPathsForAllSitesRequest = _message("mikfs.importexport.v1.GetPathsForAllSitesRequest")
GetPathsForAllSitesResponse = _message("mikfs.importexport.v1.GetPathsForAllSitesResponse")
RemoveSiteRequest = _message("mikfs.importexport.v1.RemoveSiteRequest")
RemoveSiteResponse = _message("mikfs.importexport.v1.RemoveSiteResponse")
RemoveSitesRequest = _message("mikfs.importexport.v1.RemoveSitesRequest")
RemoveSitesResponse = _message("mikfs.importexport.v1.RemoveSitesResponse")
RemoveAllSitesRequest = _message("mikfs.importexport.v1.RemoveAllSitesRequest")
RemoveAllSitesResponse = _message("mikfs.importexport.v1.RemoveAllSitesResponse")
RemovePathRequest = _message("mikfs.importexport.v1.RemovePathRequest")
RemovePathResponse = _message("mikfs.importexport.v1.RemovePathResponse")
RemovePathsRequest = _message("mikfs.importexport.v1.RemovePathsRequest")
RemovePathsResponse = _message("mikfs.importexport.v1.RemovePathsResponse")
SitesSubscribeRequest = _message("mikfs.importexport.v1.SitesSubscribeRequest")
SiteEventResponse = _message("mikfs.importexport.v1.SiteEventResponse")

SITE_EVENT_KIND = _enum_values("mikfs.importexport.v1.SiteEventKind")


# -- status helpers ----------------------------------------------------------


def ok_status():
    return Status(code=WIRE_STATUS_CODES["OK"])


def error_status(error: MikfsError):
    return Status(code=int(error.code), message=error.message)


def raise_for_status(status) -> None:
    """Raise the MikfsError a non-OK response status describes."""
    if status.code != 0:
        raise MikfsError(StatusCode(status.code), status.message)


def encode_ownership(owner) -> "Ownership":
    return Ownership(
        host_group=GroupOwner(key=owner.host_group),
        user_group=GroupOwner(key=owner.user_group),
    )


def decode_ownership(message):
    from ..vfs import Ownership as VfsOwnership

    return VfsOwnership(
        host_group=message.host_group.key, user_group=message.user_group.key
    )
