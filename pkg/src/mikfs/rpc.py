"""Generic gRPC plumbing shared by the filesystem and ImportExport services.

Handlers and client stubs are wired from the method tables in
``wire.methods``, so the registered surface always agrees with the
published numbering.  TLS is mandatory: there is no plaintext listener.
"""

from __future__ import annotations

from concurrent import futures
from typing import Callable, Iterable

import grpc

from .wire.methods import MethodSpec, Pattern, method_path

DEFAULT_MAX_WORKERS = 32


def _serialize(message) -> bytes:
    return message.SerializeToString()


def make_generic_handler(
    service_name: str, table: tuple[MethodSpec, ...], handlers: dict[str, Callable]
):
    rpc_handlers = {}
    for spec in table:
        fn = handlers[spec.name]
        kwargs = dict(
            request_deserializer=spec.request.FromString, response_serializer=_serialize
        )
        if spec.pattern is Pattern.UNARY:
            handler = grpc.unary_unary_rpc_method_handler(fn, **kwargs)
        elif spec.pattern is Pattern.SERVER_STREAM:
            handler = grpc.unary_stream_rpc_method_handler(fn, **kwargs)
        elif spec.pattern is Pattern.CLIENT_STREAM:
            handler = grpc.stream_unary_rpc_method_handler(fn, **kwargs)
        else:
            handler = grpc.stream_stream_rpc_method_handler(fn, **kwargs)
        rpc_handlers[spec.name] = handler
    return grpc.method_handlers_generic_handler(service_name, rpc_handlers)


def build_server(
    services: Iterable[tuple[str, tuple[MethodSpec, ...], dict[str, Callable]]],
    *,
    bind_host: str,
    port: int,
    certificate_chain: bytes,
    private_key: bytes,
    client_ca: bytes | None = None,
    max_workers: int = DEFAULT_MAX_WORKERS,
) -> tuple[grpc.Server, int]:
    """A TLS gRPC server for the given services; returns (server, bound port).

    Supplying ``client_ca`` turns on mutual TLS: clients must present a
    certificate signed by it.
    """
    server = grpc.server(futures.ThreadPoolExecutor(max_workers=max_workers))
    for service_name, table, handlers in services:
        server.add_generic_rpc_handlers(
            (make_generic_handler(service_name, table, handlers),)
        )
    credentials = grpc.ssl_server_credentials(
        [(private_key, certificate_chain)],
        root_certificates=client_ca,
        require_client_auth=client_ca is not None,
    )
    bound = server.add_secure_port(f"{bind_host}:{port}", credentials)
    if bound == 0:
        raise RuntimeError(f"could not bind {bind_host}:{port}")
    return server, bound


def open_channel(
    host: str,
    port: int,
    *,
    root_certificates: bytes,
    override_authority: str | None = None,
    client_certificate: bytes | None = None,
    client_key: bytes | None = None,
) -> grpc.Channel:
    credentials = grpc.ssl_channel_credentials(
        root_certificates=root_certificates,
        private_key=client_key,
        certificate_chain=client_certificate,
    )
    options = []
    if override_authority:
        options.append(("grpc.ssl_target_name_override", override_authority))
    return grpc.secure_channel(f"{host}:{port}", credentials, options=options)


class Stubs:
    """Callable stubs for one service, built from its method table.

    ``wire_tap``, when given, receives ``(method_name, raw_bytes)`` for
    every response payload before deserialization; tests use it to scan
    traffic for bytes that must never appear.
    """

    def __init__(self, channel: grpc.Channel, service_name: str, table, wire_tap=None):
        self._calls = {}
        self.table = table
        for spec in table:
            path = method_path(service_name, spec.name)
            deserializer = spec.response.FromString
            if wire_tap is not None:
                deserializer = _tapped(wire_tap, spec.name, spec.response)
            if spec.pattern is Pattern.UNARY:
                call = channel.unary_unary(
                    path, request_serializer=_serialize, response_deserializer=deserializer
                )
            elif spec.pattern is Pattern.SERVER_STREAM:
                call = channel.unary_stream(
                    path, request_serializer=_serialize, response_deserializer=deserializer
                )
            elif spec.pattern is Pattern.CLIENT_STREAM:
                call = channel.stream_unary(
                    path, request_serializer=_serialize, response_deserializer=deserializer
                )
            else:
                call = channel.stream_stream(
                    path, request_serializer=_serialize, response_deserializer=deserializer
                )
            self._calls[spec.name] = call

    def __getattr__(self, name: str):
        try:
            return self._calls[name]
        except KeyError:
            raise AttributeError(name) from None


def _tapped(wire_tap, method_name: str, response_cls):
    def deserialize(data: bytes):
        wire_tap(method_name, data)
        return response_cls.FromString(data)

    return deserialize
