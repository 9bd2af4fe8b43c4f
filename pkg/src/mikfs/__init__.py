"""mikfs: an RPC-accessible virtual filesystem with split-ownership permissions."""

__version__ = "0.1.0"

API_VERSION = 1

from .errors import MikfsError, StatusCode  # noqa: E402

__all__ = ["API_VERSION", "MikfsError", "StatusCode", "__version__"]
