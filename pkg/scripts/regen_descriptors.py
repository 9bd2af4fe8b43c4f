#!/usr/bin/env python3
"""Recompile the wire descriptors after editing the .proto files.

Requires a protoc binary on PATH.  Field numbering in the .proto files
is frozen; this script only refreshes the compiled descriptor set that
the package loads at import time.
"""

import pathlib
import subprocess
import sys

WIRE_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "mikfs" / "wire"


def main() -> int:
    cmd = [
        "protoc",
        f"-I{WIRE_DIR}",
        "--include_imports",
        f"--descriptor_set_out={WIRE_DIR / 'descriptors.desc'}",
        str(WIRE_DIR / "mikfs.proto"),
        str(WIRE_DIR / "importexport.proto"),
    ]
    print(" ".join(cmd))
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(main())
