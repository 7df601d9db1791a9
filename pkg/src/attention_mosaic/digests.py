"""Content digests for arrays and files, used by run manifests."""

from __future__ import annotations

import hashlib

import numpy as np


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_array(kind: str, arr) -> str:
    """sha256 of an array's kind tag, dtype, shape and raw bytes."""
    a = np.ascontiguousarray(arr)
    h = hashlib.sha256()
    h.update(kind.encode())
    h.update(str(a.dtype).encode())
    h.update(repr(a.shape).encode())
    h.update(a.tobytes())
    return h.hexdigest()
