"""Small shared helpers: worker resolution, digests, canonical JSON."""

from __future__ import annotations

import hashlib
import json
import os

THREADS_ENV_VAR = "ENTROPY_FORGE_THREADS"


def resolve_workers(explicit: int | None = None) -> int:
    """Worker-pool size: explicit argument, then env var, then cpu count.

    Thread count affects wall time only; all parallel reductions in the
    toolkit merge exactly, so results never depend on this value.
    """
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def canonical_json_bytes(obj) -> bytes:
    """Deterministic JSON rendering (sorted keys, fixed separators)."""
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


def write_json(path, obj) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_json_bytes(obj))
