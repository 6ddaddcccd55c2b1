"""On-disk result cache: one JSON file per command fingerprint, written
atomically (temp file then rename).  Corrupted files are quarantined with a
warning and treated as misses; a schema version bump invalidates everything.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)


def fingerprint(config: dict) -> str:
    """sha256 of the canonical JSON serialization of the run configuration."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _path(cache_dir: str, fp: str) -> str:
    return os.path.join(cache_dir, f"{fp}.json")


def store(cache_dir: str, config: dict, payload) -> str:
    """Write the payload under the config's fingerprint; returns the path.
    The payload must be JSON-serializable (the CLI stores table rows as
    lists of strings)."""
    os.makedirs(cache_dir, exist_ok=True)
    fp = fingerprint(config)
    entry = {
        "schema_version": SCHEMA_VERSION,
        "fingerprint": fp,
        "payload": payload,
        "created": time.time(),
    }
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(entry, fh)
        os.replace(tmp, _path(cache_dir, fp))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return _path(cache_dir, fp)


def load(cache_dir: str, config: dict):
    """Return the cached payload for this config, or None on miss.  A file
    that fails to parse or violates its invariants is renamed aside."""
    fp = fingerprint(config)
    path = _path(cache_dir, fp)
    if not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            entry = json.load(fh)
        if not isinstance(entry, dict):
            raise ValueError("cache entry is not an object")
        if entry.get("fingerprint") != fp:
            raise ValueError("fingerprint mismatch")
        payload = entry["payload"]
        version = entry["schema_version"]
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        quarantine = path + ".corrupt"
        os.replace(path, quarantine)
        log.warning("quarantined corrupt cache file %s (%s)", quarantine, exc)
        return None
    if version != SCHEMA_VERSION:
        return None
    return payload


def cache_roundtrip(cache_dir: str, config: dict, payload):
    """Store then reload; returns the reloaded payload (must equal the
    stored one)."""
    store(cache_dir, config, payload)
    return load(cache_dir, config)
