"""Content-addressed JSON artifact cache for expensive computations.

Artifacts (Groebner bases, mostly) are stored under a directory chosen by
$OPIDENT_CACHE (default ~/.cache/opident), keyed by a sha256 of the inputs
that determine the result: computation kind, monomial order, variable
precedence, tie-break convention, and the canonicalized generator set.
Timing metadata inside an artifact never enters the key, so a cached result
is served byte-identically while remaining honest about when it was made.

Corrupt or unreadable entries are discarded and recomputed, never trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path


def cache_dir():
    root = os.environ.get("OPIDENT_CACHE")
    if root:
        return Path(root)
    return Path.home() / ".cache" / "opident"


def artifact_key(kind, payload):
    """sha256 over the canonical JSON of (kind, payload).

    Everything that can change the artifact must be in `payload`; anything
    that cannot (timings, hostnames) must stay out.
    """
    blob = json.dumps({"kind": kind, "payload": payload}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_load(key):
    """The stored artifact for `key`, or None (missing or corrupt).

    A corrupt entry is deleted so the recomputed artifact can replace it.
    """
    path = cache_dir() / f"{key}.json"
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None
    except (json.JSONDecodeError, OSError, UnicodeDecodeError) as exc:
        print(f"warning: discarding corrupt cache entry {path.name}: {exc}", file=sys.stderr)
        try:
            path.unlink()
        except OSError:
            pass
        return None


def cache_store(key, artifact):
    """Persist `artifact` under `key` atomically; returns the path."""
    root = cache_dir()
    root.mkdir(parents=True, exist_ok=True)
    path = root / f"{key}.json"
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(artifact, fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def gb_key(ring, generators, tie_break="index"):
    """Cache key for a reduced-basis computation: order kind, variable
    precedence, tie-break, and the sorted canonical generator texts."""
    return artifact_key(
        "groebner",
        {
            "order": ring.order.kind,
            "variables": list(ring.variables),
            "tie_break": tie_break,
            "generators": sorted(g.text() for g in generators),
        },
    )
