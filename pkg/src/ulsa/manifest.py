"""Run manifests: every reported number traceable to config + input bytes.

Manifests are deterministic on purpose — no timestamps, no hostnames, keys
sorted — so two runs with the same seed and inputs write identical files.
"""

from __future__ import annotations

import hashlib
import json


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def config_digest(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_manifest(
    command: str,
    seed: int,
    config: dict,
    inputs: dict[str, str],
    metrics: dict | None = None,
    notes: list[str] | None = None,
) -> dict:
    """``inputs`` maps a logical name to a file path; values are digested."""
    return {
        "command": command,
        "seed": seed,
        "config": config,
        "config_sha256": config_digest(config),
        "inputs": {name: file_digest(path) for name, path in sorted(inputs.items())},
        "metrics": metrics or {},
        "notes": list(notes or []),
    }


def write_manifest(path, manifest: dict) -> None:
    payload = json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload + "\n")
