"""
## Provenance, manifest, and environment stamp for experiment runs.

Why: a run directory is only useful later if it says exactly what produced it and lets
every artifact be checked for tampering or truncation.

Process:
    Called by the runner after all artifacts are written.
    Outputs:
        - meta/manifest.json     relpath, bytes, sha256 per artifact
        - meta/provenance.json   argv, resolved-config sha256, python/platform, package versions
    validate_provenance_file cross-checks every recorded sha256.

*Tested by: tests/config/test_config_runner.py*
"""

from __future__ import annotations

import hashlib
import json
import platform
import sys
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from datetime import UTC, datetime
from importlib import metadata
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

TRACKED_PACKAGES = ("gpswf-core", "numpy", "scipy", "pydantic", "PyYAML")


@dataclass(frozen=True)
class ManifestEntry:
    relpath: str
    bytes: int
    sha256: str


class ProvenanceModel(BaseModel):
    """
    Schema for provenance.json (required keys only).
    Integrity checks live in validate_provenance_file().
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: str = Field(default="v1")

    created_utc: str
    cli: dict[str, Any]
    config: dict[str, Any]
    env: dict[str, Any]
    rng: dict[str, Any]
    manifest: dict[str, Any]


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1024 * 1024), b""):
            h.update(chunk)
    return h.hexdigest()


def _package_versions() -> dict[str, str | None]:
    """Installed distribution versions; None when a package is not installed as such."""
    out: dict[str, str | None] = {}
    for name in TRACKED_PACKAGES:
        try:
            out[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            out[name] = None
    return out


def _iter_manifest_files(run_dir: Path) -> Iterable[Path]:
    """config.resolved.yaml, logs/metrics.jsonl and artifacts/**/* (sorted)."""
    for p in (run_dir / "config.resolved.yaml", run_dir / "logs" / "metrics.jsonl"):
        if p.is_file():
            yield p
    artifacts = run_dir / "artifacts"
    if artifacts.exists():
        yield from sorted(p for p in artifacts.rglob("*") if p.is_file())


def write_provenance_bundle(*, run_dir: Path, seed: int, argv: Sequence[str]) -> Path:
    """
    Writes meta/manifest.json and meta/provenance.json.

    Returns: path to provenance.json
    Raises: RuntimeError if config.resolved.yaml has not been written yet.
    """
    run_dir = run_dir.resolve()
    meta_dir = run_dir / "meta"
    meta_dir.mkdir(parents=True, exist_ok=True)

    resolved_cfg = run_dir / "config.resolved.yaml"
    if not resolved_cfg.is_file():
        raise RuntimeError("Missing config.resolved.yaml. runner must write it before provenance.")

    # --- manifest ---
    entries = [
        ManifestEntry(
            relpath=p.relative_to(run_dir).as_posix(),
            bytes=p.stat().st_size,
            sha256=_sha256_file(p),
        )
        for p in _iter_manifest_files(run_dir)
    ]
    manifest_path = meta_dir / "manifest.json"
    manifest_obj = {
        "run_dir": str(run_dir),
        "generated_utc": datetime.now(tz=UTC).isoformat(),
        "entries": [asdict(e) for e in entries],
    }
    manifest_path.write_text(
        json.dumps(manifest_obj, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    # --- provenance stamp ---
    prov = {
        "schema_version": "v1",
        "created_utc": datetime.now(tz=UTC).isoformat(),
        "cli": {
            "argv": list(argv),
            "cwd": str(Path.cwd().resolve()),
            "recommended": f"{Path(sys.executable).resolve()} -m gpswf_core.cli "
            + " ".join(str(a) for a in list(argv)[1:]),
        },
        "config": {
            "resolved_path": str(resolved_cfg),
            "resolved_sha256": _sha256_file(resolved_cfg),
        },
        "env": {
            "python": sys.version.split()[0],
            "python_executable": str(Path(sys.executable).resolve()),
            "platform": platform.platform(),
            "packages": _package_versions(),
        },
        "rng": {"seed": int(seed), "generator": "splitmix64+box-muller"},
        "manifest": {
            "path": str(manifest_path),
            "sha256": _sha256_file(manifest_path),
        },
    }

    prov_path = meta_dir / "provenance.json"
    validated = ProvenanceModel.model_validate(prov)  # validated before writing
    prov_path.write_text(
        json.dumps(validated.model_dump(mode="json"), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return prov_path


def validate_provenance_file(path: Path) -> dict[str, Any]:
    """
    Checks:
      - required fields exist + non-empty
      - referenced files exist
      - sha256 fields match the referenced files, including every manifest entry

    Returns parsed json dict on success, raises AssertionError on failure.
    """
    path = path.resolve()
    assert path.is_file(), f"Missing provenance file: {path}"
    data = ProvenanceModel.model_validate_json(path.read_text(encoding="utf-8")).model_dump(
        mode="json"
    )

    def req_str(d: dict[str, Any], key: str) -> str:
        assert key in d, f"Missing key: {key}"
        v = d[key]
        assert isinstance(v, str) and v.strip(), f"Expected non-empty string at {key}"
        return v

    def req_dict(d: dict[str, Any], key: str) -> dict[str, Any]:
        assert key in d and isinstance(d[key], dict), f"Expected dict at {key}"
        return d[key]

    req_str(data, "created_utc")

    cli = req_dict(data, "cli")
    assert isinstance(cli.get("argv"), list), "cli.argv missing"

    cfg = req_dict(data, "config")
    cfg_path = Path(req_str(cfg, "resolved_path"))
    assert cfg_path.is_file(), f"resolved config missing: {cfg_path}"
    assert _sha256_file(cfg_path) == req_str(cfg, "resolved_sha256"), (
        "resolved config sha256 mismatch"
    )

    env = req_dict(data, "env")
    req_str(env, "python")
    req_dict(env, "packages")

    mani = req_dict(data, "manifest")
    mani_path = Path(req_str(mani, "path"))
    assert mani_path.is_file(), f"manifest missing: {mani_path}"
    assert _sha256_file(mani_path) == req_str(mani, "sha256"), "manifest sha256 mismatch"

    run_dir = mani_path.parent.parent
    for entry in json.loads(mani_path.read_text(encoding="utf-8"))["entries"]:
        target = run_dir / entry["relpath"]
        assert target.is_file(), f"manifest entry missing: {target}"
        assert _sha256_file(target) == entry["sha256"], f"sha256 mismatch: {entry['relpath']}"

    rng = req_dict(data, "rng")
    assert isinstance(rng.get("seed"), int), "rng.seed missing/not int"
    return data
