"""JSON verdict records."""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
VERDICTS = ("verified", "refuted", "inconclusive", "budget_exhausted")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "numerator") and hasattr(obj, "denominator") and not isinstance(obj, int):
        return str(obj)
    return obj


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class Certificate:
    claim_id: str
    parameters: dict
    verdict: str
    witness: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")

    @property
    def ok(self) -> bool:
        return self.verdict == "verified"

    def __bool__(self):
        return self.ok

    def __getitem__(self, key):
        return self.data[key]

    def attach_file(self, name: str, path, root) -> None:
        """Reference a witness file by path relative to root plus its hash."""
        rel = Path(path).resolve().relative_to(Path(root).resolve())
        files = self.witness.setdefault("files", {})
        files[name] = {"path": rel.as_posix(), "sha256": sha256_file(path)}

    def payload(self) -> dict:
        from . import __version__

        return _plain({
            "schema_version": SCHEMA_VERSION,
            "claim_id": self.claim_id,
            "parameters": self.parameters,
            "verdict": self.verdict,
            "witness": self.witness,
            "counters": self.counters,
            "data": self.data,
            "version": __version__,
        })

    def digest(self) -> str:
        """Hash of the payload; wall time is left out so reruns agree."""
        blob = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> str:
        out = self.payload()
        out["payload_sha256"] = self.digest()
        out["wall_time"] = round(self.wall_time, 3)
        return json.dumps(out, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        d = json.loads(text)
        return cls(d["claim_id"], d["parameters"], d["verdict"], d.get("witness", {}),
                   d.get("counters", {}), d.get("data", {}), d.get("wall_time", 0.0))


def make_certificate(claim_id, parameters, ok, *, witness=None, counters=None, data=None, verdict=None, started=None):
    v = verdict or ("verified" if ok else "refuted")
    wt = time.perf_counter() - started if started is not None else 0.0
    return Certificate(claim_id, dict(parameters), v, dict(witness or {}), dict(counters or {}), dict(data or {}), wt)
