"""Run manifests: the recorded state that reproduces a CLI run.

The digest covers exactly (subcommand, params, seed) in canonical JSON;
wall-clock and output paths are informational and excluded, so re-running
from a manifest yields byte-identical output files.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from .rng import RNG_ALGORITHM

FORMAT_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def manifest_digest(subcommand: str, params: dict, seed: int | None) -> str:
    payload = canonical_json({"subcommand": subcommand, "params": params, "seed": seed})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: int | None
    threads: int = 1
    outputs: list = field(default_factory=list)
    tool_version: str = ""
    rng_algorithm: str = RNG_ALGORITHM
    created_utc: str = ""
    wall_clock_s: float = 0.0

    @property
    def digest(self) -> str:
        return manifest_digest(self.subcommand, self.params, self.seed)

    def to_json_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "subcommand": self.subcommand,
            "params": self.params,
            "seed": self.seed,
            "threads": self.threads,
            "outputs": list(self.outputs),
            "tool_version": self.tool_version,
            "rng_algorithm": self.rng_algorithm,
            "created_utc": self.created_utc,
            "wall_clock_s": self.wall_clock_s,
            "digest": self.digest,
        }

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    @classmethod
    def read(cls, path) -> "RunManifest":
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
        return cls(
            subcommand=d["subcommand"],
            params=d["params"],
            seed=d["seed"],
            threads=d.get("threads", 1),
            outputs=d.get("outputs", []),
            tool_version=d.get("tool_version", ""),
            rng_algorithm=d.get("rng_algorithm", RNG_ALGORITHM),
            created_utc=d.get("created_utc", ""),
            wall_clock_s=d.get("wall_clock_s", 0.0),
        )


def now_utc() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
