"""Deterministic run manifests for report artifacts.

Every report embeds a manifest of the command, inputs (by content hash), and
precision policy. Timing is deliberately excluded from written artifacts so
that identical inputs reproduce byte-identical outputs; wall time goes to the
log stream instead.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .precision import PrecisionPolicy


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def file_hash(path) -> str:
    return content_hash(Path(path).read_bytes())


@dataclass
class RunManifest:
    command: str
    inputs: dict = field(default_factory=dict)      # name -> content hash
    working_bits: int = 256
    target_bits: int = 128
    summary: dict = field(default_factory=dict)

    @classmethod
    def start(cls, command: str, policy: PrecisionPolicy) -> "RunManifest":
        return cls(command=command, working_bits=policy.working_bits,
                   target_bits=policy.target_bits)

    def add_input(self, name: str, data: bytes) -> None:
        self.inputs[name] = content_hash(data)

    def add_input_file(self, path) -> None:
        self.inputs[str(path)] = file_hash(path)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "precision": {"working_bits": self.working_bits, "target_bits": self.target_bits},
            "summary": self.summary,
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")
