"""Run manifests: parameters plus input/output digests for every command.

The manifest file is fully deterministic so that identical runs can be
compared byte for byte; wall time is kept on the in-memory record and
logged, never serialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .utils import sha256_file, write_json

MANIFEST_SCHEMA_VERSION = 1


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    inputs: dict = field(default_factory=dict)    # name -> sha256
    outputs: dict = field(default_factory=dict)   # name -> sha256
    tool_version: str = __version__
    wall_time_s: float | None = None  # diagnostics only; not serialized

    def add_input(self, name, path) -> None:
        self.inputs[str(name)] = sha256_file(path)

    def add_output(self, name, path) -> None:
        self.outputs[str(name)] = sha256_file(path)

    def to_dict(self) -> dict:
        return {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }

    def write(self, path) -> None:
        write_json(path, self.to_dict())


def manifest_path_for(output_path) -> str:
    return str(output_path) + ".manifest.json"
