"""CSV emission and run manifests.

CSV contract: comma separators, '.' decimal, header row, LF line endings,
floats at 9 significant digits. Every CLI run writes a JSON manifest next
to its CSV with the exact inputs and a checksum of each output, enough to
reproduce the bytes.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field, fields

from .model import NetworkConfig


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.9g}"
    if v is None:
        return ""
    return str(v)


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt_value(v) for v in row) + "\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Everything needed to reproduce a run's outputs byte for byte."""

    command: str
    args: dict
    config: dict
    seed: int
    code_version: str
    started_utc: str = ""
    wall_clock_s: float = 0.0
    outputs: dict = field(default_factory=dict)

    def add_output(self, path) -> None:
        self.outputs[str(path)] = sha256_file(path)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def new_manifest(command: str, args: dict, cfg: NetworkConfig, seed: int) -> RunManifest:
    from . import __version__

    return RunManifest(
        command=command,
        args={k: v for k, v in sorted(args.items())},
        config={f.name: getattr(cfg, f.name) for f in fields(cfg)},
        seed=seed,
        code_version=__version__,
        started_utc=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    )
