"""Deterministic CSV/JSON writers and run manifests.

All floats are written with 17 significant digits so CSV payloads round-trip
doubles losslessly and repeated runs produce byte-identical files.
"""

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__


def fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, complex):
        raise TypeError("split complex values into re/im columns")
    return str(value)


def write_csv(path, header, rows):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def write_json(path, payload):
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _digest(payload):
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _file_entry(path):
    path = Path(path)
    data = path.read_bytes()
    return {
        "path": path.name,
        "bytes": len(data),
        "sha256": hashlib.sha256(data).hexdigest(),
    }


@dataclass
class RunManifest:
    """Resolved parameters, stage timings and the output inventory of a run."""

    command: str
    parameters: dict
    version: str = __version__
    config_digest: str = ""
    timings: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    created_utc: str = ""

    def __post_init__(self):
        if not self.config_digest:
            self.config_digest = _digest(self.parameters)
        if not self.created_utc:
            self.created_utc = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())

    def add_output(self, path):
        self.outputs.append(_file_entry(path))

    def write(self, path):
        return write_json(
            path,
            {
                "command": self.command,
                "version": self.version,
                "parameters": self.parameters,
                "config_digest": self.config_digest,
                "timings": self.timings,
                "outputs": self.outputs,
                "created_utc": self.created_utc,
            },
        )


class StageTimer:
    """Collects wall-clock stage durations for the manifest."""

    def __init__(self):
        self.timings = {}

    def stage(self, name):
        timer = self

        class _Stage:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.timings[name] = timer.timings.get(name, 0.0) + (
                    time.perf_counter() - self.t0
                )
                return False

        return _Stage()
