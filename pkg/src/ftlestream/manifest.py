"""Run manifests: what ran, on which inputs, and checksums of what it wrote."""
from __future__ import annotations

import hashlib
import json
import os
import platform
import time
from contextlib import contextmanager

import numpy as np
import scipy

from . import __version__


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class RunManifest:
    def __init__(self, subcommand: str, parameters: dict):
        self.subcommand = subcommand
        self.parameters = parameters
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.duration_s = 0.0

    def add_input(self, path) -> None:
        if path is not None:
            self.inputs[os.fspath(path)] = sha256(path)

    def add_output(self, path) -> None:
        self.outputs[os.fspath(path)] = sha256(path)

    @contextmanager
    def timed(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.duration_s = time.perf_counter() - t0

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "versions": {
                "ftlestream": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            "duration_s": self.duration_s,
            "outputs": self.outputs,
        }

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
