import json
import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


def _cli_path():
    env = os.environ.get("AQLAB_CLI")
    if env:
        return pathlib.Path(env)
    return ROOT / "build" / "aqlab"


@pytest.fixture(scope="session")
def cli():
    path = _cli_path()
    if not path.exists():
        pytest.skip(f"CLI not built at {path}")

    def run(*args, expect=0):
        proc = subprocess.run([str(path), *map(str, args)], capture_output=True, text=True)
        assert proc.returncode == expect, proc.stderr + proc.stdout
        return proc.stdout

    return run


@pytest.fixture(scope="session")
def schema():
    def load(name):
        return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())

    return load
