import os
import subprocess
import sys

import pytest

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_py(code, backend=None, cwd=None):
    """Run a snippet in a fresh interpreter; returns CompletedProcess."""
    env = dict(os.environ)
    if backend is not None:
        env["FOLDSIM_BACKEND"] = backend
    return subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd or REPO_ROOT,
    )


@pytest.fixture
def fresh_interpreter():
    return run_py
