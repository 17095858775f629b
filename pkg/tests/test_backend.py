import os
import subprocess
import sys
from pathlib import Path

import pytest

from acnielsen import _accel, kernels

ROOT = Path(__file__).resolve().parent.parent


def _backend_with(flag):
    env = dict(os.environ, ACNIELSEN_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from acnielsen._accel import backend_name; print(backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


@pytest.mark.parametrize("flag", ["0", "false", "off"])
def test_env_flag_forces_numpy(flag):
    assert _backend_with(flag) == "numpy"


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
def test_default_is_numba():
    assert _backend_with("1") == "numba"


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels._use_numba("cuda")


def test_benchmark_runs():
    out = subprocess.run(
        [sys.executable, str(ROOT / "benchmarks" / "bench_kernels.py"), "--quick", "--repeat", "1"],
        capture_output=True, text=True, check=True,
    )
    assert "Heis5 n=2 ac" in out.stdout
    assert "backends agree: False" not in out.stdout
