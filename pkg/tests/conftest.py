import os
import pathlib
import subprocess
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))


def _ensure_fast_kernel() -> None:
    """Best-effort in-place build of the compiled kernel; the pure fallback
    keeps everything green when compilation is unavailable."""
    try:
        import hiveflow._kernels._fast  # noqa: F401
        return
    except ImportError:
        pass
    try:
        subprocess.run(
            [sys.executable, "setup.py", "build_ext", "--inplace", "-q"],
            cwd=ROOT, check=False, timeout=300,
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
    except Exception:
        pass


_ensure_fast_kernel()

SEED = int(os.environ.get("HIVEFLOW_SEED", "20240817"))


@pytest.fixture
def seed() -> int:
    return SEED


try:
    from hypothesis import settings

    settings.register_profile("hiveflow", max_examples=60, deadline=None)
    settings.load_profile("hiveflow")
except ImportError:
    pass
