import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from glpd.corpus import a508_params  # noqa: E402
from glpd.hardening import HardeningCurve  # noqa: E402

EXAMPLES = Path(__file__).resolve().parents[1] / "src" / "glpd" / "examples"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def params():
    return a508_params()


@pytest.fixture
def perfect_params():
    return a508_params(hardening=HardeningCurve.perfect(450.0))


_ACCEPTANCE: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    """Register an acceptance line; printed now and in the terminal summary."""
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    _ACCEPTANCE[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
