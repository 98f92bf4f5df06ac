import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mirrorpair import Harmonic, make_scenario  # noqa: E402

HENE_OMEGA = 2 * math.pi * 299792458.0 / 633e-9
ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


@pytest.fixture
def peak_scenario():
    """The D = 1e4 m, x0 = 3e-7 m arrangement, tuned to tau/T = 0.5."""
    return make_scenario(
        dict(L=2e4 + 1, d0=2e4, D=1e4, omega0=HENE_OMEGA, M=1.0,
             trajectory=Harmonic(3e-7, 2 * math.pi * 299792458.0 * 0.5 / 1e4))
    )


@pytest.fixture
def hene_geometry():
    return dict(L=1.0, d0=0.5, D=0.1, omega0=HENE_OMEGA, M=1.0)


_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when not in ("setup", "call"):
        return
    number, title = mark.args
    if report.when == "setup" and report.passed:
        return
    _acceptance[number] = (title, report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_acceptance):
        title, passed, duration = _acceptance[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title} ({duration:.2f} s)")
