import numpy as np
import pytest

from poextremes.baselines import make_baseline
from poextremes.generators import Independence, Nelsen428, Nelsen4219


@pytest.fixture
def unit_exp():
    return make_baseline("weibull-survival", (1.0, 1.0))


CATALOG_GENERATORS = [Independence(), Nelsen4219(5.0), Nelsen4219(0.5), Nelsen428(1.5), Nelsen428(3.0)]


def rel_err(a, b, floor=1e-300):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.abs(b), floor)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def record(num: int, ok: bool, detail: str) -> bool:
    ACCEPTANCE[num] = (bool(ok), detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
