import warnings

import numpy as np
import pytest

# criterion number -> list of (part label, passed, detail)
_ACCEPTANCE: dict[int, list] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance():
    """``record(k, part, passed, detail)`` stores one part of acceptance criterion ``k``."""
    def record(k, part, passed, detail):
        _ACCEPTANCE.setdefault(k, []).append((part, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'} criterion {k} [{part}]: {detail}")
    return record


def pytest_configure(config):
    warnings.filterwarnings("ignore", category=RuntimeWarning, module="rtuomg")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[k]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'ok' if passed else 'FAILED'} ({d})" for name, passed, d in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
