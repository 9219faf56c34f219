import warnings

import numpy as np
import pytest

warnings.filterwarnings("ignore", message=".*TBB.*")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def acceptance_report(request):
    """Record an acceptance line for the terminal summary, then assert."""

    def _report(k: int, passed: bool, detail: str) -> None:
        line = f"ACCEPTANCE {k}: {'PASS' if passed else 'FAIL'} - {detail}"
        print("\n" + line)
        store = getattr(request.config, "_acceptance_lines", None)
        if store is None:
            store = []
            request.config._acceptance_lines = store
        store.append((k, line))
        assert passed, f"criterion {k}: {detail}"

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
