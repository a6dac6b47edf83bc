import pytest

from growdestroy import _kernels

ACCEPTANCE_LINES: list[str] = []

BACKENDS = ["python"] + (["cython"] if _kernels.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return _kernels.get_backend(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
