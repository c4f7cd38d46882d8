import pytest

from hyperaffine.diagram import CompiledDiagramManager, PythonDiagramManager

BACKENDS = [pytest.param(PythonDiagramManager, id="python")]
if CompiledDiagramManager is not None:
    BACKENDS.append(pytest.param(CompiledDiagramManager, id="compiled"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
