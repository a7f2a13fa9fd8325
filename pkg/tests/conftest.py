import pytest

from hsolve import catalog
from hsolve.double import double


@pytest.fixture(scope="session")
def kodaira():
    af = catalog.load("kodaira")
    return af.algebra(), af.operator("I")


@pytest.fixture(scope="session")
def iwasawa():
    af = catalog.load("iwasawa")
    return af.algebra(), af.operator("I")


@pytest.fixture(scope="session")
def kodaira_double(kodaira):
    g, I = kodaira
    return double(g, I)



ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture
def acceptance(request):
    """``record(number, ok, detail)`` prints and remembers one PASS/FAIL line per criterion."""
    results = request.config.stash[ACCEPTANCE_KEY]

    def record(number, ok, detail):
        line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {detail}"
        results[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[ACCEPTANCE_KEY]
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
