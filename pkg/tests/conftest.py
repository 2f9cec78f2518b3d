import pytest

# (criterion, passed, detail) lines collected by test_acceptance.py
ACCEPTANCE = []


@pytest.fixture(scope="session")
def reference_cache(request):
    """Directory where fine-grid reference runs are kept between sessions."""
    return request.config.cache.mkdir("oweno-references")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
