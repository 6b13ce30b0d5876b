import pytest

from memsres.materials import builtin
from memsres.modal import DiskGeometry


@pytest.fixture
def poly():
    return builtin("polysilicon")


@pytest.fixture
def disk18():
    return DiskGeometry(radius=18e-6, thickness=2.1e-6, gap=87e-9)


@pytest.fixture
def verdict(request):
    """Print one PASS/FAIL line per criterion, visible even with output capture on."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(label, parts):
        ok = all(p[1] for p in parts)
        bad = "; ".join(f"{name}: {detail}" for name, good, detail in parts if not good)
        status = "N/A" if not parts else ("PASS" if ok else "FAIL")
        line = f"{label}: {status}" + (f" ({bad})" if bad else "")
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)
        return ok

    return emit
