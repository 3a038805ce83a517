import numpy as np
import pytest

from elliptica.theta import TorusPoint

_ACCEPTANCE = []


def generic_taus(n, count, seed, eta=1j, margin=0.01):
    """Seeded tau values at torus distance >= margin from every point of (1/n)Lambda."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        u, v = rng.random(2)
        # distance to the nearest (1/n)-lattice point, measured in the scaled torus
        du = abs(n * u - round(n * u)) / n
        dv = abs(n * v - round(n * v)) / n
        if max(du, dv) < margin:
            continue
        out.append(complex(TorusPoint(u, v).u + v * eta))
    return out


@pytest.fixture
def record_criterion():
    def record(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
