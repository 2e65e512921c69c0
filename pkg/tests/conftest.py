import math
import sys

import pytest

from sloshspot.geometry import CaseTag, build_domain, case_mode, find_high_spots, smooth_variant
from sloshspot.kernel import Family, Potential, make_mode


@pytest.fixture(scope="session")
def m32():
    return make_mode(1.5, Family.SUM)


@pytest.fixture(scope="session")
def p32(m32):
    return Potential(m32)


@pytest.fixture(scope="session")
def domains():
    """Every case domain, built once per session."""
    out = {t: build_domain(case_mode(t), t) for t in CaseTag if t is not CaseTag.SMOOTH_VARIANT}
    out[CaseTag.SMOOTH_VARIANT] = smooth_variant(case_mode(CaseTag.W32), 0.2)
    return out


@pytest.fixture(scope="session")
def spots(domains):
    return {t: find_high_spots(d) for t, d in domains.items()}


class Perturbed(Potential):
    """Negative control: u and v each get an extra ``eps * x**2``."""

    def __init__(self, mode, eps=1e-3, cfg=None):
        super().__init__(mode, cfg)
        self.eps = eps

    def u(self, x, y):
        return super().u(x, y) + self.eps * x * x

    def v(self, x, y):
        return super().v(x, y) + self.eps * x * x


@pytest.fixture
def perturbed():
    return Perturbed


PI = math.pi


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
