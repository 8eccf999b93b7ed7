import numpy as np
import pytest

from adsflat.fronts import constant_curvature_front, make_front_from_curvature, prepare_front
from adsflat.lift import asymptotic_lift
from adsflat.surface import synthesize

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


def sinusoid1(s):
    return 1.0 + 0.3 * np.sin(s)


def sinusoid2(s):
    # angle of the second front; omega2 = pi - this
    return 2.0 + 0.3 * np.sin(1.3 * s)


@pytest.fixture(scope="session")
def circle2():
    return constant_curvature_front(k=2.0)


@pytest.fixture(scope="session")
def circle2_lift(circle2):
    return asymptotic_lift(prepare_front(circle2))


@pytest.fixture(scope="session")
def sinus_fronts():
    g1 = make_front_from_curvature(sinusoid1, span=(-2.1, 2.1))
    g2 = make_front_from_curvature(sinusoid2, span=(-2.1, 2.1))
    return g1, g2


@pytest.fixture(scope="session")
def sinus_lifts(sinus_fronts):
    return tuple(asymptotic_lift(prepare_front(g)) for g in sinus_fronts)


@pytest.fixture(scope="session")
def sinus_patch(sinus_lifts):
    a1, a2 = sinus_lifts
    return synthesize(a1, a2, np.linspace(-2, 2, 201), np.linspace(-2, 2, 201))


@pytest.fixture(scope="session")
def small_patch(sinus_lifts):
    a1, a2 = sinus_lifts
    return synthesize(a1, a2, np.linspace(-1, 1, 41), np.linspace(-1, 1, 41))
