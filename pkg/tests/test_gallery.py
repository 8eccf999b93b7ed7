import numpy as np
import pytest

from adsflat.cliffalg import CausalClass
from adsflat.fronts import arccot, constant_curvature_front
from adsflat.gallery import (
    SCENARIOS, fiber_curve, hopf_cylinder, q2_axis_integral, q2_diagonal_integrand,
    q2_diagonal_length, q2_omega1, run_scenario,
)
from adsflat.hopf import HopfAxis
from adsflat.lift import lift_causal_class
from adsflat.surface import Verdict, torus_check

# mpmath.quad at 30 digits, c0 = 0.99 (frozen)
L_1E3 = 1.68344622926128112748013300378
L_1E4 = 1.68433722893161134973519202037
AXIS_1E3 = 7.56280270666394659529529861703
AXIS_1E4 = 9.85384570080270287188854550591


@pytest.fixture(scope="module", params=sorted(SCENARIOS))
def scenario(request):
    return run_scenario(request.param)


def test_scenario_passes(scenario):
    bad = [c for c in scenario.checks if not c.passed]
    assert not bad, bad
    assert scenario.details


def test_unknown_scenario():
    with pytest.raises(KeyError):
        run_scenario("nope")


def test_q2_oracle_values():
    assert q2_diagonal_length(0.99, 1e3) == pytest.approx(L_1E3, abs=1e-10)
    assert q2_diagonal_length(0.99, 1e4) == pytest.approx(L_1E4, abs=1e-10)
    assert abs(L_1E3 - L_1E4) <= 1e-2
    assert q2_axis_integral(0.99, 1e3) == pytest.approx(AXIS_1E3, abs=1e-8)
    assert q2_axis_integral(0.99, 1e4) == pytest.approx(AXIS_1E4, abs=1e-8)
    # sqrt(c0) asinh T growth
    assert AXIS_1E4 - AXIS_1E3 == pytest.approx(np.sqrt(0.99) * (np.arcsinh(1e4) - np.arcsinh(1e3)), abs=1e-12)


def test_q2_live_mpmath_oracle():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 20
    c0 = mp.mpf("0.99")
    g = lambda t: 2 * mp.cos(mp.pi / 4 + mp.acos(c0 / (1 + t * t)) / 2)  # noqa: E731
    want = mp.quad(g, [0, 1, 10, 100])
    assert q2_diagonal_length(0.99, 100.0) == pytest.approx(float(want), abs=1e-11)


def test_q2_integrand_is_cancellation_free():
    g = q2_diagonal_integrand(0.99)
    t = np.array([0.0, 1.0, 1e3, 1e6])
    w1 = q2_omega1(0.99)(t)
    naive = 2 * np.cos(np.pi / 4 + w1)
    assert np.allclose(g(t[:2]), naive[:2], atol=1e-14)
    # far out the naive form has lost all relative accuracy; the stable one decays like c0/t^2
    assert g(1e6) == pytest.approx(0.99e-12 * np.sqrt(2 / (1 + np.sqrt(1 - (0.99e-12) ** 2))) , rel=1e-12)


def test_q2_omega_range():
    w = q2_omega1(0.99)(np.linspace(-100, 100, 1001))
    assert np.all((w > 0) & (w < np.pi / 4))


def test_q2_parameters_validated():
    with pytest.raises(ValueError):
        run_scenario("dn-q2", c0=1.5)


@pytest.mark.parametrize("vec,cls,kabs", [
    ([0, 1.0, 0, 0], -1, np.inf),
    ([0, np.cos(arccot(1.4)), 0, np.sin(arccot(1.4))], -1, 1.4),
    ([0, 1.0, 0, 1.0], 0, 1.0),
    ([0, 0, 0, 1.0], 1, 0.0),
    ([0, -0.3, 0, 1.0], 1, 0.3),
])
def test_fiber_front_curvature(vec, cls, kabs):
    ax = HopfAxis.from_vector(vec)
    assert ax.norm_class == cls
    a2, w0 = fiber_curve(ax, closed=False)
    assert np.sin(w0) <= 0
    k = abs(np.cos(w0) / np.sin(w0)) if np.sin(w0) != 0 else np.inf
    assert k == pytest.approx(kabs, abs=1e-12) if np.isfinite(kabs) else np.isinf(k)
    # measured angle of the fiber is constant and equals w0 + pi
    assert np.ptp(a2.omega) < 1e-9
    assert np.allclose(a2.omega, w0 + np.pi, atol=1e-9)


def test_fiber_curve_closed_timelike():
    a2, _ = fiber_curve(HopfAxis.from_vector([0, 1.0, 0, 0]))
    assert a2.period == pytest.approx(2 * np.pi)
    assert a2.closure.closed and a2.closure.epsilon == -1


def test_fiber_curve_errors():
    with pytest.raises(ValueError):
        fiber_curve(HopfAxis.from_vector([0, 0, 1.0, 0]))  # j component
    with pytest.raises(ValueError):
        fiber_curve(HopfAxis.from_vector([0, 1.0, 0, 1.0]), closed=True)


def test_hopf_cylinder_is_fiber_saturated():
    cyl = hopf_cylinder([0, 1.0, 0, 1.0], constant_curvature_front(k=3.0), n=41)
    assert cyl.sigma_residual < 1e-10
    assert lift_causal_class(cyl.fiber_omega_measured, tol=1e-8) is CausalClass.LIGHTLIKE
    assert not torus_check(cyl.patch).is_torus  # lightlike fibers are open


def test_hopf_torus_and_open_sigma():
    cyl = hopf_cylinder([0, np.cos(arccot(1.4)), 0, np.sin(arccot(1.4))], constant_curvature_front(k=3.0), n=41)
    assert torus_check(cyl.patch).is_torus


def test_q4_constant_variant():
    r = run_scenario("dn-q4", bands=False)
    assert r.all_pass
    assert r.details["max_speed2_a1"] == pytest.approx(-np.cos(2 * arccot(3.0)), abs=1e-7)
    assert r.details["max_speed2_a2"] == pytest.approx(-np.cos(2 * arccot(1.4)), abs=1e-7)


def test_q4_band_values():
    r = run_scenario("dn-q4")
    assert r.details["max_speed2_a2"] <= -0.1
    assert r.details["min_sin"] >= 0.05
    assert r.details["completeness"] == Verdict.CERTIFIED.value


def test_flat_torus_margins():
    r = run_scenario("flat-torus")
    assert r.details["is_torus"]
    assert r.details["epsilon"] == [-1, -1]
    assert r.details["admissible_margin"] == pytest.approx(1.6, abs=1e-8)
    assert r.details["front_periods"][0] == pytest.approx(np.pi / np.sqrt(0.8))
