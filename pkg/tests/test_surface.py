import numpy as np
import pytest

from adsflat.cliffalg import qconj, qinner, qmul
from adsflat.fronts import constant_curvature_front, make_front_from_curvature, prepare_front
from adsflat.gallery import q2_omega1
from adsflat.lift import asymptotic_lift, unit_direction
from adsflat.surface import (
    NonImmersionError, Verdict, boundary_fronts, closed_forms, completeness_check,
    coordinate_chart, gauss_weingarten_residual, left_invariance_residual, measured_forms,
    normal_identity_residual, patch_chart, round_trip, synthesize, torus_check, verify_patch,
)

from test_lift import exp_unit


def lift(w, span=(-1.6, 1.6)):
    return asymptotic_lift(prepare_front(make_front_from_curvature(w, span=span)))


@pytest.fixture(scope="module")
def const_patch():
    a1, a2 = lift(0.3), lift(1.2)
    g = np.linspace(-1.5, 1.5, 61)
    return synthesize(a1, a2, g, g)


def test_constant_patch_closed_form(const_patch):
    p = const_patch
    A1 = exp_unit(0.3, p.u)
    A2 = exp_unit(1.2, p.v)
    want = qmul(A1[:, None, :], qconj(A2)[None, :, :])
    np.testing.assert_allclose(p.f, want, atol=1e-9)
    Nwant = qmul(qmul(A1, [0, 0, 1.0, 0])[:, None, :], qconj(A2)[None, :, :])
    np.testing.assert_allclose(p.N, Nwant, atol=1e-9)
    assert np.allclose(p.omega1, 0.3) and np.allclose(p.omega2, np.pi - 1.2)


def test_constant_patch_chart_is_linear(const_patch):
    ch = patch_chart(const_patch)
    u, v = np.meshgrid(ch.u[::100], ch.v[::100], indexing="ij")
    x, y = ch.xy(u, v)
    w2 = np.pi - 1.2
    np.testing.assert_allclose(x, u * np.cos(0.3) + v * np.cos(w2), atol=1e-11)
    np.testing.assert_allclose(y, u * np.sin(0.3) - v * np.sin(w2), atol=1e-11)


def test_base_point_normalization(sinus_patch):
    i0 = int(np.argmin(np.abs(sinus_patch.u)))
    np.testing.assert_allclose(sinus_patch.f[i0, i0], [1, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(sinus_patch.N[i0, i0], [0, 0, 1, 0], atol=1e-14)


def test_patch_on_quadric_and_normal(sinus_patch):
    f, N = sinus_patch.f, sinus_patch.N
    assert np.max(np.abs(qinner(f, f) + 1)) < 1e-10
    assert np.max(np.abs(qinner(N, N) - 1)) < 1e-10
    assert np.max(np.abs(qinner(f, N))) < 1e-10


def test_forms_agree(small_patch):
    u = small_patch.u[1:-1]
    meas = measured_forms(small_patch, u, u)
    ref = closed_forms(small_patch.omega1_at(u)[:, None], small_patch.omega2_at(u)[None, :])
    assert meas.max_diff(ref) < 1e-5


def test_closed_forms_callables():
    f = closed_forms(lambda u: 0.3 + 0 * u, lambda v: 1.9 + 0 * v, np.zeros(3), np.zeros(3))
    assert np.allclose(f.E, -np.cos(0.6)) and np.allclose(f.f2, np.sin(2.2))
    # flatness in the closed forms: E G - F^2 = -sin^2(w1 + w2)
    assert np.allclose(f.E * f.G - f.F**2, -np.sin(2.2) ** 2)


def test_gauss_weingarten(small_patch):
    u = small_patch.u[1:-1:3]
    res = gauss_weingarten_residual(small_patch, u, u)
    assert set(res) == {"f_uu", "f_uv", "f_vv", "N_u", "N_v", "max"}
    assert res["max"] < 1e-4


def test_normal_identity_and_left_invariance(small_patch):
    u = small_patch.u[1:-1:4]
    assert normal_identity_residual(small_patch, u, u) < 1e-5
    assert left_invariance_residual(small_patch, u) < 1e-5


def test_stencil_too_close_to_boundary(sinus_lifts):
    a1, a2 = sinus_lifts
    p = synthesize(a1, a2, np.linspace(-2.1, 2.1, 5), np.linspace(-2, 2, 5))
    with pytest.raises(ValueError):
        measured_forms(p, p.u, p.v)


def test_verify_patch_all_pass(sinus_patch):
    checks = verify_patch(sinus_patch, stride=5)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_synthesize_detects_singularities():
    a1 = lift(lambda s: 1.0 + 0.3 * np.sin(s))
    a2 = lift(0.9)
    g = np.linspace(-1.5, 1.5, 31)
    with pytest.raises(NonImmersionError) as ei:
        synthesize(a1, a2, g, g)
    assert len(ei.value.offending) > 0
    p = synthesize(a1, a2, g, g, check=False)
    assert p.min_sin <= 0


def test_synthesize_rejects_grid_outside_domain(sinus_lifts):
    with pytest.raises(ValueError):
        synthesize(*sinus_lifts, np.linspace(-3, 3, 11), np.linspace(-1, 1, 11))


def test_round_trip(sinus_patch):
    new, dev = round_trip(sinus_patch)
    assert dev <= 1e-8
    assert new.f.shape == sinus_patch.f.shape


def test_boundary_fronts_reproduce_inputs(sinus_patch, sinus_fronts):
    b1, _ = boundary_fronts(sinus_patch)
    g1 = prepare_front(sinus_fronts[0])
    assert np.max(np.abs(b1.gamma - g1.gamma_at(b1.s))) < 1e-8


def test_chart_checks_from_samples():
    u = np.linspace(-2, 2, 401)
    ch = coordinate_chart(1.0 + 0.3 * np.sin(u), 1.0 - 0.2 * np.cos(u), u, u)
    x, y = ch.x, ch.y
    assert x.shape == (401, 401) and x[200, 200] == 0 and y[200, 200] == 0
    # exact antiderivative of cos(1 + 0.3 sin t) is not elementary: compare with fine quadrature
    from scipy.integrate import quad
    want = quad(lambda t: np.cos(1.0 + 0.3 * np.sin(t)), 0, 2)[0]
    assert ch.X1[-1] == pytest.approx(want, abs=1e-10)


def test_chart_path_dependence_is_rejected():
    u = np.linspace(-1, 1, 11)
    W = 0.5 + 0.1 * u[:, None] * u[None, :]
    with pytest.raises(ValueError):
        coordinate_chart(W, W, u, u)


def test_completeness_certified(sinus_patch):
    cert = completeness_check(sinus_patch.omega1, sinus_patch.omega2, sinus_patch.u, sinus_patch.v)
    assert cert.verdict is Verdict.CERTIFIED
    assert 0 < cert.c1 <= cert.c2 < np.pi


def test_completeness_suspected_on_q2_profile():
    w1 = q2_omega1(0.99)
    w2 = lambda v: np.pi / 2 + w1(v)  # noqa: E731
    g = np.linspace(-1e4, 1e4, 201)
    cert = completeness_check(w1, w2, g, g)
    assert cert.verdict is Verdict.SUSPECTED_INCOMPLETE
    assert cert.witness["path"] == "diagonal(+1,+1)"
    assert cert.witness["length"] == pytest.approx(1.684337228931611, abs=1e-6)


def test_completeness_unknown():
    g = np.linspace(-50, 50, 101)
    cert = completeness_check(np.full(101, 0.0025), np.full(101, 0.0025), g, g)
    assert cert.verdict is Verdict.UNKNOWN
    assert cert.witness is None and cert.lengths


def test_torus_check_open_patch(sinus_patch):
    rec = torus_check(sinus_patch)
    assert not rec.is_torus
    assert rec.closure1 is None and rec.closure2 is None
    assert rec.beta_identity_residual < 1e-7


def test_torus_check_closed_circles():
    a1 = asymptotic_lift(prepare_front(constant_curvature_front(k=3.0)))
    a2 = asymptotic_lift(prepare_front(constant_curvature_front(k=1.4)))
    p = synthesize(a1, a2, np.linspace(0, a1.period, 41), np.linspace(0, a2.period, 41))
    rec = torus_check(p)
    assert rec.is_torus
    assert rec.closure1.epsilon == -1 and rec.closure2.epsilon == -1
    assert min(rec.beta_min_speed) > 0.1
    # conj(beta) beta' = -2 a conj(a') and |beta|^2 = 1 give <beta', beta'> = -4 <a', a'>
    from adsflat.surface import _beta
    _, db, _ = _beta(a1)
    assert np.allclose(qinner(db, db), 4 * np.cos(2 * np.arctan2(1, 3.0)), atol=1e-7)


def test_unit_direction_speed():
    w = np.linspace(0.1, 3.0, 7)
    e = unit_direction(w)
    assert np.allclose(qinner(e, e), -np.cos(2 * w))


def test_staircase_euclidean_oracle():
    from adsflat.surface import _staircase
    # omega = pi/2 makes the metric du^2 + dv^2: diagonal moves cost h sqrt(2)
    h = 0.1
    D = _staircase(np.full((10, 12), np.pi / 2), np.full(10, h), np.full(12, h), 1)
    assert D.shape == (11, 13)
    assert D[-1, -3] == pytest.approx(10 * np.sqrt(2) * h)
    assert D[-1, -1] == pytest.approx(10 * np.sqrt(2) * h + 2 * h)
    assert D[-1, 0] == pytest.approx(1.0) and D[0, -1] == pytest.approx(1.2)
