import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adsflat.cliffalg import exp_fiber, qconj, qinner, qmul, random_ads
from adsflat.hopf import (
    BaseManifold, HopfAxis, LegendrianPoint, classify_base, double_cover, fiber, h, hopf_map,
    hopf_suite, legendrian_preimage,
)

AXES = {
    "timelike": [0, 1.0, 0, 0],
    "timelike-oblique": [0, 1.3, 0.4, -0.5],
    "spacelike": [0, 0, 1.0, 0],
    "spacelike-oblique": [0, 0.3, 1.2, -0.4],
    "lightlike": [0, 1.0, 1.0, 0],
    "lightlike-minus": [0, -1.0, 0, 1.0],
}


def test_axis_normalization():
    a = HopfAxis.from_vector([0, 2.0, 0, 0])
    assert a.norm_class == -1 and np.allclose(a.rho, [0, 1, 0, 0])
    s = HopfAxis.from_vector([0, 0, 0, 3.0])
    assert s.norm_class == 1 and np.allclose(s.rho, [0, 0, 0, 1])
    l = HopfAxis.from_vector([0, 2.0, 0, 2.0])  # noqa: E741
    assert l.norm_class == 0 and abs(qinner(l.rho, [0, 1.0, 0, 0])) == pytest.approx(1)
    with pytest.raises(ValueError):
        HopfAxis.from_vector([1.0, 0, 0, 0])
    with pytest.raises(ValueError):
        HopfAxis.from_vector([0, 0, 0, 0])


def test_classify_base():
    assert classify_base([0, 1.0, 0, 0]) is BaseManifold.H2_PLUS
    assert classify_base([0, -1.0, 0, 0]) is BaseManifold.H2_MINUS
    assert classify_base([0, 0, 1.0, 0]) is BaseManifold.S2_1
    assert classify_base([0, 1.0, 1.0, 0]) is BaseManifold.LAMBDA2_PLUS
    assert classify_base([0, -1.0, 0, 1.0]) is BaseManifold.LAMBDA2_MINUS


@pytest.mark.parametrize("name", sorted(AXES))
def test_hopf_map_lands_on_base(name):
    ax = HopfAxis.from_vector(AXES[name])
    z = random_ads(np.random.default_rng(2), 300)
    w = hopf_map(ax, z)
    raw = qmul(qmul(z, np.broadcast_to(ax.rho, z.shape)), qconj(z))
    assert np.max(np.abs(raw[..., 0])) < 1e-10 * np.max(np.abs(z)) ** 2
    # norm of the image equals the norm of the axis
    assert np.max(np.abs(qinner(w, w) - qinner(ax.rho, ax.rho))) < 1e-9
    # z and -z have the same image
    assert np.array_equal(hopf_map(ax, -z), w)


@settings(max_examples=40)
@given(st.sampled_from(sorted(AXES)), st.floats(-3, 3), st.integers(0, 2**31 - 1))
def test_fiber_invariance(name, t, seed):
    ax = HopfAxis.from_vector(AXES[name])
    z = random_ads(np.random.default_rng(seed), 4)
    zt = fiber(ax, z, t)
    scale = float(np.max(np.abs(z))) ** 2 * max(1.0, float(np.max(np.abs(exp_fiber(ax.rho, t))))) ** 2
    assert np.max(np.abs(hopf_map(ax, zt) - hopf_map(ax, z))) < 1e-12 * max(scale, 1.0) * 100


def test_h_is_axis_i():
    z = random_ads(np.random.default_rng(4), 10)
    assert np.allclose(h(z), hopf_map([0, 1.0, 0, 0], z))
    g = h(z)
    assert np.max(np.abs(qinner(g, g) + 1)) < 1e-10
    assert np.all(qinner(g, [0, 1.0, 0, 0]) < 0)  # upper sheet, contains i


def test_double_cover_is_legendrian_pair():
    z = random_ads(np.random.default_rng(5), 1000)
    lp = double_cover(z)
    assert isinstance(lp, LegendrianPoint)
    assert np.max(np.abs(lp.residuals())) < 1e-9
    lm = double_cover(-z)
    assert np.array_equal(lm.gamma, lp.gamma) and np.array_equal(lm.nu, lp.nu)


def test_double_cover_base_point():
    lp = double_cover(np.array([1.0, 0, 0, 0]))
    assert np.allclose(lp.gamma, [0, 1, 0, 0]) and np.allclose(lp.nu, [0, 0, 0, 1])


@settings(max_examples=60)
@given(st.integers(0, 2**31 - 1))
def test_preimage_inverts_double_cover(seed):
    z = random_ads(np.random.default_rng(seed), 1)[0]
    lp = double_cover(z)
    w = legendrian_preimage(lp.gamma, lp.nu)
    err = min(np.max(np.abs(w - z)), np.max(np.abs(w + z)))
    assert err < 1e-8 * max(1.0, np.max(np.abs(z)) ** 2)


def test_preimage_rejects_non_tangent_pairs():
    with pytest.raises(ValueError):
        legendrian_preimage(np.array([0, 1.0, 0, 0]), np.array([0, 0, 1.0, 1.0]))


def test_hopf_suite():
    checks = hopf_suite(n=300, seed=9)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
