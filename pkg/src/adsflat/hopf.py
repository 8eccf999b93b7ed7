"""Hopf fibrations h_rho(z) = z rho conj(z) of H^3_1 and the double cover onto TU(H^2)."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cliffalg import (
    SplitQuat,
    exp_fiber,
    left_matrix,
    qconj,
    qinner,
    qmul,
    random_ads,
    right_matrix,
)

_I = np.array([0.0, 1.0, 0.0, 0.0])
_J = np.array([0.0, 0.0, 1.0, 0.0])
_K = np.array([0.0, 0.0, 0.0, 1.0])


class BaseManifold(str, Enum):
    S2_1 = "S2_1"
    H2_PLUS = "H2+"
    H2_MINUS = "H2-"
    LAMBDA2_PLUS = "Lambda2+"
    LAMBDA2_MINUS = "Lambda2-"


@dataclass(frozen=True)
class HopfAxis:
    """Normalized pure imaginary axis; ``norm_class`` is <rho, rho> in {-1, 0, 1}."""

    rho: np.ndarray
    norm_class: int

    @classmethod
    def from_vector(cls, v, tol=1e-12):
        r = np.asarray(v, dtype=float).copy()
        if r.shape != (4,):
            raise ValueError("axis must be a single split quaternion")
        if abs(r[0]) > tol:
            raise ValueError("Hopf axis must be pure imaginary")
        r[0] = 0.0
        if np.max(np.abs(r)) <= tol:
            raise ValueError("Hopf axis must be nonzero")
        n = float(qinner(r, r))
        scale = max(1.0, float(np.dot(r, r)))
        if abs(n) <= tol * scale:
            # lightlike: scale so that <rho, i> = -1 or +1
            c = float(qinner(r, _I))
            if abs(c) <= tol:
                raise ValueError("lightlike axis orthogonal to i cannot be normalized")
            r = r / abs(c)
            cls_ = 0
        else:
            r = r / np.sqrt(abs(n))
            cls_ = 1 if n > 0 else -1
        r.setflags(write=False)
        return cls(r, cls_)

    @property
    def quat(self):
        return SplitQuat(*self.rho)


def _as_axis(axis):
    return axis if isinstance(axis, HopfAxis) else HopfAxis.from_vector(axis)


def classify_base(axis) -> BaseManifold:
    """Base of h_rho: S^2_1 for spacelike axes, a hyperbolic sheet or a light-cone half otherwise.

    The ``+`` components are those with ``<z, i> < 0``; they contain ``i``.
    """
    ax = _as_axis(axis)
    if ax.norm_class == 1:
        return BaseManifold.S2_1
    plus = float(qinner(ax.rho, _I)) < 0
    if ax.norm_class == -1:
        return BaseManifold.H2_PLUS if plus else BaseManifold.H2_MINUS
    return BaseManifold.LAMBDA2_PLUS if plus else BaseManifold.LAMBDA2_MINUS


def hopf_map(axis, z):
    ax = _as_axis(axis)
    scalar = isinstance(z, SplitQuat)
    z = np.asarray(z, dtype=float)
    out = qmul(qmul(z, ax.rho), qconj(z))
    out[..., 0] = 0.0  # pure imaginary up to rounding
    return SplitQuat(*out) if scalar else out


def h(z):
    """The fixed fibration h = h_i onto H^2."""
    return hopf_map(HopfAxis(np.array([0.0, 1.0, 0.0, 0.0]), -1), z)


@dataclass(frozen=True)
class LegendrianPoint:
    gamma: np.ndarray
    nu: np.ndarray

    def residuals(self):
        g, n = self.gamma, self.nu
        return np.array([
            qinner(g, g) + 1.0,
            g[..., 0],
            qinner(n, n) - 1.0,
            n[..., 0],
            qinner(g, n),
        ])


def double_cover(z) -> LegendrianPoint:
    """pi(z) = (z i conj(z), z k conj(z)); vectorized over leading axes."""
    z = np.asarray(z, dtype=float)
    zc = qconj(z)
    g = qmul(qmul(z, _I), zc)
    n = qmul(qmul(z, _K), zc)
    g[..., 0] = 0.0
    n[..., 0] = 0.0
    return LegendrianPoint(g, n)


def legendrian_preimage(gamma, nu):
    """One of the two points z with double_cover(z) = (gamma, nu).

    Solves ``z i = gamma z`` and ``z k = nu z`` as a linear null-space problem.
    The sign is fixed by making the largest component positive.
    """
    g = np.asarray(gamma, dtype=float)
    n = np.asarray(nu, dtype=float)
    A = np.vstack([right_matrix(_I) - left_matrix(g), right_matrix(_K) - left_matrix(n)])
    _, sv, vt = np.linalg.svd(A)
    z = vt[-1]
    if sv[-2] < 1e-8 or sv[-1] > 1e-6 * max(1.0, sv[0]):
        raise ValueError("(gamma, nu) is not a point of the unit tangent bundle of H^2")
    r = -float(qinner(z, z))
    if r <= 0:
        raise ValueError("preimage is not timelike; check the input pair")
    z = z / np.sqrt(r)
    if z[np.argmax(np.abs(z))] < 0:
        z = -z
    return z


def fiber(axis, z0, t):
    """z0 e^{t rho}; stays in the h_rho fiber through z0."""
    ax = _as_axis(axis)
    e = exp_fiber(ax.rho, t)
    z0 = np.asarray(z0, dtype=float)
    return qmul(z0, e)


def hopf_suite(n=1000, seed=1):
    from .checks import Check

    rng = np.random.default_rng(seed)
    z = random_ads(rng, n)
    rho = rng.normal(size=(n, 4))
    rho[:, 0] = 0.0
    eta = rng.normal(size=(n, 4))
    eta[:, 0] = 0.0
    hr = qmul(qmul(z, rho), qconj(z))
    he = qmul(qmul(z, eta), qconj(z))
    mag = np.abs(z).max(-1) ** 2 * (1 + np.abs(rho).max(-1))
    mag2 = np.abs(z).max(-1) ** 4 * (1 + np.abs(rho).max(-1) * np.abs(eta).max(-1))

    checks = [
        Check("hopf_i_real_part_zero", float(np.max(np.abs(qinner(hr, np.array([1.0, 0, 0, 0]))) / mag)), 1e-10),
        Check("hopf_ii_inner_products", float(np.max(np.abs(qinner(hr, he) - qinner(rho, eta)) / mag2)), 1e-10),
    ]

    # causal-sign preservation for non-spacelike axes
    timelike = rho.copy()
    timelike[:, 1] = np.sign(rng.normal(size=n)) * (np.abs(timelike[:, 2:]).sum(-1) + 0.1 + np.abs(timelike[:, 1]))
    light = np.zeros((n, 4))
    ang = rng.uniform(0, 2 * np.pi, n)
    light[:, 1] = np.sign(rng.normal(size=n))
    light[:, 2] = np.cos(ang)
    light[:, 3] = np.sin(ang)
    bad = 0
    for axes in (timelike, light):
        hz = qmul(qmul(z, axes), qconj(z))
        bad += int(np.sum(np.sign(qinner(hz, _I)) != np.sign(qinner(axes, _I))))
    checks.append(Check("hopf_iii_sign_preserved", float(bad), 0.0))

    # fiber invariance for the three causal classes
    t = rng.uniform(-3, 3, n)
    worst = 0.0
    for ax in (HopfAxis.from_vector(_I), HopfAxis.from_vector(_J), HopfAxis.from_vector(_I + _K),
               HopfAxis.from_vector([0.0, 0.3, 1.2, -0.4])):
        e = np.stack([exp_fiber(ax.rho, ti) for ti in t[:50]])
        zz = z[:50]
        base = hopf_map(ax, zz)
        moved = hopf_map(ax, qmul(zz, e))
        sc = np.abs(zz).max(-1) ** 2 * np.abs(e).max(-1) ** 2
        worst = max(worst, float(np.max(np.abs(moved - base).max(-1) / sc)))
    checks.append(Check("fiber_invariance", worst, 1e-10))

    a = double_cover(z)
    b = double_cover(-z)
    exact = float(max(np.max(np.abs(a.gamma - b.gamma)), np.max(np.abs(a.nu - b.nu))))
    checks.append(Check("double_cover_even", exact, 0.0))
    leg = np.max(np.abs(a.residuals()).max(0) / np.abs(z).max(-1) ** 2)
    checks.append(Check("double_cover_legendrian", float(leg), 1e-10))
    return checks


__all__ = [
    "BaseManifold", "HopfAxis", "LegendrianPoint", "classify_base", "double_cover",
    "fiber", "h", "hopf_map", "hopf_suite", "legendrian_preimage",
]
