"""Asymptotic curves in H^3_1 and asymptotic lifts of fronts.

An asymptotic curve satisfies ``conj(a) a' = cos(w) i + sin(w) k``.  The lift
of a front is obtained by integrating ``a' = a e(w)`` with a fixed-step RK4
scheme applied to right propagators, each renormalized onto H^3_1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from ._sampled import SampledCurve
from .checks import Check
from .cliffalg import CausalClass, project_to_ads, qconj, qinner, qmul
from .fronts import FrontCurve, angle_function
from .hopf import double_cover

ONE = np.array([1.0, 0.0, 0.0, 0.0])
E_J = np.array([0.0, 0.0, 1.0, 0.0])


def unit_direction(omega):
    """cos(w) i + sin(w) k as an array of shape (..., 4)."""
    w = np.asarray(omega, dtype=float)
    out = np.zeros(w.shape + (4,))
    out[..., 1] = np.cos(w)
    out[..., 3] = np.sin(w)
    return out


@dataclass(frozen=True)
class ClosureRecord:
    closed: bool
    epsilon: int
    residual: float
    period: float


@dataclass(frozen=True, eq=False)
class AsymptoticCurve:
    """Samples of an asymptotic curve ``a`` with its angle function.

    ``period`` is the period of ``a`` itself (twice the front period when the
    monodromy sign is -1 and the lift was run over two front periods).
    """

    u: np.ndarray
    a: np.ndarray
    omega: np.ndarray
    period: float | None = None
    sign: int = 1
    closure: ClosureRecord | None = None
    label: str = ""

    def __repr__(self):
        kind = f"period={self.period:.6g}" if self.period is not None else "open"
        return (f"AsymptoticCurve({self.label!r}, u=[{self.u[0]:.6g}, {self.u[-1]:.6g}], "
                f"n={len(self.u)}, {kind}, sign={self.sign:+d})")

    def __post_init__(self):
        for name in ("u", "a", "omega"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.a.shape != (len(self.u), 4) or self.omega.shape != (len(self.u),):
            raise ValueError("AsymptoticCurve arrays have inconsistent shapes")

    @property
    def step(self):
        return float(self.u[1] - self.u[0])

    @cached_property
    def _asp(self):
        return SampledCurve(self.u, self.a, self.period)

    @cached_property
    def _wsp(self):
        return SampledCurve(self.u, self.omega, self.period)

    def a_at(self, u, nu=0):
        return self._asp(u, nu)

    def omega_at(self, u, nu=0):
        return self._wsp(u, nu)

    def derivative(self):
        """a' at the samples from the cubic interpolant (independent of the ODE)."""
        return self._asp(self.u, 1)

    def index_of(self, u0=0.0):
        i = int(np.argmin(np.abs(self.u - u0)))
        if abs(self.u[i] - u0) > 1e-9 * max(1.0, self.step):
            raise ValueError(f"parameter {u0} is not a grid node")
        return i

    def left_translate(self, q):
        """q a(u); asymptotic parameter and angle are unchanged."""
        return AsymptoticCurve(self.u, qmul(np.asarray(q, dtype=float), self.a), self.omega,
                               self.period, self.sign, self.closure, self.label)

    def normalized(self):
        """Left-translate so that a(0) = 1."""
        a0 = self.a[self.index_of(0.0)]
        return self.left_translate(qconj(a0))


def _propagators(omega_fn, u, substeps=1):
    """RK4 right propagators P_n with a(u_{n+1}) = a(u_n) P_n for a' = a e(w)."""
    n = len(u) - 1
    h = (u[1:] - u[:-1]) / substeps
    P = np.tile(ONE, (n, 1))
    for m in range(substeps):
        t0 = u[:-1] + m * h
        e0 = unit_direction(omega_fn(t0))
        e1 = unit_direction(omega_fn(t0 + 0.5 * h))
        e2 = unit_direction(omega_fn(t0 + h))
        hh = h[:, None]
        k1 = e0
        k2 = qmul(ONE + 0.5 * hh * k1, e1)
        k3 = qmul(ONE + 0.5 * hh * k2, e1)
        k4 = qmul(ONE + hh * k3, e2)
        step = ONE + hh / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        P = qmul(P, project_to_ads(step))
    return project_to_ads(P)


def _chain(P, start, backward=False):
    """Sequential products a_{n+1} = a_n P_n (or a_n = a_{n+1} conj(P_n) backward)."""
    out = np.empty((len(P) + 1, 4))
    x0, x1, x2, x3 = map(float, start)
    out[0] = (x0, x1, x2, x3)
    Ps = qconj(P[::-1]) if backward else P
    for idx, (b0, b1, b2, b3) in enumerate(Ps.tolist(), start=1):
        y0 = x0 * b0 - x1 * b1 + x2 * b2 + x3 * b3
        y1 = x0 * b1 + x1 * b0 - x2 * b3 + x3 * b2
        y2 = x0 * b2 + x2 * b0 - x1 * b3 + x3 * b1
        y3 = x0 * b3 + x3 * b0 + x1 * b2 - x2 * b1
        r = (y0 * y0 + y1 * y1 - y2 * y2 - y3 * y3) ** -0.5
        x0, x1, x2, x3 = y0 * r, y1 * r, y2 * r, y3 * r
        out[idx] = (x0, x1, x2, x3)
    return out[::-1] if backward else out


def integrate_asymptotic(omega_fn, u, start=ONE, substeps=1):
    """Integrate a' = a e(w(u)) on the uniform grid ``u`` (containing 0) from a(0) = start."""
    u = np.asarray(u, dtype=float)
    i0 = int(np.argmin(np.abs(u)))
    if abs(u[i0]) > 1e-12:
        raise ValueError("integration grid must contain 0")
    start = project_to_ads(np.asarray(start, dtype=float))
    P = _propagators(omega_fn, u, substeps)
    fwd = _chain(P[i0:], start)
    if i0 == 0:
        return fwd
    back = _chain(P[:i0], start, backward=True)
    return np.concatenate([back[:-1], fwd])


def _projection_residual(a, front, u):
    lp = double_cover(a)
    return max(float(np.max(np.abs(lp.gamma - front.gamma_at(u)))),
               float(np.max(np.abs(lp.nu - front.nu_at(u)))))


def asymptotic_lift(front: FrontCurve, sign=1, tol=1e-6, max_refine=3, label=None) -> AsymptoticCurve:
    """Asymptotic lift of a positively oriented, Sasaki-parametrized front.

    The front must pass through (i, k) at parameter 0; then ``a(0) = sign``.
    Closed fronts are lifted over two periods so that the monodromy sign can
    be measured; the result is periodic with period 2L.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    spd = front.sasaki_speed2()
    if np.max(np.abs(spd - 4.0)) > 1e-5:
        raise ValueError("front is not Sasaki-parametrized; call sasaki_reparametrize first")
    i0 = front.index_of(0.0)
    if np.max(np.abs(front.gamma[i0] - [0, 1, 0, 0])) > 1e-8 or np.max(np.abs(front.nu[i0] - [0, 0, 0, 1])) > 1e-8:
        raise ValueError("front must pass through (i, k) at parameter 0; call normalize_base first")
    ang = angle_function(front)

    if front.closed:
        L = front.period
        u = np.concatenate([front.s, front.s[1:] + L])
        u[-1] = 2 * L
    else:
        u = front.s.copy()
    omega = ang(u)

    substeps = 1
    for attempt in range(max_refine + 1):
        a = integrate_asymptotic(ang, u, sign * ONE, substeps)
        res = _projection_residual(a, front, u)
        if res <= 10 * tol or attempt == max_refine:
            break
        substeps *= 2
    if res > 10 * tol:
        raise RuntimeError(f"lift projection residual {res:.3g} exceeds tolerance after refinement")

    lbl = front.label if label is None else label
    if front.closed:
        rec = closure_detect(AsymptoticCurve(u, a, omega, None, sign), L)
        if rec.closed:
            return AsymptoticCurve(u, a, omega, 2 * L, sign, rec, lbl)
        return AsymptoticCurve(u, a, omega, None, sign, rec, lbl)
    return AsymptoticCurve(u, a, omega, None, sign, None, lbl)


def closure_detect(c: AsymptoticCurve, L: float, tol=1e-6) -> ClosureRecord:
    """Compare a(u + L) with +a(u) and -a(u) over the available samples."""
    u = c.u
    mask = u + L <= u[-1] + 1e-9 * max(1.0, L)
    if not np.any(mask):
        raise ValueError("curve domain is shorter than the candidate period")
    shift = L / c.step
    if abs(shift - round(shift)) < 1e-6:
        m = int(round(shift))
        idx = np.nonzero(mask)[0]
        idx = idx[idx + m < len(u)]
        a0, a1 = c.a[idx], c.a[idx + m]
    else:
        a0 = c.a[mask]
        a1 = SampledCurve(c.u, c.a)(u[mask] + L)
    rp = float(np.max(np.abs(a1 - a0)))
    rm = float(np.max(np.abs(a1 + a0)))
    eps, res = (1, rp) if rp <= rm else (-1, rm)
    return ClosureRecord(bool(res <= tol), eps, res, float(L))


def angle_of(c: AsymptoticCurve) -> np.ndarray:
    """omega recovered from conj(a) a' of the samples, branch midpoint in (0, 2 pi]."""
    w = qmul(qconj(c.a), c.derivative())
    om = np.unwrap(np.arctan2(w[:, 3], w[:, 1]))
    mid = 0.5 * (om.max() + om.min())
    return om - 2 * np.pi * np.ceil(mid / (2 * np.pi) - 1.0)


def asymptotic_reparametrize(s, values, dvalues=None, step=1e-3, tol=1e-8, label=""):
    """Reparametrize a curve with <c', c j> = 0 by its asymptotic parameter.

    ``values`` are samples on the uniform grid ``s`` (containing 0);
    ``dvalues`` optional exact derivatives.  Returns ``(curve, u_of_s)`` where
    ``u_of_s`` gives the new parameter at the input samples, ``u(0) = 0``.
    """
    s = np.asarray(s, dtype=float)
    c = np.asarray(values, dtype=float)
    csp = CubicSpline(s, c, axis=0)
    dsp = CubicSpline(s, np.asarray(dvalues, dtype=float), axis=0) if dvalues is not None else csp.derivative()
    w = qmul(qconj(c), dsp(s))
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w[:, 2])) > tol * scale:
        raise ValueError(f"curve violates <c', c j> = 0 (max {np.max(np.abs(w[:, 2])):.3g})")
    speed = np.hypot(w[:, 1], w[:, 3])
    if np.min(speed) <= 1e-10:
        raise ValueError("curve is not regular")
    if not s[0] <= 0.0 <= s[-1]:
        raise ValueError("parameter domain must contain 0")
    U = CubicSpline(s, speed).antiderivative()
    u0 = float(U(0.0))
    us = U(s) - u0
    k0 = int(np.ceil(us[0] / step - 1e-9))
    k1 = int(np.floor(us[-1] / step + 1e-9))
    u = np.arange(k0, k1 + 1) * step
    sv = np.interp(u, us, s)
    spd = CubicSpline(s, speed)
    for _ in range(3):
        sv = np.clip(sv - (U(sv) - u0 - u) / spd(sv), s[0], s[-1])
    a = project_to_ads(csp(sv))
    wv = qmul(qconj(csp(sv)), dsp(sv))
    om = np.unwrap(np.arctan2(wv[:, 3], wv[:, 1]))
    mid = 0.5 * (om.max() + om.min())
    om = om - 2 * np.pi * np.ceil(mid / (2 * np.pi) - 1.0)
    return AsymptoticCurve(u, a, om, None, 1, None, label), us


def lift_causal_class(omega, tol=1e-9):
    """Causal character of a' for an asymptotic curve: <a', a'> = -cos(2w).

    Lightlike exactly where ||cot w| - 1| <= tol, timelike for |cot w| > 1.
    """
    w = np.asarray(omega, dtype=float)
    s, c = np.sin(w), np.cos(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        kabs = np.where(s == 0, np.inf, np.abs(c / np.where(s == 0, 1.0, s)))
    out = np.empty(w.shape, dtype=object)
    out[...] = CausalClass.SPACELIKE
    out[kabs > 1.0] = CausalClass.TIMELIKE
    out[np.abs(kabs - 1.0) <= tol] = CausalClass.LIGHTLIKE
    return out.item() if out.ndim == 0 else out


def verify_lift(c: AsymptoticCurve, front: FrontCurve | None = None, drop=0):
    """Residual checks for an asymptotic curve (and its projection onto ``front``)."""
    a = c.a
    da = c.derivative()
    sl = slice(drop, len(a) - drop if drop else None)
    a, da, w = a[sl], da[sl], c.omega[sl]
    checks = [
        Check("on_manifold", float(np.max(np.abs(qinner(a, a) + 1))), 1e-8),
        Check("asymptotic_orthogonality", float(np.max(np.abs(qinner(da, qmul(a, E_J))))), 1e-8),
        Check("asymptotic_parametrization",
              float(np.max(np.abs(qmul(qconj(a), da) - unit_direction(w)))), 1e-7),
        Check("speed_law", float(np.max(np.abs(qinner(da, da) + np.cos(2 * w)))), 1e-7),
    ]
    if front is not None:
        u = c.u[sl]
        checks.append(Check("projection", _projection_residual(a, front, u), 1e-6))
    return checks
