"""Wave fronts in H^2: sampled Legendrian curves (gamma, nu), their projective
geodesic curvature, orientation, Sasaki parametrization and admissibility.

A front is stored as uniform samples of ``gamma`` (in H^2) and ``nu`` (in
S^2_1).  Curvature is carried by the angle ``omega`` with ``k = cot(omega)``,
so the value infinity at a cusp is just ``sin(omega) = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from ._sampled import SampledCurve
from .cliffalg import qconj, qinner, qmul
from .hopf import legendrian_preimage

E_I = np.array([0.0, 1.0, 0.0, 0.0])
E_J = np.array([0.0, 0.0, 1.0, 0.0])
E_K = np.array([0.0, 0.0, 0.0, 1.0])

DEFAULT_STEP = 1e-3
SINGULAR_SPEED = 1e-6


class BranchError(ValueError):
    """The curvature image covers the whole projective line."""


class InadmissiblePairError(ValueError):
    def __init__(self, msg, offending=()):
        super().__init__(msg)
        self.offending = list(offending)


def arccot(k):
    """Branch of cot^-1 with values in (0, pi); ``inf`` maps to 0."""
    return np.arctan2(1.0, np.asarray(k, dtype=float))


@dataclass(frozen=True, eq=False)
class FrontCurve:
    """Uniformly sampled front ``s -> (gamma(s), nu(s))``.

    ``period`` is set for closed fronts; then ``s`` spans exactly one period
    and the last sample repeats the first.
    """

    s: np.ndarray
    gamma: np.ndarray
    nu: np.ndarray
    period: float | None = None
    label: str = ""

    def __repr__(self):
        kind = f"closed, period={self.period:.6g}" if self.closed else "open"
        return (f"FrontCurve({self.label!r}, s=[{self.s[0]:.6g}, {self.s[-1]:.6g}], "
                f"n={len(self.s)}, {kind})")

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        g = np.asarray(self.gamma, dtype=float)
        n = np.asarray(self.nu, dtype=float)
        if s.ndim != 1 or g.shape != (len(s), 4) or n.shape != (len(s), 4):
            raise ValueError("FrontCurve needs s of shape (n,) and gamma, nu of shape (n, 4)")
        ds = np.diff(s)
        if np.any(ds <= 0) or np.ptp(ds) > 1e-9 * max(1.0, abs(ds[0])) + 1e-12:
            raise ValueError("front samples must be uniform and increasing")
        for name, arr in (("s", s), ("gamma", g), ("nu", n)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def step(self):
        return float(self.s[1] - self.s[0])

    @property
    def closed(self):
        return self.period is not None

    @cached_property
    def _gsp(self):
        return SampledCurve(self.s, self.gamma, self.period)

    @cached_property
    def _nsp(self):
        return SampledCurve(self.s, self.nu, self.period)

    def gamma_at(self, s, nu=0):
        return self._gsp(s, nu)

    def nu_at(self, s, nu=0):
        return self._nsp(s, nu)

    def derivatives(self):
        """Spline derivatives gamma', nu' at the samples."""
        return self._gsp(self.s, 1), self._nsp(self.s, 1)

    def sasaki_speed2(self):
        dg, dn = self.derivatives()
        return qinner(dg, dg) + qinner(dn, dn)

    def legendrian_residuals(self):
        g, n = self.gamma, self.nu
        dg, dn = self.derivatives()
        return {
            "gamma_norm": float(np.max(np.abs(qinner(g, g) + 1))),
            "nu_norm": float(np.max(np.abs(qinner(n, n) - 1))),
            "gamma_nu": float(np.max(np.abs(qinner(g, n)))),
            "legendrian": float(np.max(np.abs(qinner(dg, n)))),
            "min_sasaki_speed2": float(np.min(qinner(dg, dg) + qinner(dn, dn))),
        }

    def index_of(self, s0=0.0):
        i = int(np.argmin(np.abs(self.s - s0)))
        if abs(self.s[i] - s0) > 1e-9 * max(1.0, self.step):
            raise ValueError(f"parameter {s0} is not a grid node")
        return i


def _pq(front: FrontCurve, s=None):
    """p = <gamma', nu gamma>, q = -<nu', nu gamma>; omega = atan2(p, q)."""
    if s is None:
        g, n = front.gamma, front.nu
        dg, dn = front.derivatives()
    else:
        g, n = front.gamma_at(s), front.nu_at(s)
        dg, dn = front.gamma_at(s, 1), front.nu_at(s, 1)
    t = qmul(n, g)
    return qinner(dg, t), -qinner(dn, t)


@dataclass(frozen=True)
class ProjectiveCurvature:
    """k = cos/sin as a point of the projective line; arrays are allowed."""

    cos: float | np.ndarray
    sin: float | np.ndarray

    @property
    def is_infinite(self):
        out = np.abs(self.sin) <= 1e-12
        return bool(out) if np.ndim(out) == 0 else out

    @property
    def k(self):
        c, s = np.asarray(self.cos), np.asarray(self.sin)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.where(np.abs(s) <= 1e-12, np.inf, c / np.where(s == 0, 1.0, s))
        return float(k) if k.ndim == 0 else k


def geodesic_curvature(front: FrontCurve, s) -> ProjectiveCurvature:
    """Projective geodesic curvature at ``s`` as the unit pair (cos w, sin w)."""
    p, q = _pq(front, np.asarray(s, dtype=float))
    r = np.hypot(p, q)
    c, sn = q / r, p / r
    if np.ndim(c) == 0:
        return ProjectiveCurvature(float(c), float(sn))
    return ProjectiveCurvature(c, sn)


def fd_geodesic_curvature(front: FrontCurve, s, h=1e-3):
    """``<gamma'', nu> / |gamma'|^2`` from central differences of gamma."""
    s = np.asarray(s, dtype=float)
    gp, g0, gm = front.gamma_at(s + h), front.gamma_at(s), front.gamma_at(s - h)
    d1 = (gp - gm) / (2 * h)
    d2 = (gp - 2 * g0 + gm) / h**2
    return qinner(d2, front.nu_at(s)) / qinner(d1, d1)


@dataclass(frozen=True, eq=False)
class AngleFunction:
    s: np.ndarray
    omega: np.ndarray
    period: float | None
    singular_params: tuple = ()
    branch_c: float | None = None

    @property
    def regular(self):
        return not self.singular_params

    @cached_property
    def spline(self):
        return SampledCurve(self.s, self.omega, self.period)

    def __call__(self, s, nu=0):
        return self.spline(s, nu)

    @property
    def curvature(self):
        with np.errstate(divide="ignore"):
            return np.cos(self.omega) / np.sin(self.omega)


def _raw_omega(front):
    p, q = _pq(front)
    w = np.unwrap(np.arctan2(p, q))
    return p, q, w


def _singular_params(front, p):
    """Zeros of p located by sign changes and refined on the spline."""
    dg = front.derivatives()[0]
    speed = np.sqrt(np.maximum(qinner(dg, dg), 0.0))
    roots = []
    for i in np.nonzero(np.sign(p[:-1]) * np.sign(p[1:]) < 0)[0]:
        a, b = front.s[i], front.s[i + 1]
        roots.append(brentq(lambda x: float(_pq(front, np.array(x))[0]), a, b, xtol=1e-14))
    for i in np.nonzero(speed <= SINGULAR_SPEED)[0]:
        if not any(abs(front.s[i] - r) < 2 * front.step for r in roots):
            roots.append(float(front.s[i]))
    if front.closed and roots:
        roots = [r for r in roots if r < front.s[0] + front.period - 1e-12]
    return tuple(sorted(roots))


def _singular_branch(w):
    mid = 0.5 * (w.max() + w.min())
    m = np.ceil((mid - 1.5 * np.pi) / (2 * np.pi))
    mid2 = mid - 2 * np.pi * m
    if not (0.5 * np.pi < mid2 <= 1.5 * np.pi):
        return None, None
    return w - 2 * np.pi * m, 1.5 * np.pi - mid2


def angle_function(front: FrontCurve) -> AngleFunction:
    """Continuous angle ``omega`` with ``cot(omega) = k_g``.

    Regular fronts get ``omega`` in (0, pi).  Singular fronts get a branch in
    ``(pi - c, 2 pi - c)`` whose sampled range is centered in that window;
    cusps then sit at ``omega = pi``.  The front must be positively oriented
    (see :func:`positive_normal`).
    """
    p, q, w = _raw_omega(front)
    sing = _singular_params(front, p)
    if not sing:
        if np.all(p > 0):
            w = w - 2 * np.pi * np.floor(w[0] / (2 * np.pi))
            return AngleFunction(front.s, w, front.period)
        raise ValueError("front is not positively oriented; apply positive_normal first")
    if np.ptp(w) >= np.pi:
        raise BranchError("curvature image covers the projective line; no branch of cot^-1 exists")
    w2, c = _singular_branch(w)
    if w2 is None:
        raise ValueError("singular front is not positively oriented (cusps have cos(omega) = 1)")
    return AngleFunction(front.s, w2, front.period, sing, float(c))


def negate_normal(front: FrontCurve) -> FrontCurve:
    return FrontCurve(front.s, front.gamma, -front.nu, front.period, front.label)


def reverse_parameter(front: FrontCurve) -> FrontCurve:
    """s -> -s; closed fronts keep the grid [0, L] by periodicity."""
    if front.closed:
        return FrontCurve(front.s, front.gamma[::-1], front.nu[::-1], front.period, front.label)
    return FrontCurve(-front.s[::-1], front.gamma[::-1], front.nu[::-1], None, front.label)


def positive_normal(front: FrontCurve) -> FrontCurve:
    """Orient a front positively.

    Regular fronts: negate ``nu`` if needed so ``sin(omega) > 0``.
    Singular fronts: reverse the parameter if needed so every cusp has
    ``cos(omega) = -1`` (negating ``nu`` alone cannot change the sign of
    ``cos(omega)`` at a cusp).
    """
    p, q, w = _raw_omega(front)
    sing = _singular_params(front, p)
    if not sing:
        if np.all(p > 0):
            return front
        if np.all(p < 0):
            return negate_normal(front)
        raise ValueError("front orientation is undetermined")
    if np.ptp(w) >= np.pi:
        raise BranchError("curvature image covers the projective line; positive normal undefined")
    cs = np.sign(_pq(front, np.asarray(sing))[1])
    if np.all(cs < 0):
        return front
    if np.all(cs > 0):
        return reverse_parameter(front)
    raise BranchError("cusps with both signs of cos(omega)")


def _renormalize(g, n):
    g = g / np.sqrt(-qinner(g, g))[:, None]
    n = n - qinner(g, n)[:, None] * (-g)
    n = n / np.sqrt(qinner(n, n))[:, None]
    return g, n


def sasaki_reparametrize(front: FrontCurve, step=DEFAULT_STEP, newton_iters=3) -> FrontCurve:
    """Reparametrize by half the Sasaki arc length, so ``<g',g'> + <n',n'> = 4``.

    The new parameter is zero where the old one is zero.
    """
    s = front.s
    sig = np.sqrt(np.maximum(front.sasaki_speed2(), 0.0))
    if np.min(sig) <= 1e-8:
        raise ValueError("front is not an immersion (Sasaki speed vanishes)")
    if front.closed:
        sig = sig.copy()
        sig[-1] = sig[0]
        sp = CubicSpline(s, 0.5 * sig, bc_type="periodic")
    else:
        sp = CubicSpline(s, 0.5 * sig)
    U = sp.antiderivative()
    if s[0] <= 0.0 <= s[-1]:
        u_zero = float(U(0.0))
    else:
        raise ValueError("front parameter domain must contain 0")
    Us = U(s) - u_zero

    if front.closed:
        if abs(s[0]) > 1e-12:
            raise ValueError("closed fronts must be sampled on [0, L]")
        total = float(Us[-1])
        n = max(8, int(np.ceil(total / step)))
        h = total / n
        u = np.arange(n + 1) * h
        u[-1] = total
        period = total
    else:
        k0 = int(np.ceil(Us[0] / step - 1e-9))
        k1 = int(np.floor(Us[-1] / step + 1e-9))
        u = np.arange(k0, k1 + 1) * step
        u = u[(u >= Us[0]) & (u <= Us[-1])]
        period = None

    sv = np.interp(u, Us, s)
    for _ in range(newton_iters):
        sv = sv - (U(sv) - u_zero - u) / sp(sv)
        sv = np.clip(sv, s[0], s[-1])
    g, nn = _renormalize(front.gamma_at(sv), front.nu_at(sv))
    if front.closed:
        g[-1], nn[-1] = g[0], nn[0]
    return FrontCurve(u, g, nn, period, front.label)


def normalize_base(front: FrontCurve) -> FrontCurve:
    """Rigid motion z -> conj(q) z q taking (gamma(0), nu(0)) to (i, k)."""
    i0 = front.index_of(0.0)
    q = legendrian_preimage(front.gamma[i0], front.nu[i0])
    qc = qconj(q)
    g = qmul(qmul(qc, front.gamma), q)
    n = qmul(qmul(qc, front.nu), q)
    g[:, 0] = 0.0
    n[:, 0] = 0.0
    return FrontCurve(front.s, g, n, front.period, front.label)


def prepare_front(front: FrontCurve, step=DEFAULT_STEP) -> FrontCurve:
    """Base point (i, k), positive normal and Sasaki parameter, in that order."""
    f = positive_normal(normalize_base(front))
    spd = f.sasaki_speed2()
    if np.max(np.abs(spd - 4.0)) > 1e-6 or (not f.closed and abs(f.step - step) > 1e-12):
        f = sasaki_reparametrize(f, step)
    return f


def frame_rhs(omega: Callable):
    """Right-hand side of the frame equations for (gamma, T, nu) in R^12."""

    def rhs(s, y):
        w = float(omega(s))
        c, sn = 2 * np.cos(w), 2 * np.sin(w)
        g, t, n = y[0:4], y[4:8], y[8:12]
        return np.concatenate([sn * t, sn * g + c * n, -c * t])

    return rhs


@dataclass(frozen=True)
class AngleSamples:
    s0: float
    step: float
    omega: np.ndarray = field(repr=False)

    def spline(self, period=None):
        s = self.s0 + self.step * np.arange(len(self.omega))
        return SampledCurve(s, np.asarray(self.omega, dtype=float), period)


def make_front_from_curvature(omega, span=None, L=None, closed=False, step=DEFAULT_STEP,
                              label="", rtol=1e-12, atol=1e-13, closure_tol=1e-6) -> FrontCurve:
    """Integrate the hyperbolic frame equations for a prescribed angle function.

    ``omega`` is a callable of the parameter or an :class:`AngleSamples`.
    The parameter of the result is the Sasaki/2 parameter and the base point
    is (i, k).  Open fronts need ``span=(a, b)`` with a <= 0 <= b; closed
    fronts need the period ``L`` and are checked for closure.
    """
    if isinstance(omega, AngleSamples):
        omega = omega.spline(L if closed else None)
    elif np.isscalar(omega):
        w0 = float(omega)
        omega = lambda s, _w=w0: _w  # noqa: E731
    y0 = np.concatenate([E_I, E_J, E_K])
    rhs = frame_rhs(omega)

    if closed:
        if L is None or L <= 0:
            raise ValueError("closed fronts need a positive period L")
        n = max(8, int(np.ceil(L / step)))
        s = np.linspace(0.0, L, n + 1)
        sol = solve_ivp(rhs, (0.0, L), y0, method="DOP853", t_eval=s, rtol=rtol, atol=atol)
        if not sol.success:
            raise RuntimeError(f"frame integration failed: {sol.message}")
        Y = sol.y.T
        gap = np.max(np.abs(Y[-1] - Y[0]))
        if gap > closure_tol:
            raise ValueError(f"front does not close over L = {L}: endpoint gap {gap:.3g}")
        Y[-1] = Y[0]
        period = float(L)
    else:
        if span is None:
            raise ValueError("open fronts need span=(a, b)")
        a, b = map(float, span)
        if not a <= 0.0 <= b or b - a <= 0:
            raise ValueError("span must contain 0 and be non-degenerate")
        k0, k1 = int(round(a / step)), int(round(b / step))
        s = np.arange(k0, k1 + 1) * step
        parts = []
        if k0 < 0:
            back = s[s <= 0][::-1]
            sol = solve_ivp(rhs, (0.0, back[-1]), y0, method="DOP853", t_eval=back, rtol=rtol, atol=atol)
            if not sol.success:
                raise RuntimeError(f"frame integration failed: {sol.message}")
            parts.append(sol.y.T[::-1][:-1])
        fwd = s[s >= 0]
        if len(fwd) > 1:
            sol = solve_ivp(rhs, (0.0, fwd[-1]), y0, method="DOP853", t_eval=fwd, rtol=rtol, atol=atol)
            if not sol.success:
                raise RuntimeError(f"frame integration failed: {sol.message}")
            parts.append(sol.y.T)
        else:
            parts.append(y0[None, :])
        Y = np.concatenate(parts)
        period = None
    g, n = _renormalize(Y[:, 0:4], Y[:, 8:12])
    return FrontCurve(s, g, n, period, label)


def circle_period(k):
    """Period (Sasaki/2 parameter) of the constant-curvature front, or None if it is open."""
    w = float(arccot(k))
    c2 = np.cos(2 * w)
    if c2 <= 1e-12:  # horocycles (|k| = 1) and hypercycles are open
        return None
    return float(np.pi / np.sqrt(c2))


def constant_curvature_front(k=None, omega=None, span=None, step=DEFAULT_STEP, closed=None, label=""):
    """Front with constant curvature k = cot(omega); circles (|k| > 1) close."""
    if omega is None:
        if k is None:
            raise ValueError("give k or omega")
        omega = float(arccot(k))
    k = np.cos(omega) / np.sin(omega) if np.sin(omega) != 0 else np.inf
    L = circle_period(k)
    if closed is None:
        closed = L is not None and span is None
    if closed:
        if L is None:
            raise ValueError(f"constant curvature {k} gives an open front")
        return make_front_from_curvature(omega, L=L, closed=True, step=step, label=label)
    return make_front_from_curvature(omega, span=span or (-2.0, 2.0), step=step, label=label)


def parallel_front(front: FrontCurve, d: float) -> FrontCurve:
    """gamma_d = cosh d gamma + sinh d nu, nu_d = sinh d gamma + cosh d nu."""
    p, _, _ = _raw_omega(front)
    if _singular_params(front, p):
        raise ValueError("parallel_front expects a regular front")
    ch, sh = np.cosh(d), np.sinh(d)
    g = ch * front.gamma + sh * front.nu
    n = sh * front.gamma + ch * front.nu
    return FrontCurve(front.s, g, n, front.period, front.label)


@dataclass(frozen=True, eq=False)
class AdmissiblePair:
    gamma1: FrontCurve = field(repr=False)
    gamma2: FrontCurve = field(repr=False)
    kind: str  # "ordered" (k1 > k2) or "projective" (disjoint ranges through infinity)
    margin: float  # min k1 - max k2 for ordered pairs, nan otherwise
    angle_margin: float
    swapped: bool


def _admissible_angles(w1, w2):
    """Smallest slack in ``max w1 < min w2`` and ``max w2 < min w1 + pi`` over 2 pi shifts of w2."""
    best = -np.inf
    for m in (-1, 0, 1):
        v = w2 + 2 * np.pi * m
        slack = min(v.min() - w1.max(), w1.min() + np.pi - v.max())
        best = max(best, slack)
    return best


def check_admissible(g1: FrontCurve, g2: FrontCurve, n_samples: int | None = None) -> AdmissiblePair:
    """Certify that the curvatures of g1 and g2 never coincide (on samples).

    ``g1`` must be regular.  When ``g2`` is regular as well the certificate is
    the strict ordering k1 > k2; otherwise the projective ranges must be
    disjoint.  If the order fails the roles are swapped.
    """
    a1, a2 = angle_function(g1), angle_function(g2)
    w1, w2 = a1.omega, a2.omega
    if n_samples:
        w1 = w1[np.linspace(0, len(w1) - 1, min(n_samples, len(w1))).astype(int)]
        w2 = w2[np.linspace(0, len(w2) - 1, min(n_samples, len(w2))).astype(int)]

    def certificate(b1, b2, f1, f2, swapped):
        slack = _admissible_angles(b1, b2)
        if slack <= 0:
            return None
        kind = "ordered" if (f1 is not None and f2 is not None and b2.max() < np.pi) else "projective"
        margin = float(1 / np.tan(b1.max()) - 1 / np.tan(b2.min())) if kind == "ordered" else float("nan")
        return AdmissiblePair(f1, f2, kind, margin, float(slack), swapped)

    if a1.regular:
        c = certificate(w1, w2, g1, g2, False)
        if c is not None:
            return c
    if a2.regular:
        c = certificate(w2, w1, g2, g1, True)
        if c is not None:
            return c
    if not a1.regular and not a2.regular:
        raise InadmissiblePairError("both fronts are singular; one regular front is required")
    # collect offending pairs on a coarse grid
    ia = np.linspace(0, len(a1.omega) - 1, 40).astype(int)
    ib = np.linspace(0, len(a2.omega) - 1, 40).astype(int)
    W1, W2 = np.meshgrid(a1.omega[ia], a2.omega[ib], indexing="ij")
    bad = np.sin(W1 + np.pi - W2) <= 0
    pairs = [(float(a1.s[ia[i]]), float(a2.s[ib[j]])) for i, j in zip(*np.nonzero(bad))]
    raise InadmissiblePairError("curvature ranges overlap; the pair is not admissible", pairs[:50])
