"""Flat Lorentzian immersions f(u, v) = a1(u) conj(a2(v)) into H^3_1.

With ``w1 = omega^{a1}`` and ``w2 = pi - omega^{a2}``, the immersion is regular
where ``sin(w1 + w2) > 0``.  In these characteristic coordinates

    I   = -cos(2 w1) du^2 - 2 cos(w1 - w2) du dv - cos(2 w2) dv^2
    II  = 2 sin(w1 + w2) du dv
    III =  cos(2 w1) du^2 - 2 cos(w1 - w2) du dv + cos(2 w2) dv^2
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import CubicSpline

from .checks import Check
from .cliffalg import cross, qconj, qinner, qmul
from .fronts import FrontCurve, prepare_front
from .hopf import double_cover
from .lift import AsymptoticCurve, asymptotic_lift, closure_detect

E_J = np.array([0.0, 0.0, 1.0, 0.0])


class NonImmersionError(ValueError):
    def __init__(self, msg, offending=()):
        super().__init__(msg)
        self.offending = list(offending)


def default_grid(lo=-2.0, hi=2.0, n=201):
    return np.linspace(lo, hi, n)


@dataclass(frozen=True, eq=False)
class FlatSurfacePatch:
    a1: AsymptoticCurve
    a2: AsymptoticCurve
    u: np.ndarray
    v: np.ndarray
    omega2_shift: float
    label: str = ""

    def omega1_at(self, u, nu=0):
        return self.a1.omega_at(u, nu)

    def omega2_at(self, v, nu=0):
        w = -self.a2.omega_at(v, nu)
        return w + (np.pi + self.omega2_shift if nu == 0 else 0.0)

    @cached_property
    def omega1(self):
        return self.omega1_at(self.u)

    @cached_property
    def omega2(self):
        return self.omega2_at(self.v)

    @cached_property
    def omega(self):
        return self.omega1[:, None] + self.omega2[None, :]

    def f_grid(self, u, v):
        """f on the product grid u x v (shape (len(u), len(v), 4))."""
        A1 = self.a1.a_at(np.atleast_1d(u))
        A2 = qconj(self.a2.a_at(np.atleast_1d(v)))
        return qmul(A1[:, None, :], A2[None, :, :])

    def N_grid(self, u, v):
        A1 = qmul(self.a1.a_at(np.atleast_1d(u)), E_J)
        A2 = qconj(self.a2.a_at(np.atleast_1d(v)))
        return qmul(A1[:, None, :], A2[None, :, :])

    def f_at(self, u, v):
        """f at paired points (broadcast u against v)."""
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return qmul(self.a1.a_at(u), qconj(self.a2.a_at(v)))

    def N_at(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return qmul(qmul(self.a1.a_at(u), E_J), qconj(self.a2.a_at(v)))

    @cached_property
    def f(self):
        return self.f_grid(self.u, self.v)

    @cached_property
    def N(self):
        return self.N_grid(self.u, self.v)

    @property
    def min_sin(self):
        return float(np.min(np.sin(self.omega)))


def _omega2_shift(a2: AsymptoticCurve):
    w0 = np.pi - a2.omega[a2.index_of(0.0)]
    return -2 * np.pi * np.ceil((w0 - np.pi) / (2 * np.pi))


def synthesize(a1: AsymptoticCurve, a2: AsymptoticCurve, u=None, v=None, check=True, label=""):
    """Build f = a1 conj(a2) and N = a1 j conj(a2) on the grid u x v.

    Both curves are first left-translated so a1(0) = a2(0) = 1, which puts
    f(0,0) = 1 and N(0,0) = j.  Raises :class:`NonImmersionError` if
    ``sin(w1 + w2) <= 0`` at some node.
    """
    u = default_grid() if u is None else np.asarray(u, dtype=float)
    v = default_grid() if v is None else np.asarray(v, dtype=float)
    for name, g, c in (("u", u, a1), ("v", v, a2)):
        if c.period is None and (g.min() < c.u[0] - 1e-12 or g.max() > c.u[-1] + 1e-12):
            raise ValueError(f"{name} grid exceeds the curve domain [{c.u[0]}, {c.u[-1]}]")
    a1n, a2n = a1.normalized(), a2.normalized()
    patch = FlatSurfacePatch(a1n, a2n, u, v, _omega2_shift(a2n), label)
    if check:
        s = np.sin(patch.omega)
        if np.any(s <= 0):
            bad = np.argwhere(s <= 0)
            nodes = [(float(u[i]), float(v[j])) for i, j in bad[:50]]
            raise NonImmersionError(
                f"sin(w1 + w2) <= 0 at {len(bad)} nodes, e.g. (u, v) = {nodes[0]}", nodes)
    return patch


@dataclass(frozen=True)
class FormsSample:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    e: np.ndarray
    f2: np.ndarray
    g: np.ndarray
    l: np.ndarray  # noqa: E741
    m: np.ndarray
    n: np.ndarray

    def max_diff(self, other: "FormsSample"):
        return max(float(np.max(np.abs(np.asarray(getattr(self, k)) - np.asarray(getattr(other, k)))))
                   for k in ("E", "F", "G", "e", "f2", "g", "l", "m", "n"))


def closed_forms(omega1, omega2, u=None, v=None) -> FormsSample:
    """Analytic I, II, III coefficients.  omega1/omega2 are callables or values."""
    w1 = omega1(u) if callable(omega1) else np.asarray(omega1, dtype=float)
    w2 = omega2(v) if callable(omega2) else np.asarray(omega2, dtype=float)
    w1, w2 = np.broadcast_arrays(w1, w2)
    c12 = np.cos(w1 - w2)
    return FormsSample(
        E=-np.cos(2 * w1), F=-c12, G=-np.cos(2 * w2),
        e=np.zeros_like(w1), f2=np.sin(w1 + w2), g=np.zeros_like(w1),
        l=np.cos(2 * w1), m=-c12, n=np.cos(2 * w2),
    )


def _check_interior(patch, u, v, h):
    for c, x, name in ((patch.a1, u, "u"), (patch.a2, v, "v")):
        if c.period is None and (np.min(x) - 2 * h < c.u[0] or np.max(x) + 2 * h > c.u[-1]):
            raise ValueError(f"{name} too close to the curve boundary for step {h}")


def _derivs(patch, u, v, h):
    """Central differences of f and N on the product grid u x v."""
    u = np.atleast_1d(np.asarray(u, float))
    v = np.atleast_1d(np.asarray(v, float))
    _check_interior(patch, u, v, h)
    F, Nn = patch.f_grid, patch.N_grid
    f0 = F(u, v)
    fpu, fmu = F(u + h, v), F(u - h, v)
    fpv, fmv = F(u, v + h), F(u, v - h)
    fpp, fpm, fmp, fmm = F(u + h, v + h), F(u + h, v - h), F(u - h, v + h), F(u - h, v - h)
    N0 = Nn(u, v)
    Npu, Nmu, Npv, Nmv = Nn(u + h, v), Nn(u - h, v), Nn(u, v + h), Nn(u, v - h)
    return dict(
        f=f0, N=N0,
        fu=(fpu - fmu) / (2 * h), fv=(fpv - fmv) / (2 * h),
        fuu=(fpu - 2 * f0 + fmu) / h**2, fvv=(fpv - 2 * f0 + fmv) / h**2,
        fuv=(fpp - fpm - fmp + fmm) / (4 * h * h),
        Nu=(Npu - Nmu) / (2 * h), Nv=(Npv - Nmv) / (2 * h),
    )


def measured_forms(patch: FlatSurfacePatch, u, v, h=1e-3, derivs=None) -> FormsSample:
    """I = <df, df>, II = -<df, dN>, III = <dN, dN> from central differences on u x v."""
    d = derivs or _derivs(patch, u, v, h)
    fu, fv, Nu, Nv = d["fu"], d["fv"], d["Nu"], d["Nv"]
    return FormsSample(
        E=qinner(fu, fu), F=qinner(fu, fv), G=qinner(fv, fv),
        e=-qinner(fu, Nu), f2=-qinner(fu, Nv), g=-qinner(fv, Nv),
        l=qinner(Nu, Nu), m=qinner(Nu, Nv), n=qinner(Nv, Nv),
    )


def gauss_weingarten_residual(patch: FlatSurfacePatch, u, v, h=1e-3, derivs=None):
    """Max-norm residuals of the Gauss and Weingarten equations on u x v.

    ``w1'``, ``w2'`` are taken from central differences of the angle functions.
    """
    u = np.atleast_1d(np.asarray(u, float))
    v = np.atleast_1d(np.asarray(v, float))
    d = derivs or _derivs(patch, u, v, h)
    w1 = patch.omega1_at(u)[:, None]
    w2 = patch.omega2_at(v)[None, :]
    dw1 = ((patch.omega1_at(u + h) - patch.omega1_at(u - h)) / (2 * h))[:, None]
    dw2 = ((patch.omega2_at(v + h) - patch.omega2_at(v - h)) / (2 * h))[None, :]
    w = w1 + w2
    s, cot = np.sin(w), np.cos(w) / np.sin(w)
    c12 = np.cos(w1 - w2)
    X = lambda c: np.asarray(c)[..., None]  # noqa: E731
    f, N, fu, fv = d["f"], d["N"], d["fu"], d["fv"]
    rhs = {
        "f_uu": X(dw1 * cot) * fu - X(dw1 / s) * fv - X(np.cos(2 * w1)) * f,
        "f_uv": -X(c12) * f + X(s) * N,
        "f_vv": -X(dw2 / s) * fu + X(dw2 * cot) * fv - X(np.cos(2 * w2)) * f,
        "N_u": X(c12 / s) * fu - X(np.cos(2 * w1) / s) * fv,
        "N_v": -X(np.cos(2 * w2) / s) * fu + X(c12 / s) * fv,
    }
    lhs = {"f_uu": d["fuu"], "f_uv": d["fuv"], "f_vv": d["fvv"], "N_u": d["Nu"], "N_v": d["Nv"]}
    res = {k: float(np.max(np.abs(lhs[k] - rhs[k]))) for k in rhs}
    res["max"] = max(res.values())
    return res


def normal_identity_residual(patch, u, v, h=1e-3, derivs=None):
    """max |N - f_u x f_v / sin(w1 + w2)| on u x v."""
    d = derivs or _derivs(patch, u, v, h)
    w = patch.omega1_at(np.atleast_1d(u))[:, None] + patch.omega2_at(np.atleast_1d(v))[None, :]
    c = cross(d["f"], d["fu"], d["fv"], tol=1e-4)
    return float(np.max(np.abs(d["N"] - c / np.sin(w)[..., None])))


def left_invariance_residual(patch, u, h=1e-3):
    """max |N_u - f_u x N| along v = 0."""
    d = _derivs(patch, u, np.array([0.0]), h)
    c = cross(d["f"], d["fu"], d["N"], tol=1e-4)
    return float(np.max(np.abs(d["Nu"] - c)))


# ---------------------------------------------------------------- chart


def _cumint(y, x):
    """Integral from the node x = 0 (cumulative Simpson in both directions)."""
    x = np.asarray(x, float)
    i0 = int(np.argmin(np.abs(x)))
    if abs(x[i0]) > 1e-9:
        raise ValueError("chart grid must contain 0")
    out = np.zeros_like(np.asarray(y, float))
    if i0 < len(x) - 1:
        out[i0:] = cumulative_simpson(y[i0:], x=x[i0:], initial=0.0)
    if i0 > 0:
        out[: i0 + 1] = -cumulative_simpson(y[: i0 + 1][::-1], x=-x[: i0 + 1][::-1], initial=0.0)[::-1]
    return out


@dataclass(frozen=True, eq=False)
class CoordinateChart:
    """(x, y) = (X1(u) + X2(v), Y1(u) + Y2(v)), with X1' = cos w1, Y1' = sin w1,
    X2' = cos w2, Y2' = -sin w2 and x(0,0) = y(0,0) = 0."""

    u: np.ndarray
    v: np.ndarray
    X1: np.ndarray
    Y1: np.ndarray
    X2: np.ndarray
    Y2: np.ndarray

    @property
    def x(self):
        return self.X1[:, None] + self.X2[None, :]

    @property
    def y(self):
        return self.Y1[:, None] + self.Y2[None, :]

    @cached_property
    def _sp(self):
        return (CubicSpline(self.u, np.stack([self.X1, self.Y1], -1)),
                CubicSpline(self.v, np.stack([self.X2, self.Y2], -1)))

    def xy(self, u, v):
        s1, s2 = self._sp
        a, b = s1(np.asarray(u, float)), s2(np.asarray(v, float))
        return a[..., 0] + b[..., 0], a[..., 1] + b[..., 1]


def coordinate_chart(omega1, omega2, u, v, tol=1e-9) -> CoordinateChart:
    """Chart from angle samples.  1-D inputs are w1(u), w2(v); 2-D inputs on
    the grid u x v must depend on one variable each (checked)."""
    w1 = np.asarray(omega1, float)
    w2 = np.asarray(omega2, float)
    if w1.ndim == 2:
        if np.max(np.abs(w1 - w1[:, :1])) > tol:
            raise ValueError("omega1 depends on v: chart integrals are path dependent")
        w1 = w1[:, 0]
    if w2.ndim == 2:
        if np.max(np.abs(w2 - w2[:1, :])) > tol:
            raise ValueError("omega2 depends on u: chart integrals are path dependent")
        w2 = w2[0, :]
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    return CoordinateChart(u, v, _cumint(np.cos(w1), u), _cumint(np.sin(w1), u),
                           _cumint(np.cos(w2), v), -_cumint(np.sin(w2), v))


def patch_chart(patch: FlatSurfacePatch) -> CoordinateChart:
    """Chart of a patch on the fine grids of its asymptotic curves."""
    return coordinate_chart(patch.a1.omega, np.pi - patch.a2.omega + patch.omega2_shift,
                            patch.a1.u, patch.a2.u)


def chart_checks(chart: CoordinateChart, omega1, omega2):
    """Chart gradient against (cos w1, sin w1), (cos w2, -sin w2) and the pullback of -dx^2 + dy^2."""
    w1, w2 = np.asarray(omega1, float), np.asarray(omega2, float)
    hu, hv = chart.u[1] - chart.u[0], chart.v[1] - chart.v[0]
    xu = (chart.X1[2:] - chart.X1[:-2]) / (2 * hu)
    yu = (chart.Y1[2:] - chart.Y1[:-2]) / (2 * hu)
    xv = (chart.X2[2:] - chart.X2[:-2]) / (2 * hv)
    yv = (chart.Y2[2:] - chart.Y2[:-2]) / (2 * hv)
    a, b = w1[1:-1], w2[1:-1]
    grad = max(np.max(np.abs(xu - np.cos(a))), np.max(np.abs(yu - np.sin(a))),
               np.max(np.abs(xv - np.cos(b))), np.max(np.abs(yv + np.sin(b))))
    E = -xu**2 + yu**2
    G = -xv**2 + yv**2
    Fm = -xu[:, None] * xv[None, :] + yu[:, None] * yv[None, :]
    iso = max(np.max(np.abs(E + np.cos(2 * a))), np.max(np.abs(G + np.cos(2 * b))),
              np.max(np.abs(Fm + np.cos(a[:, None] - b[None, :]))))
    origin = max(abs(chart.X1[np.argmin(np.abs(chart.u))] + chart.X2[np.argmin(np.abs(chart.v))]),
                 abs(chart.Y1[np.argmin(np.abs(chart.u))] + chart.Y2[np.argmin(np.abs(chart.v))]))
    return [Check("chart_gradient", float(grad), 1e-5), Check("chart_isometry", float(iso), 1e-5),
            Check("chart_origin", float(origin), 1e-14)]


# ---------------------------------------------------------------- completeness


class Verdict(str, Enum):
    CERTIFIED = "certified"
    SUSPECTED_INCOMPLETE = "suspected-incomplete"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    c1: float
    c2: float
    witness: dict | None = None
    lengths: dict = field(default_factory=dict)


def _diag_integrand(w1, w2, s1, s2):
    if s1 * s2 > 0:
        return lambda t: 2.0 * abs(np.cos(0.5 * (w1(s1 * t) + w2(s2 * t))))
    return lambda t: 2.0 * abs(np.sin(0.5 * (w1(s1 * t) + w2(s2 * t))))


def _staircase(W, du, dv, s12):
    """Min-length monotone paths (moves (1,0), (0,1), (1,1)) from node (0, 0).

    ``W`` holds omega on the cells, so the node table is one larger each way.
    """
    n, m = W.shape[0] + 1, W.shape[1] + 1
    D = np.full((n, m), np.inf)
    diag = np.sqrt(np.maximum(du[:, None] ** 2 + dv[None, :] ** 2
                              + 2 * s12 * du[:, None] * dv[None, :] * np.cos(W), 0.0))
    C = np.concatenate([[0.0], np.cumsum(dv)])
    for i in range(n):
        if i == 0:
            cand = np.full(m, np.inf)
            cand[0] = 0.0
        else:
            cand = D[i - 1] + du[i - 1]
            cand[1:] = np.minimum(cand[1:], D[i - 1, :-1] + diag[i - 1])
        D[i] = C + np.minimum.accumulate(cand - C)
    return D


def completeness_check(omega1, omega2, u, v, margin=1e-2, rel_tol=1e-3) -> Certificate:
    """Certify completeness of the flat metric, or look for a short divergent path.

    ``omega1``/``omega2`` are callables or samples on the 1-D grids ``u``, ``v``
    (both containing 0).  If ``margin <= w1 + w2 <= pi - margin`` on the grid
    the chart is a global diffeomorphism.  Otherwise the four diagonals and
    monotone staircase paths are probed in the Riemannian metric
    ``du^2 + 2 cos(w) du dv + dv^2``; a path whose length grows by less than
    ``rel_tol`` times its coordinate extent between T/10 and T is reported.
    """
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    if callable(omega1):
        f1, W1 = omega1, np.asarray(omega1(u), float)
    else:
        W1 = np.asarray(omega1, float)
        f1 = lambda t: np.interp(t, u, W1)  # noqa: E731
    if callable(omega2):
        f2, W2 = omega2, np.asarray(omega2(v), float)
    else:
        W2 = np.asarray(omega2, float)
        f2 = lambda t: np.interp(t, v, W2)  # noqa: E731
    W = W1[:, None] + W2[None, :]
    c1, c2 = float(W.min()), float(W.max())
    if c1 >= margin and c2 <= np.pi - margin:
        return Certificate(Verdict.CERTIFIED, c1, c2)

    lengths = {}
    best = None
    for s1 in (1, -1):
        for s2 in (1, -1):
            T = min(u.max() if s1 > 0 else -u.min(), v.max() if s2 > 0 else -v.min())
            if T <= 0:
                continue
            g = _diag_integrand(f1, f2, s1, s2)
            inner = quad(g, 0.0, T / 10, limit=400)[0]
            gain = quad(g, T / 10, T, limit=400)[0]
            ratio = gain / (np.sqrt(2) * 0.9 * T)
            key = f"diagonal({s1:+d},{s2:+d})"
            lengths[key] = {"T": float(T), "length": float(inner + gain), "gain_ratio": float(ratio)}
            if ratio < rel_tol and (best is None or ratio < best[1]["gain_ratio"]):
                best = (key, lengths[key])
    if best is not None:
        w = dict(kind="diagonal", path=best[0], **best[1])
        return Certificate(Verdict.SUSPECTED_INCOMPLETE, c1, c2, w, lengths)

    i0, j0 = int(np.argmin(np.abs(u))), int(np.argmin(np.abs(v)))
    for s1 in (1, -1):
        for s2 in (1, -1):
            uu = u[i0:] if s1 > 0 else u[: i0 + 1][::-1]
            vv = v[j0:] if s2 > 0 else v[: j0 + 1][::-1]
            if len(uu) < 3 or len(vv) < 3:
                continue
            Wq = W[i0:, :] if s1 > 0 else W[: i0 + 1][::-1]
            Wq = Wq[:, j0:] if s2 > 0 else Wq[:, : j0 + 1][:, ::-1]
            Wm = 0.25 * (Wq[:-1, :-1] + Wq[1:, :-1] + Wq[:-1, 1:] + Wq[1:, 1:])
            D = _staircase(Wm, np.abs(np.diff(uu)), np.abs(np.diff(vv)), s1 * s2)
            T = min(abs(uu[-1]), abs(vv[-1]))
            iu = np.abs(uu) <= T / 10
            iv = np.abs(vv) <= T / 10
            ku, kv = int(np.nonzero(iu)[0].max()), int(np.nonzero(iv)[0].max())
            d_in = min(D[ku, : kv + 1].min(), D[: ku + 1, kv].min())
            d_out = min(D[-1, :].min(), D[:, -1].min())
            ratio = (d_out - d_in) / (0.9 * T)
            key = f"staircase({s1:+d},{s2:+d})"
            lengths[key] = {"T": float(T), "length": float(d_out), "gain_ratio": float(ratio)}
            if ratio < rel_tol:
                w = dict(kind="staircase", path=key, **lengths[key])
                return Certificate(Verdict.SUSPECTED_INCOMPLETE, c1, c2, w, lengths)
    return Certificate(Verdict.UNKNOWN, c1, c2, None, lengths)


# ---------------------------------------------------------------- tori


@dataclass(frozen=True)
class TorusRecord:
    is_torus: bool
    closure1: object
    closure2: object
    beta_min_speed: tuple
    beta_identity_residual: float
    beta_closure_residual: float
    min_sin: float


def _beta(c: AsymptoticCurve):
    a = c.a
    da = c.derivative()
    beta = qmul(qmul(a, E_J), qconj(a))
    dbeta = qmul(qmul(da, E_J), qconj(a)) + qmul(qmul(a, E_J), qconj(da))
    ident = float(np.max(np.abs(qmul(qconj(beta), dbeta) + 2 * qmul(a, qconj(da)))))
    return beta, dbeta, ident


def torus_check(patch: FlatSurfacePatch, tol=1e-6) -> TorusRecord:
    """Compact (torus) iff both asymptotic curves close; binormals must be closed regular curves."""
    recs = []
    for c in (patch.a1, patch.a2):
        L = c.closure.period if c.closure is not None else None
        recs.append(closure_detect(c, L, tol) if L is not None else None)
    speeds, idents, bclos = [], [], []
    for c, r in zip((patch.a1, patch.a2), recs):
        beta, dbeta, ident = _beta(c)
        speeds.append(float(np.min(np.linalg.norm(dbeta, axis=-1))))
        idents.append(ident)
        if r is not None:
            m = int(round(r.period / c.step))
            bclos.append(float(np.max(np.abs(beta[m:] - beta[: len(beta) - m]))))
    closed = all(r is not None and r.closed for r in recs)
    is_torus = bool(closed and min(speeds) > 0.1 and max(bclos, default=np.inf) <= tol and patch.min_sin > 0)
    return TorusRecord(is_torus, recs[0], recs[1], tuple(speeds), max(idents),
                       max(bclos) if bclos else float("inf"), patch.min_sin)


# ---------------------------------------------------------------- round trip


def boundary_fronts(patch: FlatSurfacePatch):
    """Fronts of the boundary asymptotic curves f(u, 0) and conj(f(0, v))."""
    u, v = patch.a1.u, patch.a2.u
    b1 = patch.f_at(u, 0.0)
    b2 = qconj(patch.f_at(0.0, v))
    out = []
    for s, b, c in ((u, b1, patch.a1), (v, b2, patch.a2)):
        lp = double_cover(b)
        per = c.period
        if per is not None and c.closure is not None:
            # one front period is enough; the lift doubles it again
            m = int(round(c.closure.period / c.step))
            s, lp_g, lp_n = s[: m + 1], lp.gamma[: m + 1], lp.nu[: m + 1]
            out.append(FrontCurve(s, lp_g, lp_n, c.closure.period))
        else:
            out.append(FrontCurve(s, lp.gamma, lp.nu))
    return out


def round_trip(patch: FlatSurfacePatch):
    """Extract boundary curves, project to fronts, re-derive angles, re-lift and
    re-synthesize on the same grid.  Returns (new_patch, max deviation of f)."""
    g1, g2 = boundary_fronts(patch)
    c1 = asymptotic_lift(prepare_front(g1))
    c2 = asymptotic_lift(prepare_front(g2))
    new = synthesize(c1, c2, patch.u, patch.v, label=patch.label)
    return new, float(np.max(np.abs(new.f - patch.f)))


# ---------------------------------------------------------------- verification


def verify_patch(patch: FlatSurfacePatch, h=1e-3, stride=1, tol_forms=1e-4, tol_gw=1e-3):
    """Residual checks on the interior nodes (every ``stride``-th one)."""
    u = patch.u[1:-1:stride]
    v = patch.v[1:-1:stride]
    d = _derivs(patch, u, v, h)
    meas = measured_forms(patch, u, v, h, derivs=d)
    ref = closed_forms(patch.omega1_at(u)[:, None], patch.omega2_at(v)[None, :])
    gw = gauss_weingarten_residual(patch, u, v, h, derivs=d)
    f, N = d["f"], d["N"]
    sinw = np.sin(patch.omega1_at(u)[:, None] + patch.omega2_at(v)[None, :])
    normal_rel = max(np.max(np.abs(qinner(N, N) - 1)), np.max(np.abs(qinner(N, f))),
                     np.max(np.abs(qinner(N, d["fu"]))), np.max(np.abs(qinner(N, d["fv"]))))
    i0, j0 = int(np.argmin(np.abs(patch.u))), int(np.argmin(np.abs(patch.v)))
    base = max(np.max(np.abs(patch.f[i0, j0] - [1, 0, 0, 0])), np.max(np.abs(patch.N[i0, j0] - E_J)))
    chart = patch_chart(patch)
    checks = [
        Check("base_point", float(base), 1e-12),
        Check("on_manifold", float(np.max(np.abs(qinner(patch.f, patch.f) + 1))), 1e-8),
        Check("sine_positivity", float(-np.min(np.sin(patch.omega))), 0.0, bool(np.min(np.sin(patch.omega)) > 0)),
        Check("forms_agreement", meas.max_diff(ref), tol_forms),
        Check("asymptotic_directions", float(max(np.max(np.abs(meas.e)), np.max(np.abs(meas.g)))), 1e-5),
        Check("gauss_identity", float(np.max(np.abs(meas.e * meas.g - meas.f2**2 + sinw**2))), 1e-4),
        Check("gauss_weingarten", gw["max"], tol_gw),
        Check("normal_relations", float(normal_rel), 1e-6),
        Check("normal_identity", normal_identity_residual(patch, u, v, h, derivs=d), 1e-5),
        Check("left_invariance", left_invariance_residual(patch, u, h), 1e-5),
    ]
    checks += chart_checks(chart, patch.a1.omega, np.pi - patch.a2.omega + patch.omega2_shift)
    return checks
