"""Named constructions: flat tori, Hopf cylinders and tori, and the
counterexamples to the Dajczer-Nomizu questions Q1, Q2, Q4."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .checks import Check
from .cliffalg import CausalClass, exp_fiber, qconj, qinner, qmul
from .fronts import (
    FrontCurve,
    arccot,
    check_admissible,
    constant_curvature_front,
    make_front_from_curvature,
    prepare_front,
)
from .hopf import HopfAxis, classify_base, hopf_map
from .lift import (
    AsymptoticCurve,
    asymptotic_lift,
    asymptotic_reparametrize,
    closure_detect,
    lift_causal_class,
)
from .surface import (
    FlatSurfacePatch,
    Verdict,
    completeness_check,
    synthesize,
    torus_check,
    verify_patch,
)


@dataclass
class ScenarioResult:
    name: str
    patch: FlatSurfacePatch | None
    checks: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)

    @property
    def all_pass(self):
        return all(c.passed for c in self.checks)


def _lift(front: FrontCurve) -> AsymptoticCurve:
    return asymptotic_lift(prepare_front(front))


def _speed2(c: AsymptoticCurve):
    da = c.derivative()
    return qinner(da, da)


def _period_grid(c: AsymptoticCurve, n=201):
    return np.linspace(0.0, c.period, n)


# ------------------------------------------------------------------ flat tori


def flat_torus(k1=3.0, k2=1.4, n=201, tol=1e-6) -> ScenarioResult:
    """Torus from two closed constant-curvature fronts with k1 > k2 > 1."""
    g1 = constant_curvature_front(k=k1, label=f"circle k={k1}")
    g2 = constant_curvature_front(k=k2, label=f"circle k={k2}")
    res = torus_from_fronts(g1, g2, n, tol)
    res.details.update(k1=k1, k2=k2)
    return res


def torus_from_fronts(g1: FrontCurve, g2: FrontCurve, n=201, tol=1e-6) -> ScenarioResult:
    """Flat surface over two closed fronts, sampled over full periods, with the torus checks."""
    if not (g1.closed and g2.closed):
        raise ValueError("torus construction needs two closed fronts")
    adm = check_admissible(g1, g2)
    a1, a2 = _lift(adm.gamma1), _lift(adm.gamma2)
    patch = synthesize(a1, a2, _period_grid(a1, n), _period_grid(a2, n), label="flat-torus")
    rec = torus_check(patch, tol)
    checks = [
        Check("closure_a1", rec.closure1.residual, tol),
        Check("closure_a2", rec.closure2.residual, tol),
        Check("torus_verdict", 0.0 if rec.is_torus else 1.0, 0.0),
        Check("beta_min_speed", -min(rec.beta_min_speed), -0.1),
        Check("beta_identity", rec.beta_identity_residual, 1e-7),
        Check("beta_closure", rec.beta_closure_residual, tol),
    ]
    details = {
        "admissible_margin": adm.margin, "swapped": adm.swapped,
        "epsilon": [rec.closure1.epsilon, rec.closure2.epsilon],
        "front_periods": [rec.closure1.period, rec.closure2.period],
        "beta_min_speed": list(rec.beta_min_speed), "min_sin": rec.min_sin,
        "is_torus": rec.is_torus,
    }
    return ScenarioResult("flat-torus", patch, checks, details, {"a1": a1, "a2": a2})


# ------------------------------------------------------------------ Hopf cylinders


@dataclass
class HopfCylinder:
    patch: FlatSurfacePatch
    axis: HopfAxis
    omega0: float
    fiber_k: float
    fiber_omega_measured: float
    sigma_residual: float


def fiber_curve(axis, v_span=(-2.0, 2.0), step=1e-3, closed=None) -> tuple[AsymptoticCurve, float]:
    """The h_rho fiber through 1 as an asymptotic curve a2 with f = a1 conj(a2).

    The axis must lie in span{i, k}.  Writing rho = lam (cos w0 i + sin w0 k)
    with sin w0 <= 0, a2(t) = exp(-t rho) so omega^{a2} = w0 + pi and the
    fiber front has curvature cot(w0).
    """
    ax = axis if isinstance(axis, HopfAxis) else HopfAxis.from_vector(axis)
    rho = np.array(ax.rho)
    if abs(rho[2]) > 1e-12:
        raise ValueError("Hopf axis must lie in span{i, k}; move it there by a rigid motion first")
    lam = float(np.hypot(rho[1], rho[3]))
    w0 = float(np.arctan2(rho[3], rho[1]))
    if np.sin(w0) > 1e-15:
        rho, w0 = -rho, w0 - np.pi
    if closed is None:
        closed = ax.norm_class == -1
    if closed:
        if ax.norm_class != -1:
            raise ValueError("only timelike axes have closed fibers")
        T = 2 * np.pi
        nseg = 2 * int(np.ceil(T * lam / step / 2))  # even, so the half period is a node
        t = np.linspace(0.0, T, 4 * nseg + 1)
        ustep = T * lam / nseg
    else:
        t = np.arange(int(round(v_span[0] / lam / step * 4)), int(round(v_span[1] / lam / step * 4)) + 1) * step / 4
        ustep = step
    c = exp_fiber(rho, -t)
    dc = qmul(c, -rho)
    curve, _ = asymptotic_reparametrize(t, c, dc, step=ustep, label="fiber")
    if closed:
        P = lam * T
        if abs(curve.u[-1] - P) > 1e-9:
            raise RuntimeError("fiber grid does not close")
        rec = closure_detect(curve, P / 2)
        curve = AsymptoticCurve(curve.u, curve.a, curve.omega, P, 1, rec, "fiber")
    return curve, w0


def hopf_cylinder(axis, front1: FrontCurve, u=None, v=None, n=201) -> HopfCylinder:
    """Hopf cylinder h_rho^{-1}(sigma) with sigma = h_rho(a1), a1 the lift of ``front1``."""
    ax = axis if isinstance(axis, HopfAxis) else HopfAxis.from_vector(axis)
    closed = ax.norm_class == -1
    a2, w0 = fiber_curve(ax, closed=closed)
    a1 = _lift(front1)
    if u is None:
        u = _period_grid(a1, n) if a1.period is not None else np.linspace(-2, 2, n)
    if v is None:
        v = _period_grid(a2, n) if a2.period is not None else np.linspace(-2, 2, n)
    patch = synthesize(a1, a2, u, v, label="hopf-cylinder")
    # the v-curves are fibers: h_rho(f(u, v)) does not depend on v
    hv = hopf_map(ax, patch.f)
    sig = float(np.max(np.abs(hv - hv[:, :1, :])))
    w_meas = float(np.mean(a2.omega)) - np.pi
    k = np.cos(w0) / np.sin(w0) if abs(np.sin(w0)) > 1e-15 else np.inf
    return HopfCylinder(patch, ax, w0, float(k), w_meas, sig)


def _dictionary_row(ax: HopfAxis, w_meas: float, tol=1e-8):
    """Causal class of the axis against |cot w0| of the fiber front."""
    s, c = np.sin(w_meas), np.cos(w_meas)
    kabs = np.inf if abs(s) < 1e-300 else abs(c / s)
    if ax.norm_class == -1:
        ok = kabs > 1 + tol
        res = 0.0 if ok else 1.0
    elif ax.norm_class == 0:
        res = abs(kabs - 1.0)
        ok = res <= tol
    else:
        ok = kabs < 1 - tol
        res = 0.0 if ok else 1.0
    return ok, res, kabs


def hopf_dictionary(k_sigma=3.0) -> ScenarioResult:
    """Fiber-front curvature for timelike, lightlike and spacelike axes."""
    front = constant_curvature_front(k=k_sigma)
    axes = {
        "timelike-i": np.array([0.0, 1.0, 0.0, 0.0]),
        "timelike-k1.4": np.array([0.0, np.cos(arccot(1.4)), 0.0, np.sin(arccot(1.4))]),
        "lightlike-i+k": np.array([0.0, 1.0, 0.0, 1.0]),
        "spacelike-k": np.array([0.0, 0.0, 0.0, 1.0]),
    }
    checks, details, patches = [], {}, {}
    for name, vec in axes.items():
        cyl = hopf_cylinder(vec, front)
        ok, res, kabs = _dictionary_row(cyl.axis, cyl.fiber_omega_measured)
        checks.append(Check(f"dictionary_{name}", res, 1e-8, ok))
        checks.append(Check(f"fiber_invariance_{name}", cyl.sigma_residual, 1e-10))
        checks.append(Check(f"lift_class_{name}", 0.0 if _class_matches(cyl) else 1.0, 0.0))
        details[name] = {
            "norm_class": cyl.axis.norm_class, "base": classify_base(cyl.axis).value,
            "omega0": cyl.omega0, "fiber_k": cyl.fiber_k, "abs_k_measured": kabs,
            "min_sin": cyl.patch.min_sin,
        }
        patches[name] = cyl.patch
    return ScenarioResult("hopf-dictionary", patches["timelike-i"], checks, details, patches)


def _class_matches(cyl: HopfCylinder):
    expected = {-1: CausalClass.TIMELIKE, 0: CausalClass.LIGHTLIKE, 1: CausalClass.SPACELIKE}[cyl.axis.norm_class]
    return lift_causal_class(cyl.fiber_omega_measured, tol=1e-8) == expected


def hopf_torus(k_sigma=3.0, k_fiber=1.4, n=201) -> ScenarioResult:
    """Lorentzian Hopf torus: timelike axis (fiber front k_fiber > 1) over a closed sigma."""
    w = float(arccot(k_fiber))
    axis = np.array([0.0, np.cos(w), 0.0, np.sin(w)])
    cyl = hopf_cylinder(axis, constant_curvature_front(k=k_sigma), n=n)
    rec = torus_check(cyl.patch)
    checks = [
        Check("torus_verdict", 0.0 if rec.is_torus else 1.0, 0.0),
        Check("closure_a1", rec.closure1.residual, 1e-6),
        Check("closure_a2", rec.closure2.residual, 1e-6),
        Check("beta_min_speed", -min(rec.beta_min_speed), -0.1),
        Check("fiber_invariance", cyl.sigma_residual, 1e-10),
    ]
    # a geodesic sigma does not close
    open_cyl = hopf_cylinder(np.array([0.0, 1.0, 0.0, 0.0]),
                             make_front_from_curvature(np.pi / 2, span=(-2.1, 2.1)))
    rec_open = torus_check(open_cyl.patch)
    checks.append(Check("geodesic_sigma_not_torus", 1.0 if rec_open.is_torus else 0.0, 0.0))
    details = {"k_sigma": k_sigma, "k_fiber": k_fiber, "fiber_k": cyl.fiber_k,
               "epsilon": [rec.closure1.epsilon, rec.closure2.epsilon],
               "beta_min_speed": list(rec.beta_min_speed), "is_torus": rec.is_torus,
               "min_sin": rec.min_sin}
    return ScenarioResult("hopf-torus", cyl.patch, checks, details)


# ------------------------------------------------------------------ Q4


def dn_q4_counterexample(bands=True, span=2.0, n=201) -> ScenarioResult:
    """Both asymptotic curves timelike, surface still a regular flat immersion."""
    pad = 0.1
    if bands:
        g1 = make_front_from_curvature(lambda s: arccot(2.75 + 0.25 * np.sin(s)), span=(-span - pad, span + pad))
        g2 = make_front_from_curvature(lambda s: arccot(1.35 + 0.15 * np.sin(s)), span=(-span - pad, span + pad))
    else:
        g1 = constant_curvature_front(k=3.0, span=(-span - pad, span + pad))
        g2 = constant_curvature_front(k=1.4, span=(-span - pad, span + pad))
    adm = check_admissible(g1, g2)
    a1, a2 = _lift(adm.gamma1), _lift(adm.gamma2)
    grid = np.linspace(-span, span, n)
    patch = synthesize(a1, a2, grid, grid, label="dn-q4")
    m1, m2 = float(np.max(_speed2(a1))), float(np.max(_speed2(a2)))
    classes = set(lift_causal_class(a1.omega).tolist()) | set(lift_causal_class(a2.omega).tolist())
    cert = completeness_check(patch.omega1, patch.omega2, patch.u, patch.v)
    checks = [
        Check("a1_timelike", m1, -0.1),
        Check("a2_timelike", m2, -0.1),
        Check("causal_classes_timelike", 0.0 if classes == {CausalClass.TIMELIKE} else 1.0, 0.0),
        Check("min_sin", -patch.min_sin, -0.05),
        Check("completeness_certified", 0.0 if cert.verdict is Verdict.CERTIFIED else 1.0, 0.0),
    ] + verify_patch(patch, stride=4)
    details = {"bands": bands, "max_speed2_a1": m1, "max_speed2_a2": m2, "min_sin": patch.min_sin,
               "admissible_margin": adm.margin, "completeness": cert.verdict.value,
               "c1": cert.c1, "c2": cert.c2}
    # negative control: k2 = 0 gives the classical timelike/spacelike pair
    ctrl = float(np.min(-np.cos(2 * arccot(0.0))))
    details["control_k2_zero_speed2"] = ctrl
    return ScenarioResult("dn-q4", patch, checks, details, {"a1": a1, "a2": a2})


# ------------------------------------------------------------------ Q2


def q2_omega1(c0):
    """w1 with cos(2 w1) = c0 / (1 + u^2), values in (0, pi/4)."""
    return lambda u: 0.5 * np.arccos(c0 / (1.0 + np.asarray(u, float) ** 2))


def q2_diagonal_integrand(c0):
    """Length element 2 cos(pi/4 + w1) = sqrt(2 (1 - sin 2 w1)) of t -> (t, t), cancellation free."""
    def g(t):
        x = c0 / (1.0 + t * t)
        return x * np.sqrt(2.0 / (1.0 + np.sqrt(1.0 - x * x)))
    return g


def q2_diagonal_length(c0, T):
    g = q2_diagonal_integrand(c0)
    edges = [0.0] + [b for b in (1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6) if b < T] + [T]
    return float(sum(quad(g, a, b, limit=200, epsabs=1e-14, epsrel=1e-13)[0] for a, b in zip(edges[:-1], edges[1:])))


def q2_axis_integral(c0, T):
    """int_0^T sqrt(cos 2 w1) du (diverges like sqrt(c0) log T)."""
    g = lambda u: np.sqrt(c0 / (1.0 + u * u))  # noqa: E731
    edges = [0.0] + [b for b in (1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6) if b < T] + [T]
    return float(sum(quad(g, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])))


def _unit_speed_resample(c: AsymptoticCurve, sign_speed: float, ds=1e-3):
    """Resample an asymptotic curve at unit Lorentzian speed; returns (s, b, u_of_s)."""
    sp = np.sqrt(np.maximum(sign_speed * _speed2(c), 0.0))
    from scipy.integrate import cumulative_simpson
    i0 = c.index_of(0.0)
    S = np.zeros_like(c.u)
    S[i0:] = cumulative_simpson(sp[i0:], x=c.u[i0:], initial=0.0)
    S[: i0 + 1] = -cumulative_simpson(sp[: i0 + 1][::-1], x=-c.u[: i0 + 1][::-1], initial=0.0)[::-1]
    k0, k1 = int(np.ceil(S[0] / ds)), int(np.floor(S[-1] / ds))
    s = np.arange(k0, k1 + 1) * ds
    u_of_s = np.interp(s, S, c.u)
    return s, c.a_at(u_of_s), u_of_s


def dn_q2_counterexample(c0=0.99, T=1e4, span=3.0, n=201) -> ScenarioResult:
    """Regular flat immersion whose metric is incomplete: the diagonal diverges with finite length."""
    if not 0 < c0 < 1:
        raise ValueError("c0 must lie in (0, 1)")
    w1 = q2_omega1(c0)
    w2 = lambda v: np.pi / 2 + w1(v)  # noqa: E731
    pad = 0.1
    g1 = make_front_from_curvature(w1, span=(-span - pad, span + pad))
    g2 = make_front_from_curvature(lambda s: np.pi / 2 - w1(s), span=(-span - pad, span + pad))
    a1, a2 = _lift(g1), _lift(g2)
    grid = np.linspace(-span, span, n)
    patch = synthesize(a1, a2, grid, grid, label="dn-q2")

    L3, L4, LT = q2_diagonal_length(c0, 1e3), q2_diagonal_length(c0, 1e4), q2_diagonal_length(c0, T)
    A3, A4 = q2_axis_integral(c0, 1e3), q2_axis_integral(c0, 1e4)
    big = np.linspace(-T, T, 201)
    cert = completeness_check(w1, w2, big, big)

    # b-curves: unit-speed versions of a1 (timelike) and a2 (spacelike), re-asymptotized
    worst = np.inf
    for c, sg in ((a1, -1.0), (a2, 1.0)):
        s, b, _ = _unit_speed_resample(c, sg)
        _, u_of_s = asymptotic_reparametrize(s, b)
        worst = min(worst, float(np.min(np.abs(u_of_s) - np.abs(s))))
    checks = [
        Check("diagonal_converges", abs(L3 - L4), 1e-2),
        Check("axis_integral_growth", -(A4 - A3), -1.1),
        Check("suspected_incomplete", 0.0 if cert.verdict is Verdict.SUSPECTED_INCOMPLETE else 1.0, 0.0),
        Check("diagonal_witness", 0.0 if cert.witness and cert.witness.get("path") == "diagonal(+1,+1)" else 1.0, 0.0),
        Check("u_dominates_s", -worst, 1e-9),
        Check("omega_sum_in_range", float(max(0.0, -np.min(patch.omega), np.max(patch.omega) - np.pi)), 0.0),
    ] + verify_patch(patch, stride=4)
    details = {"c0": c0, "T": T, "L_1e3": L3, "L_1e4": L4, "L_T": LT, "axis_1e3": A3, "axis_1e4": A4,
               "completeness": cert.verdict.value, "witness": cert.witness, "min_sin": patch.min_sin}
    return ScenarioResult("dn-q2", patch, checks, details, {"a1": a1, "a2": a2})


# ------------------------------------------------------------------ Q1


def dn_q1_demo(span=2.0, n=201) -> ScenarioResult:
    """Timelike b1 (k = 2 circle lift at unit speed) and spacelike b2 = exp(t k) give an
    immersion defined on the whole grid."""
    circle = _lift(constant_curvature_front(k=2.0))
    c = float(np.cos(2 * arccot(2.0)))
    ds = 1e-3
    S = span + 0.2
    s = np.arange(-int(round(S / ds)), int(round(S / ds)) + 1) * ds
    b1 = circle.a_at(s / np.sqrt(c))
    b2 = exp_fiber(np.array([0.0, 0, 0, 1.0]), s)
    db2 = qmul(b2, np.array([0.0, 0, 0, 1.0]))
    hyp = [
        Check("b1_unit_timelike", float(np.max(np.abs(qinner(circle.a_at(s / np.sqrt(c), 1), circle.a_at(s / np.sqrt(c), 1)) / c + 1))), 1e-7),
        Check("b2_unit_spacelike", float(np.max(np.abs(qinner(db2, db2) - 1))), 1e-12),
    ]
    c1, us1 = asymptotic_reparametrize(s, b1)
    c2, us2 = asymptotic_reparametrize(s, b2, db2)
    grid = np.linspace(-span, span, n)
    swapped = False
    try:
        patch = synthesize(c1, c2, grid, grid, label="dn-q1")
    except ValueError:
        patch = synthesize(c2, c1, grid, grid, label="dn-q1")
        swapped = True
    d = verify_patch(patch, stride=4)
    h = 1e-3
    fu = (patch.f_grid(grid[1:-1] + h, grid[1:-1]) - patch.f_grid(grid[1:-1] - h, grid[1:-1])) / (2 * h)
    fv = (patch.f_grid(grid[1:-1], grid[1:-1] + h) - patch.f_grid(grid[1:-1], grid[1:-1] - h)) / (2 * h)
    sv = np.linalg.svd(np.stack([fu, fv], axis=-1), compute_uv=False)
    rank_min = float(sv[..., -1].min())
    cert = completeness_check(patch.omega1, patch.omega2, patch.u, patch.v)
    checks = hyp + [
        Check("min_sin_positive", -patch.min_sin, 0.0, patch.min_sin > 0),
        Check("immersion_rank", -rank_min, 0.0, rank_min > 1e-3),
        Check("u_dominates_s_b1", float(-np.min(np.abs(us1) - np.abs(s))), 1e-9),
        Check("completeness_certified", 0.0 if cert.verdict is Verdict.CERTIFIED else 1.0, 0.0),
    ] + d
    details = {"swapped": swapped, "min_sin": patch.min_sin, "min_singular_value": rank_min,
               "completeness": cert.verdict.value, "c1": cert.c1, "c2": cert.c2}
    return ScenarioResult("dn-q1", patch, checks, details, {"a1": c1, "a2": c2})


SCENARIOS = {
    "flat-torus": flat_torus,
    "hopf-torus": hopf_torus,
    "hopf-dictionary": hopf_dictionary,
    "dn-q4": dn_q4_counterexample,
    "dn-q2": dn_q2_counterexample,
    "dn-q1": dn_q1_demo,
}


def run_scenario(name, **params) -> ScenarioResult:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    return fn(**params)
