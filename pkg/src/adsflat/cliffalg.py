"""Pseudo-quaternion arithmetic on R^4_2 and the group structure of H^3_1.

An element ``a + b i + c j + d k`` is stored as a length-4 float array
``(a, b, c, d)``; stacks of elements are arrays of shape ``(..., 4)``.
The product follows the table

    i^2 = -1, j^2 = k^2 = 1,
    ij = k, ji = -k, jk = -i, kj = i, ki = j, ik = -j

and the metric is ``<x, y> = -x0 y0 - x1 y1 + x2 y2 + x3 y3``.

Every array function here is vectorized over leading axes.  The
:class:`SplitQuat` wrapper is a convenience for scalar work.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

METRIC = np.array([-1.0, -1.0, 1.0, 1.0])


def qmul(a, b):
    """Product of (stacks of) split quaternions given as ``(..., 4)`` arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 + a2 * b2 + a3 * b3,
            a0 * b1 + a1 * b0 - a2 * b3 + a3 * b2,
            a0 * b2 + a2 * b0 - a1 * b3 + a3 * b1,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        ],
        axis=-1,
    )


def qconj(z):
    z = np.asarray(z, dtype=float)
    return z * np.array([1.0, -1.0, -1.0, -1.0])


def qinner(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.sum(x * y * METRIC, axis=-1)


def qnorm2(z):
    """Re(z conj(z)) = -<z, z>."""
    return -qinner(z, z)


def project_to_ads(q):
    """Rescale onto H^3_1, ``q / sqrt(Re(q conj(q)))``.

    Raises ``ValueError`` if some element has ``Re(q conj(q)) <= 0``.
    """
    q = np.asarray(q, dtype=float)
    n2 = qnorm2(q)
    if np.any(n2 <= 0.0):
        raise ValueError("element has non-positive Re(q conj(q)); it cannot be rescaled onto H^3_1")
    return q / np.sqrt(n2)[..., None]


class SplitQuat:
    """Immutable element of R^4_2 with the pseudo-quaternion product."""

    __slots__ = ("_c",)

    def __init__(self, re=0.0, i_c=0.0, j_c=0.0, k_c=0.0):
        c = np.array([re, i_c, j_c, k_c], dtype=float)
        if not np.all(np.isfinite(c)):
            raise ValueError("split quaternion components must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("SplitQuat is immutable")

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (4,):
            raise ValueError(f"expected shape (4,), got {arr.shape}")
        return cls(*arr)

    @property
    def re(self):
        return float(self._c[0])

    @property
    def i_c(self):
        return float(self._c[1])

    @property
    def j_c(self):
        return float(self._c[2])

    @property
    def k_c(self):
        return float(self._c[3])

    @property
    def array(self):
        return self._c.copy()

    def __array__(self, dtype=None, copy=None):
        return self._c.astype(dtype) if dtype is not None else self._c.copy()

    def __iter__(self):
        return iter(self._c.tolist())

    def __repr__(self):
        a, b, c, d = self._c.tolist()
        return f"{type(self).__name__}({a!r}, {b!r}, {c!r}, {d!r})"

    def __eq__(self, other):
        if isinstance(other, SplitQuat):
            return bool(np.array_equal(self._c, other._c))
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def __add__(self, other):
        if isinstance(other, SplitQuat):
            return SplitQuat(*(self._c + other._c))
        if isinstance(other, (int, float)):
            return SplitQuat(*(self._c + np.array([other, 0, 0, 0])))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SplitQuat):
            return SplitQuat(*(self._c - other._c))
        if isinstance(other, (int, float)):
            return SplitQuat(*(self._c - np.array([other, 0, 0, 0])))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SplitQuat(*(-self._c))

    def __mul__(self, other):
        if isinstance(other, SplitQuat):
            return SplitQuat(*qmul(self._c, other._c))
        if isinstance(other, (int, float)):
            return SplitQuat(*(self._c * other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return SplitQuat(*(self._c * other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return SplitQuat(*(self._c / other))
        return NotImplemented

    def conj(self):
        return SplitQuat(*qconj(self._c))

    def inner(self, other):
        return float(qinner(self._c, np.asarray(other, dtype=float)))

    def isclose(self, other, atol=1e-12):
        return bool(np.allclose(self._c, np.asarray(other, dtype=float), rtol=0.0, atol=atol))


class AdSPoint(SplitQuat):
    """A point of H^3_1.  Construction rescales onto the quadric."""

    __slots__ = ()

    def __init__(self, re=0.0, i_c=0.0, j_c=0.0, k_c=0.0):
        q = project_to_ads(np.array([re, i_c, j_c, k_c], dtype=float))
        super().__init__(*q)


ONE = SplitQuat(1.0)
I = SplitQuat(0.0, 1.0)
J = SplitQuat(0.0, 0.0, 1.0)
K = SplitQuat(0.0, 0.0, 0.0, 1.0)


def _both_scalar(*zs):
    return all(isinstance(z, SplitQuat) for z in zs)


def mul(z1, z2):
    if _both_scalar(z1, z2):
        return z1 * z2
    return qmul(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float))


def conj(z):
    if isinstance(z, SplitQuat):
        return z.conj()
    return qconj(z)


def inner(z1, z2):
    r = qinner(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float))
    return float(r) if np.ndim(r) == 0 else r


class CausalClass(str, Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


def causal_character(v, tol=1e-12):
    """Classify by the sign of ``<v, v>``; ``|<v, v>| <= tol`` is lightlike."""
    n = qinner(np.asarray(v, dtype=float), np.asarray(v, dtype=float))
    if np.ndim(n) == 0:
        return _classify(float(n), tol)
    return np.array([_classify(x, tol) for x in np.ravel(n)], dtype=object).reshape(np.shape(n))


def _classify(n, tol):
    if abs(n) <= tol:
        return CausalClass.LIGHTLIKE
    return CausalClass.TIMELIKE if n < 0 else CausalClass.SPACELIKE


def cross(base, u, v, tol=1e-9):
    """Cross product on ``T_base H^3_1`` defined by ``<u x v, w> = det(base, u, v, w)``.

    With this definition ``i x j = k`` and ``k x i = j`` at ``base = 1``,
    while ``j x k = -i`` because ``i`` is timelike.
    """
    scalar = _both_scalar(base, u, v)
    z = np.asarray(base, dtype=float)
    u_ = np.asarray(u, dtype=float)
    v_ = np.asarray(v, dtype=float)
    if np.max(np.abs(qinner(z, u_))) > tol or np.max(np.abs(qinner(z, v_))) > tol:
        raise ValueError("cross product arguments must be tangent to H^3_1 at the base point")
    z, u_, v_ = np.broadcast_arrays(z, u_, v_)
    eye = np.eye(4)
    n = np.empty(z.shape)
    for col in range(4):
        w = np.broadcast_to(eye[col], z.shape)
        m = np.stack([z, u_, v_, w], axis=-1)
        n[..., col] = np.linalg.det(m)
    c = n * METRIC
    return SplitQuat(*c) if scalar else c


def exp_fiber(rho, t, tol=1e-10):
    """``e^{t rho}`` for pure imaginary ``rho`` with ``<rho, rho>`` in {1, -1, 0}.

    Returns ``cosh t + sinh t rho``, ``cos t + sin t rho`` or ``1 + t rho``.
    """
    scalar = isinstance(rho, SplitQuat) and np.ndim(t) == 0
    r = np.asarray(rho, dtype=float)
    if r.shape != (4,):
        raise ValueError("rho must be a single split quaternion")
    if abs(r[0]) > tol:
        raise ValueError("rho must be pure imaginary")
    n = float(qinner(r, r))
    t = np.asarray(t, dtype=float)
    if abs(n - 1.0) <= tol:
        c, s = np.cosh(t), np.sinh(t)
    elif abs(n + 1.0) <= tol:
        c, s = np.cos(t), np.sin(t)
    elif abs(n) <= tol:
        c, s = np.ones_like(t), t
    else:
        raise ValueError(f"<rho, rho> = {n:.3g} is not normalized to -1, 0 or 1")
    out = c[..., None] * np.array([1.0, 0.0, 0.0, 0.0]) + s[..., None] * r
    return SplitQuat(*out) if scalar else out


def random_ads(rng, n):
    """``n`` points of H^3_1 drawn by normalizing random timelike-norm vectors."""
    out = np.empty((0, 4))
    while len(out) < n:
        x = rng.normal(size=(2 * n, 4))
        x = x[qnorm2(x) > 0.05]
        out = np.concatenate([out, x])
    return project_to_ads(out[:n])


def left_matrix(x):
    """Matrix of ``q -> x q``."""
    return qmul(np.asarray(x, dtype=float), np.eye(4)).T


def right_matrix(x):
    """Matrix of ``q -> q x``."""
    return qmul(np.eye(4), np.asarray(x, dtype=float)).T


def algebra_suite(n=10_000, seed=0):
    """Randomized checks of the algebra identities; returns a list of ``Check``."""
    from .checks import Check

    rng = np.random.default_rng(seed)
    z1, z2, z3 = rng.normal(size=(3, n, 4))
    scale = 1.0 + np.abs(z1).max(axis=-1) * np.abs(z2).max(axis=-1)

    checks = []
    table = {
        ("i", "i"): -ONE, ("i", "j"): K, ("i", "k"): -J,
        ("j", "i"): -K, ("j", "j"): ONE, ("j", "k"): -I,
        ("k", "i"): J, ("k", "j"): I, ("k", "k"): ONE,
    }
    basis = {"i": I, "j": J, "k": K}
    err = max(np.max(np.abs((basis[a] * basis[b]).array - v.array)) for (a, b), v in table.items())
    checks.append(Check("multiplication_table", err, 0.0))

    lhs = qconj(qmul(z1, z2))
    rhs = qmul(qconj(z2), qconj(z1))
    checks.append(Check("conj_anti_homomorphism", float(np.max(np.abs(lhs - rhs).max(-1) / scale)), 1e-12))

    zz = qmul(z1, qconj(z1))
    n1 = qinner(z1, z1)
    res_i = np.maximum(np.abs(zz[:, 0] + n1), np.abs(zz[:, 1:]).max(-1))
    res_i2 = np.abs(qinner(qconj(z1), qconj(z1)) - n1)
    checks.append(Check("prop1_i_norm", float(np.max(np.maximum(res_i, res_i2) / scale)), 1e-10))

    res_ii = np.abs(qinner(z1, z2) + qmul(z1, qconj(z2))[:, 0])
    checks.append(Check("prop1_ii_inner_product", float(np.max(res_ii / scale)), 1e-10))

    a = random_ads(rng, n)
    inv_res = np.abs(qmul(a, qconj(a)) - np.array([1.0, 0, 0, 0])).max(-1)
    checks.append(Check("prop1_iii_inverse_is_conjugate", float(np.max(inv_res)), 1e-10))

    b = random_ads(rng, n)
    eta, rho = rng.normal(size=(2, n, 4))
    bi = qinner(qmul(qmul(a, eta), b), qmul(qmul(a, rho), b)) - qinner(eta, rho)
    mag = (1.0 + np.abs(a).max(-1) ** 2 * np.abs(b).max(-1) ** 2) * (1.0 + np.abs(eta).max(-1) * np.abs(rho).max(-1))
    checks.append(Check("prop1_iv_bi_invariance", float(np.max(np.abs(bi) / mag)), 1e-10))

    assoc = qmul(qmul(z1, z2), z3) - qmul(z1, qmul(z2, z3))
    mag3 = 1.0 + np.abs(z1).max(-1) * np.abs(z2).max(-1) * np.abs(z3).max(-1)
    checks.append(Check("associativity", float(np.max(np.abs(assoc).max(-1) / mag3)), 1e-12))
    return checks
