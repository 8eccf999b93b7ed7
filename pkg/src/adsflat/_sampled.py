from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline


class SampledCurve:
    """Cubic interpolant of uniformly sampled values, optionally periodic.

    For a periodic curve the last sample must repeat the first one
    (``s[-1] - s[0] == period``); it is overwritten with the first sample so
    the periodic spline is well posed.
    """

    def __init__(self, s, values, period=None):
        s = np.asarray(s, dtype=float)
        v = np.array(values, dtype=float)
        if s.ndim != 1 or len(s) < 4:
            raise ValueError("need at least 4 samples on a 1-D grid")
        if v.shape[0] != len(s):
            raise ValueError("values must have one row per sample")
        self.s = s
        self.period = None if period is None else float(period)
        if self.period is not None:
            if abs((s[-1] - s[0]) - self.period) > 1e-9 * max(1.0, self.period):
                raise ValueError("periodic samples must span exactly one period")
            v[-1] = v[0]
            self._sp = CubicSpline(s, v, bc_type="periodic", axis=0)
        else:
            self._sp = CubicSpline(s, v, axis=0)
        self.values = v

    def _wrap(self, x):
        x = np.asarray(x, dtype=float)
        if self.period is None:
            return x
        s0 = self.s[0]
        return s0 + np.mod(x - s0, self.period)

    def __call__(self, x, nu=0):
        return self._sp(self._wrap(x), nu)

    @property
    def domain(self):
        return float(self.s[0]), float(self.s[-1])
