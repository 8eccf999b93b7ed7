"""File output: grid CSV, OBJ meshes, curve CSV and JSON verification reports.

Every writer goes through a temporary file in the target directory followed
by ``os.replace`` so readers never see a partial file.
"""
from __future__ import annotations

import io
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .hopf import h

SCHEMA_VERSION = 1
GRID_HEADER = "u,v,x0,x1,x2,x3,N0,N1,N2,N3,omega1,omega2"
CURVE_HEADER = "u,a0,a1,a2,a3,omega"
FMT = "%.17g"

_UMASK = os.umask(0)
os.umask(_UMASK)


def atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_UMASK)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _table(header, cols):
    buf = io.StringIO()
    np.savetxt(buf, np.column_stack(cols), fmt=FMT, delimiter=",", header=header, comments="")
    return buf.getvalue()


def grid_csv_text(patch) -> str:
    """Row-major over (u, v): u varies slowest."""
    U, V = np.meshgrid(patch.u, patch.v, indexing="ij")
    W1 = np.broadcast_to(patch.omega1[:, None], U.shape)
    W2 = np.broadcast_to(patch.omega2[None, :], U.shape)
    f = patch.f.reshape(-1, 4)
    N = patch.N.reshape(-1, 4)
    return _table(GRID_HEADER, [U.ravel(), V.ravel(), f, N, W1.ravel(), W2.ravel()])


def write_grid_csv(patch, path):
    return atomic_write(path, grid_csv_text(patch))


def curve_csv_text(curve) -> str:
    return _table(CURVE_HEADER, [curve.u, curve.a, curve.omega])


def write_curve_csv(curve, path):
    return atomic_write(path, curve_csv_text(curve))


def _omega_color(w):
    # blue at 0, red at pi
    t = np.clip(np.asarray(w) / np.pi, 0.0, 1.0)
    return np.column_stack([t, 0.2 * np.ones_like(t), 1.0 - t])


def obj_text(patch, projection="drop-x1", name=None) -> str:
    """Triangle mesh of the patch in a 3-D chart.

    ``drop-x1`` keeps (x0, x2, x3); ``hopf`` uses the (i, j, k) part of
    h(f) with vertex colors from omega = omega1 + omega2.
    """
    nu, nv = len(patch.u), len(patch.v)
    f = patch.f.reshape(-1, 4)
    if projection == "drop-x1":
        P = f[:, [0, 2, 3]]
        colors = None
    elif projection == "hopf":
        P = h(f)[:, 1:]
        colors = _omega_color(patch.omega.ravel())
    else:
        raise ValueError(f"unknown projection {projection!r}")
    idx = np.arange(nu * nv).reshape(nu, nv) + 1
    a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
    c, d = idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
    tris = np.concatenate([np.column_stack([a, b, c]), np.column_stack([a, c, d])])
    buf = io.StringIO()
    buf.write(f"o {name or patch.label or 'patch'}\n")
    if colors is None:
        np.savetxt(buf, P, fmt="v " + " ".join([FMT] * 3))
    else:
        np.savetxt(buf, np.column_stack([P, colors]), fmt="v " + " ".join([FMT] * 6))
    np.savetxt(buf, tris, fmt="f %d %d %d")
    return buf.getvalue()


def write_obj(patch, path, projection="drop-x1", name=None):
    return atomic_write(path, obj_text(patch, projection, name))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def report_dict(command, checks, details=None, timestamp=True):
    rep = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "checks": [c.as_dict() for c in checks],
        "all_pass": all(c.passed for c in checks),
        "details": _jsonable(details or {}),
    }
    if timestamp:
        rep["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return _jsonable(rep)


def write_report(path, command, checks, details=None):
    rep = report_dict(command, checks, details)
    atomic_write(path, json.dumps(rep, indent=2, sort_keys=True) + "\n")
    return rep
