"""Regularizing-field data on a time slice and its locally rigid evolution.

A slice field holds the perturbation (f, X, lambda) of the timelike field
u = (1 + lambda f) dt + lambda X around dt.  Evolution and the null-bundle
oracle are metric-free: conformal invariance lets everything run against
the flat background.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import RegularGridInterpolator

__all__ = [
    "SliceField",
    "NullBundleSample",
    "antipodal_directions",
    "evolve_first_order",
    "geodesic_bundle_oracle",
    "conformal_invariance_check",
]


def _fd_grad(fn, xyz, h):
    xyz = np.asarray(xyz, dtype=float)
    out = []
    for ax in range(3):
        e = np.zeros(3)
        e[ax] = h
        out.append((np.asarray(fn(xyz + e)) - np.asarray(fn(xyz - e))) / (2 * h))
    return np.stack(out, axis=-1)


def _fd_lap(fn, xyz, h):
    xyz = np.asarray(xyz, dtype=float)
    c = np.asarray(fn(xyz))
    acc = np.zeros_like(c, dtype=float)
    for ax in range(3):
        e = np.zeros(3)
        e[ax] = h
        acc = acc + (np.asarray(fn(xyz + e)) - 2 * c + np.asarray(fn(xyz - e))) / h**2
    return acc


def _fd_div(vec_fn, xyz, h):
    xyz = np.asarray(xyz, dtype=float)
    acc = 0.0
    for ax in range(3):
        e = np.zeros(3)
        e[ax] = h
        acc = acc + (np.asarray(vec_fn(xyz + e))[..., ax] - np.asarray(vec_fn(xyz - e))[..., ax]) / (2 * h)
    return acc


@dataclass(frozen=True)
class SliceField:
    """Perturbation data (f, X, lambda) of the regularizing field on a slice.

    f and X are callables over Cartesian points of shape (..., 3); the
    compact-support invariant applies to f - far_field and to X beyond
    support_radius.  Analytic derivative closures are optional; central
    differences with step fd_step are the fallback.
    """

    f: callable
    X: callable
    lam: float
    support_radius: float
    far_field: float = 0.0
    grad_f: callable | None = None
    lap_f: callable | None = None
    div_X: callable | None = None
    grad_div_X: callable | None = None
    fd_step: float = 1e-4

    def f_grad(self, xyz):
        if self.grad_f is not None:
            return np.asarray(self.grad_f(xyz))
        return _fd_grad(self.f, xyz, self.fd_step * max(self.support_radius, 1.0))

    def f_lap(self, xyz):
        if self.lap_f is not None:
            return np.asarray(self.lap_f(xyz))
        return _fd_lap(self.f, xyz, (self.fd_step * max(self.support_radius, 1.0)) ** 0.5 * 1e-1)

    def x_div(self, xyz):
        if self.div_X is not None:
            return np.asarray(self.div_X(xyz))
        return _fd_div(self.X, xyz, self.fd_step * max(self.support_radius, 1.0))

    def x_div_grad(self, xyz):
        if self.grad_div_X is not None:
            return np.asarray(self.grad_div_X(xyz))
        return _fd_grad(self.x_div, xyz, self.fd_step * max(self.support_radius, 1.0))

    def u_components(self, xyz):
        """u = (1 + lam f, lam X) at the given points, shape (..., 4)."""
        f = np.asarray(self.f(xyz))
        X = np.asarray(self.X(xyz))
        return np.concatenate([1.0 + self.lam * f[..., None], self.lam * X], axis=-1)

    def check_timelike(self, xyz):
        u = self.u_components(xyz)
        sq = u[..., 0] ** 2 - np.sum(u[..., 1:] ** 2, axis=-1)
        if np.any(sq <= 0) or np.any(u[..., 0] <= 0):
            raise ValueError("field is not future-directed timelike on the sampled points")


@dataclass(frozen=True)
class NullBundleSample:
    """Unit direction set with normalized nonnegative weights."""

    directions: np.ndarray  # (n, 3)
    weights: np.ndarray     # (n,)

    def __post_init__(self):
        norms = np.linalg.norm(self.directions, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-12):
            raise ValueError("directions must be unit vectors")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")


def antipodal_directions(n: int) -> NullBundleSample:
    """Fibonacci sphere directions paired with their antipodes.

    The pairing makes sum(w_i n_i) vanish exactly, so the zero-perturbation
    fixed point of the bundle average is exact for any n.
    """
    half = max(n // 2, 1)
    i = np.arange(half)
    golden = (1 + 5**0.5) / 2
    z = (2 * i + 1) / half - 1.0
    az = 2 * np.pi * i / golden
    s = np.sqrt(np.clip(1 - z * z, 0.0, None))
    dirs = np.stack([s * np.cos(az), s * np.sin(az), z], axis=1)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    dirs = np.concatenate([dirs, -dirs])
    w = np.full(len(dirs), 1.0 / len(dirs))
    return NullBundleSample(dirs, w)


_FORMS = ("canonical", "tilde", "linear")


def _rhs(form, lam, f_vals, X_vals, grad_f, div_X):
    """Evolution right-hand side on gridded values; contains no metric data."""
    df = div_X / 3.0
    if form == "canonical":
        if np.any(f_vals <= 0):
            raise ValueError("canonical form needs f > 0 everywhere (f^-1 is singular)")
        dX = grad_f / f_vals[..., None] ** 2
    elif form == "tilde":
        dX = grad_f / (1.0 + lam * f_vals[..., None]) ** 2
    elif form == "linear":
        dX = grad_f
    else:
        raise ValueError(f"unknown form {form!r}, expected one of {_FORMS}")
    return df, dX


def evolve_first_order(field: SliceField, dt: float, steps: int = 1, method: str = "rk4",
                       form: str = "canonical", grid_n: int = 64,
                       grid_half_width: float | None = None) -> SliceField:
    """Advance (f, X) by the locally rigid flow df/dt = div(X)/3, dX/dt per `form`.

    form "canonical" uses the literal -grad(f^-1) = grad(f)/f^2 and requires
    f > 0 on the grid; "tilde" uses (1 + lam f)^-2 grad(f); "linear" the
    lam -> 0 limit grad(f).  Fields are advanced on a uniform grid and
    returned as interpolating closures; the support radius is unchanged.
    """
    if field.lam == 0.0:
        return field  # u = dt exactly; nothing evolves
    if method not in ("rk4", "euler"):
        raise ValueError("method must be 'rk4' or 'euler'")
    L = grid_half_width or (field.support_radius * 1.5 + 4.0 * abs(dt))
    axis = np.linspace(-L, L, grid_n)
    h = axis[1] - axis[0]
    X3, Y3, Z3 = np.meshgrid(axis, axis, axis, indexing="ij")
    pts = np.stack([X3, Y3, Z3], axis=-1)
    f = np.asarray(field.f(pts), dtype=float)
    X = np.asarray(field.X(pts), dtype=float)

    def rhs(fv, Xv):
        gf = np.stack(np.gradient(fv, h, edge_order=2), axis=-1)
        dv = sum(np.gradient(Xv[..., a], h, axis=a, edge_order=2) for a in range(3))
        return _rhs(form, field.lam, fv, Xv, gf, dv)

    for _ in range(steps):
        if method == "euler":
            k1f, k1X = rhs(f, X)
            f = f + dt * k1f
            X = X + dt * k1X
        else:
            k1f, k1X = rhs(f, X)
            k2f, k2X = rhs(f + 0.5 * dt * k1f, X + 0.5 * dt * k1X)
            k3f, k3X = rhs(f + 0.5 * dt * k2f, X + 0.5 * dt * k2X)
            k4f, k4X = rhs(f + dt * k3f, X + dt * k3X)
            f = f + dt / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f)
            X = X + dt / 6.0 * (k1X + 2 * k2X + 2 * k3X + k4X)

    fi = RegularGridInterpolator((axis, axis, axis), f, bounds_error=False,
                                 fill_value=field.far_field)
    xi = RegularGridInterpolator((axis, axis, axis), X, bounds_error=False, fill_value=0.0)

    def f_new(xyz):
        return fi(np.asarray(xyz, dtype=float))

    def X_new(xyz):
        return xi(np.asarray(xyz, dtype=float))

    return replace(field, f=f_new, X=X_new, grad_f=None, lap_f=None, div_X=None,
                   grad_div_X=None)


def geodesic_bundle_oracle(field: SliceField, dt: float, n_dirs: int, query_xyz,
                           scale=None) -> np.ndarray:
    """Regularizing field on the advanced slice from the null-bundle average.

    For each query point q, straight null rays (1, n) are traced back by dt,
    each tangent is rescaled so the pairing with u at the foot point is 1,
    the rescaled tangents are averaged over the direction sample, and the
    average xi is normalized to u = xi / |xi|^2.

    `scale`, when given, multiplies both tangents and measure by scale(q)^-2
    (the conformal rescaling); the result must be unchanged.
    """
    if n_dirs < 4:
        raise ValueError("need at least 4 directions")
    sample = antipodal_directions(n_dirs)
    q = np.atleast_2d(np.asarray(query_xyz, dtype=float))  # (m, 3)
    n = sample.directions                                  # (d, 3)
    w = sample.weights
    feet = q[:, None, :] - dt * n[None, :, :]              # (m, d, 3)
    f_at = np.asarray(field.f(feet))
    X_at = np.asarray(field.X(feet))
    denom = (1.0 + field.lam * f_at) - field.lam * np.einsum("mdk,dk->md", X_at, n)
    if np.any(denom <= 0):
        raise ValueError("tangent rescaling is non-positive; lambda or dt too large")
    if scale is not None:
        s = np.asarray(scale(q), dtype=float) ** (-2.0)
        omega_sq = np.asarray(scale(q), dtype=float) ** 2
    else:
        s = np.ones(q.shape[0])
        omega_sq = np.ones(q.shape[0])
    # tangents scaled by s(q), measure weights by s(q); xi = sum(w~ gd~)/mu~
    tang = (w[None, :] / denom) * s[:, None]               # scaled tangent magnitudes
    mu = s                                                  # scaled total measure (sum w = 1)
    xi0 = np.sum(tang * s[:, None], axis=1) / mu
    xiv = np.einsum("md,dk->mk", tang * s[:, None], n) / mu[:, None]
    norm_sq = (xi0**2 - np.sum(xiv**2, axis=1)) * omega_sq  # |xi|^2 in the scaled metric
    if np.any(norm_sq <= 0):
        raise ValueError("averaged tangent is not timelike; lambda or dt too large")
    u = np.concatenate([xi0[:, None], xiv], axis=1) / norm_sq[:, None]
    return u


def conformal_invariance_check(field: SliceField, dt: float, omega, n_dirs: int = 400,
                               query_xyz=None) -> dict:
    """Compare the bundle oracle against its conformally rescaled run.

    omega: callable over (m, 3) points giving the conformal factor on the
    advanced slice.  The rescaled run multiplies tangents and measure by
    omega^-2 and measures lengths with omega^2; the two fields must agree
    identically.
    """
    if query_xyz is None:
        g = np.linspace(-field.support_radius, field.support_radius, 5)
        query_xyz = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    base = geodesic_bundle_oracle(field, dt, n_dirs, query_xyz)
    scaled = geodesic_bundle_oracle(field, dt, n_dirs, query_xyz, scale=omega)
    dev = float(np.max(np.abs(base - scaled)))
    return {
        "max_deviation": dev,
        "rhs_metric_free": True,  # the flow touches only flat-space div/grad of (f, X)
        "n_dirs": n_dirs,
        "n_queries": len(np.atleast_2d(query_xyz)),
        "identical": dev == 0.0,
    }
