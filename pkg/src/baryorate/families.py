"""Built-in conformal-factor and field families with analytic derivatives.

These are the profiles the CLI accepts; keeping the derivative supply
analytic avoids finite-difference noise in the rate pipelines.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .conformal_geometry import ConformalProfile
from .regularizing_field import SliceField

__all__ = [
    "gaussian_bump_profile",
    "flrw_profile",
    "flrw_profile_from_table",
    "gaussian_field",
    "zero_field",
]

# amplitude ratio defining the working support radius of a Gaussian tail
_SUPPORT_CUT = 1e-12


def _gauss_radius(amplitude: float, width: float) -> float:
    if amplitude == 0.0:
        return width
    return width * float(np.sqrt(max(np.log(abs(amplitude) / _SUPPORT_CUT), 1.0)))


def gaussian_bump_profile(amplitude: float, width: float, t0: float = 0.0,
                          center=(0.0, 0.0, 0.0)) -> ConformalProfile:
    """Omega = 1 + A exp(-(|x - c|^2 + (t - t0)^2) / w^2).

    Radial (about the origin) when the center is zero, which is what the
    reduced rate path requires.
    """
    c = np.asarray(center, dtype=float)
    w2 = width * width

    def bump(t, xyz):
        d = np.asarray(xyz, dtype=float) - c
        r2 = np.einsum("...i,...i->...", d, d)
        return amplitude * np.exp(-(r2 + (t - t0) ** 2) / w2)

    def omega(t, xyz):
        return 1.0 + bump(t, xyz)

    def omega_dot(t, xyz):
        return bump(t, xyz) * (-2.0 * (t - t0) / w2)

    def grad(t, xyz):
        d = np.asarray(xyz, dtype=float) - c
        return bump(t, xyz)[..., None] * (-2.0 * d / w2)

    def omega_ddot(t, xyz):
        return bump(t, xyz) * ((2.0 * (t - t0) / w2) ** 2 - 2.0 / w2)

    def grad_dot(t, xyz):
        d = np.asarray(xyz, dtype=float) - c
        return bump(t, xyz)[..., None] * (-2.0 * d / w2) * (-2.0 * (t - t0) / w2)

    return ConformalProfile(
        omega=omega, omega_dot=omega_dot, grad=grad, omega_ddot=omega_ddot,
        grad_dot=grad_dot,
        compact_support_radius=float(np.linalg.norm(c)) + _gauss_radius(amplitude, width),
        is_radial=bool(np.all(c == 0.0)),
    )


def flrw_profile(omega_of_t, omega_dot_of_t=None, omega_ddot_of_t=None) -> ConformalProfile:
    """Spatially constant Omega = Omega(t)."""

    def omega(t, xyz):
        return np.full(np.shape(xyz)[:-1], float(omega_of_t(t)))

    def dot(t, xyz):
        if omega_dot_of_t is not None:
            return np.full(np.shape(xyz)[:-1], float(omega_dot_of_t(t)))
        h = 1e-5
        return np.full(np.shape(xyz)[:-1], (omega_of_t(t + h) - omega_of_t(t - h)) / (2 * h))

    def ddot(t, xyz):
        if omega_ddot_of_t is not None:
            return np.full(np.shape(xyz)[:-1], float(omega_ddot_of_t(t)))
        h = 1e-4
        return np.full(np.shape(xyz)[:-1],
                       (omega_of_t(t + h) - 2 * omega_of_t(t) + omega_of_t(t - h)) / h**2)

    return ConformalProfile(
        omega=omega, omega_dot=dot,
        grad=lambda t, xyz: np.zeros(np.shape(xyz)),
        omega_ddot=ddot,
        grad_dot=lambda t, xyz: np.zeros(np.shape(xyz)),
        compact_support_radius=None, is_radial=False,
    )


def flrw_profile_from_table(ts, omegas) -> ConformalProfile:
    """Omega(t) from tabulated samples, cubic-spline interpolated."""
    spline = CubicSpline(np.asarray(ts, dtype=float), np.asarray(omegas, dtype=float))
    return flrw_profile(lambda t: float(spline(t)),
                        lambda t: float(spline(t, 1)),
                        lambda t: float(spline(t, 2)))


def gaussian_field(lam: float, f_amp: float = 0.0, x_amp: float = 0.0,
                   width: float = 1.0, f_base: float = 0.0) -> SliceField:
    """Slice field with Gaussian building blocks.

    f = f_base + f_amp exp(-r^2/w^2); X = x_amp * x * exp(-r^2/w^2)
    (a radial vector bump with analytic divergence).  All derivative
    closures are analytic.
    """
    w2 = width * width

    def env(xyz):
        d = np.asarray(xyz, dtype=float)
        return np.exp(-np.einsum("...i,...i->...", d, d) / w2)

    def f(xyz):
        return f_base + f_amp * env(xyz)

    def grad_f(xyz):
        d = np.asarray(xyz, dtype=float)
        return f_amp * env(xyz)[..., None] * (-2.0 * d / w2)

    def lap_f(xyz):
        d = np.asarray(xyz, dtype=float)
        r2 = np.einsum("...i,...i->...", d, d)
        return f_amp * env(xyz) * (4.0 * r2 / w2**2 - 6.0 / w2)

    def X(xyz):
        d = np.asarray(xyz, dtype=float)
        return x_amp * d * env(xyz)[..., None]

    def div_X(xyz):
        d = np.asarray(xyz, dtype=float)
        r2 = np.einsum("...i,...i->...", d, d)
        return x_amp * env(xyz) * (3.0 - 2.0 * r2 / w2)

    def grad_div_X(xyz):
        d = np.asarray(xyz, dtype=float)
        r2 = np.einsum("...i,...i->...", d, d)
        return x_amp * env(xyz)[..., None] * ((3.0 - 2.0 * r2 / w2)[..., None] * (-2.0 * d / w2)
                                              + (-4.0 / w2) * d)

    amp = max(abs(f_amp), abs(x_amp))
    return SliceField(f=f, X=X, lam=lam, support_radius=_gauss_radius(max(amp, 1e-6), width),
                      far_field=f_base, grad_f=grad_f, lap_f=lap_f, div_X=div_X,
                      grad_div_X=grad_div_X)


def zero_field(lam: float = 0.0) -> SliceField:
    return gaussian_field(lam, 0.0, 0.0, 1.0)
