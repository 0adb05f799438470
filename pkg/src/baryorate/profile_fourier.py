"""Fourier transforms of coefficient profiles.

Convention: hat(f)(p) = (2 pi)^-3 * integral f(x) exp(-i p.x) d^3x.
This is the normalization every downstream kernel assumes; it is echoed
in report convention records via `convention_record()`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import IntegralResult, QuadConfig, integrate_1d

HAT_NORM = 1.0 / (2.0 * np.pi) ** 3
_OSCILLATORY_THRESHOLD = 10.0  # split the radial integral at sin zeros above rho*R of this


def convention_record() -> dict:
    return {
        "fourier_forward_kernel": "exp(-i p.x)",
        "fourier_hat_normalization": "(2*pi)^-3",
        "signature": "(+,-,-,-)",
        "dirac_representation": "standard (gamma0 = diag(1,1,-1,-1))",
    }


@dataclass(frozen=True)
class RadialProfile:
    """A real radial profile s -> f(s) that vanishes beyond support_radius."""

    fn: callable
    support_radius: float

    def __call__(self, s):
        return self.fn(np.asarray(s, dtype=float))


def radial_hat(profile: RadialProfile, rho: float, cfg: QuadConfig = QuadConfig(rel_tol=1e-11, abs_tol=1e-16)) -> float:
    """Radial transform hat(f)(rho) = (2pi)^-3 (4pi/rho) int_0^R f(s) s sin(rho s) ds.

    The rho -> 0 limit is (2pi)^-3 4pi int f s^2 ds.  For rho*R > 10 the
    integral is split at the zeros of sin(rho s) to keep the adaptive rule
    honest on the oscillatory tail.
    """
    rho = float(rho)
    R = profile.support_radius
    if rho < 0:
        rho = -rho  # radial: hat depends on |rho| only
    if rho * R <= 1e-12:
        res = integrate_1d(lambda s: profile(s) * s * s, 0.0, R, cfg)
        _check(res, "radial_hat rho=0")
        return HAT_NORM * 4.0 * np.pi * res.real
    if rho * R <= _OSCILLATORY_THRESHOLD:
        res = integrate_1d(lambda s: profile(s) * s * np.sin(rho * s), 0.0, R, cfg)
        _check(res, "radial_hat")
        return HAT_NORM * (4.0 * np.pi / rho) * res.real
    # piecewise between sin zeros, summed in ascending order
    edges = np.arange(0.0, R, np.pi / rho)
    edges = np.append(edges, R)
    total, err = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        res = integrate_1d(lambda s: profile(s) * s * np.sin(rho * s), lo, hi,
                           cfg.with_(abs_tol=cfg.abs_tol / max(len(edges) - 1, 1)))
        total += res.real
        err += res.error_estimate
    return HAT_NORM * (4.0 * np.pi / rho) * total


def radial_hat_table(profile: RadialProfile, rho_max: float, n: int = 800,
                     cfg: QuadConfig = QuadConfig(rel_tol=1e-10, abs_tol=1e-16)):
    """Sampled hat on a uniform rho grid, for interpolation in hot loops."""
    rhos = np.linspace(0.0, rho_max, n)
    vals = np.array([radial_hat(profile, r, cfg) for r in rhos])
    return rhos, vals


def _check(res: IntegralResult, what: str):
    if not res.converged:
        raise RuntimeError(f"{what}: quadrature did not converge (error {res.error_estimate:.3e})")


def field_hat_3d(values, dx: float, origin, p):
    """Direct Riemann transform of a sampled field: (dx^3/(2pi)^3) sum f(x) e^{-ip.x}.

    values: (n,n,n) complex samples on a uniform grid; origin: coordinate of
    values[0,0,0]; p: (..., 3) momenta.  Second-order accurate for smooth
    fields compactly supported strictly inside the grid box.
    """
    values = np.asarray(values)
    n = values.shape[0]
    ax = origin[0] + dx * np.arange(n)
    ay = origin[1] + dx * np.arange(n)
    az = origin[2] + dx * np.arange(n)
    p = np.atleast_2d(np.asarray(p, dtype=float))
    out = np.empty(p.shape[0], dtype=complex)
    for i, pi in enumerate(p):
        ex = np.exp(-1j * pi[0] * ax)
        ey = np.exp(-1j * pi[1] * ay)
        ez = np.exp(-1j * pi[2] * az)
        out[i] = np.einsum("x,y,z,xyz->", ex, ey, ez, values)
    out *= dx**3 * HAT_NORM
    return out if out.size > 1 else out[0]


class GridFourierTable:
    """FFT-backed transform of a compactly supported field with interpolation.

    Samples the field on an n^3 grid over [-L, L)^3, zero-pads by 2x to
    suppress aliasing, runs a single FFT, and serves hat(p) at arbitrary
    momenta by trilinear interpolation on the dual grid (second order in
    the dual spacing).
    """

    def __init__(self, field, half_width: float, n: int = 48):
        self.L = float(half_width)
        self.n = int(n)
        dx = 2.0 * self.L / self.n
        axis = -self.L + dx * (np.arange(self.n) + 0.5)
        X, Y, Z = np.meshgrid(axis, axis, axis, indexing="ij")
        pts = np.stack([X, Y, Z], axis=-1)
        sampled = np.asarray(field(pts), dtype=complex)
        npad = 2 * self.n
        grid = np.zeros((npad, npad, npad), dtype=complex)
        grid[: self.n, : self.n, : self.n] = sampled
        raw = np.fft.fftn(grid)
        freqs = 2.0 * np.pi * np.fft.fftfreq(npad, d=dx)
        order = np.argsort(freqs)
        self.p_axis = freqs[order]
        # phase-correct for the first sample sitting at axis[0], then sort axes ascending
        phase = np.exp(-1j * freqs * axis[0])
        raw = raw * phase[:, None, None] * phase[None, :, None] * phase[None, None, :]
        raw = raw[np.ix_(order, order, order)]
        self.hat_grid = raw * dx**3 * HAT_NORM
        self.dp = self.p_axis[1] - self.p_axis[0]

    def hat(self, p):
        """Trilinear interpolation of hat at momenta p of shape (..., 3)."""
        p = np.asarray(p, dtype=float)
        shape = p.shape[:-1]
        q = p.reshape(-1, 3)
        lo = self.p_axis[0]
        idx = (q - lo) / self.dp
        i0 = np.clip(np.floor(idx).astype(int), 0, len(self.p_axis) - 2)
        frac = np.clip(idx - i0, 0.0, 1.0)
        out = np.zeros(q.shape[0], dtype=complex)
        for dx_ in (0, 1):
            wx = np.where(dx_ == 0, 1.0 - frac[:, 0], frac[:, 0])
            for dy in (0, 1):
                wy = np.where(dy == 0, 1.0 - frac[:, 1], frac[:, 1])
                for dz in (0, 1):
                    wz = np.where(dz == 0, 1.0 - frac[:, 2], frac[:, 2])
                    out += wx * wy * wz * self.hat_grid[i0[:, 0] + dx_, i0[:, 1] + dy, i0[:, 2] + dz]
        return out.reshape(shape)
