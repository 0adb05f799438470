"""Periodic Cartesian grids for applying operator symbols to spinor fields.

Grid centers are offset by half a spacing so no point sits at the origin
or on a coordinate axis.  Derivatives are second-order central differences
with periodic wrap; wave numbers commensurate with the box keep plane
waves exactly periodic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal_geometry import OperatorSymbol
from .gamma_algebra import GammaBasis, dirac_gammas


@dataclass(frozen=True)
class Grid:
    half_width: float
    n: int

    @property
    def spacing(self):
        return 2.0 * self.half_width / self.n

    @property
    def axis(self):
        h = self.spacing
        return -self.half_width + h * (np.arange(self.n) + 0.5)

    @property
    def points(self):
        a = self.axis
        X, Y, Z = np.meshgrid(a, a, a, indexing="ij")
        return np.stack([X, Y, Z], axis=-1)

    def wavevector(self, integers):
        """k commensurate with the periodic box: k_i = pi * n_i / half_width."""
        return np.pi * np.asarray(integers, dtype=float) / self.half_width


def central_diff(psi, axis, h):
    return (np.roll(psi, -1, axis=axis) - np.roll(psi, 1, axis=axis)) / (2.0 * h)


def apply_symbol(sym: OperatorSymbol, psi, grid: Grid):
    """Apply sum c^mu d_mu + d to a spinor field psi of shape (n, n, n, 4)."""
    pts = grid.points
    h = grid.spacing
    dpsi = [central_diff(psi, ax, h) for ax in range(3)]
    out = np.zeros_like(psi, dtype=complex)
    for term in sym.terms:
        src = psi if term.deriv is None else dpsi[term.deriv]
        out += term.coeff_at(pts)[..., None] * np.einsum("ab,...b->...a", term.matrix, src)
    return out


def weighted_inner(psi, phi, weight, grid: Grid):
    """<psi, phi> = sum conj(psi).phi * weight * h^3 (trapezoid on the periodic box)."""
    h3 = grid.spacing**3
    return complex(np.sum(np.conj(psi) * phi * np.asarray(weight)[..., None]) * h3)


def adjointness_defect(sym: OperatorSymbol, psi, phi, weight, grid: Grid) -> float:
    """|<psi, A phi> - <A psi, phi>| in the weighted inner product."""
    lhs = weighted_inner(psi, apply_symbol(sym, phi, grid), weight, grid)
    rhs = weighted_inner(apply_symbol(sym, psi, grid), phi, weight, grid)
    return abs(lhs - rhs)


def plane_wave_spinor(k, m, grid: Grid, basis: GammaBasis | None = None, branch: int = +1):
    """Plane-wave eigenspinor of the flat Hamiltonian on the grid.

    Returns (psi, eigenvalue) with psi = u exp(i k.x) and H psi = lam psi,
    lam = branch * sqrt(|k|^2 + m^2).  k must be commensurate with the box.
    """
    b = basis or dirac_gammas()
    k = np.asarray(k, dtype=float)
    mom = sum(k[mu] * (b.gamma0 @ b.spatial[mu]) for mu in range(3)) + m * b.gamma0
    vals, vecs = np.linalg.eigh(mom)
    target = branch * np.sqrt(k @ k + m * m)
    idx = int(np.argmin(np.abs(vals - target)))
    u = vecs[:, idx]
    pts = grid.points
    phase = np.exp(1j * np.einsum("...k,k->...", pts, k))
    return phase[..., None] * u, float(vals[idx])


def bump_spinor(grid: Grid, width: float, center, weights) -> np.ndarray:
    """Smooth compactly-supported-in-practice spinor for adjointness tests."""
    pts = grid.points
    r2 = np.sum((pts - np.asarray(center)) ** 2, axis=-1)
    env = np.exp(-r2 / (2.0 * width**2))
    return env[..., None] * np.asarray(weights, dtype=complex)
