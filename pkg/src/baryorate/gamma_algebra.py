"""Dirac gamma-matrix algebra in the Dirac representation.

Conventions: metric signature (+,-,-,-), gamma^0 = diag(1,1,-1,-1),
gamma^i with off-diagonal Pauli blocks.  Matrices are plain complex
4x4 numpy arrays; all operations here are pure functions of their
arguments and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIN_THETA_MIN = 1e-12  # below this the 1/(r sin(theta)) prefactor is treated as degenerate

_ID = np.eye(4, dtype=complex)

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# inverse Minkowski metric, Cartesian
ETA_DIAG = np.array([1.0, -1.0, -1.0, -1.0])


def _offdiag(sigma):
    g = np.zeros((4, 4), dtype=complex)
    g[:2, 2:] = sigma
    g[2:, :2] = -sigma
    return g


@dataclass(frozen=True)
class GammaBasis:
    """The four Cartesian gamma matrices gamma^0..gamma^3."""

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray

    @property
    def gammas(self):
        return (self.gamma0, self.gamma1, self.gamma2, self.gamma3)

    @property
    def spatial(self):
        return (self.gamma1, self.gamma2, self.gamma3)

    @property
    def identity(self):
        return _ID.copy()

    def gamma_dot(self, k):
        """gamma . k = sum_i gamma^i k_i for spatial vectors k of shape (..., 3)."""
        k = np.asarray(k, dtype=complex)
        return np.tensordot(k, np.stack(self.spatial), axes=([-1], [0]))

    def similarity(self, u):
        """Basis transformed by gamma^j -> U gamma^j U^dagger (U unitary)."""
        ud = u.conj().T
        return GammaBasis(*(u @ g @ ud for g in self.gammas))


def dirac_gammas() -> GammaBasis:
    """The standard Dirac-representation basis.

    Satisfies {gamma^j, gamma^k} = 2 eta^{jk} Id exactly, with
    (gamma^0)* = gamma^0 and (gamma^mu)* = -gamma^mu for mu = 1,2,3.
    """
    g0 = np.diag([1, 1, -1, -1]).astype(complex)
    return GammaBasis(g0, *(_offdiag(s) for s in _PAULI))


@dataclass(frozen=True)
class SphericalPoint:
    """A spatial point in spherical coordinates, r > 0, theta in (0, pi)."""

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not 0 < self.theta < np.pi:
            raise ValueError(f"theta must lie in (0, pi), got {self.theta}")

    @property
    def xyz(self):
        st, ct = np.sin(self.theta), np.cos(self.theta)
        sp, cp = np.sin(self.phi), np.cos(self.phi)
        return np.array([self.r * st * cp, self.r * st * sp, self.r * ct])

    @classmethod
    def from_xyz(cls, xyz):
        x, y, z = xyz
        r = float(np.sqrt(x * x + y * y + z * z))
        return cls(r, float(np.arccos(np.clip(z / r, -1.0, 1.0))), float(np.arctan2(y, x)) % (2 * np.pi))


def spherical_gammas(p: SphericalPoint, basis: GammaBasis | None = None):
    """Minkowski gammas in spherical coordinates (t, r, theta, phi).

    gamma^r   = cos(th) g3 + sin(th) cos(ph) g1 + sin(th) sin(ph) g2
    gamma^th  = (1/r) (-sin(th) g3 + cos(th) cos(ph) g1 + cos(th) sin(ph) g2)
    gamma^ph  = (1/(r sin(th))) (-sin(ph) g1 + cos(ph) g2)

    Raises ValueError when sin(theta) < 1e-12 (gamma^phi diverges).
    """
    b = basis or dirac_gammas()
    st, ct = np.sin(p.theta), np.cos(p.theta)
    sp, cp = np.sin(p.phi), np.cos(p.phi)
    if abs(st) < SIN_THETA_MIN:
        raise ValueError(f"degenerate angle: sin(theta) = {st} below {SIN_THETA_MIN}")
    g1, g2, g3 = b.gamma1, b.gamma2, b.gamma3
    g_t = b.gamma0
    g_r = ct * g3 + st * cp * g1 + st * sp * g2
    g_th = (-st * g3 + ct * cp * g1 + ct * sp * g2) / p.r
    g_ph = (-sp * g1 + cp * g2) / (p.r * st)
    return g_t, g_r, g_th, g_ph


def spherical_metric_inverse_diag(p: SphericalPoint):
    """diag of the inverse Minkowski metric in spherical coordinates."""
    return np.array([1.0, -1.0, -1.0 / p.r**2, -1.0 / (p.r * np.sin(p.theta)) ** 2])


def conformal_gammas(basis: GammaBasis, p: SphericalPoint, omega_value: float):
    """Curved-frame gammas gamma_g^j = gamma_eta^j / Omega at the given point."""
    if not omega_value > 0:
        raise ValueError(f"conformal factor must be positive, got {omega_value}")
    return tuple(g / omega_value for g in spherical_gammas(p, basis))


def trace_product(ms) -> complex:
    """Trace of the ordered product of 4x4 matrices."""
    ms = list(ms)
    if not ms:
        raise ValueError("empty matrix list")
    out = ms[0]
    for m in ms[1:]:
        out = out @ m
    return complex(np.trace(out))


def adjoint(m):
    return np.conj(np.swapaxes(m, -1, -2))


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


def matrices_close(a, b, tol=1e-14) -> bool:
    """Entrywise equality with absolute tolerance."""
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol)


def random_unitary(rng) -> np.ndarray:
    """Haar-ish random 4x4 unitary, for representation-independence checks."""
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
