"""On-shell momentum-space kernels and traces.

Everything here is algebra on 4x4 matrices and rational functions of the
on-shell energies omega_k = sqrt(|k|^2 + m^2); all functions broadcast over
leading batch axes of the momentum arguments.  The on-shell delta factors
are never represented numerically; the energy integrations that consume
them are done analytically upstream of this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gamma_algebra import GammaBasis, dirac_gammas

__all__ = [
    "CutoffConfig",
    "omega_k",
    "f_hat_omega",
    "chi_closed_form",
    "Vertex",
    "multiplication_vertex",
    "gamma0_vertex",
    "first_order_vertex",
    "chi_brute",
    "gamma_kernel",
    "gamma_kernel_rq",
    "gamma_pm",
    "k_kernel",
]

_DEGENERATE_REL = 1e-15


@dataclass(frozen=True)
class CutoffConfig:
    """Regularization scale eps and energy cutoff Lambda with m << Lambda << 1/eps."""

    eps: float
    Lambda: float
    m: float = 0.0
    hierarchy_factor: float = 10.0

    def __post_init__(self):
        if self.eps <= 0 or self.Lambda <= 0 or self.m < 0:
            raise ValueError("eps and Lambda must be positive, m nonnegative")
        if self.m > 0 and not self.m * self.hierarchy_factor <= self.Lambda:
            raise ValueError(f"need m*{self.hierarchy_factor} <= Lambda, got m={self.m}, Lambda={self.Lambda}")
        if not self.Lambda * self.hierarchy_factor <= 1.0 / self.eps:
            raise ValueError(f"need Lambda*{self.hierarchy_factor} <= 1/eps, got Lambda={self.Lambda}, eps={self.eps}")

    @property
    def s_max(self) -> float:
        """Hard radial momentum bound implementing the energy window."""
        return float(np.sqrt(max(self.Lambda**2 - self.m**2, 0.0)))

    @property
    def kprime_max(self) -> float:
        return float(np.sqrt(max(self.eps**-2 - self.m**2, 0.0)))

    def as_dict(self):
        return {"eps": self.eps, "Lambda": self.Lambda, "m": self.m, "s_max": self.s_max}


def omega_k(k, m: float):
    """sqrt(|k|^2 + m^2) for k of shape (..., 3)."""
    k = np.asarray(k, dtype=float)
    return np.sqrt(np.einsum("...i,...i->...", k, k) + m * m)


def f_hat_omega(k, omega, m: float, branch: str | None = None, eps: float | None = None,
                basis: GammaBasis | None = None):
    """Spectral-density matrix -(gamma0 omega - gamma.k + m) gamma0.

    branch "negative" multiplies by step(1 + eps*omega), "positive" by
    step(1 - eps*omega); None returns the bare matrix.  The on-shell
    delta(omega^2 - omega_k^2) is not included.
    """
    b = basis or dirac_gammas()
    k = np.asarray(k, dtype=float)
    omega = np.asarray(omega, dtype=float)
    core = (omega[..., None, None] * b.gamma0 - b.gamma_dot(k) + m * np.eye(4))
    mat = -core @ b.gamma0
    if branch is None:
        return mat
    if eps is None:
        raise ValueError("branch selection needs eps")
    if branch == "negative":
        step = (1.0 + eps * omega) > 0
    elif branch == "positive":
        step = (1.0 - eps * omega) > 0
    else:
        raise ValueError("branch must be 'negative', 'positive' or None")
    return mat * np.asarray(step, dtype=float)[..., None, None]


def chi_closed_form(omega, omega_p, k, kp, m: float, variant: str = "gamma0-pair"):
    """Closed-form pair trace: 4 (omega' omega + m^2 -+ k.k').

    variant "gamma0-pair" is the minus sign (both insertions carry gamma0);
    "scalar-pair" (bare multiplication operators) flips it to plus.
    """
    k = np.asarray(k, dtype=float)
    kp = np.asarray(kp, dtype=float)
    dot = np.einsum("...i,...i->...", k, kp)
    if variant == "gamma0-pair":
        return 4.0 * (np.asarray(omega_p) * np.asarray(omega) + m * m - dot)
    if variant == "scalar-pair":
        return 4.0 * (np.asarray(omega_p) * np.asarray(omega) + m * m + dot)
    raise ValueError("variant must be 'gamma0-pair' or 'scalar-pair'")


# ---------------------------------------------------------------------------
# vertices


def _unit_profile(q):
    return np.ones(np.shape(q)[:-1], dtype=complex)


@dataclass(frozen=True)
class Vertex:
    """Momentum-space kernel of a multiplication or first-order operator.

    mult_terms: ((matrix, bhat), ...) with bhat(q) the transform of the
    multiplication coefficient; deriv_terms: ((matrix, ahat), ...) with
    ahat(q) of shape (..., 3), contributing i k_in . ahat(q).  The kernel
    between outgoing momentum p and ingoing momentum k is
    sum M bhat(p - k) + sum M (i k . ahat(p - k)).
    """

    mult_terms: tuple = ()
    deriv_terms: tuple = ()
    radial: bool = False
    transfer_scale: float = 1.0

    def kernel(self, p_out, k_in):
        p_out = np.asarray(p_out, dtype=float)
        k_in = np.asarray(k_in, dtype=float)
        q = p_out - k_in
        shape = np.broadcast_shapes(p_out.shape[:-1], k_in.shape[:-1])
        out = np.zeros(shape + (4, 4), dtype=complex)
        for mat, bhat in self.mult_terms:
            out += np.asarray(bhat(q), dtype=complex)[..., None, None] * mat
        for mat, ahat in self.deriv_terms:
            proj = 1j * np.einsum("...i,...i->...", k_in.astype(complex), np.asarray(ahat(q), dtype=complex))
            out += proj[..., None, None] * mat
        return out

    @property
    def is_zero(self):
        return not self.mult_terms and not self.deriv_terms


def multiplication_vertex(matrix, profile_hat=None, radial: bool = False,
                          transfer_scale: float = 1.0) -> Vertex:
    return Vertex(mult_terms=((np.asarray(matrix, dtype=complex), profile_hat or _unit_profile),),
                  radial=radial, transfer_scale=transfer_scale)


def gamma0_vertex(profile_hat=None, basis: GammaBasis | None = None, radial: bool = False,
                  transfer_scale: float = 1.0) -> Vertex:
    b = basis or dirac_gammas()
    return multiplication_vertex(b.gamma0, profile_hat, radial=radial, transfer_scale=transfer_scale)


def first_order_vertex(mult_terms=(), deriv_terms=(), radial: bool = False,
                       transfer_scale: float = 1.0) -> Vertex:
    return Vertex(tuple((np.asarray(m, dtype=complex), f) for m, f in mult_terms),
                  tuple((np.asarray(m, dtype=complex), f) for m, f in deriv_terms),
                  radial=radial, transfer_scale=transfer_scale)


def chi_brute(A: Vertex, B: Vertex, omega, omega_p, k, kp, m: float,
              basis: GammaBasis | None = None):
    """Brute 4x4 trace Tr[A(k,k') F_omega(k') B(k',k) F_omega'(k)]."""
    b = basis or dirac_gammas()
    a_mat = A.kernel(k, kp)
    b_mat = B.kernel(kp, k)
    f1 = f_hat_omega(kp, omega, m, basis=b)
    f2 = f_hat_omega(k, omega_p, m, basis=b)
    return np.einsum("...ab,...bc,...cd,...da->...", a_mat, f1, b_mat, f2)


# ---------------------------------------------------------------------------
# rational on-shell kernels


def gamma_kernel(k, kp, m: float):
    """(-omega_k omega_k' + m^2 - k.k') / ((omega_k + omega_k')^2 omega_k omega_k')."""
    k = np.asarray(k, dtype=float)
    kp = np.asarray(kp, dtype=float)
    wk = omega_k(k, m)
    wkp = omega_k(kp, m)
    dot = np.einsum("...i,...i->...", k, kp)
    return (-wk * wkp + m * m - dot) / ((wk + wkp) ** 2 * wk * wkp)


def _gamma_rq_raw(r2, q2, b, m, masked: bool):
    a = r2 + 0.25 * q2 + m * m
    disc2 = a * a - b * b
    if masked:
        disc2 = np.maximum(disc2, 0.0)
        disc = np.sqrt(disc2)
        safe = disc > _DEGENERATE_REL * a
        num = a - 2.0 * r2 - disc
        den = 2.0 * (a + disc) * np.where(safe, disc, 1.0)
        return np.where(safe, num / den, 0.0)
    if np.any(disc2 <= 0):
        raise ValueError("degenerate on-shell input: a^2 <= b^2")
    disc = np.sqrt(disc2)
    return (a - 2.0 * r2 - disc) / (2.0 * (a + disc) * disc)


def gamma_kernel_rq(r, q, m: float):
    """Same kernel in mean/transfer variables r = (k+k')/2, q = k-k'.

    With a = |r|^2 + |q|^2/4 + m^2 and b = q.r:
    (a - 2|r|^2 - sqrt(a^2-b^2)) / (2 (a + sqrt(a^2-b^2)) sqrt(a^2-b^2)).
    Raises on the measure-zero degenerate set a^2 <= b^2.
    """
    r = np.asarray(r, dtype=float)
    q = np.asarray(q, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    q2 = np.einsum("...i,...i->...", q, q)
    b = np.einsum("...i,...i->...", q, r)
    return _gamma_rq_raw(r2, q2, b, m, masked=False)


def gamma_pm(A: Vertex, B: Vertex, k, kp, cutoffs: CutoffConfig, basis: GammaBasis | None = None):
    """(Gamma_+, Gamma_-) = chi(-+ omega_k, +- omega_k') / (4 wk wk' (wk+wk')^2).

    The sharp regularization steps step(1 - eps*omega) on both on-shell
    energies are applied; the Lambda window is the caller's band.
    """
    wk = omega_k(k, cutoffs.m)
    wkp = omega_k(kp, cutoffs.m)
    pref = 1.0 / (4.0 * wk * wkp * (wk + wkp) ** 2)
    steps = ((1.0 - cutoffs.eps * wk) > 0) & ((1.0 - cutoffs.eps * wkp) > 0)
    win = np.asarray(steps, dtype=float)
    plus = chi_brute(A, B, -wk, wkp, k, kp, cutoffs.m, basis) * pref * win
    minus = chi_brute(A, B, wk, -wkp, k, kp, cutoffs.m, basis) * pref * win
    return plus, minus


def k_kernel(rho: float, m: float, cutoffs: CutoffConfig, quad=None):
    """Angular-reduced radial kernel K(rho) at transfer magnitude rho > 0.

    K(rho) = 2 int_0^{s_max} ds int_0^pi dth s^2 sin(th) Gamma(r(s,th), q)
    with q = (0, 0, rho) and r = s (sin th, 0, cos th); s_max implements the
    energy window (the integrand approaches -2 per unit s, so the value is
    cutoff-dominated and is only meaningful together with its (eps, Lambda)).
    Returns an IntegralResult whose value is K(rho).
    """
    from .quadrature import QuadConfig, integrate_2d

    if rho <= 0:
        raise ValueError("rho must be positive")
    cfg = quad or QuadConfig(rel_tol=1e-9, abs_tol=1e-12, max_evals=400_000)
    s_max = cutoffs.s_max
    if s_max == 0.0:
        from .quadrature import IntegralResult
        return IntegralResult(0.0, 0.0, 0, True)

    def integrand(s, c):
        r2 = s * s
        b = rho * s * c
        return 2.0 * r2 * _gamma_rq_raw(r2, rho * rho, b, m, masked=True)

    res = integrate_2d(integrand, (0.0, s_max, -1.0, 1.0), cfg)
    if not res.converged:
        raise RuntimeError(f"K(rho={rho}) quadrature did not converge (err {res.error_estimate:.2e})")
    return res
