"""Geometry of conformally flat metrics g = Omega^2 eta in spherical slices.

Christoffel symbols, spin-connection corrections, the transformed flat
Hamiltonian, the symmetrized Hamiltonian built from a regularizing field,
the second-order coefficient sets, and conjugation by Omega^(3/2).

Operator symbols are kept in the canonical first-order normal form
sum_mu c^mu(x) d_mu + d(x) with Cartesian spatial derivatives; every
coefficient is a sum of (constant 4x4 matrix) x (scalar field) terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gamma_algebra import GammaBasis, SphericalPoint, commutator, dirac_gammas, spherical_gammas
from .regularizing_field import SliceField

__all__ = [
    "ConformalProfile",
    "ChristoffelTable",
    "christoffel",
    "christoffel_fd",
    "h_coefficients",
    "spin_connection_corrections",
    "spin_connection_general",
    "SymbolTerm",
    "OperatorSymbol",
    "free_dirac_symbol",
    "h_eta_tilde_symbol",
    "delta_a_symbol",
    "symmetrized_hamiltonian_symbol",
    "conjugate_symbol",
    "scenario2_alpha_coeffs",
    "scenario2_beta_coeffs",
]

_COORDS = ("t", "r", "theta", "phi")


# ---------------------------------------------------------------------------
# conformal factor


@dataclass(frozen=True)
class ConformalProfile:
    """A conformal factor Omega(t, x) > 0 with derivative supply.

    omega maps (t, xyz) with xyz of shape (..., 3) to values of shape (...).
    Analytic closures for the time derivative, spatial gradient, second time
    derivative and the gradient of the time derivative may be supplied;
    central differences with step fd_step * max(support, 1) fill the gaps.
    """

    omega: callable
    omega_dot: callable | None = None
    grad: callable | None = None
    omega_ddot: callable | None = None
    grad_dot: callable | None = None
    compact_support_radius: float | None = None
    is_radial: bool = False
    fd_step: float = 1e-4

    def _h(self):
        return self.fd_step * max(self.compact_support_radius or 1.0, 1.0)

    def value(self, t, xyz):
        w = np.asarray(self.omega(t, np.asarray(xyz, dtype=float)))
        if np.any(w <= 0):
            raise ValueError("conformal factor must be strictly positive")
        return w

    def dot(self, t, xyz):
        if self.omega_dot is not None:
            return np.asarray(self.omega_dot(t, np.asarray(xyz, dtype=float)))
        h = self._h()
        return (np.asarray(self.omega(t + h, xyz)) - np.asarray(self.omega(t - h, xyz))) / (2 * h)

    def spatial_grad(self, t, xyz):
        xyz = np.asarray(xyz, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(t, xyz))
        h = self._h()
        cols = []
        for ax in range(3):
            e = np.zeros(3)
            e[ax] = h
            cols.append((np.asarray(self.omega(t, xyz + e)) - np.asarray(self.omega(t, xyz - e))) / (2 * h))
        return np.stack(cols, axis=-1)

    def ddot(self, t, xyz):
        if self.omega_ddot is not None:
            return np.asarray(self.omega_ddot(t, np.asarray(xyz, dtype=float)))
        h = self._h()
        return (self.dot(t + h, xyz) - self.dot(t - h, xyz)) / (2 * h)

    def dot_grad(self, t, xyz):
        """Spatial gradient of the time derivative."""
        if self.grad_dot is not None:
            return np.asarray(self.grad_dot(t, np.asarray(xyz, dtype=float)))
        h = self._h()
        return (self.spatial_grad(t + h, xyz) - self.spatial_grad(t - h, xyz)) / (2 * h)

    def spherical_partials(self, t, p: SphericalPoint):
        """(Omega_t, Omega_r, Omega_theta, Omega_phi) at (t, p) by chain rule."""
        xyz = p.xyz
        g = self.spatial_grad(t, xyz)
        st, ct = np.sin(p.theta), np.cos(p.theta)
        sp, cp = np.sin(p.phi), np.cos(p.phi)
        e_r = np.array([st * cp, st * sp, ct])
        e_th = p.r * np.array([ct * cp, ct * sp, -st])
        e_ph = p.r * st * np.array([-sp, cp, 0.0])
        return (float(self.dot(t, xyz)), float(g @ e_r), float(g @ e_th), float(g @ e_ph))


def flat_profile() -> ConformalProfile:
    """Omega identically 1."""
    return ConformalProfile(
        omega=lambda t, xyz: np.ones(np.shape(xyz)[:-1]),
        omega_dot=lambda t, xyz: np.zeros(np.shape(xyz)[:-1]),
        grad=lambda t, xyz: np.zeros(np.shape(xyz)),
        omega_ddot=lambda t, xyz: np.zeros(np.shape(xyz)[:-1]),
        grad_dot=lambda t, xyz: np.zeros(np.shape(xyz)),
        compact_support_radius=1.0,
        is_radial=True,
    )


# ---------------------------------------------------------------------------
# Christoffel symbols


@dataclass(frozen=True)
class ChristoffelTable:
    """Gamma^i_{jk} over (t, r, theta, phi), symmetric in the lower pair."""

    values: np.ndarray  # (4, 4, 4) indexed [i, j, k]

    def __getitem__(self, idx):
        i, j, k = (_COORDS.index(c) if isinstance(c, str) else c for c in idx)
        return self.values[i, j, k]


def _flat_spherical_christoffel(p: SphericalPoint) -> np.ndarray:
    g = np.zeros((4, 4, 4))
    st, ct = np.sin(p.theta), np.cos(p.theta)
    r = p.r
    g[1, 2, 2] = -r
    g[1, 3, 3] = -r * st * st
    g[2, 1, 2] = g[2, 2, 1] = 1.0 / r
    g[2, 3, 3] = -st * ct
    g[3, 1, 3] = g[3, 3, 1] = 1.0 / r
    g[3, 2, 3] = g[3, 3, 2] = ct / st
    return g


def _eta_spherical(p: SphericalPoint):
    st = np.sin(p.theta)
    lower = np.array([1.0, -1.0, -p.r**2, -(p.r * st) ** 2])
    return lower, 1.0 / lower


def christoffel(profile: ConformalProfile, t: float, p: SphericalPoint) -> ChristoffelTable:
    """Levi-Civita symbols of g = Omega^2 eta in spherical coordinates.

    Assembled from the flat-metric symbols plus the conformal log-derivative
    terms delta^i_j l_k + delta^i_k l_j - eta_{jk} eta^{il} l_l; components
    outside that pattern are exactly zero.
    """
    if np.sin(p.theta) < 1e-12:
        raise ValueError("degenerate point: sin(theta) too small")
    w = float(profile.value(t, p.xyz))
    parts = np.array(profile.spherical_partials(t, p)) / w  # l_j = d_j ln(Omega)
    lower, upper = _eta_spherical(p)
    g = _flat_spherical_christoffel(p)
    for i in range(4):
        for j in range(4):
            g[i, i, j] += parts[j]
            g[i, j, i] += parts[j]
            g[i, j, j] -= lower[j] * upper[i] * parts[i]
    return ChristoffelTable(g)


def christoffel_fd(profile: ConformalProfile, t: float, p: SphericalPoint, h: float = 1e-4) -> np.ndarray:
    """Finite-difference Levi-Civita oracle straight from the metric components.

    Gamma^i_{jk} = (1/2) g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk}) with
    central differences in all four coordinates; independent of the closed
    forms used by `christoffel`.
    """

    def metric(coords):
        tt, r, th, ph = coords
        pt = SphericalPoint(r, th, ph)
        w = float(profile.value(tt, pt.xyz))
        st = np.sin(th)
        return w * w * np.diag([1.0, -1.0, -(r**2), -((r * st) ** 2)])

    x0 = np.array([t, p.r, p.theta, p.phi])
    g0 = metric(x0)
    ginv = np.linalg.inv(g0)
    dg = np.zeros((4, 4, 4))  # dg[l, j, k] = d_l g_{jk}
    for l in range(4):
        e = np.zeros(4)
        e[l] = h
        dg[l] = (metric(x0 + e) - metric(x0 - e)) / (2 * h)
    out = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                acc = 0.0
                for l in range(4):
                    acc += ginv[i, l] * (dg[j, l, k] + dg[k, l, j] - dg[l, j, k])
                out[i, j, k] = 0.5 * acc
    return out


# ---------------------------------------------------------------------------
# spin connection


def h_coefficients(profile: ConformalProfile, t: float, p: SphericalPoint) -> np.ndarray:
    """Expansion coefficients h[n, j, k] of d_j gamma_g^n = h^n_{jk} gamma_g^k."""
    w = float(profile.value(t, p.xyz))
    lt, lr, lth, lph = (np.array(profile.spherical_partials(t, p)) / w).tolist()
    r, st, ct = p.r, np.sin(p.theta), np.cos(p.theta)
    h = np.zeros((4, 4, 4))
    for n in range(4):
        h[n, 0, n] = -lt
        h[n, 1, n] = -lr
        h[n, 2, n] = -lth
        h[n, 3, n] = -lph
    h[2, 1, 2] += -1.0 / r
    h[3, 1, 3] += -1.0 / r
    h[1, 2, 2] = r
    h[2, 2, 1] = -1.0 / r
    h[3, 2, 3] += -ct / st
    h[1, 3, 3] = r * st * st
    h[2, 3, 3] = st * ct
    h[3, 3, 1] = -1.0 / r
    h[3, 3, 2] = -ct / st
    return h


def _curved_gammas(profile, t, p, basis):
    w = float(profile.value(t, p.xyz))
    up = tuple(g / w for g in spherical_gammas(p, basis))
    lower, _ = _eta_spherical(p)
    down = tuple(w * w * lower[i] * up[i] for i in range(4))
    return up, down


def spin_connection_corrections(profile: ConformalProfile, t: float, p: SphericalPoint,
                                basis: GammaBasis | None = None):
    """Matrix parts (S_r, S_theta, S_phi) of the spatial spin connection.

    S_r  = (1/2) gamma_{g r}  ( (W_t/W) gamma_g^t + (W_th/W) gamma_g^th + (W_ph/W) gamma_g^ph )
    and cyclically for theta and phi, each omitting its own direction.
    """
    b = basis or dirac_gammas()
    w = float(profile.value(t, p.xyz))
    lt, lr, lth, lph = (np.array(profile.spherical_partials(t, p)) / w).tolist()
    up, down = _curved_gammas(profile, t, p, b)
    s_r = 0.5 * down[1] @ (lt * up[0] + lth * up[2] + lph * up[3])
    s_th = 0.5 * down[2] @ (lt * up[0] + lr * up[1] + lph * up[3])
    s_ph = 0.5 * down[3] @ (lt * up[0] + lr * up[1] + lth * up[2])
    return s_r, s_th, s_ph


def spin_connection_general(profile: ConformalProfile, t: float, p: SphericalPoint,
                            basis: GammaBasis | None = None):
    """All four matrix parts from the generic contraction -(1/4)(h + Gamma)^n_{jk} gamma_g^k gamma_{g n}."""
    b = basis or dirac_gammas()
    up, down = _curved_gammas(profile, t, p, b)
    h = h_coefficients(profile, t, p)
    gam = christoffel(profile, t, p).values
    out = []
    for j in range(4):
        acc = np.zeros((4, 4), dtype=complex)
        for n in range(4):
            for k in range(4):
                c = h[n, j, k] + gam[n, j, k]
                if c != 0.0:
                    acc += c * (up[k] @ down[n])
        out.append(-0.25 * acc)
    return tuple(out)


# ---------------------------------------------------------------------------
# operator symbols


def _as_field(c):
    if callable(c):
        return c
    return lambda xyz, _c=c: np.full(np.shape(xyz)[:-1], _c, dtype=complex)


@dataclass(frozen=True)
class SymbolTerm:
    matrix: np.ndarray        # constant (4, 4)
    coeff: object             # scalar field over xyz, or a constant
    deriv: int | None         # None: multiplication; 0..2: Cartesian d_mu

    def coeff_at(self, xyz):
        return np.asarray(_as_field(self.coeff)(xyz), dtype=complex)


@dataclass(frozen=True)
class OperatorSymbol:
    """First-order operator sum_mu c^mu(x) d_mu + d(x) as matrix-field terms."""

    terms: tuple

    def __add__(self, other):
        return OperatorSymbol(self.terms + other.terms)

    def scaled(self, c):
        return OperatorSymbol(tuple(
            SymbolTerm(t.matrix, (lambda xyz, f=_as_field(t.coeff), cc=c: cc * f(xyz)), t.deriv)
            for t in self.terms))

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def deriv_coeff(self, mu: int, xyz):
        """c^mu(x) as (..., 4, 4) arrays."""
        xyz = np.asarray(xyz, dtype=float)
        out = np.zeros(xyz.shape[:-1] + (4, 4), dtype=complex)
        for t in self.terms:
            if t.deriv == mu:
                out += t.coeff_at(xyz)[..., None, None] * t.matrix
        return out

    def zero_coeff(self, xyz):
        """d(x) as (..., 4, 4) arrays."""
        xyz = np.asarray(xyz, dtype=float)
        out = np.zeros(xyz.shape[:-1] + (4, 4), dtype=complex)
        for t in self.terms:
            if t.deriv is None:
                out += t.coeff_at(xyz)[..., None, None] * t.matrix
        return out

    def coeff_sup_norm(self, xyz):
        """Largest 2-norm over the sampled points of any coefficient matrix."""
        sup = 0.0
        for mu in (None, 0, 1, 2):
            m = self.zero_coeff(xyz) if mu is None else self.deriv_coeff(mu, xyz)
            sup = max(sup, float(np.max(np.linalg.norm(m, ord=2, axis=(-2, -1)))))
        return sup


def free_dirac_symbol(m: float, basis: GammaBasis | None = None) -> OperatorSymbol:
    """The flat Hamiltonian -i gamma0 gamma^mu d_mu + m gamma0."""
    b = basis or dirac_gammas()
    terms = [SymbolTerm(-1j * b.gamma0 @ b.spatial[mu], 1.0, mu) for mu in range(3)]
    if m != 0.0:
        terms.append(SymbolTerm(b.gamma0, m, None))
    return OperatorSymbol(tuple(terms))


def h_eta_tilde_symbol(profile: ConformalProfile, t: float, m: float,
                       include_mass: bool = True, basis: GammaBasis | None = None) -> OperatorSymbol:
    """The flat Hamiltonian conjugated into the curved-slice space.

    Adds -(3/2) i (d_mu Omega / Omega) gamma0 gamma^mu to the free symbol;
    the mass term m gamma0 is controlled by include_mass.
    """
    b = basis or dirac_gammas()
    terms = list(free_dirac_symbol(m if include_mass else 0.0, b).terms)
    for mu in range(3):
        def logd(xyz, _mu=mu):
            return -1.5j * profile.spatial_grad(t, xyz)[..., _mu] / profile.value(t, xyz)
        terms.append(SymbolTerm(b.gamma0 @ b.spatial[mu], logd, None))
    return OperatorSymbol(tuple(terms))


def _commutator_blocks(basis: GammaBasis):
    """[gamma_mu, gamma_rho] for lowered spatial mu = 1..3 and lowered rho = 0..3."""
    g = basis.gammas
    lowered = [g[0], -g[1], -g[2], -g[3]]
    return [[commutator(lowered[mu], lowered[rho]) for rho in range(4)] for mu in range(1, 4)]


def _d_vector(profile, t, xyz):
    """d^rho = (1/4)(d_nu Omega / Omega) eta^{nu rho}, rho = t,x,y,z; shape (..., 4)."""
    w = profile.value(t, xyz)
    dt = profile.dot(t, xyz) / w
    dg = profile.spatial_grad(t, xyz) / w[..., None]
    return 0.25 * np.concatenate([dt[..., None], -dg], axis=-1)


def delta_a_symbol(profile: ConformalProfile, field: SliceField | None, t: float, m: float,
                   basis: GammaBasis | None = None) -> OperatorSymbol:
    """The difference A_t - H~ for the regularizing field u = (1+lam f) dt + lam X.

    Mass part (survives u = dt): (Omega - 1) m gamma0.  Field part, linear
    in lambda, in the canonical normal form:

      lam [ -i f gamma0 gamma^mu d_mu + i X^mu d_mu
            + (-(3/2) i f (d_mu Omega/Omega) - (i/2) d_mu f) gamma0 gamma^mu
            + i X^mu d^rho [gamma_mu, gamma_rho]
            + i (3/2) X.grad(Omega)/Omega + (i/2) div X + i m Omega f gamma0 ]
    """
    b = basis or dirac_gammas()
    terms = []
    if m != 0.0:
        terms.append(SymbolTerm(b.gamma0, lambda xyz: m * (profile.value(t, xyz) - 1.0), None))
    if field is not None and field.lam != 0.0:
        lam = field.lam
        cblocks = _commutator_blocks(b)

        for mu in range(3):
            terms.append(SymbolTerm(
                b.gamma0 @ b.spatial[mu],
                lambda xyz, _mu=mu: -1j * lam * np.asarray(field.f(xyz), dtype=complex), mu))
            terms.append(SymbolTerm(
                b.identity,
                lambda xyz, _mu=mu: 1j * lam * np.asarray(field.X(xyz), dtype=complex)[..., _mu], mu))

            def a3(xyz, _mu=mu):
                w = profile.value(t, xyz)
                gw = profile.spatial_grad(t, xyz)[..., _mu]
                f = np.asarray(field.f(xyz))
                gf = field.f_grad(xyz)[..., _mu]
                return lam * (-1.5j * f * gw / w - 0.5j * gf)
            terms.append(SymbolTerm(b.gamma0 @ b.spatial[mu], a3, None))

            for rho in range(4):
                def a4(xyz, _mu=mu, _rho=rho):
                    X = np.asarray(field.X(xyz))[..., _mu]
                    return 1j * lam * X * _d_vector(profile, t, xyz)[..., _rho]
                terms.append(SymbolTerm(cblocks[mu][rho], a4, None))

        def a5(xyz):
            w = profile.value(t, xyz)
            gw = profile.spatial_grad(t, xyz)
            X = np.asarray(field.X(xyz))
            return lam * (1.5j * np.einsum("...k,...k->...", X, gw) / w + 0.5j * field.x_div(xyz))
        terms.append(SymbolTerm(b.identity, a5, None))

        if m != 0.0:
            terms.append(SymbolTerm(
                b.gamma0,
                lambda xyz: lam * m * profile.value(t, xyz) * np.asarray(field.f(xyz), dtype=complex),
                None))
    return OperatorSymbol(tuple(terms))


def symmetrized_hamiltonian_symbol(profile: ConformalProfile, field: SliceField | None,
                                   t: float, m: float, basis: GammaBasis | None = None,
                                   check_timelike_at=None) -> OperatorSymbol:
    """A_t = H~ + (A_t - H~) in the canonical normal form.

    With field None (u = dt) this is H~ plus the (Omega-1) m gamma0 term.
    When sample points are supplied, u is checked to be future-directed
    timelike there.
    """
    if field is not None and check_timelike_at is not None:
        field.check_timelike(check_timelike_at)
    b = basis or dirac_gammas()
    return h_eta_tilde_symbol(profile, t, m, True, b) + delta_a_symbol(profile, field, t, m, b)


def conjugate_symbol(sym: OperatorSymbol, profile: ConformalProfile, t: float,
                     direction: str = "omega32_left"):
    """Split Omega^(±3/2) . sym . Omega^(∓3/2) into (T, L).

    Exact rule: conjugating c^mu d_mu by Omega^(s) adds the multiplication
    operator -s (d_mu Omega / Omega) c^mu; multiplication parts commute
    through.  direction "omega32_left" is s = +3/2 (Omega^{3/2} sym
    Omega^{-3/2}); "omega32_right" is s = -3/2.  Returns (T, L) with
    T the added multiplication symbol and L the unchanged input.
    """
    if direction == "omega32_left":
        s = 1.5
    elif direction == "omega32_right":
        s = -1.5
    else:
        raise ValueError("direction must be 'omega32_left' or 'omega32_right'")
    t_terms = []
    for term in sym.terms:
        if term.deriv is None:
            continue
        def tc(xyz, _term=term, _s=s):
            gw = profile.spatial_grad(t, xyz)[..., _term.deriv]
            w = profile.value(t, xyz)
            return -_s * (gw / w) * _as_field(_term.coeff)(xyz)
        t_terms.append(SymbolTerm(term.matrix, tc, None))
    return OperatorSymbol(tuple(t_terms)), sym


# ---------------------------------------------------------------------------
# second-order coefficient sets


@dataclass(frozen=True)
class AlphaCoeffs:
    alpha1: complex
    alpha2: np.ndarray      # (3,) Cartesian
    alpha3: np.ndarray      # (3,)
    alpha4: np.ndarray      # (3, 4): [mu, rho]
    alpha5: complex


@dataclass(frozen=True)
class BetaCoeffs:
    beta1: complex
    beta2: np.ndarray
    beta3: np.ndarray
    beta4: np.ndarray
    beta5: complex


def scenario2_alpha_coeffs(profile: ConformalProfile, field: SliceField, t: float, xyz) -> AlphaCoeffs:
    """Coefficients of the massless first-order perturbation operator.

    alpha1 = -i f, alpha2 = i X, alpha3 = f b + (-i/2) grad f with
    b = -(3/2) i grad(Omega)/Omega, alpha4 = i X (x) d, and
    alpha5 = (3/2) i X.grad(Omega)/Omega + (i/2) div X (the metric
    divergence combination, identical in any chart).
    """
    xyz = np.asarray(xyz, dtype=float)
    w = profile.value(t, xyz)
    gw = profile.spatial_grad(t, xyz)
    f = complex(np.asarray(field.f(xyz)))
    X = np.asarray(field.X(xyz), dtype=complex)
    gf = np.asarray(field.f_grad(xyz), dtype=complex)
    a = -1j
    b = -1.5j * gw / w
    alpha1 = a * f
    alpha2 = 1j * X
    alpha3 = f * b + (a / 2.0) * gf
    d = _d_vector(profile, t, xyz)
    alpha4 = 1j * np.einsum("m,r->mr", X, d.astype(complex))
    alpha5 = 1.5j * complex(X @ (gw / w)) + 0.5j * complex(np.asarray(field.x_div(xyz)))
    return AlphaCoeffs(complex(alpha1), alpha2, alpha3, alpha4, complex(alpha5))


def _x_dot(field: SliceField, xyz, dynamics: str):
    """dX/dt under the chosen reading of the flow; also returns its divergence."""
    gf = np.asarray(field.f_grad(xyz), dtype=float)
    lap = np.asarray(field.f_lap(xyz), dtype=float)
    if dynamics == "inverse":
        f = np.asarray(field.f(xyz), dtype=float)
        if np.any(f <= 0):
            raise ValueError("f must be positive for the literal f^-1 flow")
        xdot = gf / f**2
        div = lap / f**2 - 2.0 * np.sum(gf * gf, axis=-1) / f**3
    elif dynamics == "linear":
        xdot = gf
        div = lap
    else:
        raise ValueError("dynamics must be 'inverse' or 'linear'")
    return xdot, div


def scenario2_beta_coeffs(profile: ConformalProfile, field: SliceField, t: float, xyz,
                          dynamics: str = "inverse") -> BetaCoeffs:
    """Coefficients of the time derivative of the perturbation operator.

    Uses df/dt = div(X)/3 and dX/dt per `dynamics`: "inverse" is the
    literal -grad(f^-1) = grad(f)/f^2 (requires f > 0), "linear" its
    small-perturbation limit grad(f).
    """
    xyz = np.asarray(xyz, dtype=float)
    w = profile.value(t, xyz)
    gw = profile.spatial_grad(t, xyz)
    wd = profile.dot(t, xyz)
    gwd = profile.dot_grad(t, xyz)
    wdd = profile.ddot(t, xyz)
    f = complex(np.asarray(field.f(xyz)))
    X = np.asarray(field.X(xyz), dtype=complex)
    divX = complex(np.asarray(field.x_div(xyz)))
    gdivX = np.asarray(field.x_div_grad(xyz), dtype=complex)
    xdot, div_xdot = _x_dot(field, xyz, dynamics)
    a = -1j
    b = -1.5j * gw / w
    b_dot = -1.5j * (gwd / w - wd * gw / w**2)
    d = _d_vector(profile, t, xyz).astype(complex)
    d_dot = 0.25 * np.concatenate(
        [np.atleast_1d(wdd / w - (wd / w) ** 2), -(gwd / w - wd * gw / w**2)], axis=-1).astype(complex)
    beta1 = (divX / 3.0) * a
    beta2 = 1j * xdot.astype(complex)
    beta3 = (divX / 3.0) * b + f * b_dot + (a / 6.0) * gdivX
    beta4 = 1j * np.einsum("m,r->mr", xdot.astype(complex), d) + 1j * np.einsum("m,r->mr", X, d_dot)
    beta5 = (1.5j * complex(xdot @ (gw / w)) + 0.5j * complex(div_xdot)
             + 1j * complex(X @ (1j * b_dot)))
    return BetaCoeffs(complex(beta1), beta2, beta3, beta4, complex(beta5))
