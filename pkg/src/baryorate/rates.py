"""Second-order rate assembly.

All paths evaluate the same double-momentum integral
    B2 = - int d3k/(2pi)^3 d3k'/(2pi)^3  (contraction of vertices against
         the on-shell pair kernel) over the sharp energy window,
either reduced to one radial integral (spatially radial multiplication
vertices), as a 6D Monte Carlo / nested quadrature over vertex pairs, or
from a caller-supplied pair function G.  The zeroth and first expansion
orders vanish identically and are reported as exact zeros.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import profile_fourier
from .conformal_geometry import ConformalProfile, delta_a_symbol
from .gamma_algebra import dirac_gammas
from .profile_fourier import GridFourierTable, RadialProfile, radial_hat
from .quadrature import IntegralResult, QuadConfig, integrate_1d
from .regularizing_field import SliceField
from .spectral_kernels import CutoffConfig, Vertex, gamma_pm, k_kernel, multiplication_vertex, omega_k

__all__ = [
    "ConfigError",
    "RateRequest",
    "RateReport",
    "LowOrderResult",
    "b0_and_b1",
    "i_ab",
    "rate_scenario1",
    "rate_scenario2",
    "rate_mixed",
    "rate_generic",
    "scenario1_pair_function",
]

TWO_PI = 2.0 * np.pi

LOW_ORDER_RATIONALE = ("diagonal spectral-density kernel vanishes at the window edge: "
                       "the on-shell sphere radius sqrt(omega^2 - m^2) -> 0 at omega = -m")


class ConfigError(ValueError):
    """A request violates one of the documented compatibility constraints."""


@dataclass(frozen=True)
class LowOrderResult:
    order0: float
    order1: float
    rationale: str


def b0_and_b1() -> LowOrderResult:
    """The zeroth and first orders of the rate expansion: exact zeros."""
    return LowOrderResult(0.0, 0.0, LOW_ORDER_RATIONALE)


@dataclass(frozen=True)
class RateRequest:
    profile: ConformalProfile
    cutoffs: CutoffConfig
    quad: QuadConfig = QuadConfig()
    m: float = 0.0
    t: float = 0.0
    scenario: str = "scenario1"
    field: SliceField | None = None
    G: object = None
    grid_n: int = 40
    conjugation_direction: str = "omega32_left"
    dynamics_form: str = "linear"
    iab_method: str = "mc"

    def validate(self):
        lam = self.field.lam if self.field is not None else 0.0
        if self.scenario not in ("scenario1", "scenario2", "mixed", "generic"):
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.m < 0:
            raise ConfigError("constraint 'm >= 0' violated")
        if abs(self.cutoffs.m - self.m) > 1e-14:
            raise ConfigError("constraint 'cutoffs.m == m' violated")
        if self.scenario == "scenario1":
            if lam != 0.0:
                raise ConfigError("constraint 'scenario1 requires field absent or lambda = 0' violated")
            if self.m > 0 and not self.profile.is_radial:
                raise ConfigError("constraint 'scenario1 requires a spatially radial profile' violated "
                                  "(route non-radial profiles through scenario 'generic')")
            if self.m > 0 and self.profile.compact_support_radius is None:
                raise ConfigError("constraint 'scenario1 requires a compactly supported profile' violated")
        elif self.scenario == "scenario2":
            if self.m != 0.0:
                raise ConfigError("constraint 'scenario2 requires m = 0' violated (use scenario 'mixed')")
        elif self.scenario == "mixed":
            if self.m <= 0.0:
                raise ConfigError("constraint 'mixed requires m > 0' violated (use scenario 'scenario2')")
            if self.field is None:
                raise ConfigError("constraint 'mixed requires a field' violated (use scenario 'scenario1')")
            if not self.profile.is_radial or self.profile.compact_support_radius is None:
                raise ConfigError("constraint 'mixed requires a radial compactly supported profile' violated")
        elif self.scenario == "generic":
            if self.G is None:
                raise ConfigError("constraint 'generic requires a pair function G' violated")
        return self


@dataclass
class RateReport:
    b2: float
    scenario: str
    error_estimate: float
    im_accumulator: float
    cutoffs: dict
    convention: dict
    order0: float = 0.0
    order1: float = 0.0
    perturbation_scale: float = 0.0
    tables: dict = dc_field(default_factory=dict)
    per_term: dict = dc_field(default_factory=dict)
    notes: tuple = ()
    config_payload: dict = dc_field(default_factory=dict)

    @property
    def report_hash(self) -> str:
        blob = json.dumps({"scenario": self.scenario, "cutoffs": self.cutoffs,
                           "convention": self.convention, "config": self.config_payload},
                          sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _convention(req: RateRequest) -> dict:
    rec = profile_fourier.convention_record()
    rec.update({
        "energy_window": "sharp |omega_k| <= Lambda on k, |omega_k'| <= 1/eps on k'",
        "conjugation_direction": req.conjugation_direction,
        "dynamics_form": req.dynamics_form,
        "conjugation_remainder": "-(3/2) (dOmega/Omega).c per Omega^(3/2) conjugation "
                                 "(fixed by the direct grid oracle; no extra 1/2)",
        "reduced_measure": "rho^2 d rho (mean/transfer variables, transfer measure kept)",
    })
    return rec


def _base_report(req: RateRequest, b2, err, im, **kw) -> RateReport:
    cut = req.cutoffs.as_dict()
    cut.update(kw.pop("extra_cutoffs", {}))
    return RateReport(b2=float(b2), scenario=req.scenario, error_estimate=float(err),
                      im_accumulator=float(im), cutoffs=cut, convention=_convention(req), **kw)


# ---------------------------------------------------------------------------
# scenario 1: radial reduction


def _radial_alpha_profiles(req: RateRequest):
    prof = req.profile
    R = prof.compact_support_radius

    def along_axis(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        xyz = np.zeros(s.shape + (3,))
        xyz[..., 0] = s
        return xyz

    a1 = RadialProfile(lambda s: np.asarray(prof.dot(req.t, along_axis(s))), R)
    a2 = RadialProfile(lambda s: np.asarray(prof.value(req.t, along_axis(s))) - 1.0, R)
    return a1, a2


def _sup_on_support(fn, R, n=64):
    s = np.linspace(0.0, R, n)
    return float(np.max(np.abs(fn(s))))


def rate_scenario1(req: RateRequest) -> RateReport:
    """Reduced radial form: B2 = 2 m^2 int drho/(2pi)^4 rho^2 (a1^ a2^ + a2^ a1^) K(rho).

    The transform pair (a1, a2) = (dOmega/dt, Omega - 1) at the requested
    time; real radial profiles make the symmetrized hat product
    2 Re(a1^ conj(a2^)).  rho_max is grown until the tail contribution is
    below tolerance and is echoed in the report.
    """
    req.validate()
    a1, a2 = _radial_alpha_profiles(req)
    notes = []
    pscale = _perturbation_scale(req)
    if req.m == 0.0:
        notes.append("massless with u = dt: the perturbation operator vanishes; exact zero")
        return _base_report(req, 0.0, 0.0, 0.0, notes=tuple(notes),
                            perturbation_scale=pscale, extra_cutoffs={"rho_max": 0.0})
    R = req.profile.compact_support_radius
    scale1 = _sup_on_support(a1, R)
    scale2 = _sup_on_support(a2, R)
    if scale1 == 0.0 or scale2 == 0.0:
        notes.append("one transform factor vanishes identically; exact zero")
        return _base_report(req, 0.0, 0.0, 0.0, notes=tuple(notes),
                            perturbation_scale=pscale, extra_cutoffs={"rho_max": 0.0})

    hat_cfg = req.quad.with_(rel_tol=min(req.quad.rel_tol, 1e-9), abs_tol=1e-18)
    k_cache: dict[float, IntegralResult] = {}

    def K(rho):
        r = float(rho)
        if r not in k_cache:
            k_cache[r] = k_kernel(r, req.m, req.cutoffs,
                                  req.quad.with_(rel_tol=1e-8, abs_tol=1e-12, max_evals=600_000))
        return k_cache[r]

    def integrand(rhos):
        rhos = np.atleast_1d(rhos)
        out = np.empty_like(rhos)
        for i, r in enumerate(rhos):
            if r <= 0.0:
                out[i] = 0.0
                continue
            h1 = radial_hat(a1, r, hat_cfg)
            h2 = radial_hat(a2, r, hat_cfg)
            out[i] = r * r * 2.0 * h1 * h2 * K(r).value
        return out

    seg = max(8.0 / R, 2.0 / max(req.cutoffs.Lambda, 1.0))
    total, err, rho_max = 0.0, 0.0, 0.0
    quiet = 0
    for _ in range(64):
        res = integrate_1d(integrand, rho_max, rho_max + seg, req.quad.with_(abs_tol=1e-18))
        total += res.real
        err += res.error_estimate
        rho_max += seg
        if abs(res.value) <= max(req.quad.abs_tol, 0.25 * req.quad.rel_tol * abs(total)):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    pref = 2.0 * req.m**2 / TWO_PI**4
    b2 = pref * total
    table_rho = np.linspace(seg / 8.0, rho_max, 48)
    tables = {
        "alpha_hat": np.stack([table_rho,
                               [radial_hat(a1, r, hat_cfg) for r in table_rho],
                               [radial_hat(a2, r, hat_cfg) for r in table_rho]], axis=1),
        "k_kernel": np.stack([table_rho, [K(r).value.real if isinstance(K(r).value, complex)
                                          else K(r).value for r in table_rho]], axis=1),
    }
    return _base_report(req, b2, pref * err + 1e-8 * abs(b2), 0.0, tables=tables,
                        notes=tuple(notes), perturbation_scale=pscale,
                        extra_cutoffs={"rho_max": rho_max})


def _perturbation_scale(req: RateRequest) -> float:
    """sup-norm of the perturbation coefficients over an inverse-gap scale.

    Heuristic surrogate for the resolvent smallness requirement; reported,
    never asserted.
    """
    R = req.profile.compact_support_radius or (req.field.support_radius if req.field else 1.0)
    g = np.linspace(-R, R, 9)
    pts = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    sym = delta_a_symbol(req.profile, req.field, req.t, req.m)
    sup = sym.coeff_sup_norm(pts)
    gap = max(req.m, 1.0 / max(R, 1e-12))
    return sup / gap


# ---------------------------------------------------------------------------
# pair integrals


def _pair_sampler(cutoffs: CutoffConfig, transfer_scale: float):
    """(k, k') sampler: mean momentum uniform in a covering ball, transfer
    with an exponential-decay radial profile (Jacobian of (r,q)->(k,k') is 1)."""
    s = max(transfer_scale, 1e-3)
    R = cutoffs.s_max + 5.0 * s
    vol = 4.0 / 3.0 * np.pi * R**3

    def sample(gen, n):
        v = gen.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        r = v * (R * gen.random(n) ** (1.0 / 3.0))[:, None]
        qn = gen.gamma(3.0, s, size=n)
        qd = gen.normal(size=(n, 3))
        qd /= np.linalg.norm(qd, axis=1, keepdims=True)
        q = qd * qn[:, None]
        pts = np.concatenate([r + 0.5 * q, r - 0.5 * q], axis=1)
        pdf = (1.0 / vol) * np.exp(-qn / s) / (8.0 * np.pi * s**3)
        return pts, pdf

    return sample


def _band_mask(k, kp, cutoffs: CutoffConfig):
    return ((omega_k(k, cutoffs.m) <= cutoffs.Lambda)
            & (omega_k(kp, cutoffs.m) <= 1.0 / cutoffs.eps))


def i_ab(A: Vertex, B: Vertex, cutoffs: CutoffConfig, quad: QuadConfig,
         method: str = "mc") -> IntegralResult:
    """Pair integral -int d3k d3k'/(2pi)^6 (Gamma_+ + Gamma_-) over the window.

    method "mc" uses importance-sampled Monte Carlo; "quad" uses a nested
    Gauss-Legendre rule in (|k|, |k'|, angle), valid when both vertices are
    rotationally covariant with radial transfer profiles.
    """
    if A.is_zero or B.is_zero:
        return IntegralResult(0.0, 0.0, 0, True)
    if method == "mc":
        from .quadrature import mc_integrate
        scale = 0.5 * (A.transfer_scale + B.transfer_scale)

        def f(pts):
            k, kp = pts[:, :3], pts[:, 3:]
            mask = _band_mask(k, kp, cutoffs)
            gp, gm = gamma_pm(A, B, k, kp, cutoffs)
            return -(gp + gm) * mask / TWO_PI**6

        return mc_integrate(f, _pair_sampler(cutoffs, scale), quad)
    if method == "quad":
        if not (A.radial and B.radial):
            raise ConfigError("deterministic pair integration needs radial vertices")
        return _i_ab_quad(A, B, cutoffs, quad)
    raise ConfigError(f"unknown i_ab method {method!r}")


def _i_ab_quad(A: Vertex, B: Vertex, cutoffs: CutoffConfig, quad: QuadConfig) -> IntegralResult:
    from numpy.polynomial.legendre import leggauss

    s_max = cutoffs.s_max
    tail = 15.0 * 0.5 * (A.transfer_scale + B.transfer_scale)
    sp_max = min(cutoffs.kprime_max, s_max + tail)

    def value(ns, nc):
        xs, ws = leggauss(ns)
        xc, wc = leggauss(nc)
        s = 0.5 * (xs + 1.0) * s_max
        w_s = 0.5 * s_max * ws
        sp = 0.5 * (xs + 1.0) * sp_max
        w_sp = 0.5 * sp_max * ws
        c = xc
        w_c = wc
        S, SP, C = np.meshgrid(s, sp, c, indexing="ij")
        k = np.stack([np.zeros_like(S), np.zeros_like(S), S], axis=-1)
        sg = np.sqrt(np.clip(1.0 - C**2, 0.0, None))
        kp = np.stack([SP * sg, np.zeros_like(SP), SP * C], axis=-1)
        gp, gm = gamma_pm(A, B, k, kp, cutoffs)
        mask = _band_mask(k, kp, cutoffs)
        integ = (gp + gm) * mask * S**2 * SP**2
        acc = np.einsum("i,j,k,ijk->", w_s, w_sp, w_c, integ)
        return -(8.0 * np.pi**2 / TWO_PI**6) * acc

    coarse = value(96, 48)
    fine = value(160, 80)
    err = abs(fine - coarse)
    val = fine
    if abs(val.imag) < 1e-300:
        val = val.real
    return IntegralResult(val, float(err), 160 * 160 * 80, True)


# ---------------------------------------------------------------------------
# scenario 2 vertices


def _hat_of(field_fn, half_width, n):
    return GridFourierTable(field_fn, half_width, n)


def _scenario2_vertices(req: RateRequest) -> dict:
    """Build the (L1, L2, T1, T2) vertex set from the profile and field.

    Coefficient fields are assembled in Cartesian components (massless
    perturbation operator and its time derivative, plus the conjugation
    remainders), each scalar field transformed once on a padded FFT grid.
    """
    prof, fld, t = req.profile, req.field, req.t
    b = dirac_gammas()
    supp = max(fld.support_radius, prof.compact_support_radius or 0.0)
    L = 1.6 * supp
    n = req.grid_n
    tscale = 4.0 / max(supp, 1e-6)
    sgn = -1.5 if req.conjugation_direction == "omega32_left" else 1.5

    def logw(xyz):
        return prof.spatial_grad(t, xyz) / prof.value(t, xyz)[..., None]

    def logw_dot(xyz):
        w = prof.value(t, xyz)
        return (prof.dot_grad(t, xyz) - prof.dot(t, xyz)[..., None] * prof.spatial_grad(t, xyz)
                / w[..., None]) / w[..., None]

    def d_vec(xyz):
        w = prof.value(t, xyz)
        return 0.25 * np.concatenate([(prof.dot(t, xyz) / w)[..., None],
                                      -prof.spatial_grad(t, xyz) / w[..., None]], axis=-1)

    def d_vec_dot(xyz):
        w = prof.value(t, xyz)
        wd = prof.dot(t, xyz)
        head = (prof.ddot(t, xyz) / w - (wd / w) ** 2)[..., None]
        return 0.25 * np.concatenate([head, -logw_dot(xyz)], axis=-1)

    def xdot(xyz):
        if req.dynamics_form == "linear":
            return fld.f_grad(xyz)
        f = np.asarray(fld.f(xyz), dtype=float)
        return fld.f_grad(xyz) / f[..., None] ** 2

    def xdot_div(xyz):
        if req.dynamics_form == "linear":
            return fld.f_lap(xyz)
        f = np.asarray(fld.f(xyz), dtype=float)
        gf = fld.f_grad(xyz)
        return fld.f_lap(xyz) / f**2 - 2.0 * np.einsum("...i,...i->...", gf, gf) / f**3

    gg = [b.gamma0 @ b.spatial[mu] for mu in range(3)]
    from .conformal_geometry import _commutator_blocks
    cb = _commutator_blocks(b)

    def onehot(mu, fn):
        def ahat(q, _mu=mu, _fn=fn):
            base = np.asarray(_fn(q), dtype=complex)
            out = np.zeros(base.shape + (3,), dtype=complex)
            out[..., _mu] = base
            return out
        return ahat

    # --- L1 ---
    h_f = _hat_of(lambda x: -1j * np.asarray(fld.f(x), dtype=complex), L, n)
    h_X = [_hat_of(lambda x, _m=mu: 1j * np.asarray(fld.X(x), dtype=complex)[..., _m], L, n)
           for mu in range(3)]
    h_a3 = [_hat_of(lambda x, _m=mu: -1.5j * np.asarray(fld.f(x)) * logw(x)[..., _m]
                    - 0.5j * fld.f_grad(x)[..., _m], L, n) for mu in range(3)]
    h_a4 = [[_hat_of(lambda x, _m=mu, _r=rho: 1j * np.asarray(fld.X(x))[..., _m] * d_vec(x)[..., _r], L, n)
             for rho in range(4)] for mu in range(3)]
    h_a5 = _hat_of(lambda x: 1.5j * np.einsum("...i,...i->...", np.asarray(fld.X(x)), logw(x))
                   + 0.5j * np.asarray(fld.x_div(x)), L, n)

    def stack_X(q):
        return np.stack([h.hat(q) for h in h_X], axis=-1)

    L1 = Vertex(
        mult_terms=tuple([(gg[mu], h_a3[mu].hat) for mu in range(3)]
                         + [(cb[mu][rho], h_a4[mu][rho].hat) for mu in range(3) for rho in range(4)]
                         + [(b.identity, h_a5.hat)]),
        deriv_terms=tuple([(gg[mu], onehot(mu, h_f.hat)) for mu in range(3)]
                          + [(b.identity, stack_X)]),
        transfer_scale=tscale)

    # --- L2 ---
    h_b1 = _hat_of(lambda x: (-1j / 3.0) * np.asarray(fld.x_div(x), dtype=complex), L, n)
    h_xd = [_hat_of(lambda x, _m=mu: 1j * np.asarray(xdot(x), dtype=complex)[..., _m], L, n)
            for mu in range(3)]
    h_b3 = [_hat_of(lambda x, _m=mu: (np.asarray(fld.x_div(x)) / 3.0) * (-1.5j) * logw(x)[..., _m]
                    + np.asarray(fld.f(x)) * (-1.5j) * logw_dot(x)[..., _m]
                    + (-1j / 6.0) * fld.x_div_grad(x)[..., _m], L, n) for mu in range(3)]
    h_b4 = [[_hat_of(lambda x, _m=mu, _r=rho: 1j * (np.asarray(xdot(x))[..., _m] * d_vec(x)[..., _r]
                                                    + np.asarray(fld.X(x))[..., _m] * d_vec_dot(x)[..., _r]),
                     L, n) for rho in range(4)] for mu in range(3)]
    h_b5 = _hat_of(lambda x: 1.5j * np.einsum("...i,...i->...", np.asarray(xdot(x)), logw(x))
                   + 0.5j * np.asarray(xdot_div(x))
                   + 1.5j * np.einsum("...i,...i->...", np.asarray(fld.X(x)), logw_dot(x)), L, n)

    def stack_xd(q):
        return np.stack([h.hat(q) for h in h_xd], axis=-1)

    L2 = Vertex(
        mult_terms=tuple([(gg[mu], h_b3[mu].hat) for mu in range(3)]
                         + [(cb[mu][rho], h_b4[mu][rho].hat) for mu in range(3) for rho in range(4)]
                         + [(b.identity, h_b5.hat)]),
        deriv_terms=tuple([(gg[mu], onehot(mu, h_b1.hat)) for mu in range(3)]
                          + [(b.identity, stack_xd)]),
        transfer_scale=tscale)

    # --- T1, T2: conjugation remainders, multiplication only ---
    h_t1_g = [_hat_of(lambda x, _m=mu: sgn * logw(x)[..., _m] * (-1j) * np.asarray(fld.f(x), dtype=complex),
                      L, n) for mu in range(3)]
    h_t1_id = _hat_of(lambda x: sgn * np.einsum("...i,...i->...", logw(x),
                                                1j * np.asarray(fld.X(x), dtype=complex)), L, n)
    T1 = Vertex(mult_terms=tuple([(gg[mu], h_t1_g[mu].hat) for mu in range(3)]
                                 + [(b.identity, h_t1_id.hat)]),
                transfer_scale=tscale)

    h_t2_g = [_hat_of(lambda x, _m=mu: sgn * (logw_dot(x)[..., _m] * (-1j) * np.asarray(fld.f(x))
                                              + logw(x)[..., _m] * (-1j / 3.0) * np.asarray(fld.x_div(x))),
                      L, n) for mu in range(3)]
    h_t2_id = _hat_of(lambda x: sgn * (np.einsum("...i,...i->...", logw_dot(x), 1j * np.asarray(fld.X(x)))
                                       + np.einsum("...i,...i->...", logw(x), 1j * np.asarray(xdot(x)))),
                      L, n)
    T2 = Vertex(mult_terms=tuple([(gg[mu], h_t2_g[mu].hat) for mu in range(3)]
                                 + [(b.identity, h_t2_id.hat)]),
                transfer_scale=tscale)

    return {"L1": L1, "L2": L2, "T1": T1, "T2": T2}


_S2_PAIRS = (("T2", "T1"), ("T2", "L1"), ("L2", "T1"), ("L2", "L1"),
             ("T1", "T2"), ("T1", "L2"), ("L1", "T2"), ("L1", "L2"))


def rate_scenario2(req: RateRequest) -> RateReport:
    """Massless rate from a nontrivial regularizing field.

    B2 = -lambda^2 * sum of the eight ordered pair integrals over
    {mult remainder, first-order part} x {its time derivative}; the vertex
    coefficient fields carry no lambda, so the lambda^2 scaling is exact.
    """
    req.validate()
    lam = req.field.lam if req.field is not None else 0.0
    pscale = _perturbation_scale(req) if req.field is not None else 0.0
    if req.field is None or lam == 0.0:
        return _base_report(req, 0.0, 0.0, 0.0, perturbation_scale=pscale,
                            notes=("field absent or lambda = 0: perturbation vanishes; exact zero",))
    verts = _scenario2_vertices(req)
    per_term = {}
    total = 0.0 + 0.0j
    err2 = 0.0
    for ia, (na, nb) in enumerate(_S2_PAIRS):
        res = i_ab(verts[na], verts[nb], req.cutoffs,
                   req.quad.with_(seed=req.quad.seed + 1000 * ia), method=req.iab_method)
        per_term[f"I_{na}{nb}"] = res
        total += res.value
        err2 += res.error_estimate**2
    b2c = -lam * lam * total
    im = abs(np.imag(b2c))
    return _base_report(req, np.real(b2c), lam * lam * np.sqrt(err2), im,
                        per_term=per_term, perturbation_scale=pscale)


_MIXED_PAIRS = (("T4", "T1"), ("T4", "L1"), ("T2", "T3"), ("L2", "T3"),
                ("T3", "T2"), ("T3", "L2"), ("T1", "T4"), ("L1", "T4"))


def rate_mixed(req: RateRequest) -> RateReport:
    """Massive rate with a nontrivial field: pure-mass part, pure-field part,
    and the m*lambda cross terms built from the (Omega-1) and dOmega/dt
    multiplication vertices."""
    req.validate()
    lam = req.field.lam
    s1 = rate_scenario1(RateRequest(profile=req.profile, cutoffs=req.cutoffs, quad=req.quad,
                                    m=req.m, t=req.t, scenario="scenario1"))
    s2req = RateRequest(profile=req.profile, cutoffs=CutoffConfig(req.cutoffs.eps, req.cutoffs.Lambda, 0.0),
                        quad=req.quad, m=0.0, t=req.t, scenario="scenario2", field=req.field,
                        grid_n=req.grid_n, conjugation_direction=req.conjugation_direction,
                        dynamics_form=req.dynamics_form, iab_method=req.iab_method)
    s2 = rate_scenario2(s2req)
    per_term = dict(s2.per_term)
    cross = 0.0 + 0.0j
    err2 = s1.error_estimate**2 + s2.error_estimate**2
    if lam != 0.0:
        verts = _scenario2_vertices(s2req)
        a1, a2 = _radial_alpha_profiles(req)
        R = req.profile.compact_support_radius
        rho_grid = np.linspace(1e-6, 30.0 / R * 6.0, 1200)
        t3_tab = np.array([radial_hat(a2, r) for r in rho_grid])
        t4_tab = np.array([radial_hat(a1, r) for r in rho_grid])

        def t3_hat(q):
            qn = np.linalg.norm(np.asarray(q, dtype=float), axis=-1)
            return np.interp(qn, rho_grid, t3_tab).astype(complex)

        def t4_hat(q):
            qn = np.linalg.norm(np.asarray(q, dtype=float), axis=-1)
            return np.interp(qn, rho_grid, t4_tab).astype(complex)

        b = dirac_gammas()
        verts = dict(verts)
        verts["T3"] = multiplication_vertex(b.gamma0, t3_hat, radial=True,
                                            transfer_scale=4.0 / R)
        verts["T4"] = multiplication_vertex(b.gamma0, t4_hat, radial=True,
                                            transfer_scale=4.0 / R)
        for ia, (na, nb) in enumerate(_MIXED_PAIRS):
            res = i_ab(verts[na], verts[nb], req.cutoffs,
                       req.quad.with_(seed=req.quad.seed + 7000 + 1000 * ia), method=req.iab_method)
            per_term[f"I_{na}{nb}"] = res
            cross += res.value
            err2 += (req.m * lam * res.error_estimate) ** 2
    b2c = s1.b2 + s2.b2 - req.m * lam * cross
    im = abs(np.imag(b2c)) + s2.im_accumulator
    rep = _base_report(req, np.real(b2c), np.sqrt(err2), im, per_term=per_term,
                       perturbation_scale=max(s1.perturbation_scale, s2.perturbation_scale))
    rep.tables.update(s1.tables)
    rep.per_term["mass_part"] = s1.b2
    rep.per_term["field_part"] = s2.b2
    rep.per_term["cross_part"] = float(np.real(-req.m * lam * cross))
    return rep


def rate_generic(req: RateRequest) -> RateReport:
    """Direct pair-function form: B2 = -int d3k d3k'/(2pi)^6 G(k,k') /
    (4 wk wk' (wk+wk')^2) over the energy window, by importance-sampled MC."""
    req.validate()
    from .quadrature import mc_integrate

    G = req.G
    cut = req.cutoffs

    def f(pts):
        k, kp = pts[:, :3], pts[:, 3:]
        wk = omega_k(k, req.m)
        wkp = omega_k(kp, req.m)
        mask = _band_mask(k, kp, cut)
        g = np.asarray(G(k, kp), dtype=complex)
        return -g * mask / (4.0 * wk * wkp * (wk + wkp) ** 2) / TWO_PI**6

    res = mc_integrate(f, _pair_sampler(cut, req.quad.importance_scale), req.quad)
    im = abs(np.imag(res.value))
    return _base_report(req, np.real(res.value), res.error_estimate, im,
                        per_term={"mc_evals": res.evals})


def scenario1_pair_function(profile: ConformalProfile, m: float, t: float,
                            rho_max: float = 40.0, n_table: int = 2000):
    """Pair function reproducing the reduced radial form through the generic path.

    G(k,k') = -8 m^2 (-wk wk' + m^2 - k.k') * 2 a1^(|q|) a2^(|q|), q = k - k',
    with the hats tabulated once and linearly interpolated.  The -8 out
    front makes the generic evaluator compute exactly the same quantity as
    the reduced radial form under this package's conventions.
    """
    req = RateRequest(profile=profile, cutoffs=CutoffConfig(1e-6, max(10 * m, 1.0), m),
                      m=m, t=t)
    a1, a2 = _radial_alpha_profiles(req)
    grid = np.linspace(1e-9, rho_max, n_table)
    tab = np.array([2.0 * radial_hat(a1, r) * radial_hat(a2, r) for r in grid])

    def G(k, kp):
        k = np.asarray(k, dtype=float)
        kp = np.asarray(kp, dtype=float)
        wk = omega_k(k, m)
        wkp = omega_k(kp, m)
        dot = np.einsum("...i,...i->...", k, kp)
        qn = np.linalg.norm(k - kp, axis=-1)
        hats = np.interp(qn, grid, tab, right=0.0)
        return -8.0 * m * m * (-wk * wkp + m * m - dot) * hats

    return G
