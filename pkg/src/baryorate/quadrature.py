"""Integration engines: adaptive 1D/2D Gauss-Kronrod and blockwise Monte Carlo.

Determinism contract: equal inputs and seed give bitwise-identical results.
The MC engine draws each fixed-size block from its own counter-based Philox
stream keyed by (seed, block index) and combines block partials in index
order, so results do not depend on how blocks are scheduled across workers.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "QuadConfig",
    "IntegralResult",
    "integrate_1d",
    "integrate_2d",
    "mc_integrate",
    "uniform_box_sampler",
    "gaussian_sampler",
    "ball_sampler",
]


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_evals: int = 500_000
    mc_samples: int = 100_000
    seed: int = 0
    importance_scale: float = 1.0
    mc_block: int = 65_536
    threads: int = 1

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    evals: int
    converged: bool

    @property
    def real(self) -> float:
        return float(np.real(self.value))


# 15-point Kronrod nodes with embedded 7-point Gauss weights.
_XK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])          # 15 ascending nodes
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _realify(z):
    return z.real if (isinstance(z, complex) and z.imag == 0.0) else z


def _gk_panel(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    fx = np.asarray(f(x), dtype=complex)
    vk = half * np.sum(_WEIGHTS_K * fx)
    vg = half * np.sum(_WEIGHTS_G * fx)
    err = abs(vk - vg)
    return vk, (200.0 * err) ** 1.5 if err > 0 else 0.0


def integrate_1d(f, a, b, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Adaptive Gauss-Kronrod integration of f over [a, b].

    f must accept a 1D ndarray of evaluation points and return values of
    the same shape (real or complex).
    """
    a, b = float(a), float(b)
    if a == b:
        return IntegralResult(0.0, 0.0, 0, True)
    val, err = _gk_panel(f, a, b)
    heap = [(-err, 0, a, b, val, err)]
    evals, counter = 15, 0
    while True:
        total = sum(item[4] for item in heap)
        total_err = sum(item[5] for item in heap)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if total_err <= tol:
            return IntegralResult(_realify(total), total_err, evals, True)
        if evals + 30 > cfg.max_evals:
            return IntegralResult(_realify(total), total_err, evals, False)
        _, _, lo, hi, _, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        for left, right in ((lo, mid), (mid, hi)):
            v, e = _gk_panel(f, left, right)
            counter += 1
            heapq.heappush(heap, (-e, counter, left, right, v, e))
        evals += 30


def _gk_panel_2d(f, ax, bx, ay, by):
    hx, hy = 0.5 * (bx - ax), 0.5 * (by - ay)
    x = 0.5 * (ax + bx) + hx * _NODES
    y = 0.5 * (ay + by) + hy * _NODES
    X, Y = np.meshgrid(x, y, indexing="ij")
    fz = np.asarray(f(X, Y), dtype=complex)
    vk = hx * hy * np.einsum("i,j,ij->", _WEIGHTS_K, _WEIGHTS_K, fz)
    vg = hx * hy * np.einsum("i,j,ij->", _WEIGHTS_G, _WEIGHTS_G, fz)
    err = abs(vk - vg)
    return vk, (100.0 * err) ** 1.25 if err > 0 else 0.0


def integrate_2d(f, domain, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Adaptive tensor Gauss-Kronrod over the rectangle domain=(ax, bx, ay, by).

    f must accept meshgrid arrays (X, Y) and return an array of that shape.
    """
    ax, bx, ay, by = map(float, domain)
    val, err = _gk_panel_2d(f, ax, bx, ay, by)
    heap = [(-err, 0, ax, bx, ay, by, val, err)]
    evals, counter = 225, 0
    while True:
        total = sum(item[6] for item in heap)
        total_err = sum(item[7] for item in heap)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if total_err <= tol:
            return IntegralResult(_realify(total), total_err, evals, True)
        if evals + 450 > cfg.max_evals:
            return IntegralResult(_realify(total), total_err, evals, False)
        _, _, x0, x1, y0, y1, _, _ = heapq.heappop(heap)
        if (x1 - x0) >= (y1 - y0):
            xm = 0.5 * (x0 + x1)
            cells = ((x0, xm, y0, y1), (xm, x1, y0, y1))
        else:
            ym = 0.5 * (y0 + y1)
            cells = ((x0, x1, y0, ym), (x0, x1, ym, y1))
        for cell in cells:
            v, e = _gk_panel_2d(f, *cell)
            counter += 1
            heapq.heappush(heap, (-e, counter, *cell, v, e))
        evals += 450


def _mc_block(f, sampler, seed, block_index, n):
    gen = np.random.Generator(np.random.Philox(key=(int(seed) & 0xFFFFFFFFFFFFFFFF, block_index)))
    pts, pdf = sampler(gen, n)
    pdf = np.asarray(pdf, dtype=float)
    vals = np.asarray(f(pts), dtype=complex)
    ok = pdf > 0
    w = np.zeros(n, dtype=complex)
    w[ok] = vals[ok] / pdf[ok]
    return w.sum(), np.sum(np.abs(w) ** 2), int(np.count_nonzero(ok))


def mc_integrate(f, sampler, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Importance-sampled Monte Carlo estimate of an integral.

    sampler(gen, n) must return (points, density) where density is the
    sampling pdf evaluated at the points; f(points) returns the integrand
    values.  The estimate is mean(f/density) with a standard-error estimate.
    """
    n_total = int(cfg.mc_samples)
    if n_total <= 0:
        raise ValueError("mc_samples must be positive")
    sizes = []
    left = n_total
    while left > 0:
        take = min(cfg.mc_block, left)
        sizes.append(take)
        left -= take
    jobs = list(enumerate(sizes))
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            partials = list(ex.map(lambda ib: _mc_block(f, sampler, cfg.seed, ib[0], ib[1]), jobs))
    else:
        partials = [_mc_block(f, sampler, cfg.seed, i, n) for i, n in jobs]
    # fixed-order pairwise combination keeps the result independent of scheduling
    sums = [p[0] for p in partials]
    sqs = [p[1] for p in partials]
    eff = sum(p[2] for p in partials)
    while len(sums) > 1:
        sums = [sums[i] + sums[i + 1] if i + 1 < len(sums) else sums[i] for i in range(0, len(sums), 2)]
        sqs = [sqs[i] + sqs[i + 1] if i + 1 < len(sqs) else sqs[i] for i in range(0, len(sqs), 2)]
    if eff == 0:
        raise RuntimeError("zero effective sample size: sampler density vanished on every draw")
    mean = sums[0] / n_total
    var = max(sqs[0] / n_total - abs(mean) ** 2, 0.0)
    se = float(np.sqrt(var / n_total))
    if abs(mean.imag) == 0.0:
        mean = mean.real
    return IntegralResult(mean, se, n_total, True)


def uniform_box_sampler(lo, hi):
    """Uniform sampler over the box prod_i [lo_i, hi_i]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    vol = float(np.prod(hi - lo))

    def sample(gen, n):
        pts = lo + (hi - lo) * gen.random((n, lo.size))
        return pts, np.full(n, 1.0 / vol)

    return sample


def gaussian_sampler(dim, sigma=1.0):
    """Isotropic centered Gaussian sampler in `dim` dimensions."""
    norm = (2 * np.pi * sigma**2) ** (dim / 2.0)

    def sample(gen, n):
        pts = gen.normal(scale=sigma, size=(n, dim))
        pdf = np.exp(-np.sum(pts**2, axis=1) / (2 * sigma**2)) / norm
        return pts, pdf

    return sample


def ball_sampler(radius, dim=3):
    """Uniform sampler inside the ball of the given radius."""
    if dim != 3:
        raise ValueError("only 3D balls are needed here")
    vol = 4.0 / 3.0 * np.pi * radius**3

    def sample(gen, n):
        v = gen.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        u = gen.random(n) ** (1.0 / 3.0)
        pts = v * (radius * u[:, None])
        return pts, np.full(n, 1.0 / vol)

    return sample
