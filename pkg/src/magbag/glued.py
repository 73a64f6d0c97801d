"""Chart-wise evaluation of the glued bag pair.

The configuration is covered by one exterior chart (abelian, Higgs norm
|phi_theta|) and one ball chart per shell point, where a smooth core with
residue r_p is interpolated into the abelian field by a radial cutoff.
Only gauge-invariant exterior quantities are exposed; ball charts carry
explicit connection tables.

Sign conventions: writing the exterior chart connection as the singular
hedgehog plus a correction (sum over the other points), exactness of the
abelian pair forces the correction 1-form to enter with a minus sign
relative to the primitive normalization of `alpha_pq` (whose exterior
derivative is +*d eta_pq).  The finite-difference residual oracle pins
this choice; see tests.
"""

from dataclasses import dataclass

import numpy as np

from .monopole import (
    SingularEvaluationError,
    coth_minus_inv,
    inv_minus_csch,
)
from .su2 import EPS, bracket, star_real_wedge, wedge_dual


class ChartViolationError(ValueError):
    pass


class NumericFailureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Cutoff profile

_PLATEAU_LO = 0.25  # chi = 1 at or below
_PLATEAU_HI = 0.5  # chi = 0 at or above


def _bump(s):
    """exp(-1/s) for s > 0, 0 otherwise; all derivatives vanish at 0."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def chi(t):
    """Smooth non-increasing cutoff: 1 on (-inf, 1/4], 0 on [1/2, inf)."""
    t = np.asarray(t, dtype=float)
    g = _bump(_PLATEAU_HI - t)
    h = _bump(t - _PLATEAU_LO)
    out = np.ones_like(t)
    hi = t >= _PLATEAU_HI
    mid = (t > _PLATEAU_LO) & ~hi
    out[hi] = 0.0
    out[mid] = g[mid] / (g[mid] + h[mid])
    return out if out.ndim else float(out)


def chi_prime(t):
    """Exact derivative of the cutoff (zero on both plateaus)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    mid = (t > _PLATEAU_LO) & (t < _PLATEAU_HI)
    tm = t[mid]
    g = np.exp(-1.0 / (_PLATEAU_HI - tm))
    h = np.exp(-1.0 / (tm - _PLATEAU_LO))
    gp = -g / (_PLATEAU_HI - tm) ** 2
    hp = h / (tm - _PLATEAU_LO) ** 2
    out[mid] = (gp * h - g * hp) / (g + h) ** 2
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class CutoffProfile:
    """The scalar cutoff; kept as a value object for report metadata."""

    plateau_lo: float = _PLATEAU_LO
    plateau_hi: float = _PLATEAU_HI

    def __call__(self, t):
        return chi(t)


def chi_p(x, p, L):
    """Ball cutoff chi(8|x-p|/L - 1): 1 inside radius L/8, 0 outside 3L/16."""
    d = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(p, dtype=float), axis=-1)
    return chi(8.0 * d / L - 1.0)


# ---------------------------------------------------------------------------
# Exterior harmonic data

def phi_theta(x, cfg):
    """1 - sum_p 1/|x - p| at points x (..., 3)."""
    x = np.asarray(x, dtype=float)
    diff = x[..., None, :] - cfg.points
    d = np.linalg.norm(diff, axis=-1)
    if np.any(d == 0.0):
        raise SingularEvaluationError("phi_theta evaluated on a shell point")
    return 1.0 - np.sum(1.0 / d, axis=-1)


def grad_phi_theta(x, cfg):
    """Gradient of phi_theta, sum_p (x-p)/|x-p|^3."""
    x = np.asarray(x, dtype=float)
    diff = x[..., None, :] - cfg.points
    d = np.linalg.norm(diff, axis=-1)
    if np.any(d == 0.0):
        raise SingularEvaluationError("grad_phi_theta evaluated on a shell point")
    return np.sum(diff / d[..., None] ** 3, axis=-2)


def eta_pq(x, p, q):
    """Recentred Coulomb tail of q seen from p: 1/|x-q| - 1/|p-q|."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    dxq = np.linalg.norm(x - q, axis=-1)
    dpq = np.linalg.norm(p - q)
    if dpq == 0.0 or np.any(dxq == 0.0):
        raise SingularEvaluationError("eta_pq evaluated at a singular point")
    return 1.0 / dxq - 1.0 / dpq


_GL_CACHE = {}


def _gl_nodes(n):
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        # Map from [-1, 1] to [0, 1].
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def _alpha_integral(w, D, order):
    """I = int_0^1 t / |D + t w|^3 dt, Gauss-Legendre of given order.

    Broadcasts over leading axes of w (..., 3) and D (..., 3).
    """
    t, wt = _gl_nodes(order)
    seg = D[..., None, :] + t[:, None] * w[..., None, :]
    nrm = np.linalg.norm(seg, axis=-1)
    return np.einsum("g,...g->...", wt * t, nrm**-3)


def alpha_pq(x, p, q, tol=1e-10):
    """Radial-gauge primitive of *d(eta_pq) centred at p.

    alpha(x) = (x-p) x (p-q) * int_0^1 t/|p-q+t(x-p)|^3 dt; it vanishes at
    p, has no radial component, and its exterior derivative reproduces
    *d(eta_pq).  Quadrature order doubles until two refinements agree to
    `tol`; failure to converge raises.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    w = x - p
    D = p - q
    cross = np.cross(w, D)
    cross_scale = np.max(np.abs(cross), initial=0.0)
    prev = _alpha_integral(w, D, 16)
    for order in (32, 64, 128):
        cur = _alpha_integral(w, D, order)
        if np.max(np.abs(cur - prev), initial=0.0) * cross_scale <= tol:
            return cross * cur[..., None]
        prev = cur
    raise NumericFailureError("alpha_pq quadrature did not converge")


def _others(cfg, p_idx):
    mask = np.ones(cfg.N, dtype=bool)
    mask[p_idx] = False
    return cfg.points[mask]


def _eta_alpha_sums(X, p_idx, cfg, order=8, chunk=512):
    """(sum_q eta_pq, sum_q alpha_pq) at points X (B, 3), batched over q.

    The sources sit at least 2L from the ball, so the segment integrand is
    nearly constant and a low Gauss-Legendre order is already exact; the
    order-doubling check still guards every call.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    p = cfg.points[p_idx]
    Q = _others(cfg, p_idx)
    D = p - Q  # (Nq, 3)
    dpq = np.linalg.norm(D, axis=1)
    eta = np.empty(len(X))
    alpha = np.empty((len(X), 3))
    for lo in range(0, len(X), chunk):
        xs = X[lo : lo + chunk]
        w = xs - p  # (b, 3)
        dxq = np.linalg.norm(xs[:, None, :] - Q[None, :, :], axis=-1)
        eta[lo : lo + chunk] = np.sum(1.0 / dxq - 1.0 / dpq, axis=1)
        I1 = _alpha_integral(w[:, None, :], D[None, :, :], order)
        I2 = _alpha_integral(w[:, None, :], D[None, :, :], 2 * order)
        if np.max(np.abs(I2 - I1)) > 1e-10:
            raise NumericFailureError("alpha quadrature did not converge")
        cross = np.cross(w[:, None, :], D[None, :, :])
        alpha[lo : lo + chunk] = np.sum(cross * I2[..., None], axis=1)
    return eta, alpha


# ---------------------------------------------------------------------------
# Charts

@dataclass(frozen=True)
class Chart:
    """Exterior chart (ball_index None) or the ball around one shell point."""

    ball_index: int | None = None

    @property
    def is_exterior(self):
        return self.ball_index is None


def _hedgehog(xhat, coeff):
    return np.asarray(coeff)[..., None, None] * np.einsum("ijk,...i->...jk", EPS, xhat)


def ball_fields(X, p_idx, cfg, order=8):
    """Ball-chart pair (a, phi) at points X (B, 3) inside the ball.

    Connection: (1/d - chi r/sinh(r d)) hedgehog - (1-chi) (sum_q alpha_pq)
    tensored with the radial algebra direction; Higgs: the core profile
    blended with the recentred exterior potential.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    p = cfg.points[p_idx]
    r = cfg.residues[p_idx]
    L = cfg.L
    w = X - p
    d = np.linalg.norm(w, axis=1)
    if np.any(d >= L):
        raise ChartViolationError("ball chart evaluated outside its ball")
    safe = np.where(d > 0, d, 1.0)
    xhat = w / safe[:, None]
    c = chi(8.0 * d / L - 1.0)
    s = r * d

    need_tail = np.any(c < 1.0)
    if need_tail:
        eta_sum, alpha_sum = _eta_alpha_sums(X, p_idx, cfg, order=order)
    else:
        eta_sum = np.zeros(len(X))
        alpha_sum = np.zeros((len(X), 3))

    # Connection: hedgehog coefficient 1/d - chi r/sinh(r d), written so the
    # chi = 1 plateau is the (cancellation-free) smooth-core profile.
    core = np.where(d > 0, c * r * inv_minus_csch(s) + (1.0 - c) / safe, 0.0)
    a = _hedgehog(xhat, core)
    a -= ((1.0 - c) * 1.0)[:, None, None] * alpha_sum[:, :, None] * xhat[:, None, :]

    higgs = c * r * coth_minus_inv(s) + (1.0 - c) * (r - 1.0 / safe - eta_sum)
    higgs = np.where(d > 0, higgs, 0.0)
    phi = higgs[:, None] * xhat
    return a, phi


def ball_evaluator(cfg, p_idx, order=8):
    def ev(pts):
        pts = np.asarray(pts, dtype=float)
        flat = pts.reshape(-1, 3)
        a, phi = ball_fields(flat, p_idx, cfg, order=order)
        shp = pts.shape[:-1]
        return a.reshape(*shp, 3, 3), phi.reshape(*shp, 3)

    return ev


def chart_pair(x, chart, cfg):
    """FieldSample in the given chart; raises outside its validity region.

    The exterior chart exposes only gauge-invariant content: its Higgs is
    phi_theta times the radial frame of the nearest ball and its connection
    slot is zeroed (the abelian potential needs a Dirac-string choice that
    nothing downstream requires; fluxes come from `grad_phi_theta`).
    """
    from .monopole import FieldSample

    x = np.asarray(x, dtype=float)
    if chart.is_exterior:
        dmin = np.min(np.linalg.norm(cfg.points - x, axis=1))
        if dmin <= cfg.L / 4:
            raise ChartViolationError("exterior chart evaluated inside a core ball")
        near = int(np.argmin(np.linalg.norm(cfg.points - x, axis=1)))
        frame = (x - cfg.points[near]) / np.linalg.norm(x - cfg.points[near])
        return FieldSample(a=np.zeros((3, 3)), phi=phi_theta(x, cfg) * frame)
    a, phi = ball_fields(x[None, :], chart.ball_index, cfg)
    return FieldSample(a=a[0], phi=phi[0])


def higgs_norm(x, cfg):
    """|Phi| at points x (..., 3): ball-chart coefficient within distance L
    of a shell point, |phi_theta| outside.  Continuous across the switch."""
    x = np.asarray(x, dtype=float)
    flat = np.atleast_2d(x.reshape(-1, 3))
    diff = flat[:, None, :] - cfg.points
    d_all = np.linalg.norm(diff, axis=-1)
    nearest = np.argmin(d_all, axis=1)
    d = d_all[np.arange(len(flat)), nearest]
    out = np.empty(len(flat))

    far = d >= cfg.L
    if np.any(far):
        out[far] = np.abs(1.0 - np.sum(1.0 / d_all[far], axis=1))

    near = ~far
    if np.any(near):
        dn = d[near]
        r = cfg.residues[nearest[near]]
        c = chi(8.0 * dn / cfg.L - 1.0)
        core = r * coth_minus_inv(r * dn)
        on_site = dn == 0.0
        dn_safe = np.where(on_site, 1.0, dn)
        # chi < 1 only off-centre, where phi_theta is finite; the identity
        # r_p - 1/d - sum eta = phi_theta collapses the tail sum.
        ext = np.zeros_like(dn)
        off = ~on_site & (c < 1.0)
        if np.any(off):
            idx = np.nonzero(near)[0][off]
            ext[off] = 1.0 - np.sum(1.0 / d_all[idx], axis=1)
        out[near] = np.abs(c * core + (1.0 - c) * ext)
        out[np.nonzero(near)[0][on_site]] = 0.0

    return out.reshape(x.shape[:-1]) if x.ndim > 1 else float(out[0])


# ---------------------------------------------------------------------------
# Explicit residual

@dataclass
class ResidualSample:
    gT: np.ndarray  # (3, 3) transverse part, <sigma_hat, gT> = 0
    gL: np.ndarray  # (3, 3) longitudinal part, [sigma_hat, gL] = 0
    x: np.ndarray


def residual_fields(X, p_idx, cfg, order=8):
    """(gT, gL) of the glued pair on the ball around point p, batched.

    Derived in closed form from the chart data; supported on the cutoff
    transition shell 5L/32 <= |x-p| <= 3L/16.  With d chi the radial
    cutoff differential, A_p the core's sinh correction 1-form, Q the core
    Higgs overshoot, eta/alpha the (signed) exterior tail sums:

        gT = *(dchi ^ A_p) + chi (chi - 1) [ (Q - eta)[sh, A_p]
                                             - *(alpha ^ [sh, A_p]) ]
        gL = chi (chi - 1) *(A_p ^ A_p) - ( *(dchi ^ alpha) + (Q - eta) dchi ) sh
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    p = cfg.points[p_idx]
    r = cfg.residues[p_idx]
    L = cfg.L
    w = X - p
    d = np.linalg.norm(w, axis=1)
    if np.any(d == 0.0):
        raise SingularEvaluationError("residual evaluated at a shell point")
    xhat = w / d[:, None]
    t = 8.0 * d / L - 1.0
    c = chi(t)
    cp = chi_prime(t) * (8.0 / L)  # radial derivative of chi_p
    live = (cp != 0.0) | ((c > 0.0) & (c < 1.0))

    gT = np.zeros((len(X), 3, 3))
    gL = np.zeros((len(X), 3, 3))
    if not np.any(live):
        return gT, gL

    Xl, dl, xh = X[live], d[live], xhat[live]
    cl, cpl = c[live], cp[live]
    s = r * dl
    eta_sum, alpha_sum = _eta_alpha_sums(Xl, p_idx, cfg, order=order)
    eta = -eta_sum  # (3.36)-style signed tails
    alpha = -alpha_sum
    Q = r * (1.0 / np.tanh(s) - 1.0)
    Ap = _hedgehog(xh, -r / np.sinh(s))
    dchi = cpl[:, None] * xh  # real 1-form
    sh_Ap = bracket(xh[:, None, :], Ap)  # [sigma_hat, A_p] per form row
    ccm = (cl * (cl - 1.0))[:, None, None]

    gT_l = star_real_wedge(dchi, Ap)
    gT_l += ccm * ((Q - eta)[:, None, None] * sh_Ap - star_real_wedge(alpha, sh_Ap))

    gL_l = ccm * 0.5 * wedge_dual(Ap, Ap)
    coeff = np.cross(dchi, alpha) + (Q - eta)[:, None] * dchi
    gL_l -= coeff[:, :, None] * xh[:, None, :]

    gT[live] = gT_l
    gL[live] = gL_l
    return gT, gL


def residual_explicit(x, p_idx, cfg):
    """ResidualSample at a single point of the ball around point p."""
    gT, gL = residual_fields(np.asarray(x, dtype=float)[None, :], p_idx, cfg)
    return ResidualSample(gT=gT[0], gL=gL[0], x=np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# Support sampling and the weighted residual norm

def annulus_points(cfg, p_idx, n_radial, n_angular, rng=None):
    """Deterministic product sampling of the residual support shell."""
    from .analysis import fibonacci_sphere

    L = cfg.L
    radii = np.linspace(L / 8, L / 4, n_radial)
    dirs = fibonacci_sphere(n_angular)
    pts = cfg.points[p_idx] + radii[:, None, None] * dirs[None, :, :]
    return pts.reshape(-1, 3), radii, dirs


def gstar_norm(cfg, n_radial=8, n_angular=128, quad_radial=8, quad_angular=64):
    """The weighted residual norm: sup |Phi|^-2 |<sh, g>| plus the cubed
    integral of |Phi|^-1 |[sh, g]| over the support shells.

    Returns (total, sup_term, integral_term).  The weights blow up if the
    Higgs norm vanishes on the support shell, which happens whenever
    r_p L is small; the sampled value is then resolution-dependent.
    """
    sup_term = 0.0
    integral = 0.0
    nodes, wts = np.polynomial.legendre.leggauss(quad_radial)
    lo, hi = cfg.L / 8, cfg.L / 4
    q_radii = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    q_w = 0.5 * (hi - lo) * wts
    from .analysis import fibonacci_sphere

    q_dirs = fibonacci_sphere(quad_angular)
    for p_idx in range(cfg.N):
        pts, _, _ = annulus_points(cfg, p_idx, n_radial, n_angular)
        gT, gL = residual_fields(pts, p_idx, cfg)
        xh = pts - cfg.points[p_idx]
        xh /= np.linalg.norm(xh, axis=1)[:, None]
        phi_n = higgs_norm(pts, cfg)
        long_part = np.abs(np.einsum("bk,bmk->bm", xh, gL)).max(axis=1)
        with np.errstate(divide="ignore"):
            sup_term = max(sup_term, float(np.max(long_part / phi_n**2)))

        qpts = cfg.points[p_idx] + q_radii[:, None, None] * q_dirs[None, :, :]
        qflat = qpts.reshape(-1, 3)
        gTq, _ = residual_fields(qflat, p_idx, cfg)
        phiq = higgs_norm(qflat, cfg)
        trans = np.sqrt(np.sum(gTq * gTq, axis=(1, 2)))
        # |[sh, gT]| = |gT| for transverse parts in su(2).
        dens = (trans / phiq) ** 3
        dens = dens.reshape(quad_radial, quad_angular)
        shell = np.sum(q_w * q_radii**2 * dens.sum(axis=1) * (4.0 * np.pi / quad_angular))
        integral += float(shell)
    return sup_term + integral ** (1.0 / 3.0), sup_term, integral ** (1.0 / 3.0)


def residual_report(cfg, n_radial=8, n_angular=128):
    """Summary of the residual over every support shell (JSON-friendly)."""
    max_gT = 0.0
    max_gL = 0.0
    max_long = 0.0
    per_annulus = []
    for p_idx in range(cfg.N):
        pts, _, _ = annulus_points(cfg, p_idx, n_radial, n_angular)
        gT, gL = residual_fields(pts, p_idx, cfg)
        xh = pts - cfg.points[p_idx]
        xh /= np.linalg.norm(xh, axis=1)[:, None]
        nT = float(np.sqrt(np.sum(gT * gT, axis=(1, 2))).max())
        nL = float(np.sqrt(np.sum(gL * gL, axis=(1, 2))).max())
        nlong = float(np.abs(np.einsum("bk,bmk->bm", xh, gL)).max())
        per_annulus.append(
            {"point": p_idx, "max_gT": nT, "max_gL": nL, "max_inner_sigma_g": nlong}
        )
        max_gT = max(max_gT, nT)
        max_gL = max(max_gL, nL)
        max_long = max(max_long, nlong)
    total, sup_term, int_term = gstar_norm(cfg)
    return {
        "max_gT": max_gT,
        "max_gL": max_gL,
        "max_inner_sigma_g": max_long,
        "gstar": total,
        "gstar_sup_term": sup_term,
        "gstar_integral_term": int_term,
        "per_annulus": per_annulus,
    }
