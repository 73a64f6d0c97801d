import numpy as np
import pytest

from magbag.glued import ball_evaluator
from magbag.monopole import ScaledMonopole, dirac_evaluator, ps_evaluator
from magbag.operators import (
    adjointness_gap,
    apply_D,
    apply_D_dagger,
    deformation_identity,
    fd_curvature,
    hash_bilinear,
    weitzenbock_defect,
)
from magbag.su2 import bracket, form_norm, wedge_dual

ORIGIN = ScaledMonopole(center=np.zeros(3), scale=1.0)


def constant_pair(alpha, eta):
    alpha = np.asarray(alpha, dtype=float)
    eta = np.asarray(eta, dtype=float)

    def ev(pts):
        pts = np.asarray(pts, dtype=float)
        shp = pts.shape[:-1]
        return np.broadcast_to(alpha, (*shp, 3, 3)).copy(), np.broadcast_to(
            eta, (*shp, 3)
        ).copy()

    return ev


def flat_bg(phi3=0.8):
    def ev(pts):
        pts = np.asarray(pts, dtype=float)
        shp = pts.shape[:-1]
        phi = np.zeros((*shp, 3))
        phi[..., 2] = phi3
        return np.zeros((*shp, 3, 3)), phi

    return ev


def bump_pair(center, width, seed, power=8):
    # polynomial profile: C^{power-1}, quadrature-friendly support edge
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(3, 3))
    E = rng.normal(size=3)
    center = np.asarray(center, dtype=float)

    def ev(pts):
        pts = np.asarray(pts, dtype=float)
        t = np.sum(((pts - center) / width) ** 2, axis=-1)
        prof = np.where(t < 1.0, (1.0 - np.minimum(t, 1.0)) ** power, 0.0)
        return prof[..., None, None] * A, prof[..., None] * E

    return ev


# --- curvature ---------------------------------------------------------------

def test_curvature_constant_background():
    cur = fd_curvature(constant_pair(np.zeros((3, 3)), [0, 0, 1.0]), np.zeros((1, 3)))
    assert np.all(cur.F == 0) and np.all(cur.d_phi == 0)


def test_curvature_core_solves():
    rng = np.random.default_rng(0)
    X = rng.uniform(-3, 3, size=(30, 3))
    cur = fd_curvature(ps_evaluator(ORIGIN), X, h=1e-4)
    assert form_norm(cur.g).max() < 1e-7


def test_curvature_abelian_flux_density():
    p = np.array([0.1, 0.2, 0.3])
    x = p + np.array([0, 0, 2.0])
    cur = fd_curvature(dirac_evaluator(p, 1.0), x[None, :], h=1e-4)
    nhat = np.array([0, 0, 1.0])
    radial = np.einsum("m,mk->k", nhat, cur.star_F[0])
    assert np.dot(radial, nhat) == pytest.approx(0.25, abs=1e-7)


# --- the first-order operator ------------------------------------------------

def test_apply_D_zero_pair():
    first, second = apply_D(constant_pair(np.zeros((3, 3)), np.zeros(3)), flat_bg(), np.zeros(3))
    assert np.all(first == 0) and np.all(second == 0)


def test_adjoint_is_phi_negation():
    rng = np.random.default_rng(1)
    q = bump_pair([0.1, 0, 0], 2.0, 2)
    x = np.array([0.3, -0.2, 0.5])

    def neg_bg(pts):
        a, phi = ps_evaluator(ORIGIN)(pts)
        return a, -phi

    d1 = apply_D_dagger(q, ps_evaluator(ORIGIN), x)
    d2 = apply_D(q, neg_bg, x)
    np.testing.assert_allclose(d1[0], d2[0], atol=1e-12)
    np.testing.assert_allclose(d1[1], d2[1], atol=1e-12)


def test_flat_DDdagger_is_laplacian():
    # with vanishing background, D Ddag acts as minus the flat Laplacian
    q = bump_pair([0, 0, 0], 2.0, 3)
    bg = flat_bg(0.0)
    x = np.array([0.2, 0.3, -0.1])
    h = 1e-3

    def ddag(pts):
        pts = np.asarray(pts, dtype=float)
        flat = pts.reshape(-1, 3)
        f = np.empty((len(flat), 3, 3))
        s = np.empty((len(flat), 3))
        for i, y in enumerate(flat):
            f[i], s[i] = apply_D_dagger(q, bg, y, h)
        shp = pts.shape[:-1]
        return f.reshape(*shp, 3, 3), s.reshape(*shp, 3)

    got = apply_D(ddag, bg, x, h)

    lap_a = np.zeros((3, 3))
    lap_e = np.zeros(3)
    a0, e0 = q(x[None, :])
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        ap, ep = q(np.stack([x + e, x - e]))
        lap_a += (ap[0] - 2 * a0[0] + ap[1]) / h**2
        lap_e += (ep[0] - 2 * e0[0] + ep[1]) / h**2
    assert np.abs(got[0] + lap_a).max() < 2e-4 * max(1.0, np.abs(lap_a).max())
    assert np.abs(got[1] + lap_e).max() < 2e-4 * max(1.0, np.abs(lap_e).max())


# --- hash ---------------------------------------------------------------------

def test_hash_symmetry_and_zero():
    rng = np.random.default_rng(4)
    qa = (rng.normal(size=(3, 3)), rng.normal(size=3))
    qb = (rng.normal(size=(3, 3)), rng.normal(size=3))
    h1 = hash_bilinear(qa, qb)
    h2 = hash_bilinear(qb, qa)
    np.testing.assert_array_equal(h1[0], h2[0])
    assert np.all(h1[1] == 0)
    hz = hash_bilinear(qa, (np.zeros((3, 3)), np.zeros(3)))
    assert np.all(hz[0] == 0)


def test_hash_diagonal_matches_quadratic_term():
    # hash(q, q) must equal *(alpha ^ alpha) - [alpha, eta]
    rng = np.random.default_rng(5)
    alpha = rng.normal(size=(3, 3))
    eta = rng.normal(size=3)
    got = hash_bilinear((alpha, eta), (alpha, eta))[0]
    want = 0.5 * wedge_dual(alpha, alpha) - bracket(alpha, eta[None, :])
    np.testing.assert_allclose(got, want, atol=1e-13)


# --- identities ----------------------------------------------------------------

def test_deformation_identity_zero_pair():
    z = constant_pair(np.zeros((3, 3)), np.zeros(3))
    d = deformation_identity(z, ps_evaluator(ORIGIN), np.array([1.0, 0.5, -0.2]))
    assert d < 1e-12


def test_deformation_identity_core_background():
    # one exact identity pins the signs of bracket, wedge, D and hash at
    # once; the stencil is linear, so the defect sits at rounding level
    # (far below the nominal O(h^2) budget) for every step size
    q = bump_pair([0.9, -0.4, 0.7], 1.5, 6)
    x = np.array([0.9, -0.4, 0.7])
    a0, e0 = q(x[None, :])
    scale = np.sqrt(np.sum(a0**2) + np.sum(e0**2))
    for h in (1e-4, 5e-5):
        d = deformation_identity(q, ps_evaluator(ORIGIN), x, h=h)
        assert d / scale < 1e-9


def test_deformation_identity_flat_shift_invariance():
    # adding a constant to eta's third component on a vanishing background
    # leaves the defect at rounding level
    bg = flat_bg(0.0)
    x = np.array([0.1, 0.2, 0.3])
    q = bump_pair(x, 1.0, 7)

    def shifted(pts):
        a, e = q(pts)
        e = e.copy()
        e[..., 2] += 0.37
        return a, e

    d1 = deformation_identity(q, bg, x, h=1e-4)
    d2 = deformation_identity(shifted, bg, x, h=1e-4)
    assert abs(d1 - d2) < 1e-10


def test_deformation_linearization():
    # first-order t-expansion of the deformed residual reproduces D
    bg = ps_evaluator(ORIGIN)
    q = bump_pair([1.1, 0.2, -0.5], 1.2, 8)
    x = np.array([1.1, 0.2, -0.5])
    D1, _ = apply_D(q, bg, x, h=1e-4)
    g0 = fd_curvature(bg, x[None, :], h=1e-4).g[0]
    t = 1e-5

    def deformed(pts):
        a, phi = bg(pts)
        al, et = q(pts)
        return a + t * al, phi + t * et

    gt = fd_curvature(deformed, x[None, :], h=1e-4).g[0]
    lin = (gt - g0) / t
    assert np.abs(lin - D1).max() < 1e-4 * max(1.0, np.abs(D1).max())


def test_weitzenbock_flat_constant_exact():
    bg = flat_bg(0.8)
    u = constant_pair(np.eye(3) * 0.3, [0.1, -0.2, 0.4])
    d = weitzenbock_defect(u, bg, np.array([0.5, 0.5, 0.5]), h=1e-4)
    assert d < 1e-9


def test_weitzenbock_core_background_order():
    u = bump_pair([1.2, 0.1, -0.3], 1.0, 9)
    x = np.array([1.2, 0.1, -0.3])
    d1 = weitzenbock_defect(u, ps_evaluator(ORIGIN), x, h=2e-4)
    d2 = weitzenbock_defect(u, ps_evaluator(ORIGIN), x, h=1e-4)
    assert d1 / d2 == pytest.approx(4.0, abs=0.9)


def test_weitzenbock_glued_background_order(cfg100):
    # residual-supported region, where the curvature term G(u) is nonzero
    i = 11
    u_dir = np.array([0.6, 0.64, 0.48])
    u_dir /= np.linalg.norm(u_dir)
    x = cfg100.points[i] + 0.17 * cfg100.L * u_dir
    u = bump_pair(x, 0.05 * cfg100.L, 10)
    bg = ball_evaluator(cfg100, i)
    d1 = weitzenbock_defect(u, bg, x, h=4e-5)
    d2 = weitzenbock_defect(u, bg, x, h=2e-5)
    assert d1 / d2 == pytest.approx(4.0, abs=1.2)


def test_adjointness_gap_flat():
    q1 = bump_pair([0.2, 0.1, -0.3], 1.2, 11)
    q2 = bump_pair([-0.3, 0.25, 0.1], 1.2, 12)
    gap, scale = adjointness_gap(q1, q2, flat_bg(), ((-2, 2), (-2, 2), (-2, 2)), n_nodes=20)
    assert gap / scale < 1e-6
    # sign flip of both pairs leaves the gap unchanged (bilinearity)
    def neg(ev):
        def out(pts):
            a, e = ev(pts)
            return -a, -e

        return out

    gap2, _ = adjointness_gap(neg(q1), neg(q2), flat_bg(), ((-2, 2), (-2, 2), (-2, 2)), n_nodes=20)
    assert abs(gap - gap2) < 1e-12 * max(1.0, scale)


def test_adjointness_gap_zero_pair():
    z = constant_pair(np.zeros((3, 3)), np.zeros(3))
    q = bump_pair([0, 0, 0], 1.0, 13)
    gap, _ = adjointness_gap(z, q, flat_bg(), ((-2, 2), (-2, 2), (-2, 2)), n_nodes=12)
    assert gap == 0.0
