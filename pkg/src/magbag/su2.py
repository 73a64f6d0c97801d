"""Coefficient-level su(2) algebra.

Algebra elements are real coefficient triples on the orthonormal basis
{sigma_k/2} (sigma_k anti-Hermitian, sigma_1 sigma_2 = -sigma_3).  In this
basis the invariant inner product is the Euclidean dot product and the
commutator is the negative cross product.  su(2)-valued 1-forms are 3x3
coefficient tables, entry [j, k] multiplying dx_j (x) sigma_k/2.

All operations broadcast over leading batch axes.
"""

import numpy as np

# Levi-Civita symbol, EPS[i, j, k] = sign of the permutation (i, j, k).
EPS = np.zeros((3, 3, 3))
EPS[0, 1, 2] = EPS[1, 2, 0] = EPS[2, 0, 1] = 1.0
EPS[0, 2, 1] = EPS[2, 1, 0] = EPS[1, 0, 2] = -1.0


def bracket(a, b):
    """Commutator [a, b]: the negative cross product of coefficient triples."""
    return -np.cross(a, b)


def inner(a, b):
    """Invariant inner product <ab>; the basis is orthonormal, so a dot."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def alg_norm(a):
    """Pointwise norm of an algebra element."""
    return np.sqrt(inner(a, a))


def form_norm(c):
    """Pointwise norm of an su(2)-valued 1-form coefficient table."""
    c = np.asarray(c)
    return np.sqrt(np.sum(c * c, axis=(-2, -1)))


def wedge_dual(a, b):
    """Hodge dual of the symmetrized wedge of two su(2)-valued 1-forms.

    Component contract: out[m] = sum_{j,l} eps_{jlm} [a_j, b_l], where a_j is
    the algebra element carried by dx_j.  Symmetric in (a, b); for a single
    form *(a ^ a) = wedge_dual(a, a) / 2.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    # cr[..., j, l, :] = [a_j, b_l]
    cr = -np.cross(a[..., :, None, :], b[..., None, :, :])
    return np.einsum("jlm,...jlk->...mk", EPS, cr)


def star_real_wedge(u, w):
    """*(u ^ w) for a real 1-form u and su(2)-valued 1-form w.

    out[m] = sum_{j,l} eps_{jlm} u_j w_l.
    """
    u = np.asarray(u)
    w = np.asarray(w)
    return np.einsum("jlm,...j,...lk->...mk", EPS, u, w)
