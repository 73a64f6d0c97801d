"""Closed-form hedgehog monopole pairs.

Two exact families: the smooth core solution with Higgs profile
r*coth(r|x-p|) - 1/|x-p| (finite everywhere, single non-degenerate zero at
the center) and the singular abelian pair with profile r - 1/|x-p|.  Both
are stored as coefficient tables relative to the product connection.
"""

from dataclasses import dataclass

import numpy as np

from .su2 import EPS

# Below this argument the direct profile formulas cancel catastrophically;
# the series error there is < 1e-18.
SERIES_CUTOFF = 1e-3
# Above this argument 1/sinh underflows safely via 2*exp(-s).
LARGE_CUTOFF = 350.0


class SingularEvaluationError(ValueError):
    """Field evaluated at a point where it is not defined."""


@dataclass(frozen=True)
class ScaledMonopole:
    """A smooth core placed at `center` with asymptotic Higgs residue `scale`."""

    center: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")


@dataclass
class FieldSample:
    """Connection coefficients (relative to the product connection) and Higgs value."""

    a: np.ndarray  # (3, 3), entry [j, k] on dx_j (x) sigma_k/2
    phi: np.ndarray  # (3,)


def coth_minus_inv(s):
    """coth(s) - 1/s, stable for all s >= 0 (vanishes like s/3 at 0)."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = s < SERIES_CUTOFF
    z = s[small]
    out[small] = z / 3.0 - z**3 / 45.0 + 2.0 * z**5 / 945.0
    z = s[~small]
    out[~small] = 1.0 / np.tanh(z) - 1.0 / z
    return out if out.ndim else float(out)


def inv_minus_csch(s):
    """1/s - 1/sinh(s), stable for all s >= 0 (vanishes like s/6 at 0)."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = s < SERIES_CUTOFF
    large = s > LARGE_CUTOFF
    mid = ~small & ~large
    z = s[small]
    out[small] = z / 6.0 - 7.0 * z**3 / 360.0 + 31.0 * z**5 / 15120.0
    z = s[mid]
    out[mid] = 1.0 / z - 1.0 / np.sinh(z)
    z = s[large]
    out[large] = 1.0 / z - 2.0 * np.exp(-z)
    return out if out.ndim else float(out)


def _hedgehog_form(xhat, coeff):
    """coeff * eps_{ijk} xhat_i on dx_j sigma_k/2, batched over leading axes."""
    return np.asarray(coeff)[..., None, None] * np.einsum(
        "ijk,...i->...jk", EPS, xhat
    )


def ps_pair_batch(x, mono):
    """Smooth-core pair at points x (..., 3).  Returns (a, phi) tables."""
    w = np.asarray(x, dtype=float) - mono.center
    d = np.linalg.norm(w, axis=-1)
    r = mono.scale
    safe = np.where(d > 0, d, 1.0)
    xhat = w / safe[..., None]
    s = r * d
    higgs = r * coth_minus_inv(s)
    conn = r * inv_minus_csch(s)
    # Removable singularity: both profiles vanish linearly at the center.
    zero = d == 0
    a = _hedgehog_form(xhat, np.where(zero, 0.0, conn))
    phi = np.where(zero, 0.0, higgs)[..., None] * xhat
    return a, phi


def ps_pair(x, mono):
    """Smooth-core pair at a single point (the center is allowed)."""
    a, phi = ps_pair_batch(np.asarray(x, dtype=float), mono)
    return FieldSample(a=a, phi=phi)


def dirac_pair_batch(x, p, r_res):
    """Abelian pair at points x (..., 3); raises at the center."""
    w = np.asarray(x, dtype=float) - np.asarray(p, dtype=float)
    d = np.linalg.norm(w, axis=-1)
    if np.any(d == 0):
        raise SingularEvaluationError("abelian pair evaluated at its center")
    xhat = w / d[..., None]
    a = _hedgehog_form(xhat, 1.0 / d)
    phi = (r_res - 1.0 / d)[..., None] * xhat
    return a, phi


def dirac_pair(x, p, r_res=1.0):
    a, phi = dirac_pair_batch(np.asarray(x, dtype=float), p, r_res)
    return FieldSample(a=a, phi=phi)


def sigma_hat(x, p):
    """Unit hedgehog direction (x-p)/|x-p| as an algebra element."""
    w = np.asarray(x, dtype=float) - np.asarray(p, dtype=float)
    d = np.linalg.norm(w, axis=-1)
    if np.any(d == 0):
        raise SingularEvaluationError("sigma_hat undefined at the center")
    return w / d[..., None]


def ps_higgs_norm(d, r=1.0):
    """|Higgs| of the smooth core at distance d from the center."""
    return r * coth_minus_inv(r * np.asarray(d, dtype=float))


def ps_evaluator(mono):
    """Pair evaluator x -> (a, phi) for finite-difference work."""

    def ev(x):
        return ps_pair_batch(x, mono)

    return ev


def dirac_evaluator(p, r_res=1.0):
    def ev(x):
        return dirac_pair_batch(x, p, r_res)

    return ev
