"""
Closed-form orthonormal Laurent polynomials of the null-odd and null-even
CMV families.

Both families are two-term linear recurrences in n with characteristic roots
lambda_+ and lambda_- (lambda_+ lambda_- = 1), so every polynomial is a
combination B_+ lambda_+^n + B_- lambda_-^n.  The combinations are symmetric
under swapping the roots, so the branch selector only matters through its
zero set, where the roots collide (band edges).

All functions accept scalars or numpy arrays for ``z``.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateRoots

__all__ = ["branch_sign", "lambda_pm", "x_hat", "chi", "tilde_variant"]

DEGENERATE_TOL = 1e-14


def _out(v):
    return complex(v) if np.ndim(v) == 0 else v


def _rho(alpha: complex) -> float:
    alpha = complex(alpha)
    if not abs(alpha) < 1.0:
        raise ValueError(f"need |alpha| < 1, got {abs(alpha)}")
    return float(np.sqrt(1.0 - abs(alpha) ** 2))


def branch_sign(z, rho: float):
    """sgn(Im(exp(-i arccos(rho)) z)) with sgn(0) = 0."""
    z = np.asarray(z, dtype=complex)
    s = np.sign(np.imag(np.exp(-1j * np.arccos(rho)) * z))
    return float(s) if s.ndim == 0 else s


def _roots(z, alpha):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("z must be nonzero")
    rho = _rho(alpha)
    d = z - 1.0 / z
    disc = d * d + 4.0 * abs(alpha) ** 2
    if np.any(np.abs(disc) <= DEGENERATE_TOL * np.maximum(1.0, np.abs(d) ** 2)):
        raise DegenerateRoots("lambda_+ == lambda_- (band edge); perturb z")
    # the polynomials are symmetric in the two roots, so where the selector
    # vanishes away from a band edge either ordering is correct
    s = branch_sign(z, rho)
    s = np.where(s == 0, 1.0, s)
    r = np.sqrt(disc)
    lp = (z + 1.0 / z - s * r) / (2.0 * rho)
    lm = (z + 1.0 / z + s * r) / (2.0 * rho)
    return z, rho, lp, lm


def lambda_pm(z, alpha: complex):
    """(lambda_+, lambda_-) = (z + 1/z -/+ sgn * sqrt((z - 1/z)^2 + 4|alpha|^2)) / (2 rho)."""
    _, _, lp, lm = _roots(z, alpha)
    return _out(lp), _out(lm)


def _combine(c_plus, lp, lm, n):
    # B_+ = (c - lambda_-)/(lambda_+ - lambda_-), B_- = (lambda_+ - c)/(lambda_+ - lambda_-)
    d = lp - lm
    return ((c_plus - lm) * lp ** n + (lp - c_plus) * lm ** n) / d


def x_hat(j: int, z, a: complex):
    """Laurent polynomial x_j(z) of the null-odd family (a, 0, a, 0, ...).

    Satisfies C x(z) = z x(z) with x_0 = 1; x_{2n}(z) = conj(x_{2n-1}(1/conj z)).
    """
    if j < 0:
        raise ValueError("index must be >= 0")
    a = complex(a)
    if j == 0:
        _rho(a)
        return _out(np.ones_like(np.asarray(z, dtype=complex)))
    if j % 2 == 0:
        zz = np.asarray(z, dtype=complex)
        return _out(np.conj(np.asarray(x_hat(j - 1, 1.0 / np.conj(zz), a))))
    n = (j + 1) // 2
    z, rho, lp, lm = _roots(z, a)
    return _out(_combine((1.0 / z - a) / rho, lp, lm, n))


def chi(j: int, z, b: complex):
    """Laurent polynomial chi_j(z) of the null-even family (0, b, 0, b, ...).

    Satisfies the row relation chi(z) C = z chi(z) with chi_0 = 1.
    """
    if j < 0:
        raise ValueError("index must be >= 0")
    b = complex(b)
    if j == 0:
        _rho(b)
        return _out(np.ones_like(np.asarray(z, dtype=complex)))
    z, rho, lp, lm = _roots(z, b)
    if j % 2 == 0:
        return _out(_combine((1.0 / z - b * z) / rho, lp, lm, j // 2))
    return _out(z * _combine((z - np.conj(b) / z) / rho, lp, lm, (j - 1) // 2))


def tilde_variant(j: int, z, alpha: complex, family: int):
    """Polynomial of the sign-flipped sequence (alpha_j -> -alpha_j)."""
    if family == 1:
        return x_hat(j, z, -complex(alpha))
    if family == 2:
        return chi(j, z, -complex(alpha))
    raise ValueError(f"family must be 1 or 2, got {family!r}")
